"""Flat geometry of the curve eta**2/2 + xi**6 = 1 and billiards in a star hexagon."""

from __future__ import annotations

__version__ = "0.1.0"
