"""Deterministic SVG drawings of the star, the tiling and billiard traces."""

from __future__ import annotations

from typing import Iterable, Optional

from .exact_plane import CycNum
from .star_complex import build_star
from .symmetry import AffineElem, act, in_vplus, tiling_translations, translation

SCALE = 100.0


def _xy(z: complex) -> str:
    return f"{z.real * SCALE:.4f},{-z.imag * SCALE:.4f}"


def _header(half_width: float) -> list[str]:
    w = 2 * half_width * SCALE
    o = -half_width * SCALE
    return [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{w:.0f}" height="{w:.0f}" '
        f'viewBox="{o:.4f} {o:.4f} {w:.4f} {w:.4f}">',
        '<rect x="{0:.4f}" y="{0:.4f}" width="{1:.4f}" height="{1:.4f}" fill="white"/>'.format(o, w),
    ]


def _star_points(g: Optional[AffineElem] = None) -> str:
    star = build_star()
    pts = [complex(v) if g is None else complex(act(g, v)) for v in star.vertices.values()]
    return " ".join(_xy(z) for z in pts)


def _star_group(labels: bool = True) -> list[str]:
    star = build_star()
    out = [f'<polygon class="star" points="{_star_points()}" fill="#eef3fb" stroke="#224" stroke-width="1.5"/>']
    for e in star.edges:
        p, q = complex(e.p), complex(e.q)
        out.append(
            f'<line class="edge" data-label="{e.label}" x1="{p.real * SCALE:.4f}" y1="{-p.imag * SCALE:.4f}" '
            f'x2="{q.real * SCALE:.4f}" y2="{-q.imag * SCALE:.4f}" stroke="#224" stroke-width="2"/>'
        )
        if labels:
            m = 0.5 * (p + q) + 0.18 * complex(e.normal)
            out.append(
                f'<text class="edge-label" x="{m.real * SCALE:.4f}" y="{-m.imag * SCALE:.4f}" '
                f'font-size="14" text-anchor="middle" dominant-baseline="middle">{e.label}</text>'
            )
    for name, v in star.vertices.items():
        z = complex(v)
        out.append(
            f'<circle class="vertex" data-name="{name}" cx="{z.real * SCALE:.4f}" cy="{-z.imag * SCALE:.4f}" '
            f'r="3" fill="#224"/>'
        )
    out.append('<circle class="center" cx="0.0000" cy="0.0000" r="4" fill="none" stroke="#c22" stroke-width="1.5"/>')
    return out


def render_star() -> str:
    return "\n".join(_header(2.2) + _star_group() + ["</svg>"]) + "\n"


def _fmt_elem(g: AffineElem) -> str:
    return (
        f'data-rot="{g.rot}" data-reflect="{int(g.reflect)}" '
        f'data-trans="{" ".join(str(c) for c in g.trans.coeffs)}"'
    )


def tiling_copies(window: float) -> list[AffineElem]:
    """Recorded group elements g whose copies g(K*) meet the disk of radius ``window``."""
    reach = window + 2.0  # star circumradius is sqrt3 < 2
    return [translation(v) for v in tiling_translations(reach) if abs(complex(v)) <= reach]


def render_tiling(window: float = 5.0) -> str:
    out = _header(window)
    for g in tiling_copies(window):
        out.append(f'<g class="copy" {_fmt_elem(g)}>')
        out.append(
            f'<polygon points="{_star_points(g)}" fill="none" stroke="#557" stroke-width="0.8"/>'
        )
        out.append("</g>")
    n = int(window / 0.8) + 2
    for a in range(-2 * n, 2 * n + 1):
        for b in range(-2 * n, 2 * n + 1):
            v = CycNum(a, 0, b, 0)
            z = complex(v)
            if abs(z.real) <= window and abs(z.imag) <= window and in_vplus(v):
                out.append(
                    f'<circle class="vplus" data-coeffs="{a} 0 {b} 0" cx="{z.real * SCALE:.4f}" '
                    f'cy="{-z.imag * SCALE:.4f}" r="2" fill="#c22"/>'
                )
    out.append("</svg>")
    return "\n".join(out) + "\n"


def render_trace(polyline: Iterable[complex], events: Iterable = ()) -> str:
    out = _header(2.2) + _star_group(labels=True)
    pts = list(polyline)
    if pts:
        out.append(
            f'<polyline class="trace" points="{" ".join(_xy(complex(z)) for z in pts)}" '
            'fill="none" stroke="#c60" stroke-width="1.2"/>'
        )
    for ev in events:
        z = ev.location
        colour = {"edge-reflection": "#c60", "vertex-reversal": "#a0a", "center-hit": "#0a0"}[ev.kind]
        out.append(
            f'<circle class="event" data-kind="{ev.kind}" cx="{z.real * SCALE:.4f}" '
            f'cy="{-z.imag * SCALE:.4f}" r="2.5" fill="{colour}"/>'
        )
    out.append("</svg>")
    return "\n".join(out) + "\n"
