"""Billiards in the closed star, unfolding to straight lines and folding back.

Positions and directions are floats (side length 1); edge lines are the exact
lines of :mod:`a5flat.star_complex`.  A ball reflects specularly at open
edges and reverses at vertices.  Passing through the centre is allowed and
recorded as a ``center-hit`` event.

Unfolding replaces each reflection in an edge line by continuing straight
into the reflected copy of the star; the copy reached after bounces at
edges e_1, ..., e_n is g(K*) with g = s_{e_1} o ... o s_{e_n}, where
s_e(x) = -n**2 conj(x) + sqrt3 n is the reflection in the line of e.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Optional

import numpy as np

from .exact_plane import CycNum
from .star_complex import build_star, in_star, on_boundary
from .symmetry import (
    IDENTITY,
    AffineElem,
    act,
    compose,
    edge_reflection,
    inverse,
    reduce_to_fundamental,
)

__all__ = [
    "VERTEX_TOL",
    "CENTER_TOL",
    "BilliardDomainError",
    "UnfoldError",
    "SingularIncidenceError",
    "TraceFormatError",
    "BilliardState",
    "BounceEvent",
    "Trace",
    "UnfoldedLine",
    "step",
    "trace",
    "unfold",
    "fold",
    "GeodesicReport",
    "surface_geodesic_compare",
    "dump_trace",
    "load_trace",
]

VERTEX_TOL = 1e-9
CENTER_TOL = 1e-9
_HALF_SQRT3 = math.sqrt(3.0) / 2
_TINY = 1e-12


class BilliardDomainError(ValueError):
    pass


class UnfoldError(ValueError):
    """A vertex reversal is not a reflection in an edge and cannot be unfolded."""


class SingularIncidenceError(ValueError):
    """A straight line runs (numerically) through a tiling vertex."""


class TraceFormatError(ValueError):
    pass


@dataclass(frozen=True)
class _EdgeGeom:
    index: int
    label: int
    p: complex
    q: complex
    normal: complex
    exact_normal: CycNum


@dataclass(frozen=True)
class _VertexGeom:
    name: str
    z: complex


def _geometry():
    star = build_star()
    edges = tuple(
        _EdgeGeom(e.index, e.label, complex(e.p), complex(e.q), complex(e.normal), e.normal)
        for e in star.edges
    )
    verts = tuple(_VertexGeom(n, complex(z)) for n, z in star.vertices.items())
    return edges, verts


_EDGES, _VERTICES = _geometry()
_EDGE_BY_LABEL = {e.label: e for e in _EDGES}
_VERTEX_BY_NAME = {v.name: v for v in _VERTICES}


@dataclass(frozen=True)
class BilliardState:
    position: complex
    direction: complex
    time: float = 0.0
    edge: Optional[int] = None  # label of the edge the ball sits on
    vertex: Optional[str] = None  # name of the vertex the ball sits on

    def __post_init__(self) -> None:
        object.__setattr__(self, "position", complex(self.position))
        object.__setattr__(self, "direction", complex(self.direction))
        if abs(abs(self.direction) - 1.0) > 1e-12:
            raise BilliardDomainError("direction must be a unit vector")
        if not in_star(self.position, 1e-12):
            raise BilliardDomainError(f"{self.position} is outside the closed star")

    @classmethod
    def at_angle(cls, position: complex, degrees: float, time: float = 0.0) -> BilliardState:
        return cls(position, complex(math.cos(math.radians(degrees)), math.sin(math.radians(degrees))), time)

    def reversed(self) -> BilliardState:
        return replace(self, direction=-self.direction)

    def rotated(self, k: int = 1) -> BilliardState:
        w = complex(math.cos(k * math.pi / 3), math.sin(k * math.pi / 3))
        edge = None if self.edge is None else _rotate_label(self.edge, k)
        vertex = None if self.vertex is None else _rotate_vertex(self.vertex, k)
        return BilliardState(w * self.position, w * self.direction, self.time, edge, vertex)


def _rotate_label(label: int, k: int) -> int:
    idx = _EDGE_BY_LABEL[label].index
    return _EDGES[(idx + 2 * k) % 12].label


def _rotate_vertex(name: str, k: int) -> str:
    return f"{name[0]}{(int(name[1:]) + k) % 6}"


@dataclass(frozen=True)
class BounceEvent:
    kind: str  # edge-reflection | vertex-reversal | center-hit
    time: float
    location: complex
    incoming: complex
    outgoing: complex
    ident: object  # edge label, vertex name or "O"
    tolerance_sensitive: bool = False


def _boundary_of(state: BilliardState) -> tuple[set, set]:
    """Edge labels and vertex names the state is sitting on."""
    edges, verts = set(), set()
    if state.edge is not None:
        edges.add(state.edge)
    if state.vertex is not None:
        verts.add(state.vertex)
        for e in build_star().edges:
            if state.vertex in (e.start, e.end):
                edges.add(e.label)
    if not edges:
        for e in on_boundary(state.position, 1e-12):
            edges.add(e.label)
    return edges, verts


def _exit(p: complex, d: complex, skip_edges: set, skip_verts: set):
    """First boundary contact of the ray p + t d, t > 0.

    Returns (t, kind, ident, exact_distance) with kind 'edge' or 'vertex'.
    """
    best_t, best = math.inf, None
    for e in _EDGES:
        if e.label in skip_edges:
            continue
        den = (e.normal.conjugate() * d).real
        if den <= 1e-15:
            continue
        t = (_HALF_SQRT3 - (e.normal.conjugate() * p).real) / den
        if t <= _TINY:
            continue
        x = p + t * d
        s = ((x - e.p) * (e.q - e.p).conjugate()).real
        if -VERTEX_TOL <= s <= 1 + VERTEX_TOL and t < best_t:
            best_t, best = t, ("edge", e)
    if best is None:
        raise BilliardDomainError(f"ray from {p} in direction {d} leaves the star")
    # a vertex within the band along the open segment takes precedence
    for v in _VERTICES:
        if v.name in skip_verts:
            continue
        rel = v.z - p
        t = (rel * d.conjugate()).real
        if t <= VERTEX_TOL or t > best_t + VERTEX_TOL:
            continue
        dist = abs((rel * d.conjugate()).imag)
        if dist <= VERTEX_TOL and t <= best_t + VERTEX_TOL:
            if best[0] != "vertex" or t < best_t:
                best_t, best = t, ("vertex", v, dist)
    return best_t, best


def _polish_on_line(x: complex, e: _EdgeGeom) -> complex:
    """Project x onto the exact edge line (one Newton step on a linear equation)."""
    return x + (_HALF_SQRT3 - (e.normal.conjugate() * x).real) * e.normal


def step(state: BilliardState) -> tuple[BilliardState, BounceEvent]:
    """Advance to the next edge or vertex contact and apply the bounce rule.

    A segment passing within ``CENTER_TOL`` of the centre is reported through
    :func:`center_crossing`; the motion itself is unaffected.
    """
    p, d = state.position, state.direction
    on_edges, on_verts = _boundary_of(state)
    for label in on_edges:
        if not on_verts and (_EDGE_BY_LABEL[label].normal.conjugate() * d).real > 1e-12:
            raise BilliardDomainError("state on the boundary points out of the star")
    t, hit = _exit(p, d, on_edges, on_verts)
    time = state.time + t
    if hit[0] == "vertex":
        v, dist = hit[1], hit[2]
        ev = BounceEvent("vertex-reversal", time, v.z, d, -d, v.name, dist > 1e-14)
        return BilliardState(v.z, -d, time, None, v.name), ev
    e = hit[1]
    x = _polish_on_line(p + t * d, e)
    dn = (e.normal.conjugate() * d).real
    out = d - 2.0 * dn * e.normal
    out /= abs(out)
    ev = BounceEvent("edge-reflection", time, x, d, out, e.label)
    return BilliardState(x, out, time, e.label, None), ev


def center_crossing(p: complex, q: complex, tol: float = CENTER_TOL) -> Optional[float]:
    """Arc-length parameter where segment [p, q] passes within tol of 0."""
    d = q - p
    L = abs(d)
    if L == 0:
        return None
    u = d / L
    s = (-p * u.conjugate()).real
    if s <= 0 or s >= L:
        return None
    if abs(p + s * u) <= tol:
        return s
    return None


@dataclass
class Trace:
    start: BilliardState
    events: list = field(default_factory=list)
    states: list = field(default_factory=list)
    final: Optional[BilliardState] = None  # state at the end of the last segment

    @property
    def bounces(self) -> list:
        return [e for e in self.events if e.kind != "center-hit"]

    @property
    def polyline(self) -> np.ndarray:
        """Start position followed by every bounce location (empty if none)."""
        if not self.states:
            return np.zeros(0, dtype=complex)
        return np.array([self.start.position] + [s.position for s in self.states])

    @property
    def length(self) -> float:
        return (self.states[-1].time if self.states else self.start.time) - self.start.time

    @property
    def end(self) -> BilliardState:
        return self.states[-1] if self.states else self.start

    def position_at(self, t: float) -> complex:
        """Point on the billiard path at elapsed time t (from the start)."""
        prev = self.start
        for s in self.states:
            if s.time - self.start.time >= t:
                return prev.position + (t - (prev.time - self.start.time)) * prev.direction
            prev = s
        return prev.position + (t - (prev.time - self.start.time)) * prev.direction


def trace(start: BilliardState, n_events: int, until: Optional[float] = None) -> Trace:
    """Iterate :func:`step` for ``n_events`` bounces (or until elapsed ``until``)."""
    if n_events < 0:
        raise ValueError("n_events must be non-negative")
    out = Trace(start)
    state = start
    for _ in range(n_events):
        if until is not None and state.time - start.time >= until:
            break
        new, ev = step(state)
        s = center_crossing(state.position, new.position)
        if s is not None:
            out.events.append(
                BounceEvent("center-hit", state.time + s, 0j, state.direction, state.direction, "O")
            )
        out.events.append(ev)
        out.states.append(new)
        state = new
    return out


# ---------------------------------------------------------------------------
# unfolding


@dataclass
class UnfoldedLine:
    """Straight line start + s*direction, 0 <= s <= length, with the copies it crosses.

    ``pieces`` holds (g, s0, s1): the part of the line with s0 <= s <= s1
    lies in g(K*), and g^-1 of it is the corresponding billiard segment.
    """

    start: complex
    direction: complex
    length: float
    pieces: list = field(default_factory=list)

    def point(self, s: float) -> complex:
        return self.start + s * self.direction

    @property
    def crossings(self) -> int:
        return max(0, len(self.pieces) - 1)


_REFLECTIONS = {e.label: edge_reflection(e.exact_normal) for e in _EDGES}


def unfold(tr: Trace) -> UnfoldedLine:
    if any(e.kind == "vertex-reversal" for e in tr.events):
        raise UnfoldError("trace contains a vertex reversal")
    start, d = tr.start.position, tr.start.direction
    g = IDENTITY
    pieces = []
    s0 = 0.0
    for ev, st in zip(tr.bounces, tr.states):
        s1 = st.time - tr.start.time
        pieces.append((g, s0, s1))
        g = compose(g, _REFLECTIONS[ev.ident])
        s0 = s1
    line = UnfoldedLine(start, d, tr.length, pieces)
    if not pieces:
        line.pieces.append((IDENTITY, 0.0, 0.0))
    return line


def _copy_exit(g: AffineElem, w: complex, d: complex, skip: Optional[int], s_max: float):
    """Leave the copy g(K*) along w + s d; returns (s, edge label) or None."""
    best_s, best_label = math.inf, None
    for e in _EDGES:
        if e.label == skip:
            continue
        n = complex(g.linear(e.exact_normal))
        den = (n.conjugate() * d).real
        if den <= 1e-15:
            continue
        a = act(g, e.p)
        b = act(g, e.q)
        offset = (n.conjugate() * a).real
        s = (offset - (n.conjugate() * w).real) / den
        if s <= _TINY:
            continue
        x = w + s * d
        t = ((x - a) * (b - a).conjugate()).real
        if -VERTEX_TOL <= t <= 1 + VERTEX_TOL and s < best_s:
            best_s, best_label = s, e.label
    if best_label is None or best_s > s_max + VERTEX_TOL:
        return None
    return best_s, best_label


def _check_vertices(g: AffineElem, w: complex, d: complex, s_end: float) -> None:
    for v in _VERTICES:
        z = act(g, v.z)
        rel = z - w
        s = (rel * d.conjugate()).real
        if VERTEX_TOL < s <= s_end + VERTEX_TOL and abs((rel * d.conjugate()).imag) <= VERTEX_TOL:
            raise SingularIncidenceError(f"line meets the tiling vertex {z:.6g}")


def fold(line: UnfoldedLine) -> Trace:
    """Fold a straight line back into the star as a billiard trace.

    The line is followed through the tiling copies in the plane; at each
    crossing of a copy edge the frame is composed with that edge's reflection.
    """
    w0 = line.start
    if in_star(w0, 1e-12):
        g = IDENTITY
    else:
        _, g = reduce_to_fundamental(w0)
    ginv = inverse(g)
    d = line.direction
    start = BilliardState(act(ginv, w0), complex(ginv.linear(d)), 0.0)
    out = Trace(start)
    s, skip = 0.0, None
    w = w0
    while True:
        hit = _copy_exit(g, w, d, skip, line.length - s)
        s_next = line.length if hit is None else s + hit[0]
        _check_vertices(g, w, d, s_next - s)
        if hit is None:
            break
        label = hit[1]
        ginv = inverse(g)
        x_star = _polish_on_line(complex(act(ginv, line.point(s_next))), _EDGE_BY_LABEL[label])
        d_in = complex(ginv.linear(d))
        g = compose(g, _REFLECTIONS[label])
        d_out = complex(inverse(g).linear(d))
        prev = out.states[-1] if out.states else start
        c = center_crossing(prev.position, x_star)
        if c is not None:
            out.events.append(BounceEvent("center-hit", s + c, 0j, d_in, d_in, "O"))
        out.events.append(BounceEvent("edge-reflection", s_next, x_star, d_in, d_out, label))
        out.states.append(BilliardState(x_star, d_out / abs(d_out), s_next, label))
        s, w, skip = s_next, line.point(s_next), label
    ginv = inverse(g)
    out.final = BilliardState(complex(act(ginv, line.point(line.length))), complex(ginv.linear(d)), line.length)
    return out


# ---------------------------------------------------------------------------
# geodesics on the surface versus billiards


@dataclass
class GeodesicReport:
    line_deviation: float  # developed flow versus the straight line
    billiard_deviation: float  # folded line versus the direct billiard trace
    t_reached: float
    incomplete_at: Optional[float] = None
    branch_point: Optional[complex] = None
    developed: Optional[np.ndarray] = None
    times: Optional[np.ndarray] = None
    escaped: bool = False


def surface_geodesic_compare(
    start,
    alpha: complex,
    t_end: float,
    tol: float = 1e-9,
    stride: int = 1,
) -> GeodesicReport:
    """Integrate the flow from ``start`` and compare with the billiard.

    Times are absolute (the star has side C).  The developed flow is checked
    against the straight line delta(start) + t alpha; the straight line is
    then folded into the star and compared with a directly simulated
    billiard from delta(start)/C in direction alpha.
    """
    from .analytic import constant_C, developed_flow, developing_map, hamiltonian_flow

    C = constant_C()
    z0 = developing_map(start)
    if not in_star(z0 / C, 0.0):
        raise BilliardDomainError("delta(start) must lie in the star")
    flow = hamiltonian_flow(start, alpha, t_end, tol=tol)
    dev = developed_flow(flow, stride=stride)
    ok = ~np.isnan(dev)
    times = flow.times
    line = z0 + times * alpha
    line_dev = float(np.max(np.abs(dev[ok] - line[ok]))) if ok.any() else 0.0
    t_reached = float(abs(times[-1]))
    billiard_dev = 0.0
    if flow.incomplete_at is None and t_reached > 0:
        L = t_reached / C
        ul = UnfoldedLine(z0 / C, complex(alpha), L)
        folded = fold(ul)
        direct = trace(BilliardState(z0 / C, complex(alpha)), 10_000, until=L)
        for s in np.linspace(0.0, L, 64):
            billiard_dev = max(billiard_dev, abs(folded.position_at(s) - direct.position_at(s)))
        billiard_dev *= C
    return GeodesicReport(
        line_deviation=line_dev,
        billiard_deviation=billiard_dev,
        t_reached=t_reached,
        incomplete_at=flow.incomplete_at,
        branch_point=flow.branch_point,
        developed=dev,
        times=times,
        escaped=flow.escaped,
    )


# ---------------------------------------------------------------------------
# trace files


def dump_trace(tr: Trace) -> str:
    st = tr.start
    lines = [
        "# billiard-trace v1",
        f"start {st.time!r} {st.position.real!r} {st.position.imag!r} "
        f"{st.direction.real!r} {st.direction.imag!r}",
    ]
    for ev in tr.events:
        lines.append(
            f"event {ev.time!r} {ev.location.real!r} {ev.location.imag!r} {ev.kind} "
            f"{ev.ident} {ev.outgoing.real!r} {ev.outgoing.imag!r}"
            + (" tolerance-sensitive" if ev.tolerance_sensitive else "")
        )
    return "\n".join(lines) + "\n"


_KINDS = ("edge-reflection", "vertex-reversal", "center-hit")


def load_trace(text: str) -> Trace:
    """Parse the format written by :func:`dump_trace`."""
    lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
    if not lines or lines[0] != "# billiard-trace v1":
        raise TraceFormatError("missing '# billiard-trace v1' header")
    start = None
    out = None
    prev_dir = None
    for n, ln in enumerate(lines[1:], start=2):
        if ln.startswith("#"):
            continue
        tok = ln.split()
        try:
            if tok[0] == "start":
                t, x, y, dx, dy = map(float, tok[1:6])
                start = BilliardState(complex(x, y), complex(dx, dy), t)
                out = Trace(start)
                prev_dir = start.direction
            elif tok[0] == "event":
                if out is None:
                    raise TraceFormatError(f"line {n}: event before start")
                t, x, y = map(float, tok[1:4])
                kind, ident = tok[4], tok[5]
                if kind not in _KINDS:
                    raise TraceFormatError(f"line {n}: unknown event kind {kind!r}")
                dx, dy = float(tok[6]), float(tok[7])
                sensitive = len(tok) > 8 and tok[8] == "tolerance-sensitive"
                ident_v = int(ident) if kind == "edge-reflection" else ident
                loc, outd = complex(x, y), complex(dx, dy)
                out.events.append(BounceEvent(kind, t, loc, prev_dir, outd, ident_v, sensitive))
                if kind != "center-hit":
                    edge = ident_v if kind == "edge-reflection" else None
                    vert = ident_v if kind == "vertex-reversal" else None
                    out.states.append(BilliardState(loc, outd, t, edge, vert))
                prev_dir = outd
            else:
                raise TraceFormatError(f"line {n}: unknown record {tok[0]!r}")
        except (IndexError, ValueError) as exc:
            if isinstance(exc, TraceFormatError):
                raise
            raise TraceFormatError(f"line {n}: {exc}") from exc
    if out is None:
        raise TraceFormatError("no start record")
    return out
