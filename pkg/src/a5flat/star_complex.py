"""The closed stellated hexagon, its edge identifications and triangulations.

Geometry is exact in Z[zeta] with the side length normalised to 1.  Hexagon
vertices are ``H_k = omega**k`` and star tips ``T_k = sqrt3 * zeta**(2k+1)``.
The boundary is walked counterclockwise as

    H_0, T_0, H_1, T_1, ..., H_5, T_5

and the edge leaving ``H_k`` is ``A_k = [H_k, T_k]`` while ``B_k = [T_k, H_{k+1}]``.
Every edge lies on one of the six lines at distance sqrt3/2 from the centre.

Edge pairs are given by the reflections ``S_m(z) = omega**(2m+1) * conj(z)``,
which send ``B_{m-1}`` onto ``A_{m+1}``.
"""

from __future__ import annotations

import math
from collections import defaultdict
from dataclasses import dataclass, field
from typing import Iterable, Optional, Union

from .exact_plane import (
    SQRT3,
    ZERO,
    CycNum,
    SurdReal,
    lex_key,
    zeta_power,
)

__all__ = [
    "DomainError",
    "GeometryError",
    "StarEdge",
    "StarHexagon",
    "EdgePair",
    "CanonicalPoint",
    "Triangulation",
    "build_star",
    "edge_pairs",
    "pair_reflection",
    "in_star",
    "on_boundary",
    "rho",
    "quotient_triangulation",
    "sphere_triangulation",
    "double_cover_triangulation",
    "barycentric_refinement",
    "genus_from_counts",
    "dump_star",
    "load_star",
    "dump_triangulation",
    "load_triangulation",
]

PlanePoint = Union[CycNum, complex]

HALF_SQRT3 = SurdReal(0, 1)  # the value sqrt3/2
FLOAT_TOL = 1e-12

# Table order of the six pairs: the reflection index m of each named pair
PAIR_NAMES = {0: "a", 1: "b", 2: "d", 3: "c", 4: "e", 5: "f"}


class DomainError(ValueError):
    pass


class GeometryError(RuntimeError):
    pass


def _omega_pow(k: int) -> CycNum:
    return zeta_power(2 * k)


def pair_reflection(m: int):
    """The reflection S_m: z -> omega**(2m+1) * conj(z), exact or float."""
    rot = zeta_power(2 * (2 * m + 1))
    rot_c = complex(rot)

    def s(z):
        if isinstance(z, CycNum):
            return rot * z.conj()
        return rot_c * complex(z).conjugate()

    return s


@dataclass(frozen=True)
class StarEdge:
    index: int  # position in boundary order, 0..11
    name: str  # A_k or B_k
    label: int  # 1..6 or -1..-6
    start: str
    end: str
    p: CycNum
    q: CycNum
    normal: CycNum  # outward unit normal, a power of zeta

    @property
    def direction(self) -> CycNum:
        return self.q - self.p

    @property
    def midpoint(self) -> complex:
        return 0.5 * (complex(self.p) + complex(self.q))


@dataclass(frozen=True)
class StarHexagon:
    vertices: dict  # name -> CycNum, boundary order
    edges: tuple  # StarEdge in boundary order
    center: CycNum = ZERO

    def edge(self, key: Union[int, str]) -> StarEdge:
        """Look an edge up by label (int) or by name ('A0', 'B3', ...)."""
        for e in self.edges:
            if (isinstance(key, int) and e.label == key) or e.name == key:
                return e
        raise KeyError(key)

    def vertex_name(self, z: CycNum) -> Optional[str]:
        for name, v in self.vertices.items():
            if v == z:
                return name
        return None

    @property
    def edge_lines(self) -> list[CycNum]:
        """The six distinct outward normals of the edge lines."""
        out = []
        for e in self.edges:
            if e.normal not in out:
                out.append(e.normal)
        return out


def _label_for(index: int) -> int:
    return index + 1 if index < 6 else -(index - 5)


_STAR: Optional[StarHexagon] = None


def build_star() -> StarHexagon:
    """Construct cl(K*) exactly.  The result is cached (it is immutable)."""
    global _STAR
    if _STAR is not None:
        return _STAR
    verts: dict[str, CycNum] = {}
    for k in range(6):
        verts[f"H{k}"] = _omega_pow(k)
        verts[f"T{k}"] = SQRT3 * zeta_power(2 * k + 1)
    edges = []
    for k in range(6):
        a_idx, b_idx = 2 * k, 2 * k + 1
        edges.append(
            StarEdge(a_idx, f"A{k}", _label_for(a_idx), f"H{k}", f"T{k}",
                     verts[f"H{k}"], verts[f"T{k}"], zeta_power(2 * k - 1))
        )
        nxt = f"H{(k + 1) % 6}"
        edges.append(
            StarEdge(b_idx, f"B{k}", _label_for(b_idx), f"T{k}", nxt,
                     verts[f"T{k}"], verts[nxt], zeta_power(2 * k + 3))
        )
    _STAR = StarHexagon(vertices=verts, edges=tuple(edges))
    return _STAR


# ---------------------------------------------------------------------------
# point location


def _support(n: CycNum, x: PlanePoint):
    """Re(conj(n) x) minus sqrt3/2, exact sign or float value."""
    if isinstance(x, CycNum):
        return ((n.conj() * x).real - HALF_SQRT3).sign()
    return (complex(n).conjugate() * complex(x)).real - math.sqrt(3.0) / 2


_TRIANGLES = (
    tuple(zeta_power(k) for k in (1, 5, 9)),
    tuple(zeta_power(k) for k in (3, 7, 11)),
)


def in_star(x: PlanePoint, tol: float = FLOAT_TOL) -> bool:
    """Closed containment in cl(K*), the union of two big triangles."""
    for tri in _TRIANGLES:
        if isinstance(x, CycNum):
            if all(_support(n, x) <= 0 for n in tri):
                return True
        elif all(_support(n, x) <= tol for n in tri):
            return True
    return False


def _on_segment(x: PlanePoint, e: StarEdge, tol: float) -> bool:
    if isinstance(x, CycNum):
        if _support(e.normal, x) != 0:
            return False
        d = e.direction
        t_num = ((x - e.p) * d.conj()).real  # |d| = 1 so this is the parameter
        return t_num.sign() >= 0 and (t_num - SurdReal(2, 0)).sign() <= 0
    if abs(_support(e.normal, x)) > tol:
        return False
    p, q = complex(e.p), complex(e.q)
    t = ((complex(x) - p) * (q - p).conjugate()).real
    return -tol <= t <= 1 + tol


def on_boundary(x: PlanePoint, tol: float = FLOAT_TOL) -> list[StarEdge]:
    """Closed edges of the star containing x (two at a vertex)."""
    return [e for e in build_star().edges if _on_segment(x, e, tol)]


# ---------------------------------------------------------------------------
# edge pairs and the identification map


@dataclass(frozen=True)
class EdgePair:
    name: str
    m: int  # the pairing reflection is S_m
    edges: tuple  # (edge on which S_m starts, its image)

    @property
    def labels(self) -> tuple[int, int]:
        return (self.edges[0].label, self.edges[1].label)

    @property
    def edge_names(self) -> frozenset:
        return frozenset(e.name for e in self.edges)


def _same_segment(s1: tuple, s2: tuple) -> bool:
    return set(s1) == set(s2)


_PAIRS: Optional[tuple] = None


def edge_pairs(star: Optional[StarHexagon] = None, labels: Optional[dict] = None) -> tuple:
    """The six unordered pairs of edges identified by the reflections S_m.

    ``labels`` optionally overrides edge labels (name -> label); used to
    exercise the failure path of the verification suite.
    """
    global _PAIRS
    star = star or build_star()
    if _PAIRS is not None and labels is None and star is build_star():
        return _PAIRS
    out = []
    by_name = {e.name: e for e in star.edges}
    if labels:
        by_name = {
            n: StarEdge(e.index, e.name, labels.get(n, e.label), e.start, e.end, e.p, e.q, e.normal)
            for n, e in by_name.items()
        }
    used: set = set()
    for m in range(6):
        s = pair_reflection(m)
        src = by_name[f"B{(m - 1) % 6}"]
        img = (s(src.p), s(src.q))
        match = [e for e in by_name.values() if _same_segment(img, (e.p, e.q))]
        if len(match) != 1:
            raise GeometryError(f"S_{m} does not map {src.name} onto an edge")
        tgt = match[0]
        if src.name in used or tgt.name in used:
            raise GeometryError("edge pairing is not a partition")
        used |= {src.name, tgt.name}
        out.append(EdgePair(PAIR_NAMES[m], m, (src, tgt)))
    if len(used) != 12:
        raise GeometryError("some edge is not paired")
    out.sort(key=lambda p: p.name)
    result = tuple(out)
    if labels is None and star is build_star():
        _PAIRS = result
    return result


def pair_of_edge(name: str) -> EdgePair:
    for p in edge_pairs():
        if name in p.edge_names:
            return p
    raise KeyError(name)


VERTEX_CLASSES = {
    "hexagon": tuple(f"H{k}" for k in range(6)),
    "tips-even": ("T0", "T2", "T4"),
    "tips-odd": ("T1", "T3", "T5"),
}


def vertex_class(name: str) -> str:
    for cls, members in VERTEX_CLASSES.items():
        if name in members:
            return cls
    raise KeyError(name)


@dataclass(frozen=True)
class CanonicalPoint:
    rep: PlanePoint
    kind: str  # interior | edge | vertex | center
    class_id: Optional[str] = None

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, CanonicalPoint):
            return NotImplemented
        if self.kind != other.kind or self.class_id != other.class_id:
            return False
        if isinstance(self.rep, CycNum) and isinstance(other.rep, CycNum):
            return self.rep == other.rep
        return abs(complex(self.rep) - complex(other.rep)) <= 1e-12

    def __hash__(self) -> int:
        if isinstance(self.rep, CycNum):
            return hash((self.kind, self.class_id, self.rep))
        return hash((self.kind, self.class_id))


def _lex_min(points: Iterable[PlanePoint]) -> PlanePoint:
    pts = list(points)
    if all(isinstance(p, CycNum) for p in pts):
        return min(pts, key=lex_key)
    return min(pts, key=lambda z: (round(complex(z).real, 12), round(complex(z).imag, 12)))


def rho(p: PlanePoint, tol: float = FLOAT_TOL) -> CanonicalPoint:
    """Identification map onto canonical class representatives."""
    if not isinstance(p, CycNum):
        p = complex(p)
    if not in_star(p, tol):
        raise DomainError(f"{p} is outside the closed star")
    star = build_star()
    if (isinstance(p, CycNum) and p == ZERO) or (not isinstance(p, CycNum) and abs(p) <= tol):
        return CanonicalPoint(ZERO if isinstance(p, CycNum) else 0j, "center")
    edges = on_boundary(p, tol)
    if not edges:
        return CanonicalPoint(p, "interior")
    if len(edges) >= 2:
        ends = {edges[0].start, edges[0].end} & {edges[1].start, edges[1].end}
        (vname,) = ends
        cls = vertex_class(vname)
        members = [star.vertices[n] for n in VERTEX_CLASSES[cls]]
        rep = _lex_min(members)
        return CanonicalPoint(rep if isinstance(p, CycNum) else complex(rep), "vertex", cls)
    pair = pair_of_edge(edges[0].name)
    image = pair_reflection(pair.m)(p)
    # S_m is an involution, so it maps either member onto the other
    return CanonicalPoint(_lex_min([p, image]), "edge", pair.name)


# ---------------------------------------------------------------------------
# triangulations


@dataclass(frozen=True)
class Triangulation:
    """Incidence lists: edges id -> (v, w), faces id -> (edge ids, vertex ids).

    Vertex ids listed in ``punctures`` may appear in edges and faces but are
    not vertices of the complex (they have been removed).  Quotients keep
    the complex they were glued from in ``gluing`` as (source, vertex map,
    edge map), so that refinement can happen before the gluing.
    """

    name: str
    vertices: tuple
    edges: dict
    faces: dict
    punctures: tuple = ()
    gluing: Optional[tuple] = field(default=None, compare=False, repr=False)

    def __post_init__(self) -> None:
        known = set(self.vertices) | set(self.punctures)
        for eid, ends in self.edges.items():
            if not set(ends) <= known:
                raise ValueError(f"edge {eid} uses an unknown vertex")
        counts = defaultdict(int)
        for fid, (eids, vids) in self.faces.items():
            if len(eids) != 3 or len(vids) != 3:
                raise ValueError(f"face {fid} is not a triangle")
            for e in eids:
                if e not in self.edges:
                    raise ValueError(f"face {fid} uses unknown edge {e}")
                counts[e] += 1
        for e, n in counts.items():
            if n > 2:
                raise ValueError(f"edge {e} bounds {n} faces")

    @property
    def counts(self) -> tuple[int, int, int]:
        return (len(self.vertices), len(self.edges), len(self.faces))

    @property
    def euler(self) -> int:
        V, E, F = self.counts
        return V - E + F

    def faces_of_edge(self) -> dict:
        out = defaultdict(list)
        for fid, (eids, _) in self.faces.items():
            for e in eids:
                out[e].append(fid)
        return dict(out)

    def is_closed_surface(self) -> bool:
        """Every edge bounds two faces and every vertex link is one cycle."""
        if self.punctures:
            return False
        fe = self.faces_of_edge()
        if set(fe) != set(self.edges) or any(len(v) != 2 for v in fe.values()):
            return False
        for v in self.vertices:
            # faces around v, adjacent across edges that contain v
            around = [f for f, (_, vids) in self.faces.items() if v in vids]
            if not around:
                return False
            edges_at = {e for e, ends in self.edges.items() if v in ends}
            adj = defaultdict(set)
            for e in edges_at:
                fs = fe[e]
                adj[fs[0]].add(fs[1])
                adj[fs[1]].add(fs[0])
            seen, stack = {around[0]}, [around[0]]
            while stack:
                f = stack.pop()
                for g in adj[f]:
                    if g not in seen:
                        seen.add(g)
                        stack.append(g)
            if seen != set(around):
                return False
        return True


def genus_from_counts(V: int, E: int, F: int) -> int:
    """Genus (2 - chi)/2 of a closed orientable surface with these counts."""
    chi = V - E + F
    if chi % 2:
        raise ValueError(f"Euler characteristic {chi} is odd; not a closed orientable surface")
    return (2 - chi) // 2


def _base_complex() -> tuple[list, dict, dict]:
    """Twelve triangles of the star: six tips and six around the centre."""
    star = build_star()
    verts = list(star.vertices)
    edges: dict[str, tuple] = {}
    faces: dict[str, tuple] = {}
    for e in star.edges:
        edges[e.name] = (e.start, e.end)
    for k in range(6):
        nxt = (k + 1) % 6
        edges[f"rim{k}"] = (f"H{k}", f"H{nxt}")
        edges[f"spoke{k}"] = ("O", f"H{k}")
    for k in range(6):
        nxt = (k + 1) % 6
        faces[f"tip{k}"] = ((f"A{k}", f"B{k}", f"rim{k}"), (f"H{k}", f"T{k}", f"H{nxt}"))
        faces[f"core{k}"] = ((f"spoke{k}", f"rim{k}", f"spoke{nxt}"), ("O", f"H{k}", f"H{nxt}"))
    return verts, edges, faces


def quotient_triangulation(level: str = "base") -> Triangulation:
    """Triangulation of the star at one of three stages.

    ``base``        K* minus its centre: 12 triangles with the centre removed.
    ``identified``  boundary edges glued in pairs and vertices in classes.
    ``orbit``       the closed quotient surface, with the centre restored as
                    its fourth vertex.
    """
    verts, edges, faces = _base_complex()
    if level == "base":
        return Triangulation("base", tuple(verts), edges, faces, punctures=("O",))
    if level not in ("identified", "orbit"):
        raise ValueError(f"unknown level {level!r}")
    vmap = {v: vertex_class(v) for v in verts}
    vmap["O"] = "O"
    emap = {name: f"pair-{pair_of_edge(name).name}" if name[0] in "AB" else name for name in edges}
    base = Triangulation("base", tuple(verts), edges, faces, punctures=("O",))
    classes = tuple(VERTEX_CLASSES)
    if level == "identified":
        return _glue(base, "identified", classes, vmap, emap, punctures=("O",))
    return _glue(base, "orbit", classes + ("O",), vmap, emap)


def _glue(src: Triangulation, name: str, vertices: tuple, vmap: dict, emap: dict, punctures=()) -> Triangulation:
    """Image of ``src`` under a vertex map and an edge map (id -> class id)."""
    q_edges: dict = {}
    for eid, (v, w) in src.edges.items():
        q_edges.setdefault(emap[eid], (vmap[v], vmap[w]))
    q_faces = {
        fid: (tuple(emap[e] for e in eids), tuple(vmap[v] for v in vids))
        for fid, (eids, vids) in src.faces.items()
    }
    return Triangulation(name, vertices, q_edges, q_faces, punctures, gluing=(src, vmap, emap))


def _half_index(src: Triangulation, vmap: dict, emap: dict, eid: str, side: int, reps: dict) -> int:
    """Which half of the class representative the half ``eid/side`` is glued to."""
    rep = reps[emap[eid]]
    if rep == eid:
        return side
    a, b = (vmap[v] for v in src.edges[eid])
    ra, rb = (vmap[v] for v in src.edges[rep])
    if a == b:
        raise ValueError(f"cannot orient the glued loop edge {eid}")
    if (a, b) == (ra, rb):
        return side
    if (a, b) == (rb, ra):
        return 1 - side
    raise ValueError(f"edge {eid} is glued to {rep} with mismatched ends")


def sphere_triangulation() -> Triangulation:
    """The xi-sphere as a bipyramid over the six branch points."""
    verts = ("0",) + tuple(f"w{k}" for k in range(6)) + ("inf",)
    edges, faces = {}, {}
    for k in range(6):
        nxt = (k + 1) % 6
        edges[f"rim{k}"] = (f"w{k}", f"w{nxt}")
        edges[f"in{k}"] = ("0", f"w{k}")
        edges[f"out{k}"] = ("inf", f"w{k}")
    for k in range(6):
        nxt = (k + 1) % 6
        faces[f"lo{k}"] = ((f"in{k}", f"rim{k}", f"in{nxt}"), ("0", f"w{k}", f"w{nxt}"))
        faces[f"hi{k}"] = ((f"out{k}", f"rim{k}", f"out{nxt}"), ("inf", f"w{k}", f"w{nxt}"))
    return Triangulation("sphere", verts, edges, faces)


def double_cover_triangulation() -> Triangulation:
    """Two sheets over the bipyramid, branched at its six rim vertices.

    Sheets are exchanged across the rim edges w0w1, w2w3, w4w5; this cut
    cocycle has odd sum around each branch vertex and even sum around 0 and
    infinity.
    """
    base = sphere_triangulation()
    branch = {f"w{k}" for k in range(6)}
    cut = {"rim0": 1, "rim2": 1, "rim4": 1}

    def lift_v(v, s):
        return v if v in branch else f"{v}.{s}"

    verts = []
    for v in base.vertices:
        verts.extend([v] if v in branch else [lift_v(v, 0), lift_v(v, 1)])
    edges, faces = {}, {}
    for eid, (v, w) in base.edges.items():
        for s in (0, 1):
            edges[f"{eid}.{s}"] = (lift_v(v, s), lift_v(w, s))
    for fid, (eids, vids) in base.faces.items():
        for s in (0, 1):
            lifted = []
            for e in eids:
                # faces hi* see the edge from the other side; shift by the cut
                shift = cut.get(e, 0) if fid.startswith("hi") else 0
                lifted.append(f"{e}.{(s + shift) % 2}")
            faces[f"{fid}.{s}"] = (tuple(lifted), tuple(lift_v(v, s) for v in vids))
    return Triangulation("double-cover", tuple(verts), edges, faces)


def barycentric_refinement(tri: Triangulation) -> Triangulation:
    """First barycentric subdivision, keeping punctures punctured.

    A glued complex is refined upstairs and glued again, since its faces
    may repeat a vertex.
    """
    if tri.gluing is not None:
        src, vmap, emap = tri.gluing
        fine = barycentric_refinement(src)
        reps: dict = {}
        for eid in src.edges:
            reps.setdefault(emap[eid], eid)
        f_vmap = {v: vmap[v] for v in src.vertices + src.punctures}
        f_vmap.update({f"m[{e}]": f"m[{emap[e]}]" for e in src.edges})
        f_vmap.update({f"c[{f}]": f"c[{f}]" for f in src.faces})
        f_emap = {e: e for e in fine.edges}
        for e in src.edges:
            for side in (0, 1):
                f_emap[f"{e}/{side}"] = f"{emap[e]}/{_half_index(src, vmap, emap, e, side, reps)}"
        verts = tuple(tri.vertices) + tuple(dict.fromkeys(f"m[{emap[e]}]" for e in src.edges))
        verts += tuple(f"c[{f}]" for f in src.faces)
        return _glue(fine, f"sd({tri.name})", verts, f_vmap, f_emap, tri.punctures)
    verts = list(tri.vertices)
    verts += [f"m[{e}]" for e in tri.edges]
    verts += [f"c[{f}]" for f in tri.faces]
    edges: dict = {}
    for e, (v, w) in tri.edges.items():
        edges[f"{e}/0"] = (v, f"m[{e}]")
        edges[f"{e}/1"] = (w, f"m[{e}]")
    faces: dict = {}
    for f, (eids, vids) in tri.faces.items():
        if len(set(vids)) != 3:
            raise ValueError(f"face {f} repeats a vertex; refine before gluing")
        c = f"c[{f}]"
        for v in vids:
            edges[f"{f}|{v}"] = (c, v)
        for e in eids:
            edges[f"{f}|m{e}"] = (c, f"m[{e}]")
        for e in eids:
            for side, v in enumerate(tri.edges[e]):
                half = f"{e}/{side}"
                faces[f"{f}|{e}/{side}"] = (
                    (half, f"{f}|{v}", f"{f}|m{e}"),
                    (v, f"m[{e}]", c),
                )
    return Triangulation(f"sd({tri.name})", tuple(verts), edges, faces, tri.punctures)


# ---------------------------------------------------------------------------
# plain-text serialisation


def _fmt(z: CycNum) -> str:
    return " ".join(str(c) for c in z.coeffs)


def dump_star(star: Optional[StarHexagon] = None) -> str:
    star = star or build_star()
    lines = ["# star-hexagon v1", f"center {_fmt(star.center)}"]
    for name, z in star.vertices.items():
        lines.append(f"vertex {name} {_fmt(z)}")
    for e in star.edges:
        lines.append(f"edge {e.name} {e.label} {e.start} {e.end} {_fmt(e.normal)}")
    return "\n".join(lines) + "\n"


def load_star(text: str) -> StarHexagon:
    verts: dict = {}
    edges = []
    center = ZERO
    for raw in text.splitlines():
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        tok = line.split()
        if tok[0] == "center":
            center = CycNum(*map(int, tok[1:5]))
        elif tok[0] == "vertex":
            verts[tok[1]] = CycNum(*map(int, tok[2:6]))
        elif tok[0] == "edge":
            name, label, a, b = tok[1], int(tok[2]), tok[3], tok[4]
            normal = CycNum(*map(int, tok[5:9]))
            edges.append(StarEdge(len(edges), name, label, a, b, verts[a], verts[b], normal))
        else:
            raise ValueError(f"unrecognised line: {raw!r}")
    return StarHexagon(vertices=verts, edges=tuple(edges), center=center)


def dump_triangulation(tri: Triangulation) -> str:
    lines = ["# triangulation v1", f"name {tri.name}"]
    lines += [f"vertex {v}" for v in tri.vertices]
    lines += [f"puncture {v}" for v in tri.punctures]
    lines += [f"edge {e} {v} {w}" for e, (v, w) in tri.edges.items()]
    lines += [f"face {f} {' '.join(es)} {' '.join(vs)}" for f, (es, vs) in tri.faces.items()]
    V, E, F = tri.counts
    lines.append(f"# counts {V} {E} {F} euler {tri.euler}")
    return "\n".join(lines) + "\n"


def load_triangulation(text: str) -> Triangulation:
    name, verts, punct, edges, faces = "", [], [], {}, {}
    for raw in text.splitlines():
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        tok = line.split()
        if tok[0] == "name":
            name = tok[1]
        elif tok[0] == "vertex":
            verts.append(tok[1])
        elif tok[0] == "puncture":
            punct.append(tok[1])
        elif tok[0] == "edge":
            edges[tok[1]] = (tok[2], tok[3])
        elif tok[0] == "face":
            faces[tok[1]] = (tuple(tok[2:5]), tuple(tok[5:8]))
        else:
            raise ValueError(f"unrecognised line: {raw!r}")
    return Triangulation(name, tuple(verts), edges, faces, tuple(punct))
