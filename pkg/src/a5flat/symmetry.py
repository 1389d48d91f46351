"""Rotation/reflection groups of the star and the affine group of the tiling.

Elements act on the plane as ``z -> omega**rot * c(z) + trans`` where ``c`` is
complex conjugation when ``reflect`` is set and ``omega = exp(i pi/3)``.
The proper elements with translations in the lattice form the group of the
tiling; improper ones occur as bookkeeping when billiard paths are unfolded.

The translation lattice is the Eisenstein lattice Z[omega] (side length 1):
it is generated by

    u_1 = 2,  u_3 = 2 omega**2,  u_5 = 2 omega**4            (hexagon directions)
    u_2 = sqrt3 zeta,  u_4 = sqrt3 zeta**5,  u_6 = sqrt3 zeta**9   (tip directions)
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from itertools import product
from typing import Iterable, Optional, Union

from .exact_plane import OMEGA, ONE, SQRT3, ZERO, CycNum, lex_key, zeta_power
from .star_complex import (
    EdgePair,
    build_star,
    edge_pairs,
    in_star,
)

__all__ = [
    "DihedralElem",
    "AffineElem",
    "IDENTITY",
    "R",
    "U",
    "LATTICE_GENERATORS",
    "G_TILDE",
    "G_VEE",
    "act",
    "compose",
    "inverse",
    "gvee_orbit",
    "gvee_orbits",
    "vertex_orbits",
    "in_vplus",
    "in_lattice",
    "lattice_coords",
    "freeness_check",
    "fixed_point",
    "reduce_to_fundamental",
    "mu",
    "nu",
    "generator_image",
    "tiling_translations",
    "rotation_lattice_closure",
    "closure_rule_holds",
    "generated_group",
    "edge_reflection",
    "translation",
    "random_affine",
    "act_on_pair",
    "VPlusError",
    "E",
    "tiling_edge_classes",
]

PlanePoint = Union[CycNum, complex]


def _rot(j: int) -> CycNum:
    return zeta_power(2 * j)


@dataclass(frozen=True)
class DihedralElem:
    """Linear isometry z -> omega**rot * c(z) of the dihedral group of order 12."""

    rot: int = 0
    reflect: bool = False

    def __post_init__(self) -> None:
        object.__setattr__(self, "rot", self.rot % 6)

    def __mul__(self, other: DihedralElem) -> DihedralElem:
        # (self o other)(z) = w^a c1(w^b c2(z)) = w^(a +- b) (c1 c2)(z)
        b = -other.rot if self.reflect else other.rot
        return DihedralElem(self.rot + b, self.reflect != other.reflect)

    def inverse(self) -> DihedralElem:
        if self.reflect:
            return self
        return DihedralElem(-self.rot, False)

    def __pow__(self, n: int) -> DihedralElem:
        out = DihedralElem()
        base = self if n >= 0 else self.inverse()
        for _ in range(abs(n)):
            out = out * base
        return out

    def __call__(self, z: PlanePoint) -> PlanePoint:
        if isinstance(z, CycNum):
            return _rot(self.rot) * (z.conj() if self.reflect else z)
        z = complex(z)
        return complex(_rot(self.rot)) * (z.conjugate() if self.reflect else z)

    def __str__(self) -> str:
        r = "e" if self.rot == 0 else ("R" if self.rot == 1 else f"R^{self.rot}")
        if self.reflect:
            return "U" if self.rot == 0 else f"{r}U"
        return r


E = DihedralElem()
R = DihedralElem(1)
U = DihedralElem(0, True)

#: the rotation group of order 6
G_TILDE = tuple(R**j for j in range(6))
#: generated by R**2 and UR: even rotations and reflections R^odd U
G_VEE = tuple([R ** (2 * j) for j in range(3)] + [R ** (2 * j + 1) * U for j in range(3)])


def generated_group(gens: Iterable[DihedralElem]) -> frozenset:
    gens = list(gens)
    group = {E}
    frontier = [E]
    while frontier:
        g = frontier.pop()
        for h in gens:
            k = g * h
            if k not in group:
                group.add(k)
                frontier.append(k)
    return frozenset(group)


# ---------------------------------------------------------------------------
# lattice


LATTICE_GENERATORS = {
    1: CycNum(2),
    2: SQRT3 * zeta_power(1),
    3: 2 * _rot(2),
    4: SQRT3 * zeta_power(5),
    5: 2 * _rot(4),
    6: SQRT3 * zeta_power(9),
}


def in_lattice(v: CycNum) -> bool:
    """Membership in the translation lattice Z[omega]."""
    return v.in_eisenstein()


in_vplus = in_lattice  # vertices and centres of the tiling form the same lattice


def lattice_coords(v: CycNum) -> tuple[int, int, int]:
    """Integers (l1, l2, l4) with v = l1 u_1 + l2 u_2 + l4 u_4 and l4 in {0, 1}.

    Three generators of a rank-2 lattice: the coordinates are not unique,
    so the smallest l4 is taken.
    """
    if not in_lattice(v):
        raise ValueError(f"{v!r} is not a lattice vector")
    # a + b omega = l1 2 + l2 (1 + omega) + l4 (omega - 2)
    a, _, b, _ = v.coeffs
    l4 = (a - b) % 2
    return (a - b + 3 * l4) // 2, b - l4, l4


def _from_coords(l1: int, l2: int, l4: int) -> CycNum:
    g = LATTICE_GENERATORS
    return l1 * g[1] + l2 * g[2] + l4 * g[4]


def mu(h: int, k: int) -> int:
    """Sign exponent of the tabulated closure rule: 0 for h+k <= 6, else 1."""
    s = h + k
    if not 1 <= s <= 11:
        raise ValueError("defined for 1 <= h + k <= 11 only")
    return 0 if s <= 6 else 1


def nu(h: int, k: int) -> int:
    s = h + k
    if not 1 <= s <= 11:
        raise ValueError("defined for 1 <= h + k <= 11 only")
    return s if s <= 6 else s - 6


def generator_image(h: int, k: int) -> CycNum:
    """R**h applied to the generator u_k, computed exactly."""
    return _rot(h) * LATTICE_GENERATORS[k]


def closure_rule_holds(h: int, k: int) -> bool:
    """Does R^h u_k equal (-1)**mu(h,k) u_nu(h,k) exactly?"""
    rhs = LATTICE_GENERATORS[nu(h, k)]
    if mu(h, k):
        rhs = -rhs
    return generator_image(h, k) == rhs


def rotation_lattice_closure() -> bool:
    """R^h u_k lies in the lattice for every h and k."""
    return all(in_lattice(generator_image(h, k)) for h in range(6) for k in range(1, 7))


# ---------------------------------------------------------------------------
# affine elements


@dataclass(frozen=True)
class AffineElem:
    """z -> omega**rot * c(z) + trans, with c conjugation when ``reflect``."""

    rot: int = 0
    trans: CycNum = ZERO
    reflect: bool = False

    def __post_init__(self) -> None:
        object.__setattr__(self, "rot", self.rot % 6)
        if not isinstance(self.trans, CycNum):
            raise TypeError("translations are exact CycNum values")

    @property
    def linear(self) -> DihedralElem:
        return DihedralElem(self.rot, self.reflect)

    @property
    def is_proper(self) -> bool:
        return not self.reflect

    def is_identity(self) -> bool:
        return self.rot == 0 and not self.reflect and self.trans == ZERO

    def __call__(self, z: PlanePoint) -> PlanePoint:
        return act(self, z)

    def __mul__(self, other: AffineElem) -> AffineElem:
        return compose(self, other)

    def __str__(self) -> str:
        return f"({self.linear}, {self.trans})"


IDENTITY = AffineElem()


def act(g: AffineElem, z: PlanePoint) -> PlanePoint:
    w = g.linear(z)
    if isinstance(w, CycNum):
        return w + g.trans
    return w + complex(g.trans)


def compose(a: AffineElem, b: AffineElem) -> AffineElem:
    """a . b, the map z -> a(b(z))."""
    lin = a.linear * b.linear
    return AffineElem(lin.rot, a.linear(b.trans) + a.trans, lin.reflect)


def inverse(g: AffineElem) -> AffineElem:
    lin = g.linear.inverse()
    return AffineElem(lin.rot, -lin(g.trans), lin.reflect)


def translation(v: CycNum) -> AffineElem:
    return AffineElem(0, v)


def random_affine(rng: random.Random, bound: int = 5, proper: bool = True) -> AffineElem:
    a, b = rng.randint(-bound, bound), rng.randint(-bound, bound)
    return AffineElem(rng.randrange(6), CycNum(a, 0, b, 0), (not proper) and rng.random() < 0.5)


def edge_reflection(normal: CycNum) -> AffineElem:
    """Reflection in the edge line {Re(conj(n) x) = sqrt3/2}: x -> -n^2 conj(x) + sqrt3 n."""
    if normal**6 != -ONE:
        raise ValueError("normal must be an odd power of zeta")
    n2 = normal * normal
    # -n^2 is a power of zeta with even exponent, i.e. a power of omega
    for j in range(6):
        if _rot(j) == -n2:
            return AffineElem(j, SQRT3 * normal, True)
    raise ValueError("normal must be an odd power of zeta")


# ---------------------------------------------------------------------------
# orbits


def _edge_by_segment(p: CycNum, q: CycNum):
    for e in build_star().edges:
        if {e.p, e.q} == {p, q}:
            return e
    raise LookupError("segment is not an edge of the star")


def act_on_pair(g: DihedralElem, pair: EdgePair) -> EdgePair:
    """g.[E, S(E)] = [gE, g S g^-1 (gE)], located among the six pairs."""
    images = set()
    for e in pair.edges:
        images.add(_edge_by_segment(g(e.p), g(e.q)).name)
    for cand in edge_pairs():
        if cand.edge_names == images:
            # the conjugated reflection must be the pairing reflection of cand
            conj = g * DihedralElem(2 * pair.m + 1, True) * g.inverse()
            if conj != DihedralElem(2 * cand.m + 1, True):
                raise AssertionError("conjugated pairing reflection mismatch")
            return cand
    raise LookupError("image edges are not a pair")


def _pair(name: str) -> EdgePair:
    for p in edge_pairs():
        if p.name == name:
            return p
    raise KeyError(name)


def gvee_orbit(pair: Union[EdgePair, str], group: Iterable[DihedralElem] = G_VEE) -> frozenset:
    """Names of the pairs in the orbit of ``pair`` under ``group``."""
    p = _pair(pair) if isinstance(pair, str) else pair
    return frozenset(act_on_pair(g, p).name for g in group)


def gvee_orbits(group: Iterable[DihedralElem] = G_VEE) -> set:
    group = tuple(group)
    return {gvee_orbit(p, group) for p in edge_pairs()}


def vertex_orbits(group: Iterable[DihedralElem] = G_VEE) -> list[frozenset]:
    """Orbits of the star's vertices (by name), sorted by smallest member."""
    star = build_star()
    group = tuple(group)
    seen: set = set()
    out = []
    for name, z in star.vertices.items():
        if name in seen:
            continue
        orbit = frozenset(star.vertex_name(g(z)) for g in group)
        seen |= orbit
        out.append(orbit)
    return sorted(out, key=lambda o: (len(o), min(o)))


# ---------------------------------------------------------------------------
# freeness and fundamental domain


class VPlusError(ValueError):
    """The point lies in the excluded lattice of vertices and centres."""


def fixed_point(g: AffineElem) -> Optional[complex]:
    """The unique fixed point of a proper non-translation element."""
    if g.reflect:
        raise ValueError("only proper elements")
    if g.rot == 0:
        return None
    return complex(g.trans) / (1 - complex(_rot(g.rot)))


def freeness_check(g: AffineElem, z: PlanePoint, tol: float = 1e-12) -> bool:
    """True when g moves z.  Requires z off the lattice and g not the identity."""
    if isinstance(z, CycNum):
        if in_vplus(z):
            raise VPlusError(f"{z!r} lies in the vertex lattice")
    elif _near_lattice(complex(z), tol):
        raise VPlusError(f"{z} lies in the vertex lattice")
    if g.is_identity():
        raise ValueError("the identity fixes everything")
    w = act(g, z)
    if isinstance(w, CycNum):
        return w != z
    return abs(w - complex(z)) > tol


def _nearest_lattice_candidates(z: complex) -> list[CycNum]:
    # z = x + y omega with omega = (1 + i sqrt3)/2
    y = z.imag * 2 / math.sqrt(3.0)
    x = z.real - y / 2
    bx, by = math.floor(x), math.floor(y)
    cands = [CycNum(bx + i, 0, by + j, 0) for i in range(-1, 3) for j in range(-1, 3)]
    return sorted(cands, key=lambda v: abs(complex(v) - z))


def _near_lattice(z: complex, tol: float) -> bool:
    return abs(complex(_nearest_lattice_candidates(z)[0]) - z) <= tol


def reduce_to_fundamental(z: PlanePoint, tol: float = 1e-12) -> tuple[PlanePoint, AffineElem]:
    """Return (z0, g) with z0 in cl(K*) minus O and act(g, z0) = z.

    Points already in the closed star come back with the identity.  Otherwise
    the translation is by the nearest lattice point; ties (including points on
    shared edges of two copies) go to the lexicographically least z0.
    """
    exact = isinstance(z, CycNum)
    zc = complex(z)
    if exact and in_vplus(z):
        raise VPlusError(f"{z!r} lies in the vertex lattice")
    if not exact and _near_lattice(zc, tol):
        raise VPlusError(f"{z} lies in the vertex lattice")
    if in_star(z, tol):
        return z, IDENTITY
    candidates = []
    for v in _nearest_lattice_candidates(zc)[:7]:
        z0 = z - v if exact else zc - complex(v)
        if in_star(z0, tol):
            candidates.append((z0, v))
    if not candidates:
        raise RuntimeError(f"no lattice translate of {z} lands in the star")
    if exact:
        z0, v = min(candidates, key=lambda c: lex_key(c[0]))
    else:
        best = min(abs(c[0]) for c in candidates)
        near = [c for c in candidates if abs(c[0]) <= best + 1e-12]
        z0, v = min(near, key=lambda c: (c[0].real, c[0].imag))
    return z0, translation(v)


def tiling_translations(radius: float, lattice: str = "reflection") -> list[CycNum]:
    """Lattice vectors of length <= radius.

    ``reflection`` gives the sublattice (1 + omega) Z[omega] generated by
    reflecting the star in its edges; ``full`` the whole lattice.
    """
    n = int(math.ceil(radius)) + 2
    out = []
    gen = ONE + OMEGA if lattice == "reflection" else ONE
    for a, b in product(range(-n, n + 1), repeat=2):
        v = gen * CycNum(a, 0, b, 0)
        if abs(complex(v)) <= radius + 1e-12:
            out.append(v)
    return sorted(out, key=lambda v: (abs(complex(v)), lex_key(v)))


def tiling_edge_classes(window: float) -> dict:
    """Translation classes of the edges of star copies meeting a disk.

    Copies are translates of K* by the lattice; two tiling edges are
    equivalent when a lattice translation carries one onto the other.
    Returns class key -> (set of tiling segments seen, names of the K*
    edge pairs whose edges lie in the class).
    """
    star = build_star()
    pair_of = {e.name: p.name for p in edge_pairs() for e in p.edges}
    classes: dict = {}
    for v in tiling_translations(window + 2.0, lattice="full"):
        for e in star.edges:
            p, q = e.p + v, e.q + v
            if min(abs(complex(p)), abs(complex(q))) > window + 1.0:
                continue
            d = e.q - e.p
            # unordered segment; its direction up to sign names the class
            key = min(d, -d, key=lex_key)
            segs, pairs = classes.setdefault(key, (set(), set()))
            segs.add(frozenset((p, q)))
            if v == ZERO:
                pairs.add(pair_of[e.name])
    return classes

