from __future__ import annotations

import cmath
import itertools
import math
from dataclasses import replace

import pytest
from hypothesis import given, strategies as st

import a5flat.star_complex as sc
from a5flat.exact_plane import OMEGA, ONE, ZERO, CycNum, cyc_conj

TABLE_ONE = {"a": (-6, 3), "b": (2, 5), "c": (6, -3), "d": (4, -1), "e": (-2, -5), "f": (-4, 1)}


@pytest.fixture(scope="module")
def star():
    return sc.build_star()


def test_counts(star):
    assert len(star.vertices) == 12
    assert len(star.edges) == 12
    assert star.center == ZERO


def test_unit_edge_lengths(star):
    for e in star.edges:
        d = e.q - e.p
        assert d * cyc_conj(d) == ONE


def test_tips_and_hexagon_radii(star):
    for name, v in star.vertices.items():
        r2 = v * cyc_conj(v)
        assert r2 == (ONE if name.startswith("H") else CycNum(3))


def test_rotation_and_conjugation_preserve_edge_set(star):
    segs = {frozenset((e.p, e.q)) for e in star.edges}
    rotated = {frozenset((OMEGA * e.p, OMEGA * e.q)) for e in star.edges}
    mirrored = {frozenset((cyc_conj(e.p), cyc_conj(e.q))) for e in star.edges}
    assert rotated == segs
    assert mirrored == segs


def test_labels(star):
    labels = [e.label for e in star.edges]
    assert sorted(labels) == sorted(list(range(1, 7)) + list(range(-6, 0)))
    for e in star.edges:
        opposite = next(f for f in star.edges if f.label == -e.label)
        assert opposite.p == -e.p and opposite.q == -e.q


def test_first_label_faces_positive_real_axis(star):
    first = star.edge(1)
    n = complex(first.normal)
    assert n.real > 0.85
    assert first.midpoint.imag > 0


def test_edge_pairs(star):
    pairs = sc.edge_pairs(star)
    assert len(pairs) == 6
    names = [e.name for p in pairs for e in p.edges]
    assert sorted(names) == sorted(e.name for e in star.edges)
    assert {p.name: p.labels for p in pairs} == TABLE_ONE
    for p in pairs:
        e1, e2 = p.edges
        assert e1.direction in (e2.direction, -e2.direction)
        s = sc.pair_reflection(p.m)
        assert {s(e1.p), s(e1.q)} == {e2.p, e2.q}
        assert {s(e2.p), s(e2.q)} == {e1.p, e1.q}


def test_broken_geometry_detected(star):
    edges = tuple(replace(e, q=e.q * 2) if e.name == "A1" else e for e in star.edges)
    bent = sc.StarHexagon(vertices=star.vertices, edges=edges, center=star.center)
    with pytest.raises(sc.GeometryError):
        sc.edge_pairs(bent)


def test_label_override_changes_pair_labels():
    pairs = {p.name: p.labels for p in sc.edge_pairs(labels={"A0": 2, "B0": 1})}
    assert pairs != TABLE_ONE
    assert {p.name: p.labels for p in sc.edge_pairs()} == TABLE_ONE


def test_rho_interior():
    c = sc.rho(0.3 + 0.1j)
    assert c.kind == "interior" and c.rep == 0.3 + 0.1j


def test_rho_center():
    assert sc.rho(ZERO).kind == "center"


def test_rho_outside():
    with pytest.raises(sc.DomainError):
        sc.rho(2.0)


def test_rho_partner_midpoints_agree(star):
    for p in sc.edge_pairs(star):
        e1, e2 = p.edges
        a, b = sc.rho(e1.midpoint), sc.rho(e2.midpoint)
        assert a == b and a.kind == "edge" and a.class_id == p.name


def test_rho_vertices(star):
    for cls, members in sc.VERTEX_CLASSES.items():
        reps = {sc.rho(star.vertices[n]) for n in members}
        assert len(reps) == 1
        (r,) = reps
        assert r.kind == "vertex" and r.class_id == cls


def test_rho_exact_vertex_stays_exact(star):
    c = sc.rho(star.vertices["T3"])
    assert c.kind == "vertex" and isinstance(c.rep, CycNum)
    assert c.rep in [star.vertices[n] for n in sc.VERTEX_CLASSES["tips-odd"]]


@given(st.floats(0.01, 0.99), st.integers(0, 11))
def test_rho_idempotent_on_boundary(t, k):
    e = sc.build_star().edges[k]
    x = complex(e.p) + t * (complex(e.q) - complex(e.p))
    once = sc.rho(x)
    assert sc.rho(once.rep) == once


@given(st.floats(-1.7, 1.7), st.floats(-1.7, 1.7))
def test_rho_idempotent_anywhere(x, y):
    z = complex(x, y)
    if not sc.in_star(z):
        return
    once = sc.rho(z)
    assert sc.rho(once.rep) == once


def test_containment_samples():
    assert sc.in_star(0)
    assert sc.in_star(1.7 * cmath.exp(1j * math.pi / 6))  # toward a tip
    assert not sc.in_star(1.8 * cmath.exp(1j * math.pi / 6))
    assert not sc.in_star(1.1)  # just past a hexagon vertex
    assert sc.in_star(1.0)


def test_base_triangulation():
    t = sc.quotient_triangulation("base")
    assert t.counts == (12, 24, 12)
    assert t.punctures
    assert not t.is_closed_surface()


def test_identified_triangulation():
    t = sc.quotient_triangulation("identified")
    assert t.counts == (3, 18, 12)


def test_orbit_triangulation():
    t = sc.quotient_triangulation("orbit")
    assert t.counts == (4, 18, 12)
    assert t.euler == -2
    assert sc.genus_from_counts(*t.counts) == 2
    assert t.is_closed_surface()


def test_sphere_and_double_cover():
    s = sc.sphere_triangulation()
    d = sc.double_cover_triangulation()
    assert s.counts == (8, 18, 12) and s.is_closed_surface()
    assert d.counts == (10, 36, 24) and d.is_closed_surface()
    V, E, F = s.counts
    assert d.counts == (2 * V - 6, 2 * E, 2 * F)


@pytest.mark.parametrize(
    "counts,genus",
    [((8, 18, 12), 0), ((10, 36, 24), 2), ((4, 18, 12), 2), ((4, 6, 4), 0)],
)
def test_genus_from_counts(counts, genus):
    assert sc.genus_from_counts(*counts) == genus


def test_genus_rejects_odd_characteristic():
    with pytest.raises(ValueError):
        sc.genus_from_counts(3, 18, 12)


@pytest.mark.parametrize("maker", [
    lambda: sc.quotient_triangulation("base"),
    lambda: sc.quotient_triangulation("identified"),
    lambda: sc.quotient_triangulation("orbit"),
    sc.sphere_triangulation,
    sc.double_cover_triangulation,
])
def test_refinement_preserves_euler(maker):
    t = maker()
    r = sc.barycentric_refinement(t)
    assert r.euler == t.euler
    assert r.counts[2] == 6 * t.counts[2]
    assert r.is_closed_surface() == t.is_closed_surface()
    assert sc.barycentric_refinement(r).euler == t.euler


def test_refinement_counts_of_quotient():
    t = sc.quotient_triangulation("orbit")
    V, E, F = t.counts
    assert sc.barycentric_refinement(t).counts == (V + E + F, 2 * E + 6 * F, 6 * F)


def test_refinement_refuses_repeated_corner_without_gluing():
    t = sc.quotient_triangulation("orbit")
    bare = sc.Triangulation("bare", t.vertices, t.edges, t.faces)
    with pytest.raises(ValueError):
        sc.barycentric_refinement(bare)


def test_triangulation_invariants():
    for t in (sc.quotient_triangulation(k) for k in ("base", "identified", "orbit")):
        fe = t.faces_of_edge()
        assert all(len(v) <= 2 for v in fe.values())


def test_star_serialization_round_trip(star):
    text = sc.dump_star(star)
    again = sc.load_star(text)
    assert again.vertices == star.vertices
    assert [(e.name, e.label, e.p, e.q) for e in again.edges] == [(e.name, e.label, e.p, e.q) for e in star.edges]
    assert sc.dump_star(again) == text


def test_triangulation_serialization_round_trip():
    for t in (sc.quotient_triangulation("orbit"), sc.double_cover_triangulation()):
        text = sc.dump_triangulation(t)
        u = sc.load_triangulation(text)
        assert u.counts == t.counts and u.euler == t.euler
        assert sc.dump_triangulation(u) == text


def test_load_star_rejects_garbage():
    with pytest.raises(ValueError):
        sc.load_star("not a star\n")


def test_edges_are_parallel_within_pairs_only(star):
    pairs = {e.name: p.name for p in sc.edge_pairs(star) for e in p.edges}
    for e1, e2 in itertools.combinations(star.edges, 2):
        if pairs[e1.name] == pairs[e2.name]:
            assert e1.direction in (e2.direction, -e2.direction)
