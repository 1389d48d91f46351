from __future__ import annotations

import cmath
import math
import random

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

import a5flat.analytic as an
import a5flat.billiards as bl
import a5flat.star_complex as sc
from a5flat.checks import random_star_state

STAR = sc.build_star()
W = cmath.exp(1j * math.pi / 3)


def vertex(name):
    return complex(STAR.vertices[name])


def states(seed, n):
    rng = random.Random(seed)
    return [random_star_state(rng) for _ in range(n)]


state_strategy = st.integers(0, 10**6).map(lambda s: random_star_state(random.Random(s)))


def test_state_validation():
    with pytest.raises(bl.BilliardDomainError):
        bl.BilliardState(0.2, 2.0)
    with pytest.raises(bl.BilliardDomainError):
        bl.BilliardState(3.0, 1.0)


def test_normal_incidence_reverses():
    e = STAR.edge(1)
    n = complex(e.normal)
    new, ev = bl.step(bl.BilliardState(e.midpoint - 0.3 * n, n))
    assert ev.kind == "edge-reflection" and ev.ident == 1
    assert abs(new.direction + n) <= 1e-15
    assert abs(new.position - e.midpoint) <= 1e-12
    assert abs(new.time - 0.3) <= 1e-12


def test_reflection_law():
    for st_ in states(1, 50):
        new, ev = bl.step(st_)
        if ev.kind != "edge-reflection":
            continue
        n = complex(STAR.edge(ev.ident).normal)
        tin, tout = (ev.incoming * n.conjugate()), (ev.outgoing * n.conjugate())
        assert abs(tin.imag - tout.imag) <= 1e-12
        assert abs(tin.real + tout.real) <= 1e-12


def test_hexagon_side_takes_unit_time():
    tr = bl.trace(bl.BilliardState(vertex("H2"), 1.0), 1)
    ev = tr.events[0]
    assert ev.kind == "vertex-reversal" and ev.ident == "H1"
    assert abs(ev.time - 1.0) <= 1e-12


def test_aim_at_tip_reverses():
    tip = vertex("T0")
    new, ev = bl.step(bl.BilliardState(0.1j, (tip - 0.1j) / abs(tip - 0.1j)))
    assert ev.kind == "vertex-reversal" and ev.ident == "T0"
    assert abs(new.direction + ev.incoming) <= 1e-15


def test_near_vertex_is_flagged_tolerance_sensitive():
    tip = vertex("T0")
    aim = tip + 1e-10j
    _, ev = bl.step(bl.BilliardState(0.1j, (aim - 0.1j) / abs(aim - 0.1j)))
    assert ev.kind == "vertex-reversal" and ev.tolerance_sensitive


def test_outward_start_on_boundary_rejected():
    e = STAR.edge(1)
    with pytest.raises(bl.BilliardDomainError):
        bl.step(bl.BilliardState(e.midpoint, complex(e.normal), 0.0, 1))


def test_center_pass_is_flagged_and_continues():
    tr = bl.trace(bl.BilliardState(-0.5, 1.0), 2)
    kinds = [e.kind for e in tr.events]
    assert kinds[0] == "center-hit"
    assert tr.events[0].outgoing == tr.events[0].incoming
    assert len(tr.bounces) == 2


def test_empty_trace():
    tr = bl.trace(bl.BilliardState(0.2, 1.0), 0)
    assert tr.events == [] and len(tr.polyline) == 0
    with pytest.raises(ValueError):
        bl.trace(bl.BilliardState(0.2, 1.0), -1)


@given(state_strategy)
@settings(max_examples=60, deadline=None)
def test_trace_stays_in_star(start):
    tr = bl.trace(start, 30)
    pts = tr.polyline
    for a, b in zip(pts[:-1], pts[1:]):
        for s in (0.25, 0.5, 0.75):
            assert sc.in_star(a + s * (b - a), 1e-9)
    assert abs(tr.length - sum(abs(b - a) for a, b in zip(pts[:-1], pts[1:]))) <= 1e-9


@given(state_strategy)
@settings(max_examples=60, deadline=None)
def test_direction_stays_unit(start):
    tr = bl.trace(start, 50)
    for s in tr.states:
        assert abs(abs(s.direction) - 1) <= 1e-12


def test_closed_orbit_from_edge_midpoint():
    e = STAR.edge(1)
    t = complex(e.q) - complex(e.p)
    t /= abs(t)
    d = t * W
    start = bl.BilliardState(e.midpoint, d, 0.0, 1)
    tr = bl.trace(start, 40)
    back = [s for s in tr.states if abs(s.position - start.position) <= 1e-8 and abs(s.direction - d) <= 1e-8]
    assert back, "no recurrence"
    assert len(tr.states[: tr.states.index(back[0]) + 1]) == 6


def test_time_reversal():
    for start in states(2, 40):
        tr = bl.trace(start, 50)
        last = tr.bounces[-1]
        rev = bl.BilliardState(tr.end.position, -last.incoming, 0.0, tr.end.edge, tr.end.vertex)
        back = bl.trace(rev, len(tr.states), until=tr.length)
        assert abs(back.position_at(tr.length) - start.position) <= 1e-9
        for s in np.linspace(0, tr.length, 17):
            assert abs(back.position_at(tr.length - s) - tr.position_at(s)) <= 1e-9


def test_rotation_equivariance():
    for start in states(3, 30):
        for k in (1, 2, 5):
            a = bl.trace(start, 50)
            b = bl.trace(start.rotated(k), 50)
            assert [e.kind for e in a.events] == [e.kind for e in b.events]
            for ea, eb in zip(a.events, b.events):
                assert abs(W**k * ea.location - eb.location) <= 1e-9
                assert abs(ea.time - eb.time) <= 1e-9
                if ea.kind == "edge-reflection":
                    assert bl._rotate_label(ea.ident, k) == eb.ident


# unfolding


def test_unfold_single_segment():
    tr = bl.trace(bl.BilliardState(0.1, 1j), 1)
    line = bl.unfold(tr)
    assert line.pieces[0][0].is_identity()
    assert abs(line.length - tr.length) <= 1e-12


def test_unfold_two_segments_length():
    tr = bl.trace(bl.BilliardState(0.1 + 0.2j, cmath.exp(0.4j)), 2)
    line = bl.unfold(tr)
    pts = tr.polyline
    assert abs(line.length - (abs(pts[1] - pts[0]) + abs(pts[2] - pts[1]))) <= 1e-12


def test_unfold_rejects_reversal():
    tr = bl.trace(bl.BilliardState(vertex("H2"), 1.0), 1)
    with pytest.raises(bl.UnfoldError):
        bl.unfold(tr)


def test_unfolded_pieces_map_back_to_segments():
    tr = bl.trace(bl.BilliardState(0.1 + 0.2j, cmath.exp(0.4j)), 12)
    line = bl.unfold(tr)
    from a5flat.symmetry import act, inverse

    prev = [tr.start] + tr.states[:-1]
    for (g, s0, s1), st0 in zip(line.pieces, prev):
        assert abs(complex(act(inverse(g), line.point(s0))) - st0.position) <= 1e-9
    assert line.crossings == len(tr.bounces) - 1


def test_fold_inside_star():
    line = bl.UnfoldedLine(0.1 + 0.1j, 1j, 0.3)
    f = bl.fold(line)
    assert f.events == []
    assert abs(f.final.position - (0.1 + 0.4j)) <= 1e-15


def test_fold_single_crossing():
    e = STAR.edge(1)
    n = complex(e.normal)
    t = complex(e.q) - complex(e.p)
    t /= abs(t)
    d = (n + t) / abs(n + t)
    p0 = e.midpoint - 0.3 * d
    f = bl.fold(bl.UnfoldedLine(p0, d, 0.6))
    assert len(f.bounces) == 1
    ev = f.bounces[0]
    assert ev.ident == 1 and abs(ev.location - e.midpoint) <= 1e-12
    # reflected direction by hand: tangential part kept, normal part flipped
    assert abs(ev.outgoing - (t - n) / abs(t - n)) <= 1e-12
    assert abs(f.final.position - (e.midpoint + 0.3 * ev.outgoing)) <= 1e-12


def test_fold_long_line_preserves_time():
    line = bl.UnfoldedLine(0.1 + 0.05j, cmath.exp(0.3j), 100.0)
    f = bl.fold(line)
    assert abs(f.final.time - 100.0) <= 1e-7
    pts = list(f.polyline) + [f.final.position]
    total = sum(abs(b - a) for a, b in zip(pts[:-1], pts[1:]))
    assert abs(total - 100.0) <= 1e-7


def test_fold_through_tiling_vertex_is_singular():
    with pytest.raises(bl.SingularIncidenceError):
        bl.fold(bl.UnfoldedLine(0.1j, 1.0 * cmath.exp(-1j * math.atan2(0.1, 1.0)), 3.0))


def test_round_trip_bulk():
    rng = random.Random(9)
    done = 0
    while done < 200:
        start = random_star_state(rng)
        tr = bl.trace(start, rng.randint(1, 50))
        if any(e.kind == "vertex-reversal" for e in tr.events):
            continue
        line = bl.unfold(tr)
        fo = bl.fold(line)
        assert len(fo.bounces) == len(tr.bounces)
        assert line.crossings + 1 == len(fo.bounces)
        for a, b in zip(tr.states, fo.states):
            assert abs(a.position - b.position) <= 1e-9
            assert abs(a.direction - b.direction) <= 1e-9
        done += 1


# trace files


def test_trace_file_round_trip():
    tr = bl.trace(bl.BilliardState(-0.5, 1.0), 8)
    text = bl.dump_trace(tr)
    again = bl.load_trace(text)
    assert bl.dump_trace(again) == text
    assert [e.kind for e in again.events] == [e.kind for e in tr.events]


@pytest.mark.parametrize("text", ["", "garbage\n", "# billiard-trace v1\nevent 1 0 0 edge-reflection 1 1 0\n",
                                  "# billiard-trace v1\nstart 0 0.1 0 1 0\nevent x\n",
                                  "# billiard-trace v1\nstart 0 0.1 0 1 0\nevent 1 0 0 bounce 1 1 0\n"])
def test_trace_file_errors(text):
    with pytest.raises(bl.TraceFormatError):
        bl.load_trace(text)


# geodesics on the surface


def test_geodesic_small_time_matches_line():
    C = an.constant_C()
    r = bl.surface_geodesic_compare(an.inverse_develop(0.1 * C), cmath.exp(0.5j), 0.3)
    assert r.line_deviation <= 1e-7
    assert r.billiard_deviation <= 1e-7


def test_geodesic_beyond_star_matches_billiard():
    C = an.constant_C()
    r = bl.surface_geodesic_compare(an.inverse_develop(0.1 * C), cmath.exp(0.5j), 3.0)
    assert r.incomplete_at is None
    assert r.line_deviation <= 1e-7
    assert r.billiard_deviation <= 1e-7


def test_geodesic_aimed_at_vertex_is_incomplete():
    C = an.constant_C()
    r = bl.surface_geodesic_compare(an.SurfacePoint.on_sheet(0), W, 3.0)
    assert r.incomplete_at is not None
    assert abs(r.incomplete_at - C) <= 1e-4
    assert abs(r.branch_point - W) <= 1e-9


def test_geodesic_toward_tip_escapes_to_infinity():
    beta = math.gamma(1 / 6) * math.gamma(1 / 3) / math.gamma(1 / 2)
    r = bl.surface_geodesic_compare(an.SurfacePoint.on_sheet(0), cmath.exp(1j * math.pi / 6), 3.0)
    assert r.escaped
    assert abs(r.incomplete_at - beta / (6 * math.sqrt(2))) <= 1e-9


def test_geodesic_rotated_start():
    C = an.constant_C()
    p = an.inverse_develop((0.2 + 0.1j) * C)
    q = an.SurfacePoint.from_pair(W * p.xi, p.eta)
    alpha = cmath.exp(0.3j)
    a = bl.surface_geodesic_compare(p, alpha, 0.4)
    b = bl.surface_geodesic_compare(q, W * alpha, 0.4)
    assert abs(a.times[-1] - b.times[-1]) <= 1e-12
    assert abs(b.developed[-1] - W * a.developed[-1]) <= 1e-7
    assert abs(an.developing_map(q) - W * an.developing_map(p)) <= 1e-7


def test_principal_sheet_develops_into_star():
    rng = random.Random(12)
    C = an.constant_C()
    for _ in range(200):
        xi = 4 * math.sqrt(rng.random()) * cmath.exp(2j * math.pi * rng.random())
        if min(abs(xi - an.BRANCH_POINTS)) < 1e-3:
            continue
        z = an.developing_map(an.SurfacePoint.on_sheet(xi)) / C
        assert sc.in_star(z, 1e-9)
