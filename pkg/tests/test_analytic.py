from __future__ import annotations

import cmath
import math
import random

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

import a5flat.analytic as an

W = cmath.exp(1j * math.pi / 3)
RAW = math.gamma(1 / 6) * math.gamma(1 / 2) / (6 * math.gamma(2 / 3))

disk = st.builds(
    lambda r, t: 0.95 * math.sqrt(r) * cmath.exp(2j * math.pi * t),
    st.floats(0, 1),
    st.floats(0, 1),
)


def rand_disk(rng, radius=0.999):
    return radius * math.sqrt(rng.random()) * cmath.exp(2j * math.pi * rng.random())


# square roots


def test_footnote_root_at_origin():
    assert abs(an.sqrt_footnote(0) - 1j) <= 1e-12


def test_footnote_root_squares_to_polynomial():
    rng = random.Random(1)
    for _ in range(100):
        xi = complex(rng.uniform(-2, 2), rng.uniform(-2, 2))
        if min(abs(xi - an.BRANCH_POINTS)) < 1e-3:
            continue
        assert abs(an.sqrt_footnote(xi) ** 2 - (xi**6 - 1)) <= 1e-10 * max(1, abs(xi) ** 6)


def test_footnote_root_growth_on_real_axis():
    for x in (10.0, 100.0, 1000.0):
        assert abs(abs(an.sqrt_footnote(x)) / x**3 - 1) < 1e-5


def test_footnote_root_rejects_branch_point():
    with pytest.raises(an.BranchPointError):
        an.sqrt_footnote(W**2)


@given(disk)
def test_footnote_and_principal_differ_by_unit_imaginary(xi):
    ratio = an.sqrt_footnote(xi) / an.principal_sqrt(xi)
    assert min(abs(ratio - 1j), abs(ratio + 1j)) <= 1e-9


@given(disk)
def test_principal_eta_on_surface(xi):
    assert abs(an.hamiltonian(xi, an.eta_principal(xi))) <= 1e-9


def test_surface_point_validation():
    with pytest.raises(ValueError):
        an.SurfacePoint(0.3, 1.0, 1)
    p = an.SurfacePoint.on_sheet(0.3 + 0.2j, -1)
    assert p.sheet == -1
    assert abs(p.eta + an.eta_principal(0.3 + 0.2j)) <= 1e-15


# continuation


def test_constant_path_keeps_eta():
    eta = an.eta_principal(0.4)
    assert an.eta_continue(an.PlanePath([0.4, 0.4]), eta) == eta


def test_loop_around_one_flips_sign():
    loop = an.PlanePath.circle(1.0, 0.1, 64)
    eta0 = cmath.sqrt(2 * (1 - loop.start**6))
    got = an.eta_continue(loop, eta0)
    dense = an.eta_continue(an.PlanePath.circle(1.0, 0.1, 10_000), eta0)
    assert abs(got + eta0) <= 1e-8
    assert abs(got - dense) <= 1e-8


def test_loop_around_nothing_keeps_sign():
    loop = an.PlanePath.circle(0.1, 0.3, 64)
    eta0 = cmath.sqrt(2 * (1 - loop.start**6))
    assert abs(an.eta_continue(loop, eta0) - eta0) <= 1e-8


def test_loop_around_two_roots_keeps_sign():
    loop = an.PlanePath.circle(0.5 * (1 + W), 0.65, 96)
    eta0 = cmath.sqrt(2 * (1 - loop.start**6))
    assert abs(an.eta_continue(loop, eta0) - eta0) <= 1e-8


def test_path_rejects_branch_proximity():
    with pytest.raises(an.BranchPointError):
        an.PlanePath([0.5, 1.5])


def test_continuation_checks_start():
    with pytest.raises(ValueError):
        an.eta_continue(an.PlanePath([0, 0.5]), 1.0)


# developing integral and constant


def test_empty_integral():
    assert an.develop([0, 0]) == 0


def test_constant_matches_beta_identity():
    assert abs(an.raw_integral() - RAW) <= 1e-9
    assert abs(an.raw_constant_beta() - RAW) <= 1e-12
    assert abs(an.constant_C() - RAW / math.sqrt(2)) <= 1e-12
    assert abs(an.raw_integral() - 1.214325) <= 1e-5


def test_develop_to_branch_point_gives_constant():
    z = an.develop(an.PlanePath([0, 1], allow_branch_end=True))
    assert abs(z - an.constant_C()) <= 1e-9


def test_develop_approaching_one():
    # extrapolate 0 -> 1 - delta toward delta = 0; the error is O(sqrt(delta))
    vals = [an.develop([0, 1 - d]).real for d in (1e-4, 4e-4)]
    extrap = 2 * vals[0] - vals[1]
    assert abs(extrap - RAW / math.sqrt(2)) <= 1e-5


def test_develop_rotation_example():
    assert abs(an.develop([0, 0.5 * W]) - W * an.develop([0, 0.5])) <= 1e-9


@given(disk)
@settings(max_examples=40, deadline=None)
def test_develop_equivariance(xi):
    for k in range(1, 6):
        assert abs(an.develop([0, W**k * xi]) - W**k * an.develop([0, xi])) <= 1e-9


@given(disk, disk)
@settings(max_examples=30, deadline=None)
def test_develop_conjugation(mid, xi):
    a = an.develop([0, mid.conjugate(), xi.conjugate()])
    b = an.develop([0, mid, xi]).conjugate()
    assert abs(a - b) <= 1e-9


def test_develop_path_independence_inside_disk():
    xi = 0.6 + 0.5j
    assert abs(an.develop([0, 0.7, xi]) - an.develop([0, xi])) <= 1e-11


def test_develop_image_of_straight_radius_is_straight():
    z = an.develop([0, 0.99 * W])
    assert abs(cmath.phase(z) - math.pi / 3) <= 1e-12


def test_inverse_develop_round_trip():
    for z in (0.2 + 0.1j, -0.5 + 0.3j, 0.1j):
        p = an.inverse_develop(z)
        assert abs(an.developing_map(p) - z) <= 1e-12


# flow


def test_flow_short_time_series():
    t = 0.01
    tr = an.hamiltonian_flow(an.SurfacePoint.on_sheet(0), 1.0, t)
    assert abs(tr.xi[-1] - math.sqrt(2) * t) <= 10 * t**5


def test_flow_straightened_from_origin():
    tr = an.hamiltonian_flow(an.SurfacePoint.on_sheet(0), 1.0, 0.5)
    dev = an.developed_flow(tr)
    assert np.max(np.abs(dev - tr.times)) <= 1e-7


def test_flow_conserves_energy_over_many_steps():
    start = an.SurfacePoint.on_sheet(0.3 - 0.2j)
    tr = an.hamiltonian_flow(start, cmath.exp(0.4j), 10.0, tol=1e-9, h_max=1e-3)
    assert tr.n_steps >= 10_000
    assert tr.max_drift <= 1e-9
    H = np.abs(0.5 * tr.eta**2 + tr.xi**6 - 1)
    assert H.max() <= 1e-9


def test_flow_detects_branch_point():
    C = an.constant_C()
    mid = an.inverse_develop(1j * math.sqrt(3) / 2 * C)
    fwd = an.hamiltonian_flow(mid, 1.0, 2 * C)
    bwd = an.hamiltonian_flow(mid, 1.0, -2 * C)
    assert fwd.incomplete_at is not None and bwd.incomplete_at is not None
    assert abs(fwd.incomplete_at - bwd.incomplete_at - C) <= 1e-4
    assert abs(fwd.incomplete_at - C / 2) <= 1e-4
    assert min(abs(fwd.branch_point - an.BRANCH_POINTS)) <= 1e-6


def test_flow_rejects_non_unit_direction():
    with pytest.raises(ValueError):
        an.hamiltonian_flow(an.SurfacePoint.on_sheet(0), 2.0, 0.1)


# straightening and isometries


def test_straightening_examples():
    assert an.straightening_residual(0) <= 1e-12
    assert abs(an.straightening_residual(0.3 + 0.4j, sheet=-1) - 2) <= 1e-9


@given(disk)
def test_straightening_property(xi):
    assert an.straightening_residual(xi) <= 1e-10


@pytest.mark.parametrize("elem", ["R", "U", (3, True), (5, False)])
def test_symmetries_are_isometries(elem):
    rng = random.Random(3)
    points = [an.SurfacePoint.on_sheet(0)] + [an.SurfacePoint.on_sheet(rand_disk(rng, 0.9)) for _ in range(5)]
    for p in points:
        assert an.isometry_residual(elem, p) <= 1e-6


def test_identity_isometry_residual():
    assert an.isometry_residual("e", an.SurfacePoint.on_sheet(0.2j)) <= 1e-9


def test_unknown_symmetry():
    with pytest.raises(ValueError):
        an.isometry_residual("Q", an.SurfacePoint.on_sheet(0))
