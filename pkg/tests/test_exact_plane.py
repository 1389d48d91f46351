from __future__ import annotations

import cmath
import math
import random

import pytest
from hypothesis import given, strategies as st

from a5flat.exact_plane import (
    COEFF_LIMIT,
    OMEGA,
    ONE,
    SQRT3,
    ZERO,
    ZETA,
    CycNum,
    cyc_conj,
    cyc_embed,
    cyc_mul,
    lex_key,
    zeta_power,
)

coeff = st.integers(-50, 50)
cyc = st.builds(CycNum, coeff, coeff, coeff, coeff)


def test_zeta_times_zeta_cubed():
    assert cyc_mul(ZETA, CycNum(0, 0, 0, 1)).coeffs == (-1, 0, 1, 0)


def test_omega_order_six():
    x = ONE
    for _ in range(6):
        x = cyc_mul(x, OMEGA)
    assert x == ONE


def test_zeta_powers():
    assert ZETA**12 == ONE
    assert ZETA**6 == -ONE
    assert zeta_power(13) == ZETA


def test_embed_examples():
    z = cyc_embed(ZETA)
    assert abs(z - complex(0.8660254037844386, 0.5)) <= 1e-12
    assert cyc_embed(ZERO) == 0
    assert abs(cyc_embed(CycNum(0, 2, 0, -1)) - math.sqrt(3)) <= 1e-12
    assert SQRT3 == CycNum(0, 2, 0, -1)


def test_conj_examples():
    assert cyc_conj(ZETA) == CycNum(0, 1, 0, -1)
    assert cyc_conj(ZETA) == ZETA**11
    assert cyc_conj(SQRT3) == SQRT3


def test_sqrt3_squared():
    assert SQRT3 * SQRT3 == CycNum(3)


def test_embed_homomorphism_bulk():
    rng = random.Random(11)
    lim = 10**6
    worst = 0.0
    for _ in range(10_000):
        a = CycNum(*(rng.randint(-lim, lim) for _ in range(4)))
        b = CycNum(*(rng.randint(-lim, lim) for _ in range(4)))
        want = cyc_embed(a) * cyc_embed(b)
        got = cyc_embed(cyc_mul(a, b))
        worst = max(worst, abs(got - want) / max(abs(want), 1.0))
    assert worst <= 1e-9


def test_overflow_detected():
    big = CycNum(COEFF_LIMIT // 2 + 1)
    with pytest.raises(OverflowError):
        big + big
    with pytest.raises(OverflowError):
        cyc_mul(CycNum(2**40), CycNum(2**40))


def test_immutable():
    with pytest.raises(AttributeError):
        ZETA.coeffs = (1, 0, 0, 0)


def test_real_part_exact():
    # the real part of zeta is sqrt3/2
    assert float(ZETA.real) == pytest.approx(math.sqrt(3) / 2, abs=1e-15)
    assert OMEGA.in_eisenstein() and not ZETA.in_eisenstein()


def test_lex_key_orders_by_real_then_imag():
    pts = [ZETA, OMEGA, ONE, -ONE, CycNum(0, 0, 0, 1)]
    ordered = sorted(pts, key=lex_key)
    embedded = [cyc_embed(p) for p in ordered]
    assert embedded == sorted(embedded, key=lambda z: (round(z.real, 12), round(z.imag, 12)))


@given(cyc, cyc, cyc)
def test_ring_laws(a, b, c):
    assert a * b == b * a
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert ONE * a == a


@given(cyc, cyc)
def test_conj_is_ring_homomorphism(a, b):
    assert cyc_conj(a * b) == cyc_conj(a) * cyc_conj(b)
    assert cyc_conj(a + b) == cyc_conj(a) + cyc_conj(b)
    assert cyc_conj(cyc_conj(a)) == a


@given(cyc)
def test_conj_embeds_to_complex_conjugate(a):
    assert abs(cyc_embed(cyc_conj(a)) - cyc_embed(a).conjugate()) <= 1e-9


@given(cyc)
def test_real_and_imag_parts(a):
    z = cyc_embed(a)
    assert float(a.real) == pytest.approx(z.real, abs=1e-9)
    assert float(a.imag) == pytest.approx(z.imag, abs=1e-9)
    assert a.is_real() == (abs(z.imag) < 1e-9)


@given(st.integers(-30, 30))
def test_zeta_power_embeds(k):
    assert abs(cyc_embed(zeta_power(k)) - cmath.exp(1j * math.pi * k / 6)) <= 1e-12
