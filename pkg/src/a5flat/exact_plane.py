"""Exact arithmetic in the cyclotomic ring Z[zeta], zeta = exp(i*pi/6).

Every point of the star-hexagon geometry (vertices, edge lines, reflections,
rotations by multiples of 30 degrees and the translation lattice) has integer
coordinates in the basis ``1, zeta, zeta**2, zeta**3``.  Products are reduced
with the minimal polynomial ``x**4 - x**2 + 1``.

Lengths are measured in units of the side constant C, i.e. C = 1 here.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from functools import total_ordering
from typing import Iterable, Union

__all__ = [
    "COEFF_LIMIT",
    "CycNum",
    "SurdReal",
    "ZETA",
    "OMEGA",
    "SQRT3",
    "ONE",
    "ZERO",
    "cyc_mul",
    "cyc_embed",
    "cyc_conj",
    "zeta_power",
    "lex_key",
]

#: Coefficients are kept inside the signed 64-bit range; leaving it raises.
COEFF_LIMIT = 2**63 - 1

_ZETA_C = cmath.exp(1j * math.pi / 6)
_BASIS = (1.0 + 0j, _ZETA_C, _ZETA_C**2, 1j)


def _check(coeffs: tuple[int, int, int, int]) -> tuple[int, int, int, int]:
    for c in coeffs:
        if c > COEFF_LIMIT or c < -COEFF_LIMIT:
            raise OverflowError(f"cyclotomic coefficient {c} exceeds the 64-bit limit")
    return coeffs


def _sign_surd(p: int, q: int) -> int:
    """Sign of p + q*sqrt(3) for integers p, q."""
    if p >= 0 and q >= 0:
        return 0 if p == 0 and q == 0 else 1
    if p <= 0 and q <= 0:
        return -1
    # opposite signs: the larger magnitude wins
    lhs, rhs = p * p, 3 * q * q
    if lhs == rhs:
        return 0
    return (1 if p > 0 else -1) if lhs > rhs else (1 if q > 0 else -1)


@total_ordering
@dataclass(frozen=True)
class SurdReal:
    """The real number (p + q*sqrt(3)) / 2 with integer p, q."""

    p: int
    q: int

    def __float__(self) -> float:
        return 0.5 * (self.p + self.q * math.sqrt(3.0))

    def sign(self) -> int:
        return _sign_surd(self.p, self.q)

    def __sub__(self, other: SurdReal) -> SurdReal:
        return SurdReal(self.p - other.p, self.q - other.q)

    def __lt__(self, other: SurdReal) -> bool:
        return (self - other).sign() < 0

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, SurdReal):
            return NotImplemented
        return self.p == other.p and self.q == other.q

    def __hash__(self) -> int:
        return hash((self.p, self.q))


Scalar = Union[int, "CycNum"]


class CycNum:
    """Element a + b*zeta + c*zeta**2 + d*zeta**3 of Z[zeta]."""

    __slots__ = ("coeffs",)

    def __init__(self, a: int = 0, b: int = 0, c: int = 0, d: int = 0) -> None:
        object.__setattr__(self, "coeffs", _check((int(a), int(b), int(c), int(d))))

    def __setattr__(self, name, value):  # immutable value type
        raise AttributeError("CycNum is immutable")

    @classmethod
    def from_coeffs(cls, coeffs: Iterable[int]) -> CycNum:
        a, b, c, d = coeffs
        return cls(a, b, c, d)

    @staticmethod
    def _coerce(x: Scalar) -> CycNum:
        if isinstance(x, CycNum):
            return x
        if isinstance(x, int):
            return CycNum(x)
        raise TypeError(f"cannot combine CycNum with {type(x).__name__}")

    # ring operations -------------------------------------------------
    def __add__(self, other: Scalar) -> CycNum:
        o = self._coerce(other).coeffs
        return CycNum(*(x + y for x, y in zip(self.coeffs, o)))

    __radd__ = __add__

    def __neg__(self) -> CycNum:
        return CycNum(*(-x for x in self.coeffs))

    def __sub__(self, other: Scalar) -> CycNum:
        return self + (-self._coerce(other))

    def __rsub__(self, other: Scalar) -> CycNum:
        return self._coerce(other) - self

    def __mul__(self, other: Scalar) -> CycNum:
        return cyc_mul(self, self._coerce(other))

    __rmul__ = __mul__

    def __pow__(self, n: int) -> CycNum:
        if n < 0:
            raise ValueError("negative powers are only defined for units; use zeta_power")
        result, base = ONE, self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def conj(self) -> CycNum:
        return cyc_conj(self)

    # comparison / hashing ---------------------------------------------
    def __eq__(self, other: object) -> bool:
        if isinstance(other, int):
            other = CycNum(other)
        if not isinstance(other, CycNum):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def __bool__(self) -> bool:
        return any(self.coeffs)

    # real structure ----------------------------------------------------
    def twice_real(self) -> SurdReal:
        """2*Re(self) as an element of Z[sqrt3] (returned halved, exactly)."""
        a, b, c, _ = self.coeffs
        # Re: 1 -> 1, zeta -> sqrt3/2, zeta^2 -> 1/2, zeta^3 -> 0
        return SurdReal(2 * a + c, b)

    def twice_imag(self) -> SurdReal:
        _, b, c, d = self.coeffs
        # Im: zeta -> 1/2, zeta^2 -> sqrt3/2, zeta^3 -> 1
        return SurdReal(b + 2 * d, c)

    @property
    def real(self) -> SurdReal:
        return self.twice_real()

    @property
    def imag(self) -> SurdReal:
        return self.twice_imag()

    def is_real(self) -> bool:
        return self.twice_imag().sign() == 0

    def norm2(self) -> SurdReal:
        """|self|**2, which is real, as a SurdReal."""
        return (self * self.conj()).twice_real()

    def in_eisenstein(self) -> bool:
        """True when self lies in Z[omega], omega = zeta**2."""
        return self.coeffs[1] == 0 and self.coeffs[3] == 0

    def __complex__(self) -> complex:
        return cyc_embed(self)

    def __repr__(self) -> str:
        return "CycNum({}, {}, {}, {})".format(*self.coeffs)

    def __str__(self) -> str:
        terms = []
        for k, c in enumerate(self.coeffs):
            if c == 0:
                continue
            mono = "" if k == 0 else ("z" if k == 1 else f"z^{k}")
            if mono and abs(c) == 1:
                terms.append(("-" if c < 0 else "+") + mono)
            else:
                terms.append(f"{c:+d}{mono}")
        s = "".join(terms) or "0"
        return s[1:] if s.startswith("+") else s


def cyc_mul(x: CycNum, y: CycNum) -> CycNum:
    """Product reduced by zeta**4 = zeta**2 - 1."""
    a = x.coeffs
    b = y.coeffs
    p = [0] * 7
    for i in range(4):
        if a[i]:
            for j in range(4):
                p[i + j] += a[i] * b[j]
    # zeta^6 = -1, zeta^5 = zeta^3 - zeta, zeta^4 = zeta^2 - 1
    p[0] -= p[6]
    p[3] += p[5]
    p[1] -= p[5]
    p[2] += p[4]
    p[0] -= p[4]
    return CycNum(p[0], p[1], p[2], p[3])


def cyc_embed(x: CycNum) -> complex:
    """Floating-point value sum_k coeff_k * exp(i*k*pi/6)."""
    a, b, c, d = x.coeffs
    return a * _BASIS[0] + b * _BASIS[1] + c * _BASIS[2] + d * _BASIS[3]


def cyc_conj(x: CycNum) -> CycNum:
    """Complex conjugation; zeta -> zeta**11 = zeta - zeta**3."""
    a, b, c, d = x.coeffs
    return CycNum(a + c, b, -c, -b - d)


ONE = CycNum(1)
ZERO = CycNum()
ZETA = CycNum(0, 1)
OMEGA = CycNum(0, 0, 1)
SQRT3 = CycNum(0, 2, 0, -1)

_ZETA_POWERS = [ONE]
for _ in range(11):
    _ZETA_POWERS.append(_ZETA_POWERS[-1] * ZETA)
del _


def zeta_power(k: int) -> CycNum:
    """zeta**k for any integer k (zeta has order 12)."""
    return _ZETA_POWERS[k % 12]


def lex_key(x: CycNum) -> tuple[SurdReal, SurdReal]:
    """Exact sort key ordering points by (real part, imaginary part)."""
    return (x.twice_real(), x.twice_imag())
