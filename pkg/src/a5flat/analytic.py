"""Floating-point analysis on the level set  eta**2 / 2 + xi**6 = 1.

The surface is the double cover of the xi-plane branched over the six sixth
roots of unity.  This module tracks the square root
``sqrt(1 - xi**6)`` along polygonal contours, integrates the developing
integral

    F(xi) = 1/sqrt(2) * integral_0^xi dw / sqrt(1 - w**6),

integrates the real-time Hamiltonian flow ``xi' = alpha*eta``,
``eta' = -6*alpha*xi**5`` and measures how well the developing map
straightens the flow and how the rotation/conjugation symmetries preserve the
flat metric ``|d xi|**2 / |eta|**2``.

Times and developed coordinates are absolute here (not in units of C).
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Iterable, Optional

import numpy as np

__all__ = [
    "BRANCH_POINTS",
    "BranchPointError",
    "RefinementError",
    "QuadratureError",
    "DriftError",
    "TruncationError",
    "SurfacePoint",
    "PlanePath",
    "FlowTrace",
    "hamiltonian",
    "sqrt_footnote",
    "principal_sqrt",
    "eta_principal",
    "eta_continue",
    "develop",
    "develop_points",
    "raw_integral",
    "raw_constant_beta",
    "constant_C",
    "hamiltonian_flow",
    "developed_flow",
    "developing_map",
    "inverse_develop",
    "straightening_residual",
    "isometry_residual",
]

BRANCH_POINTS = np.exp(2j * np.pi * np.arange(6) / 6)
_CONJ_ROOTS = np.conj(BRANCH_POINTS)
SQRT2 = math.sqrt(2.0)
DEFAULT_EPS = 1e-6


class BranchPointError(ValueError):
    """Input is (numerically) at one of the branch points xi**6 = 1."""


class RefinementError(RuntimeError):
    """Stepwise continuation could not resolve which sheet to follow."""


class QuadratureError(RuntimeError):
    pass


class DriftError(RuntimeError):
    """The integrated flow left the level set by more than the tolerance."""


class TruncationError(RuntimeError):
    def __init__(self, message: str, estimate: float) -> None:
        super().__init__(message)
        self.estimate = estimate


def hamiltonian(xi: complex, eta: complex) -> complex:
    return 0.5 * eta * eta + xi**6 - 1.0


def _nearest_branch_distance(xi: complex) -> float:
    return float(np.min(np.abs(BRANCH_POINTS - xi)))


def sqrt_footnote(xi: complex, tol: float = 1e-12) -> complex:
    """Square root built from the arguments of omega_k - xi taken in [0, 2*pi).

    The product of the factors omega_k - xi is xi**6 - 1, so this returns a
    square root of xi**6 - 1 (not of 1 - xi**6).
    """
    xi = complex(xi)
    if abs(xi**6 - 1.0) < tol:
        raise BranchPointError(f"xi = {xi} is a branch point")
    diffs = BRANCH_POINTS - xi
    theta = np.mod(np.angle(diffs), 2 * np.pi)
    modulus = np.prod(np.sqrt(np.abs(diffs)))
    return complex(modulus * np.exp(0.5j * np.sum(theta)))


def principal_sqrt(xi):
    """sqrt(1 - xi**6) continued from 1 at the origin along straight rays.

    Equals prod_k sqrt(1 - xi/omega_k) with principal square roots; it is
    holomorphic off the rays [omega_k, infinity).  Vectorised over arrays.
    """
    xi = np.asarray(xi, dtype=complex)
    factors = np.sqrt(1.0 - xi[..., None] * _CONJ_ROOTS)
    out = np.prod(factors, axis=-1)
    return complex(out) if out.ndim == 0 else out


def eta_principal(xi):
    return SQRT2 * principal_sqrt(xi)


@dataclass(frozen=True)
class SurfacePoint:
    """A point of the surface away from eta = 0, with a sheet tag.

    ``sheet`` is +1 when eta agrees with the continuation of
    sqrt(2(1 - xi**6)) from (0, sqrt 2) along the straight segment [0, xi],
    and -1 for the opposite sign.
    """

    xi: complex
    eta: complex
    sheet: int = 1

    def __post_init__(self) -> None:
        if abs(hamiltonian(self.xi, self.eta)) > 1e-9:
            raise ValueError(f"({self.xi}, {self.eta}) is not on the level set H = 0")
        if abs(self.eta) == 0.0:
            raise BranchPointError("eta = 0 is excluded from the surface")
        if self.sheet not in (1, -1):
            raise ValueError("sheet must be +1 or -1")

    @classmethod
    def on_sheet(cls, xi: complex, sheet: int = 1) -> SurfacePoint:
        xi = complex(xi)
        if _nearest_branch_distance(xi) < 1e-12:
            raise BranchPointError(f"xi = {xi} is a branch point")
        return cls(xi, sheet * eta_principal(xi), sheet)

    @classmethod
    def from_pair(cls, xi: complex, eta: complex) -> SurfacePoint:
        """Build from coordinates, inferring the sheet tag."""
        ref = eta_principal(complex(xi))
        sheet = 1 if abs(eta - ref) <= abs(eta + ref) else -1
        return cls(complex(xi), complex(eta), sheet)

    @property
    def H(self) -> complex:
        return hamiltonian(self.xi, self.eta)


def _segment_distance(p: complex, q: complex, c: complex) -> float:
    d = q - p
    L2 = (d * d.conjugate()).real
    if L2 == 0.0:
        return abs(c - p)
    t = ((c - p) * d.conjugate()).real / L2
    t = min(1.0, max(0.0, t))
    return abs(p + t * d - c)


class PlanePath:
    """Polygonal contour in the xi-plane kept away from the branch points.

    With ``allow_branch_end`` the final waypoint may be a branch point; the
    developing integral then treats that endpoint with a square-root
    substitution.
    """

    def __init__(
        self,
        waypoints: Iterable[complex],
        eps: float = DEFAULT_EPS,
        allow_branch_end: bool = False,
    ) -> None:
        pts = np.asarray(list(waypoints), dtype=complex)
        if pts.ndim != 1 or len(pts) == 0:
            raise ValueError("a path needs at least one waypoint")
        self.points = pts
        self.eps = eps
        self.branch_end: Optional[int] = None
        if allow_branch_end and len(pts) > 1:
            k = int(np.argmin(np.abs(BRANCH_POINTS - pts[-1])))
            if abs(BRANCH_POINTS[k] - pts[-1]) < 1e-12:
                self.branch_end = k
                pts[-1] = BRANCH_POINTS[k]
        n_check = len(pts) - (1 if self.branch_end is not None else 0)
        for i in range(max(n_check, 1)):
            p = pts[i]
            q = pts[i + 1] if i + 1 < len(pts) else pts[i]
            for k, c in enumerate(BRANCH_POINTS):
                if self.branch_end is not None and i == len(pts) - 2 and k == self.branch_end:
                    # the final segment may touch its own endpoint, nothing else
                    if _segment_distance(p, q, c) < 0.5 * abs(q - c) - 1e-15 and abs(q - c) > 1e-12:
                        raise BranchPointError("path crosses a branch point")
                    continue
                if _segment_distance(p, q, c) < eps:
                    raise BranchPointError(
                        f"segment {i} passes within {eps:g} of branch point {c:.6f}"
                    )

    @classmethod
    def straight(cls, a: complex, b: complex, **kw) -> PlanePath:
        return cls([a, b], **kw)

    @classmethod
    def circle(cls, center: complex, radius: float, n: int = 64, **kw) -> PlanePath:
        """Closed polygon through n points of a circle, starting at angle 0."""
        ang = 2 * np.pi * np.arange(n + 1) / n
        pts = center + radius * np.exp(1j * ang)
        pts[-1] = pts[0]
        return cls(pts, **kw)

    def __len__(self) -> int:
        return len(self.points)

    @property
    def start(self) -> complex:
        return complex(self.points[0])

    @property
    def end(self) -> complex:
        return complex(self.points[-1])


def _as_path(path) -> PlanePath:
    return path if isinstance(path, PlanePath) else PlanePath(path)


# ---------------------------------------------------------------------------
# stepwise continuation of eta


def eta_continue(
    path,
    eta_start: complex,
    max_halvings: int = 48,
) -> complex:
    """Continue eta = sqrt(2(1 - xi**6)) along ``path`` by small steps.

    At each step the two candidate roots are compared with the previous value
    and the nearer one is kept; a step is accepted only when that choice is
    unambiguous (change below a quarter of the separation of the candidates),
    otherwise it is halved.
    """
    path = _as_path(path)
    xi0 = path.start
    if abs(hamiltonian(xi0, eta_start)) > 1e-9:
        raise ValueError("eta_start does not lie over the path start")
    eta = complex(eta_start)
    pts = path.points
    for i in range(len(pts) - 1):
        p, q = complex(pts[i]), complex(pts[i + 1])
        length = abs(q - p)
        if length == 0.0:
            continue
        s = 0.0
        h = min(1.0, 0.1 / length)
        min_h = 2.0**-max_halvings * min(1.0, 0.1 / length)
        while s < 1.0:
            h = min(h, 1.0 - s)
            w = p + (s + h) * (q - p)
            c = cmath.sqrt(2.0 * (1.0 - w**6))
            if abs(c - eta) > abs(c + eta):
                c = -c
            if abs(c - eta) <= 0.5 * abs(c) and abs(c) > 0.0:
                s += h
                eta = c
                h *= 1.5
            else:
                h *= 0.5
                if h < min_h:
                    raise RefinementError(
                        f"cannot resolve the sheet near xi = {w:.6g}; step too coarse"
                    )
    return eta


# ---------------------------------------------------------------------------
# developing integral


_GAUSS_LO = np.polynomial.legendre.leggauss(10)
_GAUSS_HI = np.polynomial.legendre.leggauss(21)


def _panel(f, a: float, b: float) -> tuple[complex, complex]:
    mid, half = 0.5 * (a + b), 0.5 * (b - a)
    x_lo, w_lo = _GAUSS_LO
    x_hi, w_hi = _GAUSS_HI
    lo = half * np.dot(w_lo, f(mid + half * x_lo))
    hi = half * np.dot(w_hi, f(mid + half * x_hi))
    return hi, abs(hi - lo)


def _adaptive(f, tol: float, scale: float, max_depth: int = 60, max_panels: int = 20000) -> complex:
    """Integrate f over [0, 1] by adaptive bisection of Gauss panels.

    A panel is accepted when its error estimate is below ``tol`` relative to
    the larger of its own value and ``scale`` times its width.  Panels whose
    estimate stops shrinking under bisection are at the rounding floor and
    are accepted once that floor is below ``noise_tol`` relative.
    """
    noise_tol = 1e-11
    total = 0j
    stack = [(0.0, 1.0, 0, math.inf)]
    panels = 0
    while stack:
        a, b, depth, parent_err = stack.pop()
        val, err = _panel(f, a, b)
        panels += 1
        ref = max(abs(val), scale * (b - a))
        if err <= tol * ref or (err >= 0.5 * parent_err and err <= noise_tol * ref):
            total += val
        elif depth >= max_depth or panels >= max_panels:
            raise QuadratureError(f"no convergence on panel [{a:.3g}, {b:.3g}]")
        else:
            m = 0.5 * (a + b)
            stack.append((m, b, depth + 1, err))
            stack.append((a, m, depth + 1, err))
    return total


class _FactorTracker:
    """Continuous square roots of each factor 1 - w/omega_k along segments.

    On a straight segment the value 1 - w/omega_k moves along a line that
    misses 0, so its argument stays within a window of width < pi; rotating
    that window onto the positive axis makes the principal root continuous.
    """

    def __init__(self, w0: complex, sqrt_start: Optional[complex]) -> None:
        a0 = 1.0 - w0 * _CONJ_ROOTS
        self.values = np.sqrt(a0)
        if sqrt_start is None:
            if abs(w0) > 1e-14:
                raise ValueError("path must start at 0 unless sqrt_start is supplied")
            sqrt_start = 1.0
        prod = np.prod(self.values)
        ratio = sqrt_start / prod
        if abs(ratio - 1.0) < 1e-6:
            pass
        elif abs(ratio + 1.0) < 1e-6:
            self.values[0] = -self.values[0]
        else:
            raise ValueError("sqrt_start is not a square root of 1 - w**6 at the start")

    def segment(self, p: complex, q: complex, skip: Optional[int] = None):
        """Return a vectorised continuous branch of the factors on [p, q]."""
        ap = 1.0 - p * _CONJ_ROOTS
        aq = 1.0 - q * _CONJ_ROOTS
        mid = np.angle(ap) + 0.5 * np.angle(aq / np.where(ap == 0, 1, ap))
        rot_half = np.exp(0.5j * mid)
        rot = np.exp(-1j * mid)
        start_vals = rot_half * np.sqrt(ap * rot)
        sign = np.where((start_vals * np.conj(self.values)).real >= 0, 1.0, -1.0)
        coeff = sign * rot_half
        if skip is not None:
            coeff[skip] = 1.0

        def branch(w):
            a = 1.0 - np.asarray(w)[..., None] * _CONJ_ROOTS
            vals = coeff * np.sqrt(a * rot)
            if skip is not None:
                vals[..., skip] = 1.0
            return np.prod(vals, axis=-1)

        def finish():
            vals = coeff * np.sqrt(aq * rot)
            if skip is not None:
                vals[skip] = self.values[skip]
            self.values = vals

        return branch, finish


def develop_points(
    path,
    sqrt_start: Optional[complex] = None,
    tol: float = 1e-13,
) -> np.ndarray:
    """Developed values at every waypoint of ``path``.

    The first entry is 0; entry i is 1/sqrt(2) times the integral of
    dw / sqrt(1 - w**6) along the first i segments, the root being continued
    from ``sqrt_start`` (default: 1 at w = 0).
    """
    path = _as_path(path)
    pts = path.points
    tracker = _FactorTracker(complex(pts[0]), sqrt_start)
    out = np.zeros(len(pts), dtype=complex)
    acc = 0j
    last = len(pts) - 2
    for i in range(len(pts) - 1):
        p, q = complex(pts[i]), complex(pts[i + 1])
        if p == q:
            out[i + 1] = acc
            continue
        scale = abs(q - p)
        if i == last and path.branch_end is not None:
            j = path.branch_end
            branch, _ = tracker.segment(p, q, skip=j)
            # factor j equals u * r with w = q + (p - q) u**2
            r = cmath.sqrt((q - p) * _CONJ_ROOTS[j])
            if (r * tracker.values[j].conjugate()).real < 0:
                r = -r

            def f(u, branch=branch, r=r, p=p, q=q):
                w = q + (p - q) * u * u
                return 2.0 * (q - p) / (r * branch(w))

            acc += _adaptive(f, tol, scale) / SQRT2
        else:
            branch, finish = tracker.segment(p, q)

            def f(t, branch=branch, p=p, q=q):
                return (q - p) / branch(p + t * (q - p))

            acc += _adaptive(f, tol, scale) / SQRT2
            finish()
        out[i + 1] = acc
    return out


def develop(path, sqrt_start: Optional[complex] = None, tol: float = 1e-13) -> complex:
    """F along a contour: 1/sqrt(2) * integral dw / sqrt(1 - w**6).

    ``path`` is a :class:`PlanePath` (or a waypoint list) starting at 0.
    """
    return complex(develop_points(path, sqrt_start, tol)[-1])


def raw_constant_beta() -> float:
    """Gamma(1/6) Gamma(1/2) / (6 Gamma(2/3)) = integral_0^1 dw/sqrt(1-w^6)."""
    return math.gamma(1 / 6) * math.gamma(0.5) / (6.0 * math.gamma(2 / 3))


def raw_integral() -> float:
    """integral_0^1 dw / sqrt(1 - w**6) by quadrature."""
    z = develop(PlanePath([0.0, 1.0], allow_branch_end=True))
    return SQRT2 * z.real


def constant_C() -> float:
    """The side length C = F(1), with the 1/sqrt(2) normalisation of F."""
    return raw_constant_beta() / SQRT2


# ---------------------------------------------------------------------------
# Hamiltonian flow

# Dormand-Prince 5(4) tableau
_DP_C = (0.0, 1 / 5, 3 / 10, 4 / 5, 8 / 9, 1.0, 1.0)
_DP_A = (
    (),
    (1 / 5,),
    (3 / 40, 9 / 40),
    (44 / 45, -56 / 15, 32 / 9),
    (19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729),
    (9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656),
    (35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84),
)
_DP_B = (35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84, 0.0)
_DP_E = (
    71 / 57600,
    0.0,
    -71 / 16695,
    71 / 1920,
    -17253 / 339200,
    22 / 525,
    -1 / 40,
)


def _dp_step(xi: complex, eta: complex, alpha: complex, h: float):
    kx = [0j] * 7
    ke = [0j] * 7
    kx[0] = alpha * eta
    ke[0] = -6.0 * alpha * xi**5
    for s in range(1, 7):
        a = _DP_A[s]
        x = xi + h * sum(a[j] * kx[j] for j in range(s))
        e = eta + h * sum(a[j] * ke[j] for j in range(s))
        kx[s] = alpha * e
        ke[s] = -6.0 * alpha * x**5
    xn = xi + h * sum(_DP_B[j] * kx[j] for j in range(6))
    en = eta + h * sum(_DP_B[j] * ke[j] for j in range(6))
    errx = h * sum(_DP_E[j] * kx[j] for j in range(7))
    erre = h * sum(_DP_E[j] * ke[j] for j in range(7))
    return xn, en, errx, erre


@dataclass
class FlowTrace:
    """Samples of a real-time integral curve t -> gamma(t * alpha)."""

    times: np.ndarray
    xi: np.ndarray
    eta: np.ndarray
    alpha: complex
    max_drift: float
    incomplete_at: Optional[float] = None
    branch_point: Optional[complex] = None
    n_steps: int = 0
    escaped: bool = False  # xi ran off to infinity in finite time

    @property
    def samples(self) -> list[SurfacePoint]:
        return [SurfacePoint.from_pair(x, e) for x, e in zip(self.xi, self.eta)]

    @property
    def end(self) -> tuple[complex, complex]:
        return complex(self.xi[-1]), complex(self.eta[-1])


def _refine_closest(xi, eta, t, alpha, iters: int = 30):
    """Newton on Re(conj(eta) eta') = 0, re-integrating short hops."""
    for _ in range(iters):
        deta = -6.0 * alpha * xi**5
        g2 = abs(deta) ** 2
        if g2 == 0.0:
            break
        dt = -(eta * deta.conjugate()).real / g2
        if abs(dt) < 1e-15:
            break
        n = max(1, int(math.ceil(abs(dt) / 1e-3)))
        h = dt / n
        for _ in range(n):
            xi, eta, _, _ = _dp_step(xi, eta, alpha, h)
        t += dt
    return xi, eta, t


def hamiltonian_flow(
    start: SurfacePoint,
    alpha: complex,
    t_end: float,
    tol: float = 1e-9,
    rtol: float = 1e-12,
    h_max: float = 0.05,
    eps: float = DEFAULT_EPS,
    max_steps: int = 2_000_000,
    escape_radius: float = 1e4,
) -> FlowTrace:
    """Integrate xi' = alpha*eta, eta' = -6 alpha xi**5 for t in [0, t_end].

    Adaptive Dormand-Prince 5(4) steps; a step is also rejected when it moves
    H by more than tol/10.  If the curve comes within ``eps`` of a branch
    point the integration stops and the time of closest approach is recorded
    in ``incomplete_at``.  Curves along which xi blows up (|xi| passes
    ``escape_radius``) are also incomplete: near infinity xi' ~ xi**3, so the
    remaining time 1/(2 sqrt2 |xi|**2) is added and ``escaped`` is set.  A
    negative ``t_end`` integrates backwards.
    """
    alpha = complex(alpha)
    if abs(abs(alpha) - 1.0) > 1e-12:
        raise ValueError("alpha must be a unit complex number")
    direction = 1.0 if t_end >= 0 else -1.0
    span = abs(t_end)
    xi, eta = complex(start.xi), complex(start.eta)
    H0 = hamiltonian(xi, eta)
    times, xs, es = [0.0], [xi], [eta]
    max_drift = abs(H0)
    t = 0.0
    h = min(h_max, 1e-3, span) if span > 0 else 0.0
    steps = 0
    prev_eta, prev2_eta = abs(eta), math.inf
    incomplete = None
    hit = None
    escaped = False
    while t < span and steps < max_steps:
        h = min(h, span - t, h_max)
        xn, en, ex, ee = _dp_step(xi, eta, direction * alpha, h)
        scale_x = 1e-12 + rtol * max(abs(xi), abs(xn))
        scale_e = 1e-12 + rtol * max(abs(eta), abs(en))
        err = max(abs(ex) / scale_x, abs(ee) / scale_e)
        # relative to the size of xi**6 once |xi| > 1, where float H loses absolute accuracy
        drift = abs(hamiltonian(xn, en) - hamiltonian(xi, eta)) / max(1.0, abs(xn) ** 6)
        if err > 1.0 or drift > tol / 10:
            h *= max(0.1, 0.9 * err ** -0.2) if err > 1.0 else 0.5
            if h < 1e-15:
                raise DriftError("step size underflow while integrating the flow")
            continue
        t += h
        xi, eta = xn, en
        steps += 1
        times.append(direction * t)
        xs.append(xi)
        es.append(eta)
        max_drift = max(max_drift, abs(hamiltonian(xi, eta)) / max(1.0, abs(xi) ** 6))
        if abs(xi) > escape_radius:
            incomplete = direction * (t + 1.0 / (2.0 * SQRT2 * abs(xi) ** 2))
            escaped = True
            break
        # closest approach to {eta = 0}: a local minimum of |eta|
        cur = abs(eta)
        if prev_eta < cur and prev_eta < prev2_eta and prev_eta < 0.05:
            xr, er, tr = _refine_closest(
                complex(xs[-2]), complex(es[-2]), abs(times[-2]), direction * alpha
            )
            if _nearest_branch_distance(xr) < eps:
                incomplete = direction * tr
                hit = complex(BRANCH_POINTS[int(np.argmin(np.abs(BRANCH_POINTS - xr)))])
                times[-1], xs[-1], es[-1] = incomplete, xr, er
                break
        prev2_eta, prev_eta = prev_eta, cur
        h *= min(5.0, 0.9 * max(err, 1e-10) ** -0.2)
    if max_drift > tol:
        raise DriftError(f"|H| reached {max_drift:.3g} > tol = {tol:g}")
    return FlowTrace(
        times=np.array(times),
        xi=np.array(xs),
        eta=np.array(es),
        alpha=alpha,
        max_drift=max_drift,
        incomplete_at=incomplete,
        branch_point=hit,
        n_steps=steps,
        escaped=escaped,
    )


def developing_map(point: SurfacePoint, path=None) -> complex:
    """delta(xi, eta): F along [0, xi] (or ``path``), signed by the sheet."""
    if path is None:
        path = PlanePath([0.0, point.xi])
    return point.sheet * develop(path)


def developed_flow(trace: FlowTrace, stride: int = 1) -> np.ndarray:
    """Developed image of every ``stride``-th sample of a flow trace.

    The developing integral is continued along the recorded xi-curve with the
    root fixed by the flow's own eta, so the result is the analytic
    continuation of delta along the geodesic.
    """
    idx = np.arange(0, len(trace.times), stride)
    if idx[-1] != len(trace.times) - 1:
        idx = np.append(idx, len(trace.times) - 1)
    start = SurfacePoint.from_pair(trace.xi[0], trace.eta[0])
    z0 = developing_map(start)
    pts = trace.xi[idx]
    if trace.branch_point is not None:
        pts = pts.copy()
        pts[-1] = BRANCH_POINTS[int(np.argmin(np.abs(BRANCH_POINTS - pts[-1])))]
        path = PlanePath(pts, allow_branch_end=True)
    else:
        path = PlanePath(pts, eps=1e-9)
    z = develop_points(path, sqrt_start=trace.eta[0] / SQRT2)
    out = np.full(len(trace.times), np.nan, dtype=complex)
    out[idx] = z0 + z
    return out


def inverse_develop(z: complex, sheet: int = 1, tol: float = 1e-14) -> SurfacePoint:
    """Point of the principal sheet developing (straight path) onto z."""
    C = constant_C()
    xi = complex(z) / C
    for _ in range(60):
        Fx = develop(PlanePath([0.0, xi], eps=1e-12))
        dF = 1.0 / (SQRT2 * principal_sqrt(xi))
        step = (Fx - sheet * z) / dF
        xi -= step
        if abs(step) < tol:
            break
    else:
        raise RefinementError(f"Newton iteration for the preimage of {z} did not converge")
    return SurfacePoint.on_sheet(xi, sheet)


def straightening_residual(xi: complex, sheet: int = 1) -> float:
    """|F'(xi) * eta - 1| with eta continued stepwise on the given sheet."""
    xi = complex(xi)
    if _nearest_branch_distance(xi) < DEFAULT_EPS:
        raise BranchPointError(f"xi = {xi} is within eps of a branch point")
    dF = 1.0 / (SQRT2 * principal_sqrt(xi))
    eta = sheet * eta_continue(PlanePath([0.0, xi]), SQRT2)
    return abs(dF * eta - 1.0)


# ---------------------------------------------------------------------------
# metric symmetries


def _as_rot_reflect(elem) -> tuple[int, bool]:
    if isinstance(elem, str):
        table = {"e": (0, False), "R": (1, False), "U": (0, True)}
        if elem not in table:
            raise ValueError(f"unknown symmetry {elem!r}")
        return table[elem]
    if isinstance(elem, tuple):
        return int(elem[0]) % 6, bool(elem[1])
    return int(elem.rot) % 6, bool(elem.reflect)


def _surface_action(rot: int, reflect: bool, xi: complex, eta: complex):
    if reflect:
        xi, eta = xi.conjugate(), eta.conjugate()
    return cmath.exp(1j * math.pi * rot / 3) * xi, eta


def _metric(dxi_a: complex, dxi_b: complex, eta: complex) -> float:
    return (dxi_a * dxi_b.conjugate()).real / abs(eta) ** 2


def _pullback_discrepancy(rot, reflect, p: SurfacePoint, h: float) -> float:
    xi, eta = p.xi, p.eta
    vx = eta  # d xi of the Hamiltonian vector field
    directions = (vx, 1j * vx)

    def lift(x):
        c = cmath.sqrt(2.0 * (1.0 - x**6))
        return c if abs(c - eta) <= abs(c + eta) else -c

    images = []
    for v in directions:
        fwd = _surface_action(rot, reflect, xi + h * v, lift(xi + h * v))
        bwd = _surface_action(rot, reflect, xi - h * v, lift(xi - h * v))
        images.append((fwd[0] - bwd[0]) / (2 * h))
    _, eta_img = _surface_action(rot, reflect, xi, eta)
    worst = 0.0
    for a in range(2):
        for b in range(a, 2):
            before = _metric(directions[a], directions[b], eta)
            after = _metric(images[a], images[b], eta_img)
            worst = max(worst, abs(after - before))
    return worst


def isometry_residual(elem, sample: SurfacePoint, h: float = 1e-4) -> float:
    """Largest change of the flat metric under a rotation/conjugation symmetry.

    ``elem`` is ``"e"``, ``"R"``, ``"U"``, a ``(rot, reflect)`` pair or any
    object with ``rot`` and ``reflect`` attributes; the action on the surface
    is (xi, eta) -> (omega**rot * c(xi), c(eta)) with c conjugation when
    ``reflect``.  The pullback is measured by central differences along the
    Hamiltonian direction and its rotation by i.
    """
    rot, reflect = _as_rot_reflect(elem)
    coarse = _pullback_discrepancy(rot, reflect, sample, h)
    fine = _pullback_discrepancy(rot, reflect, sample, h / 2)
    estimate = abs(coarse - fine)
    if estimate > 1e-6:
        raise TruncationError(
            f"finite-difference step {h:g} too large (truncation ~ {estimate:.2g})", estimate
        )
    return fine
