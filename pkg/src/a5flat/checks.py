"""The verification suite behind ``a5flat verify``.

Each check returns a :class:`CheckResult`; the suite is deterministic for a
given seed.  Sample counts can be reduced for quick runs.
"""

from __future__ import annotations

import cmath
import math
import random
import time
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from . import analytic as an
from . import billiards as bl
from . import star_complex as sc
from . import symmetry as sy
from .exact_plane import CycNum

#: the expected pairing: name -> (labels), by the reflection S_m
TABLE_ONE = {
    "a": (-6, 3),
    "b": (2, 5),
    "c": (6, -3),
    "d": (4, -1),
    "e": (-2, -5),
    "f": (-4, 1),
}


@dataclass
class CheckResult:
    name: str
    ok: bool
    detail: str = ""
    seconds: float = 0.0

    def line(self) -> str:
        return f"{'PASS' if self.ok else 'FAIL'} {self.name}: {self.detail}"


@dataclass
class SuiteConfig:
    seed: int = 0
    samples: int = 100
    freeness_samples: int = 10_000
    billiard_traces: int = 1000
    max_bounces: int = 50
    flow_steps: int = 10_000
    tol: float = 1e-9
    inject_fault: Optional[str] = None


def random_disk(rng: random.Random, radius: float = 1.0) -> complex:
    r = radius * math.sqrt(rng.random())
    return r * cmath.exp(2j * math.pi * rng.random())


def random_star_state(rng: random.Random) -> bl.BilliardState:
    while True:
        p = complex(rng.uniform(-1.75, 1.75), rng.uniform(-1.75, 1.75))
        if sc.in_star(p, 0.0) and not sc.on_boundary(p):
            return bl.BilliardState(p, cmath.exp(2j * math.pi * rng.random()))


# ---------------------------------------------------------------------------
# exact combinatorics


def check_table_one(cfg: SuiteConfig) -> CheckResult:
    labels = None
    if cfg.inject_fault == "edge-label":
        # swap the labels of two edges in different pairs
        labels = {"A0": 2, "B0": 1}
    pairs = sc.edge_pairs(labels=labels)
    got = {p.name: p.labels for p in pairs}
    ok = got == TABLE_ONE
    for p in pairs:
        e1, e2 = p.edges
        d1, d2 = e1.direction, e2.direction
        ok &= d1 == d2 or d1 == -d2
        s = sc.pair_reflection(p.m)
        ok &= {s(e1.p), s(e1.q)} == {e2.p, e2.q}
    covered = sorted(e.name for p in pairs for e in p.edges)
    ok &= len(covered) == 12 and len(set(covered)) == 12
    return CheckResult("table-1 pairing", ok, " ".join(f"{k}={v}" for k, v in sorted(got.items())))


def check_gvee_orbits(cfg: SuiteConfig) -> CheckResult:
    orbits = sy.gvee_orbits()
    want = {frozenset("ade"), frozenset("bcf")}
    d_orbit = sy.gvee_orbit("d")
    f_orbit = sy.gvee_orbit("f")
    ok = orbits == want and d_orbit == frozenset("ade") and f_orbit == frozenset("bcf")
    text = " ".join("{" + ",".join(sorted(o)) + "}" for o in sorted(orbits, key=sorted))
    return CheckResult("G-vee orbits of edge pairs", ok, text)


def check_vertex_orbits(cfg: SuiteConfig) -> CheckResult:
    orbits = sy.vertex_orbits()
    sizes = sorted(len(o) for o in orbits)
    tips = [o for o in orbits if all(n.startswith("T") for n in o)]
    union = frozenset().union(*tips) if tips else frozenset()
    rot_orbits = sy.vertex_orbits(sy.G_TILDE)
    ok = (
        sizes == [3, 3, 6]
        and union == frozenset(f"T{k}" for k in range(6))
        and frozenset({"T0", "T2", "T4"}) in orbits
        and sorted(len(o) for o in rot_orbits) == [6, 6]
    )
    return CheckResult("vertex orbits", ok, f"sizes {sizes}, tips combined {len(union)}")


def check_triangulations(cfg: SuiteConfig) -> CheckResult:
    base = sc.quotient_triangulation("base")
    ident = sc.quotient_triangulation("identified")
    orbit = sc.quotient_triangulation("orbit")
    V, E, F = orbit.counts
    g = sc.genus_from_counts(V, E, F)
    ok = (
        base.counts == (12, 24, 12)
        and orbit.counts == (4, 18, 12)
        and orbit.euler == -2
        and g == 2
        and orbit.is_closed_surface()
    )
    detail = f"base {base.counts}, identified {ident.counts}, counts (4,18,12)={orbit.counts}, chi = {orbit.euler}, g = {g}"
    return CheckResult("quotient triangulation", ok, detail)


def check_genus(cfg: SuiteConfig) -> CheckResult:
    sphere = sc.sphere_triangulation()
    cover = sc.double_cover_triangulation()
    g_s = sc.genus_from_counts(8, 18, 12)
    g_c = sc.genus_from_counts(10, 36, 24)
    g_q = sc.genus_from_counts(4, 18, 12)
    ok = (
        (g_s, g_c, g_q) == (0, 2, 2)
        and sphere.counts == (8, 18, 12)
        and cover.counts == (10, 36, 24)
        and sphere.is_closed_surface()
        and cover.is_closed_surface()
        and sc.barycentric_refinement(cover).euler == cover.euler
    )
    return CheckResult("genus computations", ok, f"sphere {g_s}, double cover {g_c}, quotient {g_q}")


# ---------------------------------------------------------------------------
# groups


def check_group_relations(cfg: SuiteConfig) -> CheckResult:
    R, U, E = sy.R, sy.U, sy.E
    V = R**2
    UR = U * R
    ok = R**6 == E and U * U == E and R * U == U * R.inverse()
    ok &= V**3 == E and UR * UR == E and V * UR == UR * V.inverse()
    ok &= sy.generated_group([V, UR]) == frozenset(sy.G_VEE)
    ok &= len(sy.generated_group([R])) == 6
    rng = random.Random(cfg.seed)
    for _ in range(cfg.samples):
        a, b, c = (sy.random_affine(rng) for _ in range(3))
        ok &= sy.compose(sy.compose(a, b), c) == sy.compose(a, sy.compose(b, c))
        ok &= sy.compose(a, sy.inverse(a)) == sy.IDENTITY
    ok &= sy.rotation_lattice_closure()
    Ru1 = sy.generator_image(1, 1)
    ok &= Ru1 == sy.LATTICE_GENERATORS[1] + sy.LATTICE_GENERATORS[3]
    return CheckResult("group relations", ok, "rotation, dihedral and affine laws")


def check_freeness(cfg: SuiteConfig) -> CheckResult:
    rng = random.Random(cfg.seed + 1)
    n = cfg.freeness_samples
    bad = 0
    for i in range(n):
        g = sy.random_affine(rng)
        if g.is_identity():
            g = sy.AffineElem(1)
        if i % 2:
            # exact points of Z[zeta] off the lattice
            while True:
                z = CycNum(*(rng.randint(-6, 6) for _ in range(4)))
                if not sy.in_vplus(z):
                    break
        else:
            z = complex(rng.uniform(-8, 8), rng.uniform(-8, 8))
        bad += not sy.freeness_check(g, z)
    # lattice invariance on sampled orbits
    inv_ok = True
    for _ in range(cfg.samples):
        v = CycNum(rng.randint(-9, 9), 0, rng.randint(-9, 9), 0)
        for gen in [sy.AffineElem(1)] + [sy.translation(u) for u in sy.LATTICE_GENERATORS.values()]:
            inv_ok &= sy.in_vplus(sy.act(gen, v))
        inv_ok &= sy.in_vplus(sy.act(sy.random_affine(rng), v))
    return CheckResult("free action and lattice invariance", bad == 0 and inv_ok, f"{n} samples, {bad} fixed")


# ---------------------------------------------------------------------------
# analysis


def check_constant(cfg: SuiteConfig) -> CheckResult:
    t0 = time.perf_counter()
    raw = an.raw_integral()
    dt = time.perf_counter() - t0
    beta = an.raw_constant_beta()
    ok = abs(raw - beta) <= 1e-9 and dt < 1.0
    return CheckResult("constant", ok, f"raw {raw:.10f}, beta {beta:.10f}, C {an.constant_C():.10f}")


def check_equivariance(cfg: SuiteConfig) -> CheckResult:
    rng = random.Random(cfg.seed + 2)
    w = cmath.exp(1j * math.pi / 3)
    worst = 0.0
    conj_worst = 0.0
    for _ in range(cfg.samples):
        xi = random_disk(rng, 0.999)
        worst = max(worst, abs(an.develop([0, w * xi]) - w * an.develop([0, xi])))
        mid = random_disk(rng, 0.999)
        conj_worst = max(
            conj_worst,
            abs(an.develop([0, mid.conjugate(), xi.conjugate()]) - an.develop([0, mid, xi]).conjugate()),
        )
    ok = worst <= 1e-9 and conj_worst <= 1e-9
    return CheckResult("rotation equivariance of F", ok, f"max error {worst:.2e}, conjugation {conj_worst:.2e}")


def check_straightening(cfg: SuiteConfig) -> CheckResult:
    rng = random.Random(cfg.seed + 3)
    worst = max(an.straightening_residual(random_disk(rng, 0.999)) for _ in range(cfg.samples))
    tr = an.hamiltonian_flow(an.SurfacePoint.on_sheet(0), 1.0, 0.5)
    dev = an.developed_flow(tr)
    affine = float(np.max(np.abs(dev - tr.times)))
    alpha = cmath.exp(0.7j)
    start = an.SurfacePoint.on_sheet(0.2 + 0.1j)
    tr2 = an.hamiltonian_flow(start, alpha, 0.5)
    dev2 = an.developed_flow(tr2)
    affine = max(affine, float(np.max(np.abs(dev2 - (an.developing_map(start) + tr2.times * alpha)))))
    ok = worst <= 1e-10 and affine <= 1e-7
    return CheckResult("straightening", ok, f"|F'eta-1| {worst:.2e}, flow affine residual {affine:.2e}")


def check_conservation(cfg: SuiteConfig) -> CheckResult:
    rng = random.Random(cfg.seed + 4)
    worst, steps = 0.0, 0
    for _ in range(3):
        start = an.SurfacePoint.on_sheet(random_disk(rng, 0.8))
        alpha = cmath.exp(2j * math.pi * rng.random())
        h = 1e-3
        tr = an.hamiltonian_flow(start, alpha, cfg.flow_steps * h, tol=cfg.tol, h_max=h)
        worst = max(worst, tr.max_drift)
        steps = max(steps, tr.n_steps)
    ok = worst <= 1e-9
    return CheckResult("energy conservation", ok, f"max |H| {worst:.2e} over {steps} steps")


def random_loop(rng: random.Random, n_enclosed: int) -> tuple[list, int]:
    """A closed polygon around n_enclosed (0, 1 or 2) adjacent branch points."""
    k = rng.randrange(6)
    roots = an.BRANCH_POINTS
    sample = 48
    if n_enclosed == 0:
        c = random_disk(rng, 0.4)
        r = 0.1 + 0.3 * rng.random()
    elif n_enclosed == 1:
        c = roots[k] + random_disk(rng, 0.05)
        r = 0.15 + 0.3 * rng.random()
    else:
        c = 0.5 * (roots[k] + roots[(k + 1) % 6]) + random_disk(rng, 0.05)
        r = 0.6 + 0.1 * rng.random()
    pts = [c + r * cmath.exp(2j * math.pi * j / sample) for j in range(sample)]
    pts.append(pts[0])
    count = int(sum(abs(z - c) < r for z in roots))
    return pts, count


def check_monodromy(cfg: SuiteConfig) -> CheckResult:
    rng = random.Random(cfg.seed + 5)
    bad = 0
    for i in range(50):
        pts, count = random_loop(rng, i % 3)
        path = an.PlanePath(pts)
        xi0 = path.start
        eta0 = cmath.sqrt(2 * (1 - xi0**6))
        eta1 = an.eta_continue(path, eta0)
        want = -eta0 if count % 2 else eta0
        bad += abs(eta1 - want) > 1e-8
    return CheckResult("monodromy", bad == 0, f"50 loops, {bad} wrong")


def check_isometries(cfg: SuiteConfig) -> CheckResult:
    rng = random.Random(cfg.seed + 6)
    pts = [an.SurfacePoint.on_sheet(0)] + [an.SurfacePoint.on_sheet(random_disk(rng, 0.9)) for _ in range(10)]
    worst = max(an.isometry_residual(g, p) for g in ("R", "U") for p in pts)
    ident = max(an.isometry_residual("e", p) for p in pts)
    return CheckResult("isometries R and U", worst <= 1e-6 and ident <= 1e-9, f"max {worst:.2e}, identity {ident:.2e}")


def check_incompleteness(cfg: SuiteConfig) -> CheckResult:
    C = an.constant_C()
    mid = an.inverse_develop(1j * math.sqrt(3) / 2 * C)
    fwd = an.hamiltonian_flow(mid, 1.0, 2 * C)
    bwd = an.hamiltonian_flow(mid, 1.0, -2 * C)
    ok = fwd.incomplete_at is not None and bwd.incomplete_at is not None
    total = (fwd.incomplete_at or 0) - (bwd.incomplete_at or 0)
    ok &= abs(total - C) <= 1e-4
    tr = bl.trace(bl.BilliardState(sc.build_star().vertices["H2"].__complex__(), 1.0), 1)
    ok &= tr.events[0].kind == "vertex-reversal" and abs(tr.events[0].time - 1.0) <= 1e-4
    return CheckResult("geodesic incompleteness", ok, f"edge traversal time {total:.8f} vs C {C:.8f}")


# ---------------------------------------------------------------------------
# billiards


def check_round_trips(cfg: SuiteConfig) -> CheckResult:
    rng = random.Random(cfg.seed + 7)
    worst, done = 0.0, 0
    while done < cfg.billiard_traces:
        st = random_star_state(rng)
        tr = bl.trace(st, rng.randint(1, cfg.max_bounces))
        if any(e.kind == "vertex-reversal" for e in tr.events):
            continue
        fo = bl.fold(bl.unfold(tr))
        if len(fo.bounces) != len(tr.bounces):
            worst = math.inf
            break
        for a, b in zip(tr.states, fo.states):
            worst = max(worst, abs(a.position - b.position), abs(a.direction - b.direction))
        done += 1
    return CheckResult("unfold/fold round trip", worst <= 1e-9, f"{done} traces, max deviation {worst:.2e}")


def check_trace_equivariance(cfg: SuiteConfig) -> CheckResult:
    rng = random.Random(cfg.seed + 8)
    w = cmath.exp(1j * math.pi / 3)
    ok = True
    for _ in range(20):
        st = random_star_state(rng)
        a = bl.trace(st, 50)
        b = bl.trace(st.rotated(), 50)
        ok &= len(a.events) == len(b.events)
        for ea, eb in zip(a.events, b.events):
            ok &= ea.kind == eb.kind and abs(w * ea.location - eb.location) <= 1e-9
            if ea.kind == "edge-reflection":
                ok &= bl._rotate_label(ea.ident, 1) == eb.ident
    return CheckResult("rotation equivariance of traces", ok, "20 traces of 50 bounces")


CHECKS: list[Callable[[SuiteConfig], CheckResult]] = [
    check_table_one,
    check_gvee_orbits,
    check_vertex_orbits,
    check_triangulations,
    check_genus,
    check_group_relations,
    check_freeness,
    check_constant,
    check_equivariance,
    check_straightening,
    check_conservation,
    check_monodromy,
    check_isometries,
    check_incompleteness,
    check_round_trips,
    check_trace_equivariance,
]


def run_suite(cfg: Optional[SuiteConfig] = None) -> list[CheckResult]:
    cfg = cfg or SuiteConfig()
    results = []
    for check in CHECKS:
        t0 = time.perf_counter()
        try:
            res = check(cfg)
        except Exception as exc:  # a crash is a failed check, reported by name
            res = CheckResult(check.__name__.removeprefix("check_").replace("_", " "), False, f"error: {exc}")
        res.seconds = time.perf_counter() - t0
        results.append(res)
    return results
