"""Command-line front end.

Exit codes: 0 success, 1 a check failed, 2 usage or input error,
3 numerical failure.
"""

from __future__ import annotations

import argparse
import cmath
import math
import sys
import time
from pathlib import Path
from typing import Optional, Sequence

from . import analytic as an
from . import billiards as bl
from . import star_complex as sc
from . import symmetry as sy
from . import svg

EXIT_OK, EXIT_CHECK, EXIT_USAGE, EXIT_NUMERIC = 0, 1, 2, 3

_NUMERIC_ERRORS = (
    an.BranchPointError,
    an.RefinementError,
    an.QuadratureError,
    an.DriftError,
    an.TruncationError,
    bl.SingularIncidenceError,
    OverflowError,
)
_INPUT_ERRORS = (
    bl.BilliardDomainError,
    bl.UnfoldError,
    bl.TraceFormatError,
    sc.DomainError,
    sy.VPlusError,
)

CONFIG_KEYS = ("tol", "seed", "out", "window", "events", "alpha", "start")


class UsageError(Exception):
    pass


def _positive(text: str) -> float:
    v = float(text)
    if not v > 0:
        raise argparse.ArgumentTypeError("must be positive")
    return v


def _common() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--tol", type=_positive, default=1e-9, help="numerical tolerance")
    p.add_argument("--seed", type=int, default=0, help="seed for randomised checks")
    p.add_argument("--out", type=str, default=None, help="output file")
    p.add_argument("--window", type=_positive, default=5.0, help="tiling window radius (C units)")
    p.add_argument("--events", type=int, default=20, help="number of billiard bounces")
    p.add_argument("--alpha", type=float, default=0.0, help="direction angle in degrees")
    p.add_argument("--start", type=float, nargs=2, metavar=("X", "Y"), default=None,
                   help="start point (billiard: star coordinates; flow: xi)")
    p.add_argument("--config", type=str, default=None, help="key=value file of defaults")
    return p


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = argparse.ArgumentParser(prog="a5flat", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("constant", parents=[common], help="the side constant C")
    d = sub.add_parser("develop", parents=[common], help="developing integral along a polyline")
    d.add_argument("--to", type=float, nargs=2, metavar=("X", "Y"), help="endpoint of the straight path from 0")
    d.add_argument("--path", type=str, default=None, help="waypoints 'x,y x,y ...' starting at 0,0")
    f = sub.add_parser("flow", parents=[common], help="integrate the Hamiltonian flow")
    f.add_argument("--t-end", type=float, default=1.0, dest="t_end")
    f.add_argument("--sheet", type=int, choices=(1, -1), default=1)
    sub.add_parser("billiard", parents=[common], help="simulate a billiard and write a trace file")
    u = sub.add_parser("unfold", parents=[common], help="unfold a trace into a straight line")
    u.add_argument("--trace", type=str, default=None, help="trace file (default: simulate)")
    sub.add_parser("orbits", parents=[common], help="edge pairs and group orbits")
    e = sub.add_parser("euler", parents=[common], help="triangulation counts and genera")
    e.add_argument("--dump", choices=("base", "identified", "orbit", "sphere", "double-cover"), default=None)
    v = sub.add_parser("verify", parents=[common], help="run the full verification suite")
    v.add_argument("--inject-fault", dest="inject_fault", default=None, help=argparse.SUPPRESS)
    v.add_argument("--quick", action="store_true", help="reduced sample counts")
    r = sub.add_parser("render", parents=[common], help="write an SVG drawing")
    r.add_argument("target", choices=("star", "tiling", "trace"))
    r.add_argument("--trace", type=str, default=None, help="trace file for target 'trace'")
    return parser


def read_config(path: str) -> list[str]:
    """Turn a key=value file into argv tokens."""
    tokens: list[str] = []
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise UsageError(f"cannot read config {path}: {exc}") from exc
    for n, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise UsageError(f"{path}:{n}: expected key=value")
        key, value = (s.strip() for s in line.split("=", 1))
        if key not in CONFIG_KEYS:
            raise UsageError(f"{path}:{n}: unknown key {key!r}")
        tokens.append(f"--{key}")
        tokens.extend(value.split())
    return tokens


def parse(argv: Sequence[str]) -> argparse.Namespace:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.config:
        cfg_tokens = read_config(args.config)
        # config first so explicit flags, parsed later, win
        args = parser.parse_args([argv[0]] + cfg_tokens + list(argv[1:]))
    return args


def _emit(text: str, out: Optional[str]) -> None:
    if out is None:
        sys.stdout.write(text)
        return
    try:
        Path(out).write_text(text)
    except OSError as exc:
        raise UsageError(f"cannot write {out}: {exc}") from exc
    print(f"wrote {out}")


def _direction(args) -> complex:
    return cmath.exp(1j * math.radians(args.alpha))


# ---------------------------------------------------------------------------
# subcommands


def cmd_constant(args) -> int:
    t0 = time.perf_counter()
    raw = an.raw_integral()
    dt = time.perf_counter() - t0
    beta = an.raw_constant_beta()
    C = an.constant_C()
    diff = abs(raw - beta)
    print(f"raw integral      {raw:.15f}")
    print(f"beta closed form  {beta:.15f}")
    print(f"difference        {diff:.3e}")
    print(f"C = raw/sqrt(2)   {C:.15f}")
    print(f"quadrature time   {dt * 1e3:.2f} ms")
    return EXIT_OK if diff <= max(args.tol, 1e-9) else EXIT_CHECK


def cmd_develop(args) -> int:
    if args.path:
        pts = []
        for tok in args.path.split():
            x, y = tok.split(",")
            pts.append(complex(float(x), float(y)))
    elif args.to:
        pts = [0j, complex(*args.to)]
    else:
        raise UsageError("develop needs --to X Y or --path")
    path = an.PlanePath(pts, allow_branch_end=True)
    z = an.develop(path)
    C = an.constant_C()
    print(f"F = {z.real:.15f} {z.imag:+.15f}i")
    print(f"F/C = {z.real / C:.15f} {z.imag / C:+.15f}i")
    return EXIT_OK


def cmd_flow(args) -> int:
    xi = complex(*args.start) if args.start else 0j
    start = an.SurfacePoint.on_sheet(xi, args.sheet)
    tr = an.hamiltonian_flow(start, _direction(args), args.t_end, tol=args.tol)
    lines = [f"# flow alpha={args.alpha} deg steps={tr.n_steps} max|H|={tr.max_drift:.3e}"]
    if tr.escaped:
        lines.append(f"# incomplete at t={tr.incomplete_at:.12f}: xi escapes to infinity")
    elif tr.incomplete_at is not None:
        bp = tr.branch_point
        lines.append(f"# incomplete at t={tr.incomplete_at:.12f} near branch point {bp.real:.6f} {bp.imag:+.6f}i")
    stride = max(1, len(tr.times) // 200)
    for i in range(0, len(tr.times), stride):
        x, e = tr.xi[i], tr.eta[i]
        lines.append(f"{tr.times[i]:.12f} {x.real:.12f} {x.imag:.12f} {e.real:.12f} {e.imag:.12f}")
    _emit("\n".join(lines) + "\n", args.out)
    return EXIT_OK


def _billiard_start(args) -> bl.BilliardState:
    p = complex(*args.start) if args.start else complex(0.3, 0.1)
    return bl.BilliardState(p, _direction(args))


def cmd_billiard(args) -> int:
    tr = bl.trace(_billiard_start(args), args.events)
    _emit(bl.dump_trace(tr), args.out)
    return EXIT_OK


def _load_trace_file(path: str) -> bl.Trace:
    try:
        return bl.load_trace(Path(path).read_text())
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc}") from exc


def cmd_unfold(args) -> int:
    tr = _load_trace_file(args.trace) if args.trace else bl.trace(_billiard_start(args), args.events)
    line = bl.unfold(tr)
    folded = bl.fold(line)
    dev = max((abs(a.position - b.position) for a, b in zip(tr.states, folded.states)), default=0.0)
    out = [
        f"start {line.start.real:.12f} {line.start.imag:.12f}",
        f"direction {line.direction.real:.12f} {line.direction.imag:.12f}",
        f"length {line.length:.12f}",
        f"crossings {line.crossings}",
        f"fold-deviation {dev:.3e}",
    ]
    for g, s0, s1 in line.pieces:
        out.append(f"piece {s0:.12f} {s1:.12f} rot={g.rot} reflect={int(g.reflect)} trans={' '.join(map(str, g.trans.coeffs))}")
    _emit("\n".join(out) + "\n", args.out)
    return EXIT_OK if dev <= 1e-9 and len(folded.bounces) == len(tr.bounces) else EXIT_CHECK


def cmd_orbits(args) -> int:
    print("edge pairs (name, reflection index, edges, labels)")
    for p in sc.edge_pairs():
        print(f"  {p.name}  S{p.m}  {p.edges[0].name}-{p.edges[1].name}  {p.labels}")
    print("G-vee orbits of pairs:")
    for o in sorted(sy.gvee_orbits(), key=sorted):
        print("  {" + ", ".join(sorted(o)) + "}")
    print("G-vee orbits of vertices:")
    for o in sy.vertex_orbits():
        print(f"  size {len(o)}: " + " ".join(sorted(o)))
    print("rotation orbits of vertices:")
    for o in sy.vertex_orbits(sy.G_TILDE):
        print(f"  size {len(o)}: " + " ".join(sorted(o)))
    return EXIT_OK


def cmd_euler(args) -> int:
    tris = {
        "base": sc.quotient_triangulation("base"),
        "identified": sc.quotient_triangulation("identified"),
        "orbit": sc.quotient_triangulation("orbit"),
        "sphere": sc.sphere_triangulation(),
        "double-cover": sc.double_cover_triangulation(),
    }
    if args.dump:
        _emit(sc.dump_triangulation(tris[args.dump]), args.out)
        return EXIT_OK
    for name, t in tris.items():
        V, E, F = t.counts
        extra = ""
        if t.is_closed_surface():
            extra = f"  genus {sc.genus_from_counts(V, E, F)}"
        print(f"{name:13s} V={V:3d} E={E:3d} F={F:3d} chi={t.euler:3d}{extra}")
    return EXIT_OK


def cmd_verify(args) -> int:
    from .checks import SuiteConfig, run_suite

    cfg = SuiteConfig(seed=args.seed, inject_fault=args.inject_fault)
    if args.quick:
        cfg.samples, cfg.freeness_samples, cfg.billiard_traces, cfg.flow_steps = 20, 1000, 50, 10_000
    t0 = time.perf_counter()
    results = run_suite(cfg)
    lines = [r.line() for r in results]
    failed = [r.name for r in results if not r.ok]
    lines.append(f"{len(results) - len(failed)} passed, {len(failed)} failures in {time.perf_counter() - t0:.1f} s")
    if failed:
        lines.append("failed: " + ", ".join(failed))
    _emit("\n".join(lines) + "\n", args.out)
    return EXIT_CHECK if failed else EXIT_OK


def cmd_render(args) -> int:
    if args.target == "star":
        text = svg.render_star()
    elif args.target == "tiling":
        text = svg.render_tiling(args.window)
    else:
        if args.trace:
            tr = _load_trace_file(args.trace)
        else:
            tr = bl.trace(_billiard_start(args), args.events)
        text = svg.render_trace(tr.polyline, tr.events)
    if args.out is None:
        raise UsageError("render needs --out")
    _emit(text, args.out)
    return EXIT_OK


COMMANDS = {
    "constant": cmd_constant,
    "develop": cmd_develop,
    "flow": cmd_flow,
    "billiard": cmd_billiard,
    "unfold": cmd_unfold,
    "orbits": cmd_orbits,
    "euler": cmd_euler,
    "verify": cmd_verify,
    "render": cmd_render,
}


def main(argv: Optional[Sequence[str]] = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        args = parse(argv)
    except SystemExit as exc:  # argparse reports usage errors with code 2
        return int(exc.code) if isinstance(exc.code, int) else EXIT_USAGE
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        return COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except _INPUT_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except _NUMERIC_ERRORS as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
