"""Command-line interface.

Subcommands::

    bench           failure-rate estimation over an (L, p) grid
    threshold       bench plus an interpolated threshold crossing estimate
    velocity-sweep  2D fixed-velocity decoder over an (L, c) grid
    runtime         sequence-count statistics vs L at fixed p
    field-profile   stationary-field and bound tables for plotting
    selftest        run the built-in invariant suite

Grids accept comma lists (``8,16,32``) and inclusive ranges
(``0.04:0.09:0.005``).  Records are written as CSV (or JSON lines with
``--format json``) to ``--out``; ``-`` means stdout.  Exit status is 0 on
success, 1 on selftest failure, 2 on an invalid specification.
"""

from __future__ import annotations

import argparse
import contextlib
import math
import sys

from . import bench
from .bench import BenchPoint, SpecError
from .selftest import run_selftest
from .spectral import (
    SpectralModel,
    critical_velocity,
    self_interaction_chi,
    self_interaction_chi_prime,
)


def parse_int_list(text: str) -> list[int]:
    vals = parse_float_list(text)
    out = [int(v) for v in vals]
    if out != [v for v in vals]:
        raise SpecError(f"expected integers, got {text!r}")
    return out


def parse_float_list(text: str) -> list[float]:
    """Parse ``a,b,c`` or an inclusive range ``start:stop:step``."""
    text = text.strip()
    if ":" in text:
        parts = text.split(":")
        if len(parts) != 3:
            raise SpecError(f"ranges look like start:stop:step, got {text!r}")
        start, stop, step = (float(p) for p in parts)
        if step <= 0 or stop < start:
            raise SpecError(f"bad range {text!r}")
        vals, x = [], start
        while x <= stop + step * 1e-9:
            vals.append(round(x, 12))
            x += step
        return vals
    try:
        return [float(p) for p in text.split(",") if p]
    except ValueError as err:
        raise SpecError(f"cannot parse list {text!r}") from err


@contextlib.contextmanager
def _open_out(path: str):
    if path == "-":
        yield sys.stdout
    else:
        with open(path, "w", newline="") as f:
            yield f


def _add_common(sub, decoders=bench.DECODERS, need_decoder=True):
    if need_decoder:
        sub.add_argument("--decoder", required=True, choices=decoders)
    sub.add_argument("--L", required=True, help="lattice sizes, e.g. 8,16,32")
    sub.add_argument("--samples", type=int, default=2000)
    sub.add_argument("--seed", type=int, default=1)
    sub.add_argument("--c", default=None,
                     help="field velocity for ca2d (velocity-sweep accepts a list)")
    sub.add_argument("--eta", type=float, default=0.5)
    sub.add_argument("--alpha", type=float, default=None,
                     help="potential exponent for ideal / rep1d")
    sub.add_argument("--abort-mult", type=float, default=1.0,
                     help="multiplier on the default abort cutoff (10L, or L for ca3d)")
    sub.add_argument("--jobs", type=int, default=1)
    sub.add_argument("--format", choices=("csv", "json"), default="csv")
    sub.add_argument("--out", default="-")


def _grid_points(args, Ls, ps, cs=None) -> list[BenchPoint]:
    if cs is None:
        if args.c is None:
            cs = [None]
        else:
            cs = parse_int_list(args.c)
            if len(cs) != 1:
                raise SpecError("this subcommand takes a single --c value")
    points = []
    for L in Ls:
        for p in ps:
            for c in cs:
                points.append(BenchPoint(
                    decoder=args.decoder, L=L, p=p, samples=args.samples,
                    master_seed=args.seed, c=c, eta=args.eta,
                    alpha=args.alpha, abort_mult=args.abort_mult,
                ))
    return points


def _emit(records, args) -> None:
    with _open_out(args.out) as f:
        if args.format == "csv":
            bench.write_csv(records, f)
        else:
            bench.write_jsonl(records, f)


def cmd_bench(args) -> int:
    points = _grid_points(args, parse_int_list(args.L), parse_float_list(args.p))
    if args.dump_errors:
        for point in points:
            bench.dump_point_errors(point, args.dump_errors, sys.stderr)
    _emit(bench.run_grid(points, jobs=args.jobs), args)
    return 0


def cmd_threshold(args) -> int:
    Ls, ps = parse_int_list(args.L), parse_float_list(args.p)
    if len(Ls) < 2 or len(ps) < 3:
        raise SpecError("threshold scans need at least 2 sizes and 3 error rates")
    records = bench.run_grid(_grid_points(args, Ls, ps), jobs=args.jobs)
    _emit(records, args)
    for (L1, L2), crossing in bench.pairwise_crossings(records).items():
        where = f"{crossing:.9g}" if crossing is not None else "none in range"
        print(f"# crossing L={L1}/L={L2}: {where}", file=sys.stderr)
    estimate = bench.estimate_crossing(records)
    if estimate is None:
        print("# threshold estimate: none in range", file=sys.stderr)
    else:
        print(f"# threshold estimate: {estimate:.9g}", file=sys.stderr)
    return 0


def cmd_velocity_sweep(args) -> int:
    if args.decoder != "ca2d":
        raise SpecError("velocity sweeps are defined for the ca2d decoder")
    ps = parse_float_list(args.p)
    if len(ps) != 1:
        raise SpecError("velocity sweeps fix a single error rate")
    if args.c is None:
        raise SpecError("velocity sweeps need --c with one or more velocities")
    points = _grid_points(args, parse_int_list(args.L), ps,
                          cs=parse_int_list(args.c))
    _emit(bench.run_grid(points, jobs=args.jobs), args)
    return 0


def cmd_runtime(args) -> int:
    if args.decoder not in ("ca2dstar", "ca3d"):
        raise SpecError("runtime profiles are defined for ca2dstar and ca3d")
    ps = parse_float_list(args.p)
    if len(ps) != 1:
        raise SpecError("runtime profiles fix a single error rate")
    _emit(bench.run_grid(_grid_points(args, parse_int_list(args.L), ps),
                         jobs=args.jobs), args)
    return 0


def cmd_field_profile(args) -> int:
    model = SpectralModel(args.L, args.D, args.eta)
    L = model.L
    rows = []
    phi = model.unit_charge_field
    for r in range(1, L // 2 + 1):
        rows.append(("profile", r, phi[(r,) + (0,) * (model.D - 1)]))
    for l in range(1, L // 2):
        g = model.stationary_gradient_at_origin((l,) + (0,) * (model.D - 1))
        rows.append(("gradient", l, float(math.hypot(*g))))
    t, times = 0, []
    while t <= 5 * L * L:
        times.append(t)
        t = max(t + 1, int(t * 1.5))
    for t in times:
        rows.append(("equilibration", t, model.equilibration_bound(t)))
    if model.D in (2, 3):
        rows.append(("chi", 0, self_interaction_chi(model.D, model.eta, (0,) * model.D)))
        rows.append(("chi_prime", 0,
                     self_interaction_chi_prime(model.D, model.eta, (0,) * model.D)))
    rows.append(("critical_velocity", 0, critical_velocity(L)))
    with _open_out(args.out) as f:
        f.write("table,L,D,eta,index,value\n")
        for table, index, value in rows:
            f.write(f"{table},{L},{model.D},{model.eta:.9g},{index},{value:.9g}\n")
    return 0


def cmd_selftest(args) -> int:
    return 0 if run_selftest(sys.stdout) else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="fieldca", description=__doc__.split("\n")[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p_bench = sub.add_parser("bench", help="failure rates over an (L, p) grid")
    _add_common(p_bench)
    p_bench.add_argument("--p", required=True, help="error rates, e.g. 0.04:0.09:0.005")
    p_bench.add_argument("--dump-errors", type=int, default=0, metavar="N",
                         help="ASCII-dump the first N error samples per point to stderr")
    p_bench.set_defaults(func=cmd_bench)

    p_thr = sub.add_parser("threshold", help="bench plus crossing estimate")
    _add_common(p_thr)
    p_thr.add_argument("--p", required=True)
    p_thr.set_defaults(func=cmd_threshold)

    p_vel = sub.add_parser("velocity-sweep", help="ca2d fail rate over (L, c)")
    _add_common(p_vel)
    p_vel.add_argument("--p", required=True, help="single error rate")
    p_vel.set_defaults(func=cmd_velocity_sweep)

    p_rt = sub.add_parser("runtime", help="sequence statistics vs L")
    _add_common(p_rt, decoders=("ca2dstar", "ca3d"))
    p_rt.add_argument("--p", default="0.01")
    p_rt.set_defaults(func=cmd_runtime)

    p_fp = sub.add_parser("field-profile", help="stationary field and bound tables")
    p_fp.add_argument("--L", type=int, required=True)
    p_fp.add_argument("--D", type=int, default=2, choices=(1, 2, 3))
    p_fp.add_argument("--eta", type=float, default=0.5)
    p_fp.add_argument("--out", default="-")
    p_fp.set_defaults(func=cmd_field_profile)

    p_st = sub.add_parser("selftest", help="run the invariant suite")
    p_st.set_defaults(func=cmd_selftest)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except SpecError as err:
        print(f"error: {err}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
