"""Command-line front end: pair ensembles, order tests, CHSH runs, sweeps.

Angles are taken in degrees and distances in meters on the command line;
internally everything runs in radians and SI units.  Text output rounds
to six decimals for reading, while json and csv carry 17 significant
digits so every value round-trips exactly.  All randomness hangs off
--seed (or ENTANGLE_BENCH_SEED when the flag is absent), making each
invocation reproducible byte for byte, for any worker count.

Exit codes: 0 success, 2 unusable arguments or configuration, 3 unknown
model name.
"""

from __future__ import annotations

import argparse
import io
import json
import math
import os
import sys
from dataclasses import replace

from .engine import (
    MODEL_NAMES,
    OpticalBench,
    analytic_E,
    analytic_chsh,
    analytic_joint_table,
    build_timeline,
    chsh_experiment,
    order_invariance_report,
    run_ensemble,
    simulate_outcomes,
    write_trials_csv,
)
from .local import ChshAngles
from .quantum import AnalyzerSetting
from .rng import derive_seed

_DEFAULT_TRIALS = 100_000
_SEED_ENV = "ENTANGLE_BENCH_SEED"


def _fmt17(x: float) -> str:
    """17 significant digits: enough to reconstruct the exact double."""
    return format(float(x), ".17g")


def _json_render(value, indent: int = 0) -> str:
    pad = "  " * indent
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        return _fmt17(value)
    if isinstance(value, str):
        return json.dumps(value)
    if isinstance(value, dict):
        if not value:
            return "{}"
        inner = ",\n".join(
            f"{pad}  {json.dumps(str(k))}: {_json_render(v, indent + 1)}" for k, v in value.items()
        )
        return "{\n" + inner + "\n" + pad + "}"
    if isinstance(value, (list, tuple)):
        if not value:
            return "[]"
        inner = ",\n".join(f"{pad}  {_json_render(v, indent + 1)}" for v in value)
        return "[\n" + inner + "\n" + pad + "]"
    raise TypeError(f"cannot serialize {type(value).__name__}")


def _json_doc(value) -> str:
    return _json_render(value) + "\n"


def _emit(text: str, out_path) -> int:
    if out_path:
        with open(out_path, "w", encoding="utf-8", newline="\n") as f:
            f.write(text)
    else:
        sys.stdout.write(text)
    return 0


def _resolve_seed(args) -> int:
    if args.seed is not None:
        return args.seed
    env = os.environ.get(_SEED_ENV)
    if env is None:
        return 0
    try:
        return int(env)
    except ValueError:
        raise ValueError(f"{_SEED_ENV} must be an integer, got {env!r}") from None


def _positive(value: int, flag: str) -> int:
    if value < 1:
        raise ValueError(f"{flag} must be at least 1, got {value}")
    return value


def _load_config(path: str) -> dict:
    try:
        with open(path, encoding="utf-8") as f:
            data = json.load(f)
    except OSError as exc:
        raise ValueError(f"cannot read config file {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ValueError(f"config file {path} is not valid JSON: {exc}") from exc
    if not isinstance(data, dict):
        raise ValueError(f"config file {path} must hold a JSON object")
    return data


def _resolve_bench(args, with_prism_b: bool = True) -> OpticalBench:
    """Bench from --config (if any) with explicit flags layered on top."""
    cfg = _load_config(args.config) if args.config else {}
    bench = OpticalBench.from_config(cfg)
    over = {}
    if args.d_plate_a is not None:
        over["d_plate_a"] = args.d_plate_a
    if args.d_prism_a is not None:
        over["d_prism_a"] = args.d_prism_a
    if with_prism_b and args.d_prism_b is not None:
        over["d_prism_b"] = args.d_prism_b
    if args.alpha is not None:
        over["alpha"] = AnalyzerSetting.from_degrees(args.alpha)
    if args.beta is not None:
        over["beta"] = AnalyzerSetting.from_degrees(args.beta)
    if args.plate is not None:
        over["plate_present"] = args.plate
    if args.plate_angle is not None:
        over["plate_angle"] = math.radians(args.plate_angle)
    return replace(bench, **over) if over else bench


def _bench_lines(bench: OpticalBench) -> list:
    cfg = bench.to_config_dict()
    lines = [
        "bench:",
        f"  d_plate_a_m     {cfg['d_plate_a_m']:.6f}",
        f"  d_prism_a_m     {cfg['d_prism_a_m']:.6f}",
        f"  d_prism_b_m     {cfg['d_prism_b_m']:.6f}",
        f"  alpha_deg       {cfg['alpha_deg']:.6f}",
        f"  beta_deg        {cfg['beta_deg']:.6f}",
        f"  plate_present   {'true' if cfg['plate_present'] else 'false'}",
        f"  plate_angle_deg {cfg['plate_angle_deg']:.6f}",
    ]
    order = "  ->  ".join(f"{ev.event.name} @ {ev.time:.6e} s" for ev in build_timeline(bench).events)
    lines.append(f"timeline: {order}")
    return lines


# ---------------------------------------------------------------------------
# subcommands


def _cmd_pair(args) -> int:
    seed = _resolve_seed(args)
    trials = _positive(args.trials, "--trials")
    workers = _positive(args.workers, "--workers")
    bench = _resolve_bench(args)
    if args.format == "csv":
        a_is_x, b_is_x = simulate_outcomes(args.model, bench, trials, seed, workers)
        buf = io.StringIO()
        write_trials_csv(buf, bench, a_is_x, b_is_x)
        return _emit(buf.getvalue(), args.out)
    stats = run_ensemble(args.model, bench, trials, seed, workers)
    table = [float(p) for p in analytic_joint_table(args.model, bench).p]
    e_exact = analytic_E(args.model, bench)
    if args.format == "json":
        doc = {
            "command": "pair",
            "model": args.model,
            "trials": trials,
            "seed": seed,
            "bench": bench.to_config_dict(),
            "stats": stats.to_json_dict(),
            "analytic_table": table,
            "analytic_e": e_exact,
        }
        return _emit(_json_doc(doc), args.out)
    freq = stats.frequencies
    ma, mb = stats.marginal_a(), stats.marginal_b()
    lines = [f"model {args.model}", f"trials {trials}", f"seed {seed}"]
    lines += _bench_lines(bench)
    lines.append("joint outcomes, count  frequency (exact):")
    for label, count, f, t in zip(("XX", "XY", "YX", "YY"), stats.counts, freq, table):
        lines.append(f"  {label} {count:>12d}  {f:.6f} ({t:.6f})")
    lines.append(f"E_hat   {stats.e_hat:+.6f} +- {stats.stderr_e:.6f}")
    lines.append(f"E_exact {e_exact:+.6f}")
    lines.append(f"marginal A (x, y): {ma[0]:.6f} {ma[1]:.6f}")
    lines.append(f"marginal B (x, y): {mb[0]:.6f} {mb[1]:.6f}")
    return _emit("\n".join(lines) + "\n", args.out)


def _cmd_order_test(args) -> int:
    seed = _resolve_seed(args)
    trials = _positive(args.trials, "--trials")
    workers = _positive(args.workers, "--workers")
    base = _resolve_bench(args, with_prism_b=False)
    bench_early = replace(base, d_prism_b=args.d_prism_b_early)
    bench_late = replace(base, d_prism_b=args.d_prism_b_late)
    report = order_invariance_report(args.model, bench_early, bench_late, trials, seed, workers)
    if args.format == "json":
        doc = {
            "command": "order-test",
            "seed": seed,
            "bench_early": bench_early.to_config_dict(),
            "bench_late": bench_late.to_config_dict(),
            "report": report.to_json_dict(),
        }
        return _emit(_json_doc(doc), args.out)
    if args.format == "csv":
        rows = ["bench,n_xx,n_xy,n_yx,n_yy,e_hat,stderr_e"]
        for name, stats in (("early", report.early), ("late", report.late)):
            rows.append(
                f"{name},{stats.n_xx},{stats.n_xy},{stats.n_yx},{stats.n_yy},"
                f"{_fmt17(stats.e_hat)},{_fmt17(stats.stderr_e)}"
            )
        return _emit("\n".join(rows) + "\n", args.out)
    lines = [f"model {args.model}", f"trials {trials} per bench", f"seed {seed}"]
    lines.append(
        f"early bench: d_prism_b_m {bench_early.d_prism_b:.6f}  (B detected before the plate acts)"
    )
    lines.append(
        f"late bench:  d_prism_b_m {bench_late.d_prism_b:.6f}  (B detected after the plate acts)"
    )
    lines += _bench_lines(bench_early)
    lines.append("cell  f_early   f_late    exact_e   exact_l   delta_f     4*stderr")
    cells = zip(
        ("XX", "XY", "YX", "YY"),
        report.early.frequencies,
        report.late.frequencies,
        report.analytic_early,
        report.analytic_late,
        report.delta_f,
        report.combined_stderr,
    )
    for label, fe, fl, te, tl, df, se in cells:
        lines.append(
            f"  {label}  {fe:.6f}  {fl:.6f}  {te:.6f}  {tl:.6f}  {df:+.6f}   {4.0 * se:.6f}"
        )
    lines.append(f"E early {report.early.e_hat:+.6f} +- {report.early.stderr_e:.6f}")
    lines.append(f"E late  {report.late.e_hat:+.6f} +- {report.late.stderr_e:.6f}")
    lines.append(f"delta E {report.delta_e:+.6f} +- {report.delta_e_stderr:.6f}")
    lines.append(f"verdict: {report.verdict}")
    return _emit("\n".join(lines) + "\n", args.out)


def _parse_chsh_angles(text: str) -> ChshAngles:
    parts = text.split(",")
    if len(parts) != 4:
        raise ValueError("--angles needs four comma-separated degrees: a,a',b,b'")
    try:
        values = [float(p) for p in parts]
    except ValueError:
        raise ValueError(f"--angles has a non-numeric entry: {text!r}") from None
    return ChshAngles(*(AnalyzerSetting.from_degrees(v) for v in values))


def _cmd_chsh(args) -> int:
    seed = _resolve_seed(args)
    trials = _positive(args.trials, "--trials")
    workers = _positive(args.workers, "--workers")
    angles = _parse_chsh_angles(args.angles)
    plate_present = True if args.plate is None else args.plate
    report = chsh_experiment(args.model, angles, trials, seed, plate_present, workers)
    exact = analytic_chsh(args.model, angles, plate_present)
    if args.format == "json":
        return _emit(_json_doc(report.to_json_dict()), args.out)
    if args.format == "csv":
        rows = ["term,value,stderr"]
        rows.append(f"e_ab,{_fmt17(report.e_ab)},{_fmt17(report.se_ab)}")
        rows.append(f"e_abp,{_fmt17(report.e_abp)},{_fmt17(report.se_abp)}")
        rows.append(f"e_apb,{_fmt17(report.e_apb)},{_fmt17(report.se_apb)}")
        rows.append(f"e_apbp,{_fmt17(report.e_apbp)},{_fmt17(report.se_apbp)}")
        rows.append(f"s,{_fmt17(report.s)},{_fmt17(report.stderr_total)}")
        return _emit("\n".join(rows) + "\n", args.out)
    lines = [
        f"model {args.model}",
        f"trials {trials} per setting pair",
        f"seed {seed}",
        f"plate {'present' if plate_present else 'absent'}",
        "angles_deg: a {:.6f}  a' {:.6f}  b {:.6f}  b' {:.6f}".format(
            math.degrees(angles.a.angle),
            math.degrees(angles.a_prime.angle),
            math.degrees(angles.b.angle),
            math.degrees(angles.b_prime.angle),
        ),
        "term    E_hat      stderr    E_exact",
    ]
    term_rows = (
        ("e_ab", report.e_ab, report.se_ab, exact.e_ab),
        ("e_abp", report.e_abp, report.se_abp, exact.e_abp),
        ("e_apb", report.e_apb, report.se_apb, exact.e_apb),
        ("e_apbp", report.e_apbp, report.se_apbp, exact.e_apbp),
    )
    for name, e, se, ex in term_rows:
        lines.append(f"{name:<7} {e:+.6f}  {se:.6f}  {ex:+.6f}")
    lines.append(f"S {report.s:.6f} +- {report.stderr_total:.6f}   exact {exact.s:.6f}")
    flag = "VIOLATED" if report.violates_classical_bound(3.0) else "NOT VIOLATED"
    lines.append(f"classical bound 2: {flag} (violated iff S - 3*stderr > 2)")
    return _emit("\n".join(lines) + "\n", args.out)


def _cmd_sweep(args) -> int:
    seed = _resolve_seed(args)
    trials = _positive(args.trials, "--trials")
    workers = _positive(args.workers, "--workers")
    if args.step <= 0.0:
        raise ValueError(f"--step must be positive degrees, got {args.step}")
    n_rows = math.floor((args.stop - args.start) / args.step + 1e-9) + 1
    if n_rows < 1:
        raise ValueError("sweep range is empty: --stop lies before --start")
    bench = _resolve_bench(args)
    rows = []
    for i in range(n_rows):
        angle_deg = args.start + i * args.step
        setting = AnalyzerSetting.from_degrees(angle_deg)
        row_bench = replace(bench, alpha=setting) if args.axis == "alpha" else replace(bench, beta=setting)
        e_exact = analytic_E(args.model, row_bench)
        stats = run_ensemble(args.model, row_bench, trials, derive_seed(seed, i), workers)
        rows.append((angle_deg, e_exact, stats.e_hat, stats.stderr_e))
    if args.format == "json":
        doc = {
            "command": "sweep",
            "model": args.model,
            "axis": args.axis,
            "trials": trials,
            "seed": seed,
            "bench": bench.to_config_dict(),
            "rows": [
                {"angle_deg": a, "E_analytic": ex, "E_hat": eh, "stderr": se}
                for a, ex, eh, se in rows
            ],
        }
        return _emit(_json_doc(doc), args.out)
    if args.format == "csv":
        out = ["angle_deg,E_analytic,E_hat,stderr"]
        for a, ex, eh, se in rows:
            out.append(f"{_fmt17(a)},{_fmt17(ex)},{_fmt17(eh)},{_fmt17(se)}")
        return _emit("\n".join(out) + "\n", args.out)
    lines = [
        f"model {args.model}",
        f"axis {args.axis} swept, {trials} trials per row",
        f"seed {seed}",
    ]
    lines += _bench_lines(bench)
    lines.append("angle_deg    E_analytic   E_hat        stderr")
    for a, ex, eh, se in rows:
        lines.append(f"{a:>9.6f}    {ex:+.6f}    {eh:+.6f}    {se:.6f}")
    return _emit("\n".join(lines) + "\n", args.out)


# ---------------------------------------------------------------------------
# parser


def _add_run_flags(p: argparse.ArgumentParser, trials_help: str) -> None:
    p.add_argument("--model", default="qm", help="simulation model: qm, lhv-sign, or naive")
    p.add_argument("--trials", type=int, default=_DEFAULT_TRIALS, help=f"{trials_help} (count)")
    p.add_argument(
        "--seed",
        type=int,
        default=None,
        help=f"master seed (integer); defaults to ${_SEED_ENV} or 0",
    )
    p.add_argument(
        "--workers",
        type=int,
        default=1,
        help="worker threads (count); the output is identical for any count",
    )
    p.add_argument("--format", choices=("text", "json", "csv"), default="text", help="output format")
    p.add_argument("--out", default=None, help="write the output to this file instead of stdout")
    p.add_argument(
        "--config",
        default=None,
        help="JSON bench config file (keys *_m in meters, *_deg in degrees); explicit flags override it",
    )


def _add_bench_flags(p: argparse.ArgumentParser, with_prism_b: bool = True) -> None:
    p.add_argument("--alpha", type=float, default=None, help="channel A analyzer angle in degrees")
    p.add_argument("--beta", type=float, default=None, help="channel B analyzer angle in degrees")
    p.add_argument(
        "--plate",
        action=argparse.BooleanOptionalAction,
        default=None,
        help="half-wave plate present on channel A (default: present)",
    )
    p.add_argument("--plate-angle", type=float, default=None, help="plate fast-axis angle in degrees")
    p.add_argument(
        "--d-plate-a", type=float, default=None, help="source-to-plate distance on channel A in meters"
    )
    p.add_argument(
        "--d-prism-a", type=float, default=None, help="source-to-prism distance on channel A in meters"
    )
    if with_prism_b:
        p.add_argument(
            "--d-prism-b",
            type=float,
            default=None,
            help="source-to-prism distance on channel B in meters",
        )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="biphoton",
        description="Simulate timed polarization measurements on photon pairs "
        "under the quantum model and two local contrast models.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("pair", help="run one bench and report joint outcome statistics")
    _add_run_flags(p, "number of emitted pairs")
    _add_bench_flags(p)
    p.set_defaults(func=_cmd_pair)

    p = sub.add_parser("order-test", help="compare early and late channel-B detection benches")
    _add_run_flags(p, "number of emitted pairs per bench")
    _add_bench_flags(p, with_prism_b=False)
    p.add_argument(
        "--d-prism-b-early",
        type=float,
        default=0.25,
        help="channel B prism distance in meters for the early bench",
    )
    p.add_argument(
        "--d-prism-b-late",
        type=float,
        default=1.0,
        help="channel B prism distance in meters for the late bench",
    )
    p.set_defaults(func=_cmd_order_test)

    p = sub.add_parser("chsh", help="estimate the CHSH sum S at four setting pairs")
    _add_run_flags(p, "number of emitted pairs per setting pair")
    p.add_argument(
        "--angles",
        default="0,45,22.5,67.5",
        help="four analyzer angles in degrees: a,a',b,b'",
    )
    p.add_argument(
        "--plate",
        action=argparse.BooleanOptionalAction,
        default=None,
        help="half-wave plate present on channel A (default: present)",
    )
    p.set_defaults(func=_cmd_chsh)

    p = sub.add_parser("sweep", help="sweep one analyzer and tabulate the correlator")
    _add_run_flags(p, "number of emitted pairs per sweep row")
    _add_bench_flags(p)
    p.add_argument("--axis", choices=("alpha", "beta"), default="alpha", help="which analyzer to sweep")
    p.add_argument("--start", type=float, default=0.0, help="first angle in degrees")
    p.add_argument("--stop", type=float, default=180.0, help="last angle in degrees (inclusive)")
    p.add_argument("--step", type=float, default=7.5, help="angle increment in degrees")
    p.set_defaults(func=_cmd_sweep)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.model not in MODEL_NAMES:
        print(
            f"error: unknown model {args.model!r}; expected one of {', '.join(MODEL_NAMES)}",
            file=sys.stderr,
        )
        return 3
    try:
        return args.func(args)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
