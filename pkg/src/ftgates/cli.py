"""Command line: distillation sweeps, verification suites and array timing."""

from __future__ import annotations

import argparse
import contextlib
import csv
import itertools
import json
import os
import sys

from . import __version__, concat
from .distill import NoiseModel, fidelity_to_p, monte_carlo
from .distill.circuit import MODES

COLUMNS = (
    "eps_in",
    "p_other",
    "p_key",
    "flag",
    "shots",
    "accepted",
    "success_rate",
    "success_rate_stderr",
    "output_error",
    "output_error_stderr",
)


class UsageError(Exception):
    pass


def _fmt(x) -> str:
    return f"{x:.9g}"


def _axis(args, p_name: str, f_name: str, default_f: list | None) -> list[float]:
    """Probabilities for one noise axis from either a p list or a fidelity list."""
    ps = getattr(args, p_name)
    fs = getattr(args, f_name)
    if ps is not None and fs is not None:
        raise UsageError(f"--{p_name.replace('_', '-')} and --{f_name.replace('_', '-')} are exclusive")
    if ps is not None:
        return list(ps)
    fs = fs if fs is not None else default_f
    if fs is None:
        return [0.0]
    try:
        return [fidelity_to_p(f) for f in fs]
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def sweep_grid(args) -> list[tuple[float, float, float]]:
    gate = args.gate_fidelity
    p_other = _axis(args, "p_other", "other_fidelity", gate)
    p_key = _axis(args, "p_key", "key_fidelity", gate)
    eps = list(args.input_noise)
    for v in itertools.chain(eps, p_other, p_key):
        if not 0.0 <= v <= 1.0:
            raise UsageError(f"probability {v} outside [0, 1]")
    return list(itertools.product(eps, p_other, p_key))


def default_seed() -> int:
    raw = os.environ.get("FTGATES_SEED")
    if raw is None:
        return 0
    try:
        return int(raw)
    except ValueError:
        raise UsageError(f"FTGATES_SEED must be an integer, got {raw!r}") from None


def write_sweep(out, args, grid) -> None:
    seed = args.seed if args.seed is not None else default_seed()
    out.write(f"# ftgates {__version__} distill\n")
    out.write(f"# seed={seed} mode={args.mode} method={args.method} flag={int(args.flag)}\n")
    out.write("# fidelity inputs converted once as p = 1 - sqrt(F)\n")
    w = csv.writer(out, lineterminator="\n")
    w.writerow(COLUMNS)
    for eps, po, pk in grid:
        model = NoiseModel(p_other=po, p_key=pk, eps_in=eps, seed=seed)
        s = monte_carlo(model, args.shots, flag=args.flag, mode=args.mode, workers=args.workers, method=args.method)
        w.writerow(
            [
                _fmt(eps),
                _fmt(po),
                _fmt(pk),
                int(args.flag),
                s.shots,
                s.accepted,
                _fmt(s.success_rate),
                _fmt(s.success_rate_stderr),
                _fmt(s.output_error),
                _fmt(s.output_error_stderr),
            ]
        )
        out.flush()


def cmd_distill(args) -> int:
    if args.shots < 1:
        raise UsageError("--shots must be at least 1")
    if args.workers < 0:
        raise UsageError("--workers cannot be negative")
    grid = sweep_grid(args)
    if args.output in (None, "-"):
        write_sweep(sys.stdout, args, grid)
        return 0
    try:
        fh = open(args.output, "w", encoding="utf-8", newline="")
    except OSError as exc:
        raise UsageError(f"cannot write {args.output}: {exc}") from None
    with fh:
        write_sweep(fh, args, grid)
    return 0


def cmd_verify(args) -> int:
    from .verify import SUITES, run_suite

    if args.suite != "all" and args.suite not in SUITES:
        raise UsageError(f"unknown suite {args.suite!r}")
    results = run_suite(args.suite)
    ok = all(bool(c.passed) for _, c in results)
    if args.json:
        payload = {
            "suite": args.suite,
            "passed": ok,
            "checks": [
                {"suite": s, "name": c.name, "passed": bool(c.passed), "value": str(c.value)} for s, c in results
            ],
        }
        print(json.dumps(payload, sort_keys=True))
    else:
        for s, c in results:
            print(f"{'PASS' if c.passed else 'FAIL'} [{s}] {c.name}: {c.value}")
        n_fail = sum(not c.passed for _, c in results)
        print(f"{len(results) - n_fail}/{len(results)} checks passed")
    return 0 if ok else 1


def cmd_concat_cost(args) -> int:
    moving_only = args.moving_only or args.transfer_us == 0
    transfer = concat.CostModel().transfer_time if moving_only else args.transfer_us
    try:
        model = concat.CostModel(transfer_time=transfer, count_pulses=args.count_pulses)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    if args.gate == "T":
        plan = concat.plan_logical_T()
    else:
        plan = concat.plan_logical_H(worst_case=args.worst_case)
    parts = concat.cost_breakdown(plan, model, include_transfers=not moving_only)
    total = sum(parts.values())
    if args.json:
        print(
            json.dumps(
                {
                    "gate": args.gate,
                    "worst_case": bool(args.worst_case) if args.gate == "H" else None,
                    "transfer_us": 0.0 if moving_only else transfer,
                    "moves": len(plan.moves()),
                    "transfers": len(plan.transfers()),
                    "cz_pulses": len(plan.pulses()),
                    "moving_us": round(parts["moving"], 3),
                    "transfer_total_us": round(parts["transfer"], 3),
                    "pulse_us": round(parts["pulse"], 3),
                    "total_us": round(total, 3),
                    "plan": concat.dumps_plan(plan).splitlines(),
                },
                sort_keys=True,
            )
        )
        return 0
    print(concat.dumps_plan(plan), end="")
    print(f"moving   {parts['moving']:.3f} us")
    print(f"transfer {parts['transfer']:.3f} us")
    print(f"pulse    {parts['pulse']:.3f} us")
    print(f"total    {total:.3f} us")
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="ftgates", description=__doc__)
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    d = sub.add_parser("distill", help="Monte Carlo sweep of the 15-to-1 distillation round")
    d.add_argument("--input-noise", type=float, nargs="+", default=[0.0], metavar="EPS",
                   help="Z-error probability of each input ancilla")
    d.add_argument("--gate-fidelity", type=float, nargs="+", metavar="F",
                   help="fidelity of every two-qubit gate (default 1)")
    d.add_argument("--key-fidelity", type=float, nargs="+", metavar="F")
    d.add_argument("--other-fidelity", type=float, nargs="+", metavar="F")
    d.add_argument("--p-key", type=float, nargs="+", metavar="P")
    d.add_argument("--p-other", type=float, nargs="+", metavar="P")
    d.add_argument("--flag", action="store_true", help="use the flagged encoder")
    d.add_argument("--shots", type=int, default=10_000)
    d.add_argument("--seed", type=int, default=None, help="default: $FTGATES_SEED or 0")
    d.add_argument("--workers", type=int, default=1, help="processes; 0 uses every CPU")
    d.add_argument("--output", "-o", default="-", help="CSV path (default stdout)")
    d.add_argument("--mode", choices=MODES, default="faithful")
    d.add_argument("--method", choices=("fast", "direct"), default="fast")
    d.set_defaults(func=cmd_distill)

    v = sub.add_parser("verify", help="run a verification suite")
    v.add_argument("suite", choices=("qrm", "encoder", "gadget", "oracle", "concat", "cupz2d", "cupz3d", "all"))
    v.add_argument("--json", action="store_true")
    v.set_defaults(func=cmd_verify)

    c = sub.add_parser("concat-cost", help="time a logical gate on the 7x15 array")
    c.add_argument("gate", choices=("T", "H"))
    c.add_argument("--transfer-us", type=float, default=150.0,
                   help="tweezer transfer time in us (100-200; 0 means moving only)")
    c.add_argument("--moving-only", action="store_true")
    c.add_argument("--worst-case", action="store_true", help="H: return every column after its cycle")
    c.add_argument("--count-pulses", action="store_true", help="add the CZ pulse durations")
    c.add_argument("--json", action="store_true")
    c.set_defaults(func=cmd_concat_cost)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"ftgates: error: {exc}", file=sys.stderr)
        return 2
    except BrokenPipeError:
        with contextlib.suppress(Exception):
            sys.stdout.close()
        return 0


if __name__ == "__main__":
    sys.exit(main())
