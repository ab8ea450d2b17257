"""Command-line front end emitting deterministic CSV.

Subcommands: ``threshold``, ``rate-curve``, ``simulate``, ``verify-bound``.
Data goes to ``--out`` (default standard output), diagnostics to standard
error.  Output is byte-identical across repeated runs for a fixed command
line.  Exit status: 0 success, 1 usage or configuration error, 2 bound
verification failure.
"""

from __future__ import annotations

import argparse
import contextlib
import sys

import numpy as np

from .attack import VerificationReport, random_attack, verify
from .bounds import ProtocolParams, threshold
from .channel import NoiseModel, RatePoint, load_emis_table, rate_curve
from .simulation import SimStats, run

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_VERIFY_FAIL = 2

VERIFY_CAP_L = 8
VERIFY_CAP_D = 4


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits with status 2 on bad flags; this CLI reserves 2 for
    # verification failures, so usage problems are funnelled to status 1.
    def error(self, message):
        raise _UsageError(message)


def _parse_int_list(text: str) -> list[int]:
    """Parse '5', '2,3,4' or 'a:b[:step]' (inclusive) into a list of ints."""
    values: list[int] = []
    for part in text.split(","):
        part = part.strip()
        if ":" in part:
            pieces = part.split(":")
            if len(pieces) not in (2, 3):
                raise _UsageError(f"bad range {part!r}, expected a:b or a:b:step")
            start, stop = int(pieces[0]), int(pieces[1])
            step = int(pieces[2]) if len(pieces) == 3 else 1
            if step <= 0 or stop < start:
                raise _UsageError(f"bad range {part!r}")
            values.extend(range(start, stop + 1, step))
        else:
            values.append(int(part))
    if not values:
        raise _UsageError(f"empty list {text!r}")
    return values


def _parse_float_grid(text: str) -> list[float]:
    """Parse a float value or 'a:b[:step]' (inclusive) into a sorted grid."""
    text = text.strip()
    if ":" not in text:
        return [float(text)]
    pieces = text.split(":")
    if len(pieces) not in (2, 3):
        raise _UsageError(f"bad range {text!r}, expected a:b or a:b:step")
    start, stop = float(pieces[0]), float(pieces[1])
    step = float(pieces[2]) if len(pieces) == 3 else 1.0
    if step <= 0.0 or stop < start:
        raise _UsageError(f"bad range {text!r}")
    count = int((stop - start) / step + 1e-9) + 1
    return [start + i * step for i in range(count)]


def _monitor_modes(choice: str) -> list[bool]:
    return {"off": [False], "on": [True], "both": [False, True]}[choice]


def _fmt(x: float) -> str:
    return f"{x:.12g}"


@contextlib.contextmanager
def _open_out(path: str | None):
    if path is None:
        yield sys.stdout
    else:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            yield fh


def _valid_pairs(L_values, d_values):
    """Yield valid (L, d) combos in command-line order, warning on the rest."""
    for L in L_values:
        for d in d_values:
            try:
                yield ProtocolParams(L, d)
            except ValueError as exc:
                print(f"warning: skipping L={L}, d={d}: {exc}", file=sys.stderr)


def build_parser() -> _Parser:
    parser = _Parser(prog="hdrrdps", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p_thr = sub.add_parser("threshold", help="error thresholds over (L, d) grids")
    p_thr.add_argument("--L", required=True, help="packet sizes: value, list or a:b[:step]")
    p_thr.add_argument("--d", required=True, help="encoding dimensions: value, list or a:b[:step]")
    p_thr.add_argument("--monitor", choices=["on", "off", "both"], default="both")
    p_thr.add_argument("--tol", type=float, default=1e-9, help="bisection tolerance")
    p_thr.add_argument("--out", default=None, help="output CSV path (default: stdout)")

    p_rate = sub.add_parser("rate-curve", help="key rate versus channel loss")
    p_rate.add_argument("--L", required=True)
    p_rate.add_argument("--d", required=True)
    p_rate.add_argument("--e-mis", type=float, default=None, help="fixed mode mismatch")
    p_rate.add_argument("--emis-table", default=None, help="CSV of measured e_mis per (L, d)")
    p_rate.add_argument("--pd", type=float, default=0.0, help="dark-count probability per gate")
    p_rate.add_argument("--loss", default="0:60:0.5", help="loss in dB: value or a:b[:step]")
    p_rate.add_argument("--monitor", choices=["on", "off", "both"], default="both")
    p_rate.add_argument("--tol", type=float, default=1e-9)
    p_rate.add_argument("--out", default=None)

    p_sim = sub.add_parser("simulate", help="Monte Carlo protocol rounds")
    p_sim.add_argument("--L", required=True)
    p_sim.add_argument("--d", required=True)
    p_sim.add_argument("--rounds", type=int, required=True)
    p_sim.add_argument("--seed", type=int, default=0)
    p_sim.add_argument("--loss", type=float, default=0.0, help="channel loss in dB")
    p_sim.add_argument("--pd", type=float, default=0.0)
    p_sim.add_argument("--e-mis", type=float, default=0.0)
    p_sim.add_argument("--dump-rounds", action="store_true",
                       help="stream one CSV row per round instead of the stats row")
    p_sim.add_argument("--out", default=None)

    p_ver = sub.add_parser("verify-bound", help="brute-force attack-bound verification")
    p_ver.add_argument("--L", required=True, help=f"packet sizes (cap {VERIFY_CAP_L})")
    p_ver.add_argument("--d", required=True, help=f"encoding dimensions (cap {VERIFY_CAP_D})")
    p_ver.add_argument("--trials", type=int, default=100)
    p_ver.add_argument("--seed", type=int, default=0)
    p_ver.add_argument("--diag-bias", type=float, default=None,
                       help="fix the diagonal bias of every trial (default: random per trial)")
    p_ver.add_argument("--tol", type=float, default=1e-9)
    p_ver.add_argument("--out", default=None)
    return parser


def cmd_threshold(args) -> int:
    pairs = list(_valid_pairs(_parse_int_list(args.L), _parse_int_list(args.d)))
    modes = _monitor_modes(args.monitor)
    with _open_out(args.out) as out:
        out.write("L,d,monitored,threshold\n")
        for params in pairs:
            for monitored in modes:
                result = threshold(params, monitored, args.tol)
                flag = "true" if monitored else "false"
                out.write(f"{params.L},{params.d},{flag},{_fmt(result.value)}\n")
    return EXIT_OK


def cmd_rate_curve(args) -> int:
    if (args.e_mis is None) == (args.emis_table is None):
        raise _UsageError("exactly one of --e-mis or --emis-table is required")
    pairs = list(_valid_pairs(_parse_int_list(args.L), _parse_int_list(args.d)))
    grid = _parse_float_grid(args.loss)
    if args.emis_table is not None:
        table = load_emis_table(args.emis_table)
        mismatches = {(p.L, p.d): table.lookup(p.L, p.d) for p in pairs}
    else:
        mismatches = {(p.L, p.d): args.e_mis for p in pairs}
    modes = _monitor_modes(args.monitor)
    with _open_out(args.out) as out:
        out.write("L,d," + RatePoint.CSV_HEADER + "\n")
        for params in pairs:
            noise = NoiseModel(0.0, args.pd, mismatches[(params.L, params.d)])
            for monitored in modes:
                for point in rate_curve(params, noise, grid, monitored):
                    out.write(f"{params.L},{params.d},{point.csv_row()}\n")
    return EXIT_OK


def cmd_simulate(args) -> int:
    if args.rounds < 1:
        raise _UsageError(f"--rounds must be >= 1, got {args.rounds}")
    pairs = list(_valid_pairs(_parse_int_list(args.L), _parse_int_list(args.d)))
    if args.dump_rounds and len(pairs) != 1:
        raise _UsageError("--dump-rounds requires exactly one (L, d) pair")
    noise = NoiseModel(args.loss, args.pd, args.e_mis)
    with _open_out(args.out) as out:
        if args.dump_rounds:
            run(pairs[0], noise, args.rounds, args.seed, dump=out)
            return EXIT_OK
        out.write("L,d,seed," + SimStats.CSV_HEADER + "\n")
        for params in pairs:
            stats = run(params, noise, args.rounds, args.seed)
            out.write(f"{params.L},{params.d},{args.seed},{stats.csv_row()}\n")
    return EXIT_OK


def cmd_verify_bound(args) -> int:
    if args.trials < 1:
        raise _UsageError(f"--trials must be >= 1, got {args.trials}")
    L_values = _parse_int_list(args.L)
    d_values = _parse_int_list(args.d)
    if max(L_values) > VERIFY_CAP_L or max(d_values) > VERIFY_CAP_D:
        raise _UsageError(
            f"verify-bound is capped at L <= {VERIFY_CAP_L} and d <= {VERIFY_CAP_D}"
        )
    if args.diag_bias is not None and not 0.0 <= args.diag_bias <= 1.0:
        raise _UsageError(f"--diag-bias must lie in [0, 1], got {args.diag_bias}")
    pairs = list(_valid_pairs(L_values, d_values))
    any_failed = False
    with _open_out(args.out) as out:
        out.write(VerificationReport.CSV_HEADER + "\n")
        for params in pairs:
            bias_rng = np.random.default_rng([args.seed, params.L, params.d])
            for trial in range(args.trials):
                bias = args.diag_bias if args.diag_bias is not None else float(bias_rng.random())
                attack_seed = args.seed + trial
                attack = random_attack(params.L, attack_seed, bias)
                report = verify(attack, params.d, args.tol, seed=attack_seed)
                any_failed = any_failed or not report.passed
                out.write(report.csv_row() + "\n")
    return EXIT_VERIFY_FAIL if any_failed else EXIT_OK


_COMMANDS = {
    "threshold": cmd_threshold,
    "rate-curve": cmd_rate_curve,
    "simulate": cmd_simulate,
    "verify-bound": cmd_verify_bound,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return _COMMANDS[args.command](args)
    except _UsageError as exc:
        print(f"hdrrdps: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ValueError, OSError) as exc:
        print(f"hdrrdps: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
