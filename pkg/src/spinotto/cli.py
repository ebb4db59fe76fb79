"""Command-line entry point: ``spinotto {cycle,sweep,bounds,tauc,frictionless}``.

Every subcommand accepts ``--config FILE`` (JSON) and flags that mirror the
JSON keys; flags override the file. Exit status is 0 on success, 2 when any
result carries a convergence-failure flag and 1 on invalid input.
"""

import argparse
import json
import logging
import sys
from dataclasses import replace

from .cycle import cycle_bounds, run_cycle
from .propagator import ConvergenceError
from .sweep import (
    NoCrossingError,
    SweepSpec,
    config_from_mapping,
    find_critical_time,
    frictionless_scan,
    load_config,
    records_to_csv,
    run_sweep,
)

log = logging.getLogger("spinotto")

EXIT_OK = 0
EXIT_BAD_INPUT = 1
EXIT_NOT_CONVERGED = 2


def _add_common(p: argparse.ArgumentParser):
    p.add_argument("--config", help="JSON config file")
    p.add_argument("--b0", type=float, help="static longitudinal field")
    p.add_argument("--b1", type=float, help="transverse field at the hot isochore")
    p.add_argument("--b2", type=float, help="transverse field at the cold isochore")
    p.add_argument("--T1", dest="T1", type=float, help="hot bath temperature")
    p.add_argument("--T2", dest="T2", type=float, help="cold bath temperature")
    p.add_argument("--two-I", dest="two_I", type=int, nargs="+", help="spin as 2I (one or more)")
    p.add_argument("--pulse", dest="pulses", action="append", help="sin | pow | pow:N (repeatable)")
    p.add_argument("--initial-steps", type=int)
    p.add_argument("--convergence-tol", type=float)
    p.add_argument("--max-doublings", type=int)


def _add_tau_grid(p: argparse.ArgumentParser):
    p.add_argument("--tau-start", type=float)
    p.add_argument("--tau-stop", type=float)
    p.add_argument("--tau-points", type=int)
    p.add_argument("--tau-spacing", choices=("linear", "log"))


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="spinotto", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("cycle", help="run one finite-time cycle and print its observables as JSON")
    _add_common(p)
    p.add_argument("--tau", type=float, help="total adiabatic time")

    p = sub.add_parser("sweep", help="sweep tau x pulse x spin and write CSV")
    _add_common(p)
    _add_tau_grid(p)
    p.add_argument("--out", help="CSV path (stdout when omitted)")
    p.add_argument("--workers", type=int, default=1)

    p = sub.add_parser("bounds", help="sudden/quasi-static work bounds and efficiency limits")
    _add_common(p)

    p = sub.add_parser("tauc", help="first zero crossing of W(tau) per pulse")
    _add_common(p)
    p.add_argument("--bracket", type=float, nargs=2, default=(1.0, 100.0), metavar=("LO", "HI"))
    p.add_argument("--scan-step", type=float, default=1.0)
    p.add_argument("--tol", type=float, default=1e-3)

    p = sub.add_parser("frictionless", help="smallest grid tau with friction work below a threshold")
    _add_common(p)
    _add_tau_grid(p)
    group = p.add_mutually_exclusive_group()
    group.add_argument("--threshold", type=float, help="absolute friction-work threshold")
    group.add_argument(
        "--threshold-fraction", type=float, default=0.01,
        help="threshold as a fraction of the quasi-static work W_up (default 0.01)",
    )
    return parser


def _merged_mapping(args) -> dict:
    data = load_config(args.config) if args.config else {}
    for key in ("b0", "b1", "b2", "T1", "T2", "two_I", "pulses"):
        value = getattr(args, key, None)
        if value is not None:
            data[key] = value
    integ = dict(data.get("integrator", {}))
    for key in ("initial_steps", "convergence_tol", "max_doublings"):
        value = getattr(args, key, None)
        if value is not None:
            integ[key] = value
    if integ:
        data["integrator"] = integ
    tau_keys = {"start": "tau_start", "stop": "tau_stop", "points": "tau_points", "spacing": "tau_spacing"}
    overrides = {k: getattr(args, a, None) for k, a in tau_keys.items()}
    overrides = {k: v for k, v in overrides.items() if v is not None}
    if overrides:
        tau = data.get("tau")
        tau = dict(tau) if isinstance(tau, dict) else {}
        tau.update(overrides)
        data["tau"] = tau
    if getattr(args, "tau", None) is not None:
        data["tau"] = args.tau
    if getattr(args, "out", None) is not None:
        data["out"] = args.out
    return data


def _dump(obj):
    print(json.dumps(obj, indent=2, sort_keys=True))


def _cmd_cycle(args) -> int:
    base, pulses, spins, grid, _ = config_from_mapping(_merged_mapping(args))
    if grid is None or len(grid) != 1:
        raise ValueError("cycle needs a single tau (--tau or a scalar 'tau' key)")
    cfg = replace(base, total_tau=grid[0])
    result = run_cycle(cfg, strict=False)
    out = result.as_dict()
    out.update(pulse=cfg.shape.label, two_i=cfg.two_i, tau=cfg.total_tau)
    _dump(out)
    return EXIT_OK if result.converged else EXIT_NOT_CONVERGED


def _cmd_sweep(args) -> int:
    base, pulses, spins, grid, out = config_from_mapping(_merged_mapping(args))
    if grid is None:
        raise ValueError("sweep needs a tau grid ('tau' key or --tau-start/--tau-stop/--tau-points)")
    spec = SweepSpec(base=base, tau_grid=grid, pulses=pulses, spins=spins, out=out)
    records = run_sweep(spec, workers=args.workers)
    if out is None:
        sys.stdout.write(records_to_csv(records))
    else:
        log.info("wrote %d rows to %s", len(records), out)
    failed = sum(not r.converged for r in records)
    if failed:
        log.warning("%d grid point(s) did not converge", failed)
        return EXIT_NOT_CONVERGED
    return EXIT_OK


def _cmd_bounds(args) -> int:
    base, _, spins, _, _ = config_from_mapping(_merged_mapping(args))
    rows = []
    for two_i in spins:
        row = cycle_bounds(replace(base, two_i=two_i)).as_dict()
        row["two_i"] = two_i
        rows.append(row)
    _dump(rows[0] if len(rows) == 1 else rows)
    return EXIT_OK


def _cmd_tauc(args) -> int:
    base, pulses, spins, _, _ = config_from_mapping(_merged_mapping(args))
    rows = []
    for pulse in pulses:
        for two_i in spins:
            tau_c = find_critical_time(replace(base, two_i=two_i), pulse, tuple(args.bracket), args.scan_step, args.tol)
            rows.append({"pulse": pulse.kind, "n": pulse.exponent, "two_i": two_i, "tau_c": tau_c})
    _dump(rows)
    return EXIT_OK


def _cmd_frictionless(args) -> int:
    base, pulses, spins, grid, _ = config_from_mapping(_merged_mapping(args))
    if grid is None:
        raise ValueError("frictionless needs a tau grid")
    rows = []
    for pulse in pulses:
        for two_i in spins:
            cfg = replace(base, two_i=two_i)
            if args.threshold is not None:
                threshold = args.threshold
            else:
                threshold = args.threshold_fraction * cycle_bounds(cfg).w_up
            tau = frictionless_scan(cfg, pulse, grid, threshold)
            rows.append({"pulse": pulse.kind, "n": pulse.exponent, "two_i": two_i, "threshold": threshold, "tau": tau})
    _dump(rows)
    return EXIT_OK


COMMANDS = {
    "cycle": _cmd_cycle,
    "sweep": _cmd_sweep,
    "bounds": _cmd_bounds,
    "tauc": _cmd_tauc,
    "frictionless": _cmd_frictionless,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s: %(message)s")
    try:
        return COMMANDS[args.command](args)
    except ConvergenceError as exc:
        log.error("%s", exc)
        return EXIT_NOT_CONVERGED
    except (ValueError, KeyError, OSError, NoCrossingError) as exc:
        log.error("%s", exc)
        return EXIT_BAD_INPUT


if __name__ == "__main__":
    sys.exit(main())
