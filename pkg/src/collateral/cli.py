"""Command-line entry point.

Exit codes: 0 ok, 2 invalid config, 3 flux outside the qubit's domain,
4 no idling point, 5 photon number exceeds the truncation.
"""
from __future__ import annotations

import argparse
import json
import math
import sys

import numpy as np

from . import __version__
from .config import ConfigError, cavity_from_config, circuit_from_config, circuit_to_config, read_config
from .evolve import sweep_flux
from .fock import HilbertSpace
from .hamiltonians import CONVENTIONS
from .idling import (NoIdlingPoint, curve_to_csv, effective_coupling_curve,
                     idling_flux_closed_form, idling_flux_numeric)
from .noon import fidelity_scan, run_protocol, scan_to_csv
from .optical import optical_report
from .params import derive, validity_flags

EXIT_OK, EXIT_CONFIG, EXIT_FLUX, EXIT_NO_IDLING, EXIT_TRUNCATION = 0, 2, 3, 4, 5

TWO_PI = 2 * math.pi


class CliError(Exception):
    def __init__(self, message: str, code: int):
        super().__init__(message)
        self.code = code


def _emit(text: str, out: str | None):
    if out:
        with open(out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _convention(cfg, args) -> str:
    conv = args.convention or cfg.get("convention", "flipped")
    if conv not in CONVENTIONS:
        raise CliError(f"{cfg.where('convention')}: convention must be one of {sorted(CONVENTIONS)}",
                       EXIT_CONFIG)
    return conv


def _load_circuit(args):
    cfg = read_config(args.config)
    return cfg, circuit_from_config(cfg), _convention(cfg, args)


def derived_report(cp) -> dict:
    dp = derive(cp)
    report = {
        "E_C_over_h_GHz": dp.E_C / (TWO_PI * dp.constants.reduced_planck) / 1e9,
        "E_J_eff_over_h_GHz": dp.E_J_eff / (TWO_PI * dp.constants.reduced_planck) / 1e9,
        "omega_q_over_2pi_GHz": dp.omega_q / TWO_PI / 1e9,
        "omega_R1_over_2pi_GHz": dp.omega_R1 / TWO_PI / 1e9,
        "omega_R2_over_2pi_GHz": dp.omega_R2 / TWO_PI / 1e9,
        "g1_over_2pi_MHz": dp.g1 / TWO_PI / 1e6,
        "g2_over_2pi_MHz": dp.g2 / TWO_PI / 1e6,
        "kappa_over_2pi_MHz": dp.kappa / TWO_PI / 1e6,
    }
    if math.isclose(dp.omega_R1, dp.omega_R2, rel_tol=1e-12):
        report["detuning_over_2pi_GHz"] = dp.detuning / TWO_PI / 1e9
    return report


def cmd_derive(args) -> int:
    cfg, cp, _ = _load_circuit(args)
    try:
        report = derived_report(cp)
    except ValueError as exc:
        raise CliError(str(exc), EXIT_FLUX) from None
    flags = validity_flags(cp)
    if args.json:
        doc = {"config": circuit_to_config(cp), "derived": report, "validity": flags}
        _emit(json.dumps(doc, indent=2) + "\n", args.out)
        return EXIT_OK
    lines = [f"{k:<24} {v: .6g}" for k, v in report.items()]
    for name, ok in flags.items():
        if not ok:
            lines.append(f"warning: {name} condition not satisfied by a factor 10")
    _emit("\n".join(lines) + "\n", args.out)
    return EXIT_OK


def cmd_sweep_flux(args) -> int:
    cfg, cp, conv = _load_circuit(args)
    n_max = args.n_max if args.n_max is not None else args.N + 2
    if args.N > n_max:
        raise CliError(f"N={args.N} exceeds the truncation n_max={n_max}", EXIT_TRUNCATION)
    fluxes = np.linspace(args.flux_min, args.flux_max, args.n_flux)
    times = np.linspace(0.0, args.t_max_us * 1e-6, args.n_times)
    grid = sweep_flux(HilbertSpace(n_max), cp, fluxes, times, N=args.N,
                      kappa_override=0.0 if args.no_kappa else None, variant=args.variant,
                      convention=conv, threads=args.threads)
    if not grid.valid.any():
        raise CliError("qubit frequency undefined over the whole flux range", EXIT_FLUX)
    _emit(grid.to_json() + "\n" if args.json else grid.to_csv(), args.out)
    mins = grid.min_population()
    best = int(np.nanargmax(mins))
    print(f"most frozen flux: {fluxes[best]:.4f} Phi0 (min_t P = {mins[best]:.4f})", file=sys.stderr)
    return EXIT_OK


def cmd_idling(args) -> int:
    cfg, cp, conv = _load_circuit(args)
    kappa = 0.0 if args.no_kappa else None
    try:
        numeric = idling_flux_numeric(cp, (args.bracket_min, args.bracket_max), conv, kappa)
    except NoIdlingPoint as exc:
        raise CliError(str(exc), EXIT_NO_IDLING) from None
    try:
        closed = idling_flux_closed_form(cp, kappa) if conv == "flipped" else None
    except ValueError:
        closed = None
    report = {
        "idling_flux_numeric_over_phi0": numeric,
        "idling_flux_closed_form_over_phi0": closed,
        "difference_over_phi0": None if closed is None else abs(numeric - closed),
        "convention": conv,
    }
    if args.curve:
        grid = np.linspace(args.flux_min, args.flux_max, args.n_flux)
        curve_to_csv(effective_coupling_curve(cp, grid, conv), args.curve)
    if args.json:
        _emit(json.dumps(report, indent=2) + "\n", args.out)
    else:
        _emit("".join(f"{k:<34} {v}\n" for k, v in report.items()), args.out)
    return EXIT_OK


def cmd_noon(args) -> int:
    cfg, cp, conv = _load_circuit(args)
    Ns = args.N or list(range(1, args.max_photons + 1))
    if args.n_max is not None and max(Ns) > args.n_max:
        raise CliError(f"N={max(Ns)} exceeds the truncation n_max={args.n_max}", EXIT_TRUNCATION)
    family = [(1.0 / r, cp.with_coupling_ratio(1.0 / r)) for r in args.ratios]
    try:
        rows = fidelity_scan(family, Ns, args.prep, n_max=args.n_max, convention=conv,
                             threads=args.threads)
    except NoIdlingPoint as exc:
        raise CliError(str(exc), EXIT_NO_IDLING) from None
    _emit(scan_to_csv(rows), args.out)
    if args.steps_log:
        runs = []
        for ratio, member in family:
            for N in Ns:
                space = HilbertSpace(args.n_max if args.n_max is not None else N + 2)
                g, _ = run_protocol(space, member, N, args.prep, conv)
                runs.append({"N": N, "cq_over_cr": ratio, "steps": json.loads(g.step_log_json())})
        with open(args.steps_log, "w", encoding="utf-8", newline="") as fh:
            fh.write(json.dumps(runs, indent=2) + "\n")
    return EXIT_OK


def cmd_optical(args) -> int:
    cfg = read_config(args.config)
    try:
        report = optical_report(cavity_from_config(cfg))
    except ConfigError:
        raise
    except ValueError as exc:
        raise CliError(str(exc), EXIT_CONFIG) from None
    _emit(json.dumps(report, indent=2) + "\n", args.out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("config", help="flat YAML/JSON config file")
    common.add_argument("--json", action="store_true", help="emit JSON instead of text/CSV")
    common.add_argument("--out", help="write the main output here instead of stdout")
    common.add_argument("--threads", type=int, default=None, help="worker threads for sweeps")
    common.add_argument("--convention", choices=sorted(CONVENTIONS), default=None,
                        help="coupling sign convention (default: config value or 'flipped')")

    parser = argparse.ArgumentParser(prog="collateral", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("derive", parents=[common], help="derived frequencies and couplings")
    p.set_defaults(func=cmd_derive)

    p = sub.add_parser("sweep-flux", parents=[common], help="P(t, flux) grid as CSV")
    p.add_argument("--flux-min", type=float, default=0.90)
    p.add_argument("--flux-max", type=float, default=1.10)
    p.add_argument("--n-flux", type=int, default=201)
    p.add_argument("--t-max-us", type=float, default=1.5)
    p.add_argument("--n-times", type=int, default=301)
    p.add_argument("-N", type=int, default=1, help="photons initially in R1")
    p.add_argument("--n-max", type=int, default=None, help="photon truncation (default N+2)")
    p.add_argument("--no-kappa", action="store_true", help="switch the collateral term off")
    p.add_argument("--variant", choices=("rwa", "transmon"), default="rwa")
    p.set_defaults(func=cmd_sweep_flux)

    p = sub.add_parser("idling", parents=[common], help="idling flux, numeric and closed form")
    p.add_argument("--no-kappa", action="store_true")
    p.add_argument("--bracket-min", type=float, default=0.5)
    p.add_argument("--bracket-max", type=float, default=1.5)
    p.add_argument("--curve", help="write |g_eff|(flux) CSV here")
    p.add_argument("--flux-min", type=float, default=0.5)
    p.add_argument("--flux-max", type=float, default=1.5)
    p.add_argument("--n-flux", type=int, default=201)
    p.set_defaults(func=cmd_idling)

    p = sub.add_parser("noon", parents=[common], help="NOON fidelity table")
    p.add_argument("--N", type=int, nargs="+", default=None, help="photon numbers to run")
    p.add_argument("--max-photons", type=int, default=3, help="run N = 1..max when --N is absent")
    p.add_argument("--prep", choices=("ideal", "simulated"), default="ideal")
    p.add_argument("--ratios", type=float, nargs="+", default=[50.0, 75.0, 100.0],
                   help="C_R / C_q values")
    p.add_argument("--n-max", type=int, default=None)
    p.add_argument("--steps-log", help="write the per-run step log JSON here")
    p.set_defaults(func=cmd_noon)

    p = sub.add_parser("optical", parents=[common], help="collateral coupling in optical cavities")
    p.set_defaults(func=cmd_optical)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code


if __name__ == "__main__":
    sys.exit(main())
