"""Command-line entry point: ``oemsim run | validate | stability``.

Exit codes: 0 success, 1 validation failure, 2 numerical failure, 3 I/O failure.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import replace
from pathlib import Path

import numpy as np

from .dynamics import build_drift, stability_check
from .errors import ConfigError, NumericalError
from .harness.configio import (
    baseline_from_document,
    load_document,
    sweep_from_document,
    system_config_from_document,
)
from .harness.output import csv_text, emit_csv, emit_metadata, emit_svg_plot
from .harness.scenarios import (
    DEFAULT_BASELINE,
    SCENARIO_IDS,
    scenario_custom,
    scenario_fig2,
    scenario_fig3,
    scenario_fig4,
    scenario_fig5,
)
from .harness.sweep import run_sweep
from .physics import derive_couplings, validate_config

EXIT_OK, EXIT_VALIDATION, EXIT_NUMERICAL, EXIT_IO = 0, 1, 2, 3


def build_scenario(args):
    doc = load_document(args.config) if args.config else {}
    baseline = baseline_from_document(doc, DEFAULT_BASELINE)
    sid = args.scenario
    if sid == "fig2_detuning":
        sc = scenario_fig2(args.pairs or 2, baseline=baseline)
    elif sid == "fig3_multifreq":
        sc = scenario_fig3(baseline=baseline)
    elif sid == "fig4_temperature":
        sc = scenario_fig4(args.model, args.pairs or 2, baseline=baseline)
    elif sid == "fig5_detuning_coefficient":
        sc = scenario_fig5(baseline=baseline)
    else:
        if not args.config:
            raise ConfigError("the custom scenario needs --config with microwaves and sweep sections")
        axis, observables = sweep_from_document(doc)
        sc = scenario_custom(system_config_from_document(doc, baseline), axis, observables)
    if args.points is not None:
        sc = replace(sc, axis=replace(sc.axis, points=args.points))
    return sc


def cmd_run(args) -> int:
    scenario = build_scenario(args)
    result = run_sweep(scenario, backend=args.backend, workers=args.workers)
    if args.out:
        emit_csv(result, args.out)
        emit_metadata(result, Path(str(args.out) + ".meta.json"))
    else:
        sys.stdout.write(csv_text(result))
    if args.svg:
        emit_svg_plot(result, args.svg)
    failed = [r for r in result.rows if r.error]
    unstable = sum(1 for r in result.rows if not r.stable and not r.error)
    print(
        f"{scenario.id}: {len(result.rows)} points, {unstable} unstable, {len(failed)} failed "
        f"(config {result.config_hash[:12]})",
        file=sys.stderr,
    )
    return EXIT_OK


def _load_system(path):
    return system_config_from_document(load_document(path))


def cmd_validate(args) -> int:
    config = _load_system(args.config)
    problems = validate_config(config)
    if problems:
        for p in problems:
            print(p)
        return EXIT_VALIDATION
    print(f"ok: {config.n_microwave} microwave cavities, drift dimension {config.dimension}")
    return EXIT_OK


def cmd_stability(args) -> int:
    config = _load_system(args.config)
    problems = validate_config(config)
    if problems:
        for p in problems:
            print(p)
        return EXIT_VALIDATION
    A = build_drift(config, derive_couplings(config))
    report = stability_check(A, method=args.method)
    eigs = report.eigenvalues if report.eigenvalues is not None else np.linalg.eigvals(A)
    omega_m = config.mech.omega_m
    print("eigenvalues / omega_m (real, imag):")
    for lam in sorted(eigs, key=lambda z: (-z.real, z.imag)):
        print(f"  {lam.real / omega_m: .12e} {lam.imag / omega_m: .12e}")
    if report.eigenvalues is not None:
        print(f"spectral abscissa: {report.spectral_abscissa:.12e} 1/s")
    if report.certificate_min_eig is not None:
        print(f"Lyapunov certificate min eigenvalue: {report.certificate_min_eig:.6e}")
    print("verdict:", "stable" if report.is_stable else "unstable")
    return EXIT_OK


def make_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="oemsim", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run a sweep scenario and write CSV/SVG")
    run.add_argument("--scenario", required=True, choices=SCENARIO_IDS)
    run.add_argument("--pairs", type=int, help="pair count (fig2, fig4 with --model fig2)")
    run.add_argument("--model", choices=("fig2", "fig3"), default="fig3", help="network for fig4")
    run.add_argument("--points", type=int, help="axis grid size (default 101)")
    run.add_argument("--out", type=Path, help="CSV path (default: stdout)")
    run.add_argument("--svg", type=Path, help="SVG plot path")
    run.add_argument("--config", type=Path, help="JSON config overriding the baseline parameters")
    run.add_argument("--backend", choices=("schur", "vectorized"), default="schur")
    run.add_argument("--workers", type=int, default=1)
    run.set_defaults(func=cmd_run)

    val = sub.add_parser("validate", help="check a config file against all invariants")
    val.add_argument("--config", type=Path, required=True)
    val.set_defaults(func=cmd_validate)

    stab = sub.add_parser("stability", help="print the drift-matrix spectrum and stability verdict")
    stab.add_argument("--config", type=Path, required=True)
    stab.add_argument("--method", choices=("eigenvalue", "lyapunov_certificate", "both"), default="both")
    stab.set_defaults(func=cmd_stability)
    return p


def main(argv=None) -> int:
    args = make_parser().parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except NumericalError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except OSError as exc:
        print(f"I/O failure: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
