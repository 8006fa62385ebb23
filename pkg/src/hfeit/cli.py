"""Command-line front end.

Subcommands: transitions | dress | spectrum | diagram | validate.
All frequencies in configs and outputs are linear MHz.  Exit codes:
0 ok, 1 validation failure, 2 config error, 3 numerical contract
violation, 4 solver failure.

Report paths (``--out``) write the delimited/JSON data, a rendered
figure next to it, and, for spectra, a peaks sidecar document.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from .config import RunConfig, default_config, load_config
from .couplings import count_transitions, enumerate_couplings, export_diagram, \
    reachable_origin_filter
from .dressing import build_rf_hamiltonian, diagonalize, fine_structure_reference
from .errors import ConfigError, NumericalContractError, SolverError
from .model import build_basis
from .spectrum import scan_spectrum
from .validate import run_validation

CONVENTION_NOTE = "frequencies are linear MHz (angular = 2*pi*value)"


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hfeit",
        description="Hyperfine EIT ladder simulator: transition enumeration, "
                    "RF dressing, and probe transmission spectra.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p: argparse.ArgumentParser) -> None:
        group = p.add_mutually_exclusive_group()
        group.add_argument("--config", metavar="PATH", help="run configuration file")
        group.add_argument("--preset", choices=("full", "truncated"),
                           help="use a preset scenario with default settings")
        p.add_argument("--out", metavar="PATH", help="output file; figures and "
                       "sidecars are written alongside")
        p.add_argument("--format", choices=("csv", "json"), dest="fmt",
                       help="output format (default from config)")

    p = sub.add_parser("transitions", help="count and list dipole couplings per field")
    add_common(p)
    p.add_argument("--list", action="store_true", dest="listing",
                   help="include the full coupling listing")

    p = sub.add_parser("dress", help="diagonalize the RF dressing Hamiltonian")
    add_common(p)

    p = sub.add_parser("spectrum", help="scan probe transmission vs coupling detuning")
    add_common(p)
    p.add_argument("--jobs", type=int, default=1, metavar="N",
                   help="parallel solver threads (default 1)")

    p = sub.add_parser("diagram", help="export the level diagram graph")
    add_common(p)

    p = sub.add_parser("validate", help="run the self-validation oracle suite")
    p.add_argument("--tolerance", type=float, default=1e-12,
                   help="symbol-oracle tolerance (default 1e-12)")
    p.add_argument("--j-max", type=float, default=3, dest="j_max",
                   help="largest j in the symbol sweep (default 3)")
    return parser


def _load(args) -> RunConfig:
    if args.config:
        config = load_config(args.config)
    else:
        config = default_config(args.preset or "full")
    if args.fmt:
        config = RunConfig(config.scenario_name, config.scenario, config.drive,
                           config.decay, config.scan, config.cluster_tolerance_mhz,
                           config.min_prominence, args.fmt)
    return config


def _basis_for(config: RunConfig):
    pols = (config.drive.probe.polarization, config.drive.coupling.polarization)
    return build_basis(config.scenario, optical_polarizations=pols)


def _emit(text: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")
    else:
        Path(out).write_text(text if text.endswith("\n") else text + "\n",
                             encoding="utf-8")
        print(f"wrote {out}")


def _save_figure_next_to(fig, out: str | None) -> None:
    if out is None:
        return
    from .plots import save_figure

    path = Path(out).with_suffix(".png")
    save_figure(fig, path)
    print(f"wrote {path}")


def cmd_transitions(args) -> int:
    config = _load(args)
    basis = _basis_for(config)
    fields = (config.drive.probe, config.drive.coupling, config.drive.rf)
    keep_reachable = reachable_origin_filter(basis)
    rows = []
    for fs in fields:
        cs = enumerate_couplings(basis, fs)
        rows.append((fs.name, cs, count_transitions(cs),
                     count_transitions(cs, keep_reachable)))

    if config.output_format == "json":
        doc = {
            "convention": CONVENTION_NOTE,
            "scenario": config.scenario_name,
            "counts": {
                name: {"raw": raw, "reachable_origin": filt}
                for name, _, raw, filt in rows
            },
        }
        if args.listing:
            doc["couplings"] = {
                name: [
                    {
                        "from": basis.states[c.from_index].state_id(),
                        "to": basis.states[c.to_index].state_id(),
                        "q": c.q,
                        "amplitude": c.amplitude.real,
                        "amplitude_imag": c.amplitude.imag,
                        "strength": c.strength,
                    }
                    for c in cs.couplings
                ]
                for name, cs, _, _ in rows
            }
        _emit(json.dumps(doc, indent=2), args.out)
        return 0

    if config.output_format == "csv" and args.out:
        lines = [f"# {CONVENTION_NOTE}", "field,raw,reachable_origin"]
        lines += [f"{name},{raw},{filt}" for name, _, raw, filt in rows]
        if args.listing:
            lines.append("field,from,to,q,amplitude,amplitude_imag,strength")
            for name, cs, _, _ in rows:
                for c in cs.couplings:
                    lines.append(
                        f"{name},{basis.states[c.from_index].state_id()},"
                        f"{basis.states[c.to_index].state_id()},{c.q},"
                        f"{c.amplitude.real!r},{c.amplitude.imag!r},{c.strength!r}"
                    )
        _emit("\n".join(lines), args.out)
        return 0

    lines = [f"scenario: {config.scenario_name}"]
    for name, cs, raw, filt in rows:
        if name == "rf":
            lines.append(f"{name}: {raw} (reachable-origin: {filt})")
        else:
            lines.append(f"{name}: {raw}")
        if args.listing:
            for c in cs.couplings:
                lines.append(
                    f"  {basis.states[c.from_index].state_id()} -> "
                    f"{basis.states[c.to_index].state_id()}  q={c.q:+d}  "
                    f"amplitude={c.amplitude.real:+.6f}"
                    + (f"{c.amplitude.imag:+.6f}j" if c.amplitude.imag else "")
                )
    _emit("\n".join(lines), args.out)
    return 0


def _reduction_report(basis, rf_field, result):
    level_lo = basis.level_for("rydberg_lower")
    level_hi = basis.level_for("rydberg_upper")
    multiplicity = basis.nuclear_spin.twice + 1
    expected_size = (level_lo.j.twice + 1 + level_hi.j.twice + 1) * multiplicity
    if result.eigenvalues.size != expected_size:
        return None
    try:
        reference = fine_structure_reference(level_lo.j, level_hi.j, rf_field)
    except ValueError:
        return None
    expected = np.sort(np.repeat(reference, multiplicity))
    deviation = float(np.max(np.abs(np.sort(result.eigenvalues) - expected)))
    return {
        "reference_mhz": [float(v) for v in reference],
        "multiplicity": multiplicity,
        "max_deviation_mhz": deviation,
    }


def cmd_dress(args) -> int:
    config = _load(args)
    basis = _basis_for(config)
    ham = build_rf_hamiltonian(basis, config.drive.rf, config.drive.rf_detuning_mhz)
    result = diagonalize(ham, config.cluster_tolerance_mhz)
    reduction = _reduction_report(basis, config.drive.rf, result)

    if config.output_format == "json":
        doc = {
            "convention": CONVENTION_NOTE,
            "scenario": config.scenario_name,
            "rf_rabi_mhz": config.drive.rf.rabi_radial_mhz,
            "eigenvalues_mhz": [float(v) for v in result.eigenvalues],
            "unique_mhz": [float(v) for v in result.unique],
            "unique_count": int(result.unique.size),
            "cluster_tolerance_mhz": result.cluster_tolerance,
            "fine_structure": reduction,
        }
        _emit(json.dumps(doc, indent=2), args.out)
    else:
        lines = [f"# {CONVENTION_NOTE}",
                 f"# scenario {config.scenario_name}: {result.unique.size} unique "
                 f"eigenvalues at tolerance {result.cluster_tolerance:g} MHz",
                 "# unique_mhz: " + ",".join(f"{v:.9g}" for v in result.unique)]
        if reduction is not None:
            lines.append(
                "# fine-structure reduction max deviation "
                f"{reduction['max_deviation_mhz']:.3e} MHz "
                f"(multiplicity {reduction['multiplicity']})"
            )
        lines.append("index,eigenvalue_mhz")
        lines += [f"{i},{float(v)!r}" for i, v in enumerate(result.eigenvalues)]
        _emit("\n".join(lines), args.out)

    if args.out:
        from .plots import dressing_figure

        _save_figure_next_to(dressing_figure(result), args.out)
    return 0


def cmd_spectrum(args) -> int:
    config = _load(args)
    basis = _basis_for(config)
    series = scan_spectrum(
        basis, config.drive, config.decay,
        detunings_mhz=config.scan.grid(),
        optical_depth=config.scan.optical_depth,
        min_prominence=config.min_prominence,
        jobs=max(1, args.jobs),
    )
    ham = build_rf_hamiltonian(basis, config.drive.rf, config.drive.rf_detuning_mhz)
    dressed = diagonalize(ham, config.cluster_tolerance_mhz)

    peaks_doc = {
        "convention": CONVENTION_NOTE,
        "peaks": [
            {"position_mhz": p.position_mhz, "transmission": p.height,
             "prominence": p.prominence}
            for p in series.peaks
        ],
        "unique_eigenvalues_mhz": [float(v) for v in dressed.unique],
        "optical_depth": series.optical_depth,
        "reference_absorption": series.reference_absorption,
    }

    if config.output_format == "json":
        doc = dict(peaks_doc)
        doc["detuning_mhz"] = [float(v) for v in series.detunings_mhz]
        doc["absorption"] = [float(v) for v in series.absorption]
        doc["transmission"] = [float(v) for v in series.transmission]
        _emit(json.dumps(doc, indent=2), args.out)
    else:
        lines = [f"# {CONVENTION_NOTE}",
                 f"# optical_depth {series.optical_depth!r}, reference_absorption "
                 f"{series.reference_absorption!r}",
                 "detuning_mhz,absorption,transmission"]
        lines += [
            f"{float(d)!r},{float(a)!r},{float(t)!r}"
            for d, a, t in zip(series.detunings_mhz, series.absorption,
                               series.transmission)
        ]
        _emit("\n".join(lines), args.out)

    if args.out:
        sidecar = Path(args.out).with_suffix(".peaks.json")
        sidecar.write_text(json.dumps(peaks_doc, indent=2) + "\n", encoding="utf-8")
        print(f"wrote {sidecar}")
        from .plots import spectrum_figure

        _save_figure_next_to(spectrum_figure(series, dressed.unique), args.out)
    else:
        summary = ", ".join(f"{p.position_mhz:+.2f} MHz" for p in series.peaks)
        print(f"{len(series.peaks)} transmission peaks: {summary}")
    return 0


def cmd_diagram(args) -> int:
    # the graph document is JSON-shaped; the config-level csv default
    # applies to the tabular commands, so only an explicit ask is an error
    if args.fmt == "csv":
        raise ConfigError("the diagram document is JSON-shaped; use --format json")
    config = _load(args)
    basis = _basis_for(config)
    sets = [enumerate_couplings(basis, fs)
            for fs in (config.drive.probe, config.drive.coupling, config.drive.rf)]
    graph = export_diagram(basis, sets)
    graph["convention"] = CONVENTION_NOTE
    _emit(json.dumps(graph, indent=2), args.out)
    if args.out:
        from .plots import diagram_figure

        _save_figure_next_to(diagram_figure(graph), args.out)
    return 0


def cmd_validate(args) -> int:
    try:
        report = run_validation(tolerance=args.tolerance, j_max=args.j_max)
    except ValueError as exc:
        print(f"invalid argument: {exc}", file=sys.stderr)
        return 2
    for line in report.lines():
        print(line)
    return 0 if report.passed else 1


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    handlers = {
        "transitions": cmd_transitions,
        "dress": cmd_dress,
        "spectrum": cmd_spectrum,
        "diagram": cmd_diagram,
        "validate": cmd_validate,
    }
    try:
        return handlers[args.command](args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except NumericalContractError as exc:
        print(f"numerical contract violation: {exc}", file=sys.stderr)
        return 3
    except SolverError as exc:
        print(f"solver failure: {exc}", file=sys.stderr)
        return 4


if __name__ == "__main__":
    sys.exit(main())
