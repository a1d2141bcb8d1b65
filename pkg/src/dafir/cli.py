"""Command line: design, run, verify and report on DA filter designs.

Exit codes: 0 on success, 1 when a verification or cross-architecture
check found a mismatch, 2 for usage and parse errors. Every file error is
reported as a single line with the offending line number.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from decimal import Decimal, InvalidOperation
from typing import Sequence

from .adders import DEFAULT_COST_MODEL, AdderKind, CostModel
from .design import DesignError, DesignFile
from .engine import PpgMode, all_windows, da_filter_stream, verify_windows
from .numerics import CoefficientSet, FixedFormat, quantize_coefficient
from .report import (
    ArchConfig,
    ExternalFigures,
    compare_architectures,
    estimate_resources,
)

EXIT_OK = 0
EXIT_MISMATCH = 1
EXIT_USAGE = 2

EXHAUSTIVE_BITS_CAP = 20  # exhaustive verify limited to 2^20 windows


class CliError(Exception):
    def __init__(self, message: str, code: int = EXIT_USAGE) -> None:
        super().__init__(message)
        self.code = code


def _read_lines(path: str) -> list[tuple[int, str]]:
    """Non-empty payload lines with their 1-based numbers; '#' starts a comment."""
    try:
        with open(path, "r", encoding="utf-8") as f:
            raw = f.readlines()
    except OSError as exc:
        raise CliError(f"cannot read {path}: {exc.strerror}")
    out = []
    for lineno, line in enumerate(raw, start=1):
        payload = line.split("#", 1)[0].strip()
        if payload:
            out.append((lineno, payload))
    return out


def _parse_coefficients(path: str, fmt: FixedFormat):
    """One value per line; a '.', 'e' or 'E' marks a real to be quantized."""
    values = []
    warnings = []
    for lineno, text in _read_lines(path):
        if any(ch in text for ch in ".eE"):
            try:
                coeff, saturated = quantize_coefficient(text, fmt)
            except ValueError:
                raise CliError(f"{path}:{lineno}: cannot parse coefficient {text!r}")
            if saturated:
                warnings.append(
                    f"{path}:{lineno}: {text} saturated to {coeff.value}"
                )
            values.append(coeff.value)
        else:
            try:
                v = int(text)
            except ValueError:
                raise CliError(f"{path}:{lineno}: cannot parse coefficient {text!r}")
            if not fmt.contains(v):
                raise CliError(
                    f"{path}:{lineno}: integer coefficient {v} outside signed "
                    f"{fmt.width}-bit range"
                )
            values.append(v)
    if not values:
        raise CliError(f"{path}: no coefficients found")
    return values, warnings


def _parse_samples(path: str, fmt: FixedFormat) -> list[int]:
    samples = []
    for lineno, text in _read_lines(path):
        try:
            v = int(text)
        except ValueError:
            raise CliError(f"{path}:{lineno}: cannot parse sample {text!r}")
        if not fmt.contains(v):
            raise CliError(
                f"{path}:{lineno}: sample {v} outside signed {fmt.width}-bit range"
            )
        samples.append(v)
    return samples


def _load_design(path: str) -> DesignFile:
    try:
        return DesignFile.load(path)
    except OSError as exc:
        raise CliError(f"cannot read {path}: {exc.strerror}")
    except DesignError as exc:
        raise CliError(f"{path}: {exc}")


def _load_cost_model(path: str | None) -> CostModel:
    if path is None:
        return DEFAULT_COST_MODEL
    try:
        with open(path, "r", encoding="utf-8") as f:
            data = json.load(f)
    except OSError as exc:
        raise CliError(f"cannot read {path}: {exc.strerror}")
    except json.JSONDecodeError as exc:
        raise CliError(f"{path}: not valid JSON ({exc})")
    try:
        return CostModel.from_dict(data)
    except (TypeError, ValueError) as exc:
        raise CliError(f"{path}: {exc}")


def _decimal_flag(value: str | None, flag: str) -> Decimal | None:
    if value is None:
        return None
    try:
        return Decimal(value)
    except InvalidOperation:
        raise CliError(f"{flag} must be a decimal number, got {value!r}")


def _external_figures(cells, time_ns, power_mw, prefix: str) -> ExternalFigures | None:
    if cells is None and time_ns is None and power_mw is None:
        return None
    if cells is None or time_ns is None:
        raise CliError(f"{prefix}cells and {prefix}time-ns must be given together")
    return ExternalFigures(
        cells=cells,
        time_ns=_decimal_flag(time_ns, f"--{prefix}time-ns"),
        power_mw=_decimal_flag(power_mw, f"--{prefix}power-mw"),
    )


def cmd_design(args: argparse.Namespace) -> int:
    fmt = FixedFormat(args.coeff_width)
    FixedFormat(args.input_width)  # validate now, not at first run
    values, warnings = _parse_coefficients(args.coeff_file, fmt)
    for w in warnings:
        print(f"warning: {w}", file=sys.stderr)
    arch = ArchConfig(
        num_taps=len(values),
        coeff_width=args.coeff_width,
        input_width=args.input_width,
        group_size=args.group_size,
        ppg_mode=PpgMode(args.ppg),
        tree=AdderKind(args.tree),
    )
    design = DesignFile.create(arch, CoefficientSet.from_integers(values, fmt))
    design.save(args.out)
    print(f"memory locations: {estimate_resources(arch).memory_locations}")
    return EXIT_OK


def cmd_run(args: argparse.Namespace) -> int:
    design = _load_design(args.design)
    samples = _parse_samples(args.samples, FixedFormat(design.arch.input_width))
    outputs, traces = da_filter_stream(
        samples,
        design.coefficients,
        design.plan,
        design.arch.ppg_mode,
        design.arch.tree,
        input_width=design.arch.input_width,
        luts=design.luts,
        trace=args.trace is not None,
    )
    with open(args.out, "w", encoding="utf-8") as f:
        for y in outputs:
            f.write(f"{y}\n")
    if args.trace is not None:
        with open(args.trace, "w", encoding="utf-8") as f:
            for i, trace in enumerate(traces or []):
                for rec in trace:
                    f.write(
                        json.dumps(
                            {
                                "sample_index": i,
                                "cycle": rec.cycle,
                                "addresses": list(rec.addresses),
                                "partials": list(rec.partials),
                                "tree_sum": rec.tree_sum,
                                "subtract": rec.subtract,
                                "acc": rec.acc_after,
                            }
                        )
                        + "\n"
                    )
    return EXIT_OK


def cmd_verify(args: argparse.Namespace) -> int:
    design = _load_design(args.design)
    arch = design.arch
    if args.exhaustive:
        bits = arch.num_taps * arch.input_width
        if bits > EXHAUSTIVE_BITS_CAP:
            raise CliError(
                f"exhaustive verification needs num_taps*input_width <= "
                f"{EXHAUSTIVE_BITS_CAP} bits, this design has {bits}"
            )
        windows = all_windows(arch.num_taps, arch.input_width)
    else:
        if args.random < 1:
            raise CliError("--random needs a positive trial count")
        rng = random.Random(args.seed)
        lo = -(1 << (arch.input_width - 1))
        hi = (1 << (arch.input_width - 1)) - 1
        windows = (
            tuple(rng.randint(lo, hi) for _ in range(arch.num_taps))
            for _ in range(args.random)
        )
    checked, mismatches = verify_windows(
        design.coefficients,
        design.plan,
        arch.ppg_mode,
        input_width=arch.input_width,
        windows=windows,
        luts=design.luts,
    )
    if mismatches:
        bad = mismatches[0]
        print(
            f"mismatch at window {list(bad.window)}: da={bad.got} direct={bad.expected}",
            file=sys.stderr,
        )
        print(f"{checked - len(mismatches)}/{checked} ok before first mismatch")
        return EXIT_MISMATCH
    print(f"{checked}/{checked} ok")
    return EXIT_OK


def cmd_report(args: argparse.Namespace) -> int:
    design = _load_design(args.design)
    model = _load_cost_model(args.cost_model)
    external = _external_figures(args.cells, args.time_ns, args.power_mw, "")

    if args.compare is None:
        report = estimate_resources(design.arch, model, external)
        print(json.dumps(report.to_dict(), indent=2))
        return EXIT_OK

    other = _load_design(args.compare)
    external_b = _external_figures(
        args.compare_cells, args.compare_time_ns, args.compare_power_mw, "compare-"
    )
    samples = None
    if args.samples is not None:
        samples = _parse_samples(args.samples, FixedFormat(design.arch.input_width))
    try:
        comparison = compare_architectures(
            design.arch,
            other.arch,
            coeffs=design.coefficients,
            candidate_coeffs=other.coefficients,
            samples=samples,
            baseline_luts=design.luts,
            candidate_luts=other.luts,
            model=model,
            baseline_external=external,
            candidate_external=external_b,
        )
    except ValueError as exc:
        message = str(exc)
        if "disagree" in message:
            print(f"error: {message}", file=sys.stderr)
            return EXIT_MISMATCH
        raise CliError(message)
    print(json.dumps(comparison.to_dict(), indent=2))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dafir",
        description="Distributed-arithmetic FIR filter modeling and verification.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("design", help="quantize coefficients and write a design file")
    p.add_argument("coeff_file", help="text file, one coefficient per line")
    p.add_argument("--coeff-width", type=int, default=16)
    p.add_argument("--input-width", type=int, default=16)
    p.add_argument("--group-size", type=int, default=2)
    p.add_argument("--ppg", choices=[m.value for m in PpgMode], default="stored")
    p.add_argument("--tree", choices=[k.value for k in AdderKind], default="cla")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_design)

    p = sub.add_parser("run", help="filter a sample file through a design")
    p.add_argument("--design", required=True)
    p.add_argument("--samples", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--trace", help="write a JSONL cycle trace here")
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("verify", help="check the DA path against the direct form")
    p.add_argument("--design", required=True)
    mode = p.add_mutually_exclusive_group(required=True)
    mode.add_argument("--exhaustive", action="store_true")
    mode.add_argument("--random", type=int, metavar="N")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("report", help="print resource accounting as JSON")
    p.add_argument("--design", required=True)
    p.add_argument("--compare", help="second design to compare against")
    p.add_argument("--samples", help="probe stream for the output-equality check")
    p.add_argument("--cost-model", help="JSON file overriding cost-model constants")
    p.add_argument("--cells", type=int)
    p.add_argument("--time-ns")
    p.add_argument("--power-mw")
    p.add_argument("--compare-cells", type=int)
    p.add_argument("--compare-time-ns")
    p.add_argument("--compare-power-mw")
    p.set_defaults(func=cmd_report)

    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code
    except ValueError as exc:
        # bad widths, group sizes and other parameter validation
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
