"""Command-line entry point.

Exit codes: 0 success, 1 verification failure, 2 usage error, 3 I/O error.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path

from twinpulse import identities, robustness, waveform
from twinpulse.sequences import (
    REFERENCE_NAMES,
    CompositeSequence,
    Family,
    build_twin,
    reference_sequence,
    single_pulse,
)
from twinpulse.su2 import Su2Matrix, transition_probability

EXIT_OK = 0
EXIT_VERIFY_FAILED = 1
EXIT_USAGE = 2
EXIT_IO = 3


class UsageError(Exception):
    pass


def parse_sequence_spec(text: str) -> CompositeSequence:
    """Compact sequence spec: ``type1:3``, ``L3plus``, ``single`` or a ``.json`` path."""
    text = text.strip()
    if text in REFERENCE_NAMES:
        return reference_sequence(text)
    if text == "single":
        return single_pulse()
    if text.endswith(".json"):
        return _load_sequence_file(text)
    family, sep, n = text.partition(":")
    if not sep:
        raise UsageError(f"cannot parse sequence spec {text!r}")
    try:
        return build_twin(Family.parse(family), int(n))
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _load_sequence_file(path: str) -> CompositeSequence:
    text = Path(path).read_text(encoding="utf-8")
    try:
        return CompositeSequence.from_json(text)
    except (ValueError, KeyError, TypeError) as exc:
        raise UsageError(f"{path}: malformed sequence file ({exc})") from None


def _sequence_from_args(args) -> CompositeSequence:
    chosen = [x for x in (args.family, args.ref, args.file) if x is not None] + ([True] if args.single else [])
    if len(chosen) != 1:
        raise UsageError("give exactly one of --family/--n, --ref, --file, --single")
    if args.ref is not None:
        if args.ref not in REFERENCE_NAMES:
            raise UsageError(f"unknown reference {args.ref!r}")
        return reference_sequence(args.ref)
    if args.file is not None:
        return _load_sequence_file(args.file)
    if args.single:
        return single_pulse()
    if args.n is None:
        raise UsageError("--family needs --n")
    try:
        return build_twin(Family.parse(args.family), args.n)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _grid_from_args(args) -> robustness.GridSpec:
    try:
        return robustness.GridSpec(args.eps_min, args.eps_max, args.points)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _check_threshold(threshold: float) -> float:
    if not 0 < threshold < 1:
        raise UsageError(f"--threshold must lie in (0, 1), got {threshold}")
    return threshold


def _emit(text: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(text)
        return
    with open(out, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)


def _dumps(obj) -> str:
    return json.dumps(obj, indent=2) + "\n"


def _su2_dict(u: Su2Matrix) -> dict:
    return {
        "a": [u.a.real, u.a.imag],
        "b": [u.b.real, u.b.imag],
        "transition_probability": transition_probability(u),
    }


# -- subcommands ---------------------------------------------------------------


def cmd_phases(args) -> int:
    seq = _sequence_from_args(args)
    text = seq.to_json() + "\n" if args.format == "json" else seq.describe() + "\n"
    _emit(text, args.out)
    return EXIT_OK


def cmd_profile(args) -> int:
    seq = _sequence_from_args(args)
    table = robustness.profile(seq, _grid_from_args(args))
    text = _dumps(table.to_dict()) if args.format == "json" else table.to_csv()
    _emit(text, args.out)
    return EXIT_OK


def cmd_verify(args) -> int:
    family = args.family.strip().lower()
    if family == "chebyshev":
        n_max = 30 if args.n_max is None else args.n_max
        if n_max < 1:
            raise UsageError("--n-max must be >= 1")
        checks = [identities.check_chebyshev(n) for n in range(1, n_max + 1)]
        reports = [c.to_dict() for c in checks]
        ok = all(c.passed for c in checks)
    else:
        try:
            fam = Family.parse(family)
        except ValueError as exc:
            raise UsageError(str(exc)) from None
        if not fam.is_twin:
            raise UsageError(f"{family!r} is not a twin family")
        n_max = 12 if args.n_max is None else args.n_max
        if n_max < 2:
            raise UsageError("--n-max must be >= 2")
        results = [identities.verify_identities(fam, n) for n in range(2, n_max + 1)]
        reports = [r.to_dict() for r in results]
        ok = all(r.passed for r in results)
    _emit(_dumps(reports), args.out)
    return EXIT_OK if ok else EXIT_VERIFY_FAILED


def cmd_compare(args) -> int:
    seq_a, seq_b = parse_sequence_spec(args.a), parse_sequence_spec(args.b)
    report = robustness.compare(seq_a, seq_b, _grid_from_args(args), _check_threshold(args.threshold))
    _emit(_dumps(report.to_dict()), args.out)
    return EXIT_OK


def cmd_bandwidth(args) -> int:
    seq = _sequence_from_args(args)
    threshold = _check_threshold(args.threshold)
    analytic = seq.family.is_twin and not args.numeric
    result = {
        "sequence": seq.label,
        "threshold": threshold,
        "bandwidth": robustness.bandwidth(seq, threshold, numeric=args.numeric),
        "method": "closed_form" if analytic else "bisection",
    }
    _emit(_dumps(result), args.out)
    return EXIT_OK


def cmd_integrate(args) -> int:
    if args.envelope is not None:
        try:
            env = waveform.Envelope.read_csv(args.envelope, args.target_area)
        except (ValueError, IndexError) as exc:
            raise UsageError(str(exc)) from None
        u = waveform.integrate(env, args.phase * math.pi)
        result = {"envelope": args.envelope, "area": env.area, **_su2_dict(u)}
    else:
        seq = _sequence_from_args(args)
        try:
            u = waveform.integrate_composite(seq, args.eps, args.shape, args.steps)
        except (KeyError, ValueError) as exc:
            raise UsageError(f"bad shape or sequence: {exc}") from None
        abstract = robustness.sequence_propagator(seq, args.eps)
        result = {
            "sequence": seq.label,
            "epsilon": args.eps,
            "shape": args.shape,
            **_su2_dict(u),
            "abstract_transition_probability": transition_probability(abstract),
            "max_element_deviation": max(abs(u.a - abstract.a), abs(u.b - abstract.b)),
        }
    _emit(_dumps(result), args.out)
    return EXIT_OK


# -- parser --------------------------------------------------------------------


def _add_sequence_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--family", help="twin family: type1, type2 or type3")
    p.add_argument("--n", type=int, help="half-sequence length N (>= 2)")
    p.add_argument("--ref", help=f"reference sequence: {', '.join(REFERENCE_NAMES)}")
    p.add_argument("--file", help="sequence JSON file")
    p.add_argument("--single", action="store_true", help="a lone nominal pi pulse")


def _add_grid_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--eps-min", type=float, default=-1.0)
    p.add_argument("--eps-max", type=float, default=1.0)
    p.add_argument("--points", type=int, default=2001)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="twinpulse", description="Twin composite pi-pulse toolkit.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("phases", help="print the pulse table of a sequence")
    _add_sequence_args(p)
    p.add_argument("--format", choices=["text", "json"], default="text")
    p.add_argument("--out")
    p.set_defaults(func=cmd_phases)

    p = sub.add_parser("profile", help="excitation profile table")
    _add_sequence_args(p)
    _add_grid_args(p)
    p.add_argument("--format", choices=["csv", "json"], default="csv")
    p.add_argument("--out")
    p.set_defaults(func=cmd_profile)

    p = sub.add_parser("verify", help="polynomial and product identity checks")
    p.add_argument("--family", required=True, help="type1, type2, type3 or chebyshev")
    p.add_argument("--n-max", type=int)
    p.add_argument("--format", choices=["json"], default="json")
    p.add_argument("--out")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("compare", help="compare two sequences")
    p.add_argument("a", help="sequence spec, e.g. type1:3, L3plus, single, seq.json")
    p.add_argument("b")
    _add_grid_args(p)
    p.add_argument("--threshold", type=float, default=1e-4)
    p.add_argument("--format", choices=["json"], default="json")
    p.add_argument("--out")
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("bandwidth", help="high-fidelity half-width")
    _add_sequence_args(p)
    p.add_argument("--threshold", type=float, default=1e-4)
    p.add_argument("--numeric", action="store_true", help="bisection even for twin families")
    p.add_argument("--format", choices=["json"], default="json")
    p.add_argument("--out")
    p.set_defaults(func=cmd_bandwidth)

    p = sub.add_parser("integrate", help="time-domain propagation of shaped pulses")
    _add_sequence_args(p)
    p.add_argument("--envelope", help="CSV with header t,omega")
    p.add_argument("--target-area", type=float, help="rescale the envelope to this area (radians)")
    p.add_argument("--phase", type=float, default=0.0, help="drive phase in units of pi")
    p.add_argument("--eps", type=float, default=0.0)
    p.add_argument("--shape", choices=sorted(waveform.SHAPES), default="gaussian")
    p.add_argument("--steps", type=int, default=waveform.DEFAULT_STEPS)
    p.add_argument("--format", choices=["json"], default="json")
    p.add_argument("--out")
    p.set_defaults(func=cmd_integrate)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"twinpulse {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"twinpulse {args.command}: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
