"""Command line entry points: gen, validate, decode, sweep."""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import sim
from .cellcomplex import build_bcc_colex, load_colex, save_colex, validate_colex
from .code import ErrorSupport, residual_class, syndrome_of
from .pipeline import DecodeFailure, DecodingContext, decode
from .toricdecoder import DEFAULT_CAPS, DecoderCaps, DecoderKind


def _caps_from_args(args: argparse.Namespace) -> DecoderCaps:
    return DecoderCaps(
        max_matching_defects=args.cap_matching,
        max_surface_weight=args.cap_surface,
        max_surface_nullspace=DEFAULT_CAPS.max_surface_nullspace,
    )


def _add_decoder_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "--toric-decoder",
        choices=[k.value for k in DecoderKind],
        default=DecoderKind.EXACT_MIN_WEIGHT.value,
        help="component decoder kind (default: exact)",
    )
    parser.add_argument(
        "--cap-matching",
        type=int,
        default=DEFAULT_CAPS.max_matching_defects,
        metavar="N",
        help="exact matching refuses above this many flagged checks",
    )
    parser.add_argument(
        "--cap-surface",
        type=int,
        default=DEFAULT_CAPS.max_surface_weight,
        metavar="W",
        help="exact surface search refuses above this estimate weight",
    )


def _parse_probability_list(tokens: list[str]) -> list[float]:
    values = []
    for token in tokens:
        for piece in token.split(","):
            piece = piece.strip()
            if piece:
                values.append(float(piece))
    return values


def _cmd_gen(args: argparse.Namespace) -> int:
    colex = build_bcc_colex(args.L)
    save_colex(colex, args.out, indent=1)
    v, e, f, c = colex.complex.counts
    print(f"wrote {args.out}: L={args.L}, {v} vertices, {e} edges, {f} faces, {c} cells")
    return 0


def _cmd_validate(args: argparse.Namespace) -> int:
    try:
        colex = load_colex(args.infile)
    except (OSError, ValueError, KeyError) as exc:
        print(f"error: cannot load lattice: {exc}", file=sys.stderr)
        return 1
    report = validate_colex(colex)
    print(report.summary())
    return 0 if report.ok else 1


def _cmd_decode(args: argparse.Namespace) -> int:
    colex = load_colex(args.lattice)
    ctx = DecodingContext.from_colex(colex)
    with open(args.error, encoding="utf-8") as fh:
        spec = json.load(fh)
    error = ErrorSupport.from_qubits(
        ctx.n_qubits, x=spec.get("x", ()), z=spec.get("z", ())
    )
    syndrome = syndrome_of(ctx.dual, error)
    kind = DecoderKind.from_name(args.toric_decoder)
    caps = _caps_from_args(args)
    verdict: dict
    try:
        result = decode(ctx, syndrome, kind, caps)
        estimate = result.estimate
        verdict = {
            "estimate": {
                "x": [int(q) for q in np.nonzero(estimate.x)[0]],
                "z": [int(q) for q in np.nonzero(estimate.z)[0]],
            },
            "residual_class": residual_class(ctx.dual, error, estimate).value,
            "failure_mode": None,
        }
    except DecodeFailure as exc:
        verdict = {
            "estimate": None,
            "residual_class": residual_class(
                ctx.dual, error, ErrorSupport.empty(ctx.n_qubits)
            ).value,
            "failure_mode": exc.mode.value,
            "failure_stage": exc.stage,
        }
    json.dump(verdict, sys.stdout, indent=1)
    print()
    return 0


def _cmd_sweep(args: argparse.Namespace) -> int:
    p_x = _parse_probability_list(args.px)
    p_z = _parse_probability_list(args.pz) if args.pz else None
    colex = build_bcc_colex(args.L)
    kind = DecoderKind.from_name(args.toric_decoder)
    caps = _caps_from_args(args)
    try:
        report = sim.sweep(
            colex,
            p_x,
            trials=args.trials,
            seed=args.seed,
            p_z_list=p_z,
            kind=kind,
            caps=caps,
            workers=args.workers,
            lattice_size=args.L,
        )
    except sim.VerificationError as exc:
        print(f"internal verification failure: {exc}", file=sys.stderr)
        return 1
    report.write_json(args.out)
    if args.csv:
        report.write_csv(args.csv)
    for pt in report.points:
        print(
            f"p={pt.p:g}: {pt.bad}/{pt.trials} bad "
            f"(rate {pt.rate:.3g}, CI [{pt.ci_lo:.3g}, {pt.ci_hi:.3g}])"
        )
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="colexdec",
        description="3D color code decoding via projection onto toric codes",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("gen", help="generate a periodic lattice and save it as JSON")
    gen.add_argument("--L", type=int, required=True, help="linear size (even, >= 2)")
    gen.add_argument("--out", required=True, help="output JSON path")
    gen.set_defaults(func=_cmd_gen)

    val = sub.add_parser("validate", help="check a saved lattice file")
    val.add_argument("--in", dest="infile", required=True, help="lattice JSON path")
    val.set_defaults(func=_cmd_validate)

    dec = sub.add_parser("decode", help="decode one error from a JSON description")
    dec.add_argument("--lattice", required=True, help="lattice JSON path")
    dec.add_argument(
        "--error",
        required=True,
        help='JSON file with {"x": [qubit ids], "z": [qubit ids]}',
    )
    _add_decoder_flags(dec)
    dec.set_defaults(func=_cmd_decode)

    swp = sub.add_parser("sweep", help="Monte Carlo sweep over noise strengths")
    swp.add_argument("--L", type=int, required=True, help="linear size (even, >= 2)")
    swp.add_argument("--px", nargs="+", required=True, metavar="P",
                     help="X flip probabilities (space or comma separated)")
    swp.add_argument("--pz", nargs="+", default=None, metavar="P",
                     help="Z flip probabilities (default: same as --px)")
    swp.add_argument("--trials", type=int, required=True)
    swp.add_argument("--seed", type=int, default=0)
    swp.add_argument("--out", required=True, help="JSON report path")
    swp.add_argument("--csv", default=None, help="also write per-point CSV rows")
    swp.add_argument("--workers", type=int, default=None,
                     help=f"worker processes (default: ${sim.WORKERS_ENV} or 1)")
    _add_decoder_flags(swp)
    swp.set_defaults(func=_cmd_sweep)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
