"""Command-line front end.

Exit codes: 0 success, 2 unparseable input, 3 invalid channel, 4 unmet
precondition, 5 failed analysis.
"""
from __future__ import annotations

import argparse
import sys

import numpy as np

from . import analysis, channels, dilations, fileio, verify
from .errors import (
    DilationMismatchError,
    DimensionError,
    FormatError,
    PreconditionError,
    ValidationError,
)

EXIT_OK = 0
EXIT_PARSE = 2
EXIT_INVALID = 3
EXIT_PRECONDITION = 4
EXIT_ANALYSIS = 5

#: Embedded and recomputed reconstruction errors must agree to this.
REVERIFY_TOL = 1e-12
#: A dilation whose reconstruction error exceeds this does not realize the channel.
REALIZE_TOL = 1e-8


def _emit(path: str | None, text: str) -> None:
    if path is None:
        return
    if path == "-":
        sys.stdout.write(text)
    else:
        fileio.write_text(path, text)


def _say(args, text: str = "") -> None:
    # keep stdout clean when it carries the emitted JSON
    print(text, file=sys.stderr if getattr(args, "out", None) == "-" else sys.stdout)


def _fmt(values) -> str:
    return ", ".join(f"{v:.6g}" for v in values)


def _channel_summary(op: channels.QuantumOperation) -> str:
    c = channels.rank(op)
    tp = "trace-preserving" if channels.is_trace_preserving(op) else "trace-decreasing"
    spectrum = np.linalg.eigvalsh(op.effect)[::-1]
    return (
        f"channel {op.dim_in} -> {op.dim_out}, {len(op.kraus)} Kraus operators\n"
        f"rank {c}, {tp}\n"
        f"K spectrum: {_fmt(spectrum)}\n"
        f"Tr[K] = {float(np.sum(spectrum)):.12g}"
    )


def cmd_canonicalize(args) -> int:
    op = fileio.load_channel(args.input)
    canon = channels.canonical_kraus(op)
    _say(args, _channel_summary(canon))
    _emit(args.out, fileio.dumps(fileio.channel_to_dict(canon)))
    return EXIT_OK


def build_dilation(op, mode: str, n: int | None = None, dim_s: int | None = None):
    if mode == "free":
        return dilations.free_dilation(op)
    if mode == "interacting":
        return dilations.interacting_dilation(op)
    if mode == "halmos":
        return dilations.halmos_dilation(op, 2 if dim_s is None else dim_s)
    if mode == "power":
        if n is None:
            raise PreconditionError("power mode needs --n")
        return dilations.power_dilation(op, n)
    raise PreconditionError(f"unknown mode {mode!r}")


def cmd_dilate(args) -> int:
    op = fileio.load_channel(args.input)
    dil = build_dilation(op, args.mode, args.n, args.dim_s)
    err = verify.reconstruction_error(dil, op, trials=args.trials, seed=args.seed)
    meta = {"reconstruction_error": err, "trials": args.trials, "trial_seed": args.seed}
    doc = fileio.dilation_to_dict(dil, meta)
    _say(args, f"{args.mode} dilation of channel {op.dim_in} -> {op.dim_out}")
    for k, v in doc["dims"].items():
        _say(args, f"  {k} = {v}")
    side = dil.w.shape[0] if args.mode == "power" else dil.u.shape[0]
    _say(args, f"  unitary side = {side}")
    _say(args, f"reconstruction error ({args.trials} trials, seed {args.seed}): {err:.3e}")
    _emit(args.out, fileio.dumps(doc))
    return EXIT_OK


def _analyze_dilation(args, op, path: str, report: dict) -> list[str]:
    dil, meta = fileio.load_dilation(path)
    mode = fileio.dilation_mode(dil)
    failures = []
    trials = int(meta.get("trials", 20))
    seed = int(meta.get("trial_seed", 0))
    try:
        err = verify.reconstruction_error(dil, op, trials=trials, seed=seed)
    except DimensionError as exc:
        raise DilationMismatchError(f"dilation does not fit the channel: {exc}") from exc
    section = {"mode": mode, "reconstruction_error": err}
    _say(args, f"{mode} dilation: reconstruction error {err:.3e} over {trials} trials")
    if err > REALIZE_TOL:
        raise DilationMismatchError(
            f"dilation does not realize the channel: reconstruction error {err:.3e} > {REALIZE_TOL:g}"
        )
    embedded = meta.get("reconstruction_error")
    if embedded is not None:
        section["embedded_reconstruction_error"] = embedded
        if abs(float(embedded) - err) > REVERIFY_TOL:
            failures.append(f"embedded reconstruction error {embedded!r} not reproduced ({err!r})")
        else:
            _say(args, "embedded reconstruction error reproduced")
    bounds = analysis.check_bounds(dil, op)
    section["bounds"] = bounds.to_dict()
    _say(
        args,
        f"ancilla: dim_l {bounds.actual_dim_l} (bound {bounds.lower_bound_dim_l}), "
        f"rank(Sigma) {bounds.rank_sigma} (>= c = {bounds.c}): "
        f"{'ok' if bounds.satisfied else 'VIOLATED'}"
    )
    if not bounds.satisfied:
        failures.append("ancilla bounds violated")
    if mode in ("free", "interacting"):
        maj = analysis.check_majorization_constraint(dil, op)
        section["majorization"] = maj.to_dict()
        _say(args, f"majorization: candidate ({_fmt(maj.candidate)})")
        _say(args, f"              canonical ({_fmt(maj.canonical)})")
        status = "holds" + (" with equality at every prefix" if maj.tight else "")
        _say(args, f"              {status if maj.majorized else 'FAILS'}")
        if not maj.majorized:
            failures.append("majorization constraint fails")
    else:
        _say(args, f"majorization: not applicable to {mode} dilations")
    report["dilation"] = section
    return failures


def cmd_analyze(args) -> int:
    op = fileio.load_channel(args.input)
    bounds = analysis.ancilla_lower_bound(op)
    report = {"format_version": fileio.FORMAT_VERSION, "kind": "report", "bounds": bounds.to_dict()}
    _say(
        args,
        f"rank c = {bounds.c}, rank(I - K) = {bounds.rank_defect}, "
        f"dim(L) >= {bounds.lower_bound_dim_l} (weak bound {bounds.weak_bound_dim_l})"
    )
    failures = []
    if args.dilation:
        try:
            failures = _analyze_dilation(args, op, args.dilation, report)
        except DilationMismatchError as exc:
            failures = [str(exc)]
            report["error"] = str(exc)
    report["passed"] = not failures
    for f in failures:
        print(f"FAIL: {f}", file=sys.stderr)
    _emit(args.out, fileio.dumps(report))
    return EXIT_OK if not failures else EXIT_ANALYSIS


def cmd_random(args) -> int:
    spec = verify.ChannelSpec(args.dim_in, args.dim_out, args.rank, args.tp, args.seed)
    op = verify.random_channel(spec)
    _say(args, _channel_summary(op))
    _emit(args.out, fileio.dumps(fileio.channel_to_dict(op)))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qdil", description="Unitary dilations of finite-dimensional quantum operations."
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("canonicalize", help="rewrite a channel in canonical Kraus form")
    p.add_argument("input")
    p.add_argument("--out", help="output channel file ('-' for stdout)")
    p.set_defaults(func=cmd_canonicalize)

    p = sub.add_parser("dilate", help="build a unitary dilation of a channel")
    p.add_argument("input")
    p.add_argument("--mode", choices=["free", "interacting", "halmos", "power"], required=True)
    p.add_argument("--n", type=int, help="number of ancilla copies (power mode)")
    p.add_argument("--dim-s", type=int, help="third-ancilla dimension (halmos mode, even)")
    p.add_argument("--trials", type=int, default=20, help="random states for the error check")
    p.add_argument("--seed", type=int, default=0, help="seed for the error check")
    p.add_argument("--out", help="output dilation file ('-' for stdout)")
    p.set_defaults(func=cmd_dilate)

    p = sub.add_parser("analyze", help="resource bounds and majorization report")
    p.add_argument("input")
    p.add_argument("--dilation", help="dilation file produced by 'dilate'")
    p.add_argument("--out", help="machine-readable JSON report ('-' for stdout)")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("random", help="generate a seeded random channel")
    p.add_argument("--dim-in", type=int, required=True)
    p.add_argument("--dim-out", type=int, required=True)
    p.add_argument("--rank", type=int, required=True)
    p.add_argument("--tp", action=argparse.BooleanOptionalAction, default=True,
                   help="trace-preserving (default) or trace-decreasing")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", help="output channel file ('-' for stdout)")
    p.set_defaults(func=cmd_random)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except FormatError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except (ValidationError, DimensionError) as exc:
        print(f"invalid input: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except PreconditionError as exc:
        print(f"precondition failed: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION


if __name__ == "__main__":
    sys.exit(main())
