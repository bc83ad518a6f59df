"""Command-line front end: ``rogame solve | sweep | verify``.

Exit codes: 0 online player wins (or certificate valid), 1 adversary wins
(or certificate invalid, or no winning capacity up to 2k), 2 usage, model
or format error, 3 inconclusive (node limit), 4 cache memory cap hit.
"""
from __future__ import annotations

import argparse
import logging
import math
import sys
import time
from fractions import Fraction
from typing import List, Optional

from .cache import CACHE_CAP_ENV, CacheMemoryExceeded
from .certificate import Certificate, CertificateFormatError, verify
from .model import ModelError, Params
from .solver import Outcome, SolveConfig, SolveResult, minimal_capacity, solve_instance

EXIT_WIN = 0
EXIT_LOSS = 1
EXIT_USAGE = 2
EXIT_INCONCLUSIVE = 3
EXIT_MEMORY = 4

# instances with m*k above this need --i-have-days
DESK_SCALE_VOLUME = 60

_OUTCOME_EXIT = {
    Outcome.ALGORITHM_WINS: EXIT_WIN,
    Outcome.ADVERSARY_WINS: EXIT_LOSS,
    Outcome.INCONCLUSIVE: EXIT_INCONCLUSIVE,
}


def format_alpha(alpha: Fraction) -> str:
    """``s/k`` followed by the decimal rounded up to 4 places, e.g. ``4/3 (1.3334)``."""
    upper = Fraction(math.ceil(alpha * 10**4), 10**4)
    return f"{alpha.numerator}/{alpha.denominator} ({float(upper):.4f})"


def _positive(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1, got {value}")
    return value


def _add_solve_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--no-cache", action="store_true", help="disable the dominance cache")
    p.add_argument("--che-literal", action="store_true",
                   help="cheat proof uses the history without the current item")
    p.add_argument("--prune-cache", action="store_true",
                   help="drop stored histories made redundant by a new insertion")
    p.add_argument("--cert", metavar="PATH", help="write a certificate on a win")
    p.add_argument("--stats", action="store_true", help="print stat: key=value lines")
    p.add_argument("--trace-depth", type=int, metavar="N",
                   help="log every state entered at depth <= N to stderr")
    p.add_argument("--node-limit", type=_positive, metavar="N",
                   help="give up (inconclusive) after N solve calls")
    p.add_argument("--workers", type=_positive, default=1, metavar="N",
                   help="split the first adversary move over N processes")
    p.add_argument("--i-have-days", action="store_true",
                   help=f"allow instances with m*k > {DESK_SCALE_VOLUME}")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="rogame", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="decide one (m, k, s) instance")
    p.add_argument("--bins", type=int, required=True, metavar="M")
    p.add_argument("--granularity", type=int, required=True, metavar="K")
    p.add_argument("--capacity", type=int, required=True, metavar="S")
    _add_solve_flags(p)

    p = sub.add_parser("sweep", help="find the smallest winning capacity in [k, 2k]")
    p.add_argument("--bins", type=int, required=True, metavar="M")
    p.add_argument("--granularity", type=int, required=True, metavar="K")
    _add_solve_flags(p)

    p = sub.add_parser("verify", help="check a certificate")
    p.add_argument("--cert", required=True, metavar="PATH")
    p.add_argument("--bins", type=int, metavar="M", help="expected m")
    p.add_argument("--granularity", type=int, metavar="K", help="expected k")
    p.add_argument("--capacity", type=int, metavar="S", help="expected s")
    return parser


def _config(args) -> SolveConfig:
    return SolveConfig(
        cache_enabled=not args.no_cache,
        che_includes_current_item=not args.che_literal,
        node_limit=args.node_limit,
        trace=args.trace_depth is not None,
        trace_depth=args.trace_depth or 0,
        prune_cache=args.prune_cache,
        workers=args.workers,
    )


def _check_scale(args, m: int, k: int) -> None:
    if m * k > DESK_SCALE_VOLUME and not args.i_have_days:
        raise ModelError(
            f"m*k = {m * k} exceeds the desk-scale limit {DESK_SCALE_VOLUME}; "
            "this may run for hours or days, pass --i-have-days to proceed"
        )


def _print_report(result: SolveResult, seconds: float, show_stats: bool, cert_path) -> None:
    p = result.params
    print(f"instance: m={p.m} k={p.k} s={p.s}")
    print(f"outcome: {result.outcome.value}")
    print(f"alpha: {format_alpha(p.alpha)}")
    print(f"wall_time: {seconds:.3f}s")
    if cert_path:
        print(f"certificate: {cert_path}")
    if show_stats:
        for key, value in result.stats.as_dict().items():
            print(f"stat: {key}={value}")


def cmd_solve(args) -> int:
    params = Params(args.bins, args.granularity, args.capacity)
    _check_scale(args, params.m, params.k)
    config = _config(args)
    start = time.perf_counter()
    result = solve_instance(params, config, certificate=bool(args.cert))
    seconds = time.perf_counter() - start
    written = None
    if args.cert and result.certificate is not None:
        result.certificate.save(args.cert)
        written = args.cert
    _print_report(result, seconds, args.stats, written)
    return _OUTCOME_EXIT[result.outcome]


def cmd_sweep(args) -> int:
    m, k = args.bins, args.granularity
    Params(m, k, k)
    _check_scale(args, m, k)
    config = _config(args)
    start = time.perf_counter()
    sweep = minimal_capacity(m, k, config)
    seconds = time.perf_counter() - start
    print(f"{'s':>4}  {'outcome':<14}  alpha")
    for r in sweep.tried:
        print(f"{r.params.s:>4}  {r.outcome.value:<14}  {format_alpha(r.params.alpha)}")
    if sweep.outcome is Outcome.INCONCLUSIVE:
        print("minimal capacity: inconclusive (node limit reached)")
    elif sweep.capacity is None:
        print(f"minimal capacity: none <= {2 * k}")
    else:
        print(f"minimal capacity: s*={sweep.capacity} alpha={format_alpha(sweep.alpha)}")
    print(f"wall_time: {seconds:.3f}s")
    if args.stats:
        for r in sweep.tried:
            for key, value in r.stats.as_dict().items():
                print(f"stat: s={r.params.s} {key}={value}")
    if args.cert and sweep.capacity is not None:
        winner = solve_instance(Params(m, k, sweep.capacity), config, certificate=True)
        winner.certificate.save(args.cert)
        print(f"certificate: {args.cert}")
    if sweep.outcome is Outcome.INCONCLUSIVE:
        return EXIT_INCONCLUSIVE
    return EXIT_WIN if sweep.capacity is not None else EXIT_LOSS


def cmd_verify(args) -> int:
    given = [args.bins, args.granularity, args.capacity]
    if any(x is not None for x in given) and not all(x is not None for x in given):
        raise ModelError("--bins, --granularity and --capacity must be given together")
    expected = Params(*given) if given[0] is not None else None
    try:
        cert = Certificate.load(args.cert)
    except OSError as exc:
        print(f"error: cannot read {args.cert}: {exc.strerror}", file=sys.stderr)
        return EXIT_USAGE
    except CertificateFormatError as exc:
        print(f"format error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    result = verify(cert, expected)
    p = cert.params
    if result.valid:
        print(f"valid: m={p.m} k={p.k} s={p.s} alpha={format_alpha(p.alpha)} "
              f"nodes={len(cert.nodes)}")
        return EXIT_WIN
    print(f"invalid: {result.reason} at {result.state}")
    if result.detail:
        print(f"detail: {result.detail}")
    return EXIT_LOSS


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    trace_log = logging.getLogger("rogame.trace")
    trace_handler = None
    if getattr(args, "trace_depth", None) is not None:
        trace_handler = logging.StreamHandler(sys.stderr)
        trace_handler.setFormatter(logging.Formatter("trace: %(message)s"))
        trace_log.addHandler(trace_handler)
        trace_log.setLevel(logging.INFO)
    handler = {"solve": cmd_solve, "sweep": cmd_sweep, "verify": cmd_verify}[args.command]
    try:
        return handler(args)
    except ModelError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ValueError as exc:
        # malformed environment settings, e.g. a non-integer cache cap
        print(f"error: {exc} (check {CACHE_CAP_ENV})", file=sys.stderr)
        return EXIT_USAGE
    except CacheMemoryExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_MEMORY
    finally:
        if trace_handler is not None:
            trace_log.removeHandler(trace_handler)


if __name__ == "__main__":
    sys.exit(main())
