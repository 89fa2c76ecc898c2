"""Command-line interface.

Subcommands:
  sketch    ingest a text stream and write a binary sketch snapshot
  estimate  estimate the alpha-th frequency moment from a snapshot
  entropy   estimate Shannon entropy from a snapshot
  lambda    print the optimal power and its variance coefficient
  bench     Monte-Carlo benchmark over an (alpha, k, estimator) grid -> CSV

Exit codes: 0 success, 2 usage error, 3 domain/config error, 4 I/O error
(including unreadable, corrupt, or malformed input files).
Entropies use natural logarithms.
"""

from __future__ import annotations

import argparse
import sys

import numpy as np

from .entropy import ENTROPY_ROUTES, estimate_shannon
from .errors import CCSketchError, DecodeError, DomainError, ParseError
from .estimators import ESTIMATORS
from .harness import (
    BENCH_ESTIMATORS,
    McConfig,
    emit_csv,
    generate_zipf,
    ingest_stream,
    run_monte_carlo,
)
from .optpower import optimal_lambda
from .sketch import Sketch, SketchConfig, deserialize, new_sketch, serialize

USAGE_ERROR, DOMAIN_ERROR, IO_ERROR = 2, 3, 4


def _fmt(x: float) -> str:
    return format(x, ".17g")


def _load_sketch(path: str) -> Sketch:
    with open(path, "rb") as fh:
        return deserialize(fh.read())


def _cmd_sketch(args: argparse.Namespace) -> int:
    config = SketchConfig(alpha=args.alpha, k=args.k, seed=args.seed,
                          domain_size=args.domain)
    sk = new_sketch(config)
    count = 0
    for update in ingest_stream(args.input):
        sk.update(update)
        count += 1
    with open(args.out, "wb") as fh:
        fh.write(serialize(sk))
    print(f"wrote {args.out}: {count} updates, f1 {_fmt(sk.f1)}")
    return 0


def _cmd_estimate(args: argparse.Namespace) -> int:
    sk = _load_sketch(args.sketch)
    if args.estimator == "op":
        est = ESTIMATORS["op"](sk, lambda_override=args.lam)
    elif args.lam is not None:
        raise DomainError("--lambda applies only to the op estimator")
    else:
        est = ESTIMATORS[args.estimator](sk)
    print(f"value {_fmt(est.value)}")
    print(f"predicted_se {_fmt(est.predicted_se)}")
    if est.lambda_used is not None:
        print(f"lambda {_fmt(est.lambda_used)}")
    return 0


def _cmd_entropy(args: argparse.Namespace) -> int:
    sk = _load_sketch(args.sketch)
    est = estimate_shannon(sk, args.estimator, args.route)
    print(f"shannon {_fmt(est.shannon_estimate)}")
    print(f"route {est.route}")
    print(f"alpha {_fmt(est.alpha_used)}")
    print(f"moment_estimate {_fmt(est.moment_estimate)}")
    print(f"f1 {_fmt(est.f1)}")
    return 0


def _cmd_lambda(args: argparse.Namespace) -> int:
    opt = optimal_lambda(args.alpha)
    print(f"lambda_star {_fmt(opt.lambda_star)}")
    print(f"g_at_star {_fmt(opt.g_at_star)}")
    if opt.at_boundary:
        print("at_boundary true")
    return 0


def _parse_zipf(text: str) -> tuple[int, float]:
    parts = text.split(",")
    if len(parts) != 2:
        raise DomainError(f"--zipf expects 'D,s', got {text!r}")
    return int(parts[0]), float(parts[1])


def _bench_vector(args: argparse.Namespace) -> np.ndarray:
    sources = sum(x is not None for x in (args.zipf, args.vector, args.stream))
    if sources != 1:
        raise DomainError("exactly one of --zipf, --vector, --stream is required")
    if args.zipf is not None:
        d, s = _parse_zipf(args.zipf)
        return generate_zipf(d, s, scale=args.scale)
    if args.vector is not None:
        data = np.loadtxt(args.vector, dtype=np.float64, ndmin=1)
        return data
    if args.domain is None:
        raise DomainError("--stream requires --domain to size the histogram")
    vec = np.zeros(args.domain, dtype=np.float64)
    for u in ingest_stream(args.stream):
        if u.index > args.domain:
            raise DomainError(f"stream index {u.index} exceeds --domain {args.domain}")
        vec[u.index - 1] += u.increment
    return vec


def _cmd_bench(args: argparse.Namespace) -> int:
    cfg = McConfig(
        alphas=tuple(float(a) for a in args.alphas.split(",")),
        ks=tuple(int(k) for k in args.ks.split(",")),
        estimators=tuple(args.estimators.split(",")),
        trials=args.trials,
        vector=_bench_vector(args),
        base_seed=args.seed,
        mode=args.mode,
        route=args.route,
        sampling=args.sampling,
    )
    report = run_monte_carlo(cfg)
    emit_csv(report, args.out)
    print(f"wrote {args.out}: {len(report.rows)} cells")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ccsketch",
        description="Streaming frequency-moment and entropy estimation "
                    "with maximally-skewed stable sketches.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("sketch", help="ingest a stream file into a sketch snapshot")
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--k", type=int, required=True, help="number of projected coordinates")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--domain", type=int, required=True, help="largest valid index D")
    p.add_argument("--input", required=True, help="stream file: <index>\\t<increment> per line")
    p.add_argument("--out", required=True, help="output snapshot path")
    p.set_defaults(func=_cmd_sketch)

    p = sub.add_parser("estimate", help="estimate the alpha-th frequency moment")
    p.add_argument("--estimator", choices=sorted(ESTIMATORS), required=True)
    p.add_argument("--sketch", required=True, help="snapshot path")
    p.add_argument("--lambda", dest="lam", type=float, default=None,
                   help="power override for the op estimator")
    p.set_defaults(func=_cmd_estimate)

    p = sub.add_parser("entropy", help="estimate Shannon entropy (natural log)")
    p.add_argument("--route", choices=ENTROPY_ROUTES, default="tsallis")
    p.add_argument("--estimator", choices=sorted(ESTIMATORS), required=True)
    p.add_argument("--sketch", required=True, help="snapshot path")
    p.set_defaults(func=_cmd_entropy)

    p = sub.add_parser("lambda", help="optimal power lambda*(alpha) and g(lambda*; alpha)")
    p.add_argument("--alpha", type=float, required=True)
    p.set_defaults(func=_cmd_lambda)

    p = sub.add_parser("bench", help="Monte-Carlo benchmark grid; writes CSV")
    p.add_argument("--alphas", required=True, help="comma-separated alpha values")
    p.add_argument("--ks", required=True, help="comma-separated sample sizes")
    p.add_argument("--estimators", required=True,
                   help=f"comma-separated subset of {','.join(BENCH_ESTIMATORS)}")
    p.add_argument("--trials", type=int, required=True)
    p.add_argument("--zipf", default=None, help="synthetic vector 'D,s'")
    p.add_argument("--scale", type=float, default=1.0, help="zipf scale factor")
    p.add_argument("--vector", default=None, help="text file, one value per line")
    p.add_argument("--stream", default=None, help="stream file accumulated into a histogram")
    p.add_argument("--domain", type=int, default=None, help="histogram size for --stream")
    p.add_argument("--seed", type=int, default=1)
    p.add_argument("--mode", choices=("moments", "entropy"), default="moments")
    p.add_argument("--route", choices=ENTROPY_ROUTES, default="tsallis")
    p.add_argument("--sampling", choices=("direct", "project"), default="direct")
    p.add_argument("--out", required=True, help="output CSV path")
    p.set_defaults(func=_cmd_bench)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return USAGE_ERROR if exc.code else 0
    try:
        return args.func(args)
    except (ParseError, DecodeError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return IO_ERROR
    except CCSketchError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return DOMAIN_ERROR


if __name__ == "__main__":
    sys.exit(main())
