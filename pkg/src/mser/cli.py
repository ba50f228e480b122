"""Command-line interface: ``mser {count,fit,simulate,gof,bound,report}``.

Exit codes: 0 success, 1 usage, 2 unreadable or malformed input,
3 internal inconsistency (the two census methods disagree).
"""
from __future__ import annotations

import argparse
import csv
import io
import sys
from pathlib import Path
from typing import Sequence, TextIO

from . import __version__
from .census import CensusConsistencyError, census
from .formats import (
    DATASETS,
    DatasetUnavailable,
    ParseError,
    dumps_network,
    load_dataset,
    load_network,
    reference_values,
)
from .gof import STATISTICS, GofConfig, run_gof
from .model import as_params, fit_mle, sample
from .network import MultisliceNetwork
from .report import bound_dict, build_report, dumps, gof_dict, params_dict

EXIT_OK, EXIT_USAGE, EXIT_PARSE, EXIT_CONSISTENCY = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.format_usage()}{self.prog}: error: {message}")


def _probability(text: str) -> float:
    try:
        v = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if not 0.0 <= v <= 1.0:
        raise argparse.ArgumentTypeError(f"probability {v} outside [0, 1]")
    return v


def _positive(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if v < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {v}")
    return v


def _nonneg(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if v < 0:
        raise argparse.ArgumentTypeError(f"expected a non-negative integer, got {v}")
    return v


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="mser", description="Triangle census and MSER goodness-of-fit tests for multislice networks.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")

    def network_arg(p, required=True):
        p.add_argument(
            "file", nargs=None if required else "?",
            help="network file, '-' for stdin, or a bundled dataset name (" + ", ".join(DATASETS) + ")",
        )

    def fit_args(p):
        p.add_argument("--pooled", action="store_true", help="fit one edge probability shared by all layers")
        p.add_argument("--q", type=_probability, default=1.0, help="inter-layer link probability (default 1)")

    def mc_args(p):
        p.add_argument("--reps", type=_positive, default=999, help="Monte Carlo replicates (default 999)")
        p.add_argument("--seed", type=_nonneg, default=0, help="master seed (default 0)")
        p.add_argument("--alpha", type=float, default=0.05, help="two-sided test level (default 0.05)")
        p.add_argument("--workers", type=_positive, default=1, help="simulation threads; results do not depend on it")

    p = sub.add_parser("count", help="triangle census by both methods")
    network_arg(p)
    p.add_argument("--json", action="store_true", help="emit JSON instead of a one-line summary")

    p = sub.add_parser("fit", help="maximum-likelihood MSER parameters")
    network_arg(p)
    fit_args(p)

    p = sub.add_parser("simulate", help="draw one network from the MSER model")
    p.add_argument("--n", type=_positive, required=True, help="number of nodes")
    p.add_argument("--layers", type=_positive, required=True, help="number of layers")
    p.add_argument("--p", type=_probability, nargs="+", required=True, help="one edge probability, or one per layer")
    p.add_argument("--q", type=_probability, default=1.0, help="inter-layer link probability (default 1)")
    p.add_argument("--seed", type=_nonneg, default=0)
    p.add_argument("--replicate", type=_nonneg, default=0, help="replicate index within the seed's stream family")
    p.add_argument("--out", help="write to this path instead of stdout")

    p = sub.add_parser("gof", help="Monte Carlo goodness-of-fit test")
    network_arg(p)
    fit_args(p)
    mc_args(p)
    p.add_argument("--stats", nargs="+", choices=STATISTICS, default=list(STATISTICS))
    p.add_argument("--csv", metavar="PATH", help="write histogram rows (statistic,value,count) to PATH")

    p = sub.add_parser("bound", help="Poisson total-variation bounds")
    network_arg(p, required=False)
    fit_args(p)
    p.add_argument("--n", type=_positive, help="number of nodes (instead of a file)")
    p.add_argument("--p", "--params", dest="p", type=_probability, nargs="+", help="edge probabilities (instead of a file)")
    p.add_argument("--layers", type=_positive, help="number of layers when a single --p is broadcast")

    p = sub.add_parser("report", help="full JSON analysis report")
    network_arg(p)
    fit_args(p)
    mc_args(p)
    p.add_argument("--reference", metavar="PATH",
                   help="JSON file of published values to compare against; bundled datasets use their own")
    p.add_argument("--no-reference", action="store_true", help="skip comparison with published values")
    p.add_argument("--out", help="write to this path instead of stdout")
    return parser


def _resolve(arg: str, stdin: TextIO) -> tuple[MultisliceNetwork, str | None]:
    """Load a network; returns it with the dataset name when one was used."""
    if arg == "-":
        return load_network("-", stdin=stdin), None
    path = Path(arg)
    if path.is_file():
        return load_network(path), None
    name = path.name.removesuffix(".mnet")
    if name in DATASETS and (path.parent == Path(".") or not path.parent.exists()):
        return load_dataset(name), name
    raise ParseError(f"no such file: {arg}", None, arg)


def _write(text: str, out: str | None, stdout: TextIO) -> None:
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        stdout.write(text)


def _cmd_count(args, stdin, stdout) -> None:
    net, _ = _resolve(args.file, stdin)
    c, _ = census(net)
    if args.json:
        stdout.write(dumps({"W1": c.w1, "W2": c.w2, "W3": c.w3, "TOTAL": c.total, "methods_agree": True}))
    else:
        stdout.write(f"1D {c.w1}, 2D {c.w2}, 3D {c.w3}, methods agree\n")


def _cmd_fit(args, stdin, stdout) -> None:
    net, _ = _resolve(args.file, stdin)
    params = fit_mle(net, pooled=args.pooled, q=args.q)
    stdout.write(dumps({"n": net.n, "L": net.L, "edge_counts": list(net.edge_counts), **params_dict(params, args.pooled)}))


def _cmd_simulate(args, stdin, stdout) -> None:
    params = as_params(args.p, args.layers, args.q)
    net = sample(params, args.n, args.seed, args.replicate)
    _write(dumps_network(net), args.out, stdout)


def _cmd_gof(args, stdin, stdout) -> None:
    net, _ = _resolve(args.file, stdin)
    params = fit_mle(net, pooled=args.pooled, q=args.q)
    cfg = GofConfig(params, net.n, args.reps, args.seed, tuple(args.stats), args.alpha, args.workers)
    res = run_gof(net, cfg)
    if args.csv:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["statistic", "value", "count"])
        w.writerows(res.histogram_rows())
        Path(args.csv).write_text(buf.getvalue(), encoding="utf-8")
    stdout.write(dumps(gof_dict(res, full=False)))


def _cmd_bound(args, stdin, stdout) -> None:
    if args.file is not None:
        if args.n is not None or args.p is not None:
            raise UsageError("mser bound: give either a network file or --n/--p, not both")
        net, _ = _resolve(args.file, stdin)
        n, params = net.n, fit_mle(net, pooled=args.pooled, q=args.q)
    else:
        if args.n is None or args.p is None:
            raise UsageError("mser bound: give a network file or both --n and --p")
        n, params = args.n, as_params(args.p, args.layers, args.q)
    stdout.write(dumps({"n": n, **params_dict(params), **bound_dict(params, n)}))


def _cmd_report(args, stdin, stdout) -> None:
    net, dataset = _resolve(args.file, stdin)
    reference = None
    if args.reference:
        import json

        reference = json.loads(Path(args.reference).read_text(encoding="utf-8"))
    elif dataset and not args.no_reference:
        reference = reference_values(dataset)
    rep = build_report(
        net, pooled=args.pooled, num_replicates=args.reps, seed=args.seed, alpha=args.alpha,
        q=args.q, reference=reference, workers=args.workers,
    )
    _write(dumps(rep), args.out, stdout)


_COMMANDS = {
    "count": _cmd_count,
    "fit": _cmd_fit,
    "simulate": _cmd_simulate,
    "gof": _cmd_gof,
    "bound": _cmd_bound,
    "report": _cmd_report,
}


def main(argv: Sequence[str] | None = None, stdin: TextIO | None = None,
         stdout: TextIO | None = None, stderr: TextIO | None = None) -> int:
    stdin = stdin or sys.stdin
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    try:
        args = build_parser().parse_args(argv)
        _COMMANDS[args.command](args, stdin, stdout)
    except UsageError as exc:
        print(exc, file=stderr)
        return EXIT_USAGE
    except (ParseError, DatasetUnavailable, OSError, UnicodeDecodeError) as exc:
        print(f"mser: {exc}", file=stderr)
        return EXIT_PARSE
    except CensusConsistencyError as exc:
        print(f"mser: internal inconsistency: {exc}", file=stderr)
        return EXIT_CONSISTENCY
    except ValueError as exc:
        print(f"mser: {exc}", file=stderr)
        return EXIT_USAGE
    return EXIT_OK


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
