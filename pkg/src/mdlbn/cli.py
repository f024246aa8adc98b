"""Command-line entry point.

Exit status: 0 on success, 1 on input errors, 2 on capacity errors. Output
files are written atomically; nothing is written when a command fails.
"""
from __future__ import annotations

import argparse
import sys

from . import bounds, experiments
from .dags import enumerate_dags
from .errors import CapacityError, InputError
from .io import dataset_to_csv, read_dataset, read_network, write_atomic, write_network
from .learner import learn
from .network import Schema, ancestral_sample
from .scoring import Penalty, ScoreReport, score


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise InputError(message)


def _int_list(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def _float_list(text: str) -> list[float]:
    try:
        return [float(x) for x in text.split(",") if x]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}")


def _penalty(text: str) -> Penalty:
    try:
        return Penalty.parse(text)
    except InputError as exc:
        raise argparse.ArgumentTypeError(str(exc))


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="mdlbn", description="MDL structure learning and sample-complexity tools")
    sub = parser.add_subparsers(dest="verb", required=True, parser_class=_Parser)

    p = sub.add_parser("sample", help="draw rows from a network")
    p.add_argument("--net", required=True)
    p.add_argument("--rows", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--out", required=True)

    p = sub.add_parser("learn", help="learn a network from a dataset")
    p.add_argument("--data", required=True)
    p.add_argument("--penalty", type=_penalty, required=True)
    p.add_argument("--mode", choices=("exhaustive", "greedy", "subsampled"), default="exhaustive")
    p.add_argument("--schema", help="network file whose variables define the cardinalities")
    p.add_argument("--seed", type=int, help="required for greedy and subsampled modes")
    p.add_argument("--restarts", type=int, default=5)
    p.add_argument("--eps", type=float, default=0.05)
    p.add_argument("--delta", type=float, default=0.05)
    p.add_argument("--name", default="learned")
    p.add_argument("--out", required=True)
    p.add_argument("--score-out")

    p = sub.add_parser("score", help="score a network's structure on a dataset")
    p.add_argument("--data", required=True)
    p.add_argument("--net", required=True)
    p.add_argument("--penalty", type=_penalty, required=True)
    p.add_argument("--out")

    p = sub.add_parser("bounds", help="sample-complexity calculators")
    bsub = p.add_subparsers(dest="kind", required=True, parser_class=_Parser)
    b = bsub.add_parser("ideal")
    b.add_argument("--g", type=int, required=True)
    b.add_argument("--eps", type=float, required=True)
    b.add_argument("--penalty", type=_penalty, required=True)
    b = bsub.add_parser("sanov")
    b.add_argument("--n", type=int, required=True)
    b.add_argument("--card-u", type=int, required=True)
    b.add_argument("--eps", type=float, required=True)
    b = bsub.add_parser("skew")
    b.add_argument("--n", type=int, required=True)
    b.add_argument("--card-u", type=int, required=True)
    b.add_argument("--m", type=float, required=True)
    b = bsub.add_parser("lemma37")
    for name in ("--a", "--b", "--c", "--m"):
        b.add_argument(name, type=float, required=True)
    b = bsub.add_parser("finv")
    b.add_argument("--y", type=float, required=True)
    b = bsub.add_parser("family-size")
    b.add_argument("--card", type=int, required=True)
    b.add_argument("--m", type=float, required=True)
    b.add_argument("--eps", type=float, required=True)
    b.add_argument("--delta", type=float, required=True)
    for kind in ("thm39", "complexity", "reference"):
        b = bsub.add_parser(kind)
        b.add_argument("--n-vars", type=int, required=True)
        b.add_argument("--card-u", type=int)
        b.add_argument("--m", type=float, required=True)
        b.add_argument("--g", type=int, required=True)
        b.add_argument("--penalty", type=_penalty, required=True)
        if kind == "thm39":
            b.add_argument("--a", type=float, required=True)
            b.add_argument("--b", type=float, required=True)
            b.add_argument("--n", type=int, required=True)
        else:
            b.add_argument("--eps", type=float, required=True)
            b.add_argument("--delta", type=float, required=True)
        if kind == "complexity":
            b.add_argument("--grid", type=int, default=64)
            b.add_argument("--n-cap", type=int, default=bounds.DEFAULT_N_CAP)
    for b in bsub.choices.values():
        b.add_argument("--out")

    p = sub.add_parser("curve", help="learning curve of a target network")
    p.add_argument("--net", required=True)
    p.add_argument("--grid", type=_int_list, required=True)
    p.add_argument("--trials", type=int, default=10)
    p.add_argument("--penalty", type=_penalty, required=True)
    p.add_argument("--mode", choices=("exhaustive", "greedy", "subsampled"), default="exhaustive")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--out", required=True)

    p = sub.add_parser("sanov-mc", help="Monte Carlo check of the Sanov tail bound")
    p.add_argument("--net", required=True)
    p.add_argument("--n", type=_int_list, required=True)
    p.add_argument("--eps", type=_float_list, required=True)
    p.add_argument("--trials", type=int, default=10000)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--out", required=True)

    p = sub.add_parser("minimality", help="learned vs target parameter counts")
    p.add_argument("--net", required=True)
    p.add_argument("--penalty", type=_penalty, required=True)
    p.add_argument("--n", type=_int_list, required=True)
    p.add_argument("--trials", type=int, default=10)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--out", required=True)

    p = sub.add_parser("enumerate-dags", help="list every DAG over a schema")
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--net")
    group.add_argument("--vars", type=int)
    p.add_argument("--limit", type=int, default=5)
    p.add_argument("--out")
    return parser


def _emit(text: str, out: str | None) -> None:
    if out:
        write_atomic(out, text)
    else:
        sys.stdout.write(text)


def _problem(args) -> bounds.Problem:
    card_u = args.card_u if args.card_u is not None else 2 ** args.n_vars
    return bounds.Problem(args.n_vars, card_u, args.m, args.g, args.penalty)


def _fmt(x) -> str:
    return "" if x is None else f"{x:.12g}"


def _bounds(args) -> str:
    k = args.kind
    if k == "ideal":
        return f"{bounds.ideal_case_n(args.g, args.eps, args.penalty)}\n"
    if k == "sanov":
        return f"{_fmt(bounds.sanov_bound(args.n, args.card_u, args.eps))}\n"
    if k == "skew":
        return f"{_fmt(bounds.skew_bound(args.n, args.card_u, args.m))}\n"
    if k == "lemma37":
        e = bounds.lemma37_e(args.a, args.b, args.c, args.m)
        return "invalid\n" if e is None else f"{_fmt(e)}\n"
    if k == "finv":
        return f"{_fmt(bounds.f_inverse(args.y))}\n"
    if k == "family-size":
        from .learner import family_sample_size
        return f"{family_sample_size(args.card, args.m, args.eps, args.delta)}\n"
    prob = _problem(args)
    if k == "thm39":
        rep = bounds.thm39_eval(args.a, args.b, args.n, prob)
        return f"{bounds.Thm39Report.CSV_HEADER}\n{rep.csv_row()}\n"
    if k == "complexity":
        res = bounds.sample_complexity(args.eps, args.delta, prob, args.grid, args.n_cap)
        if res is None:
            return "n,a,b,feasible\n,,,0\n"
        return f"n,a,b,feasible\n{res.n_samples},{_fmt(res.a)},{_fmt(res.b)},1\n"
    return f"{_fmt(bounds.asymptotic_reference(args.eps, args.delta, prob))}\n"


def dispatch(args) -> None:
    verb = args.verb
    if verb == "sample":
        net = read_network(args.net)
        write_atomic(args.out, dataset_to_csv(ancestral_sample(net, args.rows, args.seed)))
    elif verb == "learn":
        if args.mode != "exhaustive" and args.seed is None:
            raise InputError(f"--seed is required for --mode {args.mode}")
        schema = read_network(args.schema).schema if args.schema else None
        data = read_dataset(args.data, schema)
        result = learn(data, args.penalty, args.mode, seed=args.seed or 0,
                       restarts=args.restarts, eps=args.eps, delta=args.delta)
        net = type(result.net)(result.net.structure, result.net.cpts, name=args.name)
        text = write_network(net)
        score_text = f"{ScoreReport.CSV_HEADER}\n{result.report.csv_row()}\n"
        write_atomic(args.out, text)
        if args.score_out:
            write_atomic(args.score_out, score_text)
        else:
            sys.stdout.write(score_text)
    elif verb == "score":
        net = read_network(args.net)
        data = read_dataset(args.data, net.schema)
        rep = score(net.structure, data, args.penalty)
        _emit(f"{ScoreReport.CSV_HEADER}\n{rep.csv_row()}\n", args.out)
    elif verb == "bounds":
        _emit(_bounds(args), args.out)
    elif verb == "curve":
        cfg = experiments.ExperimentConfig(read_network(args.net), tuple(args.grid), args.trials,
                                           args.penalty, args.seed, args.mode)
        write_atomic(args.out, experiments.curve_csv(experiments.learning_curve(cfg)))
    elif verb == "sanov-mc":
        net = read_network(args.net)
        rows = [experiments.sanov_mc(net, n, eps, args.trials, args.seed)
                for n in args.n for eps in args.eps]
        write_atomic(args.out, experiments.sanov_csv(rows))
    elif verb == "minimality":
        net = read_network(args.net)
        rows = [experiments.minimality_probe(net, args.penalty, n, args.trials, args.seed)
                for n in args.n]
        write_atomic(args.out, experiments.minimality_csv(rows))
    elif verb == "enumerate-dags":
        schema = read_network(args.net).schema if args.net else Schema.binary(args.vars)
        dags = enumerate_dags(schema, args.limit)
        _emit("index,edges\n" + "".join(f"{i},{g.edge_string()}\n" for i, g in enumerate(dags)),
              args.out)


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        dispatch(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except CapacityError as exc:
        print(f"capacity error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
