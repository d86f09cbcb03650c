"""Command-line surface tying the toolkit together.

Subcommands: ``gen`` (seeded synthetic instances), ``decode``, ``score``,
``oracle`` (exhaustive ground truth), ``analyze`` (strategy comparison),
and ``bench`` (timings). Every output document is JSON on stdout and
carries the input digest plus the effective configuration so runs are
reproducible. Exit codes: 0 success, 1 usage error, 2 data or validation
error, 3 infeasibility.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import math
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict
from pathlib import Path

from . import analysis, decoders, oracle, scoring
from .errors import (
    DeadEndError,
    EnumerationCapError,
    GeneratorConfigError,
    InfeasibleLengthError,
    InstanceFormatError,
    InstanceValidationError,
    LatticeError,
    PathShapeError,
    ShapeError,
    UnreachableTerminalError,
    VocabError,
)
from .io import GeneratorConfig, generate_instance, load_instance, save_instance

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2
EXIT_INFEASIBLE = 3

_DATA_ERRORS = (
    InstanceFormatError,
    InstanceValidationError,
    ShapeError,
    VocabError,
    PathShapeError,
    EnumerationCapError,
    GeneratorConfigError,
    FileNotFoundError,
    NotADirectoryError,
    IsADirectoryError,
)
_INFEASIBLE_ERRORS = (InfeasibleLengthError, UnreachableTerminalError, DeadEndError)


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    """argparse that reports usage problems instead of exiting with code 2."""

    def error(self, message):
        raise _UsageError(f"{self.prog}: {message}")


def run_cli(argv=None) -> int:
    """Run one CLI invocation; returns the process exit code."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        doc = args.handler(args)
    except _UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_USAGE
    except SystemExit as exc:  # --help and --version paths
        return int(exc.code or 0)
    except _INFEASIBLE_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except _DATA_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except (LatticeError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA
    print(json.dumps(doc, indent=2))
    return EXIT_OK


def main() -> None:
    sys.exit(run_cli())


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="dagdecode", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("gen", help="write seeded synthetic instance files")
    gen.add_argument("--length", type=_positive_int, required=True)
    gen.add_argument("--vocab", type=_positive_int, required=True)
    gen.add_argument("--seed", type=int, default=0)
    gen.add_argument("--count", type=_positive_int, default=1)
    gen.add_argument("--out", required=True, help="output directory")
    gen.add_argument("--transition-concentration", type=_positive_float, default=1.0)
    gen.add_argument("--emission-concentration", type=_positive_float, default=1.0)
    gen.add_argument("--sparsity", type=float, default=0.0)
    gen.add_argument("--workers", type=_positive_int, default=1,
                     help="parallelize across files (results stay deterministic)")
    gen.set_defaults(handler=_cmd_gen)

    dec = sub.add_parser("decode", help="decode one instance file")
    dec.add_argument("--strategy", choices=decoders.STRATEGIES, required=True)
    dec.add_argument("--beta", type=_nonnegative_float, default=decoders.DEFAULT_BETA)
    dec.add_argument("--input", required=True)
    dec.add_argument(
        "--all-lengths",
        action="store_true",
        help="also emit the best hypothesis of every feasible length",
    )
    dec.add_argument("--no-validate", action="store_true", help="accept invalid instances")
    dec.set_defaults(handler=_cmd_decode)

    sco = sub.add_parser("score", help="score a given path and token sequence")
    sco.add_argument("--input", required=True)
    sco.add_argument("--path", type=_int_list, required=True, help='e.g. "1,2,4"')
    sco.add_argument("--tokens", type=_int_list, required=True, help='e.g. "0,1,0"')
    sco.add_argument("--marginal", action="store_true", help="also sum over all paths")
    sco.add_argument("--no-validate", action="store_true")
    sco.set_defaults(handler=_cmd_score)

    orc = sub.add_parser("oracle", help="exhaustive enumeration ground truth")
    orc.add_argument("--input", required=True)
    orc.add_argument("--mode", choices=("path", "joint", "marginal"), required=True)
    orc.add_argument("--tokens", type=_int_list, help="required for --mode marginal")
    orc.add_argument("--cap", type=_positive_int, default=oracle.DEFAULT_CAP)
    orc.add_argument("--no-validate", action="store_true")
    orc.set_defaults(handler=_cmd_oracle)

    ana = sub.add_parser("analyze", help="compare strategies over an instance directory")
    ana.add_argument("--inputs", required=True, help="directory of instance files")
    ana.add_argument(
        "--strategies",
        type=_strategy_list,
        default=list(decoders.STRATEGIES),
        help="comma-separated strategy names",
    )
    ana.add_argument("--score", choices=analysis.SCORE_KINDS, default="joint")
    ana.add_argument("--beta", type=_nonnegative_float, default=decoders.DEFAULT_BETA)
    ana.add_argument("--no-validate", action="store_true")
    ana.add_argument("--workers", type=_positive_int, default=1,
                     help="parallelize file loading (results stay deterministic)")
    ana.set_defaults(handler=_cmd_analyze)

    ben = sub.add_parser("bench", help="time strategies on generated instances")
    ben.add_argument("--length", type=_positive_int, required=True)
    ben.add_argument("--vocab", type=_positive_int, required=True)
    ben.add_argument("--count", type=_positive_int, default=4)
    ben.add_argument("--reps", type=int, required=True)
    ben.add_argument(
        "--strategies", type=_strategy_list, default=list(decoders.STRATEGIES)
    )
    ben.add_argument("--seed", type=int, default=0)
    ben.add_argument("--beta", type=_nonnegative_float, default=decoders.DEFAULT_BETA)
    ben.add_argument("--baseline", help="ratio denominator; defaults to first strategy")
    ben.set_defaults(handler=_cmd_bench)

    return parser


# --------------------------------------------------------------------------
# subcommand handlers
# --------------------------------------------------------------------------


def _cmd_gen(args) -> dict:
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)

    def write_one(k: int) -> dict:
        config = GeneratorConfig(
            L=args.length,
            V=args.vocab,
            seed=args.seed + k,
            transition_concentration=args.transition_concentration,
            emission_concentration=args.emission_concentration,
            sparsity=args.sparsity,
        )
        path = out_dir / f"inst_{args.seed + k}.json"
        save_instance(generate_instance(config), path)
        return {"path": str(path), "sha256": _digest(path)}

    files = _ordered_map(write_one, range(args.count), args.workers)
    return {
        "command": "gen",
        "config": {
            "length": args.length,
            "vocab": args.vocab,
            "seed": args.seed,
            "count": args.count,
            "transition_concentration": args.transition_concentration,
            "emission_concentration": args.emission_concentration,
            "sparsity": args.sparsity,
        },
        "files": files,
    }


def _cmd_decode(args) -> dict:
    if args.all_lengths and args.strategy not in ("viterbi", "joint-viterbi"):
        raise _UsageError("--all-lengths requires a viterbi-family strategy")
    instance = _load(args.input, args.no_validate)
    doc = {
        "command": "decode",
        "input": _input_block(args.input),
        "config": {
            "strategy": args.strategy,
            "beta": args.beta,
            "validate": not args.no_validate,
        },
    }
    if args.strategy in ("viterbi", "joint-viterbi"):
        mode = (
            decoders.TableMode.PATH
            if args.strategy == "viterbi"
            else decoders.TableMode.JOINT
        )
        table = decoders.build_viterbi_table(instance, mode)
        selection = decoders.select_length(table, args.beta)
        path = decoders.backtrace(table, selection.chosen_M)
        hyp = decoders.argmax_hypothesis(instance, path)
        doc["hypothesis"] = _hypothesis_block(hyp, instance)
        doc["chosen_length"] = selection.chosen_M
        doc["per_length_scores"] = {
            str(length): {"raw": _sig12(raw), "penalized": _sig12(pen)}
            for length, (raw, pen) in sorted(selection.per_length_scores.items())
        }
        if args.all_lengths:
            doc["all_lengths"] = [
                _hypothesis_block(h, instance)
                for h in decoders.decode_all_lengths(instance, mode)
            ]
    else:
        hyp = decoders.decode(instance, args.strategy, args.beta)
        doc["hypothesis"] = _hypothesis_block(hyp, instance)
        doc["chosen_length"] = hyp.length
    return doc


def _cmd_score(args) -> dict:
    instance = _load(args.input, args.no_validate)
    path_lp = scoring.path_log_prob(instance, args.path)
    emis_lp = scoring.translation_given_path_log_prob(instance, args.path, args.tokens)
    doc = {
        "command": "score",
        "input": _input_block(args.input),
        "config": {
            "path": args.path,
            "tokens": args.tokens,
            "marginal": args.marginal,
        },
        "scores": {
            "path_logprob": _sig12(path_lp),
            "emission_logprob": _sig12(emis_lp),
            "joint_logprob": _sig12(path_lp + emis_lp),
        },
    }
    if args.marginal:
        doc["scores"]["marginal_logprob"] = _sig12(
            scoring.marginal_translation_log_prob(instance, args.tokens)
        )
    return doc


def _cmd_oracle(args) -> dict:
    instance = _load(args.input, args.no_validate)
    doc = {
        "command": "oracle",
        "input": _input_block(args.input),
        "config": {"mode": args.mode, "cap": args.cap},
    }
    if args.mode == "marginal":
        if args.tokens is None:
            raise _UsageError("--mode marginal requires --tokens")
        doc["config"]["tokens"] = args.tokens
        doc["marginal_probability"] = oracle.brute_force_marginal(
            instance, args.tokens, cap=args.cap
        )
        return doc
    result = (
        oracle.brute_force_best_path(instance, cap=args.cap)
        if args.mode == "path"
        else oracle.brute_force_best_joint(instance, cap=args.cap)
    )
    best_path, best_prob = result.global_best
    doc["path_count"] = result.path_count
    doc["best_per_length"] = {
        str(length): {"path": list(p.positions), "probability": prob}
        for length, (p, prob) in sorted(result.best_per_length.items())
    }
    doc["global_best"] = {
        "length": len(best_path),
        "path": list(best_path.positions),
        "probability": best_prob,
    }
    return doc


def _cmd_analyze(args) -> dict:
    in_dir = Path(args.inputs)
    if not in_dir.is_dir():
        raise NotADirectoryError(f"{in_dir} is not a directory")
    files = sorted(in_dir.glob("*.json"))
    if not files:
        raise InstanceFormatError(f"no *.json instance files in {in_dir}")
    instances = _ordered_map(
        lambda f: load_instance(f, run_validation=not args.no_validate),
        files,
        args.workers,
    )
    report = analysis.compare_strategies(
        instances, args.strategies, score_kind=args.score, beta=args.beta
    )
    return {
        "command": "analyze",
        "inputs": {
            "dir": str(in_dir),
            "files": [{"path": str(f), "sha256": _digest(f)} for f in files],
        },
        "config": {
            "strategies": args.strategies,
            "score": args.score,
            "beta": args.beta,
        },
        "report": {
            "avg_logprob": {
                name: _sig12(v) for name, v in report.per_strategy_avg_logprob.items()
            },
            "win_rates": {
                f"{a}>{b}": rate for (a, b), rate in report.pairwise_win_rates.items()
            },
            "tie_rates": {
                f"{a}~{b}": rate for (a, b), rate in report.pairwise_tie_rates.items()
            },
            "optimum_match_rate": dict(report.optimum_match_rate),
        },
    }


def _cmd_bench(args) -> dict:
    if args.reps < 3:
        raise _UsageError("--reps must be >= 3")
    baseline = args.baseline or args.strategies[0]
    if baseline not in args.strategies:
        raise _UsageError(f"--baseline {baseline!r} not among {args.strategies}")
    instances = [
        generate_instance(GeneratorConfig(L=args.length, V=args.vocab, seed=args.seed + k))
        for k in range(args.count)
    ]
    timings = analysis.benchmark(
        instances, args.strategies, repetitions=args.reps, beta=args.beta, baseline=baseline
    )
    return {
        "command": "bench",
        "config": {
            "length": args.length,
            "vocab": args.vocab,
            "count": args.count,
            "reps": args.reps,
            "seed": args.seed,
            "beta": args.beta,
            "strategies": args.strategies,
            "baseline": baseline,
        },
        "timings": {name: asdict(stats) for name, stats in timings.items()},
    }


# --------------------------------------------------------------------------
# helpers
# --------------------------------------------------------------------------


def _load(path, no_validate: bool):
    return load_instance(path, run_validation=not no_validate)


def _ordered_map(fn, items, workers: int) -> list:
    """Map preserving input order; sequential unless workers > 1."""
    if workers <= 1:
        return [fn(item) for item in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


def _input_block(path) -> dict:
    return {"path": str(path), "sha256": _digest(path)}


def _digest(path) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


def _hypothesis_block(hyp, instance) -> dict:
    block = {
        "path": list(hyp.path.positions),
        "tokens": list(hyp.tokens),
        "length": hyp.length,
        "path_logprob": _sig12(hyp.path_logprob),
        "emission_logprob": _sig12(hyp.emission_logprob),
        "joint_logprob": _sig12(hyp.joint_logprob),
    }
    if instance.vocab is not None:
        block["token_strings"] = [instance.vocab[y] for y in hyp.tokens]
    return block


def _sig12(x: float):
    """Log-probabilities print with 12 significant digits; -inf becomes null."""
    if x == -math.inf:
        return None
    return float(f"{x:.12g}")


def _positive_int(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1, got {value}")
    return value


def _positive_float(text: str) -> float:
    value = float(text)
    if value <= 0:
        raise argparse.ArgumentTypeError(f"must be > 0, got {value}")
    return value


def _nonnegative_float(text: str) -> float:
    value = float(text)
    if value < 0:
        raise argparse.ArgumentTypeError(f"must be >= 0, got {value}")
    return value


def _int_list(text: str) -> list[int]:
    try:
        return [int(part.strip()) for part in text.split(",") if part.strip() != ""]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from exc


def _strategy_list(text) -> list[str]:
    if isinstance(text, list):
        return text
    names = [part.strip() for part in text.split(",") if part.strip()]
    unknown = [n for n in names if n not in decoders.STRATEGIES]
    if unknown:
        raise argparse.ArgumentTypeError(
            f"unknown strategies {unknown}; expected among {list(decoders.STRATEGIES)}"
        )
    if not names:
        raise argparse.ArgumentTypeError("need at least one strategy")
    return names
