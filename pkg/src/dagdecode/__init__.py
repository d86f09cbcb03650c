"""Decoding and analysis toolkit for directed-acyclic decoder lattices."""

from .analysis import (
    StrategyReport,
    TimingStats,
    benchmark,
    compare_strategies,
    optimum_match_rate,
)
from .decoders import (
    LengthSelection,
    TableMode,
    ViterbiTable,
    argmax_hypothesis,
    backtrace,
    build_viterbi_table,
    decode,
    decode_all_lengths,
    greedy_decode,
    joint_viterbi_decode,
    lookahead_decode,
    select_length,
    viterbi_decode,
)
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
from .io import (
    GeneratorConfig,
    generate_instance,
    load_instance,
    parse_instance,
    save_instance,
    serialize_instance,
)
from .lattice import DecodingPath, Hypothesis, Instance, validate
from .oracle import (
    EnumerationResult,
    brute_force_best_joint,
    brute_force_best_path,
    brute_force_marginal,
    enumerate_paths,
)
from .scoring import (
    EntropyStats,
    argmax_emission,
    entropy_stats,
    joint_log_prob,
    marginal_translation_log_prob,
    path_log_prob,
    translation_given_path_log_prob,
)

__version__ = "0.1.0"

__all__ = [
    "DecodingPath",
    "DeadEndError",
    "EntropyStats",
    "EnumerationCapError",
    "EnumerationResult",
    "GeneratorConfig",
    "GeneratorConfigError",
    "Hypothesis",
    "InfeasibleLengthError",
    "Instance",
    "InstanceFormatError",
    "InstanceValidationError",
    "LatticeError",
    "LengthSelection",
    "PathShapeError",
    "ShapeError",
    "StrategyReport",
    "TableMode",
    "TimingStats",
    "UnreachableTerminalError",
    "ViterbiTable",
    "VocabError",
    "argmax_emission",
    "argmax_hypothesis",
    "backtrace",
    "benchmark",
    "brute_force_best_joint",
    "brute_force_best_path",
    "brute_force_marginal",
    "build_viterbi_table",
    "compare_strategies",
    "decode",
    "decode_all_lengths",
    "entropy_stats",
    "enumerate_paths",
    "generate_instance",
    "greedy_decode",
    "joint_log_prob",
    "joint_viterbi_decode",
    "load_instance",
    "lookahead_decode",
    "marginal_translation_log_prob",
    "optimum_match_rate",
    "parse_instance",
    "path_log_prob",
    "save_instance",
    "select_length",
    "serialize_instance",
    "translation_given_path_log_prob",
    "validate",
    "viterbi_decode",
]
