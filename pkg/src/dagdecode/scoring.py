"""Exact probability computations over a lattice instance.

Path probability is a product of transition entries along the hops, the
conditional translation probability a product of emission entries at the
visited positions, and the marginal translation probability sums the joint
over every path of matching length via a sum-space forward recursion.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InfeasibleLengthError, PathShapeError, ShapeError
from .lattice import DecodingPath, Instance, as_path, check_tokens
from .logmath import LOG_ZERO, entropy_nats, logsumexp


@dataclass(frozen=True)
class EntropyStats:
    """Mean per-row Shannon entropies of the two tables, in nats."""

    transition_entropy: float
    prediction_entropy: float


def path_log_prob(instance: Instance, path) -> float:
    """Log-probability of a decoding path: the sum of its hop log-scores.

    Returns ``-inf`` when any hop is impossible. Malformed paths (wrong
    endpoints, not strictly increasing, positions outside the lattice)
    raise PathShapeError.
    """
    p = _checked_path(instance, path)
    pos = np.asarray(p.positions, dtype=np.intp) - 1
    if len(pos) == 1:
        return 0.0
    return float(np.sum(instance.log_transitions[pos[:-1], pos[1:]]))


def translation_given_path_log_prob(instance: Instance, path, tokens) -> float:
    """Log-probability of emitting ``tokens`` along ``path``."""
    p = _checked_path(instance, path)
    toks = check_tokens(instance, tokens)
    if len(toks) != len(p):
        raise ShapeError(f"{len(toks)} tokens for a path of length {len(p)}")
    pos = np.asarray(p.positions, dtype=np.intp) - 1
    return float(np.sum(instance.log_emissions[pos, toks]))


def joint_log_prob(instance: Instance, path, tokens) -> float:
    """Log-probability of the (path, tokens) pair."""
    return path_log_prob(instance, path) + translation_given_path_log_prob(
        instance, path, tokens
    )


def marginal_translation_log_prob(instance: Instance, tokens) -> float:
    """Log-probability of ``tokens`` summed over all paths of its length.

    Forward recursion over (target index, lattice position) with
    log-sum-exp accumulation; the first row is seeded from position 1 only,
    so every summed path starts at 1, and the answer is read at position L.

    Raises InfeasibleLengthError when no path of that length can exist
    (more tokens than positions, or a single token on a multi-position
    lattice); infeasibility is a distinct signal, not ``-inf``.
    """
    toks = check_tokens(instance, tokens)
    M, L = len(toks), instance.L
    if M == 0:
        raise ShapeError("token sequence is empty")
    if M > L or (M == 1 and L > 1):
        raise InfeasibleLengthError(
            f"no path of length {M} exists on a lattice of {L} positions"
        )
    forward = np.full(L, LOG_ZERO)
    forward[0] = instance.log_emissions[0, toks[0]]
    for i in range(1, M):
        hopped = logsumexp(forward[:, None] + instance.log_transitions, axis=0)
        forward = hopped + instance.log_emissions[:, toks[i]]
    return float(forward[L - 1])


def entropy_stats(instance: Instance) -> EntropyStats:
    """Mean transition-row and emission-row entropies in nats.

    Transition rows cover t < L (the terminal row has no distribution);
    emission rows cover every position. ``-inf`` entries carry zero mass.
    A single-position lattice has no transition rows and reports 0.
    """
    L = instance.L
    if L > 1:
        t_ent = float(
            np.mean([entropy_nats(instance.log_transitions[t]) for t in range(L - 1)])
        )
    else:
        t_ent = 0.0
    p_ent = float(np.mean([entropy_nats(instance.log_emissions[t]) for t in range(L)]))
    return EntropyStats(transition_entropy=t_ent, prediction_entropy=p_ent)


def argmax_emission(instance: Instance, position: int) -> tuple[int, float]:
    """Most probable token at a 1-based position; ties go to the smallest id."""
    if not 1 <= position <= instance.L:
        raise PathShapeError(
            f"position {position} outside lattice of {instance.L} positions"
        )
    row = instance.log_emissions[position - 1]
    token = int(np.argmax(row))
    return token, float(row[token])


def _checked_path(instance: Instance, path) -> DecodingPath:
    p = as_path(path)
    p.check_against(instance.L)
    return p
