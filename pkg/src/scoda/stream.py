"""Randomized edge orderings consumed by the single-pass detector.

All randomness flows through numpy's PCG64 generator, which produces the
same stream for the same seed on every platform, so a (seed, graph) pair
replays bit-identically.  ``shuffle`` draws the permutation first and the
direction bits second; ``weighted_shuffle`` draws the ranking keys first.
"""

from __future__ import annotations

import secrets
from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True, eq=False)
class EdgeStream:
    """A replayable random presentation order for m edges.

    ``order[j]`` is the original index of the j-th streamed edge and
    ``flip[i]`` says whether original edge i is presented with its endpoints
    swapped.  ``seed`` is recorded so the stream can be regenerated.
    """

    order: np.ndarray
    flip: np.ndarray
    seed: int

    def __len__(self) -> int:
        return len(self.order)


def new_seed() -> int:
    """Draw a fresh 64-bit seed from system entropy."""
    return secrets.randbits(64)


def spawn_seeds(master: int, count: int) -> list[int]:
    """Derive ``count`` independent child seeds from a master seed.

    The derivation is deterministic, so experiments that seed each trial
    from the same master reproduce exactly regardless of scheduling.
    """
    state = np.random.SeedSequence(master).generate_state(count, dtype=np.uint64)
    return [int(s) for s in state]


def shuffle(m: int, seed: int) -> EdgeStream:
    """Uniform Fisher-Yates permutation of [0, m) plus fair direction coins."""
    if m < 0:
        raise ValueError("edge count must be non-negative")
    rng = np.random.Generator(np.random.PCG64(seed))
    order = rng.permutation(m)
    flip = rng.random(m) < 0.5
    return EdgeStream(order=order, flip=flip, seed=seed)


def weighted_shuffle(weights, seed: int) -> EdgeStream:
    """Random permutation where heavier edges tend to come first.

    Each edge gets an independent exponential key with rate equal to its
    weight and edges are sorted by ascending key; by the memorylessness of
    the exponential this is exactly successive sampling without replacement
    with probabilities proportional to the remaining weights.
    """
    w = np.asarray(weights, dtype=np.float64)
    if w.ndim != 1:
        raise ValueError("weights must be one-dimensional")
    if len(w) and w.min() <= 0:
        raise ValueError("all weights must be positive")
    rng = np.random.Generator(np.random.PCG64(seed))
    keys = rng.exponential(size=len(w)) / w
    order = np.argsort(keys, kind="stable")
    flip = rng.random(len(w)) < 0.5
    return EdgeStream(order=order, flip=flip, seed=seed)
