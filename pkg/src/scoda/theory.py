"""Closed-form probabilities and the Monte-Carlo experiment harnesses.

This module turns the detector's analysis into executable checks: the
probability that a community's first streamed edges are internal, the upper
bound on boundary edges that merge labels across a community ("false
positive" edges), recall experiments on Erdos-Renyi graphs, run-to-run
variance, and the sweep of the detection quality over the threshold D.

Every experiment takes a master seed and derives one child seed per trial,
so results replay exactly and trials stay independent.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import sqrt

import numpy as np

from .detection import (
    MODE,
    ThresholdStrategy,
    extract_communities,
    resolve_threshold,
    run,
    run_parallel,
    run_recording_transfers,
)
from .graph import CommunityStats, Graph, community_stats, degree_stats
from .metrics import Cover, avg_f1, externalize_cover
from .stream import shuffle, spawn_seeds


@dataclass(frozen=True)
class IntraProbability:
    """P[first k edges drawn in e(C) are internal], with the factor sequence."""

    community: frozenset
    k: int
    value: float
    phi_sequence: tuple


@dataclass(frozen=True)
class FpeReport:
    """Monte-Carlo mean of label-merging boundary edges vs the closed-form bound."""

    community: frozenset
    threshold: int
    trials: int
    empirical_mean: float
    empirical_std: float
    std_error: float
    bound: float
    seed: int


@dataclass(frozen=True)
class ErResult:
    """Mean relative size of the largest detected community on G(n, p)."""

    n: int
    p: float
    trials: int
    completed: int
    skipped: int
    mean_ratio: float
    std_error: float
    seed: int
    workers: int = 1


@dataclass(frozen=True)
class VarianceResult:
    """Spread of the F1 score and the community count over repeated runs."""

    runs: int
    f1_mean: float
    f1_std: float
    count_mean: float
    count_std: float
    seed: int


@dataclass(frozen=True)
class SweepResult:
    """Detection quality across threshold values, normalized by the best."""

    d_values: tuple
    f1_scores: tuple
    q_ratios: tuple
    best_d: int
    markers: dict


def gnp_graph(n: int, p: float, seed: int) -> Graph:
    """Sample G(n, p): every unordered pair is an edge independently.

    Small pair counts draw one uniform per pair; larger ones draw the edge
    count from the matching binomial and then a uniform subset of pair
    indices, which yields the identical distribution.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    if not 0.0 < p <= 1.0:
        raise ValueError("p must lie in (0, 1]")
    total = n * (n - 1) // 2
    rng = np.random.default_rng(seed)
    if total <= 200_000:
        iu, jv = np.triu_indices(n, k=1)
        mask = rng.random(total) < p
        edges = np.column_stack((iu[mask], jv[mask]))
    else:
        k = int(rng.binomial(total, p))
        idx = _uniform_subset(rng, total, k)
        edges = np.column_stack(_decode_pairs(idx, n))
    return Graph.from_edges(n, edges, validate=False)


def _uniform_subset(rng: np.random.Generator, total: int, k: int) -> np.ndarray:
    """A uniformly random size-k subset of [0, total), as a sorted array.

    Repeated with-replacement draws are deduplicated until at least k
    distinct values exist, then a uniform k-subset of those is kept; by
    symmetry over indices the result is exactly uniform.
    """
    if k == 0:
        return np.empty(0, dtype=np.int64)
    if k > total:
        raise ValueError("subset larger than the ground set")
    chosen = np.unique(rng.integers(0, total, size=k + k // 16 + 16))
    while len(chosen) < k:
        extra = rng.integers(0, total, size=2 * (k - len(chosen)) + 16)
        chosen = np.unique(np.concatenate((chosen, extra)))
    if len(chosen) > k:
        keep = rng.choice(len(chosen), size=k, replace=False)
        chosen = chosen[np.sort(keep)]
    return chosen


def _decode_pairs(idx: np.ndarray, n: int) -> tuple[np.ndarray, np.ndarray]:
    """Map flat upper-triangle indices back to (i, j) pairs with i < j."""
    counts = np.arange(n - 1, 0, -1, dtype=np.int64)
    starts = np.concatenate(([0], np.cumsum(counts)))
    i = np.searchsorted(starts, idx, side="right") - 1
    j = idx - starts[i] + i + 1
    return i, j


def intra_probability(stats: CommunityStats, k: int) -> IntraProbability:
    """Exact probability that the first k draws from e(C) are internal.

    The value is the product over l < k of (|e(C,C)| - l) / (|e(C)| - l),
    equivalently of 1 - phi_l with phi_l = |e(C,Cbar)| / (|e(C)| - l);
    the phi sequence is returned for cross-checks (phi_0 is the
    pseudo-conductance).
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    if k > stats.incident:
        raise ValueError(f"k={k} exceeds |e(C)|={stats.incident}")
    value = 1.0
    phis = []
    for ell in range(k):
        phis.append(stats.boundary / (stats.incident - ell))
        value *= max(0, stats.internal - ell) / (stats.incident - ell)
    return IntraProbability(
        community=stats.community, k=k, value=value, phi_sequence=tuple(phis)
    )


def fpe_bound(stats: CommunityStats, threshold: int) -> float:
    """Closed-form upper bound on the expected count of boundary merges.

    Sums over boundary edges (u, v) with u inside C the probability
    1 - prod_{k<D} (1 - d_out(u) / (d(u) - k)); a factor whose denominator
    is exhausted (d(u) - k <= d_out(u)) pins that edge's probability at 1.
    """
    if threshold < 1:
        raise ValueError("threshold must be >= 1")
    total = 0.0
    for u, _v in stats.boundary_pairs:
        deg = stats.degree[u]
        out = stats.out_degree[u]
        prod = 1.0
        for k in range(threshold):
            remaining = deg - k
            if remaining <= 0 or out >= remaining:
                prod = 0.0
                break
            prod *= 1.0 - out / remaining
        total += 1.0 - prod
    return total


def fpe_experiment(
    g: Graph,
    community,
    threshold: int,
    trials: int,
    seed: int,
) -> FpeReport:
    """Measure boundary merges over independent streams against the bound.

    Each trial reshuffles the edges, runs the detector with transfer
    recording, and counts the community's boundary edges that merged labels.
    Raises RuntimeError if the empirical mean exceeds the bound by more than
    three standard errors, since the bound is exact.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    stats = community_stats(g, community)
    bound = fpe_bound(stats, threshold)
    in_c = np.zeros(g.n, dtype=bool)
    in_c[list(stats.community)] = True
    boundary_mask = in_c[g.edges[:, 0]] ^ in_c[g.edges[:, 1]]
    counts = np.empty(trials, dtype=np.int64)
    for i, s in enumerate(spawn_seeds(seed, trials)):
        _, transfer = run_recording_transfers(g, shuffle(g.m, s), threshold)
        counts[i] = int(np.count_nonzero(transfer & boundary_mask))
    mean = float(counts.mean())
    std = float(counts.std(ddof=1)) if trials > 1 else 0.0
    se = std / sqrt(trials)
    if mean > bound + 3.0 * se:
        raise RuntimeError(
            f"empirical mean {mean:.4f} exceeds bound {bound:.4f} + 3se ({se:.4f})"
        )
    return FpeReport(
        community=stats.community,
        threshold=threshold,
        trials=trials,
        empirical_mean=mean,
        empirical_std=std,
        std_error=se,
        bound=bound,
        seed=seed,
    )


def er_experiment(
    n: int,
    p: float,
    trials: int,
    threshold: ThresholdStrategy = MODE,
    seed: int = 0,
    workers: int = 1,
) -> ErResult:
    """Recall proxy on random graphs: relative size of the largest community.

    Generates ``trials`` independent G(n, p) graphs, runs the detector once
    on each with D resolved per graph, and averages max community size / n.
    Graphs where the requested statistic is undefined (near-empty graphs
    under the mode strategy) are skipped and counted.
    """
    if n < 2:
        raise ValueError("n must be >= 2")
    if not 0.0 < p <= 1.0:
        raise ValueError("p must lie in (0, 1]")
    if trials < 1:
        raise ValueError("trials must be >= 1")
    seeds = spawn_seeds(seed, 2 * trials)
    ratios = []
    skipped = 0
    for t in range(trials):
        g = gnp_graph(n, p, seeds[2 * t])
        try:
            d = resolve_threshold(threshold, degree_stats(g))
        except ValueError:
            skipped += 1
            continue
        stream = shuffle(g.m, seeds[2 * t + 1])
        if workers == 1:
            part = run(g, stream, d)
        else:
            part = run_parallel(g, stream, d, workers)
        ratios.append(np.bincount(part.labels).max() / n)
    if not ratios:
        raise RuntimeError("every trial was skipped; threshold never resolved")
    arr = np.asarray(ratios)
    std = float(arr.std(ddof=1)) if len(arr) > 1 else 0.0
    return ErResult(
        n=n,
        p=p,
        trials=trials,
        completed=len(arr),
        skipped=skipped,
        mean_ratio=float(arr.mean()),
        std_error=std / sqrt(len(arr)),
        seed=seed,
        workers=workers,
    )


def variance_experiment(
    g: Graph,
    truth: Cover,
    threshold: int,
    runs: int,
    seed: int,
    min_size: int = 1,
) -> VarianceResult:
    """Mean and spread of the F1 score and community count over repeated runs."""
    if runs < 2:
        raise ValueError("runs must be >= 2")
    f1s = np.empty(runs)
    ncomms = np.empty(runs)
    for i, s in enumerate(spawn_seeds(seed, runs)):
        part = run(g, shuffle(g.m, s), threshold)
        cover = externalize_cover(extract_communities(part, min_size), g)
        f1s[i] = avg_f1(cover, truth)
        ncomms[i] = len(cover.groups)
    return VarianceResult(
        runs=runs,
        f1_mean=float(f1s.mean()),
        f1_std=float(f1s.std(ddof=1)),
        count_mean=float(ncomms.mean()),
        count_std=float(ncomms.std(ddof=1)),
        seed=seed,
    )


def sweep_d(
    g: Graph,
    truth: Cover,
    d_values,
    runs_per_d: int,
    seed: int,
    min_size: int = 2,
) -> SweepResult:
    """Average F1 for each threshold in d_values, normalized by the maximum.

    Singletons are excluded from scoring by default (min_size=2).  The
    returned markers locate the average / median / mode degree statistics
    against the sweep axis.
    """
    d_values = tuple(int(d) for d in d_values)
    if not d_values or min(d_values) < 1:
        raise ValueError("d_values must be non-empty with every D >= 1")
    if runs_per_d < 1:
        raise ValueError("runs_per_d must be >= 1")
    stats = degree_stats(g)
    seeds = spawn_seeds(seed, len(d_values) * runs_per_d)
    scores = []
    for di, d in enumerate(d_values):
        vals = []
        for r in range(runs_per_d):
            part = run(g, shuffle(g.m, seeds[di * runs_per_d + r]), d)
            cover = externalize_cover(extract_communities(part, min_size), g)
            if not cover.groups:
                vals.append(0.0)
                continue
            vals.append(avg_f1(cover, truth))
        scores.append(float(np.mean(vals)))
    best = max(scores)
    q = tuple(s / best if best > 0 else 0.0 for s in scores)
    return SweepResult(
        d_values=d_values,
        f1_scores=tuple(scores),
        q_ratios=q,
        best_d=d_values[int(np.argmax(scores))],
        markers={"avg": stats.d_avg, "median": stats.d_med, "mode": stats.d_mode},
    )
