"""Scoring of detected communities against ground truth.

Two scores are provided: the symmetrized best-match F1 and a mutual
information defined over binary membership indicators, which stays valid
when ground-truth communities overlap.  Covers are plain families of node
groups; node ids are opaque integers (external ids when files are involved).
"""

from __future__ import annotations

import os
from collections import Counter
from dataclasses import dataclass, field
from math import log2
from typing import IO, Iterable

from .graph import Graph


@dataclass(eq=False)
class Cover:
    """A family of non-empty node groups, possibly overlapping."""

    groups: list
    dropped: int = 0

    def __post_init__(self):
        self.groups = [frozenset(g) for g in self.groups]
        for g in self.groups:
            if not g:
                raise ValueError("cover contains an empty group")

    def __len__(self) -> int:
        return len(self.groups)

    def nodes(self) -> set:
        out: set = set()
        for g in self.groups:
            out |= g
        return out

    def same_family(self, other: "Cover") -> bool:
        return set(self.groups) == set(other.groups)


@dataclass(frozen=True)
class ScoreReport:
    """Best-match F1 in both directions, their mean, and the indicator NMI.

    ``matches_forward[k]`` pairs truth group k with the index of its best
    detected match (or -1 when nothing overlaps) and the achieved F1;
    ``matches_backward`` is the same with roles swapped.
    """

    f1_forward: float
    f1_backward: float
    f1_avg: float
    nmi: float | None
    matches_forward: tuple = field(default=())
    matches_backward: tuple = field(default=())


def read_community_file(source: str | os.PathLike | IO[str]) -> Cover:
    """Read one community per line, whitespace-separated integer node ids."""
    owned = isinstance(source, (str, os.PathLike))
    fh = open(source, "rt", encoding="utf-8") if owned else source
    groups = []
    try:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            try:
                members = [int(tok) for tok in line.split()]
            except ValueError:
                raise ValueError(
                    f"line {lineno}: non-integer node id in community file"
                ) from None
            groups.append(frozenset(members))
    finally:
        if owned:
            fh.close()
    if not groups:
        raise ValueError("community file holds no communities")
    return Cover(groups=groups)


def write_community_file(cover: Cover, fh: IO[str]) -> None:
    """One community per line, members in ascending order."""
    for g in cover.groups:
        fh.write(" ".join(str(u) for u in sorted(g)))
        fh.write("\n")


def externalize_cover(cover: Cover, g: Graph) -> Cover:
    """Map a cover over internal ids to the graph's external ids."""
    return Cover(
        groups=[g.external_group(grp) for grp in cover.groups],
        dropped=cover.dropped,
    )


def f1_pair(estimate: Iterable, truth: Iterable) -> float:
    """Harmonic mean of precision and recall of one estimated group.

    Equals 2|A&B| / (|A| + |B|); zero when the sets are disjoint.
    """
    a = set(estimate)
    b = set(truth)
    if not a or not b:
        raise ValueError("f1_pair requires non-empty sets")
    inter = len(a & b)
    if inter == 0:
        return 0.0
    return 2.0 * inter / (len(a) + len(b))


def _best_match_f1(candidates: Cover, targets: Cover) -> list:
    """For each target group, the best-F1 candidate (index, f1)."""
    index: dict = {}
    for gi, grp in enumerate(candidates.groups):
        for node in grp:
            index.setdefault(node, []).append(gi)
    sizes = [len(grp) for grp in candidates.groups]
    out = []
    for grp in targets.groups:
        overlap: Counter = Counter()
        for node in grp:
            for gi in index.get(node, ()):
                overlap[gi] += 1
        best_gi = -1
        best = 0.0
        for gi, ov in overlap.items():
            f1 = 2.0 * ov / (sizes[gi] + len(grp))
            if f1 > best:
                best = f1
                best_gi = gi
        out.append((best_gi, best))
    return out


def avg_f1(detected: Cover, truth: Cover) -> float:
    """Symmetrized best-match F1 between two covers.

    Each direction averages, over one cover's groups, the best F1 achieved
    by any group of the other cover (zero when nothing overlaps); the two
    directions are then averaged.  Inverted node indexes keep the cost near
    linear in total membership size.
    """
    fwd, bwd = directional_f1(detected, truth)
    return 0.5 * (fwd + bwd)


def directional_f1(detected: Cover, truth: Cover) -> tuple[float, float]:
    """(forward, backward) best-match F1; forward averages over truth groups."""
    if not detected.groups or not truth.groups:
        raise ValueError("cannot score an empty cover")
    fwd_matches = _best_match_f1(detected, truth)
    bwd_matches = _best_match_f1(truth, detected)
    fwd = sum(f for _, f in fwd_matches) / len(fwd_matches)
    bwd = sum(f for _, f in bwd_matches) / len(bwd_matches)
    return fwd, bwd


def _h(p: float) -> float:
    return -p * log2(p) if p > 0.0 else 0.0


def _indicator_entropy(size: int, n: int) -> float:
    return _h(size / n) + _h((n - size) / n)


def _normalized_conditional(xs: Cover, ys: Cover, n: int) -> float:
    """Mean over X groups of H(X_i|Y)/H(X_i) under the admissibility guard.

    A candidate match is discarded when its agreement entropy terms fall
    below its disagreement terms; with no admissible candidate the group
    keeps its full entropy (normalized term 1).  Groups with zero entropy
    (empty or the whole universe) also contribute 1.
    """
    terms = []
    for a_grp in xs.groups:
        ha = _indicator_entropy(len(a_grp), n)
        best = None
        for b_grp in ys.groups:
            n11 = len(a_grp & b_grp)
            n10 = len(a_grp) - n11
            n01 = len(b_grp) - n11
            n00 = n - n11 - n10 - n01
            h11 = _h(n11 / n)
            h10 = _h(n10 / n)
            h01 = _h(n01 / n)
            h00 = _h(n00 / n)
            if h11 + h00 < h01 + h10:
                continue  # indicators look anti-correlated; not a match
            cond = h11 + h10 + h01 + h00 - _indicator_entropy(len(b_grp), n)
            if best is None or cond < best:
                best = cond
        if ha <= 0.0 or best is None:
            terms.append(1.0)
        else:
            terms.append(min(max(best, 0.0), ha) / ha)
    return sum(terms) / len(terms)


def nmi(detected: Cover, truth: Cover, universe: int | None = None) -> float:
    """Indicator-variable mutual information between two covers.

    Each group becomes a binary membership variable over a universe of n
    nodes; the score is 1 minus the mean of the two normalized conditional
    entropies.  ``universe`` fixes n explicitly; by default it is the number
    of distinct nodes appearing in either cover, so nodes belonging to
    neither cover never enter the computation.
    """
    if not detected.groups or not truth.groups:
        raise ValueError("cannot score an empty cover")
    covered = detected.nodes() | truth.nodes()
    if universe is None:
        n = len(covered)
    else:
        n = int(universe)
        if n < len(covered):
            raise ValueError(
                f"universe size {n} smaller than the {len(covered)} covered nodes"
            )
    if n == 0:
        raise ValueError("empty node universe")
    hxy = _normalized_conditional(detected, truth, n)
    hyx = _normalized_conditional(truth, detected, n)
    return 1.0 - 0.5 * (hxy + hyx)


def score_covers(
    detected: Cover,
    truth: Cover,
    universe: int | None = None,
    with_nmi: bool = True,
) -> ScoreReport:
    """Full report: directional F1, their mean, and optionally the NMI."""
    fwd, bwd = directional_f1(detected, truth)
    value = nmi(detected, truth, universe=universe) if with_nmi else None
    return ScoreReport(
        f1_forward=fwd,
        f1_backward=bwd,
        f1_avg=0.5 * (fwd + bwd),
        nmi=value,
        matches_forward=tuple(_best_match_f1(detected, truth)),
        matches_backward=tuple(_best_match_f1(truth, detected)),
    )
