"""Single-pass streaming community detection.

The detector consumes edges in the order given by an EdgeStream and keeps
two length-n integer arrays: the running degree of every node and its
current community label.  When an edge arrives, both endpoint degrees are
incremented; if both stay at or below the threshold D the lower-degree
endpoint adopts the label of the other (the first endpoint adopts on ties,
which the stream's direction bits symmetrize in distribution).  No other
state exists, so memory is O(n) and the pass is O(m).
"""

from __future__ import annotations

import itertools
import threading
from dataclasses import dataclass
from math import floor

import numpy as np

from .graph import DegreeStats, Graph
from .metrics import Cover
from .stream import EdgeStream


@dataclass(frozen=True)
class ThresholdStrategy:
    """How the degree threshold D is chosen: a degree statistic or a constant."""

    kind: str  # "mode" | "median" | "avg" | "fixed"
    value: int | None = None

    KINDS = ("mode", "median", "avg", "fixed")

    def __post_init__(self):
        if self.kind not in self.KINDS:
            raise ValueError(f"unknown threshold strategy {self.kind!r}")
        if self.kind == "fixed":
            if self.value is None or self.value < 1:
                raise ValueError("fixed threshold requires a value >= 1")
        elif self.value is not None:
            raise ValueError(f"strategy {self.kind!r} takes no value")

    @classmethod
    def parse(cls, text: str) -> "ThresholdStrategy":
        """Parse a CLI spelling: 'mode', 'median', 'avg', or 'fixed:D'."""
        if text.startswith("fixed:"):
            return cls("fixed", int(text.split(":", 1)[1]))
        return cls(text)

    def __str__(self) -> str:
        return f"fixed:{self.value}" if self.kind == "fixed" else self.kind


MODE = ThresholdStrategy("mode")
MEDIAN = ThresholdStrategy("median")
AVERAGE = ThresholdStrategy("avg")


def fixed(value: int) -> ThresholdStrategy:
    return ThresholdStrategy("fixed", value)


def resolve_threshold(strategy: ThresholdStrategy, stats: DegreeStats | None) -> int:
    """Turn a strategy into a concrete D >= 1.

    Median and average round half-up and clamp to 1.  The mode strategy
    raises when the graph has no node of degree above 1.
    """
    if strategy.kind == "fixed":
        return strategy.value
    if stats is None:
        raise ValueError(f"strategy {strategy.kind!r} requires degree statistics")
    if strategy.kind == "mode":
        return stats.require_mode()
    value = stats.d_med if strategy.kind == "median" else stats.d_avg
    return max(1, floor(value + 0.5))


@dataclass
class ScodaState:
    """The detector's entire working memory: two integer arrays of length n."""

    d: list
    c: list
    threshold: int

    @classmethod
    def fresh(cls, n: int, threshold: int) -> "ScodaState":
        return cls(d=[0] * n, c=list(range(n)), threshold=threshold)


@dataclass
class Partition:
    """Final community labels, one per node; labels are node ids."""

    labels: list

    @property
    def n(self) -> int:
        return len(self.labels)

    def groups(self) -> dict:
        """Label -> member list, in order of each label's first appearance."""
        out: dict = {}
        for node, label in enumerate(self.labels):
            out.setdefault(label, []).append(node)
        return out

    @property
    def singleton_count(self) -> int:
        return sum(1 for members in self.groups().values() if len(members) == 1)


def _streamed_endpoints(g: Graph, stream: EdgeStream) -> tuple[list, list]:
    if len(stream.order) != g.m or len(stream.flip) != g.m:
        raise ValueError(
            f"stream covers {len(stream.order)} edges but the graph has {g.m}"
        )
    e = g.edges[stream.order]
    f = stream.flip[stream.order]
    us = np.where(f, e[:, 1], e[:, 0])
    vs = np.where(f, e[:, 0], e[:, 1])
    return us.tolist(), vs.tolist()


def run_state(g: Graph, stream: EdgeStream, threshold: int) -> ScodaState:
    """One pass of the streaming detector; each edge is touched exactly once.

    Returns the final state: d holds every node's true degree, c its label.
    """
    if threshold < 1:
        raise ValueError("threshold must be >= 1")
    us, vs = _streamed_endpoints(g, stream)
    state = ScodaState.fresh(g.n, threshold)
    d = state.d
    c = state.c
    for u, v in zip(us, vs):
        du = d[u] + 1
        d[u] = du
        dv = d[v] + 1
        d[v] = dv
        if du <= threshold and dv <= threshold:
            if du <= dv:
                c[u] = c[v]
            else:
                c[v] = c[u]
    return state


def run(g: Graph, stream: EdgeStream, threshold: int) -> Partition:
    """Run the detector and return only the final community labels."""
    return Partition(labels=run_state(g, stream, threshold).c)


def run_recording_transfers(
    g: Graph, stream: EdgeStream, threshold: int
) -> tuple[Partition, np.ndarray]:
    """Like run(), also reporting which edges changed a label.

    The returned boolean array is indexed by original edge index and marks
    the edges whose arrival merged two labels (both updated degrees at or
    below the threshold).
    """
    if threshold < 1:
        raise ValueError("threshold must be >= 1")
    us, vs = _streamed_endpoints(g, stream)
    order = stream.order.tolist()
    transfer = np.zeros(g.m, dtype=bool)
    state = ScodaState.fresh(g.n, threshold)
    d = state.d
    c = state.c
    for j, (u, v) in enumerate(zip(us, vs)):
        du = d[u] + 1
        d[u] = du
        dv = d[v] + 1
        d[v] = dv
        if du <= threshold and dv <= threshold:
            transfer[order[j]] = True
            if du <= dv:
                c[u] = c[v]
            else:
                c[v] = c[u]
    return Partition(labels=c), transfer


def run_parallel(
    g: Graph, stream: EdgeStream, threshold: int, workers: int
) -> Partition:
    """Process contiguous chunks of the stream on shared state.

    Degrees live in per-node counters whose advance is a single C-level call,
    hence atomic under CPython; labels live in a plain list whose per-element
    loads and stores are likewise atomic.  There is no cross-cell ordering,
    so worker interleaving can change individual labels but, because the
    stream order is already random, not the statistical behavior.  With
    workers=1 the output is identical to run().
    """
    if workers < 1:
        raise ValueError("workers must be >= 1")
    if threshold < 1:
        raise ValueError("threshold must be >= 1")
    us, vs = _streamed_endpoints(g, stream)
    counters = [itertools.count(1) for _ in range(g.n)]
    c = list(range(g.n))

    def consume(lo: int, hi: int) -> None:
        for u, v in zip(us[lo:hi], vs[lo:hi]):
            du = next(counters[u])
            dv = next(counters[v])
            if du <= threshold and dv <= threshold:
                if du <= dv:
                    c[u] = c[v]
                else:
                    c[v] = c[u]

    if workers == 1:
        consume(0, g.m)
    else:
        bounds = np.linspace(0, g.m, workers + 1).astype(int)
        threads = [
            threading.Thread(target=consume, args=(int(lo), int(hi)))
            for lo, hi in zip(bounds[:-1], bounds[1:])
        ]
        for t in threads:
            t.start()
        for t in threads:
            t.join()
    return Partition(labels=c)


def extract_communities(partition: Partition, min_size: int = 1) -> Cover:
    """Group nodes by final label and drop groups below min_size.

    Groups are canonicalized in order of first node appearance; the number
    of dropped groups is recorded on the returned cover.
    """
    if min_size < 1:
        raise ValueError("min_size must be >= 1")
    groups = list(partition.groups().values())
    kept = [g for g in groups if len(g) >= min_size]
    return Cover(groups=kept, dropped=len(groups) - len(kept))
