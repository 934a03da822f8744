"""Undirected edge-list graphs, degree statistics, and community structure.

Graphs are loaded from SNAP-style edge lists (one ``u v`` pair per line,
``#`` comments, optional third column holding a positive weight).  External
node ids may be arbitrary non-negative integers; internally nodes are
renumbered 0..n-1 in order of first appearance, which keeps loading
deterministic and reproducible.
"""

from __future__ import annotations

import io
import os
from dataclasses import dataclass, field
from typing import IO, Iterable, Iterator

import numpy as np


class GraphFormatError(ValueError):
    """A line of an edge-list file could not be parsed or validated."""

    def __init__(self, message: str, line_number: int | None = None):
        if line_number is not None:
            message = f"line {line_number}: {message}"
        super().__init__(message)
        self.line_number = line_number


@dataclass(eq=False)
class Graph:
    """Immutable undirected simple graph over internal ids 0..n-1.

    Attributes:
        n: node count.
        m: edge count.
        edges: (m, 2) int64 array of internal endpoint pairs, no self-loops,
            no duplicate undirected edges.
        ext_ids: internal -> external id array, or None when external and
            internal ids coincide (generated graphs).
        weights: optional (m,) array of positive edge weights.
        self_loops_dropped: count of self-loop lines discarded at load time.
        duplicates_dropped: count of duplicate edges discarded (dedupe mode).
    """

    n: int
    m: int
    edges: np.ndarray
    ext_ids: np.ndarray | None = None
    weights: np.ndarray | None = None
    self_loops_dropped: int = 0
    duplicates_dropped: int = 0
    _int_of_ext: dict = field(default=None, repr=False)

    @classmethod
    def from_edges(cls, n, edges, weights=None, validate=True) -> "Graph":
        """Build a graph on nodes 0..n-1 from internal-id edge pairs.

        Intended for generators and tests; external ids equal internal ids.
        """
        arr = np.asarray(edges, dtype=np.int64).reshape(-1, 2)
        w = None if weights is None else np.asarray(weights, dtype=np.float64)
        g = cls(n=n, m=len(arr), edges=arr, weights=w)
        if validate:
            g.validate()
        return g

    def validate(self) -> None:
        """Check structural invariants; raises ValueError on violation."""
        if self.m != len(self.edges):
            raise ValueError("m does not match edge array length")
        if self.m:
            if self.edges.min() < 0 or self.edges.max() >= self.n:
                raise ValueError("edge endpoint outside [0, n)")
            if np.any(self.edges[:, 0] == self.edges[:, 1]):
                raise ValueError("self-loop present")
            lo = np.minimum(self.edges[:, 0], self.edges[:, 1])
            hi = np.maximum(self.edges[:, 0], self.edges[:, 1])
            if len(np.unique(lo * np.int64(self.n) + hi)) != self.m:
                raise ValueError("duplicate undirected edge present")
        if self.weights is not None:
            if len(self.weights) != self.m:
                raise ValueError("weights length does not match edge count")
            if self.m and self.weights.min() <= 0:
                raise ValueError("edge weights must be positive")
        if self.ext_ids is not None and len(np.unique(self.ext_ids)) != self.n:
            raise ValueError("external id mapping is not a bijection")

    def to_external(self, node: int) -> int:
        if self.ext_ids is None:
            return int(node)
        return int(self.ext_ids[node])

    def to_internal(self, ext: int) -> int:
        if self.ext_ids is None:
            if not 0 <= ext < self.n:
                raise KeyError(ext)
            return int(ext)
        if self._int_of_ext is None:
            self._int_of_ext = {int(e): i for i, e in enumerate(self.ext_ids)}
        return self._int_of_ext[ext]

    def external_group(self, nodes: Iterable[int]) -> frozenset:
        """Map a set of internal ids to external ids."""
        return frozenset(self.to_external(u) for u in nodes)

    def degrees(self) -> np.ndarray:
        return np.bincount(self.edges.ravel(), minlength=self.n)


@dataclass(frozen=True)
class DegreeStats:
    """Summary of a graph's degree distribution.

    ``d_mode`` is the most frequent degree among nodes of degree > 1 (ties
    broken toward the smaller degree) and is None when every node has degree
    at most 1.  ``d_med`` is the lower median over the full degree sequence,
    leaves included.  ``density`` is m / (n(n-1)/2).
    """

    degrees: np.ndarray
    d_avg: float
    d_med: float
    d_mode: int | None
    d_max: int
    density: float
    histogram: dict

    def require_mode(self) -> int:
        if self.d_mode is None:
            raise ValueError(
                "d_mode undefined: every node has degree <= 1 "
                "(use a fixed threshold instead)"
            )
        return self.d_mode


@dataclass(frozen=True)
class CommunityStats:
    """Structural quantities of one node set C inside a graph.

    ``boundary_pairs`` lists e(C, C-bar) with the C-side endpoint first.
    ``odf`` maps each member u to the fraction of its edges leaving C
    (0.0 for members with no incident edges at all).
    """

    community: frozenset
    internal: int
    boundary: int
    incident: int
    boundary_nodes: frozenset
    conductance: float
    pseudo_conductance: float
    odf: dict
    degree: dict
    out_degree: dict
    boundary_pairs: tuple


def _open_source(source) -> tuple[Iterator[str], bool]:
    if isinstance(source, (str, os.PathLike)):
        fh = open(source, "rt", encoding="utf-8")
        return fh, True
    if isinstance(source, (bytes, bytearray)):
        return io.StringIO(source.decode("utf-8")), False
    return source, False


def load_graph(source: str | os.PathLike | IO[str], dedupe: bool = False) -> Graph:
    """Parse a SNAP-format edge list into a validated Graph.

    Lines starting with '#' and blank lines are ignored.  Each remaining line
    must hold two non-negative integer external ids, optionally followed by a
    positive weight.  Self-loops are dropped (counted).  Duplicate undirected
    edges are an error unless ``dedupe`` is set, in which case the first
    occurrence wins.

    Raises GraphFormatError with the offending line number on malformed
    input, and on duplicates when ``dedupe`` is off.
    """
    stream, owned = _open_source(source)
    int_of_ext: dict = {}
    ext_ids: list = []
    srcs: list = []
    dsts: list = []
    weights: list = []
    seen: set = set()
    any_weight = False
    self_loops = 0
    duplicates = 0
    try:
        for lineno, raw in enumerate(stream, start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            tokens = line.split()
            if len(tokens) < 2:
                raise GraphFormatError("expected at least two fields", lineno)
            if len(tokens) > 3:
                raise GraphFormatError(
                    f"expected 2 or 3 fields, got {len(tokens)}", lineno
                )
            try:
                eu = int(tokens[0])
                ev = int(tokens[1])
            except ValueError:
                raise GraphFormatError(
                    f"non-integer node id in {tokens[:2]}", lineno
                ) from None
            if eu < 0 or ev < 0:
                raise GraphFormatError("negative node id", lineno)
            w = None
            if len(tokens) == 3:
                try:
                    w = float(tokens[2])
                except ValueError:
                    raise GraphFormatError(
                        f"non-numeric weight {tokens[2]!r}", lineno
                    ) from None
                if not w > 0:
                    raise GraphFormatError(f"weight must be positive, got {w}", lineno)
            if eu == ev:
                self_loops += 1
                continue
            u = int_of_ext.get(eu)
            if u is None:
                u = len(ext_ids)
                int_of_ext[eu] = u
                ext_ids.append(eu)
            v = int_of_ext.get(ev)
            if v is None:
                v = len(ext_ids)
                int_of_ext[ev] = v
                ext_ids.append(ev)
            key = (u, v) if u < v else (v, u)
            if key in seen:
                if dedupe:
                    duplicates += 1
                    continue
                raise GraphFormatError(
                    f"duplicate undirected edge {eu} {ev} (pass dedupe to drop)",
                    lineno,
                )
            seen.add(key)
            srcs.append(u)
            dsts.append(v)
            if w is not None:
                any_weight = True
            weights.append(w)
    finally:
        if owned:
            stream.close()

    m = len(srcs)
    edges = np.empty((m, 2), dtype=np.int64)
    edges[:, 0] = srcs
    edges[:, 1] = dsts
    warr = None
    if any_weight:
        if any(w is None for w in weights):
            raise GraphFormatError("weights present on some lines but not all")
        warr = np.asarray(weights, dtype=np.float64)
    g = Graph(
        n=len(ext_ids),
        m=m,
        edges=edges,
        ext_ids=np.asarray(ext_ids, dtype=np.int64),
        weights=warr,
        self_loops_dropped=self_loops,
        duplicates_dropped=duplicates,
    )
    g._int_of_ext = int_of_ext
    return g


def degree_stats(g: Graph) -> DegreeStats:
    """Compute the degree distribution summary in one pass over the edges.

    The mode considers only degrees above 1, with ties broken toward the
    smallest qualifying degree; it comes back as None when no node qualifies.
    """
    if g.n == 0:
        raise ValueError("degree statistics undefined for an empty graph")
    degrees = g.degrees()
    counts = np.bincount(degrees)
    d_avg = 2.0 * g.m / g.n
    d_med = float(np.sort(degrees)[(g.n - 1) // 2])
    d_mode = None
    if len(counts) > 2:
        tail = counts[2:]
        if tail.max() > 0:
            d_mode = int(np.argmax(tail)) + 2  # argmax picks smallest on ties
    density = g.m / (g.n * (g.n - 1) / 2.0) if g.n > 1 else 0.0
    histogram = {int(d): int(c) for d, c in enumerate(counts) if c > 0}
    return DegreeStats(
        degrees=degrees,
        d_avg=d_avg,
        d_med=d_med,
        d_mode=d_mode,
        d_max=int(degrees.max()),
        density=density,
        histogram=histogram,
    )


def community_stats(g: Graph, community: Iterable[int]) -> CommunityStats:
    """Count internal / boundary edges of a node set and derive its quality.

    Returns conductance |e(C,Cbar)| / (2|e(C,C)| + |e(C,Cbar)|),
    pseudo-conductance |e(C,Cbar)| / |e(C)|, and the per-member out-degree
    fraction.  Raises ValueError for out-of-range members, an empty set, or a
    set with no incident edges (conductance undefined).
    """
    cset = frozenset(int(u) for u in community)
    if not cset:
        raise ValueError("community is empty")
    for u in cset:
        if not 0 <= u < g.n:
            raise ValueError(f"node {u} outside [0, {g.n})")
    degree = dict.fromkeys(cset, 0)
    out_degree = dict.fromkeys(cset, 0)
    internal = 0
    boundary_pairs = []
    for u, v in g.edges.tolist():
        u_in = u in cset
        v_in = v in cset
        if u_in:
            degree[u] += 1
        if v_in:
            degree[v] += 1
        if u_in and v_in:
            internal += 1
        elif u_in:
            out_degree[u] += 1
            boundary_pairs.append((u, v))
        elif v_in:
            out_degree[v] += 1
            boundary_pairs.append((v, u))
    boundary = len(boundary_pairs)
    incident = internal + boundary
    if incident == 0:
        raise ValueError("community has no incident edges; conductance undefined")
    odf = {
        u: (out_degree[u] / degree[u] if degree[u] else 0.0) for u in cset
    }
    return CommunityStats(
        community=cset,
        internal=internal,
        boundary=boundary,
        incident=incident,
        boundary_nodes=frozenset(u for u in cset if out_degree[u] > 0),
        conductance=boundary / (2 * internal + boundary),
        pseudo_conductance=boundary / incident,
        odf=odf,
        degree=degree,
        out_degree=out_degree,
        boundary_pairs=tuple(boundary_pairs),
    )
