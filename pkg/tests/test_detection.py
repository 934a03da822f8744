import dataclasses

import numpy as np
import pytest

from scoda import (
    AVERAGE,
    MEDIAN,
    MODE,
    Graph,
    ScodaState,
    ThresholdStrategy,
    degree_stats,
    extract_communities,
    fixed,
    gnp_graph,
    resolve_threshold,
    run,
    run_parallel,
    run_recording_transfers,
    run_state,
    shuffle,
    spawn_seeds,
)
from conftest import K4_MINUS_EDGES, TRIANGLE_EDGES
from oracles import (
    all_order_flip_streams,
    labels_as_partition,
    oriented_edges,
    reference_pass,
    reference_steps,
    stream_from,
)


def test_threshold_parse_and_validate():
    assert ThresholdStrategy.parse("mode") == MODE
    assert ThresholdStrategy.parse("fixed:7") == fixed(7)
    assert str(fixed(7)) == "fixed:7"
    with pytest.raises(ValueError):
        ThresholdStrategy.parse("bogus")
    with pytest.raises(ValueError):
        fixed(0)
    with pytest.raises(ValueError):
        ThresholdStrategy("median", 3)


def test_resolve_threshold_fixed_passthrough():
    assert resolve_threshold(fixed(7), None) == 7


def test_resolve_threshold_average_rounds_half_up():
    path3 = Graph.from_edges(3, [(0, 1), (1, 2)])
    assert resolve_threshold(AVERAGE, degree_stats(path3)) == 1  # 4/3 -> 1
    k4_minus = Graph.from_edges(4, K4_MINUS_EDGES)
    assert resolve_threshold(AVERAGE, degree_stats(k4_minus)) == 3  # 2.5 -> 3


def test_resolve_threshold_median_clamps_to_one():
    star = Graph.from_edges(4, [(0, 1), (0, 2), (0, 3)])
    assert resolve_threshold(MEDIAN, degree_stats(star)) == 1


def test_resolve_threshold_mode_requires_definition():
    single = Graph.from_edges(2, [(0, 1)])
    with pytest.raises(ValueError, match="d_mode undefined"):
        resolve_threshold(MODE, degree_stats(single))
    assert resolve_threshold(fixed(2), degree_stats(single)) == 2


def test_single_edge_always_merges():
    g = Graph.from_edges(2, [(0, 1)])
    for d in (1, 2, 5):
        for seed in range(4):
            part = run(g, shuffle(1, seed), d)
            assert labels_as_partition(part.labels) == frozenset(
                [frozenset({0, 1})]
            )


def test_triangle_merges_for_all_order_flip_combinations(triangle):
    whole = frozenset([frozenset({0, 1, 2})])
    combos = 0
    for perm, flips in all_order_flip_streams(3):
        part = run(triangle, stream_from(perm, flips), 2)
        assert labels_as_partition(part.labels) == whole
        combos += 1
    assert combos == 48


def test_matches_reference_on_random_streams():
    for seed in range(20):
        g = gnp_graph(15, 0.3, seed)
        stream = shuffle(g.m, seed + 1000)
        for d in (1, 2, 4):
            got = run(g, stream, d).labels
            want = reference_pass(
                g.n, oriented_edges(g.edges.tolist(), stream.order, stream.flip), d
            )
            assert got == want


def test_exhaustive_equivalence_small(square):
    edges = square.edges.tolist()
    for perm, flips in all_order_flip_streams(square.m):
        got = run(square, stream_from(perm, flips), 2).labels
        assert got == reference_pass(4, oriented_edges(edges, perm, flips), 2)


def test_d1_communities_have_at_most_two_nodes():
    for seed in range(15):
        g = gnp_graph(25, 0.3, seed)
        for s in spawn_seeds(seed, 4):
            cover = extract_communities(run(g, shuffle(g.m, s), 1))
            assert max(len(grp) for grp in cover.groups) <= 2


def test_stream_length_contract():
    g = Graph.from_edges(3, TRIANGLE_EDGES)
    with pytest.raises(ValueError, match="stream covers"):
        run(g, shuffle(2, 0), 2)


def test_threshold_must_be_positive(triangle):
    with pytest.raises(ValueError):
        run(triangle, shuffle(3, 0), 0)


def test_run_is_deterministic(two_triangles):
    a = run(two_triangles, shuffle(7, 42), 2).labels
    b = run(two_triangles, shuffle(7, 42), 2).labels
    assert a == b


def test_state_is_two_length_n_integer_arrays():
    g = gnp_graph(30, 0.2, 3)
    state = run_state(g, shuffle(g.m, 9), 2)
    assert {f.name for f in dataclasses.fields(ScodaState)} == {"d", "c", "threshold"}
    assert len(state.d) == g.n
    assert len(state.c) == g.n
    assert all(isinstance(x, int) for x in state.d)
    assert all(isinstance(x, int) for x in state.c)


def test_final_degrees_match_graph():
    g = gnp_graph(30, 0.25, 5)
    state = run_state(g, shuffle(g.m, 11), 3)
    assert state.d == g.degrees().tolist()
    assert sum(state.d) == 2 * g.m


def test_fresh_state_initialization():
    state = ScodaState.fresh(4, 2)
    assert state.d == [0, 0, 0, 0]
    assert state.c == [0, 1, 2, 3]
    assert state.threshold == 2


def test_labels_stay_in_range():
    g = gnp_graph(40, 0.15, 8)
    part = run(g, shuffle(g.m, 21), 2)
    assert all(0 <= label < g.n for label in part.labels)


def test_merge_locality_one_edge_touches_two_labels(two_triangles):
    # the reference steps show each arrival changes at most the two endpoint
    # labels; equivalence tests tie the implementation to this reference
    stream = shuffle(7, 5)
    ordered = oriented_edges(two_triangles.edges.tolist(), stream.order, stream.flip)
    prev = list(range(6))
    for (u, v), snap in zip(ordered, reference_steps(6, ordered, 2)):
        changed = {i for i in range(6) if snap[i] != prev[i]}
        assert changed <= {u, v}
        prev = snap


def test_transfer_recording_matches_plain_run(two_triangles):
    for seed in range(10):
        stream = shuffle(7, seed)
        plain = run(two_triangles, stream, 2).labels
        part, transfer = run_recording_transfers(two_triangles, stream, 2)
        assert part.labels == plain
        assert transfer.dtype == bool and len(transfer) == 7
        # transfers are exactly the arrivals with both updated degrees <= D
        ordered = oriented_edges(
            two_triangles.edges.tolist(), stream.order, stream.flip
        )
        d = [0] * 6
        expected = np.zeros(7, dtype=bool)
        for pos, (u, v) in enumerate(ordered):
            d[u] += 1
            d[v] += 1
            expected[stream.order[pos]] = d[u] <= 2 and d[v] <= 2
        assert transfer.tolist() == expected.tolist()


def test_run_parallel_single_worker_identical(two_triangles):
    stream = shuffle(7, 77)
    assert (
        run_parallel(two_triangles, stream, 2, 1).labels
        == run(two_triangles, stream, 2).labels
    )


def test_run_parallel_triangle_any_workers(triangle):
    whole = frozenset([frozenset({0, 1, 2})])
    for workers in (1, 2, 3):
        for seed in range(5):
            part = run_parallel(triangle, shuffle(3, seed), 2, workers)
            assert labels_as_partition(part.labels) == whole


def test_run_parallel_rejects_zero_workers(triangle):
    with pytest.raises(ValueError):
        run_parallel(triangle, shuffle(3, 0), 2, 0)


def test_extract_groups_and_min_size():
    from scoda import Partition

    p = Partition(labels=[0, 0, 2])
    cover = extract_communities(p, 1)
    assert [sorted(g) for g in cover.groups] == [[0, 1], [2]]
    assert cover.dropped == 0

    cover2 = extract_communities(p, 2)
    assert [sorted(g) for g in cover2.groups] == [[0, 1]]
    assert cover2.dropped == 1

    all_single = Partition(labels=[0, 1, 2])
    cover3 = extract_communities(all_single, 2)
    assert cover3.groups == []
    assert cover3.dropped == 3

    with pytest.raises(ValueError):
        extract_communities(p, 0)


def test_singleton_count():
    from scoda import Partition

    assert Partition(labels=[0, 0, 2, 3]).singleton_count == 2
