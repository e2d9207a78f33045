from fractions import Fraction

import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from ribboncalc import permutations as perms
from ribboncalc.errors import (
    BadMetric,
    DisconnectedSubset,
    DomainMismatch,
    EmptySubset,
    FullSubset,
    NoSuchEdge,
    NotPermissible,
)
from ribboncalc.ribbon import (
    HOLE,
    VERTEX,
    Marking,
    canonical_form,
    contract_edge,
    genus,
    mark_all_holes,
    validate,
)
from ribboncalc.stable import (
    CONTRACTIBLE,
    SEMISTABLE,
    STABLE_BEARING,
    SubsetClass,
    build_stable,
    classify_subset,
    exceptional_correspondence,
    order_is_admissible,
    quotient,
    stable_to_json,
    subgraph,
)

TORUS_CELL = validate([(1, 2, 3), (4, 5, 6)], [(1, 4), (2, 5), (3, 6)])
THETA = validate([(1, 2, 3), (4, 5, 6)], [(1, 4), (2, 6), (3, 5)])
# two loops joined by a bridge; genus 0, holes (1), (2,3,6,4), (5)
DUMBBELL = validate([(1, 2, 3), (4, 5, 6)], [(1, 2), (3, 4), (5, 6)])
# a torus block on sides 1..6 hanging off a fourth edge (7,8); genus 1, two holes
HANDLE = validate([(1, 2, 3, 7), (4, 5, 6, 8)], [(1, 4), (2, 5), (3, 6), (7, 8)])
TORUS_BLOCK = frozenset({(1, 4), (2, 5), (3, 6)})


def random_graph(data, max_edges=4):
    n_edges = data.draw(st.integers(1, max_edges), label="edges")
    n = 2 * n_edges
    one_line = data.draw(st.permutations(range(1, n + 1)), label="sigma0")
    s0 = {i + 1: one_line[i] for i in range(n)}
    shuffled = data.draw(st.permutations(range(1, n + 1)), label="matching")
    s1 = {}
    for i in range(0, n, 2):
        a, b = shuffled[i], shuffled[i + 1]
        s1[a], s1[b] = b, a
    g = validate(s0, s1)
    assume(g.is_connected())
    return g


class TestSubgraph:
    def test_theta_single_edge_is_a_segment(self):
        sub, exc = subgraph(THETA, [(1, 4)])
        assert sub.n_vertices() == 2
        assert sub.n_edges() == 1
        assert exc == [frozenset({1, 4})]

    def test_full_subset_is_the_graph_itself(self):
        sub, exc = subgraph(THETA, THETA.edges())
        assert sub.sigma0 == THETA.sigma0
        assert sub.sigma1 == THETA.sigma1
        assert exc == []

    def test_torus_circle_has_two_scars(self):
        sub, exc = subgraph(TORUS_CELL, [(1, 4), (2, 5)])
        assert sub.n_holes() == 2
        assert exc == [frozenset({1, 5}), frozenset({2, 4})]

    def test_empty_subset_rejected(self):
        with pytest.raises(EmptySubset):
            subgraph(THETA, [])

    def test_unknown_edge_rejected(self):
        with pytest.raises(NoSuchEdge):
            subgraph(THETA, [(1, 5)])


class TestQuotient:
    def test_empty_subset_is_the_identity(self):
        quo, exc = quotient(THETA, [])
        assert quo is THETA
        assert exc == []

    def test_full_subset_rejected(self):
        with pytest.raises(FullSubset):
            quotient(THETA, THETA.edges())

    def test_theta_by_one_edge_merges_the_vertices(self):
        quo, exc = quotient(THETA, [(1, 4)])
        assert quo.n_vertices() == 1
        assert exc == [frozenset({2, 3, 5, 6})]
        assert genus(quo) == 0

    def test_pinching_a_torus_leaves_a_sphere(self):
        quo, exc = quotient(TORUS_CELL, [(1, 4), (2, 5)])
        assert genus(quo) == 0
        assert exc == [frozenset({3}), frozenset({6})]

    def test_agrees_with_edge_contraction(self):
        quo, _ = quotient(THETA, [(1, 4)])
        assert canonical_form(quo) == canonical_form(contract_edge(THETA, (1, 4)))


class TestExceptionalCorrespondence:
    def test_theta_edge(self):
        pairs = exceptional_correspondence(THETA, [(1, 4)])
        assert pairs == [(frozenset({1, 4}), frozenset({2, 3, 5, 6}))]

    def test_dumbbell_loop_and_bridge(self):
        pairs = exceptional_correspondence(DUMBBELL, [(1, 2), (3, 4)])
        assert pairs == [(frozenset({2, 3, 4}), frozenset({5, 6}))]

    def test_handle_torus_block(self):
        pairs = exceptional_correspondence(HANDLE, TORUS_BLOCK)
        assert pairs == [(frozenset({1, 2, 3, 4, 5, 6}), frozenset({7, 8}))]

    @settings(max_examples=50, deadline=None)
    @given(st.data())
    def test_random_subsets_match_up(self, data):
        g = random_graph(data)
        edges = g.edges()
        assume(len(edges) >= 2)
        k = data.draw(st.integers(1, len(edges) - 1), label="size")
        z = data.draw(
            st.lists(st.sampled_from(edges), min_size=k, max_size=k, unique=True),
            label="subset",
        )
        sub, exc_holes = subgraph(g, z)
        quo, exc_verts = quotient(g, z)
        assert len(sub.sides) + len(quo.sides) == len(g.sides)
        pairs = exceptional_correspondence(g, z)
        assert len(pairs) == len(exc_holes) == len(exc_verts)

    @settings(max_examples=50, deadline=None)
    @given(st.data())
    def test_quotient_of_one_edge_is_contraction(self, data):
        g = random_graph(data)
        non_loops = [e for e in g.edges() if len(g.edges()) > 1 and not _is_loop(g, e)]
        assume(non_loops)
        e = data.draw(st.sampled_from(non_loops), label="edge")
        quo, _ = quotient(g, [e])
        assert canonical_form(quo) == canonical_form(contract_edge(g, e))


def _is_loop(g, e):
    a, b = e
    return b in perms.orbit_of(g.sigma0, a)


class TestClassifySubset:
    def test_single_edge_is_contractible(self):
        assert classify_subset(THETA, None, [(1, 4)]) == SubsetClass(CONTRACTIBLE)

    def test_two_parallel_edges_make_a_circle(self):
        got = classify_subset(TORUS_CELL, None, [(1, 4), (2, 5)])
        assert got == SubsetClass(SEMISTABLE)

    def test_loop_plus_bridge_is_still_a_circle(self):
        got = classify_subset(DUMBBELL, None, [(1, 2), (3, 4)])
        assert got == SubsetClass(SEMISTABLE)

    def test_torus_block_keeps_itself_as_core(self):
        got = classify_subset(HANDLE, None, TORUS_BLOCK)
        assert got == SubsetClass(STABLE_BEARING, TORUS_BLOCK)

    def test_stable_core_drops_unmarked_tails(self):
        g = validate(
            [(1, 2, 3, 7), (4, 5, 6, 8, 9), (10,)],
            [(1, 4), (2, 5), (3, 6), (7, 8), (9, 10)],
        )
        got = classify_subset(g, None, [(1, 4), (2, 5), (3, 6), (9, 10)])
        assert got == SubsetClass(STABLE_BEARING, TORUS_BLOCK)

    def test_marked_vertex_upgrades_a_tree(self):
        marks = Marking(
            HANDLE,
            {
                "p": (HOLE, frozenset({1, 8, 3, 5})),
                "q": (HOLE, frozenset({2, 4, 7, 6})),
                "y": (VERTEX, frozenset({1, 2, 3, 7})),
                "z": (VERTEX, frozenset({4, 5, 6, 8})),
            },
        )
        got = classify_subset(HANDLE, marks, [(7, 8)])
        assert got == SubsetClass(STABLE_BEARING, frozenset({(7, 8)}))

    def test_one_marked_vertex_keeps_a_tree_contractible(self):
        marks = Marking(
            HANDLE,
            {
                "p": (HOLE, frozenset({1, 8, 3, 5})),
                "q": (HOLE, frozenset({2, 4, 7, 6})),
                "z": (VERTEX, frozenset({4, 5, 6, 8})),
            },
        )
        assert classify_subset(HANDLE, marks, [(7, 8)]) == SubsetClass(CONTRACTIBLE)

    def test_disconnected_subset_rejected(self):
        with pytest.raises(DisconnectedSubset):
            classify_subset(DUMBBELL, None, [(1, 2), (5, 6)])

    def test_core_carrying_kinds_reject_mismatched_payloads(self):
        with pytest.raises(DomainMismatch):
            SubsetClass(CONTRACTIBLE, frozenset({(1, 4)}))
        with pytest.raises(DomainMismatch):
            SubsetClass(STABLE_BEARING)


def _glue_component_count(data):
    n = len(data.components)
    parent = list(range(n))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for a, b in data.iota.items():
        ra, rb = find(a[0]), find(b[0])
        if ra != rb:
            parent[ra] = rb
    return len({find(i) for i in range(n)})


def _total_genus(data):
    """Component genera plus the cycle rank of the gluing graph."""
    pieces = sum(genus(c) for c in data.components)
    rank = len(data.iota) // 2 - len(data.components) + _glue_component_count(data)
    return pieces + rank


class TestBuildStable:
    def test_trivial_sequence_returns_the_graph(self):
        m = mark_all_holes(THETA, ["a", "b", "c"])
        data = build_stable(THETA, m, [THETA.edges()])
        assert len(data.components) == 1
        assert data.order == (0,)
        assert data.iota == {}
        assert data.markings[0] == dict(m.targets)
        assert sum(data.lengths[0].values()) == 1

    def test_handle_spawns_a_torus_component(self):
        m = mark_all_holes(HANDLE, ["p", "q"])
        data = build_stable(HANDLE, m, [HANDLE.edges(), TORUS_BLOCK])
        assert data.order == (0, 1)
        assert genus(data.components[0]) == 0
        assert genus(data.components[1]) == 1
        assert data.markings[0] == {
            "p": (HOLE, frozenset({8})),
            "q": (HOLE, frozenset({7})),
        }
        assert data.markings[1] == {}
        [(a, b)] = [(k, v) for k, v in data.iota.items() if k[0] == 0]
        assert a == (0, VERTEX, frozenset({7, 8}))
        assert b == (1, HOLE, frozenset({1, 2, 3, 4, 5, 6}))
        assert _total_genus(data) == 1

    def test_pinched_torus_discards_the_sphere(self):
        m = mark_all_holes(TORUS_CELL, ["p"])
        data = build_stable(TORUS_CELL, m, [TORUS_CELL.edges(), [(1, 4), (2, 5)]])
        assert data.order == (0,)
        assert genus(data.components[0]) == 0
        assert data.iota == {
            (0, VERTEX, frozenset({3})): (0, VERTEX, frozenset({6})),
            (0, VERTEX, frozenset({6})): (0, VERTEX, frozenset({3})),
        }
        assert _total_genus(data) == 1

    def test_bridge_collapse_merges_the_vertices(self):
        m = mark_all_holes(HANDLE, ["p", "q"])
        data = build_stable(HANDLE, m, [HANDLE.edges(), [(7, 8)]])
        assert data.order == (0,)
        assert data.components[0].n_vertices() == 1
        assert data.markings[0] == {
            "p": (HOLE, frozenset({1, 3, 5})),
            "q": (HOLE, frozenset({2, 4, 6})),
        }
        assert data.iota == {}

    def test_marked_vertex_rides_a_tree_collapse(self):
        m = Marking(
            HANDLE,
            {
                "p": (HOLE, frozenset({1, 8, 3, 5})),
                "q": (HOLE, frozenset({2, 4, 7, 6})),
                "z": (VERTEX, frozenset({4, 5, 6, 8})),
            },
        )
        data = build_stable(HANDLE, m, [HANDLE.edges(), [(7, 8)]])
        assert data.markings[0]["z"] == (VERTEX, frozenset({1, 2, 3, 4, 5, 6}))

    def test_circle_around_a_marked_hole_demotes_the_label(self):
        m = mark_all_holes(DUMBBELL, ["a", "b", "c"])
        data = build_stable(DUMBBELL, m, [DUMBBELL.edges(), [(1, 2), (3, 4)]])
        assert data.order == (0,)
        assert data.markings[0] == {
            "a": (VERTEX, frozenset({5, 6})),
            "b": (HOLE, frozenset({6})),
            "c": (HOLE, frozenset({5})),
        }
        assert data.iota == {}
        assert data.perimeter("a") == 0

    def test_collapse_zone_tail_is_pruned_and_bivalents_smoothed(self):
        g = validate(
            [(1, 2, 3, 7), (4, 5, 6, 8), (9, 10)],
            [(1, 4), (2, 5), (3, 9), (10, 6), (7, 8)],
        )
        m = mark_all_holes(g, ["p", "q"])
        data = build_stable(g, m, [g.edges(), [(1, 4), (2, 5), (3, 9), (10, 6)]])
        assert data.order == (0, 1)
        spawned = data.components[1]
        assert spawned.edges() == [(1, 4), (2, 5), (3, 6)]
        assert canonical_form(spawned) == canonical_form(TORUS_CELL)
        assert _total_genus(data) == genus(g)

    def test_circle_around_an_inherited_special_hole_reroutes_the_pairing(self):
        g = validate(
            [(1, 9, 2, 7), (3, 4, 8), (10,)],
            [(1, 4), (2, 3), (7, 8), (9, 10)],
        )
        m = mark_all_holes(g, ["a", "b", "c"])
        data = build_stable(
            g, m, [g.edges(), [(1, 4), (2, 3), (7, 8)], [(1, 4), (2, 3)]]
        )
        assert data.order == (0, 1)
        assert data.markings[0] == {"a": (HOLE, frozenset({9, 10}))}
        assert data.markings[1] == {
            "b": (HOLE, frozenset({8})),
            "c": (HOLE, frozenset({7})),
        }
        assert data.iota[(0, VERTEX, frozenset({9}))] == (1, VERTEX, frozenset({7, 8}))
        assert _total_genus(data) == 0

    def test_two_stage_pinch_inside_the_spawned_torus(self):
        m = mark_all_holes(HANDLE, ["p", "q"])
        data = build_stable(
            HANDLE, m, [HANDLE.edges(), TORUS_BLOCK, [(1, 4), (2, 5)]]
        )
        assert data.order == (0, 1)
        assert [genus(c) for c in data.components] == [0, 0]
        vertex_ends = [
            a for a, b in data.iota.items() if a[1] == VERTEX and b[1] == VERTEX
        ]
        assert len(vertex_ends) == 2
        assert _total_genus(data) == 1

    def test_custom_metric_on_composite_edges(self):
        g = validate(
            [(1, 2, 3, 7), (4, 5, 6, 8), (9, 10)],
            [(1, 4), (2, 5), (3, 9), (10, 6), (7, 8)],
        )
        m = mark_all_holes(g, ["p", "q"])
        zseq = [g.edges(), [(1, 4), (2, 5), (3, 9), (10, 6)]]
        metrics = {
            (7, 8): 1,
            (1, 4): Fraction(1, 2),
            (2, 5): Fraction(1, 4),
            (3, 6): "1/4",
        }
        data = build_stable(g, m, zseq, metrics=metrics)
        assert data.lengths[1][(3, 6)] == Fraction(1, 4)

    def test_metric_must_sum_to_one_per_component(self):
        m = mark_all_holes(HANDLE, ["p", "q"])
        zseq = [HANDLE.edges(), TORUS_BLOCK]
        bad = {(7, 8): 1, (1, 4): 1, (2, 5): 1, (3, 6): 1}
        with pytest.raises(BadMetric):
            build_stable(HANDLE, m, zseq, metrics=bad)

    def test_metric_rejects_nonpositive_and_stray_edges(self):
        m = mark_all_holes(HANDLE, ["p", "q"])
        zseq = [HANDLE.edges(), TORUS_BLOCK]
        with pytest.raises(BadMetric):
            build_stable(
                HANDLE, m, zseq,
                metrics={(7, 8): 1, (1, 4): 0, (2, 5): 0, (3, 6): 1},
            )
        with pytest.raises(BadMetric):
            build_stable(
                HANDLE, m, zseq,
                metrics={
                    (7, 8): 1,
                    (1, 4): Fraction(1, 3),
                    (2, 5): Fraction(1, 3),
                    (3, 6): Fraction(1, 3),
                    (9, 9): 1,
                },
            )

    def test_sequence_must_start_with_everything(self):
        m = mark_all_holes(HANDLE, ["p", "q"])
        with pytest.raises(NotPermissible):
            build_stable(HANDLE, m, [TORUS_BLOCK])
        with pytest.raises(NotPermissible):
            build_stable(HANDLE, m, [])

    def test_stage_may_not_swallow_a_component(self):
        m = mark_all_holes(HANDLE, ["p", "q"])
        with pytest.raises(NotPermissible):
            build_stable(HANDLE, m, [HANDLE.edges(), HANDLE.edges()])

    def test_stage_must_stay_inside_the_previous_one(self):
        m = mark_all_holes(HANDLE, ["p", "q"])
        with pytest.raises(NotPermissible):
            build_stable(HANDLE, m, [HANDLE.edges(), TORUS_BLOCK, [(7, 8)]])

    @settings(max_examples=60, deadline=None)
    @given(st.data())
    def test_single_stage_bookkeeping(self, data):
        g = random_graph(data)
        edges = g.edges()
        assume(len(edges) >= 2)
        labels = [f"p{i}" for i in range(g.n_holes())]
        m = mark_all_holes(g, labels)
        k = data.draw(st.integers(1, len(edges) - 1), label="size")
        z = data.draw(
            st.lists(st.sampled_from(edges), min_size=k, max_size=k, unique=True),
            label="subset",
        )
        stable = build_stable(g, m, [edges, z])
        assert order_is_admissible(stable)
        assert _glue_component_count(stable) == 1
        assert _total_genus(stable) == genus(g)
        for lengths in stable.lengths:
            assert sum(lengths.values()) == 1
            assert all(v > 0 for v in lengths.values())
        for a, b in stable.iota.items():
            assert stable.iota[b] == a
            assert a != b
            assert not (a[1] == HOLE and b[1] == HOLE)


class TestOrderAdmissibility:
    def test_constructed_orders_pass(self):
        m = mark_all_holes(HANDLE, ["p", "q"])
        data = build_stable(HANDLE, m, [HANDLE.edges(), TORUS_BLOCK])
        assert order_is_admissible(data)

    def test_unmarked_hole_needs_a_lower_partner(self):
        m = mark_all_holes(HANDLE, ["p", "q"])
        data = build_stable(HANDLE, m, [HANDLE.edges(), TORUS_BLOCK])
        assert not order_is_admissible(data, (0, 0))
        assert not order_is_admissible(data, (1, 0))

    def test_orders_cannot_outrun_their_partners(self):
        m = mark_all_holes(HANDLE, ["p", "q"])
        data = build_stable(HANDLE, m, [HANDLE.edges(), TORUS_BLOCK])
        assert not order_is_admissible(data, (0, 2))

    def test_isolated_components_sit_at_order_zero(self):
        m = mark_all_holes(THETA, ["a", "b", "c"])
        data = build_stable(THETA, m, [THETA.edges()])
        assert order_is_admissible(data)
        assert not order_is_admissible(data, (1,))


class TestStableJson:
    def test_round_trippable_shape(self):
        m = mark_all_holes(HANDLE, ["p", "q"])
        data = build_stable(HANDLE, m, [HANDLE.edges(), TORUS_BLOCK])
        blob = stable_to_json(data)
        assert len(blob["components"]) == 2
        assert blob["components"][0]["order"] == 0
        assert blob["components"][1]["order"] == 1
        [pair] = blob["iota"]
        kinds = {pair[0]["kind"], pair[1]["kind"]}
        assert kinds == {"hole", "vertex"}
