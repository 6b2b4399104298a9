import random

import pytest

from synckit.connectivity import (
    all_in_reachability,
    condensation,
    cumulative_in,
    cumulative_in_k,
    in_neighborhood,
    in_reachability,
    rdc_decomposition,
    scc_decomposition,
)
from synckit.errors import UnknownCell
from synckit.monoid import IntegerAdd, MonoidFamily
from synckit.network import Network, parse_network
from synckit.partition import Partition, refines

from oracles import oracle_scc, random_network


class TestNeighborhoods:
    def test_chain_one_step(self, chain4):
        assert in_neighborhood(chain4, 2) == {1}

    def test_isolated_cell(self):
        net = parse_network(
            {"monoid": "int-add", "cells": [{"id": "x", "type": 1}], "edges": []}
        )
        assert in_neighborhood(net, 0) == frozenset()

    def test_cancelling_parallel_edges_remove_the_sender(self):
        net = parse_network({
            "monoid": "int-add",
            "cells": [{"id": "a", "type": 1}, {"id": "b", "type": 1}],
            "edges": [
                {"from": "a", "to": "b", "weight": 1},
                {"from": "a", "to": "b", "weight": -1},
            ],
        })
        assert in_neighborhood(net, 1) == frozenset()

    def test_unknown_cell(self, chain4):
        with pytest.raises(UnknownCell):
            in_neighborhood(chain4, 7)


class TestCumulative:
    def test_chain_examples(self, chain4):
        assert cumulative_in(chain4, 2) == {1, 2}
        assert cumulative_in_k(chain4, 2, 2) == {0, 1, 2}
        assert cumulative_in_k(chain4, 2, 3) == {0, 1, 2}  # fixed point
        assert cumulative_in_k(chain4, 0, 0) == {0}

    def test_monotone_and_stable(self, any_fixture):
        net = any_fixture
        for c in range(net.n_cells):
            prev = cumulative_in_k(net, c, 0)
            stabilized = None
            for k in range(1, net.n_cells + 2):
                cur = cumulative_in_k(net, c, k)
                assert prev <= cur
                if cur == prev and stabilized is None:
                    stabilized = cur
                if stabilized is not None:
                    assert cur == stabilized
                prev = cur


class TestReachability:
    def test_chain_examples(self, chain4):
        assert in_reachability(chain4, 0) == {0}
        assert cumulative_in_k(chain4, 3, 3) == in_reachability(chain4, 3) == {0, 1, 2, 3}
        chain_sets = [in_reachability(chain4, c) for c in range(4)]
        for earlier, later in zip(chain_sets, chain_sets[1:]):
            assert earlier < later

    def test_self_loop_only(self):
        net = parse_network({
            "monoid": "int-add",
            "cells": [{"id": "x", "type": 1}],
            "edges": [{"from": "x", "to": "x", "weight": 2}],
        })
        assert in_reachability(net, 0) == {0}

    def test_reachability_closure(self, any_fixture):
        net = any_fixture
        reach = [in_reachability(net, c) for c in range(net.n_cells)]
        for d in range(net.n_cells):
            for c in reach[d]:
                assert reach[c] <= reach[d]

    def test_table_matches_per_cell_queries(self, any_fixture):
        net = any_fixture
        table = all_in_reachability(net)
        for c in range(net.n_cells):
            assert table[c] == in_reachability(net, c)


class TestScc:
    def test_two_roots_blocks(self, two_roots):
        assert scc_decomposition(two_roots).blocks() == ((0, 1, 2), (3,), (4,), (5, 6))

    def test_dag_is_trivial(self, chain4):
        assert scc_decomposition(chain4) == Partition.trivial(4)

    def test_single_cycle_is_one_color(self):
        net = parse_network({
            "monoid": "int-add",
            "cells": [{"id": str(i), "type": 1} for i in range(1, 4)],
            "edges": [
                {"from": "1", "to": "2", "weight": 1},
                {"from": "2", "to": "3", "weight": 1},
                {"from": "3", "to": "1", "weight": 1},
            ],
        })
        assert scc_decomposition(net) == Partition.one_color(3)

    def test_against_mutual_reachability_oracle(self):
        rng = random.Random(2024)
        for _ in range(120):
            net = random_network(rng, max_cells=10, weights=(-1, 0, 0, 1, 2))
            assert scc_decomposition(net) == oracle_scc(net)


class TestCondensation:
    def test_two_roots_structure(self, two_roots):
        cond = condensation(two_roots)
        assert cond.dag_edges == {(0, 1), (0, 3), (2, 3)}
        assert cond.roots == {0, 2}

    def test_single_scc(self):
        net = parse_network({
            "monoid": "int-add",
            "cells": [{"id": "a", "type": 1}, {"id": "b", "type": 1}],
            "edges": [
                {"from": "a", "to": "b", "weight": 1},
                {"from": "b", "to": "a", "weight": 1},
            ],
        })
        cond = condensation(net)
        assert cond.dag_edges == frozenset()
        assert cond.roots == {0}

    def test_chain_path(self, chain4):
        cond = condensation(chain4)
        assert cond.scc_partition == Partition.trivial(4)
        assert cond.dag_edges == {(0, 1), (1, 2), (2, 3)}
        assert cond.roots == {0}

    def test_acyclic(self, any_fixture):
        cond = condensation(any_fixture)
        # DFS over block edges must find no cycle
        succ = {}
        for s, t in cond.dag_edges:
            succ.setdefault(s, []).append(t)
        state: dict[int, int] = {}

        def visit(v):
            state[v] = 1
            for w in succ.get(v, []):
                assert state.get(w, 0) != 1
                if state.get(w, 0) == 0:
                    visit(w)
            state[v] = 2

        for v in range(cond.scc_partition.rank):
            if state.get(v, 0) == 0:
                visit(v)


class TestRdc:
    def test_two_roots_example(self, two_roots):
        assert rdc_decomposition(two_roots).blocks() == ((0, 1, 2, 3), (4,), (5, 6))

    def test_single_scc_is_one_color(self):
        net = parse_network({
            "monoid": "int-add",
            "cells": [{"id": "a", "type": 1}, {"id": "b", "type": 1}],
            "edges": [
                {"from": "a", "to": "b", "weight": 1},
                {"from": "b", "to": "a", "weight": 1},
            ],
        })
        assert rdc_decomposition(net) == Partition.one_color(2)

    def test_two_disjoint_cycles(self):
        net = Network(
            ("1", "2", "3", "4"),
            (1, 1, 1, 1),
            ((0, 1, 0, 0), (1, 0, 0, 0), (0, 0, 0, 1), (0, 0, 1, 0)),
            MonoidFamily(IntegerAdd()),
        )
        assert rdc_decomposition(net).blocks() == ((0, 1), (2, 3))

    def test_scc_refines_rdc_and_root_bound(self):
        rng = random.Random(99)
        for _ in range(80):
            net = random_network(rng, max_cells=8, weights=(0, 0, 1, -1, 2))
            sccs = scc_decomposition(net)
            rdcs = rdc_decomposition(net)
            assert refines(sccs, rdcs)
            n_roots = len(condensation(net).roots)
            assert rdcs.rank <= 2 ** n_roots - 1
