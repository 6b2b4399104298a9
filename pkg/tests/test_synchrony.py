import random

import pytest

from synckit.errors import NotBalanced, NotInLattice, NotTypeRefining, TooLarge
from synckit.monoid import IntegerAdd, MonoidFamily
from synckit.network import Network
from synckit.partition import (
    Partition,
    join,
    meet,
    parse_partition,
    quotient_partition,
    refines,
)
from synckit.synchrony import (
    cir_balanced,
    enumerate_balanced,
    is_balanced,
    is_exo_balanced,
    lattice_meet,
    lattice_quotient,
    quotient_network,
    type_refining_partitions,
)

from conftest import fixture_net
from oracles import (
    oracle_balanced,
    oracle_cir,
    random_balanced_lift,
    random_network,
    random_type_refinement,
)


def same_structure(a: Network, b: Network) -> bool:
    return (
        a.cell_types == b.cell_types
        and a.adjacency == b.adjacency
        and a.monoids == b.monoids
    )


class TestIsBalanced:
    def test_triangle_quotient_matrix(self, triangle):
        cert = is_balanced(triangle, parse_partition("12/3", triangle.cell_ids))
        assert cert is not None
        assert cert.quotient_matrix == ((1, 1), (2, 1))

    def test_trivial_partition_quotient_is_adjacency(self, any_fixture):
        net = any_fixture
        cert = is_balanced(net, Partition.trivial(net.n_cells))
        assert cert is not None
        assert cert.quotient_matrix == net.adjacency

    def test_type_mixing_rejected(self, triangle):
        with pytest.raises(NotTypeRefining):
            is_balanced(triangle, parse_partition("13/2", triangle.cell_ids))

    def test_agrees_with_matrix_oracle(self):
        rng = random.Random(11)
        for _ in range(150):
            net = random_network(rng, max_cells=6)
            p = random_type_refinement(rng, net)
            assert (is_balanced(net, p) is not None) == oracle_balanced(net, p)


class TestQuotientNetwork:
    def test_triangle_two_cell_quotient(self, triangle):
        cert = is_balanced(triangle, parse_partition("12/3", triangle.cell_ids))
        q = quotient_network(triangle, cert)
        assert q.cell_ids == ("12", "3")
        assert q.cell_types == (1, 2)
        # merged cell receives one of each color; hub receives two merged, one of itself
        assert q.adjacency == ((1, 1), (2, 1))

    def test_quotient_over_trivial_is_same_network(self, any_fixture):
        net = any_fixture
        cert = is_balanced(net, Partition.trivial(net.n_cells))
        assert same_structure(quotient_network(net, cert), net)

    def test_cancelled_pair_leaves_no_edge(self):
        net = fixture_net("cancel_fan")
        cert = is_balanced(net, parse_partition("12/3/4", net.cell_ids))
        q = quotient_network(net, cert)
        merged = q.cell_ids.index("12")
        receiver = q.cell_ids.index("3")
        assert q.adjacency[receiver][merged] == 0


class TestCir:
    def test_triangle_type_partition_already_balanced(self, triangle):
        types = triangle.type_partition()
        assert cir_balanced(triangle, types) == types
        assert oracle_cir(triangle, types) == types

    def test_trivial_fixed(self, any_fixture):
        net = any_fixture
        bot = Partition.trivial(net.n_cells)
        assert cir_balanced(net, bot) == bot

    def test_unbalanced_input_strictly_refined(self):
        rng = random.Random(21)
        seen = 0
        while seen < 40:
            net = random_network(rng, max_cells=6)
            p = random_type_refinement(rng, net)
            if is_balanced(net, p) is not None:
                continue
            seen += 1
            out = cir_balanced(net, p)
            assert refines(out, p) and out != p

    def test_matches_brute_force(self):
        rng = random.Random(31)
        for _ in range(60):
            net = random_network(rng, max_cells=6)
            for p in (net.type_partition(), random_type_refinement(rng, net)):
                assert cir_balanced(net, p) == oracle_cir(net, p)

    def test_idempotent_and_monotone(self):
        rng = random.Random(41)
        for _ in range(60):
            net = random_network(rng, max_cells=6)
            a = random_type_refinement(rng, net)
            b = join(a, random_type_refinement(rng, net))
            b = meet(b, net.type_partition())
            a = meet(a, b)
            ca, cb = cir_balanced(net, a), cir_balanced(net, b)
            assert cir_balanced(net, ca) == ca
            assert refines(ca, cb)


class TestEnumerate:
    def test_driven_chain_elements(self):
        net = fixture_net("driven_chain")
        lattice = enumerate_balanced(net)
        expected = {
            parse_partition(t, net.cell_ids)
            for t in ("1/2/3/4", "13/2/4", "13/24")
        }
        assert set(lattice.elements) == expected
        assert lattice.elements[lattice.bottom] == Partition.trivial(4)
        assert lattice.elements[lattice.top] == parse_partition("13/24", net.cell_ids)

    def test_all_distinct_types_only_trivial(self):
        net = Network(
            ("a", "b", "c"),
            (1, 2, 3),
            ((0, 1, 1), (1, 0, 1), (1, 1, 0)),
            MonoidFamily(IntegerAdd()),
        )
        lattice = enumerate_balanced(net)
        assert lattice.elements == (Partition.trivial(3),)

    def test_hub_fixture_contains_stated_elements(self):
        net = fixture_net("twin_cycles_hub")
        lattice = enumerate_balanced(net)
        for text in ("12/3/45", "12/345", "1/25/34", "125/34", "12345"):
            assert parse_partition(text, net.cell_ids) in lattice.elements

    def test_cap_enforced(self):
        rng = random.Random(5)
        net = random_network(rng, n=5)
        with pytest.raises(TooLarge):
            enumerate_balanced(net, max_cells=4)
        enumerate_balanced(net, max_cells=5)

    def test_env_cap(self, monkeypatch):
        rng = random.Random(6)
        net = random_network(rng, n=4)
        monkeypatch.setenv("SYNCKIT_MAX_CELLS", "3")
        with pytest.raises(TooLarge):
            enumerate_balanced(net)
        monkeypatch.setenv("SYNCKIT_MAX_CELLS", "12")
        enumerate_balanced(net)

    def test_join_closure(self):
        rng = random.Random(51)
        for _ in range(30):
            net = random_network(rng, max_cells=6)
            lattice = enumerate_balanced(net)
            for b1 in lattice.elements:
                for b2 in lattice.elements:
                    assert join(b1, b2) in lattice.elements

    def test_cover_edges_are_transitive_reduction(self):
        net = fixture_net("twin_cycles_hub")
        lattice = enumerate_balanced(net)
        for i, j in lattice.cover_edges:
            assert refines(lattice.elements[i], lattice.elements[j])
            for k in range(len(lattice.elements)):
                if k in (i, j):
                    continue
                between = refines(lattice.elements[i], lattice.elements[k]) and refines(
                    lattice.elements[k], lattice.elements[j]
                )
                assert not between


class TestLatticeMeet:
    def test_idempotent_and_bottom(self, triangle):
        types = triangle.type_partition()
        bot = Partition.trivial(3)
        assert lattice_meet(triangle, types, types) == types
        assert lattice_meet(triangle, bot, types) == bot

    def test_requires_balanced(self):
        net = fixture_net("edge_pair")
        with pytest.raises(NotBalanced):
            lattice_meet(
                net,
                parse_partition("12", net.cell_ids),
                Partition.trivial(2),
            )

    def test_greatest_lower_bound_in_lattice(self):
        rng = random.Random(61)
        for _ in range(40):
            net = random_network(rng, max_cells=7)
            lattice = enumerate_balanced(net)
            b1 = rng.choice(lattice.elements)
            b2 = rng.choice(lattice.elements)
            met = lattice_meet(net, b1, b2)
            lowers = [
                p for p in lattice.elements if refines(p, b1) and refines(p, b2)
            ]
            best = max(lowers, key=lambda p: [refines(q, p) for q in lowers].count(True))
            assert all(refines(q, met) for q in lowers)
            assert met in lowers
            assert met == best


class TestLatticeQuotient:
    def test_by_bottom_is_identity(self):
        net = fixture_net("driven_chain")
        lattice = enumerate_balanced(net)
        assert lattice_quotient(lattice, Partition.trivial(4)) == lattice

    def test_by_top_is_single_element(self):
        net = fixture_net("driven_chain")
        lattice = enumerate_balanced(net)
        top = lattice.elements[lattice.top]
        quotient = lattice_quotient(lattice, top)
        assert len(quotient.elements) == 1
        assert quotient.elements[0] == Partition.trivial(top.rank)

    def test_membership_required(self):
        net = fixture_net("driven_chain")
        lattice = enumerate_balanced(net)
        with pytest.raises(NotInLattice):
            lattice_quotient(lattice, parse_partition("12/34", net.cell_ids))

    def test_matches_quotient_network_lattice(self):
        net = fixture_net("two_sources_pair")
        lattice = enumerate_balanced(net)
        anchor = parse_partition("1/2/34", net.cell_ids)
        cert = is_balanced(net, anchor)
        quotient_lat = lattice_quotient(lattice, anchor)
        direct = enumerate_balanced(quotient_network(net, cert))
        assert quotient_lat == direct


class TestLatticeQuotientLaw:
    def test_quotient_lattice_equals_lattice_of_quotient(self):
        rng = random.Random(71)
        for i in range(25):
            net = (
                random_balanced_lift(rng, max_cells=6)[0]
                if i % 2
                else random_network(rng, max_cells=6)
            )
            lattice = enumerate_balanced(net)
            for anchor in lattice.elements:
                cert = is_balanced(net, anchor)
                lhs = set(lattice_quotient(lattice, anchor).elements)
                rhs = set(enumerate_balanced(quotient_network(net, cert)).elements)
                assert lhs == rhs

    def test_lift_partition_is_balanced(self):
        rng = random.Random(72)
        for _ in range(40):
            net, lifted = random_balanced_lift(rng)
            assert is_balanced(net, lifted) is not None

    def test_quotient_of_quotient(self):
        rng = random.Random(81)
        done = 0
        while done < 25:
            net, _ = random_balanced_lift(rng, max_cells=6)
            lattice = enumerate_balanced(net)
            pairs = [
                (a, b)
                for a in lattice.elements
                for b in lattice.elements
                if a != b and refines(a, b)
            ]
            if not pairs:
                continue
            done += 1
            a, b = rng.choice(pairs)
            cert_a = is_balanced(net, a)
            first = quotient_network(net, cert_a)
            step = quotient_partition(b, a)
            cert_step = is_balanced(first, step)
            assert cert_step is not None  # coarsening stays balanced on the quotient
            via_two = quotient_network(first, cert_step)
            direct = quotient_network(net, is_balanced(net, b))
            assert same_structure(via_two, direct)

    def test_cir_commutes_with_quotient(self):
        rng = random.Random(91)
        done = 0
        while done < 25:
            net = random_network(rng, max_cells=6)
            lattice = enumerate_balanced(net)
            anchor = rng.choice(lattice.elements)
            cert = is_balanced(net, anchor)
            quotient = quotient_network(net, cert)
            upper = join(anchor, random_type_refinement(rng, net))
            if not refines(upper, net.type_partition()):
                continue
            done += 1
            lhs = cir_balanced(quotient, quotient_partition(upper, anchor))
            rhs = quotient_partition(cir_balanced(net, upper), anchor)
            assert lhs == rhs


class TestExoBalanced:
    def test_balanced_implies_exo(self):
        rng = random.Random(101)
        for _ in range(25):
            net = random_network(rng, max_cells=6)
            for b in enumerate_balanced(net).elements:
                assert is_exo_balanced(net, b)

    def test_directed_pair_single_color(self):
        net = fixture_net("edge_pair")
        one = parse_partition("12", net.cell_ids)
        assert is_balanced(net, one) is None
        assert is_exo_balanced(net, one)

    def test_triangle_hub_partition(self, triangle):
        assert is_exo_balanced(triangle, parse_partition("12/3", triangle.cell_ids))

    def test_rejects_type_mixing(self, triangle):
        with pytest.raises(NotTypeRefining):
            is_exo_balanced(triangle, parse_partition("13/2", triangle.cell_ids))

    def test_off_color_difference_fails(self):
        # two cells of one color fed differently from a third color
        net = Network(
            ("1", "2", "3"),
            (1, 1, 1),
            ((0, 0, 1), (0, 0, 2), (0, 0, 0)),
            MonoidFamily(IntegerAdd()),
        )
        assert not is_exo_balanced(net, parse_partition("12/3", net.cell_ids))


def test_type_refining_enumeration_counts():
    # two types with 2 and 3 cells: bell(2) * bell(3) candidates
    net = Network(
        ("1", "2", "3", "4", "5"),
        (1, 1, 2, 2, 2),
        tuple(tuple(0 for _ in range(5)) for _ in range(5)),
        MonoidFamily(IntegerAdd()),
    )
    assert sum(1 for _ in type_refining_partitions(net)) == 2 * 5
