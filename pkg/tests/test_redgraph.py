from fractions import Fraction

import networkx as nx
import pytest

from curve import ReductionTag, ReductionType
from errors import Disconnected, InputError, RangeError
from redgraph import (NodeField, Provenance, Rationality, ReductionGraph, beta_bound, beta_by_enumeration,
                      beta_from_hint, component_group, component_vertex, graph_for, group_exponent,
                      kodaira_beta, mu_chain, mu_nodal, mu_one_node, mu_three_nodes, one_node_graph,
                      parse_rationality, resistance, theta_graph, two_node_graph)


@pytest.mark.parametrize("m", range(1, 13))
def test_one_node_resistance(m):
    g = one_node_graph(m)
    for i in range(m + 1):
        assert resistance(g, "A", component_vertex("B", i, m, ends=("A", "A"))) == mu_one_node(m, i)


def test_two_node_resistance():
    m1, m2 = 4, 3
    g = two_node_graph(m1, m2)
    for i in range(m1 + 1):
        for j in range(m2 + 1):
            b = component_vertex("B", i, m1, ends=("A", "A"))
            c = component_vertex("C", j, m2, ends=("A", "A"))
            assert resistance(g, b, c) == mu_one_node(m1, i) + mu_one_node(m2, j)


@pytest.mark.parametrize("ms", [(1, 1, 1), (2, 1, 1), (3, 2, 2), (4, 3, 2), (5, 5, 1)])
def test_theta_resistance(ms):
    m1, m2, m3 = ms
    g = theta_graph(m1, m2, m3)
    for i in range(m1 + 1):
        for j in range(m2 + 1):
            b = component_vertex("B", i, m1)
            c = component_vertex("C", j, m2)
            assert resistance(g, b, c) == mu_three_nodes(m1, m2, m3, i, j)


@pytest.mark.slow
@pytest.mark.parametrize("m1", range(1, 13))
def test_two_node_resistance_exhaustive(m1):
    for m2 in range(1, 13):
        g = two_node_graph(m1, m2)
        rtype = ReductionType(ReductionTag.I_M1M2, (m1, m2))
        for i in range(m1 + 1):
            for j in range(m2 + 1):
                b = component_vertex("B", i, m1, ends=("A", "A"))
                c = component_vertex("C", j, m2, ends=("A", "A"))
                assert resistance(g, b, c) == mu_nodal(rtype, (i, j))


@pytest.mark.slow
@pytest.mark.parametrize("m1", range(1, 13))
def test_theta_resistance_exhaustive(m1):
    for m2 in range(1, m1 + 1):
        for m3 in range(1, m2 + 1):
            g = theta_graph(m1, m2, m3)
            rtype = ReductionType(ReductionTag.I_M1M2M3, (m1, m2, m3))
            chains = {"B": m1, "C": m2, "D": m3}
            for pair in ("BC", "CD", "DB"):
                first, second = pair
                for i in range(chains[first] + 1):
                    for j in range(chains[second] + 1):
                        u = component_vertex(first, i, chains[first])
                        v = component_vertex(second, j, chains[second])
                        assert resistance(g, u, v) == mu_nodal(rtype, (pair, i, j))


def test_resistance_of_a_single_path():
    g = graph_for(ReductionType.parse("[I_{0}-I_{0}-3]"))
    assert resistance(g, "A", "E") == 3
    assert resistance(g, "C1", "C1") == 0


def test_disconnected_graph():
    G = nx.MultiGraph()
    G.add_nodes_from(["A", "Z"])
    with pytest.raises(Disconnected):
        resistance(ReductionGraph(G), "A", "Z")
    with pytest.raises(InputError):
        resistance(ReductionGraph(G), "A", "missing")


def test_closed_form_ranges():
    assert mu_one_node(5, 2) == Fraction(6, 5)
    assert mu_one_node(0, 0) == 0
    with pytest.raises(RangeError):
        mu_one_node(3, 4)
    with pytest.raises(RangeError):
        mu_three_nodes(2, 1, 1, 0, 2)
    with pytest.raises(RangeError):
        mu_nodal(ReductionType.parse("[I_{2-1-1}]"), ("BD", 0, 0))


def test_mu_nodal_rotations():
    rtype = ReductionType.parse("[I_{2-1-1}]")
    assert mu_nodal(rtype, ("BC", 1, 0)) == Fraction(3, 5)
    assert mu_nodal(rtype, ("BC", 0, 0)) == 0
    assert mu_nodal(ReductionType.parse("[I_{3-2-0}]"), (1, 1)) == Fraction(2, 3) + Fraction(1, 2)


def test_chain_bounds():
    assert mu_chain(0, 0, 2, "A", "E", 1) == (4, 4)
    lower, upper = mu_chain(2, 0, 1, "B1", "E", 0)
    assert lower == resistance(graph_for(ReductionType.parse("[I_{2}-I_{0}-1]")), "B1", "E") + 1
    assert upper >= lower
    with pytest.raises(RangeError):
        mu_chain(0, 0, 2, "A", "E", 3)
    with pytest.raises(RangeError):
        mu_chain(0, 0, 2, "B1", "E", 0)


@pytest.mark.parametrize("label, beta", [
    ("[I_{10-9-8}]", Fraction(1145, 242)),
    ("[I_{4-3-2}]", Fraction(22, 13)),
    ("[I_{2-0-0}]", Fraction(1, 2)),
    ("[I_{2-2-2}]", Fraction(1)),
    ("[I_{2-1-1}]", Fraction(3, 5)),
    ("[I_{1-1-1}]", Fraction(1, 3)),
    ("[I_{2-1-0}]", Fraction(1, 2)),
])
def test_split_beta_is_the_largest_mu(label, beta):
    rtype = ReductionType.parse(label)
    bound = beta_bound(rtype, vdelta=30)
    assert bound.beta == beta
    assert bound.provenance == Provenance.GEOMETRIC
    assert beta_by_enumeration(rtype) == beta


def test_non_split_refinements():
    rtype = ReductionType.parse("[I_{2-2-2}]")
    rational = Rationality(three_nodes=NodeField.RATIONAL, curve_split=False)
    assert beta_bound(rtype, 6, rational).beta == 1
    assert beta_bound(rtype, 6, rational).provenance == Provenance.NODAL_EXACT
    cubic = Rationality(three_nodes=NodeField.CUBIC, curve_split=False)
    assert beta_bound(rtype, 6, cubic).beta == 0
    odd = ReductionType.parse("[I_{3-0-0}]")
    assert beta_bound(odd, 3, Rationality(split_or_even=(False,))).beta == 0
    assert beta_bound(odd, 3).beta == Fraction(4, 6)


def test_chain_and_unknown_beta():
    chain = beta_bound(ReductionType.parse("[I_{3}-I_{0}-1]"), vdelta=20)
    assert chain.beta == Fraction(11, 4)
    assert chain.provenance == Provenance.CHAIN_EXACT
    unknown = beta_bound(ReductionType(ReductionTag.UNKNOWN), vdelta=10)
    assert unknown.beta == Fraction(5, 2)
    assert unknown.provenance == Provenance.GENERIC_QUARTER


@pytest.mark.parametrize("label, group, exponent", [
    ("[I_{4-3-2}]", (26,), 26),
    ("[I_{10-9-8}]", (242,), 242),
    ("[I_{2-2-2}]", (2, 6), 6),
    ("[I_{2-1-0}]", (2,), 2),
    ("[I_{1-0-0}]", (), 1),
])
def test_component_group(label, group, exponent):
    rtype = ReductionType.parse(label)
    assert component_group(rtype) == group
    assert group_exponent(rtype) == exponent


@pytest.mark.parametrize("symbol, beta", [
    ("I0", 0), ("IV", Fraction(2, 3)), ("I4", 1), ("I3", Fraction(2, 3)), ("I1*", Fraction(5, 4)),
    ("III*", Fraction(3, 2)),
])
def test_kodaira_beta(symbol, beta):
    assert kodaira_beta(symbol) == beta


def test_kodaira_hint():
    bound = beta_from_hint("I0-IV-0", 5)
    assert bound.beta == Fraction(2, 3)
    assert bound.gamma == Fraction(8, 3)
    assert beta_from_hint("I2-I2-1", 3).gamma == 3
    with pytest.raises(InputError):
        beta_from_hint("I0-IV", 5)
    with pytest.raises(InputError):
        kodaira_beta("V")


def test_parse_rationality():
    assert parse_rationality({}) is None
    info = parse_rationality({"three_nodes": "quadratic_pair", "curve_split": False, "rational_node": 0})
    assert info.three_nodes == NodeField.QUADRATIC_PAIR
    assert info.rational_node == 0
    assert not info.curve_split
