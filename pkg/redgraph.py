"""Reduction graphs, resistances and bounds for mu at semistable places.

For a semistable minimal model, mu of a point whose image in the component
group is [G1 - G2] is the effective resistance between G1 and G2 in the
reduction graph, with every edge of length 1.  The closed forms below are the
resistances of the three nodal graphs; ``resistance`` solves the Laplacian
exactly and is used to cross-check them.
"""
import logging
import math
import re
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction

import flint
import networkx as nx

from curve import ReductionTag, ReductionType
from errors import Disconnected, InputError, RangeError

logger = logging.getLogger(__name__)


class Provenance(str, Enum):
    NODAL_EXACT = "NodalExact"
    CHAIN_EXACT = "ChainExact"
    GENERIC_QUARTER = "GenericQuarter"
    GEOMETRIC = "Geometric"
    KODAIRA_HINT = "KodairaHint"


@dataclass(frozen=True)
class BetaBound:
    beta: Fraction
    gamma: Fraction
    provenance: Provenance
    shift: int = 0

    @property
    def total(self):
        """beta including the 2-adic model shift."""
        return self.beta + self.shift


# ==============================
# GRAPHS
# ==============================
@dataclass
class ReductionGraph:
    graph: nx.MultiGraph

    @property
    def vertices(self):
        return list(self.graph.nodes)

    def laplacian(self):
        index = {v: k for k, v in enumerate(self.vertices)}
        n = len(index)
        L = [[Fraction(0)] * n for _ in range(n)]
        for u, v, data in self.graph.edges(data=True):
            if u == v:
                continue
            c = 1 / Fraction(data.get("length", 1))
            a, b = index[u], index[v]
            L[a][a] += c
            L[b][b] += c
            L[a][b] -= c
            L[b][a] -= c
        return L, index

    def intersection_matrix(self):
        L, _ = self.laplacian()
        return [[-c for c in row] for row in L]


def _add_path(G, nodes, length=1):
    for u, v in zip(nodes, nodes[1:]):
        G.add_edge(u, v, length=length)


def cycle_through(G, hub, prefix, m):
    """Cycle of m edges through ``hub`` with new vertices prefix1..prefix(m-1)."""
    if m <= 1:
        return
    _add_path(G, [hub] + [f"{prefix}{i}" for i in range(1, m)] + [hub])


def one_node_graph(m):
    G = nx.MultiGraph()
    G.add_node("A")
    cycle_through(G, "A", "B", m)
    return ReductionGraph(G)


def two_node_graph(m1, m2):
    G = nx.MultiGraph()
    G.add_node("A")
    cycle_through(G, "A", "B", m1)
    cycle_through(G, "A", "C", m2)
    return ReductionGraph(G)


def theta_graph(m1, m2, m3):
    """A and E joined by chains of m1, m2, m3 edges (B, C and D vertices)."""
    G = nx.MultiGraph()
    G.add_nodes_from(["A", "E"])
    for prefix, m in zip("BCD", (m1, m2, m3)):
        _add_path(G, ["A"] + [f"{prefix}{i}" for i in range(1, m)] + ["E"])
    return ReductionGraph(G)


def chain_graph(m1, m2, l):
    """Polygons of m1 and m2 edges at A and E, joined by C0 = A, ..., Cl = E."""
    G = nx.MultiGraph()
    G.add_nodes_from(["A", "E"])
    cycle_through(G, "A", "B", m1)
    cycle_through(G, "E", "D", m2)
    _add_path(G, ["A"] + [f"C{j}" for j in range(1, l)] + ["E"])
    return ReductionGraph(G)


def graph_for(rtype):
    if rtype.tag == ReductionTag.I_M00:
        return one_node_graph(rtype.parts[0])
    if rtype.tag == ReductionTag.I_M1M2:
        return two_node_graph(*rtype.parts)
    if rtype.tag == ReductionTag.I_M1M2M3:
        return theta_graph(*rtype.parts)
    if rtype.is_chain:
        return chain_graph(*rtype.chain_parts())
    raise InputError(f"no reduction graph for type {rtype}")


def resistance(g, v1, v2):
    """Effective resistance between two vertices, solved exactly."""
    G = g.graph
    if v1 not in G or v2 not in G:
        raise InputError(f"unknown vertex {v1!r} or {v2!r}")
    if v1 == v2:
        return Fraction(0)
    if not nx.has_path(G, v1, v2):
        raise Disconnected(f"{v1} and {v2} lie in different components")
    # ground v2 and solve on v2's connected component
    comp = [v for v in nx.node_connected_component(G, v2) if v != v2]
    sub = ReductionGraph(G.subgraph(comp + [v2]).copy())
    L, index = sub.laplacian()
    keep = [index[v] for v in comp]
    n = len(keep)
    M = flint.fmpq_mat(n, n, [flint.fmpq(L[a][b].numerator, L[a][b].denominator)
                              for a in keep for b in keep])
    rhs = flint.fmpq_mat(n, 1, [1 if comp[k] == v1 else 0 for k in range(n)])
    sol = M.solve(rhs)
    val = sol[comp.index(v1), 0]
    return Fraction(int(val.p), int(val.q))


# ==============================
# CLOSED FORMS
# ==============================
def _check_range(value, upper, name):
    if not 0 <= value <= upper:
        raise RangeError(f"{name} = {value} outside 0..{upper}")


def mu_one_node(m, i):
    _check_range(i, m, "i")
    return Fraction(i * (m - i), m) if m else Fraction(0)


def mu_three_nodes(m1, m2, m3, i, j):
    """mu for [B_i - C_j] on the theta graph with chains m1 (B), m2 (C), m3 (D)."""
    _check_range(i, m1, "i")
    _check_range(j, m2, "j")
    M = m1 * m2 + m1 * m3 + m2 * m3
    num = m2 * i * (m1 - i) + m3 * (i + j) * (m1 - i + m2 - j) + m1 * j * (m2 - j)
    return Fraction(num, M)


_ROTATIONS = {"BC": (0, 1, 2), "CD": (1, 2, 0), "DB": (2, 0, 1)}


def mu_nodal(rtype, coords):
    """Closed-form mu for a component class of a nodal type.

    ``coords`` is (i,) for one node, (i, j) for two nodes and (pair, i, j) with
    pair one of "BC", "CD", "DB" for three nodes.
    """
    if rtype.tag == ReductionTag.I_M00:
        (i,) = coords
        return mu_one_node(rtype.parts[0], i)
    if rtype.tag == ReductionTag.I_M1M2:
        i, j = coords
        m1, m2 = rtype.parts
        return mu_one_node(m1, i) + mu_one_node(m2, j)
    if rtype.tag == ReductionTag.I_M1M2M3:
        pair, i, j = coords
        if pair not in _ROTATIONS:
            raise RangeError(f"unknown component pair {pair!r}")
        a, b, c = (rtype.parts[k] for k in _ROTATIONS[pair])
        return mu_three_nodes(a, b, c, i, j)
    raise InputError(f"type {rtype} is not nodal")


def component_vertex(prefix, index, m, ends=("A", "E")):
    """Vertex label of chain component prefix_index, with prefix_0 and prefix_m the ends."""
    if index == 0:
        return ends[0]
    if index == m:
        return ends[1]
    return f"{prefix}{index}"


def mu_chain(m1, m2, l, gamma1, gamma2, j):
    """(lower, upper) for mu_j of [(P1) - (P2)] on the chain type [I_m1-I_m2-l].

    Components are labels of ``chain_graph``: "A", "E", "B<i>", "C<j>", "D<k>".
    """
    _check_range(j, l, "j")
    g = chain_graph(m1, m2, l)
    for v in (gamma1, gamma2):
        if v not in g.graph:
            raise RangeError(f"component {v!r} does not exist for [I_{m1}-I_{m2}-{l}]")
    r = resistance(g, gamma1, gamma2)
    p1, p2 = _chain_position(gamma1, l), _chain_position(gamma2, l)
    j_min, j_max = min(p1, p2), max(p1, p2)
    return r + (j_max - j_min), r + abs(j - j_max) + abs(j - j_min)


def _chain_position(v, l):
    if v == "A" or v.startswith("B"):
        return 0
    if v == "E" or v.startswith("D"):
        return l
    return int(v[1:])


# ==============================
# COMPONENT GROUPS
# ==============================
def component_group(rtype):
    """Invariant factors of the geometric component group."""
    if rtype.tag == ReductionTag.I_M00:
        m = rtype.parts[0]
        return (m,) if m > 1 else ()
    if rtype.tag == ReductionTag.I_M1M2:
        m1, m2 = rtype.parts
        d = math.gcd(m1, m2)
        return tuple(k for k in (d, m1 * m2 // d) if k > 1)
    if rtype.tag == ReductionTag.I_M1M2M3:
        m1, m2, m3 = rtype.parts
        d = math.gcd(m1, math.gcd(m2, m3))
        n = (m1 * m2 + m1 * m3 + m2 * m3) // d
        return tuple(k for k in (d, n) if k > 1)
    raise InputError(f"component group of {rtype} is not tabulated")


def group_exponent(rtype):
    factors = component_group(rtype)
    return factors[-1] if factors else 1


# ==============================
# BETA BOUNDS
# ==============================
class NodeField(str, Enum):
    RATIONAL = "rational"
    QUADRATIC_PAIR = "quadratic_pair"
    CUBIC = "cubic"


@dataclass(frozen=True)
class Rationality:
    """Field-of-definition data for the nodes; None fields mean "geometric"."""
    split_or_even: tuple = None
    three_nodes: NodeField = None
    curve_split: bool = True
    rational_node: int = 2


GEOMETRIC = Rationality()


def _node_beta(m):
    return Fraction((m * m) // 2, 2 * m) if m else Fraction(0)


def _node_gamma(m):
    return Fraction(2 * (m // 2))


def _three_node_beta_split(m1, m2, m3):
    m1, m2, m3 = sorted((m1, m2, m3), reverse=True)
    M = m1 * m2 + m1 * m3 + m2 * m3
    num = m2 * ((m1 * m1) // 2) + m3 * (((m1 + m2) ** 2) // 2) + m1 * ((m2 * m2) // 2)
    return Fraction(num, 2 * M)


def _three_node_gamma(ms):
    best = 0
    for a in range(3):
        for b in range(a + 1, 3):
            delta = 0 if ms[a] % 2 == 0 and ms[b] % 2 == 0 else 1
            best = max(best, ms[a] + ms[b] - delta)
    return Fraction(best)


def _three_node_beta(ms, info):
    if info.three_nodes is None or info.three_nodes == NodeField.RATIONAL and info.curve_split:
        return _three_node_beta_split(*ms)
    if info.three_nodes == NodeField.RATIONAL:
        even = [ms[a] + ms[b] for a in range(3) for b in range(a + 1, 3)
                if ms[a] % 2 == 0 and ms[b] % 2 == 0]
        return Fraction(max(even, default=0), 4)
    if info.three_nodes == NodeField.QUADRATIC_PAIR:
        m3 = ms[info.rational_node]
        m1 = next(ms[k] for k in range(3) if k != info.rational_node)
        M = 2 * m1 * m3 + m1 * m1
        if info.curve_split:
            return Fraction(m1, M) * max((m1 * m1) // 2 + m1 * m3, (m3 * m3) // 2 + m1 * (m3 // 2))
        return Fraction(m1, 2) if m1 % 2 == 0 else Fraction(0)
    return Fraction(sum(ms), 9) if info.curve_split else Fraction(0)


def beta_bound(rtype, vdelta, rationality=None, gamma_cap=None):
    """Sharpest available (beta, gamma) for the place."""
    info = rationality or GEOMETRIC
    provenance = Provenance.GEOMETRIC if rationality is None else Provenance.NODAL_EXACT
    cap = Fraction(vdelta if gamma_cap is None else gamma_cap)
    if rtype.tag == ReductionTag.UNKNOWN:
        return BetaBound(Fraction(vdelta, 4), cap, Provenance.GENERIC_QUARTER)
    if rtype.tag in (ReductionTag.I_M00, ReductionTag.I_M1M2):
        flags = info.split_or_even or (True,) * len(rtype.parts)
        beta = sum((_node_beta(m) for m, ok in zip(rtype.parts, flags) if ok or m % 2 == 0),
                   Fraction(0))
        gamma = sum((_node_gamma(m) for m in rtype.parts), Fraction(0))
        if rtype.parts == (0,):
            provenance = Provenance.NODAL_EXACT
        return BetaBound(beta, gamma, provenance)
    if rtype.tag == ReductionTag.I_M1M2M3:
        beta = _three_node_beta(rtype.parts, info)
        return BetaBound(beta, _three_node_gamma(rtype.parts), provenance)
    m1, m2, l = rtype.chain_parts()
    beta = Fraction(m1 + m2, 4) + 2 * l
    return BetaBound(beta, min(4 * beta, cap), Provenance.CHAIN_EXACT)


def beta_by_enumeration(rtype):
    """max mu over the geometric component classes, from the closed forms."""
    if rtype.tag == ReductionTag.I_M00:
        m = rtype.parts[0]
        return max((mu_one_node(m, i) for i in range(m + 1)), default=Fraction(0))
    if rtype.tag == ReductionTag.I_M1M2:
        m1, m2 = rtype.parts
        return (max(mu_one_node(m1, i) for i in range(m1 + 1))
                + max(mu_one_node(m2, j) for j in range(m2 + 1)))
    if rtype.tag == ReductionTag.I_M1M2M3:
        best = Fraction(0)
        for pair, (a, b, _) in _ROTATIONS.items():
            ma, mb = rtype.parts[a], rtype.parts[b]
            for i in range(ma + 1):
                for j in range(mb + 1):
                    best = max(best, mu_nodal(rtype, (pair, i, j)))
        return best
    raise InputError(f"type {rtype} is not nodal")


# ==============================
# ELLIPTIC PAIR HINTS
# ==============================
_KODAIRA = {"I0": Fraction(0), "II": Fraction(0), "III": Fraction(1, 2), "IV": Fraction(2, 3),
            "I0*": Fraction(1), "IV*": Fraction(4, 3), "III*": Fraction(3, 2), "II*": Fraction(0)}


def kodaira_beta(symbol):
    """beta of an elliptic curve with the given Kodaira symbol."""
    symbol = symbol.strip().replace("_", "")
    if symbol in _KODAIRA:
        return _KODAIRA[symbol]
    match = re.fullmatch(r"I(\d+)(\*?)", symbol)
    if not match:
        raise InputError(f"unknown Kodaira symbol {symbol!r}")
    n = int(match.group(1))
    if match.group(2):
        return Fraction(n + 4, 4)
    return Fraction((n * n) // 4, n) if n else Fraction(0)


def beta_from_hint(text, vdelta):
    """beta for a hint "K1-K2-l": beta(K1) + beta(K2) + 2l."""
    pieces = text.strip().strip("[]").split("-")
    if len(pieces) != 3:
        raise InputError(f"reduction hint {text!r} is not of the form K1-K2-l")
    k1, k2, l = pieces
    beta = kodaira_beta(k1) + kodaira_beta(k2) + 2 * int(l)
    return BetaBound(beta, min(4 * beta, Fraction(vdelta)), Provenance.KODAIRA_HINT)


def parse_rationality(data):
    """Rationality from a JSON mapping such as {"split_or_even": [true, false]}."""
    if not data:
        return None
    return Rationality(
        split_or_even=tuple(data["split_or_even"]) if "split_or_even" in data else None,
        three_nodes=NodeField(data["three_nodes"]) if "three_nodes" in data else None,
        curve_split=bool(data.get("curve_split", True)),
        rational_node=int(data.get("rational_node", 2)),
    )
