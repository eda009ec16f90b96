from fractions import Fraction
from itertools import product

import pytest

from snarkforge.flows import (
    LOWER_BOUND_5,
    NotACover,
    NotAT1Flow,
    NotBridgeless,
    PMCover,
    circular_flow_lower_bound,
    cover_from_t0_flow,
    cover_from_tflow,
    cover_with_k_matchings,
    enumerate_perfect_matchings,
    find_tflow,
    has_cnzf,
    has_modular_cnzf,
    is_3_edge_colourable,
    is_cover,
    is_perfect_matching,
    is_tflow,
    kirchhoff_holds,
    perfect_matching_index,
    three_edge_colouring,
    tflow_from_cover,
)
from snarkforge.geometry import LAMBDA, T0, T1
from snarkforge.multipole import graph, named_graph


def covering_tuples(g, k=4):
    """Ordered k-tuples of perfect matchings whose union is E (direct enumeration)."""
    pms = enumerate_perfect_matchings(g)
    every = frozenset(range(len(g.edges)))
    return [t for t in product(pms, repeat=k) if frozenset().union(*t) == every]


def test_k4_flow_count_oracle():
    k4 = named_graph("K4")
    assert 3 ** 4 - 3 * 2 ** 4 + 3 == 36
    assert find_tflow(k4, T1, "count") == 36
    assert len(covering_tuples(k4)) == 36


def test_k33_bijection_counts():
    k33 = named_graph("K33")
    assert find_tflow(k33, T1, "count") == len(covering_tuples(k33))


def test_round_trips_on_k4():
    k4 = named_graph("K4")
    flows = list(find_tflow(k4, T1, "enumerate"))
    covers = {tuple(cover_from_tflow(f, k4).matchings) for f in flows}
    assert covers == {t for t in covering_tuples(k4)}
    for f in flows:
        assert tflow_from_cover(cover_from_tflow(f, k4), k4) == f


def test_repeated_matching_gets_weight_two():
    k4 = named_graph("K4")
    a, b, c = enumerate_perfect_matchings(k4)
    flow = tflow_from_cover(PMCover((a, a, b, c)), k4)
    assert is_tflow(k4, flow)
    for e in a:
        assert T1.weight(flow.values[e]) == 2


def test_t0_variant_via_lambda():
    k4 = named_graph("K4")
    flow = find_tflow(k4, T0)
    cover = cover_from_t0_flow(flow, k4)
    assert is_cover(k4, cover)
    for i, m in enumerate(cover.matchings):
        assert m == frozenset(e for e, v in enumerate(flow.mapped(LAMBDA).values) if not v >> (3 - i) & 1)
        assert is_perfect_matching(k4, m)


def test_conversion_errors():
    k4 = named_graph("K4")
    with pytest.raises(NotAT1Flow):
        cover_from_tflow(find_tflow(k4, T0))
    a, b, c = enumerate_perfect_matchings(k4)
    with pytest.raises(NotACover):
        tflow_from_cover(PMCover((a, a, b, b)), k4)


def test_found_flows_are_valid():
    for name in ("K4", "K33", "Heawood", "Q3", "GP(8,3)"):
        g = named_graph(name)
        f = find_tflow(g)
        assert f is not None and is_tflow(g, f) and kirchhoff_holds(g, f.values)


def test_petersen():
    p = named_graph("Petersen")
    assert not is_3_edge_colourable(p)
    assert find_tflow(p) is None
    assert cover_with_k_matchings(p, 4) is None
    cover = cover_with_k_matchings(p, 5)
    assert cover is not None and is_cover(p, cover)
    res = perfect_matching_index(p)
    assert res.value == 5 and res.at_least_5


def test_matching_counts():
    assert len(enumerate_perfect_matchings(named_graph("K4"))) == 3
    assert len(enumerate_perfect_matchings(named_graph("Petersen"))) == 6
    assert len(enumerate_perfect_matchings(named_graph("K33"))) == 6
    assert len(cover_with_k_matchings(named_graph("K4"), 3).matchings) == 3


def test_colourings():
    assert is_3_edge_colourable(named_graph("K4"))
    assert is_3_edge_colourable(named_graph("Heawood"))
    col = three_edge_colouring(named_graph("Heawood"))
    g = named_graph("Heawood")
    for v in range(g.n):
        assert sorted(col[e] for e in g.incidence[v]) == [1, 2, 3]


def test_pmi_values():
    assert perfect_matching_index(named_graph("K33")).value == 3
    assert perfect_matching_index(named_graph("Heawood")).value == 3
    assert LOWER_BOUND_5 == ">=5"
    with pytest.raises(NotBridgeless):
        # two K4s with a subdivided edge, joined by a bridge between the subdivision vertices
        half = [(0, 2), (0, 3), (1, 2), (1, 3), (2, 3), (0, 4), (1, 4)]
        perfect_matching_index(graph(10, half + [(u + 5, v + 5) for u, v in half] + [(4, 9)]))


@pytest.mark.parametrize("p,q,expected", [(5, 1, True), (4, 1, False), (9, 2, False), (3, 1, False)])
def test_petersen_circular(p, q, expected):
    g = named_graph("Petersen")
    assert has_cnzf(g, p, q) is expected
    assert has_modular_cnzf(g, p, q) is expected


def test_ladders():
    lad = circular_flow_lower_bound(named_graph("Petersen"), 2)
    assert lad.lower == Fraction(9, 2) and lad.upper == 5
    assert lad.statement() == "9/2 < Phi_c <= 5"
    k4 = circular_flow_lower_bound(named_graph("K4"), 1)
    assert k4.exact == 4 and k4.statement() == "Phi_c = 4"
    with pytest.raises(NotBridgeless):
        circular_flow_lower_bound(graph(4, [(0, 1), (1, 2), (1, 3)]), 1)


def test_cnzf_monotone():
    for name in ("K4", "Petersen", "K33"):
        g = named_graph(name)
        ladder = [(4, 1), (9, 2), (5, 1), (6, 1)]
        seen = False
        for p, q in ladder:
            ok = has_cnzf(g, p, q)
            assert ok or not seen
            seen = seen or ok


def test_colourable_graphs_have_4_flows():
    for name in ("K4", "K33", "Heawood", "Q3"):
        assert has_cnzf(named_graph(name), 4, 1)
