import networkx as nx
import pytest

from snarkforge.multipole import (
    Acyclic,
    ArityMismatch,
    MalformedInput,
    Multipole,
    NAMED_GRAPHS,
    PathNotInGraph,
    SemiedgeNotFree,
    bipartition,
    closure,
    cyclic_edge_connectivity_at_least,
    disjoint_union,
    emit_dot,
    emit_graph6,
    extract_block,
    girth,
    graph,
    has_bridge,
    is_bipartite,
    junction,
    junctions,
    named_graph,
    parse_graph6,
    parse_json,
    emit_json,
    remove_path,
)

EXPECTED = {"K4": (4, 3), "K33": (6, 4), "Petersen": (10, 5), "Heawood": (14, 6), "Q3": (8, 4),
            "GP(8,3)": (16, 6), "GP(10,3)": (20, 6), "GP(12,5)": (24, 6)}


def graph6_oracle(g: Multipole) -> str:
    """Independent encoder written straight from the format description."""
    n = g.n
    adj = {tuple(sorted(e)) for e in g.vertex_edges()}
    bits = [1 if (i, j) in adj else 0 for j in range(n) for i in range(j)]
    bits += [0] * (-len(bits) % 6)
    out = chr(63 + n)
    for k in range(0, len(bits), 6):
        out += chr(63 + int("".join(map(str, bits[k:k + 6])), 2))
    return out


@pytest.mark.parametrize("name", sorted(EXPECTED))
def test_named_graphs(name):
    g = named_graph(name)
    assert g.is_cubic
    assert (g.n, girth(g)) == EXPECTED[name]
    ref = nx.Graph(g.vertex_edges())
    assert nx.girth(ref) == EXPECTED[name][1]
    assert is_bipartite(g) == nx.is_bipartite(ref)
    assert graph6_oracle(g) == emit_graph6(g)


def test_named_catalog_complete():
    assert set(EXPECTED) <= set(NAMED_GRAPHS)


def test_bipartite_examples():
    assert is_bipartite(named_graph("K33")) and is_bipartite(named_graph("Heawood"))
    assert not is_bipartite(named_graph("Petersen"))
    left, right = bipartition(named_graph("K33"))
    assert len(left) == len(right) == 3


def test_graph6():
    assert emit_graph6(named_graph("K4")) == "C~"
    p = parse_graph6(emit_graph6(named_graph("Petersen")))
    assert p.n == 10 and len(p.edges) == 15
    assert sorted(p.vertex_edges()) == sorted(named_graph("Petersen").vertex_edges())
    with pytest.raises(MalformedInput):
        parse_graph6("")
    g = parse_json(emit_json(named_graph("Heawood")))
    assert sorted(g.vertex_edges()) == sorted(named_graph("Heawood").vertex_edges())
    assert "graph" in emit_dot(named_graph("K4"))


def test_junction_and_closure():
    m = Multipole(0, (("a", "b"), ("c", "d")), (("a", "b", "c", "d"),))
    j = junction(m, "b", "c")
    assert len(j.edges) == 1 and set(j.semiedges) == {"a", "d"}
    with pytest.raises(SemiedgeNotFree):
        junction(m, "a", "a")
    empty = closure(Multipole(0, (), ((), ())))
    assert empty.n == 0 and not empty.edges
    with pytest.raises(ArityMismatch):
        closure(remove_path(named_graph("K33"), [0, 3, 1]))


def test_remove_path_shapes():
    d = remove_path(named_graph("Petersen"), [0, 1])
    assert d.n == 8 and d.kind == (2, 2, 0) and len(d.semiedges) == 4
    b = remove_path(named_graph("K33"), [0, 3, 1])
    assert b.n == 3 and b.kind == (2, 2, 1) and len(b.semiedges) == 5
    hw = named_graph("Heawood")
    w = min(hw.neighbours(0))
    v = min(x for x in hw.neighbours(w) if x != 0)
    assert remove_path(hw, [0, w, v]).n == 11
    three = remove_path(named_graph("Petersen"), [0])
    assert three.kind == (3, 0)
    with pytest.raises(PathNotInGraph):
        remove_path(named_graph("Petersen"), [0, 2])


def test_closure_bookkeeping():
    d = remove_path(named_graph("Petersen"), [0, 1])
    c = closure(d)
    assert c.n == 8 and c.is_cubic
    assert len(c.edges) == len(d.edges) - 2


def test_uv_round_trip():
    g = named_graph("Petersen")
    d = remove_path(g, [0, 1])
    u = Multipole(2, ((0, 1), (0, "x0"), (0, "x1"), (1, "y0"), (1, "y1")), (("x0", "x1"), ("y0", "y1")))
    both, _ = disjoint_union([d, u], ["d.", "u."])
    pairs = [("d.i0", "u.x0"), ("d.i1", "u.x1"), ("d.o0", "u.y0"), ("d.o1", "u.y1")]
    back, _ = junctions(both, pairs)
    assert back.is_graph and back.is_cubic
    h1, h2 = nx.Graph(back.vertex_edges()), nx.Graph(g.vertex_edges())
    assert nx.is_isomorphic(h1, h2)


def test_cyclic_connectivity():
    p = named_graph("Petersen")
    assert cyclic_edge_connectivity_at_least(p, 4)
    # two copies of Petersen minus the edge 01, joined by the edges 0-0' and 1-1'
    block = [e for e in p.vertex_edges() if e != (0, 1)]
    edges = block + [(u + 10, v + 10) for u, v in block] + [(0, 10), (1, 11)]
    g = graph(20, edges)
    assert g.is_cubic and not cyclic_edge_connectivity_at_least(g, 4)
    ref = nx.Graph(g.vertex_edges())
    assert nx.edge_connectivity(ref) >= 2


def test_girth_errors_and_bridges():
    with pytest.raises(Acyclic):
        girth(graph(3, [(0, 1), (1, 2)]))
    assert has_bridge(graph(4, [(0, 1), (1, 2), (1, 3)]))
    assert not has_bridge(named_graph("K4"))


def test_extract_block_matches_remove_path():
    g = named_graph("Petersen")
    d = remove_path(g, [0, 1])
    verts = [v for v in range(g.n) if v not in (0, 1)]
    ins = [i for i, e in enumerate(g.edges) if 0 in e and 1 not in e]
    outs = [i for i, e in enumerate(g.edges) if 1 in e and 0 not in e]
    b = extract_block(g, verts, [ins, outs])
    assert b.kind == d.kind and b.n == d.n and len(b.edges) == len(d.edges)
