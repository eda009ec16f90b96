import json

import pytest

from snarkforge.families import (
    Certificate,
    CertificateMismatch,
    FragmentCountMismatch,
    InvalidParts,
    InvalidTreeSpec,
    NotADecollineator,
    UnsupportedOrder,
    bipartite_block,
    build_halin,
    caterpillar,
    composite_family,
    decollineator_from_snark,
    decollineator_of,
    direct_no_tflow,
    even_order_family,
    fragment,
    halin_dipole,
    halin_snark,
    petersen_fragment,
    treelike,
    verify_certificate,
    w34,
    windmill,
)
from snarkforge.flows import find_tflow
from snarkforge.multipole import (
    cyclic_edge_connectivity_at_least,
    girth,
    named_graph,
    parse_graph6,
    emit_graph6,
)
from snarkforge.transitions import ANG_LS, C, M_PRIME, NotBipartite, relation_of


@pytest.fixture(scope="module")
def w():
    return w34()


def test_build_halin():
    k4 = build_halin([[], [], []])
    assert k4.graph.n == 4 and len(k4.graph.edges) == 6
    six = build_halin([[], [[], []], []])
    assert six.graph.n == 6 and len(six.leaves) == 4 and six.graph.is_cubic
    for k in range(1, 6):
        h = build_halin(caterpillar(k))
        assert len(h.internal) == k and len(h.leaves) == k + 2
    for bad in ([], [[], []], [[], [[]], []], [[], [[], [], []], []], "x"):
        with pytest.raises(InvalidTreeSpec):
            build_halin(bad)


def test_decollineators():
    assert decollineator_from_snark(named_graph("Petersen")).n == 8
    with pytest.raises(NotADecollineator):
        decollineator_from_snark(named_graph("K4"))


def test_bipartite_blocks():
    assert bipartite_block(named_graph("K33")).n == 3
    assert bipartite_block(named_graph("Heawood")).n == 11
    assert bipartite_block(named_graph("GP(8,3)")).n == 13
    assert bipartite_block(named_graph("Q3")).n == 5
    with pytest.raises(NotBipartite):
        bipartite_block(named_graph("Petersen"))


def test_w34(w):
    g = w.graph
    assert g.n == 34 and girth(g) == 5 and cyclic_edge_connectivity_at_least(g, 4)
    assert w.certificate.kind == "windmill-walk"
    assert verify_certificate(w.certificate, g)
    assert find_tflow(g) is None


def test_windmill_42():
    f = petersen_fragment()
    s = windmill(fragment("Petersen", "Heawood"), f, f)
    assert s.order == 42 == 19 + 11 + 11 + 1
    assert verify_certificate(s.certificate, s.graph)


def test_halin_certificate_and_orientations():
    for orientation in (1, -1):
        s = halin_snark([[], [], []], [petersen_fragment()] * 3, orientation=orientation)
        assert s.order == 34
        assert verify_certificate(s.certificate, s.graph)
    with pytest.raises(FragmentCountMismatch):
        halin_snark([[], [], []], [petersen_fragment()] * 4)


def test_removed_fragment_choice():
    h = caterpillar(2)
    for j in range(4):
        s = halin_snark(h, [petersen_fragment()] * 4, removed=j)
        assert verify_certificate(s.certificate, s.graph), j


def test_treelike_46():
    s = treelike([[], [[], []], []])
    assert s.order == 46 == 4 * 11 + 2
    assert girth(s.graph) >= 5 and cyclic_edge_connectivity_at_least(s.graph, 4)
    assert verify_certificate(s.certificate, s.graph)


def test_treelike_order_from_tree():
    h = build_halin(caterpillar(3))
    s = treelike(caterpillar(3))
    assert s.order == 11 * len(h.leaves) + len(h.internal)
    assert verify_certificate(s.certificate, s.graph)


@pytest.mark.parametrize("n", [41, 40, 30, 43])
def test_unsupported_orders(n):
    with pytest.raises(UnsupportedOrder):
        even_order_family(n)


def test_even_order_examples():
    g42 = even_order_family(42)
    g50 = even_order_family(50)
    assert sorted(f.name for f in g50.fragments).count("Petersen*Heawood") == 2
    assert g42.order == 42 and g50.order == 50
    assert even_order_family(46).order == 46


def test_halin_dipoles(w):
    x = halin_dipole(w, 0, "22;1")
    assert x.n == 23 and relation_of(x) <= M_PRIME
    y = halin_dipole(w, 0, "22")
    assert y.n == 26 and relation_of(y) == C


def test_composite_g1(w):
    c = composite_family([decollineator_of("Petersen"), halin_dipole(w, 0, "22")], "G+1")
    assert c.graph.n == 34
    assert verify_certificate(c.certificate, c.graph)
    with pytest.raises(InvalidParts):
        composite_family([decollineator_of("Petersen")], "G+1")
    with pytest.raises(InvalidParts):
        composite_family([halin_dipole(w, 0, "22;1")], "G+2")


def test_certificate_json_round_trip_and_graph6(w):
    cert = Certificate.from_json(json.loads(w.certificate.dumps()))
    g = parse_graph6(emit_graph6(w.graph))
    assert verify_certificate(cert, g)


def test_tampered_certificates(w):
    data = json.loads(w.certificate.dumps())
    data["relations"]["F0"]["shapes"].pop()
    with pytest.raises(CertificateMismatch):
        verify_certificate(Certificate.from_json(data), w.graph)
    data = json.loads(w.certificate.dumps())
    data["blocks"]["D0"]["vertices"].pop()
    with pytest.raises(CertificateMismatch):
        verify_certificate(Certificate.from_json(data), w.graph)
    with pytest.raises(CertificateMismatch):
        verify_certificate(w.certificate, even_order_family(42).graph)


def test_direct_cap(w):
    assert direct_no_tflow(w.graph, cap=60) is True
    assert direct_no_tflow(w.graph, cap=20) is None


def test_w34_gives_a_decollineator(w):
    assert decollineator_from_snark(w.graph).n == 32


def test_composite_g2(w):
    ext = halin_dipole(w, 0, "ext")
    assert ext.n == 34
    c = composite_family([ext, ext], "G+2")
    assert c.graph.n == 68 and c.graph.is_cubic
    assert verify_certificate(c.certificate, c.graph)
