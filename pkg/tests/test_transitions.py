import json

import pytest

from snarkforge.families import first_edge, first_path
from snarkforge.multipole import Multipole, named_graph, remove_path
from snarkforge.transitions import (
    A,
    ANG_LS,
    B,
    C,
    COLLINEATOR,
    D,
    DB,
    DEANGULATOR,
    DECOLLINEATOR,
    DPT_ALT,
    M,
    M_PRIME,
    STATIONARY_TAG,
    NotBipartite,
    TransitionRelation,
    WeightArityMismatch,
    bip_3pole_check,
    chain_relation,
    check_admissible,
    classify_dipole,
    compose_dipoles,
    compose_relations,
    parse_relation,
    transition_relation,
    weighted_transition_relation,
)

TWO = Multipole(2, ((0, 1), (0, "i0"), (0, "i1"), (1, "o0"), (1, "o1")), (("i0", "i1"), ("o0", "o1")))


def guv(name):
    g = named_graph(name)
    return remove_path(g, list(first_edge(g)))


def guwv(name):
    g = named_graph(name)
    return remove_path(g, list(first_path(g)))


def test_named_constants():
    assert D < A and C < A
    assert not (D & C)
    assert M_PRIME <= M
    assert M == DB | parse_relation("ax-1->hl, ls-1->hl")
    assert str(M_PRIME) == "{alt-2->hl, alt-1->ls, ang-1->alt, ang-1->hl, ang-2->ls, ax-1->hl, dpt-1->hl, ls-1->hl}"


def test_parse_symmetric_arrows():
    r = parse_relation("hl<-2->alt")
    assert len(r) == 2 and "alt-2->hl" in r and "hl-2->alt" in r


def test_odot_examples():
    assert compose_relations(parse_relation("hl-1->ls"), parse_relation("ls-1->hl"), "odot") == parse_relation("hl-2->hl")
    assert compose_relations(parse_relation("dpt-2->ang"), parse_relation("ang-1->alt"), "odot") == parse_relation("dpt-1->alt")
    assert len(compose_relations(parse_relation("ls-2->hl"), parse_relation("hl-2->ang"), "odot")) == 0


@pytest.mark.parametrize("i,j", [(1, 1), (1, 2), (2, 1), (2, 2)])
def test_odot_weight_rule(i, j):
    r = compose_relations(parse_relation(f"ls-{i}->hl"), parse_relation(f"hl-{j}->ang"), "odot")
    if i + j > 3:
        assert len(r) == 0
    else:
        assert r.only().weight == 3 - i * j


def test_weight_arity():
    with pytest.raises(WeightArityMismatch):
        compose_relations(B, B, "join")
    with pytest.raises(WeightArityMismatch):
        compose_relations(D, B, "odot")


def test_two_vertex_dipole():
    assert transition_relation(TWO) == C


def test_petersen_decollineator():
    rel = transition_relation(guv("Petersen"), level="pairs")
    assert rel == D
    assert DECOLLINEATOR in classify_dipole(rel)
    assert check_admissible(rel) == (True, [])
    for p in rel.pairs:
        if p.shape().src.value == p.shape().dst.value == "ls":
            assert p.src == p.dst


def test_k4_deangulator():
    rel = transition_relation(guv("K4"))
    assert "ang->ang" not in rel
    assert DEANGULATOR in classify_dipole(guv("K4"))


def test_inadmissible_relation():
    ok, why = check_admissible(parse_relation("hl->ls"))
    assert not ok and why


@pytest.mark.parametrize("name", ["K33", "Heawood", "Q3"])
def test_bipartite_guv_is_stationary(name):
    assert STATIONARY_TAG in classify_dipole(guv(name))


def test_bipartite_blocks():
    k33 = guwv("K33")
    assert weighted_transition_relation(k33) <= B
    split = weighted_transition_relation(k33, split=True)
    assert "dc-2->ls" not in split and "dm-2->ls" in split
    assert weighted_transition_relation(guwv("Heawood")) == B
    for name in ("Q3", "GP(8,3)"):
        assert weighted_transition_relation(guwv(name)) <= B


def test_petersen_fragment():
    f = compose_dipoles(guv("Petersen"), guwv("K33"))
    assert f.n == 11 and f.kind == (2, 2, 1)
    assert weighted_transition_relation(f) == DB
    assert chain_relation([guv("Petersen"), guwv("K33")]) == DB


def test_chain_relation_matches_direct():
    parts = [guv("K4"), TWO, guv("Petersen")]
    direct = transition_relation(compose_dipoles(compose_dipoles(parts[0], parts[1]), parts[2]))
    assert chain_relation(parts) == direct


def test_join_associativity():
    a, b, c = guv("K4"), TWO, guv("K33")
    left = compose_dipoles(compose_dipoles(a, b), c)
    right = compose_dipoles(a, compose_dipoles(b, c))
    assert left.structurally_equal(right) or (left.n == right.n and len(left.edges) == len(right.edges))
    assert transition_relation(left) == transition_relation(right)


def test_odot_pole():
    f = compose_dipoles(guv("Petersen"), guwv("K33"))
    ff = compose_dipoles(f, f, "odot")
    assert ff.n == 23 and ff.kind == (2, 2, 1)


def test_stationary_composition_does_not_enlarge():
    x = guv("Petersen")
    for s in (guv("K33"), TWO, guv("Q3")):
        assert transition_relation(compose_dipoles(x, s)) <= transition_relation(x)


def test_decollineator_deangulator_sandwich():
    d, u = guv("Petersen"), guv("K4")
    assert DECOLLINEATOR in classify_dipole(compose_dipoles(compose_dipoles(d, u), d))
    assert DEANGULATOR in classify_dipole(compose_dipoles(compose_dipoles(u, d), u))


def test_odot_of_m_relations_excludes_dpt_alt():
    f = compose_dipoles(guv("Petersen"), guwv("K33"))
    assert weighted_transition_relation(f) <= M
    actual = weighted_transition_relation(compose_dipoles(f, f, "odot"))
    assert not (actual & DPT_ALT)
    assert actual <= M_PRIME


def test_bip_3pole():
    assert bip_3pole_check(named_graph("K33"), 0)
    assert bip_3pole_check(named_graph("Heawood"), 0)
    assert not bip_3pole_check(named_graph("Petersen"), 0, require_bipartite=False)
    with pytest.raises(NotBipartite):
        bip_3pole_check(named_graph("Petersen"), 0)


def test_json_and_dot():
    rel = transition_relation(guv("Petersen"), level="pairs")
    back = TransitionRelation.from_json(json.loads(rel.dumps()))
    assert back == rel and back.pairs == rel.pairs
    assert "digraph" in D.to_dot()
    assert ANG_LS.only().src.value == "ang"
    assert COLLINEATOR in classify_dipole(C)
