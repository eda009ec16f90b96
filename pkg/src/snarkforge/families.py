"""Halin graphs, Halin fragments and snark families with replayable certificates.

A Halin snark replaces every perimeter vertex of a Halin graph by a Halin
fragment F = D o B, where D is a decollineator (2,2)-pole and B a bipartite
(2,2;1)-pole.  Consecutive fragments are welded output-to-input around the
perimeter and each residual semiedge is attached to the tree.

Certificates record the vertex sets and connector edges of every block
together with the block relations.  ``verify_certificate`` re-extracts the
blocks from the graph, recomputes their relations from scratch and replays
the derivation.
"""

from __future__ import annotations

import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Any, Sequence

from .flows import find_tflow
from .multipole import (
    Multipole,
    MultipoleError,
    bipartition,
    disjoint_union,
    extract_block,
    junctions,
    named_graph,
    remove_path,
)
from .transitions import (
    A,
    ANG_LS,
    chain_relation,
    B,
    C,
    D,
    DECOLLINEATOR,
    DPT_ALT,
    M,
    M_PRIME,
    STATIONARY,
    NotBipartite,
    TransitionRelation,
    classify_dipole,
    compose_dipoles,
    compose_relations,
    relation_of,
    transition_relation,
    weighted_transition_relation,
)


class InvalidTreeSpec(ValueError):
    pass


class NotADecollineator(ValueError):
    pass


class RelationOutsideB(ValueError):
    pass


class FragmentCountMismatch(ValueError):
    pass


class UnsupportedOrder(ValueError):
    pass


class InvalidParts(ValueError):
    pass


class CertificateMismatch(ValueError):
    pass


# -- Halin graphs ----------------------------------------------------------


@dataclass(frozen=True)
class HalinGraph:
    """Plane tree plus the perimeter circuit through its leaves.

    Vertices are numbered in preorder; ``leaves`` lists them in perimeter
    (left-to-right) order.
    """

    tree: Any
    graph: Multipole
    leaves: tuple[int, ...]
    internal: tuple[int, ...]
    parent: tuple[int, ...]

    @property
    def perimeter(self) -> tuple[int, ...]:
        return self.leaves

    def neighbours_in_tree(self, v: int) -> list[int]:
        out = [w for w in range(len(self.parent)) if self.parent[w] == v]
        if self.parent[v] >= 0:
            out.append(self.parent[v])
        return out


def _freeze(spec) -> tuple:
    if not isinstance(spec, (list, tuple)):
        raise InvalidTreeSpec(f"tree nodes are lists, got {spec!r}")
    return tuple(_freeze(c) for c in spec)


def _check_tree(spec: tuple, root: bool = True) -> None:
    if not spec:
        if root:
            raise InvalidTreeSpec("the tree needs an internal root")
        return
    want = 3 if root else 2
    if len(spec) != want:
        kind = "root" if root else "internal vertex"
        raise InvalidTreeSpec(f"{kind} must have {want} children, got {len(spec)}")
    for c in spec:
        _check_tree(c, False)


def mirror_tree(spec) -> tuple:
    spec = _freeze(spec)
    return tuple(mirror_tree(c) for c in reversed(spec))


def build_halin(tree_spec) -> HalinGraph:
    """Halin graph of a nested-list plane tree (``[]`` is a leaf).

    The root has three children and every other internal vertex two, so the
    result is cubic.  ``[[], [], []]`` gives K4.
    """
    spec = _freeze(tree_spec)
    _check_tree(spec)
    parent: list[int] = []
    leaves: list[int] = []
    internal: list[int] = []
    edges: list[tuple[int, int]] = []

    def walk(node: tuple, par: int) -> None:
        v = len(parent)
        parent.append(par)
        if par >= 0:
            edges.append((par, v))
        if node:
            internal.append(v)
            for c in node:
                walk(c, v)
        else:
            leaves.append(v)

    walk(spec, -1)
    k = len(leaves)
    edges += [(leaves[i], leaves[(i + 1) % k]) for i in range(k)]
    g = Multipole(len(parent), tuple(edges)).check_cubic()
    return HalinGraph(spec, g, tuple(leaves), tuple(internal), tuple(parent))


def caterpillar(k: int) -> tuple:
    """Tree spec with ``k`` internal vertices on a path (k + 2 leaves)."""
    if k < 1:
        raise InvalidTreeSpec("a caterpillar needs at least one internal vertex")
    node: tuple = ((), ())
    for _ in range(k - 2):
        node = ((), node)
    return ((), (), ()) if k == 1 else ((), node, ())


# -- fragments -------------------------------------------------------------


def first_edge(g: Multipole) -> tuple[int, int]:
    return 0, min(g.neighbours(0))


def first_path(g: Multipole) -> tuple[int, int, int]:
    u = 0
    w = min(g.neighbours(u))
    v = min(x for x in g.neighbours(w) if x != u)
    return u, w, v


def decollineator_from_snark(g: Multipole, uv: Sequence[int] | None = None, check: bool = True) -> Multipole:
    """G_uv, asserted to have no collinear transition."""
    u, v = uv if uv is not None else first_edge(g)
    d = remove_path(g, [u, v])
    if check and DECOLLINEATOR not in classify_dipole(d):
        raise NotADecollineator(f"G_uv for uv = {u}{v} has a collinear transition")
    return d


def bipartite_block(g: Multipole, uwv: Sequence[int] | None = None, check: bool = True) -> Multipole:
    """G_uwv of a bipartite cubic graph, asserted to have its relation inside B."""
    if bipartition(g) is None:
        raise NotBipartite("bipartite_block needs a bipartite graph")
    path = list(uwv) if uwv is not None else list(first_path(g))
    b = remove_path(g, path)
    if check and not weighted_transition_relation(b) <= B:
        raise RelationOutsideB("the weighted relation of G_uwv is not contained in B")
    return b


@dataclass(frozen=True)
class HalinFragment:
    """F = D o B with D a decollineator (2,2)-pole and B a bipartite (2,2;1)-pole."""

    D: Multipole
    B: Multipole
    name: str = ""

    def __post_init__(self) -> None:
        if self.D.kind != (2, 2, 0) or self.B.kind != (2, 2, 1):
            raise InvalidParts("a Halin fragment needs a (2,2)-pole and a (2,2;1)-pole")

    @property
    def F(self) -> Multipole:
        return _fragment_pole(self.D, self.B)

    @property
    def order(self) -> int:
        return self.D.n + self.B.n

    def check(self) -> "HalinFragment":
        if DECOLLINEATOR not in classify_dipole(self.D):
            raise NotADecollineator(f"{self.name or 'fragment'}: D is not a decollineator")
        if not weighted_transition_relation(self.B) <= B:
            raise RelationOutsideB(f"{self.name or 'fragment'}: B has a transition outside B")
        return self

    def extended(self, m: Multipole, name: str = "") -> "HalinFragment":
        """D o (B o m): the bipartite part grows by the (2,2)-pole ``m``."""
        return HalinFragment(self.D, compose_dipoles(self.B, m), name or self.name)


def fragment_relation(f: HalinFragment, use_cache: bool = True) -> TransitionRelation:
    """Weighted relation of F = D o B, joined from the boundary values of D and B."""
    return chain_relation([f.D, f.B], use_cache=use_cache)


@lru_cache(maxsize=None)
def _fragment_pole(d: Multipole, b: Multipole) -> Multipole:
    return compose_dipoles(d, b)


@lru_cache(maxsize=None)
def decollineator_of(name: str) -> Multipole:
    return decollineator_from_snark(named_graph(name))


@lru_cache(maxsize=None)
def block_of(name: str) -> Multipole:
    return bipartite_block(named_graph(name), check=False)


@lru_cache(maxsize=None)
def heawood_dipole() -> Multipole:
    """M_Hw: the (2,2)-pole G_uv of the Heawood graph."""
    return remove_path(named_graph("Heawood"), list(first_edge(named_graph("Heawood"))))


FRAGMENT_ALIASES = {
    "petersen": ("Petersen", "K33"),
    "heawood": ("Petersen", "Heawood"),
    "mobius-kantor": ("Petersen", "GP(8,3)"),
    "desargues": ("Petersen", "GP(10,3)"),
    "nauru": ("Petersen", "GP(12,5)"),
}


def fragment(decollineator: str = "Petersen", block: str = "K33") -> HalinFragment:
    name = "F_Ps" if (decollineator, block) == ("Petersen", "K33") else f"{decollineator}*{block}"
    return HalinFragment(decollineator_of(decollineator), block_of(block), name)


def fragment_by_alias(alias: str) -> HalinFragment:
    key = alias.strip().lower()
    if key in FRAGMENT_ALIASES:
        return fragment(*FRAGMENT_ALIASES[key])
    if ":" in alias:
        d, b = alias.split(":", 1)
        return fragment(d, b)
    raise InvalidParts(f"unknown fragment {alias!r}; use one of {sorted(FRAGMENT_ALIASES)} or DECOL:BLOCK")


def petersen_fragment() -> HalinFragment:
    return fragment("Petersen", "K33")


# -- assembly --------------------------------------------------------------


@dataclass
class Certificate:
    """A replayable proof that a graph has no T-flow (so its index is at least 5).

    ``blocks`` maps block names to vertex sets and connector edge ids of the
    graph; ``relations`` holds block relations by value; ``steps`` is the
    derivation with every intermediate relation.
    """

    kind: str
    blocks: dict[str, dict]
    relations: dict[str, TransitionRelation]
    structure: dict
    steps: list[dict] = field(default_factory=list)
    conclusion: str = ""

    def to_json(self) -> dict:
        return {
            "schema": 1,
            "kind": self.kind,
            "blocks": self.blocks,
            "relations": {k: v.to_json() for k, v in sorted(self.relations.items())},
            "structure": self.structure,
            "steps": [_step_json(s) for s in self.steps],
            "conclusion": self.conclusion,
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=1, sort_keys=True)

    @classmethod
    def from_json(cls, data: dict) -> "Certificate":
        return cls(
            data["kind"],
            data["blocks"],
            {k: TransitionRelation.from_json(v) for k, v in data["relations"].items()},
            data["structure"],
            [_step_from_json(s) for s in data.get("steps", [])],
            data.get("conclusion", ""),
        )


def _step_json(step: dict) -> dict:
    return {k: (v.to_json() if isinstance(v, TransitionRelation) else v) for k, v in step.items()}


def _step_from_json(step: dict) -> dict:
    out = dict(step)
    if "result" in out and isinstance(out["result"], dict):
        out["result"] = TransitionRelation.from_json(out["result"])
    return out


@dataclass
class HalinSnark:
    graph: Multipole
    halin: HalinGraph
    fragments: tuple[HalinFragment, ...]
    blocks: dict[str, dict]
    tree_vertices: dict[int, int]
    certificate: Certificate | None = None

    @property
    def order(self) -> int:
        return self.graph.n


def _assemble_halin(h: HalinGraph, fragments: Sequence[HalinFragment]) -> HalinSnark:
    k = len(h.leaves)
    parts: list[Multipole] = []
    prefixes: list[str] = []
    for i, f in enumerate(fragments):
        parts += [f.D, f.B]
        prefixes += [f"D{i}.", f"B{i}."]
    # the tree minus its leaves, with a semiedge towards each leaf
    inner = {v: idx for idx, v in enumerate(h.internal)}
    t_edges: list[tuple] = []
    for v in range(len(h.parent)):
        p = h.parent[v]
        if p < 0:
            continue
        if v in inner:
            t_edges.append((inner[p], inner[v]))
        else:
            t_edges.append((inner[p], f"leaf{h.leaves.index(v)}"))
    tree = Multipole(len(h.internal), tuple(t_edges), (), tuple(f"leaf{i}" for i in range(k)))
    parts.append(tree)
    prefixes.append("T.")
    u, offsets = disjoint_union(parts, prefixes)
    pairs: list[tuple[str, str]] = []
    for i in range(k):
        nxt = (i + 1) % k
        pairs += [(f"D{i}.o{t}", f"B{i}.i{t}") for t in range(2)]
        pairs += [(f"B{i}.o{t}", f"D{nxt}.i{t}") for t in range(2)]
        pairs.append((f"B{i}.r0", f"T.leaf{i}"))
    g, ids = junctions(u, pairs)
    g = Multipole(g.n, g.edges).check_cubic()
    blocks: dict[str, dict] = {}
    for i, f in enumerate(fragments):
        base = 5 * i
        prev = 5 * ((i - 1) % k)
        d_off, b_off = offsets[2 * i], offsets[2 * i + 1]
        blocks[f"D{i}"] = {"vertices": list(range(d_off, d_off + f.D.n)),
                           "inputs": [ids[prev + 2], ids[prev + 3]],
                           "outputs": [ids[base], ids[base + 1]]}
        blocks[f"B{i}"] = {"vertices": list(range(b_off, b_off + f.B.n)),
                           "inputs": [ids[base], ids[base + 1]],
                           "outputs": [ids[base + 2], ids[base + 3]],
                           "residual": [ids[base + 4]]}
    t_off = offsets[-1]
    tree_vertices = {v: t_off + idx for v, idx in inner.items()}
    blocks = {name: _pairs_layout(g, b) for name, b in blocks.items()}
    return HalinSnark(g, h, tuple(fragments), blocks, tree_vertices)


def halin_snark(h: HalinGraph | Any, fragments: Sequence[HalinFragment], orientation: int = 1,
                removed: int = 0, certify: bool = True) -> HalinSnark:
    """Substitute the perimeter vertices of ``h`` by ``fragments`` (in perimeter order).

    With ``orientation=-1`` the perimeter is traversed the other way round,
    so each fragment feeds its predecessor instead of its successor.
    ``removed`` picks the fragment whose removal drives the certificate.
    """
    if not isinstance(h, HalinGraph):
        h = build_halin(h)
    if len(fragments) != len(h.leaves):
        raise FragmentCountMismatch(f"{len(h.leaves)} perimeter vertices but {len(fragments)} fragments")
    if orientation not in (1, -1):
        raise ValueError("orientation must be 1 or -1")
    if orientation == -1:
        h = build_halin(mirror_tree(h.tree))
        fragments = list(reversed(fragments))
        removed = len(fragments) - 1 - removed
    snark = _assemble_halin(h, fragments)
    expected = sum(f.order for f in fragments) + len(h.internal)
    if snark.order != expected:
        raise AssertionError(f"order {snark.order} differs from the expected {expected}")
    if certify:
        snark.certificate = halin_certificate(snark, removed)
    return snark


def treelike(tree_spec) -> HalinSnark:
    h = build_halin(tree_spec)
    return halin_snark(h, [petersen_fragment()] * len(h.leaves))


def windmill(f1: HalinFragment, f2: HalinFragment, f3: HalinFragment, certify: bool = True) -> HalinSnark:
    """W(F1, F2, F3): F1 o F2 o F3, residuals on a new vertex, then closure."""
    snark = halin_snark(((), (), ()), [f1, f2, f3], certify=False)
    if certify:
        snark.certificate = windmill_certificate(snark)
    return snark


def w34() -> HalinSnark:
    f = petersen_fragment()
    return windmill(f, f, f)


# -- certificates ----------------------------------------------------------


def _pairs_layout(g: Multipole, block: dict) -> dict:
    """Replace edge ids by sorted endpoint pairs, which survive graph6 round trips."""
    out = dict(block)
    for key in ("inputs", "outputs", "residual"):
        if key in out:
            out[key] = [sorted(g.edges[e]) for e in out[key]]
    return out


def _edge_ids(g: Multipole, pairs: Sequence[Sequence[int]]) -> list[int]:
    lookup = {}
    for i, (u, v) in enumerate(g.edges):
        if isinstance(u, int) and isinstance(v, int):
            lookup[(min(u, v), max(u, v))] = i
    try:
        return [lookup[(min(p), max(p))] for p in pairs]
    except KeyError as exc:
        raise CertificateMismatch(f"edge {list(exc.args[0])} is not in the graph") from None


def _block_multipole(g: Multipole, block: dict) -> Multipole:
    conns = [_edge_ids(g, block["inputs"]), _edge_ids(g, block["outputs"])]
    return extract_block(g, block["vertices"], conns, _edge_ids(g, block.get("residual", [])))


def _fragment_names(k: int) -> list[str]:
    return [f"F{i}" for i in range(k)]


def _windmill_walks(rels: Sequence[TransitionRelation]) -> list[list[str]]:
    """Closed walks s0 -> s1 -> s2 -> s0 through the three relations with exactly one weight 2."""
    found = []
    for a in rels[0]:
        for b in rels[1]:
            if b.src != a.dst:
                continue
            for c in rels[2]:
                if c.src == b.dst and c.dst == a.src:
                    if [a.weight, b.weight, c.weight].count(2) == 1:
                        found.append([str(a), str(b), str(c)])
    return found


def windmill_certificate(snark: HalinSnark) -> Certificate:
    g = snark.graph
    names = _fragment_names(3)
    rels = {n: fragment_relation(f) for n, f in zip(names, snark.fragments)}
    hub = next(iter(snark.tree_vertices.values()))
    cert = Certificate("windmill-walk", snark.blocks, rels, {"order": names, "hub": hub})
    cert.steps, cert.conclusion = _replay_windmill(cert)
    return cert


def _replay_windmill(cert: Certificate) -> tuple[list[dict], str]:
    rels = [cert.relations[n] for n in cert.structure["order"]]
    walks = _windmill_walks(rels)
    steps = [{"op": "walk", "relations": list(cert.structure["order"]), "walks": walks}]
    if walks:
        return steps, "inconclusive: a closed walk with exactly one weight-2 step exists"
    return steps, "no T-flow: no closed walk with exactly one weight-2 step"


def _rooted_children(h: HalinGraph, removed: int) -> tuple[int, dict[int, list[int]]]:
    """Root the tree at the removed leaf; order children along the perimeter after it."""
    k = len(h.leaves)
    leaf_pos = {v: i for i, v in enumerate(h.leaves)}
    rank = {v: (i - removed - 1) % k for v, i in leaf_pos.items()}
    adj: dict[int, list[int]] = {v: h.neighbours_in_tree(v) for v in range(len(h.parent))}
    root_leaf = h.leaves[removed]
    top = adj[root_leaf][0]
    children: dict[int, list[int]] = {}
    low: dict[int, int] = {}

    def walk(v: int, par: int) -> int:
        kids = [w for w in adj[v] if w != par]
        if not kids:
            low[v] = rank[v]
            children[v] = []
            return low[v]
        for w in kids:
            walk(w, v)
        kids.sort(key=lambda w: low[w])
        children[v] = kids
        low[v] = low[kids[0]]
        return low[v]

    walk(top, root_leaf)
    return top, children


def _replay_halin(cert: Certificate) -> tuple[list[dict], str]:
    st = cert.structure
    h = build_halin(st["tree"])
    j = st["removed"]
    leaf_pos = {v: i for i, v in enumerate(h.leaves)}
    top, children = _rooted_children(h, j)
    steps: list[dict] = []
    failures: list[str] = []

    for i in range(len(h.leaves)):
        if i == j:
            continue
        ok = cert.relations[f"F{i}"] <= M
        steps.append({"op": "bound", "block": f"F{i}", "by": "M", "holds": ok})
        if not ok:
            failures.append(f"F{i} is not inside M")

    def bound(v: int) -> tuple[str, TransitionRelation]:
        if not children[v]:
            name = f"F{leaf_pos[v]}"
            return name, cert.relations[name]
        (ln, lr), (rn, rr) = (bound(w) for w in children[v])
        inside = lr <= M and rr <= M
        result = compose_relations(lr, rr, "odot") - DPT_ALT
        name = f"X{v}"
        steps.append({"op": "odot", "node": name, "left": ln, "right": rn,
                      "parts_inside_M": inside, "result": result, "inside_M_prime": result <= M_PRIME})
        if not inside:
            failures.append(f"{name}: a part is not inside M")
        if not result <= M_PRIME:
            failures.append(f"{name} is not inside M'")
        return name, result

    xname, x = bound(top)
    y = compose_relations(cert.relations[f"B{j}"], x, "weld") & A
    steps.append({"op": "weld", "node": "Y", "left": f"B{j}", "right": xname, "result": y,
                  "collineator": y <= C})
    if not y <= C:
        failures.append("Y is not a collineator")
    z = compose_relations(cert.relations[f"D{j}"], y, "join")
    stationary = z & STATIONARY
    steps.append({"op": "join", "node": "Z", "left": f"D{j}", "right": "Y", "result": z,
                  "inside_ang_ls": z <= ANG_LS, "stationary": [str(t) for t in stationary]})
    if len(stationary):
        failures.append("Z admits a stationary transition")
    if failures:
        return steps, "inconclusive: " + "; ".join(failures)
    return steps, "no T-flow: the closure of Z admits no stationary transition"


def halin_certificate(snark: HalinSnark, removed: int = 0) -> Certificate:
    k = len(snark.fragments)
    if not 0 <= removed < k:
        raise ValueError(f"removed index {removed} out of range")
    rels: dict[str, TransitionRelation] = {}
    for i, f in enumerate(snark.fragments):
        if i == removed:
            rels[f"D{i}"] = transition_relation(f.D)
            rels[f"B{i}"] = weighted_transition_relation(f.B)
        else:
            rels[f"F{i}"] = fragment_relation(f)
    structure = {"tree": _thaw(snark.halin.tree), "removed": removed,
                 "tree_vertices": {str(v): w for v, w in sorted(snark.tree_vertices.items())}}
    cert = Certificate("halin-inductive", snark.blocks, rels, structure)
    cert.steps, cert.conclusion = _replay_halin(cert)
    return cert


def _thaw(spec) -> list:
    return [_thaw(c) for c in spec]


def _check_partition(g: Multipole, blocks: dict[str, dict], extra: Sequence[int]) -> None:
    seen: set[int] = set()
    for name, b in blocks.items():
        vs = set(b["vertices"])
        if vs & seen:
            raise CertificateMismatch(f"block {name} overlaps another block")
        seen |= vs
    if seen & set(extra):
        raise CertificateMismatch("tree vertices overlap a block")
    seen |= set(extra)
    if seen != set(range(g.n)):
        raise CertificateMismatch("blocks do not partition the vertex set")
    for name, b in blocks.items():
        try:
            _block_multipole(g, b)
        except MultipoleError as exc:
            raise CertificateMismatch(f"block {name}: {exc}") from exc


def _require(cond: bool, msg: str) -> None:
    if not cond:
        raise CertificateMismatch(msg)


def _check_perimeter(g: Multipole, blocks: dict[str, dict], k: int) -> None:
    for i in range(k):
        d, b, nd = blocks[f"D{i}"], blocks[f"B{i}"], blocks[f"D{(i + 1) % k}"]
        _require(d["outputs"] == b["inputs"], f"D{i} is not joined to B{i}")
        _require(b["outputs"] == nd["inputs"], f"B{i} is not joined to D{(i + 1) % k}")
        _require(len(b.get("residual", [])) == 1, f"B{i} needs one residual edge")


def _residual_end(g: Multipole, block: dict) -> int:
    u, v = block["residual"][0]
    inside = set(block["vertices"])
    return v if u in inside else u


def _check_halin_structure(g: Multipole, cert: Certificate) -> None:
    h = build_halin(cert.structure["tree"])
    k = len(h.leaves)
    tv = {int(v): w for v, w in cert.structure["tree_vertices"].items()}
    _require(set(tv) == set(h.internal), "tree vertex map does not match the tree")
    _require(set(cert.blocks) == {f"{p}{i}" for i in range(k) for p in "DB"}, "unexpected block names")
    _check_partition(g, cert.blocks, list(tv.values()))
    _check_perimeter(g, cert.blocks, k)
    for i, leaf in enumerate(h.leaves):
        _require(_residual_end(g, cert.blocks[f"B{i}"]) == tv[h.parent[leaf]],
                 f"residual edge of B{i} does not reach its tree vertex")
    for v in h.internal:
        want = sorted(tv[w] for w in h.neighbours_in_tree(v) if w in tv)
        got = sorted(w for w in g.neighbours(tv[v]) if w in tv.values())
        _require(want == got, f"tree vertex {tv[v]} has the wrong tree neighbours")


def _check_windmill_structure(g: Multipole, cert: Certificate) -> None:
    hub = cert.structure["hub"]
    _require(set(cert.blocks) == {f"{p}{i}" for i in range(3) for p in "DB"}, "unexpected block names")
    _check_partition(g, cert.blocks, [hub])
    _check_perimeter(g, cert.blocks, 3)
    for i in range(3):
        _require(_residual_end(g, cert.blocks[f"B{i}"]) == hub, f"B{i} is not attached to the hub")


def _check_chain_structure(g: Multipole, cert: Certificate) -> None:
    order = cert.structure["order"]
    _require(set(order) == set(cert.blocks), "chain order does not match the blocks")
    _check_partition(g, cert.blocks, [])
    for a, b in zip(order, order[1:] + order[:1]):
        _require(cert.blocks[a]["outputs"] == cert.blocks[b]["inputs"], f"{a} is not joined to {b}")


def _recompute(g: Multipole, blocks: dict[str, dict], names: Sequence[str], threads: int) -> dict[str, TransitionRelation]:
    """Fresh relations for ``names``; blocks that extract to identical poles are computed once."""
    jobs: dict[str, tuple[Multipole, ...]] = {}
    for name in names:
        if name in blocks:
            jobs[name] = (_block_multipole(g, blocks[name]),)
        elif name.startswith("F") and f"D{name[1:]}" in blocks:
            i = name[1:]
            jobs[name] = (_block_multipole(g, blocks[f"D{i}"]), _block_multipole(g, blocks[f"B{i}"]))
        else:
            raise CertificateMismatch(f"no block for relation {name!r}")

    def one(parts: tuple[Multipole, ...]) -> TransitionRelation:
        if len(parts) == 1:
            return relation_of(parts[0], use_cache=False)
        return chain_relation(list(parts), use_cache=False)

    distinct = list(dict.fromkeys(jobs.values()))
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = dict(zip(distinct, pool.map(one, distinct)))
    else:
        results = {parts: one(parts) for parts in distinct}
    return {name: results[parts] for name, parts in jobs.items()}


def _same_steps(a: list[dict], b: list[dict]) -> bool:
    return json.dumps([_step_json(s) for s in a], sort_keys=True) == \
        json.dumps([_step_json(s) for s in b], sort_keys=True)


def verify_certificate(cert: Certificate, g: Multipole, threads: int = 1) -> bool:
    """Replay a certificate against ``g`` without using cached relations.

    Raises CertificateMismatch when the layout does not describe ``g``, a
    stored relation differs from the recomputed one, or a recorded step
    differs from its replay.  Returns True when the conclusion is that ``g``
    has no T-flow.
    """
    if cert.kind == "halin-inductive":
        _check_halin_structure(g, cert)
        replay = _replay_halin
    elif cert.kind == "windmill-walk":
        _check_windmill_structure(g, cert)
        replay = _replay_windmill
    elif cert.kind == "composite":
        _check_chain_structure(g, cert)
        replay = _replay_composite
    else:
        raise CertificateMismatch(f"unknown certificate kind {cert.kind!r}")
    names = sorted(cert.relations)
    fresh = _recompute(g, cert.blocks, names, threads)
    for name in names:
        if fresh[name] != cert.relations[name]:
            raise CertificateMismatch(f"relation of block {name} differs from the recorded one")
    steps, conclusion = replay(cert)
    if not _same_steps(steps, cert.steps) or conclusion != cert.conclusion:
        raise CertificateMismatch("derivation steps differ from their replay")
    return conclusion.startswith("no T-flow")


# -- Halin dipoles ---------------------------------------------------------


def halin_dipole(snark: HalinSnark, j: int = 0, variant: str = "22") -> Multipole:
    """Halin (2,2;1)-pole (``"22;1"``), Halin (2,2)-pole (``"22"``) or
    extended Halin (2,2)-pole (``"ext"``) obtained at fragment ``j``.

    The output connector is the one of the fragment preceding ``j``.
    """
    g = snark.graph
    k = len(snark.fragments)
    d, b = snark.blocks[f"D{j}"], snark.blocks[f"B{j}"]
    d_in, d_out = _edge_ids(g, d["inputs"]), _edge_ids(g, d["outputs"])
    if variant == "22;1":
        gone = set(d["vertices"]) | set(b["vertices"])
        rest = [v for v in range(g.n) if v not in gone]
        return extract_block(g, rest, [_edge_ids(g, b["outputs"]), d_in], _edge_ids(g, b["residual"]))
    if variant == "22":
        gone = set(d["vertices"])
        rest = [v for v in range(g.n) if v not in gone]
        return extract_block(g, rest, [d_out, d_in])
    if variant == "ext":
        inside = set(d["vertices"])
        edges = list(g.edges)
        ins, outs = [], []
        for t, e in enumerate(d_in):
            u, v = edges[e]
            x, y = (u, v) if u in inside else (v, u)
            edges[e] = (x, f"i{t}")
            edges.append((y, f"o{t}"))
            ins.append(f"i{t}")
            outs.append(f"o{t}")
        return Multipole(g.n, tuple(edges), (tuple(ins), tuple(outs)))
    raise ValueError(f"unknown Halin dipole variant {variant!r}")


# -- composite families ----------------------------------------------------


@dataclass
class Composite:
    graph: Multipole
    blocks: dict[str, dict]
    certificate: Certificate | None = None


def _chain_graph(parts: Sequence[Multipole]) -> tuple[Multipole, dict[str, dict]]:
    names = [f"P{t}" for t in range(len(parts))]
    u, offsets = disjoint_union(parts, [n + "." for n in names])
    pairs = []
    m = len(parts)
    for t in range(m):
        a, b = parts[t], parts[(t + 1) % m]
        pairs += [(f"{names[t]}.{a.outputs[s]}", f"{names[(t + 1) % m]}.{b.inputs[s]}") for s in range(2)]
    g, ids = junctions(u, pairs)
    g = Multipole(g.n, g.edges).check_cubic()
    blocks = {}
    for t, p in enumerate(parts):
        prev = (t - 1) % m
        blocks[names[t]] = {"vertices": list(range(offsets[t], offsets[t] + p.n)),
                            "inputs": [ids[2 * prev], ids[2 * prev + 1]],
                            "outputs": [ids[2 * t], ids[2 * t + 1]]}
    return g, {name: _pairs_layout(g, b) for name, b in blocks.items()}


def _replay_composite(cert: Certificate) -> tuple[list[dict], str]:
    order = cert.structure["order"]
    variant = cert.structure["variant"]
    rels = [cert.relations[n] for n in order]
    steps: list[dict] = []
    failures = []
    if variant == "G+1":
        ok = rels[0] <= D
        steps.append({"op": "bound", "block": order[0], "by": "D", "holds": ok})
        if not ok:
            failures.append(f"{order[0]} is not inside D")
        for n, r in zip(order[1:], rels[1:]):
            ok = r <= C
            steps.append({"op": "bound", "block": n, "by": "C", "holds": ok})
            if not ok:
                failures.append(f"{n} is not a collineator")
    else:
        for n, r in zip(order, rels):
            ok = r <= ANG_LS
            steps.append({"op": "bound", "block": n, "by": "ang->ls", "holds": ok})
            if not ok:
                failures.append(f"{n} is not inside {{ang->ls}}")
    acc = rels[0]
    for n, r in zip(order[1:], rels[1:]):
        acc = compose_relations(acc, r, "join")
        steps.append({"op": "join", "right": n, "result": acc})
    stationary = acc & STATIONARY
    steps.append({"op": "closure", "stationary": [str(t) for t in stationary]})
    if len(stationary):
        failures.append("the chain admits a stationary transition")
    if failures:
        return steps, "inconclusive: " + "; ".join(failures)
    return steps, "no T-flow: the chain admits no stationary transition"


def composite_family(parts: Sequence[Multipole], variant: str = "G+1", certify: bool = True) -> Composite:
    """[D o Y1 o ... o Yk] (G+1) or [Z1 o ... o Zk] (G+2)."""
    if variant not in ("G+1", "G+2"):
        raise InvalidParts(f"unknown variant {variant!r}")
    if not parts or any(p.kind != (2, 2, 0) for p in parts):
        raise InvalidParts("all parts must be (2,2)-poles")
    if variant == "G+1" and len(parts) < 2:
        raise InvalidParts("G+1 needs a decollineator and at least one collineator")
    g, blocks = _chain_graph(parts)
    comp = Composite(g, blocks)
    if certify:
        names = list(blocks)
        rels = {n: transition_relation(p) for n, p in zip(names, parts)}
        cert = Certificate("composite", blocks, rels, {"variant": variant, "order": names})
        cert.steps, cert.conclusion = _replay_composite(cert)
        comp.certificate = cert
    return comp


# -- the even-order family -------------------------------------------------

_BASE_BLOCKS = {
    42: ["Heawood"],
    44: ["GP(8,3)"],
    48: ["GP(10,3)"],
    50: ["Heawood", "Heawood"],
    52: ["GP(12,5)"],
}


def even_order_family(n: int, certify: bool = True) -> HalinSnark:
    """A nontrivial Halin snark of order exactly ``n`` (even, n >= 42).

    Orders 42, 44, 48, 50 and 52 come from W34 with one or two K33 blocks
    replaced by larger bipartite blocks, order 46 is the treelike snark on
    the 6-vertex Halin graph, and every further +12 inserts the Heawood
    (2,2)-pole into the bipartite part of the smallest fragment.
    """
    if n % 2 or n < 42:
        raise UnsupportedOrder(f"order {n} is not an even integer >= 42")
    base = next(b for b in range(42, 54, 2) if (n - b) % 12 == 0)
    steps = (n - base) // 12
    if base == 46:
        tree = caterpillar(2)
        frags = [petersen_fragment()] * 4
    else:
        tree = ((), (), ())
        frags = [petersen_fragment()] * 3
        for i, blk in enumerate(_BASE_BLOCKS[base]):
            frags[i] = fragment("Petersen", blk)
    frags = list(frags)
    for _ in range(steps):
        i = min(range(len(frags)), key=lambda x: (frags[x].order, x))
        frags[i] = frags[i].extended(heawood_dipole(), name=frags[i].name + "+Hw")
    snark = halin_snark(tree, frags, certify=False)
    if snark.order != n:
        raise AssertionError(f"built order {snark.order}, wanted {n}")
    if certify:
        removed = max(range(len(frags)), key=lambda x: (frags[x].order, -x))
        snark.certificate = halin_certificate(snark, removed)
    return snark


def direct_no_tflow(g: Multipole, cap: int = 60, budget: int | None = None) -> bool | None:
    """Direct T-flow search when the order is within ``cap``; None when skipped."""
    if g.n > cap:
        return None
    kw = {} if budget is None else {"budget": budget}
    return find_tflow(g, **kw) is None
