"""Transition relations of (2,2)- and (2,2;1)-poles and their composition.

A transition records the unordered pair of values on the input connector and
the pair on the output connector under some T-flow (T = T0 throughout); for
(2,2;1)-poles the weight of the residual value is recorded as well.  At the
shape level each pair is replaced by its shape.  Weight ``0`` stands for an
unweighted transition.
"""

from __future__ import annotations

import json
import re
from collections import defaultdict
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

from .flows import DEFAULT_NODE_BUDGET, tflow_solver
from .geometry import T0, Shape, Tetrahedron, pair
from .multipole import (
    ArityMismatch,
    Multipole,
    bipartition,
    disjoint_union,
    junction,
    remove_path,
)


class WeightArityMismatch(ValueError):
    pass


class NotBipartite(ValueError):
    pass


@dataclass(frozen=True, order=True)
class ShapeTransition:
    src: Shape
    dst: Shape
    weight: int = 0

    def __str__(self) -> str:
        arrow = f"-{self.weight}->" if self.weight else "->"
        return f"{self.src}{arrow}{self.dst}"

    def reversed(self) -> "ShapeTransition":
        return ShapeTransition(self.dst, self.src, self.weight)


@dataclass(frozen=True, order=True)
class PairTransition:
    src: tuple[int, int]
    dst: tuple[int, int]
    weight: int = 0

    @property
    def trace(self) -> int:
        return self.src[0] ^ self.src[1]

    def shape(self, tetra: Tetrahedron = T0, split: bool = False) -> ShapeTransition:
        return ShapeTransition(tetra.classify_pair(*self.src, merge_degenerate=not split),
                               tetra.classify_pair(*self.dst, merge_degenerate=not split),
                               self.weight)


class TransitionRelation:
    """A set of shape transitions, optionally backed by the pair-level relation.

    Equality, hashing and the set operators look at the shape level only.
    """

    __slots__ = ("transitions", "pairs", "split")

    def __init__(self, transitions: Iterable[ShapeTransition] = (),
                 pairs: Iterable[PairTransition] | None = None, split: bool = False):
        self.pairs = None if pairs is None else frozenset(pairs)
        self.split = split
        if self.pairs is not None:
            derived = frozenset(p.shape(T0, split) for p in self.pairs)
            given = frozenset(transitions)
            if given and given != derived:
                raise ValueError("shape level disagrees with the pair level")
            self.transitions = derived
        else:
            self.transitions = frozenset(transitions)

    @classmethod
    def from_pairs(cls, pairs: Iterable[PairTransition], split: bool = False) -> "TransitionRelation":
        return cls((), pairs, split)

    # -- set behaviour ---------------------------------------------------

    def __iter__(self) -> Iterator[ShapeTransition]:
        return iter(sorted(self.transitions))

    def __len__(self) -> int:
        return len(self.transitions)

    def __contains__(self, t: object) -> bool:
        if isinstance(t, str):
            t = parse_relation(t).only()
        return t in self.transitions

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, TransitionRelation):
            return NotImplemented
        return self.split == other.split and self.transitions == other.transitions

    def __hash__(self) -> int:
        return hash((self.split, self.transitions))

    def __le__(self, other: "TransitionRelation") -> bool:
        return self.transitions <= other.transitions

    def __lt__(self, other: "TransitionRelation") -> bool:
        return self.transitions < other.transitions

    def __or__(self, other: "TransitionRelation") -> "TransitionRelation":
        return TransitionRelation(self.transitions | other.transitions, split=self.split)

    def __and__(self, other: "TransitionRelation") -> "TransitionRelation":
        return TransitionRelation(self.transitions & other.transitions, split=self.split)

    def __sub__(self, other: "TransitionRelation") -> "TransitionRelation":
        return TransitionRelation(self.transitions - other.transitions, split=self.split)

    def __repr__(self) -> str:
        return "{" + ", ".join(map(str, self)) + "}"

    def only(self) -> ShapeTransition:
        if len(self.transitions) != 1:
            raise ValueError("relation does not consist of a single transition")
        return next(iter(self.transitions))

    @property
    def weighted(self) -> bool:
        return any(t.weight for t in self.transitions)

    @property
    def unweighted(self) -> bool:
        return all(t.weight == 0 for t in self.transitions)

    def merged(self) -> "TransitionRelation":
        """The same relation over the merged alphabet."""
        if self.pairs is not None:
            return TransitionRelation.from_pairs(self.pairs, split=False)
        return TransitionRelation(
            (ShapeTransition(t.src.merged(), t.dst.merged(), t.weight) for t in self.transitions))

    def shapes_only(self) -> "TransitionRelation":
        return TransitionRelation(self.transitions, split=self.split)

    # -- serialisation ---------------------------------------------------

    def to_json(self) -> dict:
        data: dict = {"split": self.split,
                      "shapes": [[t.src.value, t.dst.value, t.weight or None] for t in self]}
        if self.pairs is not None:
            data["pairs"] = [[list(p.src), list(p.dst), p.weight or None] for p in sorted(self.pairs)]
        return data

    @classmethod
    def from_json(cls, data: dict) -> "TransitionRelation":
        split = bool(data.get("split", False))
        if "pairs" in data:
            pairs = [PairTransition(tuple(a), tuple(b), w or 0) for a, b, w in data["pairs"]]
            rel = cls.from_pairs(pairs, split)
            shapes = cls(_shape_rows(data["shapes"]), split=split)
            if shapes != rel:
                raise ValueError("shape and pair tables disagree")
            return rel
        return cls(_shape_rows(data["shapes"]), split=split)

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)

    def to_dot(self, name: str = "T") -> str:
        """Diagram in the style of the usual transition figures.

        Symmetric pairs are drawn once without arrow heads; weight-2
        transitions are bold.
        """
        lines = [f"digraph {json.dumps(name)} {{", "  node [shape=plaintext];"]
        done = set()
        for t in self:
            if t in done:
                continue
            rev = t.reversed()
            both = rev in self.transitions and rev != t
            done.add(t)
            if both:
                done.add(rev)
            attrs = []
            if both:
                attrs.append("dir=none")
            if t.weight:
                attrs.append(f'label="{t.weight}"')
            if t.weight == 2:
                attrs.append("style=bold")
            suffix = f" [{', '.join(attrs)}]" if attrs else ""
            lines.append(f"  {t.src.value} -> {t.dst.value}{suffix};")
        lines.append("}")
        return "\n".join(lines) + "\n"


def _shape_rows(rows) -> list[ShapeTransition]:
    return [ShapeTransition(Shape(a), Shape(b), w or 0) for a, b, w in rows]


_TOKEN = re.compile(r"(\w+)\s*(<?)-(?:(\d)-)?>\s*(\w+)")


def parse_relation(text: str, split: bool = False) -> TransitionRelation:
    """Parse ``"ang->ls, hl<-1->dpt, ls-2->ax"``; ``<->`` adds both directions."""
    out = set()
    pos = 0
    text = text.strip()
    for m in _TOKEN.finditer(text):
        gap = text[pos:m.start()].strip(" ,;\n\t")
        if gap:
            raise ValueError(f"cannot parse {gap!r}")
        pos = m.end()
        a, both, w, b = m.groups()
        t = ShapeTransition(Shape(a), Shape(b), int(w) if w else 0)
        out.add(t)
        if both:
            out.add(t.reversed())
    if text[pos:].strip(" ,;\n\t"):
        raise ValueError(f"cannot parse {text[pos:]!r}")
    return TransitionRelation(out, split=split)


# -- named relations -----------------------------------------------------

A = parse_relation("dpt->dpt, hl->hl, alt->alt, ax->ax, ang->ang, ang->ls, ls->ang, ls->ls")
D = parse_relation("dpt->dpt, alt->alt, ax->ax, ang->ang, ang->ls, ls->ang")
C = parse_relation("ls->ls, hl->hl")
B = parse_relation("""
    dpt<-2->ls, ax<-2->ls, ang<-2->dpt, ang<-2->ls, hl<-2->hl, alt<-2->alt,
    hl<-2->alt, hl<-1->dpt, hl<-1->ls, alt<-1->ls
""")
DB = parse_relation("""
    dpt-2->ls, dpt-2->ang, dpt-1->hl, alt-2->alt, alt-2->hl, alt-1->ls, ax-2->ls,
    ang-2->dpt, ang-2->ls, ang-2->ax, ang-2->ang, ang-1->hl, ang-1->alt,
    ls-2->dpt, ls-2->ls
""")
M = DB | parse_relation("ax-1->hl, ls-1->hl")
DPT_ALT = parse_relation("dpt<-1->alt")
ANG_LS = parse_relation("ang->ls")
STATIONARY = parse_relation("dpt->dpt, ls->ls, hl->hl, ang->ang, alt->alt, ax->ax")


def compose_relations(r1: TransitionRelation, r2: TransitionRelation, op: str = "join") -> TransitionRelation:
    """Compose through a common middle shape.

    ``join``: at most one side weighted, the weight is inherited.
    ``odot``: both weighted; (i, j) combine only when i + j <= 3, giving 3 - ij.
    ``weld``: both weighted; the residual semiedges are joined, so i == j is
    required and the result is unweighted.
    """
    if r1.split != r2.split:
        raise ValueError("cannot compose relations over different alphabets")
    if op == "join":
        if r1.weighted and r2.weighted:
            raise WeightArityMismatch("join of two weighted relations; use odot or weld")
    elif op in ("odot", "weld"):
        if not (all(t.weight for t in r1.transitions) and all(t.weight for t in r2.transitions)):
            raise WeightArityMismatch(f"{op} needs two weighted relations")
    else:
        raise ValueError(f"unknown composition {op!r}")
    by_src: dict[Shape, list[ShapeTransition]] = defaultdict(list)
    for t in r2.transitions:
        by_src[t.src].append(t)
    out = set()
    for a in r1.transitions:
        for b in by_src[a.dst]:
            if op == "join":
                w = a.weight or b.weight
            elif op == "odot":
                if a.weight + b.weight > 3:
                    continue
                w = 3 - a.weight * b.weight
            else:
                if a.weight != b.weight:
                    continue
                w = 0
            out.add(ShapeTransition(a.src, b.dst, w))
    return TransitionRelation(out, split=r1.split)


def compose_chain(relations: Sequence[TransitionRelation], op: str = "join") -> TransitionRelation:
    out = relations[0]
    for r in relations[1:]:
        out = compose_relations(out, r, op)
    return out


MM = compose_relations(M, M, "odot")
M_PRIME = MM - DPT_ALT


def _self_check() -> None:
    assert compose_relations(D, B, "join") == DB, "D o B table is inconsistent"
    assert D <= A and C <= A and not (D & C), "admissible tables are inconsistent"
    assert all(t.reversed() in B for t in B), "B must be symmetric"
    assert DPT_ALT <= MM, "dpt<->alt must occur in M odot M"
    assert M_PRIME <= M, "M' must be contained in M"


_self_check()


# -- relations of concrete dipoles ---------------------------------------

_CACHE: dict[tuple[Multipole, int], frozenset[PairTransition]] = {}


def _boundary_edges(d: Multipole) -> list[int]:
    idx = d.semiedge_edge
    return [idx[s] for s in d.inputs + d.outputs + d.residual]


def _pair_transitions(d: Multipole, weighted: bool, budget: int, use_cache: bool) -> frozenset[PairTransition]:
    key = (d, int(weighted))
    if use_cache and key in _CACHE:
        return _CACHE[key]
    solver = tflow_solver(d, budget)
    edges = _boundary_edges(d)
    out = set()
    for vals in solver.projections(edges):
        w = T0.weight(vals[4]) if weighted else 0
        out.add(PairTransition(pair(vals[0], vals[1]), pair(vals[2], vals[3]), w))
    result = frozenset(out)
    if use_cache:
        _CACHE[key] = result
    return result


_TUPLES: dict[Multipole, frozenset[tuple[int, ...]]] = {}


def boundary_tuples(d: Multipole, budget: int = DEFAULT_NODE_BUDGET,
                    use_cache: bool = True) -> frozenset[tuple[int, ...]]:
    """Ordered values on (inputs, outputs, residual) that extend to a T0-flow."""
    if use_cache and d in _TUPLES:
        return _TUPLES[d]
    result = frozenset(tflow_solver(d, budget).projections(_boundary_edges(d)))
    if use_cache:
        _TUPLES[d] = result
    return result


def chain_relation(parts: Sequence[Multipole], level: str = "shapes", split: bool = False,
                   use_cache: bool = True, budget: int = DEFAULT_NODE_BUDGET) -> TransitionRelation:
    """Relation of parts[0] o parts[1] o ... (identity pairings), from the parts alone.

    Flows on a join are exactly the flows on the parts that agree on the
    joined edges, so joining ordered boundary tuples reproduces the relation
    of the composed dipole without searching it as a whole.  At most one
    part may carry a residual semiedge.
    """
    if not parts or any(len(p.connectors) != 2 or len(p.inputs) != 2 or len(p.outputs) != 2 for p in parts):
        raise ArityMismatch("chain_relation needs (2,2)- or (2,2;1)-poles")
    if sum(len(p.residual) for p in parts) > 1:
        raise WeightArityMismatch("at most one part may have a residual semiedge")
    # state: (input pair, current output pair) -> set of residual values (0 = none yet)
    states: dict[tuple[int, int, int, int], set[int]] = {}
    for t in boundary_tuples(parts[0], budget, use_cache):
        states.setdefault(t[:4], set()).add(t[4] if len(t) > 4 else 0)
    for part in parts[1:]:
        by_input: dict[tuple[int, int], list[tuple[int, ...]]] = {}
        for t in boundary_tuples(part, budget, use_cache):
            by_input.setdefault(t[:2], []).append(t)
        nxt: dict[tuple[int, int, int, int], set[int]] = {}
        for (a, b, c, d), res in states.items():
            for t in by_input.get((c, d), ()):
                r2 = t[4] if len(t) > 4 else None
                bucket = nxt.setdefault((a, b, t[2], t[3]), set())
                bucket.update(res if r2 is None else {r2})
        states = nxt
    weighted = any(p.residual for p in parts)
    out = set()
    for (a, b, c, d), res in states.items():
        for r in res:
            out.add(PairTransition(pair(a, b), pair(c, d), T0.weight(r) if weighted else 0))
    rel = TransitionRelation.from_pairs(frozenset(out), split)
    return rel if level == "pairs" else rel.shapes_only()


def clear_cache() -> None:
    _CACHE.clear()
    _TUPLES.clear()


def transition_relation(d: Multipole, level: str = "shapes", split: bool = False,
                        use_cache: bool = True, budget: int = DEFAULT_NODE_BUDGET) -> TransitionRelation:
    """Relation of a (2,2)-pole, with the pair level kept when ``level='pairs'``."""
    if d.kind != (2, 2, 0):
        raise ArityMismatch(f"expected a (2,2)-pole, got kind {d.kind}")
    rel = TransitionRelation.from_pairs(_pair_transitions(d, False, budget, use_cache), split)
    return rel if level == "pairs" else rel.shapes_only()


def weighted_transition_relation(d: Multipole, level: str = "shapes", split: bool = False,
                                 use_cache: bool = True, budget: int = DEFAULT_NODE_BUDGET) -> TransitionRelation:
    """Relation of a (2,2;1)-pole; weights are those of the residual value."""
    if d.kind != (2, 2, 1):
        raise ArityMismatch(f"expected a (2,2;1)-pole, got kind {d.kind}")
    rel = TransitionRelation.from_pairs(_pair_transitions(d, True, budget, use_cache), split)
    return rel if level == "pairs" else rel.shapes_only()


def relation_of(d: Multipole, **kw) -> TransitionRelation:
    """Weighted or unweighted relation, chosen by the kind of ``d``."""
    if d.kind == (2, 2, 1):
        return weighted_transition_relation(d, **kw)
    return transition_relation(d, **kw)


# -- dipole composition --------------------------------------------------


def compose_dipoles(m1: Multipole, m2: Multipole, op: str = "join",
                    pairing: Sequence[int] = (0, 1)) -> Multipole:
    """M1 o M2 (output of M1 joined to input of M2) or M1 (.) M2.

    The k-th output semiedge of ``m1`` is joined to input ``pairing[k]`` of
    ``m2``.  For ``odot`` the two residual semiedges are attached to a new
    vertex, numbered last, carrying the new residual semiedge.
    """
    if len(m1.connectors) != 2 or len(m2.connectors) != 2:
        raise ArityMismatch("compose_dipoles needs two dipoles")
    if len(m1.outputs) != len(m2.inputs):
        raise ArityMismatch(f"output of size {len(m1.outputs)} cannot meet input of size {len(m2.inputs)}")
    if op == "odot" and not (len(m1.residual) == 1 and len(m2.residual) == 1):
        raise ArityMismatch("odot needs two (2,2;1)-poles")
    if op not in ("join", "odot"):
        raise ValueError(f"unknown operation {op!r}")
    pairing = list(pairing)
    if sorted(pairing) != list(range(len(m1.outputs))):
        raise ArityMismatch(f"{pairing} is not a pairing of the connectors")
    parts = [m1, m2]
    prefixes = ["a.", "b."]
    if op == "odot":
        parts.append(Multipole(1, ((0, "s0"), (0, "s1"), (0, "s2")), (("s0", "s1", "s2"),)))
        prefixes.append("v.")
    u, _ = disjoint_union(parts, prefixes)
    for k, j in enumerate(pairing):
        u = junction(u, "a." + m1.outputs[k], "b." + m2.inputs[j])
    inputs = tuple("a." + s for s in m1.inputs)
    outputs = tuple("b." + s for s in m2.outputs)
    residual = tuple("a." + s for s in m1.residual) + tuple("b." + s for s in m2.residual)
    if op == "odot":
        u = junction(u, residual[0], "v.s0")
        u = junction(u, residual[1], "v.s1")
        residual = ("v.s2",)
    return u.with_connectors((inputs, outputs), residual).canonical_names()


def weld_residuals(m: Multipole) -> Multipole:
    """Join the two residual semiedges of a (2,2;2)-pole into an edge."""
    if len(m.residual) != 2:
        raise ArityMismatch("weld needs exactly two residual semiedges")
    return junction(m, *m.residual).canonical_names()


# -- classification ------------------------------------------------------

STATIONARY_TAG = "stationary"
DECOLLINEATOR = "decollineator"
DEANGULATOR = "deangulator"
COLLINEATOR = "collineator"


def classify_dipole(x: Multipole | TransitionRelation) -> set[str]:
    rel = x if isinstance(x, TransitionRelation) else transition_relation(x)
    rel = rel.merged()
    tags = set()
    ts = rel.transitions
    sh = parse_relation("ang->ls, ls->ang").transitions
    if not (ts & sh):
        tags.add(STATIONARY_TAG)
    if not (ts & C.transitions):
        tags.add(DECOLLINEATOR)
    if parse_relation("ang->ang").only() not in ts:
        tags.add(DEANGULATOR)
    if ts <= C.transitions:
        tags.add(COLLINEATOR)
    return tags


def check_admissible(r: TransitionRelation, tetra: Tetrahedron = T0) -> tuple[bool, list[str]]:
    """Containment in A plus the pair-level refinements of admissible transitions."""
    violations = [f"{t} is not admissible" for t in r.merged() if t not in A.transitions]
    for p in sorted(r.pairs or ()):
        s = p.shape(tetra, split=False)
        (x, y), (x2, y2) = p.src, p.dst
        if x ^ y != x2 ^ y2:
            violations.append(f"{p}: traces differ")
            continue
        if s.src == s.dst == Shape.HL:
            # the target of a half-line {c, c+c'} is the far corner c'
            if _hl_target(tetra, x, y) != _hl_target(tetra, x2, y2):
                violations.append(f"{p}: half-lines with different targets")
        elif s.src == s.dst == Shape.LS:
            if p.src != p.dst:
                violations.append(f"{p}: segment transition changes the segment")
        elif {s.src, s.dst} == {Shape.ANG, Shape.LS}:
            ang, seg = (p.src, p.dst) if s.src == Shape.ANG else (p.dst, p.src)
            apex = tetra.coefficients(ang[0]) & tetra.coefficients(ang[1])
            c1 = next(c for k, c in enumerate(tetra.corners) if apex >> k & 1)
            if pair(ang[0] ^ c1, ang[1] ^ c1) != seg:
                violations.append(f"{p}: segment is not opposite the angle")
        elif s.src == s.dst == Shape.ALT:
            if _triangle(tetra, p.src) != _triangle(tetra, p.dst):
                violations.append(f"{p}: altitudes of different triangles")
    return (not violations, violations)


def _hl_target(tetra: Tetrahedron, x: int, y: int) -> int:
    corner, mid = (x, y) if tetra.weight(x) == 1 else (y, x)
    return corner ^ mid


def _triangle(tetra: Tetrahedron, pr: tuple[int, int]) -> int:
    return tetra.coefficients(pr[0]) | tetra.coefficients(pr[1])


def three_pole_values(g: Multipole, v: int, budget: int = DEFAULT_NODE_BUDGET) -> set[tuple[int, int, int]]:
    """Value triples on the dangling edges of G_v over all T0-flows."""
    m = remove_path(g, [v])
    idx = m.semiedge_edge
    edges = [idx[s] for s in m.connectors[0]]
    return tflow_solver(m, budget).projections(edges)


def bip_3pole_check(g: Multipole, v: int, require_bipartite: bool = True) -> bool:
    """True iff every T-flow on G_v puts a line of T on the three semiedges."""
    if require_bipartite and bipartition(g) is None:
        raise NotBipartite("graph is not bipartite")
    lines = set(T0.lines)
    return all(frozenset(t) in lines for t in three_pole_values(g, v))
