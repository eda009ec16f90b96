"""Tetrahedral flows, perfect matching covers and circular flows.

The T-flow search runs over T0 (the tetrahedron of unit vectors), where the
24 coordinate permutations are exactly the collineations fixing T0.  Results
for any other tetrahedron are obtained by applying a collineation.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from math import gcd
from typing import Iterable, Iterator, Literal, Sequence

from .geometry import (
    LAMBDA,
    S4_TABLES,
    T0,
    T1,
    UNIT_VECTORS,
    Collineation,
    Tetrahedron,
    collineation_from_bases,
    coords,
)
from .multipole import Multipole, has_bridge


class SearchBudgetExceeded(RuntimeError):
    pass


class TooManyMatchings(RuntimeError):
    pass


class NotACover(ValueError):
    pass


class NotAT1Flow(ValueError):
    pass


class NotBridgeless(ValueError):
    pass


DEFAULT_NODE_BUDGET = 10_000_000


def _bits(mask: int) -> Iterator[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def _refine(blocks: tuple[int, ...], value: int) -> tuple[int, ...]:
    out = []
    for b in blocks:
        for part in (b & value, b & ~value):
            if part:
                out.append(part)
    return tuple(out)


def _stabiliser_blocks(values: Iterable[int]) -> tuple[int, ...]:
    blocks: tuple[int, ...] = (0b1111,)
    for v in values:
        blocks = _refine(blocks, v)
    return blocks


class LineCSP:
    """Edge labelling of a multipole where each vertex sees a line from ``triples``.

    Domains are bit masks over the 16 vectors of GF(2)^4.  Propagation keeps
    every vertex generalised-arc-consistent; branching picks the edge with the
    smallest domain, ties broken by DFS discovery order.  When the constraint
    set is invariant under coordinate permutations (``symmetric``), existence
    queries branch only on one value per orbit of the current stabiliser.
    """

    def __init__(self, m: Multipole, triples: Sequence[tuple[int, int, int]],
                 symmetric: bool = False, budget: int = DEFAULT_NODE_BUDGET):
        self.m = m
        self.triples = tuple(triples)
        self.symmetric = symmetric
        self.budget = budget
        self.nodes = 0
        self.values = 0
        for t in self.triples:
            for a in t:
                self.values |= 1 << a
        self.n_edges = len(m.edges)
        self.vedges = [tuple(m.incidence[v]) for v in range(m.n)]
        self.has_loop = any(len(set(es)) < len(es) for es in self.vedges)
        self.evert: list[list[int]] = [[] for _ in range(self.n_edges)]
        for v, es in enumerate(self.vedges):
            if len(es) != 3:
                raise ValueError(f"vertex {v} has degree {len(es)}; T-flows need a cubic multipole")
            for e in es:
                self.evert[e].append(v)
        self.order = self._dfs_edge_order()
        self._sup: dict[int, int] = {}

    def _dfs_edge_order(self) -> list[int]:
        order: list[int] = []
        seen_e = [False] * self.n_edges
        seen_v = [False] * self.m.n
        for s in range(self.m.n):
            if seen_v[s]:
                continue
            stack = [s]
            seen_v[s] = True
            while stack:
                v = stack.pop()
                for e in self.vedges[v]:
                    if not seen_e[e]:
                        seen_e[e] = True
                        order.append(e)
                    for w in self.evert[e]:
                        if not seen_v[w]:
                            seen_v[w] = True
                            stack.append(w)
        order.extend(e for e in range(self.n_edges) if not seen_e[e])
        return order

    def support(self, m1: int, m2: int) -> int:
        key = (m1 << 16) | m2
        r = self._sup.get(key)
        if r is None:
            r = 0
            for a, b, c in self.triples:
                if m1 >> a & 1 and m2 >> b & 1:
                    r |= 1 << c
            self._sup[key] = r
        return r

    def initial_domains(self, fixed: dict[int, int] | None = None) -> list[int] | None:
        dom = [self.values] * self.n_edges
        if fixed:
            for e, val in fixed.items():
                if not self.values >> val & 1:
                    return None
                dom[e] &= 1 << val
        if self.has_loop:
            return None
        if not self.propagate(dom, list(range(self.m.n))):
            return None
        return dom

    def propagate(self, dom: list[int], pending: list[int]) -> bool:
        sup = self._sup
        vedges = self.vedges
        evert = self.evert
        support = self.support
        while pending:
            v = pending.pop()
            a, b, c = vedges[v]
            da, db, dc = dom[a], dom[b], dom[c]
            s = sup.get((db << 16) | dc)
            na = da & (s if s is not None else support(db, dc))
            s = sup.get((da << 16) | dc)
            nb = db & (s if s is not None else support(da, dc))
            s = sup.get((da << 16) | db)
            nc = dc & (s if s is not None else support(da, db))
            if not (na and nb and nc):
                return False
            if na != da:
                dom[a] = na
                pending.extend(evert[a])
            if nb != db:
                dom[b] = nb
                pending.extend(evert[b])
            if nc != dc:
                dom[c] = nc
                pending.extend(evert[c])
        return True

    def _tick(self) -> None:
        self.nodes += 1
        if self.nodes > self.budget:
            raise SearchBudgetExceeded(f"search exceeded {self.budget} nodes")

    def _choose(self, dom: list[int]) -> int:
        best, best_count = -1, 17
        for e in self.order:
            d = dom[e]
            if d & (d - 1):
                c = d.bit_count()
                if c < best_count:
                    best, best_count = e, c
                    if c == 2:
                        break
        return best

    def solutions(self, dom: list[int], blocks: tuple[int, ...] | None = None) -> Iterator[list[int]]:
        """Yield complete domain vectors (all singletons).

        With ``blocks`` set, one solution per explored orbit only; use for
        existence.  With ``blocks=None`` every solution is produced once.
        """
        self._tick()
        e = self._choose(dom)
        if e < 0:
            yield dom
            return
        seen: set[tuple[int, ...]] = set()
        for a in _bits(dom[e]):
            nb = None
            if blocks is not None:
                key = tuple((a & b).bit_count() for b in blocks)
                if key in seen:
                    continue
                seen.add(key)
                nb = _refine(blocks, a)
            nd = dom[:]
            nd[e] = 1 << a
            if self.propagate(nd, list(self.evert[e])):
                yield from self.solutions(nd, nb)

    def first(self, fixed: dict[int, int] | None = None) -> list[int] | None:
        dom = self.initial_domains(fixed)
        if dom is None:
            return None
        blocks = None
        if self.symmetric:
            blocks = _stabiliser_blocks(fixed.values() if fixed else ())
        for sol in self.solutions(dom, blocks):
            return [d.bit_length() - 1 for d in sol]
        return None

    def all(self, fixed: dict[int, int] | None = None) -> Iterator[list[int]]:
        dom = self.initial_domains(fixed)
        if dom is None:
            return
        for sol in self.solutions(dom, None):
            yield [d.bit_length() - 1 for d in sol]

    def projections(self, edges: Sequence[int]) -> set[tuple[int, ...]]:
        """All value tuples on ``edges`` that extend to a full solution."""
        edges = list(edges)
        dom = self.initial_domains()
        if dom is None:
            return set()
        feasible: set[tuple[int, ...]] = set()
        infeasible: set[tuple[int, ...]] = set()
        tables = S4_TABLES if self.symmetric else (tuple(range(16)),)

        def orbit(key: tuple[int, ...]) -> set[tuple[int, ...]]:
            return {tuple(t[x] for x in key) for t in tables}

        def walk(d: list[int], k: int, blocks) -> None:
            if k == len(edges):
                key = tuple(d[e].bit_length() - 1 for e in edges)
                if key in feasible or key in infeasible:
                    return
                inner = _stabiliser_blocks(key) if self.symmetric else None
                found = False
                for _ in self.solutions(d, inner):
                    found = True
                    break
                (feasible if found else infeasible).update(orbit(key))
                return
            e = edges[k]
            seen: set[tuple[int, ...]] = set()
            for a in _bits(d[e]):
                nb = blocks
                if blocks is not None:
                    key = tuple((a & b).bit_count() for b in blocks)
                    if key in seen:
                        continue
                    seen.add(key)
                    nb = _refine(blocks, a)
                nd = d[:]
                nd[e] = 1 << a
                if self.propagate(nd, list(self.evert[e])):
                    walk(nd, k + 1, nb)

        walk(dom, 0, (0b1111,) if self.symmetric else None)
        return feasible


# -- T-flows ---------------------------------------------------------------


@dataclass(frozen=True)
class TFlow:
    """Point of ``tetra`` on every edge (dangling edges included), by edge id."""

    tetra: Tetrahedron
    values: tuple[int, ...]

    def __getitem__(self, edge: int) -> int:
        return self.values[edge]

    def mapped(self, theta: Collineation) -> "TFlow":
        return TFlow(theta.image_of(self.tetra), tuple(theta(v) for v in self.values))

    def to_json(self) -> dict:
        return {"tetra": list(self.tetra.corners),
                "values": {str(e): v for e, v in enumerate(self.values)}}

    @classmethod
    def from_json(cls, data: dict) -> "TFlow":
        vals = data["values"]
        return cls(Tetrahedron(tuple(data["tetra"])), tuple(vals[str(e)] for e in range(len(vals))))


def is_tflow(m: Multipole, flow: TFlow) -> bool:
    """Independent check of the line condition at every vertex."""
    if len(flow.values) != len(m.edges):
        return False
    if any(v not in flow.tetra.points for v in flow.values):
        return False
    lines = set(flow.tetra.lines)
    for v in range(m.n):
        vals = [flow.values[e] for e in m.incidence[v]]
        if len(vals) != 3 or frozenset(vals) not in lines or len(set(vals)) != 3:
            return False
    return True


def kirchhoff_holds(m: Multipole, values: Sequence[int]) -> bool:
    for v in range(m.n):
        s = 0
        for e in m.incidence[v]:
            s ^= values[e]
        if s:
            return False
    return True


def tflow_solver(m: Multipole, budget: int = DEFAULT_NODE_BUDGET) -> LineCSP:
    return LineCSP(m, T0.line_triples, symmetric=True, budget=budget)


def find_tflow(x: Multipole, tetra: Tetrahedron = T0, mode: Literal["first", "count", "enumerate"] = "first",
               budget: int = DEFAULT_NODE_BUDGET):
    """T-flows of a cubic graph or multipole.

    ``first`` returns a TFlow or None, ``count`` the exact number of T-flows,
    ``enumerate`` an iterator over all of them in a fixed order.
    """
    solver = tflow_solver(x, budget)
    theta = collineation_from_bases(UNIT_VECTORS, tetra.corners)
    if mode == "first":
        sol = solver.first()
        if sol is None:
            return None
        flow = TFlow(tetra, tuple(theta(v) for v in sol))
        assert is_tflow(x, flow), "solver produced an invalid flow"
        return flow
    if mode == "count":
        return sum(1 for _ in solver.all())
    if mode == "enumerate":
        return (TFlow(tetra, tuple(theta(v) for v in sol)) for sol in solver.all())
    raise ValueError(f"unknown mode {mode!r}")


def has_tflow(x: Multipole, budget: int = DEFAULT_NODE_BUDGET) -> bool:
    return find_tflow(x, T0, "first", budget) is not None


# -- covers ----------------------------------------------------------------


@dataclass(frozen=True)
class PMCover:
    matchings: tuple[frozenset[int], ...]

    def to_json(self) -> dict:
        return {"matchings": [sorted(m) for m in self.matchings]}

    @classmethod
    def from_json(cls, data: dict) -> "PMCover":
        return cls(tuple(frozenset(m) for m in data["matchings"]))


def is_perfect_matching(g: Multipole, edges: Iterable[int]) -> bool:
    hit = [0] * g.n
    for e in edges:
        u, v = g.edges[e]
        if not (isinstance(u, int) and isinstance(v, int)) or u == v:
            return False
        hit[u] += 1
        hit[v] += 1
    return all(h == 1 for h in hit)


def is_cover(g: Multipole, cover: PMCover) -> bool:
    union: set[int] = set()
    for m in cover.matchings:
        if not is_perfect_matching(g, m):
            return False
        union |= m
    return union == set(range(len(g.edges)))


def _coordinate_bit(i: int) -> int:
    return 1 << (3 - i)


def cover_from_tflow(flow: TFlow, g: Multipole | None = None) -> PMCover:
    """N_i = edges whose T1-value has coordinate i equal to 0."""
    if flow.tetra != T1:
        raise NotAT1Flow("cover_from_tflow expects a T1-flow")
    if g is not None and not is_tflow(g, flow):
        raise NotAT1Flow("values do not form a T1-flow")
    return PMCover(tuple(
        frozenset(e for e, v in enumerate(flow.values) if not v & _coordinate_bit(i)) for i in range(4)))


def tflow_from_cover(cover: PMCover, g: Multipole) -> TFlow:
    """psi(e) has coordinate i equal to 0 exactly when e lies in M_i."""
    if len(cover.matchings) != 4 or not is_cover(g, cover):
        raise NotACover("expected four perfect matchings covering every edge")
    vals = []
    for e in range(len(g.edges)):
        v = 0
        for i, m in enumerate(cover.matchings):
            if e not in m:
                v |= _coordinate_bit(i)
        vals.append(v)
    flow = TFlow(T1, tuple(vals))
    assert is_tflow(g, flow)
    return flow


def cover_from_t0_flow(flow: TFlow, g: Multipole | None = None) -> PMCover:
    if flow.tetra != T0:
        raise ValueError("expected a T0-flow")
    return cover_from_tflow(flow.mapped(LAMBDA), g)


def enumerate_perfect_matchings(g: Multipole, limit: int | None = None) -> list[frozenset[int]]:
    if g.n % 2:
        return []
    adj: list[list[tuple[int, int]]] = [[] for _ in range(g.n)]
    for i, (u, v) in enumerate(g.edges):
        if isinstance(u, int) and isinstance(v, int) and u != v:
            adj[u].append((v, i))
            adj[v].append((u, i))
    matched = [False] * g.n
    chosen: list[int] = []
    out: list[frozenset[int]] = []

    def rec(start: int) -> None:
        v = start
        while v < g.n and matched[v]:
            v += 1
        if v == g.n:
            out.append(frozenset(chosen))
            if limit is not None and len(out) > limit:
                raise TooManyMatchings(f"more than {limit} perfect matchings")
            return
        matched[v] = True
        for w, e in adj[v]:
            if not matched[w]:
                matched[w] = True
                chosen.append(e)
                rec(v + 1)
                chosen.pop()
                matched[w] = False
        matched[v] = False

    rec(0)
    return out


def cover_with_k_matchings(g: Multipole, k: int, max_matchings: int = 200_000) -> PMCover | None:
    """Any k perfect matchings (repetition allowed) whose union is E(g)."""
    if k < 1:
        raise ValueError("k must be positive")
    pms = enumerate_perfect_matchings(g, limit=max_matchings)
    m = len(g.edges)
    full = (1 << m) - 1
    if not pms:
        return None if m else PMCover(())
    masks = []
    for pm in pms:
        x = 0
        for e in pm:
            x |= 1 << e
        masks.append(x)
    containing: list[list[int]] = [[] for _ in range(m)]
    for idx, x in enumerate(masks):
        for e in _bits(x):
            containing[e].append(idx)
    failed: set[tuple[int, int]] = set()
    chosen: list[int] = []

    def rec(covered: int, left: int) -> bool:
        if covered == full:
            return True
        if left == 0 or (covered, left) in failed:
            return False
        best = None
        for e in _bits(full & ~covered):
            if best is None or len(containing[e]) < len(containing[best]):
                best = e
                if len(containing[e]) <= 1:
                    break
        for idx in containing[best]:
            chosen.append(idx)
            if rec(covered | masks[idx], left - 1):
                return True
            chosen.pop()
        failed.add((covered, left))
        return False

    if not rec(0, k):
        return None
    picked = [pms[i] for i in chosen]
    while len(picked) < k:
        picked.append(picked[0])
    return PMCover(tuple(picked))


COLOUR_TRIPLES = tuple((a, b, c) for a in (1, 2, 3) for b in (1, 2, 3) for c in (1, 2, 3)
                       if len({a, b, c}) == 3)


def three_edge_colouring(g: Multipole, budget: int = DEFAULT_NODE_BUDGET) -> tuple[int, ...] | None:
    """Proper colouring with colours 1..3 by edge id, or None."""
    if g.n == 0:
        return tuple(1 for _ in g.edges) if not g.edges else None
    solver = LineCSP(g, COLOUR_TRIPLES, budget=budget)
    # colours are interchangeable: fix the three edges at vertex 0
    es = g.incidence[0]
    if len(set(es)) < 3:
        return None
    return _tuple_or_none(solver.first({es[0]: 1, es[1]: 2, es[2]: 3}))


def _tuple_or_none(x):
    return None if x is None else tuple(x)


def is_3_edge_colourable(g: Multipole) -> bool:
    return three_edge_colouring(g) is not None


LOWER_BOUND_5 = ">=5"


@dataclass(frozen=True)
class PMIResult:
    value: int | str
    witness: object = field(default=None, compare=False)

    @property
    def at_least_5(self) -> bool:
        return self.value in (5, LOWER_BOUND_5)


def perfect_matching_index(g: Multipole, budget: int = DEFAULT_NODE_BUDGET,
                           max_matchings: int = 200_000) -> PMIResult:
    g.check_cubic()
    if has_bridge(g):
        raise NotBridgeless("perfect matching index needs a bridgeless cubic graph")
    col = three_edge_colouring(g, budget)
    if col is not None:
        return PMIResult(3, PMCover(tuple(frozenset(e for e, c in enumerate(col) if c == k) for k in (1, 2, 3))))
    flow = find_tflow(g, T0, "first", budget)
    if flow is not None:
        return PMIResult(4, flow)
    try:
        cover = cover_with_k_matchings(g, 5, max_matchings)
    except TooManyMatchings:
        cover = None
    if cover is not None:
        return PMIResult(5, cover)
    return PMIResult(LOWER_BOUND_5, None)


def dump_witness(witness: object) -> str:
    if isinstance(witness, (TFlow, PMCover)):
        return json.dumps(witness.to_json(), sort_keys=True)
    raise TypeError(f"cannot serialise {type(witness).__name__}")


# -- circular flows ----------------------------------------------------------


def _graph_edges(g: Multipole) -> list[tuple[int, int]]:
    out = []
    for u, v in g.edges:
        if not (isinstance(u, int) and isinstance(v, int)):
            raise ValueError("circular flows are defined on graphs")
        out.append((u, v))
    return out


def has_cnzf(g: Multipole, p: int, q: int) -> bool:
    """Integer flow with q <= |f(e)| <= p - q on every edge (a circular p/q-flow)."""
    if q < 1 or p < 2 * q:
        raise ValueError("need p/q >= 2")
    d = gcd(p, q)
    p, q = p // d, q // d
    edges = _graph_edges(g)
    if not edges:
        return True
    if any(u == v for u, v in edges) or has_bridge(g):
        return False
    hi = p - q
    allowed = [x for x in range(-hi, hi + 1) if abs(x) >= q]
    n = g.n
    net = [0] * n
    free = [len(g.incidence[v]) for v in range(n)]
    order = _bfs_edge_order(g)
    value: list[int | None] = [None] * len(edges)

    def ok(v: int) -> bool:
        f = free[v]
        if f == 0:
            return net[v] == 0
        return abs(net[v]) <= f * hi and (f > 1 or q <= abs(net[v]) <= hi)

    def assign(e: int, x: int) -> None:
        u, v = edges[e]
        value[e] = x
        net[u] += x
        net[v] -= x
        free[u] -= 1
        free[v] -= 1

    def unassign(e: int) -> None:
        u, v = edges[e]
        x = value[e]
        net[u] -= x
        net[v] += x
        free[u] += 1
        free[v] += 1
        value[e] = None

    def forced() -> list[int]:
        done: list[int] = []
        changed = True
        while changed:
            changed = False
            for w in range(n):
                if free[w] == 1:
                    e = next(i for i in g.incidence[w] if value[i] is None)
                    u, _ = edges[e]
                    x = -net[w] if u == w else net[w]
                    if not q <= abs(x) <= hi:
                        return done + [-1]
                    assign(e, x)
                    done.append(e)
                    if not (ok(edges[e][0]) and ok(edges[e][1])):
                        return done + [-1]
                    changed = True
        return done

    def rec(k: int) -> bool:
        while k < len(order) and value[order[k]] is not None:
            k += 1
        if k == len(order):
            return all(x == 0 for x in net)
        e = order[k]
        for x in allowed:
            assign(e, x)
            u, v = edges[e]
            if ok(u) and ok(v):
                extra = forced()
                bad = extra and extra[-1] == -1
                if not bad and rec(k + 1):
                    return True
                for f in reversed([i for i in extra if i >= 0]):
                    unassign(f)
            unassign(e)
        return False

    return rec(0)


def has_modular_cnzf(g: Multipole, p: int, q: int) -> bool:
    """Z_p-flow with values in {q, ..., p-q}; spanning-tree enumeration."""
    edges = _graph_edges(g)
    n = g.n
    parent_edge = [-1] * n
    seen = [False] * n
    tree: set[int] = set()
    order = []
    for s in range(n):
        if seen[s]:
            continue
        seen[s] = True
        stack = [s]
        while stack:
            v = stack.pop()
            order.append(v)
            for e in g.incidence[v]:
                a, b = edges[e]
                w = b if a == v else a
                if not seen[w]:
                    seen[w] = True
                    parent_edge[w] = e
                    tree.add(e)
                    stack.append(w)
    cotree = [e for e in range(len(edges)) if e not in tree]
    allowed = list(range(q, p - q + 1))
    for combo in product(allowed, repeat=len(cotree)):
        val = [0] * len(edges)
        for e, x in zip(cotree, combo):
            val[e] = x
        excess = [0] * n
        for e in cotree:
            a, b = edges[e]
            excess[a] += val[e]
            excess[b] -= val[e]
        good = True
        for v in reversed(order):
            e = parent_edge[v]
            if e < 0:
                if excess[v] % p:
                    good = False
                continue
            a, b = edges[e]
            # choose tree value so that v balances
            x = (-excess[v]) % p if a == v else excess[v] % p
            if not q <= x <= p - q:
                good = False
                break
            val[e] = x
            excess[a] += x
            excess[b] -= x
        if good:
            return True
    return False


def _bfs_edge_order(g: Multipole) -> list[int]:
    order: list[int] = []
    seen_e = set()
    seen_v = [False] * g.n
    for s in range(g.n):
        if seen_v[s]:
            continue
        seen_v[s] = True
        queue = [s]
        for v in queue:
            for e in g.incidence[v]:
                if e not in seen_e:
                    seen_e.add(e)
                    order.append(e)
                u, w = g.edges[e]
                o = w if u == v else u
                if not seen_v[o]:
                    seen_v[o] = True
                    queue.append(o)
    return order


@dataclass(frozen=True)
class FlowLadder:
    entries: tuple[tuple[int, int, bool], ...]
    lower: Fraction | None
    upper: Fraction | None
    exact: Fraction | None

    def statement(self) -> str:
        if self.exact is not None:
            return f"Phi_c = {_fmt(self.exact)}"
        parts = []
        if self.lower is not None:
            parts.append(f"{_fmt(self.lower)} < Phi_c")
        if self.upper is not None:
            parts.append(f"Phi_c <= {_fmt(self.upper)}")
        if self.lower is not None and self.upper is not None:
            return f"{_fmt(self.lower)} < Phi_c <= {_fmt(self.upper)}"
        return ", ".join(parts) or "no information"


def _fmt(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def ladder_candidates(q_max: int, top: Fraction = Fraction(5)) -> list[Fraction]:
    cands = {Fraction(p, q) for q in range(1, q_max + 1) for p in range(2 * q, int(top * q) + 1)}
    return sorted(c for c in cands if 2 <= c <= top)


def circular_flow_lower_bound(g: Multipole, q_max: int) -> FlowLadder:
    """Evidence ladder over p/q <= 5 with q <= q_max.

    ``lower`` is the largest failing candidate (so Phi_c > lower), ``upper``
    the smallest succeeding one.  The value is reported exact only when no
    fraction with numerator at most |E| lies strictly between them, since the
    circular flow number is a ratio |d(X)| / |d+(X)| of an edge cut.
    """
    if q_max < 1:
        raise ValueError("q_max must be at least 1")
    if has_bridge(g):
        raise NotBridgeless("graph has a bridge; no nowhere-zero flow exists")
    entries = []
    lower = upper = None
    for c in ladder_candidates(q_max):
        ok = has_cnzf(g, c.numerator, c.denominator)
        entries.append((c.numerator, c.denominator, ok))
        if ok and upper is None:
            upper = c
        if not ok:
            lower = c
    exact = None
    if lower is not None and upper is not None and lower < upper:
        m = len(g.edges)
        between = any(
            lower * b < a < upper * b
            for b in range(1, m + 1)
            for a in range(int(lower * b) + 1, min(m, int(upper * b) + 1) + 1)
        )
        if not between:
            exact = upper
    return FlowLadder(tuple(entries), lower, upper, exact)
