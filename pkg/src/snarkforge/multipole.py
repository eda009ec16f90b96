"""Multipoles: cubic graphs with dangling edges grouped into connectors.

A ``Multipole`` is an immutable value.  Vertices are the integers
``0..n-1``; every edge is a pair of ends, where an end is either a vertex id
(``int``) or the name of a free end, a semiedge (``str``).  Connectors and
residual semiedges are ordered tuples of semiedge names.  A multipole with no
semiedges is a graph.
"""

from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass
from functools import cached_property
from itertools import combinations
from typing import Iterable, Iterator, Sequence, Union

End = Union[int, str]


class MultipoleError(ValueError):
    pass


class SemiedgeNotFree(MultipoleError):
    pass


class ArityMismatch(MultipoleError):
    pass


class PathNotInGraph(MultipoleError):
    pass


class Acyclic(MultipoleError):
    pass


class TooLarge(MultipoleError):
    pass


class MalformedInput(MultipoleError):
    pass


@dataclass(frozen=True)
class Multipole:
    n: int
    edges: tuple[tuple[End, End], ...]
    connectors: tuple[tuple[str, ...], ...] = ()
    residual: tuple[str, ...] = ()

    def __post_init__(self) -> None:
        edges = tuple(tuple(e) for e in self.edges)
        object.__setattr__(self, "edges", edges)
        object.__setattr__(self, "connectors", tuple(tuple(c) for c in self.connectors))
        object.__setattr__(self, "residual", tuple(self.residual))
        deg = [0] * self.n
        seen: set[str] = set()
        for e in edges:
            if len(e) != 2:
                raise MultipoleError(f"edge {e!r} must have two ends")
            for end in e:
                if isinstance(end, str):
                    if end in seen:
                        raise MultipoleError(f"semiedge {end!r} occurs twice")
                    seen.add(end)
                elif 0 <= end < self.n:
                    deg[end] += 1
                else:
                    raise MultipoleError(f"vertex {end!r} out of range")
        if any(d > 3 for d in deg):
            raise MultipoleError("vertex of degree greater than 3")
        grouped = [s for c in self.connectors for s in c] + list(self.residual)
        if len(grouped) != len(set(grouped)) or set(grouped) != seen:
            raise MultipoleError("connectors and residual must partition the semiedges")

    # -- basic structure -------------------------------------------------

    @cached_property
    def degrees(self) -> tuple[int, ...]:
        deg = [0] * self.n
        for e in self.edges:
            for end in e:
                if isinstance(end, int):
                    deg[end] += 1
        return tuple(deg)

    @property
    def is_cubic(self) -> bool:
        return all(d == 3 for d in self.degrees)

    def check_cubic(self) -> "Multipole":
        if not self.is_cubic:
            bad = [v for v, d in enumerate(self.degrees) if d != 3]
            raise MultipoleError(f"vertices {bad[:5]} are not 3-valent")
        return self

    @cached_property
    def semiedges(self) -> tuple[str, ...]:
        return tuple(end for e in self.edges for end in e if isinstance(end, str))

    @property
    def is_graph(self) -> bool:
        return not self.semiedges

    @cached_property
    def semiedge_edge(self) -> dict[str, int]:
        return {end: i for i, e in enumerate(self.edges) for end in e if isinstance(end, str)}

    @cached_property
    def incidence(self) -> tuple[tuple[int, ...], ...]:
        """Edge ids at each vertex (a loop appears twice)."""
        inc: list[list[int]] = [[] for _ in range(self.n)]
        for i, e in enumerate(self.edges):
            for end in e:
                if isinstance(end, int):
                    inc[end].append(i)
        return tuple(tuple(x) for x in inc)

    @property
    def kind(self) -> tuple[int, ...]:
        """Connector sizes followed by the residual count, e.g. (2, 2, 1)."""
        return tuple(len(c) for c in self.connectors) + (len(self.residual),)

    @property
    def inputs(self) -> tuple[str, ...]:
        return self.connectors[0]

    @property
    def outputs(self) -> tuple[str, ...]:
        return self.connectors[1]

    def is_dipole(self, a: int = 2, b: int = 2, c: int = 0) -> bool:
        return self.kind == (a, b, c)

    def other_end(self, edge: int, end: End) -> End:
        u, v = self.edges[edge]
        return v if u == end else u

    def neighbours(self, v: int) -> list[int]:
        out = []
        for i in self.incidence[v]:
            w = self.other_end(i, v)
            if isinstance(w, int):
                out.append(w)
        return out

    def vertex_edges(self) -> list[tuple[int, int]]:
        """Edges joining two vertices, as (u, v) with u <= v."""
        out = []
        for u, v in self.edges:
            if isinstance(u, int) and isinstance(v, int):
                out.append((min(u, v), max(u, v)))
        return out

    def structurally_equal(self, other: "Multipole") -> bool:
        def key(m: Multipole):
            return sorted(tuple(sorted(map(str, e))) for e in m.edges)
        return (self.n == other.n and key(self) == key(other)
                and self.connectors == other.connectors and self.residual == other.residual)

    # -- construction helpers --------------------------------------------

    def relabel_semiedges(self, mapping: dict[str, str]) -> "Multipole":
        def f(end: End) -> End:
            return mapping.get(end, end) if isinstance(end, str) else end
        return Multipole(
            self.n,
            tuple((f(u), f(v)) for u, v in self.edges),
            tuple(tuple(mapping.get(s, s) for s in c) for c in self.connectors),
            tuple(mapping.get(s, s) for s in self.residual),
        )

    def canonical_names(self) -> "Multipole":
        """Rename semiedges to i*, o* (dipoles), c{k}_* (others) and r*."""
        mapping: dict[str, str] = {}
        if len(self.connectors) == 2:
            prefixes = ["i", "o"]
        else:
            prefixes = [f"c{k}_" for k in range(len(self.connectors))]
        for pre, conn in zip(prefixes, self.connectors):
            for j, s in enumerate(conn):
                mapping[s] = f"{pre}{j}"
        for j, s in enumerate(self.residual):
            mapping[s] = f"r{j}"
        # two-step rename avoids collisions between old and new names
        tmp = self.relabel_semiedges({s: f"\0{t}" for s, t in mapping.items()})
        return tmp.relabel_semiedges({f"\0{t}": t for t in mapping.values()})

    def with_connectors(self, connectors: Sequence[Sequence[str]],
                        residual: Sequence[str] = ()) -> "Multipole":
        return Multipole(self.n, self.edges, tuple(tuple(c) for c in connectors), tuple(residual))

    def to_json(self) -> dict:
        return {"n": self.n, "edges": [list(e) for e in self.edges],
                "connectors": [list(c) for c in self.connectors], "residual": list(self.residual)}

    @classmethod
    def from_json(cls, data: dict) -> "Multipole":
        return cls(data["n"], tuple(tuple(e) for e in data["edges"]),
                   tuple(tuple(c) for c in data.get("connectors", ())),
                   tuple(data.get("residual", ())))


def graph(n: int, edges: Iterable[tuple[int, int]]) -> Multipole:
    return Multipole(n, tuple((int(u), int(v)) for u, v in edges))


def disjoint_union(parts: Sequence[Multipole], prefixes: Sequence[str] | None = None) -> tuple[Multipole, list[int]]:
    """Union with vertex ids shifted and semiedges prefixed; returns offsets.

    The union keeps the concatenated connectors of all parts.
    """
    if prefixes is None:
        prefixes = [f"p{k}." for k in range(len(parts))]
    edges: list[tuple[End, End]] = []
    connectors: list[tuple[str, ...]] = []
    residual: list[str] = []
    offsets = []
    off = 0
    for m, pre in zip(parts, prefixes):
        offsets.append(off)

        def f(end: End, off=off, pre=pre) -> End:
            return pre + end if isinstance(end, str) else end + off
        edges.extend((f(u), f(v)) for u, v in m.edges)
        connectors.extend(tuple(pre + s for s in c) for c in m.connectors)
        residual.extend(pre + s for s in m.residual)
        off += m.n
    return Multipole(off, tuple(edges), tuple(connectors), tuple(residual)), offsets


def junction(m: Multipole, s: str, t: str) -> Multipole:
    """Coalesce the edges carrying free ends ``s`` and ``t`` into one edge."""
    if s == t:
        raise SemiedgeNotFree("cannot join a semiedge with itself")
    idx = m.semiedge_edge
    if s not in idx or t not in idx:
        raise SemiedgeNotFree(f"{s!r} or {t!r} is not a free end")
    i, j = idx[s], idx[t]
    if i == j:
        raise SemiedgeNotFree(f"{s!r} and {t!r} are the two ends of one isolated edge")
    a = m.other_end(i, s)
    b = m.other_end(j, t)
    lo, hi = min(i, j), max(i, j)
    edges = list(m.edges)
    edges[lo] = (a, b) if i < j else (b, a)
    del edges[hi]
    drop = {s, t}
    return Multipole(
        m.n,
        tuple(edges),
        tuple(tuple(x for x in c if x not in drop) for c in m.connectors),
        tuple(x for x in m.residual if x not in drop),
    )


def junctions(m: Multipole, pairs: Sequence[tuple[str, str]]) -> tuple[Multipole, list[int]]:
    """Perform several junctions; also return the final edge id of each one."""
    ids: list[int] = []
    for s, t in pairs:
        idx = m.semiedge_edge
        if s not in idx or t not in idx:
            raise SemiedgeNotFree(f"{s!r} or {t!r} is not a free end")
        lo, hi = sorted((idx[s], idx[t]))
        m = junction(m, s, t)
        ids = [lo if x == hi else (x - 1 if x > hi else x) for x in ids]
        ids.append(lo)
    return m, ids


def extract_block(g: Multipole, vertices: Iterable[int], connectors: Sequence[Sequence[int]],
                  residual: Sequence[int] = ()) -> Multipole:
    """The multipole induced on ``vertices`` with the listed edges left dangling.

    Every listed edge must have exactly one end in the block, and every edge
    leaving the block must be listed exactly once.
    """
    vs = sorted(set(vertices))
    inside = set(vs)
    new_id = {v: k for k, v in enumerate(vs)}
    listed = [e for c in connectors for e in c] + list(residual)
    if len(set(listed)) != len(listed):
        raise MultipoleError("an edge is listed twice")
    names: dict[int, str] = {}
    for k, c in enumerate(connectors):
        for j, e in enumerate(c):
            names[e] = f"c{k}_{j}"
    for j, e in enumerate(residual):
        names[e] = f"r{j}"
    edges: list[tuple[End, End]] = []
    for i, (u, v) in enumerate(g.edges):
        ins = [isinstance(x, int) and x in inside for x in (u, v)]
        if i in names:
            if sum(ins) != 1:
                raise MultipoleError(f"edge {i} does not leave the block")
            x = u if ins[0] else v
            edges.append((new_id[x], names[i]))
        elif all(ins):
            edges.append((new_id[u], new_id[v]))
        elif any(ins):
            raise MultipoleError(f"edge {i} leaves the block but is not listed")
    conns = tuple(tuple(names[e] for e in c) for c in connectors)
    return Multipole(len(vs), tuple(edges), conns, tuple(names[e] for e in residual)).canonical_names()


def closure(d: Multipole, ordering: Sequence[int] | None = None) -> Multipole:
    """Join the k-th output semiedge with input semiedge ``ordering[k]``."""
    if len(d.connectors) != 2 or len(d.inputs) != len(d.outputs) or d.residual:
        raise ArityMismatch(f"closure needs an (a,a)-pole, got kind {d.kind}")
    ins, outs = d.inputs, d.outputs
    if ordering is None:
        ordering = range(len(ins))
    ordering = list(ordering)
    if sorted(ordering) != list(range(len(ins))):
        raise ArityMismatch(f"{ordering} is not a permutation")
    m = d
    for k, j in enumerate(ordering):
        m = junction(m, outs[k], ins[j])
    return Multipole(m.n, m.edges)


def _remove_vertices(g: Multipole, removed: Sequence[int]) -> tuple[Multipole, dict[int, list[str]]]:
    """Delete vertices, keep dangling edges; report new semiedge names per removed vertex."""
    rem = set(removed)
    keep = [v for v in range(g.n) if v not in rem]
    new_id = {v: k for k, v in enumerate(keep)}
    at: dict[int, list[str]] = {v: [] for v in removed}
    edges: list[tuple[End, End]] = []
    for i, (u, v) in enumerate(g.edges):
        ends: list[End] = []
        for side, end in enumerate((u, v)):
            if isinstance(end, int) and end in rem:
                name = f"x{i}_{side}"
                at[end].append(name)
                ends.append(name)
            elif isinstance(end, int):
                ends.append(new_id[end])
            else:
                ends.append(end)
        if all(isinstance(x, str) for x in ends) and (u in rem and v in rem):
            # edge inside the removed set vanishes
            at[u].remove(ends[0])
            at[v].remove(ends[1])
            continue
        edges.append((ends[0], ends[1]))
    return Multipole(len(keep), tuple(edges), (), tuple(s for v in removed for s in at[v])), at


def remove_path(g: Multipole, path: Sequence[int]) -> Multipole:
    """G_v, G_uv or G_uwv: delete the path and group the dangling edges.

    For ``[v]`` a 3-pole with a single connector; for ``[u, v]`` a (2,2)-pole
    with u's former edges as input; for ``[u, w, v]`` a (2,2;1)-pole with w's
    former edge residual.
    """
    if not g.is_graph:
        raise PathNotInGraph("remove_path expects a graph")
    path = [int(x) for x in path]
    if not 1 <= len(path) <= 3 or len(set(path)) != len(path):
        raise PathNotInGraph(f"invalid path {path}")
    for v in path:
        if not 0 <= v < g.n:
            raise PathNotInGraph(f"vertex {v} not in graph")
    for a, b in zip(path, path[1:]):
        if b not in g.neighbours(a):
            raise PathNotInGraph(f"{a}-{b} is not an edge")
    m, at = _remove_vertices(g, path)
    if len(path) == 1:
        conns: tuple = (tuple(at[path[0]]),)
        res: tuple = ()
    elif len(path) == 2:
        conns = (tuple(at[path[0]]), tuple(at[path[1]]))
        res = ()
    else:
        u, w, v = path
        conns = (tuple(at[u]), tuple(at[v]))
        res = tuple(at[w])
    return m.with_connectors(conns, res).canonical_names()


# -- named graphs --------------------------------------------------------


def complete_graph_4() -> Multipole:
    return graph(4, combinations(range(4), 2))


def k33() -> Multipole:
    return graph(6, [(a, b) for a in range(3) for b in range(3, 6)])


def generalised_petersen(n: int, k: int) -> Multipole:
    edges = []
    for i in range(n):
        edges.append((i, (i + 1) % n))
        edges.append((i, n + i))
        edges.append((n + i, n + (i + k) % n))
    return graph(2 * n, sorted(tuple(sorted(e)) for e in edges))


def petersen() -> Multipole:
    return generalised_petersen(5, 2)


def cube() -> Multipole:
    return generalised_petersen(4, 1)


def heawood() -> Multipole:
    edges = [(i, (i + 1) % 14) for i in range(14)]
    edges += [(i, (i + 5) % 14) for i in range(0, 14, 2)]
    return graph(14, sorted(tuple(sorted(e)) for e in edges))


NAMED_GRAPHS = {
    "K4": complete_graph_4,
    "K33": k33,
    "Petersen": petersen,
    "Heawood": heawood,
    "Q3": cube,
    "GP(8,3)": lambda: generalised_petersen(8, 3),
    "GP(10,3)": lambda: generalised_petersen(10, 3),
    "GP(12,5)": lambda: generalised_petersen(12, 5),
}


def named_graph(name: str) -> Multipole:
    try:
        return NAMED_GRAPHS[name]()
    except KeyError:
        raise KeyError(f"unknown graph {name!r}; choose from {sorted(NAMED_GRAPHS)}") from None


# -- invariants ----------------------------------------------------------


def _adjacency(g: Multipole) -> list[list[tuple[int, int]]]:
    """(neighbour, edge id) lists over vertex-vertex edges."""
    adj: list[list[tuple[int, int]]] = [[] for _ in range(g.n)]
    for i, (u, v) in enumerate(g.edges):
        if isinstance(u, int) and isinstance(v, int):
            adj[u].append((v, i))
            if u != v:
                adj[v].append((u, i))
    return adj


def girth(g: Multipole) -> int:
    """Length of a shortest cycle (loops count 1, parallel edges 2)."""
    adj = _adjacency(g)
    best = None
    for u, v in g.edges:
        if u == v and isinstance(u, int):
            return 1
    for s in range(g.n):
        dist = {s: 0}
        via = {s: -1}
        q = deque([s])
        while q:
            x = q.popleft()
            for y, e in adj[x]:
                if e == via[x]:
                    continue
                if y not in dist:
                    dist[y] = dist[x] + 1
                    via[y] = e
                    q.append(y)
                else:
                    c = dist[x] + dist[y] + 1
                    if best is None or c < best:
                        best = c
    if best is None:
        raise Acyclic("graph has no cycle")
    return best


def bipartition(g: Multipole) -> tuple[list[int], list[int]] | None:
    colour: dict[int, int] = {}
    adj = _adjacency(g)
    for s in range(g.n):
        if s in colour:
            continue
        colour[s] = 0
        q = deque([s])
        while q:
            x = q.popleft()
            for y, _ in adj[x]:
                if y not in colour:
                    colour[y] = 1 - colour[x]
                    q.append(y)
                elif colour[y] == colour[x]:
                    return None
    return ([v for v in range(g.n) if colour[v] == 0], [v for v in range(g.n) if colour[v] == 1])


def is_bipartite(g: Multipole) -> bool:
    return bipartition(g) is not None


def is_connected(g: Multipole) -> bool:
    if g.n == 0:
        return True
    return len(_component_labels(g.n, _adjacency(g), frozenset())[1][0]) == g.n


def _component_labels(n, adj, removed):
    label = [-1] * n
    comps = []
    for s in range(n):
        if label[s] >= 0:
            continue
        c = len(comps)
        label[s] = c
        members = [s]
        stack = [s]
        while stack:
            x = stack.pop()
            for y, e in adj[x]:
                if e not in removed and label[y] < 0:
                    label[y] = c
                    members.append(y)
                    stack.append(y)
        comps.append(members)
    return label, comps


def cyclic_edge_cuts(g: Multipole, max_size: int, max_vertices: int = 100) -> Iterator[tuple[int, ...]]:
    """Edge sets of size <= max_size whose removal leaves two components with cycles."""
    if g.n > max_vertices:
        raise TooLarge(f"{g.n} vertices exceeds the cut-enumeration cap {max_vertices}")
    adj = _adjacency(g)
    ids = [i for i, (u, v) in enumerate(g.edges) if isinstance(u, int) and isinstance(v, int)]
    for size in range(1, max_size + 1):
        for cut in combinations(ids, size):
            removed = frozenset(cut)
            label, comps = _component_labels(g.n, adj, removed)
            if len(comps) < 2:
                continue
            edge_count = [0] * len(comps)
            for i in ids:
                if i not in removed:
                    edge_count[label[g.edges[i][0]]] += 1
            cyclic = sum(1 for c, members in enumerate(comps) if edge_count[c] >= len(members))
            if cyclic >= 2:
                yield cut


def cyclic_edge_connectivity_at_least(g: Multipole, k: int, max_vertices: int = 100) -> bool:
    """True iff no edge cut of size < k separates two cycles."""
    if k > 4:
        raise ValueError("only k <= 4 is supported")
    for _ in cyclic_edge_cuts(g, k - 1, max_vertices):
        return False
    return True


def has_bridge(g: Multipole) -> bool:
    if not is_connected(g):
        return True
    adj = _adjacency(g)
    ids = [i for i, (u, v) in enumerate(g.edges) if isinstance(u, int) and isinstance(v, int)]
    for i in ids:
        if len(_component_labels(g.n, adj, frozenset([i]))[1]) > 1:
            return True
    return False


# -- formats -------------------------------------------------------------


def _n_bytes(n: int) -> list[int]:
    if n <= 62:
        return [n]
    if n <= 258047:
        return [63, (n >> 12) & 63, (n >> 6) & 63, n & 63]
    return [63, 63] + [(n >> s) & 63 for s in (30, 24, 18, 12, 6, 0)]


def emit_graph6(g: Multipole) -> str:
    if not g.is_graph:
        raise MalformedInput("graph6 stores graphs only, not multipoles")
    pairs = g.vertex_edges()
    if len(set(pairs)) != len(pairs) or any(u == v for u, v in pairs):
        raise MalformedInput("graph6 cannot encode loops or parallel edges")
    adj = set(pairs)
    bits = []
    for j in range(1, g.n):
        for i in range(j):
            bits.append(1 if (i, j) in adj else 0)
    while len(bits) % 6:
        bits.append(0)
    data = _n_bytes(g.n)
    for k in range(0, len(bits), 6):
        v = 0
        for b in bits[k:k + 6]:
            v = (v << 1) | b
        data.append(v)
    return "".join(chr(63 + x) for x in data)


def parse_graph6(text: str) -> Multipole:
    s = text.strip()
    if s.startswith(">>graph6<<"):
        s = s[len(">>graph6<<"):]
    if not s:
        raise MalformedInput("empty graph6 string")
    vals = [ord(c) - 63 for c in s]
    if any(not 0 <= v <= 63 for v in vals):
        raise MalformedInput("graph6 characters must lie in '?'..'~'")
    if vals[0] < 63:
        n, pos = vals[0], 1
    elif len(vals) >= 4 and vals[1] < 63:
        n = (vals[1] << 12) | (vals[2] << 6) | vals[3]
        pos = 4
    elif len(vals) >= 8:
        n = 0
        for v in vals[2:8]:
            n = (n << 6) | v
        pos = 8
    else:
        raise MalformedInput("truncated graph6 header")
    need = n * (n - 1) // 2
    body = vals[pos:]
    if len(body) != (need + 5) // 6:
        raise MalformedInput(f"graph6 body has {len(body)} bytes, expected {(need + 5) // 6}")
    bits = []
    for v in body:
        bits.extend((v >> (5 - k)) & 1 for k in range(6))
    edges = []
    k = 0
    for j in range(1, n):
        for i in range(j):
            if bits[k]:
                edges.append((i, j))
            k += 1
    if any(bits[need:]):
        raise MalformedInput("nonzero graph6 padding")
    return graph(n, edges)


def emit_dot(m: Multipole, name: str = "G") -> str:
    lines = [f"graph {json.dumps(name)} {{"]
    for v in range(m.n):
        lines.append(f"  {v};")
    for u, v in m.edges:
        ends = []
        for end in (u, v):
            if isinstance(end, str):
                lines.append(f'  "{end}" [shape=point, xlabel="{end}"];')
                ends.append(f'"{end}"')
            else:
                ends.append(str(end))
        lines.append(f"  {ends[0]} -- {ends[1]};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def emit_json(g: Multipole) -> str:
    return json.dumps({"n": g.n, "edges": [list(e) for e in g.vertex_edges()]})


def parse_json(text: str) -> Multipole:
    try:
        data = json.loads(text)
        return graph(int(data["n"]), [tuple(e) for e in data["edges"]])
    except (ValueError, KeyError, TypeError) as exc:
        raise MalformedInput(str(exc)) from exc
