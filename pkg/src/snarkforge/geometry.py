"""Points, lines and tetrahedra of PG(3,2), and the shapes of point pairs.

Points are the nonzero vectors of GF(2)^4, encoded as integers 1..15 with the
first coordinate as the most significant bit, so ``(1,0,0,0) == 8`` and
``(0,0,0,1) == 1``.  Addition is XOR.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from functools import cached_property
from itertools import combinations, permutations
from typing import Iterable, Sequence


class PointNotInTetrahedron(ValueError):
    pass


class NotABasis(ValueError):
    pass


def point(*bits: int) -> int:
    """Encode a coordinate vector such as ``point(1, 1, 0, 0)`` as an int."""
    if len(bits) != 4 or any(b not in (0, 1) for b in bits):
        raise ValueError(f"expected four bits, got {bits!r}")
    return (bits[0] << 3) | (bits[1] << 2) | (bits[2] << 1) | bits[3]


def coords(p: int) -> tuple[int, int, int, int]:
    return ((p >> 3) & 1, (p >> 2) & 1, (p >> 1) & 1, p & 1)


def add(x: int, y: int) -> int:
    return x ^ y


POINTS: tuple[int, ...] = tuple(range(1, 16))


def is_line(x: int, y: int, z: int) -> bool:
    return x != y and y != z and x != z and x ^ y ^ z == 0 and 0 not in (x, y, z)


def all_lines() -> list[frozenset[int]]:
    return [frozenset(t) for t in combinations(POINTS, 3) if is_line(*t)]


def _span_table(basis: Sequence[int]) -> dict[int, int]:
    """Map every vector to its coefficient mask in ``basis`` (bit k <-> basis[k])."""
    table: dict[int, int] = {}
    for mask in range(16):
        y = 0
        for k in range(4):
            if mask >> k & 1:
                y ^= basis[k]
        table[y] = mask
    if len(table) != 16:
        raise NotABasis(f"{list(basis)} do not span GF(2)^4")
    return table


class Shape(str, Enum):
    LS = "ls"
    HL = "hl"
    ANG = "ang"
    ALT = "alt"
    AX = "ax"
    DC = "dc"
    DM = "dm"
    DPT = "dpt"

    def __str__(self) -> str:
        return self.value

    def merged(self) -> "Shape":
        return Shape.DPT if self in (Shape.DC, Shape.DM) else self


UNMERGED_SHAPES = (Shape.LS, Shape.HL, Shape.ANG, Shape.ALT, Shape.AX, Shape.DC, Shape.DM)
MERGED_SHAPES = (Shape.LS, Shape.HL, Shape.ANG, Shape.ALT, Shape.AX, Shape.DPT)
COLLINEAR_SHAPES = frozenset({Shape.LS, Shape.HL})


class Triple(str, Enum):
    LINE = "line"
    CIRCLE = "circle"
    NEITHER = "neither"


@dataclass(frozen=True)
class Tetrahedron:
    """The ten points and six lines spanned by four points in general position."""

    corners: tuple[int, int, int, int]
    _coeff: dict[int, int] = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self) -> None:
        corners = tuple(int(c) for c in self.corners)
        if len(corners) != 4:
            raise NotABasis("a tetrahedron needs exactly four corners")
        object.__setattr__(self, "corners", corners)
        object.__setattr__(self, "_coeff", _span_table(corners))

    def coefficients(self, y: int) -> int:
        """Bit mask of corners whose sum is ``y``."""
        return self._coeff[y]

    def weight(self, y: int) -> int:
        return self._coeff[y].bit_count()

    @cached_property
    def midpoints(self) -> tuple[int, ...]:
        return tuple(a ^ b for a, b in combinations(self.corners, 2))

    @cached_property
    def points(self) -> frozenset[int]:
        return frozenset(self.corners) | frozenset(self.midpoints)

    @cached_property
    def point_mask(self) -> int:
        m = 0
        for p in self.points:
            m |= 1 << p
        return m

    @cached_property
    def lines(self) -> tuple[frozenset[int], ...]:
        return tuple(frozenset((a, a ^ b, b)) for a, b in combinations(self.corners, 2))

    @cached_property
    def line_triples(self) -> tuple[tuple[int, int, int], ...]:
        """All 36 ordered triples whose underlying set is a line of the tetrahedron."""
        return tuple(t for line in self.lines for t in permutations(sorted(line)))

    def __contains__(self, p: object) -> bool:
        return p in self.points

    def line_of(self, x: int) -> frozenset[int]:
        """The line determined by a midpoint."""
        for line in self.lines:
            if x in line and self.weight(x) == 2:
                return line
        raise PointNotInTetrahedron(f"{x} is not a midpoint of {self}")

    def _check(self, *ps: int) -> None:
        for p in ps:
            if p not in self.points:
                raise PointNotInTetrahedron(f"point {coords(p)} is not in {self}")

    def classify_pair(self, p: int, q: int, merge_degenerate: bool = False) -> Shape:
        self._check(p, q)
        a, b = self._coeff[p], self._coeff[q]
        wa, wb = a.bit_count(), b.bit_count()
        if p == q:
            shape = Shape.DC if wa == 1 else Shape.DM
            return Shape.DPT if merge_degenerate else shape
        if wa == 1 and wb == 1:
            return Shape.LS
        if wa == 2 and wb == 2:
            return Shape.ANG if (a & b) else Shape.AX
        corner, mid = (a, b) if wa == 1 else (b, a)
        return Shape.HL if corner & mid else Shape.ALT

    def shape_census(self, merge_degenerate: bool = False) -> dict[Shape, int]:
        counts: dict[Shape, int] = {}
        pts = sorted(self.points)
        for i, p in enumerate(pts):
            for q in pts[i:]:
                s = self.classify_pair(p, q, merge_degenerate)
                counts[s] = counts.get(s, 0) + 1
        return counts

    def line_or_circle(self, x: int, y: int, z: int) -> Triple:
        self._check(x, y, z)
        if x ^ y ^ z:
            return Triple.NEITHER
        if all(self.weight(p) == 2 for p in (x, y, z)):
            return Triple.CIRCLE
        return Triple.LINE

    def is_collinear(self, p: int, q: int) -> bool:
        return self.classify_pair(p, q) in COLLINEAR_SHAPES

    def __str__(self) -> str:
        return "T(" + ", ".join("".join(map(str, coords(c))) for c in self.corners) + ")"


UNIT_VECTORS = (point(1, 0, 0, 0), point(0, 1, 0, 0), point(0, 0, 1, 0), point(0, 0, 0, 1))
ANTIPODES = (point(0, 1, 1, 1), point(1, 0, 1, 1), point(1, 1, 0, 1), point(1, 1, 1, 0))

T0 = Tetrahedron(UNIT_VECTORS)
T1 = Tetrahedron(ANTIPODES)


@dataclass(frozen=True)
class Collineation:
    """An invertible 4x4 matrix over GF(2) acting on points by multiplication."""

    matrix: tuple[tuple[int, int, int, int], ...]
    _image: tuple[int, ...] = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self) -> None:
        rows = tuple(tuple(int(v) & 1 for v in row) for row in self.matrix)
        if len(rows) != 4 or any(len(r) != 4 for r in rows):
            raise ValueError("collineation matrix must be 4x4")
        object.__setattr__(self, "matrix", rows)
        image = []
        for y in range(16):
            v = coords(y)
            image.append(point(*(sum(r[j] * v[j] for j in range(4)) & 1 for r in rows)))
        if len(set(image)) != 16:
            raise NotABasis("matrix is singular")
        object.__setattr__(self, "_image", tuple(image))

    def __call__(self, p: int) -> int:
        return self._image[p]

    def inverse(self) -> "Collineation":
        return collineation_from_bases([self(u) for u in UNIT_VECTORS], UNIT_VECTORS)

    def then(self, other: "Collineation") -> "Collineation":
        """The collineation applying ``self`` first and ``other`` second."""
        return collineation_from_bases(UNIT_VECTORS, [other(self(u)) for u in UNIT_VECTORS])

    def image_of(self, tetra: Tetrahedron) -> Tetrahedron:
        return Tetrahedron(tuple(self(c) for c in tetra.corners))


def collineation_from_bases(frm: Sequence[int], to: Sequence[int]) -> Collineation:
    """The unique linear map sending ``frm[k]`` to ``to[k]`` for k = 0..3."""
    src = _span_table(frm)
    _span_table(to)
    columns = []
    for u in UNIT_VECTORS:
        mask = src[u]
        img = 0
        for k in range(4):
            if mask >> k & 1:
                img ^= to[k]
        columns.append(coords(img))
    return Collineation(tuple(tuple(columns[j][i] for j in range(4)) for i in range(4)))


IDENTITY = collineation_from_bases(UNIT_VECTORS, UNIT_VECTORS)
# Swaps each unit vector with its antipode and fixes the midpoints; maps T0 <-> T1.
LAMBDA = collineation_from_bases(UNIT_VECTORS, ANTIPODES)


def coordinate_permutations() -> list[tuple[int, ...]]:
    """Value tables for the 24 coordinate permutations, the stabiliser of T0."""
    tables = []
    for perm in permutations(range(4)):
        table = []
        for y in range(16):
            c = coords(y)
            table.append(point(*(c[perm[i]] for i in range(4))))
        tables.append(tuple(table))
    return tables


S4_TABLES: tuple[tuple[int, ...], ...] = tuple(coordinate_permutations())


def pair(p: int, q: int) -> tuple[int, int]:
    """Canonical representation of the unordered pair {p, q}."""
    return (p, q) if p <= q else (q, p)


def tetrahedron_points(tetra: Tetrahedron) -> list[int]:
    return sorted(tetra.points)


def random_tetrahedron(rng) -> Tetrahedron:
    """A uniformly random ordered basis, as a tetrahedron."""
    while True:
        corners = tuple(rng.choice(POINTS) for _ in range(4))
        try:
            return Tetrahedron(corners)
        except NotABasis:
            continue


def lines_through(tetra: Tetrahedron, p: int) -> list[frozenset[int]]:
    return [line for line in tetra.lines if p in line]


def triangle_of(tetra: Tetrahedron, points: Iterable[int]) -> int:
    """Corner mask spanned by the supports of ``points``."""
    mask = 0
    for p in points:
        mask |= tetra.coefficients(p)
    return mask
