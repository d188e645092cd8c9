"""Finitely presented spaces with commuting cell-preserving actions of Z_+^d.

A space is a finite list of cells.  A finite cell is a discrete set of named
points; a lattice cell is a copy of Z^k, and a rank-1 lattice cell may carry
two ends (the two-point compactification of Z).  Each of the d generators acts
on every cell either by a permutation (finite cells) or by a translation
(lattice cells); ends are fixed by every generator.

Index vectors are plain tuples of non-negative ints.  Direction sets J are
sets of 1-based generator indices.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Mapping, Union

from .errors import (
    CommutativityViolation,
    MalformedCell,
    NotBijective,
    PointNotInSpace,
)

PLUS_END = "+end"
MINUS_END = "-end"
ENDS = (MINUS_END, PLUS_END)

IndexVector = tuple


# -- index vector utilities -------------------------------------------------

def index_vector(entries: Iterable[int], d: int | None = None) -> tuple:
    n = tuple(int(e) for e in entries)
    if d is not None and len(n) != d:
        raise ValueError(f"index vector {n} has length {len(n)}, expected {d}")
    if any(e < 0 for e in n):
        raise ValueError(f"index vector {n} has a negative entry")
    return n


def zero(d: int) -> tuple:
    return (0,) * d


def vadd(a, b) -> tuple:
    return tuple(x + y for x, y in zip(a, b))


def vsub(a, b) -> tuple:
    return tuple(x - y for x, y in zip(a, b))


def vscale(c: int, a) -> tuple:
    return tuple(c * x for x in a)


def leq(a, b) -> bool:
    """Componentwise a <= b."""
    return all(x <= y for x, y in zip(a, b))


def support(n) -> frozenset:
    """Directions (1-based) in which n is nonzero."""
    return frozenset(i + 1 for i, e in enumerate(n) if e != 0)


def e_J(J: Iterable[int], d: int) -> tuple:
    """Characteristic vector of J."""
    J = check_directions(J, d)
    return tuple(1 if i + 1 in J else 0 for i in range(d))


def in_sigma_J(n, J: Iterable[int]) -> bool:
    """True iff n_j > 0 for every j in J; entries off J are unrestricted."""
    return all(n[j - 1] > 0 for j in J)


def in_delta_J(n, J: Iterable[int]) -> bool:
    J = frozenset(J)
    return in_sigma_J(n, J) and all(e == 0 for i, e in enumerate(n) if i + 1 not in J)


def check_directions(J: Iterable[int], d: int) -> frozenset:
    J = frozenset(int(j) for j in J)
    bad = [j for j in J if not 1 <= j <= d]
    if bad:
        raise ValueError(f"directions {sorted(bad)} outside 1..{d}")
    return J


def all_direction_sets(d: int) -> list[frozenset]:
    """Every subset of {1..d}, ordered by size then lexicographically."""
    out = []
    for r in range(d + 1):
        out.extend(frozenset(c) for c in itertools.combinations(range(1, d + 1), r))
    return out


# -- cells and points -------------------------------------------------------

@dataclass(frozen=True)
class FiniteCell:
    id: str
    points: tuple

    def __post_init__(self):
        if not self.points:
            raise MalformedCell(f"finite cell {self.id} has no points")
        if len(set(self.points)) != len(self.points):
            raise MalformedCell(f"finite cell {self.id} has duplicate points")
        if any(p in ENDS for p in self.points):
            raise MalformedCell(f"finite cell {self.id} uses a reserved end marker as a point")


@dataclass(frozen=True)
class LatticeCell:
    id: str
    rank: int
    ends: bool = False

    def __post_init__(self):
        if not isinstance(self.rank, int) or self.rank < 1:
            raise MalformedCell(f"lattice cell {self.id} needs a positive rank, got {self.rank}")
        if self.ends and self.rank != 1:
            raise MalformedCell(f"lattice cell {self.id}: ends are only allowed on rank-1 cells")


Cell = Union[FiniteCell, LatticeCell]


@dataclass(frozen=True)
class Point:
    """A point of a cell.

    ``pos`` is a symbol for finite cells, a tuple of ints for lattice cells,
    or one of ``"+end"`` / ``"-end"``.
    """

    cell: str
    pos: object

    @property
    def is_end(self) -> bool:
        return isinstance(self.pos, str) and self.pos in ENDS

    def __str__(self):
        if isinstance(self.pos, tuple):
            if len(self.pos) == 1:
                return f"{self.cell}:{self.pos[0]}"
            return f"{self.cell}:[{','.join(map(str, self.pos))}]"
        return f"{self.cell}:{self.pos}"


def lattice_point(cell: str, *coords: int) -> Point:
    return Point(cell, tuple(int(c) for c in coords))


def end_point(cell: str, sign: str = "+") -> Point:
    return Point(cell, PLUS_END if sign == "+" else MINUS_END)


# -- generator actions ------------------------------------------------------

@dataclass(frozen=True)
class Translation:
    vector: tuple


@dataclass(frozen=True)
class Permutation:
    mapping: tuple  # sorted (source, target) pairs covering the whole cell

    def as_dict(self) -> dict:
        return dict(self.mapping)


def _perm_order(mapping: Mapping) -> int:
    seen, order = set(), 1
    for start in mapping:
        if start in seen:
            continue
        length, p = 0, start
        while p not in seen:
            seen.add(p)
            p = mapping[p]
            length += 1
        order = order * length // math.gcd(order, length)
    return order


@dataclass(frozen=True)
class MapSystem:
    """A validated space together with d commuting generators."""

    cells: tuple
    dim: int
    actions: tuple  # actions[i][c] is the action of generator i+1 on cells[c]
    _index: dict = field(default=None, compare=False, repr=False, hash=False)

    def __post_init__(self):
        if self.dim < 1:
            raise ValueError("system dimension must be at least 1")
        ids = [c.id for c in self.cells]
        if len(set(ids)) != len(ids):
            raise MalformedCell("duplicate cell ids")
        object.__setattr__(self, "_index", {c.id: k for k, c in enumerate(self.cells)})
        if len(self.actions) != self.dim or any(len(a) != len(self.cells) for a in self.actions):
            raise ValueError("actions table does not match cells x generators")
        for i, row in enumerate(self.actions):
            for cell, act in zip(self.cells, row):
                self._check_action(i + 1, cell, act)
        self._check_commuting()

    def __hash__(self):
        return hash((self.cells, self.dim, self.actions))

    # validation helpers
    @staticmethod
    def _check_action(i, cell, act):
        if isinstance(cell, LatticeCell):
            if not isinstance(act, Translation):
                raise MalformedCell(f"generator {i} on lattice cell {cell.id} must be a translation")
            if len(act.vector) != cell.rank:
                raise MalformedCell(
                    f"generator {i} on cell {cell.id}: translation length {len(act.vector)} != rank {cell.rank}"
                )
        else:
            if not isinstance(act, Permutation):
                raise MalformedCell(f"generator {i} on finite cell {cell.id} must be a permutation")
            m = act.as_dict()
            if set(m) != set(cell.points):
                raise NotBijective(f"generator {i} on cell {cell.id} is not defined on every point")
            if set(m.values()) != set(cell.points):
                raise NotBijective(f"generator {i} on cell {cell.id} is not a bijection")

    def _check_commuting(self):
        # translations always commute; finite cells are swept exhaustively
        for c, cell in enumerate(self.cells):
            if not isinstance(cell, FiniteCell):
                continue
            maps = [self.actions[i][c].as_dict() for i in range(self.dim)]
            for i, j in itertools.combinations(range(self.dim), 2):
                for p in cell.points:
                    left, right = maps[i][maps[j][p]], maps[j][maps[i][p]]
                    if left != right:
                        raise CommutativityViolation(
                            i + 1, j + 1, Point(cell.id, p), Point(cell.id, left), Point(cell.id, right)
                        )

    # lookup
    def cell(self, cell_id: str) -> Cell:
        try:
            return self.cells[self._index[cell_id]]
        except KeyError:
            raise PointNotInSpace(f"no cell named {cell_id!r}") from None

    def translations(self, cell_id: str) -> list[tuple]:
        """Translation vectors v_1..v_d of a lattice cell."""
        c = self._index[cell_id]
        return [self.actions[i][c].vector for i in range(self.dim)]

    def permutation(self, i: int, cell_id: str) -> dict:
        return self.actions[i - 1][self._index[cell_id]].as_dict()

    def perm_orders(self, cell_id: str) -> list[int]:
        c = self._index[cell_id]
        return [_perm_order(self.actions[i][c].as_dict()) for i in range(self.dim)]

    def displacement(self, cell_id: str, n) -> tuple:
        vs = self.translations(cell_id)
        rank = self.cell(cell_id).rank
        return tuple(sum(n[i] * vs[i][r] for i in range(self.dim)) for r in range(rank))

    def check_point(self, x: Point) -> None:
        if not isinstance(x, Point):
            raise PointNotInSpace(f"{x!r} is not a Point")
        cell = self.cell(x.cell)
        if isinstance(cell, FiniteCell):
            if x.pos not in cell.points:
                raise PointNotInSpace(f"{x} is not a point of finite cell {cell.id}")
        elif x.is_end:
            if not cell.ends:
                raise PointNotInSpace(f"cell {cell.id} has no ends")
        elif not (
            isinstance(x.pos, tuple) and len(x.pos) == cell.rank and all(isinstance(k, int) for k in x.pos)
        ):
            raise PointNotInSpace(f"{x} is not a point of lattice cell {cell.id} (rank {cell.rank})")

    def check_index(self, n) -> tuple:
        return index_vector(n, self.dim)

    def ends_cells(self) -> list[str]:
        return [c.id for c in self.cells if isinstance(c, LatticeCell) and c.ends]

    def finite_points(self) -> Iterator[Point]:
        for c in self.cells:
            if isinstance(c, FiniteCell):
                for p in c.points:
                    yield Point(c.id, p)

    def is_identity(self, i: int, cell_id: str) -> bool:
        act = self.actions[i - 1][self._index[cell_id]]
        if isinstance(act, Translation):
            return not any(act.vector)
        return all(a == b for a, b in act.mapping)

    def generator(self, i: int) -> "object":
        """Return callable phi_i."""
        e = tuple(1 if k == i - 1 else 0 for k in range(self.dim))
        return lambda x: apply(self, e, x)


def validate_system(raw: Mapping) -> MapSystem:
    """Build a MapSystem from a plain description, checking every invariant.

    ``raw`` has keys ``dim`` (optional; defaults to the largest generator
    index), ``cells`` and ``gens``.  Each cell is a mapping with ``id`` and
    either ``points`` (finite) or ``rank`` and optional ``ends`` (lattice).
    Each generator entry has ``index``, ``cell`` and one of ``translate``
    (a vector) or ``perm`` (a mapping; unmentioned points are fixed).
    Undeclared (generator, cell) pairs act as the identity.
    """
    cells = []
    for desc in raw.get("cells", []):
        if "points" in desc:
            if desc.get("rank") is not None or desc.get("ends"):
                raise MalformedCell(f"finite cell {desc.get('id')} cannot take rank or ends")
            cells.append(FiniteCell(str(desc["id"]), tuple(str(p) for p in desc["points"])))
        else:
            cells.append(LatticeCell(str(desc["id"]), desc.get("rank", 1), bool(desc.get("ends", False))))
    gens = list(raw.get("gens", []))
    dim = raw.get("dim")
    if dim is None:
        dim = max((int(g["index"]) for g in gens), default=1)
    dim = int(dim)
    ids = {c.id: k for k, c in enumerate(cells)}
    if len(ids) != len(cells):
        raise MalformedCell("duplicate cell ids")

    table = [[None] * len(cells) for _ in range(dim)]
    for g in gens:
        i = int(g["index"])
        if not 1 <= i <= dim:
            raise MalformedCell(f"generator index {i} outside 1..{dim}")
        if g["cell"] not in ids:
            raise MalformedCell(f"generator {i} refers to unknown cell {g['cell']!r}")
        c = ids[g["cell"]]
        if table[i - 1][c] is not None:
            raise MalformedCell(f"generator {i} declared twice on cell {g['cell']}")
        cell = cells[c]
        if "translate" in g:
            if not isinstance(cell, LatticeCell):
                raise MalformedCell(f"generator {i}: cannot translate finite cell {cell.id}")
            table[i - 1][c] = Translation(tuple(int(v) for v in g["translate"]))
        elif "perm" in g:
            if not isinstance(cell, FiniteCell):
                raise MalformedCell(f"generator {i}: cannot permute lattice cell {cell.id}")
            mapping = {str(k): str(v) for k, v in dict(g["perm"]).items()}
            unknown = (set(mapping) | set(mapping.values())) - set(cell.points)
            if unknown:
                raise NotBijective(f"generator {i} on {cell.id} mentions unknown points {sorted(unknown)}")
            full = {p: mapping.get(p, p) for p in cell.points}
            if len(set(full.values())) != len(full):
                raise NotBijective(f"generator {i} on cell {cell.id} is not a bijection")
            table[i - 1][c] = Permutation(tuple(sorted(full.items())))
        else:
            raise MalformedCell(f"generator {i} on {cell.id} needs translate or perm")

    for i in range(dim):
        for c, cell in enumerate(cells):
            if table[i][c] is None:
                if isinstance(cell, LatticeCell):
                    table[i][c] = Translation((0,) * cell.rank)
                else:
                    table[i][c] = Permutation(tuple((p, p) for p in sorted(cell.points)))
    return MapSystem(tuple(cells), dim, tuple(tuple(row) for row in table))


# -- the action -------------------------------------------------------------

def _perm_power(mapping, p, k):
    for _ in range(k):
        p = mapping[p]
    return p


def apply(system: MapSystem, n, x: Point) -> Point:
    """phi_n(x) = phi_1^{n_1} o ... o phi_d^{n_d}(x)."""
    n = system.check_index(n)
    system.check_point(x)
    cell = system.cell(x.cell)
    if isinstance(cell, FiniteCell):
        orders = system.perm_orders(cell.id)
        p = x.pos
        for i in range(system.dim):
            p = _perm_power(system.permutation(i + 1, cell.id), p, n[i] % orders[i])
        return Point(cell.id, p)
    if x.is_end:
        return x
    return Point(cell.id, vadd(x.pos, system.displacement(cell.id, n)))


def preimage(system: MapSystem, n, x: Point) -> frozenset:
    """{y : phi_n(y) = x}; a singleton because every generator is bijective."""
    n = system.check_index(n)
    system.check_point(x)
    cell = system.cell(x.cell)
    if isinstance(cell, FiniteCell):
        orders = system.perm_orders(cell.id)
        p = x.pos
        for i in range(system.dim):
            inverse = {v: k for k, v in system.permutation(i + 1, cell.id).items()}
            p = _perm_power(inverse, p, n[i] % orders[i])
        return frozenset([Point(cell.id, p)])
    if x.is_end:
        return frozenset([x])
    return frozenset([Point(cell.id, vsub(x.pos, system.displacement(cell.id, n)))])


def point_sort_key(system: MapSystem, x: Point):
    c = system._index.get(x.cell, len(system.cells))
    if x.is_end:
        return (c, 0 if x.pos == MINUS_END else 2, ())
    if isinstance(x.pos, tuple):
        return (c, 1, x.pos)
    cell = system.cell(x.cell)
    return (c, 1, (cell.points.index(x.pos),))
