"""Recurrence, wandering, closure and the strong J-centre.

Every point of a finite cell and every integer point of a lattice cell is
isolated; the only non-isolated points are the ends of compactified rank-1
cells, whose neighbourhoods are tails.  Consequences used throughout:

* an isolated point is J-recurrent iff phi_n(x) = x for some n in Sigma_J,
  and J-wandering iff it is not J-recurrent (take V = {x});
* ends are fixed by every generator, hence always recurrent and never
  wandering;
* translation recurrence does not depend on the position inside a lattice
  cell, so recurrent and wandering regions are cell-uniform there.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Optional

from . import lattice
from .errors import InvariantViolation, MaxStepsExceeded, PointNotInSpace
from .space import (
    ENDS,
    FiniteCell,
    LatticeCell,
    MapSystem,
    Point,
    apply,
    check_directions,
    point_sort_key,
    vsub,
)


@dataclass(frozen=True)
class CellPart:
    """The part of a region inside one cell.

    For finite cells ``points`` is the member set and ``cofinite`` is False.
    For lattice cells the integer members are ``points`` (finite) or the
    complement of ``points`` (cofinite); ``ends`` lists member ends.
    """

    points: frozenset = frozenset()
    cofinite: bool = False
    ends: frozenset = frozenset()


def _part_ops(a: CellPart, b: CellPart, op: str) -> CellPart:
    if op == "and":
        ends = a.ends & b.ends
        if a.cofinite and b.cofinite:
            return CellPart(a.points | b.points, True, ends)
        if a.cofinite:
            return CellPart(b.points - a.points, False, ends)
        if b.cofinite:
            return CellPart(a.points - b.points, False, ends)
        return CellPart(a.points & b.points, False, ends)
    if op == "or":
        ends = a.ends | b.ends
        if a.cofinite and b.cofinite:
            return CellPart(a.points & b.points, True, ends)
        if a.cofinite:
            return CellPart(a.points - b.points, True, ends)
        if b.cofinite:
            return CellPart(b.points - a.points, True, ends)
        return CellPart(a.points | b.points, False, ends)
    raise ValueError(op)


@dataclass(frozen=True)
class Region:
    """A decidable subset of the space of ``system``."""

    system: MapSystem = field(compare=False, repr=False)
    parts: tuple  # (cell_id, CellPart) in cell order

    # constructors
    @classmethod
    def empty(cls, system):
        return cls(system, tuple((c.id, CellPart()) for c in system.cells))

    @classmethod
    def whole(cls, system):
        parts = []
        for c in system.cells:
            if isinstance(c, FiniteCell):
                parts.append((c.id, CellPart(frozenset(c.points))))
            else:
                parts.append((c.id, CellPart(frozenset(), True, frozenset(ENDS) if c.ends else frozenset())))
        return cls(system, tuple(parts))

    @classmethod
    def from_parts(cls, system, parts: dict):
        return cls(system, tuple((c.id, parts.get(c.id, CellPart())) for c in system.cells))

    @classmethod
    def from_points(cls, system, points: Iterable[Point]):
        acc: dict = {c.id: (set(), set()) for c in system.cells}
        for x in points:
            system.check_point(x)
            (acc[x.cell][1] if x.is_end else acc[x.cell][0]).add(x.pos)
        return cls.from_parts(system, {k: CellPart(frozenset(p), False, frozenset(e)) for k, (p, e) in acc.items()})

    # queries
    def part(self, cell_id) -> CellPart:
        return dict(self.parts)[cell_id]

    def __contains__(self, x: Point) -> bool:
        self.system.check_point(x)
        p = self.part(x.cell)
        if x.is_end:
            return x.pos in p.ends
        return (x.pos in p.points) != p.cofinite

    def is_empty(self) -> bool:
        return all(not p.cofinite and not p.points and not p.ends for _, p in self.parts)

    def is_finite(self) -> bool:
        return not any(p.cofinite for _, p in self.parts)

    def points(self) -> list:
        """Members, for finite regions only."""
        if not self.is_finite():
            raise ValueError("region is infinite")
        out = []
        for cid, p in self.parts:
            out.extend(Point(cid, q) for q in p.points)
            out.extend(Point(cid, e) for e in p.ends)
        return sorted(out, key=lambda x: point_sort_key(self.system, x))

    def __and__(self, other: "Region") -> "Region":
        return Region(self.system, tuple((c, _part_ops(p, q, "and")) for (c, p), (_, q) in zip(self.parts, other.parts)))

    def __or__(self, other: "Region") -> "Region":
        return Region(self.system, tuple((c, _part_ops(p, q, "or")) for (c, p), (_, q) in zip(self.parts, other.parts)))

    def complement(self) -> "Region":
        parts = []
        for (cid, p), (_, w) in zip(self.parts, Region.whole(self.system).parts):
            cell = self.system.cell(cid)
            if isinstance(cell, FiniteCell):
                parts.append((cid, CellPart(w.points - p.points)))
            else:
                parts.append((cid, CellPart(p.points, not p.cofinite, w.ends - p.ends)))
        return Region(self.system, tuple(parts))

    def __sub__(self, other: "Region") -> "Region":
        return self & other.complement()

    def issubset(self, other: "Region") -> bool:
        return (self - other).is_empty()

    def to_json(self) -> dict:
        out = {}
        for cid, p in self.parts:
            cell = self.system.cell(cid)
            if isinstance(cell, FiniteCell):
                members = [q for q in cell.points if q in p.points]
                if len(members) == len(cell.points):
                    tag = "all"
                elif not members:
                    tag = "empty"
                else:
                    tag = "points:[" + ",".join(members) + "]"
                out[cid] = {"tag": tag, "ends": []}
                continue
            pts = sorted(p.points)
            fmt = ",".join(str(q[0]) if len(q) == 1 else "(" + ",".join(map(str, q)) + ")" for q in pts)
            if p.cofinite:
                tag = "all" if not pts else f"cofinite:[{fmt}]"
            else:
                tag = "empty" if not pts else f"points:[{fmt}]"
            out[cid] = {"tag": tag, "ends": [e for e in ENDS if e in p.ends]}
        return out

    def __str__(self):
        items = []
        for cid, v in self.to_json().items():
            if v["tag"] == "empty" and not v["ends"]:
                continue
            ends = f"+{{{','.join(v['ends'])}}}" if v["ends"] else ""
            items.append(f"{cid}[{v['tag']}]{ends}")
        return " | ".join(items) if items else "(empty)"


# -- recurrence -------------------------------------------------------------

def _finite_hit(system: MapSystem, x: Point, y: Point, J: frozenset) -> Optional[tuple]:
    """Least-degree n in Sigma_J with phi_n(x) = y on a finite cell."""
    orders = system.perm_orders(x.cell)
    base = tuple(1 if i + 1 in J else 0 for i in range(system.dim))
    box = sorted(itertools.product(*(range(o) for o in orders)), key=lambda m: (sum(m), m))
    for m in box:
        n = tuple(b + k for b, k in zip(base, m))
        if apply(system, n, x) == y:
            return n
    return None


def period(system: MapSystem, x: Point, J: Iterable[int]) -> Optional[tuple]:
    """Some n in Sigma_J with phi_n(x) = x, or None when x is not J-recurrent."""
    J = check_directions(J, system.dim)
    system.check_point(x)
    cell = system.cell(x.cell)
    if x.is_end:
        return tuple(1 if i + 1 in J else 0 for i in range(system.dim))
    if isinstance(cell, FiniteCell):
        return _finite_hit(system, x, x, J)
    return lattice.cone_witness(system.translations(cell.id), [j - 1 for j in J])


def is_J_recurrent(system: MapSystem, x: Point, J: Iterable[int]) -> bool:
    return period(system, x, J) is not None


def _cell_recurrent(system, cell, J) -> bool:
    return lattice.cone_witness(system.translations(cell.id), [j - 1 for j in J]) is not None


def _check_within(system, within):
    if within is None:
        return Region.whole(system)
    if not is_invariant(system, within):
        raise ValueError("restriction must be to an invariant region")
    return within


def recurrent_region(system: MapSystem, J: Iterable[int], within: Region | None = None) -> Region:
    """J-recurrent points, of the whole system or of the subsystem on ``within``.

    ``within`` must be invariant; recurrence is then checked against the
    restricted dynamics, which never leave it.
    """
    J = check_directions(J, system.dim)
    Y = _check_within(system, within)
    parts = {}
    for cell in system.cells:
        p = Y.part(cell.id)
        if isinstance(cell, FiniteCell):
            keep = frozenset(q for q in p.points if period(system, Point(cell.id, q), J) is not None)
            parts[cell.id] = CellPart(keep)
        elif _cell_recurrent(system, cell, J):
            parts[cell.id] = p
        else:
            parts[cell.id] = CellPart(frozenset(), False, p.ends)
    return Region.from_parts(system, parts)


def is_J_wandering_point(system: MapSystem, x: Point, J: Iterable[int]) -> bool:
    J = check_directions(J, system.dim)
    system.check_point(x)
    if x.is_end:
        return False
    return period(system, x, J) is None


def wandering_region(system: MapSystem, J: Iterable[int], within: Region | None = None) -> Region:
    """Points of the (sub)system having a J-wandering neighbourhood."""
    J = check_directions(J, system.dim)
    Y = _check_within(system, within)
    parts = {}
    for cell in system.cells:
        p = Y.part(cell.id)
        if isinstance(cell, FiniteCell):
            parts[cell.id] = CellPart(frozenset(q for q in p.points if period(system, Point(cell.id, q), J) is None))
        elif _cell_recurrent(system, cell, J):
            parts[cell.id] = CellPart()
        else:
            parts[cell.id] = CellPart(p.points, p.cofinite)
    return Region.from_parts(system, parts)


def return_index(system: MapSystem, x: Point, y: Point, J: Iterable[int]) -> Optional[tuple]:
    """Some n in Sigma_J with phi_n(x) = y, or None."""
    J = check_directions(J, system.dim)
    system.check_point(x)
    system.check_point(y)
    if x.cell != y.cell or x.is_end != y.is_end:
        return None
    cell = system.cell(x.cell)
    if x.is_end:
        return period(system, x, J) if x == y else None
    if isinstance(cell, FiniteCell):
        return _finite_hit(system, x, y, J)
    lower = [1 if i + 1 in J else 0 for i in range(system.dim)]
    return lattice.reachable(system.translations(cell.id), vsub(y.pos, x.pos), lower)


def wandering_set_violation(system: MapSystem, points: Iterable[Point], J: Iterable[int]):
    """Decide whether a finite set V of points is a J-wandering open set.

    Returns None when it is, otherwise ``(x, y, n)`` with x, y in V, n in
    Sigma_J and phi_n(x) = y.  Ends make V non-wandering (they are fixed);
    V is finite, so a set containing an end is not even open, and that case
    is reported with ``n`` set to the period of the end.
    """
    J = check_directions(J, system.dim)
    V = list(points)
    for x in V:
        system.check_point(x)
    for x in V:
        for y in V:
            n = return_index(system, x, y, J)
            if n is not None:
                return x, y, n
    return None


# -- topology ---------------------------------------------------------------

def closure(system: MapSystem, region: Region) -> Region:
    """Add each end toward which the region has an infinite tail."""
    parts = {}
    for cell in system.cells:
        p = region.part(cell.id)
        if isinstance(cell, LatticeCell) and cell.ends and p.cofinite:
            parts[cell.id] = CellPart(p.points, True, frozenset(ENDS))
        else:
            parts[cell.id] = p
    return Region.from_parts(system, parts)


def is_invariant(system: MapSystem, region: Region) -> bool:
    """phi_i(region) is contained in region for every generator."""
    for cell in system.cells:
        p = region.part(cell.id)
        for i in range(1, system.dim + 1):
            e = tuple(1 if k == i - 1 else 0 for k in range(system.dim))
            if isinstance(cell, FiniteCell):
                if any(apply(system, e, Point(cell.id, q)).pos not in p.points for q in p.points):
                    return False
                continue
            v = system.translations(cell.id)[i - 1]
            moved = frozenset(tuple(a + b for a, b in zip(q, v)) for q in p.points)
            if p.cofinite:
                # image of Z^k \ P is Z^k \ (P + v); need P subset of P + v
                if not p.points <= moved:
                    return False
            elif not moved <= p.points:
                return False
    return True


# -- centre -----------------------------------------------------------------

@dataclass(frozen=True)
class CentreResult:
    J: frozenset
    strata: tuple  # X_{J,0} >= X_{J,1} >= ...; the last two are equal
    depth: int
    matches_closure: bool


def centre_peel(system: MapSystem, J: Iterable[int], max_steps: int = 64) -> CentreResult:
    """Peel J-wandering points off restricted subsystems until nothing changes."""
    J = check_directions(J, system.dim)
    if max_steps < 1:
        raise ValueError("max_steps must be at least 1")
    strata = [Region.whole(system)]
    for _ in range(max_steps):
        Y = strata[-1]
        nxt = Y - wandering_region(system, J, within=Y)
        strata.append(nxt)
        if nxt == Y:
            break
    else:
        raise MaxStepsExceeded(f"no fixpoint for J={sorted(J)} after {max_steps} peels")
    centre = strata[-1]
    target = closure(system, recurrent_region(system, J))
    ok = centre == target
    if not ok:
        raise InvariantViolation(f"centre {centre} differs from recurrent closure {target}")
    return CentreResult(J, tuple(strata), len(strata) - 2, ok)


@dataclass(frozen=True)
class WandrecRecord:
    J: frozenset
    wandering_exists: bool
    recurrent_dense: bool

    @property
    def implication_holds(self) -> bool:
        return self.wandering_exists or self.recurrent_dense


def check_wandrec(system: MapSystem, J: Iterable[int]) -> WandrecRecord:
    """No J-wandering open set forces the J-recurrent points to be dense."""
    J = check_directions(J, system.dim)
    wandering = not wandering_region(system, J).is_empty()
    dense = closure(system, recurrent_region(system, J)) == Region.whole(system)
    rec = WandrecRecord(J, wandering, dense)
    if not rec.implication_holds:
        raise InvariantViolation(f"J={sorted(J)}: no wandering sets but recurrent points not dense")
    return rec


def first_point(region: Region) -> Point:
    """A canonical member of a nonempty region (closest to the origin)."""
    for cid, p in region.parts:
        cell = region.system.cell(cid)
        if isinstance(cell, FiniteCell):
            for q in cell.points:
                if q in p.points:
                    return Point(cid, q)
        elif p.cofinite:
            for radius in itertools.count():
                for q in sorted(itertools.product(range(-radius, radius + 1), repeat=cell.rank)):
                    if max(map(abs, q)) == radius and q not in p.points:
                        return Point(cid, q)
        elif p.points:
            return Point(cid, min(p.points, key=lambda q: (sum(map(abs, q)), q)))
        elif p.ends:
            return Point(cid, sorted(p.ends)[0])
    raise PointNotInSpace("region is empty")
