"""Seeded random points, functions and series for property checks."""
from __future__ import annotations

import random
from fractions import Fraction

from .algebra import Fn, Series
from .space import FiniteCell, MapSystem, Point


def random_value(rng: random.Random, nonneg=False) -> Fraction:
    while True:
        p = rng.randint(0 if nonneg else -3, 3)
        if p:
            return Fraction(p, rng.randint(1, 3))


def random_point(system: MapSystem, rng: random.Random, window=3, near=None) -> Point:
    """A non-end point, optionally within ``window`` of one of ``near``."""
    if near:
        anchor = rng.choice(list(near))
        cell = system.cell(anchor.cell)
        if isinstance(cell, FiniteCell):
            return Point(cell.id, rng.choice(cell.points))
        base = anchor.pos if isinstance(anchor.pos, tuple) else (0,) * cell.rank
        return Point(cell.id, tuple(b + rng.randint(-window, window) for b in base))
    cell = rng.choice(system.cells)
    if isinstance(cell, FiniteCell):
        return Point(cell.id, rng.choice(cell.points))
    return Point(cell.id, tuple(rng.randint(-window, window) for _ in range(cell.rank)))


def random_fn(system: MapSystem, rng: random.Random, max_points=3, window=3, tail_prob=0.3, nonneg=False, near=None) -> Fn:
    vals = {random_point(system, rng, window, near): random_value(rng, nonneg) for _ in range(rng.randint(0, max_points))}
    tails = {}
    for cid in system.ends_cells():
        for side in "+-":
            if rng.random() < tail_prob:
                t = rng.randint(1, window + 1)
                tails.setdefault(cid, {})[side] = (random_value(rng, nonneg), t if side == "+" else -t)
    return Fn(vals, tails)


def random_nonzero_fn(system: MapSystem, rng: random.Random, **kw) -> Fn:
    while True:
        f = random_fn(system, rng, **kw)
        if not f.is_zero():
            return f


def random_degree(system: MapSystem, rng: random.Random, max_degree=2, nonzero=False) -> tuple:
    while True:
        n = tuple(rng.randint(0, max_degree) for _ in range(system.dim))
        if any(n) or not nonzero:
            return n


def random_series(system: MapSystem, rng: random.Random, max_terms=3, max_degree=2, **kw) -> Series:
    terms = {}
    for _ in range(rng.randint(1, max_terms)):
        n = random_degree(system, rng, max_degree)
        f = random_fn(system, rng, **kw)
        terms[n] = terms[n] + f if n in terms else f
    return Series(system, terms)


def random_monomial(system: MapSystem, rng: random.Random, max_degree=2, nonzero_degree=True, **kw) -> Series:
    return Series.monomial(system, random_degree(system, rng, max_degree, nonzero_degree), random_nonzero_fn(system, rng, **kw))
