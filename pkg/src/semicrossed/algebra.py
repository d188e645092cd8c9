"""Exact formal-series engine for l^1(Z_+^d, C_0(X)).

A ``Fn`` is a function on the space with finitely many exceptional values
and, on compactified rank-1 cells, a constant value on each tail (and at the
corresponding end).  A ``Series`` is a finite sum of monomials U_n f with the
twisted product

    U_n f * U_m g = U_{n+m} ((f o phi_m) g).

Coefficients are Fractions everywhere except in ``phase_twist`` output,
which carries complex floats.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Optional

from .errors import CapTooSmall, PointNotInSpace, SystemMismatch
from .space import (
    MINUS_END,
    PLUS_END,
    FiniteCell,
    LatticeCell,
    MapSystem,
    Point,
    leq,
    point_sort_key,
    preimage,
    vadd,
)


def _num(v):
    if isinstance(v, (int, str)):
        return Fraction(v)
    return v


@dataclass(frozen=True)
class Tail:
    """Values on a compactified rank-1 cell away from the window.

    ``minus`` holds at every k <= ``t_minus`` and at the minus end, ``plus``
    at every k >= ``t_plus`` and at the plus end; ``t_minus < t_plus``.
    """

    minus: object
    t_minus: int
    plus: object
    t_plus: int


def _normalize_cell(cm, tm, cp, tp, window: dict):
    """Canonical (tail, window values) for one compactified cell."""
    ks = list(window)
    if tp is None:
        tp = max(ks + ([tm] if tm is not None else [-1])) + 1
    if tm is None:
        tm = min(ks + [tp]) - 1
    if tm >= tp:
        if cm != cp:
            raise ValueError("overlapping tails with different constants")
        tm = tp - 1
    lo = min([tm] + [k - 1 for k in ks])
    hi = max([tp] + [k + 1 for k in ks])

    def base(k):
        return cp if k >= tp else cm if k <= tm else 0

    w = {k: window.get(k, base(k)) for k in range(lo + 1, hi)}
    while hi - 1 > lo and w[hi - 1] == cp:
        del w[hi - 1]
        hi -= 1
    while lo + 1 < hi and w[lo + 1] == cm:
        del w[lo + 1]
        lo += 1
    if hi == lo + 1 and cm == cp:
        lo, hi = -1, 0
    vals = {k: v for k, v in w.items() if v != 0}
    if cm == 0 and cp == 0:
        return None, vals
    return Tail(cm, lo, cp, hi), vals


class Fn:
    """An element of C_0(X) in canonical form (immutable).

    ``values`` maps points to numbers; ``tails`` maps the id of a
    compactified cell to ``{"+": (c, t), "-": (c, t)}`` (either key optional),
    meaning value c on the tail beyond threshold t and at that end.  Explicit
    values override tail values.
    """

    __slots__ = ("_vals", "_tails", "_hash")

    def __init__(self, values: Mapping | None = None, tails: Mapping | None = None):
        vals = {x: _num(v) for x, v in (values or {}).items()}
        raw_tails = {}
        for cid, entry in (tails or {}).items():
            if isinstance(entry, Tail):
                raw_tails[cid] = (entry.minus, entry.t_minus, entry.plus, entry.t_plus)
                continue
            cm, tm = entry.get("-", (0, None))
            cp, tp = entry.get("+", (0, None))
            raw_tails[cid] = (_num(cm), tm, _num(cp), tp)
        self._build(vals, raw_tails)

    def _build(self, vals, raw_tails):
        out_vals = {}
        by_cell: dict = {}
        for x, v in vals.items():
            if x.cell in raw_tails:
                if x.is_end:
                    raise ValueError(f"value at end {x} is set by its tail constant")
                by_cell.setdefault(x.cell, {})[x.pos[0]] = v
            elif v != 0:
                if x.is_end:
                    raise ValueError(f"nonzero value at end {x} needs a matching tail")
                out_vals[x] = v
        tails = {}
        for cid, (cm, tm, cp, tp) in raw_tails.items():
            tail, window = _normalize_cell(cm, tm, cp, tp, by_cell.get(cid, {}))
            if tail is not None:
                tails[cid] = tail
            for k, v in window.items():
                out_vals[Point(cid, (k,))] = v
        self._vals = out_vals
        self._tails = tails
        self._hash = None

    @classmethod
    def _raw(cls, vals, raw_tails):
        f = cls.__new__(cls)
        f._build(vals, raw_tails)
        return f

    # -- basic access
    @property
    def values(self) -> dict:
        return dict(self._vals)

    @property
    def tails(self) -> dict:
        return dict(self._tails)

    def is_zero(self) -> bool:
        return not self._vals and not self._tails

    def __call__(self, x: Point):
        if x in self._vals:
            return self._vals[x]
        tail = self._tails.get(x.cell)
        if tail is None:
            return 0
        if x.pos == PLUS_END:
            return tail.plus
        if x.pos == MINUS_END:
            return tail.minus
        k = x.pos[0]
        if k >= tail.t_plus:
            return tail.plus
        if k <= tail.t_minus:
            return tail.minus
        return 0

    def __eq__(self, other):
        if not isinstance(other, Fn):
            return NotImplemented
        return self._vals == other._vals and self._tails == other._tails

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((frozenset(self._vals.items()), frozenset(self._tails.items())))
        return self._hash

    def __repr__(self):
        return f"Fn({self._vals!r}, tails={self._tails!r})"

    # -- pointwise arithmetic
    def _view(self, cid):
        """(c_minus, t_minus, c_plus, t_plus) with virtual thresholds if no tail."""
        t = self._tails.get(cid)
        if t is not None:
            return t.minus, t.t_minus, t.plus, t.t_plus
        ks = [x.pos[0] for x in self._vals if x.cell == cid]
        if not ks:
            return 0, None, 0, None
        return 0, min(ks) - 1, 0, max(ks) + 1

    def _combine(self, other: "Fn", op) -> "Fn":
        vals = {}
        for x in set(self._vals) | set(other._vals):
            if x.cell not in self._tails and x.cell not in other._tails:
                vals[x] = op(self(x), other(x))
        raw_tails = {}
        for cid in set(self._tails) | set(other._tails):
            a, b = self._view(cid), other._view(cid)
            tms = [t for t in (a[1], b[1]) if t is not None]
            tps = [t for t in (a[3], b[3]) if t is not None]
            tm, tp = min(tms), max(tps)
            for k in range(tm + 1, tp):
                x = Point(cid, (k,))
                vals[x] = op(self(x), other(x))
            raw_tails[cid] = (op(a[0], b[0]), tm, op(a[2], b[2]), tp)
        return Fn._raw(vals, raw_tails)

    def __add__(self, other):
        return self._combine(other, lambda u, v: u + v)

    def __sub__(self, other):
        return self._combine(other, lambda u, v: u - v)

    def __mul__(self, other):
        if isinstance(other, Fn):
            return self._combine(other, lambda u, v: u * v)
        return self.scale(other)

    __rmul__ = __mul__

    def __neg__(self):
        return self.scale(-1)

    def scale(self, c) -> "Fn":
        c = _num(c)
        if c == 0:
            return Fn()
        vals = {x: c * v for x, v in self._vals.items()}
        tails = {cid: (c * t.minus, t.t_minus, c * t.plus, t.t_plus) for cid, t in self._tails.items()}
        return Fn._raw(vals, tails)

    def map_values(self, g) -> "Fn":
        """Apply g (with g(0) == 0) to every value."""
        vals = {x: g(v) for x, v in self._vals.items()}
        tails = {cid: (g(t.minus), t.t_minus, g(t.plus), t.t_plus) for cid, t in self._tails.items()}
        return Fn._raw(vals, tails)

    # -- norms and predicates
    def sup_norm(self):
        mags = [abs(v) for v in self._vals.values()]
        for t in self._tails.values():
            mags.extend((abs(t.minus), abs(t.plus)))
        return max(mags, default=Fraction(0))

    def is_nonnegative(self) -> bool:
        vs = list(self._vals.values())
        for t in self._tails.values():
            vs.extend((t.minus, t.plus))
        return all(v >= 0 for v in vs)

    def nonzero_points(self) -> list:
        """Exceptional points with nonzero value, then ends with nonzero tail."""
        pts = [x for x, v in self._vals.items() if v != 0]
        for cid, t in self._tails.items():
            if t.minus != 0:
                pts.append(Point(cid, MINUS_END))
            if t.plus != 0:
                pts.append(Point(cid, PLUS_END))
        return pts

    def has_tails(self) -> bool:
        return bool(self._tails)

    def check_in(self, system: MapSystem) -> None:
        for x in self._vals:
            system.check_point(x)
        for cid in self._tails:
            cell = system.cell(cid)
            if not (isinstance(cell, LatticeCell) and cell.ends):
                raise PointNotInSpace(f"tail on cell {cid}, which has no ends")

    def to_json(self, system: MapSystem | None = None) -> dict:
        items = list(self._vals.items())
        if system is not None:
            items.sort(key=lambda kv: point_sort_key(system, kv[0]))
        else:
            items.sort(key=lambda kv: str(kv[0]))
        tails = {}
        for cid in sorted(self._tails):
            t = self._tails[cid]
            tails[cid] = {"-": [fmt_number(t.minus), t.t_minus], "+": [fmt_number(t.plus), t.t_plus]}
        return {"values": [[str(x), fmt_number(v)] for x, v in items], "tails": tails}


def fmt_number(v) -> str:
    if isinstance(v, Fraction):
        return f"{v.numerator}/{v.denominator}"
    if isinstance(v, int):
        return f"{v}/1"
    return repr(v)


def indicator(points: Iterable[Point], tails: Mapping | None = None) -> Fn:
    """Indicator of a finite set, optionally with unit tails ``{cell: {"+": t}}``."""
    table = {cid: {s: (1, t) for s, t in sides.items()} for cid, sides in (tails or {}).items()}
    return Fn({x: 1 for x in points}, table)


def constant_on_compact(system: MapSystem, c=1) -> Fn:
    """The constant function c; only in C_0(X) when X is compact."""
    vals, tails = {}, {}
    for cell in system.cells:
        if isinstance(cell, FiniteCell):
            vals.update({Point(cell.id, p): c for p in cell.points})
        elif cell.ends:
            tails[cell.id] = {"-": (c, -1), "+": (c, 0)}
        else:
            raise ValueError(f"cell {cell.id} is not compact; constants are not in C_0")
    return Fn(vals, tails)


def compose_with_map(system: MapSystem, n, f: Fn) -> Fn:
    """alpha_n(f) = f o phi_n."""
    n = system.check_index(n)
    if not any(n):
        return f
    vals = {}
    for x, v in f._vals.items():
        for y in preimage(system, n, x):
            vals[y] = v
    tails = {}
    for cid, t in f._tails.items():
        (shift,) = system.displacement(cid, n)
        tails[cid] = (t.minus, t.t_minus - shift, t.plus, t.t_plus - shift)
    return Fn._raw(vals, tails)


# -- series -------------------------------------------------------------------

class Series:
    """A finitely supported formal sum of monomials U_n f_n over one system."""

    __slots__ = ("system", "terms", "cap", "truncated")

    def __init__(self, system: MapSystem, terms: Mapping | None = None, cap=None, truncated=False, validate=True):
        self.system = system
        self.cap = None if cap is None else system.check_index(cap)
        self.truncated = truncated
        clean = {}
        for n, f in (terms or {}).items():
            if validate:
                n = system.check_index(n)
                f.check_in(system)
                if self.cap is not None and not leq(n, self.cap):
                    raise ValueError(f"term U_{list(n)} exceeds degree cap {list(self.cap)}")
            if not f.is_zero():
                clean[n] = clean[n] + f if n in clean else f
        self.terms = {n: f for n, f in clean.items() if not f.is_zero()}

    @classmethod
    def monomial(cls, system, n, f: Fn) -> "Series":
        return cls(system, {tuple(n): f})

    @classmethod
    def zero(cls, system) -> "Series":
        return cls(system)

    def is_zero(self) -> bool:
        return not self.terms

    def degrees(self) -> list:
        return sorted(self.terms)

    def __iter__(self):
        return iter(sorted(self.terms.items()))

    def __len__(self):
        return len(self.terms)

    def __eq__(self, other):
        if not isinstance(other, Series):
            return NotImplemented
        return self.system == other.system and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __repr__(self):
        return "Series(" + " + ".join(f"U{list(n)}*{f!r}" for n, f in self) + ")"

    def _same(self, other):
        if not isinstance(other, Series):
            raise TypeError(f"cannot combine Series with {type(other).__name__}")
        if other.system is not self.system and other.system != self.system:
            raise SystemMismatch("series live over different systems")

    def __add__(self, other):
        self._same(other)
        terms = dict(self.terms)
        for n, f in other.terms.items():
            terms[n] = terms[n] + f if n in terms else f
        return Series(self.system, terms, truncated=self.truncated or other.truncated, validate=False)

    def __neg__(self):
        return self.scale(-1)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c) -> "Series":
        return Series(self.system, {n: f.scale(c) for n, f in self.terms.items()}, self.cap, self.truncated, validate=False)

    def __mul__(self, other):
        if isinstance(other, Series):
            return multiply(self.system, self, other)
        return self.scale(other)

    def __rmul__(self, other):
        return self.scale(other)

    def map_coefficients(self, g) -> "Series":
        return Series(self.system, {n: g(n, f) for n, f in self.terms.items()}, self.cap, self.truncated, validate=False)

    def to_json(self) -> dict:
        return {
            "terms": [{"degree": list(n), "coefficient": f.to_json(self.system)} for n, f in self],
            "truncated": self.truncated,
        }


def multiply(system: MapSystem, A: Series, B: Series, cap=None) -> Series:
    """Twisted product; terms above the componentwise cap are dropped and flagged.

    Without an explicit cap the result inherits the componentwise minimum of
    the operands' caps.
    """
    for S in (A, B):
        if S.system is not system and S.system != system:
            raise SystemMismatch("series live over a different system")
    if cap is None:
        caps = [c for c in (A.cap, B.cap) if c is not None]
        if caps:
            cap = tuple(min(col) for col in zip(*caps))
    else:
        cap = system.check_index(cap)
    terms: dict = {}
    dropped = False
    composed: dict = {}
    for n, f in A.terms.items():
        for m, g in B.terms.items():
            deg = vadd(n, m)
            if cap is not None and not leq(deg, cap):
                dropped = True
                continue
            key = (n, m)
            if key not in composed:
                composed[key] = compose_with_map(system, m, f)
            h = composed[key] * g
            if h.is_zero():
                continue
            terms[deg] = terms[deg] + h if deg in terms else h
    return Series(system, terms, cap, A.truncated or B.truncated or dropped, validate=False)


def truncate(A: Series, cap) -> Series:
    cap = A.system.check_index(cap)
    kept = {n: f for n, f in A.terms.items() if leq(n, cap)}
    return Series(A.system, kept, cap, A.truncated or len(kept) < len(A.terms), validate=False)


def fourier_coefficient(A: Series, m) -> Fn:
    return A.terms.get(tuple(m), Fn())


def phase_twist(A: Series, t) -> Series:
    """theta_t: scale the degree-n coefficient by exp(i t.n) (complex floats)."""
    t = [float(v) for v in t]
    if len(t) != A.system.dim:
        raise ValueError("phase vector length must equal the system dimension")
    return A.map_coefficients(lambda n, f: f.scale(cmath.exp(1j * sum(a * b for a, b in zip(t, n)))))


def sup_norm(f: Fn):
    return f.sup_norm()


def l1_norm(A: Series):
    return sum((f.sup_norm() for f in A.terms.values()), Fraction(0))


def opnorm_bracket(A: Series):
    """(max_m ||E_m(A)||_inf, ||A||_1): bounds for the operator norm."""
    lower = max((f.sup_norm() for f in A.terms.values()), default=Fraction(0))
    return lower, l1_norm(A)


def power(system: MapSystem, A: Series, k: int, cap=None) -> Series:
    """A^k by repeated squaring, truncating above ``cap`` when given.

    Raises CapTooSmall when truncation leaves nothing although the exact
    power is nonzero.
    """
    if k < 1:
        raise ValueError("power needs k >= 1")
    base = A if cap is None else truncate(A, cap)
    result: Optional[Series] = None
    e = k
    while True:
        if e & 1:
            result = base if result is None else multiply(system, result, base, cap)
        e >>= 1
        if not e:
            break
        base = multiply(system, base, base, cap)
    if cap is not None and result.is_zero() and result.truncated and not A.truncated:
        if not power(system, A, k).is_zero():
            raise CapTooSmall(f"cap {list(cap)} removed every term of A^{k}")
    return result


def _root(q, k: int) -> float:
    q = abs(q)
    if q == 0:
        return 0.0
    if isinstance(q, Fraction):
        return math.exp((math.log(q.numerator) - math.log(q.denominator)) / k)
    return float(q) ** (1.0 / k)


@dataclass(frozen=True)
class BracketRow:
    k: int
    lower: object  # exact radicand
    upper: object
    lower_root: float
    upper_root: float
    argmax: Optional[tuple]  # degree whose coefficient attains ``lower``
    truncated: bool = False  # upper is then not a bound; lower still is

    def to_json(self) -> dict:
        return {
            "truncated": self.truncated,
            "k": self.k,
            "lower": fmt_number(self.lower),
            "upper": fmt_number(self.upper),
            "lower_root": self.lower_root,
            "upper_root": self.upper_root,
            "argmax": None if self.argmax is None else list(self.argmax),
        }


@dataclass(frozen=True)
class SpectralBracket:
    rows: tuple
    nilpotent_index: Optional[int]  # least k with A^k == 0 exactly, if reached

    @property
    def nilpotent(self) -> bool:
        return self.nilpotent_index is not None

    def to_json(self) -> dict:
        return {"rows": [r.to_json() for r in self.rows], "nilpotent_index": self.nilpotent_index}


def spectral_radius_bracket(system: MapSystem, A: Series, k_max: int, cap=None) -> SpectralBracket:
    """Rows (k, lower_k^{1/k}, upper_k^{1/k}) for A^k, k = 1..k_max.

    upper_k^{1/k} bounds the spectral radius from above at every k;
    lower_k^{1/k} tends to a lower bound as k grows.  Stops at the first
    exactly vanishing power.
    """
    if k_max < 1:
        raise ValueError("k_max must be at least 1")
    rows = []
    P = A
    for k in range(1, k_max + 1):
        if k > 1:
            P = multiply(system, P, A, cap)
        if P.is_zero() and not P.truncated:
            return SpectralBracket(tuple(rows), k)
        lower, upper = opnorm_bracket(P)
        arg = None
        for n, f in P:
            if f.sup_norm() == lower:
                arg = n
                break
        rows.append(BracketRow(k, lower, upper, _root(lower, k), _root(upper, k), arg, P.truncated))
    return SpectralBracket(tuple(rows), None)


def series_close(A: Series, B: Series, tol: float) -> bool:
    """Coefficientwise sup-norm agreement within tol (for float series)."""
    for n in set(A.terms) | set(B.terms):
        diff = fourier_coefficient(A, n) - fourier_coefficient(B, n)
        if diff.sup_norm() > tol:
            return False
    return True
