"""Exact rational and integer feasibility for small linear systems.

Constraints are pairs ``(a, b)`` meaning ``a . x >= b`` with rational data.
Fourier-Motzkin elimination decides rational feasibility and, by
back-substitution, yields a witness.  On top of that sit an integer solver
for unconstrained systems (column Hermite reduction) and an exact decision
for ``V n = b`` over ``n >= lower``, ``n`` integral, which is what
translation dynamics on lattice cells needs.
"""
from __future__ import annotations

import math
from fractions import Fraction
from typing import Optional, Sequence

Constraint = tuple  # (coeffs: tuple[Fraction, ...], rhs: Fraction)


def _normalize(a, b):
    """Scale a constraint so its first nonzero coefficient has magnitude 1."""
    for c in a:
        if c != 0:
            s = abs(c)
            return tuple(x / s for x in a), b / s
    return a, b


def _eliminate(system: list, k: int) -> list:
    pos, neg, out = [], [], []
    for a, b in system:
        if a[k] > 0:
            pos.append((a, b))
        elif a[k] < 0:
            neg.append((a, b))
        else:
            out.append((a, b))
    for ap, bp in pos:
        for an, bn in neg:
            sp, sn = -an[k], ap[k]
            a = tuple(sp * x + sn * y for x, y in zip(ap, an))
            out.append((a, sp * bp + sn * bn))
    seen, uniq = set(), []
    for a, b in out:
        key = _normalize(a, b)
        if key not in seen:
            seen.add(key)
            uniq.append((a, b))
    return uniq


def _bounds(system, k, x):
    """Interval for variable k given values of variables < k."""
    lo, hi = None, None
    for a, b in system:
        if a[k] == 0:
            continue
        r = (b - sum(a[i] * x[i] for i in range(k))) / a[k]
        if a[k] > 0:
            lo = r if lo is None else max(lo, r)
        else:
            hi = r if hi is None else min(hi, r)
    return lo, hi


def _stages(constraints, nvars):
    system = [(tuple(Fraction(c) for c in a), Fraction(b)) for a, b in constraints]
    stages = [system]
    for k in reversed(range(nvars)):
        system = _eliminate(system, k)
        stages.append(system)
    # stages[j] involves variables 0..nvars-j-1
    return stages


def solve_rational(constraints: Sequence[Constraint], nvars: int) -> Optional[list]:
    """A rational point satisfying every constraint, or None."""
    stages = _stages(constraints, nvars)
    if any(b > 0 for _, b in stages[-1]):
        return None
    x: list = []
    for k in range(nvars):
        lo, hi = _bounds(stages[nvars - k - 1], k, x)
        if lo is not None:
            v = lo
        elif hi is not None:
            v = hi
        else:
            v = Fraction(0)
        if lo is not None and hi is not None and lo > hi:
            raise AssertionError("Fourier-Motzkin back-substitution left the feasible set")
        x.append(v)
    return x


def equality(a, b) -> list:
    a = tuple(Fraction(c) for c in a)
    return [(a, Fraction(b)), (tuple(-c for c in a), -Fraction(b))]


def at_least(nvars, i, b) -> Constraint:
    return (tuple(Fraction(1 if k == i else 0) for k in range(nvars)), Fraction(b))


def _columns(vectors):
    """Rows of the matrix whose i-th column is vectors[i]."""
    rank = len(vectors[0]) if vectors else 0
    return [[vectors[i][r] for i in range(len(vectors))] for r in range(rank)]


def cone_witness(vectors: Sequence[Sequence[int]], positive: Sequence[int]) -> Optional[tuple]:
    """Integer n >= 0 with sum n_i v_i = 0 and n_i >= 1 for i in ``positive``.

    ``positive`` uses 0-based indices.  Homogeneity makes rational and
    integer feasibility coincide: scale a rational solution by the lcm of its
    denominators.
    """
    d = len(vectors)
    cons = []
    for row in _columns(vectors):
        cons.extend(equality(row, 0))
    for i in range(d):
        cons.append(at_least(d, i, 1 if i in positive else 0))
    x = solve_rational(cons, d)
    if x is None:
        return None
    scale = math.lcm(*(v.denominator for v in x)) if x else 1
    return tuple(int(v * scale) for v in x)


# -- integer linear systems -------------------------------------------------

def solve_integer(matrix: Sequence[Sequence[int]], rhs: Sequence[int], ncols: int | None = None) -> Optional[list]:
    """An integer x with matrix @ x = rhs (no sign constraints), or None."""
    rows = [list(map(int, r)) for r in matrix]
    t = ncols if ncols is not None else (len(rows[0]) if rows else 0)
    if t == 0:
        return [] if all(int(v) == 0 for v in rhs) else None
    H = [r[:] for r in rows]
    U = [[1 if i == j else 0 for j in range(t)] for i in range(t)]

    def colop(p, q, a, b, c, dd):
        # (col p, col q) <- (a*p + b*q, c*p + dd*q); unimodular when ad - bc = +-1
        for M in (H, U):
            for r in M:
                x, y = r[p], r[q]
                r[p], r[q] = a * x + b * y, c * x + dd * y

    pivots = []  # (row, col)
    p = 0
    for i in range(len(H)):
        if p >= t:
            break
        for q in range(p + 1, t):
            x, y = H[i][p], H[i][q]
            if y == 0:
                continue
            g, s, u = _egcd(x, y)
            colop(p, q, s, u, -y // g, x // g)
        if H[i][p] != 0:
            pivots.append((i, p))
            p += 1

    y = [0] * t
    pivot_of_row = dict(pivots)
    for i in range(len(H)):
        acc = sum(H[i][j] * y[j] for j in range(t))
        if i in pivot_of_row:
            col = pivot_of_row[i]
            rest = int(rhs[i]) - acc
            if rest % H[i][col]:
                return None
            y[col] = rest // H[i][col]
        elif acc != int(rhs[i]):
            return None
    return [sum(U[r][j] * y[j] for j in range(t)) for r in range(t)]


def _egcd(a, b):
    """g, s, u with s*a + u*b = g = gcd(a, b) > 0."""
    old_r, r, old_s, s, old_u, u = a, b, 1, 0, 0, 1
    while r:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_s, s = s, old_s - q * s
        old_u, u = u, old_u - q * u
    if old_r < 0:
        old_r, old_s, old_u = -old_r, -old_s, -old_u
    return old_r, old_s, old_u


def reachable(vectors: Sequence[Sequence[int]], target: Sequence[int], lower: Sequence[int]) -> Optional[tuple]:
    """Integer n with sum n_i v_i = target and n_i >= lower_i, or None.

    Exact for any data.  Let T be the set of coordinates that can be positive
    in the cone {V n = 0, n >= 0}, and c an integer cone element with support
    exactly T.  Adding multiples of c repairs any lower bound on T, so it
    suffices to find n with V n = target and n_i >= lower_i off T, where
    coordinates in T range over all of Z.  Off T that polyhedron is bounded
    (a recession direction positive off T plus a large multiple of c would
    contradict maximality of T); enumerate those integer points and solve
    for the T-coordinates with the unconstrained integer solver.
    """
    d = len(vectors)
    rank = len(target)
    lower = [int(v) for v in lower]
    free, cone = [], [0] * d
    for i in range(d):
        w = cone_witness(vectors, [i])
        if w is not None:
            free.append(i)
            cone = [x + y for x, y in zip(cone, w)]
    bounded = [i for i in range(d) if i not in free]
    order = bounded + free  # bounded variables first, fixed by enumeration
    V = _columns(vectors) if rank else []

    cons = []
    for r in range(rank):
        cons.extend(equality([V[r][i] for i in order], target[r]))
    for pos, i in enumerate(order[: len(bounded)]):
        cons.append(at_least(d, pos, lower[i]))
    stages = _stages(cons, d)
    if any(b > 0 for _, b in stages[-1]):
        return None

    nb = len(bounded)

    def search(k, x):
        if k == nb:
            resid = [int(target[r]) - sum(V[r][bounded[j]] * x[j] for j in range(nb)) for r in range(rank)]
            sub = [[V[r][i] for i in free] for r in range(rank)]
            sol = solve_integer(sub, resid, len(free))
            if sol is None:
                return None
            n = [0] * d
            for j, i in enumerate(bounded):
                n[i] = x[j]
            for j, i in enumerate(free):
                n[i] = sol[j]
            deficit = max([lower[i] - n[i] for i in free] + [0])
            if deficit:
                m = max(-(-(lower[i] - n[i]) // cone[i]) for i in free if n[i] < lower[i])
                n = [a + m * c for a, c in zip(n, cone)]
            return tuple(n)
        lo, hi = _bounds(stages[d - k - 1], k, x)
        if lo is None or hi is None:
            raise AssertionError("unbounded coordinate outside the recession support")
        for v in range(math.ceil(lo), math.floor(hi) + 1):
            found = search(k + 1, x + [Fraction(v)])
            if found is not None:
                return found
        return None

    found = search(0, [])
    return None if found is None else tuple(int(v) for v in found)
