"""Jacobson-radical membership and the machinery that certifies it.

Membership of a polynomial A is decided monomial by monomial: E_0(A) must
vanish, and each U_n f with n != 0 is in the radical iff f vanishes on the
J-recurrent points for J = supp n.  Two independent routes back the
verdicts up:

* ``witness_build`` / ``witness_verify`` construct, for a J-recurrent point
  where f does not vanish, the series A = B U_q f whose powers keep a
  Fourier coefficient of sup-norm at least lambda_k = 2^-(2^k - k - 1);
* ``quasinilpotence_sampler`` computes exact spectral brackets of A B for
  sampled B, so a non-member should meet some B with a persistent lower
  bound while a member only ever produces (eventually) vanishing powers.

Square-zero ideals U_{e_J} g with g supported on a J-wandering set give the
non-semisimplicity witnesses.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from .algebra import (
    Fn,
    Series,
    compose_with_map,
    fmt_number,
    fourier_coefficient,
    indicator,
    multiply,
    power,
    spectral_radius_bracket,
)
from .dynamics import (
    Region,
    closure,
    first_point,
    period,
    recurrent_region,
    wandering_set_violation,
)
from .errors import (
    BoundViolated,
    InvariantViolation,
    NotRecurrent,
    SupportNotWandering,
    ZeroDegree,
)
from .sampling import random_monomial, random_series
from .space import (
    MINUS_END,
    PLUS_END,
    MapSystem,
    Point,
    apply,
    check_directions,
    e_J,
    in_sigma_J,
    preimage,
    support,
    vadd,
    vscale,
    vsub,
)

# -- index families and the lambda/mu recursion -------------------------------


@dataclass(frozen=True)
class IndexFamily:
    base: tuple  # n_1..n_K
    sets: tuple  # S_0..S_K, each a tuple (multiset order kept)
    anchors: tuple  # m_0..m_K

    @property
    def K(self) -> int:
        return len(self.base)

    def union(self, k: int) -> list:
        """S_0 + ... + S_k as a list, repeats kept."""
        out = []
        for S in self.sets[: k + 1]:
            out.extend(S)
        return out


def index_family(base: Sequence[Sequence[int]]) -> IndexFamily:
    """Index sets S_0..S_K and anchors m_0..m_K generated by n_1..n_K.

    S_0 = {0}, S_1 = {n_1}, S_{k+1} = n_{k+1} + m_k + (S_0 u ... u S_k),
    m_0 = 0, m_k = n_k + 2 m_{k-1}.
    """
    base = tuple(tuple(int(e) for e in n) for n in base)
    if not base:
        raise ValueError("index family needs at least one base vector")
    d = len(base[0])
    zero = (0,) * d
    sets = [(zero,)]
    anchors = [zero]
    union = [zero]
    for k, n in enumerate(base, start=1):
        if k == 1:
            S = (n,)
        else:
            shift = vadd(n, anchors[-1])
            S = tuple(vadd(shift, j) for j in union)
        sets.append(S)
        anchors.append(vadd(n, vscale(2, anchors[-1])))
        union.extend(S)
    fam = IndexFamily(base, tuple(sets), tuple(anchors))
    if all(any(n) for n in base):
        # every element of S_{k+1} strictly exceeds max(S_0..S_k) = m_k
        for k in range(fam.K + 1):
            if len(set(fam.union(k))) != 2 ** k:
                raise InvariantViolation(f"index family union {k} does not have 2^{k} elements")
    return fam


def lambda_mu(K: int):
    """Exact lambda_1..lambda_K and mu_k = log2(1/lambda_k)."""
    if K < 1:
        raise ValueError("K must be at least 1")
    lambdas = [Fraction(1)]
    for k in range(1, K):
        lambdas.append(lambdas[-1] ** 2 / 2 ** k)
    mus = []
    for k, lam in enumerate(lambdas, start=1):
        if lam.numerator != 1 or lam.denominator & (lam.denominator - 1):
            raise InvariantViolation(f"lambda_{k} = {lam} is not a power of 1/2")
        mu = lam.denominator.bit_length() - 1
        if mu != 2 ** k - k - 1:
            raise InvariantViolation(f"mu_{k} = {mu} differs from 2^k - k - 1")
        mus.append(mu)
    return lambdas, mus


# -- the membership oracle ----------------------------------------------------


@dataclass(frozen=True)
class MonomialReport:
    degree: tuple
    J: frozenset
    passed: bool
    offending: tuple  # points of X_Jr where the coefficient is nonzero

    def to_json(self) -> dict:
        return {
            "degree": list(self.degree),
            "J": sorted(self.J),
            "passed": self.passed,
            "offending": [str(x) for x in self.offending],
        }


@dataclass(frozen=True)
class RadicalVerdict:
    in_radical: bool
    zero_term_ok: bool
    zero_term_points: tuple
    monomials: tuple

    def failing(self) -> list:
        return [m for m in self.monomials if not m.passed]

    def to_json(self) -> dict:
        return {
            "in_radical": self.in_radical,
            "zero_term_ok": self.zero_term_ok,
            "zero_term_points": [str(x) for x in self.zero_term_points],
            "monomials": [m.to_json() for m in self.monomials],
        }


def radical_oracle_monomial(system: MapSystem, n, f: Fn) -> MonomialReport:
    """U_n f is in the radical iff f vanishes on X_Jr, J = supp n."""
    n = system.check_index(n)
    if not any(n):
        raise ZeroDegree("degree-0 monomials are never in the radical unless zero")
    f.check_in(system)
    J = support(n)
    region = recurrent_region(system, J)
    # a nonzero tail is nonzero at its end, and ends are always recurrent
    bad = tuple(x for x in f.nonzero_points() if x in region)
    return MonomialReport(n, J, not bad, bad)


def radical_oracle(system: MapSystem, A: Series) -> RadicalVerdict:
    zero = tuple((0,) * system.dim)
    E0 = fourier_coefficient(A, zero)
    reports = tuple(radical_oracle_monomial(system, n, f) for n, f in A if any(n))
    ok = E0.is_zero()
    return RadicalVerdict(ok and all(r.passed for r in reports), ok, tuple(E0.nonzero_points()), reports)


# -- witness series -----------------------------------------------------------


@dataclass(frozen=True)
class WitnessPlan:
    x: Point
    J: frozenset
    q: tuple
    f: Fn  # as given
    f_used: Fn  # nonnegative, >= 1 on the neighbourhood V
    period: tuple  # n* in Sigma_J with phi_{n*}(x) = x
    k0: int
    base: tuple  # n_k = (k0 + k) n*
    h: Fn
    g: Fn  # f_used * (h o phi_q)
    K: int
    lambdas: tuple
    mus: tuple
    family: IndexFamily = field(repr=False)

    def to_json(self) -> dict:
        return {
            "x": str(self.x),
            "J": sorted(self.J),
            "q": list(self.q),
            "period": list(self.period),
            "k0": self.k0,
            "base": [list(n) for n in self.base],
            "anchors": [list(m) for m in self.family.anchors],
            "K": self.K,
            "lambdas": [fmt_number(v) for v in self.lambdas],
            "mus": list(self.mus),
        }


def _tail_fn(cell: str, side: str, threshold: int) -> Fn:
    return Fn(tails={cell: {side: (1, threshold)}})


def witness_build(system: MapSystem, x: Point, J, q, f: Fn, K: int):
    """Plan, B and A = B U_q f for a J-recurrent point x with f(x) != 0.

    B = sum_k U_{n_k - q} h / 2^{k-1} and A = sum_k U_{n_k} g / 2^{k-1},
    where n_k are consecutive multiples of a period of x.
    """
    J = check_directions(J, system.dim)
    q = system.check_index(q)
    if not support(q) <= J:
        raise ValueError(f"support of q={list(q)} is not inside J={sorted(J)}")
    if K < 1:
        raise ValueError("K must be at least 1")
    system.check_point(x)
    f.check_in(system)
    n_star = period(system, x, J)
    if n_star is None:
        raise NotRecurrent(f"{x} is not {sorted(J)}-recurrent")
    fx = f(x)
    if fx == 0:
        raise ValueError(f"f vanishes at {x}")

    # V = {x} for isolated x; for an end, the tail on which f is constant
    if f.is_nonnegative() and fx >= 1:
        f_used = f
    else:
        f_used = (f * f).scale(1 / (fx * fx))
    (D,) = system.displacement(x.cell, q) if x.is_end else (None,)
    if x.pos == PLUS_END:
        t = f_used.tails[x.cell].t_plus
        h = _tail_fn(x.cell, "+", t + D)
    elif x.pos == MINUS_END:
        t = f_used.tails[x.cell].t_minus
        h = _tail_fn(x.cell, "-", t + D)
    else:
        h = indicator([apply(system, q, x)])
    g = compose_with_map(system, q, h) * f_used

    k0 = 0
    for j in J:
        need = -(-(q[j - 1] + 1) // n_star[j - 1]) - 1  # (k0 + 1) n*_j >= q_j + 1
        k0 = max(k0, need)
    base = tuple(vscale(k0 + k, n_star) for k in range(1, K + 1))
    for n in base:
        if not in_sigma_J(vsub(n, q), J) or min(vsub(n, q)) < 0:
            raise InvariantViolation(f"n_k - q = {vsub(n, q)} is not in Sigma_J")
    lambdas, mus = lambda_mu(K)
    fam = index_family(base)
    plan = WitnessPlan(x, J, q, f, f_used, n_star, k0, base, h, g, K, tuple(lambdas), tuple(mus), fam)

    B = Series(system, {vsub(n, q): h.scale(Fraction(1, 2 ** (k - 1))) for k, n in enumerate(base, start=1)})
    A = multiply(system, B, Series.monomial(system, q, f_used))
    direct = Series(system, {n: g.scale(Fraction(1, 2 ** (k - 1))) for k, n in enumerate(base, start=1)})
    if A != direct:
        raise InvariantViolation("B U_q f differs from sum_k U_{n_k} g / 2^{k-1}")
    return plan, B, A


@dataclass(frozen=True)
class WitnessReport:
    k: int
    anchor: tuple
    coefficient_sup: Fraction
    lam: Fraction
    closed_form_matches: bool
    dominates: bool
    product_at_x: Fraction

    @property
    def passed(self) -> bool:
        return self.coefficient_sup >= self.lam and self.closed_form_matches and self.dominates

    def to_json(self) -> dict:
        return {
            "k": self.k,
            "anchor": list(self.anchor),
            "coefficient_sup": fmt_number(self.coefficient_sup),
            "lambda": fmt_number(self.lam),
            "closed_form_matches": self.closed_form_matches,
            "dominates": self.dominates,
            "product_at_x": fmt_number(self.product_at_x),
            "passed": self.passed,
        }


def inductive_products(system: MapSystem, plan: WitnessPlan, k: int) -> list:
    """P_1..P_k with P_j = P_{j-1} (U_{n_j} g / 2^{j-1}) P_{j-1}."""
    P = [Series.monomial(system, plan.base[0], plan.g)]
    for j in range(2, k + 1):
        mid = Series.monomial(system, plan.base[j - 1], plan.g.scale(Fraction(1, 2 ** (j - 1))))
        P.append(multiply(system, multiply(system, P[-1], mid), P[-1]))
    return P


def closed_form_product(system: MapSystem, plan: WitnessPlan, k: int) -> Series:
    """U_{m_k} lambda_k prod g o phi_s over (S_0 u .. u S_k) minus {m_k}."""
    m_k = plan.family.anchors[k]
    idx = plan.family.union(k)
    idx.remove(m_k)
    prod = compose_with_map(system, idx[0], plan.g)
    for s in idx[1:]:
        prod = prod * compose_with_map(system, s, plan.g)
    return Series.monomial(system, m_k, prod.scale(plan.lambdas[k - 1]))


def witness_verify(system: MapSystem, plan: WitnessPlan, A: Series, k: int) -> WitnessReport:
    """Check sup ||E_{m_k}(A^{2^k - 1})|| >= lambda_k exactly, plus the closed form."""
    if not 1 <= k <= plan.K:
        raise ValueError(f"k={k} outside 1..{plan.K}")
    m_k = plan.family.anchors[k]
    Ak = power(system, A, 2 ** k - 1, cap=m_k)
    E = fourier_coefficient(Ak, m_k)
    P_k = inductive_products(system, plan, k)[-1]
    claim = closed_form_product(system, plan, k)
    matches = P_k == claim
    coeff = fourier_coefficient(P_k, m_k)
    dominates = (E - coeff).is_nonnegative() and coeff.is_nonnegative()
    report = WitnessReport(k, m_k, E.sup_norm(), plan.lambdas[k - 1], matches, dominates, Fraction(coeff(plan.x)))
    if not report.passed:
        raise BoundViolated(f"witness at {plan.x}, k={k}: {report.to_json()}")
    return report


# -- square-zero ideals and semisimplicity ------------------------------------


@dataclass(frozen=True)
class SquareZeroReport:
    J: frozenset
    support: tuple
    samples: int
    all_zero: bool
    generator_nonzero: bool
    ideal_nonzero: bool

    @property
    def passed(self) -> bool:
        return self.all_zero and self.generator_nonzero and self.ideal_nonzero

    def to_json(self) -> dict:
        return {
            "J": sorted(self.J),
            "support": [str(x) for x in self.support],
            "samples": self.samples,
            "all_zero": self.all_zero,
            "generator_nonzero": self.generator_nonzero,
            "ideal_nonzero": self.ideal_nonzero,
            "passed": self.passed,
        }


def square_zero_check(system: MapSystem, J, g: Fn, samples: Sequence[Series]) -> SquareZeroReport:
    """B = U_{e_J} g with g on a J-wandering set satisfies B C B = 0."""
    J = check_directions(J, system.dim)
    g.check_in(system)
    if g.is_zero():
        raise ValueError("g must be nonzero")
    V = g.nonzero_points()
    ends = [x for x in V if x.is_end]
    if ends:
        raise SupportNotWandering(f"support of g reaches the fixed end {ends[0]}")
    hit = wandering_set_violation(system, V, J)
    if hit is not None:
        x, y, n = hit
        raise SupportNotWandering(f"phi_{list(n)}({x}) = {y} with {list(n)} in Sigma_J; support is not {sorted(J)}-wandering")
    eJ = e_J(J, system.dim)
    zero = (0,) * system.dim
    B = Series.monomial(system, eJ, g)
    all_zero = True
    for C in samples:
        if not multiply(system, multiply(system, B, C), B).is_zero():
            all_zero = False
    image = [y for x in V for y in [apply(system, eJ, x)]]
    h1 = Series.monomial(system, zero, indicator(image))
    h2 = Series.monomial(system, zero, indicator(V))
    ideal_nonzero = fourier_coefficient(h1 * B * h2, eJ) == g
    report = SquareZeroReport(J, tuple(V), len(samples), all_zero, not B.is_zero(), ideal_nonzero)
    if not report.passed:
        raise InvariantViolation(f"square-zero check failed: {report.to_json()}")
    return report


@dataclass(frozen=True)
class SemisimplicityVerdict:
    semisimple: bool
    strong_closure: Region
    witness: Optional[SquareZeroReport]
    rejected_samples: int  # sampled nonzero monomials rejected by the oracle

    def to_json(self) -> dict:
        return {
            "semisimple": self.semisimple,
            "strongly_recurrent_closure": self.strong_closure.to_json(),
            "witness": None if self.witness is None else self.witness.to_json(),
            "rejected_samples": self.rejected_samples,
        }


def semisimplicity_decide(system: MapSystem, rng: random.Random | None = None, samples: int = 100) -> SemisimplicityVerdict:
    """Semisimple iff the strongly recurrent points are dense.

    Otherwise a square-zero ideal is exhibited at a point outside their
    closure; when semisimple, every sampled nonzero monomial must be rejected
    by the oracle.
    """
    rng = rng or random.Random(0)
    everything = frozenset(range(1, system.dim + 1))
    R = closure(system, recurrent_region(system, everything))
    whole = Region.whole(system)
    if R == whole:
        rejected = 0
        for _ in range(samples):
            M = random_monomial(system, rng)
            ((n, f),) = M.terms.items()
            if radical_oracle_monomial(system, n, f).passed:
                raise InvariantViolation(f"semisimple system but U_{list(n)} f passes the radical test")
            rejected += 1
        return SemisimplicityVerdict(True, R, None, rejected)
    x = first_point(whole - R)
    g = indicator([x])
    Cs = [random_series(system, rng, near=[x], tail_prob=0.2) for _ in range(samples)]
    report = square_zero_check(system, everything, g, Cs)
    return SemisimplicityVerdict(False, R, report, 0)


# -- spectral evidence --------------------------------------------------------


def refuting_candidates(system: MapSystem, n, f: Fn) -> list:
    """Monomials B making U_n f * B have a persistent unit coefficient.

    For each offending point x (J-recurrent, f(x) != 0) with period n*, take
    p = c n* - n >= 0 and localise at y = phi_p^{-1}(x), which is again
    fixed by phi_{c n*}; then U_n f * U_p h = U_{c n*} (f o phi_p) h has
    value 1 at y in every power.
    """
    n = system.check_index(n)
    out = []
    report = radical_oracle_monomial(system, n, f)
    for x in report.offending:
        n_star = period(system, x, report.J)
        c = 1
        while any(c * a < b for a, b in zip(n_star, n)):
            c += 1
        p = vsub(vscale(c, n_star), n)
        (y,) = preimage(system, p, x)
        fx = f(x)
        if y.is_end:
            h = _tail_fn(y.cell, "+" if y.pos == PLUS_END else "-", 0)
        else:
            h = indicator([y])
        out.append(Series.monomial(system, p, h.scale(1 / fx)))
    return out


@dataclass(frozen=True)
class EvidenceRow:
    index: int
    classification: str  # nilpotent | positive_lower | decaying_upper | inconclusive
    witness_k: Optional[int]
    witness_degree: Optional[tuple]
    lower_root: float
    upper_root: float
    lower_exact: object
    bracket: object = field(repr=False)

    def to_json(self) -> dict:
        return {
            "index": self.index,
            "classification": self.classification,
            "witness_k": self.witness_k,
            "witness_degree": None if self.witness_degree is None else list(self.witness_degree),
            "lower_root": self.lower_root,
            "upper_root": self.upper_root,
            "lower_exact": fmt_number(self.lower_exact),
        }


def classify_bracket(bracket, lower_threshold=Fraction(1, 2), decay_threshold=0.05):
    if bracket.nilpotent:
        return "nilpotent", bracket.nilpotent_index, None
    last = bracket.rows[-1]
    if last.lower >= Fraction(lower_threshold) ** last.k:
        return "positive_lower", last.k, last.argmax
    if last.upper_root < decay_threshold and not last.truncated:
        return "decaying_upper", last.k, None
    return "inconclusive", last.k, None


def quasinilpotence_sampler(system: MapSystem, A: Series, B_samples: Sequence[Series], k_max: int = 16,
                            lower_threshold=Fraction(1, 2), decay_threshold=0.05, cap=None) -> list:
    """Exact spectral brackets of A B for every sampled B, classified."""
    rows = []
    for i, B in enumerate(B_samples):
        br = spectral_radius_bracket(system, multiply(system, A, B), k_max, cap=cap)
        cls, k, deg = classify_bracket(br, lower_threshold, decay_threshold)
        last = br.rows[-1] if br.rows else None
        rows.append(EvidenceRow(
            i, cls, k, deg,
            last.lower_root if last else 0.0,
            last.upper_root if last else 0.0,
            last.lower if last else Fraction(0),
            br,
        ))
    return rows


def evidence_samples(system: MapSystem, A: Series, rng: random.Random, count: int) -> list:
    """Prescribed refuting monomials for A's failing terms, then random ones."""
    Bs = []
    for n, f in A:
        if any(n):
            Bs.extend(refuting_candidates(system, n, f))
    near = [x for _, f in A for x in f.nonzero_points() if not x.is_end] or None
    while len(Bs) < count:
        Bs.append(random_series(system, rng, near=near))
    return Bs
