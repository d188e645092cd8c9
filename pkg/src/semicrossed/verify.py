"""The acceptance criteria, run against the built-in catalog."""
from __future__ import annotations

import cmath
import itertools
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Optional

from .algebra import (
    Fn,
    fourier_coefficient,
    indicator,
    l1_norm,
    multiply,
    phase_twist,
    power,
    spectral_radius_bracket,
)
from .catalog import list_examples, load_example
from .dynamics import (
    CellPart,
    Region,
    centre_peel,
    check_wandrec,
    closure,
    is_invariant,
    recurrent_region,
    wandering_region,
)
from .errors import SemicrossedError
from .radical import (
    evidence_samples,
    index_family,
    lambda_mu,
    quasinilpotence_sampler,
    radical_oracle,
    radical_oracle_monomial,
    semisimplicity_decide,
    square_zero_check,
    witness_build,
    witness_verify,
)
from .sampling import random_degree, random_series
from .space import PLUS_END, LatticeCell, Point, e_J

# systems whose strongly recurrent points are dense, worked out by hand
SEMISIMPLE = {"two-cycle", "finite-perm", "opposed-translations"}


@dataclass
class Context:
    catalog: dict  # name -> Scenario
    seed: int = 0
    kmax: int = 4  # witness depth
    spectral_k: int = 16


@dataclass(frozen=True)
class Outcome:
    id: int
    name: str
    passed: bool
    detail: str

    def line(self) -> str:
        return f"criterion {self.id:2d} {self.name}: {'PASS' if self.passed else 'FAIL'} ({self.detail})"

    def to_json(self) -> dict:
        return {"id": self.id, "name": self.name, "passed": self.passed, "detail": self.detail}


def _nonempty_direction_sets(d):
    return [frozenset(c) for r in range(1, d + 1) for c in itertools.combinations(range(1, d + 1), r)]


def _all_direction_sets(d):
    return [frozenset()] + _nonempty_direction_sets(d)


# -- 1 ------------------------------------------------------------------------

def mu_closed_form(ctx: Context):
    lambdas, mus = lambda_mu(20)
    for k in range(1, 21):
        mu = 2 ** k - k - 1
        if mus[k - 1] != mu or lambdas[k - 1] != Fraction(1, 2 ** mu):
            return False, f"k={k}: mu={mus[k - 1]}, lambda={lambdas[k - 1]}"
    return True, f"mu_20 = {mus[-1]}, lambda_4 = {lambdas[3]}"


# -- 2 ------------------------------------------------------------------------

def index_families(ctx: Context):
    fam = index_family([(1,)] * 10)
    for k in range(11):
        if sorted(fam.union(k)) != [(v,) for v in range(2 ** k)]:
            return False, f"unit base: union {k} is wrong"
        if fam.anchors[k] != (2 ** k - 1,):
            return False, f"unit base: m_{k} = {fam.anchors[k]}"
    rng = random.Random(ctx.seed)
    for trial in range(20):
        d = rng.randint(1, 3)
        n = tuple(rng.randint(0, 2) for _ in range(d))
        if not any(n):
            n = (1,) + n[1:]
        base = [n]
        for _ in range(7):
            base.append(tuple(a + rng.randint(1, 3) for a in base[-1]))
        fam = index_family(base)
        for k in range(9):
            got = len(set(fam.union(k)))
            if got != 2 ** k:
                return False, f"random base {trial}: |union {k}| = {got}"
    return True, "unit base k<=10, 20 random bases k<=8"


# -- 3 ------------------------------------------------------------------------

def algebra_laws(ctx: Context):
    rng = random.Random(ctx.seed + 3)
    systems = [sc.system for sc in ctx.catalog.values()]
    for i in range(500):
        system = systems[i % len(systems)]
        A, B, C = (random_series(system, rng) for _ in range(3))
        m = lambda X, Y: multiply(system, X, Y)
        if m(m(A, B), C) != m(A, m(B, C)):
            return False, f"associativity fails on sample {i}"
        if m(A, B + C) != m(A, B) + m(A, C) or m(A + B, C) != m(A, C) + m(B, C):
            return False, f"distributivity fails on sample {i}"
        if l1_norm(m(A, B)) > l1_norm(A) * l1_norm(B):
            return False, f"l1 submultiplicativity fails on sample {i}"
    return True, "500 triples, exact"


# -- 4 ------------------------------------------------------------------------

def grading(ctx: Context):
    rng = random.Random(ctx.seed + 4)
    systems = [sc.system for sc in ctx.catalog.values()]
    worst = worst_mult = 0.0
    for i in range(100):
        system = systems[i % len(systems)]
        A, B = random_series(system, rng), random_series(system, rng)
        t = [rng.uniform(-4, 4) for _ in range(system.dim)]
        m = rng.choice(A.degrees()) if A.degrees() and rng.random() < 0.8 else random_degree(system, rng)
        # one factor per direction, independent of the twist's own t.n
        phase = 1
        for a, b in zip(m, t):
            phase *= cmath.exp(1j * a * b)
        lhs = fourier_coefficient(phase_twist(A, t), m)
        rhs = fourier_coefficient(A, m).scale(phase)
        worst = max(worst, float((lhs - rhs).sup_norm()))
        prod = multiply(system, phase_twist(A, t), phase_twist(B, t))
        twisted = phase_twist(multiply(system, A, B), t)
        for n in set(prod.degrees()) | set(twisted.degrees()):
            diff = fourier_coefficient(prod, n) - fourier_coefficient(twisted, n)
            worst_mult = max(worst_mult, float(diff.sup_norm()))
        if worst > 1e-12 or worst_mult > 1e-12:
            return False, f"sample {i}: coefficient error {worst:.3g}, product error {worst_mult:.3g}"
    return True, f"100 samples, coefficient error {worst:.2g}, multiplicativity error {worst_mult:.2g}"


# -- 5 ------------------------------------------------------------------------

def example3_reproduction(ctx: Context):
    sc = ctx.catalog["example3"]
    S = sc.system
    f = sc.functions["f"]
    cells = lambda *ids: Region.from_parts(S, {c: CellPart(cofinite=True) for c in ids})
    expect = {frozenset({1}): cells("X0", "X2"), frozenset({2}): cells("X0", "X1"), frozenset({1, 2}): cells("X0")}
    for J, R in expect.items():
        got = recurrent_region(S, J)
        if got != R:
            return False, f"J={sorted(J)}-recurrent region is {got}"
    verdicts = {n: radical_oracle_monomial(S, n, f).passed for n in [(1, 1), (1, 0), (0, 1)]}
    if verdicts != {(1, 1): True, (1, 0): False, (0, 1): False}:
        return False, f"oracle verdicts {verdicts}"
    rng = random.Random(ctx.seed + 5)
    near = f.nonzero_points()
    Cs = [random_series(S, rng, near=near) for _ in range(100)]
    sq = square_zero_check(S, {1, 2}, f, Cs)
    if not sq.passed:
        return False, "square-zero check failed"
    br = spectral_radius_bracket(S, sc.series["A10"], ctx.spectral_k)
    if br.nilpotent or any(r.lower != 1 or r.lower_root != 1.0 for r in br.rows):
        return False, "spectral lower bound of U_(1,0) f is not 1"
    return True, f"regions exact, verdicts pass/fail/fail, BCB=0 on 100 C, lower root 1 for k<={ctx.spectral_k}"


# -- 6 ------------------------------------------------------------------------

def recurrent_representatives(system, J):
    """One isolated point per cell part of X_Jr, plus every end."""
    R = recurrent_region(system, J)
    reps = []
    for cell in system.cells:
        part = R.part(cell.id)
        if isinstance(cell, LatticeCell):
            if part.cofinite:
                k = 0
                while (k,) * cell.rank in part.points:
                    k += 1
                reps.append(Point(cell.id, (k,) * cell.rank))
            elif part.points:
                reps.append(Point(cell.id, min(part.points)))
            reps += [Point(cell.id, e) for e in sorted(part.ends)]
        elif part.points:
            reps.append(Point(cell.id, min(part.points)))
    return reps


def bump_at(x: Point) -> Fn:
    if x.is_end:
        side = "+" if x.pos == PLUS_END else "-"
        return Fn(tails={x.cell: {side: (1, 0)}})
    return indicator([x])


def witness_bounds(ctx: Context):
    checked = 0
    for name, sc in ctx.catalog.items():
        S = sc.system
        for J in _nonempty_direction_sets(S.dim):
            for x in recurrent_representatives(S, J):
                try:
                    plan, _, A = witness_build(S, x, J, e_J(J, S.dim), bump_at(x), ctx.kmax)
                    for k in range(1, ctx.kmax + 1):
                        witness_verify(S, plan, A, k)
                except SemicrossedError as e:
                    return False, f"{name}, J={sorted(J)}, x={x}: {e}"
                checked += 1
    return checked > 0, f"{checked} (system, J, point) cases, k<={ctx.kmax}"


# -- 7 ------------------------------------------------------------------------

def monomial_catalog(ctx: Context):
    out = []
    for name, sc in ctx.catalog.items():
        for sname, A in sc.series.items():
            if len(A) == 1:
                out.append((name, sname, A))
    return out


def cross_validation(ctx: Context):
    cases = monomial_catalog(ctx)
    if len(cases) < 12 or len({c[0] for c in cases}) < len(ctx.catalog):
        return False, f"only {len(cases)} monomials"
    refuted = survived = 0
    for name, sname, A in cases:
        S = ctx.catalog[name].system
        verdict = radical_oracle(S, A)
        rng = random.Random(f"{ctx.seed}:{name}:{sname}")
        Bs = evidence_samples(S, A, rng, 50)
        rows = quasinilpotence_sampler(S, A, Bs, ctx.spectral_k)
        if verdict.in_radical:
            bad = [r for r in rows if r.classification not in ("nilpotent", "decaying_upper")]
            if bad:
                return False, f"{name}/{sname} in radical but sample {bad[0].index} is {bad[0].classification}"
            survived += 1
        else:
            if not any(r.classification == "positive_lower" and r.lower_root >= 0.5 for r in rows):
                return False, f"{name}/{sname} rejected but no sampled B refutes it"
            refuted += 1
    return True, f"{len(cases)} monomials: {refuted} refuted, {survived} survived 50 samples"


# -- 8 ------------------------------------------------------------------------

def centre_machinery(ctx: Context):
    count = 0
    for name, sc in ctx.catalog.items():
        S = sc.system
        for J in _all_direction_sets(S.dim):
            try:
                c = centre_peel(S, J)
            except SemicrossedError as e:
                return False, f"{name}, J={sorted(J)}: {e}"
            rec = recurrent_region(S, J)
            if c.strata[-1] != closure(S, rec) or c.depth > 1:
                return False, f"{name}, J={sorted(J)}: centre {c.strata[-1]} depth {c.depth}"
            rest = wandering_region(S, J).complement()
            if not is_invariant(S, rest) or not rec.issubset(rest):
                return False, f"{name}, J={sorted(J)}: non-wandering set not invariant or misses recurrent points"
            if not check_wandrec(S, J).implication_holds:
                return False, f"{name}, J={sorted(J)}: density implication falsified"
            count += 1
    return True, f"{count} (system, J) pairs"


# -- 9 ------------------------------------------------------------------------

def semisimplicity(ctx: Context):
    got = set()
    for name, sc in ctx.catalog.items():
        rng = random.Random(f"{ctx.seed}:{name}")
        try:
            v = semisimplicity_decide(sc.system, rng, 100)
        except SemicrossedError as e:
            return False, f"{name}: {e}"
        if v.semisimple:
            got.add(name)
        elif not (v.witness and v.witness.passed):
            return False, f"{name}: no verified square-zero witness"
    expected = SEMISIMPLE & set(ctx.catalog)
    if got != expected:
        return False, f"semisimple on {sorted(got)}, expected {sorted(expected)}"
    return True, f"semisimple exactly on {', '.join(sorted(got))}"


# -- 10 -----------------------------------------------------------------------

def nilpotent_not_radical(ctx: Context):
    sc = ctx.catalog["two-cycle"]
    S = sc.system
    A, B = sc.series["A"], sc.series["B"]
    if not power(S, A, 2).is_zero():
        return False, "U delta_a is not nilpotent"
    if radical_oracle(S, A).in_radical:
        return False, "oracle accepts U delta_a"
    br = spectral_radius_bracket(S, multiply(S, A, B), ctx.spectral_k)
    if br.nilpotent or any(r.lower != 1 for r in br.rows):
        return False, "U delta_a U delta_b has a vanishing lower bound"
    return True, f"A^2 = 0, oracle rejects, lower bound 1 for (AB)^k, k<={ctx.spectral_k}"


CRITERIA = [
    (1, "mu-closed-form", mu_closed_form),
    (2, "index-family-combinatorics", index_families),
    (3, "algebra-laws", algebra_laws),
    (4, "grading", grading),
    (5, "example3-reproduction", example3_reproduction),
    (6, "witness-bounds", witness_bounds),
    (7, "oracle-cross-validation", cross_validation),
    (8, "centre-machinery", centre_machinery),
    (9, "semisimplicity", semisimplicity),
    (10, "nilpotent-not-radical", nilpotent_not_radical),
]


def default_catalog() -> dict:
    return {name: load_example(name) for name, _ in list_examples()}


def run_criterion(cid: int, ctx: Context) -> Outcome:
    for i, name, fn in CRITERIA:
        if i == cid:
            try:
                ok, detail = fn(ctx)
            except (SemicrossedError, KeyError) as e:
                ok, detail = False, f"{type(e).__name__}: {e}"
            return Outcome(i, name, ok, detail)
    raise ValueError(f"no criterion {cid}")


def verify_all(seed: int = 0, kmax: int = 4, catalog: Optional[dict] = None,
               progress: Optional[Callable[[Outcome], None]] = None) -> list:
    ctx = Context(catalog if catalog is not None else default_catalog(), seed, kmax)
    out = []
    for cid, _, _ in CRITERIA:
        o = run_criterion(cid, ctx)
        if progress:
            progress(o)
        out.append(o)
    return out
