import itertools
import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from semicrossed.algebra import Fn, Series, indicator, multiply, spectral_radius_bracket
from semicrossed.catalog import list_examples, load_example
from semicrossed.errors import NotRecurrent, SupportNotWandering, ZeroDegree
from semicrossed.radical import (
    closed_form_product,
    index_family,
    inductive_products,
    lambda_mu,
    quasinilpotence_sampler,
    radical_oracle,
    radical_oracle_monomial,
    refuting_candidates,
    semisimplicity_decide,
    square_zero_check,
    witness_build,
    witness_verify,
)
from semicrossed.sampling import random_monomial, random_series
from semicrossed.space import apply, in_sigma_J, lattice_point, Point, support

CATALOG = {n: load_example(n) for n, _ in list_examples()}


def brute_recurrent(S, x, J, box=6):
    if x.is_end:
        return True
    return any(in_sigma_J(n, J) and apply(S, n, x) == x
               for n in itertools.product(range(box), repeat=S.dim))


# -- index families and scalars

def test_index_family_unit_base():
    fam = index_family([(1,)] * 4)
    assert set(fam.sets[2]) == {(2,), (3,)}
    assert set(fam.sets[3]) == {(4,), (5,), (6,), (7,)}
    assert [m[0] for m in fam.anchors] == [0, 1, 3, 7, 15]


def test_index_family_examples():
    fam = index_family([(3, 1)])
    assert fam.sets[1] == ((3, 1),) and fam.anchors[1] == (3, 1)
    fam = index_family([(1, 1), (2, 2)])
    assert fam.anchors[2] == (4, 4)
    assert set(fam.sets[2]) == {(3, 3), (4, 4)}


@given(st.integers(1, 3).flatmap(lambda d: st.lists(
    st.lists(st.integers(1, 4), min_size=d, max_size=d), min_size=1, max_size=8)))
def test_index_family_cardinality(steps):
    base, cur = [], [0] * len(steps[0])
    for s in steps:
        cur = [a + b for a, b in zip(cur, s)]
        base.append(tuple(cur))
    fam = index_family(base)
    for k in range(fam.K + 1):
        assert len(set(fam.union(k))) == 2 ** k
        assert max(fam.union(k)) == fam.anchors[k] or k == 0


def test_lambda_mu_examples():
    lam, mu = lambda_mu(3)
    assert lam == [1, Fraction(1, 2), Fraction(1, 16)]
    assert mu == [0, 1, 4]
    lam, mu = lambda_mu(20)
    assert all(m == 2 ** k - k - 1 for k, m in enumerate(mu, start=1))


# -- the oracle

def test_oracle_example3(ex3):
    S, f = ex3.system, ex3.functions["f"]
    assert radical_oracle_monomial(S, (1, 1), f).passed
    r = radical_oracle_monomial(S, (1, 0), f)
    assert not r.passed and r.offending == (lattice_point("X2", 0),)
    v = radical_oracle(S, ex3.series["A11"] + ex3.series["A10"])
    assert not v.in_radical and [m.degree for m in v.failing()] == [(1, 0)]


def test_oracle_trivial_cases(cline, line):
    assert radical_oracle_monomial(cline, (1,), indicator([lattice_point("Z", 0)])).passed
    assert radical_oracle(line, Series.zero(line)).in_radical
    assert not radical_oracle(line, Series.monomial(line, (0,), indicator([lattice_point("Z", 0)]))).in_radical
    with pytest.raises(ZeroDegree):
        radical_oracle_monomial(line, (0,), indicator([lattice_point("Z", 0)]))


@pytest.mark.parametrize("name", sorted(CATALOG))
def test_oracle_against_brute_force(name):
    S = CATALOG[name].system
    rng = random.Random(name)
    for _ in range(40):
        M = random_monomial(S, rng)
        ((n, f),) = M.terms.items()
        expected = not any(brute_recurrent(S, x, support(n)) for x in f.nonzero_points())
        assert radical_oracle_monomial(S, n, f).passed == expected


# -- witnesses

def test_two_cycle_witness(cycle):
    S = cycle.system
    plan, B, A = witness_build(S, Point("C", "a"), {1}, (1,), cycle.functions["one"], 4)
    assert plan.period == (2,)
    assert A.degrees() == [(2,), (4,), (6,), (8,)]
    r = witness_verify(S, plan, A, 3)
    assert r.lam == Fraction(1, 16) and r.coefficient_sup >= Fraction(1, 16)


def test_example3_witness(ex3):
    S = ex3.system
    plan, _, A = witness_build(S, lattice_point("X2", 0), {1}, (1, 0), ex3.functions["f"], 4)
    assert plan.period == (1, 0)
    for k in range(1, 5):
        assert witness_verify(S, plan, A, k).passed
    with pytest.raises(NotRecurrent):
        witness_build(S, lattice_point("X1", 0), {1}, (1, 0), ex3.functions["f"], 2)


def test_closed_form_at_two_is_direct_product(ex3):
    S = ex3.system
    plan, _, _ = witness_build(S, lattice_point("X2", 0), {1}, (1, 0), ex3.functions["f"], 3)
    g, n1, n2 = plan.g, plan.base[0], plan.base[1]
    U = lambda n, h: Series.monomial(S, n, h)
    direct = multiply(S, multiply(S, U(n1, g), U(n2, g.scale(Fraction(1, 2)))), U(n1, g))
    assert closed_form_product(S, plan, 2) == direct == inductive_products(S, plan, 2)[-1]


def test_witness_at_end(catalog):
    sc = catalog["compactified-line"]
    plan, _, A = witness_build(sc.system, Point("Z", "+end"), {1}, (1,), sc.functions["t"], 4)
    assert all(witness_verify(sc.system, plan, A, k).passed for k in range(1, 5))


def test_witness_normalises_small_values(ex3):
    S = ex3.system
    f = Fn({lattice_point("X2", 0): Fraction(-1, 3)})
    plan, _, A = witness_build(S, lattice_point("X2", 0), {1}, (1, 0), f, 3)
    assert plan.f_used(lattice_point("X2", 0)) == 1
    assert witness_verify(S, plan, A, 3).passed


# -- square-zero ideals and semisimplicity

def test_square_zero_examples(ex3, line, catalog):
    rng = random.Random(3)
    f = ex3.functions["f"]
    Cs = [random_series(ex3.system, rng, near=f.nonzero_points()) for _ in range(100)]
    assert square_zero_check(ex3.system, {1, 2}, f, Cs).passed
    d0 = indicator([lattice_point("Z", 0)])
    Cs = [random_series(line, rng, near=[lattice_point("Z", 0)]) for _ in range(100)]
    assert square_zero_check(line, {1}, d0, Cs).passed
    F = catalog["finite-perm"].system
    with pytest.raises(SupportNotWandering):
        square_zero_check(F, {1, 2}, indicator([Point("F", "a")]), [])


def test_square_zero_rejects_non_wandering_union(line):
    g = indicator([lattice_point("Z", 0), lattice_point("Z", 1)])
    with pytest.raises(SupportNotWandering):
        square_zero_check(line, {1}, g, [])


def test_semisimplicity(catalog, line, ex3, cline):
    assert semisimplicity_decide(catalog["finite-perm"].system).semisimple
    v = semisimplicity_decide(line, random.Random(1), 20)
    assert not v.semisimple and v.witness.support == (lattice_point("Z", 0),)
    assert not semisimplicity_decide(ex3.system, random.Random(1), 20).semisimple
    assert not semisimplicity_decide(cline, random.Random(1), 20).semisimple


# -- spectral evidence

def test_sampler_line(line):
    A = Series.monomial(line, (1,), indicator([lattice_point("Z", 0)]))
    rng = random.Random(0)
    rows = quasinilpotence_sampler(line, A, [random_series(line, rng) for _ in range(20)], 16)
    assert all(r.classification == "nilpotent" for r in rows)


def test_sampler_two_cycle(cycle):
    S = cycle.system
    rows = quasinilpotence_sampler(S, cycle.series["A"], [cycle.series["B"]], 16)
    assert rows[0].classification == "positive_lower" and rows[0].lower_exact == 1


@pytest.mark.parametrize("name", sorted(CATALOG))
def test_refuting_candidates_have_unit_lower_bound(name):
    sc = CATALOG[name]
    for A in sc.series.values():
        for n, f in A:
            for B in refuting_candidates(sc.system, n, f):
                br = spectral_radius_bracket(sc.system, multiply(sc.system, Series.monomial(sc.system, n, f), B), 12)
                assert not br.nilpotent
                assert all(r.lower_root == 1.0 for r in br.rows)


def test_sampler_deterministic(ex3):
    A = ex3.series["A10"]
    Bs = [random_series(ex3.system, random.Random(5)) for _ in range(3)]
    a = [r.to_json() for r in quasinilpotence_sampler(ex3.system, A, Bs, 8)]
    b = [r.to_json() for r in quasinilpotence_sampler(ex3.system, A, Bs, 8)]
    assert a == b
