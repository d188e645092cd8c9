import cmath
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from semicrossed.algebra import (
    Fn,
    Series,
    compose_with_map,
    constant_on_compact,
    fourier_coefficient,
    indicator,
    l1_norm,
    multiply,
    opnorm_bracket,
    phase_twist,
    power,
    series_close,
    spectral_radius_bracket,
)
from semicrossed.catalog import list_examples, load_example
from semicrossed.errors import CapTooSmall, SystemMismatch
from semicrossed.sampling import random_degree, random_fn, random_series
from semicrossed.space import apply, end_point, lattice_point

CATALOG = [load_example(n).system for n, _ in list_examples()]
systems = st.sampled_from(CATALOG)
rngs = st.randoms(use_true_random=False)


def z(k):
    return lattice_point("Z", k)


def brute_value(S, n, f, x):
    return f(apply(S, n, x))


def test_compose_examples(line, cline):
    assert compose_with_map(line, (1,), indicator([z(0)])) == indicator([z(-1)])
    f = indicator([z(3)])
    assert compose_with_map(line, (0,), f) == f
    t = Fn(tails={"Z": {"+": (1, 5)}})
    assert compose_with_map(cline, (2,), t) == Fn(tails={"Z": {"+": (1, 3)}})


def test_product_examples(line, cline):
    d0, d1 = indicator([z(0)]), indicator([z(1)])
    U = lambda n, f, S=line: Series.monomial(S, (n,), f)
    assert multiply(line, U(1, d1), U(1, d0)) == U(2, d0)
    assert multiply(line, U(1, d0), U(1, d1)).is_zero()
    A = Series(cline, {(1,): Fn({z(2): 3}, {"Z": {"+": (1, 4)}}), (0,): indicator([z(0)])})
    one = Series.monomial(cline, (0,), constant_on_compact(cline))
    assert multiply(cline, A, one) == A and multiply(cline, one, A) == A


def test_system_mismatch(line, cline):
    with pytest.raises(SystemMismatch):
        multiply(line, Series.zero(line), Series.zero(cline))


def test_fn_canonical_form(cline):
    spread = Fn({z(3): 1, z(4): 1}, {"Z": {"+": (1, 5)}})
    assert spread == Fn(tails={"Z": {"+": (1, 3)}})
    assert hash(spread) == hash(Fn(tails={"Z": {"+": (1, 3)}}))
    assert spread(end_point("Z", "+")) == 1 and spread(z(2)) == 0


@given(systems, rngs)
def test_fn_pointwise_against_brute_force(S, rnd):
    f, g = random_fn(S, rnd), random_fn(S, rnd)
    n = random_degree(S, rnd)
    pts = list(S.finite_points()) + [lattice_point(c.id, *([k] * c.rank)) for c in S.cells
                                     if hasattr(c, "rank") for k in range(-6, 7)]
    pts += [end_point(c, s) for c in S.ends_cells() for s in "+-"]
    fog = compose_with_map(S, n, f)
    for x in pts:
        assert (f * g)(x) == f(x) * g(x)
        assert (f + g)(x) == f(x) + g(x)
        assert fog(x) == brute_value(S, n, f, x)


@given(systems, rngs)
def test_compose_is_multiplicative_and_a_semigroup(S, rnd):
    f, g = random_fn(S, rnd), random_fn(S, rnd)
    n, m = random_degree(S, rnd), random_degree(S, rnd)
    assert compose_with_map(S, n, f * g) == compose_with_map(S, n, f) * compose_with_map(S, n, g)
    nm = tuple(a + b for a, b in zip(n, m))
    assert compose_with_map(S, n, compose_with_map(S, m, f)) == compose_with_map(S, nm, f)


@given(systems, rngs)
def test_ring_laws(S, rnd):
    A, B, C = (random_series(S, rnd) for _ in range(3))
    m = lambda X, Y: multiply(S, X, Y)
    assert m(m(A, B), C) == m(A, m(B, C))
    assert m(A, B + C) == m(A, B) + m(A, C)
    assert m(A + B, C) == m(A, C) + m(B, C)
    assert l1_norm(m(A, B)) <= l1_norm(A) * l1_norm(B)


@given(systems, rngs)
def test_monomial_span_and_fourier(S, rnd):
    A = random_series(S, rnd)
    rebuilt = Series.zero(S)
    for n in A.degrees():
        rebuilt = rebuilt + Series.monomial(S, n, fourier_coefficient(A, n))
    assert rebuilt == A
    for n, f in A:
        assert not f.is_zero()
    lo, hi = opnorm_bracket(A)
    assert lo <= hi


@given(systems, rngs, st.lists(st.floats(-5, 5), min_size=3, max_size=3))
def test_phase_twist(S, rnd, t):
    t = t[:S.dim]
    A, B = random_series(S, rnd), random_series(S, rnd)
    assert series_close(phase_twist(A, [0] * S.dim), A, 0)
    for n in A.degrees():
        expected = fourier_coefficient(A, n).scale(cmath.exp(1j * sum(a * b for a, b in zip(n, t))))
        assert (fourier_coefficient(phase_twist(A, t), n) - expected).sup_norm() <= 1e-12
    lhs = multiply(S, phase_twist(A, t), phase_twist(B, t))
    assert series_close(lhs, phase_twist(multiply(S, A, B), t), 1e-12)


def test_norm_examples(line):
    f, g = Fn({z(0): 2}), Fn({z(1): -3})
    assert opnorm_bracket(Series.monomial(line, (1,), f)) == (2, 2)
    assert opnorm_bracket(Series(line, {(1,): f, (2,): g})) == (3, 5)
    assert opnorm_bracket(Series.zero(line)) == (0, 0)


def test_window_indicator_is_nilpotent(line):
    A = Series.monomial(line, (1,), indicator([z(k) for k in range(4)]))
    assert not power(line, A, 4).is_zero()
    assert power(line, A, 5).is_zero()
    assert spectral_radius_bracket(line, A, 16).nilpotent_index == 5


def test_example3_power_keeps_unit_coefficient(ex3):
    S = ex3.system
    br = spectral_radius_bracket(S, ex3.series["A10"], 16)
    assert not br.nilpotent and all(r.lower == 1 and r.lower_root == 1.0 for r in br.rows)
    for k in (1, 5, 9):
        assert fourier_coefficient(power(S, ex3.series["A10"], k), (k, 0))(lattice_point("X2", 0)) == 1


def test_two_cycle_square(cycle):
    S = cycle.system
    A2 = Series.monomial(S, (2,), cycle.functions["da"])
    br = spectral_radius_bracket(S, A2, 8)
    assert all(r.lower_root == 1.0 and r.upper_root == 1.0 for r in br.rows)


def test_power_matches_repeated_product(ex3):
    S = ex3.system
    A = ex3.series["A10"] + ex3.series["A11"]
    P = A
    for k in range(2, 7):
        P = multiply(S, P, A)
        assert power(S, A, k) == P


def test_cap_too_small(line):
    A = Series.monomial(line, (2,), Fn({z(0): 1}))
    cycle_like = Series.monomial(line, (0,), Fn({z(0): 1}))
    assert power(line, cycle_like, 3, cap=(0,)) == cycle_like
    with pytest.raises(CapTooSmall):
        power(line, Series.monomial(line, (1,), Fn({z(0): 1, z(1): 1})), 2, cap=(1,))
    capped = multiply(line, A, A, cap=(3,))
    assert capped.is_zero() and capped.truncated


def test_end_value_requires_tail(cline):
    with pytest.raises(ValueError):
        Fn({end_point("Z", "+"): 1})


def test_exact_fractions(line):
    f = Fn({z(0): Fraction(2, 3)})
    A = Series.monomial(line, (0,), f)
    assert fourier_coefficient(power(line, A, 3), (0,))(z(0)) == Fraction(8, 27)
