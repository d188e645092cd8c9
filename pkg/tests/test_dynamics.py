import itertools

import pytest
from hypothesis import given, strategies as st

from semicrossed.catalog import list_examples, load_example
from semicrossed.dynamics import (
    CellPart,
    Region,
    centre_peel,
    check_wandrec,
    closure,
    is_invariant,
    is_J_recurrent,
    is_J_wandering_point,
    recurrent_region,
    wandering_region,
    wandering_set_violation,
)
from semicrossed.space import all_direction_sets, apply, end_point, in_sigma_J, lattice_point, Point

from conftest import line_system

CATALOG = {n: load_example(n).system for n, _ in list_examples()}


def cells(S, *ids):
    return Region.from_parts(S, {c: CellPart(cofinite=True) for c in ids})


def brute_recurrent(S, x, J, box=6):
    for n in itertools.product(range(box), repeat=S.dim):
        if in_sigma_J(n, J) and apply(S, n, x) == x:
            return True
    return False


def test_example3_recurrence(ex3):
    S = ex3.system
    X0, X1, X2 = (lattice_point(c, 0) for c in ("X0", "X1", "X2"))
    assert is_J_recurrent(S, X0, {1, 2})
    assert is_J_recurrent(S, X1, {2}) and not is_J_recurrent(S, X1, {1})
    assert is_J_recurrent(S, X2, {1}) and not is_J_recurrent(S, X2, {2})
    assert recurrent_region(S, {1}) == cells(S, "X0", "X2")
    assert recurrent_region(S, {1, 2}) == cells(S, "X0")


def test_permutation_cells_always_recurrent(catalog):
    S = catalog["finite-perm"].system
    for J in all_direction_sets(2):
        assert recurrent_region(S, J) == Region.whole(S)


def test_opposed_translations_cancel(catalog):
    S = catalog["opposed-translations"].system
    assert is_J_recurrent(S, lattice_point("Z", 4), {1, 2})


def test_compactified_line_regions(cline):
    R = recurrent_region(cline, {1})
    assert R == Region.from_points(cline, [end_point("Z", "+"), end_point("Z", "-")])
    assert closure(cline, R) == R
    c = centre_peel(cline, {1})
    assert c.depth == 1 and c.strata[-1] == R


def test_wandering_examples(ex3, cline):
    S = ex3.system
    assert is_J_wandering_point(S, lattice_point("X1", 0), {1})
    assert not is_J_wandering_point(S, lattice_point("X1", 0), {2})
    assert not is_J_wandering_point(cline, end_point("Z", "+"), {1})


def test_closure_examples(cline):
    whole = Region.whole(cline)
    part = Region.from_parts(cline, {"Z": CellPart(cofinite=True)})
    assert closure(cline, part) == whole
    fin = Region.from_points(cline, [lattice_point("Z", 3)])
    assert closure(cline, fin) == fin


def test_centre_examples(ex3, catalog):
    c = centre_peel(ex3.system, {1, 2})
    assert c.depth == 1 and c.strata[-1] == cells(ex3.system, "X0")
    F = catalog["finite-perm"].system
    assert centre_peel(F, {1, 2}).depth == 0


def test_wandrec_examples(ex3, catalog, line):
    r = check_wandrec(catalog["finite-perm"].system, {1, 2})
    assert not r.wandering_exists and r.recurrent_dense and r.implication_holds
    assert check_wandrec(line, {1}).wandering_exists
    assert check_wandrec(ex3.system, {1}).wandering_exists


def test_recurrent_but_wandering_along_one_direction(catalog):
    S = catalog["mixed-recurrence"].system
    x = lattice_point("M", 0)
    assert is_J_recurrent(S, x, {2}) and is_J_wandering_point(S, x, {1})


@pytest.mark.parametrize("name", sorted(CATALOG))
def test_region_invariants(name):
    S = CATALOG[name]
    for J in all_direction_sets(S.dim):
        rec = recurrent_region(S, J)
        rest = wandering_region(S, J).complement()
        assert is_invariant(S, rest) and rec.issubset(rest)
        c = centre_peel(S, J)
        assert c.strata[-1] == closure(S, rec) and c.depth <= 1
        for Y in c.strata:
            assert recurrent_region(S, J, within=Y) == rec & Y
        for Jp in all_direction_sets(S.dim):
            if J <= Jp:
                assert recurrent_region(S, Jp).issubset(rec)
        assert closure(S, closure(S, rec)) == closure(S, rec)


@pytest.mark.parametrize("name", sorted(CATALOG))
def test_recurrence_matches_brute_force(name):
    S = CATALOG[name]
    pts = list(S.finite_points()) + [Point(c.id, (0,) * c.rank) for c in S.cells if hasattr(c, "rank")]
    for J in all_direction_sets(S.dim):
        for x in pts:
            assert is_J_recurrent(S, x, J) == brute_recurrent(S, x, J)


def test_wandering_set_needs_pairwise_check(line):
    # each point wanders, yet {0,1} is not a wandering set
    assert all(is_J_wandering_point(line, lattice_point("Z", k), {1}) for k in (0, 1))
    hit = wandering_set_violation(line, [lattice_point("Z", 0), lattice_point("Z", 1)], {1})
    assert hit is not None and apply(line, hit[2], hit[0]) == hit[1]
    assert wandering_set_violation(line, [lattice_point("Z", 1), lattice_point("Z", 0)][:1], {1}) is None


@given(st.integers(-3, 3), st.sets(st.integers(-4, 4), max_size=4))
def test_wandering_set_against_brute_force(v, pts):
    S = line_system(v)
    V = [lattice_point("Z", k) for k in pts]
    hit = wandering_set_violation(S, V, {1})
    brute = any(apply(S, (n,), x) == y for x in V for y in V for n in range(1, 10))
    assert (hit is not None) == brute


def test_region_complement_roundtrip(cline):
    R = Region.from_points(cline, [lattice_point("Z", 2), end_point("Z", "+")])
    C = R.complement()
    assert (R | C) == Region.whole(cline) and (R & C).is_empty()
    assert C.complement() == R
    assert R.to_json()["Z"] == {"tag": "points:[2]", "ends": ["+end"]}
    assert C.to_json()["Z"] == {"tag": "cofinite:[2]", "ends": ["-end"]}
