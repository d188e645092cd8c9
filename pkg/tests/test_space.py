import pytest
from hypothesis import given, strategies as st

from semicrossed.catalog import list_examples, load_example
from semicrossed.errors import CommutativityViolation, MalformedCell, NotBijective, PointNotInSpace
from semicrossed.space import (
    FiniteCell,
    LatticeCell,
    Point,
    all_direction_sets,
    apply,
    e_J,
    end_point,
    in_delta_J,
    in_sigma_J,
    lattice_point,
    preimage,
    support,
    validate_system,
)
from semicrossed.sampling import random_point

SYSTEMS = [load_example(n).system for n, _ in list_examples()]


def test_translations_commute():
    S = validate_system({"cells": [{"id": "Z", "rank": 1}],
                         "gens": [{"index": 1, "cell": "Z", "translate": [1]},
                                  {"index": 2, "cell": "Z", "translate": [0]}]})
    assert S.dim == 2


def test_swap_and_identity_commute():
    validate_system({"dim": 2, "cells": [{"id": "F", "points": ["a", "b"]}],
                     "gens": [{"index": 1, "cell": "F", "perm": {"a": "b", "b": "a"}}]})


def test_cycle_and_swap_do_not_commute():
    raw = {"cells": [{"id": "F", "points": ["a", "b", "c"]}],
           "gens": [{"index": 1, "cell": "F", "perm": {"a": "b", "b": "c", "c": "a"}},
                    {"index": 2, "cell": "F", "perm": {"a": "b", "b": "a"}}]}
    with pytest.raises(CommutativityViolation) as e:
        validate_system(raw)
    # brute-force witness: some point where the two orders disagree
    p1 = {"a": "b", "b": "c", "c": "a"}
    p2 = {"a": "b", "b": "a", "c": "c"}
    bad = [x for x in "abc" if p1[p2[x]] != p2[p1[x]]]
    assert e.value.point.pos in bad


def test_non_bijective_perm():
    with pytest.raises(NotBijective):
        validate_system({"cells": [{"id": "F", "points": ["a", "b"]}],
                         "gens": [{"index": 1, "cell": "F", "perm": {"a": "b"}}]})


@pytest.mark.parametrize("cell", [
    lambda: FiniteCell("F", ()),
    lambda: FiniteCell("F", ("a", "a")),
    lambda: LatticeCell("Z", 2, ends=True),
    lambda: LatticeCell("Z", 0),
])
def test_malformed_cells(cell):
    with pytest.raises(MalformedCell):
        cell()


def test_apply_examples(line, ex3):
    assert apply(line, (3,), lattice_point("Z", 0)) == lattice_point("Z", 3)
    assert apply(line, (0,), lattice_point("Z", 7)) == lattice_point("Z", 7)
    assert apply(ex3.system, (2, 5), lattice_point("X1", 0)) == lattice_point("X1", 2)


def test_preimage_examples(line, ex3):
    assert preimage(line, (1,), lattice_point("Z", 5)) == {lattice_point("Z", 4)}
    assert preimage(line, (0,), lattice_point("Z", 5)) == {lattice_point("Z", 5)}
    assert preimage(ex3.system, (1, 0), lattice_point("X2", 7)) == {lattice_point("X2", 7)}


def test_ends_fixed(cline):
    for s in "+-":
        assert apply(cline, (9,), end_point("Z", s)) == end_point("Z", s)


def test_point_not_in_space(line):
    with pytest.raises(PointNotInSpace):
        apply(line, (1,), Point("nope", (0,)))
    with pytest.raises(PointNotInSpace):
        apply(line, (1,), end_point("Z"))


def test_direction_helpers():
    assert support((2, 0, 1)) == {1, 3}
    assert e_J({1, 2}, 3) == (1, 1, 0)
    assert in_sigma_J((1, 4), {1}) and not in_delta_J((1, 4), {1})
    assert in_delta_J((3, 0), {1})


@given(st.integers(1, 4).flatmap(lambda d: st.sets(st.integers(1, d)).map(lambda J: (J, d))))
def test_e_J_in_sigma_and_delta(Jd):
    J, d = Jd
    n = e_J(J, d)
    assert in_sigma_J(n, J) and in_delta_J(n, J)


index = st.lists(st.integers(0, 5), min_size=3, max_size=3)


@given(st.sampled_from(range(len(SYSTEMS))), index, index, st.randoms(use_true_random=False))
def test_semigroup_bijectivity_cells(k, n, m, rnd):
    S = SYSTEMS[k]
    n, m = tuple(n[:S.dim]), tuple(m[:S.dim])
    x = random_point(S, rnd)
    nm = tuple(a + b for a, b in zip(n, m))
    y = apply(S, nm, x)
    assert y == apply(S, n, apply(S, m, x))
    assert preimage(S, n, apply(S, n, x)) == {x}
    assert y.cell == x.cell


def test_all_direction_sets():
    assert len(all_direction_sets(3)) == 8
    assert frozenset() in all_direction_sets(2)


def test_point_strings():
    assert str(lattice_point("X1", 0)) == "X1:0"
    assert str(lattice_point("P", 1, -2)) == "P:[1,-2]"
    assert str(end_point("Z", "-")) == "Z:-end"
