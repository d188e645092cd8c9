from fractions import Fraction

import pytest

from semicrossed.algebra import Fn
from semicrossed.catalog import emit_example, list_examples
from semicrossed.errors import CommutativityViolation, ParseError
from semicrossed.scenario import parse
from semicrossed.space import Point, end_point, lattice_point

BASE = """\
dim 2
cell X1 lattice rank=1 ends
cell P lattice rank=2
cell F finite points=a,b
gen 1 X1 translate [1]
gen 2 P translate [0,1]
gen 1 F perm a->b,b->a
"""


def test_full_grammar():
    sc = parse(BASE + """\
# comment line
fn f on X1 { 0 -> 1, 5 -> 2/3 } tail(+): 0@10 tail(-): -1@-4
fn f on P { [1,2] -> 3 }
fn g on F { a -> 1 }
series A = U[1,0]*f + 2/3*U[0,1]*g
analyze J={1}
analyze
radical A
witness point=X1:+end J={1} q=[1,0] fn=f K=3
semisimple samples=5
evidence A samples=4
""")
    f = sc.functions["f"]
    assert f(lattice_point("X1", 5)) == Fraction(2, 3)
    assert f(lattice_point("X1", -9)) == -1 and f(end_point("X1", "-")) == -1
    assert f(lattice_point("P", 1, 2)) == 3
    A = sc.series["A"]
    assert A.terms[(0, 1)] == sc.functions["g"].scale(Fraction(2, 3))
    assert [c.name for c in sc.commands] == ["analyze", "analyze", "radical", "witness", "semisimple", "evidence"]
    assert sc.commands[0].args["J"] == {1}
    w = sc.commands[3].args
    assert w["point"] == end_point("X1", "+") and w["q"] == (1, 0) and w["K"] == 3


def test_repeated_terms_add():
    sc = parse(BASE + "fn g on F { a -> 1 }\nseries A = U[1,0]*g + U[1,0]*g\n")
    assert sc.series["A"].terms[(1, 0)] == Fn({Point("F", "a"): 2})


@pytest.mark.parametrize("extra, line", [
    ("bogus 1", 8),
    ("cell Q lattice rank=x", 8),
    ("gen 1 F perm a->", 8),
    ("fn f on Nope { 0 -> 1 }", 8),
    ("fn f on F { c -> 1 }", 8),
    ("fn f on P { 3 -> 1 }", 8),
    ("fn f on F { a -> 1 } tail(+): 1@3", 8),
    ("fn f on X1 { 0 -> 1/0 }", 8),
    ("fn f on X1 { 0 -> 1 }\nseries A = U[1]*f", 9),
    ("fn f on X1 { 0 -> 1 }\nseries A = U[1,0]*h", 9),
    ("radical Z", 8),
    ("witness point=X1:0 J={1}", 8),
    ("analyze J={3}", 8),
    ("evidence", 8),
    ("dim 3", 8),
])
def test_errors_carry_line_numbers(extra, line):
    with pytest.raises(ParseError) as e:
        parse(BASE + extra + "\n")
    assert e.value.line == line
    assert str(e.value).startswith(f"line {line}:")


def test_non_commuting_generators():
    with pytest.raises(CommutativityViolation):
        parse("cell F finite points=a,b,c\ngen 1 F perm a->b,b->c,c->a\ngen 2 F perm a->b,b->a\n")


def test_empty_command_list():
    assert parse("dim 1\n").commands == []


@pytest.mark.parametrize("name", [n for n, _ in list_examples()])
def test_builtins_parse_deterministically(name):
    a, b = parse(emit_example(name)), parse(emit_example(name))
    assert a.system == b.system and a.series == b.series and a.commands == b.commands
