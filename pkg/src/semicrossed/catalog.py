"""Built-in scenarios."""
from __future__ import annotations

from .errors import UnknownExample
from .scenario import Scenario, parse

_EXAMPLES = {
    "example3": (
        "Three lines: X0 fixed, phi_1 shifts X1, phi_2 shifts X2.",
        """\
dim 2
cell X0 lattice rank=1
cell X1 lattice rank=1
cell X2 lattice rank=1
gen 1 X1 translate [1]
gen 2 X2 translate [1]
fn f on X1 { 0 -> 1 }
fn f on X2 { 0 -> 1 }
series A11 = U[1,1]*f
series A10 = U[1,0]*f
series A01 = U[0,1]*f
analyze
radical A11
radical A10
radical A01
witness point=X2:0 J={1} q=[1,0] fn=f K=4
semisimple
evidence A10 samples=6
""",
    ),
    "line-translation": (
        "The integers under translation by one.",
        """\
dim 1
cell Z lattice rank=1
gen 1 Z translate [1]
fn d on Z { 0 -> 1 }
fn w on Z { 0 -> 1, 1 -> 1, 2 -> 1, 3 -> 1 }
series A = U[1]*d
series W = U[1]*w
analyze
radical A
semisimple
evidence W samples=6
""",
    ),
    "compactified-line": (
        "The integers with both ends adjoined; the ends are fixed.",
        """\
dim 1
cell Z lattice rank=1 ends
gen 1 Z translate [1]
fn d on Z { 0 -> 1 }
fn t on Z { } tail(+): 1@5
series A = U[1]*d
series T = U[1]*t
analyze
radical A
radical T
witness point=Z:+end J={1} q=[1] fn=t K=4
semisimple
evidence T samples=6
""",
    ),
    "two-cycle": (
        "Two points swapped by the generator.",
        """\
dim 1
cell C finite points=a,b
gen 1 C perm a->b,b->a
fn da on C { a -> 1 }
fn db on C { b -> 1 }
fn one on C { a -> 1, b -> 1 }
series A = U[1]*da
series B = U[1]*db
analyze
radical A
witness point=C:a J={1} q=[1] fn=one K=4
semisimple
evidence A samples=6
""",
    ),
    "mixed-recurrence": (
        "phi_1 shifts the line, phi_2 fixes it: every point returns along direction 2 "
        "but has a neighbourhood that wanders along direction 1.",
        """\
dim 2
cell M lattice rank=1
gen 1 M translate [1]
gen 2 M translate [0]
fn d on M { 0 -> 1 }
series A10 = U[1,0]*d
series A01 = U[0,1]*d
analyze
radical A10
radical A01
witness point=M:0 J={2} q=[0,1] fn=d K=4
semisimple
evidence A01 samples=6
""",
    ),
    "finite-perm": (
        "Two commuting actions on finite cells: a 3-cycle with its inverse, and a swap.",
        """\
dim 2
cell F finite points=a,b,c
cell G finite points=p,q
gen 1 F perm a->b,b->c,c->a
gen 2 F perm a->c,c->b,b->a
gen 2 G perm p->q,q->p
fn da on F { a -> 1 }
fn hp on G { p -> 2 }
series A = U[1,0]*da
series P = U[0,1]*hp
analyze
radical A
radical P
witness point=G:p J={2} q=[0,1] fn=hp K=4
semisimple
evidence P samples=6
""",
    ),
    "opposed-translations": (
        "phi_1 and phi_2 shift the line in opposite directions, so phi_1 phi_2 is the identity.",
        """\
dim 2
cell Z lattice rank=1
gen 1 Z translate [1]
gen 2 Z translate [-1]
fn d on Z { 0 -> 1 }
series A = U[1,0]*d
analyze
radical A
witness point=Z:0 J={1,2} q=[1,0] fn=d K=4
semisimple
evidence A samples=6
""",
    ),
    "plane": (
        "Two planes: on P the three translations sum to zero, on Q only phi_3 returns.",
        """\
dim 3
cell P lattice rank=2
cell Q lattice rank=2
gen 1 P translate [1,0]
gen 2 P translate [-1,1]
gen 3 P translate [0,-1]
gen 1 Q translate [1,0]
gen 2 Q translate [0,1]
gen 3 Q translate [0,0]
fn f on P { [0,0] -> 1 }
fn g on Q { [0,0] -> 1 }
series A = U[1,0,0]*f
series G = U[0,0,1]*g
series H = U[1,0,1]*g
analyze
radical A
radical G
radical H
witness point=Q:[0,0] J={3} q=[0,0,1] fn=g K=4
semisimple
evidence H samples=6
""",
    ),
}


def list_examples() -> list:
    """(name, description) pairs in catalog order."""
    return [(name, desc) for name, (desc, _) in _EXAMPLES.items()]


def emit_example(name: str) -> str:
    """Scenario text of a built-in example."""
    if name not in _EXAMPLES:
        raise UnknownExample(f"no built-in example named {name!r}; try one of {', '.join(_EXAMPLES)}")
    return _EXAMPLES[name][1]


def load_example(name: str) -> Scenario:
    return parse(emit_example(name))
