"""Line-oriented scenario format.

Grammar sketch (one directive per line, ``#`` starts a comment)::

    scenario  := line*
    line      := dim | cell | gen | fn | series | command
    dim       := "dim" INT
    cell      := "cell" ID "lattice" "rank=" INT ["ends"]
               | "cell" ID "finite" "points=" SYM ("," SYM)*
    gen       := "gen" INT ID "translate" VECTOR
               | "gen" INT ID "perm" SYM "->" SYM ("," SYM "->" SYM)*
    fn        := "fn" NAME "on" ID "{" [entry ("," entry)*] "}" tail*
    entry     := POS "->" NUMBER
    tail      := "tail(" ("+" | "-") "):" NUMBER "@" INT
    series    := "series" NAME "=" term ("+" term)*
    term      := [NUMBER "*"] "U" VECTOR "*" NAME
    command   := "analyze" ["J=" SET]
               | "radical" NAME
               | "witness" "point=" POINT "J=" SET "q=" VECTOR "fn=" NAME ["K=" INT]
               | "semisimple" ["samples=" INT]
               | "evidence" NAME ["samples=" INT]
    VECTOR    := "[" [INT ("," INT)*] "]"
    SET       := "{" [INT ("," INT)*] "}"
    POINT     := ID ":" POS
    POS       := SYM | INT | VECTOR | "+end" | "-end"
    NUMBER    := ["-"] INT ["/" INT]

Several ``fn`` lines with the same name on different cells combine into one
function.  Cells and generators may appear anywhere; the
system is validated once the whole file has been read.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction

from .algebra import Fn, Series
from .errors import ParseError, SemicrossedError
from .space import ENDS, FiniteCell, LatticeCell, MapSystem, Point, validate_system

_ID = r"[A-Za-z_][A-Za-z0-9_\-]*"
_VEC = r"\[\s*(?:-?\d+\s*(?:,\s*-?\d+\s*)*)?\]"
_SET = r"\{\s*(?:\d+\s*(?:,\s*\d+\s*)*)?\}"
_NUM = r"-?\d+(?:/\d+)?"


@dataclass(frozen=True)
class Command:
    name: str
    args: dict
    line: int
    text: str


@dataclass
class Scenario:
    system: MapSystem
    functions: dict = field(default_factory=dict)
    series: dict = field(default_factory=dict)
    commands: list = field(default_factory=list)


def parse_vector(text: str, line: int = 0) -> tuple:
    text = text.strip()
    if not re.fullmatch(_VEC, text):
        raise ParseError(f"expected an integer vector like [1,0], got {text!r}", line)
    inner = text[1:-1].strip()
    return tuple(int(v) for v in inner.split(",")) if inner else ()


def parse_set(text: str, line: int = 0) -> frozenset:
    text = text.strip()
    if not re.fullmatch(_SET, text):
        raise ParseError(f"expected an index set like {{1,2}}, got {text!r}", line)
    inner = text[1:-1].strip()
    return frozenset(int(v) for v in inner.split(",")) if inner else frozenset()


def parse_number(text: str, line: int = 0) -> Fraction:
    text = text.strip()
    if not re.fullmatch(_NUM, text):
        raise ParseError(f"expected a rational like 2/3, got {text!r}", line)
    try:
        return Fraction(text)
    except ZeroDivisionError:
        raise ParseError(f"zero denominator in {text!r}", line) from None


def _parse_pos(cell, text: str, line: int):
    text = text.strip()
    if text in ENDS:
        if not (isinstance(cell, LatticeCell) and cell.ends):
            raise ParseError(f"cell {cell.id} has no ends", line)
        return text
    if isinstance(cell, FiniteCell):
        if text not in cell.points:
            raise ParseError(f"{text!r} is not a point of finite cell {cell.id}", line)
        return text
    if re.fullmatch(r"-?\d+", text):
        pos = (int(text),)
    else:
        pos = parse_vector(text, line)
    if len(pos) != cell.rank:
        raise ParseError(f"position {text} has length {len(pos)}, cell {cell.id} has rank {cell.rank}", line)
    return pos


def parse_point(system: MapSystem, text: str, line: int = 0) -> Point:
    cid, sep, pos = text.partition(":")
    if not sep:
        raise ParseError(f"expected a point like X1:0, got {text!r}", line)
    try:
        cell = system.cell(cid.strip())
    except SemicrossedError:
        raise ParseError(f"unknown cell {cid.strip()!r}", line) from None
    return Point(cell.id, _parse_pos(cell, pos, line))


def _split_top(text: str, sep: str) -> list:
    """Split on ``sep`` outside brackets and braces."""
    out, depth, cur = [], 0, ""
    for ch in text:
        if ch in "[{":
            depth += 1
        elif ch in "]}":
            depth -= 1
        if ch == sep and depth == 0:
            out.append(cur)
            cur = ""
        else:
            cur += ch
    out.append(cur)
    return out


def _kwargs(tokens: list, allowed: dict, line: int) -> dict:
    """``key=value`` tokens; ``allowed`` maps key -> converter."""
    out = {}
    for tok in tokens:
        key, sep, val = tok.partition("=")
        if not sep or key not in allowed:
            raise ParseError(f"unexpected argument {tok!r}", line)
        if key in out:
            raise ParseError(f"argument {key} given twice", line)
        out[key] = allowed[key](val, line)
    return out


def _int(text, line):
    if not re.fullmatch(r"\d+", text):
        raise ParseError(f"expected a nonnegative integer, got {text!r}", line)
    return int(text)


def _tokens(rest: str) -> list:
    """Whitespace split that keeps bracketed groups intact."""
    return [t for t in _split_top(re.sub(r"\s+", " ", rest.strip()), " ") if t]


def parse(text: str) -> Scenario:
    """Parse and validate a scenario; errors carry 1-based line numbers."""
    raw = {"cells": [], "gens": []}
    fn_lines, series_lines, cmd_lines = [], [], []
    dim_line = None
    for no, full in enumerate(text.splitlines(), start=1):
        body = full.split("#", 1)[0].strip()
        if not body:
            continue
        head, _, rest = body.partition(" ")
        rest = rest.strip()
        if head == "dim":
            if dim_line is not None:
                raise ParseError("dim declared twice", no)
            raw["dim"] = _int(rest, no)
            if raw["dim"] < 1:
                raise ParseError("dim must be at least 1", no)
            dim_line = no
        elif head == "cell":
            raw["cells"].append(_parse_cell(rest, no))
        elif head == "gen":
            raw["gens"].append(_parse_gen(rest, no))
        elif head == "fn":
            fn_lines.append((no, rest))
        elif head == "series":
            series_lines.append((no, rest))
        elif head in ("analyze", "radical", "witness", "semisimple", "evidence"):
            cmd_lines.append((no, head, rest, body))
        else:
            raise ParseError(f"unknown directive {head!r}", no)

    system = validate_system(raw)
    sc = Scenario(system)
    parts: dict = {}
    for no, rest in fn_lines:
        name, cid, vals, tails = _parse_fn(system, rest, no)
        parts.setdefault(name, []).append((no, cid, vals, tails))
    for name, pieces in parts.items():
        vals, tails, seen = {}, {}, set()
        for no, cid, v, t in pieces:
            if cid in seen:
                raise ParseError(f"function {name} declared twice on cell {cid}", no)
            seen.add(cid)
            vals.update(v)
            if t:
                tails[cid] = t
        try:
            sc.functions[name] = Fn(vals, tails)
        except ValueError as e:
            raise ParseError(f"function {name}: {e}", pieces[0][0]) from None
    for no, rest in series_lines:
        name, S = _parse_series(sc, rest, no)
        if name in sc.series:
            raise ParseError(f"series {name} declared twice", no)
        sc.series[name] = S
    for no, head, rest, body in cmd_lines:
        sc.commands.append(_parse_command(sc, head, rest, no, body))
    return sc


def _parse_cell(rest: str, no: int) -> dict:
    m = re.fullmatch(rf"({_ID})\s+lattice\s+rank=(\d+)(\s+ends)?", rest)
    if m:
        return {"id": m.group(1), "rank": int(m.group(2)), "ends": bool(m.group(3))}
    m = re.fullmatch(rf"({_ID})\s+finite\s+points=(\S+)", rest)
    if m:
        pts = m.group(2).split(",")
        if any(not re.fullmatch(_ID, p) for p in pts):
            raise ParseError(f"bad point list {m.group(2)!r}", no)
        return {"id": m.group(1), "points": pts}
    raise ParseError(f"cannot parse cell declaration {rest!r}", no)


def _parse_gen(rest: str, no: int) -> dict:
    m = re.fullmatch(rf"(\d+)\s+({_ID})\s+translate\s+({_VEC})", rest)
    if m:
        return {"index": int(m.group(1)), "cell": m.group(2), "translate": parse_vector(m.group(3), no)}
    m = re.fullmatch(rf"(\d+)\s+({_ID})\s+perm\s+(.+)", rest)
    if m:
        mapping = {}
        for pair in m.group(3).replace(" ", "").split(","):
            a, sep, b = pair.partition("->")
            if not sep or not a or not b:
                raise ParseError(f"bad permutation entry {pair!r}", no)
            if a in mapping:
                raise ParseError(f"point {a} mapped twice", no)
            mapping[a] = b
        return {"index": int(m.group(1)), "cell": m.group(2), "perm": mapping}
    raise ParseError(f"cannot parse generator declaration {rest!r}", no)


def _parse_fn(system: MapSystem, rest: str, no: int):
    m = re.fullmatch(rf"({_ID})\s+on\s+({_ID})\s*\{{(.*?)\}}\s*(.*)", rest)
    if not m:
        raise ParseError(f"cannot parse function literal {rest!r}", no)
    name, cid, body, tail_text = m.groups()
    try:
        cell = system.cell(cid)
    except SemicrossedError:
        raise ParseError(f"unknown cell {cid!r}", no) from None
    vals = {}
    if body.strip():
        for entry in _split_top(body, ","):
            pos, sep, val = entry.partition("->")
            if not sep:
                raise ParseError(f"bad function entry {entry.strip()!r}", no)
            p = _parse_pos(cell, pos, no)
            if p in ENDS:
                raise ParseError("values at ends come from tails; use tail(+) or tail(-)", no)
            x = Point(cid, p)
            if x in vals:
                raise ParseError(f"point {x} given twice", no)
            vals[x] = parse_number(val, no)
    tails = {}
    for side, c, t in re.findall(rf"tail\(([+-])\):\s*({_NUM})@(-?\d+)", tail_text):
        if side in tails:
            raise ParseError(f"tail({side}) given twice", no)
        tails[side] = (parse_number(c, no), int(t))
    leftover = re.sub(rf"tail\(([+-])\):\s*({_NUM})@(-?\d+)", "", tail_text).strip()
    if leftover:
        raise ParseError(f"unexpected text after function body: {leftover!r}", no)
    if tails and not (isinstance(cell, LatticeCell) and cell.ends):
        raise ParseError(f"cell {cid} has no ends, so tails are not allowed", no)
    return name, cid, vals, tails


def _parse_series(sc: Scenario, rest: str, no: int):
    name, sep, body = rest.partition("=")
    name = name.strip()
    if not sep or not re.fullmatch(_ID, name):
        raise ParseError(f"cannot parse series literal {rest!r}", no)
    terms: dict = {}
    for raw_term in _split_top(body, "+"):
        t = raw_term.strip().replace(" ", "")
        m = re.fullmatch(rf"(?:({_NUM})\*)?U({_VEC})\*({_ID})", t)
        if not m:
            raise ParseError(f"cannot parse series term {raw_term.strip()!r}", no)
        coeff = parse_number(m.group(1), no) if m.group(1) else Fraction(1)
        n = parse_vector(m.group(2), no)
        if len(n) != sc.system.dim or min(n, default=0) < 0:
            raise ParseError(f"degree {list(n)} is not in Z_+^{sc.system.dim}", no)
        fname = m.group(3)
        if fname not in sc.functions:
            raise ParseError(f"unknown function {fname!r}", no)
        f = sc.functions[fname].scale(coeff)
        terms[n] = terms[n] + f if n in terms else f
    return name, Series(sc.system, terms)


def _series_ref(sc):
    def conv(text, line):
        if text not in sc.series:
            raise ParseError(f"unknown series {text!r}", line)
        return text
    return conv


def _parse_command(sc: Scenario, head: str, rest: str, no: int, body: str) -> Command:
    toks = _tokens(rest)
    d = sc.system.dim

    def jset(text, line):
        J = parse_set(text, line)
        if not J <= set(range(1, d + 1)):
            raise ParseError(f"J={sorted(J)} is not inside 1..{d}", line)
        return J

    def degree(text, line):
        n = parse_vector(text, line)
        if len(n) != d or min(n, default=0) < 0:
            raise ParseError(f"degree {list(n)} is not in Z_+^{d}", line)
        return n

    def fn_ref(text, line):
        if text not in sc.functions:
            raise ParseError(f"unknown function {text!r}", line)
        return text

    if head == "analyze":
        args = _kwargs(toks, {"J": jset}, no)
    elif head == "radical":
        if len(toks) != 1:
            raise ParseError("radical takes exactly one series name", no)
        args = {"series": _series_ref(sc)(toks[0], no)}
    elif head == "witness":
        args = _kwargs(toks, {
            "point": lambda t, line: parse_point(sc.system, t, line),
            "J": jset, "q": degree, "fn": fn_ref, "K": _int,
        }, no)
        for key in ("point", "J", "q", "fn"):
            if key not in args:
                raise ParseError(f"witness needs {key}=", no)
        args.setdefault("K", 4)
        if args["K"] < 1:
            raise ParseError("K must be at least 1", no)
    elif head == "semisimple":
        args = _kwargs(toks, {"samples": _int}, no)
        args.setdefault("samples", 100)
    else:  # evidence
        if not toks:
            raise ParseError("evidence needs a series name", no)
        args = {"series": _series_ref(sc)(toks[0], no)}
        args.update(_kwargs(toks[1:], {"samples": _int}, no))
        args.setdefault("samples", 20)
    return Command(head, args, no, body)
