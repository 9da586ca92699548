# app/core/parsing.py

"""
Text syntax shared by the command line and the JSON data files.

    cyclotomic number   1/2 + 3*mu(5)^2 - mu(5)^3, (1+sqrt5)/2, sqrt(-3), i, inf
    word                w[0,1,(1+sqrt5)/2]
    CMZV index          L[2,1;0,3]@4
    polylog index       Li[2,1]((sqrt5-1)/2, 1)
    binomial sum        c,n,t1;t2;...
    expression          polynomial in the above atoms plus log(x), zeta(n), pi, binom[c,n,t]
"""

import logging
import re
from fractions import Fraction

import sympy
from sympy.parsing.sympy_parser import convert_xor, parse_expr, standard_transformations

from app.core.cyclotomic import INFINITY, CycNum, ExtPoint, I, sqrt_rational
from app.core.errors import ParseError
from app.core.expr import (
    BinomAtom,
    CmzvExpr,
    CmzvIndex,
    LogAtom,
    PolylogAtom,
    PolylogIndex,
    pi_expr,
)
from app.core.words import Word, make_word

logger = logging.getLogger(__name__)

_MU = sympy.Function("mu")
_TRANSFORMS = standard_transformations + (convert_xor,)
_ALLOWED = re.compile(r"^[0-9a-zA-Z_()+\-*/^.\s,]*$")
_SQRT_BARE = re.compile(r"sqrt\s*(\d+)")
_ATOM_NAMES = {"mu", "i", "I", "sqrt", "pi", "_a"}


def _sympify(text: str, extra: dict | None = None):
    if not _ALLOWED.match(text):
        raise ParseError(f"unexpected character in {text!r}")
    text = _SQRT_BARE.sub(r"sqrt(\1)", text)
    for name in re.findall(r"[A-Za-z_][A-Za-z_0-9]*", text):
        if name not in _ATOM_NAMES and not (extra and name in extra):
            raise ParseError(f"unknown name {name!r} in {text!r}")
    local = {"mu": _MU, "i": sympy.I, "I": sympy.I, "sqrt": sympy.sqrt, "pi": sympy.Symbol("_pi")}
    if extra:
        local.update(extra)
    try:
        return parse_expr(text, local_dict=local, transformations=_TRANSFORMS)
    except (SyntaxError, TypeError, ValueError, sympy.SympifyError) as e:
        raise ParseError(f"cannot parse {text!r}: {e}") from e


def _number(node) -> CycNum:
    if node.is_Rational:
        return CycNum.rational(Fraction(int(node.p), int(node.q)))
    if node == sympy.I:
        return I
    if isinstance(node, sympy.Add):
        total = CycNum.rational(0)
        for arg in node.args:
            total = total + _number(arg)
        return total
    if isinstance(node, sympy.Mul):
        prod = CycNum.rational(1)
        for arg in node.args:
            prod = prod * _number(arg)
        return prod
    if isinstance(node, sympy.Pow):
        base, exp = node.args
        if exp.is_Integer:
            return _number(base) ** int(exp)
        if exp.is_Rational and exp.q == 2 and base.is_Rational:
            return sqrt_rational(Fraction(int(base.p), int(base.q))) ** int(exp.p)
        raise ParseError(f"unsupported power {node}")
    if isinstance(node, sympy.core.function.AppliedUndef) and node.func == _MU:
        args = [int(x) for x in node.args if x.is_Integer]
        if len(args) != len(node.args) or len(args) not in (1, 2) or args[0] < 1:
            raise ParseError(f"malformed root of unity {node}")
        return CycNum.mu(args[0], args[1] if len(args) == 2 else 1)
    raise ParseError(f"not a cyclotomic number: {node}")


def parse_cycnum(text: str) -> CycNum:
    text = text.strip()
    if not text:
        raise ParseError("empty number")
    return _number(_sympify(text))


def parse_point(text: str) -> ExtPoint:
    if text.strip().lower() in ("inf", "infinity", "oo"):
        return INFINITY
    return parse_cycnum(text)


def split_top(text: str, sep: str = ",") -> list[str]:
    """Split at separators outside any bracket."""
    parts, depth, cur = [], 0, []
    for ch in text:
        if ch in "([":
            depth += 1
        elif ch in ")]":
            depth -= 1
            if depth < 0:
                raise ParseError(f"unbalanced brackets in {text!r}")
        if ch == sep and depth == 0:
            parts.append("".join(cur))
            cur = []
        else:
            cur.append(ch)
    if depth:
        raise ParseError(f"unbalanced brackets in {text!r}")
    parts.append("".join(cur))
    return [p.strip() for p in parts]


def _int_list(text: str, what: str) -> tuple[int, ...]:
    try:
        return tuple(int(x) for x in split_top(text) if x)
    except ValueError as e:
        raise ParseError(f"expected integers in {what}: {text!r}") from e


def parse_word(text: str) -> Word:
    m = re.fullmatch(r"\s*w\[(.*)\]\s*", text, flags=re.S)
    if not m:
        raise ParseError(f"expected w[...], got {text!r}")
    body = m.group(1).strip()
    if not body:
        return ()
    return make_word(*(parse_point(p) for p in split_top(body)))


def parse_index(text: str) -> CmzvIndex:
    m = re.fullmatch(r"\s*L\[([^;\]]*);([^\]]*)\]\s*@\s*(\d+)\s*", text)
    if not m:
        raise ParseError(f"expected L[s;a]@N, got {text!r}")
    s = _int_list(m.group(1), "exponents")
    a = _int_list(m.group(2), "residues")
    level = int(m.group(3))
    if len(s) != len(a) or not s or level < 1:
        raise ParseError(f"malformed index {text!r}")
    return CmzvIndex(level, s, a)


def parse_polylog(text: str) -> PolylogIndex:
    m = re.fullmatch(r"\s*Li\[([^\]]*)\]\s*\((.*)\)\s*", text, flags=re.S)
    if not m:
        raise ParseError(f"expected Li[s](x), got {text!r}")
    s = _int_list(m.group(1), "exponents")
    xs = tuple(parse_cycnum(p) for p in split_top(m.group(2)))
    if len(s) != len(xs) or not s:
        raise ParseError(f"malformed polylog {text!r}")
    return PolylogIndex(s, xs)


def parse_binom(text: str) -> tuple[CycNum, int, tuple[int, ...]]:
    parts = split_top(text)
    if len(parts) not in (2, 3):
        raise ParseError(f"expected c,n,twist got {text!r}")
    c = parse_cycnum(parts[0])
    if c != c.conj():
        raise ParseError(f"binomial parameter must be real: {parts[0]!r}")
    try:
        n = int(parts[1])
    except ValueError as e:
        raise ParseError(f"bad exponent {parts[1]!r}") from e
    twist = tuple(int(t) for t in (parts[2].split(";") if len(parts) == 3 else []) if t.strip())
    return c, n, twist


# ========== EXPRESSIONS ==========


def _matching(text: str, start: int) -> int:
    """Index just past the bracket group opening at start."""
    depth = 0
    for k in range(start, len(text)):
        if text[k] in "([":
            depth += 1
        elif text[k] in ")]":
            depth -= 1
            if depth == 0:
                return k + 1
    raise ParseError(f"unbalanced brackets in {text!r}")


def _extract_atoms(text: str) -> tuple[str, list]:
    """Replace atom literals by placeholder symbols _a0, _a1, ..."""
    atoms: list = []
    out: list[str] = []
    k = 0
    pattern = re.compile(r"(Li\[|L\[|binom\[|log\(|zeta\()")
    while k < len(text):
        m = pattern.search(text, k)
        if not m:
            out.append(text[k:])
            break
        out.append(text[k:m.start()])
        head = m.group(1)
        end = _matching(text, m.end() - 1)
        if head == "Li[":
            end = _matching(text, end)
            atom = PolylogAtom(parse_polylog(text[m.start():end]))
        elif head == "L[":
            at = re.match(r"\s*@\s*\d+", text[end:])
            if not at:
                raise ParseError(f"index without level in {text!r}")
            end += at.end()
            atom = parse_index(text[m.start():end])
        elif head == "binom[":
            c, n, twist = parse_binom(text[m.end():end - 1])
            atom = BinomAtom(c, n, twist)
        elif head == "log(":
            atom = LogAtom(parse_cycnum(text[m.end():end - 1]))
        else:
            s = _int_list(text[m.end():end - 1], "zeta")
            atom = CmzvIndex(1, s, (0,) * len(s))
        out.append(f"_a{len(atoms)}")
        atoms.append(atom)
        k = end
    return "".join(out), atoms


def _expr(node, atoms: dict) -> CmzvExpr:
    if node.is_Symbol:
        if node.name == "_pi":
            return pi_expr()
        if node.name in atoms:
            return CmzvExpr.atom(atoms[node.name])
        raise ParseError(f"unknown symbol {node}")
    if node.free_symbols:
        if isinstance(node, sympy.Add):
            out = CmzvExpr.zero()
            for arg in node.args:
                out = out + _expr(arg, atoms)
            return out
        if isinstance(node, sympy.Mul):
            out = CmzvExpr.one()
            for arg in node.args:
                out = out * _expr(arg, atoms)
            return out
        if isinstance(node, sympy.Pow) and node.args[1].is_Integer and node.args[1] >= 0:
            return _expr(node.args[0], atoms) ** int(node.args[1])
        raise ParseError(f"unsupported expression {node}")
    return CmzvExpr.constant(_number(node))


def parse_expression(text: str) -> CmzvExpr:
    """Parse a polynomial in atoms with cyclotomic coefficients."""
    if "2PI" in text:
        text = text.replace("2PI", "(2*pi*i)")
    body, atom_list = _extract_atoms(text)
    symbols = {f"_a{k}": sympy.Symbol(f"_a{k}") for k in range(len(atom_list))}
    node = _sympify(body, extra=symbols)
    return _expr(sympy.expand(node), {f"_a{k}": a for k, a in enumerate(atom_list)})
