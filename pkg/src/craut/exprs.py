"""Parsing and printing of polynomial expressions.

Grammar (no implicit multiplication, exponents are unsigned integers):

    expr     := term (('+' | '-') term)*
    term     := factor ('*' factor)*
    factor   := atom ('^' uint)?
    atom     := rational | 'i' | var | 'conj' '(' expr ')' | '(' expr ')' | '-' atom
    rational := int ('/' uint)?

Variables are ``z1..zn`` in both rings, ``w1..wd`` in the HOL ring and
``zb1..zbn`` / ``u1..ud`` in the REAL ring.  ``conj(...)`` is only legal in
the REAL ring.  On output conjugated variables are always written
``conj(zk)``; parse(format(p)) is structurally equal to p.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Dict, List, Tuple

from .poly import REAL, Polynomial, VarTable
from .scalars import GaussianRational


class ExprError(ValueError):
    """Parse failure with the byte offset of the offending token."""

    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} (at offset {offset})")
        self.offset = offset


# -- tokenizer ----------------------------------------------------------------

_SYMBOLS = set("+-*/^()")


def _tokenize(src: str) -> List[Tuple[str, str, int]]:
    """Yield (kind, text, offset) triples; kind is 'int', 'name' or a symbol."""
    tokens = []
    pos = 0
    length = len(src)
    while pos < length:
        ch = src[pos]
        if ch.isspace():
            pos += 1
            continue
        if ch in _SYMBOLS:
            tokens.append((ch, ch, pos))
            pos += 1
            continue
        if ch.isdigit():
            start = pos
            while pos < length and src[pos].isdigit():
                pos += 1
            tokens.append(("int", src[start:pos], start))
            continue
        if ch.isalpha():
            start = pos
            while pos < length and (src[pos].isalnum() or src[pos] == "_"):
                pos += 1
            tokens.append(("name", src[start:pos], start))
            continue
        raise ExprError(f"unexpected character {ch!r}", pos)
    tokens.append(("end", "", length))
    return tokens


# -- parser -------------------------------------------------------------------


class _Parser:
    def __init__(self, src: str, table: VarTable):
        self.tokens = _tokenize(src)
        self.pos = 0
        self.table = table
        self.var_index: Dict[str, int] = {
            name: i for i, name in enumerate(table.var_names())
        }

    def peek(self):
        return self.tokens[self.pos]

    def advance(self):
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def expect(self, kind: str):
        tok = self.advance()
        if tok[0] != kind:
            raise ExprError(f"expected {kind!r}, found {tok[1]!r}", tok[2])
        return tok

    def parse(self) -> Polynomial:
        value = self.expr()
        tok = self.peek()
        if tok[0] != "end":
            raise ExprError(f"unexpected trailing input {tok[1]!r}", tok[2])
        return value

    def expr(self) -> Polynomial:
        value = self.term()
        while self.peek()[0] in ("+", "-"):
            op = self.advance()[0]
            rhs = self.term()
            value = value + rhs if op == "+" else value - rhs
        return value

    def term(self) -> Polynomial:
        value = self.factor()
        while self.peek()[0] == "*":
            self.advance()
            value = value * self.factor()
        return value

    def factor(self) -> Polynomial:
        base = self.atom()
        if self.peek()[0] == "^":
            self.advance()
            tok = self.expect("int")
            return base ** int(tok[1])
        return base

    def atom(self) -> Polynomial:
        tok = self.peek()
        kind, text, offset = tok
        if kind == "-":
            self.advance()
            return -self.atom()
        if kind == "(":
            self.advance()
            value = self.expr()
            self.expect(")")
            return value
        if kind == "int":
            self.advance()
            value = Fraction(int(text))
            if self.peek()[0] == "/":
                self.advance()
                den_tok = self.expect("int")
                den = int(den_tok[1])
                if den == 0:
                    raise ExprError("zero denominator in rational literal", den_tok[2])
                value = Fraction(int(text), den)
            return Polynomial.constant(self.table, value)
        if kind == "name":
            self.advance()
            if text == "i":
                return Polynomial.constant(self.table, GaussianRational(0, 1))
            if text == "conj":
                if self.table.ring != REAL:
                    raise ExprError("conj(...) is only legal in the REAL ring", offset)
                self.expect("(")
                inner = self.expr()
                self.expect(")")
                return inner.conjugate()
            index = self.var_index.get(text)
            if index is None:
                if _looks_like_variable(text):
                    raise ExprError(
                        f"variable {text!r} does not exist in this ring", offset
                    )
                raise ExprError(f"unknown name {text!r}", offset)
            return Polynomial.variable(self.table, index)
        raise ExprError(f"expected an atom, found {text!r}", offset)


def _looks_like_variable(name: str) -> bool:
    return (
        len(name) >= 2
        and name[0] in "zwu"
        and (name[1:].isdigit() or (name.startswith("zb") and name[2:].isdigit()))
    )


def parse_poly(src: str, table: VarTable) -> Polynomial:
    """Parse a polynomial expression over the given table."""
    return _Parser(src, table).parse()


def parse_scalar(src: str) -> GaussianRational:
    """Parse a constant scalar expression (rationals, i, conj, + - * ^)."""
    table = VarTable(1, ((2, 1),), REAL)
    p = _Parser(src, table).parse()
    if p.is_zero():
        return GaussianRational(0)
    terms = p.sorted_terms()
    if len(terms) != 1 or any(terms[0][0]):
        raise ExprError("expected a constant scalar expression", 0)
    return terms[0][1]


# -- formatter ----------------------------------------------------------------


def _format_fraction(value: Fraction) -> str:
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def format_scalar(value: GaussianRational) -> str:
    """Canonical string for a scalar, parseable by the grammar."""
    sign, body = _scalar_sign_body(value)
    return body if sign >= 0 else f"-{body}"


def _scalar_sign_body(value: GaussianRational) -> Tuple[int, str]:
    """Split a scalar into a printable sign and an unsigned body."""
    if value.is_zero():
        return 1, "0"
    if value.is_real():
        sign = 1 if value.re > 0 else -1
        return sign, _format_fraction(abs(value.re))
    if not value.re:
        sign = 1 if value.im > 0 else -1
        mag = abs(value.im)
        return sign, "i" if mag == 1 else f"{_format_fraction(mag)}*i"
    re = _format_fraction(value.re)
    im_sign = "+" if value.im > 0 else "-"
    mag = abs(value.im)
    im = "i" if mag == 1 else f"{_format_fraction(mag)}*i"
    return 1, f"({re}{im_sign}{im})"


def _format_monomial(exps, table: VarTable) -> str:
    parts = []
    names = table.var_names()
    n = table.n
    for var, e in enumerate(exps):
        if not e:
            continue
        name = names[var]
        if table.ring == REAL and n <= var < 2 * n:
            name = f"conj(z{var - n + 1})"
        parts.append(name if e == 1 else f"{name}^{e}")
    return "*".join(parts)


def format_poly(p: Polynomial) -> str:
    """Deterministic canonical form; the zero polynomial prints as "0"."""
    terms = p.sorted_terms()
    if not terms:
        return "0"
    rendered = []
    for exps, coeff in terms:
        sign, body = _scalar_sign_body(coeff)
        mono = _format_monomial(exps, p.table)
        if mono:
            if body == "1":
                piece = mono
            else:
                piece = f"{body}*{mono}"
        else:
            piece = body
        rendered.append((sign, piece))
    out = []
    for idx, (sign, piece) in enumerate(rendered):
        if idx == 0:
            out.append(piece if sign >= 0 else f"-{piece}")
        else:
            out.append(f" + {piece}" if sign >= 0 else f" - {piece}")
    return "".join(out)
