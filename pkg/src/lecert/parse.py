"""Parser for the polynomial-family input language.

    # comment
    vars t, z1, z2, z3
    f = z2^4 + z3^3 + t*z1^2*z2^4*z3^3

The header and the ``f =`` prefix are optional.  Coefficients are integer or
rational literals (``3/2``); products, integer powers and parentheses are
accepted, so ``(z2 + z3)^2`` expands exactly.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction

from .poly import PolyFamily

# internal polynomial: (t-exponent, z-exponents...) -> Fraction
_Poly = dict[tuple[int, ...], Fraction]

_TOKEN = re.compile(
    r"(?P<ws>\s+)|(?P<num>\d+(?:\s*/\s*\d+)?)|(?P<id>[A-Za-z_][A-Za-z0-9_]*)|(?P<op>[-+*^(),=])"
)
_ZVAR = re.compile(r"z([1-9][0-9]*)$")


class ParseError(ValueError):
    def __init__(self, message: str, line: int = 0, col: int = 0):
        super().__init__(f"{line}:{col}: {message}" if line else message)
        self.message = message
        self.line = line
        self.col = col


@dataclass
class _Tok:
    kind: str
    text: str
    line: int
    col: int


def _strip_comments(source: str) -> str:
    # blank out comments so line/column positions survive
    return "\n".join(re.sub(r"#.*", lambda m: " " * len(m.group()), ln) for ln in source.split("\n"))


def _tokenize(source: str) -> list[_Tok]:
    text = _strip_comments(source)
    toks, pos, line, line_start = [], 0, 1, 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", line, pos - line_start + 1)
        kind = m.lastgroup
        chunk = m.group()
        if kind != "ws":
            toks.append(_Tok(kind, chunk, line, pos - line_start + 1))
        for i, ch in enumerate(chunk):
            if ch == "\n":
                line += 1
                line_start = pos + i + 1
        pos = m.end()
    toks.append(_Tok("eof", "", line, pos - line_start + 1))
    return toks


class _Parser:
    def __init__(self, toks: list[_Tok], n: int):
        self.toks = toks
        self.i = 0
        self.n = n
        self.max_index = 0

    @property
    def cur(self) -> _Tok:
        return self.toks[self.i]

    def fail(self, msg: str, tok: _Tok | None = None):
        tok = tok or self.cur
        raise ParseError(msg, tok.line, tok.col)

    def eat(self, text: str) -> bool:
        if self.cur.kind == "op" and self.cur.text == text:
            self.i += 1
            return True
        return False

    def one(self) -> _Poly:
        return {(0,) * (self.n + 1): Fraction(1)}

    def expr(self) -> _Poly:
        acc: _Poly = {}
        sign = 1
        if self.eat("-"):
            sign = -1
        else:
            self.eat("+")
        while True:
            _accumulate(acc, self.term(), sign)
            if self.eat("+"):
                sign = 1
            elif self.eat("-"):
                sign = -1
            else:
                return acc

    def term(self) -> _Poly:
        acc = self.factor()
        while self.eat("*"):
            acc = _mul(acc, self.factor())
        return acc

    def factor(self) -> _Poly:
        base = self.atom()
        if self.eat("^"):
            tok = self.cur
            if tok.kind == "op" and tok.text == "-":
                self.fail("negative exponent")
            if tok.kind != "num" or "/" in tok.text:
                self.fail("exponent must be a non-negative integer")
            self.i += 1
            result = self.one()
            for _ in range(int(tok.text)):
                result = _mul(result, base)
            return result
        return base

    def atom(self) -> _Poly:
        tok = self.cur
        if tok.kind == "num":
            self.i += 1
            value = Fraction(tok.text.replace(" ", "").replace("\t", "").replace("\n", ""))
            return {(0,) * (self.n + 1): value} if value else {}
        if tok.kind == "id":
            self.i += 1
            slot = self.variable_slot(tok)
            exp = [0] * (self.n + 1)
            exp[slot] = 1
            return {tuple(exp): Fraction(1)}
        if self.eat("("):
            inner = self.expr()
            if not self.eat(")"):
                self.fail("expected ')'")
            return inner
        self.fail(f"unexpected token {tok.text or 'end of input'!r}")

    def variable_slot(self, tok: _Tok) -> int:
        if tok.text == "t":
            return 0
        m = _ZVAR.match(tok.text)
        if not m:
            self.fail(f"unknown variable {tok.text!r}", tok)
        k = int(m.group(1))
        if k > self.n:
            self.fail(f"variable {tok.text} not declared (n={self.n})", tok)
        return k


def _accumulate(acc: _Poly, p: _Poly, sign: int) -> None:
    for e, c in p.items():
        v = acc.get(e, Fraction(0)) + sign * c
        if v:
            acc[e] = v
        else:
            acc.pop(e, None)


def _mul(a: _Poly, b: _Poly) -> _Poly:
    out: _Poly = {}
    for ea, ca in a.items():
        for eb, cb in b.items():
            e = tuple(x + y for x, y in zip(ea, eb))
            v = out.get(e, Fraction(0)) + ca * cb
            if v:
                out[e] = v
            else:
                out.pop(e, None)
    return out


def _read_header(toks: list[_Tok]) -> tuple[int | None, int]:
    """Return (declared n or None, index of first token after the header)."""
    if not (toks[0].kind == "id" and toks[0].text == "vars"):
        return None, 0
    i = 1
    names: list[_Tok] = []
    while True:
        tok = toks[i]
        if tok.kind != "id":
            raise ParseError("expected a variable name in 'vars' header", tok.line, tok.col)
        names.append(tok)
        i += 1
        if toks[i].kind == "op" and toks[i].text == ",":
            i += 1
            continue
        break
    zs = [t for t in names if t.text != "t"]
    for k, tok in enumerate(zs, start=1):
        if tok.text != f"z{k}":
            raise ParseError(f"expected z{k} in header, got {tok.text!r}", tok.line, tok.col)
    return len(zs), i


def _infer_n(toks: list[_Tok]) -> int:
    best = 0
    for tok in toks:
        m = _ZVAR.match(tok.text) if tok.kind == "id" else None
        if m:
            best = max(best, int(m.group(1)))
    return best


def parse_family(source: str, name: str | None = None) -> PolyFamily:
    """Parse ``source`` into a normalized :class:`PolyFamily`."""
    toks = _tokenize(source)
    n, start = _read_header(toks)
    if n is None:
        n = _infer_n(toks)
    if n < 2:
        raise ParseError(f"need at least 2 z-variables, got {n}", toks[0].line, toks[0].col)
    p = _Parser(toks, n)
    p.i = start
    label = "f"
    if p.cur.kind == "id" and toks[p.i + 1].kind == "op" and toks[p.i + 1].text == "=":
        label = p.cur.text
        p.i += 2
    poly = p.expr()
    if p.cur.kind != "eof":
        p.fail(f"unexpected token {p.cur.text!r}")
    const = [e for e in poly if not any(e[1:])]
    if const:
        raise ParseError("constant term present: f(t, 0) must vanish", toks[0].line, toks[0].col)
    if not poly:
        raise ParseError("polynomial is identically zero", toks[0].line, toks[0].col)
    terms: dict[tuple[int, ...], list[Fraction]] = {}
    for e, c in poly.items():
        coeffs = terms.setdefault(e[1:], [])
        coeffs.extend([Fraction(0)] * (e[0] + 1 - len(coeffs)))
        coeffs[e[0]] += c
    return PolyFamily.from_terms(n, terms, name or label)
