"""Reader and canonical printer for the ``.pmap`` polynomial-map language.

Grammar::

    map    := stmt (";" stmt)* [";"]
    stmt   := ident "=" expr
    expr   := term (("+" | "-") term)*
    term   := factor ("*" factor)*
    factor := ["-"] base ["^" uint]
    base   := ident | rational | "(" expr ")"
    rational := uint ["/" uint]

Multiplication is always explicit, so ``xy`` is one (unknown) identifier
rather than ``x*y``.  ``#`` starts a comment that runs to end of line.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .polycore import Poly, PolyMap, default_names

RESERVED_VARSETS: dict[int, list[tuple[str, ...]]] = {
    1: [("x",), ("x1",)],
    2: [("x", "y"), ("x1", "x2"), ("u", "v"), ("ubar", "vbar")],
}


class ParseError(ValueError):
    def __init__(self, message: str, line: int, col: int):
        super().__init__(f"{message} (line {line}, column {col})")
        self.message = message
        self.line = line
        self.col = col


@dataclass(frozen=True)
class Token:
    kind: str  # ident, int, float, op, eof
    text: str
    line: int
    col: int


_TOKEN_RE = re.compile(
    r"(?P<ws>[ \t\r\f\v]+)|(?P<nl>\n)|(?P<comment>#[^\n]*)"
    r"|(?P<ident>[A-Za-z_][A-Za-z0-9_]*)|(?P<float>[0-9]*\.[0-9]+|[0-9]+\.)|(?P<int>[0-9]+)"
    r"|(?P<op>[-+*^/()=;])"
)


def tokenize(text: str) -> list[Token]:
    tokens: list[Token] = []
    line, line_start, pos = 1, 0, 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        col = pos - line_start + 1
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", line, col)
        kind = m.lastgroup
        if kind == "nl":
            line += 1
            line_start = m.end()
        elif kind in ("ident", "int", "float", "op"):
            tokens.append(Token(kind, m.group(), line, col))
        pos = m.end()
    tokens.append(Token("eof", "", line, pos - line_start + 1))
    return tokens


# expression tree: ("num", Fraction) | ("var", name, tok) | ("neg", e) | ("add"/"sub"/"mul", a, b) | ("pow", e, k)


class _Parser:
    def __init__(self, text: str):
        self.tokens = tokenize(text)
        self.i = 0

    @property
    def tok(self) -> Token:
        return self.tokens[self.i]

    def advance(self) -> Token:
        t = self.tokens[self.i]
        self.i += 1
        return t

    def error(self, message: str, tok: Token | None = None):
        tok = tok or self.tok
        raise ParseError(message, tok.line, tok.col)

    def expect(self, text: str) -> Token:
        if self.tok.text != text or self.tok.kind not in ("op",):
            self.error(f"expected {text!r}, found {self.tok.text or 'end of input'!r}")
        return self.advance()

    def parse_map(self):
        stmts = [self.parse_stmt()]
        while self.tok.text == ";":
            self.advance()
            if self.tok.kind == "eof":
                break
            stmts.append(self.parse_stmt())
        if self.tok.kind != "eof":
            self.error(f"expected ';' or end of input, found {self.tok.text!r}")
        return stmts

    def parse_stmt(self):
        if self.tok.kind != "ident":
            self.error(f"expected component name, found {self.tok.text or 'end of input'!r}")
        name = self.advance()
        self.expect("=")
        return name, self.parse_expr()

    def parse_expr(self):
        node = self.parse_term()
        while self.tok.kind == "op" and self.tok.text in "+-":
            op = self.advance().text
            node = ("add" if op == "+" else "sub", node, self.parse_term())
        return node

    def parse_term(self):
        node = self.parse_factor()
        while self.tok.kind == "op" and self.tok.text == "*":
            self.advance()
            node = ("mul", node, self.parse_factor())
        return node

    def parse_factor(self):
        negate = False
        if self.tok.kind == "op" and self.tok.text == "-":
            self.advance()
            negate = True
        node = self.parse_base()
        if self.tok.kind == "op" and self.tok.text == "^":
            self.advance()
            if self.tok.kind != "int":
                self.error("exponent must be a non-negative integer literal")
            k = int(self.advance().text)
            if self.tok.kind == "op" and self.tok.text == "/":
                self.error("exponent must be a non-negative integer literal")
            node = ("pow", node, k)
        return ("neg", node) if negate else node

    def parse_base(self):
        tok = self.tok
        if tok.kind == "ident":
            self.advance()
            return ("var", tok.text, tok)
        if tok.kind == "int":
            self.advance()
            value = Fraction(int(tok.text))
            if self.tok.kind == "op" and self.tok.text == "/":
                self.advance()
                if self.tok.kind != "int":
                    self.error("expected integer denominator")
                den_tok = self.advance()
                den = int(den_tok.text)
                if den == 0:
                    self.error("zero denominator", den_tok)
                value /= den
            return ("num", value)
        if tok.kind == "float":
            self.error("floating-point literals are not supported; use a rational like 5/2")
        if tok.kind == "op" and tok.text == "(":
            self.advance()
            node = self.parse_expr()
            self.expect(")")
            return node
        self.error(f"expected identifier, number or '(', found {tok.text or 'end of input'!r}")


def _identifiers(node) -> list[Token]:
    kind = node[0]
    if kind == "var":
        return [node[2]]
    if kind == "num":
        return []
    if kind in ("neg", "pow"):
        return _identifiers(node[1])
    return _identifiers(node[1]) + _identifiers(node[2])


def _build(node, index: dict[str, int], nvars: int) -> Poly:
    kind = node[0]
    if kind == "num":
        return Poly.constant(node[1], nvars)
    if kind == "var":
        name, tok = node[1], node[2]
        if name not in index:
            raise ParseError(f"unknown identifier {name!r}", tok.line, tok.col)
        return Poly.variable(index[name], nvars)
    if kind == "neg":
        return -_build(node[1], index, nvars)
    if kind == "pow":
        return _build(node[1], index, nvars) ** node[2]
    a = _build(node[1], index, nvars)
    b = _build(node[2], index, nvars)
    if kind == "add":
        return a + b
    if kind == "sub":
        return a - b
    return a * b


def parse_poly(text: str, vars: Sequence[str] = ("x", "y")) -> Poly:
    """Parse a single expression over the declared variables."""
    p = _Parser(text)
    node = p.parse_expr()
    if p.tok.kind != "eof":
        p.error(f"unexpected {p.tok.text!r}")
    vars = tuple(vars)
    if len(set(vars)) != len(vars):
        raise ValueError("duplicate variable names")
    return _build(node, {v: i for i, v in enumerate(vars)}, len(vars))


@dataclass(frozen=True)
class MapSource:
    statements: tuple[tuple[str, object], ...]
    variables: tuple[str, ...]


def parse_source(text: str, vars: Sequence[str] | None = None) -> MapSource:
    stmts = _Parser(text).parse_map()
    seen: set[str] = set()
    for name_tok, _ in stmts:
        if name_tok.text in seen:
            raise ParseError(f"duplicate component {name_tok.text!r}", name_tok.line, name_tok.col)
        seen.add(name_tok.text)
    n = len(stmts)
    if vars is None:
        used = {t.text for _, e in stmts for t in _identifiers(e)}
        candidates = RESERVED_VARSETS.get(n, []) + [default_names(n)]
        vars = next((c for c in candidates if used <= set(c)), default_names(n))
    vars = tuple(vars)
    if len(vars) != n:
        raise ValueError(f"{n} components but {len(vars)} variables; a map must be square")
    return MapSource(tuple((t.text, e) for t, e in stmts), vars)


def parse_map(text: str, vars: Sequence[str] | None = None) -> PolyMap:
    """Parse ``f = ...; g = ...`` into a :class:`PolyMap`.

    Variables are auto-declared: ``x, y`` (or ``x1, x2`` / ``u, v``) for two
    components, ``x1..xn`` otherwise.
    """
    src = parse_source(text, vars)
    index = {v: i for i, v in enumerate(src.variables)}
    comps = tuple(_build(e, index, len(index)) for _, e in src.statements)
    return PolyMap(comps, tuple(name for name, _ in src.statements))


def map_variables(text: str) -> tuple[str, ...]:
    return parse_source(text).variables


# -- printing ---------------------------------------------------------------


def _format_coeff(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def _format_monomial(m: tuple[int, ...], names: Sequence[str]) -> str:
    parts = []
    for name, e in zip(names, m):
        if e == 1:
            parts.append(name)
        elif e > 1:
            parts.append(f"{name}^{e}")
    return "*".join(parts)


def print_poly(p: Poly, vars: Sequence[str] | None = None) -> str:
    """Canonical text in descending graded-lex order; ``parse_poly`` inverts it."""
    names = tuple(vars) if vars is not None else default_names(p.nvars)
    if p.is_zero():
        return "0"
    out = []
    for k, (m, c) in enumerate(p.terms):
        mono = _format_monomial(m, names)
        mag = abs(c)
        if not mono:
            body = _format_coeff(mag)
        elif mag == 1:
            body = mono
        else:
            body = f"{_format_coeff(mag)}*{mono}"
        if k == 0:
            out.append(f"-{body}" if c < 0 else body)
        else:
            out.append(f"- {body}" if c < 0 else f"+ {body}")
    return " ".join(out)


def print_map(F: PolyMap | Sequence[Poly], names: Sequence[str] | None = None,
              vars: Sequence[str] | None = None) -> str:
    comps = list(F.components if isinstance(F, PolyMap) else F)
    if names is None:
        names = (F.names if isinstance(F, PolyMap) and F.names else None)
    if names is None:
        names = ("f", "g") if len(comps) == 2 else tuple(f"f{i + 1}" for i in range(len(comps)))
    return ";\n".join(f"{n} = {print_poly(p, vars)}" for n, p in zip(names, comps)) + "\n"
