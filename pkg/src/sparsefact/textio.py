"""Polynomial text grammar.

    expr   := [('+'|'-')] term (('+'|'-') term)*
    term   := factor ('*' factor)*
    factor := base ('^' uint)?
    base   := int | ident | '(' expr ')'

Identifiers match ``[A-Za-z][A-Za-z0-9_]*``.  The optional leading sign on
``expr`` is accepted so that negative polynomials round-trip.
"""

import re

from .errors import PolySyntaxError
from .poly import EXPONENT_LIMIT, BiPoly, MultiPoly, to_text, to_text_bi

_TOKEN = re.compile(r"(\d+)|([A-Za-z][A-Za-z0-9_]*)|(.)", re.S)


def _tokenize(text):
    tokens = []
    line, line_start = 1, 0
    pos = 0
    n = len(text)
    while True:
        while pos < n and text[pos].isspace():
            if text[pos] == "\n":
                line += 1
                line_start = pos + 1
            pos += 1
        col = pos - line_start + 1
        if pos >= n:
            tokens.append(("end", None, line, col))
            return tokens
        m = _TOKEN.match(text, pos)
        if m.group(1) is not None:
            tokens.append(("int", int(m.group(1)), line, col))
        elif m.group(2) is not None:
            tokens.append(("ident", m.group(2), line, col))
        else:
            ch = m.group(3)
            if ch not in "+-*^()":
                raise PolySyntaxError(f"unexpected character {ch!r}", line, col)
            tokens.append((ch, ch, line, col))
        pos = m.end()


class _Parser:
    def __init__(self, tokens, variables):
        self.tokens = tokens
        self.i = 0
        self.variables = variables

    def peek(self):
        return self.tokens[self.i]

    def take(self, kind=None):
        tok = self.tokens[self.i]
        if kind is not None and tok[0] != kind:
            what = "end of input" if tok[0] == "end" else repr(tok[1])
            raise PolySyntaxError(f"expected {kind!r}, found {what}", tok[2], tok[3])
        self.i += 1
        return tok

    def expr(self):
        sign = 1
        if self.peek()[0] in ("+", "-"):
            sign = -1 if self.take()[0] == "-" else 1
        acc = self.term()
        if sign < 0:
            acc = -acc
        while self.peek()[0] in ("+", "-"):
            op = self.take()[0]
            rhs = self.term()
            acc = acc + rhs if op == "+" else acc - rhs
        return acc

    def term(self):
        acc = self.factor()
        while self.peek()[0] == "*":
            self.take()
            acc = acc * self.factor()
        return acc

    def factor(self):
        base = self.base()
        if self.peek()[0] == "^":
            self.take()
            tok = self.take("int")
            if tok[1] >= EXPONENT_LIMIT:
                raise PolySyntaxError("exponent overflow", tok[2], tok[3])
            base = base ** tok[1]
        return base

    def base(self):
        tok = self.peek()
        if tok[0] == "int":
            self.take()
            return MultiPoly.constant(self.variables, tok[1])
        if tok[0] == "ident":
            self.take()
            return MultiPoly.variable(self.variables, tok[1])
        if tok[0] == "(":
            self.take()
            inner = self.expr()
            self.take(")")
            return inner
        what = "end of input" if tok[0] == "end" else repr(tok[1])
        raise PolySyntaxError(f"unexpected {what}", tok[2], tok[3])


def parse(text, variables=None):
    """Parse polynomial text into a canonical MultiPoly.

    Variables are ordered by first appearance unless ``variables`` is given;
    identifiers missing from an explicit list are appended in appearance order.
    """
    tokens = _tokenize(text)
    names = list(variables or ())
    for kind, value, _, _ in tokens:
        if kind == "ident" and value not in names:
            names.append(value)
    parser = _Parser(tokens, tuple(names))
    result = parser.expr()
    tok = parser.peek()
    if tok[0] != "end":
        raise PolySyntaxError(f"unexpected {tok[1]!r}", tok[2], tok[3])
    return result


def format_poly(p):
    if isinstance(p, BiPoly):
        return to_text_bi(p)
    return to_text(p)


def parse_bivariate(text):
    """Parse text in the variables x and t into a BiPoly."""
    p = parse(text, ("x", "t"))
    if p.variables != ("x", "t"):
        extra = [v for v in p.variables if v not in ("x", "t")]
        raise PolySyntaxError(f"unexpected variables {extra}", 1, 1)
    return BiPoly.from_dict({e: c for e, c in p.terms})
