"""Element grammar shared by the command line and the tests.

    expr   := term ('+' term)*
    term   := factor ('*' factor)*
    factor := atom ('^' INT)?
    atom   := INT | NAME | '(' expr ')'

Names: ``t<i>`` (tau_i), ``x<i>`` (xi_i), ``xb<i>`` (conjugate of xi_i),
``tau``, ``rho`` and the extra classes of the preset. Integers are read mod 2.
"""

from __future__ import annotations

import re
from typing import List, NamedTuple, Optional

from wsteen.models.errors import ExpressionSyntaxError, InvalidArgument
from wsteen.models.milnor_dual import AElement, DualSteenrod

TOKEN = re.compile(r"\s*(?:(?P<int>\d+)|(?P<name>[A-Za-z_][A-Za-z_0-9]*)|(?P<op>[+*^()]))")
GENERATOR = re.compile(r"^(?P<kind>t|xb|x)(?P<index>\d+)$")


class Token(NamedTuple):
    kind: str
    text: str
    position: int


def tokenize(text: str) -> List[Token]:
    tokens = []
    pos = 0
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        match = TOKEN.match(text, pos)
        if not match or match.end() == pos:
            bad = text[pos:].lstrip()
            position = len(text) - len(bad)
            raise ExpressionSyntaxError("unexpected character", bad[:1], position)
        kind = match.lastgroup
        value = match.group(kind)
        tokens.append(Token(kind, value, match.start(kind)))
        pos = match.end()
    tokens.append(Token("end", "", len(text)))
    return tokens


class ExpressionParser:
    """Recursive-descent parser producing normal-form elements of A."""

    def __init__(self, algebra: DualSteenrod):
        self.algebra = algebra
        self._tokens: List[Token] = []
        self._pos = 0

    def parse(self, text: str) -> AElement:
        self._tokens = tokenize(text)
        self._pos = 0
        if self._peek().kind == "end":
            raise ExpressionSyntaxError("empty expression", "", 0)
        value = self._expr()
        tok = self._peek()
        if tok.kind != "end":
            raise ExpressionSyntaxError("unexpected token", tok.text, tok.position)
        return value

    def _peek(self) -> Token:
        return self._tokens[self._pos]

    def _take(self) -> Token:
        tok = self._tokens[self._pos]
        self._pos += 1
        return tok

    def _accept(self, op: str) -> Optional[Token]:
        tok = self._peek()
        if tok.kind == "op" and tok.text == op:
            return self._take()
        return None

    def _expr(self) -> AElement:
        value = self._term()
        while self._accept("+"):
            value = value + self._term()
        return value

    def _term(self) -> AElement:
        value = self._factor()
        while self._accept("*"):
            value = value * self._factor()
        return value

    def _factor(self) -> AElement:
        base = self._atom()
        if self._accept("^"):
            tok = self._take()
            if tok.kind != "int":
                raise ExpressionSyntaxError("expected an exponent", tok.text, tok.position)
            base = self.algebra.power(base, int(tok.text))
        return base

    def _atom(self) -> AElement:
        tok = self._take()
        if tok.kind == "int":
            return self.algebra.one() if int(tok.text) % 2 else self.algebra.zero()
        if tok.kind == "name":
            return self._name(tok)
        if tok.kind == "op" and tok.text == "(":
            value = self._expr()
            closing = self._take()
            if closing.kind != "op" or closing.text != ")":
                raise ExpressionSyntaxError("expected ')'", closing.text, closing.position)
            return value
        raise ExpressionSyntaxError("unexpected token", tok.text or "<end>", tok.position)

    def _name(self, tok: Token) -> AElement:
        A = self.algebra
        if tok.text == "tau":
            return A.tau()
        if tok.text == "rho":
            return A.rho()
        match = GENERATOR.match(tok.text)
        try:
            if match:
                index = int(match.group("index"))
                kind = match.group("kind")
                if kind == "t":
                    return A.tau_i(index)
                if kind == "x":
                    return A.xi(index)
                return A.xi_bar(index)
            if tok.text in A.preset.extra_classes:
                return A.km_class(tok.text)
        except InvalidArgument as exc:
            raise ExpressionSyntaxError(str(exc), tok.text, tok.position) from exc
        raise ExpressionSyntaxError("unknown token", tok.text, tok.position)


def parse_expr(algebra: DualSteenrod, text: str) -> AElement:
    return ExpressionParser(algebra).parse(text)
