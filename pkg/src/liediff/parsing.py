"""Recursive-descent parsers for field, operator, and normal-polynomial
expressions.

Shared grammar:

    expr   := ('+'|'-')? term (('+'|'-') term)*
    term   := factor (('*'|'/') factor)*
    factor := atom ('^' nonneg-integer)?
    atom   := integer | variable | '(' expr ')'

Operator expressions extend the atom with derivation symbols D1, D2, ...;
'*' is noncommutative composition there and '^' on a derivation repeats it.
Normal-polynomial expressions add X[i1,...,in] atoms, and treat any
identifier that is not a declared field variable as a placeholder slot.
'^' binds tighter than '*' and '/' (so 3/2^2 is 3/4), and division requires a
coefficient-only divisor in the operator and normal-polynomial grammars.
"""

from __future__ import annotations

import re
from typing import NamedTuple

from .errors import ExprSyntaxError, UnknownDerivation, UnknownVariable
from .field import RatFunc
from .lie import Presentation
from .normalpoly import NormalPoly
from .ops import OpWord


class _Tok(NamedTuple):
    kind: str  # "int", "name", or the punctuation itself
    text: str
    pos: int


_TOKEN = re.compile(r"(\d+)|([A-Za-z_][A-Za-z_0-9]*)|([\^+\-*/()\[\],])|(\S)")


def _tokenize(text: str) -> list[_Tok]:
    out = []
    for m in _TOKEN.finditer(text):
        if m.group(4):
            raise ExprSyntaxError(f"unexpected character '{m.group(4)}'", m.start())
        if m.group(1):
            out.append(_Tok("int", m.group(1), m.start()))
        elif m.group(2):
            out.append(_Tok("name", m.group(2), m.start()))
        else:
            out.append(_Tok(m.group(3), m.group(3), m.start()))
    out.append(_Tok("end", "", len(text)))
    return out


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.toks = _tokenize(text)
        self.i = 0

    def peek(self) -> _Tok:
        return self.toks[self.i]

    def take(self, kind: str | None = None) -> _Tok:
        tok = self.toks[self.i]
        if kind is not None and tok.kind != kind:
            raise ExprSyntaxError(
                f"expected {kind}, found '{tok.text or 'end of input'}'", tok.pos
            )
        self.i += 1
        return tok

    def parse(self):
        v = self.expr()
        tok = self.peek()
        if tok.kind != "end":
            raise ExprSyntaxError(f"unexpected token '{tok.text}'", tok.pos)
        return v

    def expr(self):
        neg = False
        if self.peek().kind in ("+", "-"):
            neg = self.take().kind == "-"
        v = self.term()
        if neg:
            v = -v
        while self.peek().kind in ("+", "-"):
            op = self.take().kind
            t = self.term()
            v = v - t if op == "-" else v + t
        return v

    def term(self):
        v = self.factor()
        while self.peek().kind in ("*", "/"):
            tok = self.take()
            f = self.factor()
            v = v * f if tok.kind == "*" else self.divide(v, f, tok.pos)
        return v

    def factor(self):
        a = self.atom()
        if self.peek().kind == "^":
            self.take()
            k = int(self.take("int").text)
            a = a**k
        return a

    def atom(self):
        raise NotImplementedError

    def divide(self, v, f, pos):
        return v / f


class _FieldParser(_Parser):
    def __init__(self, text: str, vars: tuple[str, ...]):
        super().__init__(text)
        self.vars = vars

    def atom(self):
        tok = self.peek()
        if tok.kind == "int":
            self.take()
            return RatFunc.const(self.vars, int(tok.text))
        if tok.kind == "name":
            self.take()
            if tok.text not in self.vars:
                raise UnknownVariable(
                    f"variable '{tok.text}' is not declared (offset {tok.pos})"
                )
            return RatFunc.variable(self.vars, tok.text)
        if tok.kind == "(":
            self.take()
            v = self.expr()
            self.take(")")
            return v
        raise ExprSyntaxError(f"unexpected token '{tok.text or 'end of input'}'", tok.pos)


_DSYM = re.compile(r"^D(\d+)$")


class _OperatorParser(_Parser):
    def __init__(self, text: str, pres: Presentation):
        super().__init__(text)
        self.pres = pres

    def atom(self):
        tok = self.peek()
        vars, n = self.pres.vars, self.pres.n
        if tok.kind == "int":
            self.take()
            return OpWord.coefficient(RatFunc.const(vars, int(tok.text)), n)
        if tok.kind == "name":
            self.take()
            m = _DSYM.match(tok.text)
            if m:
                k = int(m.group(1))
                if not 1 <= k <= n:
                    raise UnknownDerivation(
                        f"derivation D{k} not in D1..D{n} (offset {tok.pos})"
                    )
                return OpWord.derivation(vars, n, k)
            if tok.text not in vars:
                raise UnknownVariable(
                    f"variable '{tok.text}' is not declared (offset {tok.pos})"
                )
            return OpWord.coefficient(RatFunc.variable(vars, tok.text), n)
        if tok.kind == "(":
            self.take()
            v = self.expr()
            self.take(")")
            return v
        raise ExprSyntaxError(f"unexpected token '{tok.text or 'end of input'}'", tok.pos)

    def divide(self, v, f, pos):
        if f.has_symbols():
            raise ExprSyntaxError("cannot divide by a differential operator", pos)
        total = RatFunc.zero(self.pres.vars)
        for term in f.terms:
            c = RatFunc.const(self.pres.vars, 1)
            for fac in term:
                c = c * fac
            total = total + c
        one = RatFunc.const(self.pres.vars, 1)
        return v * OpWord.coefficient(one / total, self.pres.n)


class _NormalPolyParser(_Parser):
    def __init__(self, text: str, pres: Presentation):
        super().__init__(text)
        self.pres = pres

    def atom(self):
        tok = self.peek()
        vars, n = self.pres.vars, self.pres.n
        if tok.kind == "int":
            self.take()
            return NormalPoly.const(vars, n, RatFunc.const(vars, int(tok.text)))
        if tok.kind == "name":
            self.take()
            if tok.text == "X" and self.peek().kind == "[":
                self.take()
                idx = [int(self.take("int").text)]
                while self.peek().kind == ",":
                    self.take()
                    idx.append(int(self.take("int").text))
                self.take("]")
                return NormalPoly.xvar(vars, n, tuple(idx))
            if tok.text in vars:
                return NormalPoly.const(vars, n, RatFunc.variable(vars, tok.text))
            return NormalPoly.slot(vars, n, tok.text)
        if tok.kind == "(":
            self.take()
            v = self.expr()
            self.take(")")
            return v
        raise ExprSyntaxError(f"unexpected token '{tok.text or 'end of input'}'", tok.pos)

    def divide(self, v, f, pos):
        if f.x_support() or f.slots():
            raise ExprSyntaxError("cannot divide by a normal-polynomial variable", pos)
        c = f.terms.get((), RatFunc.zero(self.pres.vars))
        one = RatFunc.const(self.pres.vars, 1)
        return v.scale(one / c)


def parse_field_expr(text: str, vars) -> RatFunc:
    """Parse a field expression over the declared variables."""
    return _FieldParser(text, tuple(vars)).parse()


def parse_operator_expr(text: str, pres: Presentation) -> OpWord:
    """Parse an operator expression, preserving composition order."""
    return _OperatorParser(text, pres).parse()


def parse_normalpoly_expr(text: str, pres: Presentation) -> NormalPoly:
    """Parse a normal-polynomial expression; undeclared identifiers become
    placeholder slots."""
    return _NormalPolyParser(text, pres).parse()
