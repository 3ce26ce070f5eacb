"""The ring of normal polynomials and its induced derivation action.

A normal polynomial lives in finitely many variables X_I, one per
multi-index I, with field coefficients; X_I stands for the normal-ordered
derivative word D1^i1 * ... * Dn^in applied to a generic element.  The
derivation action on X_I is read off by normal-ordering D_i composed with
that word, and evaluation at a concrete witness b replaces X_I by the actual
iterated derivative of b.

Polynomials may also carry placeholder slots: identifiers that are not
declared field variables.  Slots behave as ordinary extra polynomial
variables and must be substituted away before evaluation.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import (
    ArityMismatch,
    TruncationExceeded,
    UnboundSlot,
    UnknownDerivation,
)
from .field import RatFunc, derive, join_signed, needs_product_parens
from .lie import Presentation
from .ops import NormalOperator, OpWord, apply_operator, normalize

# A generator is a multi-index (tuple of ints) for X_I or a string for a slot.


def _natkey(name: str):
    return tuple(
        (0, int(s)) if s.isdigit() else (1, s)
        for s in re.split(r"(\d+)", name)
        if s
    )


def _genkey(g):
    if isinstance(g, str):
        return (0, _natkey(g))
    return (1, (sum(g), g))


def _mono_mul(a, b):
    d = dict(a)
    for g, e in b:
        d[g] = d.get(g, 0) + e
    return tuple(sorted(d.items(), key=lambda ge: _genkey(ge[0])))


def _mono_degree(m) -> int:
    return sum(e for _, e in m)


class NormalPoly:
    """Polynomial in the X_I (and optional slots) over field coefficients."""

    __slots__ = ("vars", "n", "terms")

    def __init__(self, vars: Iterable[str], n: int, terms: dict):
        self.vars = tuple(vars)
        self.n = n
        clean = {}
        for m, c in terms.items():
            m = tuple(sorted(((g, e) for g, e in m if e), key=lambda ge: _genkey(ge[0])))
            for g, _ in m:
                if not isinstance(g, str) and len(g) != n:
                    raise ArityMismatch(f"multi-index {g} has arity != {n}")
            if not c.is_zero():
                prev = clean.get(m)
                c = c if prev is None else prev + c
                if c.is_zero():
                    clean.pop(m, None)
                    continue
                clean[m] = c
        self.terms = clean

    # -- constructors -----------------------------------------------------

    @classmethod
    def zero(cls, vars, n: int) -> "NormalPoly":
        return cls(vars, n, {})

    @classmethod
    def const(cls, vars, n: int, c: RatFunc) -> "NormalPoly":
        return cls(vars, n, {(): c})

    @classmethod
    def xvar(cls, vars, n: int, I) -> "NormalPoly":
        vars = tuple(vars)
        return cls(vars, n, {((tuple(I), 1),): RatFunc.const(vars, 1)})

    @classmethod
    def slot(cls, vars, n: int, name: str) -> "NormalPoly":
        vars = tuple(vars)
        return cls(vars, n, {((name, 1),): RatFunc.const(vars, 1)})

    # -- structure ----------------------------------------------------------

    def x_support(self) -> set:
        return {g for m in self.terms for g, _ in m if not isinstance(g, str)}

    def slots(self) -> set:
        return {g for m in self.terms for g, _ in m if isinstance(g, str)}

    def order(self) -> int:
        return max((sum(g) for g in self.x_support()), default=0)

    def is_zero(self) -> bool:
        return not self.terms

    # -- ring operations -------------------------------------------------------

    def _require_compat(self, other: "NormalPoly") -> None:
        if self.vars != other.vars or self.n != other.n:
            raise ArityMismatch("normal polynomials over different presentations")

    def __add__(self, other: "NormalPoly") -> "NormalPoly":
        self._require_compat(other)
        t = dict(self.terms)
        for m, c in other.terms.items():
            s = t.get(m)
            s = c if s is None else s + c
            if s.is_zero():
                t.pop(m, None)
            else:
                t[m] = s
        return NormalPoly(self.vars, self.n, t)

    def __neg__(self) -> "NormalPoly":
        return NormalPoly(self.vars, self.n, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other: "NormalPoly") -> "NormalPoly":
        return self + (-other)

    def __mul__(self, other: "NormalPoly") -> "NormalPoly":
        self._require_compat(other)
        t: dict = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = _mono_mul(m1, m2)
                c = c1 * c2
                s = t.get(m)
                s = c if s is None else s + c
                t[m] = s
        return NormalPoly(self.vars, self.n, t)

    def scale(self, c: RatFunc) -> "NormalPoly":
        return NormalPoly(self.vars, self.n, {m: k * c for m, k in self.terms.items()})

    def __pow__(self, k: int) -> "NormalPoly":
        assert k >= 0
        out = NormalPoly.const(self.vars, self.n, RatFunc.const(self.vars, 1))
        for _ in range(k):
            out = out * self
        return out

    # -- comparison / display ----------------------------------------------------

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, NormalPoly)
            and self.vars == other.vars
            and self.n == other.n
            and self.terms == other.terms
        )

    def __hash__(self) -> int:
        return hash((self.vars, self.n, frozenset(self.terms.items())))

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        order = sorted(
            self.terms,
            key=lambda m: (_mono_degree(m), tuple((_genkey(g), e) for g, e in m)),
            reverse=True,
        )
        for m in order:
            c = self.terms[m]
            gens = "*".join(
                (g if isinstance(g, str) else "X[" + ",".join(map(str, g)) + "]")
                + (f"^{e}" if e > 1 else "")
                for g, e in m
            )
            neg = c.negative_lead()
            a = -c if neg else c
            if gens:
                if a.is_one():
                    body = gens
                else:
                    cs = str(a)
                    if needs_product_parens(a):
                        cs = f"({cs})"
                    body = f"{cs}*{gens}"
            else:
                body = f"({a})" if needs_product_parens(a) else str(a)
            parts.append((neg, body))
        return join_signed(parts)

    def __repr__(self) -> str:
        return f"NormalPoly({self})"


def x_action(i: int, I, p: Presentation) -> NormalPoly:
    """Image of the variable X_I under D_i: normal-order D_i * D^I and read
    the result back as a linear normal polynomial."""
    if not 1 <= i <= p.n:
        raise UnknownDerivation(f"derivation index {i} not in 1..{p.n}")
    word = (i,) + tuple(k + 1 for k, e in enumerate(I) for _ in range(e))
    nop = normalize(OpWord(p.vars, p.n, [word]), p)
    out = NormalPoly.zero(p.vars, p.n)
    for J, c in nop.terms.items():
        out = out + NormalPoly.xvar(p.vars, p.n, J).scale(c)
    return out


def derive_normal(i: int, q: NormalPoly, p: Presentation) -> NormalPoly:
    """Extend the derivation D_i to normal polynomials: derive coefficients,
    act on the X_I through normal ordering, and apply Leibniz."""
    if not 1 <= i <= p.n:
        raise UnknownDerivation(f"derivation index {i} not in 1..{p.n}")
    return _derive_with(q, p, lambda I: x_action(i, I, p),
                        lambda c: derive(p.derivation(i), c))


def _derive_with(q: NormalPoly, p: Presentation, on_x, on_coeff) -> NormalPoly:
    out = NormalPoly.zero(q.vars, q.n)
    for m, c in q.terms.items():
        dc = on_coeff(c)
        if not dc.is_zero():
            out = out + NormalPoly(q.vars, q.n, {m: dc})
        for idx, (g, e) in enumerate(m):
            if isinstance(g, str):
                raise UnboundSlot(f"cannot differentiate placeholder slot '{g}'")
            rest = m[:idx] + ((g, e - 1),) + m[idx + 1 :]
            factor = NormalPoly(q.vars, q.n, {rest: c * RatFunc.const(q.vars, e)})
            out = out + factor * on_x(g)
    return out


def eval_hom(q: NormalPoly, b: RatFunc, p: Presentation) -> RatFunc:
    """Evaluation homomorphism: substitute X_I by the iterated derivative of
    the witness b, then evaluate in the base field."""
    slots = q.slots()
    if slots:
        raise UnboundSlot(f"unsubstituted slots {sorted(slots)}")
    cache: dict = {}

    def dvalue(I) -> RatFunc:
        v = cache.get(I)
        if v is None:
            one = RatFunc.const(p.vars, 1)
            v = apply_operator(NormalOperator.monomial(p.vars, p.n, I, one), b, p)
            cache[I] = v
        return v

    out = RatFunc.zero(p.vars)
    for m, c in q.terms.items():
        v = c
        for g, e in m:
            v = v * dvalue(g) ** e
        out = out + v
    return out


def substitute_slots(q: NormalPoly, values: dict) -> NormalPoly:
    """Replace slot generators by field elements; X variables are untouched."""
    out = NormalPoly.zero(q.vars, q.n)
    for m, c in q.terms.items():
        kept = []
        v = c
        for g, e in m:
            if isinstance(g, str):
                if g not in values:
                    raise UnboundSlot(f"no value supplied for slot '{g}'")
                v = v * values[g] ** e
            else:
                kept.append((g, e))
        out = out + NormalPoly(q.vars, q.n, {tuple(kept): v})
    return out


def axiom1_instance_check(
    q: NormalPoly, extra: Sequence[RatFunc], b: RatFunc, p: Presentation
) -> bool:
    """Check one instance of the nonvanishing scheme: fill the placeholder
    slots of q with the given field elements (in natural name order), evaluate
    at the candidate witness b, and test the result against zero."""
    names = sorted(q.slots(), key=_natkey)
    if len(extra) != len(names):
        raise ArityMismatch(
            f"{len(names)} slot(s) {names} but {len(extra)} value(s) supplied"
        )
    filled = substitute_slots(q, dict(zip(names, extra)))
    return not eval_hom(filled, b, p).is_zero()


def indices_up_to(n: int, d: int) -> list[tuple[int, ...]]:
    """All multi-indices of arity n and total order <= d, sorted by (order, lex)."""
    out: list[tuple[int, ...]] = [()]
    for _ in range(n):
        out = [I + (k,) for I in out for k in range(d + 1)]
    out = [I for I in out if sum(I) <= d]
    out.sort(key=lambda I: (sum(I), I))
    return out


@dataclass(frozen=True)
class TruncatedExtension:
    """Finite-order slice of the ring of normal polynomials over a base
    presentation: variables X_I for |I| <= order, derivation actions stored
    for |I| < order."""

    base: Presentation
    order: int
    actions: dict

    def variables(self) -> list[tuple[int, ...]]:
        return indices_up_to(self.base.n, self.order)

    def action(self, i: int, I) -> NormalPoly:
        if not 1 <= i <= self.base.n:
            raise UnknownDerivation(f"derivation index {i} not in 1..{self.base.n}")
        I = tuple(I)
        if sum(I) >= self.order:
            raise TruncationExceeded(
                f"D_{i}(X{list(I)}) needs order {sum(I) + 1} > bound {self.order}"
            )
        return self.actions[(i, I)]

    def derive(self, i: int, q: NormalPoly) -> NormalPoly:
        p = self.base
        if not 1 <= i <= p.n:
            raise UnknownDerivation(f"derivation index {i} not in 1..{p.n}")
        return _derive_with(q, p, lambda I: self.action(i, I),
                            lambda c: derive(p.derivation(i), c))


def fresh_extension(p: Presentation, d: int) -> TruncatedExtension:
    """Adjoin fresh variables X_I for |I| <= d with the induced derivation
    actions; the derivations act as linearly independent derivations because
    each D_i sends X_0 to the distinct fresh variable X_{e_i}."""
    if d < 1:
        raise ArityMismatch("order bound must be at least 1")
    actions = {}
    for I in indices_up_to(p.n, d - 1):
        for i in range(1, p.n + 1):
            actions[(i, I)] = x_action(i, I, p)
    return TruncatedExtension(p, d, actions)
