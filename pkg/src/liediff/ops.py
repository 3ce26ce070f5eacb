"""The skew algebra of differential operators and its normal-ordering engine.

An operator word is a sum of composition terms; each term is a sequence of
factors, where a factor is either a field coefficient (acting by
multiplication) or a derivation index.  Factors compose left to right, the
rightmost factor acting first.  Normal ordering rewrites every term into the
form c * D1^i1 * ... * Dn^in using two rules:

  R1:  D_k * c      ->  c * D_k  +  D_k(c)
  R2:  D_k * D_l    ->  D_l * D_k + sum_m alpha[k,l,m] * D_m      (k > l)

Both rules preserve the operator's action on the field, so applying the
normal form to any element agrees with applying the original word.  Each
rewrite strictly decreases the measure (number of derivation factors, number
of out-of-order derivation pairs, number of coefficients standing right of a
derivation), which forces termination; the engine asserts the decrease at
every step.
"""

from __future__ import annotations

from typing import Iterable, Union

from .errors import ArityMismatch, UnknownDerivation, UnknownVariable
from .field import RatFunc, derive, join_signed, needs_product_parens
from .lie import Presentation

#: A factor of a composition term: a derivation index (1-based) or a coefficient.
Factor = Union[int, RatFunc]


def _check_factors(term, vars, n) -> tuple:
    out = []
    for f in term:
        if isinstance(f, int):
            if not 1 <= f <= n:
                raise UnknownDerivation(f"derivation index {f} not in 1..{n}")
        elif isinstance(f, RatFunc):
            if f.vars != vars:
                raise UnknownVariable("coefficient over a different variable tuple")
        else:
            raise TypeError(f"bad factor {f!r}")
        out.append(f)
    return tuple(out)


class OpWord:
    """Unnormalized sum of composition words with interleaved coefficients."""

    __slots__ = ("vars", "n", "terms")

    def __init__(self, vars: Iterable[str], n: int, terms: Iterable):
        self.vars = tuple(vars)
        self.n = n
        self.terms = tuple(_check_factors(t, self.vars, n) for t in terms)

    @classmethod
    def zero(cls, vars, n: int) -> "OpWord":
        return cls(vars, n, [])

    @classmethod
    def identity(cls, vars, n: int) -> "OpWord":
        return cls(vars, n, [()])

    @classmethod
    def coefficient(cls, c: RatFunc, n: int) -> "OpWord":
        return cls(c.vars, n, [(c,)])

    @classmethod
    def derivation(cls, vars, n: int, k: int) -> "OpWord":
        return cls(vars, n, [(k,)])

    def _require_compat(self, other: "OpWord") -> None:
        if self.vars != other.vars or self.n != other.n:
            raise ArityMismatch("operator words over different presentations")

    def __add__(self, other: "OpWord") -> "OpWord":
        self._require_compat(other)
        return OpWord(self.vars, self.n, self.terms + other.terms)

    def __neg__(self) -> "OpWord":
        minus_one = RatFunc.const(self.vars, -1)
        return OpWord(self.vars, self.n, [(minus_one,) + t for t in self.terms])

    def __sub__(self, other: "OpWord") -> "OpWord":
        return self + (-other)

    def __mul__(self, other: "OpWord") -> "OpWord":
        self._require_compat(other)
        return OpWord(
            self.vars, self.n, [a + b for a in self.terms for b in other.terms]
        )

    def __pow__(self, k: int) -> "OpWord":
        assert k >= 0
        out = OpWord.identity(self.vars, self.n)
        for _ in range(k):
            out = out * self
        return out

    def has_symbols(self) -> bool:
        return any(isinstance(f, int) for t in self.terms for f in t)

    def __repr__(self) -> str:
        return f"OpWord({self.terms!r})"


class NormalOperator:
    """Finite sum of normal-ordered monomials: multi-index -> coefficient."""

    __slots__ = ("vars", "n", "terms")

    def __init__(self, vars: Iterable[str], n: int, terms: dict):
        self.vars = tuple(vars)
        self.n = n
        clean = {}
        for I, c in terms.items():
            I = tuple(I)
            if len(I) != n:
                raise ArityMismatch(f"multi-index {I} has arity != {n}")
            if not c.is_zero():
                clean[I] = c
        self.terms = clean

    @classmethod
    def zero(cls, vars, n: int) -> "NormalOperator":
        return cls(vars, n, {})

    @classmethod
    def identity(cls, vars, n: int) -> "NormalOperator":
        vars = tuple(vars)
        return cls(vars, n, {(0,) * n: RatFunc.const(vars, 1)})

    @classmethod
    def monomial(cls, vars, n: int, I, c: RatFunc) -> "NormalOperator":
        return cls(vars, n, {tuple(I): c})

    @classmethod
    def first_order(cls, coeffs, n: int) -> "NormalOperator":
        vars = coeffs[0].vars
        terms = {}
        for i, c in enumerate(coeffs):
            e = tuple(1 if j == i else 0 for j in range(n))
            terms[e] = c
        return cls(vars, n, terms)

    def _require_compat(self, other: "NormalOperator") -> None:
        if self.vars != other.vars or self.n != other.n:
            raise ArityMismatch("operators over different presentations")

    def __add__(self, other: "NormalOperator") -> "NormalOperator":
        self._require_compat(other)
        t = dict(self.terms)
        for I, c in other.terms.items():
            s = t.get(I)
            s = c if s is None else s + c
            if s.is_zero():
                t.pop(I, None)
            else:
                t[I] = s
        return NormalOperator(self.vars, self.n, t)

    def __neg__(self) -> "NormalOperator":
        return NormalOperator(self.vars, self.n, {I: -c for I, c in self.terms.items()})

    def __sub__(self, other: "NormalOperator") -> "NormalOperator":
        return self + (-other)

    def is_zero(self) -> bool:
        return not self.terms

    def to_word(self) -> OpWord:
        terms = [(c,) + _symbols(I) for I, c in self.terms.items()]
        return OpWord(self.vars, self.n, terms)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, NormalOperator)
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
        for I in sorted(self.terms, key=lambda e: (sum(e), e), reverse=True):
            c = self.terms[I]
            mon = "*".join(
                f"D{k + 1}" if p == 1 else f"D{k + 1}^{p}"
                for k, p in enumerate(I)
                if p
            )
            neg = c.negative_lead()
            a = -c if neg else c
            if mon:
                if a.is_one():
                    body = mon
                else:
                    cs = str(a)
                    if needs_product_parens(a):
                        cs = f"({cs})"
                    body = f"{cs}*{mon}"
            else:
                body = f"({a})" if needs_product_parens(a) else str(a)
            parts.append((neg, body))
        return join_signed(parts)

    def __repr__(self) -> str:
        return f"NormalOperator({self})"


def _symbols(I) -> tuple[int, ...]:
    out: tuple[int, ...] = ()
    for k, p in enumerate(I):
        out += (k + 1,) * p
    return out


def _measure(term) -> tuple[int, int, int]:
    syms = [f for f in term if isinstance(f, int)]
    inversions = sum(
        1
        for i in range(len(syms))
        for j in range(i + 1, len(syms))
        if syms[i] > syms[j]
    )
    pending = 0
    seen = 0
    for f in term:
        if isinstance(f, int):
            seen += 1
        else:
            pending += seen
    return (len(syms), inversions, pending)


def _redexes(term):
    for i in range(len(term) - 1):
        a, b = term[i], term[i + 1]
        if isinstance(a, int):
            if not isinstance(b, int):
                yield i
            elif a > b:
                yield i


def _rewrite_at(term, i, p: Presentation):
    a, b = term[i], term[i + 1]
    head, tail = term[:i], term[i + 2 :]
    out = [head + (b, a) + tail]
    if isinstance(b, int):
        # R2: swap out-of-order derivations, emit the bracket correction
        for m in range(1, p.n + 1):
            c = p.alpha.get(a, b, m)
            if not c.is_zero():
                out.append(head + (c, m) + tail)
    else:
        # R1: move the coefficient left, emit its derivative
        db = derive(p.derivation(a), b)
        if not db.is_zero():
            out.append(head + (db,) + tail)
    return out


def _collect(term, vars, n) -> tuple[tuple[int, ...], RatFunc]:
    I = [0] * n
    c = RatFunc.const(vars, 1)
    prev = 0
    for f in term:
        if isinstance(f, int):
            assert f >= prev, "term is not normal-ordered"
            prev = f
            I[f - 1] += 1
        else:
            c = c * f
    return tuple(I), c


def normalize(w: OpWord, p: Presentation, strategy: str = "leftmost", stats: dict | None = None) -> NormalOperator:
    """Rewrite a word into its unique normal-ordered form.

    ``strategy`` selects which redex fires first ("leftmost" or "rightmost");
    the result must not depend on it.  ``stats``, when given, receives the
    number of rewrite steps under the key "steps".
    """
    if strategy not in ("leftmost", "rightmost"):
        raise ValueError(f"unknown strategy '{strategy}'")
    if w.vars != p.vars:
        raise UnknownVariable("word and presentation declare different variables")
    if w.n != p.n:
        raise UnknownDerivation("word arity differs from the presentation")
    acc: dict[tuple[int, ...], RatFunc] = {}
    stack = list(w.terms)
    steps = 0
    while stack:
        term = stack.pop()
        positions = list(_redexes(term))
        if not positions:
            I, c = _collect(term, w.vars, w.n)
            if not c.is_zero():
                s = acc.get(I)
                s = c if s is None else s + c
                if s.is_zero():
                    acc.pop(I, None)
                else:
                    acc[I] = s
            continue
        i = positions[0] if strategy == "leftmost" else positions[-1]
        steps += 1
        before = _measure(term)
        for child in _rewrite_at(term, i, p):
            assert _measure(child) < before, "rewrite did not decrease the measure"
            stack.append(child)
    if stats is not None:
        stats["steps"] = steps
    return NormalOperator(w.vars, w.n, acc)


def op_add(a: NormalOperator, b: NormalOperator) -> NormalOperator:
    return a + b


def op_mul(a: NormalOperator, b: NormalOperator, p: Presentation) -> NormalOperator:
    """Normal form of the composition a after b."""
    a._require_compat(b)
    terms = []
    for I, c in a.terms.items():
        for J, d in b.terms.items():
            terms.append((c,) + _symbols(I) + (d,) + _symbols(J))
    return normalize(OpWord(a.vars, a.n, terms), p)


def op_commutator(a: NormalOperator, b: NormalOperator, p: Presentation) -> NormalOperator:
    return op_mul(a, b, p) - op_mul(b, a, p)


def apply_operator(a: NormalOperator | OpWord, f: RatFunc, p: Presentation) -> RatFunc:
    """Apply an operator to a field element by repeated derivation."""
    if f.vars != p.vars:
        raise UnknownVariable("argument over a different variable tuple")
    out = RatFunc.zero(p.vars)
    if isinstance(a, OpWord):
        if a.n != p.n:
            raise UnknownDerivation("word arity differs from the presentation")
        for term in a.terms:
            g = f
            for fac in reversed(term):
                if isinstance(fac, int):
                    g = derive(p.derivation(fac), g)
                else:
                    g = fac * g
            out = out + g
        return out
    for I, c in a.terms.items():
        g = f
        for k in range(p.n, 0, -1):
            for _ in range(I[k - 1]):
                g = derive(p.derivation(k), g)
        out = out + c * g
    return out


def first_order_commutator(u, v, p: Presentation):
    """Coefficient vector of the bracket of two first-order operators.

    For U = sum_i u[i] D_i and V = sum_i v[i] D_i the bracket [U, V] is again
    first order, with j-th coefficient
    sum_i (u[i] D_i(v[j]) - v[i] D_i(u[j])) + sum_{r,s} u[r] v[s] alpha[r,s,j].
    """
    if len(u) != p.n or len(v) != p.n:
        raise ArityMismatch("coefficient vectors must have one slot per derivation")
    out = []
    for j in range(p.n):
        w = RatFunc.zero(p.vars)
        for i in range(p.n):
            w = w + u[i] * derive(p.derivations[i], v[j])
            w = w - v[i] * derive(p.derivations[i], u[j])
        for r in range(1, p.n + 1):
            for s in range(1, p.n + 1):
                c = p.alpha.get(r, s, j + 1)
                if not c.is_zero():
                    w = w + u[r - 1] * v[s - 1] * c
        out.append(w)
    return out
