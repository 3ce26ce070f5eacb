import random
from fractions import Fraction
from itertools import product

import pytest

from liediff import (
    NonConstantStructureConstants,
    RatFunc,
    StructureConstants,
    check_presentation,
    derive,
    validate_antisymmetry,
    validate_jacobi,
)
from conftest import make_presentation, rand_ratfunc


def const_table(n, items):
    vars = ()
    entries = {
        key: RatFunc.const(vars, v) for key, v in items.items()
    }
    return StructureConstants.from_entries(n, vars, entries)


def sl2_table():
    # basis order H, E, F: [H,E] = 2E, [H,F] = -2F, [E,F] = H
    items = {(1, 2, 2): 2, (1, 3, 3): -2, (2, 3, 1): 1}
    items.update({(l, k, m): -v for (k, l, m), v in list(items.items())})
    return const_table(3, items)


def sl2_perturbed_table():
    # same but [E,F] = E
    items = {(1, 2, 2): 2, (1, 3, 3): -2, (2, 3, 2): 1}
    items.update({(l, k, m): -v for (k, l, m), v in list(items.items())})
    return const_table(3, items)


def brute_force_jacobi(alpha) -> dict:
    """Oracle: expand [[e_k,e_l],e_m] + [[e_l,e_m],e_k] + [[e_m,e_k],e_l] for
    every index triple using only the bilinear bracket table; returns the
    nonzero cyclic sums keyed by (k, l, m)."""
    n = alpha.n

    def bracket(u, v):
        out = [Fraction(0)] * n
        for a in range(n):
            if not u[a]:
                continue
            for b in range(n):
                if not v[b]:
                    continue
                for m in range(n):
                    out[m] += u[a] * v[b] * alpha.get(a + 1, b + 1, m + 1).const_value()
        return out

    basis = [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    bad = {}
    for k, l, m in product(range(n), repeat=3):
        s = bracket(bracket(basis[k], basis[l]), basis[m])
        t = bracket(bracket(basis[l], basis[m]), basis[k])
        u = bracket(bracket(basis[m], basis[k]), basis[l])
        total = [a + b + c for a, b, c in zip(s, t, u)]
        if any(total):
            bad[(k + 1, l + 1, m + 1)] = total
    return bad


class TestAntisymmetry:
    def test_abelian_passes(self):
        assert validate_antisymmetry(const_table(2, {})) == []

    def test_forced_pair_passes(self):
        assert validate_antisymmetry(const_table(2, {(1, 2, 1): 1, (2, 1, 1): -1})) == []

    def test_violation_reported(self):
        report = validate_antisymmetry(const_table(2, {(1, 2, 1): 1, (2, 1, 1): 1}))
        assert len(report) == 1
        assert "(1,2,1)" in report[0].where

    def test_nonzero_diagonal_reported(self):
        report = validate_antisymmetry(const_table(2, {(1, 1, 2): 1}))
        assert len(report) == 1


class TestJacobi:
    def test_abelian_passes(self):
        assert validate_jacobi(const_table(3, {})) == []

    def test_sl2_oracle_and_validator_agree(self):
        table = sl2_table()
        assert brute_force_jacobi(table) == {}
        assert validate_jacobi(table) == []

    def test_perturbed_sl2_fails_with_frozen_residual(self):
        table = sl2_perturbed_table()
        bad = brute_force_jacobi(table)
        assert bad, "oracle must also reject the perturbed table"
        # cyclic sum at (H, E, F) is -2 in the E slot
        assert bad[(1, 2, 3)] == [Fraction(0), Fraction(-2), Fraction(0)]
        report = validate_jacobi(table)
        assert any(
            "(1,2,3;2)" in v.where and v.residual == RatFunc.const((), -2)
            for v in report
        )

    def test_nonconstant_rejected(self):
        vars = ("x",)
        x = RatFunc.variable(vars, "x")
        table = StructureConstants.from_entries(2, vars, {(1, 2, 1): x, (2, 1, 1): -x})
        with pytest.raises(NonConstantStructureConstants):
            validate_jacobi(table)

    def test_reports_independent_of_entry_order(self):
        items = {(1, 2, 2): 2, (1, 3, 3): -2, (2, 3, 2): 1}
        items.update({(l, k, m): -v for (k, l, m), v in list(items.items())})
        forward = const_table(3, dict(items))
        backward = const_table(3, dict(reversed(list(items.items()))))
        assert validate_jacobi(forward) == validate_jacobi(backward)
        assert validate_antisymmetry(forward) == validate_antisymmetry(backward)


class TestCheckPresentation:
    def test_p1_passes(self, p1):
        assert check_presentation(p1) == []

    def test_p1_with_zero_alpha_fails(self):
        bad = make_presentation(("x", "y"), [("1", "0"), ("x", "1")], {})
        report = check_presentation(bad)
        assert len(report) == 1
        v = report[0]
        assert "(k,l)=(1,2)" in v.where and "variable x" in v.where
        assert v.residual == RatFunc.const(("x", "y"), 1)

    def test_single_derivation_passes(self):
        p = make_presentation(("x",), [("x^2",)], {})
        assert check_presentation(p) == []

    def test_nonconstant_alpha_presentation_passes(self, p_nc):
        assert check_presentation(p_nc) == []

    def test_heisenberg_passes(self, p_heis):
        assert check_presentation(p_heis) == []


class TestGeneratorSufficiency:
    @pytest.mark.parametrize("fixture", ["p1", "p_nc", "p_heis"])
    def test_bracket_holds_on_random_elements(self, fixture, request):
        # equality on generators extends to the whole field: both sides are
        # derivations applied to f
        p = request.getfixturevalue(fixture)
        rng = random.Random(hash(fixture) % 1000)
        for _ in range(15):
            f = rand_ratfunc(rng, p.vars, deg=2, den_deg=1)
            for k in range(1, p.n + 1):
                for l in range(k + 1, p.n + 1):
                    lhs = derive(p.derivation(k), derive(p.derivation(l), f)) - derive(
                        p.derivation(l), derive(p.derivation(k), f)
                    )
                    rhs = RatFunc.zero(p.vars)
                    for m in range(1, p.n + 1):
                        c = p.alpha.get(k, l, m)
                        if not c.is_zero():
                            rhs = rhs + c * derive(p.derivation(m), f)
                    assert lhs == rhs
