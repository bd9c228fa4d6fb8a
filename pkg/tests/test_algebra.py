"""Element arithmetic for the four shift products, checked two ways:
exhaustively against dictionary oracles on small finite instances, and
through randomized group-law batteries on a pool of nested expressions.
"""

import itertools
import random

import pytest
from hypothesis import given, settings, strategies as st

import oracles
from torusdeform.algebra import (
    Cyclic,
    FreeAbelian,
    Product,
    ScaledZ,
    Trivial,
    WrCyc,
    WrCycPair,
    WrZ,
    WrZ2,
    central_quotient,
    canonical,
    check_shape,
    enumerate_truncated,
    identity,
    invert,
    is_central,
    iter_window,
    multiply,
    power,
    random_element,
    window_size,
)
from torusdeform.errors import NonCentralGarside, ShapeMismatch


class TestAgainstCayleyOracle:
    @pytest.mark.parametrize("k,n", [(2, 2), (2, 3), (3, 2), (3, 3)])
    def test_wrcyc_exhaustive(self, k, n):
        expr = WrCyc(Cyclic(k), n)
        orc = oracles.wrcyc_oracle(oracles.cyclic_dict_group(k), n)
        orc.validate_finite()
        els = orc.all_elements()
        assert sorted(enumerate_truncated(expr, 1)) == sorted(els)
        for x in els:
            assert invert(expr, x) == orc.inverse(x)
            for y in els:
                assert multiply(expr, x, y) == orc.multiply(x, y)

    @pytest.mark.parametrize("k,n", [(2, 2), (3, 2), (2, 3)])
    def test_wrz_window(self, k, n):
        expr = WrZ(Cyclic(k), n)
        orc = oracles.wrz_oracle(oracles.cyclic_dict_group(k), n)
        vecs = list(itertools.product(range(k), repeat=n))
        els = [(v, o) for v in vecs for o in range(-2, 3)]
        for x in els:
            assert invert(expr, x) == orc.inverse(x)
            for y in els:
                assert multiply(expr, x, y) == orc.multiply(x, y)

    def test_wrz2_sampled(self):
        expr = WrZ2(Cyclic(2), 2, 2)
        orc = oracles.wrz2_oracle(oracles.cyclic_dict_group(2), 2, 2)
        vecs = list(itertools.product(range(2), repeat=4))
        outers = list(itertools.product(range(-2, 3), repeat=2))
        els = [(v, o) for v in vecs for o in outers]
        rng = random.Random(41)
        for _ in range(4000):
            x, y = rng.choice(els), rng.choice(els)
            assert multiply(expr, x, y) == orc.multiply(x, y)
            assert invert(expr, x) == orc.inverse(x)

    @pytest.mark.parametrize("n,m", [(2, 1), (2, 3), (3, 2)])
    def test_wrcycpair_exhaustive(self, n, m):
        expr = WrCycPair(Cyclic(2), n, m)
        orc = oracles.wrcycpair_oracle(oracles.cyclic_dict_group(2), n, m)
        orc.validate_finite()
        els = orc.all_elements()
        assert sorted(enumerate_truncated(expr, 1)) == sorted(els)
        rng = random.Random(17)
        pairs = [(rng.choice(els), rng.choice(els)) for _ in range(3000)]
        for x, y in pairs:
            assert multiply(expr, x, y) == orc.multiply(x, y)
        for x in els:
            assert invert(expr, x) == orc.inverse(x)

    def test_pinned_products(self):
        # worked two-slot examples, small enough to check by hand
        expr = WrCyc(Cyclic(2), 2)
        assert multiply(expr, ((1, 0), 1), ((0, 1), 1)) == ((0, 0), 0)
        assert invert(expr, ((1, 0), 1)) == ((0, 1), 1)
        wz = WrZ(Cyclic(2), 2)
        assert multiply(wz, ((1, 0), 1), ((0, 1), 2)) == ((1, 1), 3)


class TestEnumeration:
    def test_order_formulas(self):
        assert len(enumerate_truncated(WrCyc(Cyclic(2), 3), 1)) == 24
        assert len(enumerate_truncated(WrCycPair(Cyclic(2), 2, 1), 1)) == 8
        assert len(enumerate_truncated(WrCycPair(Cyclic(2), 2, 3), 1)) == 384
        assert len(enumerate_truncated(WrCyc(Cyclic(3), 3), 1)) == 81

    def test_window_size_matches_enumeration(self):
        exprs = [
            FreeAbelian(2),
            ScaledZ(3),
            Product((Cyclic(2), FreeAbelian(1))),
            WrZ(Cyclic(3), 2),
            WrZ2(Cyclic(2), 2, 2),
            WrCyc(Cyclic(2), 4),
        ]
        for expr in exprs:
            for t in (1, 2, 3):
                els = enumerate_truncated(expr, t)
                assert window_size(expr, t) == len(els)
                assert len(set(map(repr, els))) == len(els)

    def test_scaled_window_contains_multiples_only(self):
        assert enumerate_truncated(ScaledZ(3), 4) == [-3, 0, 3]
        assert sorted(enumerate_truncated(ScaledZ(1), 2)) == [-2, -1, 0, 1, 2]

    def test_free_abelian_window(self):
        els = enumerate_truncated(FreeAbelian(2), 2)
        assert len(els) == 25
        assert (2, -2) in els


LAW_POOL = [
    Cyclic(5),
    FreeAbelian(2),
    ScaledZ(3),
    Product((Cyclic(2), FreeAbelian(1))),
    WrZ(Cyclic(3), 2),
    WrCyc(Product((Cyclic(2), Cyclic(2))), 3),
    WrZ2(Cyclic(2), 2, 2),
    WrCycPair(Cyclic(3), 2, 2),
    WrZ(WrCyc(Cyclic(2), 2), 2),
    central_quotient(WrZ(Cyclic(2), 2), ((0, 0), 2)),
]


def _law_battery(expr, rng):
    x = random_element(expr, 3, rng)
    y = random_element(expr, 3, rng)
    z = random_element(expr, 3, rng)
    e = identity(expr)
    assert multiply(expr, multiply(expr, x, y), z) == \
           multiply(expr, x, multiply(expr, y, z))
    assert multiply(expr, e, x) == x
    assert multiply(expr, x, e) == x
    assert multiply(expr, x, invert(expr, x)) == e
    assert multiply(expr, invert(expr, x), x) == e
    assert invert(expr, multiply(expr, x, y)) == \
           multiply(expr, invert(expr, y), invert(expr, x))
    assert power(expr, x, 3) == multiply(expr, multiply(expr, x, x), x)
    assert power(expr, x, -2) == invert(expr, multiply(expr, x, x))
    assert power(expr, x, 0) == e


def test_group_laws_seeded_sweep():
    rng = random.Random(20260815)
    for expr in LAW_POOL:
        for _ in range(110):
            _law_battery(expr, rng)


@given(st.integers(0, len(LAW_POOL) - 1), st.integers(0, 2 ** 30))
@settings(max_examples=200, deadline=None)
def test_group_laws_hypothesis(idx, seed):
    _law_battery(LAW_POOL[idx], random.Random(seed))


class TestQuotients:
    QUOT = central_quotient(WrZ(Cyclic(2), 2), ((0, 0), 2))

    def test_canonical_idempotent(self):
        rng = random.Random(5)
        for _ in range(50):
            x = random_element(self.QUOT, 4, rng)
            c = canonical(self.QUOT, x)
            assert canonical(self.QUOT, c) == c

    def test_multiplication_ignores_generator_powers(self):
        base = WrZ(Cyclic(2), 2)
        gen = ((0, 0), 2)
        rng = random.Random(6)
        for _ in range(50):
            x = random_element(base, 3, rng)
            y = random_element(base, 3, rng)
            shifted = multiply(base, x, power(base, gen, rng.choice([-2, -1, 1, 2])))
            a = multiply(self.QUOT, canonical(self.QUOT, x), canonical(self.QUOT, y))
            b = multiply(self.QUOT, canonical(self.QUOT, shifted), canonical(self.QUOT, y))
            assert a == b

    def test_window_is_deduplicated(self):
        els = list(iter_window(self.QUOT, 3))
        assert len(els) == len(set(els)) == 8

    def test_finite_order_generator_rejected(self):
        with pytest.raises(NonCentralGarside):
            central_quotient(WrCyc(Cyclic(2), 2), ((1, 0), 0))

    def test_non_central_generator_rejected(self):
        with pytest.raises(NonCentralGarside):
            central_quotient(WrZ(Cyclic(2), 2), ((1, 0), 2))


class TestCentrality:
    def test_identity_is_central(self):
        for expr in LAW_POOL:
            assert is_central(expr, identity(expr))

    def test_full_shift_is_central(self):
        expr = WrZ(Cyclic(3), 2)
        assert is_central(expr, ((0, 0), 2))
        assert not is_central(expr, ((0, 0), 1))

    def test_unbalanced_vector_not_central(self):
        expr = WrCyc(Cyclic(2), 2)
        assert not is_central(expr, ((1, 0), 0))
        assert is_central(expr, ((1, 1), 0))


class TestShapeChecks:
    def test_accepts_valid(self):
        check_shape(WrZ(Cyclic(2), 2), ((0, 1), -3))
        check_shape(Product((Cyclic(2), FreeAbelian(1))), (1, (5,)))

    def test_rejects_wrong_arity(self):
        with pytest.raises(ShapeMismatch):
            check_shape(WrZ(Cyclic(2), 2), ((0, 1, 0), 0))

    def test_rejects_out_of_range(self):
        with pytest.raises(ShapeMismatch):
            check_shape(Cyclic(3), 4)

    def test_rejects_scaled_non_multiple(self):
        with pytest.raises(ShapeMismatch):
            check_shape(ScaledZ(3), 2)

    def test_trivial(self):
        t = Trivial()
        assert identity(t) == ()
        assert multiply(t, (), ()) == ()
