"""Error-free transforms and double-double kernels against exact oracles.

Rational arithmetic (fractions.Fraction) is the oracle for the
error-free transforms, which claim exactness, and mpmath at 40 digits
is the oracle for the double-double kernels, which claim a relative
error below the frozen per-operation bounds.
"""

import math
from fractions import Fraction

import mpmath as mp
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from k3mono.scalars import (
    DD,
    F64,
    Fp,
    dd_add,
    dd_add_dir,
    dd_div,
    dd_div_dir,
    dd_mul,
    dd_mul_dir,
    dd_sqrt,
    dd_sqrt_dir,
    directed_round,
    error_free_transform,
    f64_add_dir,
    f64_div_dir,
    f64_mul_dir,
    f64_sqrt_dir,
    quick_two_sum,
    two_sum,
)

finite = st.floats(allow_nan=False, allow_infinity=False, width=64)
moderate = st.floats(
    min_value=-1e150, max_value=1e150, allow_nan=False, allow_infinity=False
)


@given(finite, finite)
def test_two_sum_is_exact(a, b):
    s, e = two_sum(a, b)
    if math.isinf(s):
        return
    assert Fraction(a) + Fraction(b) == Fraction(s) + Fraction(e)


@given(moderate, moderate)
def test_two_prod_is_exact(a, b):
    p, e = error_free_transform(a, b, "product")
    if math.isinf(p) or p == 0.0:
        return
    # exactness holds away from overflow (internal split) and from the
    # subnormal range (the correction term itself must be representable)
    if abs(a) > 2.0**500 or abs(b) > 2.0**500 or abs(p) < 2.0**-960:
        return
    assert Fraction(a) * Fraction(b) == Fraction(p) + Fraction(e)


@given(finite, finite)
def test_quick_two_sum_when_ordered(a, b):
    if abs(a) < abs(b):
        a, b = b, a
    s, e = quick_two_sum(a, b)
    s2, e2 = two_sum(a, b)
    if math.isinf(s):
        return
    assert (s, e) == (s2, e2)


def test_error_free_transform_rejects_unknown_kind():
    with pytest.raises(ValueError):
        error_free_transform(1.0, 2.0, "quotient")


def _rand_dd(rng):
    h = rng.normal() * 10.0 ** rng.integers(-20, 20)
    l = h * rng.normal() * 2.0**-53
    s = h + l
    return s, l - (s - h)


def _mp_dd(h, l):
    return mp.mpf(h) + mp.mpf(l)


@pytest.mark.parametrize(
    "op,fn,bound",
    [
        ("add", dd_add, 2.0**-103),
        ("mul", dd_mul, 2.0**-100),
        ("div", dd_div, 2.0**-96),
    ],
)
def test_dd_kernels_meet_error_bounds(op, fn, bound):
    rng = np.random.default_rng(101)
    with mp.workdps(40):
        for _ in range(20000):
            ah, al = _rand_dd(rng)
            bh, bl = _rand_dd(rng)
            if op == "div" and bh == 0.0:
                continue
            rh, rl = fn(ah, al, bh, bl)
            if not math.isfinite(rh) or not math.isfinite(rl):
                continue
            x, y = _mp_dd(ah, al), _mp_dd(bh, bl)
            exact = {"add": x + y, "mul": x * y, "div": x / y}[op]
            got = _mp_dd(rh, rl)
            err = abs(got - exact)
            assert err <= bound * abs(got) + mp.mpf("1e-320")


def test_dd_sqrt_error_bound():
    rng = np.random.default_rng(7)
    with mp.workdps(40):
        for _ in range(5000):
            ah, al = _rand_dd(rng)
            if ah <= 0.0:
                continue
            rh, rl = dd_sqrt(ah, al)
            exact = mp.sqrt(_mp_dd(ah, al))
            got = _mp_dd(rh, rl)
            assert abs(got - exact) <= 2.0**-99 * abs(got) + mp.mpf("1e-320")


def test_dd_results_are_normalized():
    rng = np.random.default_rng(55)
    for _ in range(5000):
        ah, al = _rand_dd(rng)
        bh, bl = _rand_dd(rng)
        for rh, rl in (dd_add(ah, al, bh, bl), dd_mul(ah, al, bh, bl)):
            if rh == 0.0 or not math.isfinite(rh):
                continue
            assert rh + rl == rh


@pytest.mark.parametrize("updown", [True, False])
def test_f64_directed_brackets_exact(updown):
    rng = np.random.default_rng(31)
    for _ in range(20000):
        a = rng.normal() * 10.0 ** rng.integers(-30, 30)
        b = rng.normal() * 10.0 ** rng.integers(-30, 30)
        s = f64_add_dir(a, b, updown)
        exact = Fraction(a) + Fraction(b)
        assert Fraction(s) >= exact if updown else Fraction(s) <= exact
        p = f64_mul_dir(a, b, updown)
        exact = Fraction(a) * Fraction(b)
        assert Fraction(p) >= exact if updown else Fraction(p) <= exact
        if b != 0.0:
            q = f64_div_dir(a, b, updown)
            exact = Fraction(a) / Fraction(b)
            assert Fraction(q) >= exact if updown else Fraction(q) <= exact


def test_f64_directed_is_tight():
    # one ulp apart at most, and equal when the operation is exact
    assert f64_add_dir(1.0, 2.0, True) == 3.0 == f64_add_dir(1.0, 2.0, False)
    lo = f64_add_dir(1.0, 2.0**-60, False)
    hi = f64_add_dir(1.0, 2.0**-60, True)
    assert lo == 1.0 and hi == math.nextafter(1.0, 2.0)


def test_f64_sqrt_directed():
    for x in (2.0, 3.0, 10.0, 0.3, 7.25e-11):
        lo, hi = f64_sqrt_dir(x, False), f64_sqrt_dir(x, True)
        assert Fraction(lo) ** 2 <= Fraction(x) <= Fraction(hi) ** 2


def test_dd_directed_brackets_oracle():
    rng = np.random.default_rng(77)
    with mp.workdps(40):
        for _ in range(4000):
            ah, al = _rand_dd(rng)
            bh, bl = _rand_dd(rng)
            x, y = _mp_dd(ah, al), _mp_dd(bh, bl)
            cases = [(dd_add_dir, x + y), (dd_mul_dir, x * y)]
            if bh != 0.0:
                cases.append((dd_div_dir, x / y))
            for fn, exact in cases:
                dh, dl = fn(ah, al, bh, bl, False)
                uh, ul = fn(ah, al, bh, bl, True)
                if not (math.isfinite(dh) and math.isfinite(uh)):
                    continue
                assert _mp_dd(dh, dl) <= exact <= _mp_dd(uh, ul)
            if ah > 0.0:
                dh, dl = dd_sqrt_dir(ah, al, False)
                uh, ul = dd_sqrt_dir(ah, al, True)
                assert _mp_dd(dh, dl) <= mp.sqrt(x) <= _mp_dd(uh, ul)


class TestFp:
    def test_total_order_uses_both_words(self):
        a = Fp(DD, 1.0, -1e-30)
        b = Fp(DD, 1.0, 0.0)
        c = Fp(DD, 1.0, 1e-30)
        assert a < b < c
        assert a <= a and not a < a

    def test_rejects_nan_and_unknown_precision(self):
        with pytest.raises(ValueError):
            Fp(DD, math.nan)
        with pytest.raises(ValueError):
            Fp("quad", 1.0)

    def test_f64_drops_low_word(self):
        assert Fp(F64, 1.0, 1e-20).lo == 0.0

    def test_dd_construction_renormalizes(self):
        v = Fp(DD, 1.0, 1.0)
        assert (v.hi, v.lo) == (2.0, 0.0)
        w = Fp(DD, 2.0**60, 1.0)
        assert w.hi + w.lo == w.hi and w.lo == 1.0

    def test_immutable(self):
        with pytest.raises(AttributeError):
            Fp(F64, 1.0).hi = 2.0

    @given(moderate)
    def test_hex_roundtrip_f64(self, x):
        v = Fp(F64, x)
        assert Fp.from_hex(v.to_hex()) == v

    def test_hex_roundtrip_dd(self):
        rng = np.random.default_rng(13)
        for _ in range(2000):
            h, l = _rand_dd(rng)
            v = Fp(DD, h, l)
            w = Fp.from_hex(v.to_hex())
            assert (w.hi, w.lo) == (v.hi, v.lo)

    def test_neg(self):
        v = Fp(DD, 1.5, -2e-20)
        assert (-v).hi == -1.5 and (-v).lo == 2e-20


class TestDirectedRound:
    def test_identity_without_error(self):
        v = Fp(DD, 1.0, 2.0**-80)
        assert directed_round(v, "down", 0.0) == v
        assert directed_round(v, "up", 0.0) == v

    def test_steps_outward_with_error(self):
        v = Fp(DD, 1.0, 0.0)
        dn = directed_round(v, "down", 1e-300)
        up = directed_round(v, "up", 1e-300)
        assert dn < v < up

    def test_rejects_unknown_direction(self):
        with pytest.raises(ValueError):
            directed_round(Fp(F64, 1.0), "sideways")
