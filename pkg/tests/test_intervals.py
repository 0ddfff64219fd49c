"""Containment and isotonicity of the interval layers.

The two load-bearing properties are checked on a large seeded corpus:
point containment (op applied to member points lands in the interval
result) and inclusion isotonicity (shrinking the operands never grows
the result).  Everything else is semantics around the edges: hulls,
intersections, precision moves, serialization, and the exact-zero fast
path that keeps structural zeros alive.
"""

import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from k3mono.errors import DivisorContainsZero, EmptyIntersection
from k3mono.intervals import ComplexInterval, RealInterval, ci_arith, ri_arith
from k3mono.scalars import DD, F64, Fp

_OPS = ("add", "sub", "mul", "div")


def _apply(a, b, op):
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    return a / b


def _rand_interval(rng, prec):
    c = rng.normal() * 10.0 ** rng.integers(-12, 12)
    w = abs(rng.normal()) * 10.0 ** rng.integers(-18, -1) * max(abs(c), 1e-6)
    if rng.random() < 0.1:
        w = 0.0
    return RealInterval.from_floats(c - w, c + w, prec)


def _member(rng, iv):
    # a float guaranteed inside: endpoints are exactly representable
    if rng.random() < 0.25:
        return iv.ih if rng.random() < 0.5 else iv.sh
    t = rng.random()
    x = iv.ih + t * (iv.sh - iv.ih)
    return min(max(x, iv.ih), iv.sh)


def _shrink(rng, iv, prec):
    lo = _member(rng, iv)
    hi = _member(rng, iv)
    if lo > hi:
        lo, hi = hi, lo
    return RealInterval.from_floats(lo, hi, prec)


def _in_ri(iv, fr: Fraction) -> bool:
    # exact membership, low words included
    return (
        Fraction(iv.ih) + Fraction(iv.il)
        <= fr
        <= Fraction(iv.sh) + Fraction(iv.sl)
    )


@pytest.mark.parametrize("prec", [F64, DD])
def test_point_containment_bulk(prec):
    rng = np.random.default_rng(2024)
    cases = 0
    while cases < 50000:
        a = _rand_interval(rng, prec)
        b = _rand_interval(rng, prec)
        op = _OPS[rng.integers(0, 4)]
        if op == "div" and b.contains_zero():
            continue
        r = _apply(a, b, op)
        x = Fraction(_member(rng, a))
        y = Fraction(_member(rng, b))
        v = {"add": x + y, "sub": x - y, "mul": x * y, "div": x / y}[op]
        assert _in_ri(r, v), (op, a, b, x, y)
        cases += 1


@pytest.mark.parametrize("prec", [F64, DD])
def test_inclusion_isotonicity_bulk(prec):
    rng = np.random.default_rng(77)
    cases = 0
    while cases < 50000:
        a = _rand_interval(rng, prec)
        b = _rand_interval(rng, prec)
        op = _OPS[rng.integers(0, 4)]
        if op == "div" and b.contains_zero():
            continue
        sa = _shrink(rng, a, prec)
        sb = _shrink(rng, b, prec)
        if op == "div" and sb.contains_zero():
            continue
        big = _apply(a, b, op)
        small = _apply(sa, sb, op)
        assert small.subset_of(big), (op, a, b, sa, sb)
        cases += 1


def test_division_by_zero_straddle_raises():
    a = RealInterval.from_floats(1.0, 2.0)
    z = RealInterval.from_floats(-1e-30, 1e-30)
    with pytest.raises(DivisorContainsZero):
        a / z


def test_exact_zero_point_annihilates():
    zero = RealInterval.point(0.0)
    wide = RealInterval.from_floats(-1e30, 1e30)
    prod = zero * wide
    assert prod.is_point() and prod.ih == 0.0 and prod.sh == 0.0


def test_construction_rejects_reversed_endpoints():
    with pytest.raises(ValueError):
        RealInterval.from_floats(2.0, 1.0)


def test_midpoint_and_radius():
    iv = RealInterval.from_floats(1.0, 3.0)
    assert iv.mid() == 2.0
    assert iv.rad_up() >= 1.0
    m = iv.mid_dd()
    assert m.is_point() and iv.contains(m.inf)


class TestSetOps:
    def test_hull(self):
        a = RealInterval.from_floats(0.0, 1.0)
        b = RealInterval.from_floats(2.0, 3.0)
        h = a.hull(b)
        assert h.ih == 0.0 and h.sh == 3.0

    def test_intersect(self):
        a = RealInterval.from_floats(0.0, 2.0)
        b = RealInterval.from_floats(1.0, 3.0)
        c = a.intersect(b)
        assert c.ih == 1.0 and c.sh == 2.0

    def test_intersect_empty_raises(self):
        a = RealInterval.from_floats(0.0, 1.0)
        b = RealInterval.from_floats(2.0, 3.0)
        with pytest.raises(EmptyIntersection):
            a.intersect(b)

    def test_subset_interior(self):
        outer = RealInterval.from_floats(0.0, 1.0)
        inner = RealInterval.from_floats(0.25, 0.75)
        assert inner.subset_of(outer)
        assert inner.interior_subset_of(outer)
        assert outer.subset_of(outer)
        assert not outer.interior_subset_of(outer)

    def test_overlaps(self):
        a = RealInterval.from_floats(0.0, 1.0)
        assert a.overlaps(RealInterval.from_floats(1.0, 2.0))
        assert not a.overlaps(RealInterval.from_floats(1.5, 2.0))

    def test_inflate(self):
        a = RealInterval.point(1.0)
        b = a.inflate(1e-10)
        assert a.interior_subset_of(b)


def test_mul_pow2_is_exact():
    iv = RealInterval.from_floats(1.25, 2.5)
    double = iv.mul_pow2(1)
    assert double.ih == 2.5 and double.sh == 5.0
    assert iv.mul_pow2(-1).sh == 1.25


def test_sqr_tighter_than_self_product():
    rng = np.random.default_rng(5)
    for _ in range(2000):
        a = _rand_interval(rng, DD)
        if rng.random() < 0.3:
            a = a.hull(-a)  # force some zero-straddles
        sq = a.sqr()
        assert not sq.strictly_negative()
        assert sq.subset_of(a * a)
        x = Fraction(_member(rng, a))
        assert _in_ri(sq, x * x)


def test_abs_containment():
    a = RealInterval.from_floats(-3.0, 1.0)
    m = a.abs()
    assert m.ih == 0.0 and m.sh == 3.0
    assert RealInterval.from_floats(-5.0, -2.0).abs().ih == 2.0


def test_precision_moves():
    rng = np.random.default_rng(11)
    for _ in range(2000):
        a = _rand_interval(rng, DD)
        f = a.to_f64()
        assert f.prec == F64 and a.subset_of(f.to_dd())
        assert a.to_dd() is a


def test_json_roundtrip_bit_exact():
    rng = np.random.default_rng(3)
    for _ in range(2000):
        a = _rand_interval(rng, DD)
        b = RealInterval.from_json(a.to_json())
        assert (b.ih, b.il, b.sh, b.sl) == (a.ih, a.il, a.sh, a.sl)
        c = _rand_interval(rng, F64)
        d = RealInterval.from_json(c.to_json())
        assert (d.ih, d.sh) == (c.ih, c.sh) and d.prec == F64


@given(st.floats(min_value=-1e10, max_value=1e10, allow_nan=False))
def test_point_contains_itself(x):
    assert RealInterval.point(x).contains(x)
    assert ComplexInterval.point(complex(x, -x)).contains(complex(x, -x))


def test_ri_arith_dispatch_matches_operators():
    a = RealInterval.from_floats(1.0, 2.0)
    b = RealInterval.from_floats(0.5, 0.75)
    for op, ref in (("+", a + b), ("-", a - b), ("*", a * b), ("/", a / b)):
        got = ri_arith(a, b, op)
        assert (got.ih, got.il, got.sh, got.sl) == (ref.ih, ref.il, ref.sh, ref.sl)
    with pytest.raises(ValueError):
        ri_arith(a, b, "**")


def _rand_ci(rng, prec):
    return ComplexInterval(_rand_interval(rng, prec), _rand_interval(rng, prec))


def _ci_member(rng, z):
    return Fraction(_member(rng, z.re)), Fraction(_member(rng, z.im))


def _in_ci(z, re: Fraction, im: Fraction) -> bool:
    return _in_ri(z.re, re) and _in_ri(z.im, im)


@pytest.mark.parametrize("prec", [F64, DD])
def test_complex_containment_and_isotonicity(prec):
    rng = np.random.default_rng(909)
    cases = 0
    while cases < 15000:
        a = _rand_ci(rng, prec)
        b = _rand_ci(rng, prec)
        op = _OPS[rng.integers(0, 4)]
        if op == "div" and b.contains_zero():
            continue
        r = _apply(a, b, op)
        xr, xi = _ci_member(rng, a)
        yr, yi = _ci_member(rng, b)
        if op == "add":
            vr, vi = xr + yr, xi + yi
        elif op == "sub":
            vr, vi = xr - yr, xi - yi
        elif op == "mul":
            vr, vi = xr * yr - xi * yi, xr * yi + xi * yr
        else:
            den = yr * yr + yi * yi
            vr, vi = (xr * yr + xi * yi) / den, (xi * yr - xr * yi) / den
        assert _in_ci(r, vr, vi), (op, a, b)
        sa = ComplexInterval(_shrink(rng, a.re, prec), _shrink(rng, a.im, prec))
        sb = ComplexInterval(_shrink(rng, b.re, prec), _shrink(rng, b.im, prec))
        if not (op == "div" and sb.contains_zero()):
            assert _apply(sa, sb, op).subset_of(r)
        cases += 1


def test_complex_helpers():
    z = ComplexInterval.point(3 + 4j)
    assert z.abs_sqr().contains(25.0)
    assert z.mul_i().contains(complex(-4, 3))
    assert z.conj().contains(3 - 4j)
    w = z.mul_pow2(-2)
    assert w.contains((3 + 4j) / 4)


def test_complex_real_divisor_shortcut_containment():
    rng = np.random.default_rng(42)
    for _ in range(3000):
        a = _rand_ci(rng, DD)
        d = _rand_interval(rng, DD)
        if d.contains_zero():
            continue
        real_div = ComplexInterval.from_real(d)
        r = a / real_div
        xr, xi = _ci_member(rng, a)
        y = Fraction(_member(rng, d))
        assert _in_ci(r, xr / y, xi / y)


def test_ci_arith_dispatch():
    a = ComplexInterval.point(1 + 2j)
    b = ComplexInterval.point(3 - 1j)
    got = ci_arith(a, b, "*")
    assert got.contains((1 + 2j) * (3 - 1j))


def test_ci_json_roundtrip():
    rng = np.random.default_rng(8)
    for _ in range(500):
        z = _rand_ci(rng, DD)
        w = ComplexInterval.from_json(z.to_json())
        for attr in ("ih", "il", "sh", "sl"):
            assert getattr(w.re, attr) == getattr(z.re, attr)
            assert getattr(w.im, attr) == getattr(z.im, attr)


def test_nan_endpoint_widens_to_infinity():
    iv = RealInterval.from_floats(math.nan, 1.0)
    assert iv.ih == -math.inf and iv.sh == 1.0
    assert not iv.is_finite()


def test_fp_endpoint_accessors():
    iv = RealInterval(DD, 1.0, 1e-20, 2.0, -1e-20)
    assert isinstance(iv.inf, Fp) and iv.inf.lo == 1e-20
    assert iv.sup.hi == 2.0
