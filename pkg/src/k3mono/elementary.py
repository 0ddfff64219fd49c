"""Rigorous elementary functions on real intervals.

exp, log, sqrt, sin, cos, the constant pi, and the unit-circle map
e^{i*pi*t}.  Monotone functions are evaluated at the endpoints; sin/cos
additionally clamp to +-1 whenever a critical point can lie inside the
argument.  Point evaluations run argument reduction against the frozen
interval constants for pi and ln 2, then a truncated Taylor kernel in
interval arithmetic with an explicit remainder term, so the result is a
certified enclosure at either precision.

Arguments of magnitude up to about 4*pi reduce with negligible loss;
nothing in the pipeline exceeds that (path parameters stay in [-1, 2]).
"""

from __future__ import annotations

import math

from . import scalars as sc
from .errors import DomainError
from .intervals import ComplexInterval, RealInterval
from .scalars import DD, F64, Fp

_INF = math.inf

# Leading/trailing components of pi and ln 2, with frozen bounds on
# |constant - (hi + lo)|; the tests re-derive both from a 60-digit value.
_PI_HI = float.fromhex("0x1.921fb54442d18p+1")
_PI_LO = float.fromhex("0x1.1a62633145c07p-53")
_PI_ERR = 4e-33
_LN2_HI = float.fromhex("0x1.62e42fefa39efp-1")
_LN2_LO = float.fromhex("0x1.abc9e3b39803fp-56")
_LN2_ERR = 1e-33

_cache: dict = {}


def pi(prec=DD) -> RealInterval:
    """Interval containing pi, width within a few ulps of the precision."""
    key = ("pi", prec)
    got = _cache.get(key)
    if got is None:
        if prec == F64:
            got = RealInterval(F64, _PI_HI, 0.0, math.nextafter(_PI_HI, _INF), 0.0)
        else:
            ih, il = sc.dd_step_out(_PI_HI, _PI_LO, _PI_ERR, False)
            sh, sl = sc.dd_step_out(_PI_HI, _PI_LO, _PI_ERR, True)
            got = RealInterval(DD, ih, il, sh, sl)
        _cache[key] = got
    return got


def ln2(prec=DD) -> RealInterval:
    key = ("ln2", prec)
    got = _cache.get(key)
    if got is None:
        if prec == F64:
            got = RealInterval(F64, _LN2_HI, 0.0, math.nextafter(_LN2_HI, _INF), 0.0)
        else:
            ih, il = sc.dd_step_out(_LN2_HI, _LN2_LO, _LN2_ERR, False)
            sh, sl = sc.dd_step_out(_LN2_HI, _LN2_LO, _LN2_ERR, True)
            got = RealInterval(DD, ih, il, sh, sl)
        _cache[key] = got
    return got


def _point(x: Fp) -> RealInterval:
    return RealInterval(x.prec, x.hi, x.lo, x.hi, x.lo)


def _join(lo: RealInterval, hi: RealInterval) -> RealInterval:
    """[lo.inf, hi.sup] for a nondecreasing function's endpoint enclosures."""
    return RealInterval(lo.prec, lo.ih, lo.il, hi.sh, hi.sl)


# -- exp ---------------------------------------------------------------------

_EXP_TERMS = 26


def _exp_point(x: Fp) -> RealInterval:
    if not math.isfinite(x.hi):
        return RealInterval(x.prec, 0.0, 0.0, _INF, 0.0)
    prec = x.prec
    k = int(round(x.hi / _LN2_HI))
    r = _point(x) - ln2(prec) * k
    acc = RealInterval.point(1.0, prec)
    for n in range(_EXP_TERMS, 0, -1):
        acc = RealInterval.point(1.0, prec) + (r * acc) / n
    rmax = max(abs(r.ih), abs(r.sh)) + 1e-15
    tail = 2.0 * rmax ** (_EXP_TERMS + 1) / math.factorial(_EXP_TERMS + 1)
    return acc.inflate(tail).mul_pow2(k)


def exp(a: RealInterval) -> RealInterval:
    return _join(_exp_point(a.inf), _exp_point(a.sup))


# -- log ---------------------------------------------------------------------

_LOG_TERMS = 24
_SQRT_HALF = 0.7071067811865476


def _log_point(x: Fp) -> RealInterval:
    prec = x.prec
    m, k = math.frexp(x.hi)
    if m < _SQRT_HALF:
        k -= 1
    mant = _point(x).mul_pow2(-k)
    one = RealInterval.point(1.0, prec)
    s = (mant - one) / (mant + one)
    z = s.sqr()
    acc = RealInterval.point(1.0, prec) / (2 * _LOG_TERMS + 1)
    for n in range(_LOG_TERMS - 1, -1, -1):
        acc = RealInterval.point(1.0, prec) / (2 * n + 1) + z * acc
    smax = max(abs(s.ih), abs(s.sh)) + 1e-15
    tail = 2.0 * smax ** (2 * _LOG_TERMS + 2)
    val = (s * acc.inflate(tail)).mul_pow2(1)
    if k:
        val = val + ln2(prec) * k
    return val


def log(a: RealInterval) -> RealInterval:
    if not a.strictly_positive():
        raise DomainError(f"log needs inf > 0, got {a!r}")
    return _join(_log_point(a.inf), _log_point(a.sup))


# -- sqrt --------------------------------------------------------------------


def sqrt(a: RealInterval) -> RealInterval:
    if not a.strictly_positive():
        raise DomainError(f"sqrt needs inf > 0, got {a!r}")
    if a.prec == F64:
        return RealInterval(
            F64, sc.f64_sqrt_dir(a.ih, False), 0.0, sc.f64_sqrt_dir(a.sh, True), 0.0
        )
    ih, il = sc.dd_sqrt_dir(a.ih, a.il, False)
    sh, sl = sc.dd_sqrt_dir(a.sh, a.sl, True)
    return RealInterval(DD, ih, il, sh, sl)


# -- sin / cos ---------------------------------------------------------------

_SC_TERMS = 15
_HALF_PI = 1.5707963267948966
_TWO_PI = 6.283185307179586


def _sin_kernel(r: RealInterval) -> RealInterval:
    prec = r.prec
    z = r.sqr()
    acc = RealInterval.point(1.0, prec)
    for n in range(_SC_TERMS, 0, -1):
        acc = RealInterval.point(1.0, prec) - (z * acc) / ((2 * n) * (2 * n + 1))
    rmax = max(abs(r.ih), abs(r.sh)) + 1e-15
    tail = 2.0 * rmax ** (2 * _SC_TERMS + 3) / math.factorial(2 * _SC_TERMS + 3)
    return (r * acc).inflate(tail)


def _cos_kernel(r: RealInterval) -> RealInterval:
    prec = r.prec
    z = r.sqr()
    acc = RealInterval.point(1.0, prec)
    for n in range(_SC_TERMS, 0, -1):
        acc = RealInterval.point(1.0, prec) - (z * acc) / ((2 * n - 1) * (2 * n))
    rmax = max(abs(r.ih), abs(r.sh)) + 1e-15
    tail = 2.0 * rmax ** (2 * _SC_TERMS + 2) / math.factorial(2 * _SC_TERMS + 2)
    return acc.inflate(tail)


def _sincos_point(x: Fp, want_sin: bool) -> RealInterval:
    prec = x.prec
    k = int(round(x.hi / _HALF_PI))
    r = _point(x) - pi(prec).mul_pow2(-1) * k
    j = (k + (0 if want_sin else 1)) % 4
    if j == 0:
        return _sin_kernel(r)
    if j == 1:
        return _cos_kernel(r)
    if j == 2:
        return -_sin_kernel(r)
    return -_cos_kernel(r)


def _has_critical(a: RealInterval, quarter: int) -> bool:
    """Conservatively: does quarter*(pi/2) + 2*pi*n meet [a] for integer n?"""
    slack = 2e-12 * (1.0 + abs(a.ih) + abs(a.sh))
    c = quarter * _HALF_PI
    nlo = math.ceil((a.ih - slack - c) / _TWO_PI)
    nhi = math.floor((a.sh + slack - c) / _TWO_PI)
    return nlo <= nhi


def _clamp_unit(v: RealInterval) -> RealInterval:
    ih, il = v.ih, v.il
    sh, sl = v.sh, v.sl
    if ih < -1.0:
        ih, il = -1.0, 0.0
    if sh > 1.0:
        sh, sl = 1.0, 0.0
    return RealInterval(v.prec, ih, il, sh, sl)


def _sincos(a: RealInterval, want_sin: bool) -> RealInterval:
    if not a.is_finite() or a.wid_up() >= _TWO_PI + 0.5:
        return RealInterval.from_floats(-1.0, 1.0, a.prec)
    out = _sincos_point(a.inf, want_sin).hull(_sincos_point(a.sup, want_sin))
    if _has_critical(a, 1 if want_sin else 0):
        out = RealInterval(a.prec, out.ih, out.il, 1.0, 0.0)
    if _has_critical(a, 3 if want_sin else 2):
        out = RealInterval(a.prec, -1.0, 0.0, out.sh, out.sl)
    return _clamp_unit(out)


def sin(a: RealInterval) -> RealInterval:
    return _sincos(a, True)


def cos(a: RealInterval) -> RealInterval:
    return _sincos(a, False)


def ri_elementary(a: RealInterval, f: str) -> RealInterval:
    """Dispatch form used by the public API: f in exp/log/sqrt/sin/cos."""
    try:
        fn = {"exp": exp, "log": log, "sqrt": sqrt, "sin": sin, "cos": cos}[f]
    except KeyError:
        raise ValueError(f"unknown elementary function {f!r}") from None
    return fn(a)


def exp_i_pi(t: RealInterval) -> ComplexInterval:
    """Enclosure of {cos(pi*s) + i sin(pi*s) : s in t}."""
    theta = pi(t.prec) * t
    return ComplexInterval(cos(theta), sin(theta))


def ci_abs(z: ComplexInterval) -> RealInterval:
    """Enclosure of the complex magnitude |z|."""
    return sqrt(z.abs_sqr())
