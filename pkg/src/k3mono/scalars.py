"""Floating-point substrate: binary64 and double-double scalars.

Everything above this module (intervals, jets, matrices) reduces to two
primitives defined here: error-free transforms of binary64 sum/product,
and outward rounding driven by a rigorous per-operation error bound.

A double-double (DD) value is an unevaluated sum ``hi + lo`` of two
binary64 numbers with ``|lo| <= ulp(hi)/2``, worth roughly 31 significant
digits.  DD operations round to nearest with a small relative error; the
interval layer widens results outward past a frozen bound on that error,
so no rounding-mode switching is ever needed.

ulp is `math.ulp` throughout: exponent extraction with a floor of
5e-324 (the smallest subnormal) at zero.
"""

from __future__ import annotations

import math

INF = math.inf

_SPLITTER = 134217729.0  # 2**27 + 1, exact in binary64


def two_sum(a: float, b: float) -> tuple[float, float]:
    """Exact addition: (s, e) with s = fl(a+b) and s + e = a + b."""
    s = a + b
    bb = s - a
    e = (a - (s - bb)) + (b - bb)
    return s, e


def quick_two_sum(a: float, b: float) -> tuple[float, float]:
    """Exact addition assuming |a| >= |b| or a == 0."""
    s = a + b
    e = b - (s - a)
    return s, e


def _two_prod_dekker(a: float, b: float) -> tuple[float, float]:
    p = a * b
    t = _SPLITTER * a
    ah = t - (t - a)
    al = a - ah
    t = _SPLITTER * b
    bh = t - (t - b)
    bl = b - bh
    e = ((ah * bh - p) + ah * bl + al * bh) + al * bl
    return p, e


def _two_prod_fma(a: float, b: float) -> tuple[float, float]:
    p = a * b
    return p, math.fma(a, b, -p)  # type: ignore[attr-defined]


def _select_two_prod():
    """Pick the product transform: hardware FMA if it passes an exactness
    self-test against Dekker splitting, else Dekker splitting.

    Some platforms emulate fma incorrectly; the fallback keeps the
    exactness contract unconditional.
    """
    if not hasattr(math, "fma"):
        return _two_prod_dekker
    probes = [
        (1.0 + 2.0**-27, 1.0 + 2.0**-27),
        (1.0 + 2.0**-52, 1.0 - 2.0**-52),
        (3.0, 1.0 / 3.0),
        (1.0 / 7.0, -1.0 / 11.0),
        (2.0**500, 2.0**-420),
    ]
    for a, b in probes:
        if _two_prod_fma(a, b) != _two_prod_dekker(a, b):
            return _two_prod_dekker
    return _two_prod_fma


two_prod = _select_two_prod()


def error_free_transform(a: float, b: float, kind: str) -> tuple[float, float]:
    """Exact sum or product: (s, e) with s = fl(a op b), s + e = a op b.

    `kind` is "sum" or "product".  Overflow saturates s to +-inf; the
    caller is responsible for widening to an unbounded interval.
    """
    if kind == "sum":
        return two_sum(a, b)
    if kind == "product":
        return two_prod(a, b)
    raise ValueError(f"unknown transform kind {kind!r}")


# ---------------------------------------------------------------------------
# Double-double cores, round-to-nearest.
#
# Bounds below are deliberately loose power-of-two multiples of the leading
# component (published worst cases are 3u^2 for the add, 7u^2 for the
# product, ~16u^2 for the division, with u = 2^-53); randomized tests pit
# them against a 60-digit oracle.  The absolute cushion absorbs roundings
# that land in the subnormal range, where relative bounds do not apply.

DD_EPS_ADD = 2.0**-103
DD_EPS_MUL = 2.0**-101
DD_EPS_DIV = 2.0**-97
DD_EPS_SQRT = 2.0**-100
DD_ABS_TINY = 1e-322


def dd_add(ah: float, al: float, bh: float, bl: float) -> tuple[float, float]:
    sh, sl = two_sum(ah, bh)
    th, tl = two_sum(al, bl)
    c = sl + th
    vh, vl = quick_two_sum(sh, c)
    w = tl + vl
    return quick_two_sum(vh, w)


def dd_sub(ah: float, al: float, bh: float, bl: float) -> tuple[float, float]:
    return dd_add(ah, al, -bh, -bl)


def dd_mul(ah: float, al: float, bh: float, bl: float) -> tuple[float, float]:
    ph, pl = two_prod(ah, bh)
    pl += ah * bl + al * bh + al * bl
    return quick_two_sum(ph, pl)


def dd_mul_f64(ah: float, al: float, b: float) -> tuple[float, float]:
    ph, pl = two_prod(ah, b)
    pl += al * b
    return quick_two_sum(ph, pl)


def dd_div(ah: float, al: float, bh: float, bl: float) -> tuple[float, float]:
    q1 = ah / bh
    ph, pl = dd_mul_f64(bh, bl, q1)
    rh, rl = dd_add(ah, al, -ph, -pl)
    q2 = rh / bh
    ph, pl = dd_mul_f64(bh, bl, q2)
    rh, rl = dd_add(rh, rl, -ph, -pl)
    q3 = rh / bh
    qh, ql = quick_two_sum(q1, q2)
    return dd_add(qh, ql, q3, 0.0)


def dd_sqrt(ah: float, al: float) -> tuple[float, float]:
    """Round-to-nearest DD square root; caller guarantees ah + al >= 0."""
    if ah == 0.0 and al == 0.0:
        return 0.0, 0.0
    x = 1.0 / math.sqrt(ah)
    s = ah * x
    ph, pl = two_prod(s, s)
    rh, _ = dd_add(ah, al, -ph, -pl)
    return quick_two_sum(s, rh * (x * 0.5))


def dd_step_out(h: float, l: float, err: float, up: bool) -> tuple[float, float]:
    """Move (h, l) strictly past a bound on |true - (h+l)|, renormalized.

    One nextafter step beyond the nearest-rounded shift covers that
    rounding's own error, so the result brackets the true value.
    """
    if err != 0.0:
        if up:
            l = math.nextafter(l + err, INF)
        else:
            l = math.nextafter(l - err, -INF)
    return two_sum(h, l)


def dd_add_dir(ah, al, bh, bl, up: bool) -> tuple[float, float]:
    h, l = dd_add(ah, al, bh, bl)
    return dd_step_out(h, l, DD_EPS_ADD * abs(h), up)


def dd_mul_dir(ah, al, bh, bl, up: bool) -> tuple[float, float]:
    h, l = dd_mul(ah, al, bh, bl)
    return dd_step_out(h, l, DD_EPS_MUL * abs(h) + DD_ABS_TINY, up)


def dd_div_dir(ah, al, bh, bl, up: bool) -> tuple[float, float]:
    h, l = dd_div(ah, al, bh, bl)
    return dd_step_out(h, l, DD_EPS_DIV * abs(h) + DD_ABS_TINY, up)


def dd_sqrt_dir(ah, al, up: bool) -> tuple[float, float]:
    h, l = dd_sqrt(ah, al)
    if l == 0.0:
        ph, pe = two_prod(h, h)
        if ph == ah and pe == al:
            return h, l  # exact root, no widening
    return dd_step_out(h, l, DD_EPS_SQRT * abs(h) + DD_ABS_TINY, up)


# ---------------------------------------------------------------------------
# Directed binary64 endpoint ops.  Tight: exact results are not widened,
# inexact ones move exactly one representable step outward, which always
# brackets a correctly rounded result.


_F64_MAX = 1.7976931348623157e308


def f64_add_dir(a: float, b: float, up: bool) -> float:
    s, e = two_sum(a, b)
    if math.isinf(s):
        return s if (s > 0.0) == up else (_F64_MAX if s > 0.0 else -_F64_MAX)
    if up:
        return math.nextafter(s, INF) if e > 0.0 else s
    return math.nextafter(s, -INF) if e < 0.0 else s


def f64_mul_dir(a: float, b: float, up: bool) -> float:
    p, e = two_prod(a, b)
    if math.isinf(p):
        return p if (p > 0.0) == up else (_F64_MAX if p > 0.0 else -_F64_MAX)
    if up:
        return math.nextafter(p, INF) if e > 0.0 else p
    return math.nextafter(p, -INF) if e < 0.0 else p


def f64_div_dir(a: float, b: float, up: bool) -> float:
    q = a / b
    p, e = two_prod(q, b)
    if p == a and e == 0.0:
        return q
    return math.nextafter(q, INF if up else -INF)


def f64_sqrt_dir(a: float, up: bool) -> float:
    s = math.sqrt(a)
    p, e = two_prod(s, s)
    if p == a and e == 0.0:
        return s
    return math.nextafter(s, INF if up else -INF)


# ---------------------------------------------------------------------------
# Scalar value type.

F64 = "f64"
DD = "dd"


class Fp:
    """Immutable scalar tagged with its precision.

    F64 stores one binary64 in `hi` (`lo` is 0.0); DD stores the
    normalized pair.  Construction renormalizes and rejects NaN;
    infinities are saturation sentinels and carry lo = 0.
    """

    __slots__ = ("prec", "hi", "lo")

    def __init__(self, prec: str, hi: float, lo: float = 0.0):
        hi = float(hi)
        lo = float(lo)
        if math.isnan(hi) or math.isnan(lo):
            raise ValueError("NaN scalar component")
        if prec == F64:
            lo = 0.0
        elif prec == DD:
            if math.isinf(hi):
                lo = 0.0
            else:
                hi, lo = two_sum(hi, lo)
                if math.isnan(lo) or math.isinf(hi):
                    lo = 0.0
        else:
            raise ValueError(f"unknown precision {prec!r}")
        object.__setattr__(self, "prec", prec)
        object.__setattr__(self, "hi", hi)
        object.__setattr__(self, "lo", lo)

    def __setattr__(self, name, value):
        raise AttributeError("Fp is immutable")

    def __float__(self) -> float:
        return self.hi

    def value(self) -> float:
        """Nearest binary64 to the represented value."""
        return self.hi

    def is_finite(self) -> bool:
        return math.isfinite(self.hi)

    def _key(self):
        return (self.hi, self.lo)

    def __eq__(self, other):
        if not isinstance(other, Fp):
            return NotImplemented
        return self._key() == other._key()

    def __lt__(self, other):
        a, b = self._key(), other._key()
        return a[0] < b[0] or (a[0] == b[0] and a[1] < b[1])

    def __le__(self, other):
        return self == other or self < other

    def __gt__(self, other):
        return not self <= other

    def __ge__(self, other):
        return not self < other

    def __hash__(self):
        return hash((self.prec, self.hi, self.lo))

    def __repr__(self):
        if self.prec == F64:
            return f"Fp(F64, {self.hi!r})"
        return f"Fp(DD, {self.hi!r}, {self.lo!r})"

    def __neg__(self):
        return Fp(self.prec, -self.hi, -self.lo)

    def to_hex(self):
        """Hex-float form: a string for F64, a [hi, lo] pair for DD."""
        if self.prec == F64:
            return self.hi.hex()
        return [self.hi.hex(), self.lo.hex()]

    @classmethod
    def from_hex(cls, obj) -> "Fp":
        if isinstance(obj, str):
            return cls(F64, float.fromhex(obj))
        hi, lo = obj
        return cls(DD, float.fromhex(hi), float.fromhex(lo))


def directed_round(v: Fp, direction: str, err: float = 0.0) -> Fp:
    """Round a scalar toward -inf ("down") or +inf ("up").

    Representable values are fixed points: with `err` = 0 (the default)
    this is the identity, since every Fp is representable.  After an
    inexact operation, pass the operation's error bound as `err`; the
    result then moves one representable step past the bound, so it
    brackets the exact value from the requested side.  Saturates at
    +-inf.
    """
    if direction == "up":
        up = True
    elif direction == "down":
        up = False
    else:
        raise ValueError(f"unknown direction {direction!r}")
    if err == 0.0 or math.isinf(v.hi):
        return v
    if v.prec == F64:
        x = v.hi + err if up else v.hi - err
        x = math.nextafter(x, INF if up else -INF)
        return Fp(F64, x)
    h, l = dd_step_out(v.hi, v.lo, err, up)
    return Fp(DD, h, l)
