"""Real and rectangular complex interval arithmetic.

Endpoints are `scalars.Fp` values; every operation returns a superset of
the exact set image, with outward rounding handled by the directed
scalar kernels.  Precision (binary64 or double-double) is a property of
the operands and never mixes silently.
"""

from __future__ import annotations

import math

from . import scalars as sc
from .errors import DivisorContainsZero, EmptyIntersection
from .scalars import DD, F64, Fp

_INF = math.inf


def _dd_lt(ah, al, bh, bl):
    return ah < bh or (ah == bh and al < bl)


def _dd_le(ah, al, bh, bl):
    return ah < bh or (ah == bh and al <= bl)


def _f64_down(h, l):
    """Largest binary64 <= the DD value (h, l)."""
    if l >= 0.0:
        return h
    return math.nextafter(h, -_INF)


def _f64_up(h, l):
    if l <= 0.0:
        return h
    return math.nextafter(h, _INF)


class RealInterval:
    """Closed interval [inf, sup] with Fp endpoints of one precision.

    Stored as raw components (ih, il) and (sh, sl) for speed; `inf` and
    `sup` wrap them on access.  The empty set is never produced by
    arithmetic; `intersect` raises instead of fabricating one.
    """

    __slots__ = ("prec", "ih", "il", "sh", "sl")

    def __init__(self, prec, ih, il, sh, sl):
        if math.isnan(ih) or math.isnan(il):
            ih, il = -_INF, 0.0
        if math.isnan(sh) or math.isnan(sl):
            sh, sl = _INF, 0.0
        if math.isinf(ih):
            il = 0.0
        if math.isinf(sh):
            sl = 0.0
        if not _dd_le(ih, il, sh, sl):
            raise ValueError(f"inverted interval [{ih}+{il}, {sh}+{sl}]")
        self.prec = prec
        self.ih = ih
        self.il = il
        self.sh = sh
        self.sl = sl

    # -- construction -----------------------------------------------------

    @classmethod
    def point(cls, x, prec=DD):
        x = float(x)
        return cls(prec, x, 0.0, x, 0.0)

    @classmethod
    def from_floats(cls, lo, hi, prec=DD):
        return cls(prec, float(lo), 0.0, float(hi), 0.0)

    @classmethod
    def from_fp(cls, inf: Fp, sup: Fp):
        if inf.prec != sup.prec:
            raise ValueError("endpoint precision mismatch")
        return cls(inf.prec, inf.hi, inf.lo, sup.hi, sup.lo)

    # -- views ------------------------------------------------------------

    @property
    def inf(self) -> Fp:
        return Fp(self.prec, self.ih, self.il)

    @property
    def sup(self) -> Fp:
        return Fp(self.prec, self.sh, self.sl)

    def mid(self) -> float:
        """Approximate midpoint as a binary64 (not a rigorous quantity)."""
        m = 0.5 * self.ih + 0.5 * self.sh
        if math.isfinite(m):
            m += 0.5 * (self.il + self.sl)
        return m

    def mid_dd(self) -> "RealInterval":
        """Point interval at the double-double midpoint (not rigorous)."""
        mh, ml = sc.dd_add(self.ih, self.il, self.sh, self.sl)
        mh, ml = 0.5 * mh, 0.5 * ml
        return RealInterval(self.prec, mh, ml, mh, ml)

    def rad_up(self) -> float:
        """Rigorous binary64 upper bound on (sup - inf) / 2."""
        dh, dl = sc.dd_add_dir(self.sh, self.sl, -self.ih, -self.il, True)
        w = _f64_up(dh, dl)
        return 0.5 * w if math.isfinite(w) else w

    def wid_up(self) -> float:
        dh, dl = sc.dd_add_dir(self.sh, self.sl, -self.ih, -self.il, True)
        return _f64_up(dh, dl)

    def is_point(self) -> bool:
        return self.ih == self.sh and self.il == self.sl

    def is_finite(self) -> bool:
        return math.isfinite(self.ih) and math.isfinite(self.sh)

    def __repr__(self):
        return f"RealInterval({self.prec}, [{self.ih}{self.il:+g}, {self.sh}{self.sl:+g}])"

    # -- predicates ---------------------------------------------------------

    def contains(self, x) -> bool:
        """Membership of an exact float (or Fp of matching precision)."""
        if isinstance(x, Fp):
            xh, xl = x.hi, x.lo
        else:
            xh, xl = float(x), 0.0
        return _dd_le(self.ih, self.il, xh, xl) and _dd_le(xh, xl, self.sh, self.sl)

    def contains_zero(self) -> bool:
        return self.contains(0.0)

    def strictly_positive(self) -> bool:
        return self.ih > 0.0 or (self.ih == 0.0 and self.il > 0.0)

    def strictly_negative(self) -> bool:
        return self.sh < 0.0 or (self.sh == 0.0 and self.sl < 0.0)

    def subset_of(self, other: "RealInterval") -> bool:
        return _dd_le(other.ih, other.il, self.ih, self.il) and _dd_le(
            self.sh, self.sl, other.sh, other.sl
        )

    def interior_subset_of(self, other: "RealInterval") -> bool:
        return _dd_lt(other.ih, other.il, self.ih, self.il) and _dd_lt(
            self.sh, self.sl, other.sh, other.sl
        )

    def overlaps(self, other: "RealInterval") -> bool:
        return _dd_le(self.ih, self.il, other.sh, other.sl) and _dd_le(
            other.ih, other.il, self.sh, self.sl
        )

    # -- set operations -----------------------------------------------------

    def hull(self, other: "RealInterval") -> "RealInterval":
        a, b = self, _coerce(other, self.prec)
        ih, il = (a.ih, a.il) if _dd_le(a.ih, a.il, b.ih, b.il) else (b.ih, b.il)
        sh, sl = (a.sh, a.sl) if _dd_le(b.sh, b.sl, a.sh, a.sl) else (b.sh, b.sl)
        return RealInterval(a.prec, ih, il, sh, sl)

    def intersect(self, other: "RealInterval") -> "RealInterval":
        a, b = self, _coerce(other, self.prec)
        if not a.overlaps(b):
            raise EmptyIntersection(f"{a!r} and {b!r} are disjoint")
        ih, il = (a.ih, a.il) if _dd_le(b.ih, b.il, a.ih, a.il) else (b.ih, b.il)
        sh, sl = (a.sh, a.sl) if _dd_le(a.sh, a.sl, b.sh, b.sl) else (b.sh, b.sl)
        return RealInterval(a.prec, ih, il, sh, sl)

    def inflate(self, delta: float) -> "RealInterval":
        """Pad both endpoints outward by at least `delta` >= 0."""
        if self.prec == F64:
            return RealInterval(
                F64,
                sc.f64_add_dir(self.ih, -delta, False),
                0.0,
                sc.f64_add_dir(self.sh, delta, True),
                0.0,
            )
        ih, il = sc.dd_add_dir(self.ih, self.il, -delta, 0.0, False)
        sh, sl = sc.dd_add_dir(self.sh, self.sl, delta, 0.0, True)
        return RealInterval(DD, ih, il, sh, sl)

    # -- arithmetic ---------------------------------------------------------

    def __neg__(self):
        return RealInterval(self.prec, -self.sh, -self.sl, -self.ih, -self.il)

    def __add__(self, other):
        b = _coerce(other, self.prec)
        if self.prec == F64:
            return RealInterval(
                F64,
                sc.f64_add_dir(self.ih, b.ih, False),
                0.0,
                sc.f64_add_dir(self.sh, b.sh, True),
                0.0,
            )
        ih, il = sc.dd_add_dir(self.ih, self.il, b.ih, b.il, False)
        sh, sl = sc.dd_add_dir(self.sh, self.sl, b.sh, b.sl, True)
        return RealInterval(DD, ih, il, sh, sl)

    __radd__ = __add__

    def __sub__(self, other):
        return self + (-_coerce(other, self.prec))

    def __rsub__(self, other):
        return (-self) + _coerce(other, self.prec)

    def __mul__(self, other):
        b = _coerce(other, self.prec)
        if self.prec == F64:
            dn = min(
                sc.f64_mul_dir(self.ih, b.ih, False),
                sc.f64_mul_dir(self.ih, b.sh, False),
                sc.f64_mul_dir(self.sh, b.ih, False),
                sc.f64_mul_dir(self.sh, b.sh, False),
            )
            up = max(
                sc.f64_mul_dir(self.ih, b.ih, True),
                sc.f64_mul_dir(self.ih, b.sh, True),
                sc.f64_mul_dir(self.sh, b.ih, True),
                sc.f64_mul_dir(self.sh, b.sh, True),
            )
            return RealInterval(F64, dn, 0.0, up, 0.0)
        return _dd_mul_ri(self, b)

    __rmul__ = __mul__

    def __truediv__(self, other):
        b = _coerce(other, self.prec)
        if b.contains_zero():
            raise DivisorContainsZero(f"divisor {b!r} contains zero")
        if self.prec == F64:
            dn = min(
                sc.f64_div_dir(self.ih, b.ih, False),
                sc.f64_div_dir(self.ih, b.sh, False),
                sc.f64_div_dir(self.sh, b.ih, False),
                sc.f64_div_dir(self.sh, b.sh, False),
            )
            up = max(
                sc.f64_div_dir(self.ih, b.ih, True),
                sc.f64_div_dir(self.ih, b.sh, True),
                sc.f64_div_dir(self.sh, b.ih, True),
                sc.f64_div_dir(self.sh, b.sh, True),
            )
            return RealInterval(F64, dn, 0.0, up, 0.0)
        return _dd_div_ri(self, b)

    def __rtruediv__(self, other):
        return _coerce(other, self.prec) / self

    def sqr(self) -> "RealInterval":
        """Tight square: [0, max] when the interval straddles zero."""
        inf_nonneg = self.ih > 0.0 or (self.ih == 0.0 and self.il >= 0.0)
        sup_nonpos = self.sh < 0.0 or (self.sh == 0.0 and self.sl <= 0.0)
        if inf_nonneg:
            r = self * self
        elif sup_nonpos:
            n = -self
            r = n * n
        else:
            m = self.abs()
            r = m * m
            return RealInterval(self.prec, 0.0, 0.0, r.sh, r.sl)
        if r.ih > 0.0 or (r.ih == 0.0 and r.il >= 0.0):
            return r
        return RealInterval(self.prec, 0.0, 0.0, r.sh, r.sl)

    def abs(self) -> "RealInterval":
        """Exact |.| image (negation and max are exact)."""
        if self.ih >= 0.0 and (self.ih > 0.0 or self.il >= 0.0):
            return self
        if self.sh <= 0.0 and (self.sh < 0.0 or self.sl <= 0.0):
            return -self
        nh, nl = -self.ih, -self.il
        if _dd_lt(nh, nl, self.sh, self.sl):
            nh, nl = self.sh, self.sl
        return RealInterval(self.prec, 0.0, 0.0, nh, nl)

    def mul_pow2(self, k: int) -> "RealInterval":
        """Exact scaling by 2**k (saturates outward on overflow)."""
        ih, il = _ldexp_pair(self.ih, self.il, k, up=False)
        sh, sl = _ldexp_pair(self.sh, self.sl, k, up=True)
        return RealInterval(self.prec, ih, il, sh, sl)

    # -- precision moves ------------------------------------------------------

    def to_dd(self) -> "RealInterval":
        return self if self.prec == DD else RealInterval(DD, self.ih, 0.0, self.sh, 0.0)

    def to_f64(self) -> "RealInterval":
        if self.prec == F64:
            return self
        return RealInterval(F64, _f64_down(self.ih, self.il), 0.0, _f64_up(self.sh, self.sl), 0.0)

    # -- serialization ----------------------------------------------------------

    def to_json(self):
        return {"inf": self.inf.to_hex(), "sup": self.sup.to_hex()}

    @classmethod
    def from_json(cls, obj):
        return cls.from_fp(Fp.from_hex(obj["inf"]), Fp.from_hex(obj["sup"]))


_F64_MAX = 1.7976931348623157e308


def _ldexp_pair(h, l, k, up):
    try:
        return math.ldexp(h, k), math.ldexp(l, k)
    except OverflowError:
        if up:
            return (_INF, 0.0) if h > 0.0 else (-_F64_MAX, 0.0)
        return (_F64_MAX, 0.0) if h > 0.0 else (-_INF, 0.0)


def _coerce(x, prec) -> RealInterval:
    if isinstance(x, RealInterval):
        if x.prec != prec:
            raise ValueError(f"precision mismatch: {x.prec} vs {prec}")
        return x
    if isinstance(x, (int, float)):
        return RealInterval.point(x, prec)
    raise TypeError(f"cannot treat {type(x).__name__} as an interval")


def _dd_corner_hull(cands, eps) -> RealInterval:
    mn = mx = cands[0]
    big = abs(cands[0][0])
    for p in cands[1:]:
        if _dd_lt(p[0], p[1], mn[0], mn[1]):
            mn = p
        if _dd_lt(mx[0], mx[1], p[0], p[1]):
            mx = p
        if abs(p[0]) > big:
            big = abs(p[0])
    err = eps * big + sc.DD_ABS_TINY
    ih, il = sc.dd_step_out(mn[0], mn[1], err, False)
    sh, sl = sc.dd_step_out(mx[0], mx[1], err, True)
    return RealInterval(DD, ih, il, sh, sl)


def _is_zero_point(a: RealInterval) -> bool:
    return a.ih == 0.0 and a.il == 0.0 and a.sh == 0.0 and a.sl == 0.0


def _dd_mul_ri(a: RealInterval, b: RealInterval) -> RealInterval:
    if _is_zero_point(a) or _is_zero_point(b):
        return RealInterval(DD, 0.0, 0.0, 0.0, 0.0)
    if b.is_point():
        cands = (
            sc.dd_mul(a.ih, a.il, b.ih, b.il),
            sc.dd_mul(a.sh, a.sl, b.ih, b.il),
        )
    elif a.is_point():
        cands = (
            sc.dd_mul(a.ih, a.il, b.ih, b.il),
            sc.dd_mul(a.ih, a.il, b.sh, b.sl),
        )
    else:
        cands = (
            sc.dd_mul(a.ih, a.il, b.ih, b.il),
            sc.dd_mul(a.ih, a.il, b.sh, b.sl),
            sc.dd_mul(a.sh, a.sl, b.ih, b.il),
            sc.dd_mul(a.sh, a.sl, b.sh, b.sl),
        )
    return _dd_corner_hull(cands, sc.DD_EPS_MUL)


def _dd_div_ri(a: RealInterval, b: RealInterval) -> RealInterval:
    if _is_zero_point(a):
        return RealInterval(DD, 0.0, 0.0, 0.0, 0.0)
    if b.is_point():
        cands = (
            sc.dd_div(a.ih, a.il, b.ih, b.il),
            sc.dd_div(a.sh, a.sl, b.ih, b.il),
        )
    elif a.is_point():
        cands = (
            sc.dd_div(a.ih, a.il, b.ih, b.il),
            sc.dd_div(a.ih, a.il, b.sh, b.sl),
        )
    else:
        cands = (
            sc.dd_div(a.ih, a.il, b.ih, b.il),
            sc.dd_div(a.ih, a.il, b.sh, b.sl),
            sc.dd_div(a.sh, a.sl, b.ih, b.il),
            sc.dd_div(a.sh, a.sl, b.sh, b.sl),
        )
    return _dd_corner_hull(cands, sc.DD_EPS_DIV)


def ri_arith(a: RealInterval, b: RealInterval, op: str) -> RealInterval:
    """Dispatch form of +, -, *, / (accepts the usual unicode spellings)."""
    if op in ("+",):
        return a + b
    if op in ("-", "−"):
        return a - b
    if op in ("*", "×"):
        return a * b
    if op in ("/", "÷"):
        return a / b
    raise ValueError(f"unknown op {op!r}")


class ComplexInterval:
    """Rectangle re x im; midpoint and radius are always derived."""

    __slots__ = ("re", "im")

    def __init__(self, re: RealInterval, im: RealInterval):
        if re.prec != im.prec:
            raise ValueError("component precision mismatch")
        self.re = re
        self.im = im

    @property
    def prec(self):
        return self.re.prec

    @classmethod
    def point(cls, z, prec=DD):
        z = complex(z)
        return cls(RealInterval.point(z.real, prec), RealInterval.point(z.imag, prec))

    @classmethod
    def from_real(cls, re: RealInterval):
        return cls(re, RealInterval.point(0.0, re.prec))

    def mid(self) -> complex:
        return complex(self.re.mid(), self.im.mid())

    def mid_dd(self) -> "ComplexInterval":
        return ComplexInterval(self.re.mid_dd(), self.im.mid_dd())

    def rad_up(self) -> float:
        return max(self.re.rad_up(), self.im.rad_up())

    def is_finite(self) -> bool:
        return self.re.is_finite() and self.im.is_finite()

    def __repr__(self):
        return f"ComplexInterval({self.re!r}, {self.im!r})"

    def contains(self, z) -> bool:
        z = complex(z)
        return self.re.contains(z.real) and self.im.contains(z.imag)

    def contains_zero(self) -> bool:
        return self.re.contains_zero() and self.im.contains_zero()

    def subset_of(self, other: "ComplexInterval") -> bool:
        return self.re.subset_of(other.re) and self.im.subset_of(other.im)

    def interior_subset_of(self, other: "ComplexInterval") -> bool:
        return self.re.interior_subset_of(other.re) and self.im.interior_subset_of(other.im)

    def overlaps(self, other: "ComplexInterval") -> bool:
        return self.re.overlaps(other.re) and self.im.overlaps(other.im)

    def hull(self, other: "ComplexInterval") -> "ComplexInterval":
        return ComplexInterval(self.re.hull(other.re), self.im.hull(other.im))

    def conj(self) -> "ComplexInterval":
        return ComplexInterval(self.re, -self.im)

    def __neg__(self):
        return ComplexInterval(-self.re, -self.im)

    def __add__(self, other):
        b = _coerce_ci(other, self.prec)
        return ComplexInterval(self.re + b.re, self.im + b.im)

    __radd__ = __add__

    def __sub__(self, other):
        b = _coerce_ci(other, self.prec)
        return ComplexInterval(self.re - b.re, self.im - b.im)

    def __rsub__(self, other):
        return (-self) + _coerce_ci(other, self.prec)

    def __mul__(self, other):
        b = _coerce_ci(other, self.prec)
        if b.im.is_point() and b.im.ih == 0.0 and b.im.il == 0.0:
            return ComplexInterval(self.re * b.re, self.im * b.re)
        if self.im.is_point() and self.im.ih == 0.0 and self.im.il == 0.0:
            return ComplexInterval(self.re * b.re, self.re * b.im)
        return ComplexInterval(
            self.re * b.re - self.im * b.im, self.re * b.im + self.im * b.re
        )

    __rmul__ = __mul__

    def abs_sqr(self) -> RealInterval:
        return self.re.sqr() + self.im.sqr()

    def __truediv__(self, other):
        b = _coerce_ci(other, self.prec)
        if b.im.is_point() and b.im.ih == 0.0 and b.im.il == 0.0:
            return ComplexInterval(self.re / b.re, self.im / b.re)
        den = b.abs_sqr()
        if den.contains_zero():
            raise DivisorContainsZero(f"divisor {b!r} contains zero")
        nre = self.re * b.re + self.im * b.im
        nim = self.im * b.re - self.re * b.im
        return ComplexInterval(nre / den, nim / den)

    def __rtruediv__(self, other):
        return _coerce_ci(other, self.prec) / self

    def mul_pow2(self, k: int) -> "ComplexInterval":
        return ComplexInterval(self.re.mul_pow2(k), self.im.mul_pow2(k))

    def mul_i(self) -> "ComplexInterval":
        """Exact multiplication by the imaginary unit."""
        return ComplexInterval(-self.im, self.re)

    def to_dd(self) -> "ComplexInterval":
        return ComplexInterval(self.re.to_dd(), self.im.to_dd())

    def to_f64(self) -> "ComplexInterval":
        return ComplexInterval(self.re.to_f64(), self.im.to_f64())

    def to_json(self):
        return {"re": self.re.to_json(), "im": self.im.to_json()}

    @classmethod
    def from_json(cls, obj):
        return cls(RealInterval.from_json(obj["re"]), RealInterval.from_json(obj["im"]))


def _coerce_ci(x, prec) -> ComplexInterval:
    if isinstance(x, ComplexInterval):
        if x.prec != prec:
            raise ValueError(f"precision mismatch: {x.prec} vs {prec}")
        return x
    if isinstance(x, RealInterval):
        return ComplexInterval.from_real(_coerce(x, prec))
    if isinstance(x, (int, float, complex)):
        return ComplexInterval.point(x, prec)
    raise TypeError(f"cannot treat {type(x).__name__} as a complex interval")


def ci_arith(a: ComplexInterval, b: ComplexInterval, op: str) -> ComplexInterval:
    if op in ("+",):
        return a + b
    if op in ("-", "−"):
        return a - b
    if op in ("*", "×"):
        return a * b
    if op in ("/", "÷"):
        return a / b
    raise ValueError(f"unknown op {op!r}")
