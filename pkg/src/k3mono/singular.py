"""Certified enclosures of the six singular points on the generic line.

The regular domain of the Pfaffian system ends on the curve
x y (4x + y) [(36x + 13.5y + 1)^2 - (1 - 12x)^3] = 0.  Cutting it with
the line 2(x - x0) + (y - y0) = 0 through the base point leaves six
isolated intersection points.  Three of them sit on the linear factors
and are plain rational numbers; the other three are roots of a cubic
and get certified by the Krawczyk operator on the realified system.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import picard_fuchs as pf
from .errors import NotContracting
from .intervals import ComplexInterval, RealInterval
from .linalg import krawczyk_verify
from .scalars import DD

_LABELS = ("p1", "p2", "p3", "p4", "p5", "p6")


def base_fractions() -> tuple[Fraction, Fraction]:
    """Exact (x0, y0) image of the base point (lam, mu) = (2^-10, 2^-10)."""
    lam = Fraction(1, 1024)
    mu = Fraction(1, 1024)
    w = lam - Fraction(1, 4)
    return mu / w**2, mu / w**3


def frac_interval(q: Fraction, prec=DD) -> RealInterval:
    """Tightest computed enclosure of an exact rational."""
    num, den = q.numerator, q.denominator
    if abs(num) >= 2**53 or den >= 2**53:
        raise ValueError("rational components exceed exact float range")
    if den == 1:
        return RealInterval.point(float(num), prec)
    return RealInterval.point(float(num), prec) / RealInterval.point(float(den), prec)


def frac_point(qx: Fraction, qy: Fraction, prec=DD) -> pf.PointXY:
    zero = RealInterval.point(0.0, prec)
    return pf.PointXY(
        x=ComplexInterval(frac_interval(qx, prec), zero),
        y=ComplexInterval(frac_interval(qy, prec), zero),
    )


def base_point(prec=DD) -> pf.PointXY:
    x0, y0 = base_fractions()
    return frac_point(x0, y0, prec)


def locus_system(pt: pf.PointXY, base: pf.PointXY | None = None):
    """Values and complex Jacobian of the locus/line intersection system.

    Returns ((f1, f2), ((df1/dx, df1/dy), (df2/dx, df2/dy))).
    """
    if base is None:
        base = base_point(pt.prec)
    x, y = pt.x, pt.y
    u = x * 36 + y * 13.5 + 1
    v = 1 - x * 12
    v2 = v * v
    g = u * u - v2 * v
    g_x = u * 72 + v2 * 36
    g_y = u * 27
    w = x * 4 + y
    xy = x * y
    xyw = xy * w
    f1 = xyw * g
    f1_x = y * (w + x * 4) * g + xyw * g_x
    f1_y = x * (w + y) * g + xyw * g_y
    f2 = (x - base.x) * 2 + (y - base.y)
    two = ComplexInterval.point(2.0, pt.prec)
    one = ComplexInterval.point(1.0, pt.prec)
    return (f1, f2), ((f1_x, f1_y), (two, one))


@dataclass(frozen=True)
class VerifiedRoot:
    label: str
    enclosure: pf.PointXY
    uniqueness: bool

    @property
    def x(self) -> ComplexInterval:
        return self.enclosure.x

    @property
    def y(self) -> ComplexInterval:
        return self.enclosure.y


def _realified(base: pf.PointXY):
    """Wrap the 2-complex-variable system as a 4-real-variable one."""

    def fsys(xs):
        ptx = ComplexInterval(xs[0], xs[1])
        pty = ComplexInterval(xs[2], xs[3])
        (f1, f2), ((a, b), (c, d)) = locus_system(pf.PointXY(ptx, pty), base)
        vals = [f1.re, f1.im, f2.re, f2.im]
        jac = [
            [a.re, -a.im, b.re, -b.im],
            [a.im, a.re, b.im, b.re],
            [c.re, -c.im, d.re, -d.im],
            [c.im, c.re, d.im, d.re],
        ]
        return vals, jac

    return fsys


def _cubic_seeds(x0: Fraction, y0: Fraction) -> tuple[complex, complex, complex]:
    """Float roots of the discriminant factor restricted to the line.

    Substituting y = s - 2x turns (36x + 13.5y + 1)^2 - (1 - 12x)^3 into
    a cubic in x; one root is real, the other two conjugate.
    """
    s = y0 + 2 * x0
    c = 1 + Fraction(27, 2) * s
    coeffs = [1728.0, -351.0, float(18 * c + 36), float(c * c - 1)]
    roots = np.roots(coeffs)

    def polish(z: complex) -> complex:
        for _ in range(4):
            p = ((coeffs[0] * z + coeffs[1]) * z + coeffs[2]) * z + coeffs[3]
            dp = (3 * coeffs[0] * z + 2 * coeffs[1]) * z + coeffs[2]
            z = z - p / dp
        return z

    roots = sorted((polish(complex(z)) for z in roots), key=lambda z: z.imag)
    neg, real_root, pos = roots
    if abs(real_root.imag) > 1e-13:
        raise NotContracting("discriminant cubic did not yield a real root")
    return complex(real_root.real, 0.0), pos, neg


def _verify_at(seed_x: complex, base: pf.PointXY, s: Fraction,
               prec, radius: float) -> pf.PointXY:
    seed_y = complex(s) - 2 * seed_x
    seeds = [seed_x.real, seed_x.imag, seed_y.real, seed_y.imag]
    box = [RealInterval.from_floats(v - radius, v + radius, prec) for v in seeds]
    out = krawczyk_verify(_realified(base), box, x_tilde=seeds)
    return pf.PointXY(
        x=ComplexInterval(out[0], out[1]), y=ComplexInterval(out[2], out[3])
    )


def _disjoint(a: pf.PointXY, b: pf.PointXY) -> bool:
    return not (
        a.x.re.overlaps(b.x.re)
        and a.x.im.overlaps(b.x.im)
        and a.y.re.overlaps(b.y.re)
        and a.y.im.overlaps(b.y.im)
    )


def verify_singular_points(base: pf.PointXY | None = None,
                           prec=DD) -> tuple[VerifiedRoot, ...]:
    """Six pairwise-disjoint certified singular-point enclosures.

    p1, p2, p3 solve a linear factor against the line, so their
    coordinates are exact rationals; Krawczyk still runs there to
    certify local uniqueness, but the returned enclosure is the sharp
    rational one.  p4, p5, p6 come straight out of the Krawczyk box
    around Newton-polished cubic roots.
    """
    if base is None:
        base = base_point(prec)
    x0, y0 = base_fractions()
    s = y0 + 2 * x0

    rational = [
        (x0 + y0 / 2, Fraction(0)),       # y = 0
        (Fraction(0), s),                 # x = 0
        (-s / 2, 2 * s),                  # 4x + y = 0
    ]
    roots: list[VerifiedRoot] = []
    for label, (qx, qy) in zip(_LABELS, rational):
        certified = _verify_at(complex(float(qx), 0.0), base, s, prec, 1e-7)
        sharp = frac_point(qx, qy, prec)
        if not (sharp.x.subset_of(certified.x) and sharp.y.subset_of(certified.y)):
            raise NotContracting(f"{label}: exact root escaped its certified box")
        roots.append(VerifiedRoot(label, sharp, True))

    for label, seed in zip(_LABELS[3:], _cubic_seeds(x0, y0)):
        enc = _verify_at(seed, base, s, prec, 1e-7)
        roots.append(VerifiedRoot(label, enc, True))

    for i in range(6):
        for j in range(i + 1, 6):
            if not _disjoint(roots[i].enclosure, roots[j].enclosure):
                raise NotContracting(
                    f"{roots[i].label} and {roots[j].label} enclosures overlap"
                )
    return tuple(roots)
