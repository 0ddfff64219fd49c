"""Closed loops used for the analytic continuations.

Six loops based at the base point, one per singular point, each a chain
of arcs and straight segments.  Every point of every loop satisfies the
line coupling y - y0 = -2(x - x0).

Segments are stored relative to the exact rational anchor (x0, y0):
the start of a segment is x0 plus an exact binary64 offset, and circle
radii / line directions are frozen binary64 constants derived once from
the certified root midpoints.  Within a loop the offsets cancel exactly
(a - a = 0 in floats), so consecutive segments chain with no gap and
the loop closes exactly at the base point, while interval evaluation of
the anchor keeps every computed quantity an enclosure of the true path.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from functools import lru_cache

from . import elementary as el
from . import picard_fuchs as pf
from .errors import SegmentHitsSingularity
from .intervals import ComplexInterval, RealInterval
from .singular import VerifiedRoot, base_point
from .taylor import TaylorJet, exp_jet

_TUBE_SAMPLES = 64


def _unit_at(t: float) -> float:
    """e^{+-i pi t} at an integer t, exactly +-1."""
    k = int(t)
    if k != t:
        raise ValueError("arc endpoints must sit at integer t")
    return 1.0 if k % 2 == 0 else -1.0


@dataclass(frozen=True)
class ContourSegment:
    kind: str               # "line" or "arc"
    start_offset: complex   # exact offset of x(t_start) from x0
    t_start: float
    t_end: float
    radius: float = 0.0     # arc: frozen binary64
    sign: int = 1           # arc: exponent sign in e^{sign i pi t}
    direction: complex = 0j  # line: dx per unit t, frozen

    @property
    def end_offset(self) -> complex:
        if self.kind == "line":
            return self.start_offset + self.direction * (self.t_end - self.t_start)
        delta = _unit_at(self.t_end) - _unit_at(self.t_start)
        return self.start_offset + self.radius * delta

    def sample(self, t: float, x0_mid: complex) -> complex:
        """Float x(t) for coarse geometry checks (not rigorous)."""
        if self.kind == "line":
            return x0_mid + self.start_offset + self.direction * (t - self.t_start)
        e_start = _unit_at(self.t_start)
        return x0_mid + self.start_offset + self.radius * (
            cmath.exp(1j * self.sign * math.pi * t) - e_start
        )

    def x_start(self, base: pf.PointXY) -> ComplexInterval:
        return base.x + self.start_offset

    def x_end(self, base: pf.PointXY) -> ComplexInterval:
        return base.x + self.end_offset

    def to_json(self):
        c = lambda z: [z.real.hex(), z.imag.hex()]
        out = {"kind": self.kind, "start_offset": c(self.start_offset),
               "t_start": self.t_start, "t_end": self.t_end}
        if self.kind == "arc":
            out["radius"] = self.radius.hex()
            out["sign"] = self.sign
        else:
            out["direction"] = c(self.direction)
        return out


@dataclass(frozen=True)
class Contour:
    index: int
    segments: tuple[ContourSegment, ...]
    base: pf.PointXY
    circle_segment: int     # index of the loop around the singular point

    def to_json(self):
        return {"index": self.index,
                "segments": [s.to_json() for s in self.segments]}


def segment_jets(seg: ContourSegment, t0: RealInterval, p: int,
                 base: pf.PointXY):
    """(x, y, dx/dt, dy/dt) jets about t0, all enclosures.

    Lines are degree-1 exact; arcs ride on the exp jet of +-i pi t so
    coefficients come from the verified pi enclosure, never from float
    trigonometry.
    """
    prec = base.prec
    if seg.kind == "line":
        d = ComplexInterval.point(seg.direction, prec)
        c0 = base.x + seg.start_offset + d * (t0 - seg.t_start)
        zero = ComplexInterval.point(0.0, prec)
        x_jet = TaylorJet((c0, d) + (zero,) * (p - 1))
        dx_jet = TaylorJet.constant(d, p, prec)
    else:
        pi_i = el.pi(prec)
        if seg.sign < 0:
            pi_i = -pi_i
        scale = ComplexInterval(RealInterval.point(0.0, prec), pi_i)
        e_jet = exp_jet(scale, t0, p)
        shift = base.x + seg.start_offset - seg.radius * _unit_at(seg.t_start)
        coeffs = [c * seg.radius for c in e_jet.coeffs]
        coeffs[0] = coeffs[0] + shift
        x_jet = TaylorJet(tuple(coeffs))
        dx_jet = e_jet * (scale * seg.radius)
    y0 = base.y
    x0 = base.x
    y_coeffs = [y0 - (x_jet.coeffs[0] - x0) * 2]
    y_coeffs += [c * (-2) for c in x_jet.coeffs[1:]]
    y_jet = TaylorJet(tuple(y_coeffs))
    dy_jet = dx_jet * (-2)
    return x_jet, y_jet, dx_jet, dy_jet


_ROT_BITS = 30


@lru_cache(maxsize=None)
def _rot_table(prec: str):
    """e^{i pi 2^-j} for j = 1.._ROT_BITS, each straight from the series."""
    out = []
    pi_i = el.pi(prec)
    for j in range(1, _ROT_BITS + 1):
        ang = pi_i * 2.0**-j
        out.append(ComplexInterval(el.cos(ang), el.sin(ang)))
    return tuple(out)


def unit_rotation(t: float, sign: int, prec: str) -> ComplexInterval:
    """Enclosure of e^{sign i pi t} for t a multiple of 2^-30.

    The integer part contributes an exact factor of +-1; fraction bits
    select at most 30 cached dyadic rotations, so the width stays a
    small multiple of the pi-enclosure width with no trigonometric
    series evaluation per call.
    """
    n = t * 2.0**_ROT_BITS
    if not n == int(n):
        raise ValueError("t must be a multiple of 2^-30")
    n = int(n) if sign >= 0 else -int(n)
    neg = n < 0
    if neg:
        n = -n
    ipart, frac = divmod(n, 2**_ROT_BITS)
    acc = ComplexInterval.point(1.0 if ipart % 2 == 0 else -1.0, prec)
    table = _rot_table(prec)
    for j in range(1, _ROT_BITS + 1):
        if frac & (1 << (_ROT_BITS - j)):
            acc = acc * table[j - 1]
    return acc.conj() if neg else acc


@lru_cache(maxsize=None)
def _arc_jet_table(radius: float, sign: int, p: int, prec: str):
    """(C_k, D_k): rotation-free parts of the arc jets up to order p.

    C_k = radius (sign i pi)^k / k! and D_k = C_k (sign i pi); the jets
    about an exact basepoint t are rot * C_k and rot * D_k with
    rot = e^{sign i pi t}.
    """
    pi_i = el.pi(prec)
    if sign < 0:
        pi_i = -pi_i
    scale = ComplexInterval(RealInterval.point(0.0, prec), pi_i)
    cs = [ComplexInterval.point(radius, prec)]
    for k in range(1, p + 1):
        cs.append(cs[-1] * scale / k)
    ds = [c * scale for c in cs]
    return tuple(cs), tuple(ds)


def _arc_jets_from_rotation(seg: ContourSegment, rot: ComplexInterval, p: int,
                            base: pf.PointXY):
    cs, ds = _arc_jet_table(seg.radius, seg.sign, p, base.prec)
    shift = base.x + seg.start_offset - seg.radius * _unit_at(seg.t_start)
    xc = [rot * c for c in cs]
    xc[0] = xc[0] + shift
    x_jet = TaylorJet(tuple(xc))
    dx_jet = TaylorJet(tuple(rot * d for d in ds))
    y_coeffs = [base.y - (xc[0] - base.x) * 2] + [c * (-2) for c in xc[1:]]
    y_jet = TaylorJet(tuple(y_coeffs))
    return x_jet, y_jet, dx_jet, dx_jet * (-2)


def arc_point_jets(seg: ContourSegment, t_c: float, p: int, base: pf.PointXY):
    """Jets of an arc about the exact grid point t_c (same contract as
    segment_jets with a degenerate t interval, via the rotation cache)."""
    rot = unit_rotation(t_c, seg.sign, base.prec)
    return _arc_jets_from_rotation(seg, rot, p, base)


@lru_cache(maxsize=8192)
def _arc_box_rotation(h: float, sign: int, prec: str) -> ComplexInterval:
    """Enclosure of the rotation set {e^{sign i pi s} : 0 <= s <= h}."""
    ang = el.pi(prec) * RealInterval.from_floats(0.0, h, prec)
    c, s = el.cos(ang), el.sin(ang)
    if sign < 0:
        s = -s
    return ComplexInterval(c, s)


def arc_box_jets(seg: ContourSegment, t_c: float, h: float, p: int,
                 base: pf.PointXY):
    """Jets of an arc over the step box [t_c, t_c + h], both grid-exact."""
    rot = unit_rotation(t_c, seg.sign, base.prec) * _arc_box_rotation(
        h, seg.sign, base.prec
    )
    return _arc_jets_from_rotation(seg, rot, p, base)


def _chord_distance(a: complex, b: complex, z: complex) -> float:
    """Distance from z to the segment [a, b]."""
    ab = b - a
    den = abs(ab) ** 2
    if den == 0.0:
        return abs(z - a)
    s = ((z - a).real * ab.real + (z - a).imag * ab.imag) / den
    s = min(1.0, max(0.0, s))
    return abs(z - (a + s * ab))


def _box_radius(z: ComplexInterval) -> float:
    return math.hypot(z.re.rad_up(), z.im.rad_up())


def _tube_check(idx: int, seg: ContourSegment, roots, x0_mid: complex):
    if seg.kind == "arc":
        half = 0.5 * math.pi * (seg.t_end - seg.t_start) / _TUBE_SAMPLES
        sagitta = seg.radius * (1.0 - math.cos(half))
    else:
        sagitta = 0.0
    ts = [seg.t_start + (seg.t_end - seg.t_start) * k / _TUBE_SAMPLES
          for k in range(_TUBE_SAMPLES + 1)]
    pts = [seg.sample(t, x0_mid) for t in ts]
    for r in roots:
        zm = r.x.mid()
        pad = sagitta + _box_radius(r.x)
        for a, b in zip(pts[:-1], pts[1:]):
            if _chord_distance(a, b, zm) <= pad:
                raise SegmentHitsSingularity(
                    f"contour {idx}: tube around a segment meets {r.label}"
                )


def _winding_check(idx: int, seg: ContourSegment, root: VerifiedRoot,
                   x0_mid: complex):
    zm = root.x.mid()
    n = 256
    total = 0.0
    prev = None
    for k in range(n + 1):
        t = seg.t_start + (seg.t_end - seg.t_start) * k / n
        w = seg.sample(t, x0_mid) - zm
        ang = math.atan2(w.imag, w.real)
        if prev is not None:
            d = ang - prev
            if d > math.pi:
                d -= 2 * math.pi
            elif d < -math.pi:
                d += 2 * math.pi
            total += d
        prev = ang
    if abs(total - 2 * math.pi) > 1e-6:
        raise SegmentHitsSingularity(
            f"contour {idx}: circle winds {total:.6f} rad around {root.label}"
        )


def build_contour(i: int, roots: tuple[VerifiedRoot, ...],
                  base: pf.PointXY | None = None) -> Contour:
    """Assemble loop i (1..6) with frozen geometry and coarse checks."""
    if not 1 <= i <= 6:
        raise ValueError("contour index must be 1..6")
    if base is None:
        base = base_point(roots[0].enclosure.prec)
    x0m = base.x.mid()
    xm = [r.x.mid() for r in roots]

    if i == 1:
        r1 = abs(xm[0] - xm[1]) / 2
        rc1 = abs(xm[0] - r1 - x0m.real) / 2
        s1 = ContourSegment("arc", 0j, 0.0, 1.0, radius=rc1, sign=1)
        s2 = ContourSegment("arc", s1.end_offset, -1.0, 1.0, radius=r1, sign=1)
        s3 = ContourSegment("arc", s2.end_offset, -1.0, 0.0, radius=rc1, sign=-1)
        segs, circle = (s1, s2, s3), 1
    elif i == 2:
        r2 = abs(x0m)
        segs, circle = (ContourSegment("arc", 0j, 0.0, 2.0, radius=r2, sign=1),), 0
    elif i == 3:
        r3 = abs(xm[2] - x0m)
        segs, circle = (ContourSegment("arc", 0j, -1.0, 1.0, radius=r3, sign=1),), 0
    elif i == 4:
        r4 = abs(xm[3] - xm[2]) / 2
        rc4 = abs(xm[3] + r4 - x0m.real) / 2
        s1 = ContourSegment("arc", 0j, -1.0, 0.0, radius=rc4, sign=1)
        s2 = ContourSegment("arc", s1.end_offset, 0.0, 2.0, radius=r4, sign=1)
        s3 = ContourSegment("arc", s1.end_offset, 0.0, 1.0, radius=rc4, sign=-1)
        segs, circle = (s1, s2, s3), 1
    else:
        zi = xm[i - 1]
        ri = abs(zi - xm[3]) / 2
        di = zi - ri - x0m
        s1 = ContourSegment("line", 0j, 0.0, 1.0, direction=di)
        s2 = ContourSegment("arc", s1.end_offset, -1.0, 1.0, radius=ri, sign=1)
        s3 = ContourSegment("line", s1.end_offset, 0.0, 1.0, direction=-di)
        segs, circle = (s1, s2, s3), 1

    for a, b in zip(segs[:-1], segs[1:]):
        if a.end_offset != b.start_offset:
            raise SegmentHitsSingularity(f"contour {i}: segment chain has a gap")
    if segs[-1].end_offset != 0j:
        raise SegmentHitsSingularity(f"contour {i}: loop does not close exactly")

    for seg in segs:
        _tube_check(i, seg, roots, x0m)
    _winding_check(i, segs[circle], roots[i - 1], x0m)
    return Contour(index=i, segments=segs, base=base, circle_segment=circle)
