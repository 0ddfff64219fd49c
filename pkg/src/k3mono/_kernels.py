"""Compiled mirrors of the interval kernels for the integration hot path.

Layout: a real interval is four binary64 words (inf_hi, inf_lo, sup_hi,
sup_lo); a complex interval is eight (re block then im block); an order-p
jet is a (p+1, 8) array; a 4x4 matrix of intervals is (4, 4, 8).

Every function here replicates, operation for operation, the arithmetic
of the pure-Python interval layer (same error-free transforms, same
outward-rounding bounds, same shortcut branches), so results agree bit
for bit with the reference objects.  The test suite enforces that
equality; any drift between the two layers is a bug, not a tolerance.

Division by an interval containing zero is reported through an integer
status cell instead of an exception so kernels stay nopython-compatible;
the JetArr wrapper turns a nonzero status back into the usual error.
"""

from __future__ import annotations

import math

import numpy as np
from numba import njit

from .errors import DivisorContainsZero
from .intervals import ComplexInterval, RealInterval
from .scalars import DD, F64
from .taylor import TaylorJet

_INF = math.inf
_SPLITTER = 134217729.0
_EPS_ADD = 2.0**-103
_EPS_MUL = 2.0**-101
_EPS_DIV = 2.0**-97
_ABS_TINY = 1e-322
_F64_MAX = 1.7976931348623157e308


# -- scalar double-double cores ---------------------------------------------


@njit(cache=True)
def _two_sum(a, b):
    s = a + b
    bb = s - a
    e = (a - (s - bb)) + (b - bb)
    return s, e


@njit(cache=True)
def _quick_two_sum(a, b):
    s = a + b
    e = b - (s - a)
    return s, e


@njit(cache=True)
def _two_prod(a, b):
    p = a * b
    t = _SPLITTER * a
    ah = t - (t - a)
    al = a - ah
    t = _SPLITTER * b
    bh = t - (t - b)
    bl = b - bh
    e = ((ah * bh - p) + ah * bl + al * bh) + al * bl
    return p, e


@njit(cache=True)
def _dd_add(ah, al, bh, bl):
    sh, sl = _two_sum(ah, bh)
    th, tl = _two_sum(al, bl)
    c = sl + th
    vh, vl = _quick_two_sum(sh, c)
    w = tl + vl
    return _quick_two_sum(vh, w)


@njit(cache=True)
def _dd_mul(ah, al, bh, bl):
    ph, pl = _two_prod(ah, bh)
    pl += ah * bl + al * bh + al * bl
    return _quick_two_sum(ph, pl)


@njit(cache=True)
def _dd_mul_f64(ah, al, b):
    ph, pl = _two_prod(ah, b)
    pl += al * b
    return _quick_two_sum(ph, pl)


@njit(cache=True)
def _dd_div(ah, al, bh, bl):
    q1 = ah / bh
    ph, pl = _dd_mul_f64(bh, bl, q1)
    rh, rl = _dd_add(ah, al, -ph, -pl)
    q2 = rh / bh
    ph, pl = _dd_mul_f64(bh, bl, q2)
    rh, rl = _dd_add(rh, rl, -ph, -pl)
    q3 = rh / bh
    qh, ql = _quick_two_sum(q1, q2)
    return _dd_add(qh, ql, q3, 0.0)


@njit(cache=True)
def _dd_step_out(h, l, err, up):
    if err != 0.0:
        if up:
            l = math.nextafter(l + err, _INF)
        else:
            l = math.nextafter(l - err, -_INF)
    return _two_sum(h, l)


@njit(cache=True)
def _dd_add_dir(ah, al, bh, bl, up):
    h, l = _dd_add(ah, al, bh, bl)
    return _dd_step_out(h, l, _EPS_ADD * abs(h), up)


@njit(cache=True)
def _f64_add_dir(a, b, up):
    s, e = _two_sum(a, b)
    if math.isinf(s):
        if (s > 0.0) == up:
            return s
        return _F64_MAX if s > 0.0 else -_F64_MAX
    if up:
        return math.nextafter(s, _INF) if e > 0.0 else s
    return math.nextafter(s, -_INF) if e < 0.0 else s


@njit(cache=True)
def _f64_mul_dir(a, b, up):
    p, e = _two_prod(a, b)
    if math.isinf(p):
        if (p > 0.0) == up:
            return p
        return _F64_MAX if p > 0.0 else -_F64_MAX
    if up:
        return math.nextafter(p, _INF) if e > 0.0 else p
    return math.nextafter(p, -_INF) if e < 0.0 else p


@njit(cache=True)
def _f64_div_dir(a, b, up):
    q = a / b
    p, e = _two_prod(q, b)
    if p == a and e == 0.0:
        return q
    return math.nextafter(q, _INF if up else -_INF)


# -- real interval ops (4-word tuples) ----------------------------------------


@njit(cache=True)
def _dd_lt(ah, al, bh, bl):
    return ah < bh or (ah == bh and al < bl)


@njit(cache=True)
def _ri_contains_zero(a0, a1, a2, a3):
    lo = a0 < 0.0 or (a0 == 0.0 and a1 <= 0.0)
    hi = a2 > 0.0 or (a2 == 0.0 and a3 >= 0.0)
    return lo and hi


@njit(cache=True)
def _ri_neg(a0, a1, a2, a3):
    return -a2, -a3, -a0, -a1


@njit(cache=True)
def _ri_add(a0, a1, a2, a3, b0, b1, b2, b3, dd):
    if dd:
        ih, il = _dd_add_dir(a0, a1, b0, b1, False)
        sh, sl = _dd_add_dir(a2, a3, b2, b3, True)
        return ih, il, sh, sl
    return _f64_add_dir(a0, b0, False), 0.0, _f64_add_dir(a2, b2, True), 0.0


@njit(cache=True)
def _ri_sub(a0, a1, a2, a3, b0, b1, b2, b3, dd):
    n0, n1, n2, n3 = _ri_neg(b0, b1, b2, b3)
    return _ri_add(a0, a1, a2, a3, n0, n1, n2, n3, dd)


@njit(cache=True)
def _hull4(c0h, c0l, c1h, c1l, c2h, c2l, c3h, c3l, eps):
    mnh, mnl = c0h, c0l
    mxh, mxl = c0h, c0l
    big = abs(c0h)
    if _dd_lt(c1h, c1l, mnh, mnl):
        mnh, mnl = c1h, c1l
    if _dd_lt(mxh, mxl, c1h, c1l):
        mxh, mxl = c1h, c1l
    if abs(c1h) > big:
        big = abs(c1h)
    if _dd_lt(c2h, c2l, mnh, mnl):
        mnh, mnl = c2h, c2l
    if _dd_lt(mxh, mxl, c2h, c2l):
        mxh, mxl = c2h, c2l
    if abs(c2h) > big:
        big = abs(c2h)
    if _dd_lt(c3h, c3l, mnh, mnl):
        mnh, mnl = c3h, c3l
    if _dd_lt(mxh, mxl, c3h, c3l):
        mxh, mxl = c3h, c3l
    if abs(c3h) > big:
        big = abs(c3h)
    err = eps * big + _ABS_TINY
    ih, il = _dd_step_out(mnh, mnl, err, False)
    sh, sl = _dd_step_out(mxh, mxl, err, True)
    return ih, il, sh, sl


@njit(cache=True)
def _ri_mul(a0, a1, a2, a3, b0, b1, b2, b3, dd):
    if not dd:
        dn = min(
            _f64_mul_dir(a0, b0, False),
            _f64_mul_dir(a0, b2, False),
            _f64_mul_dir(a2, b0, False),
            _f64_mul_dir(a2, b2, False),
        )
        up = max(
            _f64_mul_dir(a0, b0, True),
            _f64_mul_dir(a0, b2, True),
            _f64_mul_dir(a2, b0, True),
            _f64_mul_dir(a2, b2, True),
        )
        return dn, 0.0, up, 0.0
    if (a0 == 0.0 and a1 == 0.0 and a2 == 0.0 and a3 == 0.0) or (
        b0 == 0.0 and b1 == 0.0 and b2 == 0.0 and b3 == 0.0
    ):
        return 0.0, 0.0, 0.0, 0.0
    if b0 == b2 and b1 == b3:
        c0h, c0l = _dd_mul(a0, a1, b0, b1)
        c1h, c1l = _dd_mul(a2, a3, b0, b1)
        return _hull4(c0h, c0l, c1h, c1l, c0h, c0l, c1h, c1l, _EPS_MUL)
    if a0 == a2 and a1 == a3:
        c0h, c0l = _dd_mul(a0, a1, b0, b1)
        c1h, c1l = _dd_mul(a0, a1, b2, b3)
        return _hull4(c0h, c0l, c1h, c1l, c0h, c0l, c1h, c1l, _EPS_MUL)
    c0h, c0l = _dd_mul(a0, a1, b0, b1)
    c1h, c1l = _dd_mul(a0, a1, b2, b3)
    c2h, c2l = _dd_mul(a2, a3, b0, b1)
    c3h, c3l = _dd_mul(a2, a3, b2, b3)
    return _hull4(c0h, c0l, c1h, c1l, c2h, c2l, c3h, c3l, _EPS_MUL)


@njit(cache=True)
def _ri_div(a0, a1, a2, a3, b0, b1, b2, b3, dd):
    if _ri_contains_zero(b0, b1, b2, b3):
        return 1, 0.0, 0.0, 0.0, 0.0
    if not dd:
        dn = min(
            _f64_div_dir(a0, b0, False),
            _f64_div_dir(a0, b2, False),
            _f64_div_dir(a2, b0, False),
            _f64_div_dir(a2, b2, False),
        )
        up = max(
            _f64_div_dir(a0, b0, True),
            _f64_div_dir(a0, b2, True),
            _f64_div_dir(a2, b0, True),
            _f64_div_dir(a2, b2, True),
        )
        return 0, dn, 0.0, up, 0.0
    if a0 == 0.0 and a1 == 0.0 and a2 == 0.0 and a3 == 0.0:
        return 0, 0.0, 0.0, 0.0, 0.0
    if b0 == b2 and b1 == b3:
        c0h, c0l = _dd_div(a0, a1, b0, b1)
        c1h, c1l = _dd_div(a2, a3, b0, b1)
        ih, il, sh, sl = _hull4(c0h, c0l, c1h, c1l, c0h, c0l, c1h, c1l, _EPS_DIV)
        return 0, ih, il, sh, sl
    if a0 == a2 and a1 == a3:
        c0h, c0l = _dd_div(a0, a1, b0, b1)
        c1h, c1l = _dd_div(a0, a1, b2, b3)
        ih, il, sh, sl = _hull4(c0h, c0l, c1h, c1l, c0h, c0l, c1h, c1l, _EPS_DIV)
        return 0, ih, il, sh, sl
    c0h, c0l = _dd_div(a0, a1, b0, b1)
    c1h, c1l = _dd_div(a0, a1, b2, b3)
    c2h, c2l = _dd_div(a2, a3, b0, b1)
    c3h, c3l = _dd_div(a2, a3, b2, b3)
    ih, il, sh, sl = _hull4(c0h, c0l, c1h, c1l, c2h, c2l, c3h, c3l, _EPS_DIV)
    return 0, ih, il, sh, sl


@njit(cache=True)
def _ri_abs(a0, a1, a2, a3):
    if a0 >= 0.0 and (a0 > 0.0 or a1 >= 0.0):
        return a0, a1, a2, a3
    if a2 <= 0.0 and (a2 < 0.0 or a3 <= 0.0):
        return _ri_neg(a0, a1, a2, a3)
    nh, nl = -a0, -a1
    if _dd_lt(nh, nl, a2, a3):
        nh, nl = a2, a3
    return 0.0, 0.0, nh, nl


@njit(cache=True)
def _ri_sqr(a0, a1, a2, a3, dd):
    inf_nonneg = a0 > 0.0 or (a0 == 0.0 and a1 >= 0.0)
    sup_nonpos = a2 < 0.0 or (a2 == 0.0 and a3 <= 0.0)
    if inf_nonneg:
        r0, r1, r2, r3 = _ri_mul(a0, a1, a2, a3, a0, a1, a2, a3, dd)
    elif sup_nonpos:
        n0, n1, n2, n3 = _ri_neg(a0, a1, a2, a3)
        r0, r1, r2, r3 = _ri_mul(n0, n1, n2, n3, n0, n1, n2, n3, dd)
    else:
        m0, m1, m2, m3 = _ri_abs(a0, a1, a2, a3)
        r0, r1, r2, r3 = _ri_mul(m0, m1, m2, m3, m0, m1, m2, m3, dd)
        return 0.0, 0.0, r2, r3
    if r0 > 0.0 or (r0 == 0.0 and r1 >= 0.0):
        return r0, r1, r2, r3
    return 0.0, 0.0, r2, r3


# -- complex interval ops (rows of 8) ------------------------------------------


@njit(cache=True)
def _ci_add(a, b, out, dd):
    out[0], out[1], out[2], out[3] = _ri_add(
        a[0], a[1], a[2], a[3], b[0], b[1], b[2], b[3], dd
    )
    out[4], out[5], out[6], out[7] = _ri_add(
        a[4], a[5], a[6], a[7], b[4], b[5], b[6], b[7], dd
    )


@njit(cache=True)
def _ci_sub(a, b, out, dd):
    out[0], out[1], out[2], out[3] = _ri_sub(
        a[0], a[1], a[2], a[3], b[0], b[1], b[2], b[3], dd
    )
    out[4], out[5], out[6], out[7] = _ri_sub(
        a[4], a[5], a[6], a[7], b[4], b[5], b[6], b[7], dd
    )


@njit(cache=True)
def _im_is_zero_point(r, off):
    return r[off] == 0.0 and r[off + 1] == 0.0 and r[off + 2] == 0.0 and r[off + 3] == 0.0


@njit(cache=True)
def _ci_mul(a, b, out, dd):
    if _im_is_zero_point(b, 4):
        out[0], out[1], out[2], out[3] = _ri_mul(
            a[0], a[1], a[2], a[3], b[0], b[1], b[2], b[3], dd
        )
        out[4], out[5], out[6], out[7] = _ri_mul(
            a[4], a[5], a[6], a[7], b[0], b[1], b[2], b[3], dd
        )
        return
    if _im_is_zero_point(a, 4):
        out[0], out[1], out[2], out[3] = _ri_mul(
            a[0], a[1], a[2], a[3], b[0], b[1], b[2], b[3], dd
        )
        out[4], out[5], out[6], out[7] = _ri_mul(
            a[0], a[1], a[2], a[3], b[4], b[5], b[6], b[7], dd
        )
        return
    p0, p1, p2, p3 = _ri_mul(a[0], a[1], a[2], a[3], b[0], b[1], b[2], b[3], dd)
    q0, q1, q2, q3 = _ri_mul(a[4], a[5], a[6], a[7], b[4], b[5], b[6], b[7], dd)
    out[0], out[1], out[2], out[3] = _ri_sub(p0, p1, p2, p3, q0, q1, q2, q3, dd)
    r0, r1, r2, r3 = _ri_mul(a[0], a[1], a[2], a[3], b[4], b[5], b[6], b[7], dd)
    s0, s1, s2, s3 = _ri_mul(a[4], a[5], a[6], a[7], b[0], b[1], b[2], b[3], dd)
    out[4], out[5], out[6], out[7] = _ri_add(r0, r1, r2, r3, s0, s1, s2, s3, dd)


@njit(cache=True)
def _ci_div(a, b, out, dd):
    if _im_is_zero_point(b, 4):
        st1, o0, o1, o2, o3 = _ri_div(
            a[0], a[1], a[2], a[3], b[0], b[1], b[2], b[3], dd
        )
        if st1 != 0:
            return 1
        st2, o4, o5, o6, o7 = _ri_div(
            a[4], a[5], a[6], a[7], b[0], b[1], b[2], b[3], dd
        )
        if st2 != 0:
            return 1
        out[0], out[1], out[2], out[3] = o0, o1, o2, o3
        out[4], out[5], out[6], out[7] = o4, o5, o6, o7
        return 0
    d0, d1, d2, d3 = _ri_sqr(b[0], b[1], b[2], b[3], dd)
    e0, e1, e2, e3 = _ri_sqr(b[4], b[5], b[6], b[7], dd)
    den0, den1, den2, den3 = _ri_add(d0, d1, d2, d3, e0, e1, e2, e3, dd)
    if _ri_contains_zero(den0, den1, den2, den3):
        return 1
    p0, p1, p2, p3 = _ri_mul(a[0], a[1], a[2], a[3], b[0], b[1], b[2], b[3], dd)
    q0, q1, q2, q3 = _ri_mul(a[4], a[5], a[6], a[7], b[4], b[5], b[6], b[7], dd)
    nre0, nre1, nre2, nre3 = _ri_add(p0, p1, p2, p3, q0, q1, q2, q3, dd)
    r0, r1, r2, r3 = _ri_mul(a[4], a[5], a[6], a[7], b[0], b[1], b[2], b[3], dd)
    s0, s1, s2, s3 = _ri_mul(a[0], a[1], a[2], a[3], b[4], b[5], b[6], b[7], dd)
    nim0, nim1, nim2, nim3 = _ri_sub(r0, r1, r2, r3, s0, s1, s2, s3, dd)
    _, out[0], out[1], out[2], out[3] = _ri_div(
        nre0, nre1, nre2, nre3, den0, den1, den2, den3, dd
    )
    _, out[4], out[5], out[6], out[7] = _ri_div(
        nim0, nim1, nim2, nim3, den0, den1, den2, den3, dd
    )
    return 0


# -- jet kernels ((n, 8) arrays) -----------------------------------------------


@njit(cache=True)
def kjet_neg(a):
    n = a.shape[0]
    out = np.empty((n, 8), dtype=np.float64)
    for k in range(n):
        out[k, 0] = -a[k, 2]
        out[k, 1] = -a[k, 3]
        out[k, 2] = -a[k, 0]
        out[k, 3] = -a[k, 1]
        out[k, 4] = -a[k, 6]
        out[k, 5] = -a[k, 7]
        out[k, 6] = -a[k, 4]
        out[k, 7] = -a[k, 5]
    return out


@njit(cache=True)
def kjet_add(a, b, dd):
    n = a.shape[0]
    out = np.empty((n, 8), dtype=np.float64)
    for k in range(n):
        _ci_add(a[k], b[k], out[k], dd)
    return out


@njit(cache=True)
def kjet_sub(a, b, dd):
    n = a.shape[0]
    out = np.empty((n, 8), dtype=np.float64)
    for k in range(n):
        _ci_sub(a[k], b[k], out[k], dd)
    return out


@njit(cache=True)
def kjet_scale(a, row, dd):
    n = a.shape[0]
    out = np.empty((n, 8), dtype=np.float64)
    for k in range(n):
        _ci_mul(a[k], row, out[k], dd)
    return out


@njit(cache=True)
def kjet_scale_div(a, row, dd):
    n = a.shape[0]
    out = np.empty((n, 8), dtype=np.float64)
    for k in range(n):
        if _ci_div(a[k], row, out[k], dd) != 0:
            return 1, out
    return 0, out


@njit(cache=True)
def kjet_mul(a, b, dd):
    n = a.shape[0]
    out = np.empty((n, 8), dtype=np.float64)
    tmp = np.empty(8, dtype=np.float64)
    for k in range(n):
        _ci_mul(a[0], b[k], out[k], dd)
        for j in range(1, k + 1):
            _ci_mul(a[j], b[k - j], tmp, dd)
            _ci_add(out[k], tmp, out[k], dd)
    return out


@njit(cache=True)
def kjet_div(a, b, dd):
    n = a.shape[0]
    out = np.empty((n, 8), dtype=np.float64)
    d0, d1, d2, d3 = _ri_sqr(b[0, 0], b[0, 1], b[0, 2], b[0, 3], dd)
    e0, e1, e2, e3 = _ri_sqr(b[0, 4], b[0, 5], b[0, 6], b[0, 7], dd)
    s0, s1, s2, s3 = _ri_add(d0, d1, d2, d3, e0, e1, e2, e3, dd)
    if _ri_contains_zero(s0, s1, s2, s3):
        return 1, out
    tmp = np.empty(8, dtype=np.float64)
    acc = np.empty(8, dtype=np.float64)
    if _ci_div(a[0], b[0], out[0], dd) != 0:
        return 1, out
    for k in range(1, n):
        for q in range(8):
            acc[q] = a[k, q]
        for j in range(1, k + 1):
            _ci_mul(b[j], out[k - j], tmp, dd)
            _ci_sub(acc, tmp, acc, dd)
        if _ci_div(acc, b[0], out[k], dd) != 0:
            return 1, out
    return 0, out


# -- matrix kernels ------------------------------------------------------------


@njit(cache=True)
def _dd_le(ah, al, bh, bl):
    return ah < bh or (ah == bh and al <= bl)


@njit(cache=True)
def kmat_add(a, b, dd):
    out = np.empty((4, 4, 8), dtype=np.float64)
    for i in range(4):
        for j in range(4):
            _ci_add(a[i, j], b[i, j], out[i, j], dd)
    return out


@njit(cache=True)
def kmat_scale(a, row, dd):
    out = np.empty((4, 4, 8), dtype=np.float64)
    for i in range(4):
        for j in range(4):
            _ci_mul(a[i, j], row, out[i, j], dd)
    return out


@njit(cache=True)
def kmat_subset(a, b):
    """Entrywise containment a[i,j] inside b[i,j], exact endpoint order."""
    for i in range(4):
        for j in range(4):
            for off in (0, 4):
                if not _dd_le(
                    b[i, j, off], b[i, j, off + 1], a[i, j, off], a[i, j, off + 1]
                ):
                    return False
                if not _dd_le(
                    a[i, j, off + 2], a[i, j, off + 3], b[i, j, off + 2], b[i, j, off + 3]
                ):
                    return False
    return True


@njit(cache=True)
def kmat_hull(a, b):
    out = np.empty((4, 4, 8), dtype=np.float64)
    for i in range(4):
        for j in range(4):
            for off in (0, 4):
                if _dd_le(a[i, j, off], a[i, j, off + 1], b[i, j, off], b[i, j, off + 1]):
                    out[i, j, off] = a[i, j, off]
                    out[i, j, off + 1] = a[i, j, off + 1]
                else:
                    out[i, j, off] = b[i, j, off]
                    out[i, j, off + 1] = b[i, j, off + 1]
                if _dd_le(b[i, j, off + 2], b[i, j, off + 3], a[i, j, off + 2], a[i, j, off + 3]):
                    out[i, j, off + 2] = a[i, j, off + 2]
                    out[i, j, off + 3] = a[i, j, off + 3]
                else:
                    out[i, j, off + 2] = b[i, j, off + 2]
                    out[i, j, off + 3] = b[i, j, off + 3]
    return out


@njit(cache=True)
def kmat_mul(a, b, dd):
    out = np.empty((4, 4, 8), dtype=np.float64)
    tmp = np.empty(8, dtype=np.float64)
    for i in range(4):
        for j in range(4):
            _ci_mul(a[i, 0], b[0, j], out[i, j], dd)
            for t in range(1, 4):
                _ci_mul(a[i, t], b[t, j], tmp, dd)
                _ci_add(out[i, j], tmp, out[i, j], dd)
    return out


@njit(cache=True)
def ktheta(p_jets, seed, dd):
    """Taylor coefficients of U' = P U with U(0) = seed.

    p_jets has shape (q, 4, 4, 8): coefficient matrices P_0..P_{q-1}.
    Returns (q+1, 4, 4, 8): Theta_0 = seed and
    Theta_{k+1} = (sum_{j<=k} P_j Theta_{k-j}) / (k+1) for k < q.
    """
    q = p_jets.shape[0]
    th = np.empty((q + 1, 4, 4, 8), dtype=np.float64)
    th[0] = seed
    tmp = np.empty(8, dtype=np.float64)
    row = np.empty(8, dtype=np.float64)
    for k in range(q):
        row[:] = 0.0
        row[0] = k + 1.0
        row[2] = k + 1.0
        for i in range(4):
            for l in range(4):
                acc = th[k + 1, i, l]
                _ci_mul(p_jets[0, i, 0], th[k, 0, l], acc, dd)
                for m in range(1, 4):
                    _ci_mul(p_jets[0, i, m], th[k, m, l], tmp, dd)
                    _ci_add(acc, tmp, acc, dd)
                for j in range(1, k + 1):
                    for m in range(4):
                        _ci_mul(p_jets[j, i, m], th[k - j, m, l], tmp, dd)
                        _ci_add(acc, tmp, acc, dd)
                _ci_div(acc, row, acc, dd)
    return th


@njit(cache=True)
def kmat_horner(th, p_used, h_row, dd):
    """Evaluate sum_{k<=p_used} Theta_k h^k entrywise by Horner."""
    out = np.empty((4, 4, 8), dtype=np.float64)
    out[:] = th[p_used]
    tmp = np.empty(8, dtype=np.float64)
    for k in range(p_used - 1, -1, -1):
        for i in range(4):
            for j in range(4):
                _ci_mul(out[i, j], h_row, tmp, dd)
                _ci_add(tmp, th[k, i, j], out[i, j], dd)
    return out


# -- fused coefficient evaluation ----------------------------------------------
#
# One compiled pass producing the jets of P = A x' + B y' for a step.
# The polynomial tables, term ordering, and operation order replicate the
# generic evaluation through CoeffEnv exactly (same sorted term traversal,
# same monomial products, same quotient structure), so the result is bit
# identical to the JetArr/TaylorJet routes; the equality is under test.
# Field order below: ell, a, b, p, m, c, d, q (y-derivatives for the
# first four of the Pfaffian rows, x-derivatives for the rest).


@njit(cache=True)
def _kpoly(mono_jets, term_mono, term_coef, s, e, dd):
    row = np.zeros(8, dtype=np.float64)
    row[0] = term_coef[s]
    row[2] = term_coef[s]
    acc = kjet_scale(mono_jets[term_mono[s]], row, dd)
    for t in range(s + 1, e):
        row2 = np.zeros(8, dtype=np.float64)
        row2[0] = term_coef[t]
        row2[2] = term_coef[t]
        acc = kjet_add(acc, kjet_scale(mono_jets[term_mono[t]], row2, dd), dd)
    return acc


@njit(cache=True)
def kpfaffian(xa, ya, dxa, dya, mono_ij, term_mono, term_coef, poly_off, mx, my, dd):
    n = xa.shape[0]
    out = np.empty((n, 4, 4, 8), dtype=np.float64)
    one = np.zeros((n, 8), dtype=np.float64)
    one[0, 0] = 1.0
    one[0, 2] = 1.0
    zero = np.zeros((n, 8), dtype=np.float64)

    xp = np.empty((mx + 1, n, 8), dtype=np.float64)
    xp[0] = one
    if mx >= 1:
        xp[1] = xa
    for i in range(2, mx + 1):
        xp[i] = kjet_mul(xp[i - 1], xa, dd)
    yp = np.empty((my + 1, n, 8), dtype=np.float64)
    yp[0] = one
    if my >= 1:
        yp[1] = ya
    for j in range(2, my + 1):
        yp[j] = kjet_mul(yp[j - 1], ya, dd)

    n_mono = mono_ij.shape[0]
    mono_jets = np.empty((n_mono, n, 8), dtype=np.float64)
    for m in range(n_mono):
        i = mono_ij[m, 0]
        j = mono_ij[m, 1]
        if i == 0:
            mono_jets[m] = yp[j]
        elif j == 0:
            mono_jets[m] = xp[i]
        else:
            mono_jets[m] = kjet_mul(xp[i], yp[j], dd)

    vals = np.empty((8, n, 8), dtype=np.float64)
    drvs = np.empty((8, n, 8), dtype=np.float64)
    for f in range(8):
        den1 = _kpoly(mono_jets, term_mono, term_coef, poly_off[3 * f], poly_off[3 * f + 1], dd)
        num_v = _kpoly(mono_jets, term_mono, term_coef, poly_off[3 * f + 1], poly_off[3 * f + 2], dd)
        num_d = _kpoly(mono_jets, term_mono, term_coef, poly_off[3 * f + 2], poly_off[3 * f + 3], dd)
        den2 = kjet_mul(den1, den1, dd)
        st, v = kjet_div(num_v, den1, dd)
        if st != 0:
            return 1, out
        st, dv = kjet_div(num_d, den2, dd)
        if st != 0:
            return 1, out
        vals[f] = v
        drvs[f] = dv

    ell = vals[0]
    av = vals[1]
    bv = vals[2]
    pv = vals[3]
    mv = vals[4]
    cv = vals[5]
    dv_ = vals[6]
    qv = vals[7]
    ell_y = drvs[0]
    a_y = drvs[1]
    b_y = drvs[2]
    p_y = drvs[3]
    m_x = drvs[4]
    c_x = drvs[5]
    d_x = drvs[6]
    q_x = drvs[7]

    kappa = kjet_sub(one, kjet_mul(ell, mv, dd), dd)
    st, b0 = kjet_div(
        kjet_add(
            kjet_add(p_y, kjet_mul(bv, qv, dd), dd),
            kjet_mul(ell, kjet_add(q_x, kjet_mul(cv, pv, dd), dd), dd),
            dd,
        ),
        kappa,
        dd,
    )
    if st != 0:
        return 1, out
    st, b1 = kjet_div(
        kjet_add(
            kjet_add(
                kjet_add(a_y, kjet_mul(bv, cv, dd), dd),
                kjet_mul(ell, kjet_add(c_x, kjet_mul(cv, av, dd), dd), dd),
                dd,
            ),
            kjet_mul(ell, qv, dd),
            dd,
        ),
        kappa,
        dd,
    )
    if st != 0:
        return 1, out
    st, b2 = kjet_div(
        kjet_add(
            kjet_add(
                kjet_add(b_y, kjet_mul(bv, dv_, dd), dd),
                kjet_mul(ell, kjet_add(d_x, kjet_mul(bv, cv, dd), dd), dd),
                dd,
            ),
            pv,
            dd,
        ),
        kappa,
        dd,
    )
    if st != 0:
        return 1, out
    st, b3 = kjet_div(
        kjet_add(
            kjet_add(kjet_add(ell_y, av, dd), kjet_mul(bv, mv, dd), dd),
            kjet_mul(
                ell,
                kjet_add(kjet_add(m_x, dv_, dd), kjet_mul(cv, ell, dd), dd),
                dd,
            ),
            dd,
        ),
        kappa,
        dd,
    )
    if st != 0:
        return 1, out
    st, c0 = kjet_div(
        kjet_add(
            kjet_add(q_x, kjet_mul(cv, pv, dd), dd),
            kjet_mul(mv, kjet_add(p_y, kjet_mul(bv, qv, dd), dd), dd),
            dd,
        ),
        kappa,
        dd,
    )
    if st != 0:
        return 1, out
    st, c1 = kjet_div(
        kjet_add(
            kjet_add(
                kjet_add(c_x, kjet_mul(av, cv, dd), dd),
                kjet_mul(mv, kjet_add(a_y, kjet_mul(bv, cv, dd), dd), dd),
                dd,
            ),
            qv,
            dd,
        ),
        kappa,
        dd,
    )
    if st != 0:
        return 1, out
    st, c2 = kjet_div(
        kjet_add(
            kjet_add(
                kjet_add(d_x, kjet_mul(bv, cv, dd), dd),
                kjet_mul(mv, kjet_add(b_y, kjet_mul(bv, dv_, dd), dd), dd),
                dd,
            ),
            kjet_mul(mv, pv, dd),
            dd,
        ),
        kappa,
        dd,
    )
    if st != 0:
        return 1, out
    st, c3 = kjet_div(
        kjet_add(
            kjet_add(kjet_add(m_x, dv_, dd), kjet_mul(cv, ell, dd), dd),
            kjet_mul(
                mv,
                kjet_add(kjet_add(ell_y, av, dd), kjet_mul(bv, mv, dd), dd),
                dd,
            ),
            dd,
        ),
        kappa,
        dd,
    )
    if st != 0:
        return 1, out

    for idx in range(16):
        i = idx // 4
        j = idx % 4
        if i == 0:
            arow = one if j == 1 else zero
            brow = one if j == 2 else zero
        elif i == 1:
            if j == 0:
                arow = pv
            elif j == 1:
                arow = av
            elif j == 2:
                arow = bv
            else:
                arow = ell
            brow = one if j == 3 else zero
        elif i == 2:
            arow = one if j == 3 else zero
            if j == 0:
                brow = qv
            elif j == 1:
                brow = cv
            elif j == 2:
                brow = dv_
            else:
                brow = mv
        else:
            if j == 0:
                arow = b0
                brow = c0
            elif j == 1:
                arow = b1
                brow = c1
            elif j == 2:
                arow = b2
                brow = c2
            else:
                arow = b3
                brow = c3
        ent = kjet_add(kjet_mul(arow, dxa, dd), kjet_mul(brow, dya, dd), dd)
        for k in range(n):
            for w in range(8):
                out[k, i, j, w] = ent[k, w]
    return 0, out


def _pack_tables():
    from .picard_fuchs import _TABLES

    names = ("ell", "a", "b", "p", "m", "c", "d", "q")
    deriv_for = {"ell": "y", "a": "y", "b": "y", "p": "y", "m": "x", "c": "x", "d": "x", "q": "x"}
    polys = []
    for nm in names:
        t = _TABLES[nm]
        polys.append(t["den"])
        polys.append(t["val"][0])
        polys.append(t[deriv_for[nm]][0])
    monos = sorted({k for p in polys for k in p})
    mono_idx = {k: i for i, k in enumerate(monos)}
    term_mono, term_coef, off = [], [], [0]
    for p in polys:
        if not p:
            raise ValueError("empty polynomial table")
        for key, coef in sorted(p.items()):
            if abs(coef) >= 2**53:
                raise ValueError("coefficient not exactly representable")
            term_mono.append(mono_idx[key])
            term_coef.append(float(coef))
        off.append(len(term_mono))
    return (
        np.array(monos, dtype=np.int64),
        np.array(term_mono, dtype=np.int64),
        np.array(term_coef, dtype=np.float64),
        np.array(off, dtype=np.int64),
        max(i for i, _ in monos),
        max(j for _, j in monos),
    )


_PF_PACK = _pack_tables()


def pfaffian_jets(xa, ya, dxa, dya, dd: bool) -> np.ndarray:
    """(n, 4, 4, 8) jets of A x' + B y', or DivisorContainsZero."""
    st, out = kpfaffian(xa, ya, dxa, dya, *_PF_PACK, dd)
    if st != 0:
        raise DivisorContainsZero("coefficient denominator meets zero on the step")
    return out


# -- packing and the JetArr wrapper --------------------------------------------


def ci_row(z: ComplexInterval) -> np.ndarray:
    return np.array(
        [z.re.ih, z.re.il, z.re.sh, z.re.sl, z.im.ih, z.im.il, z.im.sh, z.im.sl],
        dtype=np.float64,
    )


def row_ci(row, prec) -> ComplexInterval:
    return ComplexInterval(
        RealInterval(prec, row[0], row[1], row[2], row[3]),
        RealInterval(prec, row[4], row[5], row[6], row[7]),
    )


def _scalar_row(v) -> np.ndarray:
    if isinstance(v, RealInterval):
        return np.array(
            [v.ih, v.il, v.sh, v.sl, 0.0, 0.0, 0.0, 0.0], dtype=np.float64
        )
    z = complex(v)
    return np.array(
        [z.real, 0.0, z.real, 0.0, z.imag, 0.0, z.imag, 0.0], dtype=np.float64
    )


def jet_arr(jet: TaylorJet) -> "JetArr":
    a = np.empty((jet.order + 1, 8), dtype=np.float64)
    for k, c in enumerate(jet.coeffs):
        a[k] = ci_row(c)
    return JetArr(a, jet.prec == DD)


def mat_arr(rows) -> np.ndarray:
    """Pack a 4x4 nest of ComplexInterval into (4, 4, 8)."""
    out = np.empty((4, 4, 8), dtype=np.float64)
    for i in range(4):
        for j in range(4):
            out[i, j] = ci_row(rows[i][j])
    return out


def arr_mat(a, prec):
    return tuple(
        tuple(row_ci(a[i, j], prec) for j in range(4)) for i in range(4)
    )


class JetArr:
    """Order-p complex-interval jet on a (p+1, 8) array.

    Supports the operator set the coefficient algebra needs (ring ops
    with jets and exact scalars, division), each dispatching to one
    compiled kernel.  `dd` selects the precision branch.
    """

    __slots__ = ("a", "dd")

    def __init__(self, a: np.ndarray, dd: bool):
        self.a = a
        self.dd = dd

    @classmethod
    def constant(cls, v, p: int, dd: bool) -> "JetArr":
        a = np.zeros((p + 1, 8), dtype=np.float64)
        a[0] = _scalar_row(v)
        return cls(a, dd)

    @property
    def prec(self):
        return DD if self.dd else F64

    def to_jet(self) -> TaylorJet:
        prec = self.prec
        return TaylorJet(tuple(row_ci(r, prec) for r in self.a))

    def coeff(self, k: int) -> ComplexInterval:
        return row_ci(self.a[k], self.prec)

    def _wrap(self, other):
        if isinstance(other, JetArr):
            return other
        if isinstance(other, (int, float, complex)):
            return JetArr.constant(other, self.a.shape[0] - 1, self.dd)
        return NotImplemented

    def __neg__(self):
        return JetArr(kjet_neg(self.a), self.dd)

    def __add__(self, other):
        b = self._wrap(other)
        if b is NotImplemented:
            return b
        return JetArr(kjet_add(self.a, b.a, self.dd), self.dd)

    __radd__ = __add__

    def __sub__(self, other):
        b = self._wrap(other)
        if b is NotImplemented:
            return b
        return JetArr(kjet_sub(self.a, b.a, self.dd), self.dd)

    def __rsub__(self, other):
        b = self._wrap(other)
        if b is NotImplemented:
            return b
        return JetArr(kjet_sub(b.a, self.a, self.dd), self.dd)

    def __mul__(self, other):
        if isinstance(other, (int, float, complex, RealInterval)):
            return JetArr(kjet_scale(self.a, _scalar_row(other), self.dd), self.dd)
        if isinstance(other, ComplexInterval):
            return JetArr(kjet_scale(self.a, ci_row(other), self.dd), self.dd)
        if not isinstance(other, JetArr):
            return NotImplemented
        return JetArr(kjet_mul(self.a, other.a, self.dd), self.dd)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, float, complex, RealInterval)):
            st, out = kjet_scale_div(self.a, _scalar_row(other), self.dd)
        elif isinstance(other, ComplexInterval):
            st, out = kjet_scale_div(self.a, ci_row(other), self.dd)
        elif isinstance(other, JetArr):
            st, out = kjet_div(self.a, other.a, self.dd)
        else:
            return NotImplemented
        if st != 0:
            raise DivisorContainsZero("jet division with 0 in the divisor range")
        return JetArr(out, self.dd)

    def __rtruediv__(self, other):
        b = self._wrap(other)
        if b is NotImplemented:
            return b
        return b / self


# -- lean box engine -------------------------------------------------------------
#
# A second, binary64-only interval layer used exclusively for the
# remainder bound over a step box.  Values are rows of 4 floats
# [re_lo, re_hi, im_lo, im_hi]; every operation is round-to-nearest
# followed by a one-ulp outward nudge.  For a single rounded operation
# the exact value always lies between the predecessor and successor of
# the computed float, so containment is preserved, and every primitive
# yields a superset of what the directed-rounding layer produces on the
# same inputs.  That superset relation is the transcription test for
# the mirrored jet/recurrence bodies below.


@njit(cache=True)
def _bdn(x):
    return math.nextafter(x, -_INF)


@njit(cache=True)
def _bup(x):
    return math.nextafter(x, _INF)


@njit(cache=True)
def _badd(al, ah, bl, bh):
    return _bdn(al + bl), _bup(ah + bh)


@njit(cache=True)
def _bsub(al, ah, bl, bh):
    return _bdn(al - bh), _bup(ah - bl)


@njit(cache=True)
def _bmul(al, ah, bl, bh):
    p1 = al * bl
    p2 = al * bh
    p3 = ah * bl
    p4 = ah * bh
    lo = p1
    if p2 < lo:
        lo = p2
    if p3 < lo:
        lo = p3
    if p4 < lo:
        lo = p4
    hi = p1
    if p2 > hi:
        hi = p2
    if p3 > hi:
        hi = p3
    if p4 > hi:
        hi = p4
    return _bdn(lo), _bup(hi)


@njit(cache=True)
def _bsqr(al, ah):
    # x^2 over [al, ah]: never negative, unlike the corner product
    if al > 0.0:
        lo = _bdn(al * al)
        if lo < 0.0:
            lo = 0.0
        return lo, _bup(ah * ah)
    if ah < 0.0:
        lo = _bdn(ah * ah)
        if lo < 0.0:
            lo = 0.0
        return lo, _bup(al * al)
    m = -al
    if ah > m:
        m = ah
    return 0.0, _bup(m * m)


@njit(cache=True)
def _bdiv_pos(al, ah, bl, bh):
    """Quotient for a divisor with bl > 0 (or symmetric bh < 0)."""
    p1 = al / bl
    p2 = al / bh
    p3 = ah / bl
    p4 = ah / bh
    lo = p1
    if p2 < lo:
        lo = p2
    if p3 < lo:
        lo = p3
    if p4 < lo:
        lo = p4
    hi = p1
    if p2 > hi:
        hi = p2
    if p3 > hi:
        hi = p3
    if p4 > hi:
        hi = p4
    return _bdn(lo), _bup(hi)


@njit(cache=True)
def _bci_add(a, b, out):
    l0, h0 = _badd(a[0], a[1], b[0], b[1])
    l1, h1 = _badd(a[2], a[3], b[2], b[3])
    out[0] = l0
    out[1] = h0
    out[2] = l1
    out[3] = h1


@njit(cache=True)
def _bci_sub(a, b, out):
    l0, h0 = _bsub(a[0], a[1], b[0], b[1])
    l1, h1 = _bsub(a[2], a[3], b[2], b[3])
    out[0] = l0
    out[1] = h0
    out[2] = l1
    out[3] = h1


@njit(cache=True)
def _bci_mul(a, b, out):
    rl, rh = _bmul(a[0], a[1], b[0], b[1])
    sl, sh = _bmul(a[2], a[3], b[2], b[3])
    re_l, re_h = _bsub(rl, rh, sl, sh)
    tl, th = _bmul(a[0], a[1], b[2], b[3])
    ul, uh = _bmul(a[2], a[3], b[0], b[1])
    im_l, im_h = _badd(tl, th, ul, uh)
    out[0] = re_l
    out[1] = re_h
    out[2] = im_l
    out[3] = im_h


@njit(cache=True)
def _bci_div(a, b, out):
    dl, dh = _bsqr(b[0], b[1])
    el, eh = _bsqr(b[2], b[3])
    nl, nh = _badd(dl, dh, el, eh)
    if not nl > 0.0:
        return 1
    rl, rh = _bmul(a[0], a[1], b[0], b[1])
    sl, sh = _bmul(a[2], a[3], b[2], b[3])
    num_re_l, num_re_h = _badd(rl, rh, sl, sh)
    tl, th = _bmul(a[2], a[3], b[0], b[1])
    ul, uh = _bmul(a[0], a[1], b[2], b[3])
    num_im_l, num_im_h = _bsub(tl, th, ul, uh)
    re_l, re_h = _bdiv_pos(num_re_l, num_re_h, nl, nh)
    im_l, im_h = _bdiv_pos(num_im_l, num_im_h, nl, nh)
    out[0] = re_l
    out[1] = re_h
    out[2] = im_l
    out[3] = im_h
    return 0


@njit(cache=True)
def _bci_div_point(a, c, out):
    """Divide by the exact positive real point c (coefficient recurrence)."""
    out[0] = _bdn(a[0] / c)
    out[1] = _bup(a[1] / c)
    out[2] = _bdn(a[2] / c)
    out[3] = _bup(a[3] / c)


@njit(cache=True)
def bjet_add(a, b):
    n = a.shape[0]
    out = np.empty((n, 4), dtype=np.float64)
    for k in range(n):
        _bci_add(a[k], b[k], out[k])
    return out


@njit(cache=True)
def bjet_sub(a, b):
    n = a.shape[0]
    out = np.empty((n, 4), dtype=np.float64)
    for k in range(n):
        _bci_sub(a[k], b[k], out[k])
    return out


@njit(cache=True)
def bjet_scale_real(a, c):
    """Scale by an exact real point (polynomial coefficients)."""
    n = a.shape[0]
    out = np.empty((n, 4), dtype=np.float64)
    for k in range(n):
        l0, h0 = _bmul(a[k, 0], a[k, 1], c, c)
        l1, h1 = _bmul(a[k, 2], a[k, 3], c, c)
        out[k, 0] = l0
        out[k, 1] = h0
        out[k, 2] = l1
        out[k, 3] = h1
    return out


@njit(cache=True)
def bjet_mul(a, b):
    n = a.shape[0]
    out = np.empty((n, 4), dtype=np.float64)
    tmp = np.empty(4, dtype=np.float64)
    for k in range(n):
        _bci_mul(a[0], b[k], out[k])
        for j in range(1, k + 1):
            _bci_mul(a[j], b[k - j], tmp)
            _bci_add(out[k], tmp, out[k])
    return out


@njit(cache=True)
def bjet_div(a, b):
    n = a.shape[0]
    out = np.empty((n, 4), dtype=np.float64)
    tmp = np.empty(4, dtype=np.float64)
    acc = np.empty(4, dtype=np.float64)
    if _bci_div(a[0], b[0], out[0]) != 0:
        return 1, out
    for k in range(1, n):
        for q in range(4):
            acc[q] = a[k, q]
        for j in range(1, k + 1):
            _bci_mul(b[j], out[k - j], tmp)
            _bci_sub(acc, tmp, acc)
        if _bci_div(acc, b[0], out[k]) != 0:
            return 1, out
    return 0, out


@njit(cache=True)
def bmat_add(a, b):
    out = np.empty((4, 4, 4), dtype=np.float64)
    for i in range(4):
        for j in range(4):
            _bci_add(a[i, j], b[i, j], out[i, j])
    return out


@njit(cache=True)
def bmat_scale_real(a, cl, ch):
    """Scale by a real interval [cl, ch] (step width powers)."""
    out = np.empty((4, 4, 4), dtype=np.float64)
    for i in range(4):
        for j in range(4):
            l0, h0 = _bmul(a[i, j, 0], a[i, j, 1], cl, ch)
            l1, h1 = _bmul(a[i, j, 2], a[i, j, 3], cl, ch)
            out[i, j, 0] = l0
            out[i, j, 1] = h0
            out[i, j, 2] = l1
            out[i, j, 3] = h1
    return out


@njit(cache=True)
def bmat_mul(a, b):
    out = np.empty((4, 4, 4), dtype=np.float64)
    tmp = np.empty(4, dtype=np.float64)
    for i in range(4):
        for j in range(4):
            _bci_mul(a[i, 0], b[0, j], out[i, j])
            for t in range(1, 4):
                _bci_mul(a[i, t], b[t, j], tmp)
                _bci_add(out[i, j], tmp, out[i, j])
    return out


@njit(cache=True)
def bmat_subset(a, b):
    for i in range(4):
        for j in range(4):
            for off in (0, 2):
                if not (b[i, j, off] <= a[i, j, off] and a[i, j, off + 1] <= b[i, j, off + 1]):
                    return False
    return True


@njit(cache=True)
def bmat_hull(a, b):
    out = np.empty((4, 4, 4), dtype=np.float64)
    for i in range(4):
        for j in range(4):
            for off in (0, 2):
                out[i, j, off] = min(a[i, j, off], b[i, j, off])
                out[i, j, off + 1] = max(a[i, j, off + 1], b[i, j, off + 1])
    return out


@njit(cache=True)
def btheta(p_jets, seed):
    """Lean mirror of ktheta on (q, 4, 4, 4) jets."""
    q = p_jets.shape[0]
    th = np.empty((q + 1, 4, 4, 4), dtype=np.float64)
    th[0] = seed
    tmp = np.empty(4, dtype=np.float64)
    for k in range(q):
        div = k + 1.0
        for i in range(4):
            for l in range(4):
                acc = th[k + 1, i, l]
                _bci_mul(p_jets[0, i, 0], th[k, 0, l], acc)
                for m in range(1, 4):
                    _bci_mul(p_jets[0, i, m], th[k, m, l], tmp)
                    _bci_add(acc, tmp, acc)
                for j in range(1, k + 1):
                    for m in range(4):
                        _bci_mul(p_jets[j, i, m], th[k - j, m, l], tmp)
                        _bci_add(acc, tmp, acc)
                _bci_div_point(acc, div, acc)
    return th


@njit(cache=True)
def _bpoly(mono_jets, term_mono, term_coef, s, e):
    acc = bjet_scale_real(mono_jets[term_mono[s]], term_coef[s])
    for t in range(s + 1, e):
        acc = bjet_add(acc, bjet_scale_real(mono_jets[term_mono[t]], term_coef[t]))
    return acc


@njit(cache=True)
def bpfaffian(xa, ya, dxa, dya, mono_ij, term_mono, term_coef, poly_off, mx, my):
    n = xa.shape[0]
    out = np.empty((n, 4, 4, 4), dtype=np.float64)
    one = np.zeros((n, 4), dtype=np.float64)
    one[0, 0] = 1.0
    one[0, 1] = 1.0
    zero = np.zeros((n, 4), dtype=np.float64)

    xp = np.empty((mx + 1, n, 4), dtype=np.float64)
    xp[0] = one
    if mx >= 1:
        xp[1] = xa
    for i in range(2, mx + 1):
        xp[i] = bjet_mul(xp[i - 1], xa)
    yp = np.empty((my + 1, n, 4), dtype=np.float64)
    yp[0] = one
    if my >= 1:
        yp[1] = ya
    for j in range(2, my + 1):
        yp[j] = bjet_mul(yp[j - 1], ya)

    n_mono = mono_ij.shape[0]
    mono_jets = np.empty((n_mono, n, 4), dtype=np.float64)
    for m in range(n_mono):
        i = mono_ij[m, 0]
        j = mono_ij[m, 1]
        if i == 0:
            mono_jets[m] = yp[j]
        elif j == 0:
            mono_jets[m] = xp[i]
        else:
            mono_jets[m] = bjet_mul(xp[i], yp[j])

    vals = np.empty((8, n, 4), dtype=np.float64)
    drvs = np.empty((8, n, 4), dtype=np.float64)
    for f in range(8):
        den1 = _bpoly(mono_jets, term_mono, term_coef, poly_off[3 * f], poly_off[3 * f + 1])
        num_v = _bpoly(mono_jets, term_mono, term_coef, poly_off[3 * f + 1], poly_off[3 * f + 2])
        num_d = _bpoly(mono_jets, term_mono, term_coef, poly_off[3 * f + 2], poly_off[3 * f + 3])
        den2 = bjet_mul(den1, den1)
        st, v = bjet_div(num_v, den1)
        if st != 0:
            return 1, out
        st, dv = bjet_div(num_d, den2)
        if st != 0:
            return 1, out
        vals[f] = v
        drvs[f] = dv

    ell = vals[0]
    av = vals[1]
    bv = vals[2]
    pv = vals[3]
    mv = vals[4]
    cv = vals[5]
    dv_ = vals[6]
    qv = vals[7]
    ell_y = drvs[0]
    a_y = drvs[1]
    b_y = drvs[2]
    p_y = drvs[3]
    m_x = drvs[4]
    c_x = drvs[5]
    d_x = drvs[6]
    q_x = drvs[7]

    kappa = bjet_sub(one, bjet_mul(ell, mv))
    st, b0 = bjet_div(
        bjet_add(bjet_add(p_y, bjet_mul(bv, qv)), bjet_mul(ell, bjet_add(q_x, bjet_mul(cv, pv)))),
        kappa,
    )
    if st != 0:
        return 1, out
    st, b1 = bjet_div(
        bjet_add(
            bjet_add(bjet_add(a_y, bjet_mul(bv, cv)), bjet_mul(ell, bjet_add(c_x, bjet_mul(cv, av)))),
            bjet_mul(ell, qv),
        ),
        kappa,
    )
    if st != 0:
        return 1, out
    st, b2 = bjet_div(
        bjet_add(
            bjet_add(bjet_add(b_y, bjet_mul(bv, dv_)), bjet_mul(ell, bjet_add(d_x, bjet_mul(bv, cv)))),
            pv,
        ),
        kappa,
    )
    if st != 0:
        return 1, out
    st, b3 = bjet_div(
        bjet_add(
            bjet_add(bjet_add(ell_y, av), bjet_mul(bv, mv)),
            bjet_mul(ell, bjet_add(bjet_add(m_x, dv_), bjet_mul(cv, ell))),
        ),
        kappa,
    )
    if st != 0:
        return 1, out
    st, c0 = bjet_div(
        bjet_add(bjet_add(q_x, bjet_mul(cv, pv)), bjet_mul(mv, bjet_add(p_y, bjet_mul(bv, qv)))),
        kappa,
    )
    if st != 0:
        return 1, out
    st, c1 = bjet_div(
        bjet_add(
            bjet_add(bjet_add(c_x, bjet_mul(av, cv)), bjet_mul(mv, bjet_add(a_y, bjet_mul(bv, cv)))),
            qv,
        ),
        kappa,
    )
    if st != 0:
        return 1, out
    st, c2 = bjet_div(
        bjet_add(
            bjet_add(bjet_add(d_x, bjet_mul(bv, cv)), bjet_mul(mv, bjet_add(b_y, bjet_mul(bv, dv_)))),
            bjet_mul(mv, pv),
        ),
        kappa,
    )
    if st != 0:
        return 1, out
    st, c3 = bjet_div(
        bjet_add(
            bjet_add(bjet_add(m_x, dv_), bjet_mul(cv, ell)),
            bjet_mul(mv, bjet_add(bjet_add(ell_y, av), bjet_mul(bv, mv))),
        ),
        kappa,
    )
    if st != 0:
        return 1, out

    for idx in range(16):
        i = idx // 4
        j = idx % 4
        if i == 0:
            arow = one if j == 1 else zero
            brow = one if j == 2 else zero
        elif i == 1:
            if j == 0:
                arow = pv
            elif j == 1:
                arow = av
            elif j == 2:
                arow = bv
            else:
                arow = ell
            brow = one if j == 3 else zero
        elif i == 2:
            arow = one if j == 3 else zero
            if j == 0:
                brow = qv
            elif j == 1:
                brow = cv
            elif j == 2:
                brow = dv_
            else:
                brow = mv
        else:
            if j == 0:
                arow = b0
                brow = c0
            elif j == 1:
                arow = b1
                brow = c1
            elif j == 2:
                arow = b2
                brow = c2
            else:
                arow = b3
                brow = c3
        ent = bjet_add(bjet_mul(arow, dxa), bjet_mul(brow, dya))
        for k in range(n):
            for w in range(4):
                out[k, i, j, w] = ent[k, w]
    return 0, out


def pfaffian_jets_b(xa, ya, dxa, dya) -> np.ndarray:
    """(n, 4, 4, 4) lean jets of A x' + B y', or DivisorContainsZero."""
    st, out = bpfaffian(xa, ya, dxa, dya, *_PF_PACK)
    if st != 0:
        raise DivisorContainsZero("coefficient denominator meets zero on the step")
    return out


def jet_rows4(jet: TaylorJet) -> np.ndarray:
    """Pack a binary64-precision jet into lean rows (low words must be 0)."""
    n = len(jet.coeffs)
    out = np.empty((n, 4), dtype=np.float64)
    for k, c in enumerate(jet.coeffs):
        out[k, 0] = c.re.ih
        out[k, 1] = c.re.sh
        out[k, 2] = c.im.ih
        out[k, 3] = c.im.sh
    return out


def rows4_to8(a: np.ndarray) -> np.ndarray:
    """Embed lean rows into the 8-word layout (exact, low words zero)."""
    out = np.zeros(a.shape[:-1] + (8,), dtype=np.float64)
    out[..., 0] = a[..., 0]
    out[..., 2] = a[..., 1]
    out[..., 4] = a[..., 2]
    out[..., 6] = a[..., 3]
    return out
