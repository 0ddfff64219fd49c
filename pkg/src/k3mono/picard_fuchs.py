"""Coefficient fields of the first-order Pfaffian system.

The transported system is U_x = A U, U_y = B U with A, B rational in
(x, y).  Each scalar coefficient is a ratio N / D of integer-coefficient
polynomials with D a monomial multiple of h = 1 + 20x + 9y; numerators
and denominators are frozen tables below, and every partial derivative
used anywhere in the pipeline is produced from them at import time by
exact integer polynomial algebra (quotient rule twice), never by hand
transcription.  Evaluation is generic over the coefficient arithmetic:
complex intervals, Taylor jets, batched jet arrays, and exact rationals
for the finite-difference regression all share this single source.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import DivisorContainsZero
from .intervals import ComplexInterval, RealInterval
from .linalg import CIMatrix

# -- integer polynomial helpers: dict {(i, j): coef} for x^i y^j --------------


def _p_add(a, b):
    out = dict(a)
    for k, v in b.items():
        w = out.get(k, 0) + v
        if w:
            out[k] = w
        elif k in out:
            del out[k]
    return out


def _p_scale(a, s):
    return {k: v * s for k, v in a.items()} if s else {}


def _p_sub(a, b):
    return _p_add(a, _p_scale(b, -1))

def _p_mul(a, b):
    out = {}
    for (i, j), u in a.items():
        for (k, l), v in b.items():
            key = (i + k, j + l)
            w = out.get(key, 0) + u * v
            if w:
                out[key] = w
            elif key in out:
                del out[key]
    return out


def _p_dx(a):
    return {(i - 1, j): v * i for (i, j), v in a.items() if i}


def _p_dy(a):
    return {(i, j - 1): v * j for (i, j), v in a.items() if j}


_H = {(0, 0): 1, (1, 0): 20, (0, 1): 9}

# field name -> (numerator, denominator monomial, integer denominator scale)
_RAW = {
    "ell": ({(1, 0): -8, (2, 0): -32, (0, 1): -4, (1, 1): -84, (0, 2): -27}, (1, 0), 2),
    "a": ({(1, 0): 4, (2, 0): 16, (0, 1): -3, (1, 1): -60, (0, 2): -27}, (1, 1), 2),
    "b": ({(1, 0): -16, (2, 0): -96, (0, 1): -4, (1, 1): -168, (0, 2): -27}, (2, 0), 4),
    "p": ({(0, 0): 2, (1, 0): 12, (0, 1): 9}, (1, 1), 1),
    "m": ({(1, 0): -8, (2, 0): -32, (0, 1): -1, (1, 1): -24}, (0, 1), 4),
    "c": ({(1, 0): 1, (2, 0): 4}, (0, 2), 1),
    "d": ({(1, 0): -12, (2, 0): -16, (0, 1): -1, (1, 1): -72}, (1, 1), 8),
    "q": ({(0, 0): 1, (1, 0): -8}, (0, 2), 2),
}


def _build_tables():
    tables = {}
    for name, (num, mono, s) in _RAW.items():
        den = _p_scale(_p_mul({mono: 1}, _H), s)
        px = _p_sub(_p_mul(_p_dx(num), den), _p_mul(num, _p_dx(den)))
        py = _p_sub(_p_mul(_p_dy(num), den), _p_mul(num, _p_dy(den)))
        tables[name] = {
            "den": den,
            "val": (num, 1),
            "x": (px, 2),
            "y": (py, 2),
            "xx": (_p_sub(_p_mul(_p_dx(px), den), _p_scale(_p_mul(px, _p_dx(den)), 2)), 3),
            "xy": (_p_sub(_p_mul(_p_dy(px), den), _p_scale(_p_mul(px, _p_dy(den)), 2)), 3),
            "yy": (_p_sub(_p_mul(_p_dy(py), den), _p_scale(_p_mul(py, _p_dy(den)), 2)), 3),
        }
    return tables


_TABLES = _build_tables()


class CoeffEnv:
    """Evaluation context binding (x, y) in some coefficient arithmetic.

    `one` and `zero` are the ring constants of that arithmetic; power
    values, denominators, and field values are cached per env.
    """

    def __init__(self, x, y, one, zero):
        self.x = x
        self.y = y
        self.one = one
        self.zero = zero
        self._xp = {0: one, 1: x}
        self._yp = {0: one, 1: y}
        self._mono = {}
        self._den = {}
        self._val = {}

    def _xpow(self, i):
        got = self._xp.get(i)
        if got is None:
            got = self._xpow(i - 1) * self.x
            self._xp[i] = got
        return got

    def _ypow(self, j):
        got = self._yp.get(j)
        if got is None:
            got = self._ypow(j - 1) * self.y
            self._yp[j] = got
        return got

    def _monomial(self, i, j):
        key = (i, j)
        got = self._mono.get(key)
        if got is None:
            if i == 0:
                got = self._ypow(j)
            elif j == 0:
                got = self._xpow(i)
            else:
                got = self._xpow(i) * self._ypow(j)
            self._mono[key] = got
        return got

    def poly(self, p):
        acc = None
        for (i, j), coef in sorted(p.items()):
            term = self._monomial(i, j) * coef
            acc = term if acc is None else acc + term
        return self.zero if acc is None else acc

    def _den_pow(self, name, k):
        got = self._den.get((name, k))
        if got is None:
            if k == 1:
                got = self.poly(_TABLES[name]["den"])
            else:
                got = self._den_pow(name, k - 1) * self._den_pow(name, 1)
            self._den[(name, k)] = got
        return got

    def field(self, name, deriv="val"):
        key = (name, deriv)
        got = self._val.get(key)
        if got is None:
            num, k = _TABLES[name][deriv]
            got = self.poly(num) / self._den_pow(name, k)
            self._val[key] = got
        return got

    def h(self):
        return self.poly(_H)

    def kappa(self):
        got = self._val.get(("kappa", "val"))
        if got is None:
            got = self.one - self.field("ell") * self.field("m")
            self._val[("kappa", "val")] = got
        return got


def pfaffian_entries(env: CoeffEnv):
    """(A, B) as 4x4 nested tuples in the env's arithmetic."""
    f = env.field
    p, a, b, ell = f("p"), f("a"), f("b"), f("ell")
    q, c, d, m = f("q"), f("c"), f("d"), f("m")
    p_y, a_y, b_y, ell_y = f("p", "y"), f("a", "y"), f("b", "y"), f("ell", "y")
    q_x, c_x, d_x, m_x = f("q", "x"), f("c", "x"), f("d", "x"), f("m", "x")
    kappa = env.kappa()
    b0 = (p_y + b * q + ell * (q_x + c * p)) / kappa
    b1 = (a_y + b * c + ell * (c_x + c * a) + ell * q) / kappa
    b2 = (b_y + b * d + ell * (d_x + b * c) + p) / kappa
    b3 = (ell_y + a + b * m + ell * (m_x + d + c * ell)) / kappa
    c0 = (q_x + c * p + m * (p_y + b * q)) / kappa
    c1 = (c_x + a * c + m * (a_y + b * c) + q) / kappa
    c2 = (d_x + b * c + m * (b_y + b * d) + m * p) / kappa
    c3 = (m_x + d + c * ell + m * (ell_y + a + b * m)) / kappa
    z, one = env.zero, env.one
    amat = ((z, one, z, z), (p, a, b, ell), (z, z, z, one), (b0, b1, b2, b3))
    bmat = ((z, z, one, z), (z, z, z, one), (q, c, d, m), (c0, c1, c2, c3))
    return amat, bmat


def pfaffian_with_derivatives(env: CoeffEnv):
    """(A, B, dA/dy, dB/dx) for the integrability residual."""
    f = env.field
    p, a, b, ell = f("p"), f("a"), f("b"), f("ell")
    q, c, d, m = f("q"), f("c"), f("d"), f("m")
    p_x, a_x, b_x, ell_x = f("p", "x"), f("a", "x"), f("b", "x"), f("ell", "x")
    p_y, a_y, b_y, ell_y = f("p", "y"), f("a", "y"), f("b", "y"), f("ell", "y")
    q_x, c_x, d_x, m_x = f("q", "x"), f("c", "x"), f("d", "x"), f("m", "x")
    q_y, c_y, d_y, m_y = f("q", "y"), f("c", "y"), f("d", "y"), f("m", "y")
    p_yy, a_yy, b_yy, ell_yy = f("p", "yy"), f("a", "yy"), f("b", "yy"), f("ell", "yy")
    q_xx, c_xx, d_xx, m_xx = f("q", "xx"), f("c", "xx"), f("d", "xx"), f("m", "xx")
    p_xy, a_xy, b_xy, ell_xy = f("p", "xy"), f("a", "xy"), f("b", "xy"), f("ell", "xy")
    q_xy, c_xy, d_xy, m_xy = f("q", "xy"), f("c", "xy"), f("d", "xy"), f("m", "xy")
    kappa = env.kappa()
    kappa_x = -(ell_x * m + ell * m_x)
    kappa_y = -(ell_y * m + ell * m_y)

    b0 = (p_y + b * q + ell * (q_x + c * p)) / kappa
    b1 = (a_y + b * c + ell * (c_x + c * a) + ell * q) / kappa
    b2 = (b_y + b * d + ell * (d_x + b * c) + p) / kappa
    b3 = (ell_y + a + b * m + ell * (m_x + d + c * ell)) / kappa
    c0 = (q_x + c * p + m * (p_y + b * q)) / kappa
    c1 = (c_x + a * c + m * (a_y + b * c) + q) / kappa
    c2 = (d_x + b * c + m * (b_y + b * d) + m * p) / kappa
    c3 = (m_x + d + c * ell + m * (ell_y + a + b * m)) / kappa

    b0_y = (
        p_yy + b_y * q + b * q_y + ell_y * (q_x + c * p)
        + ell * (q_xy + c_y * p + c * p_y) - b0 * kappa_y
    ) / kappa
    b1_y = (
        a_yy + b_y * c + b * c_y + ell_y * (c_x + c * a)
        + ell * (c_xy + c_y * a + c * a_y) + ell_y * q + ell * q_y - b1 * kappa_y
    ) / kappa
    b2_y = (
        b_yy + b_y * d + b * d_y + ell_y * (d_x + b * c)
        + ell * (d_xy + b_y * c + b * c_y) + p_y - b2 * kappa_y
    ) / kappa
    b3_y = (
        ell_yy + a_y + b_y * m + b * m_y + ell_y * (m_x + d + c * ell)
        + ell * (m_xy + d_y + c_y * ell + c * ell_y) - b3 * kappa_y
    ) / kappa
    c0_x = (
        q_xx + c_x * p + c * p_x + m_x * (p_y + b * q)
        + m * (p_xy + b_x * q + b * q_x) - c0 * kappa_x
    ) / kappa
    c1_x = (
        c_xx + a_x * c + a * c_x + m_x * (a_y + b * c)
        + m * (a_xy + b_x * c + b * c_x) + q_x - c1 * kappa_x
    ) / kappa
    c2_x = (
        d_xx + b_x * c + b * c_x + m_x * (b_y + b * d)
        + m * (b_xy + b_x * d + b * d_x) + m_x * p + m * p_x - c2 * kappa_x
    ) / kappa
    c3_x = (
        m_xx + d_x + c_x * ell + c * ell_x + m_x * (ell_y + a + b * m)
        + m * (ell_xy + a_x + b_x * m + b * m_x) - c3 * kappa_x
    ) / kappa

    z, one = env.zero, env.one
    amat = ((z, one, z, z), (p, a, b, ell), (z, z, z, one), (b0, b1, b2, b3))
    bmat = ((z, z, one, z), (z, z, z, one), (q, c, d, m), (c0, c1, c2, c3))
    a_y_mat = ((z, z, z, z), (p_y, a_y, b_y, ell_y), (z, z, z, z), (b0_y, b1_y, b2_y, b3_y))
    b_x_mat = ((z, z, z, z), (z, z, z, z), (q_x, c_x, d_x, m_x), (c0_x, c1_x, c2_x, c3_x))
    return amat, bmat, a_y_mat, b_x_mat


# -- point types and interval-level wrappers ----------------------------------


@dataclass(frozen=True)
class PointXY:
    x: ComplexInterval
    y: ComplexInterval

    @property
    def prec(self):
        return self.x.prec


@dataclass(frozen=True)
class PointLM:
    lam: ComplexInterval
    mu: ComplexInterval

    @property
    def prec(self):
        return self.lam.prec


@dataclass(frozen=True)
class PfaffianCoeffs:
    h: ComplexInterval
    ell: ComplexInterval
    a: ComplexInterval
    b: ComplexInterval
    p: ComplexInterval
    m: ComplexInterval
    c: ComplexInterval
    d: ComplexInterval
    q: ComplexInterval
    ell_y: ComplexInterval
    m_x: ComplexInterval
    a_y: ComplexInterval
    b_y: ComplexInterval
    c_x: ComplexInterval
    d_x: ComplexInterval
    p_y: ComplexInterval
    q_x: ComplexInterval
    kappa: ComplexInterval


def interval_env(x: ComplexInterval, y: ComplexInterval) -> CoeffEnv:
    prec = x.prec
    return CoeffEnv(
        x, y, ComplexInterval.point(1.0, prec), ComplexInterval.point(0.0, prec)
    )


def _guard_nonzero(name, z: ComplexInterval):
    if z.contains_zero():
        raise DivisorContainsZero(f"{name} enclosure contains zero")


def coeffs_at(pt: PointXY) -> PfaffianCoeffs:
    env = interval_env(pt.x, pt.y)
    _guard_nonzero("x", pt.x)
    _guard_nonzero("y", pt.y)
    _guard_nonzero("h", env.h())
    kappa = env.kappa()
    _guard_nonzero("kappa", kappa)
    f = env.field
    return PfaffianCoeffs(
        h=env.h(),
        ell=f("ell"),
        a=f("a"),
        b=f("b"),
        p=f("p"),
        m=f("m"),
        c=f("c"),
        d=f("d"),
        q=f("q"),
        ell_y=f("ell", "y"),
        m_x=f("m", "x"),
        a_y=f("a", "y"),
        b_y=f("b", "y"),
        c_x=f("c", "x"),
        d_x=f("d", "x"),
        p_y=f("p", "y"),
        q_x=f("q", "x"),
        kappa=kappa,
    )


def matrices_AB(pt: PointXY) -> tuple[CIMatrix, CIMatrix]:
    env = interval_env(pt.x, pt.y)
    _guard_nonzero("x", pt.x)
    _guard_nonzero("y", pt.y)
    _guard_nonzero("h", env.h())
    _guard_nonzero("kappa", env.kappa())
    amat, bmat = pfaffian_entries(env)
    return CIMatrix(amat), CIMatrix(bmat)


def integrability_residual(pt: PointXY, step: float) -> CIMatrix:
    """Enclosure of -dA/dy + dB/dx - (A B - B A) over a box around pt.

    `step` is the half-width of the inflation applied to both coordinate
    rectangles; the residual of the exact fields is identically zero, so
    the returned matrix must enclose zero entrywise.
    """
    x = ComplexInterval(pt.x.re.inflate(step), pt.x.im.inflate(step))
    y = ComplexInterval(pt.y.re.inflate(step), pt.y.im.inflate(step))
    env = interval_env(x, y)
    amat, bmat, ay, bx = pfaffian_with_derivatives(env)
    a_m, b_m = CIMatrix(amat), CIMatrix(bmat)
    ay_m, bx_m = CIMatrix(ay), CIMatrix(bx)
    comm = a_m @ b_m - b_m @ a_m
    return bx_m - ay_m - comm


def to_xy(pt: PointLM) -> PointXY:
    w = pt.lam - 0.25
    w2 = w * w
    return PointXY(x=pt.mu / w2, y=pt.mu / (w2 * w))


def to_lm(pt: PointXY) -> PointLM:
    lam = pt.x / pt.y + 0.25
    mu = pt.x * pt.x * pt.x / (pt.y * pt.y)
    return PointLM(lam=lam, mu=mu)


def jacobians(pt: PointXY):
    """(lam_x, lam_y, lam_xy, mu_x, mu_y, mu_xy) at a regular point."""
    x, y = pt.x, pt.y
    _guard_nonzero("y", y)
    y2 = y * y
    y3 = y2 * y
    x2 = x * x
    x3 = x2 * x
    lam_x = 1 / y
    lam_y = -x / y2
    lam_xy = -1 / y2
    mu_x = x2 * 3 / y2
    mu_y = x3 * (-2) / y3
    mu_xy = x2 * (-6) / y3
    return lam_x, lam_y, lam_xy, mu_x, mu_y, mu_xy
