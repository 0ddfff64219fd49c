"""Frobenius-basis series at the degenerate corner and their tail bounds.

Four solutions phi_1..phi_4 of the underlying rank-4 equation admit
expansions in (lam, mu) near the large-complex-structure point.  This
module builds the coefficient tables by multiplicative recurrences,
evaluates the triangular truncations (value and all first and second
partials in lam/mu), bounds every truncation tail by the closed-form
delta_1..delta_18 estimates, and assembles the certified 4x4 matrix of
(phi, phi_x, phi_y, phi_xy) columns at the base point.

Only positive-real arguments are supported: log mu and the half powers
use the principal real branch, which is all the pipeline ever needs
(analytic continuation happens through the ODE, not the series).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from . import elementary as el
from . import picard_fuchs as pf
from .errors import ConditionViolated, ConvergenceViolation, DomainError
from .intervals import ComplexInterval, RealInterval
from .linalg import CIMatrix
from .scalars import DD, Fp


def _point(v: float, prec: str) -> RealInterval:
    return RealInterval.point(v, prec)


def _as_positive_real(z: ComplexInterval, what: str) -> RealInterval:
    im = z.im
    if not (im.ih == 0.0 and im.il == 0.0 and im.sh == 0.0 and im.sl == 0.0):
        raise DomainError(f"{what} must be a positive real interval")
    if not z.re.strictly_positive():
        raise DomainError(f"{what} touches the branch cut (-inf, 0]")
    return z.re


# -- coefficient tables --------------------------------------------------------


@dataclass(frozen=True)
class SeriesCoeffs:
    """Tables keyed by (l, m), l+m <= N.

    e holds the integer-shifted d-coefficients d_{l+1,m}; g holds the
    half-shifted ones divided by i (real numbers, seeded with 2*pi).
    """

    N: int
    prec: str
    a: dict
    b: dict
    c: dict
    e: dict
    g: dict


def coeffs_build(N: int, prec: str = DD) -> SeriesCoeffs:
    if N < 0:
        raise ValueError("truncation order must be nonnegative")
    one = _point(1.0, prec)
    zero = _point(0.0, prec)
    a = {(0, 0): one}
    b = {(0, 0): zero}
    c = {(0, 0): zero}
    e = {(0, 0): -one}
    g = {(0, 0): el.pi(prec).mul_pow2(1)}

    def recip(j):
        return 1 / _point(float(j), prec)

    def recip_sq(j):
        return 1 / _point(float(j * j), prec)

    for n in range(1, N + 1):
        # anchor (0, n) from (0, n-1), then walk l upward along the ring
        l, m = 0, n - 1
        j0 = 2 * l + 4 * m
        a[(0, n)] = a[(l, m)] * ((j0 + 4) * (j0 + 3) * (j0 + 2) * (j0 + 1)) / (
            (l + m + 1) * (m + 1) ** 3
        )
        b[(0, n)] = (
            b[(l, m)]
            + (recip(j0 + 1) + recip(j0 + 2) + recip(j0 + 3) + recip(j0 + 4)) * 4
            - recip(l + m + 1)
            - recip(m + 1) * 3
        )
        c[(0, n)] = (
            c[(l, m)]
            + (recip_sq(j0 + 1) + recip_sq(j0 + 2) + recip_sq(j0 + 3) + recip_sq(j0 + 4)) * 16
            - recip_sq(l + m + 1)
            - recip_sq(m + 1) * 3
        )
        e[(0, n)] = e[(l, m)] * (-((l + m + 1) ** 3)) / (
            (l + 2 * m + 3) * (l + 2 * m + 2) * (m + 1)
        )
        g[(0, n)] = g[(l, m)] * (-((2 * l + 2 * m + 1) ** 3)) / (
            2 * (2 * l + 4 * m + 5) * (2 * l + 4 * m + 3) * (m + 1)
        )
        for l in range(n):
            m = n - 1 - l
            j0 = 2 * l + 4 * m
            a[(l + 1, m)] = a[(l, m)] * ((j0 + 2) * (j0 + 1)) / ((l + m + 1) * (l + 1))
            b[(l + 1, m)] = (
                b[(l, m)] + (recip(j0 + 1) + recip(j0 + 2)) * 4 - recip(l + m + 1)
            )
            c[(l + 1, m)] = (
                c[(l, m)] + (recip_sq(j0 + 1) + recip_sq(j0 + 2)) * 16 - recip_sq(l + m + 1)
            )
            e[(l + 1, m)] = e[(l, m)] * (-((l + m + 1) ** 3)) / (
                (2 * l + 3) * (2 * l + 2) * (l + 2 * m + 2)
            )
            g[(l + 1, m)] = g[(l, m)] * (-((2 * l + 2 * m + 1) ** 3)) / (
                4 * (2 * l + 2) * (2 * l + 1) * (2 * l + 4 * m + 3)
            )
    return SeriesCoeffs(N=N, prec=prec, a=a, b=b, c=c, e=e, g=g)


_COEFFS_CACHE: dict = {}


def _coeffs(N: int, prec: str) -> SeriesCoeffs:
    key = (N, prec)
    got = _COEFFS_CACHE.get(key)
    if got is None or got.N < N:
        got = coeffs_build(N, prec)
        _COEFFS_CACHE[key] = got
    return got


# -- truncated series evaluation ----------------------------------------------

_DERIV_KEYS = {
    "id": "id", "val": "id",
    "λ": "l", "lam": "l", "l": "l",
    "μ": "m", "mu": "m", "m": "m",
    "λλ": "ll", "lamlam": "ll", "ll": "ll",
    "μλ": "ml", "mulam": "ml", "ml": "ml",
    "μμ": "mm", "mumu": "mm", "mm": "mm",
}


class _PowCtx:
    """Power tables for one (lam, mu) positive-real evaluation point."""

    def __init__(self, lam: RealInterval, mu: RealInterval, N: int, prec: str):
        self.prec = prec
        one = _point(1.0, prec)
        self.lam_pow = [one]
        for _ in range(2 * N + 2):
            self.lam_pow.append(self.lam_pow[-1] * lam)
        inv_lam = 1 / lam
        self.lam_inv = [one, inv_lam, inv_lam * inv_lam]
        self.mu_pow = [one]
        for _ in range(N + 1):
            self.mu_pow.append(self.mu_pow[-1] * mu)
        inv_mu = 1 / mu
        self.mu_inv = [one]
        for _ in range(N + 4):
            self.mu_inv.append(self.mu_inv[-1] * inv_mu)
        self.sqrt_lam = el.sqrt(lam)
        self.inv_sqrt_mu = 1 / el.sqrt(mu)
        self.log_mu = el.log(mu)

    def lam_int(self, k: int) -> RealInterval:
        return self.lam_pow[k] if k >= 0 else self.lam_inv[-k]

    def mu_int(self, k: int) -> RealInterval:
        return self.mu_pow[k] if k >= 0 else self.mu_inv[-k]

    def half_mono(self, lexp: int, mexp_neg: int) -> RealInterval:
        """lam^(lexp+1/2) * mu^(-(mexp_neg+1/2))."""
        return self.lam_int(lexp) * self.sqrt_lam * self.mu_int(-mexp_neg) * self.inv_sqrt_mu


def _phi_real_sum(co: SeriesCoeffs, k: int, dv: str, ctx: _PowCtx, N: int) -> RealInterval:
    """Real part of the (unprefactored) triangular sum for (phi_k, deriv)."""
    prec = co.prec
    total = _point(0.0, prec)
    L = ctx.log_mu
    for n in range(N + 1):
        ring = _point(0.0, prec)
        for l in range(n + 1):
            m = n - l
            if k == 1 or k == 4:
                av = co.a[(l, m)]
                if k == 1:
                    if dv == "id":
                        t = av * ctx.lam_int(l) * ctx.mu_int(m)
                    elif dv == "l":
                        if l == 0:
                            continue
                        t = av * l * ctx.lam_int(l - 1) * ctx.mu_int(m)
                    elif dv == "m":
                        if m == 0:
                            continue
                        t = av * m * ctx.lam_int(l) * ctx.mu_int(m - 1)
                    elif dv == "ll":
                        if l < 2:
                            continue
                        t = av * (l * (l - 1)) * ctx.lam_int(l - 2) * ctx.mu_int(m)
                    elif dv == "ml":
                        if l == 0 or m == 0:
                            continue
                        t = av * (l * m) * ctx.lam_int(l - 1) * ctx.mu_int(m - 1)
                    else:
                        if m < 2:
                            continue
                        t = av * (m * (m - 1)) * ctx.lam_int(l) * ctx.mu_int(m - 2)
                else:
                    w = L + co.b[(l, m)]
                    if dv == "id":
                        t = av * w * ctx.lam_int(l) * ctx.mu_int(m)
                    elif dv == "l":
                        if l == 0:
                            continue
                        t = av * w * l * ctx.lam_int(l - 1) * ctx.mu_int(m)
                    elif dv == "m":
                        t = av * (w * m + 1) * ctx.lam_int(l) * ctx.mu_int(m - 1)
                    elif dv == "ll":
                        if l < 2:
                            continue
                        t = av * w * (l * (l - 1)) * ctx.lam_int(l - 2) * ctx.mu_int(m)
                    elif dv == "ml":
                        if l == 0:
                            continue
                        t = av * (w * m + 1) * l * ctx.lam_int(l - 1) * ctx.mu_int(m - 1)
                    else:
                        t = av * (w * (m * (m - 1)) + (2 * m - 1)) * ctx.lam_int(l) * ctx.mu_int(m - 2)
            elif k == 2:
                av = co.a[(l, m)]
                ev = co.e[(l, m)]
                w = L + co.b[(l, m)]
                w2c = w.sqr() - co.c[(l, m)]
                le, me = l + 2 * m + 1, l + m + 1
                if dv == "id":
                    t = av * w2c * ctx.lam_int(l) * ctx.mu_int(m)
                    t = t + ev.mul_pow2(-1) * ctx.lam_int(le) * ctx.mu_int(-me)
                elif dv == "l":
                    t = ev.mul_pow2(-1) * le * ctx.lam_int(le - 1) * ctx.mu_int(-me)
                    if l:
                        t = t + av * w2c * l * ctx.lam_int(l - 1) * ctx.mu_int(m)
                elif dv == "m":
                    t = av * (w.mul_pow2(1) + w2c * m) * ctx.lam_int(l) * ctx.mu_int(m - 1)
                    t = t - ev.mul_pow2(-1) * me * ctx.lam_int(le) * ctx.mu_int(-(me + 1))
                elif dv == "ll":
                    t = ev.mul_pow2(-1) * (le * (le - 1)) * ctx.lam_int(le - 2) * ctx.mu_int(-me)
                    if l >= 2:
                        t = t + av * w2c * (l * (l - 1)) * ctx.lam_int(l - 2) * ctx.mu_int(m)
                elif dv == "ml":
                    t = -(ev.mul_pow2(-1) * (me * le) * ctx.lam_int(le - 1) * ctx.mu_int(-(me + 1)))
                    if l:
                        t = t + av * (w.mul_pow2(1) + w2c * m) * l * ctx.lam_int(l - 1) * ctx.mu_int(m - 1)
                else:
                    t = av * (
                        w.mul_pow2(1) * (2 * m - 1) + w2c * (m * (m - 1)) + 2
                    ) * ctx.lam_int(l) * ctx.mu_int(m - 2)
                    t = t + ev.mul_pow2(-1) * (me * (me + 1)) * ctx.lam_int(le) * ctx.mu_int(-(me + 2))
            else:
                gv = co.g[(l, m)]
                le, me = l + 2 * m, l + m  # exponents before the +1/2 shifts
                fl = _point(le + 0.5, prec)
                fm = _point(me + 0.5, prec)
                if dv == "id":
                    t = gv * ctx.half_mono(le, me)
                elif dv == "l":
                    t = gv * fl * ctx.half_mono(le - 1, me)
                elif dv == "m":
                    t = -(gv * fm * ctx.half_mono(le, me + 1))
                elif dv == "ll":
                    t = gv * (fl * _point(le - 0.5, prec)) * ctx.half_mono(le - 2, me)
                elif dv == "ml":
                    t = -(gv * (fl * fm) * ctx.half_mono(le - 1, me + 1))
                else:
                    t = gv * (fm * _point(me + 1.5, prec)) * ctx.half_mono(le, me + 2)
            ring = ring + t
        total = total + ring
    return total


def _check_convergence_region(lam: RealInterval, mu: RealInterval, prec: str):
    s = lam.abs() + mu.abs()
    lim = _point(1.0, prec) / 256
    if not _lt(s, lim):
        raise ConvergenceViolation("|lam| + |mu| >= 1/256")


def _lt(a: RealInterval, b: RealInterval) -> bool:
    # sup(a) < inf(b), rigorous
    return (a.sh, a.sl) < (b.ih, b.il)


def phi_truncated(k: int, deriv: str, N: int, lam0: ComplexInterval,
                  mu0: ComplexInterval) -> ComplexInterval:
    """Triangular partial sum 0 <= l+m <= N of the designated series.

    Includes the 1/(2 pi^2), i/(4 pi^2), 1/(2 pi i) prefactors, so the
    result is the truncation of phi_k itself (or its lam/mu partial).
    """
    if k not in (1, 2, 3, 4):
        raise ValueError(f"series index out of range: {k}")
    dv = _DERIV_KEYS.get(deriv)
    if dv is None:
        raise ValueError(f"unknown derivative key: {deriv!r}")
    prec = lam0.prec
    lam = _as_positive_real(lam0, "lam0")
    mu = _as_positive_real(mu0, "mu0")
    _check_convergence_region(lam, mu, prec)
    co = _coeffs(N, prec)
    ctx = _PowCtx(lam, mu, N, prec)
    return _assemble_phi(co, k, dv, ctx, N, prec)


def _assemble_phi(co, k, dv, ctx, N, prec) -> ComplexInterval:
    s = _phi_real_sum(co, k, dv, ctx, N)
    zero = _point(0.0, prec)
    pi2 = el.pi(prec).sqr()
    if k == 1:
        return ComplexInterval(s, zero)
    if k == 2:
        return ComplexInterval(s / pi2.mul_pow2(1), zero)
    if k == 3:
        return ComplexInterval(zero, s / pi2.mul_pow2(2))
    # 1/(2 pi i) = -i/(2 pi)
    return ComplexInterval(zero, -(s / el.pi(prec).mul_pow2(1)))


# -- tail bound machinery -------------------------------------------------------


@dataclass(frozen=True)
class TailBoundParams:
    """Ring-index growth factors entering the geometric tail estimates.

    iota/nu/xi/sigma involve n-1 and are only defined for n >= 2 (None
    below that).
    """

    n: int
    eps: float
    beta: RealInterval
    gamma: RealInterval
    eta: RealInterval
    theta: RealInterval
    iota: RealInterval | None
    nu: RealInterval | None
    xi: RealInterval | None
    sigma: RealInterval | None


def _log_factor(n: int, prec: str) -> RealInterval:
    # 4 log 4 + 3 + 3 log n
    return el.ln2(prec).mul_pow2(3) + 3 + el.log(_point(float(n), prec)) * 3


def tail_params(n: int, eps: float, prec: str = DD) -> TailBoundParams:
    if n < 1:
        raise ValueError("ring index must be >= 1")
    if eps not in (0.5, 1, 1.0):
        raise ValueError("eps must be 1/2 or 1")
    eps = float(eps)
    one = _point(1.0, prec)
    beta = 1 + (el.log(1 + 1 / _point(float(n), prec)) * 3) / _log_factor(n, prec)
    gamma = (4 + 1 / _point(float(n), prec)) * 64
    root = el.sqrt(1 + 1 / _point(float(n), prec))
    base = _point(25.0, prec) / 64
    eta = base * (1 + 2 / _point(2 * n + eps, prec)) * root
    theta = base * (1 + 1 / _point(n + eps, prec)) * root
    if n >= 2:
        iota = (4 + 5 / _point(float(n - 1), prec)) * 64
        nu = base * (1 + 2 / _point(2 * n + eps, prec)) * (1 + 2 / _point(2 * n + eps - 1, prec)) * root
        xi = base * (1 + 2 / _point(2 * n + eps, prec)) * (1 + 1 / _point(n + eps, prec)) * root
        sigma = base * (1 + 1 / _point(n + eps, prec)) * (1 + 1 / _point(n + eps + 1, prec)) * root
    else:
        iota = nu = xi = sigma = None
    return TailBoundParams(n=n, eps=eps, beta=beta, gamma=gamma, eta=eta,
                           theta=theta, iota=iota, nu=nu, xi=xi, sigma=sigma)


def _quartic_ratio(k: int, prec: str) -> RealInterval:
    # (4k)! / (k!)^4 by incremental products, never raw factorials
    t = _point(1.0, prec)
    for j in range(k):
        num = (4 * j + 4) * (4 * j + 3) * (4 * j + 2) * (4 * j + 1)
        t = t * num / ((j + 1) ** 4)
    return t


def _ipow(base: RealInterval, e: int, prec: str) -> RealInterval:
    out = _point(1.0, prec)
    for _ in range(e):
        out = out * base
    return out


_EPS_BOUNDS = {5, 10, 11, 16, 17, 18}


def _require(cond: bool, label: str):
    if not cond:
        raise ConditionViolated(f"tail bound condition failed: {label}")


def delta_bound(j: int, eps, N: int, lam: ComplexInterval, mu: ComplexInterval) -> RealInterval:
    """Upper bound for tail sum number j over l+m >= N+1."""
    if j not in range(1, 19):
        raise ValueError(f"tail bound index out of range: {j}")
    if j in _EPS_BOUNDS:
        if eps not in (0.5, 1, 1.0):
            raise ValueError(f"bound {j} requires eps in {{1/2, 1}}")
        eps = float(eps)
    prec = lam.prec
    one = _point(1.0, prec)
    labs = el.ci_abs(lam)
    mabs = el.ci_abs(mu)
    s = labs + mabs
    k = N + 1
    tp = tail_params(k, eps if j in _EPS_BOUNDS else 1.0, prec)
    quart = _quartic_ratio(k, prec)
    logf = _log_factor(k, prec)

    if j in (1, 2, 3, 4):
        if j == 1 or j == 4:
            _require(_lt(s * 256, one), "256 (|lam|+|mu|) < 1")
            den = 1 - s * 256
        elif j == 2:
            _require(_lt(s * tp.beta * 256, one), "256 beta (|lam|+|mu|) < 1")
            den = 1 - s * tp.beta * 256
        else:
            _require(_lt(s * tp.beta.sqr() * 256, one), "256 beta^2 (|lam|+|mu|) < 1")
            den = 1 - s * tp.beta.sqr() * 256
        out = quart * _ipow(s, k, prec) / den
        if j == 2:
            out = out * logf
        elif j == 3:
            out = out * logf.sqr()
        elif j == 4:
            out = out * el.pi(prec).sqr() * 8 / 3
        return out

    if j in (6, 7, 8, 9):
        if j == 6 or j == 9:
            _require(_lt(s * tp.gamma, one), "gamma (|lam|+|mu|) < 1")
            den = 1 - s * tp.gamma
        elif j == 7:
            _require(_lt(s * tp.beta * tp.gamma, one), "beta gamma (|lam|+|mu|) < 1")
            den = 1 - s * tp.beta * tp.gamma
        else:
            _require(_lt(s * tp.beta.sqr() * tp.gamma, one), "beta^2 gamma (|lam|+|mu|) < 1")
            den = 1 - s * tp.beta.sqr() * tp.gamma
        out = quart * k * _ipow(s, N, prec) / den
        if j == 7:
            out = out * logf
        elif j == 8:
            out = out * logf.sqr()
        elif j == 9:
            out = out * el.pi(prec).sqr() * 8 / 3
        return out

    if j in (12, 13, 14, 15):
        if N < 1:
            raise ValueError("second-derivative tail bounds need N >= 1")
        if j == 12 or j == 15:
            _require(_lt(s * tp.iota, one), "iota (|lam|+|mu|) < 1")
            den = 1 - s * tp.iota
        elif j == 13:
            _require(_lt(s * tp.beta * tp.iota, one), "beta iota (|lam|+|mu|) < 1")
            den = 1 - s * tp.beta * tp.iota
        else:
            _require(_lt(s * tp.beta.sqr() * tp.iota, one), "beta^2 iota (|lam|+|mu|) < 1")
            den = 1 - s * tp.beta.sqr() * tp.iota
        out = quart * (k * (k - 1)) * _ipow(s, N - 1, prec) / den
        if j == 13:
            out = out * logf
        elif j == 14:
            out = out * logf.sqr()
        elif j == 15:
            out = out * el.pi(prec).sqr() * 8 / 3
        return out

    # d-series bounds: j in {5, 10, 11, 16, 17, 18}
    r = (labs + labs.sqr()) / mabs
    w = r * 25 / 64
    front = el.exp(_point(3.0, prec)) / (el.sqrt(_point(2.0, prec)).mul_pow2(1) * el.pi(prec))
    ratio = labs / mabs
    front = front * (el.sqrt(ratio) if eps == 0.5 else ratio)
    core = el.sqrt(_point(float(k), prec)) * _ipow(w, k, prec)
    if j == 5:
        lim = el.sqrt(1 + 1 / _point(float(k), prec)) * 25 / 64
        _require(_lt(r * lim, one), "(25/64) sqrt(1+1/(N+1)) (|lam|+|lam|^2)/|mu| < 1")
        return front * core / (1 - r * lim)
    if j == 10:
        _require(_lt(r * tp.eta, one), "eta (|lam|+|lam|^2)/|mu| < 1")
        return front * core * _point(2 * k + eps, prec) / labs / (1 - r * tp.eta)
    if j == 11:
        _require(_lt(r * tp.theta, one), "theta (|lam|+|lam|^2)/|mu| < 1")
        return front * core * _point(k + eps, prec) / mabs / (1 - r * tp.theta)
    if N < 1:
        raise ValueError("second-derivative tail bounds need N >= 1")
    if j == 16:
        _require(_lt(r * tp.nu, one), "nu (|lam|+|lam|^2)/|mu| < 1")
        fac = _point(2 * k + eps, prec) * _point(2 * k + eps - 1, prec)
        return front * core * fac / labs.sqr() / (1 - r * tp.nu)
    if j == 17:
        _require(_lt(r * tp.xi, one), "xi (|lam|+|lam|^2)/|mu| < 1")
        fac = _point(2 * k + eps, prec) * _point(k + eps, prec)
        return front * core * fac / (labs * mabs) / (1 - r * tp.xi)
    _require(_lt(r * tp.sigma, one), "sigma (|lam|+|lam|^2)/|mu| < 1")
    fac = _point(k + eps, prec) * _point(k + 1 + eps, prec)
    return front * core * fac / mabs.sqr() / (1 - r * tp.sigma)


# -- epsilon bounds and the fundamental matrix ---------------------------------


def epsilon_bounds(k: int, N: int, lam0: ComplexInterval, mu0: ComplexInterval):
    """Nine tail radii: (id, lam, mu, lamlam, mulam, mumu, x, y, xy)."""
    prec = lam0.prec
    mu_r = _as_positive_real(mu0, "mu0")
    d = lambda j, eps=None: delta_bound(j, eps, N, lam0, mu0)
    if k == 1:
        e_id = d(1)
        e_l = e_m = d(6)
        e_ll = e_ml = e_mm = d(12)
    elif k == 2:
        pi2_2 = el.pi(prec).sqr().mul_pow2(1)
        L = el.log(mu_r)
        La = L.abs()
        L2 = L.sqr()
        inv_m = 1 / mu_r.abs()
        e_id = (L2 * d(1) + La * d(2) * 2 + d(3) + d(4) + d(5, 1).mul_pow2(-1)) / pi2_2
        e_l = (L2 * d(6) + La * d(7) * 2 + d(8) + d(9) + d(10, 1).mul_pow2(-1)) / pi2_2
        e_m = (
            La * inv_m * d(1) * 2 + inv_m * d(2) * 2
            + L2 * d(6) + La * d(7) * 2 + d(8) + d(9) + d(11, 1).mul_pow2(-1)
        ) / pi2_2
        e_ll = (L2 * d(12) + La * d(13) * 2 + d(14) + d(15) + d(16, 1).mul_pow2(-1)) / pi2_2
        e_ml = (
            La * inv_m * d(6) * 2 + inv_m * d(7) * 2
            + L2 * d(12) + La * d(13) * 2 + d(14) + d(15) + d(17, 1).mul_pow2(-1)
        ) / pi2_2
        e_mm = (
            inv_m.sqr() * d(1) * 2 + La * inv_m * d(6) * 4 + inv_m * d(7) * 4
            + L2 * d(12) + La * d(13) * 2 + d(14) + d(15) + d(18, 1).mul_pow2(-1)
        ) / pi2_2
    elif k == 3:
        pi2_4 = el.pi(prec).sqr().mul_pow2(2)
        e_id = d(5, 0.5) / pi2_4
        e_l = d(10, 0.5) / pi2_4
        e_m = d(11, 0.5) / pi2_4
        e_ll = d(16, 0.5) / pi2_4
        e_ml = d(17, 0.5) / pi2_4
        e_mm = d(18, 0.5) / pi2_4
    elif k == 4:
        two_pi = el.pi(prec).mul_pow2(1)
        La = el.log(mu_r).abs()
        inv_m = 1 / mu_r.abs()
        e_id = (La * d(1) + d(2)) / two_pi
        e_l = (La * d(6) + d(7)) / two_pi
        e_m = (inv_m * d(1) + La * d(6) + d(7)) / two_pi
        e_ll = (La * d(12) + d(13)) / two_pi
        e_ml = (inv_m * d(6) + La * d(12) + d(13)) / two_pi
        e_mm = (inv_m * d(6) * 2 + La * d(12) + d(13)) / two_pi
    else:
        raise ValueError(f"series index out of range: {k}")

    pt = pf.to_xy(pf.PointLM(lam0, mu0))
    lam_x, lam_y, lam_xy, mu_x, mu_y, mu_xy = pf.jacobians(pt)
    wlx, wly, wlxy = lam_x.re.abs(), lam_y.re.abs(), lam_xy.re.abs()
    wmx, wmy, wmxy = mu_x.re.abs(), mu_y.re.abs(), mu_xy.re.abs()
    e_x = e_l * wlx + e_m * wmx
    e_y = e_l * wly + e_m * wmy
    e_xy = (
        (e_ll * wlx + e_ml * wmx) * wly + e_l * wlxy
        + (e_ml * wlx + e_mm * wmx) * wmy + e_m * wmxy
    )
    return e_id, e_l, e_m, e_ll, e_ml, e_mm, e_x, e_y, e_xy


@dataclass(frozen=True)
class PhiEnclosure:
    k: int
    value: ComplexInterval
    d_lam: ComplexInterval
    d_mu: ComplexInterval
    d_lamlam: ComplexInterval
    d_mulam: ComplexInterval
    d_mumu: ComplexInterval
    d_x: ComplexInterval
    d_y: ComplexInterval
    d_xy: ComplexInterval


def _with_tail(v: ComplexInterval, rad: RealInterval, axis: str, prec: str) -> ComplexInterval:
    r = rad.sup.hi if rad.sup.hi >= 0.0 else 0.0
    band = RealInterval.from_floats(-r, r, prec)
    if axis == "re":
        return ComplexInterval(v.re + band, v.im)
    return ComplexInterval(v.re, v.im + band)


def phi_enclosure(k: int, N: int, lam0: ComplexInterval, mu0: ComplexInterval) -> PhiEnclosure:
    """Truncated values plus centered tail boxes for phi_k and derivatives.

    At a positive-real argument every term of the k=1,2 series is real
    and every term of the k=3,4 series is purely imaginary, so each tail
    lies on the matching axis; error bands are applied to that component
    only and the other component stays an exact structural zero.
    """
    prec = lam0.prec
    lam = _as_positive_real(lam0, "lam0")
    mu = _as_positive_real(mu0, "mu0")
    _check_convergence_region(lam, mu, prec)
    co = _coeffs(N, prec)
    ctx = _PowCtx(lam, mu, N, prec)
    v = {dv: _assemble_phi(co, k, dv, ctx, N, prec)
         for dv in ("id", "l", "m", "ll", "ml", "mm")}
    eps = epsilon_bounds(k, N, lam0, mu0)

    pt = pf.to_xy(pf.PointLM(lam0, mu0))
    lam_x, lam_y, lam_xy, mu_x, mu_y, mu_xy = pf.jacobians(pt)
    d_x = v["l"] * lam_x + v["m"] * mu_x
    d_y = v["l"] * lam_y + v["m"] * mu_y
    d_xy = (
        (v["ll"] * lam_x + v["ml"] * mu_x) * lam_y + v["l"] * lam_xy
        + (v["ml"] * lam_x + v["mm"] * mu_x) * mu_y + v["m"] * mu_xy
    )
    ax = "re" if k in (1, 2) else "im"
    return PhiEnclosure(
        k=k,
        value=_with_tail(v["id"], eps[0], ax, prec),
        d_lam=_with_tail(v["l"], eps[1], ax, prec),
        d_mu=_with_tail(v["m"], eps[2], ax, prec),
        d_lamlam=_with_tail(v["ll"], eps[3], ax, prec),
        d_mulam=_with_tail(v["ml"], eps[4], ax, prec),
        d_mumu=_with_tail(v["mm"], eps[5], ax, prec),
        d_x=_with_tail(d_x, eps[6], ax, prec),
        d_y=_with_tail(d_y, eps[7], ax, prec),
        d_xy=_with_tail(d_xy, eps[8], ax, prec),
    )


@dataclass(frozen=True)
class FundamentalMatrixEnclosure:
    N: int
    matrix: CIMatrix
    columns: tuple  # PhiEnclosure per k = 1..4


def fundamental_matrix(N: int, lam0: ComplexInterval, mu0: ComplexInterval) -> FundamentalMatrixEnclosure:
    """Certified 4x4 matrix: rows (phi, phi_x, phi_y, phi_xy), columns k."""
    cols = tuple(phi_enclosure(k, N, lam0, mu0) for k in (1, 2, 3, 4))
    rows = []
    for field in ("value", "d_x", "d_y", "d_xy"):
        rows.append(tuple(getattr(c, field) for c in cols))
    return FundamentalMatrixEnclosure(N=N, matrix=CIMatrix(tuple(rows)), columns=cols)
