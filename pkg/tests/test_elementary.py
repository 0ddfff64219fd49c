"""Elementary enclosures against a 60-digit big-float oracle."""

import math

import mpmath as mp
import numpy as np
import pytest

from k3mono import elementary as el
from k3mono.errors import DomainError
from k3mono.intervals import ComplexInterval, RealInterval
from k3mono.scalars import DD, F64


def _encloses(iv: RealInterval, exact: mp.mpf) -> bool:
    lo = mp.mpf(iv.ih) + mp.mpf(iv.il)
    hi = mp.mpf(iv.sh) + mp.mpf(iv.sl)
    return lo <= exact <= hi


def _width(iv: RealInterval) -> float:
    return float(mp.mpf(iv.sh) + mp.mpf(iv.sl) - mp.mpf(iv.ih) - mp.mpf(iv.il))


def test_pi_and_ln2_constants():
    with mp.workdps(60):
        for prec, cap in ((DD, 1e-30), (F64, 1e-15)):
            p = el.pi(prec)
            assert _encloses(p, mp.pi)
            assert _width(p) < cap
            l2 = el.ln2(prec)
            assert _encloses(l2, mp.log(2))
            assert _width(l2) < cap


@pytest.mark.parametrize("prec", [DD, F64])
def test_exp_log_sqrt_points(prec):
    rng = np.random.default_rng(17)
    cap = 1e-28 if prec == DD else 1e-13
    with mp.workdps(60):
        for _ in range(800):
            x = float(rng.uniform(-3.0, 3.0))
            e = el.exp(RealInterval.point(x, prec))
            assert _encloses(e, mp.e**mp.mpf(x))
            assert _width(e) < cap * max(1.0, math.exp(x))
            y = float(rng.uniform(1e-8, 50.0))
            lg = el.log(RealInterval.point(y, prec))
            assert _encloses(lg, mp.log(mp.mpf(y)))
            rt = el.sqrt(RealInterval.point(y, prec))
            assert _encloses(rt, mp.sqrt(mp.mpf(y)))


@pytest.mark.parametrize("prec", [DD, F64])
def test_sin_cos_points_including_criticals(prec):
    rng = np.random.default_rng(23)
    with mp.workdps(60):
        args = [float(rng.uniform(-4.0 * math.pi, 4.0 * math.pi)) for _ in range(600)]
        # floats near the sin/cos extrema and zeros
        args += [k * math.pi / 2 for k in range(-8, 9)]
        for x in args:
            s = el.sin(RealInterval.point(x, prec))
            c = el.cos(RealInterval.point(x, prec))
            assert _encloses(s, mp.sin(mp.mpf(x)))
            assert _encloses(c, mp.cos(mp.mpf(x)))
            assert s.ih >= -1.0 and s.sh <= 1.0
            assert c.ih >= -1.0 and c.sh <= 1.0


def test_interval_arguments_enclose_range():
    with mp.workdps(60):
        rng = np.random.default_rng(5)
        for _ in range(400):
            a = float(rng.uniform(-6.0, 6.0))
            w = float(abs(rng.normal()) * 0.7)
            iv = RealInterval.from_floats(a, a + w, DD)
            s = el.sin(iv)
            c = el.cos(iv)
            e = el.exp(RealInterval.from_floats(min(a, 2.0), min(a + w, 2.5), DD))
            for t in np.linspace(a, a + w, 9):
                assert _encloses(s, mp.sin(mp.mpf(float(t))))
                assert _encloses(c, mp.cos(mp.mpf(float(t))))
            for t in np.linspace(min(a, 2.0), min(a + w, 2.5), 5):
                assert _encloses(e, mp.e ** mp.mpf(float(t)))


def test_sin_hits_extrema_over_wide_interval():
    iv = RealInterval.from_floats(0.0, 7.0, DD)
    s = el.sin(iv)
    assert s.ih == -1.0 and s.sh == 1.0


def test_log_domain_guard():
    with pytest.raises(DomainError):
        el.log(RealInterval.from_floats(-1.0, 2.0))
    with pytest.raises(DomainError):
        el.log(RealInterval.point(0.0))


def test_sqrt_domain_guard():
    with pytest.raises(DomainError):
        el.sqrt(RealInterval.from_floats(-1e-30, 1.0))
    with pytest.raises(DomainError):
        el.sqrt(RealInterval.point(0.0))


def test_exp_i_pi_unit_circle():
    with mp.workdps(60):
        for t in (0.0, 0.25, 0.5, -0.75, 1.0, -1.0, 0.125):
            z = el.exp_i_pi(RealInterval.point(t, DD))
            exact_re = mp.cos(mp.pi * mp.mpf(t))
            exact_im = mp.sin(mp.pi * mp.mpf(t))
            assert _encloses(z.re, exact_re)
            assert _encloses(z.im, exact_im)
    one = el.exp_i_pi(RealInterval.point(0.0, DD))
    assert one.contains(1.0)
    minus = el.exp_i_pi(RealInterval.point(1.0, DD))
    assert minus.contains(-1.0)


def test_ci_abs():
    z = ComplexInterval.point(3 + 4j, DD)
    m = el.ci_abs(z)
    assert m.contains(5.0)
    with mp.workdps(40):
        rng = np.random.default_rng(3)
        for _ in range(200):
            zr, zi = rng.normal(), rng.normal()
            m = el.ci_abs(ComplexInterval.point(complex(zr, zi), DD))
            assert _encloses(m, mp.sqrt(mp.mpf(zr) ** 2 + mp.mpf(zi) ** 2))


def test_ri_elementary_dispatch():
    x = RealInterval.point(0.5, DD)
    got = el.ri_elementary(x, "exp")
    ref = el.exp(x)
    assert (got.ih, got.il, got.sh, got.sl) == (ref.ih, ref.il, ref.sh, ref.sl)
    with pytest.raises(ValueError):
        el.ri_elementary(x, "tanh")
