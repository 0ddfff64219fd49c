"""Univariate Taylor-jet arithmetic over complex intervals.

A jet holds interval coefficients c0..cp of a truncated expansion
sum c_k (t - t0)^k in the path parameter; the base point itself is kept
by the caller.  Division solves the triangular convolution system, so
rational coefficient fields of the transported system expand with no
symbolic work.  This is the reference implementation; the integrator's
batched kernels mirror it operation for operation and are tested for
bit equality against it.
"""

from __future__ import annotations

from . import elementary as el
from .errors import DivisorContainsZero
from .intervals import ComplexInterval, RealInterval
from .scalars import DD


class TaylorJet:
    """Truncated power series with ComplexInterval coefficients."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs):
        coeffs = tuple(coeffs)
        if not coeffs:
            raise ValueError("a jet needs at least the constant coefficient")
        prec = coeffs[0].prec
        if any(c.prec != prec for c in coeffs):
            raise ValueError("coefficient precision mismatch")
        self.coeffs = coeffs

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    @property
    def prec(self):
        return self.coeffs[0].prec

    @classmethod
    def constant(cls, value, p: int, prec=DD) -> "TaylorJet":
        c0 = value if isinstance(value, ComplexInterval) else ComplexInterval.point(value, prec)
        zero = ComplexInterval.point(0.0, c0.prec)
        return cls((c0,) + (zero,) * p)

    @classmethod
    def variable(cls, t0_value, p: int, prec=DD) -> "TaylorJet":
        """The jet of t itself about t0: t0 + (t - t0)."""
        if p < 1:
            raise ValueError("variable jet needs order >= 1")
        c0 = t0_value if isinstance(t0_value, ComplexInterval) else ComplexInterval.point(t0_value, prec)
        one = ComplexInterval.point(1.0, c0.prec)
        zero = ComplexInterval.point(0.0, c0.prec)
        return cls((c0, one) + (zero,) * (p - 1))

    def __repr__(self):
        return f"TaylorJet(order={self.order}, prec={self.prec})"

    def _coerce(self, other) -> "TaylorJet":
        if isinstance(other, TaylorJet):
            if other.order != self.order:
                raise ValueError("jet order mismatch")
            return other
        return TaylorJet.constant(other, self.order, self.prec)

    def __neg__(self):
        return TaylorJet(tuple(-c for c in self.coeffs))

    def __add__(self, other):
        b = self._coerce(other)
        return TaylorJet(tuple(x + y for x, y in zip(self.coeffs, b.coeffs)))

    __radd__ = __add__

    def __sub__(self, other):
        b = self._coerce(other)
        return TaylorJet(tuple(x - y for x, y in zip(self.coeffs, b.coeffs)))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, float, complex, ComplexInterval, RealInterval)):
            z = other if isinstance(other, (ComplexInterval, RealInterval)) else ComplexInterval.point(other, self.prec)
            return TaylorJet(tuple(c * z for c in self.coeffs))
        b = self._coerce(other)
        a = self.coeffs
        bc = b.coeffs
        out = []
        for k in range(len(a)):
            acc = a[0] * bc[k]
            for j in range(1, k + 1):
                acc = acc + a[j] * bc[k - j]
            out.append(acc)
        return TaylorJet(tuple(out))

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, float, complex, ComplexInterval, RealInterval)):
            return TaylorJet(tuple(c / other for c in self.coeffs))
        b = self._coerce(other)
        b0 = b.coeffs[0]
        if b0.abs_sqr().contains_zero():
            raise DivisorContainsZero("jet division with 0 in the constant coefficient")
        a = self.coeffs
        bc = b.coeffs
        out = [a[0] / b0]
        for k in range(1, len(a)):
            acc = a[k]
            for j in range(1, k + 1):
                acc = acc - bc[j] * out[k - j]
            out.append(acc / b0)
        return TaylorJet(tuple(out))

    def __rtruediv__(self, other):
        return TaylorJet.constant(other, self.order, self.prec) / self

    def derivative(self) -> "TaylorJet":
        """Jet of d/dt, truncated to the same order (top coefficient 0)."""
        zero = ComplexInterval.point(0.0, self.prec)
        out = [self.coeffs[k] * k for k in range(1, len(self.coeffs))]
        out.append(zero)
        return TaylorJet(tuple(out))

    def eval(self, dt) -> ComplexInterval:
        """Horner evaluation at t - t0 = dt (interval or number)."""
        if not isinstance(dt, (ComplexInterval, RealInterval)):
            dt = ComplexInterval.point(dt, self.prec)
        acc = self.coeffs[-1]
        for c in reversed(self.coeffs[:-1]):
            acc = acc * dt + c
        return acc


def jet_arith(a: TaylorJet, b: TaylorJet, op: str) -> TaylorJet:
    if op in ("+",):
        return a + b
    if op in ("-", "−"):
        return a - b
    if op in ("*", "×"):
        return a * b
    if op in ("/", "÷"):
        return a / b
    raise ValueError(f"unknown op {op!r}")


def exp_jet(scale: ComplexInterval, t0: RealInterval, p: int) -> TaylorJet:
    """Jet of exp(scale * t) about t0: coefficients e^{scale t0} scale^k / k!.

    The constant term goes through the rigorous real exp/sin/cos kernels;
    higher coefficients follow by the multiplicative recurrence, never by
    raw factorials.
    """
    prec = t0.prec
    w_re = scale.re * t0
    w_im = scale.im * t0
    mag = el.exp(w_re)
    c0 = ComplexInterval(mag * el.cos(w_im), mag * el.sin(w_im))
    out = [c0]
    for k in range(1, p + 1):
        out.append((out[-1] * scale) / k)
    return TaylorJet(tuple(out))
