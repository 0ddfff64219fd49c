"""Validated Taylor integration of the pulled-back system along contours.

Along one parameterized segment the unknown is the 4x4 transition matrix
S with S' = P(t) S, S(t_start) = Id, where P = A x' + B y' is assembled
from the Pfaffian pair in jet arithmetic.  Each step encloses

    S(t+h)  in  sum_{k<=p} Theta_k h^k  +  Theta~_{p+1} h^{p+1},

with Theta_k the recurrence coefficients at the exact basepoint t and
Theta~_{p+1} the same recurrence over the whole step box, seeded with a
Picard-verified tube for S.  Step endpoints live on the dyadic grid
2^-30, so every basepoint, step width, and running parameter sum is an
exact float and the final endpoint is hit exactly.  Accumulated
transitions are wrapped through verified QR frames to keep long
products from aligning interval boxes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _kernels as K
from . import contours as co
from .errors import (
    DivisorContainsZero,
    MinStepUnderflow,
    SingularityProximity,
    StepRejected,
    VerificationFailed,
)
from .intervals import ComplexInterval, RealInterval
from .linalg import CIMatrix, verified_inverse
from .picard_fuchs import CoeffEnv, PointXY, pfaffian_entries
from .scalars import DD, F64
from .singular import base_point
from .taylor import TaylorJet


@dataclass(frozen=True)
class IntegrationConfig:
    precision: str = DD
    order: int = 15
    tolerance: float | None = None
    min_step: float = 2.0**-30
    max_step_frac: float = 1.0 / 16.0
    picard_tries: int = 12

    @property
    def tol(self) -> float:
        if self.tolerance is not None:
            return self.tolerance
        return 1e-25 if self.precision == DD else 1e-12


class _GuardHit(Exception):
    """Internal: the step box reached the singular locus guards."""


def _identity_arr() -> np.ndarray:
    out = np.zeros((4, 4, 8), dtype=np.float64)
    for i in range(4):
        out[i, i, 0] = 1.0
        out[i, i, 2] = 1.0
    return out


_GRID = 2.0**-30


def _grid_floor(x: float) -> float:
    """Largest multiple of 2^-30 at or below x (exact for |x| <= 2)."""
    return math.floor(x / _GRID) * _GRID


def _max_mag(a: np.ndarray) -> float:
    return float(np.max(np.abs(a[..., (0, 2, 4, 6)])))


def _trace_radius(a: np.ndarray) -> float:
    """Largest entry half-width of the running product (diagnostic only)."""
    re = (a[..., 2] - a[..., 0]) + (a[..., 3] - a[..., 1])
    im = (a[..., 6] - a[..., 4]) + (a[..., 7] - a[..., 5])
    return float(max(np.max(re), np.max(im)) * 0.5)


def _guards(x0: ComplexInterval, y0: ComplexInterval):
    w = x0 * 4 + y0
    hpol = x0 * 20 + y0 * 9 + 1
    u = x0 * 36 + y0 * 13.5 + 1
    v = 1 - x0 * 12
    disc = u * u - v * v * v
    for name, z in (("x", x0), ("y", y0), ("4x+y", w), ("h", hpol), ("disc", disc)):
        if z.contains_zero():
            raise _GuardHit(f"{name} enclosure meets zero over the step box")


def _p_jets(xj: TaylorJet, yj: TaylorJet, dxj: TaylorJet, dyj: TaylorJet, dd: bool):
    return K.pfaffian_jets(
        K.jet_arr(xj).a, K.jet_arr(yj).a, K.jet_arr(dxj).a, K.jet_arr(dyj).a, dd
    )


def p_jets_reference(xj: TaylorJet, yj: TaylorJet, dxj: TaylorJet, dyj: TaylorJet, dd: bool):
    """Same jets through the generic coefficient path (for equality tests)."""
    p = xj.order
    jx, jy = K.jet_arr(xj), K.jet_arr(yj)
    jdx, jdy = K.jet_arr(dxj), K.jet_arr(dyj)
    env = CoeffEnv(
        jx, jy, K.JetArr.constant(1.0, p, dd), K.JetArr.constant(0.0, p, dd)
    )
    amat, bmat = pfaffian_entries(env)
    out = np.empty((p + 1, 4, 4, 8), dtype=np.float64)
    for i in range(4):
        for j in range(4):
            out[:, i, j, :] = (amat[i][j] * jdx + bmat[i][j] * jdy).a
    return out


def _id4() -> np.ndarray:
    out = np.zeros((4, 4, 4), dtype=np.float64)
    for i in range(4):
        out[i, i, 0] = 1.0
        out[i, i, 1] = 1.0
    return out


def _inflate_b(w: np.ndarray, rel: float, pad: float) -> np.ndarray:
    out = w.copy()
    for off in (0, 2):
        delta = rel * (w[..., off + 1] - w[..., off]) * 0.5 + pad
        out[..., off] = w[..., off] - delta
        out[..., off + 1] = w[..., off + 1] + delta
    return out


def _picard_tube_b(p0: np.ndarray, h: float, cfg: IntegrationConfig):
    """Box W with Id + [0,h] P0 W inside W, or None (lean rows)."""
    idm = _id4()
    w = _inflate_b(
        K.bmat_add(idm, K.bmat_scale_real(K.bmat_mul(p0, idm), 0.0, h)),
        1.0,
        cfg.tol,
    )
    for _ in range(cfg.picard_tries):
        f = K.bmat_add(idm, K.bmat_scale_real(K.bmat_mul(p0, w), 0.0, h))
        if K.bmat_subset(f, w):
            w = f
            for _ in range(2):
                w = K.bmat_add(idm, K.bmat_scale_real(K.bmat_mul(p0, w), 0.0, h))
            return w
        w = _inflate_b(K.bmat_hull(f, w), 1.0, cfg.tol)
    return None


def _h_power_row(h: float, k: int, prec) -> np.ndarray:
    acc = RealInterval.point(h, prec)
    base = RealInterval.point(h, prec)
    for _ in range(k - 1):
        acc = acc * base
    return np.array([acc.ih, acc.il, acc.sh, acc.sl, 0.0, 0.0, 0.0, 0.0])


def step_transition(
    seg, base: PointXY, t_c: float, h: float, cfg: IntegrationConfig, base_box=None
):
    """Transition enclosure over [t_c, t_c + h], or StepRejected/_GuardHit.

    Both endpoints must be exact floats with an exactly representable
    sum.  Returns (T, remainder_magnitude).  The remainder pass over the
    step box runs in binary64 interval arithmetic regardless of mode: it
    only bounds a term that must stay below tolerance, its width is
    dominated by the box geometry, and binary64 enclosures embed exactly
    into the DD representation, so the bound stays rigorous while each
    trial costs far less.
    """
    prec = cfg.precision
    dd = prec == DD
    p = cfg.order
    if base_box is None:
        base_box = base if prec == F64 else base_point(F64)
    if seg.kind == "arc":
        xj, yj, dxj, dyj = co.arc_box_jets(seg, t_c, h, p, base_box)
    else:
        t_box = RealInterval(F64, t_c, 0.0, t_c + h, 0.0)
        xj, yj, dxj, dyj = co.segment_jets(seg, t_box, p, base_box)
    _guards(xj.coeffs[0], yj.coeffs[0])
    try:
        p_hat = K.pfaffian_jets_b(
            K.jet_rows4(xj), K.jet_rows4(yj), K.jet_rows4(dxj), K.jet_rows4(dyj)
        )
    except DivisorContainsZero as e:
        raise _GuardHit(str(e)) from None
    tube = _picard_tube_b(p_hat[0], h, cfg)
    if tube is None:
        raise StepRejected("solution tube failed to close")
    th_hat = K.btheta(p_hat, tube)
    h_row = _h_power_row(h, p + 1, F64)
    rem = K.bmat_scale_real(th_hat[p + 1], h_row[0], h_row[2])
    rem_mag = float(np.max(np.abs(rem)))
    if not rem_mag <= cfg.tol:
        err = StepRejected(f"remainder {rem_mag:.3e} above tolerance")
        err.rem_mag = rem_mag
        raise err

    if seg.kind == "arc":
        xj, yj, dxj, dyj = co.arc_point_jets(seg, t_c, p, base)
    else:
        t_pt = RealInterval(prec, t_c, 0.0, t_c, 0.0)
        xj, yj, dxj, dyj = co.segment_jets(seg, t_pt, p, base)
    try:
        p_jets = _p_jets(xj, yj, dxj, dyj, dd)
    except DivisorContainsZero as e:
        raise _GuardHit(str(e)) from None
    th = K.ktheta(p_jets, _identity_arr(), dd)
    h_pt = K.ci_row(ComplexInterval.point(h, prec))
    poly = K.kmat_horner(th, p, h_pt, dd)
    return K.kmat_add(poly, K.rows4_to8(rem), dd), rem_mag


def _point_arr(z: np.ndarray) -> np.ndarray:
    out = np.zeros((4, 4, 8), dtype=np.float64)
    out[..., 0] = out[..., 2] = z.real
    out[..., 4] = out[..., 6] = z.imag
    return out


def _rewrap(c: np.ndarray, r_old: np.ndarray, prec, dd: bool):
    """New frame pair (Q, R) with Q R containing C R_old; Q is a point matrix.

    The frame inverse starts from the conjugate transpose (Q is unitary
    up to float rounding) and takes one Newton step Qh (2 Id - Q Qh) in
    interval arithmetic, so the residual pads scale with the working
    precision rather than with the float QR defect.
    """
    mid = (c[..., 0] + c[..., 2]) * 0.5 + 1j * (c[..., 4] + c[..., 6]) * 0.5
    if not np.all(np.isfinite(mid)):
        return _identity_arr(), K.kmat_mul(c, r_old, dd)
    try:
        q_np, _ = np.linalg.qr(mid)
    except np.linalg.LinAlgError:
        return _identity_arr(), K.kmat_mul(c, r_old, dd)
    q_arr = _point_arr(q_np)
    qh_arr = _point_arr(q_np.conj().T)
    two_id = _identity_arr()
    two_id[..., (0, 2)] *= 2.0
    prod = K.kmat_mul(q_arr, qh_arr, dd)
    corr = K.kjet_sub(two_id.reshape(16, 8), prod.reshape(16, 8), dd).reshape(4, 4, 8)
    refined = K.kmat_mul(qh_arr, corr, dd)
    resid = K.kjet_sub(
        _identity_arr().reshape(16, 8),
        K.kmat_mul(refined, q_arr, dd).reshape(16, 8),
        dd,
    ).reshape(4, 4, 8)
    try:
        q_inv = verified_inverse(
            CIMatrix(K.arr_mat(q_arr, prec)),
            approx=CIMatrix(K.arr_mat(refined, prec)),
            residual=CIMatrix(K.arr_mat(resid, prec)),
        )
    except VerificationFailed:
        return _identity_arr(), K.kmat_mul(c, r_old, dd)
    q_inv_arr = K.mat_arr(q_inv.rows)
    r_new = K.kmat_mul(K.kmat_mul(q_inv_arr, c, dd), r_old, dd)
    return q_arr, r_new


def integrate_segment(
    seg, u0: np.ndarray, cfg: IntegrationConfig, base: PointXY, trace=None
) -> np.ndarray:
    """Propagate the (4,4,8) frame product across one segment."""
    dd = cfg.precision == DD
    t_c = float(seg.t_start)
    t_end = float(seg.t_end)
    if not t_end > t_c:
        raise ValueError("segment must advance the parameter")
    max_step = (t_end - t_c) * cfg.max_step_frac
    h = max_step
    q = _identity_arr()
    r = u0.copy()
    inv_order = 1.0 / (cfg.order + 1)
    base_box = base if cfg.precision == F64 else base_point(F64)
    while t_c < t_end:
        rem_t = t_end - t_c
        h_try = h if h <= rem_t else rem_t
        try:
            t_step, rem_mag = step_transition(seg, base, t_c, h_try, cfg, base_box)
        except (_GuardHit, StepRejected) as e:
            if h_try <= cfg.min_step:
                if isinstance(e, _GuardHit):
                    raise SingularityProximity(
                        f"t={t_c!r}: {e} at the minimum step"
                    ) from None
                raise MinStepUnderflow(f"t={t_c!r}: {e} at the minimum step") from None
            over = getattr(e, "rem_mag", 0.0)
            fac = 0.5
            if over > 0.0:
                fac = min(max(0.9 * (cfg.tol / over) ** inv_order, 0.125), 0.9)
            h = max(min(_grid_floor(h_try * fac), h_try - cfg.min_step), cfg.min_step)
            continue
        c = K.kmat_mul(t_step, q, dd)
        q, r = _rewrap(c, r, cfg.precision, dd)
        t_c = t_c + h_try
        if trace is not None:
            trace.append((t_c, h_try, _trace_radius(K.kmat_mul(q, r, dd))))
        fac = 2.0 if rem_mag == 0.0 else 0.9 * (cfg.tol / rem_mag) ** inv_order
        if fac >= 1.25:
            h = min(max(h, _grid_floor(h_try * min(fac, 2.0))), max_step)
    return K.kmat_mul(q, r, dd)


def integrate_contour(
    contour: co.Contour, cfg: IntegrationConfig, u0: CIMatrix | None = None, trace=None
) -> CIMatrix:
    """Transition matrix of the whole loop in path order."""
    base = base_point(cfg.precision)
    u = K.mat_arr(u0.rows) if u0 is not None else _identity_arr()
    for seg in contour.segments:
        u = integrate_segment(seg, u, cfg, base, trace=trace)
    return CIMatrix(K.arr_mat(u, cfg.precision))


# -- reference recurrences (used by the bit-equality tests) --------------------


def theta_reference(p_mat, seed, q: int, prec):
    """Pure-interval version of the coefficient recurrence.

    p_mat is a 4x4 nest of TaylorJet, seed a 4x4 nest of ComplexInterval;
    returns levels Theta_0..Theta_q+... as nested lists, matching ktheta.
    """
    levels = [seed]
    for k in range(q):
        div = ComplexInterval.point(k + 1.0, prec)
        nxt = [[None] * 4 for _ in range(4)]
        for i in range(4):
            for l in range(4):
                acc = p_mat[i][0].coeffs[0] * levels[k][0][l]
                for m in range(1, 4):
                    acc = acc + p_mat[i][m].coeffs[0] * levels[k][m][l]
                for j in range(1, k + 1):
                    for m in range(4):
                        acc = acc + p_mat[i][m].coeffs[j] * levels[k - j][m][l]
                nxt[i][l] = acc / div
        levels.append(nxt)
    return levels


def horner_reference(levels, p_used: int, dt: ComplexInterval):
    out = [[levels[p_used][i][j] for j in range(4)] for i in range(4)]
    for k in range(p_used - 1, -1, -1):
        out = [[out[i][j] * dt + levels[k][i][j] for j in range(4)] for i in range(4)]
    return out
