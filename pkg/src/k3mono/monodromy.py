"""Certified integer monodromy matrices of the period system.

For loop i the transported frame U is conjugated into the period basis,
M = Phi^-1 U Phi, where Phi is the certified fundamental matrix at the
base point.  The enclosure of M is rounded to the unique integer matrix
it contains, and the result is certified by exact integer arithmetic:
det M = +-1 and M^T N^-1 M = N^-1 for the intersection Gram matrix N.
Both checks run in Fraction arithmetic, so a certificate that passes is
a proof, not a float comparison.
"""

from __future__ import annotations

import os
import time
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from multiprocessing import get_context

from .contours import build_contour
from .errors import Ambiguous, VerificationFailed
from .integrator import IntegrationConfig, integrate_contour
from .linalg import CIMatrix, IntMatrix, ci_matmul, unique_integer_round, verified_inverse
from .picard_fuchs import to_lm
from .scalars import DD
from .series import FundamentalMatrixEnclosure, fundamental_matrix
from .singular import base_point, verify_singular_points

INTERSECTION_FORM = IntMatrix(((0, 1, 0, 0), (1, 0, 0, 0), (0, 0, -2, 0), (0, 0, 0, 4)))

_IDENTITY = IntMatrix(((1, 0, 0, 0), (0, 1, 0, 0), (0, 0, 1, 0), (0, 0, 0, 1)))

DEFAULT_TERMS = 41


def intersection_form_inverse():
    """N^-1 as exact Fractions."""
    n = INTERSECTION_FORM.rows
    det = INTERSECTION_FORM.det()
    if det == 0:
        raise ValueError("degenerate form")
    # block diagonal: antidiagonal 2x2 swap block and two scalars
    return [
        [Fraction(0), Fraction(1), Fraction(0), Fraction(0)],
        [Fraction(1), Fraction(0), Fraction(0), Fraction(0)],
        [Fraction(0), Fraction(0), Fraction(1, n[2][2]), Fraction(0)],
        [Fraction(0), Fraction(0), Fraction(0), Fraction(1, n[3][3])],
    ]


def _frac_mul(a, b):
    return [[sum(a[i][t] * b[t][j] for t in range(4)) for j in range(4)] for i in range(4)]


def certificate_checks(m: IntMatrix) -> dict:
    """Exact unimodularity and isometry of the rounded matrix."""
    ninv = intersection_form_inverse()
    mt = [[Fraction(m.rows[j][i]) for j in range(4)] for i in range(4)]
    mf = [[Fraction(x) for x in r] for r in m.rows]
    return {
        "unimodular": m.det() in (1, -1),
        "isometry": _frac_mul(_frac_mul(mt, ninv), mf) == ninv,
        "rounding": True,
    }


@dataclass(frozen=True)
class MonodromyCertificate:
    path: int
    precision: str
    n_terms: int
    tolerance: float
    matrix: IntMatrix
    transport_radius: float
    real_radius: float
    imag_radius: float
    checks: dict
    elapsed: float

    @property
    def certified(self) -> bool:
        return all(self.checks.values())

    def to_json(self):
        return {
            "path": self.path,
            "precision": self.precision,
            "n_terms": self.n_terms,
            "tolerance": self.tolerance.hex(),
            "matrix": self.matrix.to_json(),
            "transport_radius": self.transport_radius.hex(),
            "real_radius": self.real_radius.hex(),
            "imag_radius": self.imag_radius.hex(),
            "checks": dict(self.checks),
            "elapsed": self.elapsed,
        }

    @classmethod
    def from_json(cls, d):
        return cls(
            path=int(d["path"]),
            precision=d["precision"],
            n_terms=int(d["n_terms"]),
            tolerance=float.fromhex(d["tolerance"]),
            matrix=IntMatrix(d["matrix"]),
            transport_radius=float.fromhex(d["transport_radius"]),
            real_radius=float.fromhex(d["real_radius"]),
            imag_radius=float.fromhex(d["imag_radius"]),
            checks=dict(d["checks"]),
            elapsed=float(d["elapsed"]),
        )


@lru_cache(maxsize=8)
def fundamental_at_base(n_terms: int = DEFAULT_TERMS, prec: str = DD) -> FundamentalMatrixEnclosure:
    pt = to_lm(base_point(prec))
    return fundamental_matrix(n_terms, pt.lam, pt.mu)


def _max_radius(m: CIMatrix):
    rr = max(z.re.rad_up() for row in m.rows for z in row)
    ri = max(z.im.rad_up() for row in m.rows for z in row)
    return rr, ri


def monodromy_matrix(
    i: int,
    cfg: IntegrationConfig | None = None,
    n_terms: int = DEFAULT_TERMS,
    trace=None,
) -> MonodromyCertificate:
    """Certificate for loop i, or Ambiguous/NoInteger if rounding fails."""
    if cfg is None:
        cfg = IntegrationConfig()
    t0 = time.perf_counter()
    prec = cfg.precision
    base = base_point(prec)
    roots = verify_singular_points(base, prec)
    contour = build_contour(i, roots, base)
    u = integrate_contour(contour, cfg, trace=trace)
    t_rr, t_ri = _max_radius(u)
    phi = fundamental_at_base(n_terms, prec)
    phi_inv = verified_inverse(phi.matrix)
    conj = ci_matmul(ci_matmul(phi_inv, u), phi.matrix)
    rr, ri = _max_radius(conj)
    m = unique_integer_round(conj)
    return MonodromyCertificate(
        path=i,
        precision=prec,
        n_terms=n_terms,
        tolerance=cfg.tol,
        matrix=m,
        transport_radius=max(t_rr, t_ri),
        real_radius=rr,
        imag_radius=ri,
        checks=certificate_checks(m),
        elapsed=time.perf_counter() - t0,
    )


def certified_path(
    i: int, precision: str = DD, n_terms: int = DEFAULT_TERMS, tolerance: float | None = None
) -> MonodromyCertificate:
    """One loop with a single sharper retry if rounding is ambiguous."""
    cfg = IntegrationConfig(precision=precision, tolerance=tolerance)
    try:
        return monodromy_matrix(i, cfg, n_terms=n_terms)
    except Ambiguous:
        retry = IntegrationConfig(precision=precision, tolerance=cfg.tol / 10.0)
        return monodromy_matrix(i, retry, n_terms=n_terms + 8)


def _path_job(args):
    i, precision, n_terms, tolerance = args
    return certified_path(i, precision, n_terms, tolerance).to_json()


def run_all(
    precision: str = DD,
    n_terms: int = DEFAULT_TERMS,
    tolerance: float | None = None,
    processes: int | None = None,
) -> tuple[MonodromyCertificate, ...]:
    """All six loops, with the cross-loop consistency checks.

    Raises VerificationFailed if any exact check fails, if the two loops
    around the conjugate pair disagree, or if the reflection loop fails
    to square to the identity.
    """
    if processes is None:
        processes = min(6, os.cpu_count() or 1)
    jobs = [(i, precision, n_terms, tolerance) for i in range(1, 7)]
    if processes <= 1:
        certs = [certified_path(*j) for j in jobs]
    else:
        with get_context("fork").Pool(processes) as pool:
            certs = [MonodromyCertificate.from_json(d) for d in pool.map(_path_job, jobs)]
    by_path = {c.path: c for c in certs}
    for c in certs:
        if not c.certified:
            failed = [k for k, v in c.checks.items() if not v]
            raise VerificationFailed(f"path {c.path}: checks failed: {failed}")
    if by_path[5].matrix != by_path[6].matrix:
        raise VerificationFailed("conjugate-pair loops disagree")
    if by_path[3].matrix @ by_path[3].matrix != _IDENTITY:
        raise VerificationFailed("reflection loop does not square to the identity")
    return tuple(certs)
