"""Verified linear algebra on small interval matrices.

Approximate quantities (midpoint inverses, Newton steps) come from
numpy; every certified statement is re-established by interval residual
arithmetic on top of them, so the floating approximations never carry
proof obligations.
"""

from __future__ import annotations

import math
from fractions import Fraction

import numpy as np

from . import scalars as sc
from .errors import Ambiguous, NoInteger, NotContracting, VerificationFailed
from .intervals import ComplexInterval, RealInterval
from .scalars import DD

_INF = math.inf


def _abs_up(h: float, l: float) -> float:
    """Float upper bound on |h + l| for a normalized DD pair."""
    if h > 0.0:
        return sc.f64_add_dir(h, l, True)
    if h < 0.0:
        return sc.f64_add_dir(-h, -l, True)
    return abs(l)


def ri_abs_up(a: RealInterval) -> float:
    """Rigorous float upper bound on max{|x| : x in a}."""
    return max(_abs_up(a.ih, a.il), _abs_up(a.sh, a.sl))


def ci_mag_up(z: ComplexInterval) -> float:
    """Rigorous float upper bound on max{|w| : w in z}."""
    r = ri_abs_up(z.re)
    s = ri_abs_up(z.im)
    q = sc.f64_add_dir(sc.f64_mul_dir(r, r, True), sc.f64_mul_dir(s, s, True), True)
    if math.isinf(q):
        return _INF
    return sc.f64_sqrt_dir(q, True)


class CIMatrix:
    """Dense matrix of ComplexInterval entries, one precision throughout."""

    __slots__ = ("rows",)

    def __init__(self, rows):
        rows = tuple(tuple(r) for r in rows)
        if not rows or not rows[0]:
            raise ValueError("empty matrix")
        m = len(rows[0])
        prec = rows[0][0].prec
        for r in rows:
            if len(r) != m:
                raise ValueError("ragged rows")
            for z in r:
                if z.prec != prec:
                    raise ValueError("entry precision mismatch")
        self.rows = rows

    @property
    def shape(self):
        return (len(self.rows), len(self.rows[0]))

    @property
    def prec(self):
        return self.rows[0][0].prec

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def __iter__(self):
        return iter(self.rows)

    @classmethod
    def identity(cls, n: int, prec=DD) -> "CIMatrix":
        one = ComplexInterval.point(1.0, prec)
        zero = ComplexInterval.point(0.0, prec)
        return cls(tuple(tuple(one if i == j else zero for j in range(n)) for i in range(n)))

    @classmethod
    def from_scalar_rows(cls, rows, prec=DD) -> "CIMatrix":
        """Build from numbers / RealInterval / ComplexInterval entries."""
        out = []
        for r in rows:
            row = []
            for z in r:
                if isinstance(z, ComplexInterval):
                    row.append(z)
                elif isinstance(z, RealInterval):
                    row.append(ComplexInterval.from_real(z))
                else:
                    row.append(ComplexInterval.point(z, prec))
            out.append(tuple(row))
        return cls(tuple(out))

    def mid_numpy(self) -> np.ndarray:
        n, m = self.shape
        out = np.empty((n, m), dtype=np.complex128)
        for i in range(n):
            for j in range(m):
                out[i, j] = self.rows[i][j].mid()
        return out

    def rad_up_max(self) -> float:
        return max(z.rad_up() for r in self.rows for z in r)

    def map(self, fn) -> "CIMatrix":
        return CIMatrix(tuple(tuple(fn(z) for z in r) for r in self.rows))

    def __neg__(self):
        return self.map(lambda z: -z)

    def __add__(self, other):
        return CIMatrix(
            tuple(
                tuple(a + b for a, b in zip(ra, rb))
                for ra, rb in zip(self.rows, other.rows)
            )
        )

    def __sub__(self, other):
        return CIMatrix(
            tuple(
                tuple(a - b for a, b in zip(ra, rb))
                for ra, rb in zip(self.rows, other.rows)
            )
        )

    def scale(self, z) -> "CIMatrix":
        return self.map(lambda w: w * z)

    def __matmul__(self, other):
        return ci_matmul(self, other)

    def transpose(self) -> "CIMatrix":
        n, m = self.shape
        return CIMatrix(tuple(tuple(self.rows[i][j] for i in range(n)) for j in range(m)))

    def hull(self, other: "CIMatrix") -> "CIMatrix":
        return CIMatrix(
            tuple(
                tuple(a.hull(b) for a, b in zip(ra, rb))
                for ra, rb in zip(self.rows, other.rows)
            )
        )

    def subset_of(self, other: "CIMatrix") -> bool:
        return all(
            a.subset_of(b)
            for ra, rb in zip(self.rows, other.rows)
            for a, b in zip(ra, rb)
        )

    def norm_inf_up(self) -> float:
        """Upper bound on the max row sum of entry magnitudes."""
        best = 0.0
        for r in self.rows:
            s = 0.0
            for z in r:
                s = sc.f64_add_dir(s, ci_mag_up(z), True)
            best = max(best, s)
        return best

    def to_json(self):
        return [[z.to_json() for z in r] for r in self.rows]

    @classmethod
    def from_json(cls, obj):
        return cls(tuple(tuple(ComplexInterval.from_json(z) for z in r) for r in obj))


def ci_matmul(a: CIMatrix, b: CIMatrix) -> CIMatrix:
    n, k = a.shape
    k2, m = b.shape
    if k != k2:
        raise ValueError("shape mismatch")
    brows = b.rows
    out = []
    for i in range(n):
        arow = a.rows[i]
        row = []
        for j in range(m):
            acc = arow[0] * brows[0][j]
            for t in range(1, k):
                acc = acc + arow[t] * brows[t][j]
            row.append(acc)
        out.append(tuple(row))
    return CIMatrix(tuple(out))


def from_numpy_points(z: np.ndarray, prec=DD) -> CIMatrix:
    """Embed an exact float (complex) matrix as point intervals."""
    n, m = z.shape
    return CIMatrix(
        tuple(
            tuple(ComplexInterval.point(complex(z[i, j]), prec) for j in range(m))
            for i in range(n)
        )
    )


def verified_inverse(
    a: CIMatrix, approx: CIMatrix | None = None, residual: CIMatrix | None = None
) -> CIMatrix:
    """Enclosure of the inverse of every matrix in `a`.

    R is an approximation of mid(a)^-1 (float inverse by default; pass
    `approx` for a sharper one, e.g. Newton-refined in interval
    arithmetic); the residual E = Id - R a is enclosed in interval
    arithmetic and must contract, then row-wise bounds on
    E (Id - E)^-1 R pad R outward.  A caller who already holds an
    enclosure of that residual can pass it to skip the product.
    """
    n, m = a.shape
    if n != m:
        raise ValueError("inverse needs a square matrix")
    if approx is not None:
        rmat = approx
    else:
        mid = a.mid_numpy()
        try:
            r = np.linalg.inv(mid)
        except np.linalg.LinAlgError as e:
            raise VerificationFailed(f"midpoint inverse failed: {e}") from None
        if not np.all(np.isfinite(r)):
            raise VerificationFailed("midpoint inverse not finite")
        rmat = from_numpy_points(r, a.prec)
    e = residual
    if e is None:
        e = CIMatrix.identity(n, a.prec) - ci_matmul(rmat, a)
    rowsums = []
    for row in e.rows:
        s = 0.0
        for z in row:
            s = sc.f64_add_dir(s, ci_mag_up(z), True)
        rowsums.append(s)
    beta = max(rowsums)
    if not beta < 1.0:
        raise VerificationFailed(f"residual norm {beta} not below 1")
    rnorm = rmat.norm_inf_up()
    denom = sc.f64_add_dir(1.0, -beta, False)  # down: smaller denominator, larger pad
    out = []
    for i in range(n):
        rho_i = sc.f64_div_dir(sc.f64_mul_dir(rowsums[i], rnorm, True), denom, True)
        pad = RealInterval.from_floats(-rho_i, rho_i, a.prec)
        padded = ComplexInterval(pad, pad)
        out.append(tuple(rmat.rows[i][j] + padded for j in range(n)))
    return CIMatrix(tuple(out))


# -- Krawczyk on real systems -------------------------------------------------


def _box_points(xs) -> list:
    return [RealInterval.point(x.mid(), x.prec) for x in xs]


def krawczyk_verify(f, x_box, x_tilde=None, max_sweeps=20, inflation=0.01,
                    refine_sweeps=6):
    """Certify a unique zero of a real system inside a box.

    `f(xs)` takes a list of RealInterval and returns (values, jacobian)
    evaluated in interval arithmetic.  The Krawczyk image
    K = xt - R f(xt) + (Id - R J(box))(box - xt) must land in the
    interior of the box; sweeps re-center and epsilon-inflate while that
    fails.  After the first interior containment the enclosure is
    contracted further (any zero of the certified box stays inside
    K intersect box, so each extra sweep remains an enclosure).
    Returns the certified enclosure (existence and uniqueness).
    """
    box = list(x_box)
    n = len(box)
    prec = box[0].prec
    certified = None
    for _ in range(max_sweeps + refine_sweeps):
        xt = _box_points(box) if x_tilde is None else [
            RealInterval.point(float(v), prec) for v in x_tilde
        ]
        x_tilde = None  # only honor the seed on the first sweep
        fx, _ = f(xt)
        _, jac = f(box)
        jmid = np.empty((n, n), dtype=np.float64)
        for i in range(n):
            for j in range(n):
                jmid[i, j] = jac[i][j].mid()
        try:
            r = np.linalg.inv(jmid)
        except np.linalg.LinAlgError:
            raise NotContracting("midpoint Jacobian is singular") from None
        k_img = []
        for i in range(n):
            acc = xt[i]
            for j in range(n):
                acc = acc - RealInterval.point(r[i, j], prec) * fx[j]
            for j in range(n):
                # entry (i, j) of Id - R J(box)
                ent = -RealInterval.point(r[i, 0], prec) * jac[0][j]
                for t in range(1, n):
                    ent = ent - RealInterval.point(r[i, t], prec) * jac[t][j]
                if i == j:
                    ent = ent + 1
                acc = acc + ent * (box[j] - xt[j])
            k_img.append(acc)
        if certified is not None:
            # refinement: intersect only, stop once the radius stalls
            nxt = [k.intersect(b) for k, b in zip(k_img, box)]
            before = max(b.rad_up() for b in box)
            after = max(b.rad_up() for b in nxt)
            box = certified = nxt
            if after > 0.5 * before:
                break
            continue
        if all(k.interior_subset_of(b) for k, b in zip(k_img, box)):
            box = certified = [k.intersect(b) for k, b in zip(k_img, box)]
            continue
        nxt = []
        for k, b in zip(k_img, box):
            if not k.overlaps(b):
                raise NotContracting("Krawczyk image escaped the box: no zero inside")
            t = k.intersect(b)
            pad = inflation * t.rad_up() + 1e-300
            nxt.append(t.inflate(pad))
        box = nxt
    if certified is not None:
        return certified
    raise NotContracting(f"no contraction after {max_sweeps} sweeps")


# -- integer rounding ---------------------------------------------------------


def _floor_value(h: float, l: float) -> int:
    f = math.floor(h)
    if h == f:  # integer leading part: the tail decides
        if l < 0.0:
            return int(f) - 1
        return int(f)
    return int(f)


def _ceil_value(h: float, l: float) -> int:
    c = math.ceil(h)
    if h == c:
        if l > 0.0:
            return int(c) + 1
        return int(c)
    return int(c)


class IntMatrix:
    """Exact integer matrix with exact determinant and products."""

    __slots__ = ("rows",)

    def __init__(self, rows):
        self.rows = tuple(tuple(int(x) for x in r) for r in rows)

    @property
    def shape(self):
        return (len(self.rows), len(self.rows[0]))

    def __getitem__(self, ij):
        return self.rows[ij[0]][ij[1]]

    def __eq__(self, other):
        return isinstance(other, IntMatrix) and self.rows == other.rows

    def __hash__(self):
        return hash(self.rows)

    def __repr__(self):
        return f"IntMatrix({[list(r) for r in self.rows]})"

    def __matmul__(self, other: "IntMatrix") -> "IntMatrix":
        n, k = self.shape
        m = other.shape[1]
        return IntMatrix(
            tuple(
                tuple(sum(self.rows[i][t] * other.rows[t][j] for t in range(k)) for j in range(m))
                for i in range(n)
            )
        )

    def transpose(self) -> "IntMatrix":
        n, m = self.shape
        return IntMatrix(tuple(tuple(self.rows[i][j] for i in range(n)) for j in range(m)))

    def det(self) -> int:
        n, m = self.shape
        if n != m:
            raise ValueError("determinant needs a square matrix")
        if n == 1:
            return self.rows[0][0]
        total = 0
        top = self.rows[0]
        for j in range(n):
            if top[j] == 0:
                continue
            minor = IntMatrix(
                tuple(tuple(r[t] for t in range(n) if t != j) for r in self.rows[1:])
            )
            total += (-1) ** j * top[j] * minor.det()
        return total

    def to_fractions(self):
        return [[Fraction(x) for x in r] for r in self.rows]

    def to_json(self):
        return [list(r) for r in self.rows]


def unique_integer_round(m: CIMatrix) -> IntMatrix:
    """Round an interval matrix to the unique integer matrix it encloses.

    Every real part must contain exactly one integer with radius below
    1/2, and every imaginary part must contain zero.
    """
    out = []
    for i, row in enumerate(m.rows):
        orow = []
        for j, z in enumerate(row):
            if not z.im.contains_zero():
                raise NoInteger(f"entry ({i},{j}): imaginary part excludes 0")
            if not z.re.rad_up() < 0.5:
                raise Ambiguous(f"entry ({i},{j}): real radius {z.re.rad_up():.3g} >= 1/2")
            lo = _ceil_value(z.re.ih, z.re.il)
            hi = _floor_value(z.re.sh, z.re.sl)
            if lo > hi:
                raise NoInteger(f"entry ({i},{j}): no integer in real part")
            if lo < hi:
                raise Ambiguous(f"entry ({i},{j}): {hi - lo + 1} integers in real part")
            orow.append(lo)
        out.append(tuple(orow))
    return IntMatrix(tuple(out))
