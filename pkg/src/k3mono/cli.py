"""Command-line surface for the certification pipeline.

Subcommands map one-to-one onto pipeline stages: `singular` certifies
the six singular points, `phi` dumps the fundamental-matrix enclosure
at the base point, `monodromy` runs one loop end to end, `verify-all`
reproduces the full six-loop theorem, `tailcheck` cross-examines the
closed-form tail bounds against a big-float oracle, and `contour`
prints the frozen path geometry.  All configuration arrives through
flags; nothing is read from the environment.

Interval output comes in two forms.  JSON uses hex-float endpoints
(pairs of hex floats in double-double mode) and round-trips bit
exactly.  Text renders each interval as a shared decimal prefix with
the lower bound's continuation digits as a `_...` suffix and the upper
bound's as a `^...` suffix, e.g. `-0.0158713013_9^8` for the interval
[-0.01587130139, -0.01587130138].
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from dataclasses import dataclass
from decimal import ROUND_CEILING, ROUND_FLOOR, Decimal, localcontext

from .errors import (
    Ambiguous,
    CertificationError,
    ConditionViolated,
    ConvergenceViolation,
    DivisorContainsZero,
    DomainError,
    EmptyIntersection,
    MinStepUnderflow,
    NoInteger,
    NotContracting,
    SegmentHitsSingularity,
    SingularityProximity,
    StepRejected,
    VerificationFailed,
)
from .scalars import DD, F64

_PRECISIONS = {"dd": DD, "f64": F64}

_STAGE_OF = (
    (Ambiguous, "rounding"),
    (NoInteger, "rounding"),
    (SingularityProximity, "transport"),
    (MinStepUnderflow, "transport"),
    (StepRejected, "transport"),
    (DivisorContainsZero, "transport"),
    (SegmentHitsSingularity, "contour"),
    (ConvergenceViolation, "series"),
    (ConditionViolated, "series"),
    (DomainError, "series"),
    (NotContracting, "singular"),
    (EmptyIntersection, "linear-algebra"),
    (VerificationFailed, "certificate"),
)


def _stage(exc: CertificationError) -> str:
    for etype, name in _STAGE_OF:
        if isinstance(exc, etype):
            return name
    return "pipeline"


@dataclass(frozen=True)
class RunConfig:
    subcommand: str
    path: int | None = None
    precision: str = DD
    n_terms: int = 41
    order: int = 15
    tolerance: float | None = None
    output: str | None = None
    format: str = "text"

    def __post_init__(self):
        if self.precision not in (DD, F64):
            raise ValueError(f"unknown precision: {self.precision}")
        if self.format not in ("json", "text"):
            raise ValueError(f"unknown format: {self.format}")
        if self.path is not None and self.path not in range(1, 7):
            raise ValueError("path index must be in 1..6")
        if self.n_terms < 0 or self.order < 1:
            raise ValueError("N must be >= 0 and order >= 1")


# -- interval rendering ---------------------------------------------------------


def _endpoint_decimal(fp) -> Decimal:
    with localcontext() as ctx:
        ctx.prec = 60
        return Decimal(fp.hi) + Decimal(fp.lo)


def _fixed(d: Decimal) -> str:
    return format(d, "f")


def format_real(ri, digits: int | None = None) -> str:
    """Shared-prefix rendering with _lower and ^upper continuation digits.

    digits counts significant digits of the printed prefix+suffix; by
    default it is chosen so the suffixes start at the first digit where
    the outward-rounded endpoints disagree.
    """
    a = _endpoint_decimal(ri.inf)
    b = _endpoint_decimal(ri.sup)
    if a == 0 and b == 0:
        return "0"
    if a < 0 < b:
        # no shared digits to factor out; show outward 2-digit endpoints
        with localcontext() as ctx:
            ctx.prec = 2
            ctx.rounding = ROUND_FLOOR
            lo = +a
            ctx.rounding = ROUND_CEILING
            hi = +b
        return f"[{lo:e}, {hi:e}]"
    with localcontext() as ctx:
        ctx.prec = 80
        lead = max(abs(a), abs(b)).adjusted()
        if digits is None:
            w = b - a
            digits = 34 if w == 0 else max(lead - w.adjusted() + 1, 1)
        digits = min(max(digits, 1), 40)
        q = Decimal(1).scaleb(lead - digits + 1)
        lo = a.quantize(q, rounding=ROUND_FLOOR)
        hi = b.quantize(q, rounding=ROUND_CEILING)
    ls, hs = _fixed(lo), _fixed(hi)
    if ls == hs:
        return ls
    i = 0
    while i < min(len(ls), len(hs)) and ls[i] == hs[i]:
        i += 1
    return f"{ls[:i]}_{ls[i:]}^{hs[i:]}"


def format_complex(ci, digits: int | None = None) -> str:
    im = ci.im
    if im.ih == 0.0 and im.il == 0.0 and im.sh == 0.0 and im.sl == 0.0:
        return format_real(ci.re, digits)
    re_s = format_real(ci.re, digits)
    im_s = format_real(im, digits)
    if im_s.startswith("-"):
        return f"{re_s} - {im_s[1:]} i"
    return f"{re_s} + {im_s} i"


def _matrix_text(m, digits: int | None = None) -> str:
    lines = []
    for row in m.rows:
        lines.append("  [" + ",  ".join(format_complex(z, digits) for z in row) + "]")
    return "\n".join(lines)


# -- subcommand bodies ----------------------------------------------------------


def _emit(text: str, rc: RunConfig):
    if rc.output:
        with open(rc.output, "w") as fh:
            fh.write(text if text.endswith("\n") else text + "\n")
    else:
        print(text)


def _run_singular(rc: RunConfig) -> int:
    from .singular import verify_singular_points

    roots = verify_singular_points(prec=rc.precision)
    if rc.format == "json":
        obj = {
            "precision": rc.precision,
            "points": [
                {"label": r.label, "x": r.x.to_json(), "y": r.y.to_json()}
                for r in roots
            ],
        }
        _emit(json.dumps(obj, indent=2), rc)
    else:
        lines = [
            f"{r.label} in ({format_complex(r.x, 10)}, {format_complex(r.y, 10)})"
            for r in roots
        ]
        _emit("\n".join(lines), rc)
    return 0


def _run_phi(rc: RunConfig) -> int:
    from .monodromy import fundamental_at_base

    fm = fundamental_at_base(rc.n_terms, rc.precision)
    if rc.format == "json":
        obj = {"precision": rc.precision, "N": fm.N, "matrix": fm.matrix.to_json()}
        _emit(json.dumps(obj, indent=2), rc)
    else:
        head = f"fundamental matrix at the base point, N={fm.N}, precision={rc.precision}"
        _emit(head + "\n" + _matrix_text(fm.matrix), rc)
    return 0


def _cert_text(cert) -> str:
    lines = [f"path {cert.path}: {'certified' if cert.certified else 'FAILED'}"]
    for row in cert.matrix.rows:
        lines.append("  [" + "  ".join(f"{v:3d}" for v in row) + "]")
    lines.append(
        f"  transport radius {cert.transport_radius:.3e}, conjugated real radius "
        f"{cert.real_radius:.3e}, imag radius {cert.imag_radius:.3e}"
    )
    lines.append(
        "  checks: "
        + ", ".join(f"{k}={'pass' if v else 'fail'}" for k, v in cert.checks.items())
    )
    lines.append(f"  elapsed {cert.elapsed:.1f}s")
    return "\n".join(lines)


def _run_monodromy(rc: RunConfig, trace_path: str | None) -> int:
    from .integrator import IntegrationConfig
    from .monodromy import monodromy_matrix

    cfg = IntegrationConfig(
        precision=rc.precision, order=rc.order, tolerance=rc.tolerance
    )
    trace: list | None = [] if trace_path else None
    try:
        cert = monodromy_matrix(rc.path, cfg, n_terms=rc.n_terms, trace=trace)
    finally:
        if trace_path and trace:
            with open(trace_path, "w", newline="") as fh:
                w = csv.writer(fh)
                w.writerow(["t", "h", "max_radius"])
                w.writerows(trace)
    if rc.format == "json":
        _emit(json.dumps(cert.to_json(), indent=2), rc)
    else:
        _emit(_cert_text(cert), rc)
    return 0 if cert.certified else 1


def _run_verify_all(rc: RunConfig, processes: int | None) -> int:
    from .monodromy import run_all

    certs = run_all(
        precision=rc.precision,
        n_terms=rc.n_terms,
        tolerance=rc.tolerance,
        processes=processes,
    )
    if rc.format == "json":
        obj = {
            "precision": rc.precision,
            "N": rc.n_terms,
            "certificates": [c.to_json() for c in certs],
            "all_certified": all(c.certified for c in certs),
        }
        _emit(json.dumps(obj, indent=2), rc)
    else:
        blocks = [_cert_text(c) for c in certs]
        blocks.append("all six loops certified")
        _emit("\n".join(blocks), rc)
    return 0


def _run_tailcheck(rc: RunConfig, max_n: int) -> int:
    from .tailcheck import run_tailcheck

    records = run_tailcheck(max_n=max_n)
    every = all(r.ok for r in records)
    if rc.format == "json":
        obj = {
            "checks": [
                {
                    "j": r.j,
                    "eps": r.eps,
                    "N": r.N,
                    "tail": r.tail,
                    "bound_inf": r.bound_inf,
                    "ok": r.ok,
                }
                for r in records
            ],
            "all_ok": every,
        }
        _emit(json.dumps(obj, indent=2), rc)
    else:
        lines = []
        for r in records:
            eps = "" if r.eps is None else f" eps={r.eps}"
            lines.append(
                f"delta_{r.j}{eps} N={r.N}: tail {r.tail:.6e} <= "
                f"bound {r.bound_inf:.6e}  {'PASS' if r.ok else 'FAIL'}"
            )
        lines.append("all bounds dominate" if every else "BOUND VIOLATION")
        _emit("\n".join(lines), rc)
    return 0 if every else 1


def _run_contour(rc: RunConfig) -> int:
    from .contours import build_contour
    from .singular import base_point, verify_singular_points

    base = base_point(rc.precision)
    roots = verify_singular_points(base, rc.precision)
    cont = build_contour(rc.path, roots, base)
    if rc.format == "json":
        _emit(json.dumps(cont.to_json(), indent=2), rc)
    else:
        lines = [f"contour {cont.index}: {len(cont.segments)} segments"]
        for k, seg in enumerate(cont.segments):
            if seg.kind == "arc":
                lines.append(
                    f"  {k}: arc    t in [{seg.t_start!r}, {seg.t_end!r}] "
                    f"radius={seg.radius!r} sign={seg.sign:+d} offset={seg.start_offset!r}"
                )
            else:
                lines.append(
                    f"  {k}: line   t in [{seg.t_start!r}, {seg.t_end!r}] "
                    f"from offset {seg.start_offset!r} to {seg.end_offset!r}"
                )
        _emit("\n".join(lines), rc)
    return 0


# -- argument plumbing ----------------------------------------------------------


def _path_index(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"path index must be an integer: {text!r}")
    if v not in range(1, 7):
        raise argparse.ArgumentTypeError(f"path index must be in 1..6, got {v}")
    return v


def _add_common(sp, precision_default: str = "dd"):
    sp.add_argument("--precision", choices=("f64", "dd"), default=precision_default)
    sp.add_argument("--format", choices=("json", "text"), default="text")
    sp.add_argument("--output", default=None, help="write the report to this file")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="k3mono",
        description="certified monodromy pipeline for a K3 Picard-Fuchs system",
    )
    sub = ap.add_subparsers(dest="subcommand", required=True)

    sp = sub.add_parser("singular", help="certify the six singular points")
    _add_common(sp)

    sp = sub.add_parser("phi", help="fundamental-matrix enclosure at the base point")
    sp.add_argument("--N", type=int, default=41, dest="n_terms")
    _add_common(sp)

    sp = sub.add_parser("monodromy", help="one certified loop")
    sp.add_argument("--path", type=_path_index, required=True)
    sp.add_argument("--N", type=int, default=41, dest="n_terms")
    sp.add_argument("--order", type=int, default=15)
    sp.add_argument("--tolerance", type=float, default=None)
    sp.add_argument("--trace", default=None, help="write per-step CSV here")
    _add_common(sp)

    sp = sub.add_parser("verify-all", help="all six loops with cross checks")
    sp.add_argument("--N", type=int, default=41, dest="n_terms")
    sp.add_argument("--order", type=int, default=15)
    sp.add_argument("--tolerance", type=float, default=None)
    sp.add_argument("--processes", type=int, default=None)
    _add_common(sp)

    sp = sub.add_parser("tailcheck", help="tail bounds vs big-float oracle")
    sp.add_argument("--max-n", type=int, default=200, dest="max_n")
    _add_common(sp)

    sp = sub.add_parser("contour", help="dump frozen path geometry")
    sp.add_argument("--path", type=_path_index, required=True)
    sp.add_argument("--dump", action="store_true", help="emit the segment list (default action)")
    _add_common(sp)
    return ap


def dispatch(argv) -> int:
    ap = build_parser()
    try:
        ns = ap.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    try:
        rc = RunConfig(
            subcommand=ns.subcommand,
            path=getattr(ns, "path", None),
            precision=_PRECISIONS[ns.precision],
            n_terms=getattr(ns, "n_terms", 41),
            order=getattr(ns, "order", 15),
            tolerance=getattr(ns, "tolerance", None),
            output=ns.output,
            format=ns.format,
        )
    except ValueError as e:
        print(f"k3mono: {e}", file=sys.stderr)
        return 2
    try:
        if rc.subcommand == "singular":
            return _run_singular(rc)
        if rc.subcommand == "phi":
            return _run_phi(rc)
        if rc.subcommand == "monodromy":
            return _run_monodromy(rc, ns.trace)
        if rc.subcommand == "verify-all":
            return _run_verify_all(rc, ns.processes)
        if rc.subcommand == "tailcheck":
            return _run_tailcheck(rc, ns.max_n)
        return _run_contour(rc)
    except CertificationError as e:
        print(f"k3mono: [{_stage(e)}] {type(e).__name__}: {e}", file=sys.stderr)
        return 1


def main() -> None:
    sys.exit(dispatch(sys.argv[1:]))


if __name__ == "__main__":
    main()
