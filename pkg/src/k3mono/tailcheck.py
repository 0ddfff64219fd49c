"""Brute-force cross-examination of the closed-form tail bounds.

Every delta_j in the series module claims to dominate one piece of a
truncation tail.  This module recomputes those pieces the slow way:
the coefficient recurrences are replayed in 60-digit big-float
arithmetic out to total degree 200, the tail terms are summed term by
term with their derivative weights, and each sum is compared against
the lower endpoint of the corresponding delta enclosure.  A bound
passes only if even its most pessimistic reading dominates the
brute-force partial tail.
"""

from __future__ import annotations

from dataclasses import dataclass

import mpmath as mp

from .intervals import ComplexInterval
from .scalars import DD
from .series import delta_bound

_EPS_BRANCHED = (5, 10, 11, 16, 17, 18)


@dataclass(frozen=True)
class TailRecord:
    j: int
    eps: float | None
    N: int
    tail: float
    bound_inf: float

    @property
    def ok(self) -> bool:
        return self.tail <= self.bound_inf


def oracle_tables(max_n: int = 200, dps: int = 60):
    """Big-float replicas of the five coefficient tables up to l+m = max_n."""
    with mp.workdps(dps):
        one = mp.mpf(1)
        a = {(0, 0): one}
        b = {(0, 0): mp.mpf(0)}
        c = {(0, 0): mp.mpf(0)}
        e = {(0, 0): -one}
        g = {(0, 0): 2 * mp.pi}
        for n in range(1, max_n + 1):
            l, m = 0, n - 1
            j0 = 2 * l + 4 * m
            a[(0, n)] = a[(l, m)] * ((j0 + 4) * (j0 + 3) * (j0 + 2) * (j0 + 1)) / (
                (l + m + 1) * (m + 1) ** 3
            )
            b[(0, n)] = (
                b[(l, m)]
                + 4 * sum(one / (j0 + i) for i in (1, 2, 3, 4))
                - one / (l + m + 1)
                - 3 * one / (m + 1)
            )
            c[(0, n)] = (
                c[(l, m)]
                + 16 * sum(one / (j0 + i) ** 2 for i in (1, 2, 3, 4))
                - one / (l + m + 1) ** 2
                - 3 * one / (m + 1) ** 2
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
                a[(l + 1, m)] = a[(l, m)] * ((j0 + 2) * (j0 + 1)) / (
                    (l + m + 1) * (l + 1)
                )
                b[(l + 1, m)] = (
                    b[(l, m)] + 4 * (one / (j0 + 1) + one / (j0 + 2)) - one / (l + m + 1)
                )
                c[(l + 1, m)] = (
                    c[(l, m)]
                    + 16 * (one / (j0 + 1) ** 2 + one / (j0 + 2) ** 2)
                    - one / (l + m + 1) ** 2
                )
                e[(l + 1, m)] = e[(l, m)] * (-((l + m + 1) ** 3)) / (
                    (2 * l + 3) * (2 * l + 2) * (l + 2 * m + 2)
                )
                g[(l + 1, m)] = g[(l, m)] * (-((2 * l + 2 * m + 1) ** 3)) / (
                    4 * (2 * l + 2) * (2 * l + 1) * (2 * l + 4 * m + 3)
                )
    return {"a": a, "b": b, "c": c, "e": e, "g": g}


def _a_weight(j: int, tab, l: int, m: int):
    av = tab["a"][(l, m)]
    if j in (2, 7, 13):
        return av * abs(tab["b"][(l, m)])
    if j in (3, 8, 14):
        return av * tab["b"][(l, m)] ** 2
    if j in (4, 9, 15):
        return av * abs(tab["c"][(l, m)])
    return av


def oracle_tail(j: int, eps, N: int, lam, mu, tables, max_n: int = 200,
                dps: int = 60) -> mp.mpf:
    """Partial tail sum N+1 <= l+m <= max_n for bound number j.

    First- and second-derivative bounds cover every derivative pattern
    that cites them, so those oracles take the worst pattern.
    """
    with mp.workdps(dps):
        lam = mp.mpf(lam)
        mu = mp.mpf(mu)
        if j in _EPS_BRANCHED:
            half = eps == 0.5
            tab = tables["g"] if half else tables["e"]
            shift = mp.mpf("0.5") if half else mp.mpf(1)
            total = mp.mpf(0)
            for n in range(N + 1, max_n + 1):
                for l in range(n + 1):
                    m = n - l
                    alpha = l + 2 * m + shift
                    beta = l + m + shift
                    w = abs(tab[(l, m)])
                    if j == 5:
                        t = w * lam**alpha * mu**-beta
                    elif j == 10:
                        t = w * alpha * lam ** (alpha - 1) * mu**-beta
                    elif j == 11:
                        t = w * beta * lam**alpha * mu ** -(beta + 1)
                    elif j == 16:
                        t = w * alpha * (alpha - 1) * lam ** (alpha - 2) * mu**-beta
                    elif j == 17:
                        t = w * alpha * beta * lam ** (alpha - 1) * mu ** -(beta + 1)
                    else:
                        t = w * beta * (beta + 1) * lam**alpha * mu ** -(beta + 2)
                    total += t
            return total

        if j in (1, 2, 3, 4):
            patterns = (lambda l, m: lam**l * mu**m,)
        elif j in (6, 7, 8, 9):
            patterns = (
                lambda l, m: l * lam ** (l - 1) * mu**m if l else 0,
                lambda l, m: m * lam**l * mu ** (m - 1) if m else 0,
            )
        else:
            patterns = (
                lambda l, m: l * (l - 1) * lam ** (l - 2) * mu**m if l >= 2 else 0,
                lambda l, m: l * m * lam ** (l - 1) * mu ** (m - 1) if l and m else 0,
                lambda l, m: m * (m - 1) * lam**l * mu ** (m - 2) if m >= 2 else 0,
            )
        best = mp.mpf(0)
        for pat in patterns:
            total = mp.mpf(0)
            for n in range(N + 1, max_n + 1):
                for l in range(n + 1):
                    m = n - l
                    total += _a_weight(j, tables, l, m) * pat(l, m)
            if total > best:
                best = total
        return best


def run_tailcheck(n_values=(3, 4, 5, 6, 7, 8), lam: float = 2.0**-10,
                  mu: float = 2.0**-10, max_n: int = 200,
                  dps: int = 60) -> list[TailRecord]:
    """All bound/branch/N combinations against the brute-force oracle."""
    tables = oracle_tables(max_n, dps)
    lam_ci = ComplexInterval.point(lam, DD)
    mu_ci = ComplexInterval.point(mu, DD)
    records = []
    for N in n_values:
        for j in range(1, 19):
            branches = (0.5, 1.0) if j in _EPS_BRANCHED else (None,)
            for eps in branches:
                enc = delta_bound(j, eps, N, lam_ci, mu_ci)
                with mp.workdps(dps):
                    inf = mp.mpf(enc.ih) + mp.mpf(enc.il)
                    tail = oracle_tail(j, eps, N, lam, mu, tables, max_n, dps)
                    records.append(
                        TailRecord(j=j, eps=eps, N=N, tail=float(tail),
                                   bound_inf=float(inf))
                    )
    return records
