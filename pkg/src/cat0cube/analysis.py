"""Executable checks of the spectral bound behind the halving schedule.

``A_n`` is the ``n x n`` matrix with entries ``(1/2)**(n+2-i-j)`` for
``i + j <= n + 1`` (1-based) and 0 elsewhere.  Its spectral radius is at
most ``1 - 1/n**2``, certified by the positive vector
``u_k = k(n-k) + n**2``.
"""
from __future__ import annotations

import math
from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .errors import LemmaViolated

N_MAX = 512
RHO_SLACK = 1e-10
POWER_SLACK = 1e-9


class HalvingMatrix:
    """Exact representation of ``A_n``.

    Row ``k`` equals ``2**(k-1) / 2**n`` times the row vector
    ``(2**0, 2**1, ..., 2**(n-k), 0, ..., 0)``, which makes exact
    matrix-vector products O(n).
    """

    def __init__(self, n: int):
        if n < 1:
            raise ValueError("order must be positive")
        self.n = n

    def entry(self, i: int, j: int) -> Fraction:
        n = self.n
        if i + j > n + 1:
            return Fraction(0)
        return Fraction(1, 2 ** (n + 2 - i - j))

    def to_fractions(self) -> list[list[Fraction]]:
        n = self.n
        return [[self.entry(i, j) for j in range(1, n + 1)] for i in range(1, n + 1)]

    def to_array(self) -> np.ndarray:
        n = self.n
        i = np.arange(1, n + 1)
        I, J = np.meshgrid(i, i, indexing="ij")
        return np.where(I + J <= n + 1, np.ldexp(1.0, -(n + 2 - I - J)), 0.0)

    def matvec(self, v) -> list[Fraction]:
        """Exact ``A v`` for a vector of ints or Fractions."""
        n = self.n
        prefix = [Fraction(0)]
        acc = Fraction(0)
        for j in range(1, n + 1):
            acc += Fraction(v[j - 1]) * 2 ** (j - 1)
            prefix.append(acc)
        return [prefix[n + 1 - k] * Fraction(2 ** (k - 1), 2 ** n) for k in range(1, n + 1)]


def build(n: int) -> HalvingMatrix:
    return HalvingMatrix(n)


def certificate_vector(n: int) -> list[int]:
    return [k * (n - k) + n * n for k in range(1, n + 1)]


def _solve_sparse(rows: list[dict], rhs: list, order: list[int]) -> list:
    """Exact Gaussian elimination on dict-of-rows, pivoting columns in ``order``."""
    col_rows = defaultdict(set)
    for r, row in enumerate(rows):
        for c in row:
            col_rows[c].add(r)
    used = set()
    pivots = []
    for c in order:
        cands = [r for r in col_rows[c] if r not in used]
        r = min(cands, key=lambda r: (len(rows[r]), r))
        used.add(r)
        pivots.append((c, r))
        prow, pv = rows[r], rows[r][c]
        for r2 in list(col_rows[c]):
            if r2 in used:
                continue
            f = rows[r2][c] / pv
            for c2, val in prow.items():
                new = rows[r2].get(c2, 0) - f * val
                if new == 0:
                    rows[r2].pop(c2, None)
                    col_rows[c2].discard(r2)
                else:
                    rows[r2][c2] = new
                    col_rows[c2].add(r2)
            rhs[r2] -= f * rhs[r]
    sol = [None] * len(order)
    for c, r in reversed(pivots):
        s = rhs[r] - sum(v * sol[c2] for c2, v in rows[r].items() if c2 != c)
        sol[c] = s / rows[r][c]
    return sol


def resolvent_ones(n: int) -> list[Fraction]:
    """Exact ``(I - A_n)^{-1} 1``.

    Multiplying ``(I - A) w = 1`` on the left by ``2I - K`` (``K`` the
    superdiagonal shift) gives the sparse system ``(2I - K - J) w =
    (2I - K) 1`` with ``J`` the anti-diagonal; ordering unknowns as
    ``1, n, 2, n-1, ...`` keeps elimination banded.
    """
    rows = []
    rhs = []
    for i in range(n):  # 0-based row i is equation i+1
        row = defaultdict(Fraction)
        row[i] += 2
        if i + 1 < n:
            row[i + 1] -= 1
        row[n - 1 - i] -= 1
        rows.append({c: v for c, v in row.items() if v != 0})
        rhs.append(Fraction(1 if i + 1 < n else 2))
    order = []
    lo, hi = 0, n - 1
    while lo <= hi:
        order.append(lo)
        if hi != lo:
            order.append(hi)
        lo, hi = lo + 1, hi - 1
    w = _solve_sparse(rows, rhs, order)
    # verify against the defining system, not the transformed one
    aw = HalvingMatrix(n).matvec(w)
    if any(wk - awk != 1 for wk, awk in zip(w, aw)):
        raise ArithmeticError("resolvent solve failed verification")
    return w


@dataclass
class LemmaReport:
    n: int
    bound: float
    rho_estimate: float
    rho_lower: float
    max_resolvent: Fraction
    checks: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(self.checks.values())


def _matrix_powers(A: np.ndarray, n: int) -> dict[int, np.ndarray]:
    An = np.linalg.matrix_power(A, n)
    An2 = np.linalg.matrix_power(An, n)
    An2_2 = An2 @ An2
    return {1: A, n: An, n * n: An2, 4 * n * n: An2_2 @ An2_2}


def check_lemma(n: int, raise_on_fail: bool = True) -> LemmaReport:
    """Run the five checks for ``A_n``.

    (i)   ``A u <= (1 - 1/n^2) u`` exactly;
    (ii)  ``(A u)_k = u_k - 2 - (n^2 - n - 3) / 2^(n+1-k)`` exactly;
    (iii) ``(I - A)^{-1} 1 <= (5 n^2 / 4) 1`` exactly;
    (iv)  power-iteration estimate of the spectral radius at most
          ``1 - 1/n^2 + 1e-10``;
    (v)   ``A^k 1 <= (5/4) e^{-k/n^2} 1`` for ``k in {1, n, n^2, 4n^2}``.
    """
    if not 2 <= n <= N_MAX:
        raise ValueError(f"n must lie in [2, {N_MAX}]")
    A = HalvingMatrix(n)
    u = certificate_vector(n)
    Au = A.matvec(u)
    checks = {}
    failures = []

    factor = Fraction(n * n - 1, n * n)
    bad = [k for k in range(n) if Au[k] > factor * u[k]]
    checks["i"] = not bad
    if bad:
        failures.append(("i", bad[0] + 1))

    bad = [
        k for k in range(1, n + 1)
        if Au[k - 1] != u[k - 1] - 2 - Fraction(n * n - n - 3, 2 ** (n + 1 - k))
    ]
    checks["ii"] = not bad
    if bad:
        failures.append(("ii", bad[0]))

    w = resolvent_ones(n)
    cap = Fraction(5 * n * n, 4)
    bad = [k for k in range(n) if w[k] > cap]
    checks["iii"] = not bad
    if bad:
        failures.append(("iii", bad[0] + 1))

    dense = A.to_array()
    powers = _matrix_powers(dense, n)
    ones = np.ones(n)
    bound = 1.0 - 1.0 / n ** 2

    v = powers[4 * n * n] @ ones
    v = v / v.max()
    ratios = (dense @ v) / v
    rho_hi, rho_lo = float(ratios.max()), float(ratios.min())
    checks["iv"] = rho_hi <= bound + RHO_SLACK
    if not checks["iv"]:
        failures.append(("iv", int(ratios.argmax()) + 1))

    ok_v = True
    for k, Pk in sorted(powers.items()):
        lhs = Pk @ ones
        rhs = 1.25 * math.exp(-k / n ** 2)
        over = np.nonzero(lhs > rhs * (1 + POWER_SLACK))[0]
        if over.size:
            ok_v = False
            failures.append(("v", int(over[0]) + 1))
            break
    checks["v"] = ok_v

    report = LemmaReport(
        n=n, bound=bound, rho_estimate=rho_hi, rho_lower=rho_lo,
        max_resolvent=max(w), checks=checks,
    )
    if failures and raise_on_fail:
        check, index = failures[0]
        raise LemmaViolated(check, n, index)
    return report


def check_all(n_max: int = N_MAX, raise_on_fail: bool = True) -> list[LemmaReport]:
    return [check_lemma(n, raise_on_fail) for n in range(2, n_max + 1)]


def format_table(reports) -> str:
    lines = [f"{'n':>4} {'rho_est':>22} {'1-1/n^2':>22}  i   ii  iii iv  v   result"]
    for r in reports:
        marks = "  ".join("ok" if r.checks[c] else "NO" for c in ("i", "ii", "iii", "iv", "v"))
        lines.append(
            f"{r.n:>4} {r.rho_estimate:>22.17g} {r.bound:>22.17g}  {marks}  "
            f"{'PASS' if r.passed else 'FAIL'}"
        )
    return "\n".join(lines)
