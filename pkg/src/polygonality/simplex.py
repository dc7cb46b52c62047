"""Exact rational simplex for small dense linear programs.

Standard-form problems ``max c.x  s.t.  A x = b, x >= 0`` are solved with
Bland's anti-cycling rule, entirely in rational arithmetic (gmpy2.mpq when
available, fractions.Fraction otherwise).  Problem sizes here are tiny
(dozens of rows, a few hundred columns), so a dense tableau is adequate.

Two entry points cover the package's needs:

* :func:`maximize_homogeneous` -- ``max c.x`` over ``A x = 0``, ``sum(x) <= 1``,
  ``x >= 0``.  The zero vector is feasible, so a crash basis from Gauss-Jordan
  elimination replaces phase one.  Optimal duals double as a refutation
  certificate when the optimum is zero.
* :func:`find_feasible` -- phase-one search for ``A x = b, x >= 0``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

try:
    from gmpy2 import mpq as QQ
except ImportError:  # pragma: no cover - gmpy2 is an optional speedup
    from fractions import Fraction as QQ

ZERO = QQ(0)
ONE = QQ(1)


class SimplexError(Exception):
    pass


@dataclass
class LPResult:
    status: str  # "optimal" or "infeasible"
    x: list = field(default_factory=list)
    objective: object = ZERO
    duals: list = field(default_factory=list)  # one entry per original row


class _Tableau:
    """Dense tableau: rows over n columns, rhs, basis, and objective row."""

    def __init__(self, rows, rhs, basis, cost):
        self.rows = rows
        self.rhs = rhs
        self.basis = basis
        self.n = len(cost)
        self.cost = cost
        self.obj_row = list(cost)
        self.obj_val = ZERO
        for i, bi in enumerate(basis):
            self._eliminate_cost(i, bi)

    def _eliminate_cost(self, i, col):
        f = self.obj_row[col]
        if f != 0:
            row = self.rows[i]
            obj = self.obj_row
            for j in range(self.n):
                if row[j]:
                    obj[j] -= f * row[j]
            self.obj_val += f * self.rhs[i]

    def pivot(self, r, col):
        row = self.rows[r]
        piv = row[col]
        if piv != 1:
            inv = ONE / piv
            self.rows[r] = row = [v * inv for v in row]
            self.rhs[r] *= inv
        for i in range(len(self.rows)):
            if i == r:
                continue
            f = self.rows[i][col]
            if f != 0:
                tgt = self.rows[i]
                for j in range(self.n):
                    if row[j]:
                        tgt[j] -= f * row[j]
                self.rhs[i] -= f * self.rhs[r]
        f = self.obj_row[col]
        if f != 0:
            obj = self.obj_row
            for j in range(self.n):
                if row[j]:
                    obj[j] -= f * row[j]
            self.obj_val += f * self.rhs[r]
        self.basis[r] = col

    def run(self, stop_when_positive=False):
        """Bland-rule pivoting until optimality (all reduced costs <= 0)."""
        while True:
            if stop_when_positive and self.obj_val > 0:
                return
            col = next((j for j in range(self.n) if self.obj_row[j] > 0), None)
            if col is None:
                return
            best_r, best_ratio = None, None
            for i, row in enumerate(self.rows):
                a = row[col]
                if a > 0:
                    ratio = self.rhs[i] / a
                    if (
                        best_ratio is None
                        or ratio < best_ratio
                        or (ratio == best_ratio and self.basis[i] < self.basis[best_r])
                    ):
                        best_r, best_ratio = i, ratio
            if best_r is None:
                raise SimplexError("unbounded linear program")
            self.pivot(best_r, col)

    def solution(self):
        x = [ZERO] * self.n
        for i, bi in enumerate(self.basis):
            x[bi] = self.rhs[i]
        return x


def _solve_duals(columns, cost, basis, nrows):
    """Solve y.B = c_B exactly for the dual vector over the original rows."""
    m = nrows
    # transpose system: B^T y = c_B
    mat = [[columns[basis[j]][i] for i in range(m)] for j in range(len(basis))]
    rhs = [cost[bi] for bi in basis]
    y = [ZERO] * m
    # Gaussian elimination with partial (first nonzero) pivoting
    rows = list(range(len(mat)))
    piv_cols = []
    for col in range(m):
        pr = next((r for r in rows if mat[r][col] != 0), None)
        if pr is None:
            continue
        rows.remove(pr)
        piv_cols.append((pr, col))
        inv = ONE / mat[pr][col]
        mat[pr] = [v * inv for v in mat[pr]]
        rhs[pr] *= inv
        for r in range(len(mat)):
            if r != pr and mat[r][col] != 0:
                f = mat[r][col]
                mat[r] = [a - f * b for a, b in zip(mat[r], mat[pr])]
                rhs[r] -= f * rhs[pr]
    for pr, col in piv_cols:
        y[col] = rhs[pr]
    return y


def maximize_homogeneous(A, c, stop_when_positive=False):
    """``max c.x`` subject to ``A x = 0``, ``sum(x) <= 1``, ``x >= 0``.

    Returns an :class:`LPResult` whose ``duals`` has one multiplier per row of
    ``A`` plus a final multiplier for the normalization row.  When
    ``stop_when_positive`` is set, pivoting stops at the first basis with a
    positive objective (the duals are then not meaningful).
    """
    m, n = len(A), len(c)
    rows = [[QQ(v) for v in row] + [ZERO] for row in A]  # extra slack column
    norm = [ONE] * n + [ONE]
    cost = [QQ(v) for v in c] + [ZERO]
    # Gauss-Jordan crash basis on the homogeneous rows: the basic solution is
    # x = 0, s = 1, which is feasible outright.
    basis_cols: list[int] = []
    kept: list[int] = []
    for i in range(m):
        row = rows[i]
        col = next((j for j in range(n) if row[j] != 0 and j not in basis_cols), None)
        if col is None:
            continue  # redundant row
        inv = ONE / row[col]
        if inv != 1:
            rows[i] = row = [v * inv for v in row]
        for r in range(m):
            if r != i and rows[r][col] != 0:
                f = rows[r][col]
                rows[r] = [a - f * b for a, b in zip(rows[r], row)]
        if norm[col] != 0:
            f = norm[col]
            norm = [a - f * b for a, b in zip(norm, row)]
        basis_cols.append(col)
        kept.append(i)
    tab_rows = [rows[i] for i in kept] + [norm]
    tab_rhs = [ZERO] * len(kept) + [ONE]
    tab_basis = basis_cols + [n]  # slack basic in the normalization row
    tab = _Tableau(tab_rows, tab_rhs, tab_basis, cost)
    tab.run(stop_when_positive=stop_when_positive)
    x = tab.solution()[:n]
    duals = [ZERO] * (m + 1)
    if not (stop_when_positive and tab.obj_val > 0):
        columns = {}
        for bi in tab.basis:
            col = [(A[kept[i]][bi] if bi < n else ZERO) for i in range(len(kept))]
            col.append(ONE)
            columns[bi] = col
        y = _solve_duals(columns, cost, tab.basis, len(kept) + 1)
        for i, orig in enumerate(kept):
            duals[orig] = y[i]
        duals[m] = y[len(kept)]
    return LPResult("optimal", x, tab.obj_val, duals)


def find_feasible(A, b):
    """Phase-one simplex for ``A x = b, x >= 0``; returns LPResult.

    ``status`` is "optimal" with a feasible ``x`` or "infeasible".
    """
    m, n = len(A), (len(A[0]) if A else 0)
    rows = []
    rhs = []
    for i in range(m):
        if b[i] < 0:
            rows.append([-QQ(v) for v in A[i]])
            rhs.append(-QQ(b[i]))
        else:
            rows.append([QQ(v) for v in A[i]])
            rhs.append(QQ(b[i]))
    # artificial columns n .. n+m-1, phase-one cost -1 each (maximization)
    for i in range(m):
        art = [ZERO] * m
        art[i] = ONE
        rows[i] = rows[i] + art
    cost = [ZERO] * n + [-ONE] * m
    basis = [n + i for i in range(m)]
    tab = _Tableau(rows, rhs, basis, cost)
    tab.run()
    if tab.obj_val < 0:
        return LPResult("infeasible")
    # pivot leftover artificials out of the basis (rows are consistent here)
    for i in range(len(tab.basis)):
        if tab.basis[i] >= n:
            col = next((j for j in range(n) if tab.rows[i][j] != 0), None)
            if col is not None:
                tab.pivot(i, col)
    keep = [i for i in range(len(tab.basis)) if tab.basis[i] < n]
    x = [ZERO] * n
    for i in keep:
        x[tab.basis[i]] = tab.rhs[i]
    return LPResult("optimal", x, ZERO, [])
