"""Small dense LP and SDP engines with optimality certificates.

``solve_lp`` is a two-phase tableau simplex (Bland's rule) that runs either in
floating point or over exact rationals.  ``solve_sdp`` is a primal-dual
interior-point method (HKM direction, Mehrotra predictor-corrector) that
reports a dual bound alongside the primal value.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Optional, Sequence

import numpy as np

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"
TOLERANCE_NOT_MET = "tolerance-not-met"

LP_FEAS_TOL = 1e-9


@dataclass
class LinearProgram:
    """maximize c.x subject to A x <= b and lo <= x <= hi (hi may be None)."""

    objective: Sequence
    constraints: list = field(default_factory=list)  # (coeffs, "<=", rhs)
    bounds: Optional[list] = None  # per-variable (lo, hi); default (0, None)

    def __post_init__(self):
        nv = len(self.objective)
        for coeffs, rel, _ in self.constraints:
            if len(coeffs) != nv:
                raise ValueError("constraint length differs from objective length")
            if rel != "<=":
                raise ValueError(f"unsupported relation {rel!r}")
        if self.bounds is None:
            self.bounds = [(0, None)] * nv
        if len(self.bounds) != nv:
            raise ValueError("one (lo, hi) bound pair per variable required")
        for lo, hi in self.bounds:
            if lo is None:
                raise ValueError("lower bounds must be finite")
            if hi is not None and lo > hi:
                raise ValueError("lo > hi")

    @property
    def num_vars(self) -> int:
        return len(self.objective)


@dataclass
class SolverSolution:
    value: Any
    primal: Any
    dual_bound: Any
    gap: float
    status: str
    dual: Any = None
    iterations: int = 0

    @property
    def ok(self) -> bool:
        return self.status == OPTIMAL


# -- linear programming ------------------------------------------------------


def _standard_form(lp: LinearProgram, exact: bool):
    """Rows/rhs/costs for max c.x', A' x' <= b', x' >= 0 with x = lo + x'."""
    conv = Fraction if exact else float
    c = [conv(v) for v in lp.objective]
    lo = [conv(b[0]) for b in lp.bounds]
    rows, rhs = [], []
    for coeffs, _, r in lp.constraints:
        a = [conv(v) for v in coeffs]
        rows.append(a)
        rhs.append(conv(r) - sum(ai * li for ai, li in zip(a, lo)))
    nv = lp.num_vars
    for j, (l, h) in enumerate(lp.bounds):
        if h is not None:
            a = [conv(0)] * nv
            a[j] = conv(1)
            rows.append(a)
            rhs.append(conv(h) - conv(l))
    offset = sum(ci * li for ci, li in zip(c, lo))
    return rows, rhs, c, lo, offset


def _pivot(T, r, col):
    T[r] = T[r] / T[r, col]
    for i in range(T.shape[0]):
        if i != r and T[i, col] != 0:
            T[i] = T[i] - T[i, col] * T[r]


def _run_simplex(T, basis, ncols, tol, max_pivots):
    """Maximise the objective stored (negated) in the last row; Bland's rule."""
    m = T.shape[0] - 1
    for _ in range(max_pivots):
        obj = T[-1, :ncols]
        entering = -1
        for j in range(ncols):
            if obj[j] < -tol:
                entering = j
                break
        if entering < 0:
            return OPTIMAL
        best_r, best_ratio = -1, None
        for i in range(m):
            a = T[i, entering]
            if a > tol:
                ratio = T[i, -1] / a
                if (
                    best_r < 0
                    or ratio < best_ratio - tol
                    or (abs(ratio - best_ratio) <= tol and basis[i] < basis[best_r])
                ):
                    best_r, best_ratio = i, ratio
        if best_r < 0:
            return UNBOUNDED
        _pivot(T, best_r, entering)
        basis[best_r] = entering
    return TOLERANCE_NOT_MET


def _simplex(rows, rhs, c, exact: bool, max_pivots: int = 5000):
    """Solve max c.x, rows x <= rhs, x >= 0.

    Returns (status, x, y, value) with y the row duals.
    """
    dtype = object if exact else float
    zero = Fraction(0) if exact else 0.0
    one = Fraction(1) if exact else 1.0
    tol = 0 if exact else LP_FEAS_TOL
    m, n = len(rows), len(c)
    flip = [rhs[i] < 0 for i in range(m)]
    nart = sum(flip)
    ncols = n + m + nart
    T = np.full((m + 1, ncols + 1), zero, dtype=dtype)
    basis = [0] * m
    a_col = n + m
    for i in range(m):
        s = -one if flip[i] else one
        for j in range(n):
            T[i, j] = s * rows[i][j]
        T[i, n + i] = s
        T[i, -1] = s * rhs[i]
        if flip[i]:
            T[i, a_col] = one
            basis[i] = a_col
            a_col += 1
        else:
            basis[i] = n + i
    if nart:
        # phase 1: maximise -sum(artificials)
        for j in range(n + m, ncols):
            T[-1, j] = one
        for i in range(m):
            if basis[i] >= n + m:
                T[-1] = T[-1] - T[i]
        status = _run_simplex(T, basis, ncols, tol, max_pivots)
        if status != OPTIMAL:
            return status, None, None, None
        if T[-1, -1] < -tol:
            return INFEASIBLE, None, None, None
        # drive remaining artificials out of the basis
        for i in range(m):
            if basis[i] >= n + m:
                for j in range(n + m):
                    if abs(T[i, j]) > tol:
                        _pivot(T, i, j)
                        basis[i] = j
                        break
        T[:, n + m : ncols] = zero
        ncols = n + m
    T[-1] = zero
    for j in range(n):
        T[-1, j] = -c[j]
    for i in range(m):
        if T[-1, basis[i]] != 0:
            T[-1] = T[-1] - T[-1, basis[i]] * T[i]
    status = _run_simplex(T, basis, ncols, tol, max_pivots)
    if status != OPTIMAL:
        return status, None, None, None
    x = [zero] * n
    for i in range(m):
        if basis[i] < n:
            x[basis[i]] = T[i, -1]
    y = [T[-1, n + i] for i in range(m)]
    return OPTIMAL, x, y, T[-1, -1]


def _verify_certificate(rows, rhs, c, x, y) -> bool:
    """Exact primal/dual feasibility and equal objectives."""
    if any(v < 0 for v in x) or any(v < 0 for v in y):
        return False
    for a, r in zip(rows, rhs):
        if sum(ai * xi for ai, xi in zip(a, x) if ai) > r:
            return False
    for j in range(len(c)):
        if sum(rows[i][j] * y[i] for i in range(len(rows)) if rows[i][j]) < c[j]:
            return False
    return sum(ci * xi for ci, xi in zip(c, x)) == sum(ri * yi for ri, yi in zip(rhs, y))


def rational_simplex(lp: LinearProgram) -> SolverSolution:
    """Exact rational-pivot simplex."""
    rows, rhs, c, lo, offset = _standard_form(lp, exact=True)
    status, x, y, val = _simplex(rows, rhs, c, exact=True)
    if status != OPTIMAL:
        return SolverSolution(None, None, None, float("inf"), status)
    value = val + offset
    primal = [l + xi for l, xi in zip(lo, x)]
    return SolverSolution(value, primal, value, 0.0, OPTIMAL, dual=y)


def solve_lp(lp: LinearProgram, exact: bool = False, max_denominator: int = 10_000) -> SolverSolution:
    """Maximise ``lp``.

    Float mode pivots in double precision with feasibility tolerance 1e-9.
    Exact mode first rounds the float optimum and its duals to nearby
    rationals; if those pass an exact primal/dual feasibility and
    equal-objective check the rationals are returned, otherwise the problem
    is re-solved by the rational simplex.
    """
    rows, rhs, c, lo, offset = _standard_form(lp, exact=False)
    status, x, y, val = _simplex(rows, rhs, c, exact=False)
    if not exact:
        if status != OPTIMAL:
            return SolverSolution(None, None, None, float("inf"), status)
        primal = [float(l + xi) for l, xi in zip(lo, x)]
        value = float(val + offset)
        y = [float(v) for v in y]
        dual_bound = float(sum(r * yi for r, yi in zip(rhs, y)) + offset)
        return SolverSolution(value, primal, dual_bound, abs(dual_bound - value), OPTIMAL, dual=y)
    if status == OPTIMAL:
        q_rows, q_rhs, q_c, q_lo, q_off = _standard_form(lp, exact=True)
        qx = [Fraction(v).limit_denominator(max_denominator) for v in x]
        qy = [Fraction(v).limit_denominator(max_denominator) for v in y]
        if _verify_certificate(q_rows, q_rhs, q_c, qx, qy):
            value = sum(ci * xi for ci, xi in zip(q_c, qx)) + q_off
            primal = [l + xi for l, xi in zip(q_lo, qx)]
            return SolverSolution(value, primal, value, 0.0, OPTIMAL, dual=qy)
    return rational_simplex(lp)


# -- semidefinite programming --------------------------------------------------


@dataclass
class SdpProblem:
    """maximize <C, X> subject to <A_k, X> = b_k and X PSD."""

    C: np.ndarray
    A: np.ndarray  # shape (m, dim, dim)
    b: np.ndarray

    def __post_init__(self):
        self.C = np.asarray(self.C, dtype=float)
        self.A = np.asarray(self.A, dtype=float)
        self.b = np.asarray(self.b, dtype=float)
        d = self.C.shape[0]
        if self.C.shape != (d, d) or self.A.ndim != 3 or self.A.shape[1:] != (d, d):
            raise ValueError("matrix shapes inconsistent with dim")
        if self.A.shape[0] != self.b.shape[0]:
            raise ValueError("one rhs entry per constraint matrix")
        if not np.allclose(self.C, self.C.T) or not np.allclose(self.A, self.A.transpose(0, 2, 1)):
            raise ValueError("matrices must be symmetric")

    @property
    def dim(self) -> int:
        return self.C.shape[0]


def _max_step(M: np.ndarray, dM: np.ndarray) -> float:
    L = np.linalg.cholesky(M)
    Li = np.linalg.inv(L)
    lam = np.linalg.eigvalsh(Li @ dM @ Li.T)[0]
    return np.inf if lam >= 0 else -1.0 / lam


def _trace_bound(p: SdpProblem) -> Optional[float]:
    """tr X fixed by some constraint <s I, X> = b; None if no such row."""
    eye = np.eye(p.dim)
    for Ak, bk in zip(p.A, p.b):
        s = Ak[0, 0]
        if s > 0 and np.array_equal(Ak, s * eye):
            return bk / s
    return None


def solve_sdp(p: SdpProblem, tol: float = 1e-7, max_iter: int = 500) -> SolverSolution:
    """Primal-dual interior point for ``p``.

    The dual bound is ``b.y`` corrected by the most negative eigenvalue of
    ``sum y_k A_k - C`` times the trace bound, so it stays valid when the
    dual iterate is not exactly PSD.
    """
    n, m = p.dim, p.A.shape[0]
    A, b, C = p.A, p.b, p.C
    Aflat = A.reshape(m, -1)

    def Aop(X):
        return Aflat @ X.reshape(-1)

    def At(y):
        return np.tensordot(y, A, axes=1)

    AAt = np.linalg.cholesky(Aflat @ Aflat.T)

    def restore(dX, Rp):
        # least-squares correction so that A(dX) = Rp holds to rounding
        r = Rp - Aop(dX)
        w = np.linalg.solve(AAt.T, np.linalg.solve(AAt, r))
        return dX + At(w)

    scale = max(1.0, np.abs(b).max(initial=0.0), np.linalg.norm(C))
    X = np.eye(n) * scale
    Z = np.eye(n) * scale
    y = np.zeros(m)
    normC = 1.0 + np.linalg.norm(C)
    status = TOLERANCE_NOT_MET
    best = None  # (gap, X, y) of the best nearly feasible iterate
    it = 0
    for it in range(1, max_iter + 1):
        Rp = b - Aop(X)
        Rd = C - At(y) + Z
        mu = np.trace(X @ Z) / n
        gap = abs(float(b @ y) - float(np.vdot(C, X)))
        pinf = np.abs(Rp).max(initial=0.0)
        dinf = np.abs(Rd).max() / normC
        if pinf <= 1e-8 and (best is None or gap < best[0]):
            best = (gap, X, y)
        if pinf <= 1e-8 and dinf <= 1e-9 and gap <= 0.5 * tol:
            status = OPTIMAL
            break
        try:
            Zi = np.linalg.inv(Z)
            G = X @ A @ Zi  # (m, n, n)
            M = Aflat @ G.transpose(0, 2, 1).reshape(m, -1).T
            M = 0.5 * (M + M.T)
            try:
                Mc = np.linalg.cholesky(M)

                def solve_m(r):
                    return np.linalg.solve(Mc.T, np.linalg.solve(Mc, r))

            except np.linalg.LinAlgError:
                # near the optimum M can be too ill-conditioned for Cholesky
                def solve_m(r):
                    return np.linalg.lstsq(M, r, rcond=None)[0]

            def direction(target, corr):
                R = target * Zi + X @ Rd @ Zi
                if corr is not None:
                    R = R - corr
                rhs = Aop(R) - b
                dy = solve_m(rhs)
                dZ = At(dy) - Rd
                dX = target * Zi - X - X @ dZ @ Zi
                if corr is not None:
                    dX = dX - corr
                dX = restore(0.5 * (dX + dX.T), Rp)
                return dX, dy, dZ

            dXp, dyp, dZp = direction(0.0, None)
            ap = min(1.0, _max_step(X, dXp))
            ad = min(1.0, _max_step(Z, dZp))
            mu_aff = np.trace((X + ap * dXp) @ (Z + ad * dZp)) / n
            sigma = min(1.0, (mu_aff / mu) ** 3)
            dX, dy, dZ = direction(sigma * mu, dXp @ dZp @ Zi)
            ap = min(1.0, 0.9 * _max_step(X, dX))
            ad = min(1.0, 0.9 * _max_step(Z, dZ))
        except np.linalg.LinAlgError:
            break
        X = X + ap * dX
        X = 0.5 * (X + X.T)
        y = y + ad * dy
        Z = Z + ad * dZ
        Z = 0.5 * (Z + Z.T)
    if status != OPTIMAL and best is not None:
        _, X, y = best

    value = float(np.vdot(C, X))
    Ztrue = At(y) - C
    lam = float(np.linalg.eigvalsh(Ztrue)[0])
    dual_bound = float(b @ y)
    if lam < 0:
        tb = _trace_bound(p)
        if tb is None:
            return SolverSolution(value, X, np.inf, np.inf, TOLERANCE_NOT_MET, dual=y, iterations=it)
        dual_bound += -lam * tb
    gap = abs(dual_bound - value)
    feasible = (
        np.abs(Aop(X) - b).max(initial=0.0) <= 1e-8 and np.linalg.eigvalsh(X)[0] >= -1e-9
    )
    if status == OPTIMAL and not (gap <= tol and feasible):
        status = TOLERANCE_NOT_MET
    elif status != OPTIMAL and gap <= tol and feasible:
        status = OPTIMAL
    return SolverSolution(value, X, dual_bound, gap, status, dual=y, iterations=it)
