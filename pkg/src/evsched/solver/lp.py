"""Dense revised simplex for linear programs with variable bounds.

Solves

    min  c . x
    s.t. G x <= h,  E x = b,  lo <= x <= up   (bounds may be infinite)

with a two-phase bounded-variable simplex.  Inequalities get slack
columns, infeasible starting rows get artificial columns, and phase one
minimizes the artificial sum.  Pricing is Dantzig (most negative reduced
cost, ties to the lowest column index); after a run of degenerate pivots
the solver switches to Bland's smallest-index rule until the objective
moves again, which prevents cycling.  The pivot sequence is a pure
function of the instance, so results are bit-reproducible.

Optimal solutions always carry a dual certificate (multipliers for G, E
and the active bounds) and the solver re-checks primal residuals and the
duality gap before reporting Optimal; if certification fails at tolerance
it raises NumericalFailure instead of mislabeling the result.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

# Certification thresholds (see LpSolution): absolute on residuals,
# relative on the duality gap.
FEASIBILITY_TOL = 1e-8
GAP_REL_TOL = 1e-7

_DUAL_TOL = 1e-9  # reduced-cost optimality threshold
_PIVOT_TOL = 1e-9  # smallest acceptable pivot magnitude
_RATIO_TIE = 1e-10  # ratio-test tie window
_REFACTOR_EVERY = 64
_BLAND_AFTER = 30  # degenerate pivots before switching to Bland


class LpStatus(Enum):
    OPTIMAL = "optimal"
    INFEASIBLE = "infeasible"
    UNBOUNDED = "unbounded"


class NumericalFailure(RuntimeError):
    """The solver could not certify a result at tolerance."""


@dataclass(frozen=True)
class LinearProgram:
    """Standard-form LP; G/h and E/b may be omitted, bounds default to
    [0, +inf)."""

    c: np.ndarray
    G: np.ndarray | None = None
    h: np.ndarray | None = None
    E: np.ndarray | None = None
    b: np.ndarray | None = None
    lo: np.ndarray | None = None
    up: np.ndarray | None = None

    def __post_init__(self):
        c = np.atleast_1d(np.asarray(self.c, dtype=float))
        if c.ndim != 1 or c.size == 0:
            raise ValueError("c must be a nonempty vector")
        n = c.size
        object.__setattr__(self, "c", c)

        def norm_system(mat, rhs, mat_name):
            if mat is None and rhs is None:
                return np.zeros((0, n)), np.zeros(0)
            mat = np.atleast_2d(np.asarray(mat, dtype=float))
            rhs = np.atleast_1d(np.asarray(rhs, dtype=float))
            if mat.shape != (rhs.size, n):
                raise ValueError(
                    f"{mat_name} shape {mat.shape} inconsistent with "
                    f"n={n}, rhs={rhs.size}"
                )
            return mat, rhs

        G, h = norm_system(self.G, self.h, "G")
        E, b = norm_system(self.E, self.b, "E")
        object.__setattr__(self, "G", G)
        object.__setattr__(self, "h", h)
        object.__setattr__(self, "E", E)
        object.__setattr__(self, "b", b)

        lo = (
            np.zeros(n)
            if self.lo is None
            else np.atleast_1d(np.asarray(self.lo, dtype=float))
        )
        up = (
            np.full(n, np.inf)
            if self.up is None
            else np.atleast_1d(np.asarray(self.up, dtype=float))
        )
        if lo.shape != (n,) or up.shape != (n,):
            raise ValueError("bounds must have length n")
        if (lo > up).any():
            raise ValueError("lo must be <= up elementwise")
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "up", up)

    @property
    def num_vars(self) -> int:
        return self.c.size


@dataclass
class LpSolution:
    """Solver result.  For Optimal status the certificate fields hold:

    dual_ineq  multipliers for G x <= h (nonnegative up to tolerance)
    dual_eq    multipliers for E x = b
    dual_lo    multipliers for active lower bounds
    dual_up    multipliers for active upper bounds

    with dual_objective <= objective_value (weak duality) and
    duality_gap = objective_value - dual_objective certified at
    <= GAP_REL_TOL relative; max_residual is the worst primal
    constraint violation (<= FEASIBILITY_TOL).
    """

    status: LpStatus
    x: np.ndarray | None = None
    objective_value: float | None = None
    dual_ineq: np.ndarray | None = None
    dual_eq: np.ndarray | None = None
    dual_lo: np.ndarray | None = None
    dual_up: np.ndarray | None = None
    dual_objective: float | None = None
    duality_gap: float | None = None
    max_residual: float | None = None
    iterations: int = 0


# Nonbasic rest states.
_AT_LO = 1
_AT_UP = 2
_FREE = 3
_BASIC = 0


class _Simplex:
    """Working state for one solve; columns are [structural | slack | artificial]."""

    def __init__(self, lp: LinearProgram):
        self.lp = lp
        n = lp.num_vars
        m_ineq = lp.G.shape[0]
        m_eq = lp.E.shape[0]
        m = m_ineq + m_eq
        self.n_struct = n
        self.m_ineq = m_ineq
        self.m = m

        rows = []
        if m_ineq:
            rows.append(np.hstack([lp.G, np.eye(m_ineq)]))
        if m_eq:
            rows.append(np.hstack([lp.E, np.zeros((m_eq, m_ineq))]))
        self.A = (
            np.vstack(rows) if rows else np.zeros((0, n + m_ineq))
        )
        self.rhs = np.concatenate([lp.h, lp.b])
        self.lo = np.concatenate([lp.lo, np.zeros(m_ineq)])
        self.up = np.concatenate([lp.up, np.full(m_ineq, np.inf)])
        self.cost = np.concatenate([lp.c, np.zeros(m_ineq)])
        self.n_total = n + m_ineq
        self.iterations = 0

    # -- setup -----------------------------------------------------------

    def rest_value(self, j: int) -> float:
        if np.isfinite(self.lo[j]):
            return self.lo[j]
        if np.isfinite(self.up[j]):
            return self.up[j]
        return 0.0

    def rest_state(self, j: int) -> int:
        if np.isfinite(self.lo[j]):
            return _AT_LO
        if np.isfinite(self.up[j]):
            return _AT_UP
        return _FREE

    def build_initial_basis(self):
        m = self.m
        self.state = np.empty(self.n_total, dtype=np.int8)
        self.values = np.empty(self.n_total)
        for j in range(self.n_total):
            self.state[j] = self.rest_state(j)
            self.values[j] = self.rest_value(j)

        residual = self.rhs - self.A @ self.values
        self.basis = np.empty(m, dtype=int)
        art_cols = []
        art_rows = []
        art_signs = []
        for r in range(m):
            slack_col = self.n_struct + r if r < self.m_ineq else None
            if slack_col is not None and residual[r] >= 0.0:
                self.basis[r] = slack_col
            else:
                art_rows.append(r)
                art_signs.append(1.0 if residual[r] >= 0.0 else -1.0)
                art_cols.append(self.n_total + len(art_cols))
                self.basis[r] = art_cols[-1]
        self.n_art = len(art_cols)
        if self.n_art:
            art_block = np.zeros((m, self.n_art))
            for k, (r, s) in enumerate(zip(art_rows, art_signs)):
                art_block[r, k] = s
            self.A = np.hstack([self.A, art_block])
            self.lo = np.concatenate([self.lo, np.zeros(self.n_art)])
            self.up = np.concatenate([self.up, np.full(self.n_art, np.inf)])
            self.cost = np.concatenate([self.cost, np.zeros(self.n_art)])
            self.state = np.concatenate(
                [self.state, np.full(self.n_art, _AT_LO, dtype=np.int8)]
            )
            self.values = np.concatenate([self.values, np.zeros(self.n_art)])
            self.n_total += self.n_art
        self.art_start = self.n_total - self.n_art

        for r in range(m):
            self.state[self.basis[r]] = _BASIC
        self.refactorize()

    def refactorize(self):
        """Rebuild the basis inverse and basic values from scratch."""
        m = self.m
        if m == 0:
            self.B_inv = np.zeros((0, 0))
            self.xB = np.zeros(0)
            return
        B = self.A[:, self.basis]
        try:
            self.B_inv = np.linalg.inv(B)
        except np.linalg.LinAlgError as exc:
            raise NumericalFailure("singular basis during refactorization") from exc
        v = self.values.copy()
        v[self.basis] = 0.0
        self.xB = self.B_inv @ (self.rhs - self.A @ v)
        self.values[self.basis] = self.xB

    # -- core iteration ---------------------------------------------------

    def reduced_costs(self, c_work: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        if self.m == 0:
            return np.zeros(0), c_work.copy()
        y = c_work[self.basis] @ self.B_inv
        return y, c_work - y @ self.A

    def choose_entering(self, d: np.ndarray, bland: bool) -> int:
        state = self.state
        viol = np.zeros(self.n_total)
        at_lo = state == _AT_LO
        at_up = state == _AT_UP
        free = state == _FREE
        viol[at_lo] = -d[at_lo]
        viol[at_up] = d[at_up]
        viol[free] = np.abs(d[free])
        eligible = (viol > _DUAL_TOL) & self.enterable
        if not eligible.any():
            return -1
        if bland:
            return int(np.flatnonzero(eligible)[0])
        return int(np.argmax(viol))  # first max wins: deterministic

    def ratio_test(self, j: int, direction: float, w: np.ndarray, bland: bool):
        """Largest step t moving x_j by `direction * t`; returns
        (t, leaving_row) where leaving_row is -1 for a bound flip."""
        t_flip = np.inf
        if np.isfinite(self.lo[j]) and np.isfinite(self.up[j]):
            t_flip = self.up[j] - self.lo[j]
        if self.m == 0:
            return t_flip, -1
        delta = direction * w
        lo_b = self.lo[self.basis]
        up_b = self.up[self.basis]
        ratios = np.full(self.m, np.inf)
        pos = delta > _PIVOT_TOL
        if pos.any():
            ratios[pos] = np.maximum(self.xB[pos] - lo_b[pos], 0.0) / delta[pos]
        neg = (delta < -_PIVOT_TOL) & np.isfinite(up_b)
        if neg.any():
            ratios[neg] = np.maximum(up_b[neg] - self.xB[neg], 0.0) / (-delta[neg])
        rows_min = float(ratios.min(initial=np.inf))
        if rows_min >= t_flip - _RATIO_TIE:
            return t_flip, -1  # bound flip wins ties
        tied = np.flatnonzero(ratios <= rows_min + _RATIO_TIE)
        if bland:
            row = int(tied[np.argmin(self.basis[tied])])
        else:
            # prefer the largest pivot for stability, then the lowest index
            mags = np.abs(w[tied])
            best = mags >= mags.max() - 1e-12
            cand = tied[best]
            row = int(cand[np.argmin(self.basis[cand])])
        return rows_min, row

    def pivot(self, j: int, direction: float, t: float, row: int):
        w = self._w
        if row == -1:
            # bound flip: j jumps to its opposite bound, basis unchanged
            self.xB -= direction * t * w
            if self.state[j] == _AT_LO:
                self.values[j] = self.up[j]
                self.state[j] = _AT_UP
            else:
                self.values[j] = self.lo[j]
                self.state[j] = _AT_LO
            self.values[self.basis] = self.xB
            return
        leaving = self.basis[row]
        self.xB -= direction * t * w
        new_val = self.values[j] + direction * t
        # pin the leaving variable exactly on the bound it reached
        if direction * w[row] > 0:
            self.values[leaving] = self.lo[leaving]
            self.state[leaving] = _AT_LO
        else:
            self.values[leaving] = self.up[leaving]
            self.state[leaving] = _AT_UP
        self.basis[row] = j
        self.state[j] = _BASIC
        self.xB[row] = new_val
        self.values[j] = new_val
        self.values[self.basis] = self.xB
        # product-form update of the basis inverse
        piv = w[row]
        self.B_inv[row, :] /= piv
        col = np.delete(np.arange(self.m), row)
        if col.size:
            self.B_inv[col, :] -= np.outer(w[col], self.B_inv[row, :])

    def run_phase(self, c_work: np.ndarray, max_iter: int) -> LpStatus:
        bland = False
        stall = 0
        since_refactor = 0
        while True:
            if self.iterations >= max_iter:
                raise NumericalFailure(
                    f"iteration limit {max_iter} exceeded (m={self.m}, "
                    f"n={self.n_total})"
                )
            _, d = self.reduced_costs(c_work)
            j = self.choose_entering(d, bland)
            if j < 0:
                return LpStatus.OPTIMAL
            if self.state[j] == _AT_LO:
                direction = 1.0
            elif self.state[j] == _AT_UP:
                direction = -1.0
            else:
                direction = 1.0 if d[j] < 0 else -1.0
            self._w = self.B_inv @ self.A[:, j] if self.m else np.zeros(0)
            t, row = self.ratio_test(j, direction, self._w, bland)
            if not np.isfinite(t):
                return LpStatus.UNBOUNDED
            self.pivot(j, direction, t, row)
            self.iterations += 1
            since_refactor += 1
            if t <= _RATIO_TIE:
                stall += 1
                if stall >= _BLAND_AFTER:
                    bland = True
            else:
                stall = 0
                bland = False
            if since_refactor >= _REFACTOR_EVERY:
                self.refactorize()
                since_refactor = 0

    # -- phases ------------------------------------------------------------

    def solve(self) -> LpSolution:
        self.build_initial_basis()
        self.enterable = np.ones(self.n_total, dtype=bool)
        max_iter = max(2000, 60 * (self.m + self.n_total))

        if self.n_art:
            c1 = np.zeros(self.n_total)
            c1[self.art_start :] = 1.0
            status = self.run_phase(c1, max_iter)
            if status is LpStatus.UNBOUNDED:  # cannot happen: phase 1 >= 0
                raise NumericalFailure("phase one reported unbounded")
            self.refactorize()
            phase1 = float(c1 @ self.values)
            if phase1 > 1e-9 * max(1.0, float(np.abs(self.rhs).max(initial=0.0))):
                return LpSolution(status=LpStatus.INFEASIBLE, iterations=self.iterations)
            self._expel_artificials()
            # freeze artificials at zero and bar them from re-entering
            self.lo[self.art_start :] = 0.0
            self.up[self.art_start :] = 0.0
            self.enterable[self.art_start :] = False

        status = self.run_phase(self.cost, max_iter)
        if status is LpStatus.UNBOUNDED:
            return LpSolution(status=LpStatus.UNBOUNDED, iterations=self.iterations)
        self.refactorize()
        return self._certify()

    def _expel_artificials(self):
        """Pivot basic artificials out where possible; rows that cannot be
        cleared are redundant and keep a zero-fixed artificial."""
        for r in range(self.m):
            j = self.basis[r]
            if j < self.art_start:
                continue
            row = self.B_inv[r, :] @ self.A[:, : self.art_start]
            candidates = np.flatnonzero(
                (np.abs(row) > 1e-7) & (self.state[: self.art_start] != _BASIC)
            )
            if candidates.size == 0:
                continue
            enter = int(candidates[np.argmax(np.abs(row[candidates]))])
            # zero-length pivot: swap basis membership, then rebuild
            self.state[j] = _AT_LO
            self.values[j] = 0.0
            self.basis[r] = enter
            self.state[enter] = _BASIC
            self.refactorize()

    # -- certification ------------------------------------------------------

    def _certify(self) -> LpSolution:
        lp = self.lp
        n = self.n_struct
        x = self.values[:n].copy()
        x = np.clip(x, lp.lo, lp.up)
        resid = 0.0
        if lp.G.shape[0]:
            resid = max(resid, float(np.max(lp.G @ x - lp.h, initial=0.0)))
        if lp.E.shape[0]:
            resid = max(resid, float(np.max(np.abs(lp.E @ x - lp.b), initial=0.0)))

        y, d = self.reduced_costs(self.cost)
        lam = -y[: self.m_ineq]
        nu = -y[self.m_ineq :]
        d_struct = d[:n]
        mu_lo = np.where(np.isfinite(lp.lo), np.maximum(d_struct, 0.0), 0.0)
        mu_up = np.where(np.isfinite(lp.up), np.maximum(-d_struct, 0.0), 0.0)

        primal = float(lp.c @ x)
        dual = 0.0
        if lam.size:
            dual -= float(lam @ lp.h)
        if nu.size:
            dual -= float(nu @ lp.b)
        fin_lo = np.isfinite(lp.lo)
        fin_up = np.isfinite(lp.up)
        dual += float(mu_lo[fin_lo] @ lp.lo[fin_lo])
        dual -= float(mu_up[fin_up] @ lp.up[fin_up])
        gap = primal - dual

        scale = max(1.0, abs(primal))
        if resid > FEASIBILITY_TOL or abs(gap) > GAP_REL_TOL * scale:
            raise NumericalFailure(
                f"certification failed: residual={resid:.3e}, gap={gap:.3e}"
            )
        return LpSolution(
            status=LpStatus.OPTIMAL,
            x=x,
            objective_value=primal,
            dual_ineq=lam,
            dual_eq=nu,
            dual_lo=mu_lo,
            dual_up=mu_up,
            dual_objective=dual,
            duality_gap=gap,
            max_residual=resid,
            iterations=self.iterations,
        )


def _solve_boxed(lp: LinearProgram) -> LpSolution:
    """No-constraint case: each variable sits at whichever bound its cost
    prefers."""
    x = np.zeros(lp.num_vars)
    for j, cj in enumerate(lp.c):
        if cj > 0:
            if not np.isfinite(lp.lo[j]):
                return LpSolution(status=LpStatus.UNBOUNDED)
            x[j] = lp.lo[j]
        elif cj < 0:
            if not np.isfinite(lp.up[j]):
                return LpSolution(status=LpStatus.UNBOUNDED)
            x[j] = lp.up[j]
        else:
            x[j] = lp.lo[j] if np.isfinite(lp.lo[j]) else min(lp.up[j], 0.0)
    mu_lo = np.where(np.isfinite(lp.lo), np.maximum(lp.c, 0.0), 0.0)
    mu_up = np.where(np.isfinite(lp.up), np.maximum(-lp.c, 0.0), 0.0)
    primal = float(lp.c @ x)
    fin_lo = np.isfinite(lp.lo)
    fin_up = np.isfinite(lp.up)
    dual = float(mu_lo[fin_lo] @ lp.lo[fin_lo]) - float(mu_up[fin_up] @ lp.up[fin_up])
    return LpSolution(
        status=LpStatus.OPTIMAL,
        x=x,
        objective_value=primal,
        dual_ineq=np.zeros(0),
        dual_eq=np.zeros(0),
        dual_lo=mu_lo,
        dual_up=mu_up,
        dual_objective=dual,
        duality_gap=primal - dual,
        max_residual=0.0,
    )


def solve_lp(lp: LinearProgram) -> LpSolution:
    """Solve an LP and certify the result (see module docstring)."""
    if lp.G.shape[0] == 0 and lp.E.shape[0] == 0:
        return _solve_boxed(lp)
    return _Simplex(lp).solve()
