"""Revised primal simplex with pluggable pivot rules and instrumentation.

Two-phase method on a standard-form LP. The basis factorization is a sparse
LU refreshed every REFACTOR_INTERVAL pivots (or on accuracy loss), with
product-form eta updates in between. An observer callback fires once per
Phase-II iteration, before the basis update; time spent inside the observer
is excluded from the iteration timing.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from enum import Enum

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from qlpbench.lp import SparseMatrix, StandardFormLP

REFACTOR_INTERVAL = 50
FACTOR_CHECK_TOL = 1e-7
RATIO_PIVOT_TOL = 1e-9
DEGENERATE_STEP = 1e-12
BLAND_TRIGGER = 200
DEFAULT_EPS_OPT = 1e-3


class SolveStatus(Enum):
    OPTIMAL = "optimal"
    UNBOUNDED = "unbounded"
    INFEASIBLE = "infeasible"
    ITERATION_LIMIT = "iteration_limit"
    TIME_LIMIT = "time_limit"
    NUMERICAL_FAILURE = "numerical_failure"


class SingularBasisError(Exception):
    pass


@dataclass(frozen=True)
class PivotRule:
    kind: str  # dantzig | steepest | random
    seed: int = 0

    @classmethod
    def dantzig(cls) -> "PivotRule":
        return cls("dantzig")

    @classmethod
    def steepest_edge(cls) -> "PivotRule":
        return cls("steepest")

    @classmethod
    def random(cls, seed: int = 0) -> "PivotRule":
        return cls("random", seed)


class Factorization:
    """LU of the basis matrix plus product-form eta updates since the last
    refactorization."""

    def __init__(self, A: sp.csc_matrix, basis: np.ndarray):
        self.basis_cols = np.array(basis)
        m = A.shape[0]
        A_B = A[:, self.basis_cols].tocsc()
        try:
            self.lu = spla.splu(A_B, permc_spec="COLAMD",
                                options={"SymmetricMode": False})
        except RuntimeError as e:
            raise SingularBasisError(str(e)) from None
        self.etas: list[tuple[int, np.ndarray]] = []
        self.refactor_count = 0
        self.m = m
        self._spot_check()

    def _spot_check(self):
        m = self.m
        rng = np.random.default_rng(12345)
        for _ in range(min(3, m)):
            i = int(rng.integers(m))
            e = np.zeros(m)
            e[i] = 1.0
            x = self.lu.solve(e)
            if not np.all(np.isfinite(x)):
                raise SingularBasisError("nonfinite solve result")

    def ftran(self, rhs: np.ndarray) -> np.ndarray:
        """Solve A_B x = rhs through the LU and the eta chain."""
        x = self.lu.solve(rhs)
        for ell, u in self.etas:
            piv = x[ell] / u[ell]
            x -= u * piv
            x[ell] = piv
        return x

    def btran(self, rhs: np.ndarray) -> np.ndarray:
        """Solve A_B^T y = rhs (eta transposes applied first, then LU^T)."""
        y = rhs.astype(float, copy=True)
        for ell, u in reversed(self.etas):
            acc = y[ell] - (float(np.dot(u, y)) - u[ell] * y[ell])
            y[ell] = acc / u[ell]
        return self.lu.solve(y, trans="T")

    def update(self, ell: int, u: np.ndarray):
        if abs(u[ell]) < 1e-12:
            raise SingularBasisError("zero pivot in eta update")
        self.etas.append((ell, u.copy()))

    @property
    def needs_refactor(self) -> bool:
        return len(self.etas) >= REFACTOR_INTERVAL

    def accuracy_ok(self, A: sp.csc_matrix, basis: np.ndarray,
                    rng: np.random.Generator) -> bool:
        m = self.m
        e = np.zeros(m)
        e[int(rng.integers(m))] = 1.0
        x = self.ftran(e)
        resid = A[:, basis] @ x - e
        return float(np.abs(resid).max()) <= FACTOR_CHECK_TOL


@dataclass
class SimplexState:
    """Live view handed to observers (read-only by convention)."""

    lp: StandardFormLP
    A: sp.csc_matrix             # matrix the basis indexes into (incl. artificials)
    basis: np.ndarray            # basic column indices, length m
    nonbasic: np.ndarray
    x_basic: np.ndarray
    factorization: Factorization
    iteration: int
    phase: int
    reduced_costs: np.ndarray | None = None  # over nonbasic, same order

    @property
    def in_basis(self) -> np.ndarray:
        mask = np.zeros(self.lp.num_cols, dtype=bool)
        mask[self.basis] = True
        return mask


@dataclass
class SolveOutcome:
    status: SolveStatus
    x: np.ndarray | None = None       # original variables
    objective: float = math.nan
    iterations: int = 0
    phase1_iterations: int = 0
    message: str = ""


@dataclass
class _Work:
    A: sp.csc_matrix
    c: np.ndarray
    b: np.ndarray
    m: int
    n: int
    banned: np.ndarray  # columns that may never enter (artificials in II)


def solve(lp: StandardFormLP, rule: PivotRule = PivotRule.dantzig(),
          eps_opt: float = DEFAULT_EPS_OPT,
          max_iters: int = 100_000, time_budget: float = math.inf,
          observer=None) -> SolveOutcome:
    """Two-phase primal simplex.

    ``observer(state, k, u, ell, theta)`` is called once per Phase-II
    iteration before the basis update; its runtime is excluded from the
    per-iteration clock (the clock value is passed to ``observer.timing``
    if the observer exposes it, see ``bench``).
    """
    if eps_opt <= 0:
        raise ValueError("eps_opt must be positive")
    m, n = lp.num_rows, lp.num_cols
    A = lp.A.to_scipy()
    b = lp.b.copy()

    # Flip rows with negative rhs so the artificial start is feasible.
    flip = b < 0
    if np.any(flip):
        d = sp.diags(np.where(flip, -1.0, 1.0))
        A = (d @ A).tocsc()
        b = np.abs(b)

    rng = np.random.default_rng(rule.seed)
    deadline = time.monotonic() + time_budget

    # --- Phase I ---
    art_cols = np.arange(n, n + m)
    A1 = sp.hstack([A, sp.identity(m, format="csc")], format="csc")
    c1 = np.concatenate([np.zeros(n), np.ones(m)])
    banned1 = np.zeros(n + m, dtype=bool)
    w1 = _Work(A1, c1, b, m, n + m, banned1)
    basis = art_cols.copy()
    # Phase I needs a tight tolerance regardless of the requested eps_opt,
    # else feasible instances can be misreported as infeasible.
    outcome1, basis, iters1 = _iterate(
        w1, basis, rule, min(eps_opt, 1e-9), max_iters, deadline, rng,
        observer=None, phase=1, lp=lp)
    if outcome1 is not None:
        outcome1.phase1_iterations = iters1
        return outcome1

    fact = Factorization(A1, basis)
    x_b = fact.ftran(b)
    if float(np.dot(c1[basis], x_b)) > 1e-7 * (1.0 + float(np.abs(b).max(initial=0.0))):
        return SolveOutcome(SolveStatus.INFEASIBLE, iterations=0,
                            phase1_iterations=iters1,
                            message="phase-I optimum positive")

    basis = _drive_out_artificials(A1, basis, n, m)

    # --- Phase II ---
    banned2 = np.zeros(n + m, dtype=bool)
    banned2[n:] = True
    c2 = np.concatenate([lp.c, np.zeros(m)])
    w2 = _Work(A1, c2, b, m, n + m, banned2)
    outcome2, basis, iters2 = _iterate(
        w2, basis, rule, eps_opt, max_iters, deadline, rng,
        observer=observer, phase=2, lp=lp)
    if outcome2 is not None:
        outcome2.phase1_iterations = iters1
        outcome2.iterations = iters2
        return outcome2

    fact = Factorization(A1, basis)
    x_full = np.zeros(n + m)
    x_full[basis] = fact.ftran(b)
    x_std = x_full[:n]
    obj_std = float(np.dot(lp.c, x_std))
    return SolveOutcome(
        status=SolveStatus.OPTIMAL,
        x=lp.original_solution(x_std),
        objective=lp.original_objective(obj_std),
        iterations=iters2,
        phase1_iterations=iters1,
    )


def _drive_out_artificials(A1: sp.csc_matrix, basis: np.ndarray,
                           n: int, m: int) -> np.ndarray:
    """Pivot zero-level artificials out of the basis where a structural
    column can replace them; leftovers stay basic at zero."""
    basis = basis.copy()
    art_slots = [i for i, j in enumerate(basis) if j >= n]
    if not art_slots:
        return basis
    fact = Factorization(A1, basis)
    in_basis = set(basis.tolist())
    for slot in art_slots:
        for j in range(n):
            if j in in_basis:
                continue
            u = fact.ftran(np.asarray(A1[:, j].todense()).ravel())
            if abs(u[slot]) > 1e-8:
                in_basis.discard(int(basis[slot]))
                basis[slot] = j
                in_basis.add(j)
                fact = Factorization(A1, basis)
                break
    return basis


def reduced_costs(work: _Work, fact: Factorization, basis: np.ndarray,
                  nonbasic: np.ndarray) -> np.ndarray:
    """c_N - (c_B^T A_B^-1) A_N via one BTRAN and sparse products."""
    y = fact.btran(work.c[basis])
    return work.c[nonbasic] - (work.A[:, nonbasic].T @ y)


def choose_column(cbar: np.ndarray, nonbasic: np.ndarray, rule: PivotRule,
                  eps_opt: float, fact: Factorization, work: _Work,
                  rng: np.random.Generator, use_bland: bool) -> int | None:
    """Entering column index (into ``nonbasic``) or None at optimality."""
    improving = np.flatnonzero(cbar < -eps_opt)
    if len(improving) == 0:
        return None
    if use_bland:
        return int(improving[np.argmin(nonbasic[improving])])
    if rule.kind == "dantzig":
        return int(improving[np.argmin(cbar[improving])])
    if rule.kind == "random":
        return int(rng.choice(improving))
    if rule.kind == "steepest":
        # exact recomputation of ||A_B^-1 A_j|| per candidate (desk scale)
        best, best_ratio = None, 0.0
        for idx in improving:
            j = int(nonbasic[idx])
            u = fact.ftran(np.asarray(work.A[:, j].todense()).ravel())
            norm = float(np.linalg.norm(u))
            ratio = cbar[idx] / max(norm, 1e-300)
            if best is None or ratio < best_ratio:
                best, best_ratio = int(idx), ratio
        return best
    raise ValueError(f"unknown pivot rule {rule.kind!r}")


def ratio_test(x_basic: np.ndarray, u: np.ndarray,
               basis: np.ndarray) -> tuple[int, float] | None:
    """Leaving slot and step length; None when u <= 0 (unbounded ray).

    Ties break toward the smallest basic variable index (Bland-style).
    """
    pos = np.flatnonzero(u > RATIO_PIVOT_TOL)
    if len(pos) == 0:
        return None
    ratios = x_basic[pos] / u[pos]
    theta = float(ratios.min())
    tied = pos[ratios <= theta + 1e-15]
    ell = int(tied[np.argmin(basis[tied])])
    return ell, max(theta, 0.0)


def _iterate(work: _Work, basis: np.ndarray, rule: PivotRule, eps_opt: float,
             max_iters: int, deadline: float, rng: np.random.Generator,
             observer, phase: int, lp: StandardFormLP):
    """Run simplex iterations until optimality or a terminal status.

    Returns (outcome_or_None, basis, iterations); None outcome = optimal.
    """
    m = work.m
    fact = Factorization(work.A, basis)
    x_b = fact.ftran(work.b)
    degenerate_run = 0
    use_bland = False
    iters = 0

    while True:
        if iters >= max_iters:
            return (SolveOutcome(SolveStatus.ITERATION_LIMIT, iterations=iters),
                    basis, iters)
        if time.monotonic() > deadline:
            return (SolveOutcome(SolveStatus.TIME_LIMIT, iterations=iters),
                    basis, iters)

        iter_clock = time.perf_counter()
        in_basis = np.zeros(work.n, dtype=bool)
        in_basis[basis] = True
        nonbasic = np.flatnonzero(~in_basis & ~work.banned)

        cbar = reduced_costs(work, fact, basis, nonbasic)
        kidx = choose_column(cbar, nonbasic, rule, eps_opt, fact, work,
                             rng, use_bland)
        if kidx is None:
            return None, basis, iters
        k = int(nonbasic[kidx])

        u = fact.ftran(np.asarray(work.A[:, k].todense()).ravel())
        rt = ratio_test(x_b, u, basis)
        if rt is None:
            return (SolveOutcome(SolveStatus.UNBOUNDED, iterations=iters,
                                 message=f"unbounded along column {k}"),
                    basis, iters)
        ell, theta = rt
        iter_seconds = time.perf_counter() - iter_clock

        if observer is not None and phase == 2:
            state = SimplexState(lp=lp, A=work.A, basis=basis, nonbasic=nonbasic,
                                 x_basic=x_b, factorization=fact,
                                 iteration=iters, phase=phase,
                                 reduced_costs=cbar)
            observer(state, k, u, ell, theta, iter_seconds)

        post_clock = time.perf_counter()
        x_b = x_b - theta * u
        x_b[ell] = theta
        x_b = np.maximum(x_b, 0.0)
        basis[ell] = k

        if theta < DEGENERATE_STEP:
            degenerate_run += 1
            if degenerate_run >= BLAND_TRIGGER:
                use_bland = True
        else:
            degenerate_run = 0
            use_bland = False

        try:
            fact.update(ell, u)
            if fact.needs_refactor or not fact.accuracy_ok(work.A, basis, rng):
                fact = Factorization(work.A, basis)
                x_b = fact.ftran(work.b)
                x_b = np.maximum(x_b, 0.0)
        except SingularBasisError:
            try:
                fact = Factorization(work.A, basis)
                x_b = np.maximum(fact.ftran(work.b), 0.0)
            except SingularBasisError as e:
                return (SolveOutcome(SolveStatus.NUMERICAL_FAILURE,
                                     iterations=iters, message=str(e)),
                        basis, iters)
        iters += 1
        _ = time.perf_counter() - post_clock  # update time folds into next iter
