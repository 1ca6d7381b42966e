"""Per-iteration logging of the quantities the gate-count bounds consume.

A ``MetricsCollector`` plugs into the simplex observer hook and records one
``IterationMetrics`` row per Phase-II iteration: basis sparsity and norms, a
condition-number lower bound, reduced-cost statistics under the unit-basic-cost
normalization, and the ratio-test profile of the chosen column.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla

EXACT_INVERSE_LIMIT = 2000
IMPROVING_TOL_DEFAULT = 1e-3
U_POS_TOL = 1e-9

INV_EXACT = "exact"
INV_ESTIMATE = "estimate"
INV_UNAVAILABLE = "unavailable"


@dataclass(frozen=True)
class IterationMetrics:
    iter: int
    n: int                      # columns visible to pricing (nonbasic + m)
    m: int
    nnz_basis: int
    d_c: int                    # max nonzeros in a basis column
    d_r: int                    # max nonzeros in a basis row
    d: int                      # max(d_c, d_r)
    basis_max_abs: float
    norm1_basis: float
    norm1_basis_inv: float      # nan when unavailable
    norm1_inv_method: str       # exact | estimate | unavailable
    kappa1: float               # nan when unavailable
    kappa_lb: float
    t_enter: int                # improving columns under normalized costs
    max_abs_reduced_cost: float
    c_max: float                # max nonbasic |c_l| after ||c_B||_2 = 1 scaling
    t_u: int                    # positive components of u = A_B^-1 A_k
    u_norm2: float
    classical_iter_seconds: float


@dataclass(frozen=True)
class NormalizedBounds:
    norm1_hat_lb: float
    norm_max_hat_lb: float


def kappa_lower_bound(kappa1: float, m: int) -> float:
    if m < 1:
        raise ValueError("m must be >= 1")
    if math.isnan(kappa1):
        return 1.0
    return max(1.0, kappa1 / m)


def norm1_inverse(A_B: sp.csc_matrix) -> tuple[float, str]:
    """||A_B^-1||_1: exact column-wise below EXACT_INVERSE_LIMIT, the
    Hager-Higham estimator above it."""
    m = A_B.shape[0]
    try:
        lu = spla.splu(A_B.tocsc())
        if m <= EXACT_INVERSE_LIMIT:
            inv = lu.solve(np.eye(m))
            if not np.all(np.isfinite(inv)):
                return math.nan, INV_UNAVAILABLE
            return float(np.abs(inv).sum(axis=0).max()), INV_EXACT
        op = spla.LinearOperator(
            (m, m), matvec=lu.solve,
            rmatvec=lambda v: lu.solve(v, trans="T"))
        return float(spla.onenormest(op)), INV_ESTIMATE
    except (RuntimeError, ValueError, ArithmeticError):
        return math.nan, INV_UNAVAILABLE


def basis_sparsity(A_B: sp.csc_matrix) -> tuple[int, int, int, int]:
    """(nnz, d_c, d_r, d) of the basis matrix."""
    csc = A_B.tocsc()
    nnz = int(csc.nnz)
    col_counts = np.diff(csc.indptr)
    row_counts = np.bincount(csc.indices, minlength=csc.shape[0])
    d_c = int(col_counts.max(initial=0))
    d_r = int(row_counts.max(initial=0))
    return nnz, d_c, d_r, max(d_c, d_r)


def normalized_bounds(metrics: IterationMetrics) -> NormalizedBounds:
    """Lower bounds on the norms of the row-and-column normalized basis."""
    if metrics.d < 1 or metrics.basis_max_abs <= 0:
        raise ValueError("need d >= 1 and a nonzero basis")
    return NormalizedBounds(
        norm1_hat_lb=metrics.norm1_basis / (metrics.d * metrics.basis_max_abs),
        norm_max_hat_lb=1.0 / metrics.d,
    )


def collect(state, k: int, u: np.ndarray, iter_seconds: float,
            improving_tol: float = IMPROVING_TOL_DEFAULT) -> IterationMetrics:
    """Build one metrics row from the observer arguments.

    Reads solver state only; never mutates it. Reduced-cost statistics are
    taken under the scaling that makes ||c_B||_2 = 1.
    """
    basis = state.basis
    m = len(basis)
    A_B = state.A[:, basis].tocsc()
    nnz, d_c, d_r, d = basis_sparsity(A_B)
    basis_max_abs = float(np.abs(A_B.data).max(initial=0.0))
    norm1_basis = float(np.abs(A_B).sum(axis=0).max()) if nnz else 0.0

    inv_norm, method = norm1_inverse(A_B)
    if method == INV_UNAVAILABLE:
        kappa1 = math.nan
    else:
        kappa1 = norm1_basis * inv_norm

    n_cols = state.lp.num_cols
    c_full = np.zeros(state.A.shape[1])
    c_full[:n_cols] = state.lp.c
    scale = float(np.linalg.norm(c_full[basis]))
    if scale == 0.0:
        scale = 1.0

    cbar = state.reduced_costs / scale
    nonbasic = state.nonbasic
    c_max = float(np.abs(c_full[nonbasic] / scale).max(initial=0.0))

    return IterationMetrics(
        iter=state.iteration,
        n=len(nonbasic) + m,
        m=m,
        nnz_basis=nnz,
        d_c=d_c,
        d_r=d_r,
        d=d,
        basis_max_abs=basis_max_abs,
        norm1_basis=norm1_basis,
        norm1_basis_inv=inv_norm,
        norm1_inv_method=method,
        kappa1=kappa1,
        kappa_lb=kappa_lower_bound(kappa1, m),
        t_enter=int(np.count_nonzero(cbar < -improving_tol)),
        max_abs_reduced_cost=float(np.abs(cbar).max(initial=0.0)),
        c_max=c_max,
        t_u=int(np.count_nonzero(u > U_POS_TOL)),
        u_norm2=float(np.linalg.norm(u)),
        classical_iter_seconds=iter_seconds,
    )


class MetricsCollector:
    """Observer accumulating one IterationMetrics per Phase-II iteration."""

    def __init__(self, improving_tol: float = IMPROVING_TOL_DEFAULT):
        self.improving_tol = improving_tol
        self.rows: list[IterationMetrics] = []

    def __call__(self, state, k, u, ell, theta, iter_seconds):
        self.rows.append(collect(state, k, u, iter_seconds,
                                 improving_tol=self.improving_tol))
