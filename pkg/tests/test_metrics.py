"""Per-iteration metrics: dense references and lower-bound properties."""

import math

import numpy as np
import pytest
import scipy.sparse as sp

from qlpbench.lp import (
    MAXIMIZE,
    ROW_LE,
    LinearProgram,
    SparseMatrix,
    standardize,
)
from qlpbench.metrics import (
    INV_ESTIMATE,
    INV_EXACT,
    MetricsCollector,
    basis_sparsity,
    kappa_lower_bound,
    norm1_inverse,
    normalized_bounds,
)
from qlpbench.simplex import PivotRule, solve


class TestKappaLowerBound:
    def test_known_values(self):
        assert kappa_lower_bound(50.0, 10) == 5.0
        assert kappa_lower_bound(5.0, 10) == 1.0
        assert kappa_lower_bound(1.0, 1) == 1.0

    def test_nan_propagates_to_floor(self):
        assert kappa_lower_bound(math.nan, 4) == 1.0


class TestNorm1Inverse:
    def test_diagonal(self):
        v, method = norm1_inverse(sp.csc_matrix(np.diag([1.0, 2.0])))
        assert v == pytest.approx(1.0)
        assert method == INV_EXACT

    def test_upper_triangular(self):
        v, _ = norm1_inverse(sp.csc_matrix(np.array([[1.0, 1.0],
                                                     [0.0, 1.0]])))
        assert v == pytest.approx(2.0)

    def test_identity(self):
        v, _ = norm1_inverse(sp.identity(6, format="csc"))
        assert v == pytest.approx(1.0)

    def test_random_matches_dense_inverse(self):
        rng = np.random.default_rng(1)
        for _ in range(5):
            A = rng.random((8, 8)) + 8.0 * np.eye(8)
            v, method = norm1_inverse(sp.csc_matrix(A))
            ref = float(np.abs(np.linalg.inv(A)).sum(axis=0).max())
            assert v == pytest.approx(ref, rel=1e-8)
            assert method == INV_EXACT

    def test_estimator_above_threshold(self, monkeypatch):
        import qlpbench.metrics as metrics_mod
        monkeypatch.setattr(metrics_mod, "EXACT_INVERSE_LIMIT", 10)
        A = sp.diags(np.linspace(1.0, 3.0, 20)).tocsc()
        v, method = norm1_inverse(A)
        assert method == INV_ESTIMATE
        assert v == pytest.approx(1.0, rel=1e-6)


class TestNormalizedBounds:
    def _mk(self, norm1, d, max_abs):
        from qlpbench.metrics import IterationMetrics
        return IterationMetrics(
            iter=0, n=4, m=2, nnz_basis=2, d_c=d, d_r=d, d=d,
            basis_max_abs=max_abs, norm1_basis=norm1,
            norm1_basis_inv=1.0, norm1_inv_method=INV_EXACT,
            kappa1=norm1, kappa_lb=1.0, t_enter=0,
            max_abs_reduced_cost=0.0, c_max=0.0, t_u=0, u_norm2=0.0,
            classical_iter_seconds=1e-6)

    def test_worked_example(self):
        nb = normalized_bounds(self._mk(6.0, 2, 4.0))
        assert nb.norm1_hat_lb == pytest.approx(0.75)
        assert nb.norm_max_hat_lb == pytest.approx(0.5)

    def test_identity_basis(self):
        nb = normalized_bounds(self._mk(1.0, 1, 1.0))
        assert nb.norm1_hat_lb == 1.0 and nb.norm_max_hat_lb == 1.0

    def test_diagonal_case(self):
        nb = normalized_bounds(self._mk(3.0, 1, 3.0))
        assert nb.norm1_hat_lb == pytest.approx(1.0)

    def test_lower_bound_property_random_bases(self):
        # bounds must undershoot the true norms of A / ||A||_2
        rng = np.random.default_rng(4)
        for _ in range(20):
            n = int(rng.integers(2, 31))
            A = rng.random((n, n)) * (rng.random((n, n)) < 0.5)
            np.fill_diagonal(A, 1.0 + rng.random(n))
            spec = float(np.linalg.norm(A, 2))
            hat = A / spec
            csc = sp.csc_matrix(A)
            _, _, _, d = basis_sparsity(csc)
            norm1 = float(np.abs(A).sum(axis=0).max())
            max_abs = float(np.abs(A).max())
            from qlpbench.metrics import IterationMetrics
            m = self._mk(norm1, d, max_abs)
            nb = normalized_bounds(m)
            assert nb.norm1_hat_lb <= np.abs(hat).sum(axis=0).max() + 1e-9
            assert nb.norm_max_hat_lb <= np.abs(hat).max() + 1e-9

    def test_kappa_lb_below_spectral_condition(self):
        rng = np.random.default_rng(9)
        for _ in range(20):
            n = int(rng.integers(2, 31))
            A = rng.random((n, n)) + n * np.eye(n)
            v, _ = norm1_inverse(sp.csc_matrix(A))
            kappa1 = float(np.abs(A).sum(axis=0).max()) * v
            assert kappa_lower_bound(kappa1, n) <= np.linalg.cond(A, 2) + 1e-9


def _toy_lp():
    rng = np.random.default_rng(12)
    A = rng.random((6, 10))
    b = A.sum(axis=1)
    c = rng.random(10)
    return LinearProgram(c, SparseMatrix.from_scipy(sp.csc_matrix(A)), b,
                         sense=MAXIMIZE, row_types=[ROW_LE] * 6)


class TestCollect:
    def test_rows_and_invariants(self):
        std = standardize(_toy_lp())
        coll = MetricsCollector()
        out = solve(std, PivotRule.dantzig(), eps_opt=1e-9, observer=coll)
        assert coll.rows
        for r in coll.rows:
            assert r.kappa_lb >= 1.0
            assert r.kappa1 == pytest.approx(
                r.norm1_basis * r.norm1_basis_inv)
            assert 0 <= r.t_enter <= r.n - r.m
            assert 0 <= r.t_u <= r.m
            assert r.d <= r.m
            assert min(r.norm1_basis, r.u_norm2, r.basis_max_abs) >= 0.0
            assert r.classical_iter_seconds > 0.0

    def test_identity_basis_row(self):
        # first Phase-II basis of an all-slack-feasible LP is near-identity
        rng = np.random.default_rng(2)
        A = rng.random((4, 6))
        lp = LinearProgram(np.ones(6), SparseMatrix.from_scipy(
            sp.csc_matrix(A)), A.sum(axis=1), sense=MAXIMIZE,
            row_types=[ROW_LE] * 4)
        coll = MetricsCollector()
        solve(standardize(lp), eps_opt=1e-9, observer=coll)
        assert coll.rows

    def test_observer_does_not_change_trajectory(self):
        std = standardize(_toy_lp())
        coll = MetricsCollector()
        with_obs = solve(std, PivotRule.random(3), eps_opt=1e-9,
                         observer=coll)
        without = solve(std, PivotRule.random(3), eps_opt=1e-9)
        assert with_obs.iterations == without.iterations
        assert with_obs.objective == pytest.approx(without.objective)
        np.testing.assert_allclose(with_obs.x, without.x)
