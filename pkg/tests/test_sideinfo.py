import logging

import numpy as np
import pytest

import oracles
from semgraph import (AttributedGraph, WalkMatrix, attribute_cosine,
                      build_side_info, embed, modularity_matrix,
                      objective_grad_x, objective_grad_y, objective_value,
                      regularization_value, side_enhance, update_x, update_y)


def _graph(A, R, **kwargs):
    return AttributedGraph.from_dense(A, R, **kwargs)


def _triangle(attrs=None):
    A = np.ones((3, 3)) - np.eye(3)
    R = np.eye(3) if attrs is None else attrs
    return _graph(A, R)


class TestModularity:
    def test_triangle(self):
        Q = modularity_matrix(_triangle())
        assert np.allclose(Q - np.diag(np.diag(Q)),
                           (1 / 3) * (np.ones((3, 3)) - np.eye(3)))
        assert np.allclose(np.diag(Q), -2 / 3)

    def test_single_edge(self):
        A = np.array([[0.0, 1.0], [1.0, 0.0]])
        Q = modularity_matrix(_graph(A, np.ones((2, 1))))
        assert np.allclose(Q, [[-0.5, 0.5], [0.5, -0.5]])

    def test_row_sums_vanish(self):
        rng = np.random.default_rng(0)
        for _ in range(10):
            A, R0 = oracles.random_connected_graph(rng)
            g = _graph(A, R0)
            Q = modularity_matrix(g)
            assert np.abs(Q.sum(axis=1)).max() <= 1e-10
            assert np.allclose(Q, oracles.modularity_oracle(A), atol=1e-12)

    def test_edgeless_rejected(self):
        A = np.zeros((2, 2))
        g = _graph(A, np.ones((2, 1)))
        with pytest.raises(ValueError, match="edge"):
            modularity_matrix(g)


class TestAttributeCosine:
    def test_identical_rows(self):
        R = np.array([[1.0, 2.0], [1.0, 2.0]])
        A = np.array([[0.0, 1.0], [1.0, 0.0]])
        S = attribute_cosine(_graph(A, R))
        assert abs(S[0, 1] - 1.0) < 1e-12

    def test_disjoint_supports(self):
        R = np.array([[1.0, 0.0], [0.0, 1.0]])
        A = np.array([[0.0, 1.0], [1.0, 0.0]])
        assert attribute_cosine(_graph(A, R))[0, 1] == 0.0

    def test_half_overlap(self):
        R = np.array([[1.0, 1.0, 0.0], [0.0, 1.0, 1.0]])
        A = np.array([[0.0, 1.0], [1.0, 0.0]])
        assert abs(attribute_cosine(_graph(A, R))[0, 1] - 0.5) < 1e-12

    def test_zero_rows_zero_everywhere(self):
        A = np.zeros((3, 3))
        A[0, 1] = A[1, 0] = 1.0
        A[1, 2] = A[2, 1] = 1.0
        R = np.array([[1.0], [0.0], [0.0]])
        S = attribute_cosine(_graph(A, R))
        assert S[1, 1] == 0.0 and S[1, 0] == 0.0 and S[2, 2] == 0.0


class TestBuildSideInfo:
    def test_zero_lambdas_zero_laplacian(self):
        side = build_side_info(_triangle(), lambdas=(0.0, 0.0))
        assert not side.combined.any()

    def test_single_source_pads_attribute_rows(self):
        g = _triangle()
        side = build_side_info(g, lambdas=(1.0, 0.0))
        L = side.combined
        assert np.array_equal(L, side.laplacians[0])
        assert not L[g.n:, :].any() and not L[:, g.n:].any()

    def test_laplacian_kernel(self):
        rng = np.random.default_rng(1)
        for _ in range(10):
            A, R0 = oracles.random_connected_graph(rng)
            side = build_side_info(_graph(A, R0),
                                   lambdas=(rng.uniform(0, 2),
                                            rng.uniform(0, 2)))
            ones = np.ones(side.size)
            for L in side.laplacians:
                assert np.linalg.norm(L @ ones) <= 1e-10
                assert np.abs(L.sum(axis=1)).max() <= 1e-10
            assert np.linalg.norm(side.combined @ ones) <= 1e-10

    def test_similarity_blocks_symmetric_zero_padded(self):
        g = _triangle()
        side = build_side_info(g)
        for T in (side.t1, side.t2):
            assert np.array_equal(T, T.T)
            assert not T[g.n:, :].any()
        assert side.q_norm.shape == (g.n, g.n)
        assert side.q_norm.min() >= 0.0 and side.q_norm.max() <= 1.0

    def test_negative_lambda_rejected(self):
        with pytest.raises(ValueError):
            build_side_info(_triangle(), lambdas=(-1.0, 0.0))

    def test_two_weights_required(self):
        with pytest.raises(ValueError):
            build_side_info(_triangle(), lambdas=(1.0, 1.0, 1.0))


class TestRegularizationValue:
    def test_constant_rows_no_penalty(self):
        X = np.ones((4, 3))
        T = np.random.default_rng(2).random((4, 4))
        T = (T + T.T) / 2
        assert abs(regularization_value(X, T)) <= 1e-12

    def test_zero_similarity_no_penalty(self):
        X = np.random.default_rng(3).normal(size=(4, 2))
        assert regularization_value(X, np.zeros((4, 4))) == 0.0

    def test_trace_equals_pairwise_sum(self):
        rng = np.random.default_rng(4)
        for _ in range(10):
            X = rng.normal(size=(6, 3))
            T = rng.random((6, 6))
            T = (T + T.T) / 2
            ours = regularization_value(X, T)
            ref = oracles.pairwise_penalty(X, T)
            assert abs(ours - ref) <= 1e-8 * max(1.0, abs(ref))

    def test_asymmetric_rejected(self):
        X = np.zeros((2, 1))
        with pytest.raises(ValueError, match="symmetric"):
            regularization_value(X, np.array([[0.0, 1.0], [0.0, 0.0]]))


class TestUpdates:
    def test_identity_case(self):
        rng = np.random.default_rng(5)
        Z = rng.normal(size=(6, 6))
        Y, _ = np.linalg.qr(rng.normal(size=(6, 3)))
        got = update_x(Z, Y, np.zeros((6, 6)))
        assert np.allclose(got, Z @ Y / 2.0, atol=1e-10)

    def test_zero_target(self):
        Y = np.random.default_rng(6).normal(size=(5, 2))
        X = np.random.default_rng(7).normal(size=(5, 2))
        assert not update_x(np.zeros((5, 5)), Y, np.zeros((5, 5))).any()
        assert not update_y(np.zeros((5, 5)), X).any()

    def test_update_y_normal_equations(self):
        rng = np.random.default_rng(8)
        for _ in range(10):
            Z = rng.normal(size=(7, 7))
            X = rng.normal(size=(7, 3))  # full column rank a.s.
            Y = update_y(Z, X)
            resid = np.linalg.norm(Y @ (X.T @ X) - Z.T @ X)
            assert resid <= 1e-8 * (1.0 + np.linalg.norm(Z.T @ X))
            grad = objective_grad_y(Z, X, Y)
            assert np.linalg.norm(grad) <= 1e-8 * (
                1.0 + np.linalg.norm(Z.T @ X))

    def test_update_x_matches_literal_formula(self):
        rng = np.random.default_rng(9)
        for _ in range(10):
            size, k = 8, 3
            Z = rng.normal(size=(size, size))
            Y = rng.normal(size=(size, k))
            T = rng.random((size, size))
            T = (T + T.T) / 2
            L = np.diag(T.sum(axis=1)) - T
            ours = update_x(Z, Y, L)
            ref = oracles.regularized_x_oracle(Z, Y, L)
            assert np.abs(ours - ref).max() <= 1e-10

    def test_exact_least_squares_variant(self):
        rng = np.random.default_rng(10)
        Z = rng.normal(size=(6, 6))
        Y = rng.normal(size=(6, 2))
        X_ls = Z @ Y @ np.linalg.pinv(Y.T @ Y)
        resid = np.linalg.norm(X_ls @ (Y.T @ Y) - Z @ Y)
        assert resid <= 1e-8 * (1.0 + np.linalg.norm(Z @ Y))

    def test_non_finite_rejected(self):
        Z = np.full((2, 2), np.nan)
        with pytest.raises(ValueError):
            update_x(Z, np.zeros((2, 1)), np.zeros((2, 2)))
        with pytest.raises(ValueError):
            update_y(Z, np.zeros((2, 1)))


class TestGradients:
    def test_against_central_differences(self):
        rng = np.random.default_rng(11)
        for _ in range(12):
            size = int(rng.integers(3, 8))
            k = int(rng.integers(1, 4))
            Z = rng.normal(size=(size, size))
            X = rng.normal(size=(size, k))
            Y = rng.normal(size=(size, k))
            T = rng.random((size, size))
            T = (T + T.T) / 2
            L = np.diag(T.sum(axis=1)) - T

            def f_x(M):
                return (np.linalg.norm(Z - M @ Y.T) ** 2
                        + np.trace(M.T @ L @ M))

            def f_y(M):
                return np.linalg.norm(Z - X @ M.T) ** 2

            gx = objective_grad_x(Z, X, Y, L)
            gy = objective_grad_y(Z, X, Y)
            nx = oracles.numeric_grad(f_x, X)
            ny = oracles.numeric_grad(f_y, Y)
            assert np.linalg.norm(gx - nx) / np.linalg.norm(nx) <= 1e-5
            assert np.linalg.norm(gy - ny) / np.linalg.norm(ny) <= 1e-5


class TestSideEnhance:
    def _setup(self, lambdas=(1.0, 1.0)):
        rng = np.random.default_rng(12)
        A, R0 = oracles.random_connected_graph(rng, max_n=6, max_m=3)
        g = _graph(A, R0)
        from semgraph import build_hetero_adjacency, factorize, walk_matrix
        hetero = build_hetero_adjacency(g)
        walk = walk_matrix(hetero)
        model = factorize(walk, min(3, g.n + g.m))
        side = build_side_info(g, lambdas=lambdas)
        return g, walk, model, side

    def test_zero_lambda_normal_equations(self):
        _, walk, model, side = self._setup(lambdas=(0.0, 0.0))
        out = side_enhance(model, walk, side)
        Z, Y = walk.matrix, model.context
        k = model.dim
        resid = np.linalg.norm(out.vectors @ (Y.T @ Y + np.eye(k)) - Z @ Y)
        assert resid <= 1e-8 * (1.0 + np.linalg.norm(Z @ Y))

    def test_deterministic(self):
        _, walk, model, side = self._setup()
        a = side_enhance(model, walk, side)
        b = side_enhance(model, walk, side)
        assert np.array_equal(a.vectors, b.vectors)

    def test_objective_logged(self, caplog):
        _, walk, model, side = self._setup()
        with caplog.at_level(logging.INFO, logger="semgraph.sideinfo"):
            side_enhance(model, walk, side)
        assert "objective" in caplog.text

    def test_shape_mismatch_rejected(self):
        g, walk, model, side = self._setup()
        small = WalkMatrix(matrix=np.eye(2), volume=1.0,
                           degrees=np.ones(2), n=2, m=0, order=1,
                           negatives=1)
        with pytest.raises(ValueError, match="sizes disagree"):
            side_enhance(model, small, side)
        # an ablated model+walk pair covers only the n nodes, while the
        # side info built from g still covers all n+m entities
        from semgraph import build_hetero_adjacency, walk_matrix
        hetero_abl = build_hetero_adjacency(g, deltas=(0.0, 0.0, 0.0),
                                            attr_similarity=False)
        walk_abl = walk_matrix(hetero_abl)
        ablated = embed(g, dim=2, deltas=(0.0, 0.0, 0.0),
                        attr_similarity=False)
        assert side.size == g.n + g.m and g.m > 0
        with pytest.raises(ValueError, match="side info"):
            side_enhance(ablated, walk_abl, side)

    def test_iterations_validated(self):
        _, walk, model, side = self._setup()
        with pytest.raises(ValueError):
            side_enhance(model, walk, side, iterations=0)

    def test_multiple_iterations_run(self):
        _, walk, model, side = self._setup()
        out = side_enhance(model, walk, side, iterations=3)
        assert np.all(np.isfinite(out.vectors))

    def test_objective_value_includes_penalty(self):
        _, walk, model, side = self._setup()
        Z, X, Y = walk.matrix, model.vectors, model.context
        base = objective_value(Z, X, Y)
        full = objective_value(Z, X, Y, side)
        manual = base
        for lam, T in zip(side.lambdas, (side.t1, side.t2)):
            manual += lam * regularization_value(X, T)
        assert abs(full - manual) <= 1e-10 * max(1.0, abs(manual))
