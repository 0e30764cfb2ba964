import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from cliqueclust import (Graph, SolverConfig, SymmetricOperator, leading_eigenpair,
                         modularity_operator, pclique_operator)
from cliqueclust.errors import DegenerateInputError, InvalidArgumentError, NumericalError

from conftest import complete_graph
from oracles import (dense_adjacency, dense_modularity, dense_pclique, jacobi_eigh,
                     random_edges)


def dense_op(M):
    M = np.asarray(M, dtype=float)
    return SymmetricOperator(M.shape[0], lambda v: M @ v)


def assert_matches_dense(M, res, tol=1e-8):
    w, V = jacobi_eigh(M)
    scale = max(abs(w[0]), abs(w[-1]), 1.0)
    assert res.converged
    assert res.lam == pytest.approx(w[-1], abs=tol * scale)
    assert np.linalg.norm(res.vector) == pytest.approx(1.0, abs=1e-12)
    assert np.linalg.norm(M @ res.vector - res.lam * res.vector) <= tol * scale
    if w.size > 1 and w[-1] - w[-2] > 1e-3 * scale:
        assert min(np.linalg.norm(res.vector - V[:, -1]),
                   np.linalg.norm(res.vector + V[:, -1])) < 1e-6


def test_diagonal():
    res = leading_eigenpair(dense_op(np.diag([3.0, 1.0])))
    assert res.lam == pytest.approx(3.0)
    assert abs(res.vector[0]) == pytest.approx(1.0)


def test_largest_signed_not_magnitude():
    res = leading_eigenpair(dense_op(np.diag([-10.0, 2.0, 1.0, -3.0, 0.5])))
    assert res.lam == pytest.approx(2.0)


@pytest.mark.parametrize("n", [1, 2, 3, 7, 30, 100])
def test_all_ones(n):
    op = SymmetricOperator(n, lambda v: np.full(n, v.sum()))
    res = leading_eigenpair(op)
    assert res.lam == pytest.approx(n)
    assert np.allclose(res.vector, 1 / np.sqrt(n))


def test_random_symmetric_8x8(rng):
    M = rng.standard_normal((8, 8))
    M = M + M.T
    assert_matches_dense(M, leading_eigenpair(dense_op(M)))


def test_errors():
    with pytest.raises(InvalidArgumentError):
        leading_eigenpair(SymmetricOperator(0, lambda v: v))
    with pytest.raises(NumericalError):
        leading_eigenpair(SymmetricOperator(5, lambda v: np.full(5, np.nan)))
    with pytest.raises(InvalidArgumentError):
        SolverConfig(tol=0)
    with pytest.raises(InvalidArgumentError):
        SolverConfig(restart_dim=1)


def test_non_convergence_is_flagged(rng):
    M = np.diag(np.linspace(0, 1, 400))
    M[-1, -1] = 1.0 + 1e-9
    res = leading_eigenpair(dense_op(M), SolverConfig(max_iter=30, tol=1e-14))
    assert not res.converged
    assert res.iterations >= 30


def test_zero_operator():
    res = leading_eigenpair(SymmetricOperator(6, lambda v: np.zeros(6)))
    assert res.converged and res.lam == 0.0


def test_deterministic(rng):
    M = rng.standard_normal((40, 40))
    M = M + M.T
    a = leading_eigenpair(dense_op(M), SolverConfig(seed=3))
    b = leading_eigenpair(dense_op(M), SolverConfig(seed=3))
    assert a.lam == b.lam and np.array_equal(a.vector, b.vector)


def test_pclique_operator_examples(rng):
    op = pclique_operator(complete_graph(3), 0.5)
    assert np.allclose(op.matvec(np.ones(3)), 1.0)
    edges = random_edges(rng, 10, 0.4)
    g = Graph(10, edges)
    A = dense_adjacency(10, edges)
    v = rng.standard_normal(10)
    assert np.allclose(pclique_operator(g, 0.0).matvec(v), A @ v, atol=1e-12)
    assert np.allclose(pclique_operator(g, 0.3).matvec(v), dense_pclique(A, 0.3) @ v, atol=1e-12)
    with pytest.raises(InvalidArgumentError):
        pclique_operator(g, 1.5)


def test_modularity_operator_examples(rng):
    g = Graph(6, [(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (2, 3)])
    assert np.allclose(modularity_operator(g).matvec(np.ones(6)), 0.0, atol=1e-12)
    k2 = Graph(2, [(0, 1)])
    assert np.allclose(modularity_operator(k2).to_dense(), [[-0.5, 0.5], [0.5, -0.5]])
    assert np.allclose(modularity_operator(k2).matvec(np.array([1.0, -1.0])), [-1.0, 1.0])

    edges = random_edges(rng, 9, 0.45)
    g = Graph(9, edges)
    A = dense_adjacency(9, edges)
    subset = [0, 2, 3, 6, 8]
    v = rng.standard_normal(5)
    got = modularity_operator(g, subset).matvec(v)
    assert np.allclose(got, dense_modularity(A, subset) @ v, atol=1e-12)
    with pytest.raises(DegenerateInputError):
        modularity_operator(Graph(4))


def _self_adjoint(op, rng):
    u, v = rng.standard_normal(op.n), rng.standard_normal(op.n)
    norm = np.abs(op.to_dense()).sum(axis=1).max() + 1.0
    return abs(u @ op.matvec(v) - op.matvec(u) @ v) <= 1e-10 * norm * np.linalg.norm(u) * np.linalg.norm(v)


@settings(max_examples=30, deadline=None)
@given(st.integers(2, 14), st.floats(0, 1), st.integers(0, 2**32 - 1))
def test_operators_self_adjoint(n, p, seed):
    rng = np.random.default_rng(seed)
    g = Graph(n, random_edges(rng, n, 0.5))
    assert _self_adjoint(pclique_operator(g, p), rng)
    if g.m:
        assert _self_adjoint(modularity_operator(g), rng)
        sub = rng.choice(n, size=max(1, n // 2), replace=False)
        assert _self_adjoint(modularity_operator(g, sub), rng)


@settings(max_examples=25, deadline=None)
@given(st.integers(4, 25), st.floats(0.05, 0.95), st.integers(0, 2**32 - 1))
def test_shift_invariance(n, p, seed):
    """The mean-diagonal shift moves the eigenvalue but not the eigenvector."""
    rng = np.random.default_rng(seed)
    g = Graph(n, random_edges(rng, n, 0.5))
    op = pclique_operator(g, p)
    shift = (2 * g.m - p * n * (n - 1)) / n
    shifted = SymmetricOperator(n, lambda v: op.matvec(v) - shift * v)
    a, b = leading_eigenpair(op), leading_eigenpair(shifted)
    w = np.linalg.eigvalsh(op.to_dense())
    assert b.lam == pytest.approx(a.lam - shift, abs=1e-7 * max(1, abs(w).max()))
    if w[-1] - w[-2] > 1e-3:
        assert min(np.linalg.norm(a.vector - b.vector), np.linalg.norm(a.vector + b.vector)) < 1e-5


@settings(max_examples=25, deadline=None)
@given(st.integers(1, 20), st.integers(0, 2**32 - 1))
def test_rayleigh_lower_bound(n, seed):
    rng = np.random.default_rng(seed)
    M = rng.standard_normal((n, n))
    M = M + M.T
    res = leading_eigenpair(dense_op(M))
    u = rng.standard_normal(n)
    u /= np.linalg.norm(u)
    assert res.lam >= u @ M @ u - 1e-8 * np.abs(M).sum(axis=1).max()
