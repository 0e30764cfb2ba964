"""Matrix-free leading-eigenpair solver and the implicit operators it is used on.

The solver is a thick-restart (Krylov-Schur) Lanczos iteration with full
reorthogonalisation inside each cycle.  Ritz pairs are ranked by signed value,
so the largest *algebraic* eigenvalue is targeted directly.
"""

from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .errors import (ConvergenceError, DegenerateInputError,
                     InvalidArgumentError, NumericalError)
from .graph import as_nodeset, volume


@dataclass(frozen=True)
class SymmetricOperator:
    """A symmetric ``n x n`` matrix known only through ``matvec``."""

    n: int
    matvec: Callable[[np.ndarray], np.ndarray]
    name: str = "operator"

    def __matmul__(self, v):
        return self.matvec(v)

    def to_dense(self):
        """Materialise by applying the operator to the identity (tests, tiny n)."""
        out = np.empty((self.n, self.n))
        e = np.zeros(self.n)
        for j in range(self.n):
            e[j] = 1.0
            out[:, j] = self.matvec(e)
            e[j] = 0.0
        return out


@dataclass(frozen=True)
class SolverConfig:
    """Eigensolver settings.

    ``tol`` is relative to an operator-norm estimate (the largest absolute
    Ritz value seen).  ``max_iter`` counts matrix-vector products and
    defaults to ``10 n + 1000``; ``restart_dim`` defaults to ``min(n, 20)``.
    """

    tol: float = 1e-8
    max_iter: Optional[int] = None
    seed: int = 0
    restart_dim: Optional[int] = None

    def __post_init__(self):
        if not self.tol > 0:
            raise InvalidArgumentError(f"tol must be > 0, got {self.tol}")
        if self.restart_dim is not None and self.restart_dim < 2:
            raise InvalidArgumentError("restart_dim must be >= 2")
        if self.max_iter is not None and self.max_iter < 1:
            raise InvalidArgumentError("max_iter must be >= 1")


@dataclass(frozen=True)
class EigenResult:
    lam: float
    vector: np.ndarray
    residual: float
    iterations: int
    converged: bool
    norm_estimate: float = 0.0


def leading_eigenpair(op, cfg=None):
    """Largest (signed) eigenvalue of ``op`` and a unit eigenvector.

    The eigenvector sign is fixed so that its largest-magnitude entry is
    positive.  Ties inside a degenerate leading eigenspace resolve to
    whichever vector the iteration reaches.

    Never raises on non-convergence; check ``result.converged``.
    """
    cfg = cfg or SolverConfig()
    n = int(op.n)
    if n < 1:
        raise InvalidArgumentError("operator dimension must be >= 1")
    if n <= 3:
        return _dense_solve(op)
    m = min(n, cfg.restart_dim or 20)
    m = max(m, 2)
    max_iter = cfg.max_iter if cfg.max_iter is not None else 10 * n + 1000
    rng = np.random.default_rng(cfg.seed)

    V = np.empty((n, m + 1))
    H = np.zeros((m + 1, m))
    v0 = rng.standard_normal(n)
    V[:, 0] = v0 / np.linalg.norm(v0)
    k = 0
    nmv = 0
    normest = 0.0
    keep = max(1, min(m // 2, m - 1))
    while True:
        for j in range(k, m):
            w = _apply(op, V[:, j])
            nmv += 1
            h = V[:, :j + 1].T @ w
            w -= V[:, :j + 1] @ h
            h2 = V[:, :j + 1].T @ w
            w -= V[:, :j + 1] @ h2
            h += h2
            H[:j + 1, j] = h
            beta = np.linalg.norm(w)
            if beta <= 1e-12 * max(normest, np.abs(h).max(), 1e-300):
                # invariant subspace: continue with a fresh orthogonal direction
                w = _fresh_direction(rng, V[:, :j + 1])
                beta = 0.0
                if w is None:
                    H[j + 1:, :] = 0.0
                    return _finish(op, V[:, :j + 1], H[:j + 1, :j + 1], nmv, normest,
                                   cfg.tol, exact=True)
                V[:, j + 1] = w
            else:
                V[:, j + 1] = w / beta
            H[j + 1, j] = beta

        S = H[:m, :m]
        theta, Y = np.linalg.eigh(0.5 * (S + S.T))
        normest = max(normest, abs(theta[0]), abs(theta[-1]))
        beta_m = H[m, m - 1]
        res_est = abs(beta_m * Y[m - 1, -1])
        thresh = cfg.tol * max(normest, np.finfo(float).tiny)
        if res_est <= thresh or nmv >= max_iter:
            x = V[:, :m] @ Y[:, -1]
            x /= np.linalg.norm(x)
            mx = _apply(op, x)
            nmv += 1
            lam = float(x @ mx)
            res = float(np.linalg.norm(mx - lam * x))
            if res <= thresh or nmv >= max_iter:
                return EigenResult(lam, _fix_sign(x), res, nmv, res <= thresh, normest)
        # thick restart on the `keep` largest Ritz pairs
        idx = np.arange(m - keep, m)
        V[:, :keep] = V[:, :m] @ Y[:, idx]
        V[:, keep] = V[:, m]
        H[:] = 0.0
        H[:keep, :keep] = np.diag(theta[idx])
        H[keep, :keep] = beta_m * Y[m - 1, idx]
        k = keep


def _apply(op, v):
    w = np.asarray(op.matvec(v), dtype=np.float64)
    if not np.all(np.isfinite(w)):
        raise NumericalError(f"non-finite value in matvec of {op.name}")
    return w.copy()


def _fresh_direction(rng, Q):
    n, k = Q.shape
    if k >= n:
        return None
    for _ in range(5):
        w = rng.standard_normal(n)
        for _ in range(2):
            w -= Q @ (Q.T @ w)
        nw = np.linalg.norm(w)
        if nw > 1e-8:
            return w / nw
    return None


def _finish(op, Q, S, nmv, normest, tol, exact):
    theta, Y = np.linalg.eigh(0.5 * (S + S.T))
    normest = max(normest, abs(theta[0]), abs(theta[-1]))
    x = Q @ Y[:, -1]
    x /= np.linalg.norm(x)
    mx = _apply(op, x)
    lam = float(x @ mx)
    res = float(np.linalg.norm(mx - lam * x))
    ok = res <= tol * max(normest, np.finfo(float).tiny) or exact and res <= 1e-10 * max(normest, 1.0)
    return EigenResult(lam, _fix_sign(x), res, nmv + 1, bool(ok), normest)


def _dense_solve(op):
    M = op.to_dense()
    theta, Y = np.linalg.eigh(0.5 * (M + M.T))
    x = Y[:, -1]
    lam = float(theta[-1])
    res = float(np.linalg.norm(M @ x - lam * x))
    normest = float(max(abs(theta[0]), abs(theta[-1])))
    return EigenResult(lam, _fix_sign(x), res, op.n, True, normest)


def _fix_sign(x):
    i = int(np.argmax(np.abs(x)))
    return -x if x[i] < 0 else x


def require_converged(res, what="eigensolver"):
    if not res.converged:
        raise ConvergenceError(
            f"{what} did not converge after {res.iterations} matvecs "
            f"(residual {res.residual:.3g})", res.iterations, res.residual)
    return res


def pclique_operator(g, p):
    """``C(p) = A - p (J - I)`` applied as ``A v - p (sum(v) - v)``."""
    if not 0.0 <= p <= 1.0:
        raise InvalidArgumentError(f"p must lie in [0, 1], got {p}")
    A = g.adjacency
    p = float(p)

    def matvec(v):
        v = np.asarray(v, dtype=np.float64)
        return A @ v - p * (v.sum() - v)

    return SymmetricOperator(g.n, matvec, name=f"C({p:g})")


def modularity_operator(g, subset=None):
    """Newman modularity matrix ``B = A - d d^T / Vol``, or its generalised
    form restricted to ``subset``::

        B^S_ij = B_ij - delta_ij * sum_{l in S} B_il      (i, j in S)

    Degrees and volume always refer to the full graph ``g``.
    """
    vol = volume(g)
    if vol == 0:
        raise DegenerateInputError("modularity matrix of a graph with no edges")
    d = g.degrees.astype(np.float64)
    if subset is None:
        A = g.adjacency

        def matvec(v):
            v = np.asarray(v, dtype=np.float64)
            return A @ v - d * ((d @ v) / vol)

        return SymmetricOperator(g.n, matvec, name="B")

    s = as_nodeset(g, subset)
    if s.size == 0:
        raise InvalidArgumentError("empty subset")
    A = g.adjacency[s][:, s].tocsr()
    ds = d[s]
    rowsum = np.asarray(A.sum(axis=1)).ravel() - ds * (ds.sum() / vol)

    def matvec(v):
        v = np.asarray(v, dtype=np.float64)
        return A @ v - ds * ((ds @ v) / vol) - rowsum * v

    return SymmetricOperator(s.size, matvec, name="B^S")
