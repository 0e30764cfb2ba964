"""The p-clique index and global-threshold recursive bipartition.

A split of a node set into sides of sizes ``n1`` and ``n2`` joined by ``cut``
edges changes ``s^T C(p) s`` by ``-4 (cut - p n1 n2)``, so every quantity
below is computed from cuts and edge counts rather than from a dense ``C(p)``.
"""

from dataclasses import dataclass, field
from typing import List, Optional

import numpy as np

from .errors import ConvergenceError, InvalidArgumentError
from .graph import (Graph, Partition, as_nodeset, clique_score, require_pairs,
                    subgraph)
from .spectral import (SolverConfig, leading_eigenpair, pclique_operator,
                       require_converged)


def _check_p(p):
    if not 0.0 <= p <= 1.0:
        raise InvalidArgumentError(f"p must lie in [0, 1], got {p}")


def pclique_index(g, part, p):
    """Mean over ordered pairs ``i != j`` of the reward ``a_ij - p`` for pairs
    in the same community and ``p - a_ij`` for pairs that are separated."""
    require_pairs(g.n)
    _check_p(p)
    c = part.membership if isinstance(part, Partition) else np.asarray(part)
    if c.size != g.n:
        raise InvalidArgumentError("partition length differs from node count")
    n = g.n
    # ordered same-community pairs and the edges among them
    sizes = np.unique(c, return_counts=True)[1]
    same_pairs = int((sizes * (sizes - 1)).sum())
    e = g.edges()
    same_edges = 2 * int(np.count_nonzero(c[e[:, 0]] == c[e[:, 1]])) if len(e) else 0
    total_pairs = n * (n - 1)
    cross_pairs = total_pairs - same_pairs
    cross_edges = 2 * g.m - same_edges
    val = (same_edges - p * same_pairs) + (p * cross_pairs - cross_edges)
    return val / total_pairs


def sign_vector(v):
    """Round an eigenvector to +/-1; zero entries go to the +1 side."""
    return np.where(np.asarray(v) >= 0, 1, -1).astype(np.int8)


def _split_counts(g_sub, s):
    s = np.asarray(s)
    if s.size != g_sub.n:
        raise InvalidArgumentError("sign vector length differs from node count")
    pos = s > 0
    n1 = int(pos.sum())
    n2 = g_sub.n - n1
    x = pos.astype(np.float64)
    # edges between the two sides
    within_pos = x @ (g_sub.adjacency @ x)
    cut_edges = int(round(float(x @ g_sub.degrees) - within_pos))
    return n1, n2, cut_edges


def delta_d(g_sub, s, p, n_norm=None):
    """Change in the p-clique index from splitting ``g_sub`` along ``s``.

    ``n_norm`` is the size used in the ``1/(n(n-1))`` normalisation and
    defaults to ``g_sub.n``; only the sign matters to the recursion.
    """
    _check_p(p)
    n_norm = g_sub.n if n_norm is None else n_norm
    require_pairs(n_norm)
    n1, n2, cut_edges = _split_counts(g_sub, s)
    return 4.0 * (p * n1 * n2 - cut_edges) / (n_norm * (n_norm - 1))


def pclique_sum(g_sub, p):
    """``sum_{i != j} C(p)_ij = 2 m - p n (n - 1)``."""
    return 2.0 * g_sub.m - p * g_sub.n * (g_sub.n - 1)


@dataclass
class BipartitionResult:
    side_pos: np.ndarray
    side_neg: np.ndarray
    delta_d: float
    sum_c: float
    trivial: bool
    eigenvalue: float = float("nan")
    iterations: int = 0


def bipartition(g_sub, p, solver=None):
    """Split ``g_sub`` by the signs of the leading eigenvector of ``C(p)``.

    Raises :class:`ConvergenceError` when the eigensolver fails.
    """
    _check_p(p)
    solver = solver or SolverConfig()
    n = g_sub.n
    if n < 1:
        raise InvalidArgumentError("cannot bipartition an empty graph")
    sum_c = pclique_sum(g_sub, p)
    if n == 1:
        return BipartitionResult(np.array([0]), np.array([], dtype=np.int64),
                                 0.0, sum_c, True)
    res = require_converged(leading_eigenpair(pclique_operator(g_sub, p), solver),
                            "p-clique bipartition")
    s = sign_vector(res.vector)
    pos = np.flatnonzero(s > 0)
    neg = np.flatnonzero(s < 0)
    trivial = neg.size == 0 or pos.size == 0
    dd = 0.0 if trivial else delta_d(g_sub, s, p)
    return BipartitionResult(pos, neg, dd, sum_c, trivial, res.lam, res.iterations)


@dataclass(frozen=True)
class GlobalClusterConfig:
    p: float
    solver: SolverConfig = field(default_factory=SolverConfig)
    max_depth: int = 64

    def __post_init__(self):
        _check_p(self.p)


@dataclass
class ClusterResult:
    """Communities found by a divisive clusterer.

    ``forced_stop[k]`` marks community ``k`` as emitted without meeting the
    algorithm's own stopping rule (trivial split, depth cap, solver failure).
    """

    partition: Partition
    clique_scores: List[float]
    forced_stop: List[bool]
    communities: List[np.ndarray]

    @property
    def h(self):
        return self.partition.h


def cluster_global(g, cfg):
    """Recursive p-clique bipartition with one threshold ``cfg.p``.

    A subnetwork is split again while the split improves the index or its
    own clique score is still below ``p``.  Communities are numbered
    depth-first, left (``+1`` side) before right.
    """
    if isinstance(cfg, (int, float)):
        cfg = GlobalClusterConfig(float(cfg))
    if g.n < 1:
        raise InvalidArgumentError("empty graph")
    p = cfg.p
    communities, scores, forced = [], [], []

    def emit(nodes, h, flag):
        score = clique_score(h)
        communities.append(nodes)
        scores.append(score)
        forced.append(bool(flag and score < p))

    def recurse(nodes, h, depth):
        try:
            bp = bipartition(h, p, cfg.solver)
        except ConvergenceError:
            emit(nodes, h, True)
            return
        # sum_c >= 0 <=> clique score >= p
        assert (bp.sum_c >= 0) == (h.n < 2 or clique_score(h) >= p - 1e-12) \
            or abs(bp.sum_c) < 1e-9
        wants_split = bp.delta_d > 0 or bp.sum_c < 0
        if not wants_split:
            emit(nodes, h, False)
            return
        if bp.trivial or depth >= cfg.max_depth:
            emit(nodes, h, True)
            return
        for side in (bp.side_pos, bp.side_neg):
            child, _ = subgraph(h, side)
            recurse(nodes[side], child, depth + 1)

    recurse(np.arange(g.n), g, 0)
    part = Partition.from_communities(communities, g.n)
    return ClusterResult(part, scores, forced, [np.sort(c) for c in communities])
