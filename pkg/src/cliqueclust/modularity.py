"""Leading-eigenvector modularity maximisation, the comparison baseline."""

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .clique import ClusterResult, sign_vector
from .errors import DegenerateInputError, InvalidArgumentError
from .graph import Partition, clique_score, subgraph, volume
from .spectral import SolverConfig, leading_eigenpair, modularity_operator


def modularity_score(g, part):
    """``Q = sum_k [ m_k / m - (Vol_k / Vol)^2 ]`` for any number of communities."""
    vol = volume(g)
    if vol == 0:
        raise DegenerateInputError("modularity of a graph with no edges")
    c = part.membership if isinstance(part, Partition) else Partition.from_labels(part).membership
    if c.size != g.n:
        raise InvalidArgumentError("partition length differs from node count")
    e = g.edges()
    h = c.max() + 1
    internal = np.bincount(c[e[:, 0]][c[e[:, 0]] == c[e[:, 1]]], minlength=h)
    vols = np.bincount(c, weights=g.degrees, minlength=h)
    return float((2.0 * internal / vol - (vols / vol) ** 2).sum())


@dataclass(frozen=True)
class ModularityConfig:
    """``eig_zero_tol`` is relative to the solver's operator-norm estimate.

    ``require_gain`` additionally rejects a split whose modularity change is
    not positive.
    """

    solver: SolverConfig = field(default_factory=SolverConfig)
    eig_zero_tol: float = 1e-9
    max_depth: int = 64
    require_gain: bool = True

    def __post_init__(self):
        if not self.eig_zero_tol > 0:
            raise InvalidArgumentError("eig_zero_tol must be > 0")


def _split_gain(g, nodes, s):
    """``s^T B^S s`` for the generalised modularity matrix of ``nodes``."""
    op = modularity_operator(g, nodes)
    x = s.astype(np.float64)
    return float(x @ op.matvec(x))


def cluster_modularity(g, cfg=None):
    cfg = cfg or ModularityConfig()
    if g.n < 1:
        raise InvalidArgumentError("empty graph")
    communities, forced = [], []
    if volume(g) == 0:
        communities = [np.arange(g.n)]
        part = Partition.from_communities(communities, g.n)
        return ClusterResult(part, [clique_score(g)], [False], communities)

    def recurse(nodes, depth):
        if nodes.size < 2:
            communities.append(nodes)
            forced.append(False)
            return
        res = leading_eigenpair(modularity_operator(g, nodes), cfg.solver)
        if res.lam <= cfg.eig_zero_tol * max(res.norm_estimate, 1.0):
            communities.append(nodes)
            forced.append(not res.converged)
            return
        s = sign_vector(res.vector)
        pos, neg = nodes[s > 0], nodes[s < 0]
        if pos.size == 0 or neg.size == 0:
            communities.append(nodes)
            forced.append(False)
            return
        if cfg.require_gain and _split_gain(g, nodes, s) <= 0:
            communities.append(nodes)
            forced.append(False)
            return
        if depth >= cfg.max_depth:
            communities.append(nodes)
            forced.append(True)
            return
        recurse(pos, depth + 1)
        recurse(neg, depth + 1)

    recurse(np.arange(g.n), 0)
    part = Partition.from_communities(communities, g.n)
    scores = [clique_score(g, c) for c in communities]
    return ClusterResult(part, scores, forced, [np.sort(c) for c in communities])
