"""Localized thresholds and the tree-structured clustering built on them.

Each subnetwork gets its own threshold: the largest ``p`` at which an
Erdos-Renyi graph with the subnetwork's observed density is unlikely (at
level ``alpha``) to shed more than ``alpha n`` nodes.  The split at a tree
node is kept iff the cross-side link density is below that threshold.
"""

from dataclasses import dataclass, field
from math import sqrt
from statistics import NormalDist
from typing import List, Optional

import numpy as np

from .errors import (ConvergenceError, DegenerateInputError,
                     InvalidArgumentError)
from .graph import Graph, Partition, clique_score, require_pairs, subgraph
from .clique import _split_counts, sign_vector
from .spectral import (SolverConfig, leading_eigenpair, pclique_operator,
                       require_converged)

_STD_NORMAL = NormalDist()


@dataclass(frozen=True)
class ThresholdParams:
    alpha: float
    z_alpha: float
    phi_z: float
    xi: float

    @property
    def truncation(self):
        """``phi(z_alpha) / (1 - alpha)``: the inverse Mills ratio at ``z_alpha``."""
        return self.phi_z / (1.0 - self.alpha)

    @property
    def variance_factor(self):
        r = self.truncation
        return 1.0 - self.z_alpha * r - r * r


def make_threshold_params(alpha):
    """Constants for a type-I tolerance ``alpha``.

    ``xi`` folds the truncated-normal mean shift and ``z_alpha`` standard
    deviations of the truncated variance into one multiplier of
    ``sqrt(p0 (1 - p0) / ((1 - alpha) n))``.
    """
    if not 1e-8 < alpha <= 0.5:
        raise InvalidArgumentError(f"alpha must lie in (1e-8, 0.5], got {alpha}")
    z = _STD_NORMAL.inv_cdf(1.0 - alpha)
    phi = _STD_NORMAL.pdf(z)
    r = phi / (1.0 - alpha)
    bracket = 1.0 - z * r - r * r
    if bracket < 0:
        raise InvalidArgumentError(f"negative truncated variance for alpha={alpha}")
    return ThresholdParams(alpha, z, phi, r + z * sqrt(bracket))


def _params(tp):
    return tp if isinstance(tp, ThresholdParams) else make_threshold_params(tp)


@dataclass(frozen=True)
class TruncatedNormalMoments:
    mean: float
    variance: float
    p0: float
    n: int
    alpha: float


def truncated_moments(p0, n, alpha):
    """Mean and variance of the cross density after the top ``alpha`` tail
    of a normal approximation is cut off."""
    if not 0.0 < p0 < 1.0:
        raise DegenerateInputError(f"p0 must lie strictly in (0, 1), got {p0}")
    require_pairs(n)
    tp = _params(alpha)
    base = p0 * (1.0 - p0) / ((1.0 - tp.alpha) * n)
    mean = p0 - tp.truncation * sqrt(base)
    var = base * tp.variance_factor
    return TruncatedNormalMoments(mean, var, p0, n, tp.alpha)


def upper_threshold(p0, n, tp):
    """``max(0, p0 - xi sqrt(p0 (1 - p0) / ((1 - alpha) n)))``."""
    if not 0.0 <= p0 <= 1.0:
        raise InvalidArgumentError(f"p0 must lie in [0, 1], got {p0}")
    require_pairs(n)
    tp = _params(tp)
    return max(0.0, p0 - tp.xi * sqrt(p0 * (1.0 - p0) / ((1.0 - tp.alpha) * n)))


def lower_threshold(p12, n1, n2, beta=0.025):
    """Smallest ``p`` at which two Erdos-Renyi blocks with cross density
    ``p12`` are both kept apart at level ``beta``.

    Needs ``p12``, which is unknown in practice, so this is diagnostic only.
    """
    if not 0.0 <= p12 < 1.0:
        raise InvalidArgumentError(f"p12 must lie in [0, 1), got {p12}")
    if n1 < 1 or n2 < 1:
        raise InvalidArgumentError("block sizes must be >= 1")
    if not 0.0 < beta < 0.5:
        raise InvalidArgumentError(f"beta must lie in (0, 0.5), got {beta}")
    z = _STD_NORMAL.inv_cdf(1.0 - beta)
    return p12 + z * sqrt(p12 * (1.0 - p12) / (n1 * n2))


def local_threshold(g_sub, tp):
    require_pairs(g_sub.n)
    return upper_threshold(clique_score(g_sub), g_sub.n, tp)


def split_gain(g_sub, s, p_v):
    """Unnormalised split score at a tree node and the score of not splitting.

    ``gain = sum_{i != j} (a_ij - p_v) [same side] + (p_v - a_ij) [opposite]``
    and ``no_split = sum_{i != j} (a_ij - p_v)``; their difference is
    ``4 (p_v n1 n2 - cut)``.
    """
    n = g_sub.n
    n1, n2, cut_edges = _split_counts(g_sub, s)
    no_split = 2.0 * g_sub.m - p_v * n * (n - 1)
    gain = no_split + 4.0 * (p_v * n1 * n2 - cut_edges)
    return gain, no_split


@dataclass
class TreeNode:
    """A node of the clustering tree; leaves are the communities."""

    members: np.ndarray
    p_obs: float
    p_v: Optional[float] = None
    gain: Optional[float] = None
    no_split: Optional[float] = None
    children: List["TreeNode"] = field(default_factory=list)
    forced_stop: bool = False

    @property
    def is_leaf(self):
        return not self.children

    @property
    def kind(self):
        return "leaf" if self.is_leaf else "internal"

    @property
    def size(self):
        return int(self.members.size)

    def to_dict(self):
        d = {"kind": self.kind, "size": self.size, "p_obs": self.p_obs,
             "p_v": self.p_v, "gain": self.gain}
        if self.is_leaf:
            d["members"] = sorted(int(i) for i in self.members)
        else:
            d["children"] = [c.to_dict() for c in self.children]
        return d

    @classmethod
    def from_dict(cls, d):
        children = [cls.from_dict(c) for c in d.get("children", [])]
        if d["kind"] == "leaf":
            members = np.asarray(d["members"], dtype=np.int64)
        else:
            if len(children) != 2:
                raise InvalidArgumentError("internal tree node needs two children")
            members = np.sort(np.concatenate([c.members for c in children]))
        if members.size != d["size"]:
            raise InvalidArgumentError("tree node size does not match its members")
        return cls(members, d["p_obs"], d.get("p_v"), d.get("gain"), None, children)


@dataclass
class ClusterTree:
    root: TreeNode
    n: int

    def leaves(self):
        """Leaves in left-to-right order."""
        out, stack = [], [self.root]
        while stack:
            node = stack.pop()
            if node.is_leaf:
                out.append(node)
            else:
                stack.extend(reversed(node.children))
        return out

    def internal_nodes(self):
        out, stack = [], [self.root]
        while stack:
            node = stack.pop()
            if not node.is_leaf:
                out.append(node)
                stack.extend(reversed(node.children))
        return out

    def partition(self):
        return Partition.from_communities([leaf.members for leaf in self.leaves()], self.n)

    def to_dict(self):
        return self.root.to_dict()

    @classmethod
    def from_dict(cls, d):
        root = TreeNode.from_dict(d)
        return cls(root, root.size)


@dataclass(frozen=True)
class LocalClusterConfig:
    alpha: float = 0.025
    solver: SolverConfig = field(default_factory=SolverConfig)
    max_depth: int = 64

    def __post_init__(self):
        if not 0.0 < self.alpha < 0.5:
            raise InvalidArgumentError(f"alpha must lie in (0, 0.5), got {self.alpha}")


def cluster_localized(g, cfg=None):
    """Build the clustering tree with a fresh threshold at every subnetwork."""
    cfg = cfg or LocalClusterConfig()
    if g.n < 1:
        raise InvalidArgumentError("empty graph")
    tp = make_threshold_params(cfg.alpha)

    def build(nodes, h, depth):
        node = TreeNode(nodes, clique_score(h))
        if h.n < 2:
            return node
        p_v = local_threshold(h, tp)
        node.p_v = p_v
        # p_v <= p_obs keeps the no-split score non-negative
        assert 2.0 * h.m - p_v * h.n * (h.n - 1) >= -1e-9
        try:
            res = require_converged(
                leading_eigenpair(pclique_operator(h, p_v), cfg.solver),
                "localized bipartition")
        except ConvergenceError:
            node.forced_stop = True
            return node
        s = sign_vector(res.vector)
        node.gain, node.no_split = split_gain(h, s, p_v)
        pos = np.flatnonzero(s > 0)
        neg = np.flatnonzero(s < 0)
        if node.gain <= node.no_split or neg.size == 0 or pos.size == 0:
            return node
        if depth >= cfg.max_depth:
            node.forced_stop = True
            return node
        for side in (pos, neg):
            child, _ = subgraph(h, side)
            node.children.append(build(nodes[side], child, depth + 1))
        return node

    return ClusterTree(build(np.arange(g.n), g, 0), g.n)


def local_clique_index(tree, n=None):
    """Sum of the recorded split scores of the internal nodes over ``n(n-1)``."""
    n = tree.n if n is None else n
    require_pairs(n)
    return sum(v.gain for v in tree.internal_nodes()) / (n * (n - 1))
