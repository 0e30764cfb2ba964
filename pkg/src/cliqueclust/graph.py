"""Undirected simple graphs and the invariants the clustering code is built on.

Nodes are dense integers ``0..n-1``.  The adjacency is held as a CSR matrix
whose rows are the sorted neighbour lists, so memory stays ``O(n + m)``.
"""

from dataclasses import dataclass, field
from math import comb

import numpy as np
import scipy.sparse as sp

from .errors import DegenerateInputError, InvalidArgumentError, InvalidNodeError


class Graph:
    """Immutable undirected graph without self-loops or multi-edges.

    Parameters
    ----------
    n : int
        Number of nodes.
    edges : iterable of (int, int)
        Unordered node pairs.  Duplicates (in either orientation) collapse to
        one edge; self-loops are rejected.
    """

    __slots__ = ("_n", "_adj", "_deg", "_m")

    def __init__(self, n, edges=()):
        n = int(n)
        if n < 0:
            raise InvalidArgumentError(f"node count must be >= 0, got {n}")
        e = np.asarray(list(edges) if not isinstance(edges, np.ndarray) else edges,
                       dtype=np.int64).reshape(-1, 2)
        if e.size:
            if e.min() < 0 or e.max() >= n:
                bad = e[(e < 0) | (e >= n)][0]
                raise InvalidNodeError(f"node {bad} out of range for n={n}")
            if np.any(e[:, 0] == e[:, 1]):
                i = int(e[e[:, 0] == e[:, 1]][0, 0])
                raise InvalidArgumentError(f"self-loop on node {i}")
        self._set_adjacency(n, _symmetric_csr(n, e))

    def _set_adjacency(self, n, adj):
        self._n = n
        self._adj = adj
        self._deg = np.diff(adj.indptr).astype(np.int64)
        self._m = int(self._deg.sum()) // 2

    @classmethod
    def from_csr(cls, adj):
        """Wrap a symmetric 0/1 CSR matrix with empty diagonal (not copied)."""
        g = cls.__new__(cls)
        g._set_adjacency(adj.shape[0], adj)
        return g

    @property
    def n(self):
        return self._n

    @property
    def m(self):
        """Number of (undirected) edges."""
        return self._m

    @property
    def adjacency(self):
        """CSR adjacency with float64 unit entries; treat as read-only."""
        return self._adj

    @property
    def degrees(self):
        return self._deg

    def neighbors(self, i):
        self._check_node(i)
        a = self._adj
        return a.indices[a.indptr[i]:a.indptr[i + 1]]

    def edges(self):
        """Edges as an ``(m, 2)`` array with ``u < v``, lexicographically sorted."""
        coo = sp.triu(self._adj, k=1).tocoo()
        e = np.column_stack([coo.row, coo.col]).astype(np.int64)
        return e[np.lexsort((e[:, 1], e[:, 0]))]

    def has_edge(self, i, j):
        return bool(np.isin(j, self.neighbors(i)))

    def to_dense(self):
        return self._adj.toarray()

    def _check_node(self, i):
        if not 0 <= i < self._n:
            raise InvalidNodeError(f"node {i} out of range for n={self._n}")

    def __repr__(self):
        return f"Graph(n={self._n}, m={self._m})"


def _symmetric_csr(n, e):
    if len(e):
        e = np.sort(e, axis=1)
        e = np.unique(e, axis=0)
    rows = np.concatenate([e[:, 0], e[:, 1]])
    cols = np.concatenate([e[:, 1], e[:, 0]])
    adj = sp.csr_array((np.ones(len(rows)), (rows, cols)), shape=(n, n))
    adj.sort_indices()
    return adj


def as_nodeset(g, s):
    """Validate ``s`` as a duplicate-free array of node ids of ``g``."""
    s = np.asarray(s, dtype=np.int64).ravel()
    if s.size:
        if s.min() < 0 or s.max() >= g.n:
            bad = s[(s < 0) | (s >= g.n)][0]
            raise InvalidNodeError(f"node {bad} out of range for n={g.n}")
        if np.unique(s).size != s.size:
            raise InvalidArgumentError("node set contains duplicates")
    return s


def degree(g, i):
    g._check_node(i)
    return int(g.degrees[i])


def volume(g):
    """Sum of degrees, i.e. twice the edge count."""
    return int(g.degrees.sum())


def internal_edges(g, s):
    """Number of edges with both ends in ``s``."""
    s = as_nodeset(g, s)
    mask = np.zeros(g.n, dtype=bool)
    mask[s] = True
    return _internal_edges_mask(g, mask)


def _internal_edges_mask(g, mask):
    x = mask.astype(np.float64)
    return int(round(x @ (g.adjacency @ x))) // 2


def cut(g, s1, s2):
    """Number of edges with one end in ``s1`` and the other in ``s2``."""
    s1 = as_nodeset(g, s1)
    s2 = as_nodeset(g, s2)
    x = np.zeros(g.n)
    y = np.zeros(g.n)
    x[s1] = 1.0
    y[s2] = 1.0
    if np.any(x * y):
        raise InvalidArgumentError("cut requires disjoint node sets")
    return int(round(x @ (g.adjacency @ y)))


def clique_score(g, s=None):
    """Internal edge count of ``s`` over ``C(|s|, 2)``; a singleton scores 1.

    ``s=None`` means the whole graph.
    """
    if s is None:
        k, e = g.n, g.m
    else:
        s = as_nodeset(g, s)
        k, e = s.size, internal_edges(g, s)
    if k == 0:
        raise InvalidArgumentError("clique score of an empty node set")
    if k == 1:
        return 1.0
    return e / comb(k, 2)


def subgraph(g, s):
    """Induced subgraph on ``s``.

    Returns ``(h, labels)`` where node ``k`` of ``h`` is ``labels[k]`` in ``g``.
    The order of ``s`` is preserved.
    """
    s = as_nodeset(g, s)
    sub = g.adjacency[s][:, s]
    sub = sp.csr_array(sub)
    sub.sort_indices()
    return Graph.from_csr(sub), s


@dataclass(frozen=True)
class Partition:
    """Assignment of every node to one of ``h`` non-empty communities.

    Community labels are always ``0..h-1``; use :meth:`from_labels` to
    canonicalise arbitrary labels (first-appearance order).
    """

    membership: np.ndarray
    sizes: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        c = np.asarray(self.membership, dtype=np.int64).ravel()
        if c.size and c.min() < 0:
            raise InvalidArgumentError("community labels must be >= 0")
        sizes = np.bincount(c) if c.size else np.zeros(0, dtype=np.int64)
        if np.any(sizes == 0):
            missing = int(np.flatnonzero(sizes == 0)[0])
            raise InvalidArgumentError(f"community {missing} is empty")
        c.setflags(write=False)
        sizes.setflags(write=False)
        object.__setattr__(self, "membership", c)
        object.__setattr__(self, "sizes", sizes)

    @classmethod
    def from_labels(cls, labels):
        _, first, inv = np.unique(np.asarray(labels), return_index=True,
                                  return_inverse=True)
        # relabel by first appearance
        order = np.argsort(np.argsort(first))
        return cls(order[inv.ravel()])

    @classmethod
    def from_communities(cls, communities, n):
        c = np.full(n, -1, dtype=np.int64)
        for k, members in enumerate(communities):
            members = np.asarray(members, dtype=np.int64)
            if np.any(c[members] >= 0):
                raise InvalidArgumentError("communities overlap")
            c[members] = k
        if np.any(c < 0):
            raise InvalidArgumentError(
                f"node {int(np.flatnonzero(c < 0)[0])} is in no community")
        return cls(c)

    @property
    def n(self):
        return self.membership.size

    @property
    def h(self):
        return self.sizes.size

    def communities(self):
        """Sorted member arrays, one per community."""
        order = np.argsort(self.membership, kind="stable")
        return np.split(order, np.cumsum(self.sizes)[:-1])

    def __len__(self):
        return self.n

    def __eq__(self, other):
        return (isinstance(other, Partition)
                and np.array_equal(self.membership, other.membership))

    def __hash__(self):
        return hash(self.membership.tobytes())


def require_pairs(n):
    if n < 2:
        raise DegenerateInputError(f"need at least 2 nodes, got {n}")
