"""Stochastic blockmodel specs and seeded benchmark generation."""

import json
from dataclasses import dataclass
from math import comb

import numpy as np
import scipy.sparse as sp

from .errors import InvalidArgumentError
from .graph import Graph, Partition


@dataclass(frozen=True)
class BlockModelSpec:
    """Community sizes and the symmetric matrix of block link probabilities."""

    sizes: tuple
    B: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "sizes", tuple(int(k) for k in self.sizes))
        object.__setattr__(self, "B", np.asarray(self.B, dtype=np.float64))

    @property
    def h(self):
        return len(self.sizes)

    @property
    def n(self):
        return sum(self.sizes)

    def labels(self):
        return np.repeat(np.arange(self.h), self.sizes)

    def to_dict(self):
        return {"sizes": list(self.sizes), "B": self.B.tolist()}

    @classmethod
    def from_dict(cls, d):
        try:
            return cls(d["sizes"], d["B"])
        except (KeyError, TypeError, ValueError) as exc:
            raise InvalidArgumentError(f"malformed block model spec: {exc}") from exc

    @classmethod
    def load(cls, path):
        with open(path, encoding="utf-8") as fh:
            return cls.from_dict(json.load(fh))


def validate_spec(spec):
    """List every violated invariant; an empty list means the spec is valid."""
    errors = []
    sizes, B = spec.sizes, spec.B
    h = len(sizes)
    if h == 0:
        errors.append("no communities")
    for k, nk in enumerate(sizes):
        if nk < 1:
            errors.append(f"community {k} has size {nk} < 1")
    if B.shape != (h, h):
        errors.append(f"B has shape {B.shape}, expected ({h}, {h})")
        return errors
    if not np.all(np.isfinite(B)) or np.any(B < 0) or np.any(B > 1):
        errors.append("B entries must lie in [0, 1]")
    for k in range(h):
        for l in range(k + 1, h):
            if B[k, l] != B[l, k]:
                errors.append(f"B not symmetric at ({k}, {l})")
            elif B[k, l] > min(B[k, k], B[l, l]):
                errors.append(
                    f"assortativity violated: B[{k},{l}]={B[k, l]:g} exceeds "
                    f"min(B[{k},{k}], B[{l},{l}])={min(B[k, k], B[l, l]):g}")
    return errors


def _require_valid(spec):
    errors = validate_spec(spec)
    if errors:
        raise InvalidArgumentError("invalid block model spec: " + "; ".join(errors))


def expected_density(spec):
    """Expected clique score of the whole generated graph."""
    _require_valid(spec)
    n = spec.n
    if n < 2:
        raise InvalidArgumentError("need at least 2 nodes")
    s = np.asarray(spec.sizes, dtype=np.float64)
    pairs = np.outer(s, s)
    np.fill_diagonal(pairs, s * (s - 1))
    # pairs counted twice on both diagonal and off-diagonal
    return float((pairs * spec.B).sum() / 2.0 / comb(n, 2))


@dataclass
class GeneratedNetwork:
    graph: Graph
    truth: Partition
    seed: int
    expected_density: float


def generate(spec, seed, shuffle=False):
    """Draw ``a_ij ~ Bernoulli(B[c_i, c_j])`` independently for ``i < j``.

    Uniforms are consumed row by row in lexicographic ``(i, j)`` order.
    Nodes are community-contiguous unless ``shuffle`` is set.
    """
    _require_valid(spec)
    rng = np.random.default_rng(seed)
    n = spec.n
    c = spec.labels()
    B = spec.B
    rows, cols = [], []
    for i in range(n - 1):
        prob = B[c[i], c[i + 1:]]
        hit = np.flatnonzero(rng.random(n - i - 1) < prob)
        if hit.size:
            rows.append(np.full(hit.size, i, dtype=np.int64))
            cols.append(hit + (i + 1))
    if rows:
        r = np.concatenate(rows)
        q = np.concatenate(cols)
    else:
        r = q = np.zeros(0, dtype=np.int64)
    if shuffle:
        perm = rng.permutation(n)
        r, q = perm[r], perm[q]
        labels = np.empty(n, dtype=np.int64)
        labels[perm] = c
    else:
        labels = c
    data = np.ones(2 * r.size)
    adj = sp.csr_array((data, (np.concatenate([r, q]), np.concatenate([q, r]))),
                       shape=(n, n))
    adj.sort_indices()
    return GeneratedNetwork(Graph.from_csr(adj), Partition.from_labels(labels)
                            if shuffle else Partition(labels), seed,
                            expected_density(spec))


def _preset(sizes, B):
    return BlockModelSpec(tuple(sizes), np.array(B, dtype=np.float64))


# Benchmarks used in the experiments; SBM2 uses sizes 100/20/20.
SBM1 = _preset((100, 10, 10), [[0.2, 0.05, 0.05],
                              [0.05, 0.5, 0.05],
                              [0.05, 0.05, 0.5]])
SBM2 = _preset((100, 20, 20), [[0.2, 0.05, 0.05],
                              [0.05, 0.6, 0.12],
                              [0.05, 0.12, 0.8]])
SBM3 = _preset((60, 40, 40), [[0.2, 0.05, 0.05],
                             [0.05, 0.6, 0.12],
                             [0.05, 0.12, 0.8]])


def planted_partition(h, size, p_in, p_out):
    """``h`` equal blocks with one within- and one between-block probability."""
    B = np.full((h, h), float(p_out))
    np.fill_diagonal(B, float(p_in))
    return BlockModelSpec((size,) * h, B)
