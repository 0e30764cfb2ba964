"""Agreement measures between a ground-truth and a predicted partition."""

from dataclasses import dataclass

import numpy as np

from .errors import InvalidArgumentError
from .graph import Partition


def _labels(x):
    return x.membership if isinstance(x, Partition) else Partition.from_labels(x).membership


def _pair(truth, pred):
    t, s = _labels(truth), _labels(pred)
    if t.size != s.size:
        raise InvalidArgumentError(
            f"partitions cover different node counts ({t.size} vs {s.size})")
    return t, s


@dataclass(frozen=True)
class ConfusionMatrix:
    counts: np.ndarray

    @property
    def row_sums(self):
        return self.counts.sum(axis=1)

    @property
    def col_sums(self):
        return self.counts.sum(axis=0)

    @property
    def total(self):
        return int(self.counts.sum())


def confusion(truth, pred):
    """``N[k, l]`` = number of nodes in true community ``k`` and predicted ``l``."""
    t, s = _pair(truth, pred)
    kt, ks = t.max(initial=-1) + 1, s.max(initial=-1) + 1
    counts = np.zeros((kt, ks), dtype=np.int64)
    np.add.at(counts, (t, s), 1)
    return ConfusionMatrix(counts)


def _xlogx_ratio(N, tot):
    N = N[N > 0].astype(np.float64)
    return float((N * np.log(N / tot)).sum())


def nmi(truth, pred):
    """Normalised mutual information ``2 I(T;S) / (H(T) + H(S))``.

    If either side is a single community the entropies vanish: the result is
    1 when both are, else 0.
    """
    cm = confusion(truth, pred)
    N = cm.counts.astype(np.float64)
    tot = float(cm.total)
    if tot == 0:
        raise InvalidArgumentError("empty partitions")
    rows, cols = cm.row_sums, cm.col_sums
    denom = _xlogx_ratio(rows, tot) + _xlogx_ratio(cols, tot)
    if denom == 0.0:
        return 1.0 if (rows.size == 1 and cols.size == 1) else 0.0
    nz = N > 0
    outer = np.outer(rows, cols)[nz]
    num = -2.0 * float((N[nz] * np.log(N[nz] * tot / outer)).sum())
    return min(1.0, max(0.0, num / denom))


def _comb2(x):
    x = np.asarray(x, dtype=np.float64)
    return x * (x - 1) / 2.0


def ari(truth, pred):
    """Hubert-Arabie adjusted Rand index from pair counts."""
    cm = confusion(truth, pred)
    tot = cm.total
    if tot < 2:
        raise InvalidArgumentError("ARI needs at least 2 nodes")
    index = _comb2(cm.counts).sum()
    a = _comb2(cm.row_sums).sum()
    b = _comb2(cm.col_sums).sum()
    expected = a * b / _comb2(tot)
    max_index = 0.5 * (a + b)
    if max_index == expected:
        return 1.0
    return float((index - expected) / (max_index - expected))


@dataclass(frozen=True)
class ErrorMatrix:
    """Rates of co-membership disagreement per pair of true communities.

    ``undefined[k]`` flags a singleton true community, whose diagonal entry
    has no pairs and is reported as 0.
    """

    eps: np.ndarray
    sizes: np.ndarray
    undefined: np.ndarray


def error_matrix(truth, pred):
    t, s = _pair(truth, pred)
    N = confusion(t, s).counts.astype(np.float64)
    sizes = N.sum(axis=1)
    # same predicted community across true blocks k != l
    together = N @ N.T
    eps = together / np.outer(sizes, sizes)
    within_pairs = sizes * (sizes - 1)
    kept = (N * (N - 1)).sum(axis=1)
    undefined = within_pairs == 0
    diag = np.where(undefined, 0.0, 1.0 - kept / np.where(undefined, 1.0, within_pairs))
    np.fill_diagonal(eps, diag)
    return ErrorMatrix(eps, sizes.astype(np.int64), undefined)


def aggregate(values):
    """Mean and standard error (sample SD over sqrt(R)) along the first axis."""
    x = np.asarray(values, dtype=np.float64)
    if x.shape[0] < 2:
        raise InvalidArgumentError("standard error needs at least 2 replications")
    mean = x.mean(axis=0)
    se = x.std(axis=0, ddof=1) / np.sqrt(x.shape[0])
    if x.ndim == 1:
        return float(mean), float(se)
    return mean, se
