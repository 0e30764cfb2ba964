"""Replicated benchmark runs: spec in, aggregated metrics out."""

import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import sbm
from .clique import GlobalClusterConfig, cluster_global
from .errors import CliqueClustError, InvalidArgumentError
from .localized import LocalClusterConfig, cluster_localized
from .metrics import aggregate, ari, error_matrix, nmi
from .modularity import ModularityConfig, cluster_modularity
from .spectral import SolverConfig

ALGORITHMS = ("global-p", "localized", "modularity")
METRICS = ("nmi", "ari", "error-matrix")
PRESETS = {"SBM1": sbm.SBM1, "SBM2": sbm.SBM2, "SBM3": sbm.SBM3}


@dataclass(frozen=True)
class ExperimentSpec:
    model: sbm.BlockModelSpec
    algorithm: str
    p: float = None
    alpha: float = 0.025
    replications: int = 100
    seed_base: int = 0
    metrics: tuple = METRICS
    solver: SolverConfig = field(default_factory=SolverConfig)

    def __post_init__(self):
        if self.algorithm not in ALGORITHMS:
            raise InvalidArgumentError(f"unknown algorithm {self.algorithm!r}")
        if self.replications < 1:
            raise InvalidArgumentError("replications must be >= 1")
        if self.algorithm == "global-p" and self.p is None:
            raise InvalidArgumentError("global-p needs a threshold p")
        if self.algorithm == "localized" and not 0 < self.alpha < 0.5:
            raise InvalidArgumentError("alpha must lie in (0, 0.5)")
        bad = set(self.metrics) - set(METRICS)
        if bad:
            raise InvalidArgumentError(f"unknown metrics {sorted(bad)}")
        errors = sbm.validate_spec(self.model)
        if errors:
            raise InvalidArgumentError("; ".join(errors))

    @classmethod
    def from_dict(cls, d):
        try:
            model = d["model"]
            model = PRESETS[model] if isinstance(model, str) else sbm.BlockModelSpec.from_dict(model)
            solver = SolverConfig(**d.get("solver", {}))
            return cls(model, d["algorithm"], d.get("p"), d.get("alpha", 0.025),
                       int(d.get("replications", 100)), int(d.get("seed_base", 0)),
                       tuple(d.get("metrics", METRICS)), solver)
        except KeyError as exc:
            raise InvalidArgumentError(f"experiment spec missing {exc}") from None
        except TypeError as exc:
            raise InvalidArgumentError(f"malformed experiment spec: {exc}") from None

    def to_dict(self):
        d = {"model": self.model.to_dict(), "algorithm": self.algorithm,
             "replications": self.replications, "seed_base": self.seed_base,
             "metrics": list(self.metrics),
             "solver": {"tol": self.solver.tol, "max_iter": self.solver.max_iter,
                        "seed": self.solver.seed, "restart_dim": self.solver.restart_dim}}
        if self.algorithm == "global-p":
            d["p"] = self.p
        elif self.algorithm == "localized":
            d["alpha"] = self.alpha
        return d


def cluster_with(algorithm, g, p=None, alpha=0.025, solver=None):
    """Run one of the three clusterers and return a Partition (and tree, if any)."""
    solver = solver or SolverConfig()
    if algorithm == "global-p":
        return cluster_global(g, GlobalClusterConfig(p, solver)).partition, None
    if algorithm == "localized":
        tree = cluster_localized(g, LocalClusterConfig(alpha, solver))
        return tree.partition(), tree
    if algorithm == "modularity":
        return cluster_modularity(g, ModularityConfig(solver)).partition, None
    raise InvalidArgumentError(f"unknown algorithm {algorithm!r}")


def run_replication(spec, r):
    """Metrics for replication ``r`` (seed ``seed_base + r``)."""
    net = sbm.generate(spec.model, spec.seed_base + r)
    part, _ = cluster_with(spec.algorithm, net.graph, spec.p, spec.alpha, spec.solver)
    out = {}
    if "nmi" in spec.metrics:
        out["nmi"] = nmi(net.truth, part)
    if "ari" in spec.metrics:
        out["ari"] = ari(net.truth, part)
    if "error-matrix" in spec.metrics:
        out["error-matrix"] = error_matrix(net.truth, part).eps
    out["communities"] = part.h
    return out


def _safe_replication(args):
    spec, r = args
    try:
        return r, run_replication(spec, r), None
    except CliqueClustError as exc:
        return r, None, f"{type(exc).__name__}: {exc}"


def run_experiment(spec, jobs=1, keep_series=False):
    """Run all replications and aggregate in replication order."""
    t0 = time.perf_counter()
    tasks = [(spec, r) for r in range(spec.replications)]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_safe_replication, tasks))
    else:
        results = [_safe_replication(t) for t in tasks]
    elapsed_ms = (time.perf_counter() - t0) * 1000.0
    ok = [(r, res) for r, res, err in results if err is None]
    failures = [{"replication": r, "seed": spec.seed_base + r, "error": err}
                for r, res, err in results if err is not None]
    report = {"config": spec.to_dict(), "replications": len(ok),
              "elapsed_ms": round(elapsed_ms, 3), "results": [], "failures": failures}
    for metric in [m for m in METRICS if m in spec.metrics] + ["communities"]:
        series = np.array([res[metric] for _, res in ok], dtype=np.float64)
        entry = {"metric": metric, "replications": len(ok)}
        if len(ok) == 0:
            entry["mean"] = None
        elif len(ok) == 1:
            entry["mean"] = series[0].tolist()
        else:
            mean, se = aggregate(series)
            entry["mean"] = np.asarray(mean).tolist()
            entry["se"] = np.asarray(se).tolist()
        report["results"].append(entry)
    if keep_series:
        report["series"] = {"replication": [r for r, _ in ok]}
        for metric in [m for m in METRICS if m in spec.metrics]:
            report["series"][metric] = [np.asarray(res[metric]).tolist() for _, res in ok]
    return report


def result(report, metric):
    """Look up one metric entry in a report."""
    for entry in report["results"]:
        if entry["metric"] == metric:
            return entry
    raise KeyError(metric)
