"""Clique-density community detection on undirected graphs."""

from .errors import (CliqueClustError, ConvergenceError, DegenerateInputError,
                     InvalidArgumentError, InvalidNodeError, NumericalError)
from .graph import (Graph, Partition, clique_score, cut, degree,
                    internal_edges, subgraph, volume)
from .spectral import (EigenResult, SolverConfig, SymmetricOperator,
                       leading_eigenpair, modularity_operator, pclique_operator)
from .clique import (BipartitionResult, ClusterResult, GlobalClusterConfig,
                     bipartition, cluster_global, delta_d, pclique_index)
from .localized import (ClusterTree, LocalClusterConfig, ThresholdParams,
                        TreeNode, cluster_localized, local_clique_index,
                        local_threshold, lower_threshold, make_threshold_params,
                        split_gain, truncated_moments, upper_threshold)
from .sbm import (SBM1, SBM2, SBM3, BlockModelSpec, GeneratedNetwork,
                  expected_density, generate, planted_partition, validate_spec)
from .metrics import (ConfusionMatrix, ErrorMatrix, aggregate, ari, confusion,
                      error_matrix, nmi)
from .modularity import ModularityConfig, cluster_modularity, modularity_score

__version__ = "0.1.0"
