"""Penalized FCI: lasso neighbourhood selection followed by FCI causal discovery."""

from importlib.metadata import PackageNotFoundError, version

from .blanket import BlanketReport, markov_blanket_layers
from .citest import FisherZ, OracleTest, fisher_z_test, oracle_test, partial_correlation, sample_correlation
from .dataset import Dataset, read_csv, standardize, write_csv
from .estimator import PFCI, LassoCD, MarkovBlanketSelector, NeighborhoodSelection
from .exceptions import (
    ConfigError,
    ConstantColumn,
    CycleDetected,
    IngestionError,
    MissingSepset,
    NodeMismatch,
    NodeNotObserved,
    NonNumeric,
    NotConverged,
    OrientationConflict,
    PFCIError,
    SingularSubmatrix,
    StageError,
    UnknownNode,
)
from .fci import FciConfig, FciResult, SepsetMap, fci_full, oracle_pag, pfci
from .graph import Dag, Mark, MixedGraph, Skeleton, d_separated, from_json, to_dot, to_json
from .metrics import ConfusionCounts, confusion_counts, f1, mcc, shd
from .neighborhood import cv_lambda, default_lambda, lasso_cd, neighborhood_select
from .simulate import Sim1Config, Sim2Config, generate_grouped_dag, generate_sparse_dag, sample_sem

try:
    __version__ = version("artifact")
except PackageNotFoundError:  # running from a source checkout
    __version__ = "0.1.0"

__all__ = [
    "BlanketReport", "ConfigError", "ConfusionCounts", "ConstantColumn", "CycleDetected", "Dag",
    "Dataset", "FciConfig", "FciResult", "FisherZ", "IngestionError", "LassoCD", "Mark", "MarkovBlanketSelector",
    "MissingSepset", "MixedGraph", "NeighborhoodSelection", "NodeMismatch", "NodeNotObserved",
    "NonNumeric", "NotConverged", "OracleTest", "OrientationConflict", "PFCI", "PFCIError",
    "SepsetMap", "Sim1Config", "Sim2Config", "SingularSubmatrix", "Skeleton", "StageError",
    "UnknownNode", "confusion_counts", "cv_lambda", "d_separated", "default_lambda", "f1",
    "fci_full", "fisher_z_test", "from_json", "generate_grouped_dag", "generate_sparse_dag",
    "lasso_cd", "markov_blanket_layers", "mcc", "neighborhood_select", "oracle_pag", "oracle_test",
    "partial_correlation", "pfci", "read_csv", "sample_correlation", "sample_sem", "shd",
    "standardize", "to_dot", "to_json", "write_csv", "__version__",
]
