"""Ground-truth DAG generators and linear SEM sampling.

Two designs are supported: a sparse random DAG in which each forward pair
``i < j`` gets the edge ``i -> j`` with a fixed probability, and a grouped
DAG with a root ``Y`` (node 0) driving a few dense groups that are chained
by sparse between-group edges.

Randomness comes from numpy's ``PCG64`` bit generator. Replicate streams are
derived from ``SeedSequence([seed, *keys])`` so that any replicate can be
regenerated on its own.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import ceil

import numpy as np

from .dataset import Dataset
from .exceptions import ConfigError
from .graph import Dag, topological_sort

GAUSSIAN = "gaussian"
STUDENT_T4 = "t4"
NOISES = (GAUSSIAN, STUDENT_T4)

RNG_NAME = f"numpy.random.PCG64 (numpy {np.__version__})"


def make_rng(seed, *keys) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence([int(seed), *map(int, keys)])))


def _check_noise(noise):
    noise = str(noise).lower()
    if noise in ("t", "student_t4", "t(4)"):
        noise = STUDENT_T4
    if noise not in NOISES:
        raise ConfigError(f"noise must be one of {NOISES}, got {noise!r}")
    return noise


def _check_weights(weight_range):
    low, high = map(float, weight_range)
    if not 0 < low <= high:
        raise ConfigError("weight range must satisfy 0 < low <= high")
    return low, high


@dataclass
class Sim1Config:
    p: int = 100
    n: int = 100
    pi: float = 0.015
    weight_range: tuple[float, float] = (0.5, 1.5)
    noise: str = GAUSSIAN
    seed: int = 0

    def __post_init__(self):
        if self.p < 2 or self.n < 2:
            raise ConfigError("need p >= 2 and n >= 2")
        if not 0.0 <= self.pi <= 1.0:
            raise ConfigError("pi must lie in [0, 1]")
        self.weight_range = _check_weights(self.weight_range)
        self.noise = _check_noise(self.noise)


@dataclass
class Sim2Config:
    p: int = 100
    n: int = 100
    K: int = 5
    s: int = 5
    within_density: float = 0.6
    between_density: float = 0.02
    y_prob: float = 0.9
    weight_range: tuple[float, float] = (0.5, 1.5)
    noise: str = GAUSSIAN
    seed: int = 0

    def __post_init__(self):
        if self.p < 2 or self.n < 2 or self.K < 1:
            raise ConfigError("need p >= 2, n >= 2 and K >= 1")
        if self.s < 0 or self.s > self.n_groups:
            raise ConfigError(f"s={self.s} exceeds the {self.n_groups} available groups")
        for name in ("within_density", "between_density", "y_prob"):
            if not 0.0 <= getattr(self, name) <= 1.0:
                raise ConfigError(f"{name} must lie in [0, 1]")
        self.weight_range = _check_weights(self.weight_range)
        self.noise = _check_noise(self.noise)

    @property
    def n_groups(self) -> int:
        return ceil((self.p - 1) / self.K)

    def groups(self) -> list[list[int]]:
        nodes = list(range(1, self.p))
        return [nodes[g * self.K:(g + 1) * self.K] for g in range(self.n_groups)]


def _draw_weights(rng, count, weight_range):
    low, high = weight_range
    mag = rng.uniform(low, high, size=count)
    sign = np.where(rng.random(count) < 0.5, -1.0, 1.0)
    return mag * sign


def generate_sparse_dag(cfg: Sim1Config, rng=None) -> Dag:
    """Each pair ``i < j`` independently gets ``i -> j`` with probability ``pi``."""
    rng = rng if rng is not None else make_rng(cfg.seed)
    p = cfg.p
    A = np.triu(rng.random((p, p)) < cfg.pi, 1)
    W = np.zeros((p, p))
    W[A] = _draw_weights(rng, int(A.sum()), cfg.weight_range)
    return Dag(A, W, [f"X{k + 1}" for k in range(p)])


def generate_grouped_dag(cfg: Sim2Config, rng=None) -> Dag:
    """Root ``Y`` (node 0) plus groups of ``K`` nodes.

    Within a group each forward pair is an edge with ``within_density``;
    consecutive groups are linked with ``between_density``; ``Y`` points to
    each member of the first ``s`` groups with probability ``y_prob``.
    """
    rng = rng if rng is not None else make_rng(cfg.seed)
    p = cfg.p
    A = np.zeros((p, p), dtype=bool)
    groups = cfg.groups()
    for grp in groups:
        for a_pos, a in enumerate(grp):
            for b in grp[a_pos + 1:]:
                A[a, b] = rng.random() < cfg.within_density
    for g1, g2 in zip(groups, groups[1:]):
        for a in g1:
            for b in g2:
                A[a, b] = rng.random() < cfg.between_density
    for grp in groups[:cfg.s]:
        for v in grp:
            A[0, v] = rng.random() < cfg.y_prob
    W = np.zeros((p, p))
    W[A] = _draw_weights(rng, int(A.sum()), cfg.weight_range)
    return Dag(A, W, ["Y"] + [f"X{k}" for k in range(1, p)])


def sample_noise(rng, n, p, noise=GAUSSIAN) -> np.ndarray:
    noise = _check_noise(noise)
    if noise == GAUSSIAN:
        return rng.standard_normal((n, p))
    return rng.standard_t(4, size=(n, p))


def sample_sem(g: Dag, n: int, noise=GAUSSIAN, seed=0, rng=None) -> Dataset:
    """Draw ``n`` rows from ``X_v = sum_u w_uv X_u + e_v`` in topological order.

    Student-t(4) noise is used unscaled (variance 2).
    """
    order = topological_sort(g)
    rng = rng if rng is not None else make_rng(seed)
    E = sample_noise(rng, n, g.n_nodes, noise)
    X = np.zeros_like(E)
    W = g.weights
    for v in order:
        pa = g.parents[v]
        X[:, v] = E[:, v] + (X[:, pa] @ W[pa, v] if pa else 0.0)
    return Dataset(X, list(g.node_names))


def sem_covariance(g: Dag, noise=GAUSSIAN) -> np.ndarray:
    """Population covariance ``(I - B)^-T D (I - B)^-1`` of the SEM on ``g``."""
    p = g.n_nodes
    d = 1.0 if _check_noise(noise) == GAUSSIAN else 2.0
    inv = np.linalg.inv(np.eye(p) - g.weights)
    return d * inv.T @ inv
