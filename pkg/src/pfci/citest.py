"""Conditional-independence tests behind a common callable contract.

A test is any object with ``__call__(i, j, S) -> CiDecision``. Two are
provided: :class:`FisherZ` on a sample correlation matrix and
:class:`OracleTest`, which answers from d-separation in a known DAG.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from statistics import NormalDist
from typing import Iterable, Protocol

import numpy as np
from numba import njit

from .dataset import Dataset, standardize
from .exceptions import NodeNotObserved, SingularSubmatrix
from .graph import Dag, d_separated

DEFAULT_ALPHA = 0.01
_R_CLAMP = 1.0 - 1e-12


@dataclass(frozen=True)
class CiDecision:
    independent: bool
    statistic: float
    p_value: float
    partial_corr: float
    cond_size: int
    degenerate: bool = False  # too few samples for the conditioning set


class CiTest(Protocol):
    def __call__(self, i: int, j: int, S: Iterable[int]) -> CiDecision: ...


@dataclass(frozen=True, eq=False)
class CorrelationSummary:
    corr: np.ndarray
    n: int

    @property
    def p(self) -> int:
        return self.corr.shape[0]


def sample_correlation(X) -> CorrelationSummary:
    """Pearson correlation matrix of the columns of ``X``."""
    names = X.names if isinstance(X, Dataset) else None
    Z = standardize(X, names)
    n = Z.shape[0]
    C = Z.T @ Z / (n - 1)
    C = 0.5 * (C + C.T)
    np.fill_diagonal(C, 1.0)
    np.clip(C, -1.0, 1.0, out=C)
    return CorrelationSummary(C, n)


@njit(cache=True, nogil=True)
def _pcor_chol(C, idx):
    # Cholesky of C[idx, idx]; the last two indices are (i, j). NaN if not PD.
    k = idx.shape[0]
    L = np.zeros((k, k))
    for a in range(k):
        for b in range(a + 1):
            s = C[idx[a], idx[b]]
            for t in range(b):
                s -= L[a, t] * L[b, t]
            if a == b:
                if s <= 0.0:
                    return np.nan
                L[a, a] = math.sqrt(s)
            else:
                L[a, b] = s / L[b, b]
    off, diag = L[k - 1, k - 2], L[k - 1, k - 1]
    return off / math.sqrt(off * off + diag * diag)


def partial_correlation(c, i, j, S=()) -> float:
    """Correlation of ``i`` and ``j`` after linearly removing ``S``.

    Equal to ``-P[i,j] / sqrt(P[i,i] P[j,j])`` with ``P`` the inverse of the
    ``{i, j} u S`` submatrix. Computed from a Cholesky factor of that
    submatrix ordered ``(S, i, j)``: the trailing 2x2 block of the factor is
    the Cholesky factor of the conditional covariance of ``(i, j)``.
    """
    C = c.corr if isinstance(c, CorrelationSummary) else np.asarray(c, dtype=float)
    S = tuple(S)
    if i == j:
        raise ValueError("i and j must differ")
    if i in S or j in S:
        raise ValueError("i and j must not be in the conditioning set")
    if not S:
        return float(C[i, j])
    r = _pcor_chol(C, np.array(S + (i, j), dtype=np.int64))
    if r != r:
        raise SingularSubmatrix(f"correlation submatrix on {sorted(S + (i, j))} is not positive definite")
    return float(r)


def fisher_z_test(r, n, s_size, alpha=DEFAULT_ALPHA) -> CiDecision:
    """Two-sided Fisher z test of zero (partial) correlation."""
    if not 0.0 < alpha < 1.0:
        raise ValueError("alpha must lie in (0, 1)")
    dof = n - s_size - 3
    if dof <= 0:
        return CiDecision(True, 0.0, 1.0, float(r), s_size, degenerate=True)
    rc = min(max(float(r), -_R_CLAMP), _R_CLAMP)
    stat = math.sqrt(dof) * abs(math.atanh(rc))
    p_value = math.erfc(stat / math.sqrt(2.0))
    crit = NormalDist().inv_cdf(1.0 - alpha / 2.0)
    return CiDecision(stat <= crit, stat, p_value, float(r), s_size)


class FisherZ:
    """Fisher z test over a fixed correlation summary."""

    def __init__(self, summary: CorrelationSummary, alpha=DEFAULT_ALPHA):
        if not 0.0 < alpha < 1.0:
            raise ValueError("alpha must lie in (0, 1)")
        self.summary = summary
        self.corr = np.ascontiguousarray(summary.corr, dtype=float)
        self.alpha = alpha
        self._crit = NormalDist().inv_cdf(1.0 - alpha / 2.0)

    def __call__(self, i, j, S=()) -> CiDecision:
        S = tuple(S)
        r = partial_correlation(self.corr, i, j, S)
        dof = self.summary.n - len(S) - 3
        if dof <= 0:
            return CiDecision(True, 0.0, 1.0, r, len(S), degenerate=True)
        rc = min(max(r, -_R_CLAMP), _R_CLAMP)
        stat = math.sqrt(dof) * abs(math.atanh(rc))
        return CiDecision(stat <= self._crit, stat, math.erfc(stat / math.sqrt(2.0)), r, len(S))


class OracleTest:
    """d-separation oracle over the observed part of a DAG.

    Node indices passed to ``__call__`` refer to positions in
    :attr:`observed` (the DAG nodes that are neither latent nor selection
    nodes, in increasing order). Selection nodes are always conditioned on.
    """

    def __init__(self, dag: Dag, latents=(), selection=()):
        self.dag = dag
        self.latents = frozenset(dag.index(v) for v in latents)
        self.selection = frozenset(dag.index(v) for v in selection)
        hidden = self.latents | self.selection
        self.observed = [v for v in range(dag.n_nodes) if v not in hidden]

    @property
    def node_names(self) -> list[str]:
        return [self.dag.node_names[v] for v in self.observed]

    def __call__(self, i, j, S=()) -> CiDecision:
        obs = self.observed
        z = {obs[k] for k in S} | self.selection
        indep = d_separated(self.dag, obs[i], obs[j], z)
        return _oracle_decision(indep, len(S))


def _oracle_decision(indep, size):
    return CiDecision(indep, 0.0 if indep else math.inf, 1.0 if indep else 0.0,
                      0.0 if indep else math.nan, size)


def oracle_test(g: Dag, latents, selection, i, j, S=()) -> CiDecision:
    """Single oracle query in DAG node indices."""
    latents = {g.index(v) for v in latents}
    selection = {g.index(v) for v in selection}
    hidden = latents | selection
    nodes = [g.index(v) for v in (i, j, *S)]
    for v in nodes:
        if v in hidden:
            raise NodeNotObserved(g.node_names[v])
    i, j, *S = nodes
    return _oracle_decision(d_separated(g, i, j, set(S) | selection), len(S))
