"""Lasso neighbourhood selection: the sparse undirected first stage.

Each variable is regressed on all others with an l1 penalty,

    beta_j = argmin (1/2n) ||x_j - X_{-j} b||^2 + lam * ||b||_1,

and the nonzero coefficients define its neighbourhood. The per-node
neighbourhoods are then symmetrised with an OR (default) or AND rule.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np
from numba import njit
from sklearn.model_selection import KFold

from .exceptions import ConfigError, NotConverged
from .graph import Skeleton

DEFAULT_TOL = 1e-7
DEFAULT_MAX_ITER = 100_000


@dataclass(eq=False)
class LassoFit:
    coef: np.ndarray
    lam: float
    n_iter: int
    converged: bool
    # objective after each full sweep (initial point first), tracked by
    # accumulating exact per-coordinate decreases
    objective_path: np.ndarray = field(repr=False)

    @property
    def support(self) -> np.ndarray:
        return np.flatnonzero(self.coef)


@njit(cache=True, nogil=True)
def _cd_gram(G, c, yy, lam, tol, max_iter, beta):
    # grad[k] = <x_k, r> / n, kept in sync with beta
    m = c.shape[0]
    grad = c - G @ beta
    path = np.empty(max_iter + 1)
    obj = 0.5 * yy - c @ beta + 0.5 * beta @ (G @ beta) + lam * np.abs(beta).sum()
    path[0] = obj
    n_iter = 0
    converged = False
    while n_iter < max_iter:
        max_change = 0.0
        for k in range(m):
            gkk = G[k, k]
            if gkk <= 0.0:
                continue
            old = beta[k]
            z = grad[k] + gkk * old
            if z > lam:
                new = (z - lam) / gkk
            elif z < -lam:
                new = (z + lam) / gkk
            else:
                new = 0.0
            if new != old:
                d = new - old
                for t in range(m):
                    grad[t] -= d * G[t, k]
                beta[k] = new
                if abs(d) > max_change:
                    max_change = abs(d)
                # exact 1-d decrease: gkk d^2 / 2 + (lam |old| - s old), s = z - gkk new
                # is a subgradient of lam |.| at new, so the bracket is >= 0
                slack = lam * abs(old) - (z - gkk * new) * old
                obj -= 0.5 * gkk * d * d + max(slack, 0.0)
        n_iter += 1
        path[n_iter] = obj
        if max_change < tol:
            converged = True
            break
    return beta, n_iter, converged, path[: n_iter + 1]


def _solve_gram(G, c, yy, lam, tol, max_iter) -> LassoFit:
    if lam < 0:
        raise ValueError("lambda must be nonnegative")
    beta = np.zeros(c.shape[0])
    beta, n_iter, converged, path = _cd_gram(
        np.ascontiguousarray(G, dtype=float), np.ascontiguousarray(c, dtype=float),
        float(yy), float(lam), float(tol), int(max_iter), beta,
    )
    return LassoFit(beta, float(lam), int(n_iter), bool(converged), path)


def lasso_cd(X, y, lam, tol=DEFAULT_TOL, max_iter=DEFAULT_MAX_ITER) -> LassoFit:
    """Cyclic coordinate descent on the Gram matrix ``X'X / n``.

    Coordinates are visited in column order every sweep; iteration stops once
    no coefficient moved by more than ``tol`` in a sweep. Raises
    :class:`NotConverged` (carrying the partial fit) after ``max_iter`` sweeps.
    """
    X = np.asarray(X, dtype=float)
    y = np.asarray(y, dtype=float)
    n = X.shape[0]
    fit = _solve_gram(X.T @ X / n, X.T @ y / n, y @ y / n, lam, tol, max_iter)
    if not fit.converged:
        raise NotConverged(fit)
    return fit


def lasso_objective(X, y, coef, lam) -> float:
    r = np.asarray(y) - np.asarray(X) @ coef
    return float(r @ r / (2 * len(r)) + lam * np.abs(coef).sum())


def kkt_violation(X, y, coef, lam) -> float:
    """Largest violation of the lasso optimality conditions at ``coef``."""
    X = np.asarray(X, dtype=float)
    g = X.T @ (np.asarray(y) - X @ coef) / X.shape[0]
    nz = coef != 0
    viol = np.zeros_like(g)
    viol[nz] = np.abs(g[nz] - lam * np.sign(coef[nz]))
    viol[~nz] = np.maximum(np.abs(g[~nz]) - lam, 0.0)
    return float(viol.max(initial=0.0))


def lambda_max(X, y) -> float:
    """Smallest penalty at which the all-zero vector is optimal."""
    X = np.asarray(X, dtype=float)
    return float(np.abs(X.T @ np.asarray(y)).max(initial=0.0) / X.shape[0])


def default_lambda(n: int, p: int) -> float:
    """Universal threshold ``sqrt(2 log(p) / n)``."""
    if n < 2 or p < 2:
        raise ValueError("need n >= 2 and p >= 2")
    return math.sqrt(2.0 * math.log(p) / n)


@dataclass(eq=False)
class NeighborhoodResult:
    neighbors: list[frozenset[int]]
    rule: str
    lambdas: np.ndarray
    coef: np.ndarray = field(repr=False)  # p x p, row j = regression of node j


def _check_rule(rule):
    rule = str(rule).lower()
    if rule not in ("and", "or"):
        raise ConfigError(f"symmetrisation rule must be 'and' or 'or', got {rule!r}")
    return rule


def neighborhood_select(X, lam, rule="or", *, tol=DEFAULT_TOL, max_iter=DEFAULT_MAX_ITER,
                        n_jobs=1, node_names=None):
    """Per-node lasso regressions merged into a symmetric skeleton.

    ``lam`` is a scalar or one penalty per node. Regressions are independent
    and may run on ``n_jobs`` threads; results are merged in node order.
    Returns ``(NeighborhoodResult, Skeleton)``.
    """
    rule = _check_rule(rule)
    X = np.asarray(X, dtype=float)
    n, p = X.shape
    lams = np.broadcast_to(np.asarray(lam, dtype=float), (p,)).copy()
    C = X.T @ X / n

    def fit_node(j):
        others = np.r_[0:j, j + 1:p]
        fit = _solve_gram(C[np.ix_(others, others)], C[others, j], C[j, j], lams[j], tol, max_iter)
        if not fit.converged:
            raise NotConverged(fit, node=j)
        return fit

    if n_jobs and n_jobs > 1:
        with ThreadPoolExecutor(n_jobs) as pool:
            fits = list(pool.map(fit_node, range(p)))
    else:
        fits = [fit_node(j) for j in range(p)]

    B = np.zeros((p, p))
    for j, fit in enumerate(fits):
        B[j, np.r_[0:j, j + 1:p]] = fit.coef
    sel = B != 0
    A = (sel | sel.T) if rule == "or" else (sel & sel.T)
    neighbors = [frozenset(np.flatnonzero(sel[j]).tolist()) for j in range(p)]
    return NeighborhoodResult(neighbors, rule, lams, B), Skeleton(A, node_names)


def cv_lambda(X, node, folds=5, grid=None, seed=0, *, tol=DEFAULT_TOL, max_iter=DEFAULT_MAX_ITER) -> float:
    """Pick the penalty for ``node`` by K-fold cross-validated squared error.

    ``grid`` must be sorted descending; ties resolve to the larger penalty.
    Fold assignment is a seeded shuffle, so the result is reproducible.
    """
    if folds < 2:
        raise ConfigError("cross-validation needs at least two folds")
    X = np.asarray(X, dtype=float)
    n, p = X.shape
    y = X[:, node]
    Z = np.delete(X, node, axis=1)
    if grid is None:
        top = max(lambda_max(Z, y), 1e-3)
        grid = np.geomspace(top, top * 1e-2, 20)
    grid = [float(g) for g in grid]
    if not grid:
        raise ConfigError("lambda grid is empty")
    if any(a < b for a, b in zip(grid, grid[1:])):
        raise ConfigError("lambda grid must be sorted in descending order")
    err = np.zeros(len(grid))
    for train, test in KFold(folds, shuffle=True, random_state=seed).split(Z):
        Zt, yt = Z[train], y[train]
        nt = len(train)
        G, c, yy = Zt.T @ Zt / nt, Zt.T @ yt / nt, yt @ yt / nt
        for g, lam in enumerate(grid):
            fit = _solve_gram(G, c, yy, lam, tol, max_iter)
            if not fit.converged:
                raise NotConverged(fit, node=node)
            resid = y[test] - Z[test] @ fit.coef
            err[g] += resid @ resid
    err /= n
    # first minimiser in descending order == largest penalty among ties
    best = int(np.flatnonzero(err <= err.min() * (1 + 1e-12) + 1e-300)[0])
    return grid[best]
