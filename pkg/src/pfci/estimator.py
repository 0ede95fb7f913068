"""scikit-learn style estimators wrapping the pipeline stages."""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, RegressorMixin, clone
from sklearn.feature_selection import SelectorMixin
from sklearn.utils.validation import check_array, check_is_fitted, check_X_y

from .blanket import markov_blanket_layers
from .dataset import standardize
from .fci import FciConfig, fci_full, pfci
from .neighborhood import (
    DEFAULT_MAX_ITER,
    DEFAULT_TOL,
    cv_lambda,
    default_lambda,
    lasso_cd,
    neighborhood_select,
)


def _feature_names(X, n_features):
    cols = getattr(X, "columns", None)
    if cols is not None:
        return np.asarray([str(c) for c in cols], dtype=object)
    return np.asarray([f"X{k}" for k in range(n_features)], dtype=object)


class LassoCD(RegressorMixin, BaseEstimator):
    """Lasso regression without intercept, solved by cyclic coordinate descent.

    Minimises ``(1/2n) ||y - X b||^2 + lam ||b||_1``. Inputs are expected to
    be centred; no intercept is fitted.
    """

    def __init__(self, lam=1.0, tol=DEFAULT_TOL, max_iter=DEFAULT_MAX_ITER):
        self.lam = lam
        self.tol = tol
        self.max_iter = max_iter

    def fit(self, X, y):
        X, y = check_X_y(X, y, dtype=float, y_numeric=True)
        fit = lasso_cd(X, y, self.lam, self.tol, self.max_iter)
        self.coef_ = fit.coef
        self.n_iter_ = fit.n_iter
        self.objective_path_ = fit.objective_path
        self.n_features_in_ = X.shape[1]
        return self

    def predict(self, X):
        check_is_fitted(self, "coef_")
        X = check_array(X, dtype=float)
        return X @ self.coef_


class NeighborhoodSelection(BaseEstimator):
    """Sparse undirected skeleton from per-node lasso regressions.

    Parameters
    ----------
    lam : float, array of shape (n_features,), "auto" or "cv"
        Penalty. ``"auto"`` uses ``sqrt(2 log p / n)``; ``"cv"`` picks one
        penalty per node by K-fold cross-validation.
    rule : {"or", "and"}
        Symmetrisation of the per-node neighbourhoods.

    Attributes
    ----------
    adjacency_ : ndarray of bool, shape (n_features, n_features)
    coef_ : ndarray, shape (n_features, n_features)
        Row ``j`` holds the lasso coefficients of node ``j`` on the others.
    lambdas_ : ndarray, shape (n_features,)
    skeleton_ : Skeleton
    """

    def __init__(self, lam="auto", rule="or", cv_folds=5, random_state=0,
                 tol=DEFAULT_TOL, max_iter=DEFAULT_MAX_ITER, n_jobs=1):
        self.lam = lam
        self.rule = rule
        self.cv_folds = cv_folds
        self.random_state = random_state
        self.tol = tol
        self.max_iter = max_iter
        self.n_jobs = n_jobs

    def fit(self, X, y=None):
        names = _feature_names(X, np.shape(X)[1])
        X = check_array(X, dtype=float, ensure_min_samples=2, ensure_min_features=2)
        Z = standardize(X, list(names))
        n, p = Z.shape
        if isinstance(self.lam, str) and self.lam == "auto":
            lams = default_lambda(n, p)
        elif isinstance(self.lam, str) and self.lam == "cv":
            lams = np.array([cv_lambda(Z, j, self.cv_folds, seed=self.random_state,
                                       tol=self.tol, max_iter=self.max_iter) for j in range(p)])
        else:
            lams = self.lam
        res, sk = neighborhood_select(Z, lams, self.rule, tol=self.tol, max_iter=self.max_iter,
                                      n_jobs=self.n_jobs, node_names=list(names))
        self.result_ = res
        self.skeleton_ = sk
        self.adjacency_ = sk.adjacency
        self.coef_ = res.coef
        self.lambdas_ = res.lambdas
        self.feature_names_in_ = names
        self.n_features_in_ = p
        return self


class PFCI(BaseEstimator):
    """Penalized FCI: lasso neighbourhood selection followed by FCI.

    ``method="fci"`` skips the lasso stage and runs FCI from the complete
    graph, which is the unpenalized baseline.

    Attributes
    ----------
    pag_ : MixedGraph
        Estimated partial ancestral graph.
    adjacency_ : ndarray of bool
        Skeleton of ``pag_``.
    sepsets_ : SepsetMap
    skeleton_start_ : Skeleton
        Lasso skeleton (complete graph for ``method="fci"``).
    metadata_ : dict
        Penalty, alpha, edge counts per stage and stage timings in ms.
    """

    def __init__(self, method="pfci", lam="auto", alpha=0.01, rule="or", rule_set="core",
                 max_cond_size=None, max_pds_size=None, cv_folds=5, random_state=0, n_jobs=1):
        self.method = method
        self.lam = lam
        self.alpha = alpha
        self.rule = rule
        self.rule_set = rule_set
        self.max_cond_size = max_cond_size
        self.max_pds_size = max_pds_size
        self.cv_folds = cv_folds
        self.random_state = random_state
        self.n_jobs = n_jobs

    def _config(self):
        return FciConfig(alpha=self.alpha, max_cond_size=self.max_cond_size,
                         max_pds_size=self.max_pds_size, rule_set=self.rule_set, n_jobs=self.n_jobs)

    def fit(self, X, y=None):
        names = _feature_names(X, np.shape(X)[1])
        X = check_array(X, dtype=float, ensure_min_samples=2, ensure_min_features=2)
        cfg = self._config()
        if self.method == "pfci":
            res = pfci(X, self.lam, cfg, rule=self.rule, node_names=list(names),
                       cv_folds=self.cv_folds, seed=self.random_state)
        elif self.method == "fci":
            res = fci_full(X, cfg, node_names=list(names))
        else:
            raise ValueError(f"method must be 'pfci' or 'fci', got {self.method!r}")
        self.pag_ = res.pag
        self.adjacency_ = res.pag.marks != 0
        self.sepsets_ = res.sepsets
        self.skeleton_start_ = res.skeleton_start
        self.metadata_ = res.metadata
        self.feature_names_in_ = names
        self.n_features_in_ = X.shape[1]
        return self


class MarkovBlanketSelector(SelectorMixin, BaseEstimator):
    """Keep the columns within ``layers`` adjacency steps of ``target`` in the
    estimated PAG. ``target`` is a column index or feature name; the target
    itself is dropped.

    ``estimator`` defaults to ``PFCI()`` and is cloned before fitting.
    """

    def __init__(self, target=0, layers=1, estimator=None):
        self.target = target
        self.layers = layers
        self.estimator = estimator

    def fit(self, X, y=None):
        if self.layers not in (1, 2):
            raise ValueError(f"layers must be 1 or 2, got {self.layers!r}")
        est = clone(self.estimator) if self.estimator is not None else PFCI()
        est.fit(X)
        target = self.target
        if not isinstance(target, str):
            target = est.feature_names_in_[int(target)]
        report = markov_blanket_layers(est.pag_, target)
        keep = set(report.layer1) | (set(report.layer2) if self.layers == 2 else set())
        mask = np.zeros(est.n_features_in_, dtype=bool)
        mask[sorted(keep)] = True
        self.estimator_ = est
        self.report_ = report
        self.support_ = mask
        if hasattr(X, "columns"):
            self.feature_names_in_ = est.feature_names_in_
        self.n_features_in_ = est.n_features_in_
        return self

    def _get_support_mask(self):
        check_is_fitted(self, "support_")
        return self.support_
