"""Structure-recovery scores.

Edge-detection scores (confusion counts, F1, MCC) compare skeletons over
all unordered node pairs. SHD compares mixed graphs pair by pair: a pair
costs one if the edge is present in exactly one graph, or present in both
with any differing endpoint mark.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .graph import Mark, MixedGraph, Skeleton, check_same_nodes


@dataclass(frozen=True)
class ConfusionCounts:
    tp: int
    fp: int
    tn: int
    fn: int

    @property
    def f1_undefined(self) -> bool:
        return self.tp == self.fp == self.fn == 0

    @property
    def mcc_undefined(self) -> bool:
        return 0 in (self.tp + self.fp, self.tp + self.fn, self.tn + self.fp, self.tn + self.fn)


def _upper(A):
    return np.triu(np.asarray(A, dtype=bool), 1)


def confusion_counts(est, truth) -> ConfusionCounts:
    """Edge-detection counts over the ``p(p-1)/2`` unordered pairs."""
    check_same_nodes(est, truth)
    e = _upper(est.skeleton().adjacency)
    t = _upper(truth.skeleton().adjacency)
    p = e.shape[0]
    tp = int((e & t).sum())
    fp = int((e & ~t).sum())
    fn = int((~e & t).sum())
    return ConfusionCounts(tp, fp, p * (p - 1) // 2 - tp - fp - fn, fn)


def f1(c: ConfusionCounts) -> float:
    """F1 score; 1.0 when nothing was predicted and nothing was there
    (see :attr:`ConfusionCounts.f1_undefined`)."""
    if c.f1_undefined:
        return 1.0
    return 2 * c.tp / (2 * c.tp + c.fp + c.fn)


def mcc(c: ConfusionCounts) -> float:
    """Matthews correlation; 0.0 when a marginal total is zero."""
    if c.mcc_undefined:
        return 0.0
    num = c.tn * c.tp - c.fn * c.fp
    # integer product keeps perfect (anti-)recovery exactly at +-1
    den2 = (c.tp + c.fp) * (c.tp + c.fn) * (c.tn + c.fp) * (c.tn + c.fn)
    root = math.isqrt(den2)
    den = root if root * root == den2 else math.sqrt(den2)
    return max(-1.0, min(1.0, num / den))


def _marks(g):
    if isinstance(g, MixedGraph):
        return g.marks
    if isinstance(g, Skeleton):
        return np.where(g.adjacency, int(Mark.TAIL), 0)
    return g.to_mixed().marks


def shd(est, ref, marks: bool = True) -> int:
    """Structural Hamming distance between two graphs on the same nodes.

    With ``marks=False`` only adjacencies are compared.
    """
    check_same_nodes(est, ref)
    a, b = _marks(est), _marks(ref)
    ea, eb = _upper(a != 0), _upper(b != 0)
    d = int((ea ^ eb).sum())
    if marks:
        both = ea & eb
        diff = (a != b) | (a.T != b.T)
        d += int((both & diff).sum())
    return d
