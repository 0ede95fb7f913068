"""Observation matrices with named columns and their CSV form."""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass

import numpy as np

from .exceptions import ConstantColumn, IngestionError, NonNumeric


@dataclass(eq=False)
class Dataset:
    values: np.ndarray
    names: list[str]

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=float)
        if self.values.ndim != 2:
            raise ValueError("dataset values must be a 2-d array")
        self.names = [str(n) for n in self.names]
        if len(self.names) != self.values.shape[1]:
            raise ValueError("one name per column required")

    @property
    def n(self) -> int:
        return self.values.shape[0]

    @property
    def p(self) -> int:
        return self.values.shape[1]


def read_csv(path) -> Dataset:
    """Header row of column names, then numeric rows. Missing cells abort."""
    try:
        fh = open(path, newline="", encoding="utf-8")
    except OSError as err:
        raise IngestionError(f"cannot read {path}: {err.strerror}") from err
    with fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise IngestionError(f"{path} is empty") from None
        header = [h.strip() for h in header]
        rows = []
        for r, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != len(header):
                raise IngestionError(f"expected {len(header)} fields, got {len(row)}", row=r)
            vals = []
            for name, cell in zip(header, row):
                cell = cell.strip()
                if cell == "" or cell.lower() in ("na", "nan"):
                    raise IngestionError("missing value", row=r, column=name)
                try:
                    v = float(cell)
                except ValueError:
                    raise IngestionError(f"non-numeric value {cell!r}", row=r, column=name) from None
                if not math.isfinite(v):
                    raise IngestionError("non-finite value", row=r, column=name)
                vals.append(v)
            rows.append(vals)
    return Dataset(np.array(rows, dtype=float).reshape(len(rows), len(header)), header)


def write_csv(ds: Dataset, path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(ds.names)
        for row in ds.values:
            w.writerow([repr(float(v)) for v in row])


def standardize(X, names=None) -> np.ndarray:
    """Center each column and scale to unit sample variance (divisor n-1)."""
    if isinstance(X, Dataset):
        names, X = X.names, X.values
    try:
        X = np.asarray(X, dtype=float)
    except (TypeError, ValueError) as err:
        raise NonNumeric(str(err)) from err
    if X.ndim != 2:
        raise ValueError("expected a 2-d array")
    if X.shape[0] < 2:
        raise ValueError("need at least two observations")
    if np.isnan(X).any():
        raise ValueError("missing values are not supported")
    Xc = X - X.mean(axis=0)
    sd = np.sqrt((Xc * Xc).sum(axis=0) / (X.shape[0] - 1))
    scale = np.maximum(np.abs(X).max(axis=0), 1.0)
    for k in np.flatnonzero(sd <= 1e-12 * scale):
        raise ConstantColumn(names[k] if names is not None else k)
    return Xc / sd
