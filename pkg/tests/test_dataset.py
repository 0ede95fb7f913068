import numpy as np
import pytest

from pfci.dataset import Dataset, read_csv, standardize, write_csv
from pfci.exceptions import ConstantColumn, IngestionError, NonNumeric


def _write(tmp_path, text):
    path = tmp_path / "d.csv"
    path.write_text(text, encoding="utf-8")
    return path


def test_read_csv_basic(tmp_path):
    ds = read_csv(_write(tmp_path, "a,b\n1,2.5\n-3,4e-1\n"))
    assert ds.names == ["a", "b"]
    assert ds.n == 2 and ds.p == 2
    assert np.array_equal(ds.values, [[1, 2.5], [-3, 0.4]])


@pytest.mark.parametrize("body, row, column", [
    ("a,b\n1,2\n3,\n", 3, "b"),
    ("a,b\n1,NA\n", 2, "b"),
    ("a,b\n1,2\nx,4\n", 3, "a"),
    ("a,b\n1,inf\n", 2, "b"),
])
def test_read_csv_reports_cell(tmp_path, body, row, column):
    with pytest.raises(IngestionError) as info:
        read_csv(_write(tmp_path, body))
    assert info.value.row == row
    assert info.value.column == column
    assert f"row {row}" in str(info.value)


def test_read_csv_ragged_and_missing_file(tmp_path):
    with pytest.raises(IngestionError) as info:
        read_csv(_write(tmp_path, "a,b\n1,2,3\n"))
    assert info.value.row == 2
    with pytest.raises(IngestionError, match="nope.csv"):
        read_csv(tmp_path / "nope.csv")
    with pytest.raises(IngestionError):
        read_csv(_write(tmp_path, ""))


def test_csv_round_trip_is_exact(tmp_path):
    rng = np.random.default_rng(0)
    ds = Dataset(rng.standard_normal((7, 3)), ["x", "y", "z"])
    path = tmp_path / "r.csv"
    write_csv(ds, path)
    back = read_csv(path)
    assert back.names == ds.names
    assert np.array_equal(back.values, ds.values)


def test_standardize_unit_sample_variance():
    rng = np.random.default_rng(1)
    Z = standardize(rng.normal(3.0, 5.0, (50, 4)))
    assert np.allclose(Z.mean(axis=0), 0, atol=1e-12)
    assert np.allclose(Z.var(axis=0, ddof=1), 1, atol=1e-12)


def test_standardize_errors():
    X = np.column_stack([np.arange(5.0), np.full(5, 2.0)])
    with pytest.raises(ConstantColumn) as info:
        standardize(X, ["a", "b"])
    assert info.value.name == "b"
    with pytest.raises(NonNumeric):
        standardize([["a", "b"], ["c", "d"]])
    with pytest.raises(ValueError):
        standardize(np.ones((1, 3)))
