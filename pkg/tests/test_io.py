import numpy as np
import pytest

from disjoint_spca.errors import CapacityExceeded, InvalidInput, ParseError
from disjoint_spca.io import PSD, Dataset, load_dense_csv, load_uci_bow, synthetic_counts
from disjoint_spca.linalg import gram_from_data


def write(path, text):
    path.write_text(text)
    return path


def test_csv_basic(tmp_path):
    ds = load_dense_csv(write(tmp_path / "a.csv", "1,2\n3,4\n5,6\n"))
    np.testing.assert_array_equal(ds.matrix, [[1, 2], [3, 4], [5, 6]])
    assert ds.vocabulary is None and ds.center_default


def test_csv_header(tmp_path):
    ds = load_dense_csv(write(tmp_path / "a.csv", "a,b\n1,2\n"), has_header=True)
    assert ds.vocabulary == ["a", "b"]
    np.testing.assert_array_equal(ds.matrix, [[1, 2]])


def test_csv_ragged(tmp_path):
    with pytest.raises(ParseError) as exc:
        load_dense_csv(write(tmp_path / "a.csv", "1,2\n3\n"))
    assert exc.value.line == 2


def test_csv_non_numeric(tmp_path):
    with pytest.raises(ParseError) as exc:
        load_dense_csv(write(tmp_path / "a.csv", "1,2\n3,x\n"))
    assert (exc.value.line, exc.value.col) == (2, 2)


def test_csv_empty(tmp_path):
    with pytest.raises(ParseError):
        load_dense_csv(write(tmp_path / "a.csv", "\n"))


def test_bow_basic(tmp_path):
    dw = write(tmp_path / "docword.t.txt", "2\n3\n2\n1 1 4\n2 3 1\n")
    voc = write(tmp_path / "vocab.t.txt", "apple\nbanana\ncherry\n")
    ds = load_uci_bow(dw, voc)
    np.testing.assert_array_equal(ds.matrix, [[4, 0, 0], [0, 0, 1]])
    assert ds.vocabulary == ["apple", "banana", "cherry"]
    assert not ds.center_default


def test_bow_out_of_bounds(tmp_path):
    dw = write(tmp_path / "d.txt", "2\n3\n1\n1 5 1\n")
    with pytest.raises(ParseError) as exc:
        load_uci_bow(dw)
    assert exc.value.line == 4


def test_bow_nnz_mismatch(tmp_path):
    with pytest.raises(ParseError):
        load_uci_bow(write(tmp_path / "d.txt", "2\n3\n2\n1 1 1\n"))


def test_bow_bad_header(tmp_path):
    with pytest.raises(ParseError):
        load_uci_bow(write(tmp_path / "d.txt", "two\n3\n0\n"))


def test_bow_vocab_length(tmp_path):
    dw = write(tmp_path / "d.txt", "1\n3\n1\n1 1 1\n")
    with pytest.raises(ParseError):
        load_uci_bow(dw, write(tmp_path / "v.txt", "a\nb\n"))


def test_bow_capacity(tmp_path):
    with pytest.raises(CapacityExceeded):
        load_uci_bow(write(tmp_path / "d.txt", "100000\n1000\n0\n"))


def test_cross_format_gram(tmp_path):
    rng = np.random.default_rng(4)
    M = rng.poisson(1.0, size=(12, 6)).astype(int)
    (tmp_path / "m.csv").write_text("\n".join(",".join(map(str, r)) for r in M) + "\n")
    trip = [(i + 1, j + 1, M[i, j]) for i in range(12) for j in range(6) if M[i, j]]
    body = "".join(f"{a} {b} {c}\n" for a, b, c in trip)
    (tmp_path / "d.txt").write_text(f"12\n6\n{len(trip)}\n" + body)
    a = load_dense_csv(tmp_path / "m.csv")
    b = load_uci_bow(tmp_path / "d.txt")
    for center in (False, True):
        np.testing.assert_allclose(a.covariance(center), b.covariance(center), atol=1e-12)
    np.testing.assert_allclose(b.covariance(), gram_from_data(M), atol=1e-12)


def test_dataset_vocab_mismatch():
    with pytest.raises(InvalidInput):
        Dataset("x", np.ones((2, 3)), vocabulary=["a"])


def test_psd_dataset_passthrough():
    ds = Dataset("p", np.eye(3), PSD)
    np.testing.assert_array_equal(ds.covariance(True), np.eye(3))


def test_synthetic_deterministic():
    a, b = synthetic_counts(seed=3), synthetic_counts(seed=3)
    assert a.matrix.shape == (200, 50) and np.array_equal(a.matrix, b.matrix)
    assert np.all(a.matrix >= 0) and np.all(a.matrix == np.round(a.matrix))
