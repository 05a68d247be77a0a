import math

import numpy as np
import pytest

from ustc.data import (
    DataFormatError,
    RawDataset,
    inject_uncertainty,
    load_ucr_tsv,
    planted_pattern,
    read_uncertain_tsv,
    save_ucr_tsv,
    smooth_subspace_like,
    write_uncertain_tsv,
)


def _write(tmp_path, text, name="Toy_TRAIN.tsv"):
    path = tmp_path / name
    path.write_text(text)
    return path


class TestLoader:
    def test_single_line(self, tmp_path):
        D = load_ucr_tsv(_write(tmp_path, "1\t0.5\t0.7\n"))
        assert D.labels.tolist() == ["1"]
        assert D.series.tolist() == [[0.5, 0.7]]
        assert D.name == "Toy"

    def test_grid_shape(self, tmp_path):
        rows = "\n".join("\t".join(["2"] + ["0.25"] * 16) for _ in range(3))
        D = load_ucr_tsv(_write(tmp_path, rows + "\n\n"))
        assert (D.n, D.m) == (3, 16)

    def test_ragged(self, tmp_path):
        with pytest.raises(DataFormatError, match=":2: ragged"):
            load_ucr_tsv(_write(tmp_path, "1\t0.5\t0.7\n2\t0.1\n"))

    def test_non_numeric(self, tmp_path):
        with pytest.raises(DataFormatError, match=r":2: column 3: non-numeric value 'x'"):
            load_ucr_tsv(_write(tmp_path, "1\t0.5\t0.7\n2\t0.1\tx\n"))

    def test_empty(self, tmp_path):
        with pytest.raises(DataFormatError, match="empty"):
            load_ucr_tsv(_write(tmp_path, "\n\n"))

    def test_round_trip(self, tmp_path, rng):
        D = RawDataset(rng.normal(size=(4, 7)), list("abab"), "R")
        save_ucr_tsv(D, tmp_path / "r.tsv")
        E = load_ucr_tsv(tmp_path / "r.tsv")
        np.testing.assert_array_equal(D.series, E.series)
        assert E.labels.tolist() == list("abab")

    def test_raw_dataset_invariants(self):
        with pytest.raises(ValueError):
            RawDataset(np.zeros((2, 3)), ["a"])
        with pytest.raises(ValueError):
            RawDataset(np.zeros((2, 3)), ["a", ""])
        with pytest.raises(ValueError):
            RawDataset(np.zeros((0, 3)), [])


class TestInjection:
    def test_zero_level(self, rng):
        D = RawDataset(rng.normal(size=(5, 6)), list("aabbb"))
        U = inject_uncertainty(D, 0.0, 7)
        np.testing.assert_array_equal(U.best, D.series)
        np.testing.assert_array_equal(U.delta, 0.0)

    def test_deterministic(self, rng):
        D = RawDataset(rng.normal(size=(5, 6)), list("aabbb"))
        a, b = inject_uncertainty(D, 0.7, 42), inject_uncertainty(D, 0.7, 42)
        assert a.best.tobytes() == b.best.tobytes()
        assert a.delta.tobytes() == b.delta.tobytes()
        c = inject_uncertainty(D, 0.7, 43)
        assert not np.array_equal(a.best, c.best)

    def test_draw_order_row_major(self):
        x = np.array([[0.0, 10.0], [2.0, 30.0]])
        U = inject_uncertainty(RawDataset(x, ["a", "b"]), 0.5, 3)
        z = np.random.default_rng(3).standard_normal(8)
        sigma = x.std(axis=0)
        s = 0.5 * np.abs(np.tile(sigma, 2) * z[0::2])
        np.testing.assert_allclose(U.delta.ravel(), s)
        np.testing.assert_allclose(U.best.ravel(), x.ravel() + s * z[1::2])

    def test_half_normal_mean(self):
        n, c = 10**6, 0.8
        column = np.where(np.arange(n) % 2 == 0, -1.5, 1.5)
        x = np.column_stack([column, np.zeros(n)])
        U = inject_uncertainty(RawDataset(x, ["a"] * n), c, 11)
        expected = c * 1.5 * math.sqrt(2 / math.pi)
        assert U.delta[:, 0].mean() == pytest.approx(expected, rel=0.01)
        assert not U.delta[:, 1].any()

    @pytest.mark.parametrize("c", [-0.1, math.inf, math.nan])
    def test_bad_level(self, c):
        with pytest.raises(ValueError):
            inject_uncertainty(RawDataset(np.zeros((2, 2)), ["a", "b"]), c, 0)


class TestUncertainFormat:
    def test_round_trip_exact(self, tmp_path, rng):
        D = inject_uncertainty(RawDataset(rng.normal(size=(6, 9)), list("xyzxyz"), "Q"), 1.3, 5)
        write_uncertain_tsv(D, tmp_path / "Q_TRAIN.tsv")
        E = read_uncertain_tsv(tmp_path / "Q_TRAIN.tsv")
        assert E.best.tobytes() == D.best.tobytes()
        assert E.delta.tobytes() == D.delta.tobytes()
        assert E.labels.tolist() == D.labels.tolist()
        assert E.name == "Q"

    def test_layout(self, tmp_path):
        path = _write(tmp_path, "A\t1.5:0.25\t-2.0:0.0\n")
        D = read_uncertain_tsv(path)
        assert D.best.tolist() == [[1.5, -2.0]]
        assert D.delta.tolist() == [[0.25, 0.0]]

    def test_errors(self, tmp_path):
        with pytest.raises(DataFormatError, match="best:delta"):
            read_uncertain_tsv(_write(tmp_path, "A\t1.5\n"))
        with pytest.raises(DataFormatError, match="ragged"):
            read_uncertain_tsv(_write(tmp_path, "A\t1:0\t2:0\nB\t1:0\n"))
        with pytest.raises(ValueError):
            read_uncertain_tsv(_write(tmp_path, "A\t1:-0.5\nB\t1:0\n"))


class TestSynthetic:
    def test_planted(self):
        D = planted_pattern(n_per_class=4, m=12, seed=1)
        assert (D.n, D.m) == (8, 12)
        for row in D.series[:4]:
            assert any(np.array_equal(row[o : o + 3], [0, 5, 0]) for o in range(10))

    def test_smooth_subspace_like(self):
        D = smooth_subspace_like(n_per_class=5, m=15, seed=2)
        assert (D.n, D.m) == (15, 15)
        assert sorted(set(D.labels)) == ["1", "2", "3"]
        with pytest.raises(ValueError):
            smooth_subspace_like(m=10)
