import math

import numpy as np
import pytest

from ustc.dissimilarity import Measure
from ustc.ordering import INTERVAL, NATURAL, SIMPLE, STOCHASTIC
from ustc.shapelet import (
    SearchStats,
    SelectionConfig,
    Shapelet,
    assess_candidate,
    best_split,
    candidate_count,
    gen_candidates,
    select_shapelets,
    transform_apply,
    transform_fit,
)
from ustc.uncertain import UncertainDataset, UncertainSeries

from conftest import U, series
import oracles

ORDERINGS = [SIMPLE, INTERVAL, STOCHASTIC]


class TestCandidates:
    def test_counts(self):
        T = series(np.arange(5.0))
        assert len(list(gen_candidates(T, 3, 4))) == 5 == candidate_count(5, 3, 4)
        assert [c for _, c in gen_candidates(T, 5, 5)] == [T]
        four = list(gen_candidates(series(np.arange(4.0)), 3, 3))
        assert [o for o, _ in four] == [0, 1]
        assert all(len(c) == 3 for _, c in four)

    def test_order_length_then_offset(self):
        got = [(len(c), o) for o, c in gen_candidates(series(np.arange(6.0)), 3, 5)]
        assert got == sorted(got)

    def test_bad_bounds(self):
        with pytest.raises(ValueError):
            list(gen_candidates(series(np.arange(4.0)), 3, 5))
        with pytest.raises(ValueError):
            list(gen_candidates(series(np.arange(4.0)), 3, 2))


class TestBestSplit:
    def test_perfect(self):
        s = best_split([U(1), U(2), U(8), U(9)], list("AABB"), SIMPLE)
        assert s.gain == pytest.approx(1.0)
        assert s.threshold == U(2)

    def test_interleaved(self):
        s = best_split([U(1), U(2), U(3), U(4)], list("ABAB"), SIMPLE)
        assert s.gain == pytest.approx(1 - 0.75 * oracles.entropy("BAB"))

    def test_hand_entropy_at_position_two(self):
        labels = list("AAAB")
        h = oracles.entropy(labels)
        assert h == pytest.approx(0.8113, abs=1e-4)
        manual = h - 0.5 * oracles.entropy("AA") - 0.5 * oracles.entropy("AB")
        assert manual == pytest.approx(0.3113, abs=1e-4)
        # position 3 isolates B and wins overall
        s = best_split([U(1), U(2), U(3), U(4)], labels, SIMPLE)
        assert s.position == 3
        assert s.gain == pytest.approx(h)

    def test_equal_neighbours_not_split(self):
        s = best_split([U(1), U(1), U(1), U(1)], list("AABB"), SIMPLE)
        assert s.gain == 0.0
        s = best_split([U(1, 0.5), U(1, 0.5), U(2)], list("ABB"), SIMPLE)
        assert s.position == 2

    def test_single_class(self):
        with pytest.raises(ValueError, match="single-class"):
            best_split([U(1), U(2)], ["A", "A"], SIMPLE)

    @pytest.mark.parametrize("strategy", ORDERINGS, ids=str)
    def test_against_oracle(self, strategy, rng):
        for _ in range(40):
            d = [U(b / 4, e / 4) for b, e in zip(rng.integers(0, 12, 9), rng.integers(0, 4, 9))]
            y = list(rng.choice(list("ABC"), 9))
            if len(set(y)) < 2:
                continue
            s = best_split(d, y, strategy)
            gain, thr = oracles.split(d, y, strategy)
            assert s.gain == pytest.approx(gain, abs=1e-12)
            assert s.threshold == thr


class TestAssess:
    def test_planted(self, planted_toy):
        cfg = SelectionConfig()
        assert assess_candidate(series([0, 5, 0]), planted_toy, cfg) == pytest.approx(1.0)

    def test_equidistant(self):
        D = UncertainDataset.certain([[1, 1, 1, 1], [1, 1, 1, 1], [1, 1, 1, 1]], list("ABA"))
        assert assess_candidate(series([0, 0, 0]), D, SelectionConfig()) == 0.0

    def test_two_series(self):
        D = UncertainDataset.certain([[0, 0, 0, 0], [3, 3, 3, 3]], list("AB"))
        assert assess_candidate(series([1, 1, 1]), D, SelectionConfig()) == pytest.approx(1.0)


class TestSelect:
    def test_planted_matches_exhaustive(self, planted_toy):
        found = select_shapelets(planted_toy, SelectionConfig(k=1, contract=math.inf))
        oracle = oracles.brute_force_top_k(
            planted_toy.best.tolist(), planted_toy.delta.tolist(), planted_toy.labels.tolist(), 3, 7, 1, SIMPLE
        )
        assert found[0].quality == pytest.approx(1.0)
        assert found[0].identity() == oracle[0][1]

    @pytest.mark.parametrize("strategy", ORDERINGS, ids=str)
    def test_k_saturates(self, strategy):
        rng = np.random.default_rng(3)
        best = rng.integers(0, 8, size=(4, 6)) / 4
        delta = rng.integers(0, 3, size=(4, 6)) / 4
        D = UncertainDataset(best, delta, list("AABB"))
        total = 4 * candidate_count(6, 3, 5)
        found = select_shapelets(D, SelectionConfig(k=1000, contract=math.inf, ordering=strategy))
        assert len(found) == total
        gains = [s.quality for s in found]
        assert gains == sorted(gains, reverse=True)
        oracle = oracles.brute_force_top_k(best.tolist(), delta.tolist(), list("AABB"), 3, 5, total, strategy)
        assert [s.identity() for s in found] == [o[1] for o in oracle]

    def test_micro_contract_returns_one(self, rng):
        D = UncertainDataset(rng.normal(size=(10, 30)), np.zeros((10, 30)), list("AB") * 5)
        stats = SearchStats()
        found = select_shapelets(D, SelectionConfig(k=5, contract=1e-6), stats)
        assert stats.evaluated == 1
        assert len(found) == 1
        assert stats.exhausted

    def test_contract_fake_clock(self, planted_toy):
        ticks = iter(range(10**6))
        stats = SearchStats()
        found = select_shapelets(
            planted_toy, SelectionConfig(k=3, contract=4.5), stats, clock=lambda: next(ticks)
        )
        assert 1 <= stats.evaluated < stats.total_candidates
        assert len(found) == min(3, stats.evaluated)

    def test_errors(self, planted_toy):
        with pytest.raises(ValueError):
            SelectionConfig(contract=0)
        with pytest.raises(ValueError):
            SelectionConfig(k=0)
        one = UncertainDataset.certain(planted_toy.best, list("AAAA"))
        with pytest.raises(ValueError):
            select_shapelets(one, SelectionConfig())
        with pytest.raises(ValueError):
            select_shapelets(planted_toy, SelectionConfig(min_len=2))
        with pytest.raises(ValueError):
            select_shapelets(planted_toy, SelectionConfig(max_len=8))

    def test_certain_measure_forces_natural(self):
        cfg = SelectionConfig(measure=Measure.DUST_UNIFORM, ordering=STOCHASTIC)
        assert cfg.ordering == NATURAL

    def test_stats_reset_between_calls(self, planted_toy):
        stats = SearchStats()
        cfg = SelectionConfig(contract=math.inf)
        select_shapelets(planted_toy, cfg, stats)
        first = stats.evaluated
        select_shapelets(planted_toy, cfg, stats)
        assert stats.evaluated == first == stats.total_candidates


class TestTransform:
    def _shapelet(self, D):
        return select_shapelets(D, SelectionConfig(k=1, contract=math.inf))

    def test_zscore_column(self):
        D = UncertainDataset.certain([[1, 1, 1, 1], [2, 2, 2, 2], [3, 3, 3, 3], [0, 0, 0, 0]], list("AABB"))
        S = self._shapelet(D)
        F = transform_fit(D, S)
        raw = F.raw_best[:, 0]
        np.testing.assert_allclose(F.best[:, 0], (raw - raw.mean()) / raw.std())
        np.testing.assert_array_equal(F.delta, 0.0)

    def test_population_std_example(self):
        zeros = Shapelet(series([0, 0, 0]), source_index=0, offset=0, quality=1.0)
        rows = np.sqrt([[1 / 3] * 4, [2 / 3] * 4, [1.0] * 4])
        F = transform_fit(UncertainDataset.certain(rows, list("ABA")), [zeros])
        np.testing.assert_allclose(F.raw_best[:, 0], [1, 2, 3], atol=1e-12)
        np.testing.assert_allclose(F.best[:, 0], [-1.2247, 0, 1.2247], atol=1e-4)

    def test_single_row_all_zero(self, planted_toy):
        S = self._shapelet(planted_toy)
        single = UncertainDataset(planted_toy.best[:1], planted_toy.delta[:1], ["A"])
        F = transform_fit(single, S)
        np.testing.assert_array_equal(F.best, 0.0)

    def test_apply_on_training_set_is_identity(self, planted_toy):
        S = select_shapelets(planted_toy, SelectionConfig(k=3, contract=math.inf))
        F = transform_fit(planted_toy, S)
        G = transform_apply(planted_toy, S, F)
        np.testing.assert_array_equal(F.best, G.best)
        np.testing.assert_array_equal(F.delta, G.delta)

    def test_apply_shape_and_centering(self, planted_toy):
        S = select_shapelets(planted_toy, SelectionConfig(k=2, contract=math.inf))
        F = transform_fit(planted_toy, S)
        G = transform_apply(UncertainDataset.certain(planted_toy.best[:1], ["A"]), S, F)
        assert G.shape == (1, 2)
        assert not G.fitted
        with pytest.raises(ValueError):
            transform_apply(planted_toy, S, G)

    def test_shapelet_too_long(self, planted_toy):
        S = self._shapelet(planted_toy)
        short = UncertainDataset.certain(planted_toy.best[:, :2], list("AABB"))
        with pytest.raises(ValueError, match="longer"):
            transform_fit(short, S)
