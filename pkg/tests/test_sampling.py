import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import stats

from multigoal import GridMap, Mask, Sampler, SamplerParams, load_mask, save_mask
from multigoal.sampling import (
    BRANCH_GUIDELINE,
    BRANCH_REGION,
    BRANCH_UNIFORM,
    hybrid_sample,
    hybrid_sample_with_branch,
    mask_sample,
    uniform_sample,
)

CHI2_ALPHA = 0.01


def chi2_uniform_ok(counts: np.ndarray) -> bool:
    counts = np.asarray(counts, dtype=float)
    expected = counts.sum() / counts.size
    statistic = ((counts - expected) ** 2 / expected).sum()
    critical = stats.chi2.ppf(1 - CHI2_ALPHA, df=counts.size - 1)
    return statistic <= critical


class TestSamplerParams:
    def test_defaults(self):
        p = SamplerParams()
        assert p.k1 == 0.7 and p.k2 == 0.4

    @pytest.mark.parametrize("k1,k2", [(0.3, 0.5), (-0.1, 0.0), (1.1, 0.2)])
    def test_invalid_rejected(self, k1, k2):
        with pytest.raises(ValueError):
            SamplerParams(k1=k1, k2=k2)


class TestUniformSample:
    def test_histogram_uniform_over_free_cells(self):
        grid = GridMap(np.zeros((10, 10), dtype=bool))
        rng = np.random.default_rng(7)
        counts = np.zeros(100, dtype=int)
        for _ in range(100_000):
            s = uniform_sample(grid, rng)
            counts[int(s.y) * 10 + int(s.x)] += 1
        assert chi2_uniform_ok(counts)

    def test_single_free_cell(self):
        occ = np.ones((5, 6), dtype=bool)
        occ[2, 3] = False
        grid = GridMap(occ)
        rng = np.random.default_rng(0)
        for _ in range(200):
            s = uniform_sample(grid, rng)
            assert 3.0 <= s.x < 4.0 and 2.0 <= s.y < 3.0

    def test_seeded_determinism(self, empty_grid_16):
        a = [uniform_sample(empty_grid_16, np.random.default_rng(42)) for _ in range(1)]
        runs = []
        for _ in range(2):
            rng = np.random.default_rng(42)
            runs.append([uniform_sample(empty_grid_16, rng) for _ in range(50)])
        assert runs[0] == runs[1]


class TestMaskSample:
    def test_single_cell(self):
        mask = Mask.from_cells(4, 4, [(0, 0)])
        rng = np.random.default_rng(3)
        for _ in range(100):
            s = mask_sample(mask, rng)
            assert 0.0 <= s.x < 1.0 and 0.0 <= s.y < 1.0

    def test_empty_mask_raises(self):
        with pytest.raises(ValueError, match="empty mask"):
            mask_sample(Mask.empty(4, 4), np.random.default_rng(0))

    def test_three_cells_equal_frequency(self):
        cells = [(0, 0), (2, 3), (5, 1)]
        mask = Mask.from_cells(8, 8, cells)
        rng = np.random.default_rng(9)
        counts = dict.fromkeys(cells, 0)
        for _ in range(100_000):
            s = mask_sample(mask, rng)
            counts[(int(s.y), int(s.x))] += 1
        assert chi2_uniform_ok(np.array(list(counts.values())))

    def test_full_mask_matches_uniform_grid_distribution(self):
        mask = Mask.full(6, 6)
        rng = np.random.default_rng(21)
        counts = np.zeros(36, dtype=int)
        for _ in range(72_000):
            s = mask_sample(mask, rng)
            counts[int(s.y) * 6 + int(s.x)] += 1
        assert chi2_uniform_ok(counts)

    @given(seed=st.integers(0, 1000), n_cells=st.integers(1, 12))
    @settings(max_examples=40, deadline=None)
    def test_output_always_in_set_cell(self, seed, n_cells):
        rng = np.random.default_rng(seed)
        rows = rng.integers(0, 9, size=n_cells)
        cols = rng.integers(0, 9, size=n_cells)
        mask = Mask.from_cells(9, 9, list(zip(rows.tolist(), cols.tolist())))
        for _ in range(25):
            s = mask_sample(mask, rng)
            assert mask.cell_set(int(s.y), int(s.x))


class TestHybridSample:
    def test_k1_one_k2_zero_is_pure_uniform_stream(self, empty_grid_16):
        params = SamplerParams(k1=1.0, k2=0.0)
        full = Mask.full(16, 16)
        a = np.random.default_rng(5)
        b = np.random.default_rng(5)
        for _ in range(100):
            s_hybrid, branch = hybrid_sample_with_branch(empty_grid_16, full, full, params, a)
            s_uniform = uniform_sample(empty_grid_16, b)
            assert branch == BRANCH_UNIFORM
            assert s_hybrid == s_uniform

    def test_k1_zero_always_guideline(self, empty_grid_16):
        params = SamplerParams(k1=0.0, k2=0.0)
        guide = Mask.from_cells(16, 16, [(3, 3)])
        rng = np.random.default_rng(1)
        for _ in range(100):
            s, branch = hybrid_sample_with_branch(empty_grid_16, None, guide, params, rng)
            assert branch == BRANCH_GUIDELINE
            assert (int(s.y), int(s.x)) == (3, 3)

    def test_branch_frequencies(self, empty_grid_64):
        params = SamplerParams(k1=0.7, k2=0.4)
        region = Mask.from_cells(64, 64, [(1, 1)])
        guide = Mask.from_cells(64, 64, [(2, 2)])
        rng = np.random.default_rng(77)
        counts = {BRANCH_GUIDELINE: 0, BRANCH_REGION: 0, BRANCH_UNIFORM: 0}
        n = 100_000
        for _ in range(n):
            _, branch = hybrid_sample_with_branch(empty_grid_64, region, guide, params, rng)
            counts[branch] += 1
        observed = np.array([counts[BRANCH_GUIDELINE], counts[BRANCH_REGION], counts[BRANCH_UNIFORM]])
        expected = np.array([0.3, 0.4, 0.3]) * n
        statistic = ((observed - expected) ** 2 / expected).sum()
        assert statistic <= stats.chi2.ppf(1 - CHI2_ALPHA, df=2)

    def test_empty_masks_fall_back_to_uniform(self, empty_grid_16):
        params = SamplerParams(k1=0.5, k2=0.5)
        rng = np.random.default_rng(2)
        for _ in range(200):
            _, branch = hybrid_sample_with_branch(empty_grid_16, None, None, params, rng)
            assert branch == BRANCH_UNIFORM

    def test_uniform_mass_positive_when_k1_gt_k2(self, empty_grid_16):
        params = SamplerParams(k1=0.6, k2=0.4)
        full = Mask.full(16, 16)
        rng = np.random.default_rng(4)
        branches = {
            hybrid_sample_with_branch(empty_grid_16, full, full, params, rng)[1]
            for _ in range(2000)
        }
        assert BRANCH_UNIFORM in branches

    def test_same_seed_same_stream(self, empty_grid_16):
        params = SamplerParams(k1=0.7, k2=0.4)
        region = Mask.from_cells(16, 16, [(5, 5), (6, 6)])
        guide = Mask.from_cells(16, 16, [(5, 5)])
        runs = []
        for _ in range(2):
            rng = np.random.default_rng(99)
            runs.append(
                [hybrid_sample(empty_grid_16, region, guide, params, rng) for _ in range(100)]
            )
        assert runs[0] == runs[1]


class TestSamplerInstance:
    def test_owns_rng_and_reproduces(self, empty_grid_16):
        a = Sampler(empty_grid_16, SamplerParams(seed=12))
        b = Sampler(empty_grid_16, SamplerParams(seed=12))
        assert [a.draw() for _ in range(40)] == [b.draw() for _ in range(40)]


class TestMaskIO:
    def test_png_round_trip(self, tmp_path):
        rng = np.random.default_rng(8)
        mask = Mask(rng.random((17, 23)) < 0.3)
        save_mask(mask, tmp_path / "m.png")
        assert load_mask(tmp_path / "m.png") == mask

    def test_containment_after_intersect(self):
        rng = np.random.default_rng(3)
        a = Mask(rng.random((9, 9)) < 0.5)
        b = Mask(rng.random((9, 9)) < 0.5)
        inter = a.intersect(b)
        assert not (inter.bits & ~a.bits).any()
        assert not (inter.bits & ~b.bits).any()
