import math
from fractions import Fraction

import pytest

from thincirc.construction import (
    BLOCK,
    FREENESS_ONLY,
    ConstructionFailed,
    ConstructionParams,
    construct_thin_circulant,
    failure_probability_bound,
    reference_density,
    sample_support,
    weight_threshold,
)
from thincirc.core import weight
from thincirc.errors import InvalidArgument
from thincirc.freeness import find_block_naive, find_rectangle_integer


def test_reference_density_examples():
    assert reference_density(2, 2, 1024) == pytest.approx(1 / (4 * math.e * 1024), rel=1e-12)
    assert reference_density(2, 2, 1024) == pytest.approx(8.98e-5, rel=1e-3)
    # rho(3,3) = 5/6 and 4096^(5/6) = 2^10
    assert reference_density(3, 3, 4096) == pytest.approx(6 / (81 * math.e) / 1024, rel=1e-12)
    assert reference_density(3, 3, 4096) == pytest.approx(2.66e-5, rel=1e-2)
    with pytest.raises(InvalidArgument):
        reference_density(3, 2, 100)


def test_sample_extremes():
    assert sample_support(50, 0.0, 1).members == ()
    assert sample_support(50, 1.0, 1).members == tuple(range(50))
    with pytest.raises(InvalidArgument):
        sample_support(10, 1.5, 0)


def test_sample_concentration():
    N, p = 10**5, 0.01
    sigma = math.sqrt(N * p * (1 - p))
    for seed in range(3):
        assert abs(len(sample_support(N, p, seed)) - N * p) <= 10 * sigma


def test_sample_deterministic_and_streams_differ():
    a = sample_support(3 * BLOCK + 17, 0.001, 42, trial=3)
    b = sample_support(3 * BLOCK + 17, 0.001, 42, trial=3)
    c = sample_support(3 * BLOCK + 17, 0.001, 42, trial=4)
    assert a == b and a.members != c.members
    # a block's bits do not depend on how many blocks follow it
    short = sample_support(BLOCK, 0.001, 42, trial=3)
    assert short.members == tuple(m for m in a.members if m < BLOCK)


def test_weight_threshold_examples():
    assert weight_threshold(0.01, 10**5) == pytest.approx(1000 - 2 * math.sqrt(1000))
    assert weight_threshold(0.01, 10**5) == pytest.approx(936.75, abs=0.01)
    assert weight_threshold(0.5, 8) == 0
    assert weight_threshold(0.1, 20) < 0


def test_scale_zero_accepts_empty():
    res = construct_thin_circulant(ConstructionParams(64, 2, 2, density_scale=0, seed=5))
    assert res.trials_used == 1 and res.row_weight == 0
    assert res.accepted_on == FREENESS_ONLY and weight(res.matrix).weight == 0
    assert res.matrix.n == 128


def test_dense_single_trial_rejected():
    scale = Fraction(0.5) / Fraction(reference_density(2, 2, 64))
    params = ConstructionParams(64, 2, 2, density_scale=scale, max_trials=1, seed=9)
    assert params.p == pytest.approx(0.5)
    with pytest.raises(ConstructionFailed) as info:
        construct_thin_circulant(params)
    (rec,) = info.value.trials
    assert rec.outcome == "rectangle" and rec.witness["mode"] == "integer_sums"


def test_reference_density_construction_succeeds_and_is_reproducible():
    params = ConstructionParams(512, 2, 2, seed=2011)
    r1 = construct_thin_circulant(params)
    r2 = construct_thin_circulant(params)
    assert r1 == r2 and r1.to_dict() == r2.to_dict()
    assert r1.trials_used <= 100
    s = r1.matrix.row
    assert find_rectangle_integer(s.__class__(512, s.members), 2, 2) is None
    assert weight(r1.matrix).weight == 2 * 512 * r1.row_weight


def test_soundness_against_naive_oracle():
    for seed in range(20):
        for N in (12, 18, 24):
            scale = 0.3 / reference_density(2, 2, N)
            params = ConstructionParams(N, 2, 2, density_scale=scale, max_trials=200, seed=seed)
            res = construct_thin_circulant(params)
            assert find_block_naive(res.matrix, 2, 2, limit=48) is None
            assert res.matrix.row.members and max(res.matrix.row.members) < N or res.row_weight == 0


def test_parallel_trials_pick_lowest_index():
    scale = 0.12 / reference_density(2, 3, 40)
    params = ConstructionParams(40, 2, 3, density_scale=scale, max_trials=60, seed=3)
    assert construct_thin_circulant(params) == construct_thin_circulant(params, jobs=3)


def test_params_validation():
    with pytest.raises(InvalidArgument):
        ConstructionParams(10, 3, 2)
    with pytest.raises(InvalidArgument):
        ConstructionParams(1, 2, 2)
    with pytest.raises(InvalidArgument):
        ConstructionParams(10, 2, 2, density_scale=-1)
    assert ConstructionParams(10, 2, 2, density_scale=10**9).p == 1.0


def test_failure_bound_values():
    assert failure_probability_bound(2, 2) == pytest.approx(5 * math.e / 64)
    assert failure_probability_bound(2, 2) == pytest.approx(0.2124, abs=1e-4)
    q = 6 / 81
    assert failure_probability_bound(3, 3) == pytest.approx(math.e * sum(q ** (n - 1) for n in range(3, 7)))
    assert failure_probability_bound(3, 3) == pytest.approx(0.0161, abs=1e-4)
