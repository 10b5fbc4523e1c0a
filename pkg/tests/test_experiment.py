import csv
import io
import math
from fractions import Fraction

import pytest

from thincirc.construction import reference_density
from thincirc.errors import InvalidArgument
from thincirc.experiment import (
    ASYMPTOTIC_NOTE,
    CSV_COLUMNS,
    SweepSpec,
    corollary_report,
    density_sweep,
    rows_to_csv,
)


def test_zero_and_full_density_columns():
    spec = SweepSpec((32, 64), 2, 2, (0.0, 1e9), samples=5, seed=1)
    rows = density_sweep(spec)
    zero = [r for r in rows if r.scale == 0.0]
    full = [r for r in rows if r.scale == 1e9]
    assert all(r.free_frac == 1.0 and r.mean_gamma == 0 for r in zero)
    assert all(r.p == 1.0 and r.free_frac == 0.0 and math.isinf(r.mean_trials) for r in full)


def test_sweep_deterministic_and_sorted():
    spec = SweepSpec((60, 30), 2, 2, (2000.0, 500.0), samples=20, seed=7)
    a, b = density_sweep(spec), density_sweep(spec)
    assert rows_to_csv(a) == rows_to_csv(b)
    assert [(r.N, r.scale) for r in a] == [(30, 500.0), (30, 2000.0), (60, 500.0), (60, 2000.0)]
    assert rows_to_csv(density_sweep(spec, jobs=2)) == rows_to_csv(a)


def test_csv_columns():
    rows = density_sweep(SweepSpec((16,), 2, 2, (1.0,), samples=3))
    reader = csv.reader(io.StringIO(rows_to_csv(rows)))
    header = next(reader)
    assert header == CSV_COLUMNS
    assert len(next(reader)) == len(CSV_COLUMNS)


def test_freeness_non_increasing_in_scale():
    N = 48
    base = reference_density(2, 2, N)
    scales = tuple(p / base for p in (0.05, 0.1, 0.2, 0.3))
    rows = density_sweep(SweepSpec((N,), 2, 2, scales, samples=200, seed=11))
    fr = [r.free_frac for r in rows]
    for lo, hi in zip(fr, fr[1:]):
        sigma = math.sqrt(max(lo * (1 - lo), hi * (1 - hi), 1e-4) / 200)
        assert hi <= lo + 3 * sigma


def test_spec_from_dict():
    spec = SweepSpec.from_dict({"N": [8], "k": 2, "l": 3, "scales": [1], "samples": 2})
    assert spec.N_values == (8,) and spec.seed == 0
    with pytest.raises(InvalidArgument):
        SweepSpec.from_dict({"N": [8]})
    with pytest.raises(InvalidArgument):
        SweepSpec((8,), 3, 2, (1.0,), 1)


def test_corollary_large():
    N = 2 ** 16
    rep = corollary_report(N)
    assert rep.k == rep.l == 16
    assert rep.rho == Fraction(9, 68)
    assert rep.weight_bound == pytest.approx(32 / 65536 * N ** (2 - 9 / 68))
    assert rep.note == ASYMPTOTIC_NOTE
    assert rep.magnitudes["N^2/log^3N"] == pytest.approx(N * N / 16 ** 3)


def test_corollary_small():
    rep = corollary_report(16)
    assert rep.k == 4 and rep.rho == Fraction(3, 5)
    assert rep.weight_bound == pytest.approx(8 / 256 * 16 ** 1.4)
    assert rep.weight_bound == pytest.approx(1.52, abs=0.01)


@pytest.mark.parametrize("N", [4, 5, 8, 9, 100, 1023, 1024, 1025, 10**6])
def test_corollary_k_is_ceil_log2(N):
    rep = corollary_report(N)
    assert 2 ** (rep.k - 1) < N <= 2 ** rep.k
    # re-derivable arithmetic
    coef = Fraction(rep.k + rep.l, rep.k ** 2 * rep.l ** 2)
    assert rep.weight_bound == pytest.approx(float(coef) * N ** (2 - float(rep.rho)))


def test_corollary_rejects_small_n():
    with pytest.raises(InvalidArgument):
        corollary_report(3)
