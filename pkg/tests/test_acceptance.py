"""Acceptance criteria, one test (and one summary line) each."""

import math
import random
import time
from fractions import Fraction

from conftest import random_support
from thincirc.construction import (
    ConstructionParams,
    construct_thin_circulant,
    failure_probability_bound,
    sample_support,
    weight_threshold,
)
from thincirc.core import SupportSet, embed_double
from thincirc.experiment import SweepSpec, density_sweep
from thincirc.freeness import find_block_naive, find_rectangle_integer, is_free_cyclic
from thincirc.rectangles import verify_lemma1, verify_lemma2, verify_lemma3
from thincirc.rho import rho_by_max, rho_closed
from thincirc.sumset import (
    SumsetBoundQuery,
    _case_values,
    affine_dim,
    min_sumset_grid_exhaustive,
    min_sumset_size,
    min_sumset_by_partition_search,
    minkowski_sum,
    partitions,
    ruzsa_bound,
    ruzsa_refined_bound,
    simplex_pair,
    simplex_pair_sum_size,
)


def _grid(kmax, lmax, kmin=2):
    return [(K, L) for K in range(kmin, kmax + 1) for L in range(K, lmax + 1)]


def test_c01_rho_closed_matches_max(criterion):
    t0 = time.perf_counter()
    pairs = _grid(40, 40)
    bad = [(K, L) for K, L in pairs if rho_closed(K, L).value != rho_by_max(K, L).value]
    spots = (rho_closed(2, 2).value == 1 and rho_closed(3, 3).value == Fraction(5, 6)
             and all(rho_closed(2, L).value == Fraction(L + 2, 2 * L) for L in range(2, 41)))
    dt = time.perf_counter() - t0
    ok = len(pairs) == 780 and not bad and spots and dt < 10
    assert criterion("1 rho closed form = max", ok, f"{len(pairs)} pairs, {len(bad)} mismatches, {dt:.2f}s")


def test_c02_rho_strict_upper_bound(criterion):
    bad = [(K, L) for K, L in _grid(64, 64, kmin=3)
           if not rho_closed(K, L).value < Fraction(K + L + 2, K * L)]
    assert criterion("2 rho < (K+L+2)/(KL)", not bad, f"{len(bad)} violations")


def test_c03_dim_theorem_matches_partition_oracle(criterion):
    t0 = time.perf_counter()
    bad, boundary_bad, cells = [], [], 0
    for K, L in _grid(12, 12):
        for n in range(1, K + L - 1):
            cells += 1
            q = SumsetBoundQuery(n, K, L)
            if min_sumset_size(q) != min_sumset_by_partition_search(q):
                bad.append((K, L, n))
            if n in (L - K, L) and n != K + L - 2:
                vals = _case_values(n, K, L)
                if len(vals) < 2 or len(set(vals.values())) != 1:
                    boundary_bad.append((K, L, n, vals))
    dt = time.perf_counter() - t0
    ok = not bad and not boundary_bad and dt < 5
    assert criterion("3 dim theorem = partition oracle", ok,
                     f"{cells} cells, {len(bad)} mismatches, {len(boundary_bad)} boundary, {dt:.2f}s")


def _all_triples(Lmax):
    for K, L in _grid(Lmax, Lmax):
        for n in range(1, K + L):
            for part in partitions(K, L, n):
                yield K, L, n, part


def test_c04a_sum_formula_cardinality(criterion):
    t0 = time.perf_counter()
    bad, count = [], 0
    for K, L, n, part in _all_triples(8):
        count += 1
        a, b = simplex_pair(K, L, *part)
        if simplex_pair_sum_size(K, L, *part) != len(minkowski_sum(a, b)):
            bad.append((K, L, part))
    dt = time.perf_counter() - t0
    ok = not bad and dt < 30
    assert criterion("4a sum formula = |A+B|", ok, f"{count} triples, {len(bad)} mismatches, {dt:.2f}s")


def test_c04b_sum_dimension_equals_n(criterion):
    # Literal check of the dimension clause. Triples with s + s_a = K - 1 and
    # s + s_b = L - 1 have single-point progressions, so axis 1 is never
    # spanned and the sum has dimension n - 1; this clause cannot hold there.
    t0 = time.perf_counter()
    bad, count = [], 0
    for K, L, n, part in _all_triples(8):
        count += 1
        a, b = simplex_pair(K, L, *part)
        if affine_dim(minkowski_sum(a, b)) != n:
            bad.append((K, L, part))
    dt = time.perf_counter() - t0
    ok = not bad and dt < 30
    assert criterion("4b dim(A+B) = n for every triple", ok,
                     f"{count} triples, {len(bad)} with dim n-1, {dt:.2f}s")


def test_c05_bound_chain(criterion):
    bad = []
    for K, L in _grid(12, 12):
        for n in range(1, K + L - 1):
            r1, r2 = ruzsa_bound(n, K, L), ruzsa_refined_bound(n, K, L)
            m = min_sumset_size(SumsetBoundQuery(n, K, L))
            if not r1 <= r2 <= m:
                bad.append((K, L, n, r1, r2, m))
    assert criterion("5 ruzsa <= refined <= min", not bad, f"{len(bad)} violations")


def test_c06_grid_spot_checks(criterion):
    t0 = time.perf_counter()
    bad = []
    for K, L, n in [(2, 2, 1), (2, 2, 2), (2, 3, 1), (2, 3, 2), (3, 3, 2)]:
        got = min_sumset_grid_exhaustive(K, L, n, 2)
        want = min_sumset_size(SumsetBoundQuery(n, K, L))
        if got != want:
            bad.append((K, L, n, got, want))
    dt = time.perf_counter() - t0
    ok = not bad and dt < 60
    assert criterion("6 grid search = theorem", ok, f"{len(bad)} mismatches, {dt:.2f}s")


def test_c07_lemma_batches(criterion):
    t0 = time.perf_counter()
    summary = []
    for k, l, N in [(2, 2, 8), (2, 3, 6), (3, 3, 5)]:
        for check in (verify_lemma1, verify_lemma2, verify_lemma3):
            rep = check(N, k, l)
            summary.append((rep.lemma, k, l, N, len(rep.violations)))
    dt = time.perf_counter() - t0
    violations = sum(s[-1] for s in summary)
    ok = violations == 0 and dt < 120
    assert criterion("7 lemma batches", ok, f"{violations} violations, {dt:.2f}s")


def test_c08_verifier_cross_validation(criterion):
    t0 = time.perf_counter()
    rng = random.Random(8)
    disagree = with_rect = 0
    for _ in range(500):
        N = rng.randint(2, 24)
        k, l = rng.choice([2, 3]), rng.choice([2, 3])
        s = random_support(rng, N, rng.uniform(0.05, 0.6))
        m = embed_double(s)
        found = {find_rectangle_integer(s, k, l) is not None,
                 find_block_naive(m, k, l, limit=48) is not None,
                 is_free_cyclic(m, k, l) is not None}
        disagree += len(found) > 1
        with_rect += True in found
    nested_bad = 0
    for _ in range(100):
        N = rng.randint(4, 24)
        k, l = rng.choice([2, 3]), rng.choice([2, 3])
        big = random_support(rng, N, rng.uniform(0.1, 0.6))
        small = SupportSet(N, tuple(x for x in big.members if rng.random() < 0.6))
        if find_rectangle_integer(small, k, l) is not None and find_rectangle_integer(big, k, l) is None:
            nested_bad += 1
    dt = time.perf_counter() - t0
    ok = disagree == 0 and nested_bad == 0 and dt < 60
    assert criterion("8 verifier agreement", ok,
                     f"{disagree} disagreements ({with_rect}/500 non-free), {nested_bad} monotonicity breaks, {dt:.2f}s")


def test_c09_construction(criterion):
    params = ConstructionParams(512, 2, 2, density_scale=1, seed=20111)
    r1 = construct_thin_circulant(params)
    r2 = construct_thin_circulant(params)
    s = r1.matrix.row
    refree = find_rectangle_integer(SupportSet(512, s.members), 2, 2) is None
    ok = r1.trials_used <= 100 and refree and r1.to_dict() == r2.to_dict()
    assert criterion("9 construction sound and reproducible", ok,
                     f"trials={r1.trials_used}, gamma={r1.row_weight}, {r1.accepted_on}")


def test_c10_weight_concentration(criterion):
    t0 = time.perf_counter()
    N, p, samples = 10**5, 0.01, 1000
    thr = weight_threshold(p, N)
    hits = sum(len(sample_support(N, p, 10, t)) >= thr for t in range(samples))
    frac = hits / samples
    sigma = math.sqrt(0.75 * 0.25 / samples)
    dt = time.perf_counter() - t0
    ok = frac >= 0.75 - 3 * sigma and dt < 30
    assert criterion("10 weight concentration", ok, f"fraction={frac:.3f}, floor={0.75 - 3 * sigma:.3f}, {dt:.2f}s")


def test_c11_union_bound_floor(criterion):
    rows = density_sweep(SweepSpec((256, 512, 1024), 2, 2, (1.0,), samples=200, seed=11))
    sigma = math.sqrt(0.32 * 0.68 / 200)
    low = [(r.N, r.free_frac) for r in rows if not r.free_frac >= 0.32 - 3 * sigma]
    bounds_bad = [(k, l) for k, l in _grid(64, 64) if failure_probability_bound(k, l) > math.e / 4]
    fracs = ", ".join(f"{r.N}:{r.free_frac:.3f}" for r in rows)
    ok = not low and not bounds_bad
    assert criterion("11 freeness at reference density", ok,
                     f"free fractions {fracs}; {len(bounds_bad)} bound violations")
