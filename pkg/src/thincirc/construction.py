"""Randomized (Las Vegas) construction of thin circulants.

Each trial draws a Bernoulli(p) support S of [0, N), checks with the exact
integer-sums search that no k x l rectangle has all its sums in S, and
checks the row weight against pN - 2 sqrt(pN). An accepted S is returned
as the padded 2N x 2N plus-circulant, which is (k,l)-free exactly when S
has no such rectangle.

Randomness is counter-based: trial t of a run with seed s draws its bits
from Philox keyed by (s, *stream, t, block), one key per 2**16 indices, so
any trial can be replayed in isolation and in any order.
"""

from __future__ import annotations

import logging
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, asdict
from fractions import Fraction

import numpy as np

from thincirc.core import CirculantMatrix, SupportSet, embed_double, matrix_to_dict
from thincirc.errors import BudgetExhausted, InvalidArgument
from thincirc.freeness import DEFAULT_BUDGET, find_rectangle_integer
from thincirc.rho import rho_closed

log = logging.getLogger(__name__)

BLOCK = 1 << 16

FREENESS_AND_WEIGHT = "freeness_and_weight"
FREENESS_ONLY = "freeness_only"


@dataclass(frozen=True)
class ConstructionParams:
    N: int
    k: int
    l: int
    density_scale: Fraction | float = 1
    max_trials: int = 100
    seed: int = 0
    budget: int = DEFAULT_BUDGET

    def __post_init__(self):
        if not (2 <= self.k <= self.l):
            raise InvalidArgument(f"need 2 <= k <= l (got k={self.k}, l={self.l})")
        if self.N < 2:
            raise InvalidArgument("N must be at least 2")
        if self.density_scale < 0:
            raise InvalidArgument("density_scale must be non-negative")
        if self.max_trials < 1:
            raise InvalidArgument("max_trials must be positive")
        if not 0 <= self.seed < 2**64:
            raise InvalidArgument("seed must fit in 64 bits")

    @property
    def p(self) -> float:
        return min(1.0, max(0.0, float(self.density_scale) * reference_density(self.k, self.l, self.N)))


@dataclass(frozen=True)
class ConstructionResult:
    params: ConstructionParams
    matrix: CirculantMatrix
    trials_used: int
    row_weight: int
    threshold: float
    accepted_on: str
    p: float

    def to_dict(self) -> dict:
        params = asdict(self.params)
        params["density_scale"] = str(self.params.density_scale)
        return {
            "params": params,
            "p": self.p,
            "trials_used": self.trials_used,
            "gamma": self.row_weight,
            "threshold": self.threshold,
            "accepted_on": self.accepted_on,
            "weight": self.matrix.n * self.row_weight,
            "matrix": matrix_to_dict(self.matrix),
        }


@dataclass
class TrialRecord:
    trial: int
    gamma: int
    outcome: str
    witness: dict | None = None


class ConstructionFailed(RuntimeError):
    def __init__(self, params: ConstructionParams, trials: list[TrialRecord]):
        super().__init__(f"no acceptable support in {len(trials)} trials")
        self.params = params
        self.trials = trials

    def to_dict(self) -> dict:
        return {"error": str(self), "trials": [asdict(t) for t in self.trials]}


def reference_density(k: int, l: int, N: int) -> float:
    """((k + l) / (e k^2 l^2)) * N^(-rho(k, l))."""
    if not (2 <= k <= l) or N < 2:
        raise InvalidArgument(f"need 2 <= k <= l and N >= 2 (got k={k}, l={l}, N={N})")
    rho = rho_closed(k, l).value
    return (k + l) / (math.e * k * k * l * l) * N ** (-float(rho))


def weight_threshold(p: float, N: int) -> float:
    """pN - 2 sqrt(pN); non-positive values make the weight test vacuous."""
    mean = p * N
    return mean - 2.0 * math.sqrt(mean)


def sample_support(N: int, p: float, seed: int, trial: int = 0,
                   stream: tuple[int, ...] = ()) -> SupportSet:
    if not 0.0 <= p <= 1.0:
        raise InvalidArgument(f"p must lie in [0, 1], got {p}")
    if p == 0.0 or N == 0:
        return SupportSet(N, ())
    members = []
    for block, start in enumerate(range(0, N, BLOCK)):
        size = min(BLOCK, N - start)
        key = np.random.SeedSequence([seed, *stream, trial, block])
        rng = np.random.Generator(np.random.Philox(key))
        hits = np.flatnonzero(rng.random(size) < p)
        members.extend((hits + start).tolist())
    return SupportSet(N, tuple(members))


def _run_trial(params: ConstructionParams, p: float, threshold: float, t: int):
    s = sample_support(params.N, p, params.seed, t)
    gamma = len(s)
    try:
        w = find_rectangle_integer(s, params.k, params.l, budget=params.budget)
    except BudgetExhausted:
        return s, TrialRecord(t, gamma, "budget_exhausted")
    if w is not None:
        return s, TrialRecord(t, gamma, "rectangle", w.to_dict())
    if threshold > 0 and gamma < threshold:
        return s, TrialRecord(t, gamma, "weight_below_threshold")
    return s, TrialRecord(t, gamma, "accepted")


def _run_trial_packed(args):
    params, p, threshold, t = args
    s, rec = _run_trial(params, p, threshold, t)
    return s.members, rec


def construct_thin_circulant(params: ConstructionParams, *, jobs: int = 1) -> ConstructionResult:
    """Sample supports until one is (k,l)-free (and heavy enough when the
    weight threshold is positive). Raises ConstructionFailed after
    ``max_trials`` rejections; never returns an unverified matrix.

    With ``jobs > 1`` trials run in batches on worker processes; the
    accepted trial is still the lowest-indexed success.
    """
    p = params.p
    threshold = weight_threshold(p, params.N)
    accepted_on = FREENESS_AND_WEIGHT if threshold > 0 else FREENESS_ONLY
    records: list[TrialRecord] = []

    def accept(s, rec):
        log.info("accepted trial %d with gamma=%d", rec.trial, rec.gamma)
        return ConstructionResult(params, embed_double(s), rec.trial + 1,
                                  len(s), threshold, accepted_on, p)

    if jobs <= 1:
        for t in range(params.max_trials):
            s, rec = _run_trial(params, p, threshold, t)
            records.append(rec)
            if rec.outcome == "accepted":
                return accept(s, rec)
            log.debug("trial %d rejected: %s", t, rec.outcome)
        raise ConstructionFailed(params, records)

    with ProcessPoolExecutor(max_workers=jobs) as pool:
        for start in range(0, params.max_trials, jobs):
            batch = range(start, min(start + jobs, params.max_trials))
            results = list(pool.map(_run_trial_packed,
                                    [(params, p, threshold, t) for t in batch]))
            for members, rec in results:
                records.append(rec)
                if rec.outcome == "accepted":
                    return accept(SupportSet(params.N, members), rec)
    raise ConstructionFailed(params, records)


def failure_probability_bound(k: int, l: int) -> float:
    """e * sum_{n=3}^{k+l} ((k+l)/(k^2 l^2))^(n-1): the union bound on the
    chance that a sample at the reference density has a forbidden block."""
    if not (2 <= k <= l):
        raise InvalidArgument(f"need 2 <= k <= l (got k={k}, l={l})")
    q = Fraction(k + l, k * k * l * l)
    total = sum(q ** (n - 1) for n in range(3, k + l + 1))
    return math.e * float(total)
