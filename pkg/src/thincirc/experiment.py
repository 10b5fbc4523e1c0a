"""Density sweeps and the corollary reference report."""

from __future__ import annotations

import csv
import io
import json
import logging
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from fractions import Fraction

from thincirc.construction import reference_density, sample_support
from thincirc.errors import BudgetExhausted, InvalidArgument
from thincirc.freeness import DEFAULT_BUDGET, find_rectangle_integer
from thincirc.rho import rho_closed

log = logging.getLogger(__name__)

CSV_COLUMNS = ["N", "k", "l", "scale", "p", "samples", "free_frac",
               "mean_gamma", "mean_trials", "seed"]

ASYMPTOTIC_NOTE = "asymptotic, constant unspecified"


@dataclass(frozen=True)
class SweepSpec:
    N_values: tuple[int, ...]
    k: int
    l: int
    scales: tuple[float, ...]
    samples: int
    seed: int = 0
    budget: int = DEFAULT_BUDGET

    def __post_init__(self):
        if not (2 <= self.k <= self.l):
            raise InvalidArgument("need 2 <= k <= l")
        if not self.N_values or min(self.N_values) < 2:
            raise InvalidArgument("N values must be >= 2")
        if any(s < 0 for s in self.scales):
            raise InvalidArgument("scales must be non-negative")
        if self.samples < 1:
            raise InvalidArgument("samples must be positive")

    @classmethod
    def from_dict(cls, d: dict) -> "SweepSpec":
        try:
            return cls(
                N_values=tuple(int(n) for n in d["N"]),
                k=int(d["k"]),
                l=int(d["l"]),
                scales=tuple(float(s) for s in d["scales"]),
                samples=int(d["samples"]),
                seed=int(d.get("seed", 0)),
                budget=int(d.get("budget", DEFAULT_BUDGET)),
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise InvalidArgument(f"bad sweep spec: {exc}") from None


@dataclass
class SweepRow:
    N: int
    k: int
    l: int
    scale: float
    p: float
    samples: int
    free_frac: float
    mean_gamma: float
    mean_trials: float
    seed: int
    exhausted: int = 0


def run_cell(spec: SweepSpec, n_index: int, scale_index: int) -> SweepRow:
    """One (N, scale) cell.

    Samples that exhaust the verifier budget are left out of ``free_frac``
    and counted in ``exhausted``. ``mean_gamma`` averages the row weight
    over free samples; ``mean_trials`` is decided samples per free sample,
    the expected Las Vegas trial count (inf when nothing was free).
    """
    N = spec.N_values[n_index]
    scale = spec.scales[scale_index]
    p = min(1.0, scale * reference_density(spec.k, spec.l, N))
    free, exhausted, gammas = 0, 0, []
    for t in range(spec.samples):
        s = sample_support(N, p, spec.seed, t, stream=(n_index, scale_index))
        try:
            w = find_rectangle_integer(s, spec.k, spec.l, budget=spec.budget)
        except BudgetExhausted:
            exhausted += 1
            continue
        if w is None:
            free += 1
            gammas.append(len(s))
    decided = spec.samples - exhausted
    if exhausted:
        log.warning("N=%d scale=%g: %d samples exhausted the verifier budget",
                    N, scale, exhausted)
    return SweepRow(
        N=N, k=spec.k, l=spec.l, scale=scale, p=p, samples=spec.samples,
        free_frac=free / decided if decided else math.nan,
        mean_gamma=sum(gammas) / len(gammas) if gammas else math.nan,
        mean_trials=decided / free if free else math.inf,
        seed=spec.seed, exhausted=exhausted,
    )


def _cell(args):
    return run_cell(*args)


def density_sweep(spec: SweepSpec, *, jobs: int = 1) -> list[SweepRow]:
    cells = [(spec, i, j) for i in range(len(spec.N_values)) for j in range(len(spec.scales))]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            rows = list(pool.map(_cell, cells))
    else:
        rows = [_cell(c) for c in cells]
    rows.sort(key=lambda r: (r.N, r.scale))
    return rows


def rows_to_csv(rows: list[SweepRow]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    for r in rows:
        w.writerow([getattr(r, c) if not isinstance(getattr(r, c), float)
                    else repr(getattr(r, c)) for c in CSV_COLUMNS])
    return buf.getvalue()


def rows_to_json(rows: list[SweepRow]) -> str:
    return json.dumps([asdict(r) for r in rows], indent=2, default=str)


@dataclass
class CorollaryReport:
    N: int
    k: int
    l: int
    rho: Fraction
    weight_bound: float
    corollary_bound: float
    magnitudes: dict = field(default_factory=dict)
    note: str = ASYMPTOTIC_NOTE

    def to_dict(self) -> dict:
        d = asdict(self)
        d["rho"] = str(self.rho)
        d["rho_float"] = float(self.rho)
        return d


def corollary_report(N: int) -> CorollaryReport:
    """Weight bound at k = l = ceil(log2 N) and the log-power reference
    magnitudes N^2 / log^j N (log base 2) for j = 3..6."""
    if N < 4:
        raise InvalidArgument("corollary report needs N >= 4")
    k = math.ceil(math.log2(N))
    # guard against float rounding at exact powers of two
    while 2 ** (k - 1) >= N:
        k -= 1
    while 2 ** k < N:
        k += 1
    l = k
    rho = rho_closed(k, l).value
    coef = Fraction(k + l, k * k * l * l)
    bound = float(coef) * N ** (2 - float(rho))
    cor = float(coef) * N ** (2 - (k + l + 2) / (k * l))
    lg = math.log2(N)
    mags = {f"N^2/log^{j}N": N * N / lg ** j for j in (3, 4, 5, 6)}
    return CorollaryReport(N, k, l, rho, bound, cor, mags)
