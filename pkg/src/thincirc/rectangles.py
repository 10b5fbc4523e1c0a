"""Rectangles (a_1..a_k, b_1..b_l), their sum-coincidence systems, and
batch checks of the class-counting lemmas.

Variables are ordered x_1..x_k, y_1..y_l (column index i < k is x_{i+1},
column k + j is y_{j+1}). A rectangle's system has one equation
x_r + y_s - x_u - y_v = 0 for every pair of cells with equal sums.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import combinations, permutations
from math import comb, lcm
from typing import Iterator, Sequence

from thincirc.errors import BudgetExhausted, InvalidArgument
from thincirc.linalg import nullspace_parametrization, rank
from thincirc.rho import rho_closed
from thincirc.sumset import PointSet, affine_dim, minkowski_sum

ENUM_LIMIT = 10**8


@dataclass(frozen=True)
class Rectangle:
    a: tuple[int, ...]
    b: tuple[int, ...]

    def __post_init__(self):
        a, b = tuple(self.a), tuple(self.b)
        if len(set(a)) != len(a) or len(set(b)) != len(b):
            raise InvalidArgument("rectangle blocks must have pairwise distinct entries")
        if any(v < 0 for v in a + b):
            raise InvalidArgument("rectangle coordinates must be non-negative")
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)

    @property
    def k(self):
        return len(self.a)

    @property
    def l(self):
        return len(self.b)

    def sums(self) -> list[list[int]]:
        return [[x + y for y in self.b] for x in self.a]


SumPattern = tuple[tuple[int, ...], ...]


@dataclass(frozen=True)
class RectangleAnalysis:
    m: int
    n: int
    A_img: PointSet
    B_img: PointSet
    free_vars: tuple[int, ...]


def _check_enum(N, k, l, ordered, override):
    if k < 1 or l < 1:
        raise InvalidArgument("k and l must be positive")
    size = N ** (k + l) if ordered else comb(N, k) * comb(N, l)
    if size > ENUM_LIMIT and not override:
        raise BudgetExhausted(f"enumeration of {size} rectangles refused (limit {ENUM_LIMIT})")


def enumerate_rectangles(N: int, k: int, l: int, *, ordered: bool = False,
                         override: bool = False) -> Iterator[Rectangle]:
    """Every rectangle with coordinates in [0, N).

    ``ordered=False`` yields increasing blocks only; ``ordered=True``
    yields all ordered tuples (the set the class-counting lemmas count).
    """
    _check_enum(N, k, l, ordered, override)
    pick = permutations if ordered else combinations
    b_blocks = list(pick(range(N), l))
    for a in pick(range(N), k):
        for b in b_blocks:
            yield Rectangle(a, b)


def points_count(e: Rectangle) -> int:
    return len({x + y for x in e.a for y in e.b})


def sum_pattern(e: Rectangle) -> SumPattern:
    """Cells labelled 1, 2, ... in row-major first-occurrence order of
    their sum; equal labels mean equal sums."""
    labels: dict[int, int] = {}
    grid = []
    for x in e.a:
        row = []
        for y in e.b:
            s = x + y
            if s not in labels:
                labels[s] = len(labels) + 1
            row.append(labels[s])
        grid.append(tuple(row))
    return tuple(grid)


def system_rows(pattern: SumPattern) -> list[list[int]]:
    k, l = len(pattern), len(pattern[0])
    first: dict[int, tuple[int, int]] = {}
    rows = []
    for r in range(k):
        for s in range(l):
            lab = pattern[r][s]
            if lab not in first:
                first[lab] = (r, s)
                continue
            u, v = first[lab]
            row = [0] * (k + l)
            row[r] += 1
            row[k + s] += 1
            row[u] -= 1
            row[k + v] -= 1
            if any(row):
                rows.append(row)
    return rows


@lru_cache(maxsize=None)
def _pattern_dim(pattern: SumPattern) -> int:
    k, l = len(pattern), len(pattern[0])
    rows = system_rows(pattern)
    return k + l - rank(rows, k + l)


def solution_dim(e: Rectangle) -> int:
    return _pattern_dim(sum_pattern(e))


def psi_images(e: Rectangle, column_order: Sequence[int] | None = None) -> RectangleAnalysis:
    """Images of the unit vectors under the map to the free coordinates of
    the system with x_1 = y_1 = 0 added.

    Rational coefficients are cleared by their common denominator; that
    scaling changes neither the size nor the affine dimension of any sum.
    """
    k, l = e.k, e.l
    pattern = sum_pattern(e)
    rows = system_rows(pattern)
    pin_x = [0] * (k + l)
    pin_x[0] = 1
    pin_y = [0] * (k + l)
    pin_y[k] = 1
    free, coeffs = nullspace_parametrization(rows + [pin_x, pin_y], k + l, column_order)
    denom = 1
    for row in coeffs:
        for c in row:
            denom = lcm(denom, c.denominator)
    vecs = [tuple(int(c * denom) for c in row) for row in coeffs]
    dim = len(free)
    return RectangleAnalysis(
        m=points_count(e),
        n=_pattern_dim(pattern),
        A_img=PointSet(dim, frozenset(vecs[:k])),
        B_img=PointSet(dim, frozenset(vecs[k:])),
        free_vars=tuple(free),
    )


# -- batch checks ----------------------------------------------------------

@dataclass
class LemmaReport:
    lemma: str
    N: int
    k: int
    l: int
    rectangles: int = 0
    classes: int = 0
    max_ratio: Fraction = Fraction(0)
    n_spectrum: dict = field(default_factory=dict)
    violations: list = field(default_factory=list)
    image_sizes: set = field(default_factory=set)

    @property
    def ok(self) -> bool:
        return not self.violations

    def to_dict(self) -> dict:
        return {
            "lemma": self.lemma, "N": self.N, "k": self.k, "l": self.l,
            "rectangles": self.rectangles, "classes": self.classes,
            "max_ratio": str(self.max_ratio), "max_ratio_float": float(self.max_ratio),
            "n_spectrum": {str(n): c for n, c in sorted(self.n_spectrum.items())},
            "violations": self.violations, "ok": self.ok,
            "image_sizes": sorted(self.image_sizes),
        }


def _classes(N, k, l, override):
    groups: dict[SumPattern, int] = defaultdict(int)
    total = 0
    for e in enumerate_rectangles(N, k, l, ordered=True, override=override):
        groups[sum_pattern(e)] += 1
        total += 1
    return groups, total


def verify_lemma1(N: int, k: int, l: int, *, override: bool = False) -> LemmaReport:
    """Each class has at most N^n(E) members with coordinates below N."""
    rep = LemmaReport("lemma1", N, k, l)
    groups, rep.rectangles = _classes(N, k, l, override)
    rep.classes = len(groups)
    for pattern, count in groups.items():
        n = _pattern_dim(pattern)
        rep.n_spectrum[n] = rep.n_spectrum.get(n, 0) + 1
        ratio = Fraction(count, N ** n)
        rep.max_ratio = max(rep.max_ratio, ratio)
        if count > N ** n:
            rep.violations.append({"pattern": pattern, "count": count, "n": n})
    return rep


def verify_lemma2(N: int, k: int, l: int, *, override: bool = False) -> LemmaReport:
    """Distinct classes with a given n number at most C(k^2 l^2, k+l-n)."""
    rep = LemmaReport("lemma2", N, k, l)
    groups, rep.rectangles = _classes(N, k, l, override)
    rep.classes = len(groups)
    for pattern in groups:
        n = _pattern_dim(pattern)
        rep.n_spectrum[n] = rep.n_spectrum.get(n, 0) + 1
    for n, count in rep.n_spectrum.items():
        cap = comb(k * k * l * l, k + l - n)
        rep.max_ratio = max(rep.max_ratio, Fraction(count, cap))
        if count > cap:
            rep.violations.append({"n": n, "classes": count, "bound": cap})
    return rep


def verify_lemma3(N: int, k: int, l: int, *, override: bool = False) -> LemmaReport:
    """For every rectangle: |A_E + B_E| = m(E), dim(A_E + B_E) = n(E) - 2,
    n(E) <= rho(k, l) m(E), k+l-1 <= m(E) <= kl and 3 <= n(E) <= k+l.

    ``max_ratio`` records the largest n(E) / (rho m(E)).
    """
    rep = LemmaReport("lemma3", N, k, l)
    kk, ll = min(k, l), max(k, l)
    rho = rho_closed(kk, ll).value
    seen = set()
    for e in enumerate_rectangles(N, k, l, ordered=True, override=override):
        rep.rectangles += 1
        an = psi_images(e)
        m, n = an.m, an.n
        pattern = sum_pattern(e)
        if pattern not in seen:
            seen.add(pattern)
            rep.n_spectrum[n] = rep.n_spectrum.get(n, 0) + 1
        problems = []
        total = minkowski_sum(an.A_img, an.B_img)
        if len(total) != m:
            problems.append(f"|A_E+B_E|={len(total)} != m={m}")
        if affine_dim(total) != n - 2:
            problems.append(f"dim={affine_dim(total)} != n-2={n - 2}")
        if Fraction(n) > rho * m:
            problems.append(f"n={n} > rho*m={rho * m}")
        if not (k + l - 1 <= m <= k * l):
            problems.append(f"m={m} outside [{k + l - 1}, {k * l}]")
        if not (3 <= n <= k + l):
            problems.append(f"n={n} outside [3, {k + l}]")
        rep.image_sizes.add((len(an.A_img), len(an.B_img)))
        rep.max_ratio = max(rep.max_ratio, Fraction(n) / (rho * m))
        if problems:
            rep.violations.append({"a": e.a, "b": e.b, "problems": problems})
    rep.classes = len(seen)
    return rep


LEMMA_CHECKS = {"lemma1": verify_lemma1, "lemma2": verify_lemma2, "lemma3": verify_lemma3}
