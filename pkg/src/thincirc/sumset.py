"""Minkowski sums of integer point sets and the minimum-|A+B| formulas.

Points are integer tuples. Axis numbers in the long-simplex helpers are
1-based (axis 1 carries the progression, the others are spokes).

Terminology used below for a pair of long simplices with |A| = K <= L = |B|
in dimension n:

* ``s``   spokes shared by A and B,
* ``s_a`` spokes only in A,
* ``s_b`` spokes only in B,

with s + s_a + s_b = n - 1, s + s_a <= K - 1 and s + s_b <= L - 1.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations, product
from math import comb
from typing import Iterable, Iterator

from thincirc.errors import BudgetExhausted, InvalidArgument, InvariantViolation
from thincirc.linalg import rank

Point = tuple[int, ...]


@dataclass(frozen=True)
class PointSet:
    ambient_dim: int
    points: frozenset

    def __post_init__(self):
        if self.ambient_dim < 0:
            raise InvalidArgument("ambient dimension must be non-negative")
        pts = frozenset(tuple(int(c) for c in p) for p in self.points)
        for p in pts:
            if len(p) != self.ambient_dim:
                raise InvalidArgument(f"point {p} does not have {self.ambient_dim} coordinates")
        object.__setattr__(self, "points", pts)

    @classmethod
    def of(cls, dim: int, points: Iterable[Iterable[int]]) -> "PointSet":
        pts = [tuple(p) for p in points]
        if len(set(pts)) != len(pts):
            raise InvalidArgument("points must be pairwise distinct")
        return cls(dim, frozenset(pts))

    def __len__(self):
        return len(self.points)

    def __iter__(self):
        return iter(sorted(self.points))


@dataclass(frozen=True)
class SimplexPair:
    K: int
    L: int
    s: int
    s_a: int
    s_b: int

    def __post_init__(self):
        check_partition(self.K, self.L, self.s, self.s_a, self.s_b)

    @property
    def n(self) -> int:
        return self.s + self.s_a + self.s_b + 1

    @property
    def degenerate(self) -> bool:
        """Both progressions are the single point 0, so axis 1 is unused
        and the sum only spans n - 1 dimensions."""
        return self.s + self.s_a == self.K - 1 and self.s + self.s_b == self.L - 1


@dataclass(frozen=True)
class SumsetBoundQuery:
    n: int
    K: int
    L: int

    def __post_init__(self):
        if not (2 <= self.K <= self.L):
            raise InvalidArgument(f"need 2 <= K <= L (got K={self.K}, L={self.L})")
        if not (1 <= self.n <= self.K + self.L - 2):
            raise InvalidArgument(
                f"n={self.n} outside [1, K+L-2] = [1, {self.K + self.L - 2}]")


def unit(dim: int, axis: int, scale: int = 1) -> Point:
    v = [0] * dim
    v[axis - 1] = scale
    return tuple(v)


def minkowski_sum(a: PointSet, b: PointSet) -> PointSet:
    if a.ambient_dim != b.ambient_dim:
        raise InvalidArgument("ambient dimensions differ")
    pts = {tuple(x + y for x, y in zip(p, q)) for p in a.points for q in b.points}
    return PointSet(a.ambient_dim, frozenset(pts))


def affine_dim(p: PointSet) -> int:
    if not p.points:
        raise InvalidArgument("affine dimension of the empty set is undefined")
    pts = list(p.points)
    p0 = pts[0]
    diffs = [[x - y for x, y in zip(q, p0)] for q in pts[1:]]
    if not diffs or p.ambient_dim == 0:
        return 0
    return rank(diffs, p.ambient_dim)


def ruzsa_bound(n: int, K: int, L: int) -> int:
    _check_bound_args(n, K, L)
    return n * K + L - n * (n + 1) // 2


def ruzsa_refined_bound(n: int, K: int, L: int) -> int:
    _check_bound_args(n, K, L)
    return L + sum(min(n, L - i) for i in range(1, K))


def _check_bound_args(n, K, L):
    if n < 1 or K < 1 or K > L:
        raise InvalidArgument(f"need n >= 1 and 1 <= K <= L (got n={n}, K={K}, L={L})")


def long_simplex(n: int, size: int, spokes: Iterable[int]) -> PointSet:
    """{m e_1 : 0 <= m <= size - k} together with the unit spokes, where
    k - 1 = len(spokes)."""
    spokes = list(spokes)
    if len(set(spokes)) != len(spokes):
        raise InvalidArgument("repeated spoke axis")
    for ax in spokes:
        if not (2 <= ax <= n):
            raise InvalidArgument(f"spoke axis {ax} not in [2, {n}]")
    k = len(spokes) + 1
    if size < 1 or size - k < 0:
        raise InvalidArgument(f"size {size} too small for {len(spokes)} spokes")
    if size - k >= 1 and n < 1:
        raise InvalidArgument("a progression needs ambient dimension >= 1")
    pts = {unit(n, 1, m) if n else () for m in range(size - k + 1)}
    pts.update(unit(n, ax) for ax in spokes)
    return PointSet(n, frozenset(pts))


def check_partition(K, L, s, s_a, s_b):
    if min(s, s_a, s_b) < 0:
        raise InvalidArgument("spoke counts must be non-negative")
    if K < 1 or L < K:
        raise InvalidArgument(f"need 1 <= K <= L (got K={K}, L={L})")
    if s + s_a > K - 1 or s + s_b > L - 1:
        raise InvalidArgument(
            f"spoke counts (s={s}, s_a={s_a}, s_b={s_b}) violate s+s_a <= K-1 or s+s_b <= L-1")


def simplex_pair(K: int, L: int, s: int, s_a: int, s_b: int) -> tuple[PointSet, PointSet]:
    """The pair A = C_A + D + D_A, B = C_B + D + D_B sharing axis 1 and the
    first ``s`` spokes."""
    check_partition(K, L, s, s_a, s_b)
    n = s + s_a + s_b + 1
    shared = list(range(2, s + 2))
    only_a = list(range(s + 2, s + s_a + 2))
    only_b = list(range(s + s_a + 2, n + 1))
    return long_simplex(n, K, shared + only_a), long_simplex(n, L, shared + only_b)


def simplex_pair_sum_size(K: int, L: int, s: int, s_a: int, s_b: int, *,
                          check: bool = False) -> int:
    """|A + B| for the long-simplex pair, in closed form.

    With ``check=True`` the pair is also built and summed explicitly, and a
    mismatch raises InvariantViolation.
    """
    check_partition(K, L, s, s_a, s_b)
    n = s + s_a + s_b + 1
    # |C_A + D_B| = (K - s - s_a) s_b puts s_b on K, and symmetrically s_a on L
    value = ((s_b + 1) * K + (s_a + 1) * L + s * max(L - s_b, K - s_a)
             - n - s * (s + 1) // 2 - s_a * s_b)
    if check:
        a, b = simplex_pair(K, L, s, s_a, s_b)
        brute = len(minkowski_sum(a, b))
        if brute != value:
            raise InvariantViolation(
                f"formula gives {value}, construction gives {brute} for "
                f"K={K}, L={L}, s={s}, s_a={s_a}, s_b={s_b}")
    return value


def partitions(K: int, L: int, n: int) -> Iterator[tuple[int, int, int]]:
    """All (s, s_a, s_b) with s + s_a + s_b = n - 1 meeting the size limits."""
    for s in range(n):
        for s_a in range(n - s):
            s_b = n - 1 - s - s_a
            if s + s_a <= K - 1 and s + s_b <= L - 1:
                yield s, s_a, s_b


def _case_values(n: int, K: int, L: int) -> dict[str, int]:
    vals = {}
    if n <= L - K:
        vals["ii"] = L + n * (K - 1)
    if L - K <= n <= L:
        t = n - L + K
        vals["iii"] = (n + 1) * K - t * (t + 1) // 2
    if L <= n <= K + L - 3:
        u = K + L - n
        vals["iv"] = K * L - u * (u - 1) // 2
    return vals


def min_sumset_case(q: SumsetBoundQuery) -> tuple[int, str]:
    """Minimum of |A+B| and the name of the case that produced it."""
    n, K, L = q.n, q.K, q.L
    if n == K + L - 2:
        return K * L, "i"
    vals = _case_values(n, K, L)
    if len(set(vals.values())) != 1:
        raise InvariantViolation(f"case formulas disagree at n={n}, K={K}, L={L}: {vals}")
    case = min(vals)  # lowest-numbered applicable case, for reporting
    return vals[case], case


def min_sumset_size(q: SumsetBoundQuery) -> int:
    return min_sumset_case(q)[0]


def case_assignment(q: SumsetBoundQuery) -> tuple[int, int, int]:
    """The (s, s_a, s_b) that attains ``min_sumset_size`` in each case."""
    n, K, L = q.n, q.K, q.L
    case = min_sumset_case(q)[1]
    if case == "i":
        return 0, K - 1, L - 2
    if case == "ii":
        return 0, 0, n - 1
    if case == "iii":
        return n - 1 - L + K, 0, L - K
    return K + L - 1 - n, n - L, n - K


def min_sumset_by_partition_search(q: SumsetBoundQuery) -> int:
    return partition_search(q)[0]


def partition_search(q: SumsetBoundQuery) -> tuple[int, tuple[int, int, int] | None]:
    """Minimum over long-simplex pairs, by enumerating every partition.

    When n = K + L - 2 the dimensions of A and B add up to n and the sum
    has all K*L points; no partition is searched and the witness is None.
    """
    n, K, L = q.n, q.K, q.L
    if n == K + L - 2:
        return K * L, None
    best = None
    for part in partitions(K, L, n):
        v = simplex_pair_sum_size(K, L, *part)
        if best is None or v < best[0]:
            best = (v, part)
    if best is None:
        raise InvariantViolation(f"no admissible partition for n={n}, K={K}, L={L}")
    return best


def min_sumset_grid_exhaustive(K: int, L: int, n: int, radius: int, *,
                               max_pairs: int = 5_000_000) -> int | None:
    return grid_search(K, L, n, radius, max_pairs=max_pairs)[0]


def grid_search(K: int, L: int, n: int, radius: int, *, max_pairs: int = 5_000_000):
    """Smallest |A+B| over A, B in the grid {0..radius}^n containing 0,
    with |A| = K, |B| = L and dim(A+B) = n.

    Returns ``(size, (A, B))`` or ``(None, None)`` when no pair in the grid
    reaches dimension n.
    """
    if not (1 <= K <= L) or n < 1 or radius < 1:
        raise InvalidArgument("need 1 <= K <= L, n >= 1, radius >= 1")
    grid = [p for p in product(range(radius + 1), repeat=n) if any(p)]
    zero = (0,) * n
    na, nb = comb(len(grid), K - 1), comb(len(grid), L - 1)
    if na * nb > max_pairs:
        raise BudgetExhausted(f"grid search needs {na * nb} pairs > {max_pairs}")

    best = None
    best_pair = None
    b_sets = [(zero,) + c for c in combinations(grid, L - 1)]
    for ca in combinations(grid, K - 1):
        a = (zero,) + ca
        for b in b_sets:
            sums = {tuple(x + y for x, y in zip(p, r)) for p in a for r in b}
            if best is not None and len(sums) >= best:
                continue
            sp = PointSet(n, frozenset(sums))
            if affine_dim(sp) != n:
                continue
            best = len(sums)
            best_pair = (PointSet.of(n, a), PointSet.of(n, b))
    return best, best_pair
