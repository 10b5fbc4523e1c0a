"""Exact detection of all-ones k x l blocks in circulants.

Two exact searches share one branch-and-bound core:

* integer mode works on a support S and looks for rows a_1..a_k and
  columns b_1..b_l in [0, N) with every plain sum a_i + b_j in S. This is
  the block structure of the padded 2N x 2N circulant.
* cyclic mode works on a plus-circulant of order n and reduces sums mod n.

Both anchor the smallest row at 0 (any block can be shifted there) and
enumerate the remaining row offsets 0 < d_2 < ... < d_k in lexicographic
order, keeping T = intersection of (S - d_i) as a bitset. A branch is cut
as soon as |T| < l, so the first hit is the lexicographically smallest
offset tuple and the reported columns are the l smallest members of T.

``find_block_naive`` is the independent oracle: it scans row subsets of
an explicit matrix.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import islice
from typing import Callable

from thincirc.core import PLUS, CirculantMatrix, SupportSet, entry, iter_bits
from thincirc.errors import BudgetExhausted, InvalidArgument, UnsupportedMode

INTEGER_SUMS = "integer_sums"
CYCLIC = "cyclic"

DEFAULT_BUDGET = 5_000_000
DEFAULT_MAX_K = 6
DEFAULT_NAIVE_LIMIT = 32


@dataclass(frozen=True)
class FreenessQuery:
    k: int
    l: int
    mode: str = INTEGER_SUMS

    def __post_init__(self):
        _check_shape(self.k, self.l)
        if self.mode not in (INTEGER_SUMS, CYCLIC):
            raise InvalidArgument(f"unknown mode {self.mode!r}")


@dataclass(frozen=True)
class Witness:
    rows: tuple[int, ...]
    cols: tuple[int, ...]
    mode: str

    def to_dict(self) -> dict:
        return {"rows": list(self.rows), "cols": list(self.cols), "mode": self.mode}

    @classmethod
    def from_dict(cls, d: dict) -> "Witness":
        return cls(tuple(d["rows"]), tuple(d["cols"]), d["mode"])


def _check_shape(k, l):
    if not (isinstance(k, int) and isinstance(l, int)) or k < 2 or l < 2:
        raise InvalidArgument(f"need k, l >= 2 (got k={k}, l={l})")


def _popcount(x: int) -> int:
    return bin(x).count("1")


def _offset_search(s: int, n: int, k: int, l: int,
                   shift: Callable[[int, int], int], budget: int):
    """Lexicographically first (d_1=0, d_2, ..., d_k) with |T| >= l.

    Returns ``(offsets, T)`` or None. ``shift(s, d)`` must return the
    bitset of S - d in the relevant arithmetic.
    """
    work = 0
    if _popcount(s) < max(k, l):
        return None

    shifted = {}
    candidates = []
    for d in range(1, n):
        sd = shift(s, d)
        work += 1
        if _popcount(s & sd) >= l:
            shifted[d] = sd
            candidates.append(d)
    if work > budget:
        raise BudgetExhausted("offset pre-filter exceeded the work budget", work)
    need = k - 1
    if len(candidates) < need:
        return None

    offsets = [0]

    def extend(t: int, start: int):
        nonlocal work
        depth = len(offsets)
        if depth == k:
            return t
        remaining = k - depth
        for idx in range(start, len(candidates) - remaining + 1):
            d = candidates[idx]
            work += 1
            if work > budget:
                raise BudgetExhausted(
                    f"freeness search exceeded budget of {budget} intersections", work)
            t2 = t & shifted[d]
            if _popcount(t2) < l:
                continue
            offsets.append(d)
            found = extend(t2, idx + 1)
            if found is not None:
                return found
            offsets.pop()
        return None

    t = extend(s, 0)
    if t is None:
        return None
    return tuple(offsets), t


def _smallest(bits: int, count: int) -> tuple[int, ...]:
    return tuple(islice(iter_bits(bits), count))


def find_rectangle_integer(s: SupportSet, k: int, l: int, *,
                           budget: int = DEFAULT_BUDGET,
                           max_k: int = DEFAULT_MAX_K) -> Witness | None:
    """Rows a and columns b in [0, N) with every plain sum a_i + b_j in S.

    Returns None when no such rectangle exists; raises BudgetExhausted
    rather than guess when the search runs out of budget.
    """
    _check_shape(k, l)
    if k > max_k:
        raise InvalidArgument(f"k={k} exceeds the exact-search limit {max_k}")
    res = _offset_search(s.bits, s.capacity, k, l, lambda x, d: x >> d, budget)
    if res is None:
        return None
    offsets, t = res
    return Witness(offsets, _smallest(t, l), INTEGER_SUMS)


def is_free_cyclic(m: CirculantMatrix, k: int, l: int, *,
                   budget: int = DEFAULT_BUDGET,
                   max_k: int = DEFAULT_MAX_K) -> Witness | None:
    """Same contract as ``find_rectangle_integer`` with sums taken mod n.

    Despite the name (kept for interface compatibility) this returns the
    witness, or None when the matrix is (k,l)-free.
    """
    _check_shape(k, l)
    if m.orientation != PLUS:
        raise UnsupportedMode("cyclic freeness search supports plus orientation only")
    if k > max_k:
        raise InvalidArgument(f"k={k} exceeds the exact-search limit {max_k}")
    n = m.n
    mask = (1 << n) - 1

    def rotate(x, d):
        return ((x >> d) | (x << (n - d))) & mask

    res = _offset_search(m.row.bits, n, k, l, rotate, budget)
    if res is None:
        return None
    offsets, t = res
    return Witness(offsets, _smallest(t, l), CYCLIC)


def find_block_naive(m: CirculantMatrix, k: int, l: int, *,
                     limit: int = DEFAULT_NAIVE_LIMIT) -> Witness | None:
    """Scan k-subsets of rows in lexicographic order (oracle)."""
    _check_shape(k, l)
    if m.n > limit:
        raise BudgetExhausted(f"naive scan refused: order {m.n} > limit {limit}")
    n = m.n
    row_masks = []
    for i in range(n):
        bits = 0
        for j in range(n):
            if entry(m, i, j):
                bits |= 1 << j
        row_masks.append(bits)

    chosen: list[int] = []

    def scan(inter: int, start: int):
        if len(chosen) == k:
            return inter
        for i in range(start, n - (k - len(chosen)) + 1):
            nxt = row_masks[i] & inter
            if _popcount(nxt) < l:
                continue
            chosen.append(i)
            got = scan(nxt, i + 1)
            if got is not None:
                return got
            chosen.pop()
        return None

    inter = scan((1 << n) - 1, 0)
    if inter is None:
        return None
    return Witness(tuple(chosen), _smallest(inter, l), CYCLIC)


def verify_witness(target: SupportSet | CirculantMatrix, w: Witness) -> bool:
    """Re-check a witness by direct lookups."""
    if len(set(w.rows)) != len(w.rows) or len(set(w.cols)) != len(w.cols):
        return False
    if isinstance(target, CirculantMatrix):
        if any(not 0 <= x < target.n for x in w.rows + w.cols):
            return False
        return all(entry(target, a, b) for a in w.rows for b in w.cols)
    if any(not 0 <= x < target.capacity for x in w.rows + w.cols):
        return False
    if w.mode == CYCLIC:
        n = target.capacity
        return all(((a + b) % n) in target for a in w.rows for b in w.cols)
    return all((a + b) in target for a in w.rows for b in w.cols)
