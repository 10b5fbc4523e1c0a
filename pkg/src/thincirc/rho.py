"""The density exponent rho(K, L) as an exact rational.

rho(K, L) is the largest ratio (n + 2) / min|A + B| over the admissible
dimensions 1 <= n <= K + L - 2. ``rho_by_max`` evaluates that maximum
directly from ``min_sumset_size``; ``rho_closed`` uses the three-term
closed form. Both must agree.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from thincirc.errors import InvalidArgument
from thincirc.sumset import SumsetBoundQuery, min_sumset_size


@dataclass(frozen=True)
class RhoValue:
    value: Fraction
    argmax_n: int
    branch: str
    swapped: bool = False

    def __float__(self):
        return float(self.value)


def _normalize(K: int, L: int) -> tuple[int, int, bool]:
    if not (isinstance(K, int) and isinstance(L, int)) or min(K, L) < 2:
        raise InvalidArgument(f"rho needs K, L >= 2 (got K={K}, L={L})")
    if K > L:
        return L, K, True
    return K, L, False


def rho_at(K: int, L: int, n: int) -> Fraction:
    """(n + 2) / min|A+B| for one dimension n."""
    return Fraction(n + 2, min_sumset_size(SumsetBoundQuery(n, K, L)))


def rho_closed(K: int, L: int, *, allow_swap: bool = False) -> RhoValue:
    if K > L and not allow_swap:
        raise InvalidArgument(f"rho_closed needs K <= L (got K={K}, L={L})")
    K, L, swapped = _normalize(K, L)
    if K == 2:
        return RhoValue(Fraction(L + 2, 2 * L), L, "K=2", swapped)
    terms = [
        (Fraction(K + L, K * L), K + L - 2, "full"),
        (Fraction(K + L - 1, K * L - 3), K + L - 3, "full-1"),
        (Fraction(2 * (L + 2), K * (2 * L - K + 1)), L, "n=L"),
    ]
    best = max(t[0] for t in terms)
    # several branches can tie; report the one with the smallest n
    value, n, branch = min((t for t in terms if t[0] == best), key=lambda t: t[1])
    return RhoValue(value, n, branch, swapped)


def rho_by_max(K: int, L: int, *, allow_swap: bool = False) -> RhoValue:
    if K > L and not allow_swap:
        raise InvalidArgument(f"rho_by_max needs K <= L (got K={K}, L={L})")
    K, L, swapped = _normalize(K, L)
    best, arg = None, None
    for n in range(1, K + L - 1):
        v = rho_at(K, L, n)
        if best is None or v > best:
            best, arg = v, n
    return RhoValue(best, arg, "max", swapped)


def rho_upper_bound_check(K: int, L: int) -> bool:
    if K < 3 or K > L:
        raise InvalidArgument(f"the strict bound is stated for 3 <= K <= L (got K={K}, L={L})")
    return rho_closed(K, L).value < Fraction(K + L + 2, K * L)


def argmax_candidates(K: int, L: int) -> set[int]:
    if K == 2:
        return {1, L - 2, L - 1, L}
    return {1, L - K, L, K + L - 3, K + L - 2}
