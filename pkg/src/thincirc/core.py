"""Support sets and circulant matrices.

A circulant is stored by its first row only. The row is kept both as a
sorted tuple of member indices and as a Python int bitset (bit ``j`` set
iff ``j`` is a member); the freeness searches work on the bitset.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Iterable

from thincirc.errors import InvalidArgument

PLUS = "plus"
MINUS = "minus"
ORIENTATIONS = (PLUS, MINUS)


@dataclass(frozen=True)
class SupportSet:
    capacity: int
    members: tuple[int, ...]
    bits: int = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if not isinstance(self.capacity, int) or self.capacity < 0:
            raise InvalidArgument(f"capacity must be a non-negative int, got {self.capacity!r}")
        members = tuple(int(m) for m in self.members)
        if len(set(members)) != len(members):
            raise InvalidArgument("duplicate support members")
        members = tuple(sorted(members))
        if members and (members[0] < 0 or members[-1] >= self.capacity):
            raise InvalidArgument(f"support member out of range [0, {self.capacity})")
        object.__setattr__(self, "members", members)
        bits = 0
        for m in members:
            bits |= 1 << m
        object.__setattr__(self, "bits", bits)

    @classmethod
    def from_bits(cls, capacity: int, bits: int) -> "SupportSet":
        if bits >> capacity:
            raise InvalidArgument("bitset has members beyond capacity")
        return cls(capacity, tuple(iter_bits(bits)))

    def __len__(self):
        return len(self.members)

    def __contains__(self, j):
        return 0 <= j < self.capacity and (self.bits >> j) & 1 == 1

    def __iter__(self):
        return iter(self.members)

    def is_subset(self, other: "SupportSet") -> bool:
        return self.bits & ~other.bits == 0


def iter_bits(value: int) -> Iterable[int]:
    """Indices of the set bits of ``value``, ascending."""
    while value:
        low = value & -value
        yield low.bit_length() - 1
        value ^= low


@dataclass(frozen=True)
class CirculantMatrix:
    n: int
    orientation: str
    row: SupportSet

    def __post_init__(self):
        if self.orientation not in ORIENTATIONS:
            raise InvalidArgument(f"orientation must be one of {ORIENTATIONS}")
        if self.n < 1:
            raise InvalidArgument("matrix order must be positive")
        if self.row.capacity != self.n:
            raise InvalidArgument("row capacity must equal the matrix order")

    def entry(self, i: int, j: int) -> int:
        return entry(self, i, j)

    def row_bits(self, i: int) -> int:
        """Bitset of the columns holding a one in row ``i``."""
        n, s = self.n, self.row.bits
        mask = (1 << n) - 1
        if self.orientation == PLUS:
            # column j is set iff (i + j) mod n in S: rotate S right by i
            return ((s >> i) | (s << (n - i))) & mask
        # column j is set iff (i - j) mod n in S, i.e. j = (i - m) mod n
        out = 0
        for m in self.row.members:
            out |= 1 << ((i - m) % n)
        return out

    def to_dense(self) -> list[list[int]]:
        return [[self.entry(i, j) for j in range(self.n)] for i in range(self.n)]


@dataclass(frozen=True)
class WeightReport:
    weight: int
    row_weight: int


def make_circulant(row: SupportSet, orientation: str = PLUS) -> CirculantMatrix:
    if row.capacity < 1:
        raise InvalidArgument("a circulant needs capacity >= 1")
    return CirculantMatrix(row.capacity, orientation, row)


def entry(m: CirculantMatrix, i: int, j: int) -> int:
    if not (0 <= i < m.n and 0 <= j < m.n):
        raise InvalidArgument(f"index ({i}, {j}) out of range for order {m.n}")
    if m.orientation == PLUS:
        idx = (i + j) % m.n
    else:
        idx = (i - j) % m.n
    return (m.row.bits >> idx) & 1


def weight(m: CirculantMatrix) -> WeightReport:
    gamma = len(m.row.members)
    return WeightReport(weight=m.n * gamma, row_weight=gamma)


def embed_double(s: SupportSet) -> CirculantMatrix:
    """The 2N x 2N plus-circulant whose first row is S followed by N zeros."""
    if s.capacity < 1:
        raise InvalidArgument("capacity must be >= 1")
    return CirculantMatrix(2 * s.capacity, PLUS, SupportSet(2 * s.capacity, s.members))


# -- serialization ---------------------------------------------------------

def support_to_hex(s: SupportSet) -> str:
    nbytes = (s.capacity + 7) // 8
    return s.bits.to_bytes(nbytes, "little").hex()


def support_from_hex(capacity: int, text: str) -> SupportSet:
    try:
        raw = bytes.fromhex(text)
    except ValueError as exc:
        raise InvalidArgument(f"bad support_hex: {exc}") from None
    return SupportSet.from_bits(capacity, int.from_bytes(raw, "little"))


def matrix_to_dict(m: CirculantMatrix, compact: bool = False) -> dict:
    d = {"n": m.n, "orientation": m.orientation, "support": list(m.row.members)}
    if compact:
        d["support_hex"] = support_to_hex(m.row)
    return d


def matrix_from_dict(d: dict) -> CirculantMatrix:
    try:
        n = d["n"]
        orientation = d.get("orientation", PLUS)
    except (KeyError, TypeError):
        raise InvalidArgument("matrix object needs an 'n' field") from None
    if not isinstance(n, int) or isinstance(n, bool):
        raise InvalidArgument("'n' must be an integer")
    row = None
    if "support" in d:
        sup = d["support"]
        if list(sup) != sorted(sup):
            raise InvalidArgument("'support' must be ascending")
        row = SupportSet(n, tuple(sup))
    if "support_hex" in d:
        hex_row = support_from_hex(n, d["support_hex"])
        if row is not None and row.bits != hex_row.bits:
            raise InvalidArgument("'support' and 'support_hex' disagree")
        row = hex_row
    if row is None:
        raise InvalidArgument("matrix object needs 'support' or 'support_hex'")
    return CirculantMatrix(n, orientation, row)


def dumps_matrix(m: CirculantMatrix, compact: bool = False) -> str:
    return json.dumps(matrix_to_dict(m, compact))


def loads_matrix(text: str) -> CirculantMatrix:
    try:
        d = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InvalidArgument(f"invalid matrix JSON: {exc}") from None
    return matrix_from_dict(d)
