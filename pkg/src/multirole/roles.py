"""Finite role-set algebra.

Role subsets are bit vectors over a fixed universe {0..n-1}.  Every filter on
a finite universe is principal, so filters are stored by their core set and
ultrafilters by a single witness role.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

from .errors import UniverseMismatch

MAX_ROLES = 16


@dataclass(frozen=True)
class RoleUniverse:
    """The underlying role set; roles are the integers 0..n-1."""

    n: int

    def __post_init__(self):
        if not 1 <= self.n <= MAX_ROLES:
            raise UniverseMismatch(f"universe size must be in 1..{MAX_ROLES}, got {self.n}")

    @property
    def full(self) -> RoleSubset:
        return RoleSubset(self.n, (1 << self.n) - 1)

    @property
    def empty(self) -> RoleSubset:
        return RoleSubset(self.n, 0)

    def subset(self, members: Iterable[int]) -> RoleSubset:
        mask = 0
        for r in members:
            if not 0 <= r < self.n:
                raise UniverseMismatch(f"role {r} out of range for universe of size {self.n}")
            mask |= 1 << r
        return RoleSubset(self.n, mask)

    def singleton(self, r: int) -> RoleSubset:
        return self.subset((r,))

    def subsets(self) -> Iterator[RoleSubset]:
        for mask in range(1 << self.n):
            yield RoleSubset(self.n, mask)

    def endo(self, image: Sequence[int]) -> Endomorphism:
        return Endomorphism(tuple(image)).validated(self.n)

    def identity(self) -> Endomorphism:
        return Endomorphism(tuple(range(self.n)))

    def rotation(self, k: int = 1) -> Endomorphism:
        return Endomorphism(tuple((i + k) % self.n for i in range(self.n)))

    def constant(self, r: int = 0) -> Endomorphism:
        if not 0 <= r < self.n:
            raise UniverseMismatch(f"role {r} out of range for universe of size {self.n}")
        return Endomorphism((r,) * self.n)

    def ultrafilter(self, witness: int) -> PrincipalUltrafilter:
        if not 0 <= witness < self.n:
            raise UniverseMismatch(f"witness {witness} out of range for universe of size {self.n}")
        return PrincipalUltrafilter(self.n, witness)

    def filter(self, core: Iterable[int]) -> PrincipalFilter:
        return PrincipalFilter(self.subset(core))


@dataclass(frozen=True)
class RoleSubset:
    """Subset of the universe, stored as an n-bit mask."""

    n: int
    mask: int

    def __post_init__(self):
        if self.mask >> self.n:
            raise UniverseMismatch(f"mask {self.mask:#x} exceeds universe of size {self.n}")

    def members(self) -> tuple[int, ...]:
        return tuple(r for r in range(self.n) if self.mask >> r & 1)

    def __contains__(self, r: int) -> bool:
        return 0 <= r < self.n and bool(self.mask >> r & 1)

    def __iter__(self) -> Iterator[int]:
        return iter(self.members())

    def __len__(self) -> int:
        return self.mask.bit_count()

    @property
    def is_empty(self) -> bool:
        return self.mask == 0

    @property
    def is_full(self) -> bool:
        return self.mask == (1 << self.n) - 1

    def _same_universe(self, other: RoleSubset) -> None:
        if self.n != other.n:
            raise UniverseMismatch(f"mixed universes: {self.n} vs {other.n}")

    def __or__(self, other: RoleSubset) -> RoleSubset:
        self._same_universe(other)
        return RoleSubset(self.n, self.mask | other.mask)

    def __and__(self, other: RoleSubset) -> RoleSubset:
        self._same_universe(other)
        return RoleSubset(self.n, self.mask & other.mask)

    def __sub__(self, other: RoleSubset) -> RoleSubset:
        self._same_universe(other)
        return RoleSubset(self.n, self.mask & ~other.mask)

    def issubset(self, other: RoleSubset) -> bool:
        self._same_universe(other)
        return self.mask & ~other.mask == 0

    def disjoint(self, other: RoleSubset) -> bool:
        self._same_universe(other)
        return self.mask & other.mask == 0


@dataclass(frozen=True)
class Endomorphism:
    """Total self-map on the universe; injectivity is not required."""

    image: tuple[int, ...]

    def validated(self, n: int) -> Endomorphism:
        if len(self.image) != n:
            raise UniverseMismatch(f"endomorphism of length {len(self.image)} in universe of size {n}")
        for v in self.image:
            if not 0 <= v < n:
                raise UniverseMismatch(f"endomorphism image value {v} out of range")
        return self

    @property
    def n(self) -> int:
        return len(self.image)

    def __call__(self, r: int) -> int:
        return self.image[r]


@dataclass(frozen=True)
class PrincipalFilter:
    """Filter {R | core ⊆ R}; core = full universe gives the trivial filter."""

    core: RoleSubset


@dataclass(frozen=True)
class PrincipalUltrafilter:
    """Ultrafilter {R | witness ∈ R}."""

    n: int
    witness: int


def complement(r: RoleSubset) -> RoleSubset:
    return RoleSubset(r.n, ~r.mask & ((1 << r.n) - 1))


def is_partition(parts: Sequence[RoleSubset], target: RoleSubset) -> bool:
    """True iff the parts are pairwise disjoint and cover exactly `target`.

    Empty parts are legal summands.
    """
    union = 0
    for p in parts:
        if p.n != target.n:
            raise UniverseMismatch(f"mixed universes: {p.n} vs {target.n}")
        if union & p.mask:
            return False
        union |= p.mask
    return union == target.mask


def preimage(f: Endomorphism, r: RoleSubset) -> RoleSubset:
    if f.n != r.n:
        raise UniverseMismatch(f"endomorphism on {f.n} roles applied in universe of size {r.n}")
    mask = 0
    for i in range(r.n):
        if r.mask >> f.image[i] & 1:
            mask |= 1 << i
    return RoleSubset(r.n, mask)


def uf_contains(u: PrincipalUltrafilter, r: RoleSubset) -> bool:
    if u.n != r.n:
        raise UniverseMismatch(f"ultrafilter on {u.n} roles queried in universe of size {r.n}")
    return bool(r.mask >> u.witness & 1)


def filter_contains(f: PrincipalFilter, r: RoleSubset) -> bool:
    return f.core.issubset(r)
