"""Multi-index arithmetic and graded level enumeration.

Everything downstream (weight families, polynomial bases, level
diagnostics) indexes the monomial basis of ``Hom(n)`` through the
enumeration order fixed here, so matrices are reproducible bit-for-bit
across runs.
"""

from __future__ import annotations

import math
from functools import lru_cache
from typing import Iterable, Iterator

__all__ = [
    "DEGREE_CAP",
    "DIMENSION_CAP",
    "DegreeCapError",
    "MultiIndex",
    "enumerate_level",
    "level_dimension",
    "level_index",
    "multinomial",
    "unit",
]

# Exact integer arithmetic for n! and alpha! is guaranteed precise (and
# cheap) up to these caps; operations refuse beyond them instead of
# silently degrading.
DEGREE_CAP = 25
DIMENSION_CAP = 4


class DegreeCapError(Exception):
    """Raised when a degree or dimension exceeds the configured caps."""


def _check_dimension(d: int) -> None:
    if d < 1:
        raise ValueError(f"dimension must be >= 1, got {d}")
    if d > DIMENSION_CAP:
        raise DegreeCapError(f"dimension {d} exceeds cap {DIMENSION_CAP}")


def _check_degree(n: int) -> None:
    if n < 0:
        raise ValueError(f"degree must be >= 0, got {n}")
    if n > DEGREE_CAP:
        raise DegreeCapError(f"degree {n} exceeds cap {DEGREE_CAP}")


class MultiIndex(tuple):
    """Exponent vector in N^d.

    Immutable and hashable; behaves as a tuple of non-negative ints.
    """

    def __new__(cls, components: Iterable[int]) -> "MultiIndex":
        comps = tuple(int(c) for c in components)
        if not comps:
            raise ValueError("multi-index needs at least one component")
        if len(comps) > DIMENSION_CAP:
            raise DegreeCapError(
                f"dimension {len(comps)} exceeds cap {DIMENSION_CAP}"
            )
        if any(c < 0 for c in comps):
            raise ValueError(f"components must be non-negative, got {comps}")
        return super().__new__(cls, comps)

    @property
    def dimension(self) -> int:
        return len(self)

    @property
    def degree(self) -> int:
        """|alpha|, the total degree."""
        return sum(self)

    def factorial(self) -> int:
        """alpha! as an exact integer; refuses past the degree cap."""
        _check_degree(self.degree)
        out = 1
        for c in self:
            out *= math.factorial(c)
        return out

    def incremented(self, j: int) -> "MultiIndex":
        """alpha + eps_j for 1-based direction j."""
        if not 1 <= j <= len(self):
            raise ValueError(f"direction {j} out of range 1..{len(self)}")
        return MultiIndex(
            c + 1 if i == j - 1 else c for i, c in enumerate(self)
        )

    def __repr__(self) -> str:  # pragma: no cover
        return f"MultiIndex{tuple(self)!r}"


def unit(d: int, j: int) -> MultiIndex:
    """The j-th coordinate multi-index eps_j (1-based j)."""
    _check_dimension(d)
    if not 1 <= j <= d:
        raise ValueError(f"direction {j} out of range 1..{d}")
    return MultiIndex(1 if i == j - 1 else 0 for i in range(d))


def _descending(d: int, n: int) -> Iterator[tuple[int, ...]]:
    if d == 1:
        yield (n,)
        return
    for first in range(n, -1, -1):
        for rest in _descending(d - 1, n - first):
            yield (first,) + rest


@lru_cache(maxsize=None)
def enumerate_level(d: int, n: int) -> tuple[MultiIndex, ...]:
    """All alpha with |alpha| = n, in graded-lexicographic order.

    Within a level this is lexicographic with the largest first
    exponent leading: (2,0), (1,1), (0,2). The count is
    C(n+d-1, d-1).
    """
    _check_dimension(d)
    _check_degree(n)
    return tuple(MultiIndex(a) for a in _descending(d, n))


def level_dimension(d: int, n: int) -> int:
    """dim Hom(n) = C(n+d-1, d-1)."""
    _check_dimension(d)
    _check_degree(n)
    return math.comb(n + d - 1, d - 1)


@lru_cache(maxsize=None)
def level_index(d: int, n: int) -> dict[MultiIndex, int]:
    """Position of each level-n multi-index in the graded-lex basis."""
    return {alpha: i for i, alpha in enumerate(enumerate_level(d, n))}


def multinomial(alpha: MultiIndex) -> int:
    """n!/alpha! for n = |alpha|, exact."""
    return math.factorial(alpha.degree) // alpha.factorial()
