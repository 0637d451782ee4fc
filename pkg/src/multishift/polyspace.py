"""Homogeneous polynomials, composition matrices, and level Gram forms.

The basis of ``Hom(n)`` is the monomials in graded-lex order (see
:mod:`multishift.combinatorics`); all matrices here index that order.
Expansion of ``p(u . z)`` is exact iterated multiplication by the
linear forms ``(u . z)_j`` — dimensions are small enough that clarity
and exactness win over anything fancier. The matrix of ``C_u`` on a
level is assembled column-by-column from the previous level with the
same multiply-by-a-linear-form recursion, vectorized over columns.
"""

from __future__ import annotations

import math
from functools import lru_cache
from typing import Mapping

import numpy as np

from .combinatorics import (
    DEGREE_CAP,
    DegreeCapError,
    MultiIndex,
    enumerate_level,
    level_dimension,
    level_index,
)
from .unitary import UnitaryMatrix
from .weights import WeightFamily

__all__ = [
    "CompositionMatrix",
    "HomPoly",
    "beta_norm",
    "compose_linear",
    "composition_chain",
    "composition_matrix",
    "multiplication_matrix",
]


class HomPoly:
    """A homogeneous polynomial of fixed degree in d variables.

    Coefficients are stored sparsely as a mapping multi-index -> complex;
    zero coefficients may be omitted. Equality is exact on the stored
    mappings (zeros stripped).
    """

    def __init__(self, d: int, degree: int, coeffs: Mapping[MultiIndex, complex] | Mapping[tuple, complex]):
        if degree < 0:
            raise ValueError("degree must be >= 0")
        self.d = int(d)
        self.degree = int(degree)
        clean: dict[MultiIndex, complex] = {}
        for key, val in coeffs.items():
            alpha = MultiIndex(key)
            if alpha.dimension != d:
                raise ValueError(f"exponent {tuple(alpha)} has dimension != {d}")
            if alpha.degree != degree:
                raise ValueError(
                    f"exponent {tuple(alpha)} has degree {alpha.degree} != {degree}"
                )
            c = complex(val)
            if c != 0:
                clean[alpha] = c
        self.coeffs = clean

    @classmethod
    def monomial(cls, alpha: MultiIndex | tuple, coeff: complex = 1.0) -> "HomPoly":
        alpha = MultiIndex(alpha)
        return cls(alpha.dimension, alpha.degree, {alpha: coeff})

    def coefficient(self, alpha: MultiIndex | tuple) -> complex:
        return self.coeffs.get(MultiIndex(alpha), 0.0)

    def coefficient_vector(self) -> np.ndarray:
        """Dense coefficients in the graded-lex basis of Hom(degree)."""
        idx = level_index(self.d, self.degree)
        vec = np.zeros(level_dimension(self.d, self.degree), dtype=complex)
        for alpha, c in self.coeffs.items():
            vec[idx[alpha]] = c
        return vec

    def __eq__(self, other) -> bool:
        if not isinstance(other, HomPoly):
            return NotImplemented
        return (
            self.d == other.d
            and self.degree == other.degree
            and self.coeffs == other.coeffs
        )

    def __hash__(self):  # coeffs dict makes this unhashable by content
        return NotImplemented  # pragma: no cover

    def __repr__(self) -> str:  # pragma: no cover
        terms = ", ".join(
            f"{tuple(a)}: {c}" for a, c in sorted(self.coeffs.items())
        )
        return f"HomPoly(d={self.d}, n={self.degree}, {{{terms}}})"


def _mul_linear(
    poly: dict[tuple, complex], linear: list[complex], d: int
) -> dict[tuple, complex]:
    """Multiply a sparse polynomial by sum_k linear[k] * z_k, skipping zeros."""
    out: dict[tuple, complex] = {}
    for expo, c in poly.items():
        for k in range(d):
            u = linear[k]
            if u == 0:
                continue
            bumped = expo[:k] + (expo[k] + 1,) + expo[k + 1 :]
            prev = out.get(bumped)
            out[bumped] = c * u if prev is None else prev + c * u
    return out


def compose_linear(p: HomPoly, u: UnitaryMatrix) -> HomPoly:
    """Exact expansion of p(u . z); the degree is preserved."""
    if p.d != u.d:
        raise ValueError(f"dimension mismatch: polynomial d={p.d}, unitary d={u.d}")
    d = p.d
    rows = [[u.matrix[j, k] for k in range(d)] for j in range(d)]
    acc: dict[tuple, complex] = {}
    zero = (0,) * d
    for alpha, c in p.coeffs.items():
        term: dict[tuple, complex] = {zero: c}
        for j, e in enumerate(alpha):
            for _ in range(e):
                term = _mul_linear(term, rows[j], d)
        for expo, val in term.items():
            prev = acc.get(expo)
            acc[expo] = val if prev is None else prev + val
    return HomPoly(d, p.degree, acc)


@lru_cache(maxsize=None)
def _mult_matrix_cached(j: int, d: int, n: int) -> np.ndarray:
    rows = level_index(d, n + 1)
    cols = enumerate_level(d, n)
    m = np.zeros((level_dimension(d, n + 1), len(cols)))
    for i, alpha in enumerate(cols):
        m[rows[alpha.incremented(j)], i] = 1.0
    m.setflags(write=False)
    return m


def multiplication_matrix(j: int, d: int, n: int) -> np.ndarray:
    """The 0/1 matrix of multiplication by z_j from Hom(n) to Hom(n+1).

    j is 1-based; the result is read-only.
    """
    if not 1 <= j <= d:
        raise ValueError(f"direction {j} out of range 1..{d}")
    if n + 1 > DEGREE_CAP:
        raise DegreeCapError(f"degree {n + 1} exceeds cap {DEGREE_CAP}")
    return _mult_matrix_cached(j, d, n)


class CompositionMatrix:
    """The matrix of C_u restricted to Hom(n), graded-lex basis.

    Column alpha holds the coefficient expansion of ``(u . z)^alpha``;
    there is no degree leakage, so the matrix is the whole action.
    """

    def __init__(self, u: UnitaryMatrix, n: int, matrix: np.ndarray):
        self.u = u
        self.d = u.d
        self.n = n
        matrix.setflags(write=False)
        self.matrix = matrix

    @property
    def basis(self) -> tuple[MultiIndex, ...]:
        return enumerate_level(self.d, self.n)

    def __repr__(self) -> str:  # pragma: no cover
        return f"CompositionMatrix(d={self.d}, n={self.n})"


def composition_chain(u: UnitaryMatrix, n: int) -> list[np.ndarray]:
    """Matrices of C_u on Hom(0), ..., Hom(n), built incrementally.

    Column alpha at level m is the column of alpha - eps_j at level m-1
    multiplied by the linear form (u . z)_j, with j the first nonzero
    direction of alpha; this reproduces the exact monomial expansion.
    """
    if n > DEGREE_CAP:
        raise DegreeCapError(f"degree {n} exceeds cap {DEGREE_CAP}")
    d = u.d
    um = u.matrix
    chain = [np.ones((1, 1), dtype=complex)]
    for m in range(1, n + 1):
        prev = chain[-1]
        prev_index = level_index(d, m - 1)
        basis = enumerate_level(d, m)
        # multiply-by-(u.z)_j operators from level m-1 to level m
        lin = [
            sum(
                um[j, k] * multiplication_matrix(k + 1, d, m - 1)
                for k in range(d)
            )
            for j in range(d)
        ]
        cur = np.empty((level_dimension(d, m), len(basis)), dtype=complex)
        by_pivot: dict[int, tuple[list[int], list[int]]] = {}
        for i, alpha in enumerate(basis):
            j = next(k for k, e in enumerate(alpha) if e > 0)
            lowered = MultiIndex(
                e - 1 if k == j else e for k, e in enumerate(alpha)
            )
            tgt, src = by_pivot.setdefault(j, ([], []))
            tgt.append(i)
            src.append(prev_index[lowered])
        for j, (tgt, src) in by_pivot.items():
            cur[:, tgt] = lin[j] @ prev[:, src]
        chain.append(cur)
    return chain


def composition_matrix(u: UnitaryMatrix, n: int) -> CompositionMatrix:
    """Matrix of C_u on Hom(n); the identity unitary gives the identity."""
    return CompositionMatrix(u, n, composition_chain(u, n)[n])


def beta_norm(p: HomPoly, family: WeightFamily) -> float:
    """||p|| in H^2(beta): sqrt(sum |c_alpha|^2 beta_alpha^2)."""
    if p.d != family.d:
        raise ValueError("dimension mismatch between polynomial and family")
    total = 0.0
    for alpha, c in p.coeffs.items():
        b = family.beta(alpha)
        total += (c.real * c.real + c.imag * c.imag) * b * b
    return math.sqrt(total)
