"""Haar-averaged inner products and the similar level-radial weight family.

Averaging the beta inner product over rotations turns every level Gram
into a multiple of the Fischer-Fock Gram ``diag(alpha!)`` (Hom(n) is
irreducible under the change-of-variables action, so Schur's lemma
pins the limit). The proportionality constant has the closed form

    c_n = (sum_{|alpha|=n} beta_alpha^2 / alpha!) / dim Hom(n),

which we evaluate by exact enumeration; Monte-Carlo averaging is kept
only as an independent cross-check of that identity. The derived family
``beta~_alpha = sqrt(c_{|alpha|} alpha!)`` is level-radial by
construction and the level-diagonal similarity onto it has norms
controlled by the b_n diagnostics.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .combinatorics import (
    DegreeCapError,
    enumerate_level,
    level_dimension,
)
from .polyspace import composition_chain
from .unitary import UnitaryMatrix, haar_batch
from .weights import WeightFamily

__all__ = [
    "AveragedGram",
    "HomogenizedWeights",
    "averaged_gram",
    "homogenize",
    "schur_constant",
    "similarity_norms",
]


def schur_constant(family: WeightFamily, n: int) -> float:
    """The exact rotation-average constant c_n on level n."""
    if n > family.cap:
        raise DegreeCapError(f"degree {n} exceeds family cap {family.cap}")
    total = 0.0
    for alpha in enumerate_level(family.d, n):
        b = family.beta(alpha)
        total += b * b / alpha.factorial()
    return total / level_dimension(family.d, n)


@dataclass(frozen=True)
class AveragedGram:
    """Monte-Carlo average of M_u* G_beta M_u over Haar samples."""

    n: int
    dim: int
    matrix: np.ndarray
    samples: int
    seed: int | None

    def hermitian_defect(self) -> float:
        return float(np.abs(self.matrix - self.matrix.conj().T).max())

    def relative_distance_to_limit(self, family: WeightFamily) -> float:
        """Relative Frobenius distance from the Schur limit c_n diag(alpha!)."""
        facts = np.array(
            [a.factorial() for a in enumerate_level(family.d, self.n)],
            dtype=float,
        )
        limit = schur_constant(family, self.n) * np.diag(facts)
        return float(
            np.linalg.norm(self.matrix - limit) / np.linalg.norm(limit)
        )


def _gram_diag(family: WeightFamily, n: int) -> np.ndarray:
    return np.array(
        [family.beta(a) ** 2 for a in enumerate_level(family.d, n)]
    )


def averaged_gram(
    family: WeightFamily,
    n: int,
    samples: int,
    seed: int | None = 0,
    unitaries: Sequence[UnitaryMatrix] | None = None,
) -> AveragedGram:
    """Average of M_u* G_beta M_u over ``samples`` Haar unitaries.

    Deterministic per seed (per-index derived seeds). Pass ``unitaries``
    to average over an explicit list instead of sampling; the single
    identity element reproduces G_beta itself.
    """
    if n > family.cap:
        raise DegreeCapError(f"degree {n} exceeds family cap {family.cap}")
    if unitaries is None:
        if samples < 1:
            raise ValueError("samples must be >= 1")
        if seed is None:
            raise ValueError("seed required when sampling")
        unitaries = haar_batch(family.d, seed, samples)
    else:
        unitaries = list(unitaries)
        samples = len(unitaries)
        seed = None
    dim = level_dimension(family.d, n)
    g = _gram_diag(family, n)
    acc = np.zeros((dim, dim), dtype=complex)
    for u in unitaries:
        m = composition_chain(u, n)[n]
        acc += m.conj().T @ (g[:, None] * m)
    return AveragedGram(n=n, dim=dim, matrix=acc / samples, samples=samples, seed=seed)


@dataclass(frozen=True)
class HomogenizedWeights:
    """The level-radial family similar to the input, with evidence.

    ``constants[n]`` is the exact c_n; ``family`` evaluates
    beta~_alpha = sqrt(c_n alpha!) in the radial parametrization;
    ``ratio_bounds[n]`` is the observed (min, max) of beta/beta~ on
    level n; ``mc_residuals[n]`` (when sampled) is the relative
    Frobenius distance of the averaged Gram from c_n diag(alpha!).
    """

    base: WeightFamily
    constants: tuple[float, ...]
    family: WeightFamily
    ratio_bounds: tuple[tuple[float, float], ...]
    mc_residuals: tuple[float, ...] | None
    samples: int
    seed: int | None

    def to_dict(self) -> dict:
        return {
            "c": list(self.constants),
            "ratio_bounds": [list(rb) for rb in self.ratio_bounds],
            "mc_residuals": (
                list(self.mc_residuals) if self.mc_residuals is not None else None
            ),
            "seed": self.seed,
            "samples": self.samples,
        }


def homogenize(
    family: WeightFamily,
    N: int,
    samples: int = 0,
    seed: int | None = 0,
) -> HomogenizedWeights:
    """Build beta~ from the exact constants c_0..c_N.

    ``samples > 0`` additionally runs the Monte-Carlo cross-check of the
    Schur identity on every level, sharing one stream of Haar samples
    across levels (deterministic per seed).
    """
    if N > family.cap:
        raise DegreeCapError(f"N = {N} exceeds family cap {family.cap}")
    d = family.d
    constants = [schur_constant(family, n) for n in range(N + 1)]
    if family.is_level_radial:
        # beta already equals sqrt(c_n alpha!); reuse it verbatim so the
        # similarity is exactly the identity
        tilde = family
        ratio_bounds = [(1.0, 1.0)] * (N + 1)
    else:
        # radial parametrization reproducing sqrt(c_n alpha!)
        a = [
            math.sqrt(c * math.factorial(d - 1 + n) / math.factorial(d - 1))
            for n, c in enumerate(constants)
        ]
        tilde = WeightFamily.radial(d, a)
        ratio_bounds = []
        for n in range(N + 1):
            ratios = [
                family.beta(alpha) / tilde.beta(alpha)
                for alpha in enumerate_level(d, n)
            ]
            ratio_bounds.append((min(ratios), max(ratios)))
    residuals = None
    if samples > 0:
        if seed is None:
            raise ValueError("seed required when sampling")
        acc = [
            np.zeros((level_dimension(d, n), level_dimension(d, n)), dtype=complex)
            for n in range(N + 1)
        ]
        grams = [_gram_diag(family, n) for n in range(N + 1)]
        for u in haar_batch(d, seed, samples):
            chain = composition_chain(u, N)
            for n in range(N + 1):
                m = chain[n]
                acc[n] += m.conj().T @ (grams[n][:, None] * m)
        residuals = []
        for n in range(N + 1):
            facts = np.array(
                [alpha.factorial() for alpha in enumerate_level(d, n)],
                dtype=float,
            )
            limit = constants[n] * np.diag(facts)
            residuals.append(
                float(np.linalg.norm(acc[n] / samples - limit) / np.linalg.norm(limit))
            )
    return HomogenizedWeights(
        base=family,
        constants=tuple(constants),
        family=tilde,
        ratio_bounds=tuple(ratio_bounds),
        mc_residuals=tuple(residuals) if residuals is not None else None,
        samples=samples,
        seed=seed if samples > 0 else None,
    )


def similarity_norms(family: WeightFamily, N: int) -> tuple[float, float]:
    """Norms of the identity map between H^2(beta) and H^2(beta~) at truncation.

    Returns (max beta~/beta, max beta/beta~) over |alpha| <= N; both
    equal 1 for level-radial input.
    """
    h = homogenize(family, N, samples=0)
    fwd = max(1.0 / lo for lo, _ in h.ratio_bounds)
    bwd = max(hi for _, hi in h.ratio_bounds)
    return fwd, bwd
