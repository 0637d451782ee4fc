"""Validated d x d unitary matrices, named special elements, Haar sampling.

The row convention follows the change-of-variables action on
coordinates: ``(u . z)_j = sum_k u[j, k] z_k``.

Haar sampling uses the phase-corrected QR of a complex Ginibre matrix,
which is distribution-correct for every d with a single code path.
Batches derive one seed per sample index so they can be generated in
any order (or in parallel) without changing the stream.
"""

from __future__ import annotations

import cmath
import math
from typing import Mapping, Sequence

import numpy as np

__all__ = [
    "UnitaryMatrix",
    "fourier",
    "haar_batch",
    "haar_sample",
    "identity",
    "permutation",
    "rotation",
    "torus",
]

_UNITARITY_TOL = 1e-12
_DET_TOL = 1e-10


class UnitaryMatrix:
    """Immutable unitary matrix, validated at construction."""

    def __init__(self, entries: np.ndarray | Sequence[Sequence[complex]]):
        m = np.array(entries, dtype=complex)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValueError(f"expected a square matrix, got shape {m.shape}")
        d = m.shape[0]
        if d < 1:
            raise ValueError("dimension must be >= 1")
        gram_defect = np.abs(m.conj().T @ m - np.eye(d)).max()
        if gram_defect > _UNITARITY_TOL:
            raise ValueError(
                f"matrix is not unitary: max |u*u - I| = {gram_defect:.3e}"
            )
        det_defect = abs(abs(np.linalg.det(m)) - 1.0)
        if det_defect > _DET_TOL:
            raise ValueError(
                f"matrix determinant modulus deviates from 1 by {det_defect:.3e}"
            )
        m.setflags(write=False)
        self._m = m

    @property
    def d(self) -> int:
        return self._m.shape[0]

    @property
    def matrix(self) -> np.ndarray:
        return self._m

    def inverse(self) -> "UnitaryMatrix":
        """u^{-1} = u*, the conjugate transpose."""
        return UnitaryMatrix(self._m.conj().T)

    def __matmul__(self, other: "UnitaryMatrix") -> "UnitaryMatrix":
        if self.d != other.d:
            raise ValueError("dimension mismatch")
        return UnitaryMatrix(self._m @ other._m)

    def apply(self, z: np.ndarray) -> np.ndarray:
        """u . z for a point (or batch of points, rows) in C^d."""
        z = np.asarray(z, dtype=complex)
        if z.ndim == 1:
            return self._m @ z
        return z @ self._m.T

    def __repr__(self) -> str:  # pragma: no cover
        return f"UnitaryMatrix(d={self.d})"

    # -- serialization -------------------------------------------------

    def to_descriptor(self) -> dict:
        return {
            "kind": "matrix",
            "entries": [
                [[float(v.real), float(v.imag)] for v in row] for row in self._m
            ],
        }

    @classmethod
    def from_descriptor(cls, desc: Mapping, d: int | None = None) -> "UnitaryMatrix":
        """Build from a JSON descriptor; unitarity is re-validated.

        ``d`` is required for kinds that do not fix the dimension
        themselves (haar, rotation, fourier, identity).
        """
        kind = desc.get("kind")
        if kind == "haar":
            if d is None:
                raise ValueError("unitary.kind=haar needs the dimension d")
            return haar_sample(d, int(desc.get("seed", 0)))
        if kind == "identity":
            if d is None:
                raise ValueError("unitary.kind=identity needs the dimension d")
            return identity(d)
        if kind == "rotation":
            if d is None:
                raise ValueError("unitary.kind=rotation needs the dimension d")
            try:
                angle = float(desc["angle"])
                plane = tuple(int(x) for x in desc["plane"])
            except KeyError as exc:
                raise ValueError(f"unitary.{exc.args[0]}: missing") from None
            return rotation(angle, plane, d)
        if kind == "permutation":
            if "pi" not in desc:
                raise ValueError("unitary.pi: missing")
            return permutation([int(x) for x in desc["pi"]])
        if kind == "torus":
            if "phases" not in desc:
                raise ValueError("unitary.phases: missing")
            phases = [_parse_phase(p, i) for i, p in enumerate(desc["phases"])]
            return torus(phases)
        if kind == "fourier":
            if d is None:
                raise ValueError("unitary.kind=fourier needs the dimension d")
            return fourier(d)
        if kind == "matrix":
            if "entries" not in desc:
                raise ValueError("unitary.entries: missing")
            rows = [
                [complex(v[0], v[1]) for v in row] for row in desc["entries"]
            ]
            return cls(rows)
        raise ValueError(f"unitary.kind: unknown kind {kind!r}")


def _parse_phase(p, i: int) -> complex:
    """A torus phase: angle in radians, or an [re, im] pair on the circle."""
    if isinstance(p, (int, float)):
        return cmath.exp(1j * float(p))
    if isinstance(p, (list, tuple)) and len(p) == 2:
        val = complex(float(p[0]), float(p[1]))
        if abs(abs(val) - 1.0) > _UNITARITY_TOL:
            raise ValueError(f"unitary.phases[{i}]: modulus must be 1")
        return val
    raise ValueError(f"unitary.phases[{i}]: expected angle or [re, im]")


# -- named special elements ---------------------------------------------


def identity(d: int) -> UnitaryMatrix:
    return UnitaryMatrix(np.eye(d, dtype=complex))


def permutation(pi: Sequence[int]) -> UnitaryMatrix:
    """Coordinate permutation: output j reads input pi[j] (1-based entries)."""
    d = len(pi)
    if sorted(pi) != list(range(1, d + 1)):
        raise ValueError(f"pi must be a permutation of 1..{d}, got {list(pi)}")
    m = np.zeros((d, d), dtype=complex)
    for j, k in enumerate(pi):
        m[j, k - 1] = 1.0
    return UnitaryMatrix(m)


def torus(phases: Sequence[complex]) -> UnitaryMatrix:
    """diag(t_1, ..., t_d) with unimodular t_j."""
    t = np.asarray(phases, dtype=complex)
    if np.abs(np.abs(t) - 1.0).max() > _UNITARITY_TOL:
        raise ValueError("torus phases must have modulus 1")
    return UnitaryMatrix(np.diag(t))


def rotation(angle: float, plane: tuple[int, int], d: int) -> UnitaryMatrix:
    """Real rotation by ``angle`` in the (1-based) coordinate plane (j, k)."""
    j, k = plane
    if not (1 <= j <= d and 1 <= k <= d and j != k):
        raise ValueError(f"plane {plane} invalid for dimension {d}")
    c, s = math.cos(angle), math.sin(angle)
    m = np.eye(d, dtype=complex)
    m[j - 1, j - 1] = c
    m[j - 1, k - 1] = s
    m[k - 1, j - 1] = -s
    m[k - 1, k - 1] = c
    return UnitaryMatrix(m)


def fourier(d: int) -> UnitaryMatrix:
    """The d x d discrete Fourier matrix, normalized to be unitary."""
    w = np.exp(2j * np.pi / d)
    j, k = np.meshgrid(np.arange(d), np.arange(d), indexing="ij")
    return UnitaryMatrix(w ** (j * k) / math.sqrt(d))


# -- Haar sampling --------------------------------------------------------


def _ginibre_qr(rng: np.random.Generator, d: int) -> np.ndarray:
    g = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    q, r = np.linalg.qr(g)
    diag = np.diagonal(r)
    # rescaling columns by the phases of R's diagonal makes the map
    # distribution-correct (plain QR is not Haar)
    return q * (diag / np.abs(diag))


def haar_sample(d: int, seed) -> UnitaryMatrix:
    """One Haar-distributed unitary, deterministic per seed."""
    if d < 1:
        raise ValueError("dimension must be >= 1")
    rng = np.random.default_rng(seed)
    return UnitaryMatrix(_ginibre_qr(rng, d))


def haar_batch(d: int, seed: int, count: int) -> list[UnitaryMatrix]:
    """``count`` Haar samples with per-index derived seeds.

    Sample s uses the seed derived from (seed, s), so any sub-batch
    reproduces the same elements regardless of evaluation order.
    """
    return [
        haar_sample(d, np.random.SeedSequence((seed, s))) for s in range(count)
    ]
