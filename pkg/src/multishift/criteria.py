"""Decidable finite-truncation criteria for weighted multishifts.

The central quantity is the per-level product

    b_n = max_{|alpha|=n} beta_alpha/sqrt(alpha!)
        * max_{|delta|=n} sqrt(delta!)/beta_delta,

which is >= 1 always, equals 1 on level-radial families, and bounds the
norm of the composition operator C_u restricted to Hom(n) for every
unitary u. ``sup_n b_n < infinity`` characterizes the families whose
shift tuple stays similar to itself under every rotation; at finite
truncation we classify the computed series with explicit thresholds and
admit an ``inconclusive`` outcome rather than over-claim.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .combinatorics import (
    DegreeCapError,
    MultiIndex,
    enumerate_level,
)
from .polyspace import composition_chain
from .unitary import UnitaryMatrix
from .weights import WeightFamily

__all__ = [
    "BOUNDED",
    "DIVERGENT",
    "INCONCLUSIVE",
    "BoundednessVerdict",
    "HomogeneityResult",
    "LevelDiagnostic",
    "RatioBounds",
    "Thresholds",
    "classify_series",
    "cu_restricted_norm",
    "is_Ud_homogeneous",
    "kernel_diagonal_ratio",
    "level_b",
    "similarity_ratio_bounds",
    "weak_homogeneity_diagnosis",
]

BOUNDED = "bounded"
DIVERGENT = "divergent"
INCONCLUSIVE = "inconclusive"


@dataclass(frozen=True)
class LevelDiagnostic:
    """Extremal weight/Fischer-Fock ratios on one level.

    ``b = max_up * max_down`` is exactly 1 when both maxima are attained
    at the same multi-index. Ties are resolved graded-lex-first.
    """

    n: int
    max_up: float
    argmax_up: MultiIndex
    max_down: float
    argmax_down: MultiIndex
    b: float


@dataclass(frozen=True)
class Thresholds:
    """Finite-horizon verdict thresholds (recorded in every verdict)."""

    slope_min: float = 0.05
    growth_factor: float = 10.0
    plateau_tol: float = 1.5


@dataclass(frozen=True)
class BoundednessVerdict:
    classification: str
    b_series: tuple[float, ...]
    first_n: int
    fitted_slope: float
    max_b: float
    tail_ratio: float
    thresholds: Thresholds = field(default_factory=Thresholds)

    def to_dict(self) -> dict:
        return {
            "classification": self.classification,
            "b_series": list(self.b_series),
            "first_n": self.first_n,
            "fitted_slope": self.fitted_slope,
            "max_b": self.max_b,
            "tail_ratio": self.tail_ratio,
            "thresholds": {
                "slope_min": self.thresholds.slope_min,
                "growth_factor": self.thresholds.growth_factor,
                "plateau_tol": self.thresholds.plateau_tol,
            },
        }


def level_b(family: WeightFamily, n: int) -> LevelDiagnostic:
    """Exact maxima of beta/sqrt(alpha!) and its reciprocal over level n."""
    max_up = -math.inf
    max_down = -math.inf
    argmax_up = argmax_down = None
    for alpha in enumerate_level(family.d, n):
        f = math.sqrt(alpha.factorial())
        b = family.beta(alpha)
        up = b / f
        down = f / b
        if up > max_up:
            max_up, argmax_up = up, alpha
        if down > max_down:
            max_down, argmax_down = down, alpha
    assert argmax_up is not None and argmax_down is not None
    # shared argmax means the product telescopes to 1 exactly
    b_n = 1.0 if argmax_up == argmax_down else max_up * max_down
    return LevelDiagnostic(n, max_up, argmax_up, max_down, argmax_down, b_n)


def classify_series(
    values: Sequence[float],
    first_n: int,
    thresholds: Thresholds | None = None,
) -> BoundednessVerdict:
    """Classify a positive level-indexed series as bounded/divergent/inconclusive.

    ``values[i]`` is the quantity at level ``first_n + i``. Divergent
    needs both a fitted log-slope above ``slope_min`` on the last half
    of the window and a maximum above ``growth_factor``; bounded needs
    the tail max/min ratio under ``plateau_tol``; anything else is
    inconclusive.
    """
    if not values:
        raise ValueError("cannot classify an empty series")
    thresholds = thresholds or Thresholds()
    ns = np.arange(first_n, first_n + len(values))
    vals = np.asarray(values, dtype=float)
    tail = slice(len(vals) // 2, None) if len(vals) > 1 else slice(None)
    log_tail = np.log(vals[tail])
    if len(log_tail) >= 2:
        slope = float(np.polyfit(ns[tail], log_tail, 1)[0])
    else:
        slope = 0.0
    max_v = float(vals.max())
    tail_ratio = float(vals[tail].max() / vals[tail].min())
    if slope > thresholds.slope_min and max_v > thresholds.growth_factor:
        cls = DIVERGENT
    elif tail_ratio < thresholds.plateau_tol:
        cls = BOUNDED
    else:
        cls = INCONCLUSIVE
    return BoundednessVerdict(
        classification=cls,
        b_series=tuple(float(v) for v in vals),
        first_n=first_n,
        fitted_slope=slope,
        max_b=max_v,
        tail_ratio=tail_ratio,
        thresholds=thresholds,
    )


def weak_homogeneity_diagnosis(
    family: WeightFamily,
    N: int = 20,
    thresholds: Thresholds | None = None,
) -> BoundednessVerdict:
    """Verdict on sup_n b_n from the levels 1..N."""
    if N < 1:
        raise ValueError("N must be >= 1")
    if N > family.cap:
        raise DegreeCapError(f"N = {N} exceeds family cap {family.cap}")
    bs = [level_b(family, n).b for n in range(1, N + 1)]
    return classify_series(bs, first_n=1, thresholds=thresholds)


def cu_restricted_norm(u: UnitaryMatrix, family: WeightFamily, n: int) -> float:
    """Operator norm of C_u on Hom(n) in the beta inner product.

    Computed as the largest singular value of D M D^{-1} with
    M the composition matrix and D = diag(beta_alpha). With Fock
    weights the restriction is unitary, so the value is 1.
    """
    if u.d != family.d:
        raise ValueError("dimension mismatch between unitary and family")
    if n > family.cap:
        raise DegreeCapError(f"degree {n} exceeds family cap {family.cap}")
    m = composition_chain(u, n)[n]
    diag = np.array([family.beta(a) for a in enumerate_level(family.d, n)])
    scaled = (diag[:, None] * m) / diag[None, :]
    return float(np.linalg.svd(scaled, compute_uv=False)[0])


@dataclass(frozen=True)
class HomogeneityResult:
    """Outcome of the level-radial test, with a witness on failure.

    ``v_alpha = beta_alpha * sqrt((d-1+n)!/((d-1)! alpha!))`` must be
    constant on each level; on failure ``level`` and the two witnessing
    multi-indices with their v values are filled in.
    """

    is_homogeneous: bool
    level: int | None = None
    alpha_max: MultiIndex | None = None
    alpha_min: MultiIndex | None = None
    v_max: float | None = None
    v_min: float | None = None

    def __bool__(self) -> bool:
        return self.is_homogeneous


def _radial_v(family: WeightFamily, alpha: MultiIndex) -> float:
    d, n = family.d, alpha.degree
    scale = math.factorial(d - 1 + n) / (math.factorial(d - 1) * alpha.factorial())
    return family.beta(alpha) * math.sqrt(scale)


def is_Ud_homogeneous(
    family: WeightFamily, N: int, tol: float = 1e-9
) -> HomogeneityResult:
    """Test whether beta is level-radial up to relative tol on levels <= N.

    Families built in the radial parametrization (including Fock) are
    level-radial by construction and short-circuit to True.
    """
    if N > family.cap:
        raise DegreeCapError(f"N = {N} exceeds family cap {family.cap}")
    if family.is_level_radial:
        return HomogeneityResult(True)
    for n in range(N + 1):
        vmax = vmin = None
        amax = amin = None
        for alpha in enumerate_level(family.d, n):
            v = _radial_v(family, alpha)
            if vmax is None or v > vmax:
                vmax, amax = v, alpha
            if vmin is None or v < vmin:
                vmin, amin = v, alpha
        assert vmax is not None and vmin is not None
        if vmax - vmin > tol * vmax:
            return HomogeneityResult(False, n, amax, amin, vmax, vmin)
    return HomogeneityResult(True)


@dataclass(frozen=True)
class RatioBounds:
    """min/max of beta1/beta2 over |alpha| <= N with witnesses."""

    m1: float
    m2: float
    argmin: MultiIndex
    argmax: MultiIndex


def similarity_ratio_bounds(
    family1: WeightFamily, family2: WeightFamily, N: int
) -> RatioBounds:
    """Two-sided bounds on the weight ratio; finite iff similar at truncation."""
    if family1.d != family2.d:
        raise ValueError("families must share the dimension")
    if N > min(family1.cap, family2.cap):
        raise DegreeCapError(f"N = {N} exceeds a family cap")
    m1 = math.inf
    m2 = -math.inf
    argmin = argmax = None
    for n in range(N + 1):
        for alpha in enumerate_level(family1.d, n):
            r = family1.beta(alpha) / family2.beta(alpha)
            if r < m1:
                m1, argmin = r, alpha
            if r > m2:
                m2, argmax = r, alpha
    assert argmin is not None and argmax is not None
    return RatioBounds(m1, m2, argmin, argmax)


def _kernel_diagonal(
    family: WeightFamily, points: np.ndarray, truncation: int
) -> np.ndarray:
    """kappa(z, z) = sum_{|alpha|<=T} |z^alpha|^2 / beta_alpha^2, per point."""
    sq = np.abs(points) ** 2  # (npts, d)
    total = np.zeros(len(points))
    for n in range(truncation + 1):
        for alpha in enumerate_level(family.d, n):
            mono = np.ones(len(points))
            for j, e in enumerate(alpha):
                if e:
                    mono = mono * sq[:, j] ** e
            total += mono / family.beta(alpha) ** 2
    return total


def kernel_diagonal_ratio(
    family: WeightFamily,
    u: UnitaryMatrix,
    points: Sequence[Sequence[complex]] | np.ndarray,
    truncation: int,
) -> tuple[float, float]:
    """Observed range of kappa_{u^{-1}}(z,z)/kappa(z,z) over sample points.

    kappa_{u^{-1}}(z,w) = kappa(u^{-1} z, u^{-1} w). A two-sided kernel
    domination is necessary for C_u to be bounded invertible; checking
    the diagonal at sample points is a cheap necessary-condition probe,
    not the full positive-definite order relation.
    """
    if truncation > family.cap:
        raise DegreeCapError(
            f"truncation {truncation} exceeds family cap {family.cap}"
        )
    pts = np.atleast_2d(np.asarray(points, dtype=complex))
    if pts.shape[1] != family.d:
        raise ValueError("points must have d components")
    norms = np.linalg.norm(pts, axis=1)
    if (norms >= 1.0).any():
        bad = int(np.argmax(norms >= 1.0))
        raise ValueError(
            f"point {bad} lies on or outside the closed unit ball"
        )
    base = _kernel_diagonal(family, pts, truncation)
    rotated = _kernel_diagonal(family, u.inverse().apply(pts), truncation)
    ratios = rotated / base
    return float(ratios.min()), float(ratios.max())
