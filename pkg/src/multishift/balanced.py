"""Spherically balanced weights, slice representations, sphere measures.

A weight family is spherically balanced when the level-transition sums

    sum_k beta^2_{alpha+eps_i+eps_k} / beta^2_{alpha+eps_i}

do not depend on the direction i. Balanced families are exactly the
ones of the form ``beta_alpha = gamma_{|alpha|} * ||z^alpha||_{L^2(mu)}``
for a Reinhardt measure mu on the unit sphere and one-variable weights
gamma; this module verifies candidate pairs, never reconstructs them.

Measures are kept exactly integrable: densities are polynomials in
|z_1|^2, ..., |z_d|^2 relative to the invariant measure sigma, so all
moments reduce to exact linear combinations of sigma moments

    m_sigma(alpha) = (d-1)! alpha! / (d-1+|alpha|)!

(the closed form is itself validated against Monte-Carlo sphere
integration in the acceptance suite). Monte Carlo appears only in the
Radon-Nikodym ratio sampler and the rotation-averaging cross-checks.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

import numpy as np

from .combinatorics import (
    DEGREE_CAP,
    DegreeCapError,
    MultiIndex,
    enumerate_level,
)
from .criteria import BoundednessVerdict, Thresholds, classify_series
from .polyspace import HomPoly, compose_linear
from .unitary import UnitaryMatrix, haar_batch
from .weights import WeightFamily

__all__ = [
    "BalancedResult",
    "HaarAverageReport",
    "RadialWeights",
    "ReinhardtMeasure",
    "SliceRepresentation",
    "SzegoReport",
    "compose_slice",
    "density_moment",
    "haar_average_density",
    "is_spherically_balanced",
    "rn_bound_sample",
    "sigma_moment",
    "szego_similarity_check",
    "verify_slice",
]

_POSITIVITY_SAMPLES = 512
_POSITIVITY_SEED = 271828


def sigma_moment(alpha: MultiIndex | Sequence[int]) -> Fraction:
    """||z^alpha||^2 on the sphere under normalized invariant measure.

    Exact value (d-1)! alpha! / (d-1+|alpha|)!.
    """
    alpha = MultiIndex(alpha)
    d = alpha.dimension
    return Fraction(
        math.factorial(d - 1) * alpha.factorial(),
        math.factorial(d - 1 + alpha.degree),
    )


def _evaluate_density(
    poly: Mapping[MultiIndex, float], moduli_sq: np.ndarray
) -> np.ndarray:
    """w(z) at points given by |z_j|^2 rows."""
    total = np.zeros(len(moduli_sq))
    for gamma, coef in poly.items():
        term = np.full(len(moduli_sq), float(coef))
        for j, e in enumerate(gamma):
            if e:
                term = term * moduli_sq[:, j] ** e
        total += term
    return total


def _sphere_points(rng: np.random.Generator, d: int, count: int) -> np.ndarray:
    """Uniform points on the unit sphere of C^d (normalized Gaussians)."""
    g = rng.standard_normal((count, d)) + 1j * rng.standard_normal((count, d))
    return g / np.linalg.norm(g, axis=1, keepdims=True)


class ReinhardtMeasure:
    """A finite positive Reinhardt measure on the unit sphere, by moments.

    Three descriptors: the invariant measure ``sigma``; a density
    ``w * sigma`` with w a polynomial in |z_j|^2, strictly positive on
    a fixed sample of the sphere; or a raw ``table`` of moments (which
    need not come from any measure — downstream verdicts are labeled
    formal in that case).
    """

    def __init__(
        self,
        d: int,
        kind: str,
        density: Mapping[MultiIndex, float] | None = None,
        table: Mapping[MultiIndex, float] | None = None,
        cap: int = DEGREE_CAP,
    ):
        if kind not in ("sigma", "density", "table"):
            raise ValueError(f"unknown measure kind {kind!r}")
        if cap > DEGREE_CAP:
            raise DegreeCapError(f"cap {cap} exceeds global cap {DEGREE_CAP}")
        enumerate_level(d, 0)
        self._d = int(d)
        self._kind = kind
        self._density = dict(density) if density is not None else None
        self._table = dict(table) if table is not None else None
        self._cap = int(cap)

    # -- constructors --------------------------------------------------

    @classmethod
    def sigma(cls, d: int, cap: int = DEGREE_CAP) -> "ReinhardtMeasure":
        return cls(d, "sigma", cap=cap)

    @classmethod
    def density(
        cls,
        d: int,
        poly: Mapping[MultiIndex, float] | Mapping[tuple, float],
        cap: int = DEGREE_CAP,
    ) -> "ReinhardtMeasure":
        """w * sigma for w(z) = sum_gamma coef * prod_j |z_j|^(2 gamma_j)."""
        clean: dict[MultiIndex, float] = {}
        for key, coef in poly.items():
            gamma = MultiIndex(key)
            if gamma.dimension != d:
                raise ValueError(f"density exponent {tuple(gamma)} has dimension != {d}")
            c = float(coef)
            if c != 0.0:
                clean[gamma] = c
        if not clean:
            raise ValueError("density polynomial is identically zero")
        rng = np.random.default_rng(_POSITIVITY_SEED)
        pts = np.abs(_sphere_points(rng, d, _POSITIVITY_SAMPLES)) ** 2
        if _evaluate_density(clean, pts).min() <= 0.0:
            raise ValueError("density is not strictly positive on the sphere sample")
        return cls(d, "density", density=clean, cap=cap)

    @classmethod
    def from_moment_table(
        cls,
        d: int,
        entries: Mapping[MultiIndex, float] | Mapping[tuple, float],
        cap: int,
    ) -> "ReinhardtMeasure":
        table: dict[MultiIndex, float] = {}
        for key, val in entries.items():
            alpha = MultiIndex(key)
            m = float(val)
            if m <= 0 or not math.isfinite(m):
                raise ValueError(
                    f"moment for {tuple(alpha)} must be positive, got {val}"
                )
            table[alpha] = m
        for n in range(cap + 1):
            for alpha in enumerate_level(d, n):
                if alpha not in table:
                    raise ValueError(f"moment table missing entry for {tuple(alpha)}")
        return cls(d, "table", table=table, cap=cap)

    # -- properties ------------------------------------------------------

    @property
    def d(self) -> int:
        return self._d

    @property
    def kind(self) -> str:
        return self._kind

    @property
    def cap(self) -> int:
        return self._cap

    @property
    def is_formal(self) -> bool:
        """True when moments are raw table data, not a verified measure."""
        return self._kind == "table"

    def density_poly(self) -> dict[MultiIndex, float]:
        if self._kind == "sigma":
            return {MultiIndex((0,) * self._d): 1.0}
        if self._kind == "density":
            assert self._density is not None
            return dict(self._density)
        raise ValueError("moment tables carry no pointwise density")

    # -- moments ---------------------------------------------------------

    def moment(self, alpha: MultiIndex | Sequence[int]) -> float:
        """m_alpha = ||z^alpha||^2 in L^2 of the measure."""
        alpha = MultiIndex(alpha)
        if alpha.dimension != self._d:
            raise ValueError("multi-index dimension mismatch")
        if alpha.degree > self._cap:
            raise DegreeCapError(
                f"degree {alpha.degree} exceeds measure cap {self._cap}"
            )
        if self._kind == "sigma":
            return float(sigma_moment(alpha))
        if self._kind == "density":
            assert self._density is not None
            return density_moment(self._density, self._d, alpha)
        assert self._table is not None
        return self._table[alpha]

    # -- serialization ----------------------------------------------------

    def to_descriptor(self) -> dict:
        desc: dict = {"kind": self._kind, "d": self._d, "cap": self._cap}
        if self._kind == "density":
            assert self._density is not None
            desc["poly"] = [
                {"gamma": list(g), "coef": c}
                for g, c in sorted(self._density.items())
            ]
        if self._kind == "table":
            assert self._table is not None
            desc["entries"] = [
                {"alpha": list(alpha), "m": self._table[alpha]}
                for n in range(self._cap + 1)
                for alpha in enumerate_level(self._d, n)
            ]
        return desc

    @classmethod
    def from_descriptor(cls, desc: Mapping) -> "ReinhardtMeasure":
        kind = desc.get("kind")
        try:
            d = int(desc["d"])
        except KeyError:
            raise ValueError("measure.d: missing") from None
        cap = int(desc.get("cap", DEGREE_CAP))
        if kind == "sigma":
            return cls.sigma(d, cap=cap)
        if kind == "density":
            if "poly" not in desc:
                raise ValueError("measure.poly: missing")
            poly = {}
            for i, item in enumerate(desc["poly"]):
                try:
                    poly[tuple(item["gamma"])] = item["coef"]
                except (KeyError, TypeError):
                    raise ValueError(
                        f"measure.poly[{i}]: needs 'gamma' and 'coef'"
                    ) from None
            return cls.density(d, poly, cap=cap)
        if kind == "table":
            if "entries" not in desc:
                raise ValueError("measure.entries: missing")
            entries = {}
            for i, item in enumerate(desc["entries"]):
                try:
                    entries[tuple(item["alpha"])] = item["m"]
                except (KeyError, TypeError):
                    raise ValueError(
                        f"measure.entries[{i}]: needs 'alpha' and 'm'"
                    ) from None
            return cls.from_moment_table(d, entries, cap=cap)
        raise ValueError(f"measure.kind: unknown kind {kind!r}")

    def __repr__(self) -> str:  # pragma: no cover
        return f"ReinhardtMeasure(d={self._d}, kind={self._kind!r}, cap={self._cap})"


def density_moment(
    poly: Mapping[MultiIndex, float] | Mapping[tuple, float],
    d: int,
    alpha: MultiIndex | Sequence[int],
) -> float:
    """m_alpha of w * sigma: exact linear combination of sigma moments."""
    alpha = MultiIndex(alpha)
    total = 0.0
    for key, coef in poly.items():
        gamma = MultiIndex(key)
        shifted = MultiIndex(a + g for a, g in zip(alpha, gamma))
        total += float(coef) * float(sigma_moment(shifted))
    return total


class RadialWeights:
    """One-variable weights gamma_n = ||t^n||, normalized to gamma_0 = 1."""

    def __init__(self, gammas: Sequence[float]):
        vals = tuple(float(g) for g in gammas)
        if not vals:
            raise ValueError("need at least gamma_0")
        if abs(vals[0] - 1.0) > 1e-12:
            raise ValueError(
                f"gamma_0 must be 1 (slice pairs are normalized), got {vals[0]}"
            )
        if any(g <= 0 or not math.isfinite(g) for g in vals):
            raise ValueError("gamma entries must be positive finite")
        self._gammas = vals

    @property
    def cap(self) -> int:
        return len(self._gammas) - 1

    def gamma(self, n: int) -> float:
        if not 0 <= n <= self.cap:
            raise DegreeCapError(f"degree {n} outside 0..{self.cap}")
        return self._gammas[n]

    def to_descriptor(self) -> dict:
        return {"gamma": list(self._gammas)}

    @classmethod
    def from_descriptor(cls, desc: Mapping) -> "RadialWeights":
        if "gamma" not in desc:
            raise ValueError("gamma: missing")
        return cls(desc["gamma"])

    def __repr__(self) -> str:  # pragma: no cover
        return f"RadialWeights(cap={self.cap})"


@dataclass(frozen=True)
class SliceRepresentation:
    """The pair [mu, gamma] composing to beta_alpha = gamma_|alpha| sqrt(m_alpha)."""

    measure: ReinhardtMeasure
    gammas: RadialWeights

    @property
    def cap(self) -> int:
        return min(self.measure.cap, self.gammas.cap)

    def beta(self, alpha: MultiIndex | Sequence[int]) -> float:
        alpha = MultiIndex(alpha)
        return self.gammas.gamma(alpha.degree) * math.sqrt(self.measure.moment(alpha))

    def to_weight_family(self, cap: int | None = None) -> WeightFamily:
        cap = self.cap if cap is None else cap
        if cap > self.cap:
            raise DegreeCapError(f"cap {cap} exceeds slice cap {self.cap}")
        entries = {
            alpha: self.beta(alpha)
            for n in range(cap + 1)
            for alpha in enumerate_level(self.measure.d, n)
        }
        return WeightFamily.from_table(self.measure.d, entries, cap=cap)


def compose_slice(rep: SliceRepresentation, alpha: MultiIndex | Sequence[int]) -> float:
    """beta_alpha = gamma_{|alpha|} * sqrt(m_alpha)."""
    return rep.beta(alpha)


@dataclass(frozen=True)
class BalancedResult:
    """Outcome of the direction-independence test of the transition sums."""

    is_balanced: bool
    alpha: MultiIndex | None = None
    i: int | None = None
    j: int | None = None
    sum_i: float | None = None
    sum_j: float | None = None

    def __bool__(self) -> bool:
        return self.is_balanced


def is_spherically_balanced(
    family: WeightFamily, N: int, tol: float = 1e-10
) -> BalancedResult:
    """Check the balanced condition for all |alpha| <= N.

    The two-step transition sums out of alpha + eps_i must agree for
    every pair of directions i, j, up to relative tol; needs weights to
    degree N + 2.
    """
    if N + 2 > family.cap:
        raise DegreeCapError(
            f"balance check at N = {N} needs degree {N + 2} <= cap {family.cap}"
        )
    d = family.d
    for n in range(N + 1):
        for alpha in enumerate_level(d, n):
            sums = []
            for i in range(1, d + 1):
                base = alpha.incremented(i)
                b2 = family.beta(base) ** 2
                sums.append(
                    sum(
                        family.beta(base.incremented(k)) ** 2
                        for k in range(1, d + 1)
                    )
                    / b2
                )
            for i in range(1, d):
                if abs(sums[i] - sums[0]) > tol * max(sums[0], sums[i]):
                    return BalancedResult(
                        False, alpha, 1, i + 1, sums[0], sums[i]
                    )
    return BalancedResult(True)


def verify_slice(
    family: WeightFamily,
    rep: SliceRepresentation,
    N: int,
    tol: float = 1e-10,
) -> tuple[bool, float]:
    """Check beta_alpha = gamma_{|alpha|} sqrt(m_alpha) up to relative tol.

    Returns (ok, max relative error over |alpha| <= N).
    """
    if N > family.cap or N > rep.cap:
        raise DegreeCapError(f"N = {N} exceeds a cap")
    worst = 0.0
    for n in range(N + 1):
        for alpha in enumerate_level(family.d, n):
            expected = rep.beta(alpha)
            err = abs(family.beta(alpha) - expected) / expected
            worst = max(worst, err)
    return worst <= tol, worst


def rn_bound_sample(
    measure: ReinhardtMeasure,
    u: UnitaryMatrix,
    samples: int,
    seed: int = 0,
) -> tuple[float, float]:
    """Sampled range of the Radon-Nikodym ratio of the rotated measure.

    For mu = w sigma the ratio is w(u^{-1} z)/w(z) since sigma is
    rotation invariant; the min/max over uniform sphere samples is an
    empirical stand-in for the essential bounds. Deterministic per seed.
    """
    if samples < 1:
        raise ValueError("samples must be >= 1")
    poly = measure.density_poly()  # rejects moment tables
    if u.d != measure.d:
        raise ValueError("dimension mismatch between unitary and measure")
    rng = np.random.default_rng(np.random.SeedSequence((seed, 0)))
    pts = _sphere_points(rng, measure.d, samples)
    w_here = _evaluate_density(poly, np.abs(pts) ** 2)
    w_back = _evaluate_density(poly, np.abs(u.inverse().apply(pts)) ** 2)
    if w_here.min() <= 0 or w_back.min() <= 0:
        raise ValueError("density is not strictly positive at a sample point")
    ratios = w_back / w_here
    return float(ratios.min()), float(ratios.max())


@dataclass(frozen=True)
class SzegoReport:
    """Moment-ratio comparison of a sphere measure against sigma.

    ``formal`` marks table-based measures whose moments were never
    certified to come from an actual measure.
    """

    k1: float
    K1: float
    argmin: MultiIndex
    argmax: MultiIndex
    verdict: BoundednessVerdict
    formal: bool

    def to_dict(self) -> dict:
        return {
            "k1": self.k1,
            "K1": self.K1,
            "argmin": list(self.argmin),
            "argmax": list(self.argmax),
            "verdict": self.verdict.to_dict(),
            "formal": self.formal,
        }


def szego_similarity_check(
    measure: ReinhardtMeasure,
    N: int,
    thresholds: Thresholds | None = None,
) -> SzegoReport:
    """Two-sided comparison of monomial norms against the invariant measure.

    Computes r_alpha = sqrt(m_alpha(mu)/m_alpha(sigma)) for |alpha| <= N
    and classifies the per-level spread series
    h_n = max(max_level r, 1/min_level r) with the standard thresholds:
    a plateau means the shift tuple on H^2(mu) is similar to the shift
    on H^2(sigma) as far as the truncation can see.
    """
    if N > measure.cap:
        raise DegreeCapError(f"N = {N} exceeds measure cap {measure.cap}")
    k1 = math.inf
    K1 = -math.inf
    argmin = argmax = None
    h_series = []
    for n in range(N + 1):
        level_min = math.inf
        level_max = -math.inf
        for alpha in enumerate_level(measure.d, n):
            r = math.sqrt(measure.moment(alpha) / float(sigma_moment(alpha)))
            if r < k1:
                k1, argmin = r, alpha
            if r > K1:
                K1, argmax = r, alpha
            level_min = min(level_min, r)
            level_max = max(level_max, r)
        h_series.append(max(level_max, 1.0 / level_min))
    assert argmin is not None and argmax is not None
    verdict = classify_series(h_series, first_n=0, thresholds=thresholds)
    return SzegoReport(
        k1=k1,
        K1=K1,
        argmin=argmin,
        argmax=argmax,
        verdict=verdict,
        formal=measure.is_formal,
    )


@dataclass(frozen=True)
class HaarAverageReport:
    """Moment estimates of the rotation average nu of a density measure.

    ``estimates[alpha]`` approximates m_alpha(nu); dividing by the sigma
    moment should give a constant independent of alpha (nu is rotation
    invariant, hence a multiple of sigma).
    """

    estimates: dict[MultiIndex, float]
    sigma_ratios: dict[MultiIndex, float]
    samples: int
    seed: int

    @property
    def common_constant(self) -> float:
        vals = list(self.sigma_ratios.values())
        return sum(vals) / len(vals)

    @property
    def max_relative_spread(self) -> float:
        c = self.common_constant
        return max(abs(v - c) / c for v in self.sigma_ratios.values())


def haar_average_density(
    measure: ReinhardtMeasure,
    samples: int,
    seed: int,
    test_alphas: Sequence[MultiIndex | Sequence[int]],
) -> HaarAverageReport:
    """Monte-Carlo moments of nu = average of mu rotated over Haar unitaries.

    Each rotated moment is computed exactly: m_alpha(mu o u^{-1}) is the
    |coefficient|^2-weighted sum of mu moments over the expansion of
    (u . z)^alpha, because the Reinhardt structure kills all cross
    terms. Only the rotation average itself is sampled.
    """
    if samples < 1:
        raise ValueError("samples must be >= 1")
    poly = measure.density_poly()
    d = measure.d
    alphas = [MultiIndex(a) for a in test_alphas]
    acc = {alpha: 0.0 for alpha in alphas}
    for u in haar_batch(d, seed, samples):
        for alpha in alphas:
            expansion = compose_linear(HomPoly.monomial(alpha), u)
            est = 0.0
            for gamma, c in expansion.coeffs.items():
                est += (c.real * c.real + c.imag * c.imag) * density_moment(
                    poly, d, gamma
                )
            acc[alpha] += est
    estimates = {alpha: acc[alpha] / samples for alpha in alphas}
    ratios = {
        alpha: est / float(sigma_moment(alpha)) for alpha, est in estimates.items()
    }
    return HaarAverageReport(
        estimates=estimates, sigma_ratios=ratios, samples=samples, seed=seed
    )
