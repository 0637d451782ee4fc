"""Weight multisequences beta defining spaces H^2(beta) of formal power series.

A :class:`WeightFamily` evaluates ``beta_alpha = ||z^alpha||`` for every
multi-index within its degree cap. Built-in families:

``radial(a)``
    beta_alpha = a_{|alpha|} * sqrt((d-1)! alpha! / (d-1+|alpha|)!).
    This is the canonical level-radial parametrization; such families
    are rotation-homogeneous by construction.
``drury_arveson``
    beta_alpha = sqrt(alpha!/|alpha|!).
``polydisc_hardy``
    beta_alpha = 1.
``fock``
    beta_alpha = sqrt(alpha!), the Fischer-Fock monomial norms.
``table``
    explicit positive entries for every alpha up to the cap.

Square roots are taken last, over exact integer ratios, to limit
cancellation; evaluation is double precision.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Mapping, Sequence

from .combinatorics import (
    DEGREE_CAP,
    DegreeCapError,
    MultiIndex,
    enumerate_level,
    unit,
)

__all__ = ["WeightFamily", "fock_norm", "shift_bound"]

_NAMED = ("radial", "drury_arveson", "polydisc_hardy", "fock", "table")


def fock_norm(alpha: MultiIndex) -> float:
    """||z^alpha|| in the Fischer-Fock inner product: sqrt(alpha!)."""
    return math.sqrt(alpha.factorial())


class WeightFamily:
    """A positive weight multisequence with a fixed dimension and degree cap.

    Construct through the classmethods; instances are immutable.
    """

    def __init__(
        self,
        d: int,
        kind: str,
        cap: int,
        a: tuple[float, ...] | None = None,
        table: Mapping[MultiIndex, float] | None = None,
    ):
        if kind not in _NAMED:
            raise ValueError(f"unknown weight family kind {kind!r}")
        if cap < 0:
            raise ValueError("degree cap must be >= 0")
        if cap > DEGREE_CAP:
            raise DegreeCapError(f"cap {cap} exceeds global cap {DEGREE_CAP}")
        enumerate_level(d, 0)  # validates d against the dimension cap
        self._d = int(d)
        self._kind = kind
        self._cap = int(cap)
        self._a = a
        self._table = dict(table) if table is not None else None

    # -- constructors --------------------------------------------------

    @classmethod
    def radial(cls, d: int, a: Sequence[float]) -> "WeightFamily":
        """Level-radial family from the positive sequence a_0..a_N."""
        avals = tuple(float(x) for x in a)
        if not avals:
            raise ValueError("radial family needs at least a_0")
        if any(x <= 0 or not math.isfinite(x) for x in avals):
            raise ValueError("radial sequence entries must be positive finite")
        return cls(d, "radial", cap=len(avals) - 1, a=avals)

    @classmethod
    def drury_arveson(cls, d: int, cap: int = DEGREE_CAP) -> "WeightFamily":
        return cls(d, "drury_arveson", cap=cap)

    @classmethod
    def polydisc_hardy(cls, d: int, cap: int = DEGREE_CAP) -> "WeightFamily":
        return cls(d, "polydisc_hardy", cap=cap)

    @classmethod
    def fock(cls, d: int, cap: int = DEGREE_CAP) -> "WeightFamily":
        return cls(d, "fock", cap=cap)

    @classmethod
    def from_table(
        cls, d: int, entries: Mapping[MultiIndex, float] | Mapping[tuple, float], cap: int
    ) -> "WeightFamily":
        """Explicit table; must cover every |alpha| <= cap with beta > 0."""
        table: dict[MultiIndex, float] = {}
        for key, val in entries.items():
            alpha = MultiIndex(key)
            if alpha.dimension != d:
                raise ValueError(f"table key {tuple(alpha)} has dimension != {d}")
            beta = float(val)
            if beta <= 0 or not math.isfinite(beta):
                raise ValueError(
                    f"table entry for {tuple(alpha)} must be positive, got {val}"
                )
            table[alpha] = beta
        for n in range(cap + 1):
            for alpha in enumerate_level(d, n):
                if alpha not in table:
                    raise ValueError(f"table missing entry for {tuple(alpha)}")
        return cls(d, "table", cap=cap, table=table)

    # -- properties ----------------------------------------------------

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
    def is_level_radial(self) -> bool:
        """True when beta_alpha/sqrt(alpha!) is level-constant by construction."""
        return self._kind in ("radial", "fock")

    def radial_sequence(self) -> tuple[float, ...]:
        if self._kind != "radial":
            raise ValueError("not a radial family")
        assert self._a is not None
        return self._a

    # -- evaluation ----------------------------------------------------

    def _check(self, alpha: MultiIndex) -> int:
        if alpha.dimension != self._d:
            raise ValueError(
                f"multi-index dimension {alpha.dimension} != family dimension {self._d}"
            )
        n = alpha.degree
        if n > self._cap:
            raise DegreeCapError(
                f"degree {n} exceeds family cap {self._cap}"
            )
        return n

    def beta(self, alpha: MultiIndex | Sequence[int]) -> float:
        """beta_alpha > 0, deterministic."""
        alpha = MultiIndex(alpha)
        n = self._check(alpha)
        d = self._d
        if self._kind == "radial":
            assert self._a is not None
            ratio = Fraction(
                math.factorial(d - 1) * alpha.factorial(),
                math.factorial(d - 1 + n),
            )
            return self._a[n] * math.sqrt(ratio)
        if self._kind == "drury_arveson":
            return math.sqrt(Fraction(alpha.factorial(), math.factorial(n)))
        if self._kind == "polydisc_hardy":
            return 1.0
        if self._kind == "fock":
            return math.sqrt(alpha.factorial())
        assert self._table is not None
        return self._table[alpha]

    # -- serialization -------------------------------------------------

    def to_descriptor(self) -> dict:
        """JSON-ready descriptor; round-trips through :meth:`from_descriptor`."""
        desc: dict = {"d": self._d, "family": self._kind}
        if self._kind == "radial":
            assert self._a is not None
            desc["a"] = list(self._a)
        else:
            desc["cap"] = self._cap
        if self._kind == "table":
            assert self._table is not None
            desc["entries"] = [
                {"alpha": list(alpha), "beta": self._table[alpha]}
                for n in range(self._cap + 1)
                for alpha in enumerate_level(self._d, n)
            ]
        return desc

    @classmethod
    def from_descriptor(cls, desc: Mapping) -> "WeightFamily":
        try:
            d = int(desc["d"])
        except KeyError:
            raise ValueError("weights.d: missing") from None
        kind = desc.get("family")
        if kind == "radial":
            if "a" not in desc:
                raise ValueError("weights.a: missing for radial family")
            return cls.radial(d, desc["a"])
        if kind in ("drury_arveson", "polydisc_hardy", "fock"):
            cap = int(desc.get("cap", DEGREE_CAP))
            return cls(d, kind, cap=cap)
        if kind == "table":
            if "cap" not in desc:
                raise ValueError("weights.cap: missing for table family")
            if "entries" not in desc:
                raise ValueError("weights.entries: missing for table family")
            entries: dict[tuple, float] = {}
            for i, item in enumerate(desc["entries"]):
                try:
                    entries[tuple(item["alpha"])] = item["beta"]
                except (KeyError, TypeError):
                    raise ValueError(
                        f"weights.entries[{i}]: needs 'alpha' and 'beta'"
                    ) from None
            return cls.from_table(d, entries, cap=int(desc["cap"]))
        raise ValueError(f"weights.family: unknown kind {kind!r}")

    def __repr__(self) -> str:  # pragma: no cover
        return f"WeightFamily(d={self._d}, kind={self._kind!r}, cap={self._cap})"


def shift_bound(family: WeightFamily, N: int) -> tuple[float, ...]:
    """Empirical per-direction lower estimates of the coordinate shift norms.

    For each direction j returns max over |alpha| <= N of
    beta_{alpha+eps_j}/beta_alpha. A finite truncation can only bound
    ||M_{z_j}|| from below; growth of this quantity flags families on
    which the shift tuple is unlikely to be bounded.
    """
    if N + 1 > family.cap:
        raise DegreeCapError(
            f"shift_bound needs degree {N + 1} <= family cap {family.cap}"
        )
    d = family.d
    bounds = [0.0] * d
    for n in range(N + 1):
        for alpha in enumerate_level(d, n):
            b = family.beta(alpha)
            for j in range(1, d + 1):
                ratio = family.beta(alpha.incremented(j)) / b
                if ratio > bounds[j - 1]:
                    bounds[j - 1] = ratio
    return tuple(bounds)
