"""One-dimensional probability measures with exact moments.

Every distribution carries an affine map between physical coordinates ``x``
and standardized coordinates ``u = (x - center) / scale``.  Bounded
families map their support onto ``[-1, 1]``; the normal family is
standardized by its mean and standard deviation.  Rules store nodes in the
standardized coordinates so that mirror symmetry is exact in floating point.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

KINDS = ("uniform", "beta", "normal")


@dataclass(frozen=True)
class Distribution:
    """Immutable 1D probability measure.

    ``a`` and ``b`` are beta shape parameters (both 1 for uniform), ``low`` and
    ``high`` the physical range of bounded families, ``mean``/``std`` the
    normal parameters.  Use the :func:`uniform`, :func:`beta` and
    :func:`normal` constructors rather than building instances by hand.
    """

    kind: str
    a: float = 1.0
    b: float = 1.0
    low: float = 0.0
    high: float = 1.0
    mean: float = 0.0
    std: float = 1.0

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown distribution kind {self.kind!r}")
        if self.kind == "normal":
            if not self.std > 0:
                raise ValueError("normal std must be positive")
        else:
            if not self.high > self.low:
                raise ValueError("range must satisfy low < high")
            if not (self.a > 0 and self.b > 0):
                raise ValueError("shape parameters must be positive")
            if self.kind == "uniform" and (self.a != 1.0 or self.b != 1.0):
                raise ValueError("uniform distribution has no shape parameters")

    # -- affine map -------------------------------------------------------
    @property
    def bounded(self) -> bool:
        return self.kind != "normal"

    @property
    def center(self) -> float:
        if self.kind == "normal":
            return float(self.mean)
        return 0.5 * (self.low + self.high)

    @property
    def scale(self) -> float:
        if self.kind == "normal":
            return float(self.std)
        return 0.5 * (self.high - self.low)

    @property
    def support(self) -> tuple[float, float]:
        if self.kind == "normal":
            return (-math.inf, math.inf)
        return (float(self.low), float(self.high))

    @property
    def symmetric(self) -> bool:
        return self.kind != "beta" or self.a == self.b

    def to_physical(self, u):
        return self.center + self.scale * np.asarray(u, dtype=float)

    def to_standard(self, x):
        return (np.asarray(x, dtype=float) - self.center) / self.scale

    # -- serialization ----------------------------------------------------
    def to_dict(self) -> dict:
        if self.kind == "normal":
            return {"kind": "normal", "mean": self.mean, "std": self.std}
        if self.kind == "uniform":
            return {"kind": "uniform", "range": [self.low, self.high]}
        return {"kind": "beta", "a": self.a, "b": self.b, "range": [self.low, self.high]}

    @classmethod
    def from_dict(cls, data: dict) -> "Distribution":
        kind = data.get("kind")
        if kind == "normal":
            return normal(float(data.get("mean", 0.0)), float(data.get("std", 1.0)))
        lo, hi = data.get("range", [0.0, 1.0])
        if kind == "uniform":
            return uniform(float(lo), float(hi))
        if kind == "beta":
            return beta(float(data["a"]), float(data["b"]), float(lo), float(hi))
        raise ValueError(f"unknown distribution kind {kind!r}")

    def __str__(self) -> str:
        if self.kind == "normal":
            return f"normal({self.mean:g},{self.std:g})"
        if self.kind == "uniform":
            return f"uniform[{self.low:g},{self.high:g}]"
        return f"beta({self.a:g},{self.b:g})[{self.low:g},{self.high:g}]"


def uniform(low: float = -1.0, high: float = 1.0) -> Distribution:
    return Distribution("uniform", low=float(low), high=float(high))


def beta(a: float, b: float, low: float = 0.0, high: float = 1.0) -> Distribution:
    return Distribution("beta", a=float(a), b=float(b), low=float(low), high=float(high))


def normal(mean: float = 0.0, std: float = 1.0) -> Distribution:
    return Distribution("normal", mean=float(mean), std=float(std))


def parse_distribution(text: str) -> Distribution:
    """Parse the compact CLI form.

    Accepted forms: ``uniform:LO,HI``, ``beta:A,B`` or ``beta:A,B,LO,HI``,
    ``normal:MEAN,STD`` (parameters optional for uniform and normal).
    """
    kind, _, rest = text.partition(":")
    kind = kind.strip().lower()
    vals = [float(v) for v in rest.split(",") if v.strip()] if rest else []
    if kind == "uniform":
        if len(vals) not in (0, 2):
            raise ValueError("uniform takes LO,HI")
        return uniform(*vals) if vals else uniform()
    if kind == "beta":
        if len(vals) not in (2, 4):
            raise ValueError("beta takes A,B[,LO,HI]")
        return beta(*vals)
    if kind == "normal":
        if len(vals) not in (0, 2):
            raise ValueError("normal takes MEAN,STD")
        return normal(*vals) if vals else normal()
    raise ValueError(f"unknown distribution kind {kind!r}")


# -- moments ---------------------------------------------------------------

def standard_moments(dist: Distribution, jmax: int) -> np.ndarray:
    """Moments ``E[u^j]`` of the standardized variable for ``j = 0..jmax``.

    Uses the integration-by-parts recurrence of the Jacobi weight
    ``(1-u)^(b-1) (1+u)^(a-1)`` for bounded families and the Hermite
    recurrence for the normal family.  Both only add terms of equal sign for
    symmetric measures.
    """
    if jmax < 0:
        raise ValueError("jmax must be nonnegative")
    mu = np.zeros(jmax + 1)
    mu[0] = 1.0
    if jmax == 0:
        return mu
    with np.errstate(over="ignore", invalid="ignore"):
        if dist.kind == "normal":
            for j in range(1, jmax):
                mu[j + 1] = j * mu[j - 1]
        else:
            al, be = dist.b - 1.0, dist.a - 1.0
            mu[1] = (be - al) / (al + be + 2.0)
            for j in range(1, jmax):
                mu[j + 1] = (j * mu[j - 1] + (be - al) * mu[j]) / (j + al + be + 2.0)
    if not np.all(np.isfinite(mu)):
        raise OverflowError(f"standardized moments overflow below order {jmax}")
    return mu


def raw_moment(dist: Distribution, j: int) -> float:
    """Exact raw moment ``E[x^j]`` in physical coordinates."""
    if j < 0:
        raise ValueError("moment order must be nonnegative")
    if j == 0:
        return 1.0
    mu = standard_moments(dist, j)
    c, s = dist.center, dist.scale
    terms = []
    for k in range(j + 1):
        if mu[k] == 0.0:
            continue
        try:
            term = math.comb(j, k) * c ** (j - k) * s**k * mu[k]
        except OverflowError:
            raise OverflowError(f"raw moment of order {j} exceeds float range") from None
        terms.append(term)
    val = math.fsum(terms) if terms else 0.0
    if not math.isfinite(val):
        raise OverflowError(f"raw moment of order {j} exceeds float range")
    return val


def pdf(dist: Distribution, x):
    """Density in physical coordinates; zero outside the support."""
    x = np.asarray(x, dtype=float)
    if dist.kind == "normal":
        z = (x - dist.mean) / dist.std
        out = np.exp(-0.5 * z * z) / (dist.std * math.sqrt(2.0 * math.pi))
        return out if out.ndim else float(out)
    t = (x - dist.low) / (dist.high - dist.low)
    inside = (t >= 0.0) & (t <= 1.0)
    a, b = dist.a, dist.b
    log_norm = math.lgamma(a + b) - math.lgamma(a) - math.lgamma(b) - math.log(dist.high - dist.low)
    with np.errstate(divide="ignore", invalid="ignore"):
        tc = np.clip(t, 0.0, 1.0)
        val = np.exp(log_norm + (a - 1.0) * np.log(tc) + (b - 1.0) * np.log1p(-tc))
    # 0 * log(0) endpoints for a == 1 or b == 1
    val = np.where(np.isnan(val), math.exp(log_norm), val)
    out = np.where(inside, val, 0.0)
    return out if out.ndim else float(out)


def symmetry_center(dist: Distribution) -> Optional[float]:
    """Mirror point of the density, or ``None`` for skewed beta shapes."""
    return dist.center if dist.symmetric else None
