"""Validated domain types and log-space binomial primitives."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Mapping

import numpy as np
from scipy.special import gammaln

TWO_PI = 2.0 * math.pi

STRATEGY_TAGS = (
    "SIL", "MAXVIS", "HL", "NOON", "CHOP", "MP-resource", "MP-free", "Q", "QMP",
    "SNL",
)

# uncertainties above this are reported as saturated rather than as numbers
SATURATION = 1e12


class DomainError(ValueError):
    """Raised when an argument lies outside the domain of an operation."""


def _check_fraction(name: str, value: float, lo_open: bool = False) -> float:
    value = float(value)
    if not math.isfinite(value):
        raise DomainError(f"{name} must be finite, got {value!r}")
    if lo_open and not 0.0 < value <= 1.0:
        raise DomainError(f"{name} must lie in (0, 1], got {value!r}")
    if not lo_open and not 0.0 <= value <= 1.0:
        raise DomainError(f"{name} must lie in [0, 1], got {value!r}")
    return value


def check_eta(eta: float) -> float:
    return _check_fraction("eta", eta, lo_open=True)


@dataclass(frozen=True)
class InterferometerParams:
    """Classical Mach-Zehnder configuration.

    ``transmission`` is the input beam-splitter transmissivity, ``eta`` the
    power transmission of the lossy phase arm, ``phi`` the phase (normalized
    into [0, 2pi)) and ``nbar`` the mean photon number of the input beam.
    """

    transmission: float
    eta: float
    phi: float
    nbar: float

    def __post_init__(self):
        object.__setattr__(self, "transmission",
                           _check_fraction("transmission", self.transmission))
        object.__setattr__(self, "eta", check_eta(self.eta))
        phi = float(self.phi)
        if not math.isfinite(phi):
            raise DomainError(f"phi must be finite, got {phi!r}")
        phi = math.fmod(phi, TWO_PI)
        if phi < 0.0:
            phi += TWO_PI
        if phi >= TWO_PI:
            phi = 0.0
        object.__setattr__(self, "phi", phi)
        nbar = float(self.nbar)
        if not (math.isfinite(nbar) and nbar > 0.0):
            raise DomainError(f"nbar must be a positive real, got {self.nbar!r}")
        object.__setattr__(self, "nbar", nbar)


class WeightVector:
    """Photon-number weights x_0..x_n of a two-arm n-photon state.

    The input is normalized on construction, so small drift in the sum (as
    produced by optimizer iterates) is absorbed rather than rejected.
    """

    __slots__ = ("_x",)

    def __init__(self, x):
        arr = np.array(x, dtype=float).ravel()
        if arr.size < 2:
            raise DomainError("a weight vector needs at least two entries (n >= 1)")
        if not np.all(np.isfinite(arr)):
            raise DomainError("weights must be finite")
        if np.any(arr < 0.0):
            raise DomainError("weights must be nonnegative")
        total = arr.sum()
        if total <= 0.0:
            raise DomainError("weights must not all be zero")
        arr = arr / total
        arr.setflags(write=False)
        self._x = arr

    @property
    def x(self) -> np.ndarray:
        return self._x

    @property
    def n(self) -> int:
        return self._x.size - 1

    @classmethod
    def uniform(cls, n: int) -> "WeightVector":
        return cls(np.ones(n + 1))

    @classmethod
    def noon(cls, n: int, top_weight: float = 0.5) -> "WeightVector":
        """Weights supported on {0, n} with ``top_weight`` on s = n."""
        x = np.zeros(n + 1)
        x[n] = top_weight
        x[0] = 1.0 - top_weight
        return cls(x)

    def stretched(self, k: int) -> "WeightVector":
        """Map weight x_s onto photon number k*s (a kn-photon state)."""
        k = int(k)
        if k < 1:
            raise DomainError("stretch factor must be >= 1")
        out = np.zeros(k * self.n + 1)
        out[::k] = self._x
        return WeightVector(out)

    def __len__(self):
        return self._x.size

    def __eq__(self, other):
        return isinstance(other, WeightVector) and np.array_equal(self._x, other._x)

    def __hash__(self):
        return hash(self._x.tobytes())

    def __repr__(self):
        return f"WeightVector(n={self.n}, x={np.array2string(self._x, precision=6)})"


@dataclass(frozen=True)
class LossKernelRow:
    """Binomial probabilities b_l of losing l of s photons at transmission eta."""

    s: int
    eta: float
    probabilities: tuple


@dataclass(frozen=True)
class StrategyPoint:
    """One row of a comparison curve.

    ``n`` counts photons x passes for resource-counted strategies and photons
    only for free-pass ones. ``status`` is ``"ok"``, ``"saturated"`` (finite
    but above :data:`SATURATION`) or ``"infinite"``.
    """

    strategy: str
    n: float
    k: float
    delta_phi: float
    aux: Mapping[str, float] = field(default_factory=dict)
    status: str = "ok"

    def __post_init__(self):
        if self.strategy not in STRATEGY_TAGS:
            raise DomainError(f"unknown strategy tag {self.strategy!r}")
        if not self.n > 0:
            raise DomainError("n must be positive")
        if not self.k >= 1:
            raise DomainError("k must be >= 1")
        d = float(self.delta_phi)
        status = self.status
        if math.isinf(d) or math.isnan(d):
            status = "infinite"
            d = math.inf
        elif d <= 0.0:
            raise DomainError("delta_phi must be positive")
        elif d > SATURATION:
            status = "saturated"
        object.__setattr__(self, "delta_phi", d)
        object.__setattr__(self, "status", status)
        object.__setattr__(self, "aux", dict(self.aux))


def log_binomial(s: int, l: int) -> float:
    """ln C(s, l) via log-gamma."""
    if int(s) != s or int(l) != l:
        raise DomainError("log_binomial takes integers")
    s, l = int(s), int(l)
    if s < 0 or l < 0 or l > s:
        raise DomainError(f"need 0 <= l <= s, got s={s}, l={l}")
    if l == 0 or l == s:
        return 0.0
    return math.lgamma(s + 1) - math.lgamma(l + 1) - math.lgamma(s - l + 1)


def log_loss_kernel(n: int, eta: float, passes: int = 1) -> np.ndarray:
    """Matrix of ln B^s_l for s, l in 0..n; entries with l > s are -inf.

    With ``passes`` > 1 the per-photon survival is eta**passes, formed in log
    space.
    """
    eta = check_eta(eta)
    n = int(n)
    if n < 0:
        raise DomainError("n must be >= 0")
    passes = int(passes)
    if passes < 1:
        raise DomainError("passes must be >= 1")
    s = np.arange(n + 1)[:, None]
    l = np.arange(n + 1)[None, :]
    out = np.full((n + 1, n + 1), -np.inf)
    if eta == 1.0:
        out[:, 0] = 0.0
        return out
    log_keep = passes * math.log(eta)
    log_lose = math.log(-math.expm1(log_keep))
    valid = l <= s
    with np.errstate(invalid="ignore"):
        vals = (gammaln(s + 1) - gammaln(l + 1) - gammaln(s - l + 1)
                + (s - l) * log_keep + l * log_lose)
    out[valid] = np.broadcast_to(vals, out.shape)[valid]
    return out


def loss_kernel_row(s: int, eta: float) -> LossKernelRow:
    s = int(s)
    if s < 0:
        raise DomainError("s must be >= 0")
    row = np.exp(log_loss_kernel(s, eta)[s])
    return LossKernelRow(s=s, eta=float(eta), probabilities=tuple(float(b) for b in row))
