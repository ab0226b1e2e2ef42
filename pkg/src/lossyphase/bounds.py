"""Closed-form uncertainty bounds: Heisenberg, lossy N00N, chopping, multi-pass.

Pass and chop counts are treated as real numbers (the relaxation under which
the closed forms hold); ``integer_k=True`` switches to the better of the two
neighbouring integers.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

from .classical import sil_uncertainty
from .core import DomainError, check_eta
from .scalar import bisect_root

K_EQUALS_1 = "k-equals-1"
INTERIOR = "interior"
K_EQUALS_N = "k-equals-n"


class UnboundedImprovementError(DomainError):
    """Lossless free passes improve without bound; the caller must cap k."""


@dataclass(frozen=True)
class ChopRegime:
    regime: str
    eta0: float
    k_opt: float
    delta_phi: float


@dataclass(frozen=True)
class MultipassOptimum:
    xi: float
    k_opt: float
    delta_phi: float


@lru_cache(maxsize=None)
def eta0_constant() -> float:
    """Loss boundary below which single-photon chopping is optimal.

    Root of 1 + sqrt(eta) + ln(eta) = 0, about 0.2282.
    """
    return bisect_root(lambda e: 1.0 + math.sqrt(e) + math.log(e), 0.05, 0.9, xtol=1e-12)


@lru_cache(maxsize=None)
def interior_k_coefficient() -> float:
    """c in k_opt = c/|ln eta|: root of 1 + exp(-c/2) - c = 0, about 1.4777."""
    return bisect_root(lambda c: 1.0 + math.exp(-c / 2.0) - c, 1.0, 2.0, xtol=1e-12)


@lru_cache(maxsize=None)
def xi_constant() -> float:
    """Root of xi*exp(xi + 1) = 1 on (0, 1), about 0.27846."""
    return bisect_root(lambda x: x * math.exp(x + 1.0) - 1.0, 0.0, 1.0, xtol=1e-14)


def _check_resource(n: float, name: str = "n") -> float:
    n = float(n)
    if not (math.isfinite(n) and n > 0.0):
        raise DomainError(f"{name} must be a positive real, got {n!r}")
    return n


def heisenberg_limit(n: int) -> float:
    if n < 1:
        raise DomainError("n must be >= 1")
    return 1.0 / n


def _noon_like(k: float, log_eta: float) -> float:
    """(1 + eta^{k/2}) / (2 k eta^{k/2}) evaluated in log space."""
    try:
        inv = math.exp(-0.5 * k * log_eta)
    except OverflowError:
        return math.inf
    return (inv + 1.0) / (2.0 * k)


def noon_uncertainty(n: int, eta: float) -> float:
    """Lossy N00N bound with optimally weighted superposition terms.

    Grows exponentially in n for eta < 1; returns ``inf`` once the value
    leaves floating-point range.
    """
    if n < 1:
        raise DomainError("n must be >= 1")
    eta = check_eta(eta)
    return _noon_like(n, math.log(eta))


def chop_uncertainty(n: float, k: float, eta: float) -> float:
    """k-photon N00N states sent m = n/k times (m relaxed to a real)."""
    n = _check_resource(n)
    eta = check_eta(eta)
    k = float(k)
    if not 1.0 <= k <= n:
        raise DomainError(f"k must lie in [1, n] = [1, {n}], got {k}")
    return _noon_like(k, math.log(eta)) / math.sqrt(n / k)


def _chop_interior_k(n: float, eta: float) -> float:
    log_eta = math.log(eta)
    return bisect_root(lambda k: 1.0 + math.exp(0.5 * k * log_eta) + k * log_eta,
                       1.0, n, xtol=1e-12)


def chop_optimal(n: float, eta: float, integer_k: bool = False) -> ChopRegime:
    """Best chopping of n photons into N00N shots, three-regime closed form."""
    n = _check_resource(n)
    if n < 1.0:
        raise DomainError("n must be >= 1")
    eta = check_eta(eta)
    e0 = eta0_constant()
    if eta == 1.0:
        regime, k_opt, dphi = K_EQUALS_N, n, 1.0 / n
    elif eta <= e0:
        regime, k_opt, dphi = K_EQUALS_1, 1.0, sil_uncertainty(eta, n)
    elif eta > e0 ** (1.0 / n):
        regime, k_opt, dphi = K_EQUALS_N, n, _noon_like(n, math.log(eta))
    else:
        regime = INTERIOR
        k_opt = _chop_interior_k(n, eta)
        dphi = ((1.0 + math.sqrt(e0)) / (2.0 * math.sqrt(n * e0))
                * math.sqrt(math.log(eta) / math.log(e0)))
    if integer_k:
        cands = {min(max(math.floor(k_opt), 1), math.floor(n)),
                 min(max(math.ceil(k_opt), 1), math.floor(n))}
        k_opt, dphi = min(((float(k), chop_uncertainty(n, k, eta)) for k in sorted(cands)),
                          key=lambda kv: kv[1])
    return ChopRegime(regime=regime, eta0=e0, k_opt=k_opt, delta_phi=dphi)


def multipass_as_resource(n: float, eta: float, integer_k: bool = False) -> ChopRegime:
    """Classical light through the sample k times, passes charged as photons.

    Identical to N00N chopping: n/k photons see eta^k and k-fold fringes.
    """
    return chop_optimal(n, eta, integer_k=integer_k)


def multipass_uncertainty(nbar: float, k: float, eta: float) -> float:
    """Free-pass classical bound at pass count k with T tuned to eta^k."""
    nbar = _check_resource(nbar, "nbar")
    eta = check_eta(eta)
    k = float(k)
    if not k >= 1.0:
        raise DomainError(f"k must be >= 1, got {k}")
    return _noon_like(k, math.log(eta)) / math.sqrt(nbar)


def multipass_single_pass_threshold() -> float:
    """Transmission below which free passes stop helping: exp(-2(1 + xi))."""
    return math.exp(-2.0 * (1.0 + xi_constant()))


def multipass_optimal(nbar: float, eta: float, integer_k: bool = False) -> MultipassOptimum:
    """Free-pass optimum k = 2(1 + xi)/|ln eta|, delta_phi = |ln eta|/(4 xi sqrt(nbar)).

    The pass count is clamped to k >= 1, which binds for eta below
    :func:`multipass_single_pass_threshold` (about 0.0775).
    """
    nbar = _check_resource(nbar, "nbar")
    eta = check_eta(eta)
    if eta == 1.0:
        raise UnboundedImprovementError(
            "without loss free passes improve precision without bound; cap k and "
            "use multipass_uncertainty")
    xi = xi_constant()
    abs_log = -math.log(eta)
    k_opt = 2.0 * (1.0 + xi) / abs_log
    if k_opt < 1.0:
        # below eta = exp(-2(1 + xi)) the stationary point needs less than one
        # pass; the bound is increasing on k >= 1, so a single pass is best
        k_opt = 1.0
        dphi = multipass_uncertainty(nbar, 1.0, eta)
    else:
        dphi = abs_log / (4.0 * math.sqrt(nbar) * xi)
    if integer_k:
        cands = sorted({max(math.floor(k_opt), 1), max(math.ceil(k_opt), 1)})
        k_opt, dphi = min(((float(k), multipass_uncertainty(nbar, k, eta)) for k in cands),
                          key=lambda kv: kv[1])
    return MultipassOptimum(xi=xi, k_opt=k_opt, delta_phi=dphi)
