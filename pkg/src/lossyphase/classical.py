"""Coherent-light Mach-Zehnder interferometer with loss in the phase arm.

The two detectors see independent Poisson counts with means
``A*nbar*(1 -/+ v*cos(phi))``; everything here follows from that model.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.stats import poisson

from .core import DomainError, InterferometerParams, check_eta
from .scalar import golden_section_min


@dataclass(frozen=True)
class OutputMeans:
    mean_n1: float
    mean_n2: float
    amplitude: float
    visibility: float


def amplitude_visibility(transmission: float, eta: float) -> tuple[float, float]:
    t = transmission
    denom = 1.0 - t * (1.0 - eta)
    amplitude = denom / 2.0
    if denom == 0.0:
        return 0.0, 0.0
    vis = 2.0 * math.sqrt(t * (1.0 - t) * eta) / denom
    # full visibility is exact at T = 1/(1+eta); snap away rounding residue
    if abs(vis - 1.0) < 1e-12:
        vis = 1.0
    return amplitude, vis


def fringe_factors(v: float, phi: float) -> tuple[float, float]:
    """(1 - v cos phi, 1 + v cos phi) without cancellation near the dark fringes."""
    half_s = math.sin(0.5 * phi) ** 2
    half_c = math.cos(0.5 * phi) ** 2
    return (1.0 - v) + 2.0 * v * half_s, (1.0 - v) + 2.0 * v * half_c


def output_means(p: InterferometerParams) -> OutputMeans:
    a, v = amplitude_visibility(p.transmission, p.eta)
    f1, f2 = fringe_factors(v, p.phi)
    return OutputMeans(
        mean_n1=a * p.nbar * f1,
        mean_n2=a * p.nbar * f2,
        amplitude=a,
        visibility=v,
    )


def _sin(phi: float) -> float:
    s = math.sin(phi)
    # sin(pi) evaluates to ~1e-16; dark fringes must give exactly zero slope
    return 0.0 if abs(s) < 1e-15 else s


def _mean_derivatives(p: InterferometerParams) -> tuple[float, float]:
    a, v = amplitude_visibility(p.transmission, p.eta)
    d = a * p.nbar * v * _sin(p.phi)
    return d, -d


def fisher_analytic(p: InterferometerParams) -> float:
    """Closed-form Fisher information of the two-detector click statistics."""
    a, v = amplitude_visibility(p.transmission, p.eta)
    s = _sin(p.phi)
    # 2 - v^2 (cos 2phi + 1) written without the 1 - cos^2 cancellation
    den = 2.0 * ((1.0 - v * v) + (v * s) ** 2)
    if den <= 0.0:
        # v = 1 at a dark fringe: take the limit phi -> 0, pi
        return 2.0 * p.nbar * a * v * v
    return 4.0 * p.nbar * a * v * v * s * s / den


def poisson_cutoff(mean: float, tail_mass: float) -> int:
    """Smallest N with P(X > N) < tail_mass for X ~ Poisson(mean)."""
    if mean <= 0.0:
        return 0
    n = int(poisson.isf(tail_mass, mean))
    while poisson.sf(n, mean) >= tail_mass:
        n += 1
    while n > 0 and poisson.sf(n - 1, mean) < tail_mass:
        n -= 1
    return n


def _detector_sums(mean: float, dmean: float, tail_mass: float):
    """Sums of P, P' and P'^2/P over one detector's truncated support."""
    if mean <= 0.0:
        # point mass at zero clicks; dmean vanishes with the mean
        return 1.0, 0.0, 0.0
    counts = np.arange(poisson_cutoff(mean, tail_mass) + 1)
    pmf = poisson.pmf(counts, mean)
    score = (counts / mean - 1.0) * dmean
    keep = pmf > 0.0
    pmf, score = pmf[keep], score[keep]
    return float(pmf.sum()), float((pmf * score).sum()), float((pmf * score * score).sum())


def fisher_numeric(p: InterferometerParams, tail_mass: float = 1e-12) -> float:
    """Fisher information by direct summation over click pairs.

    The joint distribution factorizes, so the double sum collapses to
    single-detector sums: F = F1*S2 + 2*D1*D2 + S1*F2.
    """
    if not 0.0 < tail_mass <= 1e-6:
        raise DomainError(f"tail_mass must lie in (0, 1e-6], got {tail_mass!r}")
    means = output_means(p)
    d1, d2 = _mean_derivatives(p)
    s1, g1, f1 = _detector_sums(means.mean_n1, d1, tail_mass)
    s2, g2, f2 = _detector_sums(means.mean_n2, d2, tail_mass)
    return f1 * s2 + 2.0 * g1 * g2 + s1 * f2


def optimal_transmission(eta: float, verify: bool = False) -> float:
    """Input transmissivity maximizing Fisher information at phi = pi/2.

    With ``verify`` the closed form is confirmed by golden-section search over
    T and a ``RuntimeError`` is raised if the two disagree by more than 1e-6.
    """
    eta = check_eta(eta)
    t_opt = 1.0 / (1.0 + math.sqrt(eta))
    if verify:
        t_found, _ = golden_section_min(
            lambda t: -fisher_analytic(InterferometerParams(t, eta, math.pi / 2, 1.0)),
            0.0, 1.0, tol=1e-8)
        if abs(t_found - t_opt) > 1e-6:
            raise RuntimeError(f"golden-section optimum {t_found} != closed form {t_opt}")
    return t_opt


def maxvis_transmission(eta: float) -> float:
    return 1.0 / (1.0 + check_eta(eta))


def _check_budget(nbar: float) -> float:
    nbar = float(nbar)
    if not nbar > 0.0:
        raise DomainError(f"photon budget must be positive, got {nbar!r}")
    return nbar


def sil_uncertainty(eta: float, nbar: float) -> float:
    """Standard interferometric limit (1 + sqrt(eta)) / (2 sqrt(nbar eta))."""
    eta = check_eta(eta)
    nbar = _check_budget(nbar)
    return (1.0 + math.sqrt(eta)) / (2.0 * math.sqrt(nbar * eta))


def maxvis_uncertainty(eta: float, nbar: float) -> float:
    eta = check_eta(eta)
    nbar = _check_budget(nbar)
    return math.sqrt((1.0 + eta) / (2.0 * nbar * eta))


def uncertainty_from_fisher(f: float) -> float:
    return math.inf if f <= 0.0 else 1.0 / math.sqrt(f)


STRATEGY_TRANSMISSION = {
    "optimal-T": optimal_transmission,
    "max-visibility": maxvis_transmission,
}


def uncertainty_vs_phase(strategy: str, eta: float, nbar: float, phi_grid):
    """(phi, delta_phi) pairs for one transmission strategy; inf where F = 0."""
    try:
        t = STRATEGY_TRANSMISSION[strategy](eta)
    except KeyError:
        raise DomainError(f"unknown strategy {strategy!r}") from None
    phis = list(phi_grid)
    if not phis:
        raise DomainError("phase grid is empty")
    out = []
    for phi in phis:
        f = fisher_analytic(InterferometerParams(t, eta, phi, nbar))
        out.append((float(phi), uncertainty_from_fisher(f)))
    return out
