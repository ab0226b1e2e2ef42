"""Monte-Carlo check of Cramer-Rao saturation for the classical interferometer.

Click pairs are drawn from the product-Poisson model; k passes map the
configuration to (T, eta**k, k*phi).  Trial i draws from its own Philox
substream keyed by (seed, i), so any subset of trials can be regenerated (or
produced in parallel) without touching the others.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .classical import amplitude_visibility, fisher_analytic, output_means
from .core import DomainError, InterferometerParams
from .scalar import golden_section_min_vec

MLE_TOL = 1e-10
UNRELIABLE_FRACTION = 0.01
SEED_MASK = (1 << 64) - 1


@dataclass(frozen=True)
class TrialBatch:
    params: InterferometerParams
    passes: int
    trials: int
    seed: int
    samples: np.ndarray  # (trials, 2) click counts, read-only

    def __eq__(self, other):
        return (isinstance(other, TrialBatch) and self.params == other.params
                and self.passes == other.passes and self.seed == other.seed
                and np.array_equal(self.samples, other.samples))

    __hash__ = None


@dataclass(frozen=True)
class CrbReport:
    rmse: float
    crb: float
    ratio: float
    trials: int
    discarded: int
    bias: float
    unreliable: bool


def _check_passes(k) -> int:
    if int(k) != k or k < 1:
        raise DomainError(f"passes must be an integer >= 1, got {k!r}")
    return int(k)


def effective_params(p: InterferometerParams, k: int) -> InterferometerParams:
    """Single-pass configuration equivalent to k passes: eta -> eta**k, phi -> k*phi."""
    k = _check_passes(k)
    eta_k = math.exp(k * math.log(p.eta))
    return InterferometerParams(p.transmission, eta_k, k * p.phi, p.nbar)


def _substream(seed: int, index: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(key=seed, counter=[0, index, 0, 0]))


def simulate_clicks(p: InterferometerParams, k: int, trials: int, seed: int) -> TrialBatch:
    k = _check_passes(k)
    if int(trials) != trials or trials < 1:
        raise DomainError(f"trials must be an integer >= 1, got {trials!r}")
    seed = int(seed)
    if not 0 <= seed <= SEED_MASK:
        raise DomainError("seed must be a 64-bit unsigned integer")
    trials = int(trials)
    eff = effective_params(p, k)
    m = output_means(eff)
    means = (m.mean_n1, m.mean_n2)
    samples = np.empty((trials, 2), dtype=np.int64)
    for i in range(trials):
        samples[i] = _substream(seed, i).poisson(means)
    samples.setflags(write=False)
    return TrialBatch(params=p, passes=k, trials=trials, seed=seed, samples=samples)


def _log_likelihood(batch: TrialBatch, phi: np.ndarray) -> np.ndarray:
    """Product-Poisson log-likelihood up to phi-independent terms.

    The total mean 2*A*nbar does not depend on phi, so only
    n1 ln(1 - v cos k phi) + n2 ln(1 + v cos k phi) remains.
    """
    _, v = amplitude_visibility(batch.params.transmission,
                                math.exp(batch.passes * math.log(batch.params.eta)))
    half = 0.5 * batch.passes * phi
    f1 = (1.0 - v) + 2.0 * v * np.sin(half) ** 2
    f2 = (1.0 - v) + 2.0 * v * np.cos(half) ** 2
    n1 = batch.samples[:, 0]
    n2 = batch.samples[:, 1]
    with np.errstate(divide="ignore", invalid="ignore"):
        t1 = np.where(n1 > 0, n1 * np.log(f1), 0.0)
        t2 = np.where(n2 > 0, n2 * np.log(f2), 0.0)
    return t1 + t2


def default_window(k: int) -> float:
    return math.pi / (4.0 * _check_passes(k))


def mle_estimate(batch: TrialBatch, window_halfwidth: float | None = None):
    """Maximum-likelihood phase per trial within phi_true +/- w.

    Returns ``(estimates, edge)`` where ``edge`` marks trials whose maximum
    sits on the window boundary.  The window must stay inside one fringe
    branch, w <= pi/(2k), so the likelihood is unimodal there when the true
    phase sits mid-branch.
    """
    k = batch.passes
    w = default_window(k) if window_halfwidth is None else float(window_halfwidth)
    if not 0.0 < w <= math.pi / (2.0 * k):
        raise DomainError(f"window half-width must lie in (0, pi/(2k)] = (0, {math.pi / (2 * k)}]")
    phi0 = batch.params.phi
    lo = np.full(batch.trials, phi0 - w)
    hi = np.full(batch.trials, phi0 + w)
    est = golden_section_min_vec(lambda x: -_log_likelihood(batch, x), lo, hi, tol=MLE_TOL)
    edge = (est - lo <= 2.0 * MLE_TOL) | (hi - est <= 2.0 * MLE_TOL)
    return est, edge


def crb(p: InterferometerParams, k: int) -> float:
    """1/sqrt(F) for the phase itself after k passes: F = k^2 F(T, eta^k, k phi)."""
    k = _check_passes(k)
    f = fisher_analytic(effective_params(p, k))
    return math.inf if f <= 0.0 else 1.0 / (k * math.sqrt(f))


def rmse_vs_crb(p: InterferometerParams, k: int, trials: int, seed: int,
                window_halfwidth: float | None = None) -> CrbReport:
    batch = simulate_clicks(p, k, trials, seed)
    est, edge = mle_estimate(batch, window_halfwidth)
    err = est[~edge] - p.phi
    kept = err.size
    rmse = math.sqrt(float(np.sum(err * err)) / kept) if kept else math.nan
    bias = float(np.sum(err)) / kept if kept else math.nan
    bound = crb(p, k)
    discarded = int(edge.sum())
    return CrbReport(rmse=rmse, crb=bound, ratio=rmse / bound, trials=batch.trials,
                     discarded=discarded, bias=bias,
                     unreliable=discarded > UNRELIABLE_FRACTION * batch.trials)


def empirical_fisher(batch: TrialBatch) -> float:
    """Mean squared score at the true phase (the score has zero mean)."""
    eff = effective_params(batch.params, batch.passes)
    m = output_means(eff)
    a, v = m.amplitude, m.visibility
    nbar = batch.params.nbar
    s = math.sin(eff.phi)
    m1, m2 = m.mean_n1, m.mean_n2
    # d mu1/d phi = -d mu2/d phi = A nbar v k sin(k phi)
    dm = a * nbar * v * batch.passes * s
    n1 = batch.samples[:, 0].astype(float)
    n2 = batch.samples[:, 1].astype(float)
    score = (n1 / m1 - 1.0) * dm - (n2 / m2 - 1.0) * dm
    return float(np.mean(score * score))
