"""Quantum phase-estimation bound for lossy two-arm photon states.

For weights x_s on |s>|n-s> and binomial loss of the upper-arm photons, the
Fisher-type quantity is

    F(x) = sum_s s^2 x_s - sum_l N_l^2 / D_l,
    N_l = sum_s x_s s B^s_l,   D_l = sum_s x_s B^s_l,

and the uncertainty is 1 / (2 sqrt(F)).  Because sum_l B^s_l = 1 this equals
sum_l D_l Var_l(s), the variance of s in each loss sector weighted by the
sector probability.  That form is what gets evaluated: it is nonnegative term
by term and keeps full relative precision when F is many orders of magnitude
below sum_s s^2 x_s (large lossy N00N states).

F is concave in x (a linear term minus quadratic-over-linear terms), so any
local maximizer over the probability simplex is global.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .bounds import UnboundedImprovementError, xi_constant
from .core import DomainError, WeightVector, check_eta, log_loss_kernel
from .scalar import golden_section_min

ARMIJO = 1e-4
MAX_ITER = 10_000
EXTRA_RANDOM_STARTS = 3
BOUNDARY_MIX = 1e-6


class ConvergenceError(RuntimeError):
    """Optimizer hit its iteration cap; ``best`` holds the last iterate."""

    def __init__(self, msg, best=None):
        super().__init__(msg)
        self.best = best


@dataclass(frozen=True)
class SolverReport:
    iterations: int
    grad_norm: float
    n_starts: int
    start_spread: float = 0.0
    extra: dict = field(default_factory=dict)


@dataclass(frozen=True)
class QuantumOptimum:
    n: int
    k: int
    weights: WeightVector
    delta_phi: float
    solver_report: SolverReport


class _Kernel:
    """Loss kernel for n photons at effective transmission eta**passes."""

    def __init__(self, n: int, eta: float, passes: int = 1):
        self.n = n
        self.log_k = log_loss_kernel(n, eta, passes)
        self.k = np.exp(self.log_k)
        self.s = np.arange(n + 1, dtype=float)

    def sectors(self, x: np.ndarray):
        """Per-sector probability D_l, conditional mean r_l, variance."""
        with np.errstate(divide="ignore"):
            logw = np.log(x)[:, None] + self.log_k
        top = logw.max(axis=0)
        occupied = np.isfinite(top)
        w = np.exp(logw[:, occupied] - top[occupied])
        total = w.sum(axis=0)
        p = w / total
        mean = self.s @ p
        var = ((self.s[:, None] - mean) ** 2 * p).sum(axis=0)
        weight = np.exp(top[occupied]) * total
        return occupied, weight, mean, var

    def fisher(self, x: np.ndarray) -> float:
        _, weight, _, var = self.sectors(x)
        return float(weight @ var)

    def fisher_and_grad(self, x: np.ndarray):
        occupied, weight, mean, var = self.sectors(x)
        f = float(weight @ var)
        # dF/dx_s = sum_l B^s_l (s - r_l)^2 over occupied sectors; an empty
        # sector entered by a single s has zero variance and adds nothing
        dev = (self.s[:, None] - mean[None, :]) ** 2
        grad = (self.k[:, occupied] * dev).sum(axis=1)
        return f, grad


def _as_weights(w) -> WeightVector:
    return w if isinstance(w, WeightVector) else WeightVector(w)


def _uncertainty(f: float) -> float:
    return math.inf if f <= 0.0 else 0.5 / math.sqrt(f)


def fisher_bracket(w, eta: float, passes: int = 1) -> float:
    """The bracketed quantity F(x); the quantum Fisher information is 4F."""
    w = _as_weights(w)
    return _Kernel(w.n, check_eta(eta), passes).fisher(w.x)


def fisher_bracket_grad(w, eta: float, passes: int = 1) -> np.ndarray:
    w = _as_weights(w)
    return _Kernel(w.n, check_eta(eta), passes).fisher_and_grad(w.x)[1]


def quantum_uncertainty(w, eta: float) -> float:
    """Minimal single-pass uncertainty for weights ``w``; inf if F = 0."""
    return _uncertainty(fisher_bracket(w, eta))


def quantum_multipass_uncertainty(w, eta: float, k: int) -> float:
    """k passes: loss eta -> eta**k and the whole bound divided by k."""
    k = int(k)
    if k < 1:
        raise DomainError("k must be >= 1")
    return _uncertainty(fisher_bracket(w, eta, passes=k)) / k


def _barrier_ascent(kernel: _Kernel, x0: np.ndarray, tol: float, max_iter: int):
    """Maximize F over the simplex by a primal log-barrier Newton method.

    Solves max F(x) + mu * sum(ln x_s) subject to sum(x) = 1 for a falling
    sequence of mu.  Each Newton system is solved in the scaled variable
    u = d / x, which stays well conditioned when optimal weights span many
    orders of magnitude.  On the central path F* - F <= (n + 1) mu, so the
    loop stops once that bound is below tol * F / 2, i.e. the relative error
    of the uncertainty is below tol / 4.

    Returns ``(x, residual, newton_steps)`` where ``residual`` is the scaled
    stationarity measure sum_s x_s |dF/dx_s / F - 1| (zero exactly at an
    optimum, since x . grad F = F).
    """
    x = np.asarray(x0, dtype=float)
    if np.any(x <= 0.0):
        raise DomainError("barrier start must be strictly inside the simplex")
    x = x / x.sum()
    dim = x.size
    mu = kernel.fisher(x) / dim
    if not mu > 0.0:
        raise DomainError("starting point carries no phase information")
    s = kernel.s
    steps = 0
    kkt = np.zeros((dim + 1, dim + 1))

    def merit(y):
        return kernel.fisher(y) + mu * float(np.log(y).sum())

    while True:
        while True:
            steps += 1
            if steps > max_iter:
                raise ConvergenceError(
                    f"no convergence in {max_iter} Newton steps (mu = {mu:.3e})",
                    best=WeightVector(x))
            occupied, weight, mean, var = kernel.sectors(x)
            f = float(weight @ var)
            c = kernel.k[:, occupied] * (s[:, None] - mean[None, :])
            grad = (c * (s[:, None] - mean[None, :])).sum(axis=1)
            hess = -2.0 * (c / weight) @ c.T
            kkt[:dim, :dim] = x[:, None] * hess * x[None, :]
            kkt[:dim, :dim][np.diag_indices(dim)] -= mu
            kkt[:dim, dim] = kkt[dim, :dim] = x
            kkt[dim, dim] = 0.0
            xg = x * grad + mu
            u = np.linalg.solve(kkt, np.concatenate([-xg, [0.0]]))[:dim]
            decrement = float(xg @ u)
            if decrement <= 1e-2 * tol * f:
                break
            alpha = 1.0
            if np.any(u < 0.0):
                alpha = min(1.0, 0.99 / float(np.max(-u)))
            m0 = merit(x)
            while True:
                x_new = x * (1.0 + alpha * u)
                x_new /= x_new.sum()
                if merit(x_new) >= m0 + ARMIJO * alpha * decrement or alpha < 1e-12:
                    break
                alpha *= 0.5
            if np.array_equal(x_new, x):
                break
            x = x_new
        if dim * mu <= 0.5 * tol * f:
            break
        mu *= 0.1
    f, g = kernel.fisher_and_grad(x)
    return x, float(x @ np.abs(g / f - 1.0)), steps


def _noon_start(n: int, eta_eff: float) -> np.ndarray:
    x = np.zeros(n + 1)
    half = math.exp(0.5 * n * math.log(eta_eff)) if eta_eff < 1.0 else 1.0
    x[n] = 1.0 / (1.0 + half)
    x[0] = half / (1.0 + half)
    return x


def _starts(n: int, eta_eff: float, multistart: bool, seed: int):
    uniform = np.full(n + 1, 1.0 / (n + 1))
    starts = [uniform]
    if multistart:
        # the barrier method needs an interior point; stay within 1e-6 of N00N
        starts.append((1.0 - BOUNDARY_MIX) * _noon_start(n, eta_eff) + BOUNDARY_MIX * uniform)
        rng = np.random.default_rng(seed)
        starts.extend(rng.dirichlet(np.ones(n + 1)) for _ in range(EXTRA_RANDOM_STARTS))
    return starts


def _check_tol(tol: float) -> float:
    if not 1e-12 <= tol <= 1e-4:
        raise DomainError(f"tol must lie in [1e-12, 1e-4], got {tol!r}")
    return float(tol)


def _optimize(n: int, eta: float, passes: int, tol: float, multistart: bool,
              max_iter: int) -> QuantumOptimum:
    kernel = _Kernel(n, eta, passes)
    eta_eff = math.exp(passes * math.log(eta))
    results = []
    iterations = 0
    for x0 in _starts(n, eta_eff, multistart, seed=1_000_003 * n + passes):
        x, pg, it = _barrier_ascent(kernel, x0, tol, max_iter)
        iterations += it
        results.append((_uncertainty(kernel.fisher(x)) / passes, x, pg))
    best_dphi, best_x, best_pg = min(results, key=lambda r: r[0])
    spread = max(r[0] for r in results) / best_dphi - 1.0
    if spread > 10.0 * tol:
        raise RuntimeError(
            f"optimizer starts disagree by {spread:.3e} (n={n}, eta={eta}, k={passes}); "
            "the objective should be concave")
    weights = WeightVector(best_x)
    dphi = quantum_multipass_uncertainty(weights, eta, passes)
    report = SolverReport(iterations=iterations, grad_norm=best_pg,
                          n_starts=len(results), start_spread=spread)
    return QuantumOptimum(n=n, k=passes, weights=weights, delta_phi=dphi,
                          solver_report=report)


def optimize_weights(n: int, eta: float, tol: float = 1e-9, multistart: bool = True,
                     max_iter: int = MAX_ITER) -> QuantumOptimum:
    """Optimal single-pass n-photon weights under loss ``eta``.

    Starts from uniform weights; with ``multistart`` it also starts from the
    optimal N00N weights and three random points, and raises if the runs
    disagree by more than 10*tol (they cannot for a concave objective).
    """
    if int(n) != n or n < 1:
        raise DomainError("n must be an integer >= 1")
    return _optimize(int(n), check_eta(eta), 1, _check_tol(tol), multistart, max_iter)


def noon_restricted_optimum(n: int, eta: float) -> QuantumOptimum:
    """Best state supported on {0, n}, by golden-section over the log-odds."""
    if int(n) != n or n < 1:
        raise DomainError("n must be an integer >= 1")
    n = int(n)
    eta = check_eta(eta)
    kernel = _Kernel(n, eta)

    def weights(u):
        # log-odds keeps tiny x_0 exact when x_n is within 1e-13 of one
        x = np.zeros(n + 1)
        x[n] = 1.0 / (1.0 + math.exp(-u))
        x[0] = 1.0 / (1.0 + math.exp(u))
        return x

    hi = 1.0 - n * math.log(eta)
    u, _ = golden_section_min(lambda u: -kernel.fisher(weights(u)), -1.0, hi, tol=1e-12)
    w = WeightVector(weights(u))
    report = SolverReport(iterations=0, grad_norm=0.0, n_starts=1)
    return QuantumOptimum(n=n, k=1, weights=w, delta_phi=quantum_uncertainty(w, eta),
                          solver_report=report)


def default_k_max(eta: float) -> int:
    """Twice the classical optimal pass count, 4(1 + xi)/|ln eta|, rounded up."""
    eta = check_eta(eta)
    if eta == 1.0:
        raise UnboundedImprovementError(
            "without loss free passes improve precision without bound; pass k_max")
    return max(1, math.ceil(4.0 * (1.0 + xi_constant()) / -math.log(eta)))


def optimize_multipass(n: int, eta: float, k_max: int | None = None, tol: float = 1e-9,
                       multistart: bool = True, relaxed_k: bool = False,
                       max_iter: int = MAX_ITER) -> QuantumOptimum:
    """Best n-photon state and integer pass count k in [1, k_max].

    The bound is not convex in k, so every k is scanned; ties go to the
    smaller k.  ``relaxed_k`` additionally records the real-k minimum near
    the integer optimum in ``solver_report.extra`` (diagnostic only).
    """
    if int(n) != n or n < 1:
        raise DomainError("n must be an integer >= 1")
    n = int(n)
    eta = check_eta(eta)
    tol = _check_tol(tol)
    if k_max is None:
        k_max = default_k_max(eta)
    k_max = int(k_max)
    if k_max < 1:
        raise DomainError("k_max must be >= 1")
    best = None
    scan = {}
    for k in range(1, k_max + 1):
        opt = _optimize(n, eta, k, tol, multistart, max_iter)
        scan[k] = opt.delta_phi
        if best is None or opt.delta_phi < best.delta_phi:
            best = opt
    extra = {"k_scan": scan}
    if relaxed_k and eta < 1.0:
        extra.update(_relaxed_k(n, eta, best.k, tol))
    report = SolverReport(iterations=best.solver_report.iterations,
                          grad_norm=best.solver_report.grad_norm,
                          n_starts=best.solver_report.n_starts,
                          start_spread=best.solver_report.start_spread, extra=extra)
    return QuantumOptimum(n=n, k=best.k, weights=best.weights, delta_phi=best.delta_phi,
                          solver_report=report)


def _relaxed_k(n: int, eta: float, k_int: int, tol: float) -> dict:
    log_eta = math.log(eta)

    def at(k):
        # real pass count: eta**k enters the kernel directly
        eta_k = math.exp(k * log_eta)
        return _optimize(n, eta_k, 1, tol, False, MAX_ITER).delta_phi / k

    lo = max(1.0, k_int - 1.0)
    k_real, dphi = golden_section_min(at, lo, k_int + 1.0, tol=1e-6)
    return {"relaxed_k": k_real, "relaxed_delta_phi": dphi}
