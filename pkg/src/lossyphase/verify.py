"""Cross-module oracle suites behind the ``verify`` subcommand.

Each suite returns a list of :class:`Check`; a suite passes when all of its
checks do.  ``fast`` trims grid sizes but keeps every kind of check.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .bounds import (chop_optimal, chop_uncertainty, eta0_constant, interior_k_coefficient,
                     multipass_as_resource, multipass_optimal, multipass_uncertainty,
                     noon_uncertainty, xi_constant)
from .classical import fisher_analytic, fisher_numeric, optimal_transmission, sil_uncertainty
from .core import InterferometerParams, WeightVector
from .quantum import (_Kernel, optimize_weights, quantum_multipass_uncertainty,
                      quantum_uncertainty)
from .scalar import golden_section_min

GRID_T = ("0.3", "0.5", "optimal")
GRID_ETA = (0.1, 0.6, 1.0)
GRID_PHI = (0.3, math.pi / 2, 2.8)
GRID_NBAR = (1.0, 10.0, 100.0)


@dataclass(frozen=True)
class Check:
    name: str
    passed: bool
    detail: str


def _rel(a: float, b: float) -> float:
    return abs(a - b) / abs(b)


def fisher_grid():
    """The 81 (T, eta, phi, nbar) points of the analytic/numeric comparison."""
    out = []
    for t in GRID_T:
        for eta in GRID_ETA:
            tt = optimal_transmission(eta) if t == "optimal" else float(t)
            for phi in GRID_PHI:
                for nbar in GRID_NBAR:
                    out.append(InterferometerParams(tt, eta, phi, nbar))
    return out


def suite_fisher(fast: bool = False) -> list:
    worst = 0.0
    grid = fisher_grid()
    for p in grid:
        worst = max(worst, _rel(fisher_numeric(p), fisher_analytic(p)))
    return [Check("fisher numeric vs analytic", worst < 1e-8,
                  f"max rel diff {worst:.2e} over {len(grid)} points (limit 1e-8)")]


def suite_constants(fast: bool = False) -> list:
    e0, c, xi = eta0_constant(), interior_k_coefficient(), xi_constant()
    return [
        Check("eta0 in [0.227, 0.229]", 0.227 <= e0 <= 0.229, f"eta0 = {e0:.9f}"),
        Check("interior k coefficient ~ 1.478", abs(c - 1.478) <= 1e-3, f"c = {c:.9f}"),
        Check("xi in [0.2775, 0.2785]", 0.2775 <= xi <= 0.2785, f"xi = {xi:.9f}"),
        Check("xi e^(xi+1) = 1", abs(xi * math.exp(xi + 1.0) - 1.0) < 1e-12,
              f"residual {xi * math.exp(xi + 1.0) - 1.0:.1e}"),
    ]


def noon_weights(n: int, eta: float) -> WeightVector:
    """Optimal weights on {0, n}: x_n = 1/(1 + eta^{n/2})."""
    h = math.exp(0.5 * n * math.log(eta))
    x = np.zeros(n + 1)
    x[n] = 1.0 / (1.0 + h)
    x[0] = h / (1.0 + h)
    return WeightVector(x)


def suite_closed_forms(fast: bool = False) -> list:
    checks = []
    n_max = 20 if fast else 50
    worst = 0.0
    for eta in (0.3, 0.6, 0.9):
        for n in range(1, n_max + 1):
            worst = max(worst, _rel(quantum_uncertainty(noon_weights(n, eta), eta),
                                    noon_uncertainty(n, eta)))
    checks.append(Check("N00N support reproduces closed form", worst < 1e-10,
                        f"max rel diff {worst:.2e}, n <= {n_max} (limit 1e-10)"))

    n_max = 10 if fast else 20
    worst = max(abs(optimize_weights(n, 1.0).delta_phi - 1.0 / n) for n in range(1, n_max + 1))
    checks.append(Check("lossless optimum is 1/n", worst < 1e-6,
                        f"max abs diff {worst:.2e}, n <= {n_max} (limit 1e-6)"))

    worst = max(_rel(optimize_weights(1, eta).delta_phi, sil_uncertainty(eta, 1.0))
                for eta in (0.1, 0.3, 0.6, 0.9))
    checks.append(Check("n=1 quantum optimum equals SIL", worst < 1e-10,
                        f"max rel diff {worst:.2e} (limit 1e-10)"))

    gap = math.inf
    for eta in (0.1, 0.3, 0.6, 0.9, 0.99):
        for n in (3, 10, 50):
            best_grid = min(chop_uncertainty(n, k, eta) for k in np.linspace(1.0, n, 4001))
            gap = min(gap, best_grid - chop_optimal(n, eta).delta_phi)
    checks.append(Check("chop piecewise formula vs grid minimum", gap >= -1e-9,
                        f"min(grid - formula) = {gap:.2e} (limit -1e-9)"))

    worst = 0.0
    for eta in (0.3, 0.6, 0.9):
        closed = multipass_optimal(100.0, eta)
        _, found = golden_section_min(lambda k: multipass_uncertainty(100.0, k, eta),
                                      1.0, 100.0, tol=1e-10)
        worst = max(worst, _rel(found, closed.delta_phi),
                    _rel(multipass_uncertainty(100.0, closed.k_opt, eta), closed.delta_phi))
    checks.append(Check("multi-pass closed form vs golden-section", worst < 1e-10,
                        f"max rel diff {worst:.2e} (limit 1e-10)"))
    return checks


def suite_multipass(fast: bool = False) -> list:
    """Multi-pass equivalences in the form that actually holds.

    Chopping and as-resource multi-pass agree bit for bit.  Stretching an
    n-photon state to kn photons matches k passes exactly only for n = 1; in
    general the stretched single-pass state does at least as well, which is
    what rules out any benefit from counted passes.
    """
    same = all(multipass_as_resource(n, eta) == chop_optimal(n, eta)
               for eta in (0.1, 0.228, 0.5, 0.6, 0.9, 0.99, 1.0) for n in (1, 2, 4, 16, 100))
    checks = [Check("as-resource multi-pass == chopping", same, "bit-identical ChopRegime")]

    rng = np.random.default_rng(20240601)
    worst_eq, worst_ineq = 0.0, math.inf
    for n in range(1, 5):
        for k in range(1, 4):
            for eta in (0.3, 0.6, 0.9):
                for _ in range(3 if fast else 10):
                    w = WeightVector(rng.dirichlet(np.ones(n + 1)))
                    multi = quantum_multipass_uncertainty(w, eta, k)
                    single = quantum_uncertainty(w.stretched(k), eta)
                    if n == 1:
                        worst_eq = max(worst_eq, _rel(single, multi))
                    worst_ineq = min(worst_ineq, multi / single - 1.0)
    checks.append(Check("stretched == k passes for n = 1", worst_eq < 1e-10,
                        f"max rel diff {worst_eq:.2e} (limit 1e-10)"))
    checks.append(Check("stretched single pass never worse than k passes",
                        worst_ineq >= -1e-12,
                        f"min(multi/stretched - 1) = {worst_ineq:.2e}"))
    return checks


def gradient_points(n: int, count: int, rng) -> list:
    """Random interior simplex points bounded away from the faces."""
    return [0.5 * rng.dirichlet(np.ones(n + 1)) + 0.5 / (n + 1) for _ in range(count)]


def central_difference(kernel: _Kernel, x: np.ndarray, h: float = 1e-6) -> np.ndarray:
    g = np.empty_like(x)
    for s in range(x.size):
        e = np.zeros_like(x)
        e[s] = h
        g[s] = (kernel.fisher(x + e) - kernel.fisher(x - e)) / (2.0 * h)
    return g


def suite_gradient(fast: bool = False) -> list:
    rng = np.random.default_rng(7)
    worst = 0.0
    count = 5 if fast else 20
    for n in (2, 5, 10):
        for eta in (0.3, 0.6, 0.9):
            kernel = _Kernel(n, eta)
            for x in gradient_points(n, count, rng):
                g = kernel.fisher_and_grad(x)[1]
                fd = central_difference(kernel, x)
                worst = max(worst, float(np.max(np.abs(fd - g)) / np.max(np.abs(g))))
    return [Check("analytic vs central-difference gradient", worst < 1e-5,
                  f"max rel diff {worst:.2e}, {count} points per case (limit 1e-5)")]


SUITES = {
    1: ("fisher oracle", suite_fisher),
    2: ("constants", suite_constants),
    3: ("closed-form chain", suite_closed_forms),
    6: ("multi-pass equivalences", suite_multipass),
    7: ("gradient validation", suite_gradient),
}


def run_all(fast: bool = False, log=print) -> bool:
    ok = True
    for key, (title, fn) in SUITES.items():
        for c in fn(fast):
            ok &= c.passed
            log(f"[{'PASS' if c.passed else 'FAIL'}] suite {key} ({title}): {c.name}: {c.detail}")
    return ok
