import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from lossyphase.classical import (fisher_analytic, fisher_numeric, maxvis_uncertainty,
                                  optimal_transmission, output_means, poisson_cutoff,
                                  sil_uncertainty, uncertainty_vs_phase)
from lossyphase.core import DomainError, InterferometerParams as P
from lossyphase.verify import fisher_grid

etas = st.floats(1e-3, 1.0)


def test_output_means_examples():
    m = output_means(P(0.5, 1.0, 0.3, 10))
    assert (m.amplitude, m.visibility) == (0.5, 1.0)
    for eta in (0.01, 0.1, 0.6, 0.99):
        assert output_means(P(1 / (1 + eta), eta, 0.3, 10)).visibility == 1.0
    m = output_means(P(1 / (1 + math.sqrt(0.1)), 0.1, 0.3, 10))
    # hand value: 2 sqrt(T(1-T) eta) / (1 - T(1-eta)) = 0.270208/0.316228
    assert m.amplitude == pytest.approx(0.15811388300841894, abs=1e-12)
    assert m.visibility == pytest.approx(0.8544741870810153, abs=1e-12)


@settings(max_examples=100, deadline=None)
@given(st.floats(0, 1), etas, st.floats(0, 2 * math.pi), st.floats(0.1, 1e4))
def test_output_means_invariants(t, eta, phi, nbar):
    p = P(t, eta, phi, nbar)
    m = output_means(p)
    assert 0.0 <= m.visibility <= 1.0
    assert m.mean_n1 + m.mean_n2 == pytest.approx(2 * m.amplitude * nbar, rel=1e-12)
    assert m.mean_n1 == pytest.approx(m.amplitude * nbar * (1 - m.visibility * math.cos(p.phi)),
                                      rel=1e-12, abs=1e-12)


def test_fisher_analytic_examples():
    assert fisher_analytic(P(0.5, 1.0, math.pi / 2, 100)) == pytest.approx(100, rel=1e-14)
    eta = 0.6
    f = fisher_analytic(P(optimal_transmission(eta), eta, math.pi / 2, 50))
    assert f == pytest.approx(4 * 50 * eta / (1 + math.sqrt(eta)) ** 2, rel=1e-13)
    for phi in np.linspace(0, 2 * math.pi, 13):
        f = fisher_analytic(P(1 / (1 + eta), eta, phi, 50))
        assert f == pytest.approx(2 * 50 * eta / (1 + eta), rel=1e-12)


def test_fisher_numeric_matches_analytic_on_grid():
    grid = fisher_grid()
    assert len(grid) == 81
    for p in grid:
        assert fisher_numeric(p) == pytest.approx(fisher_analytic(p), rel=1e-8)


def test_fisher_near_dark_fringe_full_visibility():
    # the vanishing mean makes 1/p blow up and compensates the flat fringe
    eta = 0.6
    limit = 2 * 20 * eta / (1 + eta)
    for phi in (1e-6, 1e-3, math.pi - 1e-6, math.pi + 1e-3):
        p = P(1 / (1 + eta), eta, phi, 20)
        assert fisher_numeric(p) == pytest.approx(limit, rel=1e-8)
    assert fisher_analytic(P(1 / (1 + eta), eta, 0.0, 20)) == pytest.approx(limit, rel=1e-14)


def test_fisher_numeric_exact_dark_fringe_is_zero():
    # at phi = 0 every outcome has zero slope; only the analytic form takes the limit
    assert fisher_numeric(P(1 / 1.6, 0.6, 0.0, 20)) == 0.0


def test_fisher_numeric_tail_mass_validation():
    with pytest.raises(DomainError):
        fisher_numeric(P(0.5, 1.0, 1.0, 10), tail_mass=1e-3)
    with pytest.raises(DomainError):
        fisher_numeric(P(0.5, 1.0, 1.0, 10), tail_mass=0.0)


def test_poisson_cutoff_is_smallest():
    from scipy.stats import poisson
    for mean in (0.5, 7.0, 300.0):
        n = poisson_cutoff(mean, 1e-12)
        assert poisson.sf(n, mean) < 1e-12 <= poisson.sf(n - 1, mean)


def test_optimal_transmission_examples():
    assert optimal_transmission(1.0) == 0.5
    assert optimal_transmission(0.1, verify=True) == pytest.approx(0.7597469266479578, abs=1e-12)
    assert optimal_transmission(0.6, verify=True) == pytest.approx(0.5635083268962916, abs=1e-12)
    assert optimal_transmission(0.6) == pytest.approx(0.56351, abs=1e-5)


@settings(max_examples=30, deadline=None)
@given(st.floats(0.01, 1.0))
def test_optimal_transmission_verification_mode(eta):
    optimal_transmission(eta, verify=True)


@settings(max_examples=50, deadline=None)
@given(etas, st.floats(0.1, 1e4), st.floats(1.5, 100))
def test_argmax_invariant_under_nbar_scaling(eta, nbar, scale):
    t = optimal_transmission(eta)
    for dt in (-1e-3, 1e-3):
        for nb in (nbar, nbar * scale):
            assert fisher_analytic(P(t, eta, math.pi / 2, nb)) >= \
                fisher_analytic(P(t + dt, eta, math.pi / 2, nb))


def test_sil_and_maxvis_examples():
    assert sil_uncertainty(1.0, 100) == pytest.approx(0.1, rel=1e-15)
    assert sil_uncertainty(0.6, 100) == pytest.approx(0.114550, abs=1e-6)
    assert sil_uncertainty(0.6, 100) == pytest.approx(0.11454972243679028, rel=1e-14)
    assert maxvis_uncertainty(1.0, 100) == pytest.approx(0.1, rel=1e-15)
    assert maxvis_uncertainty(0.1, 100) == pytest.approx(0.23452, abs=1e-5)
    for eta in (0.05, 0.3, 0.6, 0.95):
        t = optimal_transmission(eta)
        assert sil_uncertainty(eta, 7) == pytest.approx(
            1 / math.sqrt(fisher_analytic(P(t, eta, math.pi / 2, 7))), rel=1e-13)


@settings(max_examples=100, deadline=None)
@given(st.floats(1e-3, 0.999), st.floats(0.1, 1e4), st.floats(1.01, 100))
def test_sil_properties(eta, nbar, scale):
    assert sil_uncertainty(eta, nbar) < maxvis_uncertainty(eta, nbar)
    assert sil_uncertainty(eta, nbar * scale) == pytest.approx(
        sil_uncertainty(eta, nbar) / math.sqrt(scale), rel=1e-12)
    assert sil_uncertainty(min(1.0, eta * scale), nbar) < sil_uncertainty(eta, nbar)


def test_uncertainty_vs_phase_shapes():
    grid = [2 * math.pi * i / 72 for i in range(72)]
    flat = [d for _, d in uncertainty_vs_phase("max-visibility", 0.1, 100, grid)]
    assert max(flat) - min(flat) < 1e-12 * max(flat)
    curve = uncertainty_vs_phase("optimal-T", 0.1, 100, grid)
    d = np.array([v for _, v in curve])
    assert math.isinf(d[0]) and math.isinf(d[36])
    interior = np.isfinite(d)
    minima = [grid[i] for i in range(72) if interior[i] and d[i] == d[interior].min()]
    assert minima == pytest.approx([math.pi / 2, 3 * math.pi / 2], abs=1e-12)
    # crossing: optimal T is worse than max visibility away from quadrature
    assert np.any(d > np.array(flat)) and np.any(d < np.array(flat))


def test_uncertainty_vs_phase_errors():
    with pytest.raises(DomainError):
        uncertainty_vs_phase("optimal-T", 0.1, 100, [])
    with pytest.raises(DomainError):
        uncertainty_vs_phase("nope", 0.1, 100, [0.1])
