import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from lossyphase.core import (DomainError, InterferometerParams, StrategyPoint, WeightVector,
                             log_binomial, log_loss_kernel, loss_kernel_row)


def test_log_binomial_examples():
    assert log_binomial(0, 0) == 0.0
    assert log_binomial(4, 2) == pytest.approx(math.log(6), abs=1e-12)


def test_log_binomial_matches_big_integer_oracle():
    exact = math.log(math.comb(1000, 500))  # exact integer, logged once
    assert abs(log_binomial(1000, 500) - exact) < 1e-10
    assert abs(log_binomial(1000, 500) - 689.4672615678512) < 1e-10


@settings(max_examples=200, deadline=None)
@given(st.integers(0, 10_000).flatmap(lambda s: st.tuples(st.just(s), st.integers(0, s))))
def test_log_binomial_big_integer_property(sl):
    s, l = sl
    assert abs(log_binomial(s, l) - math.log(math.comb(s, l))) < 1e-10


@pytest.mark.parametrize("s,l", [(3, 4), (-1, 0), (2, -1)])
def test_log_binomial_rejects_out_of_range(s, l):
    with pytest.raises(DomainError):
        log_binomial(s, l)


def test_loss_kernel_examples():
    assert loss_kernel_row(2, 1.0).probabilities == (1.0, 0.0, 0.0)
    assert np.allclose(loss_kernel_row(1, 0.6).probabilities, (0.6, 0.4), atol=1e-15)
    assert np.allclose(loss_kernel_row(3, 0.5).probabilities, (0.125, 0.375, 0.375, 0.125),
                       atol=1e-15)


@pytest.mark.parametrize("eta", [1e-3, 0.1, 0.3, 0.5, 0.6, 0.9, 0.999, 1.0])
def test_kernel_rows_normalized_with_binomial_mean(eta):
    b = np.exp(log_loss_kernel(200, eta))
    s = np.arange(201)
    assert np.all(b >= 0.0)
    assert np.max(np.abs(b.sum(axis=1) - 1.0)) < 1e-12
    assert np.max(np.abs(b @ s - s * (1.0 - eta))) < 1e-10


def test_kernel_survives_large_s():
    # eta^s underflows in direct evaluation at this size
    b = np.exp(log_loss_kernel(2000, 0.6)[2000])
    assert abs(b.sum() - 1.0) < 1e-10


def test_multipass_kernel_uses_eta_to_the_k():
    assert np.allclose(log_loss_kernel(6, 0.6, passes=3), log_loss_kernel(6, 0.6 ** 3),
                       atol=1e-12, equal_nan=True)


def test_params_normalize_phase():
    p = InterferometerParams(0.5, 0.6, -math.pi / 2, 10)
    assert p.phi == pytest.approx(3 * math.pi / 2)
    assert InterferometerParams(0.5, 0.6, 2 * math.pi, 10).phi == 0.0


@pytest.mark.parametrize("kw", [
    dict(transmission=1.1), dict(transmission=-0.1), dict(eta=0.0), dict(eta=1.5),
    dict(nbar=0.0), dict(nbar=-3.0), dict(phi=math.inf), dict(eta=math.nan),
])
def test_params_reject(kw):
    args = dict(transmission=0.5, eta=0.6, phi=0.1, nbar=10.0)
    args.update(kw)
    with pytest.raises(DomainError):
        InterferometerParams(**args)


def test_weight_vector_normalizes_and_rejects():
    w = WeightVector([1.0, 1.0 + 1e-15, 2.0])
    assert abs(w.x.sum() - 1.0) < 1e-12
    assert w.n == 2
    with pytest.raises(DomainError):
        WeightVector([0.0, 0.0])
    with pytest.raises(DomainError):
        WeightVector([0.5, -0.1, 0.6])
    with pytest.raises(DomainError):
        WeightVector([1.0])
    with pytest.raises(ValueError):
        w.x[0] = 0.3


def test_weight_vector_stretch():
    w = WeightVector([0.25, 0.75]).stretched(3)
    assert w.n == 3
    assert np.array_equal(w.x, [0.25, 0.0, 0.0, 0.75])


@settings(max_examples=100, deadline=None)
@given(st.lists(st.floats(0.0, 1e6), min_size=2, max_size=40).filter(lambda v: sum(v) > 0))
def test_weight_vector_invariants(values):
    w = WeightVector(values)
    assert abs(w.x.sum() - 1.0) < 1e-12
    assert np.all(w.x >= 0.0)


def test_strategy_point_status():
    assert StrategyPoint("HL", 4, 1, 0.25).status == "ok"
    assert StrategyPoint("NOON", 4, 1, 1e13).status == "saturated"
    assert StrategyPoint("NOON", 4, 1, math.inf).status == "infinite"
    with pytest.raises(DomainError):
        StrategyPoint("XYZ", 4, 1, 0.1)
    with pytest.raises(DomainError):
        StrategyPoint("HL", 4, 0.5, 0.1)
    with pytest.raises(DomainError):
        StrategyPoint("HL", 0, 1, 0.1)
