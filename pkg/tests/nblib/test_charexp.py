# -------------------------------------------------------------------------
# Copyright (c) occnb developers. All rights reserved.
# Licensed under the MIT License. See License.txt in the project root for
# license information.
# --------------------------------------------------------------------------
"""Characteristic exponent and root finder test class."""
import numpy as np
import pytest
import pytest_check as check
from numpy.polynomial import polynomial as npoly

from occnb.common import PoleEvaluationError
from occnb.nblib.charexp import (
    RootSide,
    cleared_polynomial,
    expected_count,
    laplace_exponent,
    laplace_exponent_deriv,
    psi,
    psi_tilde,
    roots_beta,
    roots_gamma,
    track_roots,
)
from occnb.nblib.model import Regime, check_model, regime_of

from ..unit_test_lib import (
    brownian,
    compound_poisson,
    erlang_model,
    hyper_exp_model,
    model_a,
    random_model,
)

# pylint: disable=invalid-name


def _brownian_beta(mu, sigma, alpha, q):
    drift = mu - alpha
    return (-drift + np.sqrt(drift**2 + 2 * sigma**2 * q)) / sigma**2


def _brownian_gamma(mu, sigma, q):
    return (mu + np.sqrt(mu**2 + 2 * sigma**2 * q)) / sigma**2


def test_laplace_exponent():
    """Test exponent values, derivative and pole guard."""
    model = model_a()
    check.almost_equal(abs(laplace_exponent(model, 0.0)), 0.0, abs=1e-15)
    s_val = 0.7
    jumps = (2 / (2 - s_val) - 1) + (3 / (3 + s_val) - 1)
    expected = 0.02 * s_val**2 + 0.1 * s_val + jumps
    check.almost_equal(laplace_exponent(model, s_val).real, expected)
    check.almost_equal(
        laplace_exponent(model, s_val, alpha=0.05).real, expected - 0.05 * s_val
    )
    step = 1e-6
    numeric = (
        laplace_exponent(model, s_val + step) - laplace_exponent(model, s_val - step)
    ) / (2 * step)
    check.almost_equal(
        laplace_exponent_deriv(model, s_val).real, numeric.real, abs=1e-6
    )

    z_val = 0.3 - 0.2j
    check.almost_equal(
        abs(psi(model, z_val) - laplace_exponent(model, 1j * z_val)), 0.0
    )
    check.almost_equal(
        abs(psi_tilde(model, 0.05, z_val) - psi(model, z_val) + 1j * 0.05 * z_val), 0.0
    )
    with pytest.raises(PoleEvaluationError):
        laplace_exponent(model, 2.0)
    with pytest.raises(PoleEvaluationError):
        laplace_exponent(model, -3.0)


def test_cleared_polynomial():
    """Test the cleared polynomial equals the exponent times the denominators."""
    model = hyper_exp_model()
    alpha, q_val = 0.1, 0.4
    coeffs = cleared_polynomial(model, alpha, q_val)
    check.equal(len(coeffs) - 1, 2 + 2 + 2)
    for s_val in (0.3, -0.9 + 0.4j, 1.1j):
        denom = (2 - s_val) * (5 - s_val) * (1.5 + s_val) * (4 + s_val)
        direct = (laplace_exponent(model, s_val, alpha) - q_val) * denom
        check.almost_equal(abs(npoly.polyval(s_val, coeffs) - direct), 0.0, abs=1e-10)


def test_expected_counts():
    """Test predicted root counts in each regime."""
    check.equal(expected_count(model_a(), 0.05, RootSide.LOWER_BETA), 2)
    check.equal(expected_count(model_a(), 0.05, RootSide.UPPER_GAMMA), 2)
    check.equal(expected_count(hyper_exp_model(), 0.1, RootSide.LOWER_BETA), 3)
    check.equal(expected_count(compound_poisson(), 0.0, RootSide.LOWER_BETA), 1)
    check.equal(expected_count(compound_poisson(), 0.0, RootSide.UPPER_GAMMA), 1)
    above = compound_poisson(mu=0.3, alpha=0.1)
    check.equal(expected_count(above, 0.1, RootSide.LOWER_BETA), 2)
    check.equal(expected_count(above, 0.1, RootSide.UPPER_GAMMA), 1)
    negative = compound_poisson(mu=-0.2)
    check.equal(expected_count(negative, 0.0, RootSide.LOWER_BETA), 1)
    check.equal(expected_count(negative, 0.0, RootSide.UPPER_GAMMA), 2)


def test_model_a_roots():
    """Test the jump diffusion root sets."""
    model = model_a()
    q_val = 0.1
    beta = roots_beta(model, 0.05, q_val)
    gamma = roots_gamma(model, q_val)
    check.equal(beta.total_multiplicity, 2)
    check.equal(gamma.total_multiplicity, 2)
    check.is_true(beta.is_simple)
    for root in beta.values:
        check.greater(root.real, 0)
        check.less(abs(laplace_exponent(model, root, 0.05) - q_val), 1e-9)
    for root in gamma.values:
        check.greater(root.real, 0)
        check.less(abs(laplace_exponent(model, -root) - q_val), 1e-9)
    # real roots interlace with the jump rates
    check.less(beta.values[0].real, 2.0)
    check.greater(beta.values[1].real, 2.0)
    check.less(gamma.values[0].real, 3.0)
    check.greater(gamma.values[1].real, 3.0)
    check.equal(len(beta.residuals), 2)
    check.equal(beta.as_factors()[0][1], 1)


def test_hyper_exponential_interlacing():
    """Test beta roots interlace with two upward rates."""
    beta = roots_beta(hyper_exp_model(), 0.1, 0.5)
    vals = [root.real for root in beta.values]
    check.equal(len(vals), 3)
    check.less(vals[0], 2.0)
    check.is_true(2.0 < vals[1] < 5.0)
    check.greater(vals[2], 5.0)
    check.equal(sorted(vals), vals)


def test_brownian_closed_form():
    """Test roots of Brownian motion against the quadratic formula."""
    model = brownian(mu=0.1, sigma=0.2)
    gamma = roots_gamma(model, 0.1)
    check.equal(len(gamma), 1)
    check.almost_equal(gamma.first.real, 5.85410, abs=1e-5)
    check.almost_equal(gamma.first.real, _brownian_gamma(0.1, 0.2, 0.1), abs=1e-10)
    beta = roots_beta(model, 0.05, 0.1)
    check.almost_equal(beta.first.real, _brownian_beta(0.1, 0.2, 0.05, 0.1), abs=1e-10)
    check.equal(beta.first.imag, 0.0)


def test_compound_poisson_roots():
    """Test root counts with zero volatility."""
    model = compound_poisson()
    beta = roots_beta(model, 0.0, 0.5)
    gamma = roots_gamma(model, 0.5)
    check.equal(beta.total_multiplicity, 1)
    check.equal(gamma.total_multiplicity, 1)
    check.less(beta.first.real, 2.0)
    check.less(gamma.first.real, 3.0)

    above = compound_poisson(mu=0.3, alpha=0.1)
    check.equal(roots_beta(above, 0.1, 0.5).total_multiplicity, 2)
    check.equal(roots_gamma(above, 0.5).total_multiplicity, 1)


def test_invalid_q():
    """Test non-positive discount rates are rejected."""
    with pytest.raises(ValueError):
        roots_beta(model_a(), 0.05, 0.0)
    with pytest.raises(ValueError):
        roots_gamma(model_a(), -1.0)


def test_track_roots():
    """Test continuation to a complex q matches the direct solution."""
    model = model_a()
    q_target = 0.5 + 1.0j
    tracked = track_roots(model, 0.05, q_target, RootSide.LOWER_BETA, q_start=0.5)
    direct = roots_beta(model, 0.05, q_target)
    check.equal(len(tracked), len(direct))
    for t_val, d_val in zip(
        sorted(tracked.values, key=abs), sorted(direct.values, key=abs)
    ):
        check.almost_equal(abs(t_val - d_val), 0.0, abs=1e-8)

    tracked_gamma = track_roots(model, 0.0, q_target, RootSide.UPPER_GAMMA, q_start=0.5)
    for root in tracked_gamma.values:
        check.less(abs(laplace_exponent(model, -root) - q_target), 1e-8)


_NO_EXTRA_BETA = (
    Regime.ZERO_VOL_MU_BETWEEN_ZERO_AND_ALPHA,
    Regime.ZERO_VOL_MU_NEGATIVE,
)
_NO_EXTRA_GAMMA = (
    Regime.ZERO_VOL_MU_ABOVE_ALPHA,
    Regime.ZERO_VOL_MU_BETWEEN_ZERO_AND_ALPHA,
)


def _check_conjugate_closed(values):
    for root in values:
        partner = min(abs(other - root.conjugate()) for other in values)
        check.less_equal(partner, 1e-8 * (1 + abs(root)))


@pytest.mark.parametrize("seed, regime", list(enumerate(Regime, start=101)))
def test_random_model_roots(seed, regime):
    """Test counts, residuals and conjugate pairs of roots on random models."""
    rng = np.random.default_rng(seed)
    for _ in range(50):
        model = random_model(rng, regime)
        alpha = model.alpha
        q_val = float(rng.uniform(0.05, 2.0))
        check.equal(check_model(model), [])
        check.equal(regime_of(model).regime, regime)
        up_order = model.base.jumps_up.total_order
        down_order = model.base.jumps_down.total_order
        n_beta = up_order + (0 if regime in _NO_EXTRA_BETA else 1)
        n_gamma = down_order + (0 if regime in _NO_EXTRA_GAMMA else 1)
        check.equal(expected_count(model, alpha, RootSide.LOWER_BETA), n_beta)
        check.equal(expected_count(model, alpha, RootSide.UPPER_GAMMA), n_gamma)

        beta = roots_beta(model, alpha, q_val)
        gamma = roots_gamma(model, q_val)
        check.equal(beta.total_multiplicity, n_beta)
        check.equal(gamma.total_multiplicity, n_gamma)
        tol = 1e-8 * (1 + q_val)
        for root in beta.values:
            check.greater(root.real, 0)
            check.less(abs(laplace_exponent(model, root, alpha) - q_val), tol)
        for root in gamma.values:
            check.greater(root.real, 0)
            check.less(abs(laplace_exponent(model, -root) - q_val), tol)
        _check_conjugate_closed(beta.values)
        _check_conjugate_closed(gamma.values)
        check.equal(beta.first.imag, 0.0)
        check.equal(gamma.first.imag, 0.0)


def test_erlang_roots():
    """Test root counts follow the Erlang orders in every regime."""
    q_val = 0.5
    for mu, sigma, extra_beta, extra_gamma in (
        (0.1, 0.2, 1, 1),
        (0.1, 0.0, 1, 0),
        (0.03, 0.0, 0, 0),
        (-0.1, 0.0, 0, 1),
    ):
        model = erlang_model(mu=mu, sigma=sigma, alpha=0.05)
        check.equal(check_model(model), [])
        beta = roots_beta(model, 0.05, q_val)
        gamma = roots_gamma(model, q_val)
        check.equal(beta.total_multiplicity, 3 + extra_beta)
        check.equal(gamma.total_multiplicity, 3 + extra_gamma)
        for root in beta.values:
            check.less(abs(laplace_exponent(model, root, 0.05) - q_val), 1e-8)
        for root in gamma.values:
            check.less(abs(laplace_exponent(model, -root) - q_val), 1e-8)
        check.less(beta.first.real, 2.0)
        check.less(gamma.first.real, 3.0)
