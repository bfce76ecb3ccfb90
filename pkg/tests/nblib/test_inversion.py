# -------------------------------------------------------------------------
# Copyright (c) occnb developers. All rights reserved.
# Licensed under the MIT License. See License.txt in the project root for
# license information.
# --------------------------------------------------------------------------
"""Laplace inversion test class."""
import numpy as np
import pytest
import pytest_check as check
from scipy import integrate, stats

from occnb import options
from occnb.common import InversionUnstableError, OccnbNumericalError
from occnb.nblib.inversion import (
    GAVER_STEHFEST,
    TALBOT,
    InversionConfig,
    fee_expectation,
    fixed_talbot,
    gaver_stehfest,
    invert_occupation,
    invert_transform,
    occupation_transform,
    stehfest_weights,
)

from ..unit_test_lib import brownian, model_a, symmetric_brownian


def test_stehfest_weights():
    """Test the weights invert constants exactly."""
    weights = stehfest_weights(14)
    check.equal(len(weights), 14)
    # 1/q inverts to 1, so sum w_k / k = 1
    check.almost_equal(
        float(sum(wgt / k_idx for k_idx, wgt in enumerate(weights, start=1))),
        1.0,
        abs=1e-6,
    )


def test_gaver_stehfest_known():
    """Test inversion of 1/q^2 and 1/(q+1)."""
    for t_val in (0.5, 1.0, 4.0):
        check.almost_equal(gaver_stehfest(lambda q: 1 / q**2, t_val), t_val, rel=1e-6)
        check.almost_equal(
            gaver_stehfest(lambda q: 1 / (q + 1), t_val), np.exp(-t_val), abs=1e-5
        )


def test_talbot_known():
    """Test fixed Talbot on a transform with a real pole."""
    for t_val in (0.5, 2.0):
        check.almost_equal(
            fixed_talbot(lambda q: 1 / (q + 1), t_val, 32), np.exp(-t_val), rel=1e-8
        )


def test_config_validation():
    """Test invalid inversion settings are rejected."""
    with pytest.raises(ValueError):
        InversionConfig(order=13)
    with pytest.raises(ValueError):
        InversionConfig(order=22)
    with pytest.raises(ValueError):
        InversionConfig(method=TALBOT, talbot_terms=8)
    with pytest.raises(ValueError):
        InversionConfig(t_grid=(1.0, -2.0))
    with pytest.raises(ValueError):
        InversionConfig(method="euler")
    cfg = InversionConfig(t_grid=[1, 2])
    check.equal(cfg.t_grid, (1, 2))


def test_postprocess_bounds():
    """Test clipping to [0, t] and monotone repair."""
    cfg = InversionConfig(t_grid=(0.5, 1.0, 2.0))
    # 1/q^3 inverts to t^2 / 2
    result = invert_transform(lambda q: 1.0 / q**3, cfg, bound_by_time=False)
    check.almost_equal(result.values[2], 2.0, rel=1e-5)
    result = invert_transform(lambda q: -1.0 / q**2, cfg, bound_by_time=True)
    check.equal(list(result.values), [0.0, 0.0, 0.0])
    check.equal(result.diagnostics.clipped, 3)
    frame = result.to_frame()
    check.equal(list(frame.columns), ["t", "value"])


def test_postprocess_monotone_warning(capsys):
    """Test decreasing inverted values are repaired with a warning."""
    options.reset()
    cfg = InversionConfig(t_grid=(0.5, 1.0, 2.0))
    # exp(-t) exceeds t at 0.5 and then decreases
    result = invert_transform(lambda q: 1.0 / (q + 1.0), cfg, bound_by_time=True)
    for value in result.values:
        check.almost_equal(value, 0.5, abs=1e-9)
    check.equal(result.diagnostics.clipped, 1)
    check.equal(result.diagnostics.monotone_fixes, 2)
    output = capsys.readouterr().out
    check.is_in("WARNING", output)
    check.is_in("2 raised", output)

    # t / 2 needs no repair
    invert_transform(lambda q: 0.5 / q**2, cfg, bound_by_time=True)
    check.equal(capsys.readouterr().out, "")


def test_instability_detected():
    """Test disagreement between orders raises."""
    cfg = InversionConfig(t_grid=(1.0,), instability_tol=1e-12)
    with pytest.raises(InversionUnstableError):
        invert_transform(lambda q: 1 / (q**2 + 1), cfg)


def test_talbot_fallback():
    """Test a failing Talbot run falls back to Gaver-Stehfest with a warning."""

    def _real(q_val):
        return 1 / q_val**2

    def _complex(q_val):
        raise OccnbNumericalError("no complex transform")

    cfg = InversionConfig(method=TALBOT, t_grid=(1.0,))
    with pytest.warns(UserWarning):
        result = invert_transform(_real, cfg, complex_func=_complex)
    check.equal(result.diagnostics.method_used, GAVER_STEHFEST)
    check.equal(result.diagnostics.method_requested, TALBOT)
    check.is_not_none(result.diagnostics.fallback_reason)
    check.almost_equal(result.values[0], 1.0, rel=1e-6)


def test_symmetric_brownian_inversion():
    """Test E_b[occupation up to t] = t / 2 for standard Brownian motion."""
    model = symmetric_brownian()
    cfg = InversionConfig(t_grid=(0.5, 1.0, 3.0))
    result = invert_occupation(model, 0.0, 0.0, 0.0, cfg)
    for t_val, value in zip(result.t, result.values):
        check.almost_equal(value, t_val / 2, rel=1e-5)
    check.greater(result.diagnostics.q_evaluations, 0)
    check.equal(result.diagnostics.clipped, 0)


def _brownian_occupation(mu, sigma, b, x, t_val):
    """Return the integral over s < t of P(x + mu s + sigma W_s < b)."""
    value, _ = integrate.quad(
        lambda s: stats.norm.cdf((b - x - mu * s) / (sigma * np.sqrt(s))),
        0,
        t_val,
        epsabs=1e-12,
        epsrel=1e-11,
    )
    return value


def test_drifted_brownian_inversion():
    """Test both inversions against the Gaussian marginal integral."""
    model = brownian(mu=0.1, sigma=0.2)
    t_grid = (0.5, 1.0, 2.0)
    for x_val in (-0.2, 0.3):
        stehfest = invert_occupation(
            model, 0.0, 0.0, x_val, InversionConfig(t_grid=t_grid)
        )
        talbot = invert_occupation(
            model, 0.0, 0.0, x_val, InversionConfig(method=TALBOT, t_grid=t_grid)
        )
        check.equal(talbot.diagnostics.method_used, TALBOT)
        for idx, t_val in enumerate(t_grid):
            exact = _brownian_occupation(0.1, 0.2, 0.0, x_val, t_val)
            check.almost_equal(stehfest.values[idx], exact, abs=1e-5)
            check.almost_equal(talbot.values[idx], stehfest.values[idx], abs=1e-5)


def test_occupation_inversion_bounds():
    """Test inverted occupation lies in [0, t] and grows with t."""
    model = model_a()
    cfg = InversionConfig(t_grid=(0.5, 1.0, 2.0, 4.0))
    result = invert_occupation(model, 0.05, 0.0, 0.2, cfg)
    check.is_true(np.all(result.values >= 0))
    check.is_true(np.all(result.values <= result.t))
    check.is_true(np.all(np.diff(result.values) >= 0))
    func = occupation_transform(model, 0.05, 0.0, 0.2)
    check.greater(func(1.0), 0.0)


def test_fee_expectation():
    """Test the fee is the rate times the inverted occupation."""
    model = symmetric_brownian()
    fee = fee_expectation(model, 0.0, 0.0, 0.0, fee_rate=0.02, horizon=2.0)
    check.almost_equal(fee.occupation, 1.0, rel=1e-5)
    check.almost_equal(fee.value, 0.02, rel=1e-5)
    check.equal(fee.horizon, 2.0)
    with pytest.raises(ValueError):
        fee_expectation(model, 0.0, 0.0, 0.0, fee_rate=-0.01, horizon=1.0)
    with pytest.raises(ValueError):
        fee_expectation(model, 0.0, 0.0, 0.0, fee_rate=0.01, horizon=0.0)
