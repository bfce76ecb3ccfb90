# -------------------------------------------------------------------------
# Copyright (c) occnb developers. All rights reserved.
# Licensed under the MIT License. See License.txt in the project root for
# license information.
# --------------------------------------------------------------------------
"""Monte Carlo oracle test class."""
import numpy as np
import pytest
import pytest_check as check

from occnb.common import UnsampleableDensityError
from occnb.nblib.firstpassage import ExitDirection, exit_down_law, exit_up_law
from occnb.nblib.montecarlo import (
    SimConfig,
    estimate_distribution,
    estimate_exit,
    estimate_expectation,
    estimate_V,
    simulate_occupation,
)
from occnb.nblib.occupation import (
    distribution_atom,
    distribution_function,
    occupation_expectation,
    occupation_laplace,
)

from ..unit_test_lib import (
    brownian,
    complex_jump_model,
    compound_poisson,
    model_a,
    symmetric_brownian,
)

# pylint: disable=invalid-name


def test_config_validation():
    """Test invalid simulation settings."""
    with pytest.raises(ValueError):
        SimConfig(dt=0.0)
    with pytest.raises(ValueError):
        SimConfig(n_paths=0)
    with pytest.raises(ValueError):
        SimConfig(horizon="random")
    with pytest.raises(ValueError):
        SimConfig(T=-1.0)


def test_zero_penalty():
    """Test the estimate of V is exactly 1 for p = 0."""
    est = estimate_V(compound_poisson(), 0.0, 0.0, 0.3, 0.0, 0.5)
    check.equal(est.mean, 1.0)
    check.equal(est.std_error, 0.0)


def test_reproducible_blocks():
    """Test equal seeds give equal samples."""
    cfg = SimConfig(n_paths=300, block_size=100, seed=7)
    first = simulate_occupation(compound_poisson(), 0.0, 0.0, 0.2, cfg)
    second = simulate_occupation(compound_poisson(), 0.0, 0.0, 0.2, cfg)
    check.is_true(np.array_equal(first.occupation, second.occupation))
    check.equal(len(first.terminal), 300)
    check.is_true(np.all(first.occupation <= first.horizon + 1e-12))
    check.is_true(np.all(first.occupation >= 0))


def test_unsampleable():
    """Test complex jump densities are refused."""
    with pytest.raises(UnsampleableDensityError):
        estimate_V(
            complex_jump_model(), 0.05, 0.0, 0.0, 1.0, 0.5, SimConfig(n_paths=10)
        )


def test_exit_level_side():
    """Test exit levels on the wrong side."""
    with pytest.raises(ValueError):
        estimate_exit(compound_poisson(), 0.0, 0.5, -0.2)
    with pytest.raises(ValueError):
        estimate_exit(
            compound_poisson(), 0.0, 0.5, 0.2, direction=ExitDirection.DOWN_X
        )


@pytest.mark.slow
def test_compound_poisson_against_closed_form():
    """Test exact simulation matches V, the expectation and the distribution."""
    model = compound_poisson()
    p_val, q_val = 1.0, 0.5
    cfg = SimConfig(n_paths=4000, block_size=2000, seed=11)
    V = occupation_laplace(model, 0.0, 0.0, p_val, q_val)
    expect = occupation_expectation(model, 0.0, 0.0, q_val)
    dist = distribution_function(model, 0.0, 0.0, q_val)
    for x_val in (-0.5, 0.5):
        est = estimate_V(model, 0.0, 0.0, x_val, p_val, q_val, cfg)
        check.is_true(est.within(float(V(x_val)), n_se=5.0, floor=1e-3))
        est = estimate_expectation(model, 0.0, 0.0, x_val, q_val, cfg)
        check.is_true(est.within(float(expect(x_val)), n_se=5.0, floor=1e-3))
        est = estimate_distribution(model, 0.0, 0.0, x_val, q_val, cfg)
        check.is_true(est.within(float(dist(x_val)), n_se=5.0, floor=1e-3))


@pytest.mark.slow
def test_brownian_expectation():
    """Test the Euler scheme against 1 / (2q) from the level."""
    cfg = SimConfig(n_paths=2000, dt=1e-2, block_size=1000, seed=3)
    est = estimate_expectation(symmetric_brownian(), 0.0, 0.0, 0.0, 1.0, cfg)
    expect = occupation_expectation(symmetric_brownian(), 0.0, 0.0, 1.0)
    check.is_true(est.within(float(expect(0.0)), n_se=5.0, floor=0.03))


@pytest.mark.slow
def test_exit_estimates():
    """Test passage estimates against the closed exit laws."""
    model = brownian(mu=0.1, sigma=0.2)
    cfg = SimConfig(n_paths=2000, dt=1e-2, block_size=1000, seed=5)
    est = estimate_exit(model, 0.05, 0.3, 0.7, cfg=cfg)
    law = exit_up_law(model, 0.05, 0.3, 0.7)
    check.is_true(est.within(law.atom.real, n_se=5.0, floor=0.02))

    jumps = compound_poisson(mu=0.05, alpha=0.1)
    cfg = SimConfig(n_paths=4000, block_size=2000, seed=9)
    law = exit_up_law(jumps, 0.1, 0.5, 0.4)
    for s_val in (0.0, 1.0):
        est = estimate_exit(jumps, 0.1, 0.5, 0.4, cfg=cfg, s=s_val)
        check.is_true(est.within(law.transform(s_val).real, n_se=5.0, floor=1e-3))
    law = exit_down_law(jumps, 0.5, -0.4)
    est = estimate_exit(jumps, 0.1, 0.5, -0.4, direction=ExitDirection.DOWN_X, cfg=cfg)
    check.is_true(est.within(law.discounted_mass().real, n_se=5.0, floor=1e-3))


def _check_against_closed_form(model, b, cfg, floor):
    p_val, q_val = 1.0, 0.5
    alpha = model.alpha
    V = occupation_laplace(model, alpha, b, p_val, q_val)
    expect = occupation_expectation(model, alpha, b, q_val)
    dist = distribution_function(model, alpha, b, q_val)
    for x_val in (b - 0.5, b, b + 0.5):
        est = estimate_V(model, alpha, b, x_val, p_val, q_val, cfg)
        check.is_true(est.within(float(V(x_val)), n_se=3.0, floor=floor))
        est = estimate_expectation(model, alpha, b, x_val, q_val, cfg)
        check.is_true(est.within(float(expect(x_val)), n_se=3.0, floor=2 * floor))
        est = estimate_distribution(model, alpha, b, x_val, q_val, cfg)
        check.is_true(est.within(float(dist(x_val)), n_se=3.0, floor=floor))


@pytest.mark.slow
def test_jump_diffusion_against_closed_form():
    """Test the Euler scheme around the level for the jump diffusion."""
    cfg = SimConfig(n_paths=6000, dt=1e-3, block_size=3000, seed=17)
    _check_against_closed_form(model_a(b=0.3), 0.3, cfg, floor=0.01)


@pytest.mark.slow
def test_zero_volatility_drift_above_refraction():
    """Test exact simulation around the level when mu > alpha."""
    cfg = SimConfig(n_paths=8000, block_size=4000, seed=19)
    _check_against_closed_form(compound_poisson(mu=0.1, alpha=0.05), 0.0, cfg, 1e-3)


@pytest.mark.slow
def test_distribution_atom_at_level():
    """Test the jump of the distribution at b when 0 <= mu <= alpha."""
    model = compound_poisson(mu=0.03, alpha=0.05)
    q_val = 0.5
    cfg = SimConfig(n_paths=8000, block_size=4000, seed=23)
    dist = distribution_function(model, 0.05, 0.0, q_val)
    at_level = estimate_distribution(model, 0.05, 0.0, 0.0, q_val, cfg)
    below = estimate_distribution(model, 0.05, 0.0, -1e-9, q_val, cfg)
    check.is_true(at_level.within(float(dist(0.0)), n_se=3.0, floor=1e-3))
    check.is_true(below.within(float(dist(-1e-9)), n_se=3.0, floor=1e-3))
    atom = distribution_atom(model, 0.05, q_val)
    check.less(atom, 0.0)
    gap_se = np.hypot(at_level.std_error, below.std_error)
    check.less_equal(abs(at_level.mean - below.mean - atom), 3.0 * gap_se + 2e-3)
