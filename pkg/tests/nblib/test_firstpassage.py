# -------------------------------------------------------------------------
# Copyright (c) occnb developers. All rights reserved.
# Licensed under the MIT License. See License.txt in the project root for
# license information.
# --------------------------------------------------------------------------
"""First passage test class."""
import numpy as np
import pytest
import pytest_check as check

from occnb.common import DegenerateArgumentsError
from occnb.nblib.firstpassage import (
    ExitDirection,
    exit_down_law,
    exit_up_law,
    pr_lhs,
    pr_rhs,
    pr_rhs_down,
)
from occnb.nblib.wienerhopf import neg_factor, pos_factor

from ..unit_test_lib import brownian, compound_poisson, erlang_model, model_a


def test_brownian_passage():
    """Test the Brownian passage transform exp(-beta x)."""
    model = brownian(mu=0.1, sigma=0.2)
    beta = pos_factor(model, 0.05, 0.3).first_root.real
    law = exit_up_law(model, 0.05, 0.3, 0.7)
    check.equal(law.direction, ExitDirection.UP_Y)
    check.equal(len(law.terms), 0)
    check.almost_equal(law.atom.real, np.exp(-beta * 0.7), rel=1e-10)
    check.almost_equal(law.discounted_mass().real, np.exp(-beta * 0.7), rel=1e-10)


def test_immediate_passage_at_zero():
    """Test passage over the start is immediate with sigma > 0."""
    model = model_a()
    law = exit_up_law(model, 0.05, 0.2, 0.0)
    check.almost_equal(law.atom.real, 1.0, abs=1e-10)
    check.almost_equal(abs(law.transform(0.7) - 1), 0.0, abs=1e-8)
    down = exit_down_law(model, 0.2, 0.0)
    check.almost_equal(abs(down.discounted_mass() - 1), 0.0, abs=1e-8)


def test_exponential_overshoot():
    """Test upward overshoot keeps the jump rate with exponential jumps."""
    law = exit_up_law(model_a(), 0.05, 0.2, 0.5)
    check.equal(len(law.terms), 1)
    check.almost_equal(law.terms[0].rate.real, 2.0)
    check.equal(law.terms[0].order, 1)
    mass = law.discounted_mass().real
    check.greater(mass, 0.0)
    check.less(mass, 1.0)
    check.greater(law.atom.real, 0.0)
    check.almost_equal(
        float(np.real(law.overshoot_density(0.3))),
        law.terms[0].coeff.real * 2.0 * np.exp(-0.6),
        rel=1e-10,
    )

    down = exit_down_law(model_a(), 0.2, -0.5)
    check.equal(down.direction, ExitDirection.DOWN_X)
    check.almost_equal(down.terms[0].rate.real, 3.0)


def test_jump_only_passage():
    """Test passage without creeping when Y drifts down and sigma = 0."""
    model = compound_poisson(mu=0.05, alpha=0.1)
    law = exit_up_law(model, 0.1, 0.5, 0.4)
    check.equal(law.atom, 0)
    check.equal(len(law.terms), 1)
    check.greater(law.discounted_mass().real, 0.0)
    check.less(law.discounted_mass().real, 1.0)


def test_level_transform_identity():
    """Test quadrature of the exit transform against the closed form."""
    model = model_a()
    for theta, s_val in ((1.0, 0.5), (0.4, 2.5)):
        lhs = pr_lhs(model, 0.05, 0.2, theta, s_val)
        rhs = pr_rhs(model, 0.05, 0.2, theta, s_val)
        check.almost_equal(lhs, rhs, abs=1e-7)
    lhs = pr_lhs(model, 0.05, 0.2, 1.0, 0.5, direction=ExitDirection.DOWN_X)
    rhs = pr_rhs_down(model, 0.2, 1.0, 0.5)
    check.almost_equal(lhs, rhs, abs=1e-7)


def test_argument_checks():
    """Test invalid levels and arguments."""
    model = model_a()
    with pytest.raises(ValueError):
        exit_up_law(model, 0.05, 0.2, -0.1)
    with pytest.raises(ValueError):
        exit_down_law(model, 0.2, 0.1)
    with pytest.raises(DegenerateArgumentsError):
        pr_rhs(model, 0.05, 0.2, 1.0, 1.0)
    with pytest.raises(ValueError):
        pr_rhs(model, 0.05, 0.2, -1.0, 1.0)


def test_erlang_exit_mass():
    """Test discounted passage probabilities equal the extremum tails."""
    q_val = 0.5
    for mu, sigma in ((0.1, 0.2), (0.1, 0.0), (0.03, 0.0), (-0.1, 0.0)):
        model = erlang_model(mu=mu, sigma=sigma, alpha=0.05)
        up_law = exit_up_law(model, 0.05, q_val, 0.4)
        down_law = exit_down_law(model, q_val, -0.4)
        sup_tail = pos_factor(model, 0.05, q_val).tail(0.4)
        inf_tail = neg_factor(model, q_val).tail(0.4)
        for law, tail in ((up_law, sup_tail), (down_law, inf_tail)):
            mass = law.discounted_mass()
            check.is_true(0.0 < mass.real < 1.0)
            check.almost_equal(abs(mass - tail), 0.0, abs=1e-9)
            check.almost_equal(abs(law.transform(0.0) - mass), 0.0, abs=1e-12)
            check.is_true(all(term.order <= 3 for term in law.terms))
