# -------------------------------------------------------------------------
# Copyright (c) occnb developers. All rights reserved.
# Licensed under the MIT License. See License.txt in the project root for
# license information.
# --------------------------------------------------------------------------
"""Unit test common utilities."""
from pathlib import Path

import numpy as np

from occnb.nblib.model import (
    JumpTerm,
    LevyModel,
    RationalJumpDensity,
    RefractedModel,
    Regime,
    Side,
)

__author__ = "occnb developers"


def get_test_data_path():
    """Get path to testdata folder."""
    cur_dir = Path(__file__).absolute().parent
    td_path = cur_dir / "testdata"
    if not td_path.is_dir():
        raise FileNotFoundError("Cannot find testdata folder")
    return str(td_path)


TEST_DATA_PATH = get_test_data_path()
MODEL_A_PATH = str(Path(TEST_DATA_PATH) / "model_a.yaml")
BAD_MODEL_PATH = str(Path(TEST_DATA_PATH) / "bad_model.yaml")
CP_MODEL_PATH = str(Path(TEST_DATA_PATH) / "compound_poisson.yaml")


def model_a(alpha: float = 0.05, b: float = 0.0) -> RefractedModel:
    """Return the reference jump diffusion with exponential jumps."""
    return RefractedModel(
        base=LevyModel(
            mu=0.1,
            sigma=0.2,
            lambda_plus=1.0,
            lambda_minus=1.0,
            jumps_up=RationalJumpDensity.exponential(2.0, Side.POSITIVE),
            jumps_down=RationalJumpDensity.exponential(3.0, Side.NEGATIVE),
        ),
        alpha=alpha,
        b=b,
    )


def brownian(
    mu: float = 0.1, sigma: float = 0.2, alpha: float = 0.0, b: float = 0.0
) -> RefractedModel:
    """Return a Brownian motion with drift."""
    return RefractedModel(base=LevyModel(mu=mu, sigma=sigma), alpha=alpha, b=b)


def symmetric_brownian() -> RefractedModel:
    """Return standard Brownian motion without refraction."""
    return brownian(mu=0.0, sigma=1.0)


def compound_poisson(
    mu: float = 0.0, alpha: float = 0.0, b: float = 0.0
) -> RefractedModel:
    """Return a two-sided compound Poisson process (sigma = 0)."""
    return RefractedModel(
        base=LevyModel(
            mu=mu,
            sigma=0.0,
            lambda_plus=1.0,
            lambda_minus=1.0,
            jumps_up=RationalJumpDensity.exponential(2.0, Side.POSITIVE),
            jumps_down=RationalJumpDensity.exponential(3.0, Side.NEGATIVE),
        ),
        alpha=alpha,
        b=b,
    )


def hyper_exp_model(alpha: float = 0.1) -> RefractedModel:
    """Return a jump diffusion with two-term hyper-exponential jumps."""
    return RefractedModel(
        base=LevyModel(
            mu=0.05,
            sigma=0.3,
            lambda_plus=0.8,
            lambda_minus=1.2,
            jumps_up=RationalJumpDensity.hyper_exponential(
                [2.0, 5.0], [0.4, 0.6], Side.POSITIVE
            ),
            jumps_down=RationalJumpDensity.hyper_exponential(
                [1.5, 4.0], [0.7, 0.3], Side.NEGATIVE
            ),
        ),
        alpha=alpha,
        b=0.0,
    )


def complex_jump_model(alpha: float = 0.05) -> RefractedModel:
    """Return a jump diffusion whose upward density has a complex rate pair."""
    up_density = RationalJumpDensity(
        terms=(
            JumpTerm(1.0, [0.8]),
            JumpTerm(2.0 + 1.0j, [0.1]),
            JumpTerm(2.0 - 1.0j, [0.1]),
        ),
        side=Side.POSITIVE,
    )
    return RefractedModel(
        base=LevyModel(
            mu=0.1,
            sigma=0.25,
            lambda_plus=1.0,
            lambda_minus=0.5,
            jumps_up=up_density,
            jumps_down=RationalJumpDensity.exponential(3.0, Side.NEGATIVE),
        ),
        alpha=alpha,
        b=0.0,
    )


def erlang_model(
    mu: float = 0.1, sigma: float = 0.2, alpha: float = 0.05, b: float = 0.0
) -> RefractedModel:
    """Return a model with Erlang-mixture jumps of orders (2, 1) up and 3 down."""
    up_density = RationalJumpDensity(
        terms=(JumpTerm(2.0, [0.3, 0.3]), JumpTerm(5.0, [0.4])),
        side=Side.POSITIVE,
    )
    down_density = RationalJumpDensity(
        terms=(JumpTerm(3.0, [0.2, 0.3, 0.5]),), side=Side.NEGATIVE
    )
    return RefractedModel(
        base=LevyModel(
            mu=mu,
            sigma=sigma,
            lambda_plus=1.0,
            lambda_minus=0.8,
            jumps_up=up_density,
            jumps_down=down_density,
        ),
        alpha=alpha,
        b=b,
    )


def _random_density(rng: np.random.Generator, side: Side) -> RationalJumpDensity:
    n_terms = int(rng.integers(1, 3))
    rates = np.cumsum(rng.uniform(0.5, 3.0, n_terms))
    orders = rng.integers(1, 3, n_terms)
    weights = rng.uniform(0.2, 1.0, int(orders.sum()))
    weights /= weights.sum()
    terms = []
    start = 0
    for rate, order in zip(rates, orders):
        terms.append(JumpTerm(float(rate), weights[start : start + order]))
        start += order
    return RationalJumpDensity(terms=tuple(terms), side=side)


def random_model(rng: np.random.Generator, regime: Regime) -> RefractedModel:
    """Return a random valid model with Erlang-mixture jumps in `regime`."""
    alpha = float(rng.uniform(0.02, 0.3))
    sigma = 0.0
    if regime == Regime.POSITIVE_VOLATILITY:
        sigma = float(rng.uniform(0.05, 0.5))
        mu = float(rng.uniform(-0.3, 0.3))
    elif regime == Regime.ZERO_VOL_MU_ABOVE_ALPHA:
        mu = alpha + float(rng.uniform(0.02, 0.3))
    elif regime == Regime.ZERO_VOL_MU_BETWEEN_ZERO_AND_ALPHA:
        mu = float(rng.uniform(0.0, alpha))
    else:
        mu = -float(rng.uniform(0.02, 0.3))
    return RefractedModel(
        base=LevyModel(
            mu=mu,
            sigma=sigma,
            lambda_plus=float(rng.uniform(0.2, 2.0)),
            lambda_minus=float(rng.uniform(0.2, 2.0)),
            jumps_up=_random_density(rng, Side.POSITIVE),
            jumps_down=_random_density(rng, Side.NEGATIVE),
        ),
        alpha=alpha,
        b=0.0,
    )
