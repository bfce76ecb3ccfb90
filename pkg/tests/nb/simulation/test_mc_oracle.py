# -------------------------------------------------------------------------
# Copyright (c) occnb developers. All rights reserved.
# Licensed under the MIT License. See License.txt in the project root for
# license information.
# --------------------------------------------------------------------------
"""Test the Monte Carlo oracle notebooklet."""
import pytest
import pytest_check as check

from occnb import discover_modules, nblts
from occnb.common import OccnbMissingParameterError, UnsampleableDensityError

from ...unit_test_lib import complex_jump_model, compound_poisson

# pylint: disable=no-member


@pytest.mark.slow
def test_mc_oracle():
    """Test simulated quantities sit near the closed forms."""
    discover_modules()
    test_nb = nblts.simulation.MCOracle()
    result = test_nb.run(
        compound_poisson(),
        x=0.5,
        q=0.5,
        n_paths=3000,
        seed=21,
        options=["+exit"],
        level=0.4,
        silent=True,
    )
    check.equal(
        list(result.estimates["quantity"]),
        ["V(p=1)", "expectation", "distribution", "exit_up(0.4)"],
    )
    check.less(result.max_abs_z, 5.0)
    check.equal(result.config["n_paths"], 3000)
    check.equal(result.config["seed"], 21)


def test_mc_oracle_errors():
    """Test missing parameters and unsampleable models."""
    discover_modules()
    test_nb = nblts.simulation.MCOracle()
    with pytest.raises(OccnbMissingParameterError):
        test_nb.run(compound_poisson(), q=0.5, silent=True)
    with pytest.raises(UnsampleableDensityError):
        test_nb.run(
            complex_jump_model(),
            x=0.0,
            q=0.5,
            n_paths=10,
            options=["laplace"],
            silent=True,
        )
