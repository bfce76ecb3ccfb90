# -------------------------------------------------------------------------
# Copyright (c) occnb developers. All rights reserved.
# Licensed under the MIT License. See License.txt in the project root for
# license information.
# --------------------------------------------------------------------------
"""Test the occupation notebooklets."""
import numpy as np
import pytest
import pytest_check as check
from bokeh.models import LayoutDOM

from occnb import discover_modules, nblts
from occnb.common import OccnbMissingParameterError

from ...unit_test_lib import (
    CP_MODEL_PATH,
    compound_poisson,
    model_a,
    symmetric_brownian,
)

# pylint: disable=no-member


def test_occupation_laplace():
    """Test V with smoothness, renewal and plot options."""
    discover_modules()
    test_nb = nblts.occupation.OccupationLaplace()
    result = test_nb.run(
        model_a(),
        p=1.0,
        q=0.5,
        x_grid=[-1.0, 0.0, 1.0],
        renewal_x=[-0.5, 0.5],
        options=["+renewal", "+plot"],
        silent=True,
    )
    check.equal(len(result.values), 3)
    check.equal(len(result.coefficients), 4)
    check.greater_equal(result.bounds["min"], result.bounds["floor"] - 1e-10)
    check.less_equal(result.bounds["max"], 1.0 + 1e-10)
    check.equal(result.smoothness["regime"], "PositiveVolatility")
    check.almost_equal(result.smoothness["value_jump"], 0.0, abs=1e-9)
    check.is_true(np.all(result.renewal["residual"] < 1e-7))
    check.is_instance(result.plot, LayoutDOM)

    result = test_nb.run(model_a(), p=0.0, q=0.5, options=["coefficients"], silent=True)
    check.is_none(result.smoothness)
    check.is_true(np.allclose(result.values["value"], 1.0))
    with pytest.raises(OccnbMissingParameterError):
        test_nb.run(model_a(), q=0.5, silent=True)


def test_occupation_expectation():
    """Test the expectation, distribution and atom summary."""
    test_nb = nblts.occupation.OccupationExpectation()
    result = test_nb.run(
        symmetric_brownian(), q=1.0, x_grid=[0.0], options=["+plot"], silent=True
    )
    check.almost_equal(result.values["expectation"].iloc[0], 0.5, rel=1e-10)
    check.almost_equal(result.values["distribution"].iloc[0], 0.5, rel=1e-10)
    check.almost_equal(result.atom["closed_form"], 0.0, abs=1e-12)
    check.is_not_in("product_ratio", result.atom)
    check.is_instance(result.plot, LayoutDOM)

    result = test_nb.run(compound_poisson(), q=0.5, silent=True)
    check.almost_equal(result.atom["product_ratio"], 0.2, rel=1e-10)
    check.almost_equal(result.atom["closed_form"], -0.2, rel=1e-10)
    check.almost_equal(result.atom["from_coefficients"], -0.2, rel=1e-8)
    with pytest.raises(OccnbMissingParameterError):
        test_nb.run(CP_MODEL_PATH, silent=True)


def test_identity_check():
    """Test the factor identity over the default strip grid."""
    test_nb = nblts.occupation.IdentityCheck()
    result = test_nb.run(
        model_a(), q=0.5, options=["+level_transform"], p=1.0, silent=True
    )
    check.equal(len(result.identity), 9)
    check.less(result.max_abs_diff, 1e-8)
    check.is_not_none(result.level_transform)
    check.is_none(result.wiener_hopf)

    result = test_nb.run(
        model_a(alpha=0.0),
        q=0.5,
        phi_grid=[-0.3, 0.2 + 0.4j],
        options=["identity", "wiener_hopf"],
        silent=True,
    )
    check.equal(len(result.identity), 2)
    check.less(result.max_abs_diff, 1e-8)
    check.is_not_none(result.wiener_hopf)
