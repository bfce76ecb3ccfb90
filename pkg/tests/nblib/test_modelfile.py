# -------------------------------------------------------------------------
# Copyright (c) occnb developers. All rights reserved.
# Licensed under the MIT License. See License.txt in the project root for
# license information.
# --------------------------------------------------------------------------
"""Model file test class."""
import pytest
import pytest_check as check
import yaml

from occnb.common import OccnbMissingParameterError
from occnb.nblib.modelfile import (
    dump_model,
    load_model,
    model_to_dict,
    parse_grid,
    parse_model,
)

from ..unit_test_lib import (
    CP_MODEL_PATH,
    MODEL_A_PATH,
    complex_jump_model,
    compound_poisson,
    model_a,
)


def test_load_model():
    """Test model files read to the reference models."""
    check.equal(load_model(MODEL_A_PATH), model_a())
    check.equal(load_model(CP_MODEL_PATH), compound_poisson())


def test_canonical_round_trip(tmp_path):
    """Test the canonical dump re-reads to the same model."""
    model = complex_jump_model()
    out_file = tmp_path / "canonical.yaml"
    text = dump_model(model, out_file)
    check.is_true(out_file.is_file())
    check.equal(out_file.read_text(encoding="utf-8"), text)
    check.equal(load_model(out_file), model)
    doc = yaml.safe_load(text)
    check.equal(doc["jumps"]["up"][1]["coeffs"], [[0.1, 0.0]])
    check.equal(doc["jumps"]["up"][1]["rate_im"], 1.0)
    check.equal(model_to_dict(model)["refraction"], {"alpha": 0.05, "b": 0.0})


def test_defaults_and_errors():
    """Test optional sections and malformed documents."""
    model = parse_model({"process": {"mu": 0.1, "sigma": 0.3}})
    check.equal(model.alpha, 0.0)
    check.equal(model.base.lambda_plus, 0.0)
    check.is_true(model.base.jumps_up.is_empty)

    with pytest.raises(OccnbMissingParameterError):
        parse_model({"refraction": {"alpha": 0.1}})
    with pytest.raises(OccnbMissingParameterError):
        parse_model({"process": {"mu": 0.1}})
    with pytest.raises(OccnbMissingParameterError):
        parse_model(
            {"process": {"mu": 0.1, "sigma": 0.3}, "jumps": {"up": [{"rate_re": 2.0}]}}
        )
    with pytest.raises(ValueError):
        parse_model({"process": {"mu": "fast", "sigma": 0.3}})
    with pytest.raises(ValueError):
        parse_model(
            {
                "process": {"mu": 0.1, "sigma": 0.3, "lambda_plus": 1.0},
                "jumps": {"up": [{"rate_re": 2.0, "coeffs": [[1.0, 0.0, 2.0]]}]},
            }
        )


def test_parse_grid():
    """Test grid strings."""
    check.equal(list(parse_grid("0:1:3")), [0.0, 0.5, 1.0])
    check.equal(list(parse_grid("-2")), [-2.0])
    check.equal(len(parse_grid("-1:1:201")), 201)
    for bad in ("0:1", "0:1:0", "a:b:c"):
        with pytest.raises(ValueError):
            parse_grid(bad)
