# -------------------------------------------------------------------------
# Copyright (c) occnb developers. All rights reserved.
# Licensed under the MIT License. See License.txt in the project root for
# license information.
# --------------------------------------------------------------------------
"""Command line test class."""
import json
from io import StringIO

import pandas as pd
import pytest
import pytest_check as check
import yaml

from occnb.cli import EXIT_INVALID, EXIT_NUMERICAL, EXIT_OK, RunSpec, main, render
from occnb.nblib.modelfile import dump_model, load_model

from .unit_test_lib import (
    BAD_MODEL_PATH,
    CP_MODEL_PATH,
    MODEL_A_PATH,
    complex_jump_model,
    model_a,
)


def test_validate(capsys):
    """Test validation output and status codes."""
    check.equal(main(["validate", MODEL_A_PATH]), EXIT_OK)
    output = json.loads(capsys.readouterr().out)
    check.is_true(output["valid"])
    check.equal(output["regime"]["regime"], "PositiveVolatility")
    check.equal(output["model"]["refraction"], {"alpha": 0.05, "b": 0.0})

    check.equal(main(["validate", BAD_MODEL_PATH]), EXIT_INVALID)
    captured = capsys.readouterr()
    check.equal(captured.out, "")
    check.is_in("NegativeVolatility", captured.err)
    check.is_in("DuplicateRate", captured.err)

    check.equal(main(["validate", "no_such_model.yaml"]), EXIT_INVALID)
    check.is_in("FileNotFoundError", capsys.readouterr().err)


def test_validate_canonical(tmp_path, capsys):
    """Test the canonical model written to a file re-reads identically."""
    out_file = tmp_path / "out" / "canonical.yaml"
    status = main(
        ["validate", MODEL_A_PATH, "--emit-canonical", "--out", str(out_file)]
    )
    check.equal(status, EXIT_OK)
    check.equal(capsys.readouterr().out, "")
    check.equal(load_model(out_file), model_a())
    check.equal(yaml.safe_load(out_file.read_text())["process"]["sigma"], 0.2)


def test_roots_and_factors(capsys):
    """Test root and factor commands in both formats."""
    check.equal(main(["roots", MODEL_A_PATH, "--q", "0.5", "--format", "csv"]), EXIT_OK)
    frame = pd.read_csv(StringIO(capsys.readouterr().out))
    check.equal(
        list(frame.columns), ["set", "root_re", "root_im", "multiplicity", "residual"]
    )
    check.equal(list(frame["set"]), ["beta", "beta", "gamma", "gamma"])

    check.equal(main(["wh", CP_MODEL_PATH, "--q", "0.5"]), EXIT_OK)
    output = json.loads(capsys.readouterr().out)
    check.almost_equal(output["sup"]["atom"] * output["inf"]["atom"], 0.2, rel=1e-10)
    check.almost_equal(output["sup"]["mass"], 1.0, abs=1e-10)

    check.equal(main(["roots", MODEL_A_PATH]), EXIT_INVALID)
    check.is_in("--q", capsys.readouterr().err)


def test_occupation_commands(capsys):
    """Test occupation transform, expectation and exit commands."""
    status = main(
        ["occ-lt", MODEL_A_PATH, "--p", "1", "--q", "0.5", "--x-grid=-1:1:5"]
        + ["--format", "csv"]
    )
    check.equal(status, EXIT_OK)
    frame = pd.read_csv(StringIO(capsys.readouterr().out))
    check.equal(list(frame.columns), ["x", "value"])
    check.equal(len(frame), 5)
    check.greater(frame["value"].min(), 1 / 3 - 1e-10)
    check.less_equal(frame["value"].max(), 1 + 1e-10)

    status = main(["occ-exp", CP_MODEL_PATH, "--q", "0.5", "--x-grid", "0"])
    check.equal(status, EXIT_OK)
    output = json.loads(capsys.readouterr().out)
    check.almost_equal(output["atom"]["closed_form"], -0.2, rel=1e-10)

    status = main(
        ["exit", MODEL_A_PATH, "--q", "0.2", "--x-grid", "0.5:1:2", "--format", "csv"]
    )
    check.equal(status, EXIT_OK)
    frame = pd.read_csv(StringIO(capsys.readouterr().out))
    check.equal(len(frame), 4)
    check.equal(set(frame["direction"]), {"up_Y", "down_X"})


def test_identity_and_failure(capsys):
    """Test the identity check and the numerical failure status."""
    status = main(
        ["identity-check", MODEL_A_PATH, "--q", "0.5", "--phi-grid=-0.5:0.5:3"]
        + ["--phi-imag"]
    )
    check.equal(status, EXIT_OK)
    output = json.loads(capsys.readouterr().out)
    check.less(output["max_abs_diff"], 1e-8)
    check.equal(output["identity"][0]["phi_re"], 0.0)
    check.equal(output["identity"][0]["phi_im"], -0.5)

    status = main(["identity-check", MODEL_A_PATH, "--q", "0.5", "--phi-grid", "50"])
    check.equal(status, EXIT_NUMERICAL)
    output = json.loads(capsys.readouterr().out)
    check.equal(output["error"], "OutsideStripError")


def test_time_domain(capsys):
    """Test inversion diagnostics on stderr and the fee payload."""
    status = main(
        ["invert", MODEL_A_PATH, "--x", "0", "--t-grid", "1:2:2", "--format", "csv"]
    )
    check.equal(status, EXIT_OK)
    captured = capsys.readouterr()
    frame = pd.read_csv(StringIO(captured.out))
    check.equal(list(frame.columns), ["t", "value"])
    diagnostics = json.loads(captured.err)
    check.equal(diagnostics["method_used"], "gaver_stehfest")

    status = main(
        ["fee", MODEL_A_PATH, "--x", "0", "--fee-rate", "0.01", "--horizon", "1"]
    )
    check.equal(status, EXIT_OK)
    output = json.loads(capsys.readouterr().out)
    check.almost_equal(output["fee"]["value"], 0.01 * output["fee"]["occupation"])

    check.equal(main(["fee", MODEL_A_PATH, "--x", "0"]), EXIT_INVALID)


def test_monte_carlo(capsys):
    """Test a small reproducible simulation run."""
    args = ["mc", CP_MODEL_PATH, "--q", "0.5", "--x", "0.5"]
    args += ["--paths", "200", "--seed", "4"]
    check.equal(main(args), EXIT_OK)
    first = json.loads(capsys.readouterr().out)
    check.equal(main(args), EXIT_OK)
    second = json.loads(capsys.readouterr().out)
    check.equal(first, second)
    check.equal(first["n_paths"], 200)

    status = main(["mc", CP_MODEL_PATH, "--x", "0.5", "--quantity", "fixed"])
    check.equal(status, EXIT_INVALID)


def test_monte_carlo_exit_and_unsampleable(tmp_path, capsys):
    """Test both exit directions and the status for complex jump models."""
    base = ["mc", CP_MODEL_PATH, "--q", "0.5", "--quantity", "exit"]
    base += ["--paths", "200", "--seed", "3"]
    check.equal(main(base + ["--x", "0.5"]), EXIT_OK)
    up_exit = json.loads(capsys.readouterr().out)
    check.equal(main(base + ["--x=-0.5", "--direction", "down_X"]), EXIT_OK)
    down_exit = json.loads(capsys.readouterr().out)
    for estimate in (up_exit, down_exit):
        check.is_true(0 < estimate["mean"] < 1)
    check.not_equal(up_exit["mean"], down_exit["mean"])
    # a downward passage to a level above the start is rejected
    check.equal(main(base + ["--x", "0.5", "--direction", "down_X"]), EXIT_INVALID)

    model_path = tmp_path / "complex.yaml"
    dump_model(complex_jump_model(), model_path)
    status = main(["mc", str(model_path), "--q", "0.5", "--x", "0", "--paths", "10"])
    check.equal(status, EXIT_NUMERICAL)
    output = json.loads(capsys.readouterr().out)
    check.equal(output["error"], "UnsampleableDensityError")


def test_run_spec():
    """Test argument conversion and rendering."""
    spec = RunSpec(command="occ-lt", model_path=MODEL_A_PATH, x_grid="0:1:3", q="0.5")
    check.equal(list(spec.x_grid), [0.0, 0.5, 1.0])
    check.equal(spec.q, 0.5)
    check.equal(spec.overrides, {})
    with pytest.raises(ValueError):
        RunSpec(command="unknown", model_path=MODEL_A_PATH)
    with pytest.raises(ValueError):
        spec.require("p")
    check.equal(render("text", "json"), "text")
    check.equal(render(pd.DataFrame({"a": [0.5]}), "csv"), "a\n0.5\n")
    nested = render({"a": pd.DataFrame({"b": [1]})}, "json")
    check.equal(json.loads(nested), {"a": [{"b": 1}]})
    with pytest.raises(SystemExit):
        main(["--version"])
