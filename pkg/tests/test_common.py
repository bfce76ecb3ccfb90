# -------------------------------------------------------------------------
# Copyright (c) occnb developers. All rights reserved.
# Licensed under the MIT License. See License.txt in the project root for
# license information.
# --------------------------------------------------------------------------
"""common test class."""
import io
from contextlib import redirect_stdout

import pandas as pd
import pytest
import pytest_check as check
from bokeh.models import LayoutDOM

from occnb import init, options
from occnb.common import (
    NBContainer,
    OccnbMissingParameterError,
    OccnbValidationError,
    nb_debug,
    nb_print,
    plot_grid,
    set_text,
)
from occnb.nblib.model import check_model
from occnb.nblib.modelfile import load_model
from occnb.options import get_opt, set_opt

from .nb_test import TstNBSummary
from .unit_test_lib import BAD_MODEL_PATH, model_a

# pylint: disable=too-many-statements


@pytest.fixture(autouse=True)
def reset_options():
    """Restore option defaults around each test."""
    options.reset()
    yield
    options.reset()


def test_print_methods():
    """Test method."""
    set_opt("verbose", True)
    f_stream = io.StringIO()
    with redirect_stdout(f_stream):
        nb_print("status")
    check.is_in("status", str(f_stream.getvalue()))

    set_opt("verbose", False)
    f_stream = io.StringIO()
    with redirect_stdout(f_stream):
        nb_print("status")
    check.is_not_in("status", str(f_stream.getvalue()))

    set_opt("debug", True)
    f_stream = io.StringIO()
    with redirect_stdout(f_stream):
        nb_debug("debug", "debugmssg", "val", 1, "result", True)
    check.is_in("debug", str(f_stream.getvalue()))
    check.is_in("debugmssg", str(f_stream.getvalue()))
    check.is_in("val", str(f_stream.getvalue()))
    check.is_in("1", str(f_stream.getvalue()))
    check.is_in("result", str(f_stream.getvalue()))
    check.is_in("True", str(f_stream.getvalue()))


def test_set_text_decorator():
    """Test cell text shown before the wrapped call."""
    docs = {"cell": {"title": "Heading", "text": "Body", "notes": "extra"}}

    @set_text(docs=docs, key="cell", title="Default")
    def _cell_func(value, **kwargs):
        del kwargs
        return value * 2

    f_stream = io.StringIO()
    with redirect_stdout(f_stream):
        check.equal(_cell_func(2), 4)
    check.is_in("HTML", f_stream.getvalue())

    f_stream = io.StringIO()
    with redirect_stdout(f_stream):
        check.equal(_cell_func(3, silent=True), 6)
    check.equal(f_stream.getvalue(), "")


def test_nb_container():
    """Test the notebooklet tree container."""
    tree = NBContainer()
    tree.sub = NBContainer()
    tree.sub.TstNBSummary = TstNBSummary
    check.equal(len(tree), 1)
    check.equal(list(tree.iter_classes()), [("TstNBSummary", TstNBSummary)])
    check.equal(str(tree), "sub\n  TstNBSummary (Notebooklet)\n")
    check.is_in("sub [", repr(tree))


def test_options():
    """Test method."""
    set_opt("verbose", True)
    f_stream = io.StringIO()
    with redirect_stdout(f_stream):
        options.current()
    check.is_in("verbose: True", str(f_stream.getvalue()))

    f_stream = io.StringIO()
    with redirect_stdout(f_stream):
        options.show()
    check.is_in(
        "verbose (default=True): Show progress messages.", str(f_stream.getvalue())
    )

    with pytest.raises(KeyError):
        get_opt("no_option")

    with pytest.raises(KeyError):
        set_opt("no_option", "value")

    with pytest.raises(TypeError):
        set_opt("root_tol", "tight")

    # This will work since bool(10) == True
    set_opt("verbose", 10)
    check.is_true(get_opt("verbose"))

    set_opt("contour_nodes", "128")
    check.equal(get_opt("contour_nodes"), 128)
    options.reset()
    check.equal(get_opt("contour_nodes"), 64)


def test_exceptions():
    """Test exception messages."""
    err = OccnbMissingParameterError("q", "p")
    check.is_in("q", str(err))
    violations = check_model(load_model(BAD_MODEL_PATH))
    err = OccnbValidationError(violations)
    check.is_in("NegativeVolatility", str(err))
    check.equal(len(err.violations), len(violations))


def test_plot_grid():
    """Test the shared line plot helper."""
    data = pd.DataFrame({"x": [0.0, 1.0, 2.0], "value": [1.0, 0.5, 0.25]})
    plot = plot_grid(data, "x", ["value"], "Decay", level=1.0)
    check.is_instance(plot, LayoutDOM)


def _capture_nb_run_output(test_nb, **kwargs):
    f_stream = io.StringIO()
    with redirect_stdout(f_stream):
        test_nb.run(model_a(), **kwargs)
    return str(f_stream.getvalue())


def test_silent_option():
    """Test operation of 'silent' option."""
    init()
    test_nb = TstNBSummary()

    output = _capture_nb_run_output(test_nb)
    check.is_true(output)

    # Silent option to run
    output = _capture_nb_run_output(test_nb, silent=True)
    check.is_false(output)
    check.is_true(get_opt("silent"))

    # Silent option to init
    test_nb = TstNBSummary(silent=True)
    check.is_true(test_nb.silent)
    output = _capture_nb_run_output(test_nb)
    check.is_false(output)

    # But overridable on run
    output = _capture_nb_run_output(test_nb, silent=False)
    check.is_true(output)
    check.is_false(get_opt("silent"))

    # Silent global option
    set_opt("silent", True)
    test_nb = TstNBSummary()
    output = _capture_nb_run_output(test_nb)
    check.is_false(output)

    # But overridable on run
    output = _capture_nb_run_output(test_nb, silent=False)
    check.is_true(output)
