# -------------------------------------------------------------------------
# Copyright (c) occnb developers. All rights reserved.
# Licensed under the MIT License. See License.txt in the project root for
# license information.
# --------------------------------------------------------------------------
"""
Occupation Laplace transform notebooklet.

V(x) = E_x[exp(-p * time spent below b up to e(q))] for the refracted
process started at x.
"""
from typing import Any, Dict, Iterable, Optional

import numpy as np
import pandas as pd
from bokeh.models import LayoutDOM

from ... import nb_metadata
from ..._version import VERSION
from ...common import OccnbMissingParameterError, nb_print, nb_warn, plot_grid, set_text
from ...nblib.model import regime_of
from ...nblib.occupation import (
    PiecewiseExpPoly,
    check_bounds,
    default_x_grid,
    expected_jump,
    occupation_laplace,
    renewal_residual,
    smoothness_report,
)
from ...notebooklet import NBMetadata, Notebooklet, NotebookletResult

__version__ = VERSION
__author__ = "occnb developers"


_CLS_METADATA: NBMetadata
_CELL_DOCS: Dict[str, Any]
_CLS_METADATA, _CELL_DOCS = nb_metadata.read_mod_metadata(__file__, __name__)


# pylint: disable=too-few-public-methods
class OccupationLaplaceResult(NotebookletResult):
    """
    Occupation Laplace transform results.

    Attributes
    ----------
    p : float
        Occupation penalty.
    q : float
        Discount rate.
    transform : PiecewiseExpPoly
        V as an exponential polynomial on each side of b.
    coefficients : pd.DataFrame
        Root, order and coefficient of each term of V.
    values : pd.DataFrame
        V on the starting point grid.
    bounds : dict
        Minimum and maximum of V on the grid (must lie in [q/(p+q), 1]).
    smoothness : dict
        Left and right values and derivatives of V at b.
    renewal : pd.DataFrame
        V against its value rebuilt through the first passage over b.
    plot : LayoutDOM
        Plot of V against the starting point.

    """

    def __init__(
        self,
        description: Optional[str] = None,
        notebooklet: Optional["Notebooklet"] = None,
    ):
        """Create new result instance."""
        super().__init__(description, notebooklet)
        self.p: Optional[float] = None
        self.q: Optional[float] = None
        self.transform: Optional[PiecewiseExpPoly] = None
        self.coefficients: Optional[pd.DataFrame] = None
        self.values: Optional[pd.DataFrame] = None
        self.bounds: Optional[Dict[str, float]] = None
        self.smoothness: Optional[Dict[str, Any]] = None
        self.renewal: Optional[pd.DataFrame] = None
        self.plot: Optional[LayoutDOM] = None


class OccupationLaplace(Notebooklet):
    """
    Compute the Laplace transform of the occupation time below b.

    The occupation time is taken up to an independent exponential
    time e(q). Below b the process moves as X - alpha t, at or above
    b as X.

    """

    metadata = _CLS_METADATA
    __doc__ = nb_metadata.update_class_doc(__doc__, metadata)
    _cell_docs = _CELL_DOCS

    @set_text(docs=_CELL_DOCS, key="run")
    def run(
        self,
        value: Any = None,
        options: Optional[Iterable[str]] = None,
        **kwargs,
    ) -> OccupationLaplaceResult:
        """
        Return V with its coefficients and values on a grid.

        Parameters
        ----------
        value : Any
            RefractedModel, LevyModel or model file path.
        options : Optional[Iterable[str]], optional
            List of options to use, by default None.

        Other Parameters
        ----------------
        p : float
            Occupation penalty, >= 0 (required).
        q : float
            Discount rate, > 0 (required).
        x_grid : Iterable[float], optional
            Starting points. By default a grid around b scaled by
            the slowest decay rate.
        method : str, optional
            "auto", "general" or "simple", by default "auto".

        Returns
        -------
        OccupationLaplaceResult

        Raises
        ------
        RegimeContractViolation
            If V is not smooth at b in the way the regime predicts.

        """
        super().run(value=value, options=options, **kwargs)
        for param in ("p", "q"):
            if kwargs.get(param) is None:
                raise OccnbMissingParameterError(param)
        p_val = float(kwargs["p"])
        q_val = float(kwargs["q"])
        method = kwargs.get("method", "auto")
        model = self.model

        result = OccupationLaplaceResult(
            notebooklet=self, description=self.metadata.description
        )
        result.p = p_val
        result.q = q_val
        v_fn = occupation_laplace(
            model, model.alpha, model.b, p_val, q_val, method=method
        )
        result.transform = v_fn
        if "coefficients" in self.options:
            result.coefficients = v_fn.to_frame()

        x_grid = kwargs.get("x_grid")
        if x_grid is None:
            x_grid = default_x_grid(v_fn)
        x_grid = np.asarray(x_grid, dtype=float)
        result.values = v_fn.grid_frame(x_grid)
        v_min, v_max = check_bounds(v_fn, x_grid)
        result.bounds = {"min": v_min, "max": v_max, "floor": q_val / (p_val + q_val)}
        _show_bounds(result.bounds)

        if "smoothness" in self.options and p_val > 0:
            report = smoothness_report(
                v_fn,
                regime_of(model),
                expected_atom=expected_jump(model, model.alpha, p_val, q_val),
            )
            result.smoothness = {
                "regime": report.regime,
                "left_limit": report.left_limit,
                "right_value": report.right_value,
                "value_jump": report.value_jump,
                "left_derivative": report.left_derivative,
                "right_derivative": report.right_derivative,
                "derivative_jump": report.derivative_jump,
            }
        if "renewal" in self.options:
            result.renewal = _renewal_frame(
                model, p_val, q_val, v_fn, kwargs.get("renewal_x")
            )
        if "plot" in self.options and v_fn.real:
            result.plot = _plot_transform(result.values, model.b)

        self._last_result = result
        return self._last_result


@set_text(docs=_CELL_DOCS, key="show_bounds")
def _show_bounds(bounds: Dict[str, float]):
    nb_print(f"min V = {bounds['min']:.10g}, max V = {bounds['max']:.10g}")
    tol = 1e-9
    if bounds["min"] < bounds["floor"] - tol or bounds["max"] > 1 + tol:
        nb_warn(f"V leaves [{bounds['floor']:.6g}, 1] on the grid.")


def _renewal_frame(model, p_val, q_val, v_fn, x_points=None) -> pd.DataFrame:
    if x_points is None:
        x_points = [model.b - 0.5, model.b + 0.5]
    checks = [
        renewal_residual(model, model.alpha, model.b, p_val, q_val, x_val, V=v_fn)
        for x_val in x_points
    ]
    return pd.DataFrame(
        [
            {
                "x": check.x,
                "value": check.value,
                "renewal": check.renewal,
                "residual": check.residual,
            }
            for check in checks
        ],
        columns=["x", "value", "renewal", "residual"],
    )


@set_text(docs=_CELL_DOCS, key="plot_transform")
def _plot_transform(values: pd.DataFrame, level: float) -> LayoutDOM:
    return plot_grid(
        values, "x", ["value"], "Occupation Laplace transform V(x)", level=level
    )
