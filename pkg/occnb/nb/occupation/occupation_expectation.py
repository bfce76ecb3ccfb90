# -------------------------------------------------------------------------
# Copyright (c) occnb developers. All rights reserved.
# Licensed under the MIT License. See License.txt in the project root for
# license information.
# --------------------------------------------------------------------------
"""Expected occupation time and distribution at an exponential time."""
from typing import Any, Dict, Iterable, Optional

import numpy as np
import pandas as pd
from bokeh.models import LayoutDOM

from ... import nb_metadata
from ..._version import VERSION
from ...common import OccnbMissingParameterError, nb_print, plot_grid, set_text
from ...nblib.model import regime_of
from ...nblib.occupation import (
    PiecewiseExpPoly,
    compound_poisson_ratio,
    default_x_grid,
    distribution_atom,
    occupation_expectation,
)
from ...nblib.wienerhopf import realize
from ...notebooklet import NBMetadata, Notebooklet, NotebookletResult

__version__ = VERSION
__author__ = "occnb developers"


_CLS_METADATA: NBMetadata
_CELL_DOCS: Dict[str, Any]
_CLS_METADATA, _CELL_DOCS = nb_metadata.read_mod_metadata(__file__, __name__)


# pylint: disable=too-few-public-methods
class OccupationExpectationResult(NotebookletResult):
    """
    Expected occupation time results.

    Attributes
    ----------
    q : float
        Discount rate.
    expectation : PiecewiseExpPoly
        E_x[time below b up to e(q)].
    distribution : PiecewiseExpPoly
        P_x(U at e(q) < b), equal to q times the expectation.
    values : pd.DataFrame
        Expectation and distribution on the starting point grid.
    atom : dict
        Jump of the distribution at b, in closed form and from the
        coefficients.
    plot : LayoutDOM
        Plot of the distribution against the starting point.

    """

    def __init__(
        self,
        description: Optional[str] = None,
        notebooklet: Optional["Notebooklet"] = None,
    ):
        """Create new result instance."""
        super().__init__(description, notebooklet)
        self.q: Optional[float] = None
        self.expectation: Optional[PiecewiseExpPoly] = None
        self.distribution: Optional[PiecewiseExpPoly] = None
        self.values: Optional[pd.DataFrame] = None
        self.atom: Optional[Dict[str, float]] = None
        self.plot: Optional[LayoutDOM] = None


class OccupationExpectation(Notebooklet):
    """Compute the expected occupation time below b up to e(q)."""

    metadata = _CLS_METADATA
    __doc__ = nb_metadata.update_class_doc(__doc__, metadata)
    _cell_docs = _CELL_DOCS

    @set_text(docs=_CELL_DOCS, key="run")
    def run(
        self,
        value: Any = None,
        options: Optional[Iterable[str]] = None,
        **kwargs,
    ) -> OccupationExpectationResult:
        """
        Return the expected occupation time and the distribution at e(q).

        Parameters
        ----------
        value : Any
            RefractedModel, LevyModel or model file path.
        options : Optional[Iterable[str]], optional
            List of options to use, by default None.

        Other Parameters
        ----------------
        q : float
            Discount rate, > 0 (required).
        x_grid : Iterable[float], optional
            Starting points.
        method : str, optional
            "auto", "general" or "simple", by default "auto".

        Returns
        -------
        OccupationExpectationResult

        """
        super().run(value=value, options=options, **kwargs)
        if kwargs.get("q") is None:
            raise OccnbMissingParameterError("q")
        q_val = float(kwargs["q"])
        model = self.model

        result = OccupationExpectationResult(
            notebooklet=self, description=self.metadata.description
        )
        result.q = q_val
        expect = occupation_expectation(
            model, model.alpha, model.b, q_val, method=kwargs.get("method", "auto")
        )
        result.expectation = expect
        result.distribution = expect.scaled(q_val, "distribution")

        x_grid = kwargs.get("x_grid")
        if x_grid is None:
            x_grid = default_x_grid(expect)
        x_grid = np.asarray(x_grid, dtype=float)
        values = expect.grid_frame(x_grid).rename(columns={"value": "expectation"})
        if "distribution" in self.options:
            values["distribution"] = result.distribution(x_grid)
        result.values = values

        if "atom" in self.options:
            result.atom = _atom_summary(model, q_val, result.distribution)
            _show_atom(result.atom)
        if "plot" in self.options:
            result.plot = _plot_distribution(
                result.distribution.grid_frame(x_grid), model.b
            )

        self._last_result = result
        return self._last_result


def _atom_summary(
    model, q_val: float, distribution: PiecewiseExpPoly
) -> Dict[str, Any]:
    regime = regime_of(model)
    summary: Dict[str, Any] = {
        "regime": regime.regime.value,
        "closed_form": distribution_atom(model, model.alpha, q_val),
        "from_coefficients": float(realize(distribution.atom_at_b, "atom")),
    }
    if regime.has_occupation_atom:
        summary["product_ratio"] = compound_poisson_ratio(model, model.alpha, q_val)
    return summary


@set_text(docs=_CELL_DOCS, key="show_atom")
def _show_atom(atom: Dict[str, Any]):
    nb_print(f"Regime: {atom['regime']}")
    nb_print(f"Jump at b (closed form): {atom['closed_form']:.10g}")
    nb_print(f"Jump at b (coefficients): {atom['from_coefficients']:.10g}")


@set_text(docs=_CELL_DOCS, key="plot_distribution")
def _plot_distribution(values: pd.DataFrame, level: float) -> LayoutDOM:
    return plot_grid(values, "x", ["value"], "P_x(U(e_q) < b)", level=level)
