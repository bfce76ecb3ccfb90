# -------------------------------------------------------------------------
# Copyright (c) occnb developers. All rights reserved.
# Licensed under the MIT License. See License.txt in the project root for
# license information.
# --------------------------------------------------------------------------
"""
Occupation inversion notebooklet.

Expected occupation time below b up to a fixed time t, recovered from
the exponential-time formula by numerical Laplace inversion in q.
"""
from typing import Any, Dict, Iterable, Optional

import attr
import pandas as pd
from bokeh.models import LayoutDOM

from ... import nb_metadata
from ..._version import VERSION
from ...common import OccnbMissingParameterError, nb_print, nb_warn, plot_grid, set_text
from ...nblib.inversion import (
    GAVER_STEHFEST,
    TALBOT,
    InversionConfig,
    invert_occupation,
)
from ...notebooklet import NBMetadata, Notebooklet, NotebookletResult

__version__ = VERSION
__author__ = "occnb developers"


_CLS_METADATA: NBMetadata
_CELL_DOCS: Dict[str, Any]
_CLS_METADATA, _CELL_DOCS = nb_metadata.read_mod_metadata(__file__, __name__)


# pylint: disable=too-few-public-methods
class OccupationInversionResult(NotebookletResult):
    """
    Fixed-horizon occupation results.

    Attributes
    ----------
    x : float
        Starting point.
    values : pd.DataFrame
        t and E_x[time below b up to t].
    diagnostics : dict
        Method used, order gaps, clipping and fallback information.
    method_comparison : pd.DataFrame
        Values from both inversion methods side by side.
    plot : LayoutDOM
        Plot of the expected occupation time against t.

    """

    def __init__(
        self,
        description: Optional[str] = None,
        notebooklet: Optional["Notebooklet"] = None,
    ):
        """Create new result instance."""
        super().__init__(description, notebooklet)
        self.x: Optional[float] = None
        self.values: Optional[pd.DataFrame] = None
        self.diagnostics: Optional[Dict[str, Any]] = None
        self.method_comparison: Optional[pd.DataFrame] = None
        self.plot: Optional[LayoutDOM] = None


class OccupationInversion(Notebooklet):
    """Invert the exponential-time expectation to fixed horizons."""

    metadata = _CLS_METADATA
    __doc__ = nb_metadata.update_class_doc(__doc__, metadata)
    _cell_docs = _CELL_DOCS

    @set_text(docs=_CELL_DOCS, key="run")
    def run(
        self,
        value: Any = None,
        options: Optional[Iterable[str]] = None,
        **kwargs,
    ) -> OccupationInversionResult:
        """
        Return the expected occupation time on a time grid.

        Parameters
        ----------
        value : Any
            RefractedModel, LevyModel or model file path.
        options : Optional[Iterable[str]], optional
            List of options to use, by default None.

        Other Parameters
        ----------------
        x : float
            Starting point (required).
        t_grid : Iterable[float]
            Positive times (required).
        method : str, optional
            "gaver_stehfest" (default) or "talbot".
        order : int, optional
            Gaver-Stehfest order, by default 14.

        Returns
        -------
        OccupationInversionResult

        """
        super().run(value=value, options=options, **kwargs)
        for param in ("x", "t_grid"):
            if kwargs.get(param) is None:
                raise OccnbMissingParameterError(param)
        x_val = float(kwargs["x"])
        cfg = InversionConfig(
            method=kwargs.get("method", GAVER_STEHFEST),
            order=int(kwargs.get("order", 14)),
            t_grid=kwargs["t_grid"],
        )
        model = self.model

        result = OccupationInversionResult(
            notebooklet=self, description=self.metadata.description
        )
        result.x = x_val
        inverted = invert_occupation(model, model.alpha, model.b, x_val, cfg)
        result.values = inverted.to_frame()
        result.diagnostics = inverted.diagnostics.to_dict()
        _show_diagnostics(result.diagnostics)

        if "compare_methods" in self.options:
            other = TALBOT if cfg.method == GAVER_STEHFEST else GAVER_STEHFEST
            alt = invert_occupation(
                model, model.alpha, model.b, x_val, attr.evolve(cfg, method=other)
            )
            result.method_comparison = pd.DataFrame(
                {
                    "t": inverted.t,
                    cfg.method: inverted.values,
                    other: alt.values,
                    "abs_diff": abs(inverted.values - alt.values),
                }
            )
        if "plot" in self.options:
            result.plot = _plot_values(result.values)

        self._last_result = result
        return self._last_result


@set_text(docs=_CELL_DOCS, key="show_diagnostics")
def _show_diagnostics(diag: Dict[str, Any]):
    nb_print(f"Method: {diag['method_used']} (order {diag['order']})")
    if diag.get("fallback_reason"):
        nb_warn(f"Fell back to {diag['method_used']}: {diag['fallback_reason']}")
    if diag.get("clipped"):
        nb_warn(f"{diag['clipped']} values were clipped to [0, t].")


@set_text(docs=_CELL_DOCS, key="plot_values")
def _plot_values(values: pd.DataFrame) -> LayoutDOM:
    return plot_grid(values, "t", ["value"], "Expected occupation time below b")
