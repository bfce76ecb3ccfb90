# -------------------------------------------------------------------------
# Copyright (c) occnb developers. All rights reserved.
# Licensed under the MIT License. See License.txt in the project root for
# license information.
# --------------------------------------------------------------------------
"""
First passage notebooklet.

Discounted joint laws of the passage time and overshoot for upward
passage of Y and downward passage of X.
"""
from typing import Any, Dict, Iterable, Optional

import numpy as np
import pandas as pd

from ... import nb_metadata
from ..._version import VERSION
from ...common import OccnbMissingParameterError, nb_print, set_text
from ...nblib.firstpassage import (
    ExitDirection,
    ExitLaw,
    exit_down_law,
    exit_up_law,
    pr_lhs,
    pr_rhs,
    pr_rhs_down,
)
from ...nblib.wienerhopf import realize
from ...notebooklet import NBMetadata, Notebooklet, NotebookletResult

__version__ = VERSION
__author__ = "occnb developers"


_CLS_METADATA: NBMetadata
_CELL_DOCS: Dict[str, Any]
_CLS_METADATA, _CELL_DOCS = nb_metadata.read_mod_metadata(__file__, __name__)

_DEF_S_GRID = (0.0, 0.5, 1.0, 2.0)


# pylint: disable=too-few-public-methods
class ExitLawsResult(NotebookletResult):
    """
    First passage results.

    Attributes
    ----------
    q : float
        Discount rate.
    x : float
        Distance of the passage level from the start.
    up_terms : pd.DataFrame
        Overshoot terms of the upward passage of Y over x.
    down_terms : pd.DataFrame
        Overshoot terms of the downward passage of X below -x.
    summary : pd.DataFrame
        Atom and discounted mass of each passage.
    transforms : pd.DataFrame
        E[exp(-q tau - s overshoot)] for each s of the grid.
    level_check : pd.DataFrame
        Level transform by quadrature against the closed form.

    """

    def __init__(
        self,
        description: Optional[str] = None,
        notebooklet: Optional["Notebooklet"] = None,
    ):
        """Create new result instance."""
        super().__init__(description, notebooklet)
        self.q: Optional[float] = None
        self.x: Optional[float] = None
        self.up_terms: Optional[pd.DataFrame] = None
        self.down_terms: Optional[pd.DataFrame] = None
        self.summary: Optional[pd.DataFrame] = None
        self.transforms: Optional[pd.DataFrame] = None
        self.level_check: Optional[pd.DataFrame] = None


class ExitLaws(Notebooklet):
    """Compute the first passage laws over a level at distance x."""

    metadata = _CLS_METADATA
    __doc__ = nb_metadata.update_class_doc(__doc__, metadata)
    _cell_docs = _CELL_DOCS

    @set_text(docs=_CELL_DOCS, key="run")
    def run(
        self,
        value: Any = None,
        options: Optional[Iterable[str]] = None,
        **kwargs,
    ) -> ExitLawsResult:
        """
        Return the upward and downward passage laws.

        Parameters
        ----------
        value : Any
            RefractedModel, LevyModel or model file path.
        options : Optional[Iterable[str]], optional
            List of options to use, by default None.

        Other Parameters
        ----------------
        q : float
            Discount rate (required).
        x : float
            Distance of the level from the start, >= 0 (required).
            Y passes upward over x, X passes downward below -x.
        s_grid : Iterable[float], optional
            Overshoot transform arguments, by default (0, 0.5, 1, 2).
        theta : float, optional
            Level transform argument for the `level_check` option,
            by default 1.

        Returns
        -------
        ExitLawsResult

        """
        super().run(value=value, options=options, **kwargs)
        for param in ("q", "x"):
            if kwargs.get(param) is None:
                raise OccnbMissingParameterError(param)
        q = float(kwargs["q"])
        dist = abs(float(kwargs["x"]))
        s_grid = np.asarray(kwargs.get("s_grid", _DEF_S_GRID), dtype=float)
        model = self.model

        result = ExitLawsResult(notebooklet=self, description=self.metadata.description)
        result.q = q
        result.x = dist
        laws: Dict[str, ExitLaw] = {}
        if "up" in self.options:
            laws["up"] = exit_up_law(model, model.alpha, q, dist)
            result.up_terms = _terms_frame(laws["up"])
        if "down" in self.options:
            laws["down"] = exit_down_law(model, q, -dist)
            result.down_terms = _terms_frame(laws["down"])
        result.summary = _summary(laws)
        _show_summary(result.summary)
        result.transforms = pd.DataFrame(
            {
                "s": s_grid,
                **{
                    name: realize(law.transform(s_grid), f"{name} transform")
                    for name, law in laws.items()
                },
            }
        )
        if "level_check" in self.options:
            theta = float(kwargs.get("theta", 1.0))
            result.level_check = _level_check(model, q, theta, s_grid, laws)

        self._last_result = result
        return self._last_result


def _terms_frame(law: ExitLaw) -> pd.DataFrame:
    return pd.DataFrame(
        [
            {
                "rate_re": term.rate.real,
                "rate_im": term.rate.imag,
                "order": term.order,
                "coeff_re": term.coeff.real,
                "coeff_im": term.coeff.imag,
            }
            for term in law.terms
        ],
        columns=["rate_re", "rate_im", "order", "coeff_re", "coeff_im"],
    )


def _summary(laws: Dict[str, ExitLaw]) -> pd.DataFrame:
    return pd.DataFrame(
        [
            {
                "direction": law.direction.value,
                "level": law.x,
                "atom": float(realize(law.atom, "atom")),
                "discounted_mass": float(realize(law.discounted_mass(), "mass")),
            }
            for law in laws.values()
        ],
        columns=["direction", "level", "atom", "discounted_mass"],
    )


@set_text(docs=_CELL_DOCS, key="show_summary")
def _show_summary(summary: pd.DataFrame):
    for row in summary.itertuples():
        nb_print(
            f"{row.direction} at {row.level:g}: atom={row.atom:.10g}"
            f" E[exp(-q tau)]={row.discounted_mass:.10g}"
        )


def _level_check(
    model, q: float, theta: float, s_grid: np.ndarray, laws: Dict[str, ExitLaw]
) -> pd.DataFrame:
    rows = []
    for name in laws:
        direction = ExitDirection.UP_Y if name == "up" else ExitDirection.DOWN_X
        for s_val in s_grid:
            if abs(s_val - theta) <= 1e-8 * (1 + abs(s_val)):
                continue
            lhs = pr_lhs(model, model.alpha, q, theta, s_val, direction)
            if direction == ExitDirection.UP_Y:
                rhs = pr_rhs(model, model.alpha, q, theta, s_val)
            else:
                rhs = pr_rhs_down(model, q, theta, s_val)
            rows.append(
                {
                    "direction": direction.value,
                    "theta": theta,
                    "s": s_val,
                    "quadrature": lhs,
                    "closed_form": rhs,
                    "abs_diff": abs(lhs - rhs),
                }
            )
    return pd.DataFrame(
        rows,
        columns=["direction", "theta", "s", "quadrature", "closed_form", "abs_diff"],
    )
