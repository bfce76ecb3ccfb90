# -------------------------------------------------------------------------
# Copyright (c) occnb developers. All rights reserved.
# Licensed under the MIT License. See License.txt in the project root for
# license information.
# --------------------------------------------------------------------------
"""Expected fee paid while the process sits below the level."""
from typing import Any, Dict, Iterable, Optional

import numpy as np
import pandas as pd

from ... import nb_metadata
from ..._version import VERSION
from ...common import OccnbMissingParameterError, nb_print, set_text
from ...nblib.inversion import GAVER_STEHFEST, InversionConfig, fee_expectation
from ...notebooklet import NBMetadata, Notebooklet, NotebookletResult

__version__ = VERSION
__author__ = "occnb developers"


_CLS_METADATA: NBMetadata
_CELL_DOCS: Dict[str, Any]
_CLS_METADATA, _CELL_DOCS = nb_metadata.read_mod_metadata(__file__, __name__)


# pylint: disable=too-few-public-methods
class FeeExpectationResult(NotebookletResult):
    """
    Fee results.

    Attributes
    ----------
    fee : dict
        Fee rate, horizon, expected occupation and expected fee.
    diagnostics : dict
        Inversion diagnostics.
    sensitivity : pd.DataFrame
        Expected fee for a range of starting points.

    """

    def __init__(
        self,
        description: Optional[str] = None,
        notebooklet: Optional["Notebooklet"] = None,
    ):
        """Create new result instance."""
        super().__init__(description, notebooklet)
        self.fee: Optional[Dict[str, float]] = None
        self.diagnostics: Optional[Dict[str, Any]] = None
        self.sensitivity: Optional[pd.DataFrame] = None


class FeeExpectation(Notebooklet):
    """
    Expected fee c * E_x[time below b up to T].

    An account paying fees at rate c whenever it is below b, with the
    drift reduced by alpha while it is above b.

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
    ) -> FeeExpectationResult:
        """
        Return the expected fee up to a horizon.

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
        fee_rate : float
            Fee rate c >= 0 (required).
        horizon : float
            Horizon T > 0 (required).
        method : str, optional
            Inversion method, by default "gaver_stehfest".
        x_grid : Iterable[float], optional
            Starting points for the `sensitivity` option.

        Returns
        -------
        FeeExpectationResult

        """
        super().run(value=value, options=options, **kwargs)
        for param in ("x", "fee_rate", "horizon"):
            if kwargs.get(param) is None:
                raise OccnbMissingParameterError(param)
        x_val = float(kwargs["x"])
        fee_rate = float(kwargs["fee_rate"])
        horizon = float(kwargs["horizon"])
        cfg = InversionConfig(method=kwargs.get("method", GAVER_STEHFEST))
        model = self.model

        result = FeeExpectationResult(
            notebooklet=self, description=self.metadata.description
        )
        fee = fee_expectation(
            model, model.alpha, model.b, x_val, fee_rate, horizon, cfg
        )
        result.fee = {
            "x": x_val,
            "fee_rate": fee.fee_rate,
            "horizon": fee.horizon,
            "occupation": fee.occupation,
            "value": fee.value,
        }
        result.diagnostics = fee.diagnostics.to_dict()
        _show_fee(result.fee)

        if "sensitivity" in self.options:
            x_grid = kwargs.get("x_grid")
            if x_grid is None:
                x_grid = model.b + np.array([-1.0, -0.5, 0.0, 0.5, 1.0])
            rows = []
            for x_pt in x_grid:
                sens = fee_expectation(
                    model, model.alpha, model.b, float(x_pt), fee_rate, horizon, cfg
                )
                rows.append({"x": float(x_pt), "value": sens.value})
            result.sensitivity = pd.DataFrame(rows, columns=["x", "value"])

        self._last_result = result
        return self._last_result


@set_text(docs=_CELL_DOCS, key="show_fee")
def _show_fee(fee: Dict[str, float]):
    nb_print(
        f"Expected time below b up to T={fee['horizon']:g}: {fee['occupation']:.8g}"
    )
    nb_print(f"Expected fee at rate {fee['fee_rate']:g}: {fee['value']:.8g}")
