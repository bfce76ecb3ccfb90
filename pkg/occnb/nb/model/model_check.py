# -------------------------------------------------------------------------
# Copyright (c) occnb developers. All rights reserved.
# Licensed under the MIT License. See License.txt in the project root for
# license information.
# --------------------------------------------------------------------------
"""
Model check notebooklet.

Validates a refracted jump-diffusion model, classifies its regime and
tabulates the jump densities.
"""
from typing import Any, Dict, Iterable, List, Optional

import numpy as np
import pandas as pd
from bokeh.models import LayoutDOM

from ... import nb_metadata
from ..._version import VERSION
from ...common import nb_markdown, nb_print, nb_warn, plot_grid, set_text
from ...nblib.model import (
    RationalJumpDensity,
    RefractedModel,
    Violation,
    check_model,
    regime_of,
)
from ...nblib.modelfile import dump_model
from ...notebooklet import NBMetadata, Notebooklet, NotebookletResult

__version__ = VERSION
__author__ = "occnb developers"


_CLS_METADATA: NBMetadata
_CELL_DOCS: Dict[str, Any]
_CLS_METADATA, _CELL_DOCS = nb_metadata.read_mod_metadata(__file__, __name__)


# pylint: disable=too-few-public-methods
class ModelCheckResult(NotebookletResult):
    """
    Model check results.

    Attributes
    ----------
    model : RefractedModel
        The model as read (refraction overrides applied).
    valid : bool
        True if no invariant is violated.
    violations : pd.DataFrame
        One row (code, message) per violated invariant.
    regime : dict
        Regime name and the atom flags of the extremum laws.
    jump_table : pd.DataFrame
        Rates, Erlang orders and coefficients of both jump densities.
    canonical : str
        Canonical YAML text of the model.
    density_plot : LayoutDOM
        Plot of the jump densities.

    """

    def __init__(
        self,
        description: Optional[str] = None,
        notebooklet: Optional["Notebooklet"] = None,
    ):
        """Create new result instance."""
        super().__init__(description, notebooklet)
        self.model: Optional[RefractedModel] = None
        self.valid: Optional[bool] = None
        self.violations: Optional[pd.DataFrame] = None
        self.regime: Optional[Dict[str, Any]] = None
        self.jump_table: Optional[pd.DataFrame] = None
        self.canonical: Optional[str] = None
        self.density_plot: Optional[LayoutDOM] = None


# pylint: enable=too-few-public-methods


class ModelCheck(Notebooklet):
    """
    Validate a model and report its regime.

    Every invariant is checked and all failures are listed together,
    so an invalid model returns a result instead of raising.

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
    ) -> ModelCheckResult:
        """
        Return the validation report of a model.

        Parameters
        ----------
        value : Any
            RefractedModel, LevyModel or model file path.
        options : Optional[Iterable[str]], optional
            List of options to use, by default None.
            A value of None means use default options.

        Returns
        -------
        ModelCheckResult
            Result object with attributes for each result type.

        """
        model = self._begin_run(value, options, validate_model=False, **kwargs)

        result = ModelCheckResult(
            notebooklet=self, description=self.metadata.description
        )
        result.model = model
        violations = check_model(model)
        result.valid = not violations
        result.violations = _violation_frame(violations)
        _show_violations(violations)

        if "regime" in self.options:
            result.regime = _regime_summary(model)
            nb_print(f"Regime: {result.regime['regime']}")
        if "jump_table" in self.options:
            result.jump_table = _jump_table(model)
        if "canonical" in self.options:
            result.canonical = dump_model(model)
        if "plot_density" in self.options and result.valid:
            result.density_plot = _plot_densities(model)

        self._last_result = result
        return self._last_result


def _violation_frame(violations: List[Violation]) -> pd.DataFrame:
    return pd.DataFrame(
        [{"code": viol.code.value, "message": viol.message} for viol in violations],
        columns=["code", "message"],
    )


@set_text(docs=_CELL_DOCS, key="show_violations")
def _show_violations(violations: List[Violation]):
    if not violations:
        nb_markdown("The model satisfies all invariants.")
        return
    for viol in violations:
        nb_warn(str(viol))


def _regime_summary(model: RefractedModel) -> Dict[str, Any]:
    info = regime_of(model)
    return {
        "regime": info.regime.value,
        "y_has_atom_at_sup": info.y_has_atom_at_sup,
        "x_has_atom_at_inf": info.x_has_atom_at_inf,
        "has_occupation_atom": info.has_occupation_atom,
    }


def _jump_table(model: RefractedModel) -> pd.DataFrame:
    rows = []
    for side, density in (("up", model.base.jumps_up), ("down", model.base.jumps_down)):
        for term in density.terms:
            for j_idx, coeff in enumerate(term.coeffs):
                rows.append(
                    {
                        "side": side,
                        "rate_re": term.rate.real,
                        "rate_im": term.rate.imag,
                        "order": j_idx + 1,
                        "coeff_re": coeff.real,
                        "coeff_im": coeff.imag,
                    }
                )
    return pd.DataFrame(
        rows, columns=["side", "rate_re", "rate_im", "order", "coeff_re", "coeff_im"]
    )


def _density_grid(density: RationalJumpDensity, n_points: int = 200) -> np.ndarray:
    min_rate = min(rate.real for rate in density.rates)
    return np.linspace(0.0, 8.0 / min_rate, n_points)[1:]


@set_text(docs=_CELL_DOCS, key="plot_density")
def _plot_densities(model: RefractedModel) -> Optional[LayoutDOM]:
    frames = []
    for sign, density in ((1.0, model.base.active_up), (-1.0, model.base.active_down)):
        if density.is_empty:
            continue
        y_grid = _density_grid(density)
        frames.append(
            pd.DataFrame({"y": sign * y_grid, "density": density.density(y_grid).real})
        )
    if not frames:
        return None
    data = pd.concat(frames).sort_values("y")
    return plot_grid(data, "y", ["density"], "Jump size densities", level=0.0)
