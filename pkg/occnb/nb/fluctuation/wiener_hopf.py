# -------------------------------------------------------------------------
# Copyright (c) occnb developers. All rights reserved.
# Licensed under the MIT License. See License.txt in the project root for
# license information.
# --------------------------------------------------------------------------
"""
Wiener-Hopf factor notebooklet.

Laws of the supremum of Y = X - alpha t and of the infimum of X
at an independent exponential time.
"""
from typing import Any, Dict, Iterable, Optional

import numpy as np
import pandas as pd
from bokeh.models import LayoutDOM

from ... import nb_metadata
from ..._version import VERSION
from ...common import OccnbMissingParameterError, nb_print, plot_grid, set_text
from ...nblib.wienerhopf import WienerHopfFactor, neg_factor, pos_factor, realize
from ...notebooklet import NBMetadata, Notebooklet, NotebookletResult

__version__ = VERSION
__author__ = "occnb developers"


_CLS_METADATA: NBMetadata
_CELL_DOCS: Dict[str, Any]
_CLS_METADATA, _CELL_DOCS = nb_metadata.read_mod_metadata(__file__, __name__)


# pylint: disable=too-few-public-methods
class WienerHopfResult(NotebookletResult):
    """
    Wiener-Hopf factor results.

    Attributes
    ----------
    q : float
        Discount rate.
    sup_terms : pd.DataFrame
        Partial-fraction terms of the supremum factor psi+.
    inf_terms : pd.DataFrame
        Partial-fraction terms of the infimum factor psi-.
    atoms : dict
        Masses at 0 of the supremum (C0) and infimum (D0) laws.
    masses : dict
        Total mass of each law (atom plus integrated density).
    densities : pd.DataFrame
        Supremum and infimum densities on the requested grid.
    density_plot : LayoutDOM
        Plot of the two densities.

    """

    def __init__(
        self,
        description: Optional[str] = None,
        notebooklet: Optional["Notebooklet"] = None,
    ):
        """Create new result instance."""
        super().__init__(description, notebooklet)
        self.q: Optional[float] = None
        self.sup_terms: Optional[pd.DataFrame] = None
        self.inf_terms: Optional[pd.DataFrame] = None
        self.atoms: Optional[Dict[str, float]] = None
        self.masses: Optional[Dict[str, float]] = None
        self.densities: Optional[pd.DataFrame] = None
        self.density_plot: Optional[LayoutDOM] = None


class WienerHopf(Notebooklet):
    """
    Compute both Wiener-Hopf factors and the extremum laws.

    The supremum factor uses the beta roots of the process with the
    refraction drift removed, the infimum factor the gamma roots of X.

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
    ) -> WienerHopfResult:
        """
        Return the factor expansions and extremum laws.

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
        y_grid : Iterable[float], optional
            Distances from 0 at which to tabulate the densities.

        Returns
        -------
        WienerHopfResult

        """
        super().run(value=value, options=options, **kwargs)
        if kwargs.get("q") is None:
            raise OccnbMissingParameterError("q")
        q = float(kwargs["q"])
        model = self.model

        result = WienerHopfResult(
            notebooklet=self, description=self.metadata.description
        )
        result.q = q
        sup_fac = pos_factor(model, model.alpha, q)
        inf_fac = neg_factor(model, q)
        if "terms" in self.options:
            result.sup_terms = sup_fac.to_frame()
            result.inf_terms = inf_fac.to_frame()
        result.atoms = {
            "sup_atom": float(realize(sup_fac.atom, "C0")),
            "inf_atom": float(realize(inf_fac.atom, "D0")),
        }
        if "masses" in self.options:
            result.masses = {
                "sup_mass": float(realize(sup_fac.mass(), "sup mass")),
                "inf_mass": float(realize(inf_fac.mass(), "inf mass")),
            }
        _show_laws(result.atoms, result.masses)

        if "densities" in self.options or "plot" in self.options:
            y_grid = kwargs.get("y_grid")
            if y_grid is None:
                y_grid = _default_grid(sup_fac, inf_fac)
            y_grid = np.asarray(y_grid, dtype=float)
            result.densities = _density_frame(sup_fac, inf_fac, y_grid)
        if "plot" in self.options:
            result.density_plot = _plot_laws(result.densities)

        self._last_result = result
        return self._last_result


def _default_grid(
    sup_fac: WienerHopfFactor, inf_fac: WienerHopfFactor, n_points: int = 200
) -> np.ndarray:
    slowest = min(sup_fac.first_root.real, inf_fac.first_root.real)
    return np.linspace(0.0, 8.0 / slowest, n_points)


def _density_frame(
    sup_fac: WienerHopfFactor, inf_fac: WienerHopfFactor, y_grid: np.ndarray
) -> pd.DataFrame:
    y_abs = np.abs(y_grid)
    return pd.DataFrame(
        {
            "y": y_abs,
            "sup_density": realize(sup_fac.density(y_abs), "sup density"),
            "inf_density": realize(inf_fac.density(y_abs), "inf density"),
        }
    )


@set_text(docs=_CELL_DOCS, key="show_laws")
def _show_laws(atoms: Dict[str, float], masses: Optional[Dict[str, float]]):
    for name, val in atoms.items():
        nb_print(f"{name}: {val:.10g}")
    for name, val in (masses or {}).items():
        nb_print(f"{name}: {val:.10g}")


@set_text(docs=_CELL_DOCS, key="plot_laws")
def _plot_laws(densities: pd.DataFrame) -> LayoutDOM:
    return plot_grid(
        densities,
        "y",
        ["sup_density", "inf_density"],
        "Extremum densities (distance from 0)",
    )
