# -------------------------------------------------------------------------
# Copyright (c) occnb developers. All rights reserved.
# Licensed under the MIT License. See License.txt in the project root for
# license information.
# --------------------------------------------------------------------------
"""Root finder notebooklet."""
from typing import Any, Dict, Iterable, Optional

import numpy as np
import pandas as pd

from ... import nb_metadata
from ..._version import VERSION
from ...common import OccnbMissingParameterError, nb_print, set_text
from ...nblib.charexp import (
    RootSet,
    RootSide,
    expected_count,
    laplace_exponent,
    roots_beta,
    roots_gamma,
)
from ...notebooklet import NBMetadata, Notebooklet, NotebookletResult

__version__ = VERSION
__author__ = "occnb developers"


_CLS_METADATA: NBMetadata
_CELL_DOCS: Dict[str, Any]
_CLS_METADATA, _CELL_DOCS = nb_metadata.read_mod_metadata(__file__, __name__)


# pylint: disable=too-few-public-methods
class RootFinderResult(NotebookletResult):
    """
    Roots of the Wiener-Hopf equations.

    Attributes
    ----------
    q : float
        Discount rate.
    beta_roots : pd.DataFrame
        Roots of K(s) - alpha s = q with positive real part.
    gamma_roots : pd.DataFrame
        Negated roots of K(s) = q with negative real part.
    counts : dict
        Total multiplicities found and predicted for each set.
    exponent_table : pd.DataFrame
        K(s) - alpha s and K(s) on a real grid between -gamma_1 and beta_1.

    """

    def __init__(
        self,
        description: Optional[str] = None,
        notebooklet: Optional["Notebooklet"] = None,
    ):
        """Create new result instance."""
        super().__init__(description, notebooklet)
        self.q: Optional[float] = None
        self.beta_roots: Optional[pd.DataFrame] = None
        self.gamma_roots: Optional[pd.DataFrame] = None
        self.counts: Optional[Dict[str, int]] = None
        self.exponent_table: Optional[pd.DataFrame] = None
        self._beta_set: Optional[RootSet] = None
        self._gamma_set: Optional[RootSet] = None


class RootFinder(Notebooklet):
    """
    Solve the two Wiener-Hopf root equations at a discount rate q.

    The beta roots drive the law of the supremum of Y = X - alpha t and
    the gamma roots the law of the infimum of X.

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
    ) -> RootFinderResult:
        """
        Return the beta and gamma roots.

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

        Returns
        -------
        RootFinderResult

        Raises
        ------
        OccnbMissingParameterError
            If `q` is not supplied.
        RootCountMismatchError
            If a root set has the wrong total multiplicity.

        """
        super().run(value=value, options=options, **kwargs)
        if kwargs.get("q") is None:
            raise OccnbMissingParameterError("q")
        q = float(kwargs["q"])
        model = self.model

        result = RootFinderResult(
            notebooklet=self, description=self.metadata.description
        )
        result.q = q
        counts: Dict[str, int] = {}
        if "beta" in self.options:
            result._beta_set = roots_beta(model, model.alpha, q)
            result.beta_roots = root_frame(result._beta_set)
            counts["beta_found"] = result._beta_set.total_multiplicity
            counts["beta_expected"] = expected_count(
                model, model.alpha, RootSide.LOWER_BETA
            )
        if "gamma" in self.options:
            result._gamma_set = roots_gamma(model, q)
            result.gamma_roots = root_frame(result._gamma_set)
            counts["gamma_found"] = result._gamma_set.total_multiplicity
            counts["gamma_expected"] = expected_count(model, 0.0, RootSide.UPPER_GAMMA)
        result.counts = counts
        _show_counts(counts)
        if "exponent_table" in self.options:
            result.exponent_table = _exponent_table(model, q)

        self._last_result = result
        return self._last_result


def root_frame(roots: RootSet) -> pd.DataFrame:
    """Return a root set as a DataFrame."""
    residuals = list(roots.residuals) or [np.nan] * len(roots)
    return pd.DataFrame(
        [
            {
                "root_re": root.value.real,
                "root_im": root.value.imag,
                "multiplicity": root.multiplicity,
                "residual": resid,
            }
            for root, resid in zip(roots, residuals)
        ],
        columns=["root_re", "root_im", "multiplicity", "residual"],
    )


@set_text(docs=_CELL_DOCS, key="show_counts")
def _show_counts(counts: Dict[str, int]):
    for name, count in counts.items():
        nb_print(f"{name}: {count}")


def _exponent_table(model, q: float, n_points: int = 101) -> pd.DataFrame:
    beta_1 = roots_beta(model, model.alpha, q).first.real
    gamma_1 = roots_gamma(model, q).first.real
    poles = [rate.real for rate in model.base.active_up.rates] + [
        -rate.real for rate in model.base.active_down.rates
    ]
    upper = min([beta_1 * 1.2] + [pole for pole in poles if pole > 0])
    lower = max([-gamma_1 * 1.2] + [pole for pole in poles if pole < 0])
    s_grid = np.linspace(lower, upper, n_points + 2)[1:-1]
    k_vals = np.real(laplace_exponent(model, s_grid))
    return pd.DataFrame(
        {
            "s": s_grid,
            "K": k_vals,
            "K_minus_alpha_s": k_vals - model.alpha * s_grid,
        }
    )
