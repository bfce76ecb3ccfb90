# -------------------------------------------------------------------------
# Copyright (c) occnb developers. All rights reserved.
# Licensed under the MIT License. See License.txt in the project root for
# license information.
# --------------------------------------------------------------------------
"""
Identity check notebooklet.

Compares the transform in the starting point of the distribution at
e(q) with the product of the two Wiener-Hopf factors.
"""
from typing import Any, Dict, Iterable, List, Optional

import numpy as np
import pandas as pd

from ... import nb_metadata
from ..._version import VERSION
from ...common import OccnbMissingParameterError, nb_print, set_text
from ...nblib.occupation import (
    distribution_function,
    identity_lhs,
    identity_rhs,
    level_transform_rhs,
    occupation_laplace,
    wiener_hopf_identity,
)
from ...nblib.wienerhopf import neg_factor, pos_factor
from ...notebooklet import NBMetadata, Notebooklet, NotebookletResult

__version__ = VERSION
__author__ = "occnb developers"


_CLS_METADATA: NBMetadata
_CELL_DOCS: Dict[str, Any]
_CLS_METADATA, _CELL_DOCS = nb_metadata.read_mod_metadata(__file__, __name__)

_DIFF_COLS = ["phi_re", "phi_im", "lhs_re", "lhs_im", "rhs_re", "rhs_im", "abs_diff"]


# pylint: disable=too-few-public-methods
class IdentityCheckResult(NotebookletResult):
    """
    Identity check results.

    Attributes
    ----------
    q : float
        Discount rate.
    identity : pd.DataFrame
        Real and imaginary parts of phi and of both sides, and their
        absolute difference, for each phi of the grid.
    max_abs_diff : float
        Largest difference over the grid.
    wiener_hopf : pd.DataFrame
        Factor product against q / (q - K(phi)) at alpha = 0.
    level_transform : pd.DataFrame
        Level transform of V - 1 from its terms against the closed form.

    """

    def __init__(
        self,
        description: Optional[str] = None,
        notebooklet: Optional["Notebooklet"] = None,
    ):
        """Create new result instance."""
        super().__init__(description, notebooklet)
        self.q: Optional[float] = None
        self.identity: Optional[pd.DataFrame] = None
        self.max_abs_diff: Optional[float] = None
        self.wiener_hopf: Optional[pd.DataFrame] = None
        self.level_transform: Optional[pd.DataFrame] = None


class IdentityCheck(Notebooklet):
    """
    Check the factor identity for the distribution at e(q).

    For phi in the strip -gamma_1 < phi < beta_1,

        -integral exp(-phi (x - b)) d_x P_x(U(e_q) < b)
            = E[exp(phi sup Y)] E[exp(phi inf X)]

    where the left side includes the jump at b.

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
    ) -> IdentityCheckResult:
        """
        Return both sides of the identity on a phi grid.

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
        phi_grid : Iterable[complex], optional
            Transform arguments, real or complex. By default 9 real
            points spread over the central part of the strip.
        p : float, optional
            Occupation penalty for the `level_transform` option,
            by default 1.

        Returns
        -------
        IdentityCheckResult

        Raises
        ------
        OutsideStripError
            If a grid point is outside the strip.

        """
        super().run(value=value, options=options, **kwargs)
        if kwargs.get("q") is None:
            raise OccnbMissingParameterError("q")
        q_val = float(kwargs["q"])
        model = self.model

        result = IdentityCheckResult(
            notebooklet=self, description=self.metadata.description
        )
        result.q = q_val
        phi_grid = kwargs.get("phi_grid")
        if phi_grid is None:
            lo, hi = distribution_function(model, model.alpha, model.b, q_val).strip()
            phi_grid = _strip_grid(lo, hi)
        phi_grid = _as_grid(phi_grid)

        rows = []
        for phi in phi_grid:
            lhs = identity_lhs(model, model.alpha, model.b, q_val, phi)
            rhs = identity_rhs(model, model.alpha, q_val, phi)
            rows.append(_diff_row(phi, lhs, rhs))
        result.identity = _diff_frame(rows)
        result.max_abs_diff = float(result.identity["abs_diff"].max())
        _show_max_diff(result.max_abs_diff)

        if "wiener_hopf" in self.options:
            result.wiener_hopf = _wh_frame(model, q_val, phi_grid)
        if "level_transform" in self.options:
            p_val = float(kwargs.get("p", 1.0))
            result.level_transform = _level_frame(model, p_val, q_val, phi_grid)

        self._last_result = result
        return self._last_result


def _strip_grid(lo: float, hi: float, n_points: int = 9) -> np.ndarray:
    lo = max(lo, -10.0)
    hi = min(hi, 10.0)
    return np.linspace(0.8 * lo, 0.8 * hi, n_points)


def _as_grid(phi_grid: Iterable) -> np.ndarray:
    grid = np.asarray(list(phi_grid))
    if np.iscomplexobj(grid):
        return grid.astype(complex)
    return grid.astype(float)


def _diff_frame(rows: List[Dict[str, float]]) -> pd.DataFrame:
    return pd.DataFrame(rows, columns=_DIFF_COLS)


def _diff_row(phi: complex, lhs: complex, rhs: complex) -> Dict[str, float]:
    phi, lhs, rhs = complex(phi), complex(lhs), complex(rhs)
    return {
        "phi_re": phi.real,
        "phi_im": phi.imag,
        "lhs_re": lhs.real,
        "lhs_im": lhs.imag,
        "rhs_re": rhs.real,
        "rhs_im": rhs.imag,
        "abs_diff": abs(lhs - rhs),
    }


@set_text(docs=_CELL_DOCS, key="show_max_diff")
def _show_max_diff(max_diff: float):
    nb_print(f"Largest difference over the grid: {max_diff:.3e}")


def _wh_frame(model, q_val: float, phi_grid: np.ndarray) -> pd.DataFrame:
    # beta_1 shrinks as alpha goes to 0
    beta_1 = pos_factor(model.base, 0.0, q_val).first_root.real
    gamma_1 = neg_factor(model.base, q_val).first_root.real
    return _diff_frame(
        [
            _diff_row(
                phi,
                identity_rhs(model.base, 0.0, q_val, phi),
                wiener_hopf_identity(model.base, q_val, phi),
            )
            for phi in phi_grid
            if -gamma_1 < np.real(phi) < beta_1
        ]
    )


def _level_frame(
    model, p_val: float, q_val: float, phi_grid: np.ndarray
) -> pd.DataFrame:
    v_fn = occupation_laplace(model, model.alpha, model.b, p_val, q_val)
    lo, hi = v_fn.strip()
    return _diff_frame(
        [
            _diff_row(
                phi,
                v_fn.level_transform(phi),
                level_transform_rhs(model, model.alpha, p_val, q_val, phi),
            )
            for phi in phi_grid
            if lo < np.real(phi) < min(hi, 0.0)
        ]
    )
