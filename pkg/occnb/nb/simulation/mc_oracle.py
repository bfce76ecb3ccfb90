# -------------------------------------------------------------------------
# Copyright (c) occnb developers. All rights reserved.
# Licensed under the MIT License. See License.txt in the project root for
# license information.
# --------------------------------------------------------------------------
"""
Monte Carlo oracle notebooklet.

Simulates the refracted process and compares sample estimates with
the closed-form values.
"""
from typing import Any, Callable, Dict, Iterable, List, Optional

import attr
import numpy as np
import pandas as pd

from ... import nb_metadata
from ..._version import VERSION
from ...common import OccnbMissingParameterError, nb_markdown, nb_warn, set_text
from ...nblib.firstpassage import exit_up_law
from ...nblib.inversion import InversionConfig, invert_occupation
from ...nblib.montecarlo import (
    SimConfig,
    SimEstimate,
    estimate_distribution,
    estimate_exit,
    estimate_expectation,
    estimate_fixed_horizon,
    estimate_V,
)
from ...nblib.occupation import (
    distribution_function,
    occupation_expectation,
    occupation_laplace,
)
from ...nblib.wienerhopf import realize
from ...notebooklet import NBMetadata, Notebooklet, NotebookletResult

__version__ = VERSION
__author__ = "occnb developers"


_CLS_METADATA: NBMetadata
_CELL_DOCS: Dict[str, Any]
_CLS_METADATA, _CELL_DOCS = nb_metadata.read_mod_metadata(__file__, __name__)

_ESTIMATE_COLS = ["quantity", "mc_mean", "std_error", "closed_form", "z_score"]


# pylint: disable=too-few-public-methods
class MCOracleResult(NotebookletResult):
    """
    Monte Carlo comparison results.

    Attributes
    ----------
    config : dict
        Simulation settings used.
    estimates : pd.DataFrame
        Quantity, sample mean, standard error, closed form and z-score.
    max_abs_z : float
        Largest absolute z-score.

    """

    def __init__(
        self,
        description: Optional[str] = None,
        notebooklet: Optional["Notebooklet"] = None,
    ):
        """Create new result instance."""
        super().__init__(description, notebooklet)
        self.config: Optional[Dict[str, Any]] = None
        self.estimates: Optional[pd.DataFrame] = None
        self.max_abs_z: Optional[float] = None


class MCOracle(Notebooklet):
    """
    Check closed-form occupation quantities against simulation.

    Jump densities must be real mixtures of Erlang densities with
    nonnegative weights.

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
    ) -> MCOracleResult:
        """
        Return sample estimates next to the closed-form values.

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
        q : float
            Discount rate of the exponential horizon (required).
        p : float, optional
            Occupation penalty for the `laplace` option, by default 1.
        horizon : float, optional
            Fixed time T for the `fixed_horizon` option, by default 1.
        level : float, optional
            Passage level above the start for the `exit` option,
            by default 0.5.
        n_paths, dt, seed : optional
            Simulation settings, see `SimConfig`.

        Returns
        -------
        MCOracleResult

        Raises
        ------
        UnsampleableDensityError
            If a jump density cannot be sampled.

        """
        super().run(value=value, options=options, **kwargs)
        for param in ("x", "q"):
            if kwargs.get(param) is None:
                raise OccnbMissingParameterError(param)
        x_val = float(kwargs["x"])
        q_val = float(kwargs["q"])
        sim_args = {
            name: kwargs[name] for name in ("n_paths", "dt", "seed") if kwargs.get(name)
        }
        cfg = SimConfig(q=q_val, **sim_args)
        model = self.model
        alpha, level_b = model.alpha, model.b

        result = MCOracleResult(notebooklet=self, description=self.metadata.description)
        result.config = attr.asdict(cfg)

        checks: Dict[str, Callable[[], Dict[str, Any]]] = {}
        if "laplace" in self.options:
            p_val = float(kwargs.get("p", 1.0))
            checks["laplace"] = lambda: _row(
                f"V(p={p_val:g})",
                estimate_V(model, alpha, level_b, x_val, p_val, q_val, cfg),
                occupation_laplace(model, alpha, level_b, p_val, q_val)(x_val),
            )
        if "expectation" in self.options:
            checks["expectation"] = lambda: _row(
                "expectation",
                estimate_expectation(model, alpha, level_b, x_val, q_val, cfg),
                occupation_expectation(model, alpha, level_b, q_val)(x_val),
            )
        if "distribution" in self.options:
            checks["distribution"] = lambda: _row(
                "distribution",
                estimate_distribution(model, alpha, level_b, x_val, q_val, cfg),
                distribution_function(model, alpha, level_b, q_val)(x_val),
            )
        if "fixed_horizon" in self.options:
            horizon = float(kwargs.get("horizon", 1.0))
            checks["fixed_horizon"] = lambda: _row(
                f"fixed(T={horizon:g})",
                estimate_fixed_horizon(model, alpha, level_b, x_val, horizon, cfg),
                invert_occupation(
                    model, alpha, level_b, x_val, InversionConfig(t_grid=(horizon,))
                ).values[0],
            )
        if "exit" in self.options:
            level = float(kwargs.get("level", 0.5))
            checks["exit"] = lambda: _row(
                f"exit_up({level:g})",
                estimate_exit(model, alpha, q_val, level, cfg=cfg),
                realize(exit_up_law(model, alpha, q_val, level).discounted_mass()),
            )

        rows: List[Dict[str, Any]] = [check() for check in checks.values()]
        result.estimates = pd.DataFrame(rows, columns=_ESTIMATE_COLS)
        result.max_abs_z = (
            float(result.estimates["z_score"].abs().max()) if rows else None
        )
        _show_estimates(result.estimates)

        self._last_result = result
        return self._last_result


def _row(quantity: str, estimate: SimEstimate, closed_form) -> Dict[str, Any]:
    closed = float(closed_form)
    if estimate.std_error > 0:
        z_score = (estimate.mean - closed) / estimate.std_error
    else:
        z_score = 0.0 if np.isclose(estimate.mean, closed) else np.inf
    return {
        "quantity": quantity,
        "mc_mean": estimate.mean,
        "std_error": estimate.std_error,
        "closed_form": closed,
        "z_score": z_score,
    }


@set_text(docs=_CELL_DOCS, key="show_estimates")
def _show_estimates(estimates: pd.DataFrame):
    for row in estimates.itertuples():
        nb_markdown(
            f"**{row.quantity}**: MC {row.mc_mean:.6g} +/- {row.std_error:.2g},"
            f" closed form {row.closed_form:.6g} (z = {row.z_score:.2f})"
        )
        if abs(row.z_score) > 4:
            nb_warn(f"{row.quantity} is more than 4 standard errors away.")
