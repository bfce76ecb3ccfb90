# -------------------------------------------------------------------------
# Copyright (c) occnb developers. All rights reserved.
# Licensed under the MIT License. See License.txt in the project root for
# license information.
# --------------------------------------------------------------------------
"""
Model file reader and writer.

Model files are YAML documents::

    process:
      mu: 0.1
      sigma: 0.2
      lambda_plus: 1.0
      lambda_minus: 1.0
    jumps:
      up:
        - rate_re: 2.0
          rate_im: 0.0
          coeffs: [[1.0, 0.0]]
      down:
        - rate_re: 3.0
          coeffs: [1.0]
    refraction:
      alpha: 0.05
      b: 0.0

Coefficients are listed by Erlang order, either as numbers or as
[re, im] pairs. The canonical form written by `dump_model` always uses
pairs and re-reads to an identical model.
"""
from pathlib import Path
from typing import Any, Dict, List, Union

import numpy as np
import yaml

from ..common import OccnbMissingParameterError
from .._version import VERSION
from .model import JumpTerm, LevyModel, RationalJumpDensity, RefractedModel, Side

__version__ = VERSION
__author__ = "occnb developers"


def _real(
    section: Dict[str, Any], key: str, label: str, default: float = None
) -> float:
    if key not in section:
        if default is None:
            raise OccnbMissingParameterError(f"{label}.{key}")
        return default
    try:
        return float(str(section[key]))
    except ValueError as err:
        raise ValueError(f"{label}.{key} is not a number: {section[key]!r}") from err


def _coeff(value: Any, label: str) -> complex:
    if isinstance(value, (list, tuple)):
        if len(value) != 2:
            raise ValueError(f"{label}: complex coefficients are [re, im] pairs.")
        return complex(float(str(value[0])), float(str(value[1])))
    return complex(float(str(value)))


def _density(entries: Any, side: Side, label: str) -> RationalJumpDensity:
    if not entries:
        return RationalJumpDensity(side=side)
    terms = []
    for idx, entry in enumerate(entries):
        term_label = f"{label}[{idx}]"
        if "coeffs" not in entry:
            raise OccnbMissingParameterError(f"{term_label}.coeffs")
        rate = complex(
            _real(entry, "rate_re", term_label),
            _real(entry, "rate_im", term_label, 0.0),
        )
        coeffs = entry["coeffs"]
        if not isinstance(coeffs, (list, tuple)):
            coeffs = [coeffs]
        terms.append(
            JumpTerm(rate, [_coeff(val, f"{term_label}.coeffs") for val in coeffs])
        )
    return RationalJumpDensity(terms=tuple(terms), side=side)


def parse_model(data: Dict[str, Any]) -> RefractedModel:
    """
    Build a model from a parsed model document.

    Parameters
    ----------
    data : Dict[str, Any]
        Dictionary with sections process, jumps (optional) and
        refraction (optional, alpha and b default to 0).

    Returns
    -------
    RefractedModel
        Unvalidated model.

    Raises
    ------
    OccnbMissingParameterError
        If a required key is missing.
    ValueError
        If a value cannot be read as a number.

    """
    if not isinstance(data, dict) or "process" not in data:
        raise OccnbMissingParameterError("process")
    process = data["process"] or {}
    jumps = data.get("jumps") or {}
    refraction = data.get("refraction") or {}
    base = LevyModel(
        mu=_real(process, "mu", "process"),
        sigma=_real(process, "sigma", "process"),
        lambda_plus=_real(process, "lambda_plus", "process", 0.0),
        lambda_minus=_real(process, "lambda_minus", "process", 0.0),
        jumps_up=_density(jumps.get("up"), Side.POSITIVE, "jumps.up"),
        jumps_down=_density(jumps.get("down"), Side.NEGATIVE, "jumps.down"),
    )
    return RefractedModel(
        base=base,
        alpha=_real(refraction, "alpha", "refraction", 0.0),
        b=_real(refraction, "b", "refraction", 0.0),
    )


def load_model(path: Union[str, Path]) -> RefractedModel:
    """Read a model file."""
    with open(path, "r", encoding="utf-8") as model_file:
        return parse_model(yaml.safe_load(model_file))


def _density_dict(density: RationalJumpDensity) -> List[Dict[str, Any]]:
    return [
        {
            "rate_re": float(term.rate.real),
            "rate_im": float(term.rate.imag),
            "coeffs": [[float(coeff.real), float(coeff.imag)] for coeff in term.coeffs],
        }
        for term in density.terms
    ]


def model_to_dict(model: RefractedModel) -> Dict[str, Any]:
    """Return the canonical document of a model."""
    base = model.base
    return {
        "process": {
            "mu": base.mu,
            "sigma": base.sigma,
            "lambda_plus": base.lambda_plus,
            "lambda_minus": base.lambda_minus,
        },
        "jumps": {
            "up": _density_dict(base.jumps_up),
            "down": _density_dict(base.jumps_down),
        },
        "refraction": {"alpha": model.alpha, "b": model.b},
    }


def dump_model(model: RefractedModel, path: Union[str, Path] = None) -> str:
    """Return the canonical YAML text of a model, writing it to `path` if given."""
    text = yaml.safe_dump(
        model_to_dict(model), sort_keys=False, default_flow_style=None
    )
    if path is not None:
        Path(path).write_text(text, encoding="utf-8")
    return text


def parse_grid(text: str) -> np.ndarray:
    """
    Parse an inclusive linear grid "start:stop:count".

    A single number is a one-point grid.
    """
    parts = str(text).split(":")
    if len(parts) == 1:
        return np.array([float(parts[0])])
    if len(parts) != 3:
        raise ValueError(f"Grid {text!r} is not of the form start:stop:count.")
    start, stop, count = float(parts[0]), float(parts[1]), int(parts[2])
    if count < 1:
        raise ValueError(f"Grid {text!r} needs a positive count.")
    return np.linspace(start, stop, count)
