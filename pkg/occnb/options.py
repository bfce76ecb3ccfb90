# -------------------------------------------------------------------------
# Copyright (c) occnb developers. All rights reserved.
# Licensed under the MIT License. See License.txt in the project root for
# license information.
# --------------------------------------------------------------------------
"""
Global options for notebooklets and numerical tolerances.

Display options

- `verbose`: bool (True) - Show progress messages.
- `debug`: bool (False) - Turn on debug output.
- `silent`: bool (False) - Execute notebooklets with no output.

Numerical options

- `root_tol`: float (1e-9) - Root residual tolerance (scaled by 1+|q|).
- `cluster_tol`: float (1e-7) - Relative radius used to group repeated roots.
- `pole_tol`: float (1e-10) - Minimum distance of an argument from a pole.
- `density_tol`: float (1e-9) - Tolerated negative density in the screen.
- `density_grid`: int (2000) - Points used by the density screen.
- `contour_nodes`: int (64) - Trapezoid nodes for contour coefficients.
- `contour_scale`: float (0.3) - Contour radius as fraction of the gap to
  the nearest other singularity.
- `newton_steps`: int (2) - Newton polishing steps for simple roots.
- `imag_tol`: float (1e-8) - Relative imaginary residue accepted when a
  complex sum is reported as a real value.

Values are converted to the type of the default when set, so
``set_opt("contour_nodes", "128")`` stores 128.
"""
from typing import Any, Dict

import attr

from ._version import VERSION

__version__ = VERSION
__author__ = "occnb developers"


@attr.s(auto_attribs=True, frozen=True)
class _OptionDef:
    default: Any
    help: str

    def convert(self, value: Any) -> Any:
        """Return `value` as the type of the default."""
        if self.default is None:
            return value
        opt_type = type(self.default)
        if isinstance(value, opt_type) and isinstance(value, bool) == (
            opt_type is bool
        ):
            return value
        try:
            return opt_type(value)
        except (TypeError, ValueError) as err:
            raise TypeError(
                f"Option is of type {opt_type}.",
                f"{value} cannot be converted to that type.",
            ) from err


_OPTION_DEFS: Dict[str, _OptionDef] = {
    "verbose": _OptionDef(True, "Show progress messages."),
    "debug": _OptionDef(False, "Turn on debug output."),
    "silent": _OptionDef(False, "Execute notebooklets with no output"),
    # set by each notebooklet run, overrides "silent" while not None
    "temp_silent": _OptionDef(None, "Execute the current notebooklet with no output"),
    "root_tol": _OptionDef(1e-9, "Root residual tolerance, scaled by (1 + |q|)."),
    "cluster_tol": _OptionDef(1e-7, "Relative radius used to group repeated roots."),
    "pole_tol": _OptionDef(1e-10, "Minimum distance of an argument from a pole."),
    "density_tol": _OptionDef(1e-9, "Tolerated negative density value in the screen."),
    "density_grid": _OptionDef(2000, "Number of points used by the density screen."),
    "contour_nodes": _OptionDef(
        64, "Trapezoid nodes for contour coefficient extraction."
    ),
    "contour_scale": _OptionDef(0.3, "Contour radius as fraction of singularity gap."),
    "newton_steps": _OptionDef(2, "Newton polishing steps for simple roots."),
    "imag_tol": _OptionDef(
        1e-8, "Relative imaginary residue accepted for real results."
    ),
}

_CURRENT: Dict[str, Any] = {}


def reset():
    """Restore all options to their defaults."""
    _CURRENT.clear()
    _CURRENT.update({name: opt.default for name, opt in _OPTION_DEFS.items()})


reset()


def show():
    """Show help for options."""
    for name, opt in _OPTION_DEFS.items():
        print(f"{name} (default={opt.default}): {opt.help}")


def current():
    """Show current settings."""
    for name, value in _CURRENT.items():
        print(f"{name}: {value}")


def get_opt(option: str) -> Any:
    """
    Get the named option.

    Parameters
    ----------
    option : str
        Option name.

    Returns
    -------
    Any
        Option value. "silent" returns the per-run setting while one
        is active.

    Raises
    ------
    KeyError
        An invalid option name was supplied.

    """
    if option not in _CURRENT:
        raise KeyError(f"Unknown option {option}.")
    if option == "silent" and _CURRENT["temp_silent"] is not None:
        return _CURRENT["temp_silent"]
    return _CURRENT[option]


def set_opt(option: str, value: Any):
    """
    Set the named option.

    Parameters
    ----------
    option : str
        Option name.
    value : Any
        Option value.

    Raises
    ------
    KeyError
        An invalid option name was supplied.
    TypeError
        Option value was not the correct type.

    """
    try:
        opt_def = _OPTION_DEFS[option]
    except KeyError as err:
        raise KeyError(f"Unrecognized option {option}.") from err
    _CURRENT[option] = opt_def.convert(value)
