# -------------------------------------------------------------------------
# Copyright (c) occnb developers. All rights reserved.
# Licensed under the MIT License. See License.txt in the project root for
# license information.
# --------------------------------------------------------------------------
"""
Shared notebooklet helpers and the occnb exception hierarchy.

Output helpers honor the global "silent" and "verbose" options and fall
back to plain printing outside IPython.
"""
import functools
from typing import Any, Dict, Iterator, List, Optional, Tuple

import bokeh.io
from bokeh.models import Span
from bokeh.palettes import Category10
from bokeh.plotting import figure
from IPython import get_ipython
from IPython.display import HTML, Markdown, display
from markdown import markdown

from ._version import VERSION
from .options import get_opt

__version__ = VERSION
__author__ = "occnb developers"


_IP_AVAILABLE = get_ipython() is not None
_CELL_KEYS = ("title", "text", "doc", "hd_level", "md")


class NBContainer:
    """Tree of notebooklet classes, one attribute per class or sub-folder."""

    def _children(self) -> Iterator[Tuple[str, Any]]:
        return iter(vars(self).items())

    def __len__(self):
        """Return number of direct children."""
        return len(vars(self))

    def __iter__(self):
        """Return iterator over (name, child) pairs."""
        return self._children()

    def __repr__(self):
        """Return the class names, with sub-folders in brackets."""
        return ", ".join(
            f"{name} [{child!r}]" if isinstance(child, NBContainer) else repr(child)
            for name, child in self._children()
        )

    def __str__(self):
        """Return an indented outline of the tree."""
        return "".join(f"{line}\n" for line in self._outline())

    def _outline(self, indent: str = "") -> Iterator[str]:
        for name, child in self._children():
            if isinstance(child, NBContainer):
                yield f"{indent}{name}"
                yield from child._outline(indent + "  ")
            else:
                yield f"{indent}{child.__name__} (Notebooklet)"

    def iter_classes(self) -> Iterator[Tuple[str, Any]]:
        """Yield (name, class) for every notebooklet in the tree."""
        for name, child in self._children():
            if isinstance(child, NBContainer):
                yield from child.iter_classes()
            else:
                yield name, child


def _quiet() -> bool:
    return bool(get_opt("silent"))


def nb_print(*args, **kwargs):
    """Print progress output when "verbose" is set and "silent" is not."""
    if get_opt("verbose") and not _quiet():
        print(*args, **kwargs)


def nb_debug(*args):
    """Print debug args."""
    if get_opt("debug"):
        print("--".join(str(arg) for arg in args))


def nb_display(*args, **kwargs):
    """Ipython display function wrapper."""
    if not _quiet():
        display(*args, **kwargs)


def nb_markdown(*args, **kwargs):
    """Display markdown text (plain print outside IPython)."""
    if not _IP_AVAILABLE:
        nb_print(*args)
        return
    nb_display(Markdown(" ".join(str(arg) for arg in args)), **kwargs)


def nb_warn(*args, **kwargs):
    """Display a warning in orange (prefixed print outside IPython)."""
    if not _IP_AVAILABLE:
        nb_print("WARNING:", *args)
        return
    mssg = " ".join(str(arg) for arg in args)
    nb_display(HTML(f"<p style='color: orange'>{mssg}</p>"), **kwargs)


def _show_cell(cell: Dict[str, Any]):
    """Display the heading, text and extra sections of a cell document."""
    level = max(min(int(cell.get("hd_level", 2)), 4), 1)
    if cell.get("title"):
        nb_display(HTML(f"<h{level}>{cell['title']}</h{level}>"))
    text = cell.get("text")
    if text:
        if cell.get("md"):
            nb_display(HTML(markdown(text=text)))
        else:
            nb_display(HTML(text.replace("\n", "<br>")))
    for section, content in cell.items():
        if section in _CELL_KEYS:
            continue
        content_html = str(content).replace("\n", "<br>")
        nb_display(HTML(f"<br><b>{section}</b><br>{content_html}"))


def set_text(docs: Optional[Dict[str, Any]] = None, key: Optional[str] = None, **cell):
    """
    Decorate a function to show a titled text cell before it runs.

    Parameters
    ----------
    docs : Optional[Dict[str, Any]]
        Cell documents, normally the "output" section of the
        notebooklet's yaml file.
    key : Optional[str]
        Entry of `docs` to show.

    Other Parameters
    ----------------
    title, text, hd_level, md :
        Defaults for the cell, overridden by the `docs` entry.
        `md` renders the text as markdown; `hd_level` (1-4) sets the
        heading size.

    Returns
    -------
    Callable[*args, **kwargs]
        Wrapped function

    Notes
    -----
    Nothing is shown when the "silent" option is set or the wrapped
    call is made with ``silent=True``.

    """
    cell_doc = {**cell, **((docs or {}).get(key) or {})}

    def text_wrapper(func):
        @functools.wraps(func)
        def print_text(*args, **kwargs):
            if not (kwargs.get("silent") or _quiet()):
                _show_cell(cell_doc)
            return func(*args, **kwargs)

        return print_text

    return text_wrapper


def show_bokeh(plot):
    """Display bokeh plot, resetting output."""
    try:
        bokeh.io.reset_output()
    except RuntimeError:
        pass
    bokeh.io.output_notebook(hide_banner=True)
    bokeh.io.show(plot)


class OccnbError(Exception):
    """Generic exception class for Notebooklets."""


class OccnbMissingParameterError(OccnbError):
    """Parameter Error."""

    def __init__(self, *args):
        """
        Exception for missing parameter.

        Parameters
        ----------
        args : str
            First arg is the name or names of the parameters.

        """
        if args:
            self.mssg = f"Required parameter(s) '{args[0]}' not supplied."
            args = (self.mssg, *args[1:])
        super().__init__(*args)


class OccnbValidationError(OccnbError):
    """Model failed validation; `violations` holds every failed check."""

    def __init__(self, violations: List[Any]):
        """
        Exception for an invalid model.

        Parameters
        ----------
        violations : List[Violation]
            All violations found by the validator.

        """
        self.violations = list(violations)
        mssg = "; ".join(str(viol) for viol in self.violations)
        super().__init__(f"Model validation failed: {mssg}")


class OccnbNumericalError(OccnbError):
    """Base class for numerical failures."""


class PoleEvaluationError(OccnbNumericalError):
    """Argument is too close to a pole of the rational part."""


class RootCountMismatchError(OccnbNumericalError):
    """Number of roots found differs from the predicted count."""


class NonConvergenceError(OccnbNumericalError):
    """Root residual exceeded tolerance after polishing."""


class DegenerateExpansionError(OccnbNumericalError):
    """Coefficient extraction was numerically singular."""


class OutsideAnalyticRegionError(OccnbNumericalError):
    """Transform evaluated outside its region of analyticity."""


class DegenerateArgumentsError(OccnbNumericalError):
    """Arguments sit on a removable singularity."""


class ResidueExtractionError(DegenerateExpansionError):
    """Laurent coefficients at a pole could not be extracted from the contour."""


class OutsideStripError(OccnbNumericalError):
    """Transform argument lies outside the strip of convergence."""


class InversionUnstableError(OccnbNumericalError):
    """Numerical Laplace inversion is oscillating."""


class ComplexRootTrackingError(OccnbNumericalError):
    """Roots could not be followed continuously along a complex path."""


class RegimeContractViolation(OccnbError):
    """Computed quantities contradict the regime table (internal error)."""


class UnsampleableDensityError(OccnbError):
    """Jump density is not a nonnegative real mixture and cannot be sampled."""


def plot_grid(
    data, x_col: str, y_cols: List[str], title: str, level: Optional[float] = None
):
    """
    Return a bokeh line plot of grid columns.

    Parameters
    ----------
    data : pd.DataFrame
        Grid values.
    x_col : str
        Column for the horizontal axis.
    y_cols : List[str]
        Columns to draw as lines.
    title : str
        Plot title.
    level : Optional[float], optional
        If given, a vertical marker is drawn at this x value.

    """
    plot = figure(title=title, width=700, height=350, x_axis_label=x_col)
    for idx, col in enumerate(y_cols):
        plot.line(
            data[x_col], data[col], legend_label=col, color=Category10[10][idx % 10]
        )
    if level is not None:
        plot.add_layout(Span(location=level, dimension="height", line_dash="dashed"))
    plot.legend.location = "top_left"
    return plot
