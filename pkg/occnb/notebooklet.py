# -------------------------------------------------------------------------
# Copyright (c) occnb developers. All rights reserved.
# Licensed under the MIT License. See License.txt in the project root for
# license information.
# --------------------------------------------------------------------------
"""
Notebooklet base class.

A notebooklet wraps one computation on a refracted model. Subclasses
implement `run`, which starts by calling the base `run` (or
`_begin_run`) to settle options and load the model, then fills in a
`NotebookletResult` subclass.
"""
import re
from abc import ABC, abstractmethod
from pathlib import Path
from typing import Any, Iterable, List, Optional, Sequence, Tuple

from IPython.display import HTML, display

from ._version import VERSION
from .common import OccnbError, OccnbMissingParameterError, nb_print
from .nb_metadata import NBMetadata
from .nblib.model import LevyModel, RefractedModel, validate
from .nblib.modelfile import load_model
from .notebooklet_result import NotebookletResult
from .options import set_opt

__version__ = VERSION
__author__ = "occnb developers"

__all__ = ["NBMetadata", "Notebooklet", "NotebookletResult", "resolve_options"]


def resolve_options(
    requested: Optional[Iterable[str]],
    defaults: Sequence[str],
    available: Sequence[str],
) -> List[str]:
    """
    Return the options for a run.

    Parameters
    ----------
    requested : Optional[Iterable[str]]
        None or empty for the defaults. Otherwise either plain option
        names (used as given) or names prefixed with "+"/"-" (added to
        or removed from the defaults).
    defaults : Sequence[str]
        Default options of the notebooklet.
    available : Sequence[str]
        Every option the notebooklet understands.

    Returns
    -------
    List[str]
        Options to use.

    Raises
    ------
    OccnbError
        Plain and prefixed options were mixed.

    """
    requested = list(requested or [])
    if not requested:
        return list(defaults)
    changes = {"+": set(), "-": set()}
    plain = []
    for opt in requested:
        if opt[:1] in changes:
            changes[opt[0]].add(opt[1:])
        else:
            plain.append(opt)
    if plain and (changes["+"] or changes["-"]):
        raise OccnbError(
            "Option list must be either a list of options to use",
            "or options to add/remove from the default set.",
            "You cannot mix these.",
        )
    unknown = (set(plain) | changes["+"] | changes["-"]) - set(available)
    if unknown:
        nb_print(f"Invalid options {sorted(unknown)} ignored.")
    if plain:
        return plain
    return sorted((set(defaults) | changes["+"]) - changes["-"])


def as_refracted_model(value: Any, **kwargs) -> RefractedModel:
    """
    Return a RefractedModel from a model, model file or Levy model.

    `alpha` and `b` in kwargs override the refraction parameters.
    """
    if value is None:
        raise OccnbMissingParameterError("value")
    if isinstance(value, (str, Path)):
        value = load_model(value)
    if isinstance(value, LevyModel):
        value = RefractedModel(base=value)
    if not isinstance(value, RefractedModel):
        raise TypeError(f"Cannot use {type(value).__name__} as a model.")
    return value.with_refraction(alpha=kwargs.get("alpha"), b=kwargs.get("b"))


class Notebooklet(ABC):
    """Base class for Notebooklets."""

    metadata: NBMetadata = NBMetadata(
        name="Notebooklet", description="Base class", default_options=[]
    )
    module_path = ""

    def __init__(self, **kwargs):
        """
        Initialize a new instance of the notebooklet class.

        Other Parameters
        ----------------
        silent : bool, optional
            Default silent setting for runs of this instance.

        """
        self.options: List[str] = self.default_options()
        self.model: Optional[RefractedModel] = None
        self._last_result: Any = None
        self._silent_default: Optional[bool] = kwargs.get("silent")
        self._silent_run: Optional[bool] = None
        set_opt("temp_silent", self.silent)
        _append_options_doc(type(self))

    @abstractmethod
    def run(
        self,
        value: Any = None,
        options: Optional[Iterable[str]] = None,
        **kwargs,
    ) -> NotebookletResult:
        """
        Run the notebooklet on a model.

        Parameters
        ----------
        value : Any, optional
            The model to process: a RefractedModel, a LevyModel
            (no refraction) or the path of a model file.
        options : Optional[Iterable[str]], optional
            Options for this run. None uses the defaults. Either give
            the full list of option names, or names prefixed with "+"
            or "-" to add to or remove from the defaults. The options
            of a notebooklet are listed at the end of this docstring
            and by `list_options()`.

        Other Parameters
        ----------------
        alpha : float
            Overrides the refraction drift of the model.
        b : float
            Overrides the refraction level of the model.
        silent : bool
            Suppress output for this run.

        Returns
        -------
        NotebookletResult
            Base result holding the notebooklet; subclasses return
            their own result class.

        Raises
        ------
        OccnbMissingParameterError
            If no model is supplied.
        OccnbValidationError
            If the model fails validation.

        """
        self._begin_run(value, options, **kwargs)
        return NotebookletResult(notebooklet=self)

    def _begin_run(
        self,
        value: Any,
        options: Optional[Iterable[str]],
        validate_model: bool = True,
        **kwargs,
    ) -> RefractedModel:
        """Apply the run's silent setting and options, then load the model."""
        self._silent_run = kwargs.get("silent")
        set_opt("temp_silent", self.silent)
        self.options = resolve_options(
            options, self.default_options(), self.all_options()
        )
        model = as_refracted_model(value, **kwargs)
        self.model = validate(model) if validate_model else model
        return self.model

    @property
    def silent(self) -> Optional[bool]:
        """Return the silent setting of the current run or of the instance."""
        if self._silent_run is not None:
            return self._silent_run
        return self._silent_default

    @silent.setter
    def silent(self, value: bool):
        """Set the default for silent running of this instance."""
        self._silent_default = value

    @property
    def result(self) -> Optional[NotebookletResult]:
        """Return the result of the most recent run (None before any run)."""
        return self._last_result

    @classmethod
    def name(cls) -> str:
        """Return name of the Notebooklet."""
        return cls.metadata.name

    @classmethod
    def description(cls) -> str:
        """Return description of the Notebooklet."""
        return cls.metadata.description

    @classmethod
    def all_options(cls) -> List[str]:
        """Return supported options for Notebooklet run function."""
        return [opt for opt, _ in cls.metadata.get_options("all")]

    @classmethod
    def default_options(cls) -> List[str]:
        """Return default options for Notebooklet run function."""
        return [opt for opt, _ in cls.metadata.get_options("default")]

    @classmethod
    def list_options(cls) -> str:
        """Return options document for Notebooklet run function."""
        return cls.metadata.options_doc

    @classmethod
    def keywords(cls) -> List[str]:
        """Return search keywords for Notebooklet."""
        return cls.metadata.keywords

    @classmethod
    def model_kinds(cls) -> List[str]:
        """
        Model kinds supported by the notebooklet.

        Returns
        -------
        List[str]
            E.g. "diffusion", "compound_poisson", "complex_jumps".

        """
        return cls.metadata.model_kinds

    @classmethod
    def get_settings(cls, print_settings=True) -> Optional[str]:
        """Print the metadata, or return it as text if `print_settings` is False."""
        if print_settings:
            print(cls.metadata)
            return None
        return str(cls.metadata)

    @classmethod
    def match_terms(cls, search_terms: str) -> Tuple[bool, int]:
        """
        Match `search_terms` against the metadata and class docstring.

        Parameters
        ----------
        search_terms : str
            Terms separated by spaces or commas. Each term is a
            case-insensitive regular expression.

        Returns
        -------
        Tuple[bool, int]
            True if all terms match, and the count of matched terms.

        """
        search_text = " ".join(cls.metadata.search_terms) + (cls.__doc__ or "")
        terms = re.split(r"[,\s]+", search_terms.strip())
        terms = [term for term in terms if term]
        match_count = sum(
            1 for term in terms if re.search(term, search_text, re.IGNORECASE)
        )
        return match_count == len(terms), match_count

    @classmethod
    def show_help(cls):
        """Display Documentation for class."""
        display(HTML(cls.get_help()))

    @classmethod
    def get_help(cls, fmt="html") -> str:
        """Return the class documentation as "html" or "md"."""
        return cls._get_doc(fmt=fmt)

    @classmethod
    def _get_doc(cls, fmt):
        """Return documentation (replaced when the class is discovered)."""
        del fmt
        return "No documentation available."


def _append_options_doc(nb_cls: type):
    """Add the options list to the docstring of `nb_cls.run` once."""
    run_doc = nb_cls.run.__doc__ or ""
    if "Default Options" in run_doc:
        return
    doc_lines = nb_cls.metadata.options_doc.split("\n")
    options_doc = "\n".join(f"    {line}" for line in doc_lines)
    nb_cls.run.__doc__ = run_doc + options_doc
