# -------------------------------------------------------------------------
# Copyright (c) occnb developers. All rights reserved.
# Licensed under the MIT License. See License.txt in the project root for
# license information.
# --------------------------------------------------------------------------
"""Notebooklet Result base classes."""
import inspect
import re
from enum import Enum
from typing import Any, Dict, Iterator, List, Optional, Tuple

import attr
import numpy as np
import pandas as pd
from bokeh.models import LayoutDOM

from ._version import VERSION
from .common import show_bokeh

__version__ = VERSION
__author__ = "occnb developers"

_ATTRIBUTES_HEADER = re.compile(r"^Attributes\n-+\n", re.MULTILINE)
_NOTEBOOKLET_DOC = ("Notebooklet", "The notebooklet instance that created this result.")


def jsonable(obj: Any) -> Any:
    """Convert numbers, arrays and attrs objects to JSON-friendly values."""
    if isinstance(obj, dict):
        return {str(key): jsonable(val) for key, val in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonable(val) for val in obj]
    if isinstance(obj, np.ndarray):
        return [jsonable(val) for val in obj.tolist()]
    if isinstance(obj, (complex, np.complexfloating)):
        return {"re": float(obj.real), "im": float(obj.imag)}
    if isinstance(obj, np.generic):
        return obj.item()
    if attr.has(type(obj)):
        return jsonable(attr.asdict(obj, recurse=False))
    if isinstance(obj, Enum):
        return obj.value
    return obj


def attribute_docs(doc: Optional[str]) -> Dict[str, Tuple[str, str]]:
    """
    Parse the numpy-style "Attributes" section of a docstring.

    Returns
    -------
    Dict[str, Tuple[str, str]]
        Attribute name mapped to (type, description). Attributes listed
        without a type get "object".

    """
    text = inspect.cleandoc(doc or "")
    header = _ATTRIBUTES_HEADER.search(text)
    if not header:
        return {}
    lines = text[header.end() :].splitlines()
    docs: Dict[str, Tuple[str, str]] = {}
    name = ""
    for idx, line in enumerate(lines):
        if not line.strip():
            continue
        if idx + 1 < len(lines) and set(lines[idx + 1].strip()) == {"-"}:
            break
        if line.startswith((" ", "\t")):
            if name:
                attr_type, desc = docs[name]
                docs[name] = attr_type, f"{desc} {line.strip()}".lstrip()
            continue
        name, _, attr_type = (part.strip() for part in line.partition(":"))
        docs[name] = attr_type or "object", ""
    return docs


def _text_summary(obj: Any) -> str:
    if isinstance(obj, pd.DataFrame):
        return f"DataFrame: {len(obj)} rows"
    if isinstance(obj, LayoutDOM):
        return "Bokeh plot"
    return str(obj)


# pylint: disable=protected-access
def _html_summary(obj: Any) -> str:
    if isinstance(obj, pd.DataFrame):
        suffix = f"<br>(showing top 5 of {len(obj)} rows)" if len(obj) > 5 else ""
        return obj.head(5)._repr_html_() + suffix
    if isinstance(obj, LayoutDOM):
        show_bokeh(obj)
        return ""
    if hasattr(obj, "_repr_html_"):
        return obj._repr_html_()
    return str(obj).replace("\n", "<br>").replace(" ", "&nbsp;")


# pylint: enable=protected-access


# pylint: disable=too-few-public-methods
class NotebookletResult:
    """Base result class."""

    _TITLE_STYLE = "color:black; background-color:lightgray; padding:5px;"

    def __init__(
        self,
        description: Optional[str] = None,
        notebooklet: Optional[Any] = None,  # type: ignore
    ):
        """
        Create new Notebooklet result instance.

        Parameters
        ----------
        description : Optional[str], optional
            Result description, by default None
        notebooklet : Optional[Notebooklet], optional
            Originating notebooklet, by default None

        """
        self.description = description or self.__class__.__qualname__
        self.notebooklet = notebooklet
        self._attribute_desc: Dict[str, Tuple[str, str]] = {
            "notebooklet": _NOTEBOOKLET_DOC,
            **attribute_docs(self.__doc__),
        }

    def _items(self) -> Iterator[Tuple[str, Any]]:
        """Yield public attributes that have been set."""
        for name, val in vars(self).items():
            if not name.startswith("_") and val is not None:
                yield name, val

    def __str__(self):
        """Return string representation of object."""
        return "\n".join(f"{name}: {_text_summary(val)}" for name, val in self._items())

    def _repr_html_(self):
        """Display HTML represention for notebook."""
        sections = []
        for name, val in self._items():
            attr_type, attr_text = self._attribute_desc.get(name, ("", ""))
            type_note = f"&nbsp;Type: [{attr_type}]" if attr_type else ""
            sections.append(
                f"<h3 style='{self._TITLE_STYLE}'>{name}</h3>"
                f"{attr_text}{type_note}<br>{_html_summary(val)}<hr>"
            )
        return "".join(sections)

    def __getattr__(self, name):
        """Proxy attributes of the notebooklet member."""
        if name.startswith("_"):
            raise AttributeError(name)
        if self.notebooklet:
            return getattr(self.notebooklet, name)
        raise AttributeError(f"{self.__class__} has no attribute '{name}'")

    @property
    def properties(self) -> List[str]:
        """Return names of the attributes that have been set."""
        return [name for name, _ in self._items()]

    def prop_doc(self, name) -> Tuple[str, str]:
        """Return (type, description) documented for attribute `name`."""
        try:
            return self._attribute_desc[name]
        except KeyError as err:
            raise KeyError(f"Unknown property {name}.") from err

    def to_dict(self) -> Dict[str, Any]:
        """
        Return the results as a JSON-serializable dictionary.

        DataFrames are exported as lists of records; plots and the
        originating notebooklet are skipped.
        """
        output: Dict[str, Any] = {}
        for name, val in self._items():
            if name == "notebooklet" or isinstance(val, LayoutDOM):
                continue
            if isinstance(val, pd.DataFrame):
                val = val.to_dict(orient="records")
            output[name] = jsonable(val)
        return output
