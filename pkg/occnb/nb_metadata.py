# -------------------------------------------------------------------------
# Copyright (c) occnb developers. All rights reserved.
# Licensed under the MIT License. See License.txt in the project root for
# license information.
# --------------------------------------------------------------------------
"""
Notebooklet metadata.

Each notebooklet module has a yaml file of the same name with two
sections: "metadata" (name, description, options, model kinds and
keywords) and "output" (the title and text of each displayed cell).
Options are listed either as plain names or as ``name: description``
mappings.
"""
from pathlib import Path
from typing import Any, Dict, Iterable, List, Optional, Set, Tuple

import attr
import yaml

from ._version import VERSION

__version__ = VERSION
__author__ = "occnb developers"

OptionItem = Tuple[str, Optional[str]]

_METADATA_SUFFIXES = (".yaml", ".yml")


def _option_items(options: Optional[Iterable[Any]]) -> List[OptionItem]:
    """Normalize yaml option entries to (name, description) pairs."""
    items: List[OptionItem] = []
    for opt in options or []:
        if isinstance(opt, dict):
            items.extend((str(name), desc) for name, desc in opt.items())
        elif isinstance(opt, (list, tuple)):
            items.append((str(opt[0]), opt[1] if len(opt) > 1 else None))
        else:
            items.append((str(opt), None))
    return items


def _options_section(title: str, items: List[OptionItem]) -> List[str]:
    lines = ["", f"    {title}", f"    {'-' * len(title)}"]
    lines.extend(f"    - {name}: {desc}" for name, desc in items)
    if not items:
        lines.append("    None")
    return lines


@attr.s(auto_attribs=True)
class NBMetadata:
    """Notebooklet metadata class."""

    name: str = "Unnamed"
    mod_name: str = ""
    description: str = ""
    default_options: List[OptionItem] = attr.ib(factory=list, converter=_option_items)
    other_options: List[OptionItem] = attr.ib(factory=list, converter=_option_items)
    model_kinds: List[str] = attr.ib(factory=list)
    keywords: List[str] = attr.ib(factory=list)

    def __str__(self):
        """Return string representation of object."""
        return "\n".join(f"{name}: {val}" for name, val in attr.asdict(self).items())

    @property
    def search_terms(self) -> Set[str]:
        """Return name, model kinds, keywords and option names for searching."""
        terms = {self.name}
        terms.update(
            term.casefold()
            for term in (*self.model_kinds, *self.keywords, *self.all_options)
        )
        return terms

    @property
    def all_options(self) -> List[str]:
        """Return sorted names of default and other options."""
        return sorted(name for name, _ in self.get_options("all"))

    def get_options(self, option_set: str = "all") -> List[OptionItem]:
        """
        Return list of options and descriptions.

        Parameters
        ----------
        option_set : str, optional
            "all" (default), "default" or "other".

        Returns
        -------
        List[Tuple[str, Optional[str]]]
            (option name, description) pairs. Unknown `option_set`
            values give an empty list.

        """
        subset = option_set.casefold()
        if subset == "all":
            return [*self.default_options, *self.other_options]
        if subset == "default":
            return list(self.default_options)
        if subset == "other":
            return list(self.other_options)
        return []

    @property
    def options_doc(self) -> str:
        """Return list of options and documentation."""
        lines = _options_section("Default Options", self.default_options)
        lines.extend(_options_section("Other Options", self.other_options))
        return "\n".join([*lines, "", ""])


def read_mod_metadata(mod_path: str, module_name) -> Tuple[NBMetadata, Dict[str, Any]]:
    """
    Read notebooklet metadata from yaml file.

    Parameters
    ----------
    mod_path : str
        Path of the notebooklet module (.py)
    module_name : str
        The full module name.

    Returns
    -------
    Tuple[NBMetadata, Dict[str, Any]]
        The metadata and the "output" cell documents. Defaults are
        returned if the module has no yaml file.

    """
    md_dict = _read_metadata_file(Path(mod_path))
    if not md_dict:
        return NBMetadata(), {}
    metadata_vals = {**md_dict.get("metadata", {}), "mod_name": module_name}
    return NBMetadata(**metadata_vals), md_dict.get("output") or {}


def _read_metadata_file(mod_path: Path) -> Optional[Dict[str, Any]]:
    for suffix in _METADATA_SUFFIXES:
        md_path = mod_path.with_suffix(suffix)
        if md_path.is_file():
            with open(md_path, "r", encoding="utf-8") as md_file:
                return yaml.safe_load(md_file)
    return None


def update_class_doc(cls_doc: str, cls_metadata: NBMetadata):
    """Append the options documentation to the `cls_doc`."""
    return (cls_doc or "") + cls_metadata.options_doc
