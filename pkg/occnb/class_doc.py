# -------------------------------------------------------------------------
# Copyright (c) occnb developers. All rights reserved.
# Licensed under the MIT License. See License.txt in the project root for
# license information.
# --------------------------------------------------------------------------
"""Functions to create documentation from notebooklets classes."""
import html
import inspect
import re
from typing import Any, List

from markdown import markdown

from ._version import VERSION
from .nb_metadata import read_mod_metadata
from .notebooklet import Notebooklet
from .notebooklet_result import NotebookletResult, attribute_docs

__version__ = VERSION
__author__ = "occnb developers"

_MD_HEADING = re.compile(r"^#{2,3} ")


def get_class_doc(doc_cls: type, fmt: str = "html") -> str:
    """
    Create HTML documentation for the notebooklet class.

    Parameters
    ----------
    doc_cls : type
        The class to document
    fmt : str
        Format = "html" or "md", by default "html"

    Returns
    -------
    str
        HTML documentation for the class

    Raises
    ------
    TypeError
        If the class is not a subclass of Notebooklet.

    """
    if not (inspect.isclass(doc_cls) and issubclass(doc_cls, Notebooklet)):
        raise TypeError("doc_cls must be a type of Notebooklet")
    md_text = _get_main_class_doc_md(doc_cls)
    return markdown(md_text) if fmt == "html" else md_text


def _get_main_class_doc_md(doc_cls) -> str:
    """Return Markdown format of class documentation."""
    doc_lines = [f"# Notebooklet Class - {doc_cls.__name__}\n"]
    doc_lines.extend(_format_numpy_doc(inspect.getdoc(doc_cls)))
    if doc_cls.metadata.model_kinds:
        doc_lines.append(
            "**Model kinds:** " + ", ".join(doc_cls.metadata.model_kinds) + "\n"
        )
    doc_lines.append("\n---\n")
    doc_lines.append("# Display Sections")
    doc_lines.extend(_get_section_docs(doc_cls))
    doc_lines.append("\n---\n")
    doc_lines.append("# Results Class\n")
    doc_lines.extend(_get_result_docs(doc_cls))
    doc_lines.append("\n---\n")
    doc_lines.append("# Methods")
    doc_lines.append("## Instance Methods")
    doc_lines.append(_get_class_methods_doc(doc_cls))
    doc_lines.append("## Other Methods")
    doc_lines.append(_get_class_func_doc(doc_cls))
    return "\n".join(doc_lines)


def _format_numpy_doc(doc_str) -> List[str]:
    """Turn numpy-style section underlines into bold headings."""
    if not doc_str:
        return []
    fmt_lines: List[str] = []
    for doc_line in inspect.cleandoc(doc_str).split("\n"):
        if doc_line.strip().startswith("--") and fmt_lines:
            fmt_lines[-1] = f"**{fmt_lines[-1].strip()}**\n"
        else:
            fmt_lines.append(doc_line + "\n")
    return fmt_lines


def _get_section_docs(doc_cls) -> List[str]:
    """Return titles and text of the output sections in the notebooklet YAML."""
    if not doc_cls.module_path:
        return []
    _, sections = read_mod_metadata(str(doc_cls.module_path), doc_cls.__module__)
    doc_lines: List[str] = []
    for section in (sections or {}).values():
        title = section.get("title")
        if not title:
            continue
        hd_level = min(section.get("hd_level", 2) + 1, 6)
        doc_lines.append(("#" * hd_level) + f" {title}\n")
        if section.get("text"):
            doc_lines.append(str(section["text"]))
    return doc_lines


def _get_result_docs(doc_cls) -> List[str]:
    """Return Markdown documentation for the Result class of the module."""
    doc_module = inspect.getmodule(doc_cls)
    for cls_name, cls in inspect.getmembers(doc_module, inspect.isclass):
        if issubclass(cls, NotebookletResult) and cls is not NotebookletResult:
            return [f"## {cls_name}\n", _get_result_doc(cls)]
    return []


def _get_result_doc(cls) -> str:
    """Return the summary and attribute list of a Result class as Markdown."""
    cls_doc_str = inspect.getdoc(cls)
    if not cls_doc_str:
        return ""
    doc_lines = [cls_doc_str.split("\n\n", maxsplit=1)[0], ""]
    for name, (attr_type, desc) in attribute_docs(cls_doc_str).items():
        doc_lines.append(f"- **{name}** ({attr_type}): {desc}")
    return "\n".join(doc_lines)


def _get_class_methods_doc(doc_cls: type) -> str:
    """Document instance methods, own ones in full, inherited ones briefly."""
    base_attrs = set(vars(Notebooklet))
    own_lines: List[str] = []
    inherited_lines: List[str] = []
    for name, func in sorted(inspect.getmembers(doc_cls, inspect.isfunction)):
        if name in ("__init__", "run"):
            own_lines.extend(_member_doc_md(name, func, full_doc=True))
        elif name.startswith("_"):
            continue
        elif name in base_attrs:
            inherited_lines.extend(_member_doc_md(name, func))
        else:
            own_lines.extend(_member_doc_md(name, func, full_doc=True))
    return "\n".join([*own_lines, "## Inherited methods", *inherited_lines])


def _is_class_member(member: Any) -> bool:
    return inspect.ismethod(member) or isinstance(member, property)


def _get_class_func_doc(doc_cls: type) -> str:
    """Document class methods and properties."""
    doc_lines: List[str] = []
    for name, member in inspect.getmembers(doc_cls, _is_class_member):
        if not name.startswith("_"):
            doc_lines.extend(_member_doc_md(name, member))
    return "\n".join(doc_lines)


def _member_doc_md(name: str, member: Any, full_doc: bool = False) -> List[str]:
    """Return the heading, signature and summary (or full docstring) of a member."""
    disp_name = name.replace("_", "\\_")
    if isinstance(member, property):
        signature = f"{disp_name} [property]"
    else:
        signature = f"{disp_name}{html.escape(str(inspect.signature(member)))}<br>"
    doc_lines = [f"### {disp_name}\n", signature]
    member_doc = inspect.getdoc(member)
    if not member_doc:
        return doc_lines
    if not full_doc:
        return [*doc_lines, member_doc.split("\n", maxsplit=1)[0]]
    for doc_line in member_doc.split("\n"):
        if _MD_HEADING.match(doc_line):
            doc_lines.append("##" + doc_line)
        else:
            doc_lines.append(doc_line + "\n")
    return doc_lines
