# -------------------------------------------------------------------------
# Copyright (c) occnb developers. All rights reserved.
# Licensed under the MIT License. See License.txt in the project root for
# license information.
# --------------------------------------------------------------------------
"""
Notebooklet discovery.

Every public module under ``occnb/nb`` (and under any extra folders
given to `discover_modules`) is imported and the `Notebooklet`
subclasses it defines are collected. Each class is attached to the
`nblts` tree at the position of its source folder and indexed by dotted
name in `nb_index`.
"""
import importlib
import importlib.util
import inspect
import pkgutil
import sys
from functools import partial
from pathlib import Path
from types import ModuleType
from typing import Dict, Iterable, Iterator, List, Optional, Tuple, Union
from warnings import warn

import attr

from . import nb
from ._version import VERSION
from .class_doc import get_class_doc
from .common import NBContainer, OccnbError, nb_debug
from .notebooklet import Notebooklet

__version__ = VERSION
__author__ = "occnb developers"

nblts: NBContainer = NBContainer()
nb_index: Dict[str, Notebooklet] = {}


@attr.s(auto_attribs=True, frozen=True)
class _NBSource:
    """An imported module and its position in the notebooklet tree."""

    module: ModuleType
    tree_path: Tuple[str, ...]


def discover_modules(nb_path: Union[str, Iterable[str]] = None) -> NBContainer:
    """
    Discover notebooklet modules.

    Parameters
    ----------
    nb_path : Union[str, Iterable[str]], optional
        Additional folders to search for notebooklets, by default None.
        Classes found there go in a subtree named after the folder.

    Returns
    -------
    NBContainer
        Container of notebooklets, a tree mirroring the source
        folder names.

    Raises
    ------
    OccnbError
        One of the additional folders does not exist.

    """
    extra_folders = _as_folders(nb_path)
    for source in _package_sources():
        _register(source)
    for folder in extra_folders:
        for source in _folder_sources(folder):
            _register(source, subtree=folder.name)
    return nblts


def _as_folders(nb_path: Union[str, Iterable[str], None]) -> List[Path]:
    if not nb_path:
        return []
    items = [nb_path] if isinstance(nb_path, (str, Path)) else list(nb_path)
    folders = [Path(item).resolve() for item in items]
    missing = [str(folder) for folder in folders if not folder.is_dir()]
    if missing:
        raise OccnbError(f"Notebooklet folder not found: {', '.join(missing)}")
    return folders


def _is_hidden(parts: Iterable[str]) -> bool:
    return any(part.startswith((".", "_")) for part in parts)


def _package_sources() -> Iterator[_NBSource]:
    """Import the modules of the built-in notebooklet package."""
    prefix = f"{nb.__name__}."
    for mod_info in pkgutil.walk_packages(nb.__path__, prefix=prefix):
        rel_parts = tuple(mod_info.name[len(prefix) :].split("."))
        if mod_info.ispkg or _is_hidden(rel_parts):
            continue
        module = _safe_import(mod_info.name, importlib.import_module, mod_info.name)
        if module is not None:
            yield _NBSource(module, rel_parts[:-1])


def _folder_sources(folder: Path) -> Iterator[_NBSource]:
    """Import the .py files below a folder outside the package."""
    for py_file in sorted(folder.rglob("*.py")):
        rel_path = py_file.relative_to(folder)
        if _is_hidden(rel_path.parts):
            continue
        mod_name = ".".join((folder.name, *rel_path.parent.parts, py_file.stem))
        module = _safe_import(mod_name, _load_file, mod_name, py_file)
        if module is not None:
            yield _NBSource(module, rel_path.parent.parts)


def _load_file(mod_name: str, py_file: Path) -> ModuleType:
    if mod_name in sys.modules:
        return sys.modules[mod_name]
    spec = importlib.util.spec_from_file_location(mod_name, py_file)
    if spec is None or spec.loader is None:
        raise ImportError(f"Cannot load {py_file}")
    module = importlib.util.module_from_spec(spec)
    sys.modules[mod_name] = module
    try:
        spec.loader.exec_module(module)
    except Exception:
        del sys.modules[mod_name]
        raise
    return module


def _safe_import(mod_name: str, loader, *args) -> Optional[ModuleType]:
    nb_debug("module to import", mod_name)
    try:
        return loader(*args)
    except ImportError as err:
        warn(f"Import failed for {mod_name}.\n {err}")
        nb_debug("import failed", mod_name, err)
        return None


def _notebooklet_classes(module: ModuleType) -> Iterator[Tuple[str, type]]:
    """Yield Notebooklet subclasses defined (not imported) in `module`."""
    for cls_name, mod_class in inspect.getmembers(module, inspect.isclass):
        if (
            issubclass(mod_class, Notebooklet)
            and mod_class is not Notebooklet
            and mod_class.__module__ == module.__name__
        ):
            yield cls_name, mod_class


def _register(source: _NBSource, subtree: str = ""):
    tree_path = (subtree, *source.tree_path) if subtree else source.tree_path
    container = _container_at(tree_path)
    for cls_name, nb_class in _notebooklet_classes(source.module):
        nb_debug("imported", cls_name)
        nb_class.module_path = Path(source.module.__file__)
        setattr(nb_class, "_get_doc", partial(get_class_doc, doc_cls=nb_class))
        setattr(container, cls_name, nb_class)
        nb_index[".".join(("nblts", *source.tree_path, cls_name))] = nb_class


def _container_at(path_parts: Tuple[str, ...]) -> NBContainer:
    """Return the container at `path_parts`, creating missing levels."""
    container = nblts
    for part in path_parts:
        child = getattr(container, part, None)
        if not isinstance(child, NBContainer):
            child = NBContainer()
            setattr(container, part, child)
        container = child
    return container


def find(keywords: str, full_match=True) -> List[Tuple[str, Notebooklet]]:
    """
    Search for Notebooklets matching key words.

    Parameters
    ----------
    keywords : str
        Space or comma-separated words to search for.
        Terms can be regular expressions.
    full_match : bool
        If True only return notebooklets matching every term (default).
        If False, notebooklets matching any term are returned.

    Returns
    -------
    List[Tuple[str, Notebooklet]]
        (name, class) pairs, full matches first, then by number of
        matching terms.

    """
    scored = []
    for name, nb_class in nblts.iter_classes():
        all_match, match_count = nb_class.match_terms(keywords)
        if all_match or (match_count and not full_match):
            scored.append(((all_match, match_count), name, nb_class))
    scored.sort(key=lambda item: item[0], reverse=True)
    return [(name, nb_class) for _, name, nb_class in scored]
