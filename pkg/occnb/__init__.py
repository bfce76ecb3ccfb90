# -------------------------------------------------------------------------
# Copyright (c) occnb developers. All rights reserved.
# Licensed under the MIT License. See License.txt in the project root for
# license information.
# --------------------------------------------------------------------------
"""
occnb - occupation time notebooklets for refracted jump diffusions.

To start using notebooklets:
>>> import occnb as nb
>>> nb.init()
>>>
>>> # Auto-complete tree of notebooklets
>>> nb.nblts
>>>
>>> # List notebooklets
>>> nb.nb_index
>>>
>>> # Use a notebooklet
>>> occ = nb.nblts.occupation.OccupationLaplace()
>>> occ.run("model.yaml", p=1.0, q=0.5);
>>>
>>> # help
>>> help(occ)
>>> print("Options:", occ.all_options())
>>>
>>> # find a notebooklet
>>> nb.find("occupation expectation")

The computational routines live in `occnb.nblib` and can be used
without the notebooklet layer.

"""
from typing import Iterable, Union

from ._version import VERSION
from .nblib.modelfile import dump_model, load_model  # noqa:F401
from .options import get_opt, set_opt  # noqa:F401
from .read_modules import discover_modules, find, nb_index, nblts  # noqa:F401

__version__ = VERSION


def init(nb_path: Union[str, Iterable[str]] = None, **kwargs):
    """
    Load the notebooklets and apply option settings.

    Parameters
    ----------
    nb_path : Union[str, Iterable[str]], optional
        Additional folders to search for notebooklets.

    Other Parameters
    ----------------
    kwargs :
        Option names and values passed to `set_opt`
        (e.g. verbose=True, root_tol=1e-8).

    """
    for name, value in kwargs.items():
        set_opt(name, value)
    discover_modules(nb_path)
    print(f"Notebooklets: {len(list(nblts.iter_classes()))} notebooklets loaded.")
