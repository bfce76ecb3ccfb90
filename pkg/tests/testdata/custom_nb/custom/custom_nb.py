# -------------------------------------------------------------------------
# Copyright (c) occnb developers. All rights reserved.
# Licensed under the MIT License. See License.txt in the project root for
# license information.
# --------------------------------------------------------------------------
"""Custom notebooklet loaded from outside the package."""
from typing import Any, Dict, Iterable, Optional

from occnb import nb_metadata
from occnb.common import nb_print, set_text
from occnb.nblib.model import regime_of
from occnb.notebooklet import NBMetadata, Notebooklet, NotebookletResult

__author__ = "occnb developers"


_CLS_METADATA: NBMetadata
_CELL_DOCS: Dict[str, Any]
_CLS_METADATA, _CELL_DOCS = nb_metadata.read_mod_metadata(__file__, __name__)


# pylint: disable=too-few-public-methods
class CustomResult(NotebookletResult):
    """Custom Results."""

    def __init__(
        self,
        description: Optional[str] = None,
        notebooklet: Optional["Notebooklet"] = None,
    ):
        """Create new result instance."""
        super().__init__(description, notebooklet)
        self.regime: Optional[str] = None


class CustomNB(Notebooklet):
    """
    Custom Notebooklet class.

    <<Test Marker>>
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
    ) -> CustomResult:
        """Return the regime of the model."""
        super().run(value=value, options=options, **kwargs)
        result = CustomResult(notebooklet=self, description=self.metadata.description)
        result.regime = regime_of(self.model).regime.value
        nb_print(result.regime)
        self._last_result = result
        return self._last_result
