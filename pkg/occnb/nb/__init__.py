# -------------------------------------------------------------------------
# Copyright (c) occnb developers. All rights reserved.
# Licensed under the MIT License. See License.txt in the project root for
# license information.
# --------------------------------------------------------------------------
"""notebooklet sub-package."""
