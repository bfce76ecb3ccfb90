# -------------------------------------------------------------------------
# Copyright (c) occnb developers. All rights reserved.
# Licensed under the MIT License. See License.txt in the project root for
# license information.
# --------------------------------------------------------------------------
"""Setup script for occnb."""

import re
import setuptools


with open("requirements.txt", "r", encoding="utf-8") as fh:
    INSTALL_REQUIRES = fh.readlines()

# pylint: disable=locally-disabled, invalid-name
with open("README.md", "r", encoding="utf-8") as fh:
    long_description = fh.read()

with open("occnb/_version.py", "r", encoding="utf-8") as fd:
    v_match = re.search(r'^VERSION\s*=\s*[\'"]([^\'"]*)[\'"]', fd.read(), re.MULTILINE)
    __version__ = v_match.group(1) if v_match else "no version"
# pylint: enable=locally-disabled, invalid-name

setuptools.setup(
    name="occnb",
    version=__version__,
    author="occnb developers",
    description="Occupation time notebooklets for refracted jump diffusions",
    license="MIT License",
    long_description=long_description,
    long_description_content_type="text/markdown",
    python_requires=">=3.8",
    packages=setuptools.find_packages(exclude=["tests.*", "tests"]),
    package_data={"occnb": ["nb/*/*.yaml"]},
    classifiers=[
        "Programming Language :: Python :: 3.8",
        "License :: OSI Approved :: MIT License",
        "Operating System :: OS Independent",
        "Development Status :: 4 - Beta",
        "Topic :: Scientific/Engineering :: Mathematics",
    ],
    install_requires=INSTALL_REQUIRES,
    extras_require={"test": ["pytest>=6.2", "pytest-check>=1.0"]},
    entry_points={"console_scripts": ["occnb=occnb.cli:main"]},
    keywords=[
        "levy",
        "jump diffusion",
        "refracted",
        "occupation time",
        "wiener-hopf",
        "laplace inversion",
        "jupyter",
        "notebook",
    ],
    zip_safe=False,
    include_package_data=True,
)
