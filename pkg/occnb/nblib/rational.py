# -------------------------------------------------------------------------
# Copyright (c) occnb developers. All rights reserved.
# Licensed under the MIT License. See License.txt in the project root for
# license information.
# --------------------------------------------------------------------------
"""
Rational functions in product form.

Functions are held as leading constant, zeros and poles with orders.
Partial-fraction (Laurent) coefficients at a pole come from the closed
product formula for simple poles, and from trapezoid sums on a circle
around the pole otherwise.
"""
from typing import Callable, Dict, List, Sequence, Tuple, Union

import attr
import numpy as np

from ..common import (
    DegenerateExpansionError,
    PoleEvaluationError,
    ResidueExtractionError,
)
from ..options import get_opt
from .._version import VERSION

__version__ = VERSION
__author__ = "occnb developers"

Factor = Tuple[complex, int]
_MERGE_TOL = 1e-12


def _sort_key(factor: Factor):
    return (round(factor[0].real, 14), round(factor[0].imag, 14))


def _normalize(factors: Sequence[Factor]) -> Tuple[Factor, ...]:
    """Merge coincident locations and sort by real then imaginary part."""
    merged: List[List] = []
    for loc, order in factors:
        loc = complex(loc)
        if order == 0:
            continue
        for item in merged:
            if abs(item[0] - loc) <= _MERGE_TOL * (1 + abs(loc)):
                item[1] += order
                break
        else:
            merged.append([loc, int(order)])
    kept = ((loc, order) for loc, order in merged if order)
    return tuple(sorted(kept, key=_sort_key))


@attr.s(auto_attribs=True, frozen=True)
class RationalFn:
    """
    Rational function const * prod (s - z)^m / prod (s - p)^n.

    Attributes
    ----------
    const : complex
        Leading constant.
    zeros : Tuple[Tuple[complex, int], ...]
        Zero locations with orders.
    poles : Tuple[Tuple[complex, int], ...]
        Pole locations with orders.

    """

    const: complex = attr.ib(converter=complex)
    zeros: Tuple[Factor, ...] = attr.ib(converter=_normalize, default=())
    poles: Tuple[Factor, ...] = attr.ib(converter=_normalize, default=())

    @property
    def degree_num(self) -> int:
        """Return the numerator degree."""
        return sum(order for _, order in self.zeros)

    @property
    def degree_den(self) -> int:
        """Return the denominator degree."""
        return sum(order for _, order in self.poles)

    @property
    def limit_at_infinity(self) -> complex:
        """Return the limit at infinity (proper functions only)."""
        if self.degree_num > self.degree_den:
            raise DegenerateExpansionError("Rational function is not proper.")
        return self.const if self.degree_num == self.degree_den else 0j

    def pole_order(self, location: complex) -> int:
        """Return the order of the pole at `location` (0 if none)."""
        for loc, order in self.poles:
            if abs(loc - location) <= _MERGE_TOL * (1 + abs(loc)):
                return order
        return 0

    def __call__(self, s: Union[complex, np.ndarray]) -> Union[complex, np.ndarray]:
        """Evaluate in product form."""
        s_arr = np.asarray(s, dtype=complex)
        value = np.full(s_arr.shape, self.const, dtype=complex)
        for loc, order in self.zeros:
            value = value * (s_arr - loc) ** order
        pole_tol = get_opt("pole_tol")
        for loc, order in self.poles:
            dist = s_arr - loc
            if np.any(np.abs(dist) <= pole_tol * (1 + abs(loc))):
                raise PoleEvaluationError(f"Argument within {pole_tol} of pole {loc}.")
            value = value / dist**order
        return value[()] if value.ndim == 0 else value

    def __mul__(self, other: "RationalFn") -> "RationalFn":
        """Return the product, cancelling common zeros and poles."""
        return RationalFn(
            self.const * other.const,
            self.zeros + other.zeros,
            self.poles + other.poles,
        ).cancel()

    def cancel(self) -> "RationalFn":
        """Return the function with coincident zeros and poles cancelled."""
        poles = [list(pole) for pole in self.poles]
        new_zeros = []
        for z_loc, z_ord in self.zeros:
            for pole in poles:
                if pole[1] and abs(pole[0] - z_loc) <= _MERGE_TOL * (1 + abs(z_loc)):
                    common = min(pole[1], z_ord)
                    pole[1] -= common
                    z_ord -= common
            if z_ord:
                new_zeros.append((z_loc, z_ord))
        return RationalFn(
            self.const, new_zeros, [(loc, order) for loc, order in poles if order]
        )

    def _contour_radius(self, location: complex) -> float:
        """Return a circle radius that excludes every other pole."""
        others = [abs(loc - location) for loc, _ in self.poles if loc != location]
        gap = min(others) if others else 1.0
        return min(get_opt("contour_scale") * gap, 1.0)

    def simple_residue(self, location: complex) -> complex:
        """Return the residue at a simple pole from the product formula."""
        if self.pole_order(location) != 1:
            raise DegenerateExpansionError(f"{location} is not a simple pole.")
        value = complex(self.const)
        for loc, order in self.zeros:
            value *= (location - loc) ** order
        for loc, order in self.poles:
            if abs(loc - location) > _MERGE_TOL * (1 + abs(loc)):
                value /= (location - loc) ** order
        return value

    def laurent(self, location: complex, order: int = None) -> np.ndarray:
        """
        Return principal-part coefficients at a pole.

        Parameters
        ----------
        location : complex
            Pole location c.
        order : int, optional
            Number of coefficients, by default the pole order.

        Returns
        -------
        np.ndarray
            a[j-1] is the coefficient of (s - c)^(-j), j = 1..order.

        """
        if order is None:
            order = self.pole_order(location)
        return laurent_coefficients(
            self.__call__, location, order, self._contour_radius(location)
        )

    def partial_fractions(self) -> Dict[complex, np.ndarray]:
        """Return principal parts at every pole."""
        result = {}
        for loc, order in self.poles:
            if order == 1:
                result[loc] = np.array([self.simple_residue(loc)])
            else:
                result[loc] = self.laurent(loc, order)
        return result

    def eval_partial_fractions(self, s: Union[complex, np.ndarray]):
        """Evaluate the proper function from its partial fractions."""
        s_arr = np.asarray(s, dtype=complex)
        value = np.full(s_arr.shape, self.limit_at_infinity, dtype=complex)
        for loc, coeffs in self.partial_fractions().items():
            for j_idx, coeff in enumerate(coeffs):
                value = value + coeff / (s_arr - loc) ** (j_idx + 1)
        return value[()] if value.ndim == 0 else value


def laurent_coefficients(
    func: Callable[[np.ndarray], np.ndarray],
    location: complex,
    order: int,
    radius: float,
    n_nodes: int = None,
) -> np.ndarray:
    """
    Return principal-part coefficients of `func` at `location`.

    Parameters
    ----------
    func : Callable
        Vectorized function analytic in a punctured disc around
        `location` of radius larger than `radius`.
    location : complex
        Pole location c.
    order : int
        Number of coefficients (the pole order).
    radius : float
        Contour radius.
    n_nodes : int, optional
        Trapezoid nodes, by default option `contour_nodes`.

    Returns
    -------
    np.ndarray
        a[j-1] = (1 / 2 pi i) * contour integral of func(s) (s - c)^(j-1) ds.

    Raises
    ------
    ResidueExtractionError
        The radius is not positive, or the function or the
        coefficients are not finite on the contour.

    """
    if order <= 0:
        return np.zeros(0, dtype=complex)
    n_nodes = n_nodes or get_opt("contour_nodes")
    if radius <= 0:
        raise ResidueExtractionError(f"Non-positive contour radius at {location}.")
    offsets = radius * np.exp(2j * np.pi * np.arange(n_nodes) / n_nodes)
    try:
        values = np.asarray(func(location + offsets), dtype=complex)
    except PoleEvaluationError as err:
        raise ResidueExtractionError(
            f"Contour around {location} passes through a pole."
        ) from err
    if not np.all(np.isfinite(values)):
        raise ResidueExtractionError(f"Contour evaluation failed at {location}.")
    coeffs = np.array(
        [np.mean(values * offsets**j_ord) for j_ord in range(1, order + 1)],
        dtype=complex,
    )
    if not np.all(np.isfinite(coeffs)):
        raise ResidueExtractionError(f"Non-finite Laurent coefficients at {location}.")
    return coeffs
