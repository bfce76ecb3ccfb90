# -------------------------------------------------------------------------
# Copyright (c) occnb developers. All rights reserved.
# Licensed under the MIT License. See License.txt in the project root for
# license information.
# --------------------------------------------------------------------------
"""
One-sided exit laws.

For Y = X - alpha t started at 0 and a level x >= 0,

    E[exp(-q tau_x - s (Y_tau - x))]
        = E[exp(-s (sup Y - x)); sup Y > x] / psi+(s)
        = C0(x) + sum C_kj(x) (eta_k / (eta_k + s))^j

with the supremum taken at e(q). The numerator is written down
analytically from the partial fractions of psi+, so the right side is a
rational function of s with poles only at -eta_k. The downward law of X
below x <= 0 is the mirror image built on psi-.
"""
from enum import Enum
from math import factorial
from typing import Tuple

import attr
import numpy as np
from scipy import integrate

from ..common import DegenerateArgumentsError
from ..options import get_opt
from .._version import VERSION
from .charexp import ModelArg, _base
from .rational import laurent_coefficients
from .wienerhopf import WienerHopfFactor, neg_factor, pos_factor, realize

__version__ = VERSION
__author__ = "occnb developers"


class ExitDirection(Enum):
    """Direction of the passage."""

    DOWN_X = "down_X"
    UP_Y = "up_Y"


@attr.s(auto_attribs=True, frozen=True)
class OvershootTerm:
    """Erlang overshoot term coeff * (rate / (rate + s))^order."""

    rate: complex
    order: int
    coeff: complex


@attr.s(auto_attribs=True, frozen=True)
class ExitLaw:
    """
    Discounted law of the passage time and overshoot.

    Attributes
    ----------
    direction : ExitDirection
        Upward passage of Y or downward passage of X.
    x : float
        Level relative to the start (>= 0 up, <= 0 down).
    q : complex
        Discount rate.
    atom : complex
        Discounted probability of passing without overshoot.
    terms : Tuple[OvershootTerm, ...]
        Overshoot coefficients C_kj(x) (D_kj(x)).

    """

    direction: ExitDirection
    x: float
    q: complex
    atom: complex
    terms: Tuple[OvershootTerm, ...]

    def transform(self, s):
        """Return E[exp(-q tau - s |overshoot|)]."""
        s_arr = np.asarray(s, dtype=complex)
        value = np.full(s_arr.shape, self.atom, dtype=complex)
        for term in self.terms:
            value = value + term.coeff * (term.rate / (term.rate + s_arr)) ** term.order
        return value[()] if value.ndim == 0 else value

    def overshoot_density(self, y):
        """Return the discounted overshoot density at |overshoot| = y > 0."""
        y_arr = np.asarray(y, dtype=float)
        value = np.zeros(y_arr.shape, dtype=complex)
        for term in self.terms:
            value = value + term.coeff * term.rate**term.order * y_arr ** (
                term.order - 1
            ) / factorial(term.order - 1) * np.exp(-term.rate * y_arr)
        return value[()] if value.ndim == 0 else value

    def discounted_mass(self) -> complex:
        """Return E[exp(-q tau)] = atom + sum of coefficients."""
        return self.atom + sum((term.coeff for term in self.terms), 0j)


def _numerator(factor: WienerHopfFactor, dist: float):
    """Return s -> E[exp(-s (extremum - dist)); extremum > dist]."""

    def _value(s):
        s_arr = np.asarray(s, dtype=complex)
        total = np.zeros(s_arr.shape, dtype=complex)
        for term in factor.terms:
            decay = term.coeff * np.exp(-term.root * dist)
            for l_ord in range(term.order):
                power = term.order - 1 - l_ord
                total = total + decay * dist**power / factorial(power) / (
                    s_arr + term.root
                ) ** (l_ord + 1)
        return total

    return _value


def _exit_law(
    factor: WienerHopfFactor, dist: float, direction: ExitDirection, x: float
) -> ExitLaw:
    numer = _numerator(factor, dist)

    def _ratio(s):
        return numer(s) / factor.rational(s)

    rates = list(factor.rates)
    singular = [-rate for rate, _ in rates] + [-root for root in factor.roots.values]
    terms = []
    for rate, order in rates:
        gaps = [abs(-rate - loc) for loc in singular if loc != -rate]
        radius = min(get_opt("contour_scale") * min(gaps), 1.0) if gaps else 1.0
        coeffs = laurent_coefficients(_ratio, -rate, order, radius)
        terms.extend(
            OvershootTerm(rate, j_idx + 1, complex(coeff / rate ** (j_idx + 1)))
            for j_idx, coeff in enumerate(coeffs)
        )
    if factor.rational.degree_den > factor.rational.degree_num:
        atom = complex(factor.density(dist)) / factor.product_constant
    else:
        atom = 0j
    return ExitLaw(
        direction=direction, x=x, q=factor.q, atom=atom, terms=tuple(terms)
    )


def exit_up_law(
    model: ModelArg, alpha: float, q: complex, x: float, factor: WienerHopfFactor = None
) -> ExitLaw:
    """
    Return the upward passage law of Y over level x >= 0.

    Parameters
    ----------
    model : ModelArg
        Validated model.
    alpha : float
        Refraction drift.
    q : complex
        Discount rate.
    x : float
        Level above the start. At x = 0 the passage is immediate
        (atom 1) unless sigma = 0 and mu <= alpha, where the first
        passage strictly above 0 is described.
    factor : WienerHopfFactor, optional
        Precomputed positive factor.

    Returns
    -------
    ExitLaw

    """
    if x < 0:
        raise ValueError("Upward passage level must be >= 0.")
    factor = factor or pos_factor(model, alpha, q)
    return _exit_law(factor, float(x), ExitDirection.UP_Y, float(x))


def exit_down_law(
    model: ModelArg, q: complex, x: float, factor: WienerHopfFactor = None
) -> ExitLaw:
    """Return the downward passage law of X below level x <= 0."""
    if x > 0:
        raise ValueError("Downward passage level must be <= 0.")
    factor = factor or neg_factor(model, q)
    return _exit_law(factor, abs(float(x)), ExitDirection.DOWN_X, float(x))


def _check_args(theta: float, s: float):
    if theta <= 0 or s < 0:
        raise ValueError("Require theta > 0 and s >= 0.")
    if abs(theta - s) <= 1e-8 * (1 + abs(s)):
        raise DegenerateArgumentsError(f"theta={theta} and s={s} coincide.")


def pr_rhs(
    model: ModelArg,
    alpha: float,
    q: float,
    theta: float,
    s: float,
    factor: WienerHopfFactor = None,
) -> float:
    """
    Return (1 / (s - theta)) (psi+(theta) / psi+(s) - 1).

    This is the transform in the level x of the upward exit transform,
    integral_0^inf exp(-theta x) E[exp(-q tau_x - s overshoot)] dx.

    Raises
    ------
    DegenerateArgumentsError
        If theta and s coincide.

    """
    _check_args(theta, s)
    factor = factor or pos_factor(model, alpha, q)
    value = (factor(theta) / factor(s) - 1) / (s - theta)
    return float(realize(value, "pr_rhs"))


def pr_rhs_down(
    model: ModelArg, q: float, theta: float, s: float, factor: WienerHopfFactor = None
) -> float:
    """Return (1 / (s - theta)) (psi-(theta) / psi-(s) - 1)."""
    _check_args(theta, s)
    factor = factor or neg_factor(model, q)
    value = (factor(theta) / factor(s) - 1) / (s - theta)
    return float(realize(value, "pr_rhs_down"))


def pr_lhs(
    model: ModelArg,
    alpha: float,
    q: float,
    theta: float,
    s: float,
    direction: ExitDirection = ExitDirection.UP_Y,
) -> float:
    """
    Return the level transform of the exit transform by quadrature.

    Integrates exp(-theta |x|) times the exit transform at `s` over the
    level |x| in (0, inf) with scipy's adaptive quadrature.
    """
    base = _base(model)
    if direction == ExitDirection.UP_Y:
        factor = pos_factor(base, alpha, q)

        def _law(dist):
            return _exit_law(factor, dist, direction, dist)

    else:
        factor = neg_factor(base, q)

        def _law(dist):
            return _exit_law(factor, dist, direction, -dist)

    def _integrand(dist):
        return float(np.real(np.exp(-theta * dist) * _law(dist).transform(s)))

    value, _ = integrate.quad(
        _integrand, 0, np.inf, epsabs=1e-11, epsrel=1e-10, limit=200
    )
    return value
