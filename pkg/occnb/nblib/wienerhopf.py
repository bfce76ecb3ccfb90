# -------------------------------------------------------------------------
# Copyright (c) occnb developers. All rights reserved.
# Licensed under the MIT License. See License.txt in the project root for
# license information.
# --------------------------------------------------------------------------
"""
Wiener-Hopf factors of the rational jump diffusion.

The positive factor is the transform of the supremum of Y at e(q),

    psi+(s) = E[exp(-s sup Y)]
            = prod ((s + eta_k) / eta_k)^m_k prod (beta_k / (s + beta_k))^M_k

and the negative factor the transform of the infimum of X at e(q),

    psi-(s) = E[exp(s inf X)]
            = prod ((s + theta_k) / theta_k)^n_k prod (gamma_k / (s + gamma_k))^N_k.

Both are proper rational functions of s. Their value at infinity is the
atom of the extremum at 0 and their principal parts at -beta (-gamma) give
the exponential-polynomial density.
"""
from enum import Enum
from math import factorial
from typing import List, Tuple, Union

import attr
import numpy as np
import pandas as pd

from ..common import DegenerateExpansionError, OutsideAnalyticRegionError
from ..options import get_opt
from .._version import VERSION
from .charexp import ModelArg, RootSet, _base, roots_beta, roots_gamma
from .rational import RationalFn

__version__ = VERSION
__author__ = "occnb developers"


class FactorSide(Enum):
    """Extremum described by a factor."""

    SUP_OF_Y = "sup_of_Y"
    INF_OF_X = "inf_of_X"


@attr.s(auto_attribs=True, frozen=True)
class PFTerm:
    """Partial-fraction term coeff / (s + root)^order."""

    root: complex
    order: int
    coeff: complex


def _prod(values: List[Tuple[complex, int]]) -> complex:
    result = 1 + 0j
    for val, power in sorted(values, key=lambda item: (item[0].real, item[0].imag)):
        result *= val**power
    return result


@attr.s(auto_attribs=True, frozen=True)
class WienerHopfFactor:
    """
    Wiener-Hopf factor in product and partial-fraction form.

    Attributes
    ----------
    side : FactorSide
        Supremum of Y or infimum of X.
    q : complex
        Discount rate.
    roots : RootSet
        Denominator roots (beta or gamma) with multiplicities.
    rates : Tuple[Tuple[complex, int], ...]
        Numerator rates (eta or theta) with Erlang orders.
    rational : RationalFn
        Product form as a function of s.
    atom : complex
        Mass of the extremum at 0 (C0 or D0).
    terms : Tuple[PFTerm, ...]
        Partial-fraction terms C_kj / (s + beta_k)^j.

    """

    side: FactorSide
    q: complex
    roots: RootSet
    rates: Tuple[Tuple[complex, int], ...]
    rational: RationalFn
    atom: complex
    terms: Tuple[PFTerm, ...]

    @property
    def first_root(self) -> complex:
        """Return beta_1 (gamma_1), or inf for an empty root set."""
        return self.roots.first if len(self.roots) else complex(np.inf)

    @property
    def simple_coeff(self) -> complex:
        """Return C1 (D1), the coefficient of the first (simple) root."""
        first = self.first_root
        return next(
            (trm.coeff for trm in self.terms if trm.root == first and trm.order == 1),
            0j,
        )

    @property
    def higher_terms(self) -> Tuple[PFTerm, ...]:
        """Return all terms except the simple term of the first root."""
        return tuple(
            term
            for term in self.terms
            if not (term.root == self.first_root and term.order == 1)
        )

    @property
    def product_constant(self) -> complex:
        """Return prod root^M / prod rate^m."""
        return self.rational.const

    def __call__(self, s):
        """Evaluate the product form (see `eval_factor`)."""
        return eval_factor(self, s)

    def eval_pf(self, s):
        """Evaluate the partial-fraction form."""
        s_arr = np.asarray(s, dtype=complex)
        value = np.full(s_arr.shape, self.atom, dtype=complex)
        for term in self.terms:
            value = value + term.coeff / (s_arr + term.root) ** term.order
        return value[()] if value.ndim == 0 else value

    def density(self, y) -> np.ndarray:
        """Return the complex density at distance |y| from 0."""
        y_arr = np.abs(np.asarray(y, dtype=float))
        value = np.zeros(y_arr.shape, dtype=complex)
        for term in self.terms:
            value = value + term.coeff * y_arr ** (term.order - 1) / factorial(
                term.order - 1
            ) * np.exp(-term.root * y_arr)
        return value[()] if value.ndim == 0 else value

    def tail(self, x) -> np.ndarray:
        """Return the complex mass of the density beyond distance |x|."""
        x_arr = np.abs(np.asarray(x, dtype=float))
        value = np.zeros(x_arr.shape, dtype=complex)
        for term in self.terms:
            partial = sum(
                (term.root * x_arr) ** l_ord / factorial(l_ord)
                for l_ord in range(term.order)
            )
            value = value + term.coeff / term.root**term.order * partial * np.exp(
                -term.root * x_arr
            )
        return value[()] if value.ndim == 0 else value

    def mass(self) -> complex:
        """Return atom + closed-form integral of the density."""
        return self.atom + sum(
            (term.coeff / term.root**term.order for term in self.terms), 0j
        )

    def to_frame(self) -> pd.DataFrame:
        """Return the partial-fraction terms as a DataFrame."""
        return pd.DataFrame(
            [
                {
                    "root_re": term.root.real,
                    "root_im": term.root.imag,
                    "order": term.order,
                    "coeff_re": term.coeff.real,
                    "coeff_im": term.coeff.imag,
                }
                for term in self.terms
            ],
            columns=["root_re", "root_im", "order", "coeff_re", "coeff_im"],
        )


def _pair_conjugates(terms: List[PFTerm]) -> List[PFTerm]:
    """Check that conjugate roots carry conjugate coefficients and enforce it."""
    fixed = list(terms)
    for idx, term in enumerate(terms):
        if term.root.imag >= 0:
            continue
        partner = next(
            (
                other
                for other in terms
                if other.order == term.order and other.root == term.root.conjugate()
            ),
            None,
        )
        if partner is None:
            continue
        gap = abs(partner.coeff.conjugate() - term.coeff)
        if gap > 1e-6 * (1 + abs(term.coeff)):
            raise DegenerateExpansionError(
                f"Coefficients at conjugate roots {term.root} differ by {gap:.3g}."
            )
        fixed[idx] = PFTerm(term.root, term.order, partner.coeff.conjugate())
    return fixed


def build_factor(
    side: FactorSide,
    q: complex,
    roots: RootSet,
    rates: List[Tuple[complex, int]],
    real: bool,
) -> WienerHopfFactor:
    """
    Assemble a factor from its root set and numerator rates.

    Parameters
    ----------
    side : FactorSide
        Which extremum.
    q : complex
        Discount rate.
    roots : RootSet
        Denominator roots.
    rates : List[Tuple[complex, int]]
        Numerator rates with orders.
    real : bool
        If True, conjugate coefficient pairing is checked and enforced.

    Returns
    -------
    WienerHopfFactor

    """
    root_facs = roots.as_factors()
    const = _prod(root_facs) / _prod(list(rates))
    rational = RationalFn(
        const,
        zeros=[(-rate, order) for rate, order in rates],
        poles=[(-root, mult) for root, mult in root_facs],
    )
    terms: List[PFTerm] = []
    for root, mult in root_facs:
        if mult == 1:
            coeffs = [rational.simple_residue(-root)]
        else:
            coeffs = rational.laurent(-root, mult)
        terms.extend(
            PFTerm(root, j_ord, complex(coeff))
            for j_ord, coeff in enumerate(coeffs, start=1)
        )
    if real:
        terms = _pair_conjugates(terms)
    return WienerHopfFactor(
        side=side,
        q=q,
        roots=roots,
        rates=tuple(rates),
        rational=rational,
        atom=rational.limit_at_infinity,
        terms=tuple(terms),
    )


def pos_factor(
    model: ModelArg, alpha: float, q: complex, roots: RootSet = None
) -> WienerHopfFactor:
    """
    Return psi+, the law of the supremum of Y = X - alpha t at e(q).

    Parameters
    ----------
    model : ModelArg
        Validated model.
    alpha : float
        Refraction drift.
    q : complex
        Discount rate.
    roots : RootSet, optional
        Precomputed beta roots (e.g. tracked to a complex q).

    Returns
    -------
    WienerHopfFactor
        Atom C0 is nonzero only if sigma=0 and mu <= alpha.

    """
    base = _base(model)
    if roots is None:
        roots = roots_beta(base, alpha, q)
    rates = [(term.rate, term.order) for term in base.active_up.terms]
    return build_factor(
        FactorSide.SUP_OF_Y, q, roots, rates, base.is_real and np.imag(q) == 0
    )


def neg_factor(model: ModelArg, q: complex, roots: RootSet = None) -> WienerHopfFactor:
    """Return psi-, the law of the infimum of X at e(q)."""
    base = _base(model)
    if roots is None:
        roots = roots_gamma(base, q)
    rates = [(term.rate, term.order) for term in base.active_down.terms]
    return build_factor(
        FactorSide.INF_OF_X, q, roots, rates, base.is_real and np.imag(q) == 0
    )


def eval_factor(factor: WienerHopfFactor, s):
    """
    Evaluate a factor in product form inside its analytic region.

    Raises
    ------
    OutsideAnalyticRegionError
        If Re(s) <= -Re(first root).

    """
    s_arr = np.asarray(s, dtype=complex)
    bound = -factor.first_root.real
    if np.any(s_arr.real <= bound + get_opt("pole_tol") * (1 + abs(bound))):
        raise OutsideAnalyticRegionError(
            f"Re(s) must exceed {bound:.6g} for the {factor.side.value} factor."
        )
    return factor.rational(s_arr)


def sup_law_density(factor: WienerHopfFactor, y: float) -> Tuple[float, float]:
    """Return (atom at 0, density at y >= 0) of the supremum of Y."""
    if y < 0:
        raise ValueError("The supremum density lives on y >= 0.")
    return _law_at(factor, y)


def inf_law_density(factor: WienerHopfFactor, y: float) -> Tuple[float, float]:
    """Return (atom at 0, density at y <= 0) of the infimum of X."""
    if y > 0:
        raise ValueError("The infimum density lives on y <= 0.")
    return _law_at(factor, y)


def _law_at(factor: WienerHopfFactor, y: float) -> Tuple[float, float]:
    atom = float(realize(factor.atom, "atom"))
    return atom, float(realize(factor.density(y), "density"))


def realize(value: Union[complex, np.ndarray], label: str = "value"):
    """Return the real part after checking the imaginary residue."""
    arr = np.asarray(value, dtype=complex)
    scale = get_opt("imag_tol") * (1 + np.abs(arr.real))
    if np.any(np.abs(arr.imag) > scale):
        raise DegenerateExpansionError(
            f"{label} has imaginary residue {np.max(np.abs(arr.imag)):.3g}."
        )
    return arr.real[()] if arr.ndim == 0 else arr.real
