# -------------------------------------------------------------------------
# Copyright (c) occnb developers. All rights reserved.
# Licensed under the MIT License. See License.txt in the project root for
# license information.
# --------------------------------------------------------------------------
"""
Jump-diffusion and refraction model definitions.

A model is a Levy jump diffusion with two-sided jumps whose densities are
finite mixtures of (possibly complex) Erlang terms. The refracted process
loses drift `alpha` whenever it sits below level `b`.
"""
from enum import Enum
from math import factorial
from typing import Iterable, List, Tuple, Union

import attr
import numpy as np
from attr import Factory

from ..common import OccnbValidationError
from ..options import get_opt
from .._version import VERSION

__version__ = VERSION
__author__ = "occnb developers"

_NORM_TOL = 1e-10
_RATE_TOL = 1e-12


class Side(Enum):
    """Side of the jump density."""

    POSITIVE = "positive"
    NEGATIVE = "negative"


class Regime(Enum):
    """Formula branch selected by volatility and drifts."""

    POSITIVE_VOLATILITY = "PositiveVolatility"
    ZERO_VOL_MU_ABOVE_ALPHA = "ZeroVolMuAboveAlpha"
    ZERO_VOL_MU_BETWEEN_ZERO_AND_ALPHA = "ZeroVolMuBetweenZeroAndAlpha"
    ZERO_VOL_MU_NEGATIVE = "ZeroVolMuNegative"


class ViolationCode(Enum):
    """Model validation failures."""

    DUPLICATE_RATE = "DuplicateRate"
    SMALLEST_RATE_NOT_REAL = "SmallestRateNotReal"
    COEFFICIENTS_NOT_NORMALIZED = "CoefficientsNotNormalized"
    CONJUGATE_PAIR_VIOLATION = "ConjugatePairViolation"
    NEGATIVE_DENSITY = "NegativeDensity"
    NEGATIVE_INTENSITY = "NegativeIntensity"
    NEGATIVE_VOLATILITY = "NegativeVolatility"
    NEGATIVE_REFRACTION = "NegativeRefraction"
    EMPTY_DENSITY = "EmptyDensity"
    INVALID_RATE = "InvalidRate"


@attr.s(auto_attribs=True, frozen=True)
class Violation:
    """A single failed validation check."""

    code: ViolationCode
    message: str

    def __str__(self):
        """Return code and message."""
        return f"{self.code.value}: {self.message}"


def _to_complex_tuple(values: Iterable) -> Tuple[complex, ...]:
    return tuple(complex(val) for val in values)


@attr.s(auto_attribs=True, frozen=True)
class JumpTerm:
    """
    One rate of a rational jump density.

    Attributes
    ----------
    rate : complex
        Exponential rate (eta or theta).
    coeffs : Tuple[complex, ...]
        Coefficient of the Erlang term of order j at index j - 1.

    """

    rate: complex = attr.ib(converter=complex)
    coeffs: Tuple[complex, ...] = attr.ib(converter=_to_complex_tuple)

    @property
    def order(self) -> int:
        """Return the highest Erlang order of the term."""
        return len(self.coeffs)

    @property
    def is_real(self) -> bool:
        """Return True if rate and coefficients are real."""
        return abs(self.rate.imag) <= _RATE_TOL * (1 + abs(self.rate)) and all(
            abs(coeff.imag) <= _RATE_TOL for coeff in self.coeffs
        )

    def conjugate(self) -> "JumpTerm":
        """Return the complex-conjugate term."""
        return JumpTerm(
            rate=self.rate.conjugate(),
            coeffs=[coeff.conjugate() for coeff in self.coeffs],
        )


@attr.s(auto_attribs=True, frozen=True)
class RationalJumpDensity:
    """
    Density of jump sizes on one side.

    The density of the jump magnitude y > 0 is
    sum_k sum_j c_kj rate_k^j y^(j-1) exp(-rate_k y) / (j-1)!.
    """

    terms: Tuple[JumpTerm, ...] = attr.ib(converter=tuple, default=Factory(tuple))
    side: Side = Side.POSITIVE

    @classmethod
    def exponential(cls, rate: float, side: Side = Side.POSITIVE):
        """Return a single exponential density."""
        return cls(terms=(JumpTerm(rate, [1.0]),), side=side)

    @classmethod
    def hyper_exponential(
        cls,
        rates: Iterable[float],
        weights: Iterable[float],
        side: Side = Side.POSITIVE,
    ):
        """Return a mixture of exponentials."""
        return cls(
            terms=tuple(JumpTerm(rate, [wgt]) for rate, wgt in zip(rates, weights)),
            side=side,
        )

    @property
    def is_empty(self) -> bool:
        """Return True if the density has no terms."""
        return not self.terms

    @property
    def rates(self) -> List[complex]:
        """Return the list of rates."""
        return [term.rate for term in self.terms]

    @property
    def orders(self) -> List[int]:
        """Return the Erlang order of each rate."""
        return [term.order for term in self.terms]

    @property
    def total_order(self) -> int:
        """Return the sum of the term orders."""
        return sum(self.orders)

    @property
    def is_sampleable(self) -> bool:
        """Return True if all parameters are real and coefficients nonnegative."""
        return all(
            term.is_real and all(coeff.real >= 0 for coeff in term.coeffs)
            for term in self.terms
        )

    def mass(self) -> complex:
        """Return the closed-form integral of the density."""
        return sum((sum(term.coeffs) for term in self.terms), 0j)

    def mean(self) -> complex:
        """Return the closed-form mean jump size."""
        return sum(
            (
                coeff * (j_ord + 1) / term.rate
                for term in self.terms
                for j_ord, coeff in enumerate(term.coeffs)
            ),
            0j,
        )

    def density(self, y: Union[float, np.ndarray]) -> np.ndarray:
        """Evaluate the (complex) density at magnitudes `y` > 0."""
        y_arr = np.asarray(y, dtype=float)
        total = np.zeros_like(y_arr, dtype=complex)
        for term in self.terms:
            decay = np.exp(-term.rate * y_arr)
            for j_idx, coeff in enumerate(term.coeffs):
                total += (
                    coeff
                    * term.rate ** (j_idx + 1)
                    * y_arr**j_idx
                    / factorial(j_idx)
                    * decay
                )
        return total

    def transform(self, s: complex) -> complex:
        """Return E[exp(-s Y)] = sum c_kj (rate/(rate + s))^j."""
        return sum(
            (
                coeff * (term.rate / (term.rate + s)) ** (j_idx + 1)
                for term in self.terms
                for j_idx, coeff in enumerate(term.coeffs)
            ),
            0j,
        )


@attr.s(auto_attribs=True, frozen=True)
class LevyModel:
    """
    Jump diffusion X_t = mu t + sigma W_t + compound Poisson jumps.

    Attributes
    ----------
    mu : float
        Drift per unit time.
    sigma : float
        Volatility.
    lambda_plus : float
        Intensity of upward jumps.
    lambda_minus : float
        Intensity of downward jumps.
    jumps_up : RationalJumpDensity
        Upward jump sizes.
    jumps_down : RationalJumpDensity
        Downward jump magnitudes.

    """

    mu: float = attr.ib(converter=float)
    sigma: float = attr.ib(converter=float)
    lambda_plus: float = attr.ib(converter=float, default=0.0)
    lambda_minus: float = attr.ib(converter=float, default=0.0)
    jumps_up: RationalJumpDensity = attr.ib(
        default=Factory(lambda: RationalJumpDensity(side=Side.POSITIVE))
    )
    jumps_down: RationalJumpDensity = attr.ib(
        default=Factory(lambda: RationalJumpDensity(side=Side.NEGATIVE))
    )

    @property
    def active_up(self) -> RationalJumpDensity:
        """Return the upward density, empty when its intensity is zero."""
        if self.lambda_plus == 0:
            return RationalJumpDensity(side=Side.POSITIVE)
        return self.jumps_up

    @property
    def active_down(self) -> RationalJumpDensity:
        """Return the downward density, empty when its intensity is zero."""
        if self.lambda_minus == 0:
            return RationalJumpDensity(side=Side.NEGATIVE)
        return self.jumps_down

    @property
    def is_real(self) -> bool:
        """Return True if every jump term has real parameters."""
        return all(
            term.is_real for term in self.active_up.terms + self.active_down.terms
        )


@attr.s(auto_attribs=True, frozen=True)
class RefractedModel:
    """Levy model with refraction drift `alpha` below level `b`."""

    base: LevyModel
    alpha: float = attr.ib(converter=float, default=0.0)
    b: float = attr.ib(converter=float, default=0.0)

    def with_refraction(self, alpha: float = None, b: float = None) -> "RefractedModel":
        """Return a copy with overridden refraction parameters."""
        return attr.evolve(
            self,
            alpha=self.alpha if alpha is None else alpha,
            b=self.b if b is None else b,
        )


@attr.s(auto_attribs=True, frozen=True)
class RegimeInfo:
    """Regime and the atom predicates of the extremum laws."""

    regime: Regime
    y_has_atom_at_sup: bool
    x_has_atom_at_inf: bool

    @property
    def has_occupation_atom(self) -> bool:
        """Return True if the distribution at e(q) jumps at b."""
        return self.regime == Regime.ZERO_VOL_MU_BETWEEN_ZERO_AND_ALPHA


def regime_of(
    model: Union[RefractedModel, LevyModel], alpha: float = None
) -> RegimeInfo:
    """
    Classify the model into the four formula regimes.

    Parameters
    ----------
    model : Union[RefractedModel, LevyModel]
        The model. For a LevyModel, `alpha` must be supplied
        (defaults to 0).
    alpha : float, optional
        Overrides the refraction drift of a RefractedModel.

    Returns
    -------
    RegimeInfo
        Regime plus the flags `y_has_atom_at_sup` (sigma=0 and mu<=alpha)
        and `x_has_atom_at_inf` (sigma=0 and mu>=0).

    """
    base, alpha = _split_model(model, alpha)
    if base.sigma > 0:
        regime = Regime.POSITIVE_VOLATILITY
    elif base.mu > alpha:
        regime = Regime.ZERO_VOL_MU_ABOVE_ALPHA
    elif base.mu >= 0:
        regime = Regime.ZERO_VOL_MU_BETWEEN_ZERO_AND_ALPHA
    else:
        regime = Regime.ZERO_VOL_MU_NEGATIVE
    zero_vol = base.sigma == 0
    return RegimeInfo(
        regime=regime,
        y_has_atom_at_sup=zero_vol and base.mu <= alpha,
        x_has_atom_at_inf=zero_vol and base.mu >= 0,
    )


def _split_model(
    model: Union[RefractedModel, LevyModel], alpha: float = None
) -> Tuple[LevyModel, float]:
    if isinstance(model, RefractedModel):
        return model.base, model.alpha if alpha is None else float(alpha)
    return model, 0.0 if alpha is None else float(alpha)


def _same_rate(term: JumpTerm, other: JumpTerm) -> bool:
    return abs(term.rate - other.rate) <= _RATE_TOL * (1 + abs(term.rate))


def _check_density(density: RationalJumpDensity, label: str) -> List[Violation]:
    violations: List[Violation] = []
    terms = density.terms
    valid_rates = True
    for idx, term in enumerate(terms):
        if term.order == 0 or term.rate.real <= 0 or not np.isfinite(term.rate):
            valid_rates = False
            violations.append(
                Violation(
                    ViolationCode.INVALID_RATE,
                    f"{label} term {idx}: rate {term.rate} must have positive real "
                    "part and at least one coefficient",
                )
            )

    for idx, term in enumerate(terms):
        for jdx in range(idx + 1, len(terms)):
            if _same_rate(term, terms[jdx]):
                violations.append(
                    Violation(
                        ViolationCode.DUPLICATE_RATE,
                        f"{label} terms {idx} and {jdx} share rate {term.rate}",
                    )
                )

    if terms:
        ordered = sorted(terms, key=lambda trm: (trm.rate.real, trm.rate.imag))
        first = ordered[0]
        if abs(first.rate.imag) > _RATE_TOL * (1 + abs(first.rate)):
            violations.append(
                Violation(
                    ViolationCode.SMALLEST_RATE_NOT_REAL,
                    f"{label} rate of smallest real part {first.rate} is not real",
                )
            )
        elif (
            len(ordered) > 1
            and not _same_rate(first, ordered[1])
            and ordered[1].rate.real <= first.rate.real
        ):
            violations.append(
                Violation(
                    ViolationCode.SMALLEST_RATE_NOT_REAL,
                    f"{label} smallest rate {first.rate.real} is not strictly "
                    f"smaller than the real part of {ordered[1].rate}",
                )
            )

    for idx, term in enumerate(terms):
        if term.is_real:
            continue
        if abs(term.rate.imag) <= _RATE_TOL * (1 + abs(term.rate)):
            violations.append(
                Violation(
                    ViolationCode.CONJUGATE_PAIR_VIOLATION,
                    f"{label} term {idx}: real rate {term.rate.real} has complex "
                    "coefficients",
                )
            )
            continue
        conj = term.conjugate()
        if not any(
            abs(other.rate - conj.rate) <= _RATE_TOL * (1 + abs(conj.rate))
            and other.order == conj.order
            and np.allclose(other.coeffs, conj.coeffs, rtol=0, atol=_NORM_TOL)
            for other in terms
        ):
            violations.append(
                Violation(
                    ViolationCode.CONJUGATE_PAIR_VIOLATION,
                    f"{label} term {idx}: no conjugate partner for rate {term.rate}",
                )
            )

    if terms and abs(density.mass() - 1) > _NORM_TOL:
        violations.append(
            Violation(
                ViolationCode.COEFFICIENTS_NOT_NORMALIZED,
                f"{label} coefficients sum to {density.mass()}, not 1",
            )
        )

    if terms and valid_rates:
        min_rate = min(rate.real for rate in density.rates)
        n_pts = get_opt("density_grid")
        y_grid = np.linspace(20 / min_rate / n_pts, 20 / min_rate, n_pts)
        min_val = float(np.min(density.density(y_grid).real))
        if min_val < -get_opt("density_tol"):
            violations.append(
                Violation(
                    ViolationCode.NEGATIVE_DENSITY,
                    f"{label} density reaches {min_val:.3g}"
                    f" on (0, {20 / min_rate:.4g}]",
                )
            )
    return violations


def check_model(model: Union[RefractedModel, LevyModel]) -> List[Violation]:
    """
    Return every violated model invariant.

    Parameters
    ----------
    model : Union[RefractedModel, LevyModel]
        Model to check.

    Returns
    -------
    List[Violation]
        All violations; empty if the model is valid.

    """
    base, alpha = _split_model(model)
    violations: List[Violation] = []
    if base.sigma < 0 or not np.isfinite(base.sigma):
        violations.append(
            Violation(ViolationCode.NEGATIVE_VOLATILITY, f"sigma={base.sigma} < 0")
        )
    intensities = (
        ("lambda_plus", base.lambda_plus),
        ("lambda_minus", base.lambda_minus),
    )
    for label, lam in intensities:
        if lam < 0 or not np.isfinite(lam):
            violations.append(
                Violation(ViolationCode.NEGATIVE_INTENSITY, f"{label}={lam} < 0")
            )
    if alpha < 0:
        violations.append(
            Violation(ViolationCode.NEGATIVE_REFRACTION, f"alpha={alpha} < 0")
        )
    for label, lam, density in (
        ("jumps.up", base.lambda_plus, base.jumps_up),
        ("jumps.down", base.lambda_minus, base.jumps_down),
    ):
        if lam > 0 and density.is_empty:
            violations.append(
                Violation(
                    ViolationCode.EMPTY_DENSITY,
                    f"{label} has positive intensity but no terms",
                )
            )
        violations.extend(_check_density(density, label))
    return violations


def validate(model: RefractedModel) -> RefractedModel:
    """
    Validate the model.

    Parameters
    ----------
    model : RefractedModel
        Model to check.

    Returns
    -------
    RefractedModel
        The same (immutable) model if it is valid.

    Raises
    ------
    OccnbValidationError
        With the complete list of violations.

    """
    violations = check_model(model)
    if violations:
        raise OccnbValidationError(violations)
    return model
