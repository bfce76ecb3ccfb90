# -------------------------------------------------------------------------
# Copyright (c) occnb developers. All rights reserved.
# Licensed under the MIT License. See License.txt in the project root for
# license information.
# --------------------------------------------------------------------------
"""
Characteristic exponents and their roots.

The Laplace exponent of X is

    K(s) = sigma^2 s^2 / 2 + mu s
           + lambda+ (sum c_kj (eta_k / (eta_k - s))^j - 1)
           + lambda- (sum d_kj (theta_k / (theta_k + s))^j - 1)

and psi(z) = K(iz). The drift-reduced process Y = X - alpha t has
psi_tilde(z) = psi(z) - i alpha z. Roots of psi_tilde(z) = q in the lower
half-plane are reported as beta = iz (Re beta > 0), roots of psi(z) = q in
the upper half-plane as gamma = -iz (Re gamma > 0).
"""
from enum import Enum
from typing import List, Sequence, Tuple, Union

import attr
import numpy as np
from numpy.polynomial import polynomial as npoly

from ..common import (
    ComplexRootTrackingError,
    NonConvergenceError,
    PoleEvaluationError,
    RootCountMismatchError,
)
from ..options import get_opt
from .._version import VERSION
from .model import LevyModel, RefractedModel

__version__ = VERSION
__author__ = "occnb developers"

ModelArg = Union[LevyModel, RefractedModel]
_REAL_SNAP = 1e-9


class RootSide(Enum):
    """Half-plane of a root set."""

    LOWER_BETA = "lower_beta"
    UPPER_GAMMA = "upper_gamma"


@attr.s(auto_attribs=True, frozen=True)
class Root:
    """Distinct root with multiplicity."""

    value: complex = attr.ib(converter=complex)
    multiplicity: int = 1


@attr.s(auto_attribs=True, frozen=True)
class RootSet:
    """
    Roots of one Wiener-Hopf equation.

    Attributes
    ----------
    side : RootSide
        `LOWER_BETA` for beta roots, `UPPER_GAMMA` for gamma roots.
    q : complex
        Discount rate.
    roots : Tuple[Root, ...]
        Distinct roots ordered by real part then imaginary part.
    residuals : Tuple[float, ...]
        Absolute residual of each root in the un-cleared equation.

    """

    side: RootSide
    q: complex
    roots: Tuple[Root, ...] = attr.ib(converter=tuple)
    residuals: Tuple[float, ...] = attr.ib(converter=tuple, default=())

    def __len__(self):
        """Return number of distinct roots."""
        return len(self.roots)

    def __iter__(self):
        """Iterate over the roots."""
        return iter(self.roots)

    @property
    def total_multiplicity(self) -> int:
        """Return the sum of multiplicities."""
        return sum(root.multiplicity for root in self.roots)

    @property
    def values(self) -> List[complex]:
        """Return the distinct root values."""
        return [root.value for root in self.roots]

    @property
    def multiplicities(self) -> List[int]:
        """Return the multiplicities."""
        return [root.multiplicity for root in self.roots]

    @property
    def is_simple(self) -> bool:
        """Return True if all roots are simple."""
        return all(root.multiplicity == 1 for root in self.roots)

    @property
    def first(self) -> complex:
        """Return the root of smallest real part."""
        return self.roots[0].value

    def as_factors(self) -> List[Tuple[complex, int]]:
        """Return (value, multiplicity) pairs."""
        return [(root.value, root.multiplicity) for root in self.roots]


def _base(model: ModelArg) -> LevyModel:
    return model.base if isinstance(model, RefractedModel) else model


def _check_poles(base: LevyModel, s_arr: np.ndarray):
    pole_tol = get_opt("pole_tol")
    for rate in base.active_up.rates:
        if np.any(np.abs(s_arr - rate) <= pole_tol * (1 + abs(rate))):
            raise PoleEvaluationError(f"Argument at upward pole s={rate}.")
    for rate in base.active_down.rates:
        if np.any(np.abs(s_arr + rate) <= pole_tol * (1 + abs(rate))):
            raise PoleEvaluationError(f"Argument at downward pole s={-rate}.")


def laplace_exponent(model: ModelArg, s, alpha: float = 0.0):
    """
    Return K(s) - alpha s.

    Parameters
    ----------
    model : ModelArg
        The Levy model.
    s : complex or array
        Argument(s), away from the poles eta_k and -theta_k.
    alpha : float, optional
        Drift reduction, by default 0.

    Returns
    -------
    complex or np.ndarray

    Raises
    ------
    PoleEvaluationError
        If an argument is within `pole_tol` of a pole.

    """
    base = _base(model)
    s_arr = np.asarray(s, dtype=complex)
    _check_poles(base, s_arr)
    value = 0.5 * base.sigma**2 * s_arr**2 + (base.mu - alpha) * s_arr
    up_dens, down_dens = base.active_up, base.active_down
    if not up_dens.is_empty:
        value = value + base.lambda_plus * (up_dens.transform(-s_arr) - 1)
    if not down_dens.is_empty:
        value = value + base.lambda_minus * (down_dens.transform(s_arr) - 1)
    return value[()] if value.ndim == 0 else value


def laplace_exponent_deriv(model: ModelArg, s, alpha: float = 0.0):
    """Return d/ds (K(s) - alpha s)."""
    base = _base(model)
    s_arr = np.asarray(s, dtype=complex)
    value = base.sigma**2 * s_arr + (base.mu - alpha)
    for term in base.active_up.terms:
        for j_idx, coeff in enumerate(term.coeffs):
            j_ord = j_idx + 1
            value = value + base.lambda_plus * coeff * j_ord * term.rate**j_ord / (
                term.rate - s_arr
            ) ** (j_ord + 1)
    for term in base.active_down.terms:
        for j_idx, coeff in enumerate(term.coeffs):
            j_ord = j_idx + 1
            value = value - base.lambda_minus * coeff * j_ord * term.rate**j_ord / (
                term.rate + s_arr
            ) ** (j_ord + 1)
    return value[()] if value.ndim == 0 else value


def psi(model: ModelArg, z):
    """
    Return the characteristic exponent psi(z) = log E[exp(i z X_1)].

    Raises
    ------
    PoleEvaluationError
        If z is at -i eta_k or +i theta_k.

    """
    return laplace_exponent(model, 1j * np.asarray(z, dtype=complex))


def psi_tilde(model: ModelArg, alpha: float, z):
    """Return psi(z) - i alpha z, the exponent of Y = X - alpha t."""
    return laplace_exponent(model, 1j * np.asarray(z, dtype=complex), alpha=alpha)


def cleared_polynomial(model: ModelArg, alpha: float, q: complex) -> np.ndarray:
    """
    Return ascending coefficients of (K(s) - alpha s - q) P(s).

    P(s) = prod (eta_k - s)^m_k prod (theta_k + s)^n_k clears every
    denominator of the rational part.
    """
    base = _base(model)
    up_terms = base.active_up.terms
    down_terms = base.active_down.terms
    up_facs = [npoly.polypow([term.rate, -1.0], term.order) for term in up_terms]
    down_facs = [npoly.polypow([term.rate, 1.0], term.order) for term in down_terms]

    def _prod(polys: Sequence[np.ndarray]) -> np.ndarray:
        result = np.array([1.0 + 0j])
        for poly in polys:
            result = npoly.polymul(result, poly)
        return result

    lam_total = (base.lambda_plus if up_terms else 0) + (
        base.lambda_minus if down_terms else 0
    )
    quad = np.array([-(q + lam_total), base.mu - alpha, 0.5 * base.sigma**2], complex)
    total = npoly.polymul(quad, _prod(up_facs + down_facs))
    for idx, term in enumerate(up_terms):
        rest = _prod(up_facs[:idx] + up_facs[idx + 1 :] + down_facs)
        for j_idx, coeff in enumerate(term.coeffs):
            j_ord = j_idx + 1
            part = npoly.polypow([term.rate, -1.0], term.order - j_ord)
            weight = base.lambda_plus * coeff * term.rate**j_ord
            piece = weight * npoly.polymul(part, rest)
            total = npoly.polyadd(total, piece)
    for idx, term in enumerate(down_terms):
        rest = _prod(down_facs[:idx] + down_facs[idx + 1 :] + up_facs)
        for j_idx, coeff in enumerate(term.coeffs):
            j_ord = j_idx + 1
            part = npoly.polypow([term.rate, 1.0], term.order - j_ord)
            weight = base.lambda_minus * coeff * term.rate**j_ord
            piece = weight * npoly.polymul(part, rest)
            total = npoly.polyadd(total, piece)
    scale = np.max(np.abs(total))
    return npoly.polytrim(total, tol=1e-14 * scale)


def expected_count(model: ModelArg, alpha: float, side: RootSide) -> int:
    """
    Return the predicted total multiplicity of a root set.

    Beta side: sum m_k, plus one unless sigma=0 and mu <= alpha.
    Gamma side: sum n_k, plus one unless sigma=0 and mu >= 0.
    """
    base = _base(model)
    if side == RootSide.LOWER_BETA:
        extra = 0 if base.sigma == 0 and base.mu <= alpha else 1
        return base.active_up.total_order + extra
    extra = 0 if base.sigma == 0 and base.mu >= 0 else 1
    return base.active_down.total_order + extra


def _cluster(roots: np.ndarray) -> List[Tuple[complex, int]]:
    """Group roots closer than `cluster_tol` (1 + |r|)."""
    tol = get_opt("cluster_tol")
    clusters: List[List[complex]] = []
    for root in sorted(roots, key=lambda val: (val.real, val.imag)):
        for members in clusters:
            centre = np.mean(members)
            if abs(root - centre) <= tol * (1 + abs(centre)):
                members.append(root)
                break
        else:
            clusters.append([root])
    return [(complex(np.mean(members)), len(members)) for members in clusters]


def _snap_conjugates(values: List[complex]) -> List[complex]:
    """Make near-real roots real and pair conjugates exactly."""
    snapped = [
        complex(val.real, 0.0) if abs(val.imag) <= _REAL_SNAP * (1 + abs(val)) else val
        for val in values
    ]
    for idx, val in enumerate(snapped):
        if val.imag >= 0:
            continue
        partners = [other for other in snapped if other.imag > 0]
        if partners:
            best = min(partners, key=lambda other: abs(other.conjugate() - val))
            if abs(best.conjugate() - val) <= 1e-6 * (1 + abs(val)):
                snapped[idx] = best.conjugate()
    return snapped


def _candidate_roots(model: ModelArg, alpha: float, q: complex) -> np.ndarray:
    """Return roots of the cleared polynomial minus pole artifacts."""
    base = _base(model)
    coeffs = cleared_polynomial(base, alpha, q)
    if len(coeffs) < 2:
        return np.zeros(0, dtype=complex)
    raw = npoly.polyroots(coeffs).astype(complex)
    poles = list(base.active_up.rates) + [-rate for rate in base.active_down.rates]
    tol = get_opt("cluster_tol")
    keep = [
        root
        for root in raw
        if all(abs(root - pole) > tol * (1 + abs(pole)) for pole in poles)
    ]
    return np.array(keep, dtype=complex)


def _polish(model: ModelArg, alpha: float, q: complex, root: complex) -> complex:
    for _ in range(get_opt("newton_steps")):
        deriv = laplace_exponent_deriv(model, root, alpha)
        if abs(deriv) == 0:
            break
        step = (laplace_exponent(model, root, alpha) - q) / deriv
        root = root - step
    return complex(root)


def _finish(
    model: ModelArg,
    alpha: float,
    q: complex,
    side: RootSide,
    s_roots: List[Tuple[complex, int]],
) -> RootSet:
    """Polish, verify and package roots given as s-values of K(s) - alpha s = q."""
    base = _base(model)
    real_case = base.is_real and np.imag(q) == 0
    values = [val for val, _ in s_roots]
    if real_case:
        values = _snap_conjugates(values)
    polished = []
    for val, (_, mult) in zip(values, s_roots):
        if mult == 1:
            val = _polish(base, alpha, q, val)
            near_real = abs(val.imag) <= _REAL_SNAP * (1 + abs(val))
            if real_case and val.imag != 0 and near_real:
                val = complex(val.real, 0.0)
        polished.append((val, mult))
    if real_case:
        fixed = _snap_conjugates([val for val, _ in polished])
        polished = [(val, mult) for val, (_, mult) in zip(fixed, polished)]

    tol = get_opt("root_tol") * (1 + abs(q))
    residuals = []
    for val, _ in polished:
        resid = float(abs(laplace_exponent(base, val, alpha) - q))
        if resid > tol:
            raise NonConvergenceError(
                f"Root s={val} has residual {resid:.3g} > {tol:.3g} (q={q})."
            )
        residuals.append(resid)

    sign = 1 if side == RootSide.LOWER_BETA else -1
    reported = [(sign * val, mult) for val, mult in polished]
    order = sorted(
        range(len(reported)),
        key=lambda idx: (reported[idx][0].real, reported[idx][0].imag),
    )
    root_set = RootSet(
        side=side,
        q=q,
        roots=[Root(reported[idx][0], reported[idx][1]) for idx in order],
        residuals=[residuals[idx] for idx in order],
    )
    if real_case and root_set.roots:
        first = root_set.roots[0]
        if first.value.imag != 0 or first.multiplicity != 1 or first.value.real <= 0:
            raise NonConvergenceError(
                f"First root {first.value} (multiplicity {first.multiplicity}) "
                "is not real and simple."
            )
    return root_set


def _solve(model: ModelArg, alpha: float, q: complex, side: RootSide) -> RootSet:
    if np.real(q) <= 0:
        raise ValueError(f"q must have positive real part, got {q}.")
    candidates = _candidate_roots(model, alpha, q)
    if side == RootSide.LOWER_BETA:
        selected = candidates[candidates.real > 0]
    else:
        selected = candidates[candidates.real < 0]
    clusters = _cluster(selected)
    expected = expected_count(model, alpha, side)
    found = sum(mult for _, mult in clusters)
    if found != expected:
        raise RootCountMismatchError(
            f"{side.value}: found total multiplicity {found},"
            f" expected {expected} (q={q})."
        )
    return _finish(model, alpha, q, side, clusters)


def roots_beta(model: ModelArg, alpha: float, q: complex) -> RootSet:
    """
    Return the roots of psi_tilde(z) = q with Im z < 0 as beta = iz.

    Parameters
    ----------
    model : ModelArg
        Validated model.
    alpha : float
        Refraction drift.
    q : complex
        Discount rate with positive real part.

    Returns
    -------
    RootSet
        Beta roots with multiplicities.

    Raises
    ------
    RootCountMismatchError
        The total multiplicity differs from the predicted count.
    NonConvergenceError
        A root residual exceeds `root_tol` (1 + |q|).

    """
    return _solve(model, alpha, q, RootSide.LOWER_BETA)


def roots_gamma(model: ModelArg, q: complex) -> RootSet:
    """Return the roots of psi(z) = q with Im z > 0 as gamma = -iz."""
    return _solve(model, 0.0, q, RootSide.UPPER_GAMMA)


def track_roots(
    model: ModelArg,
    alpha: float,
    q_target: complex,
    side: RootSide,
    q_start: complex = None,
    n_steps: int = 64,
) -> RootSet:
    """
    Follow a root set continuously to a complex `q_target`.

    The set is solved directly at `q_start` (positive real part) and then
    matched step by step along the straight segment to `q_target`.

    Raises
    ------
    ComplexRootTrackingError
        Repeated roots, or a step where nearest-root matching is ambiguous.

    """
    q_target = complex(q_target)
    if q_start is None:
        q_start = complex(max(abs(q_target.real), 1e-3 * abs(q_target)), q_target.imag)
    eq_alpha = alpha if side == RootSide.LOWER_BETA else 0.0
    start_set = _solve(model, eq_alpha, q_start, side)
    if not start_set.is_simple:
        raise ComplexRootTrackingError("Cannot track repeated roots.")
    sign = 1 if side == RootSide.LOWER_BETA else -1
    current = [sign * val for val in start_set.values]
    for step in range(1, n_steps + 1):
        q_step = q_start + (q_target - q_start) * step / n_steps
        candidates = list(_candidate_roots(model, eq_alpha, q_step))
        matched = []
        for val in current:
            if len(candidates) < 1:
                raise ComplexRootTrackingError(f"Lost roots at q={q_step}.")
            dists = sorted(
                (abs(cand - val), idx) for idx, cand in enumerate(candidates)
            )
            if len(dists) > 1 and dists[0][0] >= 0.5 * dists[1][0]:
                raise ComplexRootTrackingError(f"Ambiguous root match at q={q_step}.")
            matched.append(candidates.pop(dists[0][1]))
        current = matched
    return _finish(model, eq_alpha, q_target, side, [(val, 1) for val in current])
