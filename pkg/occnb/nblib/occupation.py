# -------------------------------------------------------------------------
# Copyright (c) occnb developers. All rights reserved.
# Licensed under the MIT License. See License.txt in the project root for
# license information.
# --------------------------------------------------------------------------
"""
Occupation time below a level for the refracted process.

With xi = p + q the Laplace transform of the occupation time up to e(q),
V(x) = E_x[exp(-p int_0^e(q) 1{U_s < b} ds)], is

    q/xi + sum H_mi (b - x)^(i-1)/(i-1)! exp(beta_m,xi (x - b)),   x < b
    1    + sum G_ni (x - b)^(i-1)/(i-1)! exp(gamma_n,q (b - x)),   x >= b

where H and G are the principal parts of

    f(x) = (p / xi) psi+_xi(-x) psi-_q(x) / x

at beta_m,xi and -gamma_n,q. The expected occupation time uses
f0(x) = psi+_q(-x) psi-_q(x) / x in the same way.
"""
from math import factorial
from typing import List, Optional, Tuple, Union

import attr
import numpy as np
import pandas as pd
from scipy import integrate

from ..common import OutsideStripError, RegimeContractViolation
from .._version import VERSION
from .charexp import ModelArg, _base, laplace_exponent
from .firstpassage import exit_down_law, exit_up_law
from .model import Regime, RegimeInfo, regime_of
from .rational import RationalFn
from .wienerhopf import WienerHopfFactor, eval_factor, neg_factor, pos_factor, realize

__version__ = VERSION
__author__ = "occnb developers"

_METHODS = ("auto", "general", "simple")
_TERM_COLS = ["root_re", "root_im", "order", "coeff_re", "coeff_im"]


@attr.s(auto_attribs=True, frozen=True)
class ExpTerm:
    """Exponential-polynomial term coeff * d^(order-1)/(order-1)! exp(-root d)."""

    root: complex
    order: int
    coeff: complex


def _scale_terms(terms: Tuple[ExpTerm, ...], factor: complex) -> Tuple[ExpTerm, ...]:
    return tuple(ExpTerm(trm.root, trm.order, trm.coeff * factor) for trm in terms)


@attr.s(auto_attribs=True, frozen=True)
class PiecewiseExpPoly:
    """
    Function of x given separately below b and on [b, inf).

    Attributes
    ----------
    b : float
        Level.
    below_constant : complex
        Limit as x -> -inf.
    below_terms : Tuple[ExpTerm, ...]
        Terms in the distance b - x with roots beta.
    above_constant : complex
        Limit as x -> +inf.
    above_terms : Tuple[ExpTerm, ...]
        Terms in the distance x - b with roots gamma.
    real : bool
        True if values are real (conjugate terms combine).
    label : str
        Name of the represented quantity.

    """

    b: float
    below_constant: complex
    below_terms: Tuple[ExpTerm, ...]
    above_constant: complex
    above_terms: Tuple[ExpTerm, ...]
    real: bool = True
    label: str = "value"

    @staticmethod
    def _sum_terms(terms: Tuple[ExpTerm, ...], dist: np.ndarray) -> np.ndarray:
        total = np.zeros(dist.shape, dtype=complex)
        for term in terms:
            total = total + term.coeff * dist ** (term.order - 1) / factorial(
                term.order - 1
            ) * np.exp(-term.root * dist)
        return total

    def evaluate(self, x) -> np.ndarray:
        """Return the complex values at `x` (x = b uses the upper branch)."""
        x_arr = np.asarray(x, dtype=float)
        below = x_arr < self.b
        dist = np.abs(x_arr - self.b)
        value = np.where(
            below,
            self.below_constant + self._sum_terms(self.below_terms, dist),
            self.above_constant + self._sum_terms(self.above_terms, dist),
        )
        return value[()] if value.ndim == 0 else value

    def __call__(self, x):
        """Return values, realized if the function is real."""
        value = self.evaluate(x)
        if self.real:
            return realize(value, self.label)
        return value

    def _first_order(self, terms) -> complex:
        return sum((term.coeff for term in terms if term.order == 1), 0j)

    @property
    def left_limit(self) -> complex:
        """Return the limit as x increases to b."""
        return self.below_constant + self._first_order(self.below_terms)

    @property
    def value_at_b(self) -> complex:
        """Return the value at b (upper branch)."""
        return self.above_constant + self._first_order(self.above_terms)

    @property
    def atom_at_b(self) -> complex:
        """Return the jump value(b) - value(b-)."""
        return self.value_at_b - self.left_limit

    @property
    def left_derivative(self) -> complex:
        """Return the derivative from the left at b."""
        return sum(
            (term.coeff * term.root for term in self.below_terms if term.order == 1), 0j
        ) - sum((term.coeff for term in self.below_terms if term.order == 2), 0j)

    @property
    def right_derivative(self) -> complex:
        """Return the derivative from the right at b."""
        return -sum(
            (term.coeff * term.root for term in self.above_terms if term.order == 1), 0j
        ) + sum((term.coeff for term in self.above_terms if term.order == 2), 0j)

    def scaled(self, factor: complex, label: str = None) -> "PiecewiseExpPoly":
        """Return the function multiplied by `factor`."""
        return PiecewiseExpPoly(
            b=self.b,
            below_constant=self.below_constant * factor,
            below_terms=_scale_terms(self.below_terms, factor),
            above_constant=self.above_constant * factor,
            above_terms=_scale_terms(self.above_terms, factor),
            real=self.real,
            label=label or self.label,
        )

    def strip(self) -> Tuple[float, float]:
        """Return the open strip (lo, hi) of Re(phi) where transforms converge."""
        lo = -min((term.root.real for term in self.above_terms), default=np.inf)
        hi = min((term.root.real for term in self.below_terms), default=np.inf)
        return lo, hi

    def stieltjes_transform(self, phi: complex) -> complex:
        """
        Return -integral exp(-phi (x - b)) d(value)(x) in closed form.

        The jump at b is included. Valid in `strip()`.
        """
        phi = complex(phi)
        self._check_strip(phi)
        below, above = self._resolvent_sums(phi)
        return (self.below_constant - self.above_constant) - phi * (below + above)

    def level_transform(self, phi: complex) -> complex:
        """
        Return integral exp(-phi (x - b)) (value(x) - above_constant) dx.

        Requires Re(phi) < 0 when the two constants differ.
        """
        phi = complex(phi)
        self._check_strip(phi)
        if self.below_constant != self.above_constant and phi.real >= 0:
            raise OutsideStripError("Level transform needs Re(phi) < 0.")
        below, above = self._resolvent_sums(phi)
        const = 0j
        if self.below_constant != self.above_constant:
            const = (self.above_constant - self.below_constant) / phi
        return const + below + above

    def _resolvent_sums(self, phi: complex) -> Tuple[complex, complex]:
        below = sum(
            (trm.coeff / (trm.root - phi) ** trm.order for trm in self.below_terms), 0j
        )
        above = sum(
            (trm.coeff / (trm.root + phi) ** trm.order for trm in self.above_terms), 0j
        )
        return below, above

    def _check_strip(self, phi: complex):
        lo, hi = self.strip()
        if not lo < phi.real < hi:
            raise OutsideStripError(f"Re(phi)={phi.real} outside ({lo:.6g}, {hi:.6g}).")

    def to_frame(self) -> pd.DataFrame:
        """Return the coefficient table."""
        rows = [
            {
                "branch": branch,
                "root_re": term.root.real,
                "root_im": term.root.imag,
                "order": term.order,
                "coeff_re": term.coeff.real,
                "coeff_im": term.coeff.imag,
            }
            for branch, terms in (
                ("below", self.below_terms),
                ("above", self.above_terms),
            )
            for term in terms
        ]
        return pd.DataFrame(rows, columns=["branch", *_TERM_COLS])

    def grid_frame(self, x_grid) -> pd.DataFrame:
        """Return a DataFrame with columns x and value."""
        x_arr = np.asarray(x_grid, dtype=float)
        values = self(x_arr)
        if not self.real:
            return pd.DataFrame(
                {"x": x_arr, "value_re": np.real(values), "value_im": np.imag(values)}
            )
        return pd.DataFrame({"x": x_arr, "value": values})


def _base_alpha(model: ModelArg, alpha: Optional[float]) -> Tuple[object, float]:
    if alpha is None:
        alpha = getattr(model, "alpha", 0.0)
    return _base(model), float(alpha)


def _is_real(model: ModelArg, *rates: complex) -> bool:
    return _base(model).is_real and all(np.imag(rate) == 0 for rate in rates)


def _wh_product_fn(
    pos: WienerHopfFactor, neg: WienerHopfFactor, scale: complex
) -> RationalFn:
    """Return scale * psi+(-x) psi-(x) / x as a rational function of x."""
    pos_zero_ord = sum(order for _, order in pos.rates)
    pos_pole_ord = pos.roots.total_multiplicity
    sign = (-1) ** (pos_zero_ord + pos_pole_ord)
    return RationalFn(
        scale * pos.product_constant * neg.product_constant * sign,
        zeros=[(rate, order) for rate, order in pos.rates]
        + [(-rate, order) for rate, order in neg.rates],
        poles=[(root, mult) for root, mult in pos.roots.as_factors()]
        + [(-root, mult) for root, mult in neg.roots.as_factors()]
        + [(0j, 1)],
    )


def f_fn(
    model: ModelArg,
    alpha: float,
    p: float,
    q: float,
    pos_xi: WienerHopfFactor = None,
    neg_q: WienerHopfFactor = None,
) -> RationalFn:
    """
    Return f(x) = (p / xi) psi+_xi(-x) psi-_q(x) / x with xi = p + q.

    Parameters
    ----------
    model : ModelArg
        Validated model.
    alpha : float
        Refraction drift.
    p : float
        Occupation penalty (> 0).
    q : float
        Discount rate (> 0).
    pos_xi, neg_q : WienerHopfFactor, optional
        Precomputed factors at xi and q.

    Returns
    -------
    RationalFn
        Proper rational function with a simple pole at 0 of residue p / xi.

    """
    xi = p + q
    pos_xi = pos_xi or pos_factor(model, alpha, xi)
    neg_q = neg_q or neg_factor(model, q)
    return _wh_product_fn(pos_xi, neg_q, p / xi)


def f0_fn(
    model: ModelArg,
    alpha: float,
    q: complex,
    pos_q: WienerHopfFactor = None,
    neg_q: WienerHopfFactor = None,
) -> RationalFn:
    """Return f0(x) = psi+_q(-x) psi-_q(x) / x."""
    pos_q = pos_q or pos_factor(model, alpha, q)
    neg_q = neg_q or neg_factor(model, q)
    return _wh_product_fn(pos_q, neg_q, 1.0)


def _principal_parts(
    func: RationalFn, locations: List[Tuple[complex, int]], method: str
) -> List[np.ndarray]:
    if method not in _METHODS:
        raise ValueError(f"method must be one of {_METHODS}")
    all_simple = all(mult == 1 for _, mult in locations)
    if method == "simple" and not all_simple:
        raise ValueError("The simple-root path needs all multiplicities equal to 1.")
    use_simple = method == "simple" or (method == "auto" and all_simple)
    parts = []
    for loc, mult in locations:
        if use_simple:
            parts.append(np.array([func.simple_residue(loc)]))
        else:
            parts.append(func.laurent(loc, mult))
    return parts


def _assemble(
    func: RationalFn,
    pos: WienerHopfFactor,
    neg: WienerHopfFactor,
    method: str,
) -> Tuple[Tuple[ExpTerm, ...], Tuple[ExpTerm, ...]]:
    """Return (H terms, G terms) from the principal parts of `func`."""
    beta_locs = pos.roots.as_factors()
    gamma_locs = [(-root, mult) for root, mult in neg.roots.as_factors()]
    h_parts = _principal_parts(func, beta_locs, method)
    g_parts = _principal_parts(func, gamma_locs, method)
    h_terms = tuple(
        ExpTerm(root, i_idx + 1, complex((-1) ** (i_idx + 1) * coeff))
        for (root, _), coeffs in zip(beta_locs, h_parts)
        for i_idx, coeff in enumerate(coeffs)
    )
    g_terms = tuple(
        ExpTerm(-loc, i_idx + 1, complex(coeff))
        for (loc, _), coeffs in zip(gamma_locs, g_parts)
        for i_idx, coeff in enumerate(coeffs)
    )
    return h_terms, g_terms


def occupation_laplace(
    model: ModelArg,
    alpha: float,
    b: float,
    p: float,
    q: float,
    method: str = "auto",
    pos_xi: WienerHopfFactor = None,
    neg_q: WienerHopfFactor = None,
) -> PiecewiseExpPoly:
    """
    Return V(x) = E_x[exp(-p * occupation below b up to e(q))].

    Parameters
    ----------
    model : ModelArg
        Validated model.
    alpha : float
        Refraction drift.
    b : float
        Refraction level.
    p : float
        Occupation penalty (>= 0, p = 0 gives V = 1).
    q : float
        Discount rate (> 0).
    method : str, optional
        "general" (contour residues), "simple" (product formula, all
        roots simple) or "auto" (simple when possible), by default "auto".
    pos_xi, neg_q : WienerHopfFactor, optional
        Precomputed factors at xi = p + q and q.

    Returns
    -------
    PiecewiseExpPoly
        V with below constant q / xi and above constant 1.

    """
    if p < 0 or np.real(q) <= 0:
        raise ValueError("Require p >= 0 and q > 0.")
    real = _is_real(model, q)
    if p == 0:
        return PiecewiseExpPoly(b, 1.0, (), 1.0, (), real=real, label="V")
    xi = p + q
    pos_xi = pos_xi or pos_factor(model, alpha, xi)
    neg_q = neg_q or neg_factor(model, q)
    func = f_fn(model, alpha, p, q, pos_xi, neg_q)
    h_terms, g_terms = _assemble(func, pos_xi, neg_q, method)
    return PiecewiseExpPoly(
        b=float(b),
        below_constant=q / xi,
        below_terms=h_terms,
        above_constant=1.0,
        above_terms=g_terms,
        real=real,
        label="V",
    )


def occupation_expectation(
    model: ModelArg,
    alpha: float,
    b: float,
    q: complex,
    method: str = "auto",
    pos_q: WienerHopfFactor = None,
    neg_q: WienerHopfFactor = None,
) -> PiecewiseExpPoly:
    """
    Return E_x[integral_0^e(q) 1{U_s < b} ds].

    Below b the value is (1/q)(1 - sum H0 ...), at or above b it is
    -(1/q) sum G0 ..., with H0 and G0 the principal parts of f0. It is
    computed directly from f0 and never as a limit in p.

    Parameters
    ----------
    model : ModelArg
        Validated model.
    alpha : float
        Refraction drift.
    b : float
        Refraction level.
    q : complex
        Discount rate with positive real part (complex q needs
        precomputed factors from tracked roots).
    method : str, optional
        See `occupation_laplace`.
    pos_q, neg_q : WienerHopfFactor, optional
        Precomputed factors at q.

    Returns
    -------
    PiecewiseExpPoly

    """
    pos_q = pos_q or pos_factor(model, alpha, q)
    neg_q = neg_q or neg_factor(model, q)
    func = f0_fn(model, alpha, q, pos_q, neg_q)
    h_terms, g_terms = _assemble(func, pos_q, neg_q, method)
    scale = -1.0 / q
    return PiecewiseExpPoly(
        b=float(b),
        below_constant=1.0 / q,
        below_terms=tuple(ExpTerm(t.root, t.order, t.coeff * scale) for t in h_terms),
        above_constant=0.0,
        above_terms=tuple(ExpTerm(t.root, t.order, t.coeff * scale) for t in g_terms),
        real=_is_real(model, q),
        label="expectation",
    )


def distribution_function(
    model: ModelArg, alpha: float, b: float, q: float, method: str = "auto"
) -> PiecewiseExpPoly:
    """Return x -> P_x(U_e(q) < b) = q * expectation(x)."""
    return occupation_expectation(model, alpha, b, q, method).scaled(q, "distribution")


def distribution_at_exp(
    model: ModelArg, alpha: float, b: float, q: float, x: Union[float, np.ndarray]
):
    """Return P_x(U_e(q) < b), the distribution at an exponential time."""
    return distribution_function(model, alpha, b, q)(x)


def compound_poisson_ratio(model: ModelArg, alpha: float, q: float) -> float:
    """
    Return prod beta^M prod gamma^N / (prod eta^m prod theta^n) at q.

    For sigma = 0 and mu = alpha = 0 this equals q / (q + lambda+ + lambda-).
    """
    pos = pos_factor(model, alpha, q)
    neg = neg_factor(model, q)
    return float(realize(pos.product_constant * neg.product_constant, "ratio"))


def distribution_atom(
    model: ModelArg, alpha: float, q: float, from_coefficients: bool = False
) -> float:
    """
    Return P_b(U_e(q) < b) - lim_{x -> b-} P_x(U_e(q) < b).

    Zero unless sigma = 0 and 0 <= mu <= alpha, where it equals minus
    the root/rate product ratio. With `from_coefficients` the value is
    read off the assembled distribution instead.
    """
    base, alpha = _base_alpha(model, alpha)
    if from_coefficients:
        dist = distribution_function(base, alpha, 0.0, q)
        return float(realize(dist.atom_at_b, "atom"))
    if not regime_of(base, alpha).has_occupation_atom:
        return 0.0
    return -compound_poisson_ratio(base, alpha, q)


def identity_lhs(
    model: ModelArg,
    alpha: float,
    b: float,
    q: float,
    phi: complex,
    method: str = "auto",
) -> complex:
    """
    Return -integral exp(-phi (x - b)) d_x P_x(U_e(q) < b).

    Closed form from the exponential-polynomial terms, including the
    jump at b. Valid for -gamma_1 < Re(phi) < beta_1.

    Raises
    ------
    OutsideStripError
        If phi is outside the strip.

    """
    dist = distribution_function(model, alpha, b, q, method)
    return complex(dist.stieltjes_transform(phi))


def identity_rhs(model: ModelArg, alpha: float, q: float, phi: complex) -> complex:
    """
    Return E[exp(phi sup Y)] * E[exp(phi inf X)] at e(q).

    Raises
    ------
    OutsideAnalyticRegionError
        If -phi or phi leaves the analytic region of its factor.

    """
    pos = pos_factor(model, alpha, q)
    neg = neg_factor(model, q)
    return complex(eval_factor(pos, -phi) * eval_factor(neg, phi))


def wiener_hopf_identity(model: ModelArg, q: float, phi: complex) -> complex:
    """Return E[exp(phi X_e(q))] = q / (q - K(phi)) for the unrefracted process."""
    return complex(q / (q - laplace_exponent(model, phi)))


@attr.s(auto_attribs=True, frozen=True)
class SmoothnessReport:
    """Values and derivatives of V on both sides of b."""

    left_limit: float
    right_value: float
    left_derivative: float
    right_derivative: float
    atom: float
    expected_atom: Optional[float]
    regime: str

    @property
    def value_jump(self) -> float:
        """Return V(b) - V(b-)."""
        return self.right_value - self.left_limit

    @property
    def derivative_jump(self) -> float:
        """Return V'(b) - V'(b-)."""
        return self.right_derivative - self.left_derivative


def smoothness_report(
    V: PiecewiseExpPoly,  # pylint: disable=invalid-name
    regime: RegimeInfo,
    expected_atom: float = None,
    value_tol: float = 1e-9,
    deriv_tol: float = 1e-7,
) -> SmoothnessReport:
    """
    Check continuity and differentiability of V at b against the regime.

    Parameters
    ----------
    V : PiecewiseExpPoly
        Assembled occupation Laplace transform.
    regime : RegimeInfo
        Regime of the model.
    expected_atom : float, optional
        Closed-form jump (p / xi) C0(xi) D0(q), checked if supplied.
    value_tol, deriv_tol : float
        Continuity tolerances.

    Raises
    ------
    RegimeContractViolation
        If the computed behavior contradicts the regime table.

    """
    report = SmoothnessReport(
        left_limit=float(realize(V.left_limit)),
        right_value=float(realize(V.value_at_b)),
        left_derivative=float(realize(V.left_derivative)),
        right_derivative=float(realize(V.right_derivative)),
        atom=float(realize(V.atom_at_b)),
        expected_atom=expected_atom,
        regime=regime.regime.value,
    )
    jump = report.value_jump
    if regime.has_occupation_atom:
        if jump <= 0:
            raise RegimeContractViolation(
                f"Expected a positive jump at b, got {jump:.3g}."
            )
    elif abs(jump) >= value_tol:
        raise RegimeContractViolation(
            f"V jumps by {jump:.3g} at b in a continuous regime."
        )
    smooth_fit = regime.regime == Regime.POSITIVE_VOLATILITY
    if smooth_fit and abs(report.derivative_jump) >= deriv_tol:
        raise RegimeContractViolation(
            f"V' jumps by {report.derivative_jump:.3g} at b with sigma > 0."
        )
    if expected_atom is not None and abs(jump - expected_atom) >= value_tol:
        raise RegimeContractViolation(
            f"Jump {jump:.12g} differs from closed form {expected_atom:.12g}."
        )
    return report


def expected_jump(model: ModelArg, alpha: float, p: float, q: float) -> float:
    """Return (p / xi) C0(xi) D0(q), the closed-form jump of V at b."""
    xi = p + q
    pos = pos_factor(model, alpha, xi)
    neg = neg_factor(model, q)
    return float(realize(p / xi * pos.atom * neg.atom, "jump"))


@attr.s(auto_attribs=True, frozen=True)
class RenewalCheck:
    """Comparison of V(x) with its strong-Markov renewal value."""

    x: float
    value: float
    renewal: float

    @property
    def residual(self) -> float:
        """Return |V(x) - renewal value|."""
        return abs(self.value - self.renewal)


def _quad_complex(func, upper: float = np.inf) -> complex:
    opts = dict(epsabs=1e-12, epsrel=1e-11, limit=200)
    re_part, _ = integrate.quad(lambda y: float(np.real(func(y))), 0, upper, **opts)
    im_part, _ = integrate.quad(lambda y: float(np.imag(func(y))), 0, upper, **opts)
    return complex(re_part, im_part)


def renewal_residual(
    model: ModelArg,
    alpha: float,
    b: float,
    p: float,
    q: float,
    x: float,
    V: PiecewiseExpPoly = None,  # pylint: disable=invalid-name
) -> RenewalCheck:
    """
    Return V(x) and its value rebuilt through the first passage over b.

    Below b the process runs as Y killed at rate xi = p + q until it
    passes above b; at or above b it runs as X killed at rate q until it
    passes below b. The overshoot integrals against V are done by
    quadrature.
    """
    xi = p + q
    V = V or occupation_laplace(model, alpha, b, p, q)
    v_b = complex(V.evaluate(b))
    if x < b:
        law = exit_up_law(model, alpha, xi, b - x)
        floor = q / xi
        renewal = floor + law.atom * (v_b - floor)
        for term in law.terms:
            integral = _quad_complex(
                lambda y, term=term: term.rate**term.order
                * y ** (term.order - 1)
                / factorial(term.order - 1)
                * np.exp(-term.rate * y)
                * V.evaluate(b + y)
            )
            renewal += term.coeff * (integral - floor)
    else:
        law = exit_down_law(model, q, b - x)
        renewal = 1.0 + law.atom * (v_b - 1.0)
        for term in law.terms:
            integral = _quad_complex(
                lambda y, term=term: term.rate**term.order
                * y ** (term.order - 1)
                / factorial(term.order - 1)
                * np.exp(-term.rate * y)
                * V.evaluate(b - y)
            )
            renewal += term.coeff * (integral - 1.0)
    return RenewalCheck(
        x=float(x),
        value=float(realize(V.evaluate(x))),
        renewal=float(realize(renewal, "renewal")),
    )


def level_transform_rhs(
    model: ModelArg, alpha: float, p: float, q: float, phi: complex
) -> complex:
    """Return f(phi), the closed level transform of V - 1."""
    return complex(f_fn(model, alpha, p, q)(phi))


# pylint: disable=invalid-name
def check_bounds(V: PiecewiseExpPoly, x_grid) -> Tuple[float, float]:
    """Return (min, max) of a real piecewise function on a grid."""
    values = np.asarray(V(np.asarray(x_grid, dtype=float)), dtype=float)
    return float(values.min()), float(values.max())


def default_x_grid(V: PiecewiseExpPoly, n_points: int = 101) -> np.ndarray:
    """Return a grid around b scaled by the slowest decay rate."""
    rates = [term.root.real for term in V.below_terms + V.above_terms]
    width = 5.0 / min(rates) if rates else 1.0
    return np.linspace(V.b - width, V.b + width, n_points)

