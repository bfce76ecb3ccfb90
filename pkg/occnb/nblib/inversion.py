# -------------------------------------------------------------------------
# Copyright (c) occnb developers. All rights reserved.
# Licensed under the MIT License. See License.txt in the project root for
# license information.
# --------------------------------------------------------------------------
"""
Time-domain occupation times by numerical Laplace inversion.

The expected occupation up to e(q) is q times the Laplace transform in t
of g(t) = E_x[integral_0^t 1{U_s < b} ds], so g is recovered by inverting
F(q) = E_x[occupation up to e(q)] / q.

Gaver-Stehfest needs only real q > 0. Its weights and the alternating
sum run in mpmath; the transform itself is evaluated in double precision,
so the extra digits only absorb the cancellation between weights.
Talbot needs complex q; nodes in the left half-plane use roots followed
continuously from the right half-plane, and any failure falls back to
Gaver-Stehfest with a warning. Bounded results (occupation times) that
need clipping or monotone repair are reported with a notebook warning.
"""
import warnings
from functools import lru_cache
from typing import Callable, List, Optional, Sequence

import attr
import mpmath
import numpy as np
import pandas as pd

from ..common import InversionUnstableError, OccnbNumericalError, nb_warn
from .._version import VERSION
from .charexp import ModelArg, RootSide, _base, roots_beta, roots_gamma, track_roots
from .occupation import occupation_expectation
from .wienerhopf import neg_factor, pos_factor

__version__ = VERSION
__author__ = "occnb developers"

GAVER_STEHFEST = "gaver_stehfest"
TALBOT = "talbot"


def _check_order(instance, attribute, value):
    del attribute
    if instance.method == GAVER_STEHFEST and (value % 2 or not 8 <= value <= 20):
        raise ValueError(f"Gaver-Stehfest order must be even in [8, 20], got {value}.")


def _check_terms(instance, attribute, value):
    del instance, attribute
    if value < 16:
        raise ValueError(f"Talbot needs at least 16 terms, got {value}.")


@attr.s(auto_attribs=True, frozen=True)
class InversionConfig:
    """
    Settings for the numerical inversion.

    Attributes
    ----------
    method : str
        "gaver_stehfest" (default) or "talbot".
    order : int
        Gaver-Stehfest order (even, 8 to 20).
    talbot_terms : int
        Number of Talbot nodes (>= 16).
    t_grid : Sequence[float]
        Positive times.
    precision_digits : int
        mpmath working precision for Gaver-Stehfest.
    instability_tol : float
        Relative gap tolerated between orders N and N - 2.

    """

    method: str = attr.ib(
        default=GAVER_STEHFEST, validator=attr.validators.in_([GAVER_STEHFEST, TALBOT])
    )
    order: int = attr.ib(default=14, validator=_check_order)
    talbot_terms: int = attr.ib(default=24, validator=_check_terms)
    t_grid: Sequence[float] = attr.ib(converter=tuple, default=(1.0,))
    precision_digits: int = 30
    instability_tol: float = 1e-3

    @t_grid.validator
    def _check_grid(self, attribute, value):
        del attribute
        if not value or any(t_val <= 0 for t_val in value):
            raise ValueError("All inversion times must be positive.")


@attr.s(auto_attribs=True)
class InversionDiagnostics:
    """Diagnostics of an inversion run."""

    method_requested: str
    method_used: str
    order: int
    precision_digits: int
    order_gap: List[float] = attr.Factory(list)
    clipped: int = 0
    monotone_fixes: int = 0
    fallback_reason: Optional[str] = None
    q_evaluations: int = 0

    def to_dict(self) -> dict:
        """Return a JSON-serializable dictionary."""
        return attr.asdict(self)


@attr.s(auto_attribs=True)
class InversionResult:
    """Time grid, inverted values and diagnostics."""

    t: np.ndarray
    values: np.ndarray
    diagnostics: InversionDiagnostics

    def to_frame(self) -> pd.DataFrame:
        """Return a DataFrame with columns t and value."""
        return pd.DataFrame({"t": self.t, "value": self.values})


@lru_cache(maxsize=16)
def stehfest_weights(order: int, dps: int = 30) -> tuple:
    """Return the Gaver-Stehfest (Salzer) weights as mpmath numbers."""
    half = order // 2
    with mpmath.workdps(dps):
        weights = []
        for k_idx in range(1, order + 1):
            total = mpmath.mpf(0)
            for j_idx in range((k_idx + 1) // 2, min(k_idx, half) + 1):
                total += (
                    mpmath.mpf(j_idx) ** half
                    * mpmath.factorial(2 * j_idx)
                    / (
                        mpmath.factorial(half - j_idx)
                        * mpmath.factorial(j_idx)
                        * mpmath.factorial(j_idx - 1)
                        * mpmath.factorial(k_idx - j_idx)
                        * mpmath.factorial(2 * j_idx - k_idx)
                    )
                )
            weights.append((-1) ** (k_idx + half) * total)
    return tuple(weights)


def gaver_stehfest(
    func: Callable[[float], float], t_val: float, order: int = 14, dps: int = 30
) -> float:
    """
    Return the Gaver-Stehfest approximation of the inverse transform at t.

    `func` is called with Python floats and its values are taken as
    doubles. Only the weights and the weighted sum use `dps` digits, so
    the result cannot be more accurate than the transform values allow
    after the cancellation (roughly 10^(order / 2) amplification).
    """
    weights = stehfest_weights(order, dps)
    with mpmath.workdps(dps):
        step = mpmath.log(2) / mpmath.mpf(t_val)
        total = mpmath.mpf(0)
        for k_idx, weight in enumerate(weights, start=1):
            total += weight * mpmath.mpf(float(func(float(k_idx * step))))
        return float(step * total)


def fixed_talbot(
    func: Callable[[complex], complex], t_val: float, terms: int = 24
) -> float:
    """Return the fixed-Talbot approximation of the inverse transform at t."""
    r_par = 2.0 * terms / 5.0
    theta = np.pi * np.arange(1, terms) / terms
    cot = 1.0 / np.tan(theta)
    nodes = r_par * theta * (cot + 1j) / t_val
    sigma = theta + (theta * cot - 1.0) * cot
    total = 0.5 * np.exp(r_par) * float(np.real(func(complex(r_par / t_val))))
    for node, sig in zip(nodes, sigma):
        total += float(np.real(np.exp(t_val * node) * func(node) * (1 + 1j * sig)))
    return r_par / (terms * t_val) * total


def _postprocess(
    t_arr: np.ndarray, raw: np.ndarray, diag: InversionDiagnostics, bound: bool
):
    values = raw.copy()
    if bound:
        clipped = np.clip(values, 0.0, t_arr)
        diag.clipped = int(np.sum(clipped != values))
        values = clipped
        order = np.argsort(t_arr)
        monotone = np.maximum.accumulate(values[order])
        diag.monotone_fixes = int(np.sum(monotone != values[order]))
        values[order] = monotone
        if diag.clipped or diag.monotone_fixes:
            nb_warn(
                f"Inverted values repaired: {diag.clipped} clipped to [0, t],",
                f"{diag.monotone_fixes} raised to keep them non-decreasing in t.",
            )
    return values


def invert_transform(
    func: Callable,
    cfg: InversionConfig,
    bound_by_time: bool = False,
    complex_func: Callable = None,
) -> InversionResult:
    """
    Invert a Laplace transform on the configured time grid.

    Parameters
    ----------
    func : Callable
        Real transform q -> F(q) for q > 0.
    cfg : InversionConfig
        Inversion settings.
    bound_by_time : bool, optional
        If True, clip to [0, t] and enforce monotonicity in t (occupation
        times), by default False.
    complex_func : Callable, optional
        Transform for complex q (Talbot). Defaults to `func`.

    Returns
    -------
    InversionResult

    Raises
    ------
    InversionUnstableError
        If Gaver-Stehfest orders N and N - 2 disagree beyond tolerance.

    """
    t_arr = np.asarray(cfg.t_grid, dtype=float)
    diag = InversionDiagnostics(
        method_requested=cfg.method,
        method_used=cfg.method,
        order=cfg.talbot_terms if cfg.method == TALBOT else cfg.order,
        precision_digits=cfg.precision_digits,
    )
    raw = None
    if cfg.method == TALBOT:
        try:
            talbot_func = complex_func or func
            raw = np.array(
                [fixed_talbot(talbot_func, t_val, cfg.talbot_terms) for t_val in t_arr]
            )
        except OccnbNumericalError as err:
            warnings.warn(f"Talbot inversion failed ({err}); using Gaver-Stehfest.")
            diag.method_used = GAVER_STEHFEST
            diag.order = cfg.order if cfg.order % 2 == 0 else 14
            diag.fallback_reason = str(err)
    if raw is None:
        raw = np.empty(len(t_arr))
        for idx, t_val in enumerate(t_arr):
            high = gaver_stehfest(func, t_val, diag.order, cfg.precision_digits)
            low = gaver_stehfest(func, t_val, diag.order - 2, cfg.precision_digits)
            gap = abs(high - low)
            diag.order_gap.append(gap)
            if gap > cfg.instability_tol * (1 + abs(high)):
                raise InversionUnstableError(
                    f"Orders {diag.order} and {diag.order - 2} differ by {gap:.3g}"
                    f" at t={t_val}."
                )
            raw[idx] = high
    values = _postprocess(t_arr, raw, diag, bound_by_time)
    return InversionResult(t=t_arr, values=values, diagnostics=diag)


def occupation_transform(model: ModelArg, alpha: float, b: float, x: float) -> Callable:
    """
    Return the memoized q-function F(q) = E_x[occupation up to e(q)] / q.

    Complex q with non-positive real part uses tracked roots.
    """
    base = _base(model)

    @lru_cache(maxsize=512)
    def _transform(q_val: complex) -> complex:
        if np.imag(q_val) == 0 and np.real(q_val) > 0:
            q_arg = float(np.real(q_val))
            pos = pos_factor(base, alpha, q_arg)
            neg = neg_factor(base, q_arg)
        else:
            q_arg = complex(q_val)
            if q_arg.real > 0:
                beta = roots_beta(base, alpha, q_arg)
                gamma = roots_gamma(base, q_arg)
            else:
                beta = track_roots(base, alpha, q_arg, RootSide.LOWER_BETA)
                gamma = track_roots(base, 0.0, q_arg, RootSide.UPPER_GAMMA)
            pos = pos_factor(base, alpha, q_arg, roots=beta)
            neg = neg_factor(base, q_arg, roots=gamma)
        expect = occupation_expectation(base, alpha, b, q_arg, pos_q=pos, neg_q=neg)
        return complex(expect.evaluate(x)) / q_arg

    def _real(q_val: float) -> float:
        return float(np.real(_transform(complex(q_val))))

    def _complex(q_val: complex) -> complex:
        return _transform(complex(q_val))

    _real.complex_transform = _complex  # type: ignore
    _real.cache_info = _transform.cache_info  # type: ignore
    return _real


def invert_occupation(
    model: ModelArg, alpha: float, b: float, x: float, cfg: InversionConfig = None
) -> InversionResult:
    """
    Return t -> E_x[integral_0^t 1{U_s < b} ds] on the configured grid.

    Parameters
    ----------
    model : ModelArg
        Validated model.
    alpha : float
        Refraction drift.
    b : float
        Level.
    x : float
        Starting point.
    cfg : InversionConfig, optional
        Inversion settings, by default Gaver-Stehfest order 14 at t = 1.

    Returns
    -------
    InversionResult
        Values clipped to [0, t] and nondecreasing in t.

    """
    cfg = cfg or InversionConfig()
    func = occupation_transform(model, alpha, b, x)
    complex_func = func.complex_transform  # type: ignore
    result = invert_transform(func, cfg, bound_by_time=True, complex_func=complex_func)
    result.diagnostics.q_evaluations = func.cache_info().currsize  # type: ignore
    return result


@attr.s(auto_attribs=True)
class FeeResult:
    """Expected fee paid while the account sits below the level."""

    fee_rate: float
    horizon: float
    occupation: float
    value: float
    diagnostics: InversionDiagnostics


def fee_expectation(
    model: ModelArg,
    alpha: float,
    b: float,
    x: float,
    fee_rate: float,
    horizon: float,
    cfg: InversionConfig = None,
) -> FeeResult:
    """
    Return c * E_x[integral_0^T 1{U_s < b} ds].

    Raises
    ------
    ValueError
        If the fee rate is negative or the horizon not positive.

    """
    if fee_rate < 0 or horizon <= 0:
        raise ValueError("Require fee_rate >= 0 and horizon > 0.")
    cfg = attr.evolve(cfg or InversionConfig(), t_grid=(horizon,))
    result = invert_occupation(model, alpha, b, x, cfg)
    occupation = float(result.values[0])
    return FeeResult(
        fee_rate=fee_rate,
        horizon=horizon,
        occupation=occupation,
        value=fee_rate * occupation,
        diagnostics=result.diagnostics,
    )

