# -------------------------------------------------------------------------
# Copyright (c) occnb developers. All rights reserved.
# Licensed under the MIT License. See License.txt in the project root for
# license information.
# --------------------------------------------------------------------------
"""
Monte Carlo oracle for the refracted process.

U moves with drift mu - alpha while U < b and with drift mu otherwise.
Jump epochs are exact exponential clocks. Between jumps a positive
volatility is handled by Euler steps of at most `dt` with the drift of the
side at step start; with zero volatility the drift segments are followed
exactly and the crossing time of b is solved for.

Paths are simulated in blocks. Block `k` draws from
``SeedSequence(seed, spawn_key=(k,))`` so a block gives the same numbers
whatever order the blocks are run in.
"""
from typing import Iterator, Tuple

import attr
import numpy as np
from tqdm.auto import tqdm

from ..common import UnsampleableDensityError
from ..options import get_opt
from .._version import VERSION
from .charexp import ModelArg, _base
from .firstpassage import ExitDirection
from .model import LevyModel, RationalJumpDensity

__version__ = VERSION
__author__ = "occnb developers"

EXPONENTIAL = "exponential"
FIXED = "fixed"


def _positive(instance, attribute, value):
    del instance
    if not value > 0:
        raise ValueError(f"{attribute.name} must be positive, got {value}.")


@attr.s(auto_attribs=True, frozen=True)
class SimConfig:
    """
    Simulation settings.

    Attributes
    ----------
    dt : float
        Largest Euler step for sigma > 0.
    n_paths : int
        Number of paths.
    seed : int
        Root seed of the block streams.
    horizon : str
        "exponential" (independent e(q) per path) or "fixed" (time T).
    q : float
        Rate of the exponential horizon.
    T : float
        Length of the fixed horizon.
    block_size : int
        Paths simulated together in one vectorized block.

    """

    dt: float = attr.ib(default=1e-3, validator=_positive)
    n_paths: int = attr.ib(default=20_000, validator=_positive)
    seed: int = 20_240_601
    horizon: str = attr.ib(
        default=EXPONENTIAL, validator=attr.validators.in_([EXPONENTIAL, FIXED])
    )
    q: float = attr.ib(default=1.0, validator=_positive)
    T: float = attr.ib(default=1.0, validator=_positive)
    block_size: int = attr.ib(default=5_000, validator=_positive)


@attr.s(auto_attribs=True, frozen=True)
class SimEstimate:
    """Sample mean with its standard error (one sigma)."""

    mean: float
    std_error: float
    n_paths: int
    dt: float = 0.0
    seed: int = 0

    def within(self, value: float, n_se: float = 3.0, floor: float = 0.0) -> bool:
        """Return True if `value` lies within `n_se` standard errors."""
        return abs(self.mean - value) <= n_se * self.std_error + floor

    def to_dict(self) -> dict:
        """Return the JSON payload of the estimate."""
        return attr.asdict(self)


@attr.s(auto_attribs=True, frozen=True)
class OccupationSample:
    """Per-path occupation below b, terminal position and horizon."""

    occupation: np.ndarray
    terminal: np.ndarray
    horizon: np.ndarray


class _MixtureSampler:
    """Draws jump magnitudes from a nonnegative Erlang mixture."""

    def __init__(self, density: RationalJumpDensity, label: str):
        if not density.is_sampleable:
            raise UnsampleableDensityError(
                f"{label} has complex or negative coefficients and cannot be sampled."
            )
        comps = [
            (term.rate.real, j_idx + 1, coeff.real)
            for term in density.terms
            for j_idx, coeff in enumerate(term.coeffs)
            if coeff.real > 0
        ]
        self.rates = np.array([comp[0] for comp in comps])
        self.orders = np.array([comp[1] for comp in comps], dtype=float)
        weights = np.array([comp[2] for comp in comps])
        self.weights = weights / weights.sum()

    def sample(self, rng: np.random.Generator, size: int) -> np.ndarray:
        """Return `size` magnitudes."""
        idx = rng.choice(len(self.weights), size=size, p=self.weights)
        return rng.gamma(self.orders[idx], 1.0 / self.rates[idx])


class _JumpSource:
    """Compound Poisson part of the model."""

    def __init__(self, base: LevyModel):
        self.up = None
        self.down = None
        if base.lambda_plus > 0:
            self.up = _MixtureSampler(base.active_up, "jumps.up")
        if base.lambda_minus > 0:
            self.down = _MixtureSampler(base.active_down, "jumps.down")
        self.intensity = base.lambda_plus + base.lambda_minus
        self.up_share = base.lambda_plus / self.intensity if self.intensity else 0.0

    def epochs(self, rng: np.random.Generator, size: int) -> np.ndarray:
        """Return waiting times to the next jump."""
        if self.intensity == 0:
            return np.full(size, np.inf)
        return rng.exponential(1.0 / self.intensity, size)

    def sizes(self, rng: np.random.Generator, size: int) -> np.ndarray:
        """Return signed jump sizes."""
        upward = rng.random(size) < self.up_share
        result = np.empty(size)
        n_up = int(upward.sum())
        if n_up:
            result[upward] = self.up.sample(rng, n_up)  # type: ignore
        if n_up < size:
            result[~upward] = -self.down.sample(rng, size - n_up)  # type: ignore
        return result


def _blocks(cfg: SimConfig, desc: str) -> Iterator[Tuple[int, np.random.Generator]]:
    n_blocks = -(-cfg.n_paths // cfg.block_size)
    quiet = not get_opt("verbose") or get_opt("silent")
    for block in tqdm(range(n_blocks), desc=desc, disable=quiet, leave=False):
        size = min(cfg.block_size, cfg.n_paths - block * cfg.block_size)
        seq = np.random.SeedSequence(cfg.seed, spawn_key=(block,))
        rng = np.random.default_rng(seq)
        yield size, rng


def _horizons(cfg: SimConfig, rng: np.random.Generator, size: int) -> np.ndarray:
    if cfg.horizon == EXPONENTIAL:
        return rng.exponential(1.0 / cfg.q, size)
    return np.full(size, cfg.T)


def _drift_segment(pos, seg, b: float, mu: float, alpha: float):
    """Follow zero-volatility drift exactly; return (position, time below b)."""
    new_pos = np.empty_like(pos)
    occ = np.zeros_like(pos)
    below = pos < b
    low_drift = mu - alpha

    up_cross = np.zeros_like(below)
    if low_drift > 0:
        up_time = (b - pos) / low_drift
        up_cross = below & (up_time < seg)
        occ[up_cross] = up_time[up_cross]
        new_pos[up_cross] = b + mu * (seg[up_cross] - up_time[up_cross])
    stay_low = below & ~up_cross
    occ[stay_low] = seg[stay_low]
    new_pos[stay_low] = pos[stay_low] + low_drift * seg[stay_low]

    # a path sitting at b with mu < 0 leaves downwards at once
    down_cross = np.zeros_like(below)
    if mu < 0:
        down_time = (pos - b) / -mu
        down_cross = ~below & (down_time < seg)
        rest = seg[down_cross] - down_time[down_cross]
        occ[down_cross] = rest
        new_pos[down_cross] = b + low_drift * rest
    stay_high = ~below & ~down_cross
    new_pos[stay_high] = pos[stay_high] + mu * seg[stay_high]
    return new_pos, occ


def _occupation_block(
    base: LevyModel,
    alpha: float,
    b: float,
    x: float,
    horizon: np.ndarray,
    rng: np.random.Generator,
    dt: float,
    jumps: _JumpSource,
) -> Tuple[np.ndarray, np.ndarray]:
    size = len(horizon)
    pos = np.full(size, float(x))
    occ = np.zeros(size)
    now = np.zeros(size)
    next_jump = jumps.epochs(rng, size)
    active = np.arange(size)
    while active.size:
        to_jump = next_jump[active] - now[active]
        to_end = horizon[active] - now[active]
        if base.sigma > 0:
            step = np.minimum(np.minimum(to_jump, to_end), dt)
            start = pos[active]
            below = start < b
            occ[active] += np.where(below, step, 0.0)
            drift = np.where(below, base.mu - alpha, base.mu)
            pos[active] = (
                start
                + drift * step
                + base.sigma * np.sqrt(step) * rng.standard_normal(active.size)
            )
        else:
            step = np.minimum(to_jump, to_end)
            pos[active], d_occ = _drift_segment(pos[active], step, b, base.mu, alpha)
            occ[active] += d_occ
        now[active] += step
        finished = to_end <= step
        jumping = ~finished & (to_jump <= step)
        if jumping.any():
            idx = active[jumping]
            pos[idx] += jumps.sizes(rng, idx.size)
            next_jump[idx] = now[idx] + jumps.epochs(rng, idx.size)
        active = active[~finished]
    return occ, pos


def simulate_occupation(
    model: ModelArg, alpha: float, b: float, x: float, cfg: SimConfig = None
) -> OccupationSample:
    """
    Simulate occupation times of (-inf, b) up to the configured horizon.

    Parameters
    ----------
    model : ModelArg
        Validated model with real nonnegative jump coefficients.
    alpha : float
        Refraction drift.
    b : float
        Level.
    x : float
        Starting point.
    cfg : SimConfig, optional
        Simulation settings.

    Returns
    -------
    OccupationSample
        Occupation counts time with U strictly below b.

    Raises
    ------
    UnsampleableDensityError
        If an active jump density is complex or signed.

    """
    cfg = cfg or SimConfig()
    base = _base(model)
    jumps = _JumpSource(base)
    occ_parts, pos_parts, hor_parts = [], [], []
    for size, rng in _blocks(cfg, "occupation paths"):
        horizon = _horizons(cfg, rng, size)
        occ, pos = _occupation_block(base, alpha, b, x, horizon, rng, cfg.dt, jumps)
        occ_parts.append(occ)
        pos_parts.append(pos)
        hor_parts.append(horizon)
    return OccupationSample(
        occupation=np.concatenate(occ_parts),
        terminal=np.concatenate(pos_parts),
        horizon=np.concatenate(hor_parts),
    )


def _summarize(values: np.ndarray, cfg: SimConfig) -> SimEstimate:
    n_paths = len(values)
    std_error = float(values.std(ddof=1) / np.sqrt(n_paths)) if n_paths > 1 else 0.0
    return SimEstimate(
        mean=float(values.mean()),
        std_error=std_error,
        n_paths=n_paths,
        dt=cfg.dt,
        seed=cfg.seed,
    )


def _exponential(cfg: SimConfig, q: float) -> SimConfig:
    return attr.evolve(cfg or SimConfig(), horizon=EXPONENTIAL, q=q)


def estimate_V(
    model: ModelArg,
    alpha: float,
    b: float,
    x: float,
    p: float,
    q: float,
    cfg: SimConfig = None,
) -> SimEstimate:
    """Estimate E_x[exp(-p occupation up to e(q))]."""
    cfg = _exponential(cfg, q)
    if p == 0:
        return SimEstimate(
            mean=1.0, std_error=0.0, n_paths=cfg.n_paths, dt=cfg.dt, seed=cfg.seed
        )
    sample = simulate_occupation(model, alpha, b, x, cfg)
    return _summarize(np.exp(-p * sample.occupation), cfg)


def estimate_expectation(
    model: ModelArg, alpha: float, b: float, x: float, q: float, cfg: SimConfig = None
) -> SimEstimate:
    """Estimate E_x[occupation up to e(q)]."""
    cfg = _exponential(cfg, q)
    return _summarize(simulate_occupation(model, alpha, b, x, cfg).occupation, cfg)


def estimate_distribution(
    model: ModelArg, alpha: float, b: float, x: float, q: float, cfg: SimConfig = None
) -> SimEstimate:
    """Estimate P_x(U at e(q) < b)."""
    cfg = _exponential(cfg, q)
    sample = simulate_occupation(model, alpha, b, x, cfg)
    return _summarize((sample.terminal < b).astype(float), cfg)


def estimate_fixed_horizon(
    model: ModelArg,
    alpha: float,
    b: float,
    x: float,
    horizon: float,
    cfg: SimConfig = None,
) -> SimEstimate:
    """Estimate E_x[occupation up to the fixed time `horizon`]."""
    cfg = attr.evolve(cfg or SimConfig(), horizon=FIXED, T=horizon)
    return _summarize(simulate_occupation(model, alpha, b, x, cfg).occupation, cfg)


def _exit_block(
    base: LevyModel,
    drift: float,
    level: float,
    upward: bool,
    horizon: np.ndarray,
    rng: np.random.Generator,
    dt: float,
    jumps: _JumpSource,
) -> Tuple[np.ndarray, np.ndarray]:
    """Return (hit before horizon, overshoot) for a passage strictly beyond `level`."""
    size = len(horizon)
    sign = 1.0 if upward else -1.0
    # distance still to travel in the passage direction
    gap = np.full(size, sign * float(level))
    hit = np.zeros(size, dtype=bool)
    overshoot = np.zeros(size)
    now = np.zeros(size)
    next_jump = jumps.epochs(rng, size)
    speed = sign * drift
    active = np.arange(size)
    while active.size:
        to_jump = next_jump[active] - now[active]
        to_end = horizon[active] - now[active]
        if base.sigma > 0:
            step = np.minimum(np.minimum(to_jump, to_end), dt)
            before = gap[active]
            after = (
                before
                - speed * step
                - base.sigma * np.sqrt(step) * rng.standard_normal(active.size)
            )
            bridge = np.exp(
                -2.0 * np.maximum(before * after, 0.0) / (base.sigma**2 * step)
            )
            crossed = (after < 0) | (rng.random(active.size) < bridge)
            gap[active] = after
        else:
            step = np.minimum(to_jump, to_end)
            before = gap[active]
            if speed > 0:
                crossed = before / speed <= step
            else:
                crossed = np.zeros(active.size, dtype=bool)
            gap[active] = before - speed * step
        hit[active[crossed]] = True
        now[active] += step
        running = ~crossed & (to_end > step)
        jumping = running & (to_jump <= step)
        if jumping.any():
            idx = active[jumping]
            gap[idx] -= sign * jumps.sizes(rng, idx.size)
            over = gap[idx] < 0
            hit[idx[over]] = True
            overshoot[idx[over]] = -gap[idx[over]]
            running[np.flatnonzero(jumping)[over]] = False
            next_jump[idx] = now[idx] + jumps.epochs(rng, idx.size)
        active = active[running]
    return hit, overshoot


def estimate_exit(
    model: ModelArg,
    alpha: float,
    q: float,
    level: float,
    direction: ExitDirection = ExitDirection.UP_Y,
    cfg: SimConfig = None,
    s: float = 0.0,
) -> SimEstimate:
    """
    Estimate a discounted first-passage transform.

    Parameters
    ----------
    model : ModelArg
        Validated, sampleable model.
    alpha : float
        Refraction drift; the upward passage is of Y = X - alpha t.
    q : float
        Discount rate (the horizon is e(q)).
    level : float
        Passage level relative to the start; >= 0 up, <= 0 down.
    direction : ExitDirection, optional
        UP_Y (default) or DOWN_X.
    cfg : SimConfig, optional
        Simulation settings.
    s : float, optional
        Overshoot argument, by default 0 (E[exp(-q tau)]).

    Returns
    -------
    SimEstimate
        Of E[exp(-q tau - s |overshoot|)]. Diffusive and drift crossings
        carry zero overshoot.

    """
    upward = direction == ExitDirection.UP_Y
    if (upward and level < 0) or (not upward and level > 0):
        raise ValueError(f"Level {level} is on the wrong side for {direction.value}.")
    cfg = _exponential(cfg, q)
    base = _base(model)
    jumps = _JumpSource(base)
    drift = base.mu - alpha if upward else base.mu
    parts = []
    for size, rng in _blocks(cfg, "exit paths"):
        horizon = _horizons(cfg, rng, size)
        hit, overshoot = _exit_block(
            base, drift, level, upward, horizon, rng, cfg.dt, jumps
        )
        parts.append(np.where(hit, np.exp(-s * overshoot), 0.0))
    return _summarize(np.concatenate(parts), cfg)
