"""Greedy single-flip descent and perturbed initialization.

A move is taken only when it lowers the energy by strictly more than the
tie tolerance, so the walk is monotone and terminates on the finite state
space.  For p in {2, 3} flip differences are exact integers and the
default tolerance is 0; otherwise a relative guard scaled to the energy
granularity is used.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import kernels
from .energy import _scale_denom, init_overlaps, refresh_cache
from .model import ExponentSet
from .patterns import PatternMatrix, SpinState

FIRST_IMPROVEMENT = "first-improvement"
STEEPEST = "steepest"
ORDER_FIXED = "fixed"
ORDER_RANDOM = "random-permutation-per-sweep"

_EXACT_P = (2.0, 3.0)


@dataclass(frozen=True)
class DescentPolicy:
    rule: str = FIRST_IMPROVEMENT
    sweep_order: str = ORDER_RANDOM
    max_sweeps: int = 10_000
    tie_epsilon: Optional[float] = None  # None -> per-p default

    def __post_init__(self):
        if self.rule not in (FIRST_IMPROVEMENT, STEEPEST):
            raise ValueError(f"unknown rule {self.rule!r}")
        if self.sweep_order not in (ORDER_FIXED, ORDER_RANDOM):
            raise ValueError(f"unknown sweep order {self.sweep_order!r}")
        if self.max_sweeps < 1:
            raise ValueError("max_sweeps must be >= 1")
        if self.tie_epsilon is not None and self.tie_epsilon < 0:
            raise ValueError("tie_epsilon must be >= 0")


@dataclass
class DescentResult:
    endpoint: SpinState
    flips: int
    sweeps: int
    energy_trace: np.ndarray
    converged: bool
    certificate: Optional[float] = None  # min single-flip increase at endpoint


def default_tie_epsilon(n1: int, exps: ExponentSet) -> float:
    """0 for the integer-exact exponents, else a granularity-scaled guard."""
    if exps.p in _EXACT_P:
        return 0.0
    return 1e-12 * float(n1) ** (exps.p - exps.kappa)


def perturb(pattern: SpinState, r: float, rng: np.random.Generator) -> SpinState:
    """Flip exactly floor(r * n1) uniformly chosen distinct sites."""
    if not 0.0 <= r <= 0.5:
        raise ValueError(f"r must lie in [0, 1/2], got {r!r}")
    nflip = int(r * pattern.n1)
    out = pattern.copy()
    if nflip == 0:
        return out
    for k in rng.choice(pattern.n1, size=nflip, replace=False):
        out.flip_inplace(int(k))
    return out


def descend(
    sigma0: SpinState,
    xi: PatternMatrix,
    exps: ExponentSet,
    policy: DescentPolicy = DescentPolicy(),
    rng: Optional[np.random.Generator] = None,
) -> DescentResult:
    """Run FLIP from sigma0 until no single flip lowers the energy."""
    if policy.sweep_order == ORDER_RANDOM and rng is None:
        raise ValueError("random sweep order requires an rng")
    state = init_overlaps(sigma0, xi, exps)
    tie = policy.tie_epsilon
    if tie is None:
        tie = default_tie_epsilon(xi.n1, exps)
    tie_raw = tie * _scale_denom(xi.n1, exps)
    denom = _scale_denom(xi.n1, exps)
    cols = xi.cols()
    trace = [state.energy_cache]
    flips = 0
    sweeps = 0
    converged = False

    if policy.rule == FIRST_IMPROVEMENT:
        for _ in range(policy.max_sweeps):
            sweeps += 1
            if policy.sweep_order == ORDER_RANDOM:
                order = rng.permutation(xi.n1).astype(np.int64)
            else:
                order = np.arange(xi.n1, dtype=np.int64)
            nf, sites, raws = kernels.sweep_flips(
                state.m, cols, state._sigma_i8, order, exps.p, tie_raw
            )
            for i in range(nf):
                state.sigma.flip_inplace(int(sites[i]))
                state.energy_cache -= raws[i] / denom
                trace.append(state.energy_cache)
            flips += nf
            if nf == 0:
                converged = True
                break
    else:
        for _ in range(policy.max_sweeps):
            sweeps += 1
            k, raw = kernels.best_flip(state.m, cols, state._sigma_i8, exps.p)
            if raw <= tie_raw:
                converged = True
                break
            s = int(state._sigma_i8[k])
            state._sigma_i8[k] = -s
            state.m -= (2 * s) * cols[k].astype(np.int64)
            state.sigma.flip_inplace(int(k))
            state.energy_cache -= raw / denom
            trace.append(state.energy_cache)
            flips += 1

    refresh_cache(state)
    certificate = None
    if converged:
        raws = kernels.delta_raw_all(state.m, cols, state._sigma_i8, exps.p)
        certificate = -float(raws.max()) / denom
    return DescentResult(
        endpoint=state.sigma,
        flips=flips,
        sweeps=sweeps,
        energy_trace=np.asarray(trace),
        converged=converged,
        certificate=certificate,
    )
