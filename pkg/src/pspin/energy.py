"""The p-spin energy H(sigma) = -n1^(-kappa) sum_mu |(xi^mu, sigma)|^p.

Overlaps are exact machine integers throughout; only the final |m|^p and
the 1/n1^kappa scaling are floating point.  ``OverlapState`` carries the
overlap vector so that single-site flip differences cost O(n2).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import kernels
from .model import ExponentSet, exponents, phi, phi_bar
from .patterns import FlipSet, PatternMatrix, SpinState, _valid_mask

CACHE_REFRESH_INTERVAL = 1 << 16


@dataclass
class SplitOverlaps:
    """Normalized restricted overlaps X_mu (inside J) and Y_mu (outside J)."""

    x: np.ndarray
    y: np.ndarray


class OverlapState:
    """A spin state plus its exact integer overlaps and cached energy."""

    __slots__ = ("sigma", "m", "exponents", "energy_cache", "xi", "_sigma_i8", "_applies")

    def __init__(self, sigma, m, exponents, energy_cache, xi, sigma_i8):
        self.sigma = sigma
        self.m = m
        self.exponents = exponents
        self.energy_cache = energy_cache
        self.xi = xi
        self._sigma_i8 = sigma_i8
        self._applies = 0

    @property
    def n1(self) -> int:
        return self.sigma.n1

    def spin_i8(self) -> np.ndarray:
        return self._sigma_i8


def _check_dims(sigma: SpinState, xi: PatternMatrix) -> None:
    if sigma.n1 != xi.n1:
        raise ValueError(f"dimension mismatch: state n1={sigma.n1}, patterns n1={xi.n1}")


def _scale_denom(n1: int, exps: ExponentSet) -> float:
    return float(n1) ** exps.kappa


def energy_full(sigma: SpinState, xi: PatternMatrix, exps: ExponentSet) -> float:
    """Exact-overlap evaluation of H(sigma)."""
    _check_dims(sigma, xi)
    m = kernels.overlaps(xi.words, sigma.words, xi.n1)
    return -kernels.abs_pow_sum(m, exps.p) / _scale_denom(xi.n1, exps)


def init_overlaps(sigma: SpinState, xi: PatternMatrix, exps: ExponentSet) -> OverlapState:
    """Build an OverlapState around a private copy of ``sigma``."""
    _check_dims(sigma, xi)
    own = sigma.copy()
    m = kernels.overlaps(xi.words, own.words, xi.n1)
    energy = -kernels.abs_pow_sum(m, exps.p) / _scale_denom(xi.n1, exps)
    return OverlapState(own, m, exps, energy, xi, own.to_pm1())


def delta_flip(state: OverlapState, k: int) -> float:
    """H(sigma with site k flipped) - H(sigma), in O(n2); state unmodified."""
    if not 0 <= k < state.n1:
        raise ValueError(f"site index {k} out of range [0, {state.n1})")
    raw = kernels.delta_raw(state.m, state.xi.cols()[k], int(state._sigma_i8[k]), state.exponents.p)
    return -raw / _scale_denom(state.n1, state.exponents)


def apply_flip(state: OverlapState, k: int) -> float:
    """Flip site k in place, updating overlaps and cache; returns the delta."""
    if not 0 <= k < state.n1:
        raise ValueError(f"site index {k} out of range [0, {state.n1})")
    delta = delta_flip(state, k)
    s = int(state._sigma_i8[k])
    state.m -= (2 * s) * state.xi.cols()[k].astype(np.int64)
    state._sigma_i8[k] = -s
    state.sigma.flip_inplace(k)
    state.energy_cache += delta
    state._applies += 1
    if state._applies >= CACHE_REFRESH_INTERVAL:
        refresh_cache(state)
    return delta


def refresh_cache(state: OverlapState) -> None:
    """Recompute the cached energy from the overlap vector (drift guard)."""
    state.energy_cache = -kernels.abs_pow_sum(state.m, state.exponents.p) / _scale_denom(
        state.n1, state.exponents
    )
    state._applies = 0


def split_overlaps(xi: PatternMatrix, sigma: SpinState, flips: FlipSet) -> SplitOverlaps:
    """X_mu = (xi_J^mu, sigma_J)/sqrt(n1) and Y_mu over the complement of J."""
    _check_dims(sigma, xi)
    n1 = xi.n1
    mask = flips.mask_words(n1)
    comask = ~mask & _valid_mask(n1)
    nj = len(flips)
    xor = xi.words ^ sigma.words[None, :]
    din = np.bitwise_count(xor & mask[None, :]).sum(axis=1, dtype=np.int64)
    dout = np.bitwise_count(xor & comask[None, :]).sum(axis=1, dtype=np.int64)
    root = math.sqrt(n1)
    x = (nj - 2 * din) / root
    y = ((n1 - nj) - 2 * dout) / root
    return SplitOverlaps(x=x, y=y)


def gap_representation(
    xi: PatternMatrix, flips: FlipSet, exps: ExponentSet
) -> tuple[float, float]:
    """Both sides of the pattern-gap identity for the first stored pattern.

    lhs: H(xi^0) - H(F_J xi^0) by direct evaluation.
    rhs: the closed form -n1^(-(p+-p)/2) bar-Phi_p(r)
         - n1^(-p+/2) sum_{mu>=1} Phi_p(X_mu, Y_mu), with r = |J|/n1.
    """
    n1 = xi.n1
    nj = len(flips)
    if nj > n1 // 2:
        raise ValueError(f"|J| = {nj} exceeds n1/2 = {n1 // 2}")
    pattern = xi.row_state(0)
    flipped = SpinState(n1, pattern.words ^ flips.mask_words(n1))
    lhs = energy_full(pattern, xi, exps) - energy_full(flipped, xi, exps)

    r = nj / n1
    so = split_overlaps(xi, pattern, flips)
    interference = 0.0
    for mu in range(1, xi.n2):
        interference += phi(float(so.x[mu]), float(so.y[mu]), exps.p)
    rhs = (
        -phi_bar(r, exps.p) / n1 ** ((exps.p_plus - exps.p) / 2.0)
        - interference / n1 ** (exps.p_plus / 2.0)
    )
    return lhs, rhs


def flip_identity_p2(
    xi: PatternMatrix, flips: FlipSet, k: int
) -> tuple[float, float]:
    """Both sides of the exact single-flip identity at p = 2.

    With sigma = F_J xi^0, r = |J|/n1, s = +1 if k is not in J else -1:

        (n1/4) [H(F_{J +/- k} xi^0) - H(F_J xi^0)]
            = s * sum_{mu>=1} (xi^0_k xi^mu_k / sqrt(n1)) Z_J^mu
              + s * (1 - 2r) - alpha,

    where Z_J^mu = (xi^mu, F_J xi^0)/sqrt(n1) and alpha = n2/n1.  lhs uses
    two full energy evaluations; rhs assembles the linear form directly.
    """
    n1 = xi.n1
    if not 0 <= k < n1:
        raise ValueError(f"site index {k} out of range [0, {n1})")
    exps = exponents(2.0)
    pattern = xi.row_state(0)
    sigma = SpinState(n1, pattern.words ^ flips.mask_words(n1))
    moved = sigma.copy()
    moved.flip_inplace(k)
    lhs = (n1 / 4.0) * (energy_full(moved, xi, exps) - energy_full(sigma, xi, exps))

    m = kernels.overlaps(xi.words, sigma.words, n1)
    cols_k = xi.cols()[k].astype(np.int64)
    s = -1.0 if k in flips.indices else 1.0
    r = len(flips) / n1
    cross = float((cols_k[0] * cols_k[1:] * m[1:]).sum()) / n1
    rhs = s * cross + s * (1.0 - 2.0 * r) - xi.n2 / n1
    return lhs, rhs


def dual_energy(sigma: SpinState, xi: PatternMatrix, exps: ExponentSet) -> float:
    """Cross-check route: H via the l_q-dual of the overlap vector.

    sum_mu |m_mu|^p = (sup_{tau in B_q} sum_mu m_mu tau_mu)^p with the
    supremum attained at tau_mu = sign(m_mu)|m_mu|^(p-1) / ||m||_p^(p/q).
    """
    _check_dims(sigma, xi)
    m = kernels.overlaps(xi.words, sigma.words, xi.n1).astype(np.float64)
    norm = np.abs(m) ** exps.p
    total = norm.sum()
    if total == 0.0:
        return 0.0
    tau = np.sign(m) * np.abs(m) ** (exps.p - 1.0) / total ** (1.0 / exps.q)
    sup = float((m * tau).sum())
    return -(sup ** exps.p) / _scale_denom(xi.n1, exps)
