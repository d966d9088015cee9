"""Local-minimum certification, Hamming-sphere barrier scans, and ground states.

Exhaustive sphere scans walk the radius-n subsets in a revolving-door
(minimal-change) order, so consecutive points differ by one swap: two site
flips and an O(n2) overlap update per visited configuration.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import islice
from typing import Iterator, Optional

import numpy as np

from . import kernels
from .dynamics import DescentPolicy, default_tie_epsilon, descend
from .energy import _scale_denom, energy_full
from .model import ExponentSet
from .patterns import FlipSet, PatternMatrix, SpinState, flip, sym_hamming

EXHAUSTIVE_BUDGET = 10 ** 7
ALL_STATES_MAX_N1 = 20
DEFAULT_SAMPLE_CAP = 10 ** 5
_SWAP_CHUNK = 1 << 15

MODE_EXHAUSTIVE = "exhaustive"
MODE_SAMPLED = "sampled"


class BudgetError(RuntimeError):
    """An exhaustive request exceeds the enumeration budget."""


def revolving_door_swaps(n: int, t: int) -> Iterator[tuple[int, int]]:
    """(out, in) swaps visiting all C(n, t) subsets from {0..t-1}.

    Minimal-change order: every transition removes one element and inserts
    another.  Degenerate sizes (t <= 1 or t >= n) are handled directly;
    the general case is Knuth's revolving-door scheme.
    """
    if t < 0 or t > n:
        raise ValueError(f"invalid subset size {t} of {n}")
    if t == 0 or t == n:
        return
    if t == 1:
        for i in range(n - 1):
            yield (i, i + 1)
        return
    # c[1..t] strictly increasing, c[t+1] sentinel.
    c = list(range(-1, t)) + [n]
    while True:
        if t % 2 == 1:
            if c[1] + 1 < c[2]:
                yield (c[1], c[1] + 1)
                c[1] += 1
                continue
            j = 2
            stepping_down = True
        else:
            if c[1] > 0:
                yield (c[1], c[1] - 1)
                c[1] -= 1
                continue
            j = 2
            stepping_down = False
        while True:
            if stepping_down:
                if c[j] >= j:
                    yield (c[j], j - 2)
                    c[j] = c[j - 1]
                    c[j - 1] = j - 2
                    break
                j += 1
                stepping_down = False
            else:
                if c[j] + 1 < c[j + 1]:
                    yield (c[j - 1], c[j] + 1)
                    c[j - 1] = c[j]
                    c[j] += 1
                    break
                j += 1
                if j > t:
                    return
                stepping_down = True


def _swap_chunks(n: int, t: int, chunk: int = _SWAP_CHUNK):
    gen = revolving_door_swaps(n, t)
    while True:
        pairs = list(islice(gen, chunk))
        if not pairs:
            return
        arr = np.asarray(pairs, dtype=np.int64)
        yield np.ascontiguousarray(arr[:, 0]), np.ascontiguousarray(arr[:, 1])


@dataclass
class BarrierProfile:
    """Minimum energy gap over Hamming spheres around one pattern."""

    mu: int
    radii: list[int]
    min_gap: list[float]
    mode: str
    samples_per_radius: int
    seed: int = 0

    def csv_rows(self):
        for radius, gap in zip(self.radii, self.min_gap):
            yield (self.mu, radius, gap, self.mode, self.samples_per_radius, self.seed)

    CSV_HEADER = ("mu", "radius", "min_gap", "mode", "samples", "seed")


@dataclass
class LocalMinSet:
    """Certified local minima with deep flags and owning pattern indices."""

    states: list[SpinState]
    deep: np.ndarray = field(default_factory=lambda: np.zeros(0, bool))
    owner: np.ndarray = field(default_factory=lambda: np.zeros(0, np.int64))

    def state_keys(self) -> set[bytes]:
        return {s.tobytes() for s in self.states}

    def __len__(self) -> int:
        return len(self.states)


def _tie_raw(exps: ExponentSet, n1: int, tie_epsilon: Optional[float]) -> float:
    tie = default_tie_epsilon(n1, exps) if tie_epsilon is None else tie_epsilon
    return tie * _scale_denom(n1, exps)


def certify_local_min(
    sigma: SpinState,
    xi: PatternMatrix,
    exps: ExponentSet,
    tie_epsilon: Optional[float] = None,
    weak: bool = False,
) -> tuple[bool, Optional[int]]:
    """(is_min, witness): strict requires every flip to raise the energy.

    In weak mode a configuration counts as minimal when no flip strictly
    lowers the energy (plateau moves allowed to certify).
    """
    if sigma.n1 != xi.n1:
        raise ValueError("dimension mismatch")
    m = kernels.overlaps(xi.words, sigma.words, xi.n1)
    raws = kernels.delta_raw_all(m, xi.cols(), sigma.to_pm1(), exps.p)
    tie_raw = _tie_raw(exps, xi.n1, tie_epsilon)
    bad = raws > tie_raw if weak else raws >= -tie_raw
    if bad.any():
        return False, int(np.argmax(bad))
    return True, None


def sphere_scan(
    xi: PatternMatrix,
    exps: ExponentSet,
    mu: int,
    radius: int,
    mode: str = MODE_EXHAUSTIVE,
    samples: Optional[int] = None,
    rng: Optional[np.random.Generator] = None,
) -> float:
    """min over the radius-``radius`` sphere at pattern mu of H(sigma) - H(xi^mu)."""
    n1 = xi.n1
    if not 0 <= radius <= n1:
        raise ValueError(f"radius {radius} out of range [0, {n1}]")
    if radius == 0:
        return 0.0
    total = math.comb(n1, radius)
    pattern = xi.row_state(mu)
    denom = _scale_denom(n1, exps)
    s_pattern = kernels.abs_pow_sum(kernels.overlaps(xi.words, pattern.words, n1), exps.p)

    if mode == MODE_EXHAUSTIVE:
        if total > EXHAUSTIVE_BUDGET:
            raise BudgetError(
                f"C({n1},{radius}) = {total} exceeds budget {EXHAUSTIVE_BUDGET}"
            )
        start = FlipSet.from_indices(np.arange(radius))
        sigma = flip(pattern, start)
        m = kernels.overlaps(xi.words, sigma.words, n1)
        spins = sigma.to_pm1()
        best = kernels.abs_pow_sum(m, exps.p)
        for outs, ins in _swap_chunks(n1, radius):
            chunk_best = kernels.scan_swaps_max(m, spins, xi.cols(), outs, ins, exps.p)
            if chunk_best > best:
                best = chunk_best
        return (s_pattern - best) / denom

    if mode != MODE_SAMPLED:
        raise ValueError(f"unknown mode {mode!r}")
    if rng is None:
        raise ValueError("sampled mode requires an rng")
    k = min(DEFAULT_SAMPLE_CAP, total) if samples is None else min(samples, total)
    if k >= total:
        return sphere_scan(xi, exps, mu, radius, MODE_EXHAUSTIVE)
    best = -np.inf
    for masks in _sample_sphere_words(pattern, radius, k, rng):
        sums = kernels.batch_abs_pow_sums(xi.words, masks, n1, exps.p)
        chunk_best = float(sums.max())
        if chunk_best > best:
            best = chunk_best
    return (s_pattern - best) / denom


def _sample_sphere_words(
    pattern: SpinState, radius: int, k: int, rng: np.random.Generator, chunk: int = 4096
):
    """Packed words of k distinct uniform points on the radius sphere."""
    n1 = pattern.n1
    seen: set[bytes] = set()
    picked = 0
    buf = []
    attempts = 0
    max_attempts = 1000 * k + 1000
    while picked < k:
        sites = np.sort(rng.choice(n1, size=radius, replace=False))
        key = sites.tobytes()
        attempts += 1
        if attempts > max_attempts:
            raise RuntimeError("sphere sampling stalled; request fewer samples")
        if key in seen:
            continue
        seen.add(key)
        buf.append(sites)
        picked += 1
        if len(buf) == chunk or picked == k:
            nw = pattern.words.shape[0]
            bits = np.zeros((len(buf), nw * 64), np.uint8)
            rows = np.repeat(np.arange(len(buf)), radius)
            bits[rows, np.concatenate(buf)] = 1
            masks = np.packbits(bits, axis=1, bitorder="little").view(np.uint64)
            yield masks ^ pattern.words[None, :]
            buf = []


def enumerate_local_minima(
    xi: PatternMatrix,
    exps: ExponentSet,
    scope: str = "all-states",
    mu: int = 0,
    r0: float = 0.5,
    tie_epsilon: Optional[float] = None,
    weak: bool = False,
) -> LocalMinSet:
    """Certified minima over all states (n1 <= 20) or a Hamming ball."""
    n1 = xi.n1
    tie_raw = _tie_raw(exps, n1, tie_epsilon)
    states: list[SpinState] = []

    if scope == "all-states":
        if n1 > ALL_STATES_MAX_N1:
            raise BudgetError(f"all-states scope needs n1 <= {ALL_STATES_MAX_N1}")
        mask = kernels.all_states_lm_mask(xi.cols(), exps.p, tie_raw, weak)
        for state_int in np.nonzero(mask)[0]:
            states.append(SpinState.from_state_int(n1, int(state_int)))
    elif scope == "ball":
        max_radius = int(r0 * n1)
        total = sum(math.comb(n1, rad) for rad in range(max_radius + 1))
        if math.comb(n1, max_radius) > EXHAUSTIVE_BUDGET or total > EXHAUSTIVE_BUDGET:
            raise BudgetError(f"ball scope visits {total} states, over budget")
        pattern = xi.row_state(mu)
        ok, _ = certify_local_min(pattern, xi, exps, tie_epsilon, weak)
        if ok:
            states.append(pattern.copy())
        for radius in range(1, max_radius + 1):
            current = set(range(radius))
            sigma = flip(pattern, FlipSet.from_indices(sorted(current)))
            m = kernels.overlaps(xi.words, sigma.words, n1)
            spins = sigma.to_pm1()
            raws = kernels.delta_raw_all(m, xi.cols(), spins, exps.p)
            is_lm = raws.max() <= tie_raw if weak else raws.max() < -tie_raw
            if is_lm:
                states.append(sigma.copy())
            for outs, ins in _swap_chunks(n1, radius):
                flags = kernels.scan_swaps_lm(
                    m, spins, xi.cols(), outs, ins, exps.p, tie_raw, weak
                )
                for i in range(outs.shape[0]):
                    current.discard(int(outs[i]))
                    current.add(int(ins[i]))
                    if flags[i]:
                        states.append(
                            flip(pattern, FlipSet.from_indices(sorted(current)))
                        )
    else:
        raise ValueError(f"unknown scope {scope!r}")

    deep = np.zeros(len(states), bool)
    owner = np.zeros(len(states), np.int64)
    tie = default_tie_epsilon(n1, exps) if tie_epsilon is None else tie_epsilon
    pattern_energy = [energy_full(xi.row_state(j), xi, exps) for j in range(xi.n2)]
    for i, s in enumerate(states):
        if scope == "ball":
            own = mu
        else:
            dists = [sym_hamming(s, xi.row_state(j)) for j in range(xi.n2)]
            own = int(np.argmin(dists))
        owner[i] = own
        deep[i] = pattern_energy[own] - energy_full(s, xi, exps) > tie
    return LocalMinSet(states=states, deep=deep, owner=owner)


def ground_state(
    xi: PatternMatrix,
    exps: ExponentSet,
    mode: str = MODE_EXHAUSTIVE,
    starts: int = 32,
    rng: Optional[np.random.Generator] = None,
    policy: Optional[DescentPolicy] = None,
) -> tuple[SpinState, float]:
    """Exact minimizer (n1 <= 20) or best-of-k multistart descent upper bound."""
    n1 = xi.n1
    if mode == MODE_EXHAUSTIVE:
        if n1 > ALL_STATES_MAX_N1:
            raise BudgetError(f"exhaustive ground state needs n1 <= {ALL_STATES_MAX_N1}")
        best_s, best_state = kernels.all_states_ground(xi.cols(), exps.p)
        sigma = SpinState.from_state_int(n1, int(best_state))
        return sigma, -best_s / _scale_denom(n1, exps)
    if mode != "multistart":
        raise ValueError(f"unknown mode {mode!r}")
    if rng is None:
        raise ValueError("multistart mode requires an rng")
    if policy is None:
        policy = DescentPolicy()
    best_sigma = None
    best_energy = np.inf
    for _ in range(starts):
        start_vals = rng.integers(0, 2, size=n1, dtype=np.int8) * 2 - 1
        sigma0 = SpinState.from_pm1(start_vals)
        res = descend(sigma0, xi, exps, policy, rng)
        energy = energy_full(res.endpoint, xi, exps)
        if energy < best_energy:
            best_energy = energy
            best_sigma = res.endpoint
    return best_sigma, float(best_energy)
