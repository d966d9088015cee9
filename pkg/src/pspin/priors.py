"""Hidden-unit prior families and their cumulant / Orlicz-norm analytics.

Families: standard gaussian, rademacher (±1), stretched exponential with
density proportional to exp(-|z|^q), and a gaussian/rademacher mixture.
The cumulant u(x) = log E[exp(x z)] has closed forms except for the
stretched family, which is integrated in log space around the saddle.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy import integrate, special

GAUSSIAN = "gaussian"
RADEMACHER = "rademacher"
STRETCHED_EXP = "stretched_exp"
GAUSS_BERNOULLI_MIX = "gauss_bernoulli_mix"

U_QUAD_TOL = 1e-10
PSI_NORM_TOL = 1e-8


@dataclass(frozen=True)
class PriorSpec:
    """A symmetric hidden-unit prior; use the classmethod constructors."""

    family: str
    q: Optional[float] = None       # stretched tail exponent
    weight: Optional[float] = None  # gaussian fraction of the mixture

    @classmethod
    def gaussian(cls) -> "PriorSpec":
        return cls(family=GAUSSIAN)

    @classmethod
    def rademacher(cls) -> "PriorSpec":
        return cls(family=RADEMACHER)

    @classmethod
    def stretched_exp(cls, q: float) -> "PriorSpec":
        if not q > 1.0:
            raise ValueError(f"tail exponent q must be > 1, got {q!r}")
        return cls(family=STRETCHED_EXP, q=float(q))

    @classmethod
    def gauss_bernoulli_mix(cls, weight: float) -> "PriorSpec":
        if not 0.0 <= weight <= 1.0:
            raise ValueError(f"mixture weight must lie in [0,1], got {weight!r}")
        return cls(family=GAUSS_BERNOULLI_MIX, weight=float(weight))

    @property
    def tail_exponent(self) -> float:
        """q with P(|z| > t) ~ exp(-t^q); inf for bounded support."""
        if self.family == GAUSSIAN:
            return 2.0
        if self.family == RADEMACHER:
            return math.inf
        if self.family == STRETCHED_EXP:
            return self.q
        return 2.0 if self.weight > 0.0 else math.inf


@dataclass
class CumulantReport:
    """u(x) and the growth ratio u(x)/|x|^p on a geometric grid."""

    x_grid: np.ndarray
    u_values: np.ndarray
    ratio: np.ndarray
    limit_estimate: float
    converged: bool

    CSV_HEADER = ("x", "u", "ratio")

    def csv_rows(self):
        for x, u, rat in zip(self.x_grid, self.u_values, self.ratio):
            yield (float(x), float(u), float(rat))


def _stretched_norm_const(q: float) -> float:
    # integral of exp(-|z|^q) over R = 2 Gamma(1 + 1/q)
    return 2.0 * math.gamma(1.0 + 1.0 / q)


def pdf(prior: PriorSpec, z: np.ndarray) -> np.ndarray:
    """Density (continuous families only)."""
    z = np.asarray(z, dtype=np.float64)
    if prior.family == GAUSSIAN:
        return np.exp(-z * z / 2.0) / math.sqrt(2.0 * math.pi)
    if prior.family == STRETCHED_EXP:
        return np.exp(-np.abs(z) ** prior.q) / _stretched_norm_const(prior.q)
    raise ValueError(f"{prior.family} has no continuous density")


def sample(prior: PriorSpec, n: int, rng: np.random.Generator) -> np.ndarray:
    """n i.i.d. draws from the prior."""
    if n < 1:
        raise ValueError("n must be >= 1")
    if prior.family == GAUSSIAN:
        return rng.standard_normal(n)
    if prior.family == RADEMACHER:
        return (2 * rng.integers(0, 2, size=n) - 1).astype(np.float64)
    if prior.family == STRETCHED_EXP:
        # |z|^q ~ Gamma(1/q): exact inverse CDF through gammaincinv
        u = rng.random(n)
        mag = special.gammaincinv(1.0 / prior.q, u) ** (1.0 / prior.q)
        signs = 2 * rng.integers(0, 2, size=n) - 1
        return signs * mag
    if prior.family == GAUSS_BERNOULLI_MIX:
        pick = rng.random(n) < prior.weight
        gauss = rng.standard_normal(n)
        rade = (2 * rng.integers(0, 2, size=n) - 1).astype(np.float64)
        return np.where(pick, gauss, rade)
    raise ValueError(f"unknown family {prior.family!r}")


def _log_cosh(x: float) -> float:
    return float(np.logaddexp(x, -x)) - math.log(2.0)


def _shifted_quad(integrand, breakpoints) -> float:
    """Integrate over R split at the given finite breakpoints."""
    pts = sorted(set(float(b) for b in breakpoints))
    edges = [-math.inf] + pts + [math.inf]
    total = 0.0
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        for a, b in zip(edges[:-1], edges[1:]):
            if a >= b:
                continue
            val, _ = integrate.quad(
                integrand, a, b, epsabs=U_QUAD_TOL, epsrel=1e-12, limit=300
            )
            total += val
    return total


def _u_stretched(q: float, x: float) -> float:
    """log E[exp(x z)] for the stretched family by saddle-shifted quadrature."""
    ax = abs(x)
    if ax == 0.0:
        return 0.0
    # exponent f(z) = x z - |z|^q peaks at z* = (x/q)^(1/(q-1))
    zstar = (ax / q) ** (1.0 / (q - 1.0))
    shift = ax * zstar - zstar ** q

    def integrand(z):
        t = ax * z - abs(z) ** q - shift
        return math.exp(t) if t < 700.0 else math.inf

    width = 1.0 / math.sqrt(q * (q - 1.0) * zstar ** (q - 2.0)) if zstar > 0 else 1.0
    total = _shifted_quad(
        integrand, [0.0, zstar - 12.0 * width, zstar, zstar + 12.0 * width]
    )
    return shift + math.log(total) - math.log(_stretched_norm_const(q))


def u_eval(prior: PriorSpec, x: float) -> float:
    """Cumulant u(x) = log E[exp(x z)]; closed form where available."""
    if not math.isfinite(x):
        raise ValueError("x must be finite")
    if prior.family == GAUSSIAN:
        return 0.5 * x * x
    if prior.family == RADEMACHER:
        return _log_cosh(x)
    if prior.family == GAUSS_BERNOULLI_MIX:
        w = prior.weight
        if w == 0.0:
            return _log_cosh(x)
        if w == 1.0:
            return 0.5 * x * x
        terms = np.array([math.log(w) + 0.5 * x * x, math.log1p(-w) + _log_cosh(x)])
        return float(special.logsumexp(terms))
    if prior.family == STRETCHED_EXP:
        return _u_stretched(prior.q, float(x))
    raise ValueError(f"unknown family {prior.family!r}")


def u_quadrature(prior: PriorSpec, x: float) -> float:
    """Generic quadrature route for u(x) (continuous families).

    Provided independently of the closed forms so they can be checked
    against each other; error target 1e-8 absolute.
    """
    if prior.family == GAUSSIAN:
        ax = abs(float(x))
        shift = 0.5 * ax * ax  # saddle at z = x

        def integrand(z):
            return math.exp(ax * z - 0.5 * z * z - shift) / math.sqrt(2.0 * math.pi)

        total = _shifted_quad(integrand, [0.0, ax - 12.0, ax, ax + 12.0])
        return shift + math.log(total)
    if prior.family == STRETCHED_EXP:
        return _u_stretched(prior.q, float(x))
    raise ValueError(f"no quadrature density for {prior.family!r}")


def growth_ratio(
    prior: PriorSpec,
    p: float,
    x_min: float = 0.1,
    x_max: float = 1e3,
    points: int = 61,
) -> CumulantReport:
    """Tabulate u(x)/|x|^p on a geometric grid and flag convergence.

    Converged means the ratio moved by less than 1% in relative terms over
    the final decade of the grid.
    """
    if p < 1.0:
        raise ValueError("p must be >= 1")
    xs = np.geomspace(x_min, x_max, points)
    us = np.array([u_eval(prior, float(x)) for x in xs])
    ratio = us / xs ** p
    limit = float(ratio[-1])
    decade_idx = int(np.searchsorted(xs, xs[-1] / 10.0))
    decade_idx = min(decade_idx, points - 2)
    prev = float(ratio[decade_idx])
    converged = bool(prev != 0.0 and abs(limit - prev) / abs(prev) < 0.01)
    return CumulantReport(
        x_grid=xs, u_values=us, ratio=ratio, limit_estimate=limit, converged=converged
    )


def _log_tail_quad(exponent, saddle: float, shift: float) -> float:
    """log of integral over [0, inf) of exp(exponent(z)), saddle-shifted."""

    def integrand(z):
        t = exponent(z) - shift
        return math.exp(t) if t < 700.0 else math.inf

    pts = [p for p in (saddle / 2.0, saddle, 2.0 * saddle) if p > 0.0]
    edges = [0.0] + sorted(set(pts))
    total = 0.0
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        for a, b in zip(edges[:-1], edges[1:]):
            val, _ = integrate.quad(
                integrand, a, b, epsabs=1e-12, epsrel=1e-10, limit=300
            )
            total += val
        val, _ = integrate.quad(
            integrand, edges[-1], math.inf, epsabs=1e-12, epsrel=1e-10, limit=300
        )
        total += val
    return shift + math.log(total)


def log_psi_expectation(prior: PriorSpec, r: float, lam: float) -> float:
    """log E[exp((|Z|/lam)^r)], +inf when the integral diverges."""
    if lam <= 0.0:
        return math.inf
    if prior.family == RADEMACHER:
        return lam ** (-r)
    if prior.family == GAUSSIAN:
        if r > 2.0 or (r == 2.0 and lam * lam <= 2.0):
            return math.inf
        if r == 2.0:
            return -0.5 * math.log1p(-2.0 / (lam * lam))
        # saddle of (z/lam)^r - z^2/2 at z* = (r / lam^r)^(1/(2-r))
        zstar = (r / lam ** r) ** (1.0 / (2.0 - r))
        shift = (zstar / lam) ** r - 0.5 * zstar * zstar

        def expo(z):
            return (z / lam) ** r - 0.5 * z * z

        return (
            math.log(2.0 / math.sqrt(2.0 * math.pi))
            + _log_tail_quad(expo, zstar, shift)
        )
    if prior.family == STRETCHED_EXP:
        q = prior.q
        if r > q or (r == q and lam <= 1.0):
            return math.inf
        if r == q:
            # E = (1 - lam^-q)^(-1/q) in closed form
            return -math.log1p(-lam ** (-q)) / q
        zstar = (r / (q * lam ** r)) ** (1.0 / (q - r))
        shift = (zstar / lam) ** r - zstar ** q

        def expo(z):
            return (z / lam) ** r - z ** q

        return (
            math.log(2.0 / _stretched_norm_const(q))
            + _log_tail_quad(expo, zstar, shift)
        )
    if prior.family == GAUSS_BERNOULLI_MIX:
        w = prior.weight
        lb = math.log1p(-w) + lam ** (-r) if w < 1.0 else -math.inf
        if w == 0.0:
            return lb
        lg = log_psi_expectation(PriorSpec.gaussian(), r, lam)
        if math.isinf(lg):
            return math.inf
        lg += math.log(w)
        return float(np.logaddexp(lg, lb))
    raise ValueError(f"unknown family {prior.family!r}")


def psi_norm(prior: PriorSpec, r: float) -> float:
    """Orlicz norm: the lambda solving E[exp((|Z|/lambda)^r)] = 2."""
    if r < 1.0:
        raise ValueError("r must be >= 1")
    tail = prior.tail_exponent
    if r > tail:
        raise ValueError(
            f"psi_{r} norm diverges: tail exponent of {prior.family} is {tail}"
        )
    # divergence edge for r equal to the tail exponent
    lo = 0.0
    if prior.family == GAUSSIAN and r == 2.0:
        lo = math.sqrt(2.0)
    if prior.family == GAUSS_BERNOULLI_MIX and prior.weight > 0.0 and r == 2.0:
        lo = math.sqrt(2.0)
    if prior.family == STRETCHED_EXP and r == prior.q:
        lo = 1.0

    log2 = math.log(2.0)
    hi = max(1.0, 2.0 * lo) if lo > 0 else 1.0
    while log_psi_expectation(prior, r, hi) >= log2:
        hi *= 2.0
        if hi > 1e12:
            raise RuntimeError("psi norm bracket expansion failed (upper)")
    if lo == 0.0:
        lo = hi / 2.0
        while log_psi_expectation(prior, r, lo) < log2:
            lo /= 2.0
            if lo < 1e-12:
                raise RuntimeError("psi norm bracket expansion failed (lower)")
    while hi - lo > PSI_NORM_TOL * max(1.0, hi):
        mid = 0.5 * (lo + hi)
        if log_psi_expectation(prior, r, mid) < log2:
            hi = mid
        else:
            lo = mid
    return 0.5 * (lo + hi)
