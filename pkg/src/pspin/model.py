"""Scalar mathematics of the landscape model.

Conjugate exponent families, coin-tossing entropy, the flip-difference
kernels Phi_p / bar-Phi_p, the barrier threshold t(r), and the numerical
constants d(p), e(p), kappa_1(p), h(p) that enter the concentration
estimates.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from scipy import integrate

CONJUGACY_TOL = 1e-12


@dataclass(frozen=True)
class ExponentSet:
    """Hölder family (p, q, p+, q-, kappa) steering every scaling in the model."""

    p: float
    q: float
    p_plus: float
    q_minus: float
    kappa: float


@dataclass(frozen=True)
class LoadParams:
    """Unit counts together with the load alpha = n2 / n1^(p+/2)."""

    n1: int
    n2: int
    alpha: float


@dataclass(frozen=True)
class ConstantsTable:
    """Derived constants for p in (1,2]; ``h`` is finite only for p < 2.

    The truncated-series constant h(p) diverges as p -> 2 (the summand
    exponent n^(2p-2) - (n-1)^2/4 stops decaying), so at exactly p = 2 the
    field is +inf and the Bernstein-type estimate applies instead.
    """

    d_p: float
    e_p: float
    kappa1_p: float
    h: float


def exponents(value: float, given: str = "p") -> ExponentSet:
    """Build the conjugate exponent family from either p or q (> 1)."""
    if given not in ("p", "q"):
        raise ValueError(f"given must be 'p' or 'q', got {given!r}")
    v = float(value)
    if not math.isfinite(v) or v <= 1.0:
        raise ValueError(f"exponent must be finite and > 1, got {value!r}")
    p = v if given == "p" else v / (v - 1.0)
    q = p / (p - 1.0)
    p_plus = max(2.0, p)
    q_minus = min(2.0, q)
    kappa = 1.0 + p - p / p_plus
    return ExponentSet(p=p, q=q, p_plus=p_plus, q_minus=q_minus, kappa=kappa)


def load_params(n1: int, n2: int, exps: ExponentSet) -> LoadParams:
    if n1 < 1 or n2 < 1:
        raise ValueError("n1 and n2 must be positive")
    return LoadParams(n1=n1, n2=n2, alpha=n2 / n1 ** (exps.p_plus / 2.0))


def entropy(r: float) -> float:
    """Coin-tossing entropy -r log r - (1-r) log(1-r), with 0 log 0 = 0."""
    if not 0.0 <= r <= 1.0:
        raise ValueError(f"r must lie in [0,1], got {r!r}")
    if r == 0.0 or r == 1.0:
        return 0.0
    return -r * math.log(r) - (1.0 - r) * math.log(1.0 - r)


def phi(x: float, y: float, p: float) -> float:
    """Flip-difference kernel |x+y|^p - |x-y|^p."""
    if not (math.isfinite(x) and math.isfinite(y)):
        raise ValueError("phi requires finite arguments")
    if p <= 1.0:
        raise ValueError("p must be > 1")
    return abs(x + y) ** p - abs(x - y) ** p


def phi_bar(r: float, p: float) -> float:
    """Self-overlap kernel 1 - (1-2r)^p = phi(r, 1-r, p) at unit scale."""
    if not 0.0 <= r <= 0.5:
        raise ValueError(f"r must lie in [0, 1/2], got {r!r}")
    if p < 1.0:
        raise ValueError("p must be >= 1")
    return 1.0 - (1.0 - 2.0 * r) ** p


def threshold_t(r: float, p: float) -> float:
    """Barrier threshold t(r) = 1 - (1-2r)^p - r^(p/2), r in (0, 1/2], p >= 2."""
    if not 0.0 < r <= 0.5:
        raise ValueError(f"r must lie in (0, 1/2], got {r!r}")
    if p < 2.0:
        raise ValueError("p must be >= 2")
    return 1.0 - (1.0 - 2.0 * r) ** p - r ** (p / 2.0)


def d_constant(p: float) -> float:
    """d(p) = 2^p (2p - 1 - 2^(p-1) ((p-1)/p)^(p-1) (3p-2)/p), p in (1,2]."""
    if not 1.0 < p <= 2.0:
        raise ValueError(f"p must lie in (1, 2], got {p!r}")
    return 2.0 ** p * (
        2.0 * p
        - 1.0
        - 2.0 ** (p - 1.0) * ((p - 1.0) / p) ** (p - 1.0) * (3.0 * p - 2.0) / p
    )


def e_constant(p: float) -> float:
    """e(p) = integral over [0, inf) of exp(-x^(2/p)/2); equals 2^(p/2) Gamma(p/2+1)."""
    if p <= 0.0:
        raise ValueError("p must be positive")
    val, _ = integrate.quad(
        lambda x: math.exp(-(x ** (2.0 / p)) / 2.0),
        0.0,
        math.inf,
        epsabs=1e-10,
        epsrel=1e-12,
        limit=200,
    )
    return val


def kappa1_constant(p: float) -> float:
    """kappa_1(p) = (1/8) min( (1/4)(2/3)^p (d-e)^2 , (2/3) 2^(-2/p) (d-e)^(2/p) )."""
    gap = abs(d_constant(p) - e_constant(p))
    return 0.125 * min(
        0.25 * (2.0 / 3.0) ** p * gap ** 2,
        (2.0 / 3.0) * 2.0 ** (-2.0 / p) * gap ** (2.0 / p),
    )


def h_constant(p: float, term_tol: float = 1e-14) -> float:
    """Series constant 2 sum_{n>=1} exp(n^(2p-2) - (n-1)^2/4), p in (1,2).

    Terms are unimodal in n; summation stops once a term falls below
    ``term_tol``.  The series diverges for p >= 2, and for p above roughly
    1.86 its peak term already exceeds double range; the value is then
    reported as +inf (finite in exact arithmetic, unrepresentable here).
    """
    if not 1.0 < p < 2.0:
        raise ValueError(f"p must lie in (1, 2), got {p!r}")
    total = 0.0
    n = 1
    while True:
        arg = n ** (2.0 * p - 2.0) - (n - 1) ** 2 / 4.0
        if arg > 709.0:
            return math.inf
        term = math.exp(arg)
        total += term
        if term < term_tol:
            break
        n += 1
        if n > 10_000_000:
            raise RuntimeError("h series failed to converge")
    return 2.0 * total


def constants_table(p: float) -> ConstantsTable:
    """All derived constants at one p in (1,2]; h is +inf at the p = 2 endpoint."""
    if not 1.0 < p <= 2.0:
        raise ValueError(f"p must lie in (1, 2], got {p!r}")
    h = h_constant(p) if p < 2.0 else math.inf
    return ConstantsTable(
        d_p=d_constant(p),
        e_p=e_constant(p),
        kappa1_p=kappa1_constant(p),
        h=h,
    )
