"""The central-clique-size distribution L(n).

L(n) puts weight ell_{n,k} = C(n,k) * 2^(k(n-k)) * B_{n-k} on k = 0..n; the
normalizer LL_n = sum_k ell_{n,k} counts unipolar arrangements of order n.
Weights are astronomically large and the concentration tails dip below
2^-4000 at the sizes the verifiers run at, so the pmf and all tail sums are
computed in base-2 log space; the big-integer path (exact_ell / exact_pmf) is
kept as the oracle for small n.

The mean target is mu(n) = (n - log n + log ln n) / 2, defined for n >= 3.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .errors import ScaleError, ValidationError
from .numerics import BellTable, _logsumexp2, bell_table, log2_binomial_row

__all__ = [
    "LDistribution",
    "build",
    "sample",
    "mean",
    "tail_ge",
    "tail_ge_log2",
    "exact_ell",
    "exact_pmf",
    "mu_target",
    "verify_concentration",
    "verify_ratio_bounds",
    "ConcentrationReport",
    "RatioBoundsReport",
]


@dataclass(frozen=True)
class LDistribution:
    n: int
    log_ell: np.ndarray  # log2 ell_{n,k}, k = 0..n
    log_L: float  # log2 LL_n
    mu: float | None  # (n - log n + log ln n)/2, None for n < 3
    pmf: np.ndarray
    cdf: np.ndarray = field(repr=False)


def mu_target(n: int) -> float:
    if n < 3:
        raise ValidationError("mu(n) is defined for n >= 3 (log ln n)")
    return 0.5 * (n - math.log2(n) + math.log2(math.log(n)))


@lru_cache(maxsize=32)
def _bell_for(n: int) -> BellTable:
    return bell_table(n)


def build(n: int) -> LDistribution:
    if n < 1:
        raise ValidationError("L(n) requires n >= 1")
    bells = _bell_for(n)
    k = np.arange(n + 1)
    log_ell = log2_binomial_row(n) + k * (n - k) + bells.logs[::-1].copy()
    log_L = _logsumexp2(log_ell)
    pmf = np.exp2(log_ell - log_L)
    total = pmf.sum()
    # rounding drift grows with the number of log-space terms; observed
    # ~4.5e-10 at n = 8192, and the pmf is renormalized just below
    if not math.isclose(total, 1.0, rel_tol=n * 2.0 ** -38):  # pragma: no cover
        raise ArithmeticError(f"L({n}) pmf normalization off by {total - 1.0:.3e}")
    pmf = pmf / total
    cdf = np.cumsum(pmf)
    cdf[-1] = 1.0
    mu = mu_target(n) if n >= 3 else None
    return LDistribution(n=n, log_ell=log_ell, log_L=log_L, mu=mu, pmf=pmf, cdf=cdf)


def sample(d: LDistribution, rng: np.random.Generator) -> int:
    """One draw from L(n) by binary search on the cdf."""
    u = rng.random()
    return int(np.searchsorted(d.cdf, u, side="right"))


def mean(d: LDistribution) -> float:
    """Exact expectation, summed in log space over the k >= 1 terms."""
    k = np.arange(1, d.n + 1)
    log_terms = d.log_ell[1:] + np.log2(k)
    return 2.0 ** (_logsumexp2(log_terms) - d.log_L)


def tail_ge_log2(d: LDistribution, x: float) -> float:
    """log2 P(|X - mu| >= x); -inf when no support point qualifies."""
    if d.mu is None:
        raise ValidationError("two-sided tail needs mu, which requires n >= 3")
    k = np.arange(d.n + 1)
    sel = np.abs(k - d.mu) >= x
    if not sel.any():
        return float("-inf")
    return _logsumexp2(d.log_ell[sel]) - d.log_L


def tail_ge(d: LDistribution, x: float) -> float:
    """P(|X - mu| >= x).  May underflow to 0.0 for extreme x; use
    tail_ge_log2 when the magnitude itself is the object of interest."""
    return 2.0 ** tail_ge_log2(d, x)


def exact_ell(n: int) -> list[int]:
    """Big-integer ell_{n,k} for k = 0..n (oracle path)."""
    if n < 1:
        raise ValidationError("L(n) requires n >= 1")
    bells = _bell_for(n)
    if n > bells.exact_cutoff:
        raise ScaleError(
            f"exact ell values need Bell numbers beyond the cutoff {bells.exact_cutoff}"
        )
    return [
        math.comb(n, k) * (1 << (k * (n - k))) * bells.exact[n - k]
        for k in range(n + 1)
    ]


def exact_pmf(n: int) -> list[Fraction]:
    ell = exact_ell(n)
    total = sum(ell)
    return [Fraction(e, total) for e in ell]


# -- concentration verification ------------------------------------------------


@dataclass(frozen=True)
class ConcentrationCheck:
    x: float
    log2_tail: float
    log2_lower: float  # -(x+1)^2 - 1
    log2_upper: float  # log2(2^{-(x-2)^2+2} + n^-n)
    lower_ok: bool
    upper_ok: bool


@dataclass(frozen=True)
class ConcentrationReport:
    n: int
    n0: int
    informational: bool  # n < n0: failures are reported, not errors
    mu: float
    exact_mean: float
    mean_within_one: bool
    checks: tuple[ConcentrationCheck, ...]

    def all_ok(self) -> bool:
        return self.mean_within_one and all(
            c.lower_ok and c.upper_ok for c in self.checks
        )

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "n0": self.n0,
            "informational": self.informational,
            "mu": self.mu,
            "exact_mean": self.exact_mean,
            "mean_within_one": self.mean_within_one,
            "checks": [vars(c) for c in self.checks],
        }


def verify_concentration(n: int, xs: list[float], n0: int = 64) -> ConcentrationReport:
    """Exact tail sums against the two-sided concentration envelope.

    For each x: 2^(-(x+1)^2 - 1) <= P(|X - mu| >= x) <= 2^(-(x-2)^2 + 2) + n^-n.
    The lower bound is meaningful for x > 1, the upper for x > 2; both are
    evaluated as given.  Comparisons happen on log2 values because the tails
    underflow float64 long before the interesting sizes.
    """
    d = build(n)
    checks = []
    log2_nn = -n * math.log2(n)
    for x in xs:
        lt = tail_ge_log2(d, x)
        lo = -((x + 1.0) ** 2) - 1.0
        up = float(np.logaddexp2(-((x - 2.0) ** 2) + 2.0, log2_nn))
        checks.append(
            ConcentrationCheck(
                x=float(x),
                log2_tail=lt,
                log2_lower=lo,
                log2_upper=up,
                lower_ok=bool(lt >= lo),
                upper_ok=bool(lt <= up),
            )
        )
    m = mean(d)
    return ConcentrationReport(
        n=n,
        n0=n0,
        informational=n < n0,
        mu=d.mu,
        exact_mean=m,
        mean_within_one=bool(abs(m - d.mu) < 1.0),
        checks=tuple(checks),
    )


# -- ratio-envelope verification -------------------------------------------------


@dataclass(frozen=True)
class RatioCheck:
    x: int
    side: str  # "up" (from ceil(mu)) or "down" (from ceil(mu)-1)
    log2_ratio: float
    ok: bool


@dataclass(frozen=True)
class RatioBoundsReport:
    n: int
    n0: int
    informational: bool
    mu_hat: int  # ceil(mu)
    x_max: int  # floor(n^(2/3))
    checks: tuple[RatioCheck, ...]

    def all_ok(self) -> bool:
        return all(c.ok for c in self.checks)

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "n0": self.n0,
            "informational": self.informational,
            "mu_hat": self.mu_hat,
            "x_max": self.x_max,
            "checks": [vars(c) for c in self.checks],
        }


_RATIO_SLACK = 2.0 ** -20  # float noise allowance on the log2 comparison


def verify_ratio_bounds(n: int, n0: int = 512) -> RatioBoundsReport:
    """Check 2^(-x^2-2x) <= ell_{mh+x}/ell_{mh}, ell_{ml-x}/ell_{ml} <= 2^(-x^2+2x)
    for mh = ceil(mu), ml = mh - 1 and all integer 0 <= x <= n^(2/3).

    Both endpoints are inclusive (x = 0 gives ratio exactly 1 against the
    envelope [1, 1]).
    """
    d = build(n)
    mu_hat = math.ceil(d.mu)
    mu_chk = mu_hat - 1
    x_max = int(n ** (2.0 / 3.0))
    checks = []
    for x in range(x_max + 1):
        lo = -(x * x) - 2 * x - _RATIO_SLACK
        hi = -(x * x) + 2 * x + _RATIO_SLACK
        up_idx = mu_hat + x
        if up_idx <= n:
            lr = float(d.log_ell[up_idx] - d.log_ell[mu_hat])
            checks.append(RatioCheck(x=x, side="up", log2_ratio=lr, ok=lo <= lr <= hi))
        down_idx = mu_chk - x
        if down_idx >= 0:
            lr = float(d.log_ell[down_idx] - d.log_ell[mu_chk])
            checks.append(RatioCheck(x=x, side="down", log2_ratio=lr, ok=lo <= lr <= hi))
    return RatioBoundsReport(
        n=n,
        n0=n0,
        informational=n < n0,
        mu_hat=mu_hat,
        x_max=x_max,
        checks=tuple(checks),
    )
