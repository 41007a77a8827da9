"""Uniform random set partitions and their statistics.

The sampler is the urn construction: draw an urn count K with probability
proportional to K^m / K!, throw the m elements independently and uniformly
into the K urns, and discard empty urns.  For a fixed partition pi with b
blocks the number of label vectors inducing pi is K(K-1)...(K-b+1), so

    P(pi) = sum_K  K^m/(e B_m K!) * (K)_b / K^m
          = 1/(e B_m) * sum_K 1/(K-b)!  =  1 / B_m,

using Dobinski's identity sum_K K^m/K! = e B_m for the normalizer.  The
sampler is therefore exactly uniform, rejection-free, and O(m) per draw after
a cached weight table.

The K-series is truncated at K_max = m + ceil(40 sqrt(m)): successive weight
ratios are (1+1/K)^m/(K+1) < e^{m/K}/(K+1) < e/m there, so the discarded mass
is below (m^m/m!) * (e/m)^{40 sqrt m} < 2^-60 * e * B_m for every m >= 1
(checked numerically in the tests against the full series in log space).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .errors import ValidationError
from .numerics import _log2_factorials, _logsumexp2, bell_table, solve_r

__all__ = [
    "SetPartition",
    "PartitionStats",
    "sample_uniform",
    "stats",
    "harper_moments",
    "tail_reports",
    "TailReport",
    "all_partitions",
]


@dataclass(frozen=True)
class SetPartition:
    """Partition of {0..m-1}; block ids are dense and ordered by smallest element."""

    m: int
    block_of: tuple[int, ...]

    def __post_init__(self):
        if len(self.block_of) != self.m:
            raise ValidationError("block_of must assign every element")
        seen = -1
        for e, b in enumerate(self.block_of):
            if b < 0 or b > seen + 1:
                raise ValidationError(
                    f"block ids must appear in order of smallest element (element {e})"
                )
            seen = max(seen, b)

    @property
    def block_count(self) -> int:
        return max(self.block_of) + 1 if self.m else 0

    def blocks(self) -> list[list[int]]:
        out: list[list[int]] = [[] for _ in range(self.block_count)]
        for e, b in enumerate(self.block_of):
            out[b].append(e)
        return out


@dataclass(frozen=True)
class PartitionStats:
    block_count: int
    size_spectrum: tuple[int, ...]  # Y_t = number of blocks of size t, t = 0..m
    max_block: int


def stats(p: SetPartition) -> PartitionStats:
    sizes = [0] * p.block_count
    for b in p.block_of:
        sizes[b] += 1
    spectrum = [0] * (p.m + 1)
    for s in sizes:
        spectrum[s] += 1
    return PartitionStats(
        block_count=p.block_count,
        size_spectrum=tuple(spectrum),
        max_block=max(sizes) if sizes else 0,
    )


@lru_cache(maxsize=64)
def _urn_cdf(m: int) -> np.ndarray:
    """cdf over the truncated urn counts K = 1..K_max, weights K^m/K!."""
    k_max = m + math.ceil(40.0 * math.sqrt(m))
    k = np.arange(1, k_max + 1, dtype=np.float64)
    logw = m * np.log2(k) - _log2_factorials(k_max)[1:]
    w = np.exp2(logw - logw.max())
    cdf = np.cumsum(w)
    cdf /= cdf[-1]
    cdf[-1] = 1.0
    cdf.setflags(write=False)
    return cdf


def sample_uniform(m: int, rng: np.random.Generator) -> SetPartition:
    """Exactly uniform over the B_m partitions of {0..m-1}."""
    if m < 0:
        raise ValidationError("ground-set size must be nonnegative")
    if m == 0:
        return SetPartition(0, ())
    cdf = _urn_cdf(m)
    k = int(np.searchsorted(cdf, rng.random(), side="right")) + 1
    labels = rng.integers(0, k, size=m)
    remap: dict[int, int] = {}
    block_of = []
    for lab in labels:
        lab = int(lab)
        if lab not in remap:
            remap[lab] = len(remap)
        block_of.append(remap[lab])
    return SetPartition(m, tuple(block_of))


def harper_moments(m: int) -> tuple[float, float]:
    """Exact mean and variance of the block count of a uniform partition:
    E = B_{m+1}/B_m - 1,  Var = B_{m+2}/B_m - (B_{m+1}/B_m)^2 - 1."""
    if m < 1:
        raise ValidationError("harper_moments requires m >= 1")
    table = bell_table(m + 2)
    if m + 2 <= table.exact_cutoff:
        b0, b1, b2 = (
            Fraction(table.exact[m]),
            Fraction(table.exact[m + 1]),
            Fraction(table.exact[m + 2]),
        )
        mean = b1 / b0 - 1
        var = b2 / b0 - (b1 / b0) ** 2 - 1
        return float(mean), float(var)
    l0, l1, l2 = table.logs[m], table.logs[m + 1], table.logs[m + 2]
    mean = 2.0 ** (l1 - l0) - 1.0
    var = 2.0 ** (l2 - l0) - (2.0 ** (l1 - l0)) ** 2 - 1.0
    return mean, var


def all_partitions(m: int) -> list[SetPartition]:
    """Every partition of {0..m-1} in canonical block_of form (enumeration oracle)."""
    if m == 0:
        return [SetPartition(0, ())]
    out = []

    def rec(e: int, prefix: list[int], nblocks: int):
        if e == m:
            out.append(SetPartition(m, tuple(prefix)))
            return
        for b in range(nblocks + 1):
            prefix.append(b)
            rec(e + 1, prefix, max(nblocks, b + 1))
            prefix.pop()

    rec(0, [], 0)
    return out


# -- tail reports ---------------------------------------------------------------


@dataclass(frozen=True)
class TailLine:
    kind: str  # "block_count" | "max_block" | "interval_count"
    params: dict
    empirical: float
    reference: float | None  # the asymptotic bound (may exceed 1); None if n/a
    flagged: bool  # empirical exceeds the bound by > 3 sigma sampling error

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "params": self.params,
            "empirical": self.empirical,
            "reference": self.reference,
            "flagged": self.flagged,
        }


@dataclass(frozen=True)
class TailReport:
    m: int
    samples: int
    r: float
    lam: float  # m / r
    lines: tuple[TailLine, ...]

    def to_dict(self) -> dict:
        return {
            "m": self.m,
            "samples": self.samples,
            "r": self.r,
            "lambda": self.lam,
            "lines": [line.to_dict() for line in self.lines],
        }


def _flag(emp: float, bound: float, samples: int) -> bool:
    if bound >= 1.0:
        return False
    sigma = math.sqrt(max(bound * (1.0 - bound), 1.0 / samples) / samples)
    return emp > bound + 3.0 * sigma


def tail_reports(
    m: int,
    samples: int,
    rng: np.random.Generator,
    *,
    epsilons: tuple[float, ...] = (0.25, 0.5),
    max_block_xs: tuple[float, ...] | None = None,
    intervals: tuple[tuple[int, int, float], ...] | None = None,
) -> TailReport:
    """Empirical tails of the block count, the maximum block, and interval
    counts Y_I, reported next to the asymptotic reference bounds.

    Bounds (with r the root of r e^r = m and lambda = m/r):
      block count:  P(||sigma| - lambda| >= eps*lambda) < m e^{-m(eps - ln(eps+1))}
      max block:    P(L(sigma) >= x) < e^{-x(ln x - ln r - 2) + ln m}
      Y_I:          P(|Y_I - lambda_I| >= xi) = O(e^{-min(xi^2/(4 lambda_I), xi/2)})
    with lambda_I = sum_{j in I} r^j / j!.  The bounds carry unquantified
    (1+o(1)) factors, so a line is flagged only when the empirical frequency
    exceeds the bound by more than 3 sigma of sampling error; nothing is
    asserted here.
    """
    if m < 8:
        raise ValidationError("tail_reports requires m >= 8")
    if samples < 1:
        raise ValidationError("samples must be positive")
    r = solve_r(m).r
    lam = m / r
    if max_block_xs is None:
        max_block_xs = (m / math.log2(m),)
    if intervals is None:
        xi = 4.0 * math.sqrt(lam)
        intervals = ((1, m, xi),)

    block_counts = np.empty(samples, dtype=np.int64)
    max_blocks = np.empty(samples, dtype=np.int64)
    interval_counts = np.zeros((len(intervals), samples), dtype=np.int64)
    for i in range(samples):
        st = stats(sample_uniform(m, rng))
        block_counts[i] = st.block_count
        max_blocks[i] = st.max_block
        spectrum = np.asarray(st.size_spectrum)
        for j, (k1, k2, _) in enumerate(intervals):
            interval_counts[j, i] = spectrum[k1 : k2 + 1].sum()

    lines = []
    for eps in epsilons:
        emp = float(np.mean(np.abs(block_counts - lam) >= eps * lam))
        bound = min(1.0, m * math.exp(-m * (eps - math.log1p(eps))))
        lines.append(
            TailLine(
                kind="block_count",
                params={"epsilon": eps},
                empirical=emp,
                reference=bound,
                flagged=_flag(emp, bound, samples),
            )
        )
    for x in max_block_xs:
        emp = float(np.mean(max_blocks >= x))
        bound = min(1.0, math.exp(-x * (math.log(x) - math.log(r) - 2.0) + math.log(m)))
        lines.append(
            TailLine(
                kind="max_block",
                params={"x": x},
                empirical=emp,
                reference=bound,
                flagged=_flag(emp, bound, samples),
            )
        )
    for j, (k1, k2, xi) in enumerate(intervals):
        if not 1 <= k1 <= k2 <= m:
            raise ValidationError(f"interval [{k1}, {k2}] out of range")
        lam_i = _lambda_interval(r, k1, k2)
        emp = float(np.mean(np.abs(interval_counts[j] - lam_i) >= xi))
        bound = min(1.0, math.exp(-min(xi * xi / (4.0 * lam_i), xi / 2.0)))
        lines.append(
            TailLine(
                kind="interval_count",
                params={"k1": k1, "k2": k2, "xi": xi, "lambda_I": lam_i},
                empirical=emp,
                reference=bound,
                flagged=_flag(emp, bound, samples),
            )
        )
    return TailReport(m=m, samples=samples, r=r, lam=lam, lines=tuple(lines))


def _lambda_interval(r: float, k1: int, k2: int) -> float:
    """sum_{j=k1..k2} r^j / j! computed stably in log space."""
    j = np.arange(k1, k2 + 1, dtype=np.float64)
    logs = j * math.log2(r) - _log2_factorials(k2)[k1 : k2 + 1]
    return float(2.0 ** _logsumexp2(logs))
