"""Exact and log-space combinatorial numerics.

Everything downstream that multiplies Bell numbers by powers of two lives far
outside float64 range (B_4000 alone has ~10^4 digits), so weights are carried
as base-2 logarithms.  Exact big-integer values are kept alongside the log
table up to a configurable cutoff both as an oracle for the log path and for
callers that need rational arithmetic.

log means log2 throughout the package.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import ValidationError

LOG2E = math.log2(math.e)

_NEG_INF = float("-inf")


class LogWeight:
    """A nonnegative real carried as its base-2 logarithm.

    Addition is log-sum (stable via the larger exponent), multiplication is
    exponent addition.  The zero weight is represented by lg = -inf.
    """

    __slots__ = ("lg",)

    def __init__(self, lg: float):
        self.lg = float(lg)

    @classmethod
    def zero(cls) -> "LogWeight":
        return cls(_NEG_INF)

    @classmethod
    def from_value(cls, x) -> "LogWeight":
        if x < 0:
            raise ValidationError("LogWeight carries nonnegative reals only")
        if x == 0:
            return cls.zero()
        if isinstance(x, int):
            return cls(_log2_int(x))
        return cls(math.log2(x))

    def to_float(self) -> float:
        return 2.0 ** self.lg

    def is_zero(self) -> bool:
        return self.lg == _NEG_INF

    def __add__(self, other: "LogWeight") -> "LogWeight":
        a, b = self.lg, other.lg
        if a == _NEG_INF:
            return LogWeight(b)
        if b == _NEG_INF:
            return LogWeight(a)
        hi, lo = (a, b) if a >= b else (b, a)
        return LogWeight(hi + math.log2(1.0 + 2.0 ** (lo - hi)))

    def __mul__(self, other: "LogWeight") -> "LogWeight":
        return LogWeight(self.lg + other.lg)

    def __truediv__(self, other: "LogWeight") -> "LogWeight":
        if other.lg == _NEG_INF:
            raise ZeroDivisionError("division by zero LogWeight")
        return LogWeight(self.lg - other.lg)

    def __eq__(self, other) -> bool:
        return isinstance(other, LogWeight) and self.lg == other.lg

    def __lt__(self, other: "LogWeight") -> bool:
        return self.lg < other.lg

    def __le__(self, other: "LogWeight") -> bool:
        return self.lg <= other.lg

    def __repr__(self) -> str:
        return f"LogWeight(lg={self.lg!r})"


def _log2_int(x: int) -> float:
    """log2 of a positive int, accurate even when x overflows float64."""
    if x.bit_length() <= 960:
        return math.log2(x)
    shift = x.bit_length() - 960
    return math.log2(x >> shift) + shift


@dataclass(frozen=True)
class BellTable:
    """Bell numbers B_0..B_n_max: exact big ints up to the cutoff, logs throughout.

    The two code paths are independent (exact: Bell triangle; logs: log-sum-exp
    over B_{n+1} = sum_k C(n,k) B_k) and are cross-checked by the tests.
    """

    n_max: int
    exact_cutoff: int
    exact: tuple[int, ...]  # B_0..B_min(n_max, exact_cutoff)
    logs: np.ndarray  # log2 B_0..B_n_max, float64

    def log2_bell(self, n: int) -> float:
        return float(self.logs[n])


DEFAULT_EXACT_CUTOFF = 400


def bell_table(n_max: int, exact_cutoff: int = DEFAULT_EXACT_CUTOFF) -> BellTable:
    if n_max < 0:
        raise ValidationError("n_max must be nonnegative")
    exact = _bell_exact(min(n_max, exact_cutoff))

    # log path: B_{n+1} = sum_{k=0..n} C(n,k) B_k, all base-2 log-sum-exp.
    logs = np.empty(n_max + 1)
    logs[0] = 0.0
    if n_max >= 1:
        lf = _log2_factorials(n_max)
        for n in range(n_max):
            k = np.arange(n + 1)
            log_binom = lf[n] - lf[k] - lf[n - k]
            logs[n + 1] = _logsumexp2(log_binom + logs[: n + 1])
    return BellTable(n_max=n_max, exact_cutoff=exact_cutoff, exact=tuple(exact), logs=logs)


def _bell_exact(n_max: int) -> list[int]:
    """Bell triangle: row starts with the previous row's last entry."""
    values = [1]
    row = [1]
    for _ in range(n_max):
        nxt = [row[-1]]
        for x in row:
            nxt.append(nxt[-1] + x)
        row = nxt
        values.append(row[0])
    return values[: n_max + 1]


@lru_cache(maxsize=8)
def _log2_factorials_cached(n: int) -> np.ndarray:
    out = np.zeros(n + 1)
    if n >= 1:
        out[1:] = np.cumsum(np.log2(np.arange(1, n + 1, dtype=np.float64)))
    out.setflags(write=False)
    return out


def _log2_factorials(n: int) -> np.ndarray:
    # round the cache key up so nearby table sizes share one array
    size = max(n, 1024)
    size = 1 << (size - 1).bit_length()
    return _log2_factorials_cached(size)[: n + 1]


def _logsumexp2(a: np.ndarray) -> float:
    hi = a.max()
    if hi == _NEG_INF:
        return _NEG_INF
    return float(hi + np.log2(np.exp2(a - hi).sum()))


@dataclass(frozen=True)
class RParam:
    """The unique positive root of r * e^r = n."""

    n: int
    r: float


def solve_r(n: int) -> RParam:
    """Bracketed bisection plus a Newton polish; |r e^r - n| <= n * 2^-40.

    r e^r is strictly increasing on [0, inf), so the root is unique and
    r(n) is strictly increasing in n.
    """
    if n < 1:
        raise ValidationError("solve_r requires n >= 1")
    lo, hi = 0.0, max(1.0, math.log(n))
    while hi * math.exp(hi) < n:
        hi *= 2.0
    for _ in range(60):
        mid = 0.5 * (lo + hi)
        if mid * math.exp(mid) < n:
            lo = mid
        else:
            hi = mid
    r = 0.5 * (lo + hi)
    tol = n * 2.0 ** -40
    for _ in range(8):
        err = r * math.exp(r) - n
        if abs(err) <= 0.25 * tol:
            break
        r -= err / (math.exp(r) * (1.0 + r))
    if abs(r * math.exp(r) - n) > tol:  # pragma: no cover - numerics guard
        raise ArithmeticError(f"solve_r failed to converge for n={n}")
    return RParam(n=n, r=r)


_EXACT_BINOMIAL_MAX = 64


def log_binomial(n: int, k: int) -> LogWeight:
    """log2 C(n, k); exact big-integer path for n <= 64, lgamma beyond.

    Out-of-range k (k < 0 or k > n) yields the zero weight.
    """
    if n < 0:
        raise ValidationError("log_binomial requires n >= 0")
    if k < 0 or k > n:
        return LogWeight.zero()
    if n <= _EXACT_BINOMIAL_MAX:
        return LogWeight(math.log2(math.comb(n, k)))
    lg = (
        math.lgamma(n + 1) - math.lgamma(k + 1) - math.lgamma(n - k + 1)
    ) * LOG2E
    return LogWeight(lg)


def log2_binomial_row(n: int) -> np.ndarray:
    """Vector of log2 C(n, k) for k = 0..n (float path, vectorized)."""
    lf = _log2_factorials(n)
    k = np.arange(n + 1)
    return lf[n] - lf[k] - lf[n - k]
