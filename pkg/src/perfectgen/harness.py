"""Seeded Monte Carlo experiment driver.

Each experiment draws its trials from independent per-trial random streams
(PCG64 keyed by (seed, trial index)), so reports are bit-reproducible for a
given spec regardless of the thread count, which is read from the
PERFECTGEN_THREADS environment variable (default: all cores, affecting
latency only).  Summaries carry exactly computable reference values where
the theory provides one, along with 3-sigma Monte Carlo bands.
"""

from __future__ import annotations

import csv
import io
import json
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

import numpy as np
from scipy import stats as _sstats

from .errors import PerfectgenError, ScaleError, ValidationError
from .exactalgs import (
    ORACLE_MAX_N,
    alpha_exact,
    chromatic_index,
    connectivity,
    contains_induced,
    omega_exact,
)
from .generator import Arrangement, gen, gen_minus, gen_plus
from .graphcore import Graph, degrees, graph6_decode
from .graphon import t_counts
from .lndist import exact_pmf
from .structure import (
    alpha_omega_fast,
    clique_colour_2,
    hamilton,
    verify_clique_colouring,
    verify_clique_colouring_oracle,
)

__all__ = [
    "EXPERIMENT_NAMES",
    "ExperimentSpec",
    "ExperimentReport",
    "run",
    "h_normality_stats",
    "HNormalityStats",
    "big_h_vs_ln",
    "BigHReport",
    "graph_invariants",
    "canonical_json",
    "thread_count",
    "trial_rng",
    "PACKAGE_VERSION",
]

try:
    from importlib.metadata import version as _dist_version

    PACKAGE_VERSION = _dist_version("perfectgen")
except Exception:  # pragma: no cover - metadata missing outside an install
    PACKAGE_VERSION = "0.1.0"

EXPERIMENT_NAMES = (
    "invariants",
    "hamilton",
    "clique_colour",
    "trichotomy",
    "connectivity",
    "class_one",
    "densities",
    "h_normality",
    "big_h_vs_ln",
)

_SIGNS = ("+", "-", "mixed")


@dataclass(frozen=True)
class ExperimentSpec:
    name: str
    n: int
    trials: int
    seed: int
    sign: str = "mixed"
    pattern: str | None = None  # graph6, trichotomy only

    def __post_init__(self):
        if self.name not in EXPERIMENT_NAMES:
            raise ValidationError(f"unknown experiment {self.name!r}")
        if self.n < 1:
            raise ValidationError("n must be at least 1")
        if self.trials < 1:
            raise ValidationError("trials must be at least 1")
        if not (0 <= self.seed < 1 << 64):
            raise ValidationError("seed must fit in 64 bits")
        if self.sign not in _SIGNS:
            raise ValidationError(f"sign must be one of {_SIGNS}")
        if (self.pattern is not None) != (self.name == "trichotomy"):
            raise ValidationError("pattern is required for trichotomy and only there")

    @property
    def forced_sign(self) -> int | None:
        return {"+": 1, "-": -1, "mixed": None}[self.sign]

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "n": self.n,
            "trials": self.trials,
            "seed": self.seed,
            "sign": self.sign,
            "pattern": self.pattern,
        }


@dataclass(frozen=True)
class ExperimentReport:
    spec: dict
    trials: list[dict]
    summary: dict
    environment: dict

    def to_json(self) -> str:
        return canonical_json(
            {
                "spec": self.spec,
                "trials": self.trials,
                "summary": self.summary,
                "environment": self.environment,
            }
        )

    def to_csv(self) -> str:
        """Flat per-trial projection (summary values are not repeated)."""
        cols = sorted({key for rec in self.trials for key in rec})
        buf = io.StringIO()
        writer = csv.DictWriter(buf, fieldnames=cols, lineterminator="\n")
        writer.writeheader()
        for rec in self.trials:
            writer.writerow({k: _csv_cell(rec.get(k)) for k in cols})
        return buf.getvalue()


def _csv_cell(x):
    if x is None:
        return ""
    if isinstance(x, bool):
        return "true" if x else "false"
    return x


def canonical_json(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"), allow_nan=False)


def thread_count() -> int:
    raw = os.environ.get("PERFECTGEN_THREADS", "").strip()
    if raw:
        try:
            workers = int(raw)
        except ValueError as ex:
            raise ValidationError(f"PERFECTGEN_THREADS must be an integer, got {raw!r}") from ex
        if workers < 1:
            raise ValidationError("PERFECTGEN_THREADS must be at least 1")
        return workers
    return os.cpu_count() or 1


def trial_rng(seed: int, trial: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence([seed, trial])))


def _gen_signed(n: int, rng: np.random.Generator, forced: int | None):
    if forced == 1:
        return gen_plus(n, rng)
    if forced == -1:
        return gen_minus(n, rng)
    return gen(n, rng)


def _map_trials(trials: int, fn: Callable[[int], dict]) -> list[dict]:
    def guarded(t: int) -> dict:
        try:
            return fn(t)
        except ScaleError:
            raise  # misconfiguration: every trial would fail the same way
        except (PerfectgenError, RuntimeError) as ex:
            return {"trial": t, "error": f"{type(ex).__name__}: {ex}"}

    workers = thread_count()
    if workers == 1 or trials == 1:
        return [guarded(t) for t in range(trials)]
    with ThreadPoolExecutor(max_workers=workers) as ex:
        return list(ex.map(guarded, range(trials)))


def run(spec: ExperimentSpec) -> ExperimentReport:
    """Drive one experiment; per-trial analyzer failures become records,
    never batch aborts (scale errors excepted, they are deterministic)."""
    if spec.name in ("h_normality", "big_h_vs_ln") and spec.n < 50:
        raise ValidationError(f"{spec.name} needs n >= 50")
    trial_fn, summarize = _RUNNERS[spec.name]
    records = _map_trials(spec.trials, lambda t: trial_fn(spec, t))
    summary = summarize(spec, records)
    summary["errors"] = sum(1 for r in records if "error" in r)
    return ExperimentReport(
        spec=spec.to_dict(),
        trials=records,
        summary=summary,
        environment={"seed": spec.seed, "version": PACKAGE_VERSION},
    )


def _ok(records: list[dict]) -> list[dict]:
    return [r for r in records if "error" not in r]


def _rate(records: list[dict], key: str) -> float | None:
    vals = [r[key] for r in records if r.get(key) is not None]
    if not vals:
        return None
    return sum(1 for v in vals if v) / len(vals)


def _mean(records: list[dict], key: str) -> float | None:
    vals = [r[key] for r in records if r.get(key) is not None]
    if not vals:
        return None
    return math.fsum(vals) / len(vals)


def _band(p: float, trials: int) -> list[float]:
    """Central 3-sigma band for an empirical frequency around probability p."""
    sigma = math.sqrt(max(p * (1 - p), 1e-300) / trials)
    return [max(0.0, p - 3 * sigma), min(1.0, p + 3 * sigma)]


# -- invariants ------------------------------------------------------------------


def _invariants_trial(spec: ExperimentSpec, t: int) -> dict:
    rng = trial_rng(spec.seed, t)
    g, arr = _gen_signed(spec.n, rng, spec.forced_sign)
    fast = alpha_omega_fast(g, arr)
    rec = {
        "trial": t,
        "sign": arr.sign,
        "k": arr.central.bit_count(),
        "parts": len(arr.side_parts),
        "alpha": fast.alpha,
        "omega": fast.omega,
        "certain": fast.certain,
        "h": min(fast.alpha, fast.omega),
        "big_h": max(fast.alpha, fast.omega),
    }
    if spec.n <= ORACLE_MAX_N:
        a_ex = alpha_exact(g)
        o_ex = omega_exact(g)
        rec["alpha_exact"] = a_ex
        rec["omega_exact"] = o_ex
        rec["alpha_match"] = fast.alpha == a_ex
        rec["omega_match"] = fast.omega == o_ex
    if arr.sign == 1:
        rec["dichotomy_ok"] = fast.alpha - len(arr.side_parts) in (0, 1)
    return rec


def _invariants_summary(spec: ExperimentSpec, records: list[dict]) -> dict:
    ok = _ok(records)
    return {
        "certain_rate": _rate(ok, "certain"),
        "alpha_match_rate": _rate(ok, "alpha_match"),
        "omega_match_rate": _rate(ok, "omega_match"),
        "dichotomy_ok_all": all(r["dichotomy_ok"] for r in ok if "dichotomy_ok" in r),
        "mean_alpha": _mean(ok, "alpha"),
        "mean_omega": _mean(ok, "omega"),
        "mean_h": _mean(ok, "h"),
        "mean_big_h": _mean(ok, "big_h"),
    }


# -- hamilton --------------------------------------------------------------------


def _hamilton_trial(spec: ExperimentSpec, t: int) -> dict:
    rng = trial_rng(spec.seed, t)
    g, arr = _gen_signed(spec.n, rng, spec.forced_sign)
    out = hamilton(g, arr, rng)
    return {
        "trial": t,
        "sign": arr.sign,
        "k": arr.central.bit_count(),
        "kind": out.kind,
        "failure": out.failure,
        "obstruction_size": None if out.obstruction is None else out.obstruction.bit_count(),
    }


def _upper_tail_reference(n: int, sign: str) -> Fraction:
    """Exact probability that the central clique is larger than n/2 on the
    co-unipolar branch (the verified non-Hamiltonicity certificate rate)."""
    pmf = exact_pmf(n)
    tail = sum(pmf[n // 2 + 1 :], Fraction(0))
    factor = {"+": Fraction(0), "-": Fraction(1), "mixed": Fraction(1, 2)}[sign]
    return factor * tail


def _hamilton_summary(spec: ExperimentSpec, records: list[dict]) -> dict:
    ok = _ok(records)
    total = len(ok)
    kinds = {k: sum(1 for r in ok if r["kind"] == k) for k in ("cycle", "obstruction", "failure")}
    ref = _upper_tail_reference(spec.n, spec.sign)
    ref_f = float(ref)
    return {
        "cycle_rate": kinds["cycle"] / total if total else None,
        "certificate_rate": kinds["obstruction"] / total if total else None,
        "failure_rate": kinds["failure"] / total if total else None,
        "certificate_reference": ref_f,
        "certificate_reference_exact": f"{ref.numerator}/{ref.denominator}",
        "certificate_band_3sigma": _band(ref_f, total) if total else None,
        "failure_tags": sorted({r["failure"] for r in ok if r["failure"]}),
    }


# -- clique colouring --------------------------------------------------------------


def _clique_colour_trial(spec: ExperimentSpec, t: int) -> dict:
    rng = trial_rng(spec.seed, t)
    g, arr = _gen_signed(spec.n, rng, spec.forced_sign)
    colours = clique_colour_2(g, arr)
    rec = {
        "trial": t,
        "sign": arr.sign,
        "success": colours is not None,
        "verified": None,
        "oracle_verified": None,
    }
    if colours is not None:
        rec["verified"] = verify_clique_colouring(g, arr, colours)
        if spec.n <= 30:
            rec["oracle_verified"] = verify_clique_colouring_oracle(g, colours)
    return rec


def _clique_colour_summary(spec: ExperimentSpec, records: list[dict]) -> dict:
    ok = _ok(records)
    return {
        "success_rate": _rate(ok, "success"),
        "all_verified": all(r["verified"] for r in ok if r["verified"] is not None),
        "all_oracle_verified": all(
            r["oracle_verified"] for r in ok if r["oracle_verified"] is not None
        ),
    }


# -- trichotomy --------------------------------------------------------------------


def _trichotomy_trial(spec: ExperimentSpec, t: int) -> dict:
    rng = trial_rng(spec.seed, t)
    pattern = graph6_decode(spec.pattern.encode("ascii"))
    g, arr = _gen_signed(spec.n, rng, spec.forced_sign)
    found = contains_induced(g, pattern) is not None
    return {"trial": t, "sign": arr.sign, "contains": found}


def _trichotomy_summary(spec: ExperimentSpec, records: list[dict]) -> dict:
    ok = _ok(records)
    return {
        "containment_rate": _rate(ok, "contains"),
        "reference": 0.5,
        "band_3sigma": _band(0.5, len(ok)) if ok else None,
    }


# -- connectivity -------------------------------------------------------------------


def _connectivity_trial(spec: ExperimentSpec, t: int) -> dict:
    rng = trial_rng(spec.seed, t)
    g, arr = _gen_signed(spec.n, rng, spec.forced_sign)
    kappa = connectivity(g)
    delta = min(degrees(g))
    return {
        "trial": t,
        "sign": arr.sign,
        "kappa": kappa,
        "delta": delta,
        "kappa_equals_delta": kappa == delta,
    }


def _connectivity_summary(spec: ExperimentSpec, records: list[dict]) -> dict:
    ok = _ok(records)
    return {
        "kappa_equals_delta_rate": _rate(ok, "kappa_equals_delta"),
        "mean_kappa": _mean(ok, "kappa"),
        "mean_delta": _mean(ok, "delta"),
    }


# -- class one ----------------------------------------------------------------------


def _class_one_trial(spec: ExperimentSpec, t: int) -> dict:
    rng = trial_rng(spec.seed, t)
    g, arr = _gen_signed(spec.n, rng, spec.forced_sign)
    degs = degrees(g)
    cap_delta = max(degs) if degs else 0
    unique_max = degs.count(cap_delta) == 1 if g.n else False
    chi, colouring = chromatic_index(g)
    return {
        "trial": t,
        "sign": arr.sign,
        "cap_delta": cap_delta,
        "unique_max_degree": unique_max,
        "chi_prime": chi,
        "certified": colouring.certified,
        "class_one": chi == cap_delta,
    }


def _class_one_summary(spec: ExperimentSpec, records: list[dict]) -> dict:
    ok = _ok(records)
    return {
        "unique_max_degree_rate": _rate(ok, "unique_max_degree"),
        "class_one_rate": _rate(ok, "class_one"),
        "certified_rate": _rate(ok, "certified"),
        "class_one_when_unique": all(
            r["class_one"] and r["certified"] for r in ok if r["unique_max_degree"]
        ),
    }


# -- densities ---------------------------------------------------------------------


def _densities_trial(spec: ExperimentSpec, t: int) -> dict:
    rng = trial_rng(spec.seed, t)
    g, arr = _gen_signed(spec.n, rng, spec.forced_sign)
    k2 = Graph.from_edges(2, [(0, 1)])
    rep = t_counts(k2, g)
    dev = abs(rep.t_inj - Fraction(1, 2))
    bound2 = 2.0 * (1.0 / spec.n + spec.n**-0.5)
    return {
        "trial": t,
        "sign": arr.sign,
        "edges": g.edge_count(),
        "t_inj_k2": float(rep.t_inj),
        "within_bound": float(dev) <= bound2,
    }


def _densities_summary(spec: ExperimentSpec, records: list[dict]) -> dict:
    ok = _ok(records)
    n = spec.n
    edge_ref = n * (n - 1) // 2 / 2  # exact under sign symmetry
    edge_vals = [r["edges"] for r in ok]
    mean_edges = math.fsum(edge_vals) / len(edge_vals) if edge_vals else None
    if len(edge_vals) > 1:
        var = math.fsum((e - mean_edges) ** 2 for e in edge_vals) / (len(edge_vals) - 1)
        se = math.sqrt(var / len(edge_vals))
    else:
        se = None
    return {
        "within_bound_rate": _rate(ok, "within_bound"),
        "mean_edges": mean_edges,
        "edge_reference": edge_ref,
        "edge_se": se,
        "mean_t_inj_k2": _mean(ok, "t_inj_k2"),
    }


# -- h normality --------------------------------------------------------------------


@dataclass(frozen=True)
class HNormalityStats:
    n: int
    trials: int
    mean: float
    variance: float | None
    skewness: float | None
    excess_kurtosis: float | None
    ks_distance: float | None
    target_mean: float
    target_variance: float

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "trials": self.trials,
            "mean": self.mean,
            "variance": self.variance,
            "skewness": self.skewness,
            "excess_kurtosis": self.excess_kurtosis,
            "ks_distance": self.ks_distance,
            "target_mean": self.target_mean,
            "target_variance": self.target_variance,
        }


def _h_samples(n: int, trials: int, seed: int, forced_sign: int | None) -> list[int]:
    def one(t: int) -> dict:
        rng = trial_rng(seed, t)
        g, arr = _gen_signed(n, rng, forced_sign)
        fast = alpha_omega_fast(g, arr)
        return {
            "trial": t,
            "sign": arr.sign,
            "h": min(fast.alpha, fast.omega),
            "big_h": max(fast.alpha, fast.omega),
        }

    return _map_trials(trials, one)


def h_normality_stats(
    n: int, trials: int, seed: int, sign: str = "mixed"
) -> HNormalityStats:
    """Sample h = min(alpha, omega) and report standardized moments plus the
    Kolmogorov distance to the standard normal, next to the asymptotic
    targets n/(2 ln n) and n/(2 ln^2 n)."""
    if n < 50:
        raise ValidationError("h normality statistics need n >= 50")
    forced = {"+": 1, "-": -1, "mixed": None}[sign]
    records = _h_samples(n, trials, seed, forced)
    hs = np.array([r["h"] for r in records], dtype=float)
    mean = float(hs.mean())
    if trials < 2 or float(hs.std(ddof=0)) == 0.0:
        return HNormalityStats(
            n=n,
            trials=trials,
            mean=mean,
            variance=None if trials < 2 else float(hs.var(ddof=1)),
            skewness=None,
            excess_kurtosis=None,
            ks_distance=None,
            target_mean=n / (2 * math.log(n)),
            target_variance=n / (2 * math.log(n) ** 2),
        )
    variance = float(hs.var(ddof=1))
    standardized = (hs - mean) / math.sqrt(variance)
    return HNormalityStats(
        n=n,
        trials=trials,
        mean=mean,
        variance=variance,
        skewness=float(_sstats.skew(hs)),
        excess_kurtosis=float(_sstats.kurtosis(hs, fisher=True)),
        ks_distance=float(_sstats.kstest(standardized, "norm").statistic),
        target_mean=n / (2 * math.log(n)),
        target_variance=n / (2 * math.log(n) ** 2),
    )


def _h_normality_trial(spec: ExperimentSpec, t: int) -> dict:
    rng = trial_rng(spec.seed, t)
    g, arr = _gen_signed(spec.n, rng, spec.forced_sign)
    fast = alpha_omega_fast(g, arr)
    return {
        "trial": t,
        "sign": arr.sign,
        "h": min(fast.alpha, fast.omega),
        "big_h": max(fast.alpha, fast.omega),
    }


def _h_normality_summary(spec: ExperimentSpec, records: list[dict]) -> dict:
    if spec.n < 50:
        raise ValidationError("h normality statistics need n >= 50")
    ok = _ok(records)
    hs = np.array([r["h"] for r in ok], dtype=float)
    out = {
        "target_mean": spec.n / (2 * math.log(spec.n)),
        "target_variance": spec.n / (2 * math.log(spec.n) ** 2),
        "mean": float(hs.mean()) if len(hs) else None,
        "variance": float(hs.var(ddof=1)) if len(hs) > 1 else None,
        "skewness": None,
        "excess_kurtosis": None,
        "ks_distance": None,
    }
    if len(hs) > 1 and float(hs.std(ddof=0)) > 0.0:
        out["skewness"] = float(_sstats.skew(hs))
        out["excess_kurtosis"] = float(_sstats.kurtosis(hs, fisher=True))
        standardized = (hs - hs.mean()) / math.sqrt(out["variance"])
        out["ks_distance"] = float(_sstats.kstest(standardized, "norm").statistic)
    return out


# -- big H vs L(n) ------------------------------------------------------------------


@dataclass(frozen=True)
class BigHReport:
    n: int
    trials: int
    tv_distance: float
    noise_floor: float
    support: int

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "trials": self.trials,
            "tv_distance": self.tv_distance,
            "noise_floor": self.noise_floor,
            "support": self.support,
        }


def big_h_vs_ln(n: int, trials: int, seed: int, sign: str = "mixed") -> BigHReport:
    """Plug-in total variation distance between the empirical law of
    H = max(alpha, omega) and the exact law governing the central clique
    size, with the sampling noise floor sqrt(support/trials) for scale."""
    if n < 50:
        raise ValidationError("the H comparison needs n >= 50")
    forced = {"+": 1, "-": -1, "mixed": None}[sign]
    records = _h_samples(n, trials, seed, forced)
    counts: dict[int, int] = {}
    for r in records:
        counts[r["big_h"]] = counts.get(r["big_h"], 0) + 1
    pmf = exact_pmf(n)
    cutoff = Fraction(1, trials)
    support_keys = set(counts) | {k for k, p in enumerate(pmf) if p >= cutoff}
    tv = Fraction(0)
    for k in range(n + 1):
        emp = Fraction(counts.get(k, 0), trials)
        tv += abs(emp - pmf[k])
    tv = tv / 2
    support = len(support_keys)
    return BigHReport(
        n=n,
        trials=trials,
        tv_distance=float(tv),
        noise_floor=math.sqrt(support / trials),
        support=support,
    )


def _big_h_trial(spec: ExperimentSpec, t: int) -> dict:
    return _h_normality_trial(spec, t)


def _big_h_summary(spec: ExperimentSpec, records: list[dict]) -> dict:
    if spec.n < 50:
        raise ValidationError("the H comparison needs n >= 50")
    ok = _ok(records)
    counts: dict[int, int] = {}
    for r in ok:
        counts[r["big_h"]] = counts.get(r["big_h"], 0) + 1
    pmf = exact_pmf(spec.n)
    trials = len(ok)
    cutoff = Fraction(1, trials) if trials else Fraction(1)
    support = len(set(counts) | {k for k, p in enumerate(pmf) if p >= cutoff})
    tv = Fraction(0)
    for k in range(spec.n + 1):
        emp = Fraction(counts.get(k, 0), trials) if trials else Fraction(0)
        tv += abs(emp - pmf[k])
    tv = tv / 2
    h_ge = all(r["big_h"] >= r["h"] for r in ok)
    return {
        "tv_distance": float(tv),
        "noise_floor": math.sqrt(support / trials) if trials else None,
        "support": support,
        "big_h_ge_h_all": h_ge,
    }


# -- full invariant bundle (CLI) -----------------------------------------------------


def graph_invariants(g: Graph, arr: Arrangement | None = None):
    """All eight scalar invariants for one graph.  alpha/omega come from the
    exact oracles when the graph is small enough, otherwise from the fast
    arrangement-driven path (which needs arr)."""
    from .exactalgs import GraphInvariants

    if g.n <= ORACLE_MAX_N:
        a = alpha_exact(g)
        o = omega_exact(g)
    elif arr is not None:
        fast = alpha_omega_fast(g, arr)
        a, o = fast.alpha, fast.omega
    else:
        raise ScaleError(
            f"exact alpha/omega need n <= {ORACLE_MAX_N}; pass an arrangement for larger graphs"
        )
    degs = degrees(g)
    chi, _col = chromatic_index(g)
    return GraphInvariants(
        alpha=a,
        omega=o,
        h=min(a, o),
        big_h=max(a, o),
        kappa=connectivity(g),
        delta=min(degs),
        cap_delta=max(degs),
        chi_prime=chi,
    )


_RUNNERS: dict[str, tuple[Callable, Callable]] = {
    "invariants": (_invariants_trial, _invariants_summary),
    "hamilton": (_hamilton_trial, _hamilton_summary),
    "clique_colour": (_clique_colour_trial, _clique_colour_summary),
    "trichotomy": (_trichotomy_trial, _trichotomy_summary),
    "connectivity": (_connectivity_trial, _connectivity_summary),
    "class_one": (_class_one_trial, _class_one_summary),
    "densities": (_densities_trial, _densities_summary),
    "h_normality": (_h_normality_trial, _h_normality_summary),
    "big_h_vs_ln": (_big_h_trial, _big_h_summary),
}
