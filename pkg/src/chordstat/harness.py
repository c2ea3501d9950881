"""Monte Carlo orchestration: estimators, distributional distances, and the
pass/fail report machinery.

A report is a pure function of (plan, seed): trials draw from per-index
streams, chunking is deterministic, and aggregation keeps trial order, so
serial and threaded runs produce byte-identical output.
"""
from __future__ import annotations

import json
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import limits
from .game import play_batch
from .sampler import (
    block_lengths_matrix,
    good_interval_counts_from_lengths,
    sample_deals_batch,
)

DEFAULT_BUDGET = 1_000_000_000  # max n * trials unless overridden
BUDGET_ENV = "CHORDSTAT_BUDGET"


# ---------------------------------------------------------------------------
# distances and estimators
# ---------------------------------------------------------------------------

def ks_distance(samples, cdf) -> float:
    """sup over sample points of |empirical CDF - cdf|.

    The empirical CDF is right-continuous, so ties are handled by counting
    all samples <= x.
    """
    x = np.sort(np.asarray(samples, dtype=np.float64))
    if x.size == 0:
        raise ValueError("need at least one sample")
    emp = np.searchsorted(x, x, side="right") / x.size
    target = np.fromiter((cdf(v) for v in x), dtype=np.float64, count=x.size)
    return float(np.abs(emp - target).max())


def tv_distance(p, q) -> float:
    """Total variation (1/2) sum_k |p_k - q_k| over the union of supports."""
    keys = set(p) | set(q)
    return 0.5 * sum(abs(p.get(k, 0.0) - q.get(k, 0.0)) for k in keys)


def empirical_pmf(values) -> dict[int, float]:
    values = np.asarray(values)
    uniq, cnt = np.unique(values, return_counts=True)
    total = values.size
    return {int(k): c / total for k, c in zip(uniq, cnt)}


def empirical_cov(samples) -> np.ndarray:
    """Unbiased sample covariance of row-vector observations."""
    arr = np.asarray(samples, dtype=np.float64)
    if arr.ndim == 1:
        arr = arr[:, None]
    if arr.shape[0] < 2:
        raise ValueError("need at least 2 samples")
    return np.atleast_2d(np.cov(arr, rowvar=False, ddof=1))


# ---------------------------------------------------------------------------
# sample gathering
# ---------------------------------------------------------------------------

def budget_limit() -> int:
    raw = os.environ.get(BUDGET_ENV)
    return int(raw) if raw else DEFAULT_BUDGET


def gather_statistics(
    n: int,
    trials: int,
    seed: int,
    need_play: bool = True,
    threads: int = 1,
    chunk: int | None = None,
) -> dict[str, np.ndarray]:
    """Per-trial summary statistics for `trials` uniform deals of n pairs.

    Returns arrays indexed by trial: game length G, lucky count L (when
    ``need_play``), first-match position D1, block counts B1..B4, even-block
    count Y, and good-interval count s.
    """
    if n < 1 or trials < 1:
        raise ValueError("n and trials must be >= 1")
    if n * trials > budget_limit():
        raise ValueError(
            f"n*trials = {n * trials} exceeds budget {budget_limit()} "
            f"(override with {BUDGET_ENV})"
        )
    if chunk is None:
        chunk = max(1, min(trials, (1 << 24) // (2 * n)))
    starts = list(range(0, trials, chunk))

    def run_chunk(start: int) -> dict[str, np.ndarray]:
        stop = min(start + chunk, trials)
        labels = sample_deals_batch(n, stop - start, seed, base_index=start)
        lengths = block_lengths_matrix(labels)
        out = {
            "D1": lengths[:, 0].copy(),
            "Y": (lengths % 2 == 0).sum(axis=1),
            "s": good_interval_counts_from_lengths(lengths),
        }
        for i in range(1, 5):
            out[f"B{i}"] = (lengths == i).sum(axis=1)
        if need_play:
            g, l, _ = play_batch(labels)
            out["G"] = g
            out["L"] = l
        return out

    if threads > 1 and len(starts) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            parts = list(pool.map(run_chunk, starts))
    else:
        parts = [run_chunk(s) for s in starts]
    return {key: np.concatenate([p[key] for p in parts]) for key in parts[0]}


# ---------------------------------------------------------------------------
# plans and reports
# ---------------------------------------------------------------------------

ALL_STATISTICS = (
    "game_length_rate",
    "game_length_var",
    "game_length_normality_ks",
    "lucky_mean",
    "lucky_tv",
    "first_match_mean",
    "first_match_ks",
    "block_cov_dev",
    "good_interval_rate",
    "even_block_rate",
)

_NEEDS_PLAY = {
    "game_length_rate",
    "game_length_var",
    "game_length_normality_ks",
    "lucky_mean",
    "lucky_tv",
}


@dataclass(frozen=True)
class TrialPlan:
    """What to run: size, trial count, seed, statistics, and output shape."""

    n: int
    trials: int
    seed: int = 0
    statistics: tuple[str, ...] = ALL_STATISTICS
    threads: int = 1
    fmt: str = "json"
    out: str | None = None

    def __post_init__(self) -> None:
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        unknown = set(self.statistics) - set(ALL_STATISTICS)
        if unknown:
            raise ValueError(f"unknown statistics: {sorted(unknown)}")
        if self.fmt not in ("json", "csv"):
            raise ValueError("fmt must be json or csv")


@dataclass(frozen=True)
class StatResult:
    name: str
    estimate: float
    std_error: float | None
    target: float
    tolerance: float
    passed: bool


@dataclass(frozen=True)
class Report:
    plan: TrialPlan
    results: tuple[StatResult, ...]

    @property
    def all_passed(self) -> bool:
        return all(r.passed for r in self.results)

    def to_json_dict(self) -> dict:
        return {
            "plan": {
                "n": self.plan.n,
                "trials": self.plan.trials,
                "seed": self.plan.seed,
                "statistics": list(self.plan.statistics),
            },
            "results": [
                {
                    "name": r.name,
                    "estimate": r.estimate,
                    "std_error": r.std_error,
                    "target": r.target,
                    "tolerance": r.tolerance,
                    "passed": r.passed,
                }
                for r in self.results
            ],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), indent=2, sort_keys=True)

    def to_csv(self) -> str:
        lines = ["name,estimate,std_error,target,tolerance,passed"]
        for r in self.results:
            se = "" if r.std_error is None else repr(r.std_error)
            lines.append(
                f"{r.name},{r.estimate!r},{se},{r.target!r},{r.tolerance!r},{r.passed}"
            )
        return "\n".join(lines) + "\n"

    def render(self) -> str:
        return self.to_json() if self.plan.fmt == "json" else self.to_csv()


def _result(name, estimate, std_error, target, tolerance) -> StatResult:
    return StatResult(
        name=name,
        estimate=float(estimate),
        std_error=None if std_error is None else float(std_error),
        target=float(target),
        tolerance=float(tolerance),
        passed=bool(abs(estimate - target) <= tolerance),
    )


def run_trials(plan: TrialPlan) -> Report:
    """Execute a plan and score every requested statistic against its
    pinned target and tolerance."""
    need_play = bool(_NEEDS_PLAY & set(plan.statistics))
    data = gather_statistics(
        plan.n, plan.trials, plan.seed, need_play=need_play, threads=plan.threads
    )
    n = plan.n
    T = plan.trials
    c = limits.named_constants()
    results = []
    for name in plan.statistics:
        if name == "game_length_rate":
            vals = data["G"] / n
            results.append(_result(name, vals.mean(), vals.std(ddof=1) / math.sqrt(T),
                                   c["game_length_rate"], 0.01))
        elif name == "game_length_var":
            z = (data["G"] - c["game_length_rate"] * n) / math.sqrt(n)
            v = z.var(ddof=1)
            results.append(_result(name, v, v * math.sqrt(2.0 / (T - 1)),
                                   limits.even_block_var_limit() / 4.0, 0.02))
        elif name == "game_length_normality_ks":
            g = data["G"]
            z = (g - g.mean()) / g.std(ddof=1)
            ks = ks_distance(z, limits.normal_cdf)
            results.append(_result(name, ks, None, 0.0, 0.02))
        elif name == "lucky_mean":
            vals = data["L"]
            results.append(_result(name, vals.mean(), vals.std(ddof=1) / math.sqrt(T),
                                   c["lucky_mean"], 0.01))
        elif name == "lucky_tv":
            pmf = empirical_pmf(data["L"])
            kmax = max(pmf) + 40
            target_pmf = {k: limits.poisson_ln2_pmf(k) for k in range(kmax + 1)}
            tv = tv_distance(pmf, target_pmf)
            results.append(_result(name, tv, None, 0.0, 0.02))
        elif name == "first_match_mean":
            vals = data["D1"] / (2.0 * math.sqrt(n))
            results.append(_result(name, vals.mean(), vals.std(ddof=1) / math.sqrt(T),
                                   c["first_match_mean_scaled"], 0.02))
        elif name == "first_match_ks":
            vals = data["D1"] / (2.0 * math.sqrt(n))
            ks = ks_distance(vals, limits.weibull2_cdf)
            results.append(_result(name, ks, None, 0.0, 0.02))
        elif name == "block_cov_dev":
            obs = np.stack(
                [data[f"B{i}"] - limits.block_fraction_limit(i) * n for i in range(1, 5)],
                axis=1,
            ) / math.sqrt(n)
            cov = empirical_cov(obs)
            dev = np.abs(cov - limits.block_cov_matrix(4)).max()
            results.append(_result(name, dev, None, 0.0, 0.03))
        elif name == "good_interval_rate":
            vals = data["s"] / n
            results.append(_result(name, vals.mean(), vals.std(ddof=1) / math.sqrt(T),
                                   c["good_interval_rate"], 0.01))
        elif name == "even_block_rate":
            vals = data["Y"] / n
            results.append(_result(name, vals.mean(), vals.std(ddof=1) / math.sqrt(T),
                                   c["even_block_mean_rate"], 0.01))
    return Report(plan=plan, results=tuple(results))
