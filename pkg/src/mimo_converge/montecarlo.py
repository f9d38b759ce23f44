"""Monte Carlo sweep harness for the two system-growth scenarios.

A Scenario sweeps either M at fixed user count K, or K at fixed antenna
ratio alpha = M/K. At every sweep point a constant trial budget of channel
realizations is drawn, one independent random stream per trial index, and
the enabled statistics (channel convergence metrics, ZF SNR, MF SINR) are
aggregated into means with standard errors. Results are bit-reproducible
for a fixed (scenario, seed) regardless of worker count: trial t always
uses stream t, its values land in slot t, and the reduction runs over the
trial-ordered arrays.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .channel import CorrelationSpec, RngStream, correlation_sqrt, sample_channel
from .metrics import convergence_metrics
from .numerics import SingularMatrixError, gram_normalized
from .power import PowerProfile, link_gains, profile_moments
from .precoding import SystemParams, mf_sinr_from_gram, mf_sinr_limit, zf_snr_from_gram, zf_snr_limit

FIXED_K = "fixed-K"
FIXED_ALPHA = "fixed-alpha"

DEFAULT_SEED = 12345
DEFAULT_TRIALS = 1000


class ConfigError(ValueError):
    """Scenario or command-line configuration is invalid or contradictory."""


@dataclass(frozen=True)
class Scenario:
    """One sweep: growth mode, sweep grid, channel model and statistics.

    In fixed-K mode the sweep lists M values; in fixed-alpha mode it lists
    K values and M = alpha*K must be an integer at every point. A missing
    profile means equal link gains (all one). gram_source selects whether
    the convergence metrics are computed on the Gram of the small-scale
    channel H (default) or of the gain-scaled channel G.
    """

    mode: str
    sweep: tuple[int, ...]
    K: int | None = None
    alpha: float | None = None
    correlation: CorrelationSpec | None = None
    profile: PowerProfile | None = None
    rho_f: float = 1.0
    trials: int = DEFAULT_TRIALS
    seed: int = DEFAULT_SEED
    compute_metrics: bool = True
    compute_zf: bool = True
    compute_mf: bool = True
    gram_source: str = "H"


@dataclass(frozen=True)
class StatSummary:
    """Aggregate of one statistic at one sweep point."""

    mean: float
    std: float
    stderr: float
    trials: int
    limit: float | None = None


@dataclass(frozen=True)
class SweepPoint:
    M: int
    K: int
    alpha: float
    stats: dict[str, StatSummary]
    degenerate_trials: int = 0


@dataclass(frozen=True)
class SweepResult:
    scenario: Scenario
    points: list[SweepPoint] = field(default_factory=list)


@dataclass(frozen=True)
class LimitGap:
    M: int
    K: int
    statistic: str
    mean: float
    limit: float
    rel_gap: float


def sweep_points(scenario: Scenario) -> list[tuple[int, int]]:
    """Validate a scenario and expand its sweep into (M, K) pairs.

    Raises ConfigError before any computation on an invalid or infeasible
    configuration (including M <= K anywhere while ZF is enabled).
    """
    s = scenario
    if s.mode not in (FIXED_K, FIXED_ALPHA):
        raise ConfigError(f"unknown mode {s.mode!r}, expected {FIXED_K!r} or {FIXED_ALPHA!r}")
    if s.trials < 1:
        raise ConfigError(f"trials must be positive, got {s.trials}")
    if s.rho_f <= 0:
        raise ConfigError(f"rho_f must be positive, got {s.rho_f}")
    if s.seed < 0:
        raise ConfigError(f"seed must be nonnegative, got {s.seed}")
    if s.gram_source not in ("H", "G"):
        raise ConfigError(f"gram_source must be 'H' or 'G', got {s.gram_source!r}")
    if not (s.compute_metrics or s.compute_zf or s.compute_mf):
        raise ConfigError("scenario enables no statistics")
    if any(v < 1 for v in s.sweep):
        raise ConfigError(f"sweep values must be positive, got {s.sweep}")
    if any(b >= a for a, b in zip(s.sweep[1:], s.sweep)):
        raise ConfigError(f"sweep must be strictly increasing, got {s.sweep}")

    if s.mode == FIXED_K:
        if s.K is None or s.K < 1:
            raise ConfigError("fixed-K mode needs a positive K")
        if s.alpha is not None:
            raise ConfigError("alpha is not a fixed-K parameter (the sweep sets M)")
        points = [(int(m), int(s.K)) for m in s.sweep]
    else:
        if s.alpha is None or s.alpha <= 0:
            raise ConfigError("fixed-alpha mode needs a positive alpha")
        if s.K is not None:
            raise ConfigError("K is swept in fixed-alpha mode, do not fix it")
        points = []
        for k in s.sweep:
            m = s.alpha * k
            if abs(m - round(m)) > 1e-9 * max(1.0, m):
                raise ConfigError(f"alpha*K = {s.alpha}*{k} = {m} is not an integer M")
            points.append((int(round(m)), int(k)))

    if s.compute_zf:
        bad = [(m, k) for m, k in points if m <= k]
        if bad:
            raise ConfigError(
                f"ZF needs M > K at every sweep point; offending (M, K): {bad}"
            )
    return points


def _summary(values: np.ndarray, limit: float | None = None) -> StatSummary:
    n = int(values.shape[0])
    std = float(values.std(ddof=1)) if n > 1 else 0.0
    return StatSummary(
        mean=float(values.mean()),
        std=std,
        stderr=std / math.sqrt(n),
        trials=n,
        limit=limit,
    )


def _run_point(scenario: Scenario, M: int, K: int, workers: int) -> SweepPoint:
    s = scenario
    T = s.trials
    beta = link_gains(K, s.profile) if s.profile is not None else np.ones(K)
    if s.correlation is not None and s.correlation.rho > 0:
        correlation_sqrt(M, s.correlation)  # fill the cache before the pool starts

    need_gram_g = s.compute_zf or s.compute_mf or (s.compute_metrics and s.gram_source == "G")
    cols: dict[str, np.ndarray] = {}
    if s.compute_metrics:
        for name in ("mad", "lambda_ratio", "diagonal_dominance"):
            cols[name] = np.empty(T)
    if s.compute_zf:
        cols["zf_snr"] = np.empty(T)
    mf_values = np.empty((T, K)) if s.compute_mf else None
    degenerate = np.zeros(T, dtype=bool)

    def one_trial(t: int, stream: int) -> None:
        sample = sample_channel(M, K, beta, RngStream(s.seed, stream), s.correlation)
        gram_g = gram_normalized(sample.G, 1.0) if need_gram_g else None
        if s.compute_metrics:
            W = gram_g / M if s.gram_source == "G" else gram_normalized(sample.H, M)
            m = convergence_metrics(W)
            cols["mad"][t] = m.mad
            cols["lambda_ratio"][t] = m.lambda_ratio
            cols["diagonal_dominance"][t] = m.diagonal_dominance
        if s.compute_zf:
            cols["zf_snr"][t] = zf_snr_from_gram(gram_g, s.rho_f)
        if mf_values is not None:
            mf_values[t] = mf_sinr_from_gram(gram_g, s.rho_f)

    def run_trial(t: int) -> None:
        try:
            one_trial(t, stream=t)
        except SingularMatrixError:
            # One retry on a fresh stream, offset past all primary streams so
            # it cannot collide with another trial's draw.
            degenerate[t] = True
            one_trial(t, stream=T + t)

    if workers <= 1:
        for t in range(T):
            run_trial(t)
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            list(pool.map(run_trial, range(T)))

    alpha_pt = M / K
    mean_beta, mean_inv_beta = profile_moments(s.profile)
    params = SystemParams(rho_f=s.rho_f, alpha=alpha_pt)
    has_limits = alpha_pt > 1

    stats: dict[str, StatSummary] = {}
    for name in ("mad", "lambda_ratio", "diagonal_dominance"):
        if name in cols:
            stats[name] = _summary(cols[name])
    if s.compute_zf:
        limit = zf_snr_limit(params, mean_inv_beta) if has_limits else None
        stats["zf_snr"] = _summary(cols["zf_snr"], limit)
    if mf_values is not None:
        user_limits = (
            [mf_sinr_limit(params, float(b), mean_beta) for b in beta]
            if has_limits
            else None
        )
        mean_limit = float(np.mean(user_limits)) if user_limits is not None else None
        stats["mf_sinr_mean"] = _summary(mf_values.mean(axis=1), mean_limit)
        for i in range(K):
            stats[f"mf_sinr_user_{i + 1:03d}"] = _summary(
                mf_values[:, i], user_limits[i] if user_limits is not None else None
            )

    return SweepPoint(
        M=M,
        K=K,
        alpha=alpha_pt,
        stats=stats,
        degenerate_trials=int(degenerate.sum()),
    )


def run_scenario(scenario: Scenario, workers: int = 1) -> SweepResult:
    """Run every sweep point of a scenario with the constant trial budget.

    Deterministic for a fixed (scenario, seed), with 1 or many workers.
    Raises ConfigError on an invalid scenario and SingularMatrixError if a
    trial stays degenerate after its one retry.
    """
    points = sweep_points(scenario)
    return SweepResult(
        scenario=scenario,
        points=[_run_point(scenario, M, K, workers) for M, K in points],
    )


def compare_to_limit(result: SweepResult) -> list[LimitGap]:
    """Relative gap between each Monte Carlo mean and its asymptotic limit."""
    gaps = []
    for p in result.points:
        for name, s in p.stats.items():
            if s.limit is not None:
                gaps.append(
                    LimitGap(
                        M=p.M,
                        K=p.K,
                        statistic=name,
                        mean=s.mean,
                        limit=s.limit,
                        rel_gap=abs(s.mean - s.limit) / abs(s.limit),
                    )
                )
    return gaps
