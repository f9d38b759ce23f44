"""Canned sweep configurations reproducing the reference figures.

Each preset pins every parameter the figures leave unstated (transmit SNR
1.0, link-gain range 0.1 to 1.0, trial budget 1000, log-spaced grids) so a
run is fully described by (preset, seed, trials); all choices are echoed
into the output rows.
"""

from __future__ import annotations

from .channel import CorrelationSpec
from .montecarlo import DEFAULT_SEED, DEFAULT_TRIALS, FIXED_ALPHA, FIXED_K, ConfigError, Scenario
from .power import PowerProfile

UNEQUAL_PROFILE = PowerProfile(beta_min=0.1, beta_max=1.0)

# Metrics sweeps: M doublings up to 16384 (fixed K) or K doublings at
# alpha = 10 (joint growth). Precoder sweeps cover K = 5..100 at alpha = 10.
_M_GRID = (64, 128, 256, 512, 1024, 2048, 4096, 8192, 16384)
_M_GRID_SHORT = (64, 128, 256, 512, 1024, 2048, 4096)
_K_GRID_METRICS = (8, 16, 32, 64, 128, 256)
_K_GRID_METRICS_SHORT = (8, 16, 32, 64, 128)
_K_GRID_PRECODER = (5, 10, 20, 50, 100)


def _metrics(**kw) -> Scenario:
    return Scenario(compute_zf=False, compute_mf=False, **kw)

def _precoder(**kw) -> Scenario:
    return Scenario(compute_metrics=False, **kw)


def _fig1(seed, trials):
    common = dict(mode=FIXED_K, sweep=_M_GRID, seed=seed, trials=trials)
    return [_metrics(K=10, **common), _metrics(K=50, **common)]

def _fig2(seed, trials):
    return [_metrics(mode=FIXED_ALPHA, alpha=10.0, sweep=_K_GRID_METRICS, seed=seed, trials=trials)]

def _fig3(seed, trials):
    return [
        _metrics(mode=FIXED_K, K=10, sweep=_M_GRID_SHORT, seed=seed, trials=trials),
        _metrics(mode=FIXED_ALPHA, alpha=10.0, sweep=_K_GRID_METRICS_SHORT, seed=seed, trials=trials),
    ]

def _fig4(seed, trials):
    return [_precoder(mode=FIXED_ALPHA, alpha=10.0, sweep=_K_GRID_PRECODER, seed=seed, trials=trials)]

def _fig5(seed, trials):
    return [
        _precoder(mode=FIXED_ALPHA, alpha=10.0, sweep=_K_GRID_PRECODER,
                  profile=UNEQUAL_PROFILE, seed=seed, trials=trials)
    ]

def _fig6(seed, trials):
    return [
        _precoder(mode=FIXED_ALPHA, alpha=10.0, sweep=_K_GRID_PRECODER,
                  correlation=CorrelationSpec(rho), seed=seed, trials=trials)
        for rho in (0.5, 0.9)
    ]

def _fig7(seed, trials):
    return [
        _precoder(mode=FIXED_ALPHA, alpha=10.0, sweep=_K_GRID_PRECODER,
                  correlation=CorrelationSpec(rho), profile=UNEQUAL_PROFILE,
                  seed=seed, trials=trials)
        for rho in (0.5, 0.9)
    ]


PRESETS = {
    "fig1": (_fig1, "eigenvalue-ratio vs M, iid channel, K fixed at 10 and 50"),
    "fig2": (_fig2, "mean absolute deviation vs K, iid channel, alpha = 10"),
    "fig3": (_fig3, "diagonal dominance vs system size, fixed K = 10 and fixed alpha = 10"),
    "fig4": (_fig4, "ZF SNR and MF SINR vs K, equal powers, alpha = 10"),
    "fig5": (_fig5, "ZF SNR and MF SINR vs K, unequal powers (0.1 to 1.0), alpha = 10"),
    "fig6": (_fig6, "ZF SNR and MF SINR vs K under ULA correlation (rho 0.5 and 0.9), equal powers"),
    "fig7": (_fig7, "ZF SNR and MF SINR vs K under ULA correlation (rho 0.5 and 0.9), unequal powers"),
}


def build_preset(name: str, seed: int = DEFAULT_SEED, trials: int = DEFAULT_TRIALS) -> list[Scenario]:
    """Scenarios for a named preset; seed and trials stay overridable."""
    try:
        builder, _ = PRESETS[name]
    except KeyError:
        raise ConfigError(
            f"unknown preset {name!r}, expected one of {', '.join(sorted(PRESETS))}"
        ) from None
    return builder(seed, trials)
