"""Seeded Monte Carlo estimation of cone non-exit probabilities.

Randomness comes from a counter-based Philox stream keyed on the seed, with
trajectory t consuming the fixed positions (step k, trial t) of that stream:
results are a pure function of (seed, model, start, config) and cannot depend
on how trials would be scheduled. The tilted estimator simulates under the
exponentially changed measure at the rate minimizer and reweights back, which
is unbiased for the original survival probability and much tighter when the
drift points out of the cone.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import cones, steps as steps_mod


@dataclass(frozen=True)
class SimConfig:
    seed: int = 0
    trials: int = 10000
    n: int = 100
    tilt: tuple | None = None

    def __post_init__(self):
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if self.n < 1:
            raise ValueError("horizon must be >= 1")


@dataclass(frozen=True)
class SimResult:
    estimate: float
    stderr: float
    trials: int
    n: int
    seed: int


def _row_membership(cone, pos):
    if cone.kind == cones.ORTHANT:
        return (pos >= 0).all(axis=1)
    if cone.kind == cones.HALFSPACE:
        return pos @ cone.vectors >= 0
    if cone.kind == cones.INEQUALITIES:
        return (pos @ cone.vectors.T >= 0).all(axis=1)
    raise cones.UnsupportedConeError(
        f"simulation supports orthant/half-space/inequality cones, got {cone.kind}"
    )


def _mean_stderr(samples):
    est = float(samples.mean())
    if samples.size < 2:
        return est, 0.0
    return est, float(samples.std(ddof=1) / math.sqrt(samples.size))


def _simulate(m, start, cone, config, checkpoints, statistic):
    """Drive the walk ensemble and evaluate `statistic` at each checkpoint."""
    steps_mod._require_probability(m, "simulation")
    start = np.asarray(start)
    lattice = m.is_lattice() and np.all(start == np.round(start))
    if lattice:
        steps = m.steps.astype(np.int64)
        pos = np.tile(start.astype(np.int64), (config.trials, 1))
    else:
        steps = m.steps
        pos = np.tile(start.astype(float), (config.trials, 1))
    cumw = np.cumsum(m.weights)
    rng = np.random.Generator(np.random.Philox(key=config.seed))
    alive = np.ones(config.trials, dtype=bool)
    wanted = set(checkpoints)
    out = {}
    for k in range(1, config.n + 1):
        u = rng.random(config.trials)
        idx = np.minimum(np.searchsorted(cumw, u, side="right"), steps.shape[0] - 1)
        pos = pos + steps[idx]
        alive &= _row_membership(cone, pos)
        if k in wanted:
            out[k] = statistic(k, pos, alive)
    return out


def simulate_survival(m, start, cone, config):
    """Plain Monte Carlo estimate of P[walk stays in the cone through n]."""

    def stat(_k, _pos, alive):
        return _mean_stderr(alive.astype(float))

    est, se = _simulate(m, start, cone, config, {config.n}, stat)[config.n]
    return SimResult(est, se, config.trials, config.n, config.seed)


def tilted_survival(m, cert, start, cone, config):
    """Importance-sampling estimate of the same survival probability.

    Simulates under the measure tilted at the certificate's minimizer x* and
    reweights by rho^n e^{<x*, start - S_n>}; exact reweighting makes the
    estimator unbiased for the original law.
    """
    x_star = np.asarray(cert.x_star, dtype=float)
    tilted = steps_mod.tilt(m, x_star)
    log_rho = math.log(cert.rho)
    base = float(x_star @ np.asarray(start, dtype=float))

    def stat(k, pos, alive):
        logw = k * log_rho + base - pos @ x_star
        contrib = np.where(alive, np.exp(logw), 0.0)
        return _mean_stderr(contrib)

    est, se = _simulate(tilted, start, cone, config, {config.n}, stat)[config.n]
    return SimResult(est, se, config.trials, config.n, config.seed)


@dataclass(frozen=True)
class BandResult:
    estimate: float
    stderr: float
    trials: int
    n: int
    seed: int
    alpha: float
    alpha_flagged: bool
    series: tuple = ()


def band_survival(m, start, cone, v, alpha, config, checkpoints=()):
    """Estimate of P[stay in the cone through n, |<v, S_n>| <= alpha sqrt(n)].

    Requires the drift inside the cone and v orthogonal to the drift; under
    a full-dimensional support this is the regime where the band-restricted
    non-exit probability decays subexponentially. alpha <= 0 is flagged (the
    statement needs some positive alpha).
    """
    drift = steps_mod.mean(m)
    if not cones.contains(cone, drift, tol=1e-10):
        raise ValueError("band check requires the drift inside the cone")
    v = np.asarray(v, dtype=float)
    if abs(float(v @ drift)) > 1e-10 * max(1.0, float(np.linalg.norm(v)) * float(np.linalg.norm(drift))):
        raise ValueError("band direction v must be orthogonal to the drift")
    flagged = alpha <= 0.0

    def stat(k, pos, alive):
        inband = alive & (np.abs(pos @ v) <= alpha * math.sqrt(k))
        return _mean_stderr(inband.astype(float))

    wanted = sorted(set(checkpoints) | {config.n})
    stats = _simulate(m, start, cone, config, wanted, stat)
    series = tuple((k, stats[k][0], stats[k][1]) for k in wanted)
    est, se = stats[config.n]
    return BandResult(est, se, config.trials, config.n, config.seed,
                      float(alpha), flagged, series)


def default_band_alpha(m, scale=4.0):
    """scale times the square root of the largest covariance eigenvalue."""
    eig = np.linalg.eigvalsh(steps_mod.covariance(m))
    return float(scale * math.sqrt(max(eig[-1], 0.0)))


@dataclass(frozen=True)
class BandDecay:
    per_step_decay: float
    alpha: float
    series: tuple


def band_decay_fit(m, start, cone, v, alpha, horizons, config):
    """Fitted per-step decay of the band survival over a range of horizons.

    Runs one simulation to the largest horizon, records the band estimate at
    each checkpoint, and regresses log-estimate on n; a per-step decay close
    to one is the non-exponential-decay signature. Any zero estimate reports
    decay zero.
    """
    horizons = sorted(horizons)
    cfg = SimConfig(seed=config.seed, trials=config.trials, n=horizons[-1], tilt=config.tilt)
    result = band_survival(m, start, cone, v, alpha, cfg, checkpoints=horizons)
    pts = [(k, est) for k, est, _ in result.series if k in set(horizons)]
    if any(est <= 0.0 for _, est in pts):
        return BandDecay(0.0, float(alpha), result.series)
    x = np.array([k for k, _ in pts], dtype=float)
    y = np.array([math.log(est) for _, est in pts])
    slope = float(np.polyfit(x, y, 1)[0])
    return BandDecay(math.exp(slope), float(alpha), result.series)


def band_alpha_sensitivity(m, start, cone, v, horizons, config, scales=(2.0, 4.0, 8.0)):
    """Per-step band decay across alpha = scale * sqrt(top covariance eig)."""
    out = {}
    for scale in scales:
        alpha = default_band_alpha(m, scale=scale)
        out[scale] = band_decay_fit(m, start, cone, v, alpha, horizons, config)
    return out
