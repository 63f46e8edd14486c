"""Exact dynamic-programming enumeration of orthant-confined lattice walks.

The layer recurrence g_n(y) = sum_s w_s g_{n-1}(y - s), restricted to the
orthant, is evaluated on the bounding box of the current layer's support, so
models whose reachable set stays small (such as the half-space family) cost
almost nothing regardless of the horizon. Two value representations are
kept: exact arbitrary-precision integers for unit weights, and doubles with
a per-layer max renormalization whose accumulated logarithm keeps thousands
of layers in range.

The same machinery provides the per-endpoint layer (for the change-of-measure
identity check), n-th-root rate extrapolation from the count series, and the
breadth-first search certifying a shift delta for which every orthant start
obeys the rate limit.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass

import numpy as np

from . import cones, laplace, steps as steps_mod

EXACT = "exact"
LOG_SCALED = "log_scaled"

# Relative mass below which a cell is dropped when re-trimming a float layer;
# keeps boxes tight at an error many orders below every reported tolerance.
FLOAT_TRIM = 1e-30

# Cost caps: the DP touches O(n^d) lattice cells per layer in the worst case.
MAX_HORIZON_EXACT = 200
MAX_HORIZON = {1: 2000, 2: 2000, 3: 120}
MAX_HORIZON_HIGH_DIM = 60


@dataclass(frozen=True, eq=False)
class CountSeries:
    """Per-length totals of confined walks (or survival mass).

    ``values[n]`` is an exact integer in exact mode and a
    (mantissa, log_scale) pair in log-scaled mode, representing
    mantissa * exp(log_scale).
    """

    start: tuple
    n_max: int
    mode: str
    values: tuple
    model_id: str

    def log_value(self, n):
        """log of the n-th total, or None when the total is zero."""
        v = self.values[n]
        if self.mode == EXACT:
            return math.log(v) if v > 0 else None
        mantissa, scale = v
        if mantissa <= 0.0:
            return None
        return math.log(mantissa) + scale

    def float_value(self, n):
        lv = self.log_value(n)
        if lv is None:
            return 0.0
        if lv > 700.0:
            return math.inf
        return math.exp(lv)


def _as_lattice_steps(steps):
    steps = np.atleast_2d(np.asarray(steps))
    if np.any(steps != np.round(steps)):
        raise ValueError("enumeration needs integer lattice steps")
    return steps.astype(np.int64)


def _as_orthant_start(start, dim, cone):
    if cone is not None and cone.kind != cones.ORTHANT:
        raise cones.UnsupportedConeError("walk enumeration supports the orthant only")
    start = np.asarray(start)
    if start.shape != (dim,):
        raise ValueError(f"start must have length {dim}")
    if np.any(start != np.round(start)):
        raise ValueError("start must be a lattice point")
    start = start.astype(np.int64)
    if np.any(start < 0):
        raise ValueError("start lies outside the orthant")
    return start


class _LayerDP:
    """Orthant-confined layer recurrence on an adaptive bounding box."""

    def __init__(self, steps, weights, start, exact, trim_threshold=FLOAT_TRIM):
        self.steps = steps
        self.exact = exact
        self.d = steps.shape[1]
        self.weights = [1] * steps.shape[0] if exact else weights
        self.trim_threshold = trim_threshold
        self.lo = start.copy()
        self.log_scale = 0.0
        if exact:
            self.layer = np.empty((1,) * self.d, dtype=object)
            self.layer[(0,) * self.d] = 1
        else:
            self.layer = np.ones((1,) * self.d, dtype=float)

    @property
    def dead(self):
        return self.layer.size == 0

    def total(self):
        if self.exact:
            return int(self.layer.sum()) if self.layer.size else 0
        return (float(self.layer.sum()) if self.layer.size else 0.0, self.log_scale)

    def advance(self):
        if self.dead:
            return
        lo, layer = self.lo, self.layer
        hi = lo + np.array(layer.shape, dtype=np.int64) - 1
        new_lo = np.maximum(lo + self.steps.min(axis=0), 0)
        new_hi = hi + self.steps.max(axis=0)
        if np.any(new_hi < new_lo):
            self._kill()
            return
        shape = tuple(int(v) for v in (new_hi - new_lo + 1))
        if self.exact:
            new = np.zeros(shape, dtype=object)
        else:
            new = np.zeros(shape, dtype=float)
        for s, w in zip(self.steps, self.weights):
            d_lo = np.maximum(new_lo, lo + s)
            d_hi = np.minimum(new_hi, hi + s)
            if np.any(d_lo > d_hi):
                continue
            dst = tuple(slice(int(a - b), int(c - b + 1)) for a, c, b in zip(d_lo, d_hi, new_lo))
            src = tuple(slice(int(a - e - b), int(c - e - b + 1)) for a, c, e, b in zip(d_lo, d_hi, s, lo))
            if self.exact:
                new[dst] += layer[src]
            else:
                new[dst] += w * layer[src]
        self.lo, self.layer = new_lo, new
        self._trim()
        if not self.exact and not self.dead:
            mx = float(self.layer.max())
            if mx > 0.0:
                self.layer /= mx
                self.log_scale += math.log(mx)
                if self.trim_threshold > 0.0:
                    self.layer[self.layer < self.trim_threshold] = 0.0

    def _kill(self):
        self.layer = np.zeros((0,) * self.d, dtype=self.layer.dtype)

    def _trim(self):
        if self.exact:
            mask = self.layer != 0
        else:
            mask = self.layer > 0.0
        if not mask.any():
            self._kill()
            return
        slices = []
        for ax in range(self.d):
            proj = mask.any(axis=tuple(i for i in range(self.d) if i != ax))
            idx = np.where(proj)[0]
            slices.append(slice(int(idx[0]), int(idx[-1] + 1)))
            self.lo[ax] += int(idx[0])
        self.layer = self.layer[tuple(slices)]

    def endpoint_items(self):
        """(lattice point, mass) pairs of the current layer."""
        items = []
        if self.dead:
            return items
        for idx in np.argwhere(self.layer != 0 if self.exact else self.layer > 0.0):
            point = tuple(int(v) for v in (self.lo + idx))
            v = self.layer[tuple(idx)]
            if self.exact:
                items.append((point, int(v)))
            else:
                items.append((point, float(v) * math.exp(self.log_scale)))
        return items


def _model_id(steps, weights, start, mode):
    wpart = "uniform-unit" if weights is None else [float(w) for w in weights]
    return (f"steps={steps.tolist()};weights={wpart};cone=orthant;"
            f"start={[int(v) for v in start]};mode={mode}")


def count_walks(steps, start, n_max, weights=None, mode=LOG_SCALED, cone=None):
    """Totals of length-n orthant-confined walks for n = 0,...,n_max.

    Unit weights (``weights=None``) count walks; probability weights turn the
    totals into survival probabilities. Exact mode demands unit weights.
    """
    steps = _as_lattice_steps(steps)
    start = _as_orthant_start(start, steps.shape[1], cone)
    if n_max < 0:
        raise ValueError("n_max must be >= 0")
    if mode not in (EXACT, LOG_SCALED):
        raise ValueError(f"unknown mode {mode!r}")
    cap = MAX_HORIZON.get(steps.shape[1], MAX_HORIZON_HIGH_DIM)
    if n_max > cap:
        raise ValueError(f"horizon {n_max} above the dimension-{steps.shape[1]} cap {cap}")
    if mode == EXACT:
        if weights is not None:
            raise ValueError("exact mode counts walks and requires unit weights")
        if n_max > MAX_HORIZON_EXACT:
            raise ValueError(f"exact mode capped at n <= {MAX_HORIZON_EXACT}")
        w = None
    else:
        w = np.ones(steps.shape[0]) if weights is None else np.asarray(weights, dtype=float)
        if w.shape != (steps.shape[0],) or np.any(w <= 0.0):
            raise ValueError("need one positive weight per step")
    dp = _LayerDP(steps, w, start, exact=(mode == EXACT))
    values = [dp.total()]
    for _ in range(n_max):
        dp.advance()
        values.append(dp.total())
    return CountSeries(
        start=tuple(int(v) for v in start),
        n_max=n_max,
        mode=mode,
        values=tuple(values),
        model_id=_model_id(steps, weights, start, mode),
    )


def end_point_counts(steps, start, cone, n, weights=None):
    """The n-th layer itself: lattice endpoint -> count (or weighted mass)."""
    steps = _as_lattice_steps(steps)
    start = _as_orthant_start(start, steps.shape[1], cone)
    exact = weights is None
    w = None if exact else np.asarray(weights, dtype=float)
    # no threshold trim here: endpoint masses are compared cell by cell
    dp = _LayerDP(steps, w, start, exact=exact, trim_threshold=0.0)
    for _ in range(n):
        dp.advance()
    return dict(dp.endpoint_items())


@dataclass(frozen=True)
class RateEstimate:
    raw_ratio: float
    period: int
    extrapolated: float


# A p-lag ratio sequence is accepted as stable when its tail log-spread stays
# below this; parity effects (the half-space family) overshoot it by orders.
STABLE_SPREAD = 1e-2

_PERIODS = (1, 2, 3, 4, 6)


def estimate_rate(series):
    """n-th-root growth estimate from a count series.

    The lag (period) is the smallest of {1,2,3,4,6} whose tail ratio sequence
    is stable, which absorbs lattice parity oscillation; the raw tail ratio is
    then refined by a linear-in-1/n fit of the last quarter of the ratio
    sequence, modelling a polynomial prefactor. A series whose tail died out
    reports rate zero.
    """
    logs = [series.log_value(n) for n in range(series.n_max + 1)]
    alive = [n for n, lv in enumerate(logs) if lv is not None]
    if not alive or alive[-1] == 0:
        return RateEstimate(raw_ratio=0.0, period=1, extrapolated=0.0)
    n_last = alive[-1]
    if n_last < series.n_max:
        # zeros are absorbing for confined walks: the walk died out
        return RateEstimate(raw_ratio=0.0, period=1, extrapolated=0.0)

    best = None
    chosen = None
    for p in _PERIODS:
        ms = [m for m in range(p, n_last + 1) if logs[m] is not None and logs[m - p] is not None]
        if len(ms) < 2:
            continue
        ratio_logs = [(logs[m] - logs[m - p]) / p for m in ms]
        window = ratio_logs[-max(3, len(ratio_logs) // 4):]
        spread = max(window) - min(window)
        if best is None or spread < best[0]:
            best = (spread, p, ms, ratio_logs)
        if chosen is None and spread <= STABLE_SPREAD:
            chosen = (spread, p, ms, ratio_logs)
            break
    if best is None:
        return RateEstimate(raw_ratio=0.0, period=1, extrapolated=0.0)
    spread, period, ms, ratio_logs = chosen if chosen is not None else best
    raw = math.exp(ratio_logs[-1])
    if chosen is None or len(ms) < 3:
        # no lag in {1,2,3,4,6} stabilizes the tail: report raw ratios only
        return RateEstimate(raw_ratio=raw, period=period, extrapolated=raw)

    k = max(4, len(ms) // 4)
    tail_ms = ms[-k:]
    tail_r = [math.exp(r) for r in ratio_logs[-k:]]
    x = np.array([1.0 / m for m in tail_ms])
    y = np.array(tail_r)
    slope_intercept = np.polyfit(x, y, 1)
    extrapolated = max(0.0, float(slope_intercept[1]))
    return RateEstimate(raw_ratio=raw, period=period, extrapolated=extrapolated)


def cramer_identity_check(m, z, start, cone, n):
    """Max relative discrepancy of the change-of-measure identity at time n.

    Compares, endpoint by endpoint, the confined local probability under the
    original law against L(z)^n e^{<z, x-y>} times the probability under the
    tilted law. Both sides come from dense double-precision layers, so the
    horizon is capped where that stays meaningful.
    """
    if m.mode != steps_mod.PROBABILITY:
        raise ValueError("identity check needs a probability-mode measure")
    if n > 30:
        raise ValueError("identity check supports n <= 30 (dense double layers)")
    z = np.asarray(z, dtype=float)
    start = np.asarray(start, dtype=np.int64)
    tilted = steps_mod.tilt(m, z)
    lz = laplace.value(laplace.FiniteLaplace(m), z)
    base = end_point_counts(m.steps, start, cone, n, weights=m.weights)
    moved = end_point_counts(m.steps, start, cone, n, weights=tilted.weights)
    worst = 0.0
    for y, p_base in base.items():
        p_tilt = moved.get(y, 0.0)
        rhs = lz ** n * math.exp(float(z @ (start - np.array(y)))) * p_tilt
        worst = max(worst, abs(p_base - rhs) / p_base)
    return worst


@dataclass(frozen=True)
class FindDeltaResult:
    found: bool
    delta: float | None = None
    n0: int | None = None
    path: tuple | None = None
    h2_witness: np.ndarray | None = None


def find_delta(steps, cone, v=None, delta_grid=None, n_max=None):
    """Smallest grid shift delta certifying the rate limit's validity region.

    Searches (breadth-first, lattice) for a walk from the origin staying in
    the cone shifted inward by delta that ends strictly inside the cone. A
    success witnesses that every start in the delta-shifted cone obeys the
    rate limit; exhaustion over the grid is reported as a value, together
    with the half-space witness when the step set is improper.
    """
    steps = _as_lattice_steps(steps)
    d = steps.shape[1]
    if cone.dim != d:
        raise ValueError("cone dimension does not match the steps")
    if v is None:
        v = cones.interior_vector(cone)
    v = np.asarray(v, dtype=float)
    if delta_grid is None:
        delta_grid = tuple(float(k) for k in range(11))
    if n_max is None:
        n_max = steps_mod.default_h3_depth(steps)

    for delta in sorted(delta_grid):
        origin = (0,) * d
        parents = {origin: None}
        frontier = deque([(origin, 0)])
        while frontier:
            point, depth = frontier.popleft()
            if depth == n_max:
                continue
            base = np.array(point, dtype=np.int64)
            for si, s in enumerate(steps):
                nxt = base + s
                key = tuple(int(x) for x in nxt)
                if key in parents:
                    continue
                # state must stay in K - delta*v, i.e. nxt + delta*v in K
                if not cones.contains(cone, nxt + delta * v):
                    continue
                parents[key] = (point, si)
                if cones.strictly_contains(cone, nxt.astype(float)):
                    path = []
                    cur = key
                    while parents[cur] is not None:
                        prev, idx = parents[cur]
                        path.append(tuple(int(x) for x in steps[idx]))
                        cur = prev
                    path.reverse()
                    return FindDeltaResult(found=True, delta=float(delta),
                                           n0=depth + 1, path=tuple(path))
                frontier.append((key, depth + 1))

    witness = steps_mod.halfspace_witness(steps_mod.from_step_set(steps), cones.dual(cone))
    return FindDeltaResult(found=False, h2_witness=witness)
