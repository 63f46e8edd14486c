"""Laplace transforms of increment laws: values, derivatives, behavior at
infinity, and existence of a constrained global minimum.

Two transform variants are supported: the finite-support empirical transform
L(x) = sum_s w_s e^{<x,s>} and the analytic identity-covariance Gaussian
L(x) = e^{|x|^2/2 + <x,a>} used for the Brownian comparison. Arguments whose
exponents exceed 700 are rejected outright so downstream certificates are
never built from saturated arithmetic.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.optimize import linprog

from . import cones, steps as steps_mod

MAX_EXPONENT = 700.0

# Absolute tolerance classifying a step as lying on the hyperplane u-perp;
# exact for lattice inputs.
BOUNDARY_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class FiniteLaplace:
    """Transform of a finitely supported probability measure."""

    measure: steps_mod.StepMeasure

    def __post_init__(self):
        if self.measure.mode != steps_mod.PROBABILITY:
            raise ValueError("FiniteLaplace needs a probability-mode measure")

    @property
    def dim(self):
        return self.measure.dim


@dataclass(frozen=True, eq=False)
class GaussianLaplace:
    """Transform of a Gaussian increment law with identity covariance."""

    drift: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "drift", np.asarray(self.drift, dtype=float))
        if self.drift.ndim != 1:
            raise ValueError("drift must be a vector")

    @property
    def dim(self):
        return self.drift.shape[0]


def _checked_point(model, x):
    x = np.asarray(x, dtype=float)
    if x.shape != (model.dim,):
        raise ValueError(f"expected a point of length {model.dim}")
    return x


def _finite_exponents(model, x):
    dots = model.measure.steps @ x
    if dots.size and float(np.abs(dots).max()) > MAX_EXPONENT:
        raise OverflowError("Laplace exponent exceeds the overflow guard (700)")
    return dots


def value(model, x):
    x = _checked_point(model, x)
    if isinstance(model, FiniteLaplace):
        dots = _finite_exponents(model, x)
        return float(model.measure.weights @ np.exp(dots))
    expo = 0.5 * float(x @ x) + float(x @ model.drift)
    if expo > MAX_EXPONENT:
        raise OverflowError("Laplace exponent exceeds the overflow guard (700)")
    return float(np.exp(expo))


def gradient(model, x):
    x = _checked_point(model, x)
    if isinstance(model, FiniteLaplace):
        dots = _finite_exponents(model, x)
        return (model.measure.weights * np.exp(dots)) @ model.measure.steps
    return (x + model.drift) * value(model, x)


def hessian(model, x):
    x = _checked_point(model, x)
    if isinstance(model, FiniteLaplace):
        dots = _finite_exponents(model, x)
        w = model.measure.weights * np.exp(dots)
        return (w[:, None] * model.measure.steps).T @ model.measure.steps
    g = x + model.drift
    return (np.eye(model.dim) + np.outer(g, g)) * value(model, x)


@dataclass(frozen=True)
class DirectionBehavior:
    diverges: bool
    limit: float | None = None


def classify_direction(model, u, x=None):
    """Behavior of t -> L(x + t u) as t grows, for a unit direction u.

    Either the transform diverges (some step has positive inner product with
    u) or it converges to the partial sum over the steps lying on u-perp.
    The Gaussian transform diverges in every direction.
    """
    u = np.asarray(u, dtype=float)
    if u.shape != (model.dim,):
        raise ValueError(f"direction must have length {model.dim}")
    if abs(float(np.linalg.norm(u)) - 1.0) > 1e-9:
        raise ValueError("direction must be a unit vector")
    if isinstance(model, GaussianLaplace):
        return DirectionBehavior(diverges=True)
    x = np.zeros(model.dim) if x is None else _checked_point(model, x)
    dots = model.measure.steps @ u
    if float(dots.max()) > BOUNDARY_TOL:
        return DirectionBehavior(diverges=True)
    on_boundary = np.abs(dots) <= BOUNDARY_TOL
    xdots = _finite_exponents(model, x)
    limit = float(np.sum(model.measure.weights[on_boundary] * np.exp(xdots[on_boundary])))
    return DirectionBehavior(diverges=False, limit=limit)


def has_global_min_on_cone(model, cone):
    """Whether L attains a global minimum on the closed convex cone.

    For an all-exponential-moments law this holds exactly when no nonzero
    direction u of the cone keeps the whole support in the half-space
    {<u, .> <= 0}. Decided by minimizing max_s <u, s> over the normalized
    cone parametrization (an LP, solved independently of the phase-1 route
    used by the hypothesis checker so the two can cross-validate).
    """
    if isinstance(model, GaussianLaplace):
        raise TypeError("global-minimum dichotomy applies to finite-support transforms")
    m = model.measure
    if not steps_mod.check_h1(m):
        raise ValueError("global-minimum test requires a full-dimensional support (H1)")
    S = m.steps
    k, d = S.shape
    if cone.kind == cones.ORTHANT:
        G = S
        r = d
    elif cone.kind == cones.GENERATED:
        G = S @ cone.vectors.T
        r = cone.vectors.shape[0]
    else:
        raise cones.UnsupportedConeError(
            f"global-minimum test needs an orthant or generated cone, got {cone.kind}"
        )
    # min gamma s.t. G t <= gamma, t >= 0, sum t = 1
    c = np.zeros(r + 1)
    c[-1] = 1.0
    a_ub = np.hstack([G, -np.ones((k, 1))])
    a_eq = np.zeros((1, r + 1))
    a_eq[0, :r] = 1.0
    res = linprog(
        c, A_ub=a_ub, b_ub=np.zeros(k), A_eq=a_eq, b_eq=[1.0],
        bounds=[(0, None)] * r + [(None, None)], method="highs",
    )
    if not res.success:
        raise RuntimeError(f"direction LP failed: {res.message}")
    return float(res.fun) > 1e-9
