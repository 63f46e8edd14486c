"""Closed convex cones: four representations, duality, membership, projections.

A cone is kept in whichever of the four descriptions it was built from:

* ``orthant``       -- the nonnegative orthant Q = (R+)^d
* ``halfspace``     -- {x : <u, x> >= 0} for a nonzero normal u
* ``generated``     -- {sum_i t_i r_i : t >= 0} for finitely many rays r_i
* ``inequalities``  -- {x : <a_i, x> >= 0 for all i}

Duality maps each representation to another one by pure transcription, so no
facet enumeration is ever performed. Projections are implemented only for the
kinds the rate formulas need (orthant, half-space, single ray); everything
else raises ``UnsupportedConeError``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ._simplex import l1_fit, nonneg_solution

ORTHANT = "orthant"
HALFSPACE = "halfspace"
GENERATED = "generated"
INEQUALITIES = "inequalities"

# Absolute floor added to every relative membership tolerance; keeps apex
# membership exact while allowing scaled slack for large vectors.
ABS_FLOOR = 1e-12
DEFAULT_TOL = 1e-9

# Relative singular-value threshold for the rank test of generated cones.
RANK_TOL = 1e-10


class ConeError(ValueError):
    """Invalid cone construction or argument."""


class UnsupportedConeError(ConeError):
    """Operation not available for this cone representation."""


@dataclass(frozen=True, eq=False)
class Cone:
    """A closed convex cone in R^dim; see the module docstring for kinds.

    ``vectors`` holds the defining data: the half-space normal as shape (d,),
    rays or inequality normals as shape (k, d), and None for the orthant.
    """

    dim: int
    kind: str
    vectors: np.ndarray | None = None

    def __repr__(self):
        if self.kind == ORTHANT:
            return f"Cone(orthant, dim={self.dim})"
        return f"Cone({self.kind}, dim={self.dim}, vectors={self.vectors.tolist()})"


def orthant(dim):
    if dim < 1:
        raise ConeError("cone dimension must be >= 1")
    return Cone(int(dim), ORTHANT)


def halfspace(u):
    u = np.asarray(u, dtype=float)
    if u.ndim != 1 or u.shape[0] < 1:
        raise ConeError("half-space normal must be a vector")
    if not np.any(u != 0.0):
        raise ConeError("half-space normal must be nonzero")
    return Cone(u.shape[0], HALFSPACE, u)


def generated(rays):
    R = np.atleast_2d(np.asarray(rays, dtype=float))
    if R.shape[0] < 1:
        raise ConeError("generated cone needs at least one ray")
    if np.any(~np.any(R != 0.0, axis=1)):
        raise ConeError("every ray must be nonzero")
    return Cone(R.shape[1], GENERATED, R)


def inequalities(normals):
    A = np.atleast_2d(np.asarray(normals, dtype=float))
    if A.shape[0] < 1:
        raise ConeError("inequality cone needs at least one normal")
    if np.any(~np.any(A != 0.0, axis=1)):
        raise ConeError("every inequality normal must be nonzero")
    return Cone(A.shape[1], INEQUALITIES, A)


def _check_dim(cone, x):
    x = np.asarray(x, dtype=float)
    if x.shape != (cone.dim,):
        raise ConeError(f"expected a vector of length {cone.dim}, got shape {x.shape}")
    return x


def contains(cone, x, tol=DEFAULT_TOL):
    """Membership test, up to a relative tolerance with absolute floor."""
    x = _check_dim(cone, x)
    xnorm = float(np.linalg.norm(x))
    if cone.kind == ORTHANT:
        thr = max(tol * max(1.0, xnorm), ABS_FLOOR)
        return bool(np.all(x >= -thr))
    if cone.kind == HALFSPACE:
        u = cone.vectors
        thr = max(tol * float(np.linalg.norm(u)) * xnorm, ABS_FLOOR)
        return bool(u @ x >= -thr)
    if cone.kind == INEQUALITIES:
        A = cone.vectors
        rownorms = np.linalg.norm(A, axis=1)
        thr = np.maximum(tol * rownorms * xnorm, ABS_FLOOR)
        return bool(np.all(A @ x >= -thr))
    # generated: feasibility of x = R^T t, t >= 0
    residual, _ = l1_fit(cone.vectors.T, x)
    return residual <= max(tol * max(1.0, xnorm), ABS_FLOOR)


def dual(cone):
    """The dual cone K* = {z : <x, z> >= 0 for all x in K}.

    Each representation transcribes directly: the orthant is self-dual, a
    half-space dualizes to the ray on its normal, and generated/inequalities
    swap roles with the same vector list.
    """
    if cone.kind == ORTHANT:
        return cone
    if cone.kind == HALFSPACE:
        return Cone(cone.dim, GENERATED, cone.vectors.reshape(1, -1))
    if cone.kind == GENERATED:
        return Cone(cone.dim, INEQUALITIES, cone.vectors)
    return Cone(cone.dim, GENERATED, cone.vectors)


def _single_normal(cone):
    """The normal vector when the cone is a half-space in disguise, else None."""
    if cone.kind == HALFSPACE:
        return cone.vectors
    if cone.kind == INEQUALITIES and cone.vectors.shape[0] == 1:
        return cone.vectors[0]
    return None


def project(cone, a):
    """Euclidean projection onto the cone (orthant / half-space / single ray)."""
    a = _check_dim(cone, a)
    if cone.kind == ORTHANT:
        return np.maximum(a, 0.0)
    u = _single_normal(cone)
    if u is not None:
        s = u @ a
        if s >= 0.0:
            return a.copy()
        return a - (s / (u @ u)) * u
    if cone.kind == GENERATED and cone.vectors.shape[0] == 1:
        u = cone.vectors[0]
        t = max(0.0, (u @ a) / (u @ u))
        return t * u
    raise UnsupportedConeError(
        f"projection onto a {cone.kind} cone with {0 if cone.vectors is None else len(cone.vectors)} "
        "defining vectors is not supported"
    )


def distance(cone, a):
    """Euclidean distance from a to the cone; same kind support as project."""
    a = _check_dim(cone, a)
    return float(np.linalg.norm(a - project(cone, a)))


def moreau_decompose(cone, a):
    """Split a = p_K(a) + p_{K#}(a) with K# = -K* the polar cone.

    Both parts are obtained by projection (using p_{-C}(a) = -p_C(-a) for the
    polar), and the orthogonal-sum identity is verified before returning.
    """
    a = _check_dim(cone, a)
    p_cone = project(cone, a)
    p_polar = -project(dual(cone), -a)
    scale = 1.0 + float(np.linalg.norm(a))
    if np.linalg.norm(a - p_cone - p_polar) > 1e-10 * scale:
        raise ConeError("Moreau decomposition failed to reconstruct the input")
    if abs(p_cone @ p_polar) > 1e-10 * scale * scale:
        raise ConeError("Moreau parts are not orthogonal")
    return p_cone, p_polar


def has_interior(cone):
    """Whether the cone has non-empty interior.

    Orthants and half-spaces always do; an inequality cone is tested by the
    feasibility of A x >= 1 (an LP), a generated cone by the rank of its ray
    matrix.
    """
    if cone.kind in (ORTHANT, HALFSPACE):
        return True
    if cone.kind == INEQUALITIES:
        A = cone.vectors
        m, d = A.shape
        # A(p - q) - s = 1 with p, q, s >= 0
        M = np.hstack([A, -A, -np.eye(m)])
        return nonneg_solution(M, np.ones(m)) is not None
    sv = np.linalg.svd(cone.vectors, compute_uv=False)
    rank = int(np.sum(sv > RANK_TOL * sv[0])) if sv.size and sv[0] > 0 else 0
    return rank == cone.dim


def strictly_contains(cone, x):
    """Whether x lies in the topological interior of the cone."""
    x = _check_dim(cone, x)
    scale = max(1.0, float(np.linalg.norm(x)))
    if cone.kind == ORTHANT:
        return bool(np.all(x > ABS_FLOOR * scale))
    if cone.kind == HALFSPACE:
        u = cone.vectors
        return bool(u @ x > ABS_FLOOR * float(np.linalg.norm(u)) * scale)
    if cone.kind == INEQUALITIES:
        A = cone.vectors
        rownorms = np.linalg.norm(A, axis=1)
        return bool(np.all(A @ x > ABS_FLOOR * rownorms * scale))
    # generated cone: interior needs full-dimensionality plus slack in every
    # axis direction; tested by perturbed memberships.
    if not has_interior(cone):
        return False
    eps = 1e-8 * scale
    for j in range(cone.dim):
        e = np.zeros(cone.dim)
        e[j] = eps
        if not contains(cone, x + e, tol=1e-12) or not contains(cone, x - e, tol=1e-12):
            return False
    return True


def interior_vector(cone):
    """A canonical point of the cone's interior.

    All-ones for the orthant and the normal for a half-space; for the other
    kinds an interior point is constructed (LP for inequalities, ray sum for
    generated cones).
    """
    if cone.kind == ORTHANT:
        return np.ones(cone.dim)
    if cone.kind == HALFSPACE:
        return cone.vectors.copy()
    if not has_interior(cone):
        raise ConeError("cone has empty interior")
    if cone.kind == INEQUALITIES:
        A = cone.vectors
        m, d = A.shape
        M = np.hstack([A, -A, -np.eye(m)])
        y = nonneg_solution(M, np.ones(m))
        return y[:d] - y[d:2 * d]
    # generated, full rank: a positive combination of spanning rays is interior
    return cone.vectors.sum(axis=0)


def contains_shifted(cone, v, delta, x, tol=DEFAULT_TOL):
    """Membership of x in the shifted cone K + delta*v for interior v."""
    v = _check_dim(cone, v)
    x = _check_dim(cone, x)
    if not strictly_contains(cone, v):
        raise ConeError("shift vector v must lie in the interior of the cone")
    return contains(cone, x - delta * v, tol=tol)
