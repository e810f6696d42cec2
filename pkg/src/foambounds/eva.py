"""Extrinsic vertex area: objective, maximization, and subset search.

Each point i contributes pi * theta_i * exp(-2 h r_i) * r_i^2 when given
a ball of radius r_i; eva is the maximum of that sum over the admissible
radii polytope, and evA is the maximum of eva over all nonempty subsets
of the point set.  Both are certified lower bounds for foam area, so any
feasible radii vector is safe to report; optimality only sharpens the
bound.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import minimize

from .errors import DegeneratePolytopeError, SubsetSizeError
from .geometry import (
    THETA_VERTEX,
    DistanceMatrix,
    Domain,
    PointSet,
    ReducedDistanceMatrix,
    build_distance_matrix,
    reduce_distance_matrix,
)
from .polytope import HPolytope, build_h_polytope, enumerate_vertices, interior_point

# The objective is convex on the whole polytope whenever every entry of
# the reduced matrix is at most this constant over h; in that regime the
# maximum is guaranteed to sit on a polytope vertex.
CONVEXITY_COEFF = 2.0 - math.sqrt(2.0)

# Multi-start count for the local-ascent fallback outside the certified
# regime.  Seeds are deterministic; no global RNG state is touched.
ASCENT_STARTS = 32

_ZERO_RADIUS_RTOL = 1e-9


@dataclass(eq=False)
class EvaObjective:
    """Sum of per-point disc bounds pi * theta_i * exp(-2 h r_i) * r_i^2.

    weights holds the per-point densities theta_i; None means the vertex
    density for every point.
    """

    h: float
    weights: np.ndarray | None = None

    def __post_init__(self):
        self.h = float(self.h)
        if self.h < 0:
            raise ValueError("curvature bound h must be >= 0")
        if self.weights is not None:
            w = np.atleast_1d(np.asarray(self.weights, dtype=float))
            if np.any(w <= 0):
                raise ValueError("weights must be positive")
            self.weights = w

    def thetas(self, n: int) -> np.ndarray:
        if self.weights is None:
            return np.full(n, THETA_VERTEX)
        if len(self.weights) != n:
            raise ValueError(f"objective has {len(self.weights)} weights, needs {n}")
        return self.weights

    def value(self, radii) -> float:
        r = np.atleast_1d(np.asarray(radii, dtype=float))
        if np.any(r < 0):
            raise ValueError("radii must be nonnegative")
        theta = self.thetas(len(r))
        return float(np.sum(math.pi * theta * np.exp(-2.0 * self.h * r) * r * r))

    def gradient(self, radii) -> np.ndarray:
        r = np.atleast_1d(np.asarray(radii, dtype=float))
        theta = self.thetas(len(r))
        return math.pi * theta * np.exp(-2.0 * self.h * r) * (2.0 * r - 2.0 * self.h * r * r)

    def subset(self, indices) -> "EvaObjective":
        if self.weights is None:
            return EvaObjective(self.h)
        return EvaObjective(self.h, self.weights[list(indices)])


def eva_value(radii, objective: EvaObjective) -> float:
    """Evaluate the objective at a nonnegative radii vector."""
    return objective.value(radii)


@dataclass(eq=False)
class EvaResult:
    """Outcome of maximizing eva over one radii polytope."""

    value: float
    radii: np.ndarray
    attaining_vertex: int | None
    convexity_certified: bool


@dataclass(eq=False)
class EvaAResult:
    """Outcome of the subset search (exact or greedy)."""

    value: float
    surviving_subset: tuple
    radii: np.ndarray
    method: str
    notes: tuple = ()


def convexity_certified(reduced: ReducedDistanceMatrix) -> bool:
    """True when the objective is certifiably convex on the polytope."""
    if reduced.h == 0.0:
        return True
    if reduced.n == 1:
        bound = float(reduced.entries[0, 0])
    else:
        off = ~np.eye(reduced.n, dtype=bool)
        bound = float(np.max(reduced.entries[off]))
    return bound <= CONVEXITY_COEFF / reduced.h


def maximize_eva(
    reduced: ReducedDistanceMatrix, objective: EvaObjective | None = None
) -> EvaResult:
    """Maximize eva over the admissible-radii polytope.

    In the certified-convex regime (h = 0, or every reduced entry at most
    (2 - sqrt(2))/h) the best polytope vertex is the exact maximum.
    Otherwise the vertex scan is augmented with deterministic multi-start
    local ascent and the better of the two is returned; either way the
    value is attained by feasible radii, hence a valid area bound.
    """
    if objective is None:
        objective = EvaObjective(reduced.h)
    if objective.h != reduced.h:
        raise ValueError(
            f"objective h={objective.h} disagrees with reduced matrix h={reduced.h}"
        )
    poly = build_h_polytope(reduced)
    verts = enumerate_vertices(poly)
    theta = objective.thetas(poly.n)
    r = verts.vertices
    values = np.sum(
        math.pi * theta * np.exp(-2.0 * objective.h * r) * r * r, axis=1
    )
    best = int(np.argmax(values))  # first max in lex order: smallest radii win ties
    best_value = float(values[best])
    best_radii = r[best].copy()
    certified = convexity_certified(reduced)
    attaining: int | None = best
    if not certified:
        try:
            asc_value, asc_radii = _multistart_ascent(poly, objective, verts.vertices)
        except DegeneratePolytopeError:
            # Lower-dimensional region: no interior to start the ascent
            # from; the vertex scan result stands (still a valid bound).
            asc_value, asc_radii = best_value, best_radii
        if asc_value > best_value:
            best_value, best_radii, attaining = asc_value, asc_radii, None
    # Report the exact objective value of the returned radii.
    best_value = objective.value(best_radii)
    return EvaResult(best_value, best_radii, attaining, certified)


def _multistart_ascent(
    poly: HPolytope, objective: EvaObjective, vertices: np.ndarray
) -> tuple[float, np.ndarray]:
    """Deterministic multi-start local ascent inside the polytope."""
    x0 = interior_point(poly)
    seeds = [x0]
    for t in (0.5, 0.9):
        for v in vertices:
            seeds.append(x0 + t * (v - x0))
            if len(seeds) >= ASCENT_STARTS:
                break
        if len(seeds) >= ASCENT_STARTS:
            break
    constraints = [
        {
            "type": "ineq",
            "fun": lambda r, M=poly.M, b=poly.b: b - M @ r,
            "jac": lambda r, M=poly.M: -M,
        }
    ]
    bounds = [(0.0, None)] * poly.n
    best_value, best_point = -math.inf, x0
    for seed in seeds:
        res = minimize(
            lambda r: -objective.value(np.maximum(r, 0.0)),
            seed,
            jac=lambda r: -objective.gradient(np.maximum(r, 0.0)),
            method="SLSQP",
            bounds=bounds,
            constraints=constraints,
            options={"maxiter": 200, "ftol": 1e-12},
        )
        point = _pull_feasible(poly, x0, np.maximum(res.x, 0.0))
        value = objective.value(point)
        if value > best_value:
            best_value, best_point = value, point
    return best_value, best_point


def _pull_feasible(poly: HPolytope, anchor: np.ndarray, point: np.ndarray) -> np.ndarray:
    """Shrink a point toward a strictly feasible anchor until feasible."""
    if poly.contains(point, tol=0.0):
        return point
    direction = poly.M @ (point - anchor)
    slack = poly.b - poly.M @ anchor
    positive = direction > 0
    if not np.any(positive):
        return point
    s = float(np.min(slack[positive] / direction[positive]))
    s = max(0.0, min(1.0, s * (1.0 - 1e-12)))
    return anchor + s * (point - anchor)


def evA_exact_from_matrix(
    matrix: DistanceMatrix,
    h: float,
    weights: np.ndarray | None = None,
    max_n: int = 8,
) -> EvaAResult:
    """Exact evA: maximize eva over every nonempty subset of the points.

    Subset matrices are obtained by deleting rows/columns of the full
    distance matrix (the boundary row/column is always kept).  Ties are
    broken toward the smallest subset, then lexicographically; among
    equal-value vertices the lexicographically smallest radii win.

    Raises:
        SubsetSizeError: when the point count exceeds max_n; use the
            greedy search (evA_algorithm1) for larger instances.
    """
    n = matrix.n
    if n > max_n:
        raise SubsetSizeError(
            f"{n} points would need {2 ** n - 1} subsets (max_n={max_n}); "
            "use evA_algorithm1 for larger instances"
        )
    full_weights = None if weights is None else np.asarray(weights, dtype=float)
    best: EvaAResult | None = None
    for size in range(1, n + 1):
        for subset in itertools.combinations(range(n), size):
            reduced = reduce_distance_matrix(matrix.submatrix(subset), h)
            obj = EvaObjective(
                h, None if full_weights is None else full_weights[list(subset)]
            )
            res = maximize_eva(reduced, obj)
            if best is None or res.value > best.value:
                best = EvaAResult(res.value, subset, res.radii, "exact")
    assert best is not None
    return best


def evA_exact(
    points: PointSet, domain: Domain, h: float, max_n: int = 8
) -> EvaAResult:
    """Exact evA for a point set inside a domain."""
    matrix = build_distance_matrix(points, domain)
    return evA_exact_from_matrix(matrix, h, points.thetas, max_n=max_n)


def evA_algorithm1_from_matrix(
    matrix: DistanceMatrix, h: float, weights: np.ndarray | None = None
) -> EvaAResult:
    """Greedy evA search that repeatedly discards collapsed points.

    Each round scans the polytope vertices of the current point set and
    keeps the best one.  If the value fails to improve on the best seen
    so far the search stops; otherwise all points with zero radius at the
    optimum are dropped (or, if none collapsed, the single point with the
    smallest radius).  The result never exceeds exact evA, since every
    visited subset is also scored by the exhaustive search.
    """
    full_weights = None if weights is None else np.asarray(weights, dtype=float)
    active = list(range(matrix.n))
    best: EvaAResult | None = None
    notes: list[str] = []
    while active:
        reduced = reduce_distance_matrix(matrix.submatrix(active), h)
        obj = EvaObjective(
            h, None if full_weights is None else full_weights[active]
        )
        poly = build_h_polytope(reduced)
        verts = enumerate_vertices(poly)
        theta = obj.thetas(poly.n)
        r = verts.vertices
        values = np.sum(math.pi * theta * np.exp(-2.0 * h * r) * r * r, axis=1)
        pick = int(np.argmax(values))
        value = float(values[pick])
        radii = r[pick].copy()
        if best is not None and value <= best.value:
            break
        best = EvaAResult(value, tuple(active), radii, "algorithm1")
        zero_tol = _ZERO_RADIUS_RTOL * max(1.0, float(np.max(reduced.entries)))
        collapsed = [i for i, ri in enumerate(radii) if ri <= zero_tol]
        if collapsed:
            removed = set(collapsed)
        else:
            min_r = float(np.min(radii))
            ties = [i for i, ri in enumerate(radii) if ri == min_r]
            if len(ties) > 1:
                notes.append(
                    f"minimum-radius tie among local indices {ties}; removed the "
                    "lowest-index point"
                )
            removed = {ties[0]}
        active = [p for i, p in enumerate(active) if i not in removed]
    assert best is not None
    best.notes = tuple(notes)
    return best


def evA_algorithm1(points: PointSet, domain: Domain, h: float) -> EvaAResult:
    """Greedy evA search for a point set inside a domain."""
    matrix = build_distance_matrix(points, domain)
    return evA_algorithm1_from_matrix(matrix, h, points.thetas)
