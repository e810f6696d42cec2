"""Triangulated foam surfaces: loading, ball-clipped areas, angle checks.

clipped_area estimates the area of mesh-intersect-ball by recursive
midpoint subdivision: triangles entirely inside the (closed) ball count
fully, triangles farther than the radius count zero, and the undecided
rest is split until its total area drops below the error budget.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .bounds import main_theorem_bound
from .errors import MeshFormatError, MeshInvariantError
from .geometry import ARCCOS_THIRD, DensityClass, as_point

MAX_SUBDIV_DEPTH = 24
# Undecided fragments live along the sphere boundary and double per level;
# this cap keeps one refinement level inside a few hundred MB.
MAX_UNDECIDED_FRAGMENTS = 2 ** 22
_DEGENERATE_AREA_RTOL = 1e-12


def pairwise_sum(values) -> float:
    """Tree-shaped float summation: deterministic and schedule-free."""
    x = np.asarray(values, dtype=float).ravel().copy()
    if x.size == 0:
        return 0.0
    while x.size > 1:
        if x.size % 2:
            x = np.append(x, 0.0)
        x = x[0::2] + x[1::2]
    return float(x[0])


def _triangle_areas(tris: np.ndarray) -> np.ndarray:
    cross = np.cross(tris[:, 1] - tris[:, 0], tris[:, 2] - tris[:, 0])
    return 0.5 * np.linalg.norm(cross, axis=1)


@dataclass(eq=False)
class FoamMesh:
    """Triangle mesh of a foam piece.

    Undirected edges may be used by one triangle (mesh boundary), two
    (ordinary interface), or three (Plateau border candidate); heavier
    sharing is rejected as non-manifold beyond foam structure.
    """

    vertices: np.ndarray
    triangles: np.ndarray
    patches: np.ndarray | None = None

    def __post_init__(self):
        v = np.asarray(self.vertices, dtype=float)
        if v.ndim != 2 or v.shape[1] != 3 or len(v) < 3:
            raise MeshInvariantError("mesh needs at least 3 vertices of dimension 3")
        if not np.all(np.isfinite(v)):
            raise MeshInvariantError("mesh vertices must be finite")
        t = np.asarray(self.triangles, dtype=int)
        if t.size == 0:
            raise MeshInvariantError("mesh has no triangles")
        if t.ndim != 2 or t.shape[1] != 3:
            raise MeshInvariantError("triangles must be index triples")
        if np.any(t < 0) or np.any(t >= len(v)):
            bad = int(np.argmax(np.any((t < 0) | (t >= len(v)), axis=1)))
            raise MeshInvariantError(f"triangle {bad} has out-of-range vertex index")
        repeated = (t[:, 0] == t[:, 1]) | (t[:, 1] == t[:, 2]) | (t[:, 0] == t[:, 2])
        if np.any(repeated):
            raise MeshInvariantError(
                f"triangle {int(np.argmax(repeated))} repeats a vertex index"
            )
        self.vertices = v
        self.triangles = t
        if self.patches is not None:
            p = np.asarray(self.patches)
            if len(p) != len(t):
                raise MeshInvariantError("need one patch label per triangle")
            self.patches = p
        areas = _triangle_areas(v[t])
        floor = _DEGENERATE_AREA_RTOL * self.scale ** 2
        if np.any(areas <= floor):
            raise MeshInvariantError(
                f"triangle {int(np.argmin(areas))} is degenerate "
                f"(area {float(np.min(areas)):g})"
            )
        edges, counts = self.edge_use_counts()
        if np.any(counts > 3):
            e = edges[int(np.argmax(counts))]
            raise MeshInvariantError(
                f"edge ({e[0]}, {e[1]}) is used {int(np.max(counts))} times; "
                "at most 3 (a Plateau border) is allowed"
            )

    @property
    def scale(self) -> float:
        """Bounding-box diagonal."""
        return float(
            np.linalg.norm(self.vertices.max(axis=0) - self.vertices.min(axis=0))
        )

    def edge_use_counts(self) -> tuple[np.ndarray, np.ndarray]:
        """Unique undirected edges and how many triangles use each."""
        e = self.triangles[:, [(0, 1), (1, 2), (2, 0)]].reshape(-1, 2)
        e = np.sort(e, axis=1)
        return np.unique(e, axis=0, return_counts=True)

    def total_area(self) -> float:
        return pairwise_sum(_triangle_areas(self.vertices[self.triangles]))

    def to_json(self) -> dict:
        obj = {
            "vertices": self.vertices.tolist(),
            "triangles": self.triangles.tolist(),
        }
        if self.patches is not None:
            obj["patches"] = self.patches.tolist()
        return obj


@dataclass(eq=False)
class DiscProbe:
    """Where and how to cut a spherical scoop out of a mesh."""

    center: np.ndarray
    radius: float
    density_class: DensityClass = DensityClass.FACE
    h: float = 0.0

    def __post_init__(self):
        self.center = as_point(self.center)
        self.radius = float(self.radius)
        if not self.radius > 0:
            raise ValueError("probe radius must be positive")
        self.h = float(self.h)
        if self.h < 0:
            raise ValueError("curvature bound h must be >= 0")


# ---------------------------------------------------------------------------
# Mesh I/O


def load_mesh(path) -> FoamMesh:
    """Read a triangle mesh from an OFF file or the JSON mesh schema."""
    path = Path(path)
    if path.suffix.lower() == ".json":
        with open(path, "r", encoding="utf-8") as f:
            obj = json.load(f)
        if "vertices" not in obj or "triangles" not in obj:
            raise MeshFormatError("mesh JSON needs 'vertices' and 'triangles'")
        return FoamMesh(
            np.array(obj["vertices"], dtype=float),
            np.array(obj["triangles"], dtype=int),
            np.array(obj["patches"]) if "patches" in obj else None,
        )
    return _load_off(path)


def _off_content_lines(path: Path):
    """Yield (1-based line number, content) with comments/blanks removed."""
    with open(path, "r", encoding="utf-8") as f:
        for lineno, raw in enumerate(f, start=1):
            text = raw.split("#", 1)[0].strip()
            if text:
                yield lineno, text


def _load_off(path: Path) -> FoamMesh:
    lines = _off_content_lines(path)

    def next_line(what: str):
        try:
            return next(lines)
        except StopIteration:
            raise MeshFormatError(f"file ended before {what}") from None

    lineno, header = next_line("the OFF header")
    if header != "OFF":
        raise MeshFormatError(f"expected 'OFF' header, found {header!r}", lineno)
    lineno, counts = next_line("the counts line")
    parts = counts.split()
    if len(parts) != 3:
        raise MeshFormatError("counts line must be 'nv nf ne'", lineno)
    try:
        nv, nf, _ = (int(p) for p in parts)
    except ValueError:
        raise MeshFormatError("counts must be integers", lineno) from None
    vertices = np.zeros((nv, 3))
    for i in range(nv):
        lineno, text = next_line(f"vertex {i}")
        parts = text.split()
        if len(parts) != 3:
            raise MeshFormatError(f"vertex line needs 3 coordinates", lineno)
        try:
            vertices[i] = [float(p) for p in parts]
        except ValueError:
            raise MeshFormatError("vertex coordinates must be numbers", lineno) from None
    triangles = np.zeros((nf, 3), dtype=int)
    for i in range(nf):
        lineno, text = next_line(f"face {i}")
        parts = text.split()
        try:
            k = int(parts[0])
        except (ValueError, IndexError):
            raise MeshFormatError("face line must start with a vertex count", lineno) from None
        if k != 3:
            raise MeshFormatError(f"only triangular faces are supported, got {k}", lineno)
        if len(parts) < 4:
            raise MeshFormatError("face line needs 3 vertex indices", lineno)
        try:
            triangles[i] = [int(p) for p in parts[1:4]]
        except ValueError:
            raise MeshFormatError("face indices must be integers", lineno) from None
    return FoamMesh(vertices, triangles)


def save_off(mesh: FoamMesh, path) -> None:
    """Write a mesh as an OFF file (full float precision)."""
    with open(path, "w", encoding="utf-8") as f:
        f.write("OFF\n")
        f.write(f"{len(mesh.vertices)} {len(mesh.triangles)} 0\n")
        for v in mesh.vertices:
            f.write(f"{v[0]:.17g} {v[1]:.17g} {v[2]:.17g}\n")
        for t in mesh.triangles:
            f.write(f"3 {t[0]} {t[1]} {t[2]}\n")


# ---------------------------------------------------------------------------
# Clipped area


def _point_segment_distance(p0, p1, point) -> np.ndarray:
    d = p1 - p0
    w = point - p0
    dd = np.einsum("ij,ij->i", d, d)
    with np.errstate(divide="ignore", invalid="ignore"):
        t = np.einsum("ij,ij->i", w, d) / dd
    t = np.clip(np.nan_to_num(t, nan=0.0), 0.0, 1.0)
    closest = p0 + t[:, None] * d
    return np.linalg.norm(point - closest, axis=1)


def _point_triangle_distance(tris: np.ndarray, point: np.ndarray) -> np.ndarray:
    """Minimum distance from a point to each triangle in a (K, 3, 3) batch."""
    a, b, c = tris[:, 0], tris[:, 1], tris[:, 2]
    d_edge = np.minimum(
        _point_segment_distance(a, b, point),
        np.minimum(
            _point_segment_distance(b, c, point),
            _point_segment_distance(c, a, point),
        ),
    )
    e0 = b - a
    e1 = c - a
    w = point - a
    a00 = np.einsum("ij,ij->i", e0, e0)
    a01 = np.einsum("ij,ij->i", e0, e1)
    a11 = np.einsum("ij,ij->i", e1, e1)
    b0 = np.einsum("ij,ij->i", w, e0)
    b1 = np.einsum("ij,ij->i", w, e1)
    det = a00 * a11 - a01 * a01
    with np.errstate(divide="ignore", invalid="ignore"):
        u = (a11 * b0 - a01 * b1) / det
        v = (a00 * b1 - a01 * b0) / det
    inside = (det > 0) & np.isfinite(u) & np.isfinite(v)
    inside &= (u >= 0.0) & (v >= 0.0) & (u + v <= 1.0)
    proj = a + np.where(inside, u, 0.0)[:, None] * e0 + np.where(inside, v, 0.0)[:, None] * e1
    d_plane = np.linalg.norm(point - proj, axis=1)
    return np.where(inside, np.minimum(d_plane, d_edge), d_edge)


def _subdivide(tris: np.ndarray, roots: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    a, b, c = tris[:, 0], tris[:, 1], tris[:, 2]
    ab = 0.5 * (a + b)
    bc = 0.5 * (b + c)
    ca = 0.5 * (c + a)
    children = np.concatenate(
        [
            np.stack([a, ab, ca], axis=1),
            np.stack([ab, b, bc], axis=1),
            np.stack([ca, bc, c], axis=1),
            np.stack([ab, bc, ca], axis=1),
        ]
    )
    return children, np.tile(roots, 4)


def _clipped_area_detail(
    mesh: FoamMesh, probe: DiscProbe, eps: float
) -> tuple[float, float]:
    """Returns (area estimate, uncertainty).

    The estimate is a sum of fully-inside fragment areas plus half of the
    final undecided area; the uncertainty is half the undecided area, so
    it stays below eps unless a termination cap (subdivision depth 24 or
    the fragment-count limit) fires first, in which case the residual is
    carried into the reported uncertainty instead.
    """
    if eps <= 0:
        raise ValueError("area error budget eps must be positive")
    point = probe.center
    radius = probe.radius
    tris = mesh.vertices[mesh.triangles]
    roots = np.arange(len(tris))
    inside_acc = np.zeros(len(tris))
    uncertainty = 0.0
    for depth in range(MAX_SUBDIV_DEPTH + 1):
        if len(tris) == 0:
            break
        vert_dist = np.linalg.norm(tris - point, axis=2)
        fully_inside = np.all(vert_dist <= radius, axis=1)
        min_dist = _point_triangle_distance(tris, point)
        outside = ~fully_inside & (min_dist > radius)
        undecided = ~fully_inside & ~outside
        areas = _triangle_areas(tris)
        if np.any(fully_inside):
            np.add.at(inside_acc, roots[fully_inside], areas[fully_inside])
        if not np.any(undecided):
            break
        undecided_area = float(np.sum(areas[undecided]))
        capped = (
            depth == MAX_SUBDIV_DEPTH
            or int(np.sum(undecided)) * 4 > MAX_UNDECIDED_FRAGMENTS
        )
        if undecided_area < eps or capped:
            np.add.at(inside_acc, roots[undecided], 0.5 * areas[undecided])
            uncertainty = 0.5 * undecided_area
            break
        tris, roots = _subdivide(tris[undecided], roots[undecided])
    return pairwise_sum(inside_acc), uncertainty


def clipped_area(mesh: FoamMesh, probe: DiscProbe, eps: float) -> float:
    """Area of the mesh inside the closed ball of the probe, within eps."""
    value, _ = _clipped_area_detail(mesh, probe, eps)
    return value


# ---------------------------------------------------------------------------
# Inequality and angle reports


@dataclass(eq=False)
class InequalityReport:
    """Measured scoop area against its certified lower bound."""

    clipped_area: float
    uncertainty: float
    lhs: float
    rhs: float
    passed: bool
    ratio: float
    eps: float

    def to_json(self) -> dict:
        return {
            "clipped_area": self.clipped_area,
            "uncertainty": self.uncertainty,
            "lhs": self.lhs,
            "rhs": self.rhs,
            "passed": self.passed,
            "ratio": self.ratio,
            "eps": self.eps,
        }


def verify_main_inequality(
    mesh: FoamMesh, probe: DiscProbe, eps: float
) -> InequalityReport:
    """Check measured disc area >= theta * exp(-2hR) * pi * R^2.

    The left side is the area estimate minus the error budget (or the
    actual uncertainty if the depth cap inflated it), so a pass is a
    certified numerical verification, not a point estimate.
    """
    value, uncertainty = _clipped_area_detail(mesh, probe, eps)
    rhs = main_theorem_bound(probe.density_class.theta, probe.h, probe.radius)
    lhs = value - max(eps, uncertainty)
    return InequalityReport(
        clipped_area=value,
        uncertainty=uncertainty,
        lhs=lhs,
        rhs=rhs,
        passed=lhs >= rhs,
        ratio=value / rhs,
        eps=eps,
    )


@dataclass(eq=False)
class AngleReport:
    """Deviations of border and vertex angles from the Plateau values."""

    triple_edge_count: int
    checked_edge_count: int
    edge_max_deviation_deg: float
    checked_vertex_count: int
    vertex_max_deviation_deg: float
    max_deviation_deg: float
    angle_tol_deg: float
    passed: bool
    warnings: tuple = ()

    def to_json(self) -> dict:
        return {
            "triple_edge_count": self.triple_edge_count,
            "checked_edge_count": self.checked_edge_count,
            "edge_max_deviation_deg": self.edge_max_deviation_deg,
            "checked_vertex_count": self.checked_vertex_count,
            "vertex_max_deviation_deg": self.vertex_max_deviation_deg,
            "max_deviation_deg": self.max_deviation_deg,
            "angle_tol_deg": self.angle_tol_deg,
            "passed": self.passed,
            "warnings": list(self.warnings),
        }


def _angle_deg(u: np.ndarray, v: np.ndarray) -> float:
    cos = float(np.dot(u, v) / (np.linalg.norm(u) * np.linalg.norm(v)))
    return math.degrees(math.acos(max(-1.0, min(1.0, cos))))


def plateau_angle_check(mesh: FoamMesh, angle_tol_degrees: float = 1.0) -> AngleReport:
    """Verify 120-degree borders and tetrahedral vertex angles.

    Triple edges (used by exactly three triangles) must have their three
    wings pairwise at 120 degrees; mesh vertices where exactly four
    triple edges meet must have all six pairwise edge angles equal to
    arccos(-1/3), about 109.4712 degrees.  Vertices whose neighborhood is
    incomplete (touching the mesh boundary) are skipped silently;
    ambiguous incidences are skipped with a warning.
    """
    edges, counts = mesh.edge_use_counts()
    edge_tris: dict[tuple[int, int], list[int]] = {}
    for t_idx, tri in enumerate(mesh.triangles):
        for i, j in ((0, 1), (1, 2), (2, 0)):
            key = (min(tri[i], tri[j]), max(tri[i], tri[j]))
            edge_tris.setdefault(key, []).append(t_idx)

    warnings: list[str] = []
    edge_devs: list[float] = []
    checked_edges = 0
    triple_edges = [tuple(e) for e, c in zip(edges, counts) if c == 3]
    for (u, v) in triple_edges:
        axis = mesh.vertices[v] - mesh.vertices[u]
        axis = axis / np.linalg.norm(axis)
        wings = []
        degenerate = False
        for t_idx in edge_tris[(u, v)]:
            tri = mesh.triangles[t_idx]
            opposite = [k for k in tri if k != u and k != v][0]
            w = mesh.vertices[opposite] - mesh.vertices[u]
            w = w - np.dot(w, axis) * axis
            norm = np.linalg.norm(w)
            if norm <= 1e-12 * mesh.scale:
                degenerate = True
                break
            wings.append(w / norm)
        if degenerate:
            warnings.append(
                f"triple edge ({u}, {v}): a wing is parallel to the edge; skipped"
            )
            continue
        checked_edges += 1
        for i in range(3):
            for j in range(i + 1, 3):
                edge_devs.append(abs(_angle_deg(wings[i], wings[j]) - 120.0))

    # Vertex incidence of triple edges, plus boundary contact for skipping.
    incident: dict[int, list[int]] = {}
    for (u, v) in triple_edges:
        incident.setdefault(u, []).append(v)
        incident.setdefault(v, []).append(u)
    boundary_vertices = set()
    for e, c in zip(edges, counts):
        if c == 1:
            boundary_vertices.add(int(e[0]))
            boundary_vertices.add(int(e[1]))

    tetra_deg = math.degrees(ARCCOS_THIRD)
    vertex_devs: list[float] = []
    checked_vertices = 0
    for vtx, neighbors in sorted(incident.items()):
        k = len(neighbors)
        if k == 2 or vtx in boundary_vertices:
            continue
        if k != 4:
            warnings.append(
                f"vertex {vtx}: {k} incident Plateau borders (need 4); skipped"
            )
            continue
        checked_vertices += 1
        dirs = [mesh.vertices[n] - mesh.vertices[vtx] for n in neighbors]
        for i in range(4):
            for j in range(i + 1, 4):
                vertex_devs.append(abs(_angle_deg(dirs[i], dirs[j]) - tetra_deg))

    edge_max = max(edge_devs) if edge_devs else 0.0
    vertex_max = max(vertex_devs) if vertex_devs else 0.0
    max_dev = max(edge_max, vertex_max)
    return AngleReport(
        triple_edge_count=len(triple_edges),
        checked_edge_count=checked_edges,
        edge_max_deviation_deg=edge_max,
        checked_vertex_count=checked_vertices,
        vertex_max_deviation_deg=vertex_max,
        max_deviation_deg=max_dev,
        angle_tol_deg=float(angle_tol_degrees),
        passed=max_dev <= float(angle_tol_degrees),
        warnings=tuple(warnings),
    )
