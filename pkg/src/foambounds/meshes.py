"""Reference meshes for verification runs: sphere, cylinder, wedges, cones.

These are the standard fixtures for exercising the disc-area inequality:
a round sphere (one face, curvature 1/radius), an open cylinder, a flat
three-wing wedge meeting at 120 degrees along a straight border, and the
six-wing cone over the tetrahedral frame at a foam vertex.
"""

from __future__ import annotations

import math

import numpy as np

from .meshcheck import FoamMesh

# Unit vectors toward the vertices of a regular tetrahedron; every pair
# meets at arccos(-1/3).
TETRAHEDRAL_DIRECTIONS = np.array(
    [
        [1.0, 1.0, 1.0],
        [1.0, -1.0, -1.0],
        [-1.0, 1.0, -1.0],
        [-1.0, -1.0, 1.0],
    ]
) / math.sqrt(3.0)


def icosphere(subdivisions: int = 4, radius: float = 1.0) -> FoamMesh:
    """Icosahedron subdivided and projected to a sphere.

    Subdivision level k gives 20 * 4^k triangles; level 4 gives 5120.
    """
    if subdivisions < 0:
        raise ValueError("subdivisions must be >= 0")
    phi = (1.0 + math.sqrt(5.0)) / 2.0
    raw = np.array(
        [
            [-1, phi, 0], [1, phi, 0], [-1, -phi, 0], [1, -phi, 0],
            [0, -1, phi], [0, 1, phi], [0, -1, -phi], [0, 1, -phi],
            [phi, 0, -1], [phi, 0, 1], [-phi, 0, -1], [-phi, 0, 1],
        ],
        dtype=float,
    )
    verts = [v / np.linalg.norm(v) for v in raw]
    faces = [
        (0, 11, 5), (0, 5, 1), (0, 1, 7), (0, 7, 10), (0, 10, 11),
        (1, 5, 9), (5, 11, 4), (11, 10, 2), (10, 7, 6), (7, 1, 8),
        (3, 9, 4), (3, 4, 2), (3, 2, 6), (3, 6, 8), (3, 8, 9),
        (4, 9, 5), (2, 4, 11), (6, 2, 10), (8, 6, 7), (9, 8, 1),
    ]
    for _ in range(subdivisions):
        midpoint_cache: dict[tuple[int, int], int] = {}

        def midpoint(i: int, j: int) -> int:
            key = (min(i, j), max(i, j))
            if key not in midpoint_cache:
                m = verts[i] + verts[j]
                verts.append(m / np.linalg.norm(m))
                midpoint_cache[key] = len(verts) - 1
            return midpoint_cache[key]

        new_faces = []
        for (i, j, k) in faces:
            ij, jk, ki = midpoint(i, j), midpoint(j, k), midpoint(k, i)
            new_faces += [(i, ij, ki), (ij, j, jk), (ki, jk, k), (ij, jk, ki)]
        faces = new_faces
    return FoamMesh(np.array(verts) * radius, np.array(faces, dtype=int))


def cylinder_tube(
    radius: float = 1.0,
    height: float = 4.0,
    segments_around: int = 96,
    segments_along: int = 32,
) -> FoamMesh:
    """Open cylinder about the z axis, centered on the origin."""
    if segments_around < 3 or segments_along < 1:
        raise ValueError("need at least 3 segments around and 1 along")
    thetas = 2.0 * math.pi * np.arange(segments_around) / segments_around
    zs = np.linspace(-height / 2.0, height / 2.0, segments_along + 1)
    verts = []
    for z in zs:
        for t in thetas:
            verts.append([radius * math.cos(t), radius * math.sin(t), z])
    faces = []
    for row in range(segments_along):
        for col in range(segments_around):
            a = row * segments_around + col
            b = row * segments_around + (col + 1) % segments_around
            c = a + segments_around
            d = b + segments_around
            faces.append((a, b, d))
            faces.append((a, d, c))
    return FoamMesh(np.array(verts), np.array(faces, dtype=int))


def triple_wedge(
    extent: float = 2.5, azimuths_deg: tuple = (0.0, 120.0, 240.0)
) -> FoamMesh:
    """Three flat half-planes sharing the z axis as a Plateau border.

    The border runs from (0,0,-extent) to (0,0,extent) through the
    origin; each wing reaches out to the given azimuth.  Custom azimuths
    make slightly-off wedges for tolerance tests.
    """
    if len(azimuths_deg) != 3:
        raise ValueError("a triple wedge needs exactly three wings")
    lo = np.array([0.0, 0.0, -extent])
    hi = np.array([0.0, 0.0, extent])
    verts = [lo, hi]
    faces = []
    for az in azimuths_deg:
        rad = math.radians(az)
        w = np.array([math.cos(rad), math.sin(rad), 0.0]) * extent
        out_lo = lo + w
        out_hi = hi + w
        base = len(verts)
        verts += [out_lo, out_hi]
        faces.append((0, 1, base + 1))
        faces.append((0, base + 1, base))
    return FoamMesh(np.array(verts), np.array(faces, dtype=int))


def tetrahedral_cone(extent: float = 2.5) -> FoamMesh:
    """Six flat wings spanned by pairs of tetrahedral rays from the origin.

    The apex is a model foam vertex: four Plateau borders leave it along
    the tetrahedral directions and every pair of borders spans one wing.
    """
    verts = [np.zeros(3)] + [d * extent for d in TETRAHEDRAL_DIRECTIONS]
    faces = []
    for i in range(4):
        for j in range(i + 1, 4):
            faces.append((0, i + 1, j + 1))
    return FoamMesh(np.array(verts), np.array(faces, dtype=int))


def flat_sheet(extent: float = 2.0) -> FoamMesh:
    """A flat square in the z = 0 plane, split along a diagonal through 0."""
    verts = np.array(
        [
            [-extent, -extent, 0.0],
            [extent, -extent, 0.0],
            [extent, extent, 0.0],
            [-extent, extent, 0.0],
        ]
    )
    faces = np.array([(0, 1, 2), (0, 2, 3)], dtype=int)
    return FoamMesh(verts, faces)
