"""3-D convex hull of small point sets, with volume and surface area.

Inputs here are tiny (at most a few dozen points), so the hull is found by
supporting-plane enumeration: every triple of points whose plane has all
remaining points on one side defines a facet plane; coplanar facets are
merged into a single polygon, ordered, and fan-triangulated.  This handles
exactly-coplanar faces (cube, prisms) without tolerance gymnastics and is
watertight by construction.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

import numpy as np

__all__ = ["HullResult", "convex_hull"]


@dataclass(frozen=True)
class HullResult:
    """Triangulated convex hull: faces index into the input vertex array."""

    faces: tuple
    polygons: tuple
    volume: float
    area: float


def convex_hull(vertices, tol: float = 1e-9) -> HullResult:
    """Convex hull of >= 4 non-coplanar points.

    Raises ValueError on degenerate (coplanar or too-few) input.
    """
    pts = np.asarray(vertices, dtype=float)
    if pts.ndim != 2 or pts.shape[1] != 3 or len(pts) < 4:
        raise ValueError("need at least four 3-D points")
    scale = max(1.0, float(np.abs(pts).max()))
    eps = tol * scale
    centroid = pts.mean(axis=0)

    planes = []
    for i, j, k in combinations(range(len(pts)), 3):
        normal = np.cross(pts[j] - pts[i], pts[k] - pts[i])
        norm = np.linalg.norm(normal)
        if norm < eps:
            continue
        normal = normal / norm
        side = (pts - pts[i]) @ normal
        if side.max() <= eps:
            normal, side = -normal, -side
        if side.min() < -eps:
            continue
        offset = float(normal @ pts[i])
        for n2, o2 in planes:
            if normal @ n2 > 1 - 1e-9 and abs(offset - o2) < eps:
                break
        else:
            planes.append((normal, offset))

    if not planes:
        raise ValueError("degenerate input: points are coplanar")

    polygons = []
    faces = []
    volume = 0.0
    area = 0.0
    for normal, offset in planes:
        members = np.flatnonzero(np.abs(pts @ normal - offset) <= eps)
        face_pts = pts[members]
        fc = face_pts.mean(axis=0)
        ref = face_pts[0] - fc
        ref = ref - (ref @ normal) * normal
        ref = ref / np.linalg.norm(ref)
        perp = np.cross(normal, ref)
        ang = np.arctan2((face_pts - fc) @ perp, (face_pts - fc) @ ref)
        ordered = members[np.argsort(ang)]
        polygons.append(tuple(int(x) for x in ordered))
        for t in range(1, len(ordered) - 1):
            a, b, c = ordered[0], ordered[t], ordered[t + 1]
            faces.append((int(a), int(b), int(c)))
            ab = pts[b] - pts[a]
            ac = pts[c] - pts[a]
            area += 0.5 * np.linalg.norm(np.cross(ab, ac))
            volume += abs(np.dot(pts[a] - centroid,
                                 np.cross(pts[b] - centroid, pts[c] - centroid))) / 6.0

    if volume <= eps ** 3:
        raise ValueError("degenerate input: hull has no volume")
    _check_watertight(faces)
    return HullResult(faces=tuple(faces), polygons=tuple(polygons),
                      volume=float(volume), area=float(area))


def _check_watertight(faces):
    edges = {}
    for a, b, c in faces:
        for u, v in ((a, b), (b, c), (c, a)):
            key = (min(u, v), max(u, v))
            edges[key] = edges.get(key, 0) + 1
    bad = {e: n for e, n in edges.items() if n != 2}
    # fan triangulation shares polygon-internal diagonals twice as well, so
    # every edge of the triangle soup must appear exactly twice
    if bad:
        raise AssertionError(f"hull not watertight at edges {sorted(bad)[:4]}")
