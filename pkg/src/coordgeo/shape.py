"""Auxiliary shape parameters: sphericity and moment of inertia per neighbour."""

from __future__ import annotations

import math

import numpy as np

from .hull import convex_hull

__all__ = ["sphericity", "moment_per_neighbour"]


def sphericity(vertices) -> float:
    """Surface area of the volume-equivalent sphere over the hull area.

    Scale- and rotation-invariant; strictly between 0 and 1 by the
    isoperimetric inequality.
    """
    h = convex_hull(vertices)
    return math.pi ** (1.0 / 3.0) * (6.0 * h.volume) ** (2.0 / 3.0) / h.area


def moment_per_neighbour(vertices) -> float:
    """Mean squared neighbour distance from the neighbourhood centroid.

    Distances are normalized by the smallest centroid distance, making the
    value scale-free: exactly 1 when all neighbours are equidistant from
    their centroid, larger when shells split.
    """
    v = np.asarray(vertices, dtype=float)
    if v.ndim != 2 or v.shape[1] != 3 or len(v) < 1:
        raise ValueError("need at least one 3-D vertex")
    c = v.mean(axis=0)
    l2 = ((v - c) ** 2).sum(axis=1)
    lmin = l2.min()
    if lmin <= 0:
        raise ValueError("a neighbour coincides with the neighbourhood centroid")
    return float((l2 / lmin).mean())
