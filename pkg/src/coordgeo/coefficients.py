"""One- and n-particle extracopularity coefficients, bounds and the distance.

The one-particle coefficient of a particle with k bonds and m distinct bond
angles is log2((k^2-k)/(2m)): the information gained about a bond pair by
learning its angle.  The n-particle coefficient replaces k^2-k by the
geometric mean over particles and m by the cardinality of the union of angle
sets.  In corrected mode the union counts, per angle class, the largest
number of close-yet-unequal ideal angles any one particle merges into it;
this keeps the union consistent with the per-particle distinct-angle counts
and makes the induced distance vanish exactly on identical descriptors.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .angles import AngleProfile, Discretizer, profile as angle_profile
from .catalog import GeometrySpec

__all__ = [
    "ParticleDescriptor",
    "descriptor",
    "e_one",
    "e_many",
    "check_upper_bound",
    "check_loose_bounds",
    "d_e",
]

_EQ_TOL = 1e-12


@dataclass(frozen=True)
class ParticleDescriptor:
    """Bond count plus discretized angle profile of one particle."""

    k: int
    profile: AngleProfile

    def __post_init__(self):
        if self.k < 2:
            raise ValueError("descriptor requires at least two bonds")
        if self.profile.m < 1:
            raise ValueError("descriptor requires at least one angle class")
        if self.profile.m > self.k * (self.k - 1) // 2:
            raise ValueError("more distinct angles than bond pairs")


def descriptor(g: GeometrySpec, d: Discretizer) -> ParticleDescriptor:
    """Descriptor of an ideal catalog geometry under a discretizer."""
    return ParticleDescriptor(k=g.k, profile=angle_profile(g, d))


def _log2_pairs(k: int) -> float:
    return math.log2(k * k - k)


def e_one(p: ParticleDescriptor) -> float:
    """One-particle coefficient log2((k^2-k)/(2m)), in bits."""
    return _log2_pairs(p.k) - math.log2(2.0 * p.profile.m)


def _union_cardinality(parts, union_mode: str) -> int:
    if union_mode == "raw":
        classes = set()
        for p in parts:
            classes.update(p.profile.class_indices)
        return len(classes)
    if union_mode == "corrected":
        best: dict = {}
        for p in parts:
            prof = p.profile
            for cls, rep in zip(prof.class_indices, prof.theta):
                f = prof.f[rep]
                if f > best.get(cls, 0):
                    best[cls] = f
        return sum(best.values())
    raise ValueError(f"unknown union mode {union_mode!r}")


def e_many(parts, union_mode: str = "corrected") -> float:
    """n-particle coefficient, in bits.

    Equals e_one for a single particle; for several it combines the geometric
    mean of their bond-pair counts with the (corrected) union of their angle
    classes.
    """
    parts = list(parts)
    if not parts:
        raise ValueError("need at least one particle")
    mean_log_pairs = sum(_log2_pairs(p.k) for p in parts) / len(parts)
    card = _union_cardinality(parts, union_mode)
    return mean_log_pairs - math.log2(2.0 * card)


def _identical(parts) -> bool:
    first = parts[0]
    sig0 = (first.k, first.profile.class_indices,
            tuple(sorted(first.profile.f.items())))
    for p in parts[1:]:
        if (p.k, p.profile.class_indices, tuple(sorted(p.profile.f.items()))) != sig0:
            return False
    return True


def check_upper_bound(parts, union_mode: str = "corrected"):
    """Verify e_many <= max(e_one), with equality exactly on identical inputs.

    Returns (holds, equality).
    """
    parts = list(parts)
    joint = e_many(parts, union_mode)
    upper = max(e_one(p) for p in parts)
    holds = joint <= upper + _EQ_TOL
    equality = abs(joint - upper) <= _EQ_TOL
    return holds, equality


def check_loose_bounds(parts, union_mode: str = "corrected") -> bool:
    """Verify the loose outer bounds on the n-particle coefficient."""
    parts = list(parts)
    joint = e_many(parts, union_mode)
    upper = max(_log2_pairs(p.k) for p in parts) \
        - math.log2(2.0 * min(p.profile.m for p in parts))
    lower = min(_log2_pairs(p.k) for p in parts) \
        - math.log2(2.0 * sum(p.profile.m for p in parts))
    return lower - _EQ_TOL <= joint <= upper + _EQ_TOL


def d_e(g: ParticleDescriptor, h: ParticleDescriptor,
        union_mode: str = "corrected") -> float:
    """Distance between two coordination geometries, in bits.

    max of the single-particle coefficients minus the two-particle one, with
    all three evaluated under the same union mode so that d_e(g, g) == 0.
    """
    single = max(e_many([g], union_mode), e_many([h], union_mode))
    return single - e_many([g, h], union_mode)
