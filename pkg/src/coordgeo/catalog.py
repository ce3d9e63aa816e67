"""Reference catalog of the 22 commonly encountered coordination geometries.

Vertices are direction sets around a central particle at the origin.  Every
single-shell geometry is scaled to unit circumradius; multi-shell geometries
(BCC, the capped prisms and antiprisms) keep their natural shell ratios with
the nearest shell at radius 1.  Construction conventions, validated against
the published per-geometry statistics:

* Platonic solids, deltahedra and lattice shells are exact closed forms.
* Bipyramids put the equatorial ring and both apexes on the unit sphere.
* Prisms and antiprisms are uniform (all edges equal) and inscribed in the
  unit sphere.  Trigonal-prism caps sit on the sphere over the square faces;
  pentagonal-prism caps sit on the sphere at the poles.  Square-antiprism
  caps are edge-preserving apexes (the bicapped form is the unit-edge
  gyroelongated square bipyramid rescaled to unit ring radius).
* CSP caps the cube with an edge-preserving square-pyramid apex; BSP places
  its two caps at the octahedral lattice sites at radius 2/sqrt(3), making it
  a 10-vertex subset of the BCC shell.
* SDS is a two-orbit arrangement with D2d symmetry; its two colatitudes and
  radius ratio are calibrated constants (see _SDS_* below).
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "GeometrySpec",
    "Catalog",
    "CODES",
    "TAXONOMY",
    "CAPPING_RELATION",
    "build_geometry",
    "build_catalog",
    "capping_reduced_set",
    "catalog_to_json",
]

SQ2 = math.sqrt(2.0)
SQ3 = math.sqrt(3.0)

# Calibrated SDS parameters.  The shape is the two-orbit D2d arrangement
#   ridge pairs at colatitude _SDS_THETA_A and radius _SDS_RADIUS_RATIO,
#   band vertices at colatitude _SDS_THETA_C and radius 1,
# constrained so that the ridge-band separations coincide exactly
# (tan(theta_a) * tan(theta_c) = 2, giving 6 distinct bond angles), the
# moment of inertia per neighbour is 1.31 and the sphericity is 0.8543.
_SDS_THETA_A = math.radians(60.055109521918212)
_SDS_THETA_C = math.radians(49.043578045650897)
_SDS_RADIUS_RATIO = math.sqrt(1.62)


@dataclass(frozen=True, eq=False)
class GeometrySpec:
    """One ideal coordination geometry."""

    code: str
    name: str
    vertices: np.ndarray
    k: int
    polyhedral_class: str
    taxonomy_class: str

    def __post_init__(self):
        v = np.asarray(self.vertices, dtype=float)
        object.__setattr__(self, "vertices", v)
        if v.shape != (self.k, 3):
            raise ValueError(f"{self.code}: expected {self.k} vertices, got {v.shape}")
        d = np.linalg.norm(v[:, None, :] - v[None, :, :], axis=-1)
        np.fill_diagonal(d, np.inf)
        if d.min() <= 1e-9:
            raise ValueError(f"{self.code}: coincident vertices")


@dataclass(frozen=True)
class Catalog:
    """All 22 geometries plus the capping relation between them."""

    geometries: tuple = field(default_factory=tuple)
    capping_relation: frozenset = field(default_factory=frozenset)

    def __post_init__(self):
        codes = [g.code for g in self.geometries]
        if len(codes) != 22 or len(set(codes)) != 22:
            raise ValueError("catalog must hold exactly 22 uniquely coded geometries")

    def get(self, code: str) -> GeometrySpec:
        for g in self.geometries:
            if g.code == code:
                return g
        raise KeyError(code)

    @property
    def codes(self):
        return [g.code for g in self.geometries]


def _ring(n, radius, z, az0=0.0):
    az = az0 + 2.0 * np.pi * np.arange(n) / n
    return np.column_stack([radius * np.cos(az), radius * np.sin(az), np.full(n, z)])


def _tetrahedron():
    return np.array([[1, 1, 1], [1, -1, -1], [-1, 1, -1], [-1, -1, 1]], float) / SQ3


def _octahedron():
    return np.array([[1, 0, 0], [-1, 0, 0], [0, 1, 0],
                     [0, -1, 0], [0, 0, 1], [0, 0, -1]], float)


def _cube():
    v = [[sx, sy, sz] for sx in (-1, 1) for sy in (-1, 1) for sz in (-1, 1)]
    return np.array(v, float) / SQ3


def _icosahedron():
    # pole/ring/ring/pole orientation: bicapped uniform pentagonal antiprism
    zr = 1.0 / math.sqrt(5.0)
    rr = 2.0 / math.sqrt(5.0)
    up = _ring(5, rr, zr)
    dn = _ring(5, rr, -zr, az0=np.pi / 5)
    return np.vstack([[0, 0, 1], up, dn, [0, 0, -1]])


def _cuboctahedron():
    v = []
    for a in (-1, 1):
        for b in (-1, 1):
            v += [[a, b, 0], [a, 0, b], [0, a, b]]
    return np.array(v, float) / SQ2


def _anticuboctahedron():
    # ideal hexagonal close packing shell, c/a = sqrt(8/3)
    inplane = _ring(6, 1.0, 0.0)
    up = _ring(3, 1.0 / SQ3, math.sqrt(2.0 / 3.0), az0=np.pi / 6)
    dn = _ring(3, 1.0 / SQ3, -math.sqrt(2.0 / 3.0), az0=np.pi / 6)
    return np.vstack([inplane, up, dn])


def _bcc_shell():
    # 8 nearest at radius 1 plus 6 next-nearest at radius 2/sqrt(3)
    return np.vstack([_cube(), _octahedron() * (2.0 / SQ3)])


def _bipyramid(n):
    return np.vstack([_ring(n, 1.0, 0.0), [[0, 0, 1]], [[0, 0, -1]]])


def _square_antiprism():
    # uniform: ring and lateral edges equal, inscribed in the unit sphere
    c2 = SQ2 / (4.0 + SQ2)
    h = math.sqrt(c2)
    r = math.sqrt(1.0 - c2)
    return np.vstack([_ring(4, r, h), _ring(4, r, -h, az0=np.pi / 4)])


def _square_antiprism_cap_height():
    c2 = SQ2 / (4.0 + SQ2)
    h = math.sqrt(c2)
    r = math.sqrt(1.0 - c2)
    return h + r  # apex at ring-edge distance from the adjacent square


def _trigonal_prism():
    a = math.sqrt(12.0 / 7.0)  # uniform, unit circumradius
    return np.vstack([_ring(3, a / SQ3, a / 2), _ring(3, a / SQ3, -a / 2)])


def _trigonal_prism_caps(n):
    az = np.pi / 3 + 2.0 * np.pi * np.arange(n) / 3  # square-face normals
    return np.column_stack([np.cos(az), np.sin(az), np.zeros(n)])


def _pentagonal_prism():
    s5 = 2.0 * math.sin(np.pi / 5)
    a = 1.0 / math.sqrt(1.0 / s5 ** 2 + 0.25)  # uniform, unit circumradius
    return np.vstack([_ring(5, a / s5, a / 2), _ring(5, a / s5, -a / 2)])


def _snub_disphenoid():
    ta, tc = _SDS_THETA_A, _SDS_THETA_C
    ra, rc = _SDS_RADIUS_RATIO, 1.0
    sa_, ca_ = math.sin(ta), math.cos(ta)
    sc_, cc_ = math.sin(tc), math.cos(tc)
    return np.array([
        [ra * sa_, 0, ra * ca_], [-ra * sa_, 0, ra * ca_],
        [0, ra * sa_, -ra * ca_], [0, -ra * sa_, -ra * ca_],
        [rc * sc_, 0, -rc * cc_], [-rc * sc_, 0, -rc * cc_],
        [0, rc * sc_, rc * cc_], [0, -rc * sc_, rc * cc_],
    ])


def _builders():
    cap_sa = _square_antiprism_cap_height()
    cap_csp = (1.0 + SQ2) / SQ3      # edge-preserving apex over a cube face
    cap_bsp = 2.0 / SQ3              # octahedral lattice sites (BCC subset)
    return {
        "TBP": lambda: _bipyramid(3),
        "SDS": _snub_disphenoid,
        "PBP": lambda: _bipyramid(5),
        "CTP": lambda: np.vstack([_trigonal_prism(), _trigonal_prism_caps(1)]),
        "BTP": lambda: np.vstack([_trigonal_prism(), _trigonal_prism_caps(2)]),
        "TET": _tetrahedron,
        "HBP": lambda: _bipyramid(6),
        "CSA": lambda: np.vstack([_square_antiprism(), [[0, 0, cap_sa]]]),
        "CSP": lambda: np.vstack([_cube(), [[0, 0, cap_csp]]]),
        "TTP": lambda: np.vstack([_trigonal_prism(), _trigonal_prism_caps(3)]),
        "SC": _octahedron,
        "BSA": lambda: np.vstack([_square_antiprism(),
                                  [[0, 0, cap_sa]], [[0, 0, -cap_sa]]]),
        "BSP": lambda: np.vstack([_cube(), [[0, 0, cap_bsp]], [[0, 0, -cap_bsp]]]),
        "CPP": lambda: np.vstack([_pentagonal_prism(), [[0, 0, 1.0]]]),
        "SA": _square_antiprism,
        "HDR": _cube,
        "BPP": lambda: np.vstack([_pentagonal_prism(), [[0, 0, 1.0]], [[0, 0, -1.0]]]),
        "HCP": _anticuboctahedron,
        "BCC": _bcc_shell,
        "FCC": _cuboctahedron,
        "CPA": lambda: _icosahedron()[:-1],
        "ICO": _icosahedron,
    }


# (code, name, polyhedral class, k) in order of increasing one-particle E
_ROWS = [
    ("TBP", "Trigonal bipyramidal", "Deltahedral, bipyramidal", 5),
    ("SDS", "Snub disphenoidal", "Deltahedral", 8),
    ("PBP", "Pentagonal bipyramidal", "Deltahedral, bipyramidal", 7),
    ("CTP", "Capped trigonal prismatic", "Prismatic", 7),
    ("BTP", "Bicapped trigonal prismatic", "Prismatic", 8),
    ("TET", "Regular tetrahedral", "Platonic, deltahedral", 4),
    ("HBP", "Hexagonal bipyramidal", "Bipyramidal", 8),
    ("CSA", "Capped square antiprismatic", "Antiprismatic", 9),
    ("CSP", "Capped square prismatic", "Prismatic", 9),
    ("TTP", "Tricapped trigonal prismatic", "Prismatic, deltahedral", 9),
    ("SC", "Regular octahedral", "Platonic, deltahedral, bipyramidal", 6),
    ("BSA", "Bicapped square antiprismatic", "Deltahedral, antiprismatic", 10),
    ("BSP", "Bicapped square prismatic", "Prismatic", 10),
    ("CPP", "Capped pentagonal prismatic", "Prismatic", 11),
    ("SA", "Square antiprismatic", "Antiprismatic", 8),
    ("HDR", "Regular hexahedral", "Platonic, prismatic", 8),
    ("BPP", "Bicapped pentagonal prismatic", "Prismatic", 12),
    ("HCP", "Anticuboctahedral", "Bicupolar", 12),
    ("BCC", "Rhombic dodecahedral", "Catalan", 14),
    ("FCC", "Cuboctahedral", "Bicupolar", 12),
    ("CPA", "Capped pentagonal antiprismatic", "Antiprismatic", 11),
    ("ICO", "Regular icosahedral", "Platonic, deltahedral, antiprismatic", 12),
]

CODES = [r[0] for r in _ROWS]

TAXONOMY = {
    "TET": "tetrahedral",
    "TBP": "bipyramidal", "PBP": "bipyramidal", "HBP": "bipyramidal",
    "SC": "bipyramidal",
    "SDS": "ellipsoidal", "CTP": "ellipsoidal", "BTP": "ellipsoidal",
    "HDR": "cuboidal", "CSP": "cuboidal", "BSP": "cuboidal", "BCC": "cuboidal",
    "CSA": "spheroidal", "TTP": "spheroidal", "BSA": "spheroidal",
    "CPP": "spheroidal", "SA": "spheroidal", "BPP": "spheroidal",
    "HCP": "spheroidal", "FCC": "spheroidal", "CPA": "spheroidal",
    "ICO": "spheroidal",
}

# ordered pairs (capped geometry, its capping)
CAPPING_RELATION = frozenset({
    ("SA", "CSA"), ("CSA", "BSA"),
    ("CTP", "BTP"), ("BTP", "TTP"),
    ("HDR", "CSP"), ("CSP", "BSP"),
    ("CPP", "BPP"),
    ("CPA", "ICO"),
})


def build_geometry(code: str) -> GeometrySpec:
    """Construct one catalog geometry by its abbreviation."""
    builders = _builders()
    for c, name, pclass, k in _ROWS:
        if c == code:
            return GeometrySpec(code=c, name=name, vertices=builders[c](),
                                k=k, polyhedral_class=pclass,
                                taxonomy_class=TAXONOMY[c])
    raise KeyError(f"unknown geometry code: {code!r}")


def build_catalog() -> Catalog:
    """Construct the full 22-geometry catalog."""
    return Catalog(geometries=tuple(build_geometry(c) for c in CODES),
                   capping_relation=CAPPING_RELATION)


def capping_reduced_set(catalog: Catalog) -> list[str]:
    """Codes whose geometry is not capped by any other catalog geometry.

    These are the sources of the pooled bond-angle list; including a geometry
    together with its cappings would bias the pool toward that family.
    """
    capped = {pair[0] for pair in catalog.capping_relation}
    return [c for c in catalog.codes if c not in capped]


def catalog_to_json(catalog: Catalog, indent: int = 2) -> str:
    """Serialize the catalog for the CLI ``catalog dump`` command."""
    items = [
        {
            "code": g.code,
            "name": g.name,
            "k": g.k,
            "vertices": [[round(float(x), 12) for x in row] for row in g.vertices],
            "class": g.taxonomy_class,
        }
        for g in catalog.geometries
    ]
    return json.dumps(items, indent=indent)
