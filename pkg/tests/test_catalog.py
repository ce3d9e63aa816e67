import math

import numpy as np
import pytest

import coordgeo as cg
from coordgeo.angles import bond_angles, distinct_values

from published import TABLE, CAPPING_REDUCED


def test_catalog_has_22_unique_codes(catalog):
    assert len(catalog.geometries) == 22
    assert len(set(catalog.codes)) == 22


@pytest.mark.parametrize("code", list(TABLE))
def test_coordination_numbers_match(catalog, code):
    g = catalog.get(code)
    assert g.k == TABLE[code][0]
    assert g.vertices.shape == (g.k, 3)


@pytest.mark.parametrize("code", list(TABLE))
def test_distinct_angle_counts_match(catalog, code):
    # construction-correctness oracle: number of distinct ideal bond angles
    vals = distinct_values(bond_angles(catalog.get(code).vertices))
    assert len(vals) == TABLE[code][1]


def test_tet_basics():
    g = cg.build_geometry("TET")
    assert g.k == 4
    assert len(g.vertices) == 4
    assert np.allclose(np.linalg.norm(g.vertices, axis=1), 1.0)


def test_bcc_shells():
    g = cg.build_geometry("BCC")
    r = np.sort(np.linalg.norm(g.vertices, axis=1))
    assert np.allclose(r[:8], 1.0)
    assert np.allclose(r[8:], 2.0 / math.sqrt(3.0))


def test_fcc_angle_set():
    a = bond_angles(cg.build_geometry("FCC").vertices)
    targets = np.array([60.0, 90.0, 120.0, 180.0])
    assert np.all(np.min(np.abs(a[:, None] - targets[None, :]), axis=1) < 1e-9)
    assert np.allclose(np.linalg.norm(cg.build_geometry("FCC").vertices, axis=1), 1.0)


def test_sc_angle_set():
    a = bond_angles(cg.build_geometry("SC").vertices)
    targets = np.array([90.0, 180.0])
    assert np.all(np.min(np.abs(a[:, None] - targets[None, :]), axis=1) < 1e-9)


def test_unknown_code_raises():
    with pytest.raises(KeyError):
        cg.build_geometry("XYZ")


def test_capping_reduced_set(catalog):
    assert cg.capping_reduced_set(catalog) == CAPPING_REDUCED


def test_capping_examples(catalog):
    kept = set(cg.capping_reduced_set(catalog))
    assert "BSA" in kept and "SA" not in kept and "CSA" not in kept
    assert "TET" in kept


def test_capping_relation_acyclic(catalog):
    children = {}
    for capped, capping in catalog.capping_relation:
        children.setdefault(capped, []).append(capping)

    def walk(node, seen):
        assert node not in seen, f"cycle through {node}"
        for nxt in children.get(node, []):
            walk(nxt, seen | {node})

    for start in children:
        walk(start, set())


def test_taxonomy_classes(catalog):
    allowed = {"spheroidal", "ellipsoidal", "bipyramidal", "cuboidal", "tetrahedral"}
    for g in catalog.geometries:
        assert g.taxonomy_class in allowed
    assert catalog.get("TET").taxonomy_class == "tetrahedral"
    tetra = [g for g in catalog.geometries if g.taxonomy_class == "tetrahedral"]
    assert len(tetra) == 1


def test_no_coincident_vertices(catalog):
    for g in catalog.geometries:
        d = np.linalg.norm(g.vertices[:, None] - g.vertices[None, :], axis=-1)
        np.fill_diagonal(d, np.inf)
        assert d.min() > 1e-9


def test_sds_calibration_conditions(catalog):
    # the SDS arrangement is pinned by three conditions: coinciding ridge-band
    # separations (six distinct angles), the published moment, and the
    # published sphericity
    from coordgeo.shape import moment_per_neighbour, sphericity

    v = catalog.get("SDS").vertices
    assert moment_per_neighbour(v) == pytest.approx(1.31, abs=1e-9)
    assert sphericity(v) == pytest.approx(0.8543, abs=1e-6)
    assert len(distinct_values(bond_angles(v))) == 6
    radii = np.linalg.norm(v, axis=1)
    assert np.allclose(np.sort(radii)[:4], np.sort(radii)[0])
    assert np.sort(radii)[4] / np.sort(radii)[0] == pytest.approx(
        math.sqrt(2 * 1.31 - 1), abs=1e-12)


def test_critical_pool_gap(catalog):
    # the axiom boundary: exactly one inter-value gap in the pooled angle
    # list falls in (2.85, 2.86], so clustering changes between those radii
    pool = cg.collect_pool(catalog)
    vals = np.unique(np.round(pool.values, 9))
    gaps = np.diff(np.sort(vals))
    crit = [g for g in gaps if 2.85 < g <= 2.86]
    assert len(crit) == 1
    assert crit[0] == pytest.approx(2.8585, abs=0.0005)


def test_catalog_json(catalog):
    import json

    items = json.loads(cg.catalog.catalog_to_json(catalog))
    assert len(items) == 22
    byc = {it["code"]: it for it in items}
    assert byc["FCC"]["k"] == 12
    assert len(byc["FCC"]["vertices"]) == 12
    assert byc["TET"]["class"] == "tetrahedral"
    assert set(byc["ICO"]) == {"code", "name", "k", "vertices", "class"}
