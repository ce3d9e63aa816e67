import numpy as np
import pytest

import coordgeo as cg
from coordgeo.spacemap import (DistanceMatrix, _smacof, _classical_mds,
                               delaunay_2d, hierarchical_cluster, mds,
                               typicality, verify_metric)


def test_distance_matrix_basics(dmatrix):
    assert np.allclose(np.diag(dmatrix.d), 0.0)
    assert np.allclose(dmatrix.d, dmatrix.d.T)
    assert dmatrix.value("FCC", "HCP") == pytest.approx(np.log2(1.5), abs=1e-12)


def test_metric_verification_passes(dmatrix):
    rep = verify_metric(dmatrix, tol=1e-9)
    assert rep.passed
    assert rep.worst_triangle_slack >= -1e-9
    assert rep.min_off_diagonal > 1e-9


def test_metric_detects_triangle_violation():
    codes = ("a", "b", "c")
    d = np.array([[0.0, 1.0, 5.0], [1.0, 0.0, 1.0], [5.0, 1.0, 0.0]])
    rep = verify_metric(DistanceMatrix(codes=codes, d=d))
    assert not rep.triangle_ok
    assert any(kind == "triangle" for kind, _, _ in rep.failures)


def test_metric_detects_zero_off_diagonal():
    codes = ("a", "b", "c")
    d = np.array([[0.0, 0.0, 1.0], [0.0, 0.0, 1.0], [1.0, 1.0, 0.0]])
    rep = verify_metric(DistanceMatrix(codes=codes, d=d))
    assert not rep.identity_ok


def test_upgma_two_leaves():
    dm = DistanceMatrix(codes=("a", "b"), d=np.array([[0.0, 0.7], [0.7, 0.0]]))
    dendro = hierarchical_cluster(dm)
    assert len(dendro.merges) == 1
    assert dendro.merges[0][2] == pytest.approx(0.7)


def test_upgma_catalog_structure(dmatrix):
    dendro = hierarchical_cluster(dmatrix)
    assert len(dendro.merges) == 21
    fcc_first = dendro.merge_history("FCC")[0][0]
    assert fcc_first == frozenset({"FCC", "CPA", "ICO"})
    hcp_first = dendro.merge_history("HCP")[0][0]
    assert hcp_first == frozenset({"HCP", "CPP", "BPP"})


def test_upgma_fcc_before_bcc(dmatrix):
    # the first FCC cluster containing BCC must already contain CPA and ICO
    dendro = hierarchical_cluster(dmatrix)
    first_with_bcc = next(s for s, _ in dendro.merge_history("FCC") if "BCC" in s)
    assert {"CPA", "ICO"} <= first_with_bcc


def test_upgma_heights_monotone(dmatrix):
    dendro = hierarchical_cluster(dmatrix)
    heights = {i: 0.0 for i in range(len(dendro.leaves))}
    for left, right, h, new in dendro.merges:
        assert h >= heights[left] - 1e-12
        assert h >= heights[right] - 1e-12
        heights[new] = h


def test_newick_output(dmatrix):
    dendro = hierarchical_cluster(dmatrix)
    nwk = dendro.newick()
    assert nwk.endswith(";")
    assert nwk.count("(") == 21
    for code in dmatrix.codes:
        assert code in nwk
    dot = dendro.dot()
    assert dot.startswith("graph") and dot.endswith("}")


def test_mds_recovers_euclidean_points():
    rng = np.random.default_rng(3)
    pts = rng.normal(size=(10, 3))
    d = np.sqrt(((pts[:, None] - pts[None, :]) ** 2).sum(-1))
    emb = mds(d, dims=3, seed=0, restarts=5)
    assert emb.stress < 1e-6


def test_mds_stress_decreases_with_dims(dmatrix):
    s7 = mds(dmatrix, dims=7, seed=0, restarts=5).stress
    s8 = mds(dmatrix, dims=8, seed=0, restarts=5).stress
    assert s8 <= s7 + 1e-12


def test_smacof_trace_nonincreasing(dmatrix):
    rng = np.random.default_rng(0)
    for x0 in (_classical_mds(dmatrix.d, 8),
               rng.normal(size=(22, 8)),
               rng.normal(size=(22, 8))):
        _, trace, _ = _smacof(dmatrix.d, x0, max_iter=2000, rtol=1e-10)
        diffs = np.diff(np.array(trace))
        assert np.all(diffs <= 1e-12)


def test_mds_rejects_bad_dims(dmatrix):
    with pytest.raises(ValueError):
        mds(dmatrix, dims=0)


def test_delaunay_triangle():
    edges = delaunay_2d(np.array([[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]]))
    assert edges == {(0, 1), (0, 2), (1, 2)}


def test_delaunay_square():
    edges = delaunay_2d(np.array([[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]]))
    assert len(edges) == 5  # four sides plus one diagonal


def test_delaunay_collinear_raises():
    with pytest.raises(ValueError):
        delaunay_2d(np.array([[0.0, 0.0], [1.0, 1.0], [2.0, 2.0]]))


def test_delaunay_empty_circumcircle():
    from coordgeo.spacemap import _bowyer_watson

    rng = np.random.default_rng(12)
    for _ in range(5):
        pts = rng.uniform(size=(18, 2))
        tris, n = _bowyer_watson(pts)
        assert len(tris) > 0
        for i, j, k in tris:
            a, b, c = pts[i], pts[j], pts[k]
            d = 2.0 * (a[0] * (b[1] - c[1]) + b[0] * (c[1] - a[1])
                       + c[0] * (a[1] - b[1]))
            assert abs(d) > 1e-12
            ux = ((a @ a) * (b[1] - c[1]) + (b @ b) * (c[1] - a[1])
                  + (c @ c) * (a[1] - b[1])) / d
            uy = ((a @ a) * (c[0] - b[0]) + (b @ b) * (a[0] - c[0])
                  + (c @ c) * (b[0] - a[0])) / d
            r2 = (a[0] - ux) ** 2 + (a[1] - uy) ** 2
            inside = ((pts[:, 0] - ux) ** 2 + (pts[:, 1] - uy) ** 2
                      < r2 * (1.0 - 1e-9))
            inside[[i, j, k]] = False
            assert not inside.any()


def test_typicality_extremes(dmatrix, embedding):
    rep = typicality(embedding, dmatrix.codes)
    tau = rep.tau
    order = sorted(tau, key=tau.get)
    assert order[0] == "TET"
    assert order[-1] == "HBP"
    assert np.allclose(rep.centroid, embedding.coords.mean(axis=0))


def test_scatter_rows(catalog, discretizer, dmatrix, embedding):
    from coordgeo.spacemap import order_typicality_scatter

    tau = typicality(embedding, dmatrix.codes).tau
    rows = order_typicality_scatter(catalog, discretizer, tau)
    assert len(rows) == 22
    by = {r["code"]: r for r in rows}
    assert by["ICO"]["e"] == pytest.approx(4.459, abs=0.0005)
    assert by["TET"]["e"] == pytest.approx(2.585, abs=0.0005)
    assert min(rows, key=lambda r: r["tau"])["code"] == "TET"
