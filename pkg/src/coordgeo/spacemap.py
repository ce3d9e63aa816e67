"""Topology analyses on the 22-geometry distance matrix.

Builds the pairwise distance matrix, verifies the metric axioms, clusters it
(average linkage), embeds it with stress-majorization MDS, triangulates the
2-D embedding, and derives typicality and class statistics.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .angles import Discretizer
from .catalog import Catalog, TAXONOMY
from .coefficients import d_e, descriptor, e_one
from .shape import moment_per_neighbour, sphericity

__all__ = [
    "DistanceMatrix",
    "distance_matrix",
    "MetricReport",
    "verify_metric",
    "Dendrogram",
    "hierarchical_cluster",
    "Embedding",
    "mds",
    "delaunay_2d",
    "TypicalityReport",
    "typicality",
    "class_averages",
    "order_typicality_scatter",
]


@dataclass(frozen=True)
class DistanceMatrix:
    codes: tuple
    d: np.ndarray

    def value(self, a: str, b: str) -> float:
        return float(self.d[self.codes.index(a), self.codes.index(b)])


def distance_matrix(catalog: Catalog, disc: Discretizer,
                    union_mode: str = "corrected") -> DistanceMatrix:
    """Pairwise distances between all catalog geometries."""
    descs = [descriptor(g, disc) for g in catalog.geometries]
    n = len(descs)
    d = np.zeros((n, n))
    for i in range(n):
        for j in range(i + 1, n):
            d[i, j] = d[j, i] = d_e(descs[i], descs[j], union_mode)
    return DistanceMatrix(codes=tuple(catalog.codes), d=d)


@dataclass(frozen=True)
class MetricReport:
    identity_ok: bool
    symmetry_ok: bool
    triangle_ok: bool
    worst_triangle_slack: float
    max_diagonal: float
    min_off_diagonal: float
    failures: tuple

    @property
    def passed(self) -> bool:
        return self.identity_ok and self.symmetry_ok and self.triangle_ok


def verify_metric(dm: DistanceMatrix, tol: float = 1e-9) -> MetricReport:
    """Check identity of indiscernibles, symmetry and the triangle inequality.

    The triangle inequality is checked over every ordered triple of distinct
    indices; the report records the worst slack d(a,b)+d(b,c)-d(a,c).
    """
    d = dm.d
    n = len(d)
    failures = []
    max_diag = float(np.abs(np.diag(d)).max())
    off = d + np.diag(np.full(n, np.inf))
    min_off = float(off.min())
    identity_ok = max_diag <= tol and min_off > tol
    if max_diag > tol:
        failures.append(("identity", "nonzero diagonal", max_diag))
    if min_off <= tol:
        i, j = np.unravel_index(int(np.argmin(off)), off.shape)
        failures.append(("identity", f"zero distance {dm.codes[i]}-{dm.codes[j]}", min_off))

    asym = float(np.abs(d - d.T).max())
    symmetry_ok = asym <= tol
    if not symmetry_ok:
        failures.append(("symmetry", "asymmetric matrix", asym))

    # d[a,c] <= d[a,b] + d[b,c] for all ordered triples of distinct points
    slack = d[:, :, None] + d[None, :, :] - d[:, None, :]  # [a,b,c] indexing
    a, b, c = np.meshgrid(np.arange(n), np.arange(n), np.arange(n), indexing="ij")
    distinct = (a != b) & (b != c) & (a != c)
    worst = float(slack[distinct].min())
    triangle_ok = worst >= -tol
    if not triangle_ok:
        flat = np.where(distinct & (slack < -tol))
        i, j, k = flat[0][0], flat[1][0], flat[2][0]
        failures.append(("triangle",
                         f"d({dm.codes[i]},{dm.codes[k]}) > "
                         f"d({dm.codes[i]},{dm.codes[j]}) + d({dm.codes[j]},{dm.codes[k]})",
                         worst))
    return MetricReport(identity_ok=identity_ok, symmetry_ok=symmetry_ok,
                        triangle_ok=triangle_ok, worst_triangle_slack=worst,
                        max_diagonal=max_diag, min_off_diagonal=min_off,
                        failures=tuple(failures))


@dataclass(frozen=True)
class Dendrogram:
    """Average-linkage merge tree; node ids 0..n-1 are leaves in input order."""

    leaves: tuple
    merges: tuple  # (left_id, right_id, height, new_id)

    def newick(self, decimals: int = 6) -> str:
        n = len(self.leaves)
        height = {i: 0.0 for i in range(n)}
        label = {i: self.leaves[i] for i in range(n)}
        for left, right, h, new in self.merges:
            bl = h - height[left]
            br = h - height[right]
            label[new] = (f"({label[left]}:{bl:.{decimals}f},"
                          f"{label[right]}:{br:.{decimals}f})")
            height[new] = h
        root = self.merges[-1][3]
        return label[root] + ";"

    def dot(self, decimals: int = 4) -> str:
        lines = ["graph dendrogram {", "  node [shape=box];"]
        for i, code in enumerate(self.leaves):
            lines.append(f'  n{i} [label="{code}"];')
        for left, right, h, new in self.merges:
            lines.append(f'  n{new} [label="{h:.{decimals}f}" shape=point];')
            lines.append(f"  n{new} -- n{left};")
            lines.append(f"  n{new} -- n{right};")
        lines.append("}")
        return "\n".join(lines)

    def leafset(self, node: int) -> frozenset:
        n = len(self.leaves)
        if node < n:
            return frozenset([self.leaves[node]])
        for left, right, _, new in self.merges:
            if new == node:
                return self.leafset(left) | self.leafset(right)
        raise KeyError(node)

    def merge_history(self, code: str):
        """Leaf sets of the clusters a given leaf joins, smallest first."""
        cur = self.leaves.index(code)
        out = []
        for left, right, h, new in self.merges:
            if cur in (left, right):
                out.append((self.leafset(new), h))
                cur = new
        return out


def hierarchical_cluster(dm: DistanceMatrix) -> Dendrogram:
    """Average-linkage (UPGMA) clustering of the distance matrix.

    Ties between candidate pairs are broken deterministically by the
    lexicographically smallest leaf codes of the two clusters.
    """
    n = len(dm.codes)
    members = {i: [i] for i in range(n)}
    smallest = {i: dm.codes[i] for i in range(n)}
    dist = {}
    for i in range(n):
        for j in range(i + 1, n):
            dist[(i, j)] = float(dm.d[i, j])
    active = set(range(n))
    merges = []
    next_id = n
    while len(active) > 1:
        best = None
        for i in sorted(active):
            for j in sorted(active):
                if i >= j:
                    continue
                key = dist[(i, j)] if (i, j) in dist else dist[(j, i)]
                tie = tuple(sorted((smallest[i], smallest[j])))
                cand = (key, tie, i, j)
                if best is None or cand < best:
                    best = cand
        h, _, i, j = best
        left, right = (i, j) if smallest[i] <= smallest[j] else (j, i)
        new = next_id
        next_id += 1
        for o in active:
            if o in (i, j):
                continue
            dio = dist[(min(i, o), max(i, o))]
            djo = dist[(min(j, o), max(j, o))]
            ni, nj = len(members[i]), len(members[j])
            dist[(min(new, o), max(new, o))] = (ni * dio + nj * djo) / (ni + nj)
        members[new] = members[i] + members[j]
        smallest[new] = min(smallest[i], smallest[j])
        merges.append((left, right, h, new))
        active -= {i, j}
        active.add(new)
    return Dendrogram(leaves=tuple(dm.codes), merges=tuple(merges))


@dataclass(frozen=True)
class Embedding:
    dims: int
    coords: np.ndarray
    stress: float
    converged: bool
    stress_trace: tuple = field(default=(), repr=False)


def _stress1(d_target, coords):
    iu = np.triu_indices(len(d_target), 1)
    d_emb = np.sqrt(((coords[:, None, :] - coords[None, :, :]) ** 2).sum(-1))
    num = ((d_target[iu] - d_emb[iu]) ** 2).sum()
    return float(np.sqrt(num / (d_target[iu] ** 2).sum()))


def _classical_mds(d, dims):
    n = len(d)
    j = np.eye(n) - np.ones((n, n)) / n
    b = -0.5 * j @ (d ** 2) @ j
    w, v = np.linalg.eigh(b)
    order = np.argsort(w)[::-1]
    w = np.clip(w[order], 0.0, None)
    x = v[:, order[:dims]] * np.sqrt(w[:dims])
    if x.shape[1] < dims:
        x = np.pad(x, ((0, 0), (0, dims - x.shape[1])))
    return x


def _smacof(d, x0, max_iter, rtol):
    n = len(d)
    x = x0.copy()
    trace = [_stress1(d, x)]
    converged = False
    for _ in range(max_iter):
        d_emb = np.sqrt(((x[:, None, :] - x[None, :, :]) ** 2).sum(-1))
        np.fill_diagonal(d_emb, 1.0)
        b = np.where(d_emb > 0, -d / d_emb, 0.0)
        np.fill_diagonal(b, 0.0)
        np.fill_diagonal(b, -b.sum(axis=1))
        x = (b @ x) / n
        s = _stress1(d, x)
        trace.append(s)
        if trace[-2] - s < rtol * max(trace[-2], 1e-300):
            converged = True
            break
    return x, trace, converged


def mds(dm, dims: int = 8, seed: int = 0, restarts: int = 20,
        max_iter: int = 10000, rtol: float = 1e-10) -> Embedding:
    """Metric MDS by stress majorization.

    One start from the classical (eigendecomposition) solution plus seeded
    random restarts; returns the lowest-stress result.  The per-iteration
    stress trace of the winning run is kept for the majorization guarantee.
    """
    if dims < 1:
        raise ValueError("dims must be positive")
    d = dm.d if isinstance(dm, DistanceMatrix) else np.asarray(dm, dtype=float)
    rng = np.random.default_rng(seed)
    starts = [_classical_mds(d, dims)]
    scale = max(float(d.max()), 1e-12)
    for _ in range(max(restarts - 1, 0)):
        starts.append(rng.normal(scale=scale / 2.0, size=(len(d), dims)))
    best = None
    for x0 in starts:
        x, trace, conv = _smacof(d, x0, max_iter, rtol)
        s = trace[-1]
        if best is None or s < best[1] - 1e-15:
            best = (x, s, conv, trace)
    x, s, conv, trace = best
    return Embedding(dims=dims, coords=x, stress=s, converged=conv,
                     stress_trace=tuple(trace))


def delaunay_2d(points) -> set:
    """Bowyer-Watson Delaunay triangulation; returns the undirected edge set."""
    tris, n = _bowyer_watson(points)
    edges = set()
    for t in tris:
        for e in ((t[0], t[1]), (t[1], t[2]), (t[2], t[0])):
            edges.add((min(e), max(e)))
    return edges


def _bowyer_watson(points):
    pts = np.asarray(points, dtype=float)
    if pts.ndim != 2 or pts.shape[1] != 2 or len(pts) < 3:
        raise ValueError("need at least three 2-D points")
    span = pts.max(axis=0) - pts.min(axis=0)
    u = pts[1] - pts[0]
    area2 = 0.0
    for i in range(2, len(pts)):
        v = pts[i] - pts[0]
        area2 = max(area2, abs(u[0] * v[1] - u[1] * v[0]))
    if area2 < 1e-12 * max(span.max(), 1.0) ** 2:
        raise ValueError("points are collinear")

    n = len(pts)
    center = pts.mean(axis=0)
    radius = max(float(np.linalg.norm(pts - center, axis=1).max()), 1e-9)
    big = 64.0 * radius
    super_pts = np.array([
        center + [0.0, 2.0 * big],
        center + [-2.0 * big, -big],
        center + [2.0 * big, -big],
    ])
    allp = np.vstack([pts, super_pts])
    tris = [(n, n + 1, n + 2)]

    def circumcircle(tri):
        a, b, c = (allp[t] for t in tri)
        d = 2.0 * (a[0] * (b[1] - c[1]) + b[0] * (c[1] - a[1]) + c[0] * (a[1] - b[1]))
        if abs(d) < 1e-300:
            return a, np.inf
        ux = ((a @ a) * (b[1] - c[1]) + (b @ b) * (c[1] - a[1]) + (c @ c) * (a[1] - b[1])) / d
        uy = ((a @ a) * (c[0] - b[0]) + (b @ b) * (a[0] - c[0]) + (c @ c) * (b[0] - a[0])) / d
        u = np.array([ux, uy])
        return u, float(((a - u) ** 2).sum())

    for p in range(n):
        bad = []
        for t in tris:
            u, r2 = circumcircle(t)
            if ((allp[p] - u) ** 2).sum() <= r2 * (1 + 1e-12):
                bad.append(t)
        boundary = {}
        for t in bad:
            for e in ((t[0], t[1]), (t[1], t[2]), (t[2], t[0])):
                key = (min(e), max(e))
                boundary[key] = boundary.get(key, 0) + 1
        tris = [t for t in tris if t not in bad]
        for (u, v), cnt in sorted(boundary.items()):
            if cnt == 1:
                tris.append((u, v, p))

    final = [t for t in tris if all(x < n for x in t)]
    return final, n


@dataclass(frozen=True)
class TypicalityReport:
    tau: dict
    centroid: np.ndarray


def typicality(emb: Embedding, codes) -> TypicalityReport:
    """Negative distance of each geometry from the embedding centroid."""
    centroid = emb.coords.mean(axis=0)
    dist = np.sqrt(((emb.coords - centroid) ** 2).sum(axis=1))
    tau = {code: float(-dist[i]) for i, code in enumerate(codes)}
    return TypicalityReport(tau=tau, centroid=centroid)


def class_averages(catalog: Catalog, tau: dict) -> list:
    """Per-taxonomy-class means of sphericity, moment per neighbour and tau."""
    rows = {}
    for g in catalog.geometries:
        cls = TAXONOMY[g.code]
        rows.setdefault(cls, []).append(
            (sphericity(g.vertices), moment_per_neighbour(g.vertices), tau[g.code]))
    order = ["spheroidal", "ellipsoidal", "bipyramidal", "cuboidal", "tetrahedral"]
    out = []
    for cls in order:
        vals = np.array(rows[cls])
        out.append({
            "class": cls,
            "n": len(vals),
            "sphericity": float(vals[:, 0].mean()),
            "moment_per_neighbour": float(vals[:, 1].mean()),
            "typicality": float(vals[:, 2].mean()),
        })
    return out


def order_typicality_scatter(catalog: Catalog, disc: Discretizer, tau: dict) -> list:
    """Rows (code, one-particle coefficient, typicality, point-group order).

    The point-group order column is not derivable from the vertex data alone
    and is left empty.
    """
    rows = []
    for g in catalog.geometries:
        e = e_one(descriptor(g, disc))
        rows.append({"code": g.code, "e": float(e), "tau": float(tau[g.code]),
                     "point_group_order": ""})
    return rows
