"""The cyclic three-parameter slice and its level sets.

Points of the slice are octonion pairs

    v1 = (X, Y, Z, c, 0, 0, 0, 0),   v2 = (Y, Z, X, 0, c, 0, 0, 0)

for a fixed constant c > 0 (default 1/2).  Both halves always have the
same norm X^2+Y^2+Z^2+c^2 and inner product Q = XY+YZ+ZX, so
d2 = 4*Q^2 on the slice, exactly, and the d2=eps level set approximates
the quadratic cone Q = 0.

Grid sampling evaluates the same pairing expressions vectorized; the
scalar path (d2_on_slice, exact-capable) and the vectorized path are
bit-identical in float because the arithmetic order matches.

Level-set vertices are first placed by linear interpolation along grid
edges (marching squares in 2D, classic 256-case marching cubes in 3D
via scikit-image), then polished by bisection along their edge against
the analytic field so every emitted vertex re-evaluates to the target
level within tolerance.  Refinement is a deterministic function of the
edge, so vertices shared between cells stay shared.

File formats:
  - 2D field CSV: header X,Y,D2,log1pD2; rows with X fastest.
  - contour CSV: header x0,y0,x1,y1; one segment per row.
  - OBJ mesh: `v x y z` then `f i j k` (1-indexed); per-vertex
    inner-product color in a sidecar CSV `vertex_index,inner_product`.
  - raw field dump: `#` header lines with N, R, c, eps and the index
    order, then one value per line, X fastest, then Y, then Z
    (value[i][j][k] at (X_i, Y_j, Z_k)).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from skimage import measure

from .algebra import CDElement, OctonionPair, element, join
from .invariants import d2_geometric

MAX_GRID = 513
REFINE_TOL_2D = 1e-7
REFINE_REL_TOL_3D = 1e-3  # |d2 - eps| <= this * eps after polishing


@dataclass(frozen=True)
class SliceParams:
    c: float = 0.5
    range_: float = 1.0
    grid: int = 81
    eps: float = 0.01

    def __post_init__(self):
        if not (self.c > 0 and self.range_ > 0 and self.eps > 0):
            raise ValueError("c, range and eps must be positive")
        if self.grid < 2:
            raise ValueError("grid must have at least 2 nodes per axis")

    def nodes(self) -> np.ndarray:
        return np.linspace(-self.range_, self.range_, self.grid)


def slice_point(x, y, z, c) -> OctonionPair:
    v1 = element(3, (x, y, z, c, 0, 0, 0, 0))
    v2 = element(3, (y, z, x, 0, c, 0, 0, 0))
    return OctonionPair(v1, v2)


def slice_element(x, y, z, c) -> CDElement:
    return join(*slice_point(x, y, z, c))


def d2_on_slice(x, y, z, c):
    """d2 of the slice point; exact over rationals, float otherwise."""
    return d2_geometric(slice_element(x, y, z, c))


def d2_values(x, y, z, c):
    """Vectorized d2 on slice coordinates (same float ops as the scalar
    pipeline, hence bit-identical on float inputs)."""
    n1 = x * x + y * y + z * z + c * c
    n2 = y * y + z * z + x * x + c * c
    ip = x * y + y * z + z * x
    b = n1 - n2
    return b * b + 4 * ip * ip


def inner_values(x, y, z):
    return x * y + y * z + z * x


def gradient_check(x, y, z):
    """Gradient of Q = XY+YZ+ZX; vanishes only at the origin."""
    return np.array([y + z, x + z, x + y])


# --- 2D plane ---------------------------------------------------------------

@dataclass(frozen=True)
class PlaneField:
    params: SliceParams
    x: np.ndarray            # N nodes
    y: np.ndarray            # N nodes
    d2: np.ndarray           # (N, N), [i, j] at (x[i], y[j])
    log1p: np.ndarray        # log(1 + d2)
    segments: list = field(default_factory=list)  # ((x0,y0),(x1,y1)), d2=eps


# marching-squares case table: corner bits b0=(i,j), b1=(i+1,j),
# b2=(i+1,j+1), b3=(i,j+1); edges 0..3 = bottom,right,top,left.
# Ambiguous cases 5 and 10 use a fixed pairing (no saddle decider).
_MS_SEGMENTS = {
    0: (), 15: (),
    1: ((3, 0),), 2: ((0, 1),), 3: ((3, 1),), 4: ((1, 2),),
    5: ((3, 0), (1, 2)), 6: ((0, 2),), 7: ((3, 2),), 8: ((2, 3),),
    9: ((0, 2),), 10: ((0, 1), (2, 3)), 11: ((1, 2),), 12: ((1, 3),),
    13: ((0, 1),), 14: ((3, 0),),
}


def _edge_crossing(p0, p1, f0, f1, level, fun, tol):
    """Crossing point on the segment p0-p1, bisected until |f-level|<=tol."""
    t = (level - f0) / (f1 - f0)
    lo, hi = 0.0, 1.0
    flo = f0
    point = (p0[0] + t * (p1[0] - p0[0]), p0[1] + t * (p1[1] - p0[1]))
    for _ in range(80):
        fp = fun(*point)
        if abs(fp - level) <= tol:
            return point
        if (flo - level) * (fp - level) <= 0.0:
            hi = t
        else:
            lo, flo = t, fp
        t = 0.5 * (lo + hi)
        point = (p0[0] + t * (p1[0] - p0[0]), p0[1] + t * (p1[1] - p0[1]))
    return point


def sample_plane_z0(params: SliceParams) -> PlaneField:
    """d2 and log(1+d2) on the Z=0 plane plus the refined eps-contour."""
    xs = params.nodes()
    x = xs[:, None]
    y = xs[None, :]
    d2 = d2_values(x, y, 0.0, params.c)
    log1p = np.log1p(d2)

    fun = lambda px, py: float(d2_values(px, py, 0.0, params.c))
    level = params.eps
    segments = []
    n = params.grid
    for i in range(n - 1):
        for j in range(n - 1):
            corners = ((i, j), (i + 1, j), (i + 1, j + 1), (i, j + 1))
            vals = [float(d2[a, b]) for a, b in corners]
            case = sum(1 << k for k, v in enumerate(vals) if v > level)
            if case in (0, 15):
                continue
            pts = [(float(xs[a]), float(xs[b])) for a, b in corners]
            edges = ((0, 1), (1, 2), (2, 3), (3, 0))
            for e_a, e_b in _MS_SEGMENTS[case]:
                seg = []
                for e in (e_a, e_b):
                    a, b = edges[e]
                    seg.append(_edge_crossing(pts[a], pts[b], vals[a], vals[b],
                                              level, fun, REFINE_TOL_2D))
                segments.append(tuple(seg))
    return PlaneField(params, xs, xs, d2, log1p, segments)


def plane_csv_text(fieldv: PlaneField) -> str:
    lines = ["X,Y,D2,log1pD2"]
    n = fieldv.params.grid
    for j in range(n):
        for i in range(n):
            lines.append(f"{float(fieldv.x[i])!r},{float(fieldv.y[j])!r},"
                         f"{float(fieldv.d2[i, j])!r},"
                         f"{float(fieldv.log1p[i, j])!r}")
    return "\n".join(lines) + "\n"


def contour_csv_text(fieldv: PlaneField) -> str:
    lines = ["x0,y0,x1,y1"]
    for (p0, p1) in fieldv.segments:
        lines.append(f"{float(p0[0])!r},{float(p0[1])!r},"
                     f"{float(p1[0])!r},{float(p1[1])!r}")
    return "\n".join(lines) + "\n"


# --- 3D volume --------------------------------------------------------------

@dataclass(frozen=True)
class ScalarField3D:
    params: SliceParams
    values: np.ndarray       # (N, N, N), [i, j, k] at (X_i, Y_j, Z_k)


@dataclass(frozen=True)
class TriangleMesh:
    vertices: np.ndarray     # (M, 3)
    triangles: np.ndarray    # (K, 3) int
    colors: np.ndarray       # (M,) inner product at each vertex


def sample_volume(params: SliceParams) -> ScalarField3D:
    if params.grid > MAX_GRID:
        raise ValueError(f"grid {params.grid} exceeds the {MAX_GRID} limit")
    xs = params.nodes()
    x = xs[:, None, None]
    y = xs[None, :, None]
    z = xs[None, None, :]
    return ScalarField3D(params, d2_values(x, y, z, params.c))


def field_dump_text(fieldv: ScalarField3D) -> str:
    p = fieldv.params
    head = [
        f"# N={p.grid} R={p.range_!r} c={p.c!r} eps={p.eps!r}",
        "# order: value[i][j][k] at (X_i, Y_j, Z_k); X fastest, then Y, then Z",
    ]
    vals = fieldv.values
    n = p.grid
    body = [repr(float(vals[i, j, k]))
            for k in range(n) for j in range(n) for i in range(n)]
    return "\n".join(head + body) + "\n"


def marching_cubes(fieldv: ScalarField3D, eps: float,
                   refine_fn=None) -> TriangleMesh:
    """Extract the eps-isosurface of a sampled field.

    Classic 256-case marching cubes with edge-linear interpolation;
    duplicate vertices are merged and degenerate triangles dropped.
    When refine_fn(x, y, z) -> values is given, each vertex is bisected
    along its grid edge until |refine_fn - eps| <= REFINE_REL_TOL_3D*eps.
    Per-vertex color is the pair inner product at the vertex.
    """
    vals = fieldv.values
    vmin, vmax = float(vals.min()), float(vals.max())
    if not (vmin < eps < vmax):
        raise ValueError(
            f"eps={eps} is not strictly inside the field range [{vmin}, {vmax}]")
    verts_idx, faces, _, _ = measure.marching_cubes(vals, level=eps,
                                                    method="lorensen",
                                                    allow_degenerate=False)
    # merge duplicate vertices (same grid-edge position is bit-identical)
    uniq, inverse = np.unique(verts_idx, axis=0, return_inverse=True)
    faces = inverse.reshape(-1)[faces]

    nodes = fieldv.params.nodes()
    world = nodes[0] + uniq * (nodes[1] - nodes[0])
    # exact node coordinates where the index is integral
    on_node = np.abs(uniq - np.round(uniq)) <= 1e-9
    for ax in range(3):
        sel = on_node[:, ax]
        world[sel, ax] = nodes[np.round(uniq[sel, ax]).astype(int)]

    if refine_fn is not None:
        world = _refine_on_edges(uniq, world, on_node, nodes, vals, eps, refine_fn)

    # drop degenerate triangles (repeated index or area below 1e-14)
    a = world[faces[:, 0]]
    b = world[faces[:, 1]]
    c = world[faces[:, 2]]
    area2 = np.linalg.norm(np.cross(b - a, c - a), axis=1)
    distinct = ((faces[:, 0] != faces[:, 1]) & (faces[:, 1] != faces[:, 2])
                & (faces[:, 0] != faces[:, 2]))
    faces = faces[distinct & (area2 > 2e-14)]

    colors = inner_values(world[:, 0], world[:, 1], world[:, 2])
    return TriangleMesh(world, faces.astype(int), colors)


def _refine_on_edges(uniq, world, on_node, nodes, vals, eps, refine_fn):
    """Vectorized bisection along each vertex's grid edge."""
    frac_axis = np.argmax(~on_node, axis=1)
    movable = ~np.all(on_node, axis=1)
    idx = np.where(movable)[0]
    if idx.size == 0:
        return world
    ax = frac_axis[idx]
    lo_i = np.floor(uniq[idx, ax]).astype(int)
    hi_i = lo_i + 1

    base = np.round(uniq[idx]).astype(int)
    lo_pt = world[idx].copy()
    hi_pt = world[idx].copy()
    lo_val = np.empty(idx.size)
    for axis in range(3):
        sel = ax == axis
        if not np.any(sel):
            continue
        ci = [base[sel, 0].copy(), base[sel, 1].copy(), base[sel, 2].copy()]
        ci[axis] = lo_i[sel]
        lo_val[sel] = vals[ci[0], ci[1], ci[2]]
        lo_pt[sel, axis] = nodes[lo_i[sel]]
        hi_pt[sel, axis] = nodes[hi_i[sel]]

    tol = REFINE_REL_TOL_3D * eps
    lo_t = np.zeros(idx.size)
    hi_t = np.ones(idx.size)
    # start from the linear-interpolation parameter
    t = (world[idx, ax] - lo_pt[np.arange(idx.size), ax]) / (
        hi_pt[np.arange(idx.size), ax] - lo_pt[np.arange(idx.size), ax])
    flo = lo_val - eps
    pts = lo_pt + t[:, None] * (hi_pt - lo_pt)
    for _ in range(60):
        fv = refine_fn(pts[:, 0], pts[:, 1], pts[:, 2]) - eps
        done = np.abs(fv) <= tol
        if np.all(done):
            break
        same_side = flo * fv > 0.0
        lo_t = np.where(~done & same_side, t, lo_t)
        flo = np.where(~done & same_side, fv, flo)
        hi_t = np.where(~done & ~same_side, t, hi_t)
        t = np.where(done, t, 0.5 * (lo_t + hi_t))
        pts = lo_pt + t[:, None] * (hi_pt - lo_pt)
    world[idx] = pts
    return world


def build_isosurface(params: SliceParams) -> TriangleMesh:
    """Sample the slice volume and extract the refined eps-isosurface."""
    fieldv = sample_volume(params)
    fun = lambda x, y, z: d2_values(x, y, z, params.c)
    return marching_cubes(fieldv, params.eps, refine_fn=fun)


def obj_text(mesh: TriangleMesh) -> str:
    lines = ["# d2 isosurface; per-vertex inner product in the sidecar CSV"]
    for v in mesh.vertices:
        lines.append(f"v {float(v[0])!r} {float(v[1])!r} {float(v[2])!r}")
    for f in mesh.triangles:
        lines.append(f"f {int(f[0]) + 1} {int(f[1]) + 1} {int(f[2]) + 1}")
    return "\n".join(lines) + "\n"


def colors_csv_text(mesh: TriangleMesh) -> str:
    lines = ["vertex_index,inner_product"]
    for i, c in enumerate(mesh.colors):
        lines.append(f"{i},{float(c)!r}")
    return "\n".join(lines) + "\n"
