"""Compact convex planar sets represented by sampled support functions.

A region is stored as support values h_j on the uniform direction grid
theta_j = 2*pi*j/m together with the polygon obtained by intersecting the
halfplanes {Re(e^{-i theta_j} z) <= h_j}.  Regions are kept canonical:
each stored h_j equals the maximum of Re(e^{-i theta_j} v) over the
polygon vertices.  Canonicalization, emptiness detection, and degenerate
(point or segment) regions are all handled through one code path built on
a Chebyshev-center linear program and a polar-dual convex hull.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.optimize import linprog
from scipy.spatial import ConvexHull

# Inscribed-ball radius below which (relative to the support scale) a
# region is treated as a point or segment: thinner slivers would make the
# polygon's vertex intersections ill-conditioned, while collapsing them
# costs at most the sliver width in support accuracy.
_DEGENERATE_TOL = 1e-8
# Relative infeasibility below which noisy-but-consistent samples are
# inflated instead of rejected as empty.
_EMPTY_TOL = 1e-9


class RegionEmptyError(ValueError):
    """The halfplane family has empty intersection (inconsistent samples)."""


@dataclass(frozen=True)
class DiskSpec:
    """Closed disk {z : |z - center| <= radius}."""

    center: complex
    radius: float

    def __post_init__(self):
        if not np.isfinite(self.center) or not np.isfinite(self.radius):
            raise ValueError("disk parameters must be finite")
        if self.radius < 0:
            raise ValueError("disk radius must be nonnegative")


def as_point_cloud(points) -> np.ndarray:
    """Validate a nonempty cloud of finite complex points."""
    p = np.atleast_1d(np.asarray(points, dtype=complex)).ravel()
    if p.size == 0:
        raise ValueError("point cloud is empty")
    if not np.all(np.isfinite(p)):
        raise ValueError("point cloud has non-finite entries")
    return p


def directions(m: int) -> np.ndarray:
    """Angles theta_j = 2*pi*j/m of the uniform direction grid."""
    return 2.0 * np.pi * np.arange(m) / m


def _direction_matrix(m: int) -> np.ndarray:
    th = directions(m)
    return np.column_stack([np.cos(th), np.sin(th)])


@dataclass(frozen=True)
class SupportRegion:
    """Canonical sampled-support representation of a compact convex set.

    ``support[j]`` is the support value at theta_j = 2*pi*j/m and
    ``vertices`` is the (possibly degenerate) polygon of the halfplane
    intersection, counterclockwise, as an (V, 2) array of (x, y) rows.
    """

    support: np.ndarray
    vertices: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "support", np.asarray(self.support, dtype=float))
        object.__setattr__(self, "vertices", np.asarray(self.vertices, dtype=float))

    @property
    def m(self) -> int:
        return self.support.shape[0]

    @property
    def directions(self) -> np.ndarray:
        return directions(self.m)

    @property
    def vertices_complex(self) -> np.ndarray:
        return self.vertices[:, 0] + 1j * self.vertices[:, 1]

    def diameter(self) -> float:
        """Largest width across the region: max_j (h_j + h_{j+m/2})."""
        h = self.support
        return float(np.max(h + np.roll(h, -(self.m // 2))))

    def contains(self, points, slack: float = 0.0) -> bool:
        """Whether every point satisfies all supporting halfplanes up to slack."""
        p = as_point_cloud(points)
        d = _direction_matrix(self.m)
        vals = d @ np.vstack([p.real, p.imag])
        return bool(np.all(vals <= self.support[:, None] + slack))


def _chebyshev_center(d: np.ndarray, h: np.ndarray):
    """Largest inscribed-ball radius and its center for {x : d x <= h}."""
    m = d.shape[0]
    a_ub = np.column_stack([d, np.ones(m)])
    res = linprog(
        c=[0.0, 0.0, -1.0],
        A_ub=a_ub,
        b_ub=h,
        bounds=[(None, None)] * 3,
        method="highs",
    )
    if not res.success:
        raise RuntimeError(f"halfplane feasibility LP failed: {res.message}")
    return float(res.x[2]), np.array(res.x[:2])


def _extreme_point(d: np.ndarray, h: np.ndarray, c: np.ndarray) -> np.ndarray:
    """A maximizer of c.x over {x : d x <= h} (assumed nonempty, bounded)."""
    res = linprog(
        c=-c, A_ub=d, b_ub=h, bounds=[(None, None)] * 2, method="highs"
    )
    if not res.success:
        raise RuntimeError(f"support LP failed: {res.message}")
    return np.array(res.x)


def _dedupe_ring(verts: np.ndarray, tol: float) -> np.ndarray:
    if len(verts) <= 1:
        return verts
    keep = [0]
    for i in range(1, len(verts)):
        if np.max(np.abs(verts[i] - verts[keep[-1]])) > tol:
            keep.append(i)
    if len(keep) > 1 and np.max(np.abs(verts[keep[-1]] - verts[keep[0]])) <= tol:
        keep.pop()
    return verts[keep]


def _polygon_from_interior(d, h, x0, tol):
    # Polar dual: with x0 interior, constraint normals scaled by the slack
    # h' = h - d.x0 > 0 dualize to points whose convex hull edges are the
    # nonredundant adjacent constraint pairs; each edge maps back to a
    # primal vertex.
    hp = h - d @ x0
    pts = d / hp[:, None]
    hull = ConvexHull(pts)
    idx = hull.vertices  # counterclockwise for 2-D
    verts = []
    for a, b in zip(idx, np.roll(idx, -1)):
        mat = np.array([d[a], d[b]])
        rhs = np.array([hp[a], hp[b]])
        det = mat[0, 0] * mat[1, 1] - mat[0, 1] * mat[1, 0]
        v = np.array(
            [
                (rhs[0] * mat[1, 1] - rhs[1] * mat[0, 1]) / det,
                (mat[0, 0] * rhs[1] - mat[1, 0] * rhs[0]) / det,
            ]
        )
        verts.append(v + x0)
    return _dedupe_ring(np.array(verts), tol)


def _canonicalize(samples: np.ndarray):
    h = np.asarray(samples, dtype=float)
    m = h.shape[0]
    if h.ndim != 1 or m < 4:
        raise ValueError("need at least 4 support samples on the uniform grid")
    if not np.all(np.isfinite(h)):
        raise ValueError("support samples must be finite")
    d = _direction_matrix(m)
    scale = 1.0 + float(np.abs(h).max())
    radius, x0 = _chebyshev_center(d, h)
    if radius < -_EMPTY_TOL * scale:
        raise RegionEmptyError(
            f"support samples bound an empty region (margin {radius:.3e})"
        )
    tol = 1e-12 * scale
    if radius > _DEGENERATE_TOL * scale:
        verts = _polygon_from_interior(d, h, x0, tol)
    else:
        # Point or segment: inflate away any sub-tolerance infeasibility and
        # read the endpoints off axis-aligned support LPs.
        inflation = max(0.0, -radius) + tol
        h_feas = h + inflation
        ends = []
        spans = []
        for axis in (np.array([1.0, 0.0]), np.array([0.0, 1.0])):
            hi = _extreme_point(d, h_feas, axis)
            lo = _extreme_point(d, h_feas, -axis)
            ends.append((lo, hi))
            spans.append(float(axis @ (hi - lo)))
        if max(spans) <= 8 * inflation:
            verts = np.array([x0])
        else:
            lo, hi = ends[int(np.argmax(spans))]
            verts = _dedupe_ring(np.array([lo, hi]), tol)
    h_canon = np.max(d @ verts.T, axis=1)
    return np.minimum(h, h_canon), verts


def region_from_supports(samples) -> SupportRegion:
    """Canonicalize raw support samples into a SupportRegion.

    Raises RegionEmptyError when the halfplane intersection is empty.  The
    stored support values are tightened to the polygon they bound, so
    applying this to an already canonical region returns it unchanged up
    to roundoff.
    """
    h, verts = _canonicalize(samples)
    return SupportRegion(h, verts)


def _trusted_region(h: np.ndarray) -> SupportRegion:
    """Region from samples known to be support values of a convex set.

    The stored supports are kept bit-exact; only the polygon is derived.
    """
    _, verts = _canonicalize(h)
    return SupportRegion(np.asarray(h, dtype=float), verts)


def _check_same_grid(a: SupportRegion, b: SupportRegion):
    if a.m != b.m:
        raise ValueError(f"direction grids differ: {a.m} vs {b.m}")


def hausdorff(a: SupportRegion, b: SupportRegion) -> float:
    """Hausdorff distance between convex regions on the same grid.

    For convex compact sets this equals the max support difference over
    directions, up to O((pi/m)^2 * diam) grid error.
    """
    _check_same_grid(a, b)
    return float(np.max(np.abs(a.support - b.support)))


def minkowski_sum(a: SupportRegion, b: SupportRegion) -> SupportRegion:
    """Minkowski sum; support values add coordinate-wise."""
    _check_same_grid(a, b)
    return _trusted_region(a.support + b.support)


def negate(a: SupportRegion) -> SupportRegion:
    """The reflected region -A; a grid rotation by half a turn (m even)."""
    if a.m % 2 != 0:
        raise ValueError("negate requires an even number of directions")
    h = np.roll(a.support, -(a.m // 2))
    return SupportRegion(h, -a.vertices[::-1])


def intersect_disks(disks, m: int) -> SupportRegion:
    """Outer polygon of the intersection of closed disks.

    Each disk is replaced by its circumscribed m-gon (tangent halfplanes at
    the grid directions), so the result contains the true intersection; the
    overshoot is at most (sec(pi/m) - 1) times the largest radius.
    """
    disks = list(disks)
    if not disks:
        raise ValueError("need at least one disk")
    th = directions(m)
    h = np.full(m, np.inf)
    for disk in disks:
        if not isinstance(disk, DiskSpec):
            disk = DiskSpec(complex(disk[0]), float(disk[1]))
        z, r = complex(disk.center), float(disk.radius)
        h = np.minimum(h, z.real * np.cos(th) + z.imag * np.sin(th) + r)
    return region_from_supports(h)


def hull_of_points(points, m: int) -> SupportRegion:
    """Convex hull of a point cloud as a SupportRegion.

    Stored support values are the exact maxima of Re(e^{-i theta_j} p).
    """
    p = as_point_cloud(points)
    return _trusted_region(cloud_supports(p, m))


def cloud_supports(points, m: int) -> np.ndarray:
    """max_p Re(e^{-i theta_j} p) for each grid direction."""
    p = as_point_cloud(points)
    d = _direction_matrix(m)
    return np.max(d @ np.vstack([p.real, p.imag]), axis=1)
