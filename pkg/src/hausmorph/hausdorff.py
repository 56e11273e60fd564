"""Hausdorff distance between filled polygonal regions.

Region semantics throughout: a point of one shape lying inside the other
contributes distance zero.  This differs from the boundary-to-boundary
Hausdorff distance many libraries compute.

The exact directed distance reuses the Voronoi partition: within a vertex
cell the distance to the site is convex, within an edge cell it is convex
along every line, so on each polygonal piece the maximum is attained at a
piece vertex, and piece vertices include every crossing of the source
boundary with a cell boundary.  A brute-force sampling oracle is provided
for tests.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import shapely

from ._vector import edge_array, min_distance_to_shape
from .booleans import to_shapely
from .errors import EmptyShapeError
from .shapes import Point, Shape
from .voronoi import DEFAULT_ARC_TOLERANCE, SiteKind, build_partition


@dataclass(frozen=True)
class HausdorffResult:
    distance: float
    witness_source: Point
    witness_target: Point


def _site_nearest(p: Point, site) -> Point:
    if site.kind is SiteKind.VERTEX:
        return site.vertex
    a, b = site.edge
    abx, aby = b.x - a.x, b.y - a.y
    t = ((p.x - a.x) * abx + (p.y - a.y) * aby) / (abx * abx + aby * aby)
    t = 0.0 if t < 0.0 else (1.0 if t > 1.0 else t)
    return Point(a.x + t * abx, a.y + t * aby)


def directed_hausdorff(a: Shape, b: Shape,
                       arc_tolerance: float = DEFAULT_ARC_TOLERANCE) -> HausdorffResult:
    """sup over points of a of the distance to b, with witness points."""
    if a.is_empty or b.is_empty:
        raise EmptyShapeError("hausdorff distance needs non-empty shapes")
    partition = build_partition(a, b, arc_tolerance)
    best_d = -1.0
    best_src = None
    best_tgt = None
    for piece in partition.pieces:
        if piece.site.kind is SiteKind.INTERIOR:
            continue
        for ring in piece.geometry.rings():
            for v in ring.vertices:
                tgt = _site_nearest(v, piece.site)
                d = math.hypot(v.x - tgt.x, v.y - tgt.y)
                if d > best_d or (d == best_d and (v.x, v.y) < (best_src.x, best_src.y)):
                    best_d = d
                    best_src = v
                    best_tgt = tgt
    if best_src is None or best_d <= 0.0:
        # a lies inside b: any point of a is its own witness
        src = min((v for ring in a.rings() for v in ring.vertices))
        from .voronoi import closest_point
        return HausdorffResult(0.0, src, closest_point(src, b))
    return HausdorffResult(best_d, best_src, best_tgt)


def hausdorff(a: Shape, b: Shape,
              arc_tolerance: float = DEFAULT_ARC_TOLERANCE) -> HausdorffResult:
    """Undirected Hausdorff distance: the larger directed one (ties: a to b)."""
    ab = directed_hausdorff(a, b, arc_tolerance)
    ba = directed_hausdorff(b, a, arc_tolerance)
    return ab if ab.distance >= ba.distance else ba


def _boundary_samples(shape: Shape, spacing: float) -> np.ndarray:
    pts = []
    for ring in shape.rings():
        for p, q in ring.edges():
            length = math.hypot(q.x - p.x, q.y - p.y)
            steps = max(1, math.ceil(length / spacing))
            for k in range(steps):
                t = k / steps
                pts.append((p.x + t * (q.x - p.x), p.y + t * (q.y - p.y)))
    return np.asarray(pts, dtype=float)


def _interior_samples(shape: Shape, spacing: float) -> np.ndarray:
    minx, miny, maxx, maxy = shape.bounds()
    xs = np.arange(minx, maxx + spacing, spacing)
    ys = np.arange(miny, maxy + spacing, spacing)
    gx, gy = np.meshgrid(xs, ys)
    pts = np.column_stack([gx.ravel(), gy.ravel()])
    mask = shapely.contains_xy(to_shapely(shape), pts[:, 0], pts[:, 1])
    return pts[mask]


def _directed_estimate(src: Shape, dst: Shape, spacing: float) -> float:
    samples = np.concatenate([_boundary_samples(src, spacing), _interior_samples(src, spacing)])
    if len(samples) == 0:
        return 0.0
    dists = min_distance_to_shape(samples, edge_array(dst))
    inside = shapely.contains_xy(to_shapely(dst), samples[:, 0], samples[:, 1])
    dists[inside] = 0.0
    return float(dists.max())


def hausdorff_oracle(a: Shape, b: Shape, sample_spacing: float) -> float:
    """Brute-force estimate from boundary and grid samples; within O(spacing)
    of the true value.  Test code only."""
    if sample_spacing <= 0:
        raise ValueError("sample_spacing must be positive")
    if a.is_empty or b.is_empty:
        raise EmptyShapeError("hausdorff oracle needs non-empty shapes")
    return max(_directed_estimate(a, b, sample_spacing),
               _directed_estimate(b, a, sample_spacing))
