"""Regularized boolean operations and disk-based morphology on shapes.

Set operations are delegated to shapely (GEOS) behind the Shape data model;
results are regularized, meaning only positive-area parts survive.  Disk
dilation is an explicit Minkowski sum with a regular polygon inscribed in
the disk, so its approximation error is one-sided (the result never
overshoots the true disk dilation) and bounded by ``DiskApprox.error_bound``.
Erosion is dilation of the complement, clipped to a sufficiently expanded
bounding box.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import shapely

from .errors import GeometryError, ShapeError
from .shapes import Point, PolygonWithHoles, Ring, Shape, rectangle

# Snap tolerance: overlay operations snap-round their output to this grid,
# which merges vertices closer than the tolerance and keeps every overlay on
# the robust code path.  Ring extraction then only needs to drop coincident
# consecutive vertices; rings below the area floor are dropped outright.
SNAP_TOLERANCE = 1e-9
_DEDUPE = 1e-12
MIN_RING_AREA = 1e-12


def polygonal(geom):
    """Strip a geometry to its polygonal parts.

    Overlays of regions with coincident boundaries return mixed collections
    containing stray lines or points (snap rounding can also collapse a
    sliver to a line); feeding those into further overlays is an error, so
    every intermediate result is regularized through here.
    """
    if geom.is_empty or isinstance(geom, (shapely.Polygon, shapely.MultiPolygon)):
        return geom
    polys = []
    stack = [geom]
    while stack:
        g = stack.pop()
        if isinstance(g, shapely.Polygon):
            if not g.is_empty:
                polys.append(g)
        elif hasattr(g, "geoms"):
            stack.extend(g.geoms)
    if not polys:
        return shapely.Polygon()
    if len(polys) == 1:
        return polys[0]
    return shapely.MultiPolygon(polys)


def snapped_intersection(a, b):
    return polygonal(shapely.intersection(a, b, grid_size=SNAP_TOLERANCE))


def snapped_union(a, b):
    return polygonal(shapely.union(a, b, grid_size=SNAP_TOLERANCE))


def snapped_difference(a, b):
    return polygonal(shapely.difference(a, b, grid_size=SNAP_TOLERANCE))


@dataclass(frozen=True)
class DiskApprox:
    """A disk of given radius approximated by an inscribed regular polygon.

    One vertex sits on the positive x-axis.  ``segments`` must be even and
    at least 8; with k segments the polygon stays within
    ``radius * (1 - cos(pi / k))`` of the true disk boundary.
    """

    radius: float
    segments: int = 64

    def __post_init__(self):
        if self.radius < 0:
            raise ShapeError("disk radius must be >= 0")
        if self.segments < 8 or self.segments % 2 != 0:
            raise ShapeError("disk segments must be even and >= 8")

    def error_bound(self) -> float:
        return self.radius * (1.0 - math.cos(math.pi / self.segments))

    def offsets(self) -> np.ndarray:
        angles = 2.0 * math.pi * np.arange(self.segments) / self.segments
        return self.radius * np.column_stack([np.cos(angles), np.sin(angles)])


def tree_union(geoms):
    """Union a list of geometries by a balanced tree of binary unions.

    The cascaded union in this GEOS build can silently drop components for
    certain inputs with coincident boundaries, and so can the plain binary
    overlay; the snap-rounding overlay (grid_size equal to the kernel snap
    tolerance) is robust, so unions are composed pairwise from it.  An area
    lower bound guards against any remaining silent loss.
    """
    geoms = [g for g in geoms if g is not None and not g.is_empty]
    if not geoms:
        return shapely.Polygon()
    floor = max(g.area for g in geoms)
    while len(geoms) > 1:
        merged = []
        for i in range(0, len(geoms) - 1, 2):
            merged.append(snapped_union(geoms[i], geoms[i + 1]))
        if len(geoms) % 2:
            merged.append(geoms[-1])
        geoms = merged
    result = geoms[0]
    if result.area < floor - 1e-9:
        raise GeometryError("union lost area: result smaller than largest input")
    return result


def to_shapely(shape: Shape) -> shapely.MultiPolygon:
    polys = [
        shapely.Polygon(
            [(p.x, p.y) for p in poly.outer.vertices],
            [[(p.x, p.y) for p in h.vertices] for h in poly.holes],
        )
        for poly in shape.polygons
    ]
    return shapely.MultiPolygon(polys)


def _clean_ring(coords, snap: float):
    pts = []
    for x, y in coords:
        if pts and (x - pts[-1][0]) ** 2 + (y - pts[-1][1]) ** 2 < snap * snap:
            continue
        pts.append((x, y))
    while len(pts) > 1 and (pts[0][0] - pts[-1][0]) ** 2 + (pts[0][1] - pts[-1][1]) ** 2 < snap * snap:
        pts.pop()
    return pts


def from_shapely(geom, snap: float = _DEDUPE) -> Shape:
    """Convert any shapely geometry to a Shape, keeping only polygonal parts."""
    polys = []
    for sp in _iter_polygons(geom):
        ring = _clean_ring(sp.exterior.coords, snap)
        if len(ring) < 3 or abs(_ring_area(ring)) <= MIN_RING_AREA:
            continue
        holes = []
        for interior in sp.interiors:
            hole = _clean_ring(interior.coords, snap)
            if len(hole) < 3 or abs(_ring_area(hole)) <= MIN_RING_AREA:
                continue
            holes.append(Ring(tuple(Point(*p) for p in hole)))
        polys.append(PolygonWithHoles(Ring(tuple(Point(*p) for p in ring)), tuple(holes)))
    polys.sort(key=lambda p: (p.outer.vertices[0].x, p.outer.vertices[0].y))
    return Shape(tuple(polys))


def _iter_polygons(geom):
    if geom.is_empty:
        return
    if isinstance(geom, shapely.Polygon):
        yield geom
    elif isinstance(geom, (shapely.MultiPolygon, shapely.GeometryCollection)):
        for g in geom.geoms:
            yield from _iter_polygons(g)
    # points and lines are degenerate under regularized semantics: dropped


def _ring_area(coords) -> float:
    total = 0.0
    n = len(coords)
    for i in range(n):
        x1, y1 = coords[i]
        x2, y2 = coords[(i + 1) % n]
        total += x1 * y2 - x2 * y1
    return 0.5 * total


def intersect(a: Shape, b: Shape) -> Shape:
    return from_shapely(snapped_intersection(to_shapely(a), to_shapely(b)))


def union(a: Shape, b: Shape) -> Shape:
    return from_shapely(snapped_union(to_shapely(a), to_shapely(b)))


def difference(a: Shape, b: Shape) -> Shape:
    return from_shapely(snapped_difference(to_shapely(a), to_shapely(b)))


def dilate(s: Shape, disk: DiskApprox) -> Shape:
    """Minkowski sum of a shape with the disk's inscribed polygon.

    For a convex structuring element containing the origin the sum equals
    the shape itself united with the element swept along every boundary
    edge, which keeps the construction exact for the polygonal disk.
    """
    if s.is_empty or disk.radius == 0.0:
        return s
    offsets = disk.offsets()
    pieces = [to_shapely(s)]
    for ring in s.rings():
        verts = ring.vertices
        n = len(verts)
        for i in range(n):
            p, q = verts[i], verts[(i + 1) % n]
            cloud = np.concatenate([offsets + (p.x, p.y), offsets + (q.x, q.y)])
            pieces.append(shapely.MultiPoint(cloud).convex_hull)
    return from_shapely(tree_union(pieces))


def erode(s: Shape, disk: DiskApprox) -> Shape:
    """Complement-dilate-complement, with the complement clipped to an
    expanded bounding box so the clip can never influence the result."""
    if s.is_empty or disk.radius == 0.0:
        return s
    minx, miny, maxx, maxy = s.bounds()
    pad = 2.0 * disk.radius
    box = rectangle(minx - pad, miny - pad, maxx + pad, maxy + pad)
    complement = difference(box, s)
    grown = dilate(complement, disk)
    return difference(box, grown)


def closing(s: Shape, disk: DiskApprox) -> Shape:
    """Dilation followed by erosion with the same disk; closes gaps narrower
    than the disk diameter."""
    return erode(dilate(s, disk), disk)


def shape_area(s: Shape) -> float:
    return sum(p.area for p in s.polygons)
