"""Planar shape model: polygons with holes, basic measures, affine transforms.

A ``Shape`` is a set of polygons with holes representing a compact region
of the plane.  Rings never repeat their first vertex; orientation encodes
the ring's role (outer boundaries counterclockwise, holes clockwise) and is
normalized on construction.  All objects are immutable values, so they are
safe to share across threads and to use as dictionary keys.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterator, NamedTuple

from .errors import EmptyShapeError, ShapeError, ValidationError


class Point(NamedTuple):
    x: float
    y: float


def _shoelace(vertices) -> float:
    total = 0.0
    n = len(vertices)
    for i in range(n):
        x1, y1 = vertices[i]
        x2, y2 = vertices[(i + 1) % n]
        total += x1 * y2 - x2 * y1
    return 0.5 * total


@dataclass(frozen=True)
class Ring:
    """A simple closed polyline; the closing edge back to the first vertex is implicit."""

    vertices: tuple[Point, ...]

    def __post_init__(self):
        if len(self.vertices) < 3:
            raise ShapeError(f"ring needs at least 3 vertices, got {len(self.vertices)}")
        verts = tuple(Point(float(x), float(y)) for x, y in self.vertices)
        for x, y in verts:
            if not (math.isfinite(x) and math.isfinite(y)):
                raise ShapeError(f"non-finite coordinate ({x}, {y})")
        n = len(verts)
        for i in range(n):
            if verts[i] == verts[(i + 1) % n]:
                raise ShapeError(f"consecutive equal vertices at index {i}")
        object.__setattr__(self, "vertices", verts)

    @property
    def signed_area(self) -> float:
        return _shoelace(self.vertices)

    @property
    def length(self) -> float:
        total = 0.0
        n = len(self.vertices)
        for i in range(n):
            x1, y1 = self.vertices[i]
            x2, y2 = self.vertices[(i + 1) % n]
            total += math.hypot(x2 - x1, y2 - y1)
        return total

    def reversed(self) -> "Ring":
        return Ring(tuple(reversed(self.vertices)))

    def edges(self) -> Iterator[tuple[Point, Point]]:
        n = len(self.vertices)
        for i in range(n):
            yield self.vertices[i], self.vertices[(i + 1) % n]


@dataclass(frozen=True)
class PolygonWithHoles:
    """One outer ring plus zero or more hole rings.

    Construction normalizes orientations: outer counterclockwise, holes
    clockwise.  Zero-area rings are rejected because they cannot be oriented.
    """

    outer: Ring
    holes: tuple[Ring, ...] = ()

    def __post_init__(self):
        outer = self.outer
        if outer.signed_area == 0.0:
            raise ShapeError("zero-area outer ring")
        if outer.signed_area < 0.0:
            outer = outer.reversed()
        holes = []
        for hole in self.holes:
            if hole.signed_area == 0.0:
                raise ShapeError("zero-area hole ring")
            holes.append(hole if hole.signed_area < 0.0 else hole.reversed())
        object.__setattr__(self, "outer", outer)
        object.__setattr__(self, "holes", tuple(holes))

    @property
    def area(self) -> float:
        return self.outer.signed_area + sum(h.signed_area for h in self.holes)

    def rings(self) -> Iterator[Ring]:
        yield self.outer
        yield from self.holes


@dataclass(frozen=True)
class Shape:
    """A compact region: zero or more interior-disjoint polygons with holes."""

    polygons: tuple[PolygonWithHoles, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "polygons", tuple(self.polygons))

    @classmethod
    def empty(cls) -> "Shape":
        return cls(())

    @property
    def is_empty(self) -> bool:
        return not self.polygons

    def rings(self) -> Iterator[Ring]:
        for poly in self.polygons:
            yield from poly.rings()

    def bounds(self) -> tuple[float, float, float, float]:
        if self.is_empty:
            raise EmptyShapeError("empty shape has no bounds")
        xs = [p.x for ring in self.rings() for p in ring.vertices]
        ys = [p.y for ring in self.rings() for p in ring.vertices]
        return min(xs), min(ys), max(xs), max(ys)


@dataclass(frozen=True)
class Measurements:
    area: float
    perimeter: float
    components: int
    holes: int


def polygon_shape(outer, holes=()) -> Shape:
    """Build a single-polygon Shape from coordinate sequences (no deep validation)."""
    return Shape((PolygonWithHoles(
        Ring(tuple(Point(*p) for p in outer)),
        tuple(Ring(tuple(Point(*p) for p in h)) for h in holes),
    ),))


def rectangle(minx, miny, maxx, maxy) -> Shape:
    if not (maxx > minx and maxy > miny):
        raise ShapeError("rectangle needs positive extent")
    return polygon_shape([(minx, miny), (maxx, miny), (maxx, maxy), (minx, maxy)])


def measure(shape: Shape, min_feature_area: float = 1e-6) -> Measurements:
    """Area, perimeter, component count and hole count of a shape.

    Components whose net area is at most ``min_feature_area`` are dropped
    entirely; within retained components, holes of absolute area at most
    ``min_feature_area`` are ignored.  Dropped features contribute nothing to
    any of the four values, which suppresses spurious slivers produced by
    floating-point noise.
    """
    if min_feature_area < 0:
        raise ShapeError("min_feature_area must be >= 0")
    area = 0.0
    perimeter = 0.0
    components = 0
    holes = 0
    for poly in shape.polygons:
        if poly.area <= min_feature_area:
            continue
        components += 1
        area += poly.outer.signed_area
        perimeter += poly.outer.length
        for hole in poly.holes:
            if -hole.signed_area <= min_feature_area:
                continue
            holes += 1
            area += hole.signed_area
            perimeter += hole.length
    return Measurements(area=area, perimeter=perimeter, components=components, holes=holes)


def centroid(shape: Shape) -> Point:
    """Area-weighted centroid of the region (holes subtract)."""
    if shape.is_empty:
        raise EmptyShapeError("centroid of empty shape")
    total_area = 0.0
    cx = 0.0
    cy = 0.0
    for ring in shape.rings():
        verts = ring.vertices
        n = len(verts)
        for i in range(n):
            x1, y1 = verts[i]
            x2, y2 = verts[(i + 1) % n]
            cross = x1 * y2 - x2 * y1
            cx += (x1 + x2) * cross
            cy += (y1 + y2) * cross
        total_area += ring.signed_area
    if total_area <= 0.0:
        raise EmptyShapeError("centroid of zero-area shape")
    return Point(cx / (6.0 * total_area), cy / (6.0 * total_area))


def transform(shape: Shape, translation=(0.0, 0.0), scale_factor=1.0,
              scale_center=Point(0.0, 0.0)) -> Shape:
    """Uniform scale about ``scale_center`` followed by a translation."""
    if scale_factor <= 0:
        raise ShapeError("scale_factor must be positive")
    tx, ty = translation
    cx, cy = scale_center

    def mapped(ring: Ring) -> Ring:
        return Ring(tuple(
            Point(cx + scale_factor * (p.x - cx) + tx, cy + scale_factor * (p.y - cy) + ty)
            for p in ring.vertices))

    return Shape(tuple(
        PolygonWithHoles(mapped(poly.outer), tuple(mapped(h) for h in poly.holes))
        for poly in shape.polygons))


def validate(shape: Shape) -> None:
    """Deep validation: ring simplicity and nesting.

    Raises :class:`ValidationError` carrying the offending ring index.  This
    is intentionally separate from construction; boolean-kernel outputs are
    trusted (the backing library guarantees validity) while parsed input is
    always run through here.
    """
    import shapely

    ring_index = 0
    shapely_polys = []
    for poly in shape.polygons:
        outer_idx = ring_index
        for ring in poly.rings():
            coords = [(p.x, p.y) for p in ring.vertices]
            sp = shapely.Polygon(coords)
            if not sp.is_valid:
                raise ValidationError("self-intersecting ring", ring_index)
            ring_index += 1
        outer_sp = shapely.Polygon([(p.x, p.y) for p in poly.outer.vertices])
        hole_sps = [shapely.Polygon([(p.x, p.y) for p in h.vertices]) for h in poly.holes]
        for j, hole_sp in enumerate(hole_sps):
            if not shapely.contains_properly(outer_sp, hole_sp):
                raise ValidationError("hole not strictly inside outer ring", outer_idx + 1 + j)
            for k in range(j):
                if hole_sps[k].intersection(hole_sp).area > 0:
                    raise ValidationError("overlapping holes", outer_idx + 1 + j)
        shapely_polys.append(shapely.Polygon(
            [(p.x, p.y) for p in poly.outer.vertices],
            [[(p.x, p.y) for p in h.vertices] for h in poly.holes]))
    for i in range(len(shapely_polys)):
        for j in range(i + 1, len(shapely_polys)):
            if shapely_polys[i].intersection(shapely_polys[j]).area > 0:
                raise ValidationError(f"overlapping polygons {i} and {j}", None)
