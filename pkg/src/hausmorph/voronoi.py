"""Voronoi partition of one shape by the features of another.

The features of a shape are its ring vertices, its open edges and its
interior.  Partitioning shape A by shape B splits A into pieces that share
a single closest feature of B: pieces of the overlap A ∩ B carry the
interior feature and never move; pieces of A outside B are cut by the
Voronoi diagram of B's boundary features.

Cells are built directly as intersections of pairwise dominance regions
(the locus where one feature is at least as close as another).  Dominance
boundaries between two vertices or two edge lines are straight and handled
exactly; between a vertex and an edge line they are parabolic and are
discretized into chords whose sagitta never exceeds ``arc_tolerance``.
Because the discretized boundary of a pair is constructed once and shared
by both sides, neighbouring cells tile the clipping box exactly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np
import shapely

from ._vector import points_to_segments
from .booleans import (from_shapely, polygonal as _only_polygons,
                       snapped_difference, snapped_intersection, to_shapely,
                       tree_union)
from .errors import EmptyShapeError, GeometryError, ShapeError
from .shapes import Point, PolygonWithHoles, Ring, Shape

DEFAULT_ARC_TOLERANCE = 1e-4

# Slivers below this area are discarded before pieces are created or scaled.
_SLIVER_AREA = 1e-12
# Degeneracy cutoff for a focus sitting on its directrix line.
_FLAT_PARABOLA = 1e-12


class SiteKind(Enum):
    VERTEX = "vertex"
    EDGE = "edge"
    INTERIOR = "interior"


@dataclass(frozen=True)
class Site:
    """A Voronoi feature of a shape: one vertex, one open edge, or the interior."""

    kind: SiteKind
    vertex: Point | None = None
    edge: tuple[Point, Point] | None = None

    def __post_init__(self):
        if self.kind is SiteKind.VERTEX and self.vertex is None:
            raise ShapeError("vertex site needs a vertex")
        if self.kind is SiteKind.EDGE:
            if self.edge is None or self.edge[0] == self.edge[1]:
                raise ShapeError("edge site needs two distinct endpoints")

    def describe(self) -> str:
        if self.kind is SiteKind.VERTEX:
            return f"vertex {self.vertex.x} {self.vertex.y}"
        if self.kind is SiteKind.EDGE:
            (p, q) = self.edge
            return f"edge {p.x} {p.y} {q.x} {q.y}"
        return "interior"


@dataclass(frozen=True)
class Piece:
    """A region of the partitioned shape together with its closest feature."""

    geometry: PolygonWithHoles
    site: Site


@dataclass(frozen=True)
class Partition:
    pieces: tuple[Piece, ...]
    source: Shape
    target: Shape
    arc_tolerance: float


def feature_sites(shape: Shape) -> list[Site]:
    """All features of a shape: one site per distinct ring vertex, one per
    ring edge, and a single interior site."""
    sites: list[Site] = []
    seen: set[tuple[float, float]] = set()
    for poly in shape.polygons:
        for ring in poly.rings():
            for v in ring.vertices:
                key = (v.x, v.y)
                if key not in seen:
                    seen.add(key)
                    sites.append(Site(SiteKind.VERTEX, vertex=v))
            for p, q in ring.edges():
                sites.append(Site(SiteKind.EDGE, edge=(p, q)))
    sites.append(Site(SiteKind.INTERIOR))
    return sites


def closest_point(p: Point, shape: Shape) -> Point:
    """The point of the (filled) shape nearest to p.

    Returns p itself when p lies inside the shape.  Among equidistant
    boundary points the one earliest in (polygon, ring, edge, parameter)
    order wins; any choice would be geometrically valid.
    """
    if shape.is_empty:
        raise EmptyShapeError("closest_point on empty shape")
    if shapely.covers(to_shapely(shape), shapely.Point(p)):
        return Point(p.x, p.y)
    best_d2 = math.inf
    best = None
    for poly in shape.polygons:
        for ring in poly.rings():
            for a, b in ring.edges():
                abx, aby = b.x - a.x, b.y - a.y
                denom = abx * abx + aby * aby
                t = ((p.x - a.x) * abx + (p.y - a.y) * aby) / denom
                t = 0.0 if t < 0.0 else (1.0 if t > 1.0 else t)
                nx, ny = a.x + t * abx, a.y + t * aby
                d2 = (p.x - nx) ** 2 + (p.y - ny) ** 2
                if d2 < best_d2:
                    best_d2 = d2
                    best = Point(nx, ny)
    return best


# ---------------------------------------------------------------------------
# dominance-region construction


def _clip_halfplane(coords, a, b, c):
    """Sutherland-Hodgman clip of a polygon to the side {a x + b y + c <= 0}."""
    if not coords:
        return []
    out = []
    px, py = coords[-1]
    fp = a * px + b * py + c
    for cx, cy in coords:
        fc = a * cx + b * cy + c
        if fp <= 0.0:
            out.append((px, py))
            if fc > 0.0:
                t = fp / (fp - fc)
                out.append((px + t * (cx - px), py + t * (cy - py)))
        elif fc <= 0.0:
            t = fp / (fp - fc)
            out.append((px + t * (cx - px), py + t * (cy - py)))
        px, py, fp = cx, cy, fc
    return out


def _poly_or_empty(coords):
    if len(coords) < 3:
        return shapely.Polygon()
    return shapely.Polygon(coords)


def _edge_line(p: Point, q: Point):
    """Unit-normal line (a, b, c) through the edge, plus direction and length."""
    dx, dy = q.x - p.x, q.y - p.y
    length = math.hypot(dx, dy)
    ux, uy = dx / length, dy / length
    a, b = -uy, ux
    c = -(a * p.x + b * p.y)
    return a, b, c, ux, uy, length


def _parabola_us(f: float, u0: float, u1: float, tol: float) -> list:
    """Sample abscissas so each chord of w = u^2 / (4 f) deviates at most tol."""
    us = [u0]
    stack = [(u0, u1)]
    limit = 1 << 22
    while stack:
        a, b = stack.pop()
        slope = (a + b) / (4.0 * f)
        dev = (b - a) ** 2 / (16.0 * f) / math.sqrt(1.0 + slope * slope)
        if dev <= tol or (b - a) < 1e-9 or len(us) > limit:
            us.append(b)
        else:
            m = 0.5 * (a + b)
            stack.append((m, b))
            stack.append((a, m))
    return us


class _VoronoiCells:
    """Lazy cell constructor for a fixed set of vertex/edge sites.

    Cells are clipped to a box that must contain everything the caller will
    intersect them with.  The box only bounds the construction; which side
    of every bisector a point falls on does not depend on it.
    """

    def __init__(self, sites, bounds, arc_tolerance):
        self.sites = sites
        self.tol = arc_tolerance
        minx, miny, maxx, maxy = bounds
        self.box_coords = [(minx, miny), (maxx, miny), (maxx, maxy), (minx, maxy)]
        self.box_poly = shapely.Polygon(self.box_coords)
        self.diag = math.hypot(maxx - minx, maxy - miny)
        rows = []
        geoms = []
        for s in sites:
            if s.kind is SiteKind.VERTEX:
                v = s.vertex
                rows.append((v.x, v.y, v.x, v.y))
                geoms.append(shapely.Point(v))
            else:
                p, q = s.edge
                rows.append((p.x, p.y, q.x, q.y))
                geoms.append(shapely.LineString([p, q]))
        self.seg_rows = np.asarray(rows, dtype=float)
        self.geoms = np.array(geoms, dtype=object)
        self._cells: dict = {}
        self._parabolas: dict = {}

    # -- helpers ----------------------------------------------------------

    def site_order_from(self, x: float, y: float) -> np.ndarray:
        d = points_to_segments(np.array([[x, y]]), self.seg_rows)[0]
        return np.argsort(d, kind="stable")

    def _max_site_distance(self, geom, i) -> float:
        coords = shapely.get_coordinates(geom)
        if len(coords) == 0:
            return 0.0
        return float(points_to_segments(coords, self.seg_rows[i:i + 1]).max())

    def _slab_poly(self, i):
        p, q = self.sites[i].edge
        a, b, c, ux, uy, length = _edge_line(p, q)
        coords = _clip_halfplane(self.box_coords, -ux, -uy, ux * p.x + uy * p.y)
        coords = _clip_halfplane(coords, ux, uy, -(ux * p.x + uy * p.y) - length)
        return _poly_or_empty(coords)

    def _outside_slab(self, i):
        p, q = self.sites[i].edge
        a, b, c, ux, uy, length = _edge_line(p, q)
        before = _poly_or_empty(_clip_halfplane(self.box_coords, ux, uy, -(ux * p.x + uy * p.y)))
        beyond = _poly_or_empty(_clip_halfplane(
            self.box_coords, -ux, -uy, ux * p.x + uy * p.y + length))
        return tree_union([before, beyond])

    def _parabola_inside(self, vi, ei):
        """{p : d(p, vertex) <= d(p, edge's supporting line)} as a polygon, or
        None when the focus lies on the line (the region has no interior)."""
        key = (vi, ei)
        if key in self._parabolas:
            return self._parabolas[key]
        v = self.sites[vi].vertex
        p, q = self.sites[ei].edge
        a, b, c, ux, uy, length = _edge_line(p, q)
        signed = a * v.x + b * v.y + c
        result = None
        if abs(signed) > _FLAT_PARABOLA:
            side = 1.0 if signed > 0 else -1.0
            nx, ny = a * side, b * side          # unit normal toward the focus
            tx, ty = -ny, nx
            f = abs(signed) / 2.0                # focal length
            vx, vy = v.x - f * nx, v.y - f * ny  # parabola vertex
            pad = 0.05 * self.diag + 1.0
            wmax = max((cx - vx) * nx + (cy - vy) * ny for cx, cy in self.box_coords) + pad
            if wmax > 0:
                span = 2.0 * math.sqrt(f * wmax)
                us = _parabola_us(f, -span, span, self.tol)
                pts = [(vx + u * tx + (u * u / (4.0 * f)) * nx,
                        vy + u * ty + (u * u / (4.0 * f)) * ny) for u in us]
                top = wmax + pad
                pts.append((vx + span * tx + top * nx, vy + span * ty + top * ny))
                pts.append((vx - span * tx + top * nx, vy - span * ty + top * ny))
                region = snapped_intersection(shapely.Polygon(pts), self.box_poly)
                if not region.is_empty:
                    result = region
        self._parabolas[key] = result
        return result

    def _wedge(self, i, j):
        """{p : dist to line(i) <= dist to line(j)} clipped to the box, or
        None when it covers the whole box."""
        pi, qi = self.sites[i].edge
        pj, qj = self.sites[j].edge
        a1, b1, c1, *_ = _edge_line(pi, qi)
        a2, b2, c2, *_ = _edge_line(pj, qj)
        # |L1| <= |L2|  <=>  (L1 - L2)(L1 + L2) <= 0
        d1 = (a1 - a2, b1 - b2, c1 - c2)
        d2 = (a1 + a2, b1 + b2, c1 + c2)
        n1 = math.hypot(d1[0], d1[1])
        n2 = math.hypot(d2[0], d2[1])
        if n1 < 1e-12 and n2 < 1e-12:
            return None
        if n1 < 1e-12:
            if abs(d1[2]) < 1e-12:
                return None
            sign = 1.0 if d1[2] > 0 else -1.0
            return _poly_or_empty(_clip_halfplane(
                self.box_coords, sign * d2[0], sign * d2[1], sign * d2[2]))
        if n2 < 1e-12:
            if abs(d2[2]) < 1e-12:
                return None
            sign = 1.0 if d2[2] > 0 else -1.0
            return _poly_or_empty(_clip_halfplane(
                self.box_coords, sign * d1[0], sign * d1[1], sign * d1[2]))
        part1 = _clip_halfplane(self.box_coords, *d1)
        part1 = _clip_halfplane(part1, -d2[0], -d2[1], -d2[2])
        part2 = _clip_halfplane(self.box_coords, -d1[0], -d1[1], -d1[2])
        part2 = _clip_halfplane(part2, *d2)
        return tree_union([_poly_or_empty(part1), _poly_or_empty(part2)])

    def _dominance(self, i, j):
        """Region where site i is at least as close as site j, or None when
        that region covers the whole box."""
        si, sj = self.sites[i], self.sites[j]
        if si.kind is SiteKind.VERTEX and sj.kind is SiteKind.VERTEX:
            v, w = si.vertex, sj.vertex
            a = 2.0 * (w.x - v.x)
            b = 2.0 * (w.y - v.y)
            c = (v.x ** 2 + v.y ** 2) - (w.x ** 2 + w.y ** 2)
            return _poly_or_empty(_clip_halfplane(self.box_coords, a, b, c))
        if si.kind is SiteKind.VERTEX:
            parts = [self._outside_slab(j)]
            parabola = self._parabola_inside(i, j)
            if parabola is not None:
                parts.append(snapped_intersection(parabola, self._slab_poly(j)))
            return tree_union(parts)
        if sj.kind is SiteKind.VERTEX:
            slab = self._slab_poly(i)
            parabola = self._parabola_inside(j, i)
            if parabola is None:
                return slab
            return slab.difference(parabola)
        slab_i = self._slab_poly(i)
        wedge = self._wedge(i, j)
        if wedge is None:
            return slab_i
        removed = _only_polygons(snapped_difference(self._slab_poly(j), wedge))
        if removed.is_empty:
            return slab_i
        return _only_polygons(snapped_difference(slab_i, removed))

    def cell(self, i):
        if i in self._cells:
            return self._cells[i]
        site = self.sites[i]
        if site.kind is SiteKind.EDGE:
            region = self._slab_poly(i)
        else:
            region = self.box_poly
        d_sites = shapely.distance(self.geoms[i], self.geoms)
        order = np.argsort(d_sites, kind="stable")
        rmax = None
        for j in order:
            j = int(j)
            if j == i or region.is_empty:
                continue
            if rmax is None:
                rmax = self._max_site_distance(region, i)
            if d_sites[j] >= 2.0 * rmax:
                break
            if shapely.distance(region, self.geoms[j]) >= rmax:
                continue
            dom = self._dominance(i, j)
            region = _only_polygons(snapped_intersection(region, dom))
            rmax = None
        self._cells[i] = region
        return region


# ---------------------------------------------------------------------------
# partition construction


def build_partition(a: Shape, b: Shape, arc_tolerance: float = DEFAULT_ARC_TOLERANCE) -> Partition:
    """Partition shape ``a`` by the Voronoi diagram of ``b``'s features.

    Pieces of a ∩ b carry the interior site.  The rest of ``a`` is split by
    the diagram of b's vertices and open edges; only cells that actually
    meet a ∖ b are ever constructed.
    """
    if a.is_empty or b.is_empty:
        raise EmptyShapeError("build_partition needs two non-empty shapes")
    if arc_tolerance <= 0:
        raise ShapeError("arc_tolerance must be positive")
    sa, sb = to_shapely(a), to_shapely(b)
    pieces: list[Piece] = []
    interior = Site(SiteKind.INTERIOR)
    for poly in from_shapely(snapped_intersection(sa, sb)).polygons:
        if poly.area > _SLIVER_AREA:
            pieces.append(Piece(poly, interior))

    residual = _only_polygons(snapped_difference(sa, sb))
    if residual.area > _SLIVER_AREA:
        sites = [s for s in feature_sites(b) if s.kind is not SiteKind.INTERIOR]
        minx, miny, maxx, maxy = residual.bounds
        diag = math.hypot(maxx - minx, maxy - miny)
        margin = max(0.05 * diag, 10.0 * arc_tolerance, 1e-6)
        cells = _VoronoiCells(
            sites, (minx - margin, miny - margin, maxx + margin, maxy + margin), arc_tolerance)
        remaining = residual
        claimed: set[int] = set()
        dust = max(1e-7 * diag, 1e-12)
        budget = 4 * len(sites) + 64
        # snap rounding leaves overlay dust well below the partition coverage
        # tolerance; stop once the unclaimed remainder is negligible
        perimeter_a = sum(r.length for r in a.rings())
        slack = max(1e-9, 1e-2 * arc_tolerance * perimeter_a)
        for _ in range(budget):
            if remaining.area <= slack:
                break
            rep = remaining.representative_point()
            # closed-feature distance only ranks candidates; the true owner
            # can sit arbitrarily deep in this order (an edge site's reach is
            # unbounded sideways), so scan until a cell claims area.
            order = cells.site_order_from(rep.x, rep.y)
            placed = False
            for j in order:
                j = int(j)
                if j in claimed:
                    continue
                cell = cells.cell(j)
                if cell.is_empty:
                    claimed.add(j)
                    continue
                chunk = snapped_intersection(cell, remaining)
                if chunk.area > 1e-11:
                    for poly in from_shapely(snapped_intersection(cell, residual)).polygons:
                        if poly.area > _SLIVER_AREA:
                            pieces.append(Piece(poly, sites[j]))
                    remaining = _only_polygons(snapped_difference(remaining, cell))
                    claimed.add(j)
                    placed = True
                    break
                claimed.add(j)
            if not placed:
                # numerical corner (e.g. near a degenerate trisector): discard
                # a dust neighbourhood and move on; lost area is far below the
                # partition coverage tolerance.
                remaining = _only_polygons(snapped_difference(remaining,
                    shapely.box(rep.x - dust, rep.y - dust, rep.x + dust, rep.y + dust)))
        else:
            rep = remaining.representative_point()
            detail = [f"rep=({rep.x}, {rep.y}) remaining_valid={remaining.is_valid}"]
            for j in cells.site_order_from(rep.x, rep.y)[:6]:
                j = int(j)
                try:
                    cell = cells.cell(j)
                    chunk_area = cell.intersection(remaining).area
                    cell_area = cell.area
                    valid = cell.is_valid
                except Exception as exc:
                    detail.append(f"site {j} [{sites[j].describe()}] claimed={j in claimed} "
                                  f"cell FAILED: {exc}")
                    continue
                detail.append(f"site {j} [{sites[j].describe()}] claimed={j in claimed} "
                              f"cell={cell_area:.3e} valid={valid} chunk={chunk_area:.3e}")
            raise GeometryError(
                f"voronoi partition failed to converge: {remaining.area:.3e} area unclaimed "
                f"after {budget} rounds ({len(claimed)}/{len(sites)} sites claimed)\n"
                + "\n".join(detail))

    kind_rank = {SiteKind.INTERIOR: 0, SiteKind.VERTEX: 1, SiteKind.EDGE: 2}

    def sort_key(piece: Piece):
        s = piece.site
        coords = ()
        if s.kind is SiteKind.VERTEX:
            coords = (s.vertex.x, s.vertex.y)
        elif s.kind is SiteKind.EDGE:
            coords = (s.edge[0].x, s.edge[0].y, s.edge[1].x, s.edge[1].y)
        first = piece.geometry.outer.vertices[0]
        return (kind_rank[s.kind], coords, first.x, first.y)

    pieces.sort(key=sort_key)
    return Partition(tuple(pieces), a, b, arc_tolerance)


def scale_piece(piece: Piece, alpha: float) -> PolygonWithHoles | None:
    """Move a piece a fraction ``alpha`` of the way to its site.

    Vertex pieces contract uniformly toward the vertex, edge pieces contract
    perpendicular to the edge's supporting line, interior pieces stay put.
    Pieces that collapse to a point or segment (alpha = 1) come back as None.
    """
    if not 0.0 <= alpha <= 1.0:
        raise ShapeError("alpha must lie in [0, 1]")
    site = piece.site
    if site.kind is SiteKind.INTERIOR or alpha == 0.0:
        return piece.geometry

    if site.kind is SiteKind.VERTEX:
        v = site.vertex

        def move(p: Point) -> Point:
            return Point(p.x + alpha * (v.x - p.x), p.y + alpha * (v.y - p.y))
    else:
        p0, q0 = site.edge
        a, b, c, *_ = _edge_line(p0, q0)

        def move(p: Point) -> Point:
            off = alpha * (a * p.x + b * p.y + c)
            return Point(p.x - off * a, p.y - off * b)

    try:
        outer = Ring(tuple(move(p) for p in piece.geometry.outer.vertices))
        if abs(outer.signed_area) <= _SLIVER_AREA:
            return None
        holes = []
        for hole in piece.geometry.holes:
            mapped = Ring(tuple(move(p) for p in hole.vertices))
            if abs(mapped.signed_area) > _SLIVER_AREA:
                holes.append(mapped)
        return PolygonWithHoles(outer, tuple(holes))
    except ShapeError:
        return None


def dump_partition(partition: Partition, wkt_path, sites_path) -> None:
    """Debug dump: piece geometries as MULTIPOLYGON WKT plus a sidecar text
    file listing each piece's site."""
    from .wkt import emit_wkt

    shape = Shape(tuple(p.geometry for p in partition.pieces))
    with open(wkt_path, "w", encoding="utf-8") as fh:
        fh.write(emit_wkt(shape) + "\n")
    with open(sites_path, "w", encoding="utf-8") as fh:
        for i, piece in enumerate(partition.pieces):
            fh.write(f"{i} {piece.site.describe()}\n")
