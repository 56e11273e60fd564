"""The three morphs: dilation, Voronoi and mixed, plus pair normalization.

Every morph is parameterized by a fraction alpha in [0, 1] and produces an
intermediate shape equal to the first input at 0 and the second at 1.  The
dilation morph intersects the two inputs dilated by alpha*h and (1-alpha)*h,
where h is the pair's Hausdorff distance.  The Voronoi morph moves every
point of each input a matching fraction of the way to its closest point on
the other input, realized by scaling the pieces of the Voronoi partitions.
The mixed morph closes the Voronoi morph with a disk of radius phi and
intersects with the dilation morph, which restores the Hausdorff bounds.
"""

from __future__ import annotations

import weakref
from dataclasses import dataclass

import shapely

from .booleans import (DiskApprox, closing, dilate, from_shapely, intersect,
                       to_shapely, tree_union)
from .errors import EmptyShapeError, ShapeError
from .hausdorff import hausdorff
from .shapes import Point, Shape, centroid, measure, transform
from .voronoi import DEFAULT_ARC_TOLERANCE, build_partition, scale_piece

METHODS = ("dilation", "voronoi", "mixed")

ALIGN_MODES = ("centroid", "none")
SCALE_MODES = ("equal_area", "none")


@dataclass(frozen=True)
class MorphParams:
    alpha: float
    phi: float = 0.0
    disk_segments: int = 64
    arc_tolerance: float = DEFAULT_ARC_TOLERANCE

    def __post_init__(self):
        if not 0.0 <= self.alpha <= 1.0:
            raise ShapeError("alpha must lie in [0, 1]")
        if self.phi < 0.0:
            raise ShapeError("phi must be >= 0")


@dataclass(frozen=True, eq=False)
class NormalizedPair:
    """An aligned pair of shapes plus the transforms that produced it."""

    a: Shape
    b: Shape
    h: float
    applied_translation: tuple[tuple[float, float], tuple[float, float]]
    applied_scale: tuple[float, float]


@dataclass(frozen=True)
class MorphResult:
    shape: Shape
    method: str
    params: MorphParams
    h: float


def normalize_pair(a: Shape, b: Shape, align: str = "centroid",
                   scale: str = "equal_area",
                   arc_tolerance: float = DEFAULT_ARC_TOLERANCE) -> NormalizedPair:
    """Optionally scale both shapes to the geometric mean of their areas
    (about their centroids) and translate their centroids to the origin,
    then record the pair's Hausdorff distance."""
    if align not in ALIGN_MODES:
        raise ShapeError(f"align must be one of {ALIGN_MODES}")
    if scale not in SCALE_MODES:
        raise ShapeError(f"scale must be one of {SCALE_MODES}")
    if a.is_empty or b.is_empty:
        raise EmptyShapeError("normalize_pair needs non-empty shapes")
    area_a = measure(a, 0.0).area
    area_b = measure(b, 0.0).area
    if area_a <= 0 or area_b <= 0:
        raise EmptyShapeError("normalize_pair needs positive-area shapes")

    factors = (1.0, 1.0)
    if scale == "equal_area":
        target = (area_a * area_b) ** 0.5
        factors = ((target / area_a) ** 0.5, (target / area_b) ** 0.5)
        a = transform(a, scale_factor=factors[0], scale_center=centroid(a))
        b = transform(b, scale_factor=factors[1], scale_center=centroid(b))

    shifts = ((0.0, 0.0), (0.0, 0.0))
    if align == "centroid":
        ca, cb = centroid(a), centroid(b)
        shifts = ((-ca.x, -ca.y), (-cb.x, -cb.y))
        a = transform(a, translation=shifts[0])
        b = transform(b, translation=shifts[1])

    h = hausdorff(a, b, arc_tolerance).distance
    return NormalizedPair(a=a, b=b, h=h, applied_translation=shifts, applied_scale=factors)


# Partitions depend only on the pair and the arc tolerance, not on alpha, so
# they are cached per pair and shared by every evaluation along a morph.
_partition_cache: "weakref.WeakKeyDictionary" = weakref.WeakKeyDictionary()


def _pair_partitions(pair: NormalizedPair, arc_tolerance: float):
    per_pair = _partition_cache.setdefault(pair, {})
    key = float(arc_tolerance)
    if key not in per_pair:
        per_pair[key] = (build_partition(pair.a, pair.b, arc_tolerance),
                         build_partition(pair.b, pair.a, arc_tolerance))
    return per_pair[key]


def dilation_morph(pair: NormalizedPair, alpha: float, *, disk_segments: int = 64,
                   arc_tolerance: float = DEFAULT_ARC_TOLERANCE) -> MorphResult:
    params = MorphParams(alpha, 0.0, disk_segments, arc_tolerance)
    grown_a = dilate(pair.a, DiskApprox(alpha * pair.h, disk_segments))
    grown_b = dilate(pair.b, DiskApprox((1.0 - alpha) * pair.h, disk_segments))
    return MorphResult(intersect(grown_a, grown_b), "dilation", params, pair.h)


def voronoi_morph(pair: NormalizedPair, alpha: float, *, disk_segments: int = 64,
                  arc_tolerance: float = DEFAULT_ARC_TOLERANCE) -> MorphResult:
    params = MorphParams(alpha, 0.0, disk_segments, arc_tolerance)
    part_ab, part_ba = _pair_partitions(pair, arc_tolerance)
    polys = []
    for piece in part_ab.pieces:
        moved = scale_piece(piece, alpha)
        if moved is not None:
            polys.append(moved)
    for piece in part_ba.pieces:
        moved = scale_piece(piece, 1.0 - alpha)
        if moved is not None:
            polys.append(moved)
    merged = tree_union([to_shapely(Shape((p,))) for p in polys])
    return MorphResult(from_shapely(merged), "voronoi", params, pair.h)


def mixed_morph(pair: NormalizedPair, alpha: float, phi: float, *, disk_segments: int = 64,
                arc_tolerance: float = DEFAULT_ARC_TOLERANCE) -> MorphResult:
    params = MorphParams(alpha, phi, disk_segments, arc_tolerance)
    vor = voronoi_morph(pair, alpha, disk_segments=disk_segments, arc_tolerance=arc_tolerance)
    dil = dilation_morph(pair, alpha, disk_segments=disk_segments, arc_tolerance=arc_tolerance)
    closed = closing(vor.shape, DiskApprox(phi, disk_segments))
    return MorphResult(intersect(closed, dil.shape), "mixed", params, pair.h)


def compute_morph(pair: NormalizedPair, method: str, alpha: float, phi: float = 0.0,
                  *, disk_segments: int = 64,
                  arc_tolerance: float = DEFAULT_ARC_TOLERANCE) -> MorphResult:
    if method == "dilation":
        return dilation_morph(pair, alpha, disk_segments=disk_segments,
                              arc_tolerance=arc_tolerance)
    if method == "voronoi":
        return voronoi_morph(pair, alpha, disk_segments=disk_segments,
                             arc_tolerance=arc_tolerance)
    if method == "mixed":
        return mixed_morph(pair, alpha, phi, disk_segments=disk_segments,
                           arc_tolerance=arc_tolerance)
    raise ShapeError(f"unknown morph method {method!r}")


def morph_translated(a: Shape, b: Shape, t: tuple[float, float], alpha: float,
                     method: str, phi: float = 0.0, *, disk_segments: int = 64,
                     arc_tolerance: float = DEFAULT_ARC_TOLERANCE) -> MorphResult:
    """Morph toward a translated copy of b: compute the morph on (a, b) as
    given, then translate the intermediate shape by alpha * t."""
    pair = normalize_pair(a, b, align="none", scale="none", arc_tolerance=arc_tolerance)
    result = compute_morph(pair, method, alpha, phi, disk_segments=disk_segments,
                           arc_tolerance=arc_tolerance)
    shifted = transform(result.shape, translation=(alpha * t[0], alpha * t[1]))
    return MorphResult(shifted, result.method, result.params, result.h)
