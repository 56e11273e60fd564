"""Hausdorff-distance based abstract morphs between planar polygonal shapes."""

from .booleans import (DiskApprox, closing, difference, dilate, erode, intersect,
                       union)
from .errors import (EmptyShapeError, GeometryError, HausmorphError, ShapeError,
                     ValidationError, WktParseError)
from .experiments import (MeasurementRecord, SummaryRow, aggregate, emit_csv,
                          generate_comb_pair, generate_random_pair, read_manifest,
                          run_grid, unit_area_pair)
from .hausdorff import HausdorffResult, directed_hausdorff, hausdorff, hausdorff_oracle
from .morphs import (METHODS, MorphParams, MorphResult, NormalizedPair, compute_morph,
                     dilation_morph, mixed_morph, morph_translated, normalize_pair,
                     voronoi_morph)
from .shapes import (Measurements, Point, PolygonWithHoles, Ring, Shape, centroid,
                     measure, polygon_shape, rectangle, transform, validate)
from .voronoi import (Partition, Piece, Site, SiteKind, build_partition, closest_point,
                      dump_partition, feature_sites, scale_piece)
from .wkt import emit_wkt, parse_wkt

__version__ = "0.1.0"
