"""Measurement protocol: alpha grids, ratio-to-ideal reporting, aggregation,
and synthetic pair generators.

The ideal morph interpolates area and perimeter linearly between the two
inputs; records report the measured values and their ratios to the ideal.
Summary statistics use the population standard deviation (divide by N) and
include the endpoints alpha = 0, 1 for the area and perimeter ratios but
exclude them for component and hole counts.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import ShapeError
from .morphs import METHODS, NormalizedPair, compute_morph, normalize_pair
from .shapes import Shape, Point, centroid, measure, polygon_shape, rectangle, transform
from .voronoi import DEFAULT_ARC_TOLERANCE

QUANTITIES = ("area_ratio", "perimeter_ratio", "components", "holes")

RECORDS_HEADER = "pair,method,alpha,area,perimeter,components,holes,area_ratio,perimeter_ratio"
SUMMARY_HEADER = "category,method,quantity,mean,stddev"


@dataclass(frozen=True)
class MeasurementRecord:
    pair_id: str
    method: str
    alpha: float
    area: float
    perimeter: float
    components: int
    holes: int
    area_ratio: float
    perimeter_ratio: float


@dataclass(frozen=True)
class SummaryRow:
    category: str
    method: str
    quantity: str
    mean: float
    stddev: float


@dataclass(frozen=True)
class ManifestEntry:
    pair_id: str
    path_a: Path
    path_b: Path
    category: str


def alpha_grid(alpha_step: float) -> list[float]:
    steps = round(1.0 / alpha_step)
    if steps < 1 or abs(steps * alpha_step - 1.0) > 1e-9:
        raise ShapeError(f"alpha step {alpha_step} does not divide 1 evenly")
    return [i / steps for i in range(steps + 1)]


def run_grid(pair: NormalizedPair, methods, alpha_step: float, phi: float,
             min_feature_area: float, pair_id: str = "pair", *,
             disk_segments: int = 64,
             arc_tolerance: float = DEFAULT_ARC_TOLERANCE) -> list[MeasurementRecord]:
    """One record per (method, alpha) over the grid 0, step, ..., 1."""
    if not methods:
        raise ShapeError("run_grid needs at least one method")
    alphas = alpha_grid(alpha_step)
    base_a = measure(pair.a, min_feature_area)
    base_b = measure(pair.b, min_feature_area)
    records = []
    for method in [m for m in METHODS if m in methods]:
        for alpha in alphas:
            result = compute_morph(pair, method, alpha, phi,
                                   disk_segments=disk_segments,
                                   arc_tolerance=arc_tolerance)
            m = measure(result.shape, min_feature_area)
            ideal_area = (1.0 - alpha) * base_a.area + alpha * base_b.area
            ideal_perimeter = (1.0 - alpha) * base_a.perimeter + alpha * base_b.perimeter
            records.append(MeasurementRecord(
                pair_id=pair_id, method=method, alpha=alpha,
                area=m.area, perimeter=m.perimeter,
                components=m.components, holes=m.holes,
                area_ratio=m.area / ideal_area,
                perimeter_ratio=m.perimeter / ideal_perimeter))
    return records


def aggregate(records, grouping) -> list[SummaryRow]:
    """Mean and population standard deviation per (category, method, quantity).

    ``grouping`` maps pair ids to category names.  Component and hole counts
    exclude the endpoint alphas 0 and 1; the two ratios include them.
    """
    if not records:
        raise ShapeError("aggregate needs at least one record")
    buckets: dict[tuple[str, str, str], list[float]] = {}
    for rec in records:
        category = grouping.get(rec.pair_id, rec.pair_id)
        endpoint = rec.alpha in (0.0, 1.0)
        for quantity in QUANTITIES:
            if endpoint and quantity in ("components", "holes"):
                continue
            key = (category, rec.method, quantity)
            buckets.setdefault(key, []).append(float(getattr(rec, quantity)))
    rows = []
    for (category, method, quantity) in sorted(
            buckets, key=lambda k: (k[0], METHODS.index(k[1]), QUANTITIES.index(k[2]))):
        values = buckets[(category, method, quantity)]
        mean = sum(values) / len(values)
        variance = sum((v - mean) ** 2 for v in values) / len(values)
        rows.append(SummaryRow(category, method, quantity, mean, math.sqrt(variance)))
    return rows


# ---------------------------------------------------------------------------
# synthetic generators


def generate_comb_pair(prongs: int) -> tuple[Shape, Shape]:
    """Two interlocking rectilinear combs, one with horizontal prongs and one
    with vertical prongs, overlapping so every prong crosses every prong.

    The geometry keeps the pair's Hausdorff distance at one quarter of the
    prong pitch, well under the gap width, so the halfway dilation morph
    splits into a near-quadratic number of crossing blobs.
    """
    if prongs < 2:
        raise ShapeError("need at least 2 prongs")
    pitch = 4.0
    width = 2.0          # prong thickness
    spine = 0.5          # spine thickness
    gap = 0.5            # spine offset behind the other comb's prong tips
    span = (prongs - 1) * pitch + width

    import shapely

    from .booleans import from_shapely, tree_union

    h_parts = [shapely.box(-gap - spine, 0.0, -gap, span)]
    for i in range(prongs):
        h_parts.append(shapely.box(-gap, i * pitch, span, i * pitch + width))
    v_parts = [shapely.box(-gap - spine, -gap - spine, span, -gap)]
    for j in range(prongs):
        v_parts.append(shapely.box(j * pitch, -gap, j * pitch + width, span))
    horizontal = from_shapely(tree_union(h_parts))
    vertical = from_shapely(tree_union(v_parts))
    return horizontal, vertical


def _star_polygon(rng: np.random.Generator, vertices: int, center,
                  radius_range=(0.35, 1.0)) -> Shape:
    gaps = rng.uniform(0.25, 1.0, vertices)
    angles = 2.0 * math.pi * np.cumsum(gaps) / gaps.sum() + rng.uniform(0.0, 2.0 * math.pi)
    radii = rng.uniform(radius_range[0], radius_range[1], vertices)
    cx, cy = center
    pts = [(cx + r * math.cos(t), cy + r * math.sin(t)) for r, t in zip(radii, angles)]
    return polygon_shape(pts)


def generate_random_pair(seed: int, vertices: int = 16) -> tuple[Shape, Shape]:
    """Deterministic pair of simple star-shaped polygons for property suites."""
    if vertices < 3:
        raise ShapeError("need at least 3 vertices")
    rng = np.random.default_rng(seed)
    a = _star_polygon(rng, vertices, (0.0, 0.0))
    offset_angle = rng.uniform(0.0, 2.0 * math.pi)
    offset = rng.uniform(0.2, 0.6)
    b = _star_polygon(rng, vertices,
                      (offset * math.cos(offset_angle), offset * math.sin(offset_angle)))
    return a, b


def unit_area_pair(a: Shape, b: Shape, *,
                   arc_tolerance: float = DEFAULT_ARC_TOLERANCE) -> NormalizedPair:
    """The normalized experiment regime: both shapes scaled to unit area about
    their centroids, then centroid-aligned.  Closing radii are meaningful in
    these units."""
    a = transform(a, scale_factor=1.0 / math.sqrt(measure(a, 0.0).area), scale_center=centroid(a))
    b = transform(b, scale_factor=1.0 / math.sqrt(measure(b, 0.0).area), scale_center=centroid(b))
    return normalize_pair(a, b, align="centroid", scale="equal_area",
                          arc_tolerance=arc_tolerance)


# ---------------------------------------------------------------------------
# CSV emission


def _num(value) -> str:
    return f"{float(value):.6f}"


def emit_csv(items) -> str:
    """Records or summary rows as CSV text (6 decimal places throughout).

    Records sort by (pair, method, alpha); an empty list yields just the
    header for the records schema.
    """
    items = list(items)
    if items and isinstance(items[0], SummaryRow):
        lines = [SUMMARY_HEADER]
        for row in items:
            lines.append(",".join([row.category, row.method, row.quantity,
                                   _num(row.mean), _num(row.stddev)]))
        return "\n".join(lines) + "\n"
    lines = [RECORDS_HEADER]
    for rec in sorted(items, key=lambda r: (r.pair_id, r.method, r.alpha)):
        lines.append(",".join([
            rec.pair_id, rec.method, _num(rec.alpha), _num(rec.area), _num(rec.perimeter),
            _num(rec.components), _num(rec.holes), _num(rec.area_ratio),
            _num(rec.perimeter_ratio)]))
    return "\n".join(lines) + "\n"


def parse_records_csv(text: str) -> list[MeasurementRecord]:
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines or lines[0] != RECORDS_HEADER:
        raise ShapeError("not a records CSV")
    records = []
    for line in lines[1:]:
        fields = line.split(",")
        records.append(MeasurementRecord(
            pair_id=fields[0], method=fields[1], alpha=float(fields[2]),
            area=float(fields[3]), perimeter=float(fields[4]),
            components=int(float(fields[5])), holes=int(float(fields[6])),
            area_ratio=float(fields[7]), perimeter_ratio=float(fields[8])))
    return records


def read_manifest(path) -> list[ManifestEntry]:
    """Manifest lines: ``pair_id, path_a.wkt, path_b.wkt, category``.
    Paths resolve relative to the manifest's directory."""
    path = Path(path)
    entries = []
    base = path.parent
    for lineno, raw in enumerate(path.read_text(encoding="utf-8").splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        fields = [f.strip() for f in line.split(",")]
        if len(fields) != 4:
            raise ShapeError(f"manifest line {lineno}: expected 4 comma-separated fields")
        entries.append(ManifestEntry(fields[0], base / fields[1], base / fields[2], fields[3]))
    return entries
