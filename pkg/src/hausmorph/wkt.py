"""Well-known-text I/O for shapes.

Accepts POLYGON and MULTIPOLYGON literals (plus the EMPTY forms) with
arbitrary whitespace.  Rings may or may not repeat their first vertex; the
repeated vertex is dropped on input and never emitted, so emission matches
the compact form ``POLYGON((0 0,1 0,1 1,0 1))`` exactly.
"""

from __future__ import annotations

from .errors import ShapeError, ValidationError, WktParseError
from .shapes import Point, PolygonWithHoles, Ring, Shape, validate


class _Scanner:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def skip_ws(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self) -> str:
        self.skip_ws()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def expect(self, char: str):
        self.skip_ws()
        if self.pos >= len(self.text) or self.text[self.pos] != char:
            raise WktParseError(f"expected '{char}'", self.pos)
        self.pos += 1

    def word(self) -> str:
        self.skip_ws()
        start = self.pos
        while self.pos < len(self.text) and self.text[self.pos].isalpha():
            self.pos += 1
        if self.pos == start:
            raise WktParseError("expected a keyword", start)
        return self.text[start:self.pos].upper()

    def number(self) -> float:
        self.skip_ws()
        start = self.pos
        allowed = "+-0123456789.eE"
        while self.pos < len(self.text) and self.text[self.pos] in allowed:
            self.pos += 1
        token = self.text[start:self.pos]
        try:
            return float(token)
        except ValueError:
            raise WktParseError(f"bad number {token!r}", start) from None

    def at_end(self) -> bool:
        self.skip_ws()
        return self.pos >= len(self.text)


def _parse_ring(scanner: _Scanner, ring_index: int) -> Ring:
    scanner.expect("(")
    points = []
    while True:
        x = scanner.number()
        y = scanner.number()
        points.append(Point(x, y))
        ch = scanner.peek()
        if ch == ",":
            scanner.expect(",")
            continue
        scanner.expect(")")
        break
    if len(points) > 1 and points[0] == points[-1]:
        points.pop()
    try:
        return Ring(tuple(points))
    except ShapeError as exc:
        raise ValidationError(str(exc), ring_index) from exc


def _parse_polygon_body(scanner: _Scanner, first_ring_index: int) -> PolygonWithHoles:
    scanner.expect("(")
    rings = [_parse_ring(scanner, first_ring_index)]
    while scanner.peek() == ",":
        scanner.expect(",")
        rings.append(_parse_ring(scanner, first_ring_index + len(rings)))
    scanner.expect(")")
    try:
        return PolygonWithHoles(rings[0], tuple(rings[1:]))
    except ShapeError as exc:
        raise ValidationError(str(exc), first_ring_index) from exc


def parse_wkt(text: str) -> Shape:
    """Parse a POLYGON / MULTIPOLYGON literal into a validated Shape."""
    scanner = _Scanner(text)
    keyword = scanner.word()
    if keyword not in ("POLYGON", "MULTIPOLYGON"):
        raise WktParseError(f"unsupported geometry type {keyword!r}", 0)
    scanner.skip_ws()
    if scanner.text[scanner.pos:scanner.pos + 5].upper() == "EMPTY":
        scanner.pos += 5
        if not scanner.at_end():
            raise WktParseError("trailing characters after EMPTY", scanner.pos)
        return Shape.empty()

    polygons = []
    ring_count = 0
    if keyword == "POLYGON":
        poly = _parse_polygon_body(scanner, ring_count)
        polygons.append(poly)
    else:
        scanner.expect("(")
        while True:
            poly = _parse_polygon_body(scanner, ring_count)
            polygons.append(poly)
            ring_count += 1 + len(poly.holes)
            if scanner.peek() == ",":
                scanner.expect(",")
                continue
            scanner.expect(")")
            break
    if not scanner.at_end():
        raise WktParseError("trailing characters", scanner.pos)
    shape = Shape(tuple(polygons))
    validate(shape)
    return shape


def _fmt(value: float) -> str:
    # repr() keeps the exact double (shortest round-trip form, >= 12
    # significant digits of fidelity); integers are printed bare.
    if value == int(value) and abs(value) < 1e16:
        return str(int(value))
    return repr(value)


def _ring_text(ring: Ring) -> str:
    return "(" + ",".join(f"{_fmt(p.x)} {_fmt(p.y)}" for p in ring.vertices) + ")"


def _polygon_text(poly: PolygonWithHoles) -> str:
    return "(" + ",".join(_ring_text(r) for r in poly.rings()) + ")"


def emit_wkt(shape: Shape) -> str:
    """Serialize a shape; the output re-parses to an identical Shape."""
    if shape.is_empty:
        return "MULTIPOLYGON EMPTY"
    if len(shape.polygons) == 1:
        return "POLYGON" + _polygon_text(shape.polygons[0])
    return "MULTIPOLYGON(" + ",".join(_polygon_text(p) for p in shape.polygons) + ")"
