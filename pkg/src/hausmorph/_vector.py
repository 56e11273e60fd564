"""Vectorized point/segment distance kernels shared by several modules."""

from __future__ import annotations

import numpy as np

from .shapes import Shape


def edge_array(shape: Shape) -> np.ndarray:
    """All boundary edges of a shape as an (E, 4) array of x1, y1, x2, y2."""
    rows = []
    for ring in shape.rings():
        verts = ring.vertices
        n = len(verts)
        for i in range(n):
            p, q = verts[i], verts[(i + 1) % n]
            rows.append((p.x, p.y, q.x, q.y))
    return np.asarray(rows, dtype=float).reshape(-1, 4)


def points_to_segments(points: np.ndarray, segments: np.ndarray) -> np.ndarray:
    """Distance from each point to each closed segment, shape (N, E)."""
    p = points[:, None, :]                      # (N, 1, 2)
    a = segments[None, :, 0:2]                  # (1, E, 2)
    b = segments[None, :, 2:4]
    ab = b - a
    ap = p - a
    denom = np.einsum("...k,...k->...", ab, ab)
    denom = np.where(denom == 0.0, 1.0, denom)
    t = np.clip(np.einsum("...k,...k->...", ap, ab) / denom, 0.0, 1.0)
    nearest = a + t[..., None] * ab
    diff = p - nearest
    return np.sqrt(np.einsum("...k,...k->...", diff, diff))


def min_distance_to_shape(points: np.ndarray, segments: np.ndarray,
                          chunk: int = 4096) -> np.ndarray:
    """Minimum distance from each point to any boundary edge (chunks bound memory)."""
    out = np.empty(len(points))
    for start in range(0, len(points), chunk):
        stop = min(start + chunk, len(points))
        out[start:stop] = points_to_segments(points[start:stop], segments).min(axis=1)
    return out
