"""Axis-aligned rectangle arithmetic shared by every pipeline stage."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence


@dataclass(frozen=True)
class BBox:
    """Rectangle stored as (x, y, w, h) in pixels, top-left origin.

    Coordinates are doubles; integer inputs are promoted on construction.
    Corner form (x1, y1, x2, y2) is a conversion, never a second
    representation.
    """

    x: float
    y: float
    w: float
    h: float

    def __post_init__(self):
        object.__setattr__(self, "x", float(self.x))
        object.__setattr__(self, "y", float(self.y))
        object.__setattr__(self, "w", float(self.w))
        object.__setattr__(self, "h", float(self.h))
        if self.w < 0 or self.h < 0:
            raise ValueError(f"negative box dimensions: w={self.w}, h={self.h}")

    @property
    def x2(self) -> float:
        return self.x + self.w

    @property
    def y2(self) -> float:
        return self.y + self.h

    @property
    def cx(self) -> float:
        return self.x + self.w / 2.0

    @property
    def cy(self) -> float:
        return self.y + self.h / 2.0

    @property
    def area(self) -> float:
        return self.w * self.h

    @classmethod
    def from_corners(cls, x1: float, y1: float, x2: float, y2: float) -> "BBox":
        if x2 < x1 or y2 < y1:
            raise ValueError(f"inverted bounds: ({x1},{y1},{x2},{y2})")
        return cls(x1, y1, x2 - x1, y2 - y1)

    def as_list(self) -> list[float]:
        return [self.x, self.y, self.w, self.h]

    def translate(self, dx: float, dy: float) -> "BBox":
        return BBox(self.x + dx, self.y + dy, self.w, self.h)

    def scale(self, s: float) -> "BBox":
        return BBox(self.x * s, self.y * s, self.w * s, self.h * s)


def intersection_area(a: BBox, b: BBox) -> float:
    """Overlap area of two boxes; 0 when they only touch or are disjoint."""
    iw = min(a.x2, b.x2) - max(a.x, b.x)
    ih = min(a.y2, b.y2) - max(a.y, b.y)
    if iw <= 0 or ih <= 0:
        return 0.0
    return iw * ih


def iou(a: BBox, b: BBox) -> float:
    """Intersection over union in [0, 1]; 0 when the union has zero area.

    Areas are taken in corner space so identical boxes give exactly 1.0.
    """
    ax2, ay2 = a.x + a.w, a.y + a.h
    bx2, by2 = b.x + b.w, b.y + b.h
    iw = min(ax2, bx2) - max(a.x, b.x)
    ih = min(ay2, by2) - max(a.y, b.y)
    if iw <= 0 or ih <= 0:
        return 0.0
    inter = iw * ih
    union = (ax2 - a.x) * (ay2 - a.y) + (bx2 - b.x) * (by2 - b.y) - inter
    if union <= 0:
        return 0.0
    return inter / union


def union_bounds(boxes: Sequence[BBox] | Iterable[BBox]) -> BBox:
    """Smallest box containing all inputs; empty input is an error."""
    boxes = list(boxes)
    if not boxes:
        raise ValueError("empty bounds union")
    x1 = min(b.x for b in boxes)
    y1 = min(b.y for b in boxes)
    x2 = max(b.x2 for b in boxes)
    y2 = max(b.y2 for b in boxes)
    return BBox(x1, y1, x2 - x1, y2 - y1)
