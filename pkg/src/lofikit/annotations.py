"""Annotation ingestion and export.

Covers the external formats the toolkit speaks:

* element-library manifests (JSON listing categories and PNG sketch assets),
* RICO-style view hierarchies (nested nodes with corner-form bounds),
* COCO ground truth (images / annotations / categories),
* detector output arrays ({image_id, category_id, bbox, score}),
* the flat screen document used between pipeline stages
  ({width, height, elements:[{category, bbox:[x,y,w,h]}]}).
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field
from typing import Any

import numpy as np
from PIL import Image

from .geometry import BBox


@dataclass(frozen=True)
class Element:
    """One categorized, positioned UI element on a screen."""

    category: str
    bbox: BBox


@dataclass
class ScreenAnnotation:
    """A screen's dimensions plus its categorized, positioned elements."""

    width: float
    height: float
    elements: list[Element] = field(default_factory=list)


@dataclass
class ElementAsset:
    """A labeled sketch raster: 8-bit grayscale, category, and origin id."""

    category: str
    image: np.ndarray
    source_id: str


@dataclass
class ElementLibrary:
    """Sketch assets grouped by category.

    ``categories`` keeps manifest order; COCO category ids are 1-based
    positions in that list.
    """

    categories: list[str]
    assets_by_category: dict[str, list[ElementAsset]]

    def category_id(self, name: str) -> int:
        return self.categories.index(name) + 1

    @property
    def assets(self) -> list[ElementAsset]:
        return [a for c in self.categories for a in self.assets_by_category[c]]


@dataclass(frozen=True)
class DetectionRecord:
    """One scored detector output box."""

    image_id: int
    category_id: int
    bbox: BBox
    score: float


@dataclass
class CocoDataset:
    """Parsed COCO ground truth: images, annotations, categories."""

    images: list[dict]
    annotations: list[dict]
    categories: list[dict]

    def category_names(self) -> dict[int, str]:
        return {c["id"]: c["name"] for c in self.categories}

    def screens(self) -> list[tuple[ScreenAnnotation, str]]:
        """Reconstruct per-image screens (elements in annotation order)."""
        names = self.category_names()
        by_image: dict[int, list[Element]] = {img["id"]: [] for img in self.images}
        for ann in self.annotations:
            x, y, w, h = ann["bbox"]
            by_image[ann["image_id"]].append(Element(names[ann["category_id"]], BBox(x, y, w, h)))
        out = []
        for img in self.images:
            screen = ScreenAnnotation(img["width"], img["height"], by_image[img["id"]])
            out.append((screen, img["file_name"]))
        return out


def reading_order(elements: list[Element]) -> list[Element]:
    """Top-to-bottom, then left-to-right by bbox top-left; category breaks ties."""
    return sorted(elements, key=lambda e: (e.bbox.y, e.bbox.x, e.category))


# ---------------------------------------------------------------------------
# element-library manifests

def load_element_library(manifest_path: str) -> ElementLibrary:
    """Load a library manifest and decode its assets to grayscale.

    Asset paths are resolved relative to the manifest's directory.
    """
    if not os.path.exists(manifest_path):
        raise FileNotFoundError(f"manifest not found: {manifest_path}")
    with open(manifest_path, "r", encoding="utf-8") as fh:
        doc = json.load(fh)
    entries = doc.get("categories")
    if not isinstance(entries, list) or not entries:
        raise ValueError(f"manifest has no categories: {manifest_path}")

    base = os.path.dirname(os.path.abspath(manifest_path))
    categories: list[str] = []
    assets_by_category: dict[str, list[ElementAsset]] = {}
    for entry in entries:
        name = entry.get("name")
        if not name:
            raise ValueError("manifest category missing a name")
        if name in assets_by_category:
            raise ValueError(f"duplicate category: {name}")
        paths = entry.get("assets", [])
        if not paths:
            raise ValueError(f"category with zero assets: {name}")
        loaded = []
        for rel in paths:
            path = rel if os.path.isabs(rel) else os.path.join(base, rel)
            if not os.path.exists(path):
                raise FileNotFoundError(f"asset image not found: {path}")
            with Image.open(path) as img:
                gray = np.asarray(img.convert("L"), dtype=np.uint8)
            if gray.shape[0] < 1 or gray.shape[1] < 1:
                raise ValueError(f"empty asset image: {path}")
            loaded.append(ElementAsset(category=name, image=gray, source_id=rel))
        categories.append(name)
        assets_by_category[name] = loaded
    return ElementLibrary(categories=categories, assets_by_category=assets_by_category)


# ---------------------------------------------------------------------------
# RICO-style hierarchies

def parse_rico_screen(doc: dict, width: float, height: float) -> ScreenAnnotation:
    """Flatten a view hierarchy into labeled elements on a canvas.

    Keeps every node carrying a ``componentLabel`` whose corner-form
    ``bounds`` still have positive area after clamping to the canvas;
    nested labels produce nested elements. Output is in reading order.
    """
    if width <= 0 or height <= 0:
        raise ValueError(f"invalid canvas size: {width}x{height}")
    elements: list[Element] = []

    def visit(node: dict) -> None:
        label = node.get("componentLabel")
        bounds = node.get("bounds")
        if label is not None:
            if bounds is None:
                raise ValueError(f"labeled node missing bounds: {label}")
            if len(bounds) != 4:
                raise ValueError(f"bounds must be [x1,y1,x2,y2], got {bounds}")
            x1, y1, x2, y2 = (float(v) for v in bounds)
            if x2 < x1 or y2 < y1:
                raise ValueError(f"inverted bounds: {bounds}")
            cx1, cy1 = max(x1, 0.0), max(y1, 0.0)
            cx2, cy2 = min(x2, float(width)), min(y2, float(height))
            if cx2 > cx1 and cy2 > cy1:
                elements.append(Element(str(label), BBox.from_corners(cx1, cy1, cx2, cy2)))
        for child in node.get("children") or []:
            if child is not None:
                visit(child)

    visit(doc)
    return ScreenAnnotation(float(width), float(height), reading_order(elements))


# ---------------------------------------------------------------------------
# screen documents

def screen_to_dict(screen: ScreenAnnotation) -> dict:
    return {
        "width": _num(screen.width),
        "height": _num(screen.height),
        "elements": [
            {"category": e.category, "bbox": [_num(v) for v in e.bbox.as_list()]}
            for e in screen.elements
        ],
    }


def screen_from_dict(doc: dict) -> ScreenAnnotation:
    try:
        width = float(doc["width"])
        height = float(doc["height"])
        raw = doc["elements"]
    except (KeyError, TypeError) as exc:
        raise ValueError(f"malformed screen document: missing {exc}") from exc
    if width <= 0 or height <= 0:
        raise ValueError(f"invalid canvas size: {width}x{height}")
    elements = []
    for item in raw:
        bbox = item["bbox"]
        if len(bbox) != 4:
            raise ValueError(f"bbox must have 4 entries, got {bbox}")
        elements.append(Element(str(item["category"]), BBox(*bbox)))
    return ScreenAnnotation(width, height, elements)


# ---------------------------------------------------------------------------
# COCO ground truth

def coco_document(
    screens: list[tuple[ScreenAnnotation, str]], library_categories: list[str]
) -> dict:
    """Build the COCO ground-truth document for a list of screens.

    Image and annotation ids are 1-based and dense; category ids are
    1-based positions in ``library_categories``.
    """
    cat_ids = {name: i + 1 for i, name in enumerate(library_categories)}
    images = []
    annotations = []
    ann_id = 1
    for image_id, (screen, file_name) in enumerate(screens, start=1):
        images.append(
            {
                "id": image_id,
                "file_name": file_name,
                "width": int(screen.width),
                "height": int(screen.height),
            }
        )
        for element in screen.elements:
            if element.category not in cat_ids:
                raise ValueError(f"unknown category: {element.category}")
            b = element.bbox
            annotations.append(
                {
                    "id": ann_id,
                    "image_id": image_id,
                    "category_id": cat_ids[element.category],
                    "bbox": [_num(b.x), _num(b.y), _num(b.w), _num(b.h)],
                    "area": _num(b.area),
                    "iscrowd": 0,
                }
            )
            ann_id += 1
    categories = [{"id": i + 1, "name": name} for i, name in enumerate(library_categories)]
    return {"images": images, "annotations": annotations, "categories": categories}


def write_coco(
    screens: list[tuple[ScreenAnnotation, str]],
    library_categories: list[str],
    out_path: str,
) -> None:
    """Serialize COCO ground truth; byte-stable for identical inputs."""
    doc = coco_document(screens, library_categories)
    with open(out_path, "w", encoding="utf-8") as fh:
        json.dump(doc, fh, indent=2)
        fh.write("\n")


def parse_coco(doc: dict) -> CocoDataset:
    for key in ("images", "annotations", "categories"):
        if key not in doc:
            raise ValueError(f"COCO document missing '{key}'")
    image_ids = set()
    for img in doc["images"]:
        if img["id"] in image_ids:
            raise ValueError(f"duplicate image id: {img['id']}")
        image_ids.add(img["id"])
    cat_ids = {c["id"] for c in doc["categories"]}
    for ann in doc["annotations"]:
        if ann["image_id"] not in image_ids:
            raise ValueError(f"annotation references unknown image_id: {ann['image_id']}")
        if ann["category_id"] not in cat_ids:
            raise ValueError(f"annotation references unknown category_id: {ann['category_id']}")
        if len(ann["bbox"]) != 4:
            raise ValueError(f"annotation bbox must have 4 entries: {ann['bbox']}")
    return CocoDataset(doc["images"], doc["annotations"], doc["categories"])


def read_coco(path: str) -> CocoDataset:
    if not os.path.exists(path):
        raise FileNotFoundError(f"ground truth not found: {path}")
    with open(path, "r", encoding="utf-8") as fh:
        return parse_coco(json.load(fh))


# ---------------------------------------------------------------------------
# detector outputs

def parse_detections(data: Any) -> list[DetectionRecord]:
    if not isinstance(data, list):
        raise ValueError("detections document must be an array")
    records = []
    for item in data:
        bbox = item.get("bbox")
        if bbox is None or len(bbox) != 4:
            raise ValueError(f"detection bbox must have 4 entries, got {bbox}")
        score = float(item["score"])
        if not 0.0 <= score <= 1.0:
            raise ValueError(f"detection score outside [0,1]: {score}")
        category_id = int(item["category_id"])
        if category_id < 1:
            raise ValueError(f"detection category_id must be >= 1: {category_id}")
        records.append(
            DetectionRecord(
                image_id=int(item["image_id"]),
                category_id=category_id,
                bbox=BBox(*bbox),
                score=score,
            )
        )
    return records


def read_detections(path: str) -> list[DetectionRecord]:
    if not os.path.exists(path):
        raise FileNotFoundError(f"detections not found: {path}")
    with open(path, "r", encoding="utf-8") as fh:
        return parse_detections(json.load(fh))


def _num(v: float):
    """Emit integral floats as ints so documents stay tidy and stable."""
    f = float(v)
    return int(f) if f.is_integer() else f
