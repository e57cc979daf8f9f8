"""Synthetic lo-fi sketch screens with exact ground truth.

Screens are composed by stitching randomly chosen library assets onto a
blank canvas at random positions and scales. Placement uses rejection
sampling against an overlap budget; strokes combine by darkest-pixel-wins
so pencil-on-paper sketches layer naturally.

Determinism contract: screen ``i`` of a dataset uses the generator seed
``mix64(base_seed XOR i)``, and within one screen the draw order is
fixed: element count, then per element category, asset, scale, then one
(x, y) pair per placement attempt. Skipped elements still consume their
draws, so output never depends on worker count.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np
from PIL import Image

from .annotations import Element, ElementLibrary, ScreenAnnotation, reading_order, write_coco
from .geometry import BBox, iou
from .rng import Xoshiro256StarStar, derive_seed

ANNOTATION_FILE = "annotations.json"


@dataclass
class ComposeConfig:
    canvas_w: int = 600
    canvas_h: int = 800
    min_elements: int = 5
    max_elements: int = 15
    scale_min: float = 0.5
    scale_max: float = 1.5
    max_overlap_iou: float = 0.05
    max_attempts: int = 50
    background: int = 255

    def validate(self) -> None:
        if self.canvas_w < 1 or self.canvas_h < 1:
            raise ValueError(f"invalid canvas: {self.canvas_w}x{self.canvas_h}")
        if not (1 <= self.min_elements <= self.max_elements):
            raise ValueError(
                f"invalid element counts: min={self.min_elements}, max={self.max_elements}"
            )
        if not (0 < self.scale_min <= self.scale_max):
            raise ValueError(f"invalid scale range: [{self.scale_min}, {self.scale_max}]")
        if not (0.0 <= self.max_overlap_iou <= 1.0):
            raise ValueError(f"max_overlap_iou outside [0,1]: {self.max_overlap_iou}")
        if self.max_attempts < 1:
            raise ValueError(f"max_attempts must be >= 1: {self.max_attempts}")
        if not (0 <= self.background <= 255):
            raise ValueError(f"background outside 0..255: {self.background}")


@dataclass
class ComposedScreen:
    image: np.ndarray
    annotation: ScreenAnnotation
    seed: int


@dataclass
class DatasetSummary:
    screens_written: int
    elements_total: int


def nearest_resize(image: np.ndarray, out_h: int, out_w: int) -> np.ndarray:
    """Nearest-neighbor resample with integer index math (stable forever)."""
    in_h, in_w = image.shape
    rows = (np.arange(out_h) * in_h) // out_h
    cols = (np.arange(out_w) * in_w) // out_w
    return image[rows[:, None], cols[None, :]]


def _scaled_dims(asset: np.ndarray, scale: float, cfg: ComposeConfig) -> tuple[int, int]:
    h, w = asset.shape
    out_h = min(max(1, round(h * scale)), cfg.canvas_h)
    out_w = min(max(1, round(w * scale)), cfg.canvas_w)
    return out_h, out_w


def _fits_at_min_scale(asset: np.ndarray, cfg: ComposeConfig) -> bool:
    h, w = asset.shape
    return (
        max(1, round(h * cfg.scale_min)) <= cfg.canvas_h
        and max(1, round(w * cfg.scale_min)) <= cfg.canvas_w
    )


def compose_screen(library: ElementLibrary, cfg: ComposeConfig, seed: int) -> ComposedScreen:
    """Compose one synthetic screen; identical inputs give identical bytes."""
    cfg.validate()
    if not library.categories:
        raise ValueError("element library is empty")
    if not any(_fits_at_min_scale(a.image, cfg) for a in library.assets):
        raise ValueError("nothing fits: no asset fits the canvas at scale_min")

    rng = Xoshiro256StarStar(seed)
    canvas = np.full((cfg.canvas_h, cfg.canvas_w), cfg.background, dtype=np.uint8)
    placed: list[Element] = []

    n = rng.randint(cfg.min_elements, cfg.max_elements)
    for _ in range(n):
        category = library.categories[rng.below(len(library.categories))]
        pool = library.assets_by_category[category]
        asset = pool[rng.below(len(pool))]
        scale = rng.uniform(cfg.scale_min, cfg.scale_max)
        out_h, out_w = _scaled_dims(asset.image, scale, cfg)

        spot = None
        for _ in range(cfg.max_attempts):
            x = rng.below(cfg.canvas_w - out_w + 1)
            y = rng.below(cfg.canvas_h - out_h + 1)
            candidate = BBox(x, y, out_w, out_h)
            if all(iou(candidate, p.bbox) <= cfg.max_overlap_iou for p in placed):
                spot = (x, y, candidate)
                break
        if spot is None:
            continue

        x, y, bbox = spot
        patch = nearest_resize(asset.image, out_h, out_w)
        region = canvas[y : y + out_h, x : x + out_w]
        np.minimum(region, patch, out=region)
        placed.append(Element(category, bbox))

    annotation = ScreenAnnotation(
        float(cfg.canvas_w), float(cfg.canvas_h), reading_order(placed)
    )
    return ComposedScreen(image=canvas, annotation=annotation, seed=seed)


def screen_file_name(index: int) -> str:
    return f"syn_{index:06d}.png"


def generate_dataset(
    library: ElementLibrary,
    cfg: ComposeConfig,
    count: int,
    base_seed: int,
    out_dir: str,
    jobs: int = 1,
) -> DatasetSummary:
    """Write ``count`` PNG screens plus one COCO ground-truth document.

    Screens are independent jobs keyed by index; the annotation document
    is assembled in index order after all screens finish, so results do
    not depend on ``jobs``.
    """
    cfg.validate()
    if count < 1:
        raise ValueError(f"count must be >= 1: {count}")
    if jobs < 1:
        raise ValueError(f"jobs must be >= 1: {jobs}")
    os.makedirs(out_dir, exist_ok=True)

    def build(index: int) -> ScreenAnnotation:
        composed = compose_screen(library, cfg, derive_seed(base_seed, index))
        path = os.path.join(out_dir, screen_file_name(index))
        Image.fromarray(composed.image, mode="L").save(path)
        return composed.annotation

    if jobs == 1:
        annotations = [build(i) for i in range(count)]
    else:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            annotations = list(pool.map(build, range(count)))

    screens = [(ann, screen_file_name(i)) for i, ann in enumerate(annotations)]
    write_coco(screens, library.categories, os.path.join(out_dir, ANNOTATION_FILE))
    return DatasetSummary(
        screens_written=count,
        elements_total=sum(len(a.elements) for a in annotations),
    )
