import json
import os

import numpy as np
import pytest
from PIL import Image


def make_sketch(width: int, height: int, pattern: int) -> np.ndarray:
    """Small deterministic grayscale stroke pattern on white."""
    img = np.full((height, width), 255, dtype=np.uint8)
    img[0, :] = 40 + pattern
    img[-1, :] = 40 + pattern
    img[:, 0] = 40 + pattern
    img[:, -1] = 40 + pattern
    img[height // 2, :] = 90 + pattern
    return img


def write_library(root, sizes_by_category: dict[str, list[tuple[int, int]]]) -> str:
    """Build PNG assets plus a manifest under ``root``; returns manifest path."""
    sketch_dir = os.path.join(root, "sketches")
    os.makedirs(sketch_dir, exist_ok=True)
    entries = []
    counter = 0
    for name, sizes in sizes_by_category.items():
        paths = []
        for w, h in sizes:
            rel = f"sketches/{name}_{counter:03d}.png"
            Image.fromarray(make_sketch(w, h, counter % 100), mode="L").save(
                os.path.join(root, rel)
            )
            paths.append(rel)
            counter += 1
        entries.append({"name": name, "assets": paths})
    manifest_path = os.path.join(root, "library.json")
    with open(manifest_path, "w", encoding="utf-8") as fh:
        json.dump({"categories": entries}, fh, indent=2)
    return manifest_path


def random_screen(rng, min_elements: int = 2, max_elements: int = 30):
    """Cell-grid screen layouts with clear whitespace between cells.

    Geometry is integer-valued and cell gaps stay well above the default
    eligibility thresholds, so expected tree structure is unambiguous.
    """
    from lofikit.annotations import Element, ScreenAnnotation, reading_order
    from lofikit.geometry import BBox

    cell = 90
    cols = rng.randint(2, 5)
    rows = rng.randint(2, 6)
    cells = [(r, c) for r in range(rows) for c in range(cols)]
    rng.shuffle(cells)
    n = rng.randint(min_elements, min(max_elements, len(cells)))
    elements = []
    for r, c in cells[:n]:
        w = rng.choice([40, 56])
        h = rng.choice([30, 50])
        x = c * cell + rng.choice([0, 2, 4])
        y = r * cell + rng.choice([0, 2, 4])
        category = rng.choice(["button", "checkbox", "image"])
        elements.append(Element(category, BBox(x, y, w, h)))
    return ScreenAnnotation(cols * cell, rows * cell, reading_order(elements))


def trees_isomorphic(a, b, dx: float = 0.0, dy: float = 0.0, s: float = 1.0) -> bool:
    """Same kind/category/child structure; bounds map by scale then shift."""
    if a.kind != b.kind or a.category != b.category:
        return False
    if (a.rows, a.cols) != (b.rows, b.cols):
        return False
    expected = (a.bounds.x * s + dx, a.bounds.y * s + dy, a.bounds.w * s, a.bounds.h * s)
    actual = (b.bounds.x, b.bounds.y, b.bounds.w, b.bounds.h)
    if any(abs(e - g) > 1e-6 for e, g in zip(expected, actual)):
        return False
    if len(a.children) != len(b.children):
        return False
    return all(
        trees_isomorphic(ca, cb, dx, dy, s) for ca, cb in zip(a.children, b.children)
    )


@pytest.fixture
def library_manifest(tmp_path) -> str:
    return write_library(
        str(tmp_path),
        {
            "button": [(50, 20), (60, 24), (40, 18)],
            "checkbox": [(16, 16), (20, 20)],
            "image": [(80, 60)],
        },
    )


@pytest.fixture
def library(library_manifest):
    from lofikit.annotations import load_element_library

    return load_element_library(library_manifest)
