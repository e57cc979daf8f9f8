"""Acceptance suite: one test per criterion, each printing a PASS line.

Run with: pytest tests/test_acceptance.py -v -s
"""

import json
import os
import random
import time
import xml.etree.ElementTree as ET

import pytest

from lofikit.annotations import (
    DetectionRecord,
    Element,
    ScreenAnnotation,
    parse_rico_screen,
    read_coco,
    write_coco,
)
from lofikit.blueprint import render_blueprint
from lofikit.cli import run_cli
from lofikit.evaluation import ClassMatch, average_precision, evaluate
from lofikit.geometry import BBox, iou, union_bounds
from lofikit.layout import LayoutConfig, infer_layout, parse_tree, serialize_tree, snap_alignments

from conftest import random_screen, trees_isomorphic, write_library
from test_evaluation import coco_doc, det, oracle_evaluate, random_instance

SVG_NS = "{http://www.w3.org/2000/svg}"


def _passed(n: int, detail: str) -> None:
    print(f"\nACCEPTANCE {n:2d} PASS - {detail}")


def layout_screens(count: int = 500):
    rng = random.Random(60_001)
    return [random_screen(rng) for _ in range(count)]


def test_criterion_1_metric_oracle_equivalence():
    start = time.perf_counter()
    rng = random.Random(10_001)
    for _ in range(200):
        gt_doc, dets = random_instance(rng)
        report = evaluate(gt_doc, dets, 0.5)
        expected = oracle_evaluate(gt_doc, dets, 0.5)
        assert set(report.per_class_ap) == set(expected)
        for cid, ap in expected.items():
            assert report.per_class_ap[cid] == pytest.approx(ap, abs=1e-9)
    elapsed = time.perf_counter() - start
    assert elapsed < 10.0, f"runtime {elapsed:.1f}s exceeds 10s"
    _passed(1, f"evaluate matches brute-force oracle on 200 instances in {elapsed:.1f}s")


def test_criterion_2_hand_traced_ap():
    ranked = ClassMatch(category_id=1, gt_count=3, scores=[0.9, 0.8, 0.7],
                        tp_flags=[True, False, True])
    assert average_precision(ranked) == pytest.approx(5 / 9, abs=1e-12)

    gt = coco_doc([(1, 1, (0, 0, 10, 10)), (1, 2, (30, 30, 20, 10))])
    perfect = [det(1, 1, (0, 0, 10, 10), 1.0), det(1, 2, (30, 30, 20, 10), 1.0)]
    assert evaluate(gt, perfect, 0.5).map == 1.0

    assert evaluate(gt, [], 0.5).map == 0.0
    _passed(2, "AP fixtures: 5/9 within 1e-12, perfect 1.0 exact, empty 0.0")


def test_criterion_3_metric_invariances():
    rng = random.Random(10_003)
    trailing = halving = 0
    while trailing < 100 or halving < 100:
        gt_doc, dets = random_instance(rng)
        before = evaluate(gt_doc, dets, 0.5).per_class_ap
        if dets and trailing < 100:
            lowest = min(d.score for d in dets)
            extra = det(gt_doc["images"][0]["id"], 1, (90, 90, 9, 9), lowest / 2)
            after = evaluate(gt_doc, dets + [extra], 0.5).per_class_ap
            assert after == before, "trailing FP changed an AP"
            trailing += 1
        if halving < 100:
            halved = [DetectionRecord(d.image_id, d.category_id, d.bbox, d.score / 2)
                      for d in dets]
            assert evaluate(gt_doc, halved, 0.5).per_class_ap == before, "halving changed an AP"
            halving += 1
    _passed(3, "trailing-FP and score-halving leave APs bitwise unchanged (100 trials each)")


def test_criterion_4_synthetic_dataset_validity(tmp_path):
    manifest = write_library(
        str(tmp_path),
        {"button": [(50, 20), (60, 24)], "checkbox": [(16, 16)], "image": [(80, 60)]},
    )
    from lofikit.annotations import load_element_library
    from lofikit.synthesis import ANNOTATION_FILE, ComposeConfig, generate_dataset

    library = load_element_library(manifest)
    cfg = ComposeConfig()
    out = str(tmp_path / "ds")

    start = time.perf_counter()
    summary = generate_dataset(library, cfg, 1000, 20_260_811, out, jobs=4)
    elapsed = time.perf_counter() - start
    assert summary.screens_written == 1000
    assert elapsed < 60.0, f"runtime {elapsed:.1f}s exceeds 60s"

    doc = json.load(open(os.path.join(out, ANNOTATION_FILE)))
    assert len(doc["images"]) == 1000
    sizes = [(a.image.shape[1], a.image.shape[0]) for a in library.assets]
    by_image: dict[int, list[BBox]] = {}
    for ann in doc["annotations"]:
        x, y, w, h = ann["bbox"]
        assert 0 <= x and x + w <= cfg.canvas_w, "out-of-canvas annotation"
        assert 0 <= y and y + h <= cfg.canvas_h, "out-of-canvas annotation"
        assert any(
            aw * cfg.scale_min - 1 <= w <= aw * cfg.scale_max + 1
            and ah * cfg.scale_min - 1 <= h <= ah * cfg.scale_max + 1
            for aw, ah in sizes
        ), f"scale bounds violated: {ann['bbox']}"
        by_image.setdefault(ann["image_id"], []).append(BBox(x, y, w, h))
    for boxes in by_image.values():
        for i in range(len(boxes)):
            for j in range(i + 1, len(boxes)):
                assert iou(boxes[i], boxes[j]) <= cfg.max_overlap_iou + 1e-9, "overlap bound"
    _passed(4, f"1000 screens valid (containment, overlap, scale) in {elapsed:.1f}s")


def test_criterion_5_synth_determinism(tmp_path):
    manifest = write_library(str(tmp_path), {"button": [(50, 20)], "checkbox": [(16, 16)]})
    outs = [str(tmp_path / name) for name in ("run1", "run2", "jobs8")]
    base = ["synth", "--library", manifest, "--count", "100", "--seed", "7"]
    assert run_cli(base + ["--out", outs[0]]) == 0
    assert run_cli(base + ["--out", outs[1]]) == 0
    assert run_cli(base + ["--out", outs[2], "--jobs", "8"]) == 0

    names = sorted(os.listdir(outs[0]))
    assert len(names) == 101  # 100 PNGs + annotations.json
    for other in outs[1:]:
        assert sorted(os.listdir(other)) == names
        for name in names:
            with open(os.path.join(outs[0], name), "rb") as a, \
                 open(os.path.join(other, name), "rb") as b:
                assert a.read() == b.read(), f"{name} differs"
    _passed(5, "synth --count 100 --seed 7: reruns and --jobs 8 byte-identical")


def test_criterion_6_layout_invariances():
    cfg = LayoutConfig()
    start = time.perf_counter()
    rng = random.Random(10_006)
    for screen in layout_screens(500):
        tree = infer_layout(screen, cfg)

        snapped = snap_alignments(screen.elements, cfg.snap_tolerance)
        key = lambda e: (e.category, e.bbox.x, e.bbox.y, e.bbox.w, e.bbox.h)
        leaf_elems = [Element(n.category, n.bounds) for n in tree.leaves()]
        assert sorted(leaf_elems, key=key) == sorted(snapped, key=key), "leaf preservation"

        for node in tree.internal_nodes():
            assert node.bounds == union_bounds([c.bounds for c in node.children]), "bounds"

        dx, dy = rng.randint(1, 400), rng.randint(1, 400)
        moved = ScreenAnnotation(
            screen.width + dx, screen.height + dy,
            [Element(e.category, e.bbox.translate(dx, dy)) for e in screen.elements],
        )
        assert trees_isomorphic(tree, infer_layout(moved, cfg), dx=dx, dy=dy), "translation"

        for s in (0.5, 3.0):
            scaled_cfg = LayoutConfig(
                gap_fraction=cfg.gap_fraction,
                gap_min_px=cfg.gap_min_px * s,
                snap_tolerance=cfg.snap_tolerance * s,
                grid_size_ratio=cfg.grid_size_ratio,
            )
            scaled = ScreenAnnotation(
                screen.width * s, screen.height * s,
                [Element(e.category, e.bbox.scale(s)) for e in screen.elements],
            )
            assert trees_isomorphic(tree, infer_layout(scaled, scaled_cfg), s=s), "scale"

        assert serialize_tree(infer_layout(screen, cfg)) == serialize_tree(tree), "determinism"
    elapsed = time.perf_counter() - start
    assert elapsed < 20.0, f"runtime {elapsed:.1f}s exceeds 20s"
    _passed(6, f"500 screens: leaves, bounds, translation, scale, determinism in {elapsed:.1f}s")


def test_criterion_7_layout_fixtures():
    single = ScreenAnnotation(400, 400, [Element("button", BBox(10, 10, 100, 40))])
    tree = infer_layout(single)
    assert tree.kind == "leaf" and tree.category == "button"

    stacked = ScreenAnnotation(
        400, 400,
        [Element("a", BBox(0, 0, 100, 50)), Element("b", BBox(0, 200, 100, 50))],
    )
    tree = infer_layout(stacked)
    assert tree.kind == "column"
    assert [c.kind for c in tree.children] == ["leaf", "leaf"]
    assert [c.category for c in tree.children] == ["a", "b"]

    lattice = ScreenAnnotation(
        400, 400,
        [
            Element("icon", BBox(0, 0, 50, 50)),
            Element("icon", BBox(60, 0, 50, 50)),
            Element("icon", BBox(0, 60, 50, 50)),
            Element("icon", BBox(60, 60, 50, 50)),
        ],
    )
    tree = infer_layout(lattice, LayoutConfig(gap_min_px=5.0))
    assert tree.kind == "grid" and (tree.rows, tree.cols) == (2, 2)
    assert [c.kind for c in tree.children] == ["leaf"] * 4
    _passed(7, "fixtures: singleton leaf, stacked column, 2x2 same-category grid")


def test_criterion_8_round_trips(tmp_path):
    for screen in layout_screens(500):
        tree = infer_layout(screen)
        assert parse_tree(serialize_tree(tree)) == tree, "tree round trip"

    rng = random.Random(10_008)
    categories = ["button", "checkbox", "image"]
    for trial in range(100):
        screens = []
        for i in range(rng.randint(0, 4)):
            elements = [
                Element(
                    rng.choice(categories),
                    BBox(rng.randint(0, 80), rng.randint(0, 80),
                         rng.randint(1, 20), rng.randint(1, 20)),
                )
                for _ in range(rng.randint(0, 6))
            ]
            screens.append((ScreenAnnotation(120, 140, elements), f"img_{i}.png"))
        path = str(tmp_path / f"rt_{trial}.json")
        write_coco(screens, categories, path)
        restored = read_coco(path).screens()
        assert len(restored) == len(screens)
        key = lambda e: (e.category, e.bbox.x, e.bbox.y, e.bbox.w, e.bbox.h)
        for (orig, name), (back, back_name) in zip(screens, restored):
            assert (back_name, back.width, back.height) == (name, orig.width, orig.height)
            assert sorted(back.elements, key=key) == sorted(orig.elements, key=key)
    _passed(8, "tree round trips on 500 inferred trees; COCO round trips on 100 datasets")


def test_criterion_9_blueprint_structure():
    rng = random.Random(10_009)
    for _ in range(50):
        screen = random_screen(rng)
        tree = infer_layout(screen)
        svg = render_blueprint(screen, tree)
        root = ET.fromstring(svg)  # raises if not well-formed XML
        rects = root.findall(f".//{SVG_NS}rect")
        element_rects = [r for r in rects if "stroke-dasharray" not in r.attrib]
        dashed_rects = [r for r in rects if "stroke-dasharray" in r.attrib]
        groups = root.findall(f".//{SVG_NS}g[@class='bbx-group']")
        assert len(element_rects) == len(screen.elements), "rect count"
        assert len(dashed_rects) == len(groups) == len(tree.internal_nodes()), "group count"
    _passed(9, "50 blueprints: well-formed XML, rect and dashed-group counts match")


def test_criterion_10_rico_ingestion():
    nested = {
        "componentLabel": "List Item",
        "bounds": [0, 0, 200, 100],
        "children": [{"componentLabel": "Icon", "bounds": [10, 10, 40, 40]}],
    }
    screen = parse_rico_screen(nested, 200, 100)
    assert [(e.category, e.bbox) for e in screen.elements] == [
        ("List Item", BBox(0, 0, 200, 100)),
        ("Icon", BBox(10, 10, 30, 30)),
    ]

    offscreen = {
        "bounds": [0, 0, 100, 100],
        "children": [
            {"componentLabel": "Image", "bounds": [80, 80, 150, 150]},
            {"componentLabel": "Icon", "bounds": [100, 0, 160, 40]},
        ],
    }
    screen = parse_rico_screen(offscreen, 100, 100)
    assert [(e.category, e.bbox) for e in screen.elements] == [
        ("Image", BBox(80, 80, 20, 20)),
    ]

    with pytest.raises(ValueError, match="inverted bounds"):
        parse_rico_screen({"componentLabel": "X", "bounds": [500, 500, 400, 600]}, 1000, 1000)
    _passed(10, "RICO fixtures: nested labels kept, off-screen clamped/dropped, inverted rejected")
