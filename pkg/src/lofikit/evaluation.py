"""Detector scoring: greedy IoU matching, precision-recall, AP, mAP.

Single-IoU-threshold protocol with all-point interpolation: detections
are ranked by descending score (input order breaks ties), matched
per image and class to the unmatched ground-truth box of highest
overlap, and AP is the exact area under the monotone precision
envelope. ``math.fsum`` keeps the areas reproducible to the bit.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

from .annotations import CocoDataset, DetectionRecord, parse_coco
from .geometry import BBox, iou

GtIndex = dict[tuple[int, int], list[BBox]]


@dataclass
class ClassMatch:
    """Ranked TP/FP flags for one class, plus its ground-truth count."""

    category_id: int
    gt_count: int
    scores: list[float] = field(default_factory=list)
    tp_flags: list[bool] = field(default_factory=list)


@dataclass
class MatchResult:
    per_class: dict[int, ClassMatch]


@dataclass
class EvalReport:
    iou_threshold: float
    per_class_ap: dict[int, float]
    category_names: dict[int, str]
    map: float
    images: int
    gt_boxes: int
    detections: int
    ignored_detections: int

    def to_dict(self) -> dict:
        return {
            "iou_threshold": self.iou_threshold,
            "per_class": [
                {
                    "category_id": cid,
                    "name": self.category_names.get(cid, str(cid)),
                    "ap": ap,
                }
                for cid, ap in sorted(self.per_class_ap.items())
            ],
            "map": self.map,
            "counts": {
                "images": self.images,
                "gt_boxes": self.gt_boxes,
                "detections": self.detections,
                "ignored_detections": self.ignored_detections,
            },
        }

    def to_table(self) -> str:
        rows = [("category", "id", "AP")]
        for cid, ap in sorted(self.per_class_ap.items()):
            rows.append((self.category_names.get(cid, str(cid)), str(cid), f"{ap:.4f}"))
        rows.append(("mAP", "", f"{self.map:.4f}"))
        widths = [max(len(r[i]) for r in rows) for i in range(3)]
        lines = ["  ".join(cell.ljust(widths[i]) for i, cell in enumerate(row)) for row in rows]
        sep = "-" * len(lines[0])
        header = (
            f"IoU threshold: {self.iou_threshold}  images: {self.images}  "
            f"gt: {self.gt_boxes}  detections: {self.detections}"
            + (f"  ignored: {self.ignored_detections}" if self.ignored_detections else "")
        )
        return "\n".join([header, sep, lines[0], sep, *lines[1:], sep])

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2) + "\n"


def match_detections(
    gt_boxes: GtIndex, detections: list[DetectionRecord], iou_threshold: float
) -> MatchResult:
    """Greedy score-ordered matching; a ground-truth box is used at most once."""
    if not (0.0 < iou_threshold <= 1.0):
        raise ValueError(f"iou_threshold must be in (0,1]: {iou_threshold}")

    class_ids = sorted({cid for _, cid in gt_boxes} | {d.category_id for d in detections})
    per_class: dict[int, ClassMatch] = {}
    for cid in class_ids:
        gt_count = sum(len(v) for (img, c), v in gt_boxes.items() if c == cid)
        cm = ClassMatch(category_id=cid, gt_count=gt_count)
        ranked = sorted(
            (i for i, d in enumerate(detections) if d.category_id == cid),
            key=lambda i: (-detections[i].score, i),
        )
        unmatched: dict[int, list[BBox | None]] = {}
        for det_index in ranked:
            det = detections[det_index]
            pool = unmatched.setdefault(
                det.image_id, list(gt_boxes.get((det.image_id, cid), []))
            )
            best_iou, best_j = 0.0, -1
            for j, gt in enumerate(pool):
                if gt is None:
                    continue
                overlap = iou(det.bbox, gt)
                if overlap > best_iou:
                    best_iou, best_j = overlap, j
            hit = best_j >= 0 and best_iou >= iou_threshold
            if hit:
                pool[best_j] = None
            cm.scores.append(det.score)
            cm.tp_flags.append(hit)
        per_class[cid] = cm
    return MatchResult(per_class=per_class)


def average_precision(match: ClassMatch) -> float | None:
    """Area under the monotone precision envelope; None when no GT exists."""
    if match.gt_count == 0:
        return None
    n = len(match.tp_flags)
    if n == 0:
        return 0.0

    recalls, precisions = [], []
    cum_tp = 0
    for rank, is_tp in enumerate(match.tp_flags, start=1):
        cum_tp += is_tp
        recalls.append(cum_tp / match.gt_count)
        precisions.append(cum_tp / rank)

    envelope = precisions[:]
    for i in range(n - 2, -1, -1):
        envelope[i] = max(envelope[i], envelope[i + 1])

    terms = []
    prev_recall = 0.0
    for i in range(n):
        if recalls[i] > prev_recall:
            terms.append((recalls[i] - prev_recall) * envelope[i])
            prev_recall = recalls[i]
    return math.fsum(terms)


def evaluate(
    gt: dict | CocoDataset,
    detections: list[DetectionRecord],
    iou_threshold: float = 0.5,
) -> EvalReport:
    """Score detections against COCO ground truth; mAP over classes with GT."""
    dataset = gt if isinstance(gt, CocoDataset) else parse_coco(gt)
    image_ids = {img["id"] for img in dataset.images}
    names = dataset.category_names()

    for det in detections:
        if det.image_id not in image_ids:
            raise ValueError(f"detection references unknown image_id: {det.image_id}")
        if det.category_id not in names:
            raise ValueError(f"detection references unknown category_id: {det.category_id}")

    gt_boxes: GtIndex = {}
    for ann in dataset.annotations:
        x, y, w, h = ann["bbox"]
        gt_boxes.setdefault((ann["image_id"], ann["category_id"]), []).append(BBox(x, y, w, h))

    result = match_detections(gt_boxes, detections, iou_threshold)
    per_class_ap: dict[int, float] = {}
    ignored = 0
    for cid, cm in result.per_class.items():
        ap = average_precision(cm)
        if ap is None:
            ignored += len(cm.tp_flags)
        else:
            per_class_ap[cid] = ap

    mean_ap = math.fsum(per_class_ap.values()) / len(per_class_ap) if per_class_ap else 0.0
    return EvalReport(
        iou_threshold=iou_threshold,
        per_class_ap=per_class_ap,
        category_names=names,
        map=mean_ap,
        images=len(dataset.images),
        gt_boxes=len(dataset.annotations),
        detections=len(detections),
        ignored_detections=ignored,
    )
