"""Lo-fi UI sketch toolkit.

Deterministic machinery for working with lo-fi UI sketches and screen
annotations: synthetic sketch dataset composition with exact ground
truth, RICO-style hierarchy ingestion, gestalt layout-tree inference,
blueprint SVG rendering, and detector evaluation (IoU / PR / AP / mAP).
"""

from .annotations import (
    DetectionRecord,
    Element,
    ElementAsset,
    ElementLibrary,
    ScreenAnnotation,
)
from .blueprint import BlueprintStyle, render_blueprint
from .evaluation import EvalReport, average_precision, evaluate, match_detections
from .geometry import BBox, iou, union_bounds
from .layout import LayoutConfig, LayoutNode, infer_layout, parse_tree, serialize_tree, snap_alignments
from .synthesis import ComposeConfig, ComposedScreen, compose_screen, generate_dataset

__version__ = "0.1.0"

__all__ = [
    "BBox",
    "BlueprintStyle",
    "ComposeConfig",
    "ComposedScreen",
    "DetectionRecord",
    "Element",
    "ElementAsset",
    "ElementLibrary",
    "EvalReport",
    "LayoutConfig",
    "LayoutNode",
    "ScreenAnnotation",
    "average_precision",
    "compose_screen",
    "evaluate",
    "generate_dataset",
    "infer_layout",
    "iou",
    "match_detections",
    "parse_tree",
    "render_blueprint",
    "serialize_tree",
    "snap_alignments",
    "union_bounds",
]
