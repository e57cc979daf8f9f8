"""Pydantic request/response models for the HTTP service."""

from __future__ import annotations

from typing import Any, Optional

from pydantic import BaseModel, Field


class ElementModel(BaseModel):
    category: str
    bbox: list[float] = Field(min_length=4, max_length=4)


class ScreenModel(BaseModel):
    width: float
    height: float
    elements: list[ElementModel]


class LayoutConfigModel(BaseModel):
    gap_fraction: float = 0.02
    gap_min_px: float = 8.0
    snap_tolerance: float = 4.0
    grid_size_ratio: float = 1.25


class StyleModel(BaseModel):
    stroke_color: str = "#2660a4"
    group_stroke_color: str = "#7da7d9"
    stroke_width: float = 2.0
    font_size: float = 12.0
    show_groups: bool = True
    scale: float = 1.0


class ComposeConfigModel(BaseModel):
    canvas_w: int = 600
    canvas_h: int = 800
    min_elements: int = 5
    max_elements: int = 15
    scale_min: float = 0.5
    scale_max: float = 1.5
    max_overlap_iou: float = 0.05
    max_attempts: int = 50
    background: int = 255


class DetectionModel(BaseModel):
    image_id: int
    category_id: int
    bbox: list[float] = Field(min_length=4, max_length=4)
    score: float


class IngestRequest(BaseModel):
    hierarchy: dict[str, Any]
    width: float
    height: float


class LayoutRequest(BaseModel):
    screen: ScreenModel
    config: Optional[LayoutConfigModel] = None


class BlueprintRequest(BaseModel):
    screen: ScreenModel
    tree: Optional[dict[str, Any]] = None
    style: Optional[StyleModel] = None


class BlueprintResponse(BaseModel):
    svg: str


class EvaluateRequest(BaseModel):
    ground_truth: dict[str, Any]
    detections: list[DetectionModel]
    iou_threshold: float = 0.5


class SynthesizeRequest(BaseModel):
    library_manifest: str
    out_dir: str
    count: int
    seed: int
    config: Optional[ComposeConfigModel] = None
    jobs: int = 1


class SynthesizeResponse(BaseModel):
    screens_written: int
    elements_total: int


class HealthResponse(BaseModel):
    status: str
