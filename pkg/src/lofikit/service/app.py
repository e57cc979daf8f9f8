"""FastAPI service exposing the toolkit pipelines over HTTP.

Run with: uvicorn lofikit.service.app:app
"""

from __future__ import annotations

from fastapi import FastAPI, HTTPException

from ..annotations import (
    load_element_library,
    parse_coco,
    parse_detections,
    parse_rico_screen,
    screen_from_dict,
    screen_to_dict,
)
from ..blueprint import BlueprintStyle, render_blueprint
from ..evaluation import evaluate
from ..layout import LayoutConfig, infer_layout, parse_tree, serialize_tree
from ..synthesis import ComposeConfig, generate_dataset
from .schemas import (
    BlueprintRequest,
    BlueprintResponse,
    EvaluateRequest,
    HealthResponse,
    IngestRequest,
    LayoutRequest,
    ScreenModel,
    SynthesizeRequest,
    SynthesizeResponse,
)

app = FastAPI(
    title="lofikit",
    description="Synthetic lo-fi sketch datasets, layout-tree inference, "
    "blueprint rendering, and detector evaluation.",
)


def _bad_request(exc: Exception) -> HTTPException:
    return HTTPException(status_code=400, detail=str(exc))


@app.get("/health", response_model=HealthResponse)
def health() -> HealthResponse:
    return HealthResponse(status="ok")


@app.post("/screens/ingest", response_model=ScreenModel)
def ingest(req: IngestRequest) -> ScreenModel:
    try:
        screen = parse_rico_screen(req.hierarchy, req.width, req.height)
    except (ValueError, KeyError) as exc:
        raise _bad_request(exc)
    return ScreenModel.model_validate(screen_to_dict(screen))


@app.post("/layout/infer")
def layout(req: LayoutRequest) -> dict:
    cfg = LayoutConfig(**req.config.model_dump()) if req.config else LayoutConfig()
    try:
        screen = screen_from_dict(req.screen.model_dump())
        tree = infer_layout(screen, cfg)
    except ValueError as exc:
        raise _bad_request(exc)
    return serialize_tree(tree)


@app.post("/blueprint/render", response_model=BlueprintResponse)
def blueprint(req: BlueprintRequest) -> BlueprintResponse:
    style = BlueprintStyle(**req.style.model_dump()) if req.style else BlueprintStyle()
    try:
        screen = screen_from_dict(req.screen.model_dump())
        tree = parse_tree(req.tree) if req.tree is not None else None
        svg = render_blueprint(screen, tree, style)
    except ValueError as exc:
        raise _bad_request(exc)
    return BlueprintResponse(svg=svg)


@app.post("/detections/evaluate")
def evaluate_detections(req: EvaluateRequest) -> dict:
    try:
        detections = parse_detections([d.model_dump() for d in req.detections])
        report = evaluate(parse_coco(req.ground_truth), detections, req.iou_threshold)
    except (ValueError, KeyError) as exc:
        raise _bad_request(exc)
    return report.to_dict()


@app.post("/datasets/synthesize", response_model=SynthesizeResponse)
def synthesize(req: SynthesizeRequest) -> SynthesizeResponse:
    cfg = ComposeConfig(**req.config.model_dump()) if req.config else ComposeConfig()
    try:
        library = load_element_library(req.library_manifest)
        summary = generate_dataset(library, cfg, req.count, req.seed, req.out_dir, jobs=req.jobs)
    except (ValueError, OSError) as exc:
        raise _bad_request(exc)
    return SynthesizeResponse(
        screens_written=summary.screens_written, elements_total=summary.elements_total
    )
