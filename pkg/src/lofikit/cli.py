"""Command-line surface: one subcommand per pipeline stage.

Exit codes: 0 success, 2 usage error, 1 runtime error. Errors go to
stderr; data goes to files or stdout, never mixed.
"""

from __future__ import annotations

import argparse
import json
import sys

from .annotations import (
    load_element_library,
    parse_rico_screen,
    read_coco,
    read_detections,
    screen_from_dict,
    screen_to_dict,
)
from .blueprint import BlueprintStyle, render_blueprint
from .evaluation import evaluate
from .layout import LayoutConfig, infer_layout, parse_tree, serialize_tree
from .synthesis import ComposeConfig, generate_dataset


def _size(text: str) -> tuple[int, int]:
    try:
        w, h = text.lower().split("x")
        return int(w), int(h)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected WxH, got {text!r}") from exc


def _load_json(path: str):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return json.load(fh)
    except FileNotFoundError:
        raise FileNotFoundError(f"file not found: {path}") from None
    except json.JSONDecodeError as exc:
        raise ValueError(f"malformed JSON in {path}: {exc}") from exc


def _write_text(path: str, text: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(text)


def _cmd_synth(args: argparse.Namespace) -> int:
    library = load_element_library(args.library)
    cfg = ComposeConfig(
        canvas_w=args.canvas[0],
        canvas_h=args.canvas[1],
        min_elements=args.min_elems,
        max_elements=args.max_elems,
        scale_min=args.scale_min,
        scale_max=args.scale_max,
        max_overlap_iou=args.max_overlap,
    )
    summary = generate_dataset(library, cfg, args.count, args.seed, args.out, jobs=args.jobs)
    print(f"wrote {summary.screens_written} screens, {summary.elements_total} elements to {args.out}")
    return 0


def _cmd_ingest(args: argparse.Namespace) -> int:
    doc = _load_json(args.rico)
    screen = parse_rico_screen(doc, args.size[0], args.size[1])
    _write_text(args.out, json.dumps(screen_to_dict(screen), indent=2) + "\n")
    return 0


def _cmd_layout(args: argparse.Namespace) -> int:
    screen = screen_from_dict(_load_json(args.input))
    cfg = LayoutConfig(
        gap_fraction=args.gap_fraction,
        gap_min_px=args.gap_min_px,
        snap_tolerance=args.snap_tol,
    )
    tree = infer_layout(screen, cfg)
    _write_text(args.out, json.dumps(serialize_tree(tree), indent=2) + "\n")
    return 0


def _cmd_blueprint(args: argparse.Namespace) -> int:
    screen = screen_from_dict(_load_json(args.input))
    tree = parse_tree(_load_json(args.tree)) if args.tree else None
    style = BlueprintStyle(show_groups=args.show_groups, scale=args.scale)
    _write_text(args.out, render_blueprint(screen, tree, style))
    return 0


def _cmd_eval(args: argparse.Namespace) -> int:
    report = evaluate(read_coco(args.gt), read_detections(args.det), args.iou)
    if args.report:
        _write_text(args.report, report.to_json())
    print(report.to_table())
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="lofikit",
        description="Lo-fi UI sketch toolkit: synthesize, ingest, lay out, render, evaluate.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("synth", help="generate a synthetic sketch dataset with ground truth")
    p.add_argument("--library", required=True, help="element-library manifest JSON")
    p.add_argument("--count", required=True, type=int, help="number of screens")
    p.add_argument("--seed", required=True, type=int, help="base seed (64-bit)")
    p.add_argument("--out", required=True, help="output directory")
    p.add_argument("--canvas", type=_size, default=(600, 800), metavar="WxH")
    p.add_argument("--min-elems", type=int, default=5)
    p.add_argument("--max-elems", type=int, default=15)
    p.add_argument("--scale-min", type=float, default=0.5)
    p.add_argument("--scale-max", type=float, default=1.5)
    p.add_argument("--max-overlap", type=float, default=0.05)
    p.add_argument("--jobs", type=int, default=1)
    p.set_defaults(func=_cmd_synth)

    p = sub.add_parser("ingest", help="flatten a RICO-style hierarchy into a screen document")
    p.add_argument("--rico", required=True, help="hierarchy JSON")
    p.add_argument("--size", required=True, type=_size, metavar="WxH")
    p.add_argument("--out", required=True, help="screen JSON output")
    p.set_defaults(func=_cmd_ingest)

    p = sub.add_parser("layout", help="infer a layout tree from a screen document")
    p.add_argument("--input", required=True, help="screen JSON")
    p.add_argument("--out", required=True, help="tree JSON output")
    p.add_argument("--gap-fraction", type=float, default=0.02)
    p.add_argument("--gap-min-px", type=float, default=8.0)
    p.add_argument("--snap-tol", type=float, default=4.0)
    p.set_defaults(func=_cmd_layout)

    p = sub.add_parser("blueprint", help="render a screen (and optional tree) as SVG")
    p.add_argument("--input", required=True, help="screen JSON")
    p.add_argument("--tree", help="layout tree JSON")
    p.add_argument("--out", required=True, help="SVG output")
    p.add_argument("--show-groups", action="store_true")
    p.add_argument("--scale", type=float, default=1.0)
    p.set_defaults(func=_cmd_blueprint)

    p = sub.add_parser("eval", help="score detections against COCO ground truth")
    p.add_argument("--gt", required=True, help="COCO ground-truth JSON")
    p.add_argument("--det", required=True, help="detections JSON")
    p.add_argument("--iou", type=float, default=0.5)
    p.add_argument("--report", help="write the JSON report here")
    p.set_defaults(func=_cmd_eval)

    return parser


def run_cli(argv: list[str]) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 2
    try:
        return args.func(args)
    except Exception as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def main() -> None:
    sys.exit(run_cli(sys.argv[1:]))


if __name__ == "__main__":
    main()
