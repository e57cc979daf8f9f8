"""Blueprint-style SVG rendering of screens and their layout trees.

One outlined rect plus one label per element; when a tree is supplied
and ``show_groups`` is on, every internal node adds a dashed outline in
a ``<g class="bbx-group">`` wrapper. Output is byte-deterministic:
coordinates are emitted with ``repr`` so they round-trip exactly.
"""

from __future__ import annotations

from dataclasses import dataclass
from xml.sax.saxutils import escape

from .annotations import ScreenAnnotation, reading_order
from .layout import LayoutNode


@dataclass
class BlueprintStyle:
    stroke_color: str = "#2660a4"
    group_stroke_color: str = "#7da7d9"
    stroke_width: float = 2.0
    font_size: float = 12.0
    show_groups: bool = True
    scale: float = 1.0

    def validate(self) -> None:
        if self.stroke_width <= 0:
            raise ValueError(f"stroke_width must be positive: {self.stroke_width}")
        if self.scale <= 0:
            raise ValueError(f"scale must be positive: {self.scale}")


# Rough glyph advance for sans-serif, used to clip labels to their box.
_CHAR_WIDTH_EM = 0.6


def _fmt(v: float) -> str:
    return repr(float(v))


def _fit_label(text: str, box_w: float, font_size: float) -> str:
    if font_size <= 0:
        return text
    max_chars = int(box_w / (_CHAR_WIDTH_EM * font_size))
    return text[: max(max_chars, 0)]


def render_blueprint(
    screen: ScreenAnnotation,
    tree: LayoutNode | None = None,
    style: BlueprintStyle | None = None,
) -> str:
    """Render a screen (and optional layout tree) as an SVG document."""
    style = style or BlueprintStyle()
    style.validate()
    if tree is not None:
        _check_tree_matches(screen, tree)

    s = style.scale
    width = screen.width * s
    height = screen.height * s
    lines = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
        f'width="{_fmt(width)}" height="{_fmt(height)}" '
        f'viewBox="0 0 {_fmt(width)} {_fmt(height)}" '
        f'style="background-color: #ffffff">',
    ]

    for element in reading_order(screen.elements):
        b = element.bbox
        lines.append(
            f'<rect x="{_fmt(b.x * s)}" y="{_fmt(b.y * s)}" '
            f'width="{_fmt(b.w * s)}" height="{_fmt(b.h * s)}" '
            f'fill="none" stroke="{style.stroke_color}" '
            f'stroke-width="{_fmt(style.stroke_width)}"/>'
        )
        label = _fit_label(element.category, b.w * s, style.font_size)
        lines.append(
            f'<text x="{_fmt(b.x * s)}" y="{_fmt(b.y * s + style.font_size)}" '
            f'font-family="sans-serif" font-size="{_fmt(style.font_size)}" '
            f'fill="{style.stroke_color}">{escape(label)}</text>'
        )

    if tree is not None and style.show_groups:
        for node in tree.internal_nodes():
            b = node.bounds
            lines.append('<g class="bbx-group">')
            lines.append(
                f'<rect x="{_fmt(b.x * s)}" y="{_fmt(b.y * s)}" '
                f'width="{_fmt(b.w * s)}" height="{_fmt(b.h * s)}" '
                f'fill="none" stroke="{style.group_stroke_color}" '
                f'stroke-width="{_fmt(style.stroke_width)}" stroke-dasharray="6,3"/>'
            )
            lines.append("</g>")

    lines.append("</svg>")
    return "\n".join(lines) + "\n"


def _check_tree_matches(screen: ScreenAnnotation, tree: LayoutNode) -> None:
    """Leaves must carry the screen's categories one-for-one.

    Positions are not compared: the tree's leaves reflect alignment
    snapping, so their boxes may sit a few pixels off the raw elements.
    """
    leaf_cats = sorted(leaf.category or "" for leaf in tree.leaves())
    elem_cats = sorted(e.category for e in screen.elements)
    if leaf_cats != elem_cats:
        raise ValueError("tree does not match screen")
