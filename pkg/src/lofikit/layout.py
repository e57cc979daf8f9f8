"""Layout-tree inference from flat screen annotations.

Grouping follows three perceptual rules, each its own pass:

* alignment: near-identical edge/center coordinates are snapped to a
  shared value (``snap_alignments``), so small sketch noise does not
  break grouping;
* proximity/continuity: recursive cuts at whitespace bands no element's
  projection crosses, widest band first, producing rows and columns;
* similarity: a lattice of same-category, same-size elements is kept
  together as a grid instead of being cut apart.

The result is a row/column/grid/leaf tree whose internal bounds are the
exact union of their children.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from statistics import median

from .annotations import Element, ScreenAnnotation, reading_order
from .geometry import BBox, union_bounds

KINDS = ("row", "column", "grid", "leaf")


@dataclass
class LayoutConfig:
    gap_fraction: float = 0.02
    gap_min_px: float = 8.0
    snap_tolerance: float = 4.0
    grid_size_ratio: float = 1.25

    def validate(self) -> None:
        if self.gap_fraction <= 0 or self.gap_min_px <= 0 or self.snap_tolerance < 0:
            raise ValueError("gap_fraction, gap_min_px must be positive; snap_tolerance >= 0")
        if self.grid_size_ratio < 1.0:
            raise ValueError(f"grid_size_ratio must be >= 1: {self.grid_size_ratio}")


@dataclass
class LayoutNode:
    kind: str
    bounds: BBox
    category: str | None = None
    children: list["LayoutNode"] = field(default_factory=list)
    rows: int | None = None
    cols: int | None = None

    def is_leaf(self) -> bool:
        return self.kind == "leaf"

    def internal_nodes(self) -> list["LayoutNode"]:
        """All non-leaf nodes in preorder."""
        out = []
        stack = [self]
        while stack:
            node = stack.pop()
            if not node.is_leaf():
                out.append(node)
                stack.extend(reversed(node.children))
        return out

    def leaves(self) -> list["LayoutNode"]:
        out = []
        stack = [self]
        while stack:
            node = stack.pop()
            if node.is_leaf():
                out.append(node)
            else:
                stack.extend(reversed(node.children))
        return out


def _leaf(element: Element) -> LayoutNode:
    return LayoutNode(kind="leaf", bounds=element.bbox, category=element.category)


# ---------------------------------------------------------------------------
# alignment snapping

def _snap_family(values: list[float], tolerance: float) -> list[tuple[float, bool]]:
    """Single-linkage cluster a coordinate family; median replaces each value.

    Returns (snapped value, in a multi-member cluster) per input position.
    """
    order = sorted(range(len(values)), key=lambda i: values[i])
    out: list[tuple[float, bool]] = [(0.0, False)] * len(values)
    cluster: list[int] = []

    def flush():
        if not cluster:
            return
        m = median([values[i] for i in cluster])
        shared = len(cluster) >= 2
        for i in cluster:
            out[i] = (m, shared)

    prev = None
    for i in order:
        if prev is not None and values[i] - prev > tolerance:
            flush()
            cluster = []
        cluster.append(i)
        prev = values[i]
    flush()
    return out


def _resolve_axis(
    lo: float, size: float,
    lo_snap: tuple[float, bool], hi_snap: tuple[float, bool], mid_snap: tuple[float, bool],
) -> tuple[float, float]:
    """Place one axis from its snapped low edge, high edge, and center.

    Both edges shared: pin both (size may change). One edge shared: keep
    size, follow that edge. Only the center shared: keep size, center it.
    """
    (lo_m, lo_s), (hi_m, hi_s), (mid_m, mid_s) = lo_snap, hi_snap, mid_snap
    if lo_s and hi_s:
        return lo_m, max(hi_m - lo_m, 0.0)
    if lo_s:
        return lo_m, size
    if hi_s:
        return hi_m - size, size
    if mid_s:
        return mid_m - size / 2.0, size
    return lo, size


def snap_alignments(elements: list[Element], tolerance: float) -> list[Element]:
    """Snap each edge/center family to its cluster median; order preserved."""
    if tolerance < 0:
        raise ValueError(f"tolerance must be >= 0: {tolerance}")
    if len(elements) <= 1 or tolerance == 0:
        return list(elements)

    boxes = [e.bbox for e in elements]
    lefts = _snap_family([b.x for b in boxes], tolerance)
    rights = _snap_family([b.x2 for b in boxes], tolerance)
    hcenters = _snap_family([b.cx for b in boxes], tolerance)
    tops = _snap_family([b.y for b in boxes], tolerance)
    bottoms = _snap_family([b.y2 for b in boxes], tolerance)
    vcenters = _snap_family([b.cy for b in boxes], tolerance)

    snapped = []
    for i, e in enumerate(elements):
        b = e.bbox
        x, w = _resolve_axis(b.x, b.w, lefts[i], rights[i], hcenters[i])
        y, h = _resolve_axis(b.y, b.h, tops[i], bottoms[i], vcenters[i])
        snapped.append(Element(e.category, BBox(x, y, w, h)))
    return snapped


# ---------------------------------------------------------------------------
# whitespace gaps

def _gaps(elements: list[Element], axis: str) -> list[tuple[float, float]]:
    """Maximal whitespace intervals no element's projection crosses."""
    if axis == "x":
        intervals = sorted((e.bbox.x, e.bbox.x2) for e in elements)
    else:
        intervals = sorted((e.bbox.y, e.bbox.y2) for e in elements)
    merged = [intervals[0]]
    for lo, hi in intervals[1:]:
        mlo, mhi = merged[-1]
        if lo <= mhi:
            merged[-1] = (mlo, max(mhi, hi))
        else:
            merged.append((lo, hi))
    return [
        (merged[i][1], merged[i + 1][0])
        for i in range(len(merged) - 1)
        if merged[i + 1][0] > merged[i][1]
    ]


def _eligible_gaps(
    elements: list[Element], axis: str, region: BBox, cfg: LayoutConfig
) -> list[tuple[float, float]]:
    axis_len = region.w if axis == "x" else region.h
    threshold = max(cfg.gap_min_px, cfg.gap_fraction * axis_len)
    return [(lo, hi) for lo, hi in _gaps(elements, axis) if hi - lo >= threshold]


def _split(
    elements: list[Element], gaps: list[tuple[float, float]], axis: str
) -> list[list[Element]]:
    """Partition at every gap; no projection crosses one, so sides are clean."""
    mids = [(lo + hi) / 2.0 for lo, hi in gaps]
    parts: list[list[Element]] = [[] for _ in range(len(mids) + 1)]
    for e in elements:
        start = e.bbox.x if axis == "x" else e.bbox.y
        idx = sum(1 for m in mids if start > m)
        parts[idx].append(e)
    return parts


# ---------------------------------------------------------------------------
# similarity: grid lattices

def _try_grid(elements: list[Element], cfg: LayoutConfig) -> LayoutNode | None:
    """Keep a k x m lattice of similar same-category elements whole."""
    if len(elements) < 4:
        return None
    if len({e.category for e in elements}) != 1:
        return None
    ws = [e.bbox.w for e in elements]
    hs = [e.bbox.h for e in elements]
    if min(ws) <= 0 or min(hs) <= 0:
        return None
    if max(ws) / min(ws) > cfg.grid_size_ratio or max(hs) / min(hs) > cfg.grid_size_ratio:
        return None

    col_gaps = _gaps(elements, "x")
    row_gaps = _gaps(elements, "y")
    cols = len(col_gaps) + 1
    rows = len(row_gaps) + 1
    if rows < 2 or cols < 2 or rows * cols != len(elements):
        return None

    col_mids = [(lo + hi) / 2.0 for lo, hi in col_gaps]
    row_mids = [(lo + hi) / 2.0 for lo, hi in row_gaps]
    cells: dict[tuple[int, int], Element] = {}
    for e in elements:
        r = sum(1 for m in row_mids if e.bbox.y > m)
        c = sum(1 for m in col_mids if e.bbox.x > m)
        if (r, c) in cells:
            return None
        cells[(r, c)] = e

    children = [_leaf(cells[(r, c)]) for r in range(rows) for c in range(cols)]
    return LayoutNode(
        kind="grid",
        bounds=union_bounds([c.bounds for c in children]),
        children=children,
        rows=rows,
        cols=cols,
    )


# ---------------------------------------------------------------------------
# tree inference

def infer_layout(screen: ScreenAnnotation, cfg: LayoutConfig | None = None) -> LayoutNode:
    """Infer the layout tree for a screen; deterministic for equal input."""
    cfg = cfg or LayoutConfig()
    cfg.validate()
    if not screen.elements:
        raise ValueError("no elements")
    return _build(snap_alignments(screen.elements, cfg.snap_tolerance), cfg)


def _build(elements: list[Element], cfg: LayoutConfig) -> LayoutNode:
    if len(elements) == 1:
        return _leaf(elements[0])

    grid = _try_grid(elements, cfg)
    if grid is not None:
        return grid

    region = union_bounds([e.bbox for e in elements])
    row_cuts = _eligible_gaps(elements, "x", region, cfg)
    col_cuts = _eligible_gaps(elements, "y", region, cfg)
    if row_cuts or col_cuts:
        widest_row = max((hi - lo for lo, hi in row_cuts), default=float("-inf"))
        widest_col = max((hi - lo for lo, hi in col_cuts), default=float("-inf"))
        if widest_col >= widest_row:
            parts = _split(elements, col_cuts, "y")
            kind = "column"
        else:
            parts = _split(elements, row_cuts, "x")
            kind = "row"
        children = [_build(part, cfg) for part in parts]
        return LayoutNode(
            kind=kind, bounds=union_bounds([c.bounds for c in children]), children=children
        )

    # No cut is eligible and the set is not a lattice: order what remains.
    ordered = reading_order(elements)
    kind = "row" if region.w >= region.h else "column"
    children = [_leaf(e) for e in ordered]
    return LayoutNode(
        kind=kind, bounds=union_bounds([c.bounds for c in children]), children=children
    )


# ---------------------------------------------------------------------------
# tree documents

def serialize_tree(tree: LayoutNode) -> dict:
    doc: dict = {"kind": tree.kind, "bounds": [_num(v) for v in tree.bounds.as_list()]}
    if tree.kind == "leaf":
        doc["category"] = tree.category
    else:
        if tree.kind == "grid":
            doc["rows"] = tree.rows
            doc["cols"] = tree.cols
        doc["children"] = [serialize_tree(c) for c in tree.children]
    return doc


def parse_tree(doc: dict) -> LayoutNode:
    kind = doc.get("kind")
    if kind not in KINDS:
        raise ValueError(f"unknown kind: {kind!r}")
    bounds = doc.get("bounds")
    if bounds is None or len(bounds) != 4:
        raise ValueError(f"node bounds must be [x,y,w,h], got {bounds}")
    bbox = BBox(*bounds)

    if kind == "leaf":
        if doc.get("children"):
            raise ValueError("leaf with children")
        category = doc.get("category")
        if not category:
            raise ValueError("leaf missing category")
        return LayoutNode(kind="leaf", bounds=bbox, category=str(category))

    children_docs = doc.get("children")
    if not children_docs or len(children_docs) < 2:
        raise ValueError(f"{kind} node needs at least 2 children")
    node = LayoutNode(kind=kind, bounds=bbox, children=[parse_tree(c) for c in children_docs])
    if kind == "grid":
        rows, cols = doc.get("rows"), doc.get("cols")
        if not rows or not cols or rows * cols != len(node.children):
            raise ValueError(f"grid rows x cols must cover children: {rows}x{cols}")
        node.rows, node.cols = int(rows), int(cols)
    return node


def _num(v: float):
    f = float(v)
    return int(f) if f.is_integer() else f
