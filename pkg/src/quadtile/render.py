"""Deterministic scene rendering: static SVG, optional matplotlib PNG.

Every placement (or bare tile) becomes exactly one ``<path>`` element
whose subpaths trace the boundary loops of its cell set, one unit cell
per fixed pixel step.  Colors are assigned by hashing the tile name, so
identical inputs always produce byte-identical SVG output.
"""

from __future__ import annotations

import hashlib

from .geometry import CellSet, Placement, Region, placement_cells

_LEFT_TURN = {"R": "U", "U": "L", "L": "D", "D": "R"}
_RIGHT_TURN = {v: k for k, v in _LEFT_TURN.items()}
_STEP = {"R": (1, 0), "L": (-1, 0), "U": (0, 1), "D": (0, -1)}


def _interior_left(cells: set, v: tuple[int, int], d: str) -> bool:
    x, y = v
    if d == "R":
        return (x, y) in cells and (x, y - 1) not in cells
    if d == "L":
        return (x - 1, y - 1) in cells and (x - 1, y) not in cells
    if d == "U":
        return (x - 1, y) in cells and (x, y) not in cells
    return (x, y - 1) in cells and (x - 1, y - 1) not in cells


def outline_loops(cs: CellSet) -> list[list[tuple[int, int]]]:
    """All boundary loops (outer and holes) as closed vertex chains.

    Works for arbitrary cell sets, including disconnected ones; painting
    the loops with the even-odd rule reproduces the set exactly.
    """
    cells = set(cs.cells())
    edges: set[tuple[int, int, str]] = set()
    for (x, y) in cells:
        if (x, y - 1) not in cells:
            edges.add((x, y, "R"))
        if (x, y + 1) not in cells:
            edges.add((x + 1, y + 1, "L"))
        if (x - 1, y) not in cells:
            edges.add((x, y + 1, "D"))
        if (x + 1, y) not in cells:
            edges.add((x + 1, y, "U"))
    loops = []
    while edges:
        cur = min(edges)
        loop = []
        while cur is not None:
            edges.remove(cur)
            loop.append((cur[0], cur[1]))
            head = (cur[0] + _STEP[cur[2]][0], cur[1] + _STEP[cur[2]][1])
            nd = _LEFT_TURN[cur[2]]
            cur = None
            for _ in range(4):
                if (head[0], head[1], nd) in edges:
                    cur = (head[0], head[1], nd)
                    break
                nd = _RIGHT_TURN[nd]
        loops.append(loop)
    return loops


def color_for(name: str) -> str:
    """Stable fill color from the tile name."""
    digest = hashlib.md5(name.encode("utf-8")).digest()
    hue = digest[0] * 360 // 256
    return _hsl_hex(hue, 0.55, 0.62)


def _hsl_hex(h: int, s: float, lum: float) -> str:
    c = (1 - abs(2 * lum - 1)) * s
    x = c * (1 - abs((h / 60) % 2 - 1))
    m = lum - c / 2
    sector = h // 60
    rgb = [
        (c, x, 0.0), (x, c, 0.0), (0.0, c, x),
        (0.0, x, c), (x, 0.0, c), (c, 0.0, x),
    ][int(sector) % 6]
    return "#" + "".join(f"{round((v + m) * 255):02x}" for v in rgb)


def _path_data(cs: CellSet, xmin: int, ymax: int, scale: int) -> str:
    parts = []
    for loop in outline_loops(cs):
        pts = [((vx - xmin) * scale, (ymax - vy) * scale) for vx, vy in loop]
        parts.append(
            "M" + "L".join(f"{px} {py}" for px, py in pts) + "Z"
        )
    return "".join(parts)


def render_svg(items: list[tuple[str, CellSet]], scale: int = 4) -> str:
    """Render (name, cell set) pairs into a standalone SVG document."""
    if not items:
        raise ValueError("nothing to render")
    xmin = min(cs.bbox()[0] for _, cs in items)
    ymin = min(cs.bbox()[1] for _, cs in items)
    xmax = max(cs.bbox()[2] for _, cs in items) + 1
    ymax = max(cs.bbox()[3] for _, cs in items) + 1
    width = (xmax - xmin) * scale
    height = (ymax - ymin) * scale
    lines = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
        f'width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">',
        f'<rect width="{width}" height="{height}" fill="#ffffff"/>',
    ]
    for name, cs in items:
        if not cs:
            continue
        d = _path_data(cs, xmin, ymax, scale)
        lines.append(
            f'<path fill="{color_for(name)}" fill-rule="evenodd" '
            f'stroke="#333333" stroke-width="0.5" d="{d}"/>'
        )
    lines.append("</svg>")
    return "\n".join(lines) + "\n"


def tiles_gallery(tiles: list[tuple[str, CellSet]], gap: int = 4) -> list[tuple[str, CellSet]]:
    """Lay bare tiles side by side for rendering."""
    items = []
    x = 0
    for name, cs in tiles:
        xmin, ymin, xmax, _ = cs.bbox()
        items.append((name, cs.translate((x - xmin, -ymin))))
        x += (xmax - xmin + 1) + gap
    return items


def placement_scene(
    tiles: dict[str, CellSet],
    placements: list[Placement],
    region: Region | None = None,
) -> list[tuple[str, CellSet]]:
    """Resolve placements to positioned cell sets (wrapping on a torus)."""
    items = []
    for pl in placements:
        if region is not None:
            cs = placement_cells(region, pl, tiles)
        else:
            if pl.tile not in tiles:
                raise KeyError(f"unknown tile id {pl.tile!r}")
            cs = tiles[pl.tile].translate((pl.dx, pl.dy))
        items.append((pl.tile, cs))
    return items


def render_png(items: list[tuple[str, CellSet]], path: str, scale: int = 2) -> None:
    """Rasterize the scene to a PNG via matplotlib (optional extra)."""
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt
    import numpy as np

    xmin = min(cs.bbox()[0] for _, cs in items if cs)
    ymin = min(cs.bbox()[1] for _, cs in items if cs)
    xmax = max(cs.bbox()[2] for _, cs in items if cs) + 1
    ymax = max(cs.bbox()[3] for _, cs in items if cs) + 1
    img = np.full((ymax - ymin, xmax - xmin, 3), 255, dtype=np.uint8)
    for name, cs in items:
        hexcolor = color_for(name)
        rgb = [int(hexcolor[i : i + 2], 16) for i in (1, 3, 5)]
        for x, y in cs.cells():
            img[y - ymin, x - xmin] = rgb
    fig, ax = plt.subplots(
        figsize=((xmax - xmin) * scale / 100, max(1.0, (ymax - ymin) * scale / 100))
    )
    ax.imshow(img, origin="lower", interpolation="nearest")
    ax.set_axis_off()
    fig.savefig(path, bbox_inches="tight", pad_inches=0, dpi=100)
    plt.close(fig)
