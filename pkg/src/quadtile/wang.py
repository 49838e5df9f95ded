"""Diamond-edge Wang tiles, parsing, and a backtracking torus solver.

Tiles carry colors on four diagonal edges (nw, ne, sw, se).  Rows of a
tiling sit staggered: the tile at (y, p) rests its sw edge against the
ne edge of (y-1, p) and its se edge against the nw edge of (y-1, p+1),
all indices wrapping on the torus.  ``from_standard`` maps conventional
axis-aligned Wang tiles onto this model by a 45-degree relabeling.
"""

from __future__ import annotations

import math
from dataclasses import dataclass


class WangParseError(ValueError):
    pass


@dataclass(frozen=True)
class WangTile:
    name: str
    nw: int
    ne: int
    sw: int
    se: int


@dataclass(frozen=True)
class WangSet:
    colors: tuple[str, ...]
    tiles: tuple[WangTile, ...]

    @property
    def n(self) -> int:
        return len(self.tiles)

    @property
    def m(self) -> int:
        return len(self.colors)

    @property
    def t(self) -> int:
        """Bits needed per color code."""
        return max(1, math.ceil(math.log2(self.m)))

    def tile_index(self, name: str) -> int:
        for i, t in enumerate(self.tiles):
            if t.name == name:
                return i
        raise KeyError(name)


def from_standard(n: str, e: str, s: str, w: str) -> tuple[str, str, str, str]:
    """Map a standard (north, east, south, west) tile to diamond edges.

    A 45-degree rotation of the lattice sends the standard north
    neighbor to the diamond upper-right and the standard east neighbor
    to the diamond lower-right, which corresponds to
    (nw, ne, sw, se) = (west, north, south, east).
    """
    return (w, n, s, e)


def parse_wang_set(text: str, pad_colors: bool = False) -> WangSet:
    """Parse a Wang set file.

    Lines are ``tile <name> nw=<tok> ne=<tok> sw=<tok> se=<tok>``; ``#``
    starts a comment.  An optional header line ``standard`` switches the
    fields to ``n= e= s= w=`` and applies the standard-to-diamond
    relabeling.  An optional header ``colors <tok>...`` pins the color
    index order; otherwise colors are indexed by first appearance.

    Sets with a single color degenerate the block construction, so m < 2
    is an error unless ``pad_colors`` appends one unused color token.
    """
    standard = False
    colors: list[str] = []
    pinned = False
    tiles: list[WangTile] = []
    names: set[str] = set()

    def color_index(tok: str, lineno: int) -> int:
        if tok in colors:
            return colors.index(tok)
        if pinned:
            raise WangParseError(f"line {lineno}: color {tok!r} not in colors header")
        colors.append(tok)
        return len(colors) - 1

    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if parts[0] == "standard" and len(parts) == 1:
            if tiles:
                raise WangParseError(f"line {lineno}: 'standard' must precede tiles")
            standard = True
            continue
        if parts[0] == "colors":
            if tiles or pinned:
                raise WangParseError(f"line {lineno}: misplaced colors header")
            if len(set(parts[1:])) != len(parts) - 1 or len(parts) < 2:
                raise WangParseError(f"line {lineno}: bad colors header")
            colors.extend(parts[1:])
            pinned = True
            continue
        if parts[0] != "tile" or len(parts) != 6:
            raise WangParseError(f"line {lineno}: bad tile line {line!r}")
        name = parts[1]
        if name in names:
            raise WangParseError(f"line {lineno}: duplicate tile name {name!r}")
        names.add(name)
        keys = ("n", "e", "s", "w") if standard else ("nw", "ne", "sw", "se")
        vals: dict[str, str] = {}
        for field in parts[2:]:
            if "=" not in field:
                raise WangParseError(f"line {lineno}: bad field {field!r}")
            k, v = field.split("=", 1)
            if k not in keys or k in vals or not v:
                raise WangParseError(f"line {lineno}: bad field {field!r}")
            vals[k] = v
        if set(vals) != set(keys):
            raise WangParseError(f"line {lineno}: need fields {'/'.join(keys)}")
        if standard:
            quad = from_standard(vals["n"], vals["e"], vals["s"], vals["w"])
        else:
            quad = (vals["nw"], vals["ne"], vals["sw"], vals["se"])
        idx = tuple(color_index(tok, lineno) for tok in quad)
        tiles.append(WangTile(name, *idx))

    if not tiles:
        raise WangParseError("no tiles in input")
    if len(colors) < 2:
        if not pad_colors:
            raise WangParseError(
                "set uses fewer than 2 colors; pass pad_colors/--pad-colors to pad"
            )
        pad = "_pad"
        while pad in colors:
            pad += "_"
        colors.append(pad)
    return WangSet(tuple(colors), tuple(tiles))


def format_wang_set(ws: WangSet) -> str:
    lines = ["colors " + " ".join(ws.colors)]
    for t in ws.tiles:
        c = ws.colors
        lines.append(
            f"tile {t.name} nw={c[t.nw]} ne={c[t.ne]} sw={c[t.sw]} se={c[t.se]}"
        )
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# Tilings
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class DiamondTiling:
    """Assignment grid[y][p] of tile indices on an R x Q staggered torus."""

    rows: int
    periods: int
    grid: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        if self.rows % 2:
            raise ValueError("row count must be even")
        if len(self.grid) != self.rows or any(len(r) != self.periods for r in self.grid):
            raise ValueError("grid shape mismatch")


def check_tiling(ws: WangSet, tiling: DiamondTiling) -> bool:
    """True iff both diagonal adjacency families hold at every (y, p)."""
    R, Q = tiling.rows, tiling.periods
    g = tiling.grid
    for y in range(R):
        for p in range(Q):
            t = ws.tiles[g[y][p]]
            below_same = ws.tiles[g[(y - 1) % R][p]]
            below_right = ws.tiles[g[(y - 1) % R][(p + 1) % Q]]
            if t.sw != below_same.ne or t.se != below_right.nw:
                return False
    return True


def solve_torus(
    ws: WangSet, rows: int, periods: int, mode: str = "first"
) -> DiamondTiling | None | int:
    """Backtracking search for valid torus assignments.

    ``first`` returns the lexicographically least solution in row-major
    tile-index order (or None); ``count`` returns the exact number of
    valid assignments.  The row count must be even: the simulating
    lattice advances half a period per row, so only even row counts
    close up without shear.
    """
    if mode not in ("first", "count"):
        raise ValueError(f"bad mode {mode!r}")
    if rows % 2 or rows < 2:
        raise ValueError("row count must be even and >= 2")
    if periods < 1:
        raise ValueError("periods must be >= 1")

    R, Q = rows, periods
    tiles = ws.tiles
    grid = [[-1] * Q for _ in range(R)]
    count = 0
    ncells = R * Q

    def ok(y: int, p: int, ti: int) -> bool:
        t = tiles[ti]
        if y >= 1:
            if t.sw != tiles[grid[y - 1][p]].ne:
                return False
            if t.se != tiles[grid[y - 1][(p + 1) % Q]].nw:
                return False
        if y == R - 1:
            if tiles[grid[0][p]].sw != t.ne:
                return False
            if tiles[grid[0][(p - 1) % Q]].se != t.nw:
                return False
        return True

    def search(cell: int):
        nonlocal count
        if cell == ncells:
            count += 1
            if mode == "first":
                return DiamondTiling(R, Q, tuple(tuple(r) for r in grid))
            return None
        y, p = divmod(cell, Q)
        for ti in range(len(tiles)):
            if ok(y, p, ti):
                grid[y][p] = ti
                found = search(cell + 1)
                grid[y][p] = -1
                if found is not None:
                    return found
        return None

    found = search(0)
    if mode == "count":
        return count
    return found


def solve_standard_torus(quads: list[tuple[int, int, int, int]], h: int, w: int) -> bool:
    """Independent brute force for the standard Wang model on an h x w torus.

    ``quads`` are (north, east, south, west) color indices.  Adjacency:
    east(x) must equal west of the right neighbor, north(y) must equal
    south of the tile above.  Used as the oracle side of the
    standard/diamond equivalence check; deliberately separate from
    solve_torus.
    """
    grid = [[-1] * w for _ in range(h)]

    def ok(y: int, x: int, ti: int) -> bool:
        n, e, s, wv = quads[ti]
        if x and quads[grid[y][x - 1]][1] != wv:
            return False
        if y and quads[grid[y - 1][x]][0] != s:
            return False
        if x == w - 1:
            first = ti if w == 1 else grid[y][0]
            if e != quads[first][3]:
                return False
        if y == h - 1:
            above = ti if h == 1 else grid[0][x]
            if n != quads[above][2]:
                return False
        return True

    def search(cell: int) -> bool:
        if cell == h * w:
            return True
        y, x = divmod(cell, w)
        for ti in range(len(quads)):
            if ok(y, x, ti):
                grid[y][x] = ti
                if search(cell + 1):
                    return True
                grid[y][x] = -1
        return False

    return search(0)


# ---------------------------------------------------------------------------
# Tiling file format
# ---------------------------------------------------------------------------


def format_tiling(ws: WangSet, tiling: DiamondTiling) -> str:
    lines = [f"tiling {tiling.rows} {tiling.periods}"]
    for row in tiling.grid:
        lines.append(" ".join(ws.tiles[i].name for i in row))
    return "\n".join(lines) + "\n"


def parse_tiling(ws: WangSet, text: str) -> DiamondTiling:
    lines = [l for l in (raw.strip() for raw in text.splitlines()) if l and not l.startswith("#")]
    if not lines:
        raise ValueError("empty tiling file")
    head = lines[0].split()
    if len(head) != 3 or head[0] != "tiling":
        raise ValueError(f"bad tiling header {lines[0]!r}")
    R, Q = int(head[1]), int(head[2])
    if len(lines) != R + 1:
        raise ValueError(f"expected {R} rows, got {len(lines) - 1}")
    grid = []
    for row_text in lines[1:]:
        names = row_text.split()
        if len(names) != Q:
            raise ValueError(f"expected {Q} entries per row, got {len(names)}")
        grid.append(tuple(ws.tile_index(nm) for nm in names))
    return DiamondTiling(R, Q, tuple(grid))
