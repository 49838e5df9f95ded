"""Exact integer cell-set algebra on the unit-square lattice.

A cell (x, y) is the unit square [x, x+1) x [y, y+1).  Every tile, stamp
and occupied region in this package is a ``CellSet``: a finite, possibly
disconnected set of cells.  Sets are immutable and all operations are
pure, so values can be shared freely.

Internally a set is stored as one big-integer bitmask per row, all rows
sharing a common x origin.  Union/intersection/difference are then word
operations on Python ints, which keeps multi-million-cell regions cheap.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator

# Coordinates must stay well inside the 64-bit signed range.
COORD_LIMIT = 2**62


class CoordinateOverflowError(ValueError):
    """A translation pushed a coordinate outside the supported range."""


class BoundaryError(ValueError):
    """The input violates a boundary-word precondition (holes/disconnected)."""


def _check_coord(v: int) -> int:
    if not -COORD_LIMIT <= v <= COORD_LIMIT:
        raise CoordinateOverflowError(f"coordinate {v} out of range")
    return v


def _iter_bits(mask: int) -> Iterator[int]:
    """Yield the set bit positions of ``mask`` in ascending order.

    Large masks are sliced into 4096-bit chunks first so the cost stays
    near-linear in the mask width instead of quadratic.
    """
    chunk_bits = 4096
    base = 0
    while mask:
        chunk = mask & ((1 << chunk_bits) - 1)
        mask >>= chunk_bits
        while chunk:
            low = chunk & -chunk
            yield base + low.bit_length() - 1
            chunk ^= low
        base += chunk_bits


class CellSet:
    """Immutable finite set of unit cells of the integer lattice."""

    __slots__ = ("_x0", "_rows", "_hash")

    def __init__(self, x0: int, rows: dict[int, int], _normalized: bool = False):
        if not _normalized:
            rows = {y: m for y, m in rows.items() if m}
            if rows:
                shift = min((m & -m).bit_length() - 1 for m in rows.values())
                if shift:
                    rows = {y: m >> shift for y, m in rows.items()}
                    x0 += shift
            else:
                x0 = 0
        self._x0 = x0
        self._rows = rows
        self._hash: int | None = None

    # -- construction -------------------------------------------------

    @staticmethod
    def from_cells(cells: Iterable[tuple[int, int]]) -> "CellSet":
        rows: dict[int, int] = {}
        xs: list[int] = []
        pts = list(cells)
        if not pts:
            return EMPTY
        x0 = min(x for x, _ in pts)
        for x, y in pts:
            _check_coord(x)
            _check_coord(y)
            rows[y] = rows.get(y, 0) | (1 << (x - x0))
        return CellSet(x0, rows)

    @staticmethod
    def rect(x0: int, y0: int, width: int, height: int) -> "CellSet":
        if width <= 0 or height <= 0:
            return EMPTY
        mask = (1 << width) - 1
        return CellSet(x0, {y0 + dy: mask for dy in range(height)}, _normalized=True)

    # -- basic queries ------------------------------------------------

    def __bool__(self) -> bool:
        return bool(self._rows)

    def __len__(self) -> int:
        return sum(m.bit_count() for m in self._rows.values())

    @property
    def area(self) -> int:
        return len(self)

    def __contains__(self, cell: tuple[int, int]) -> bool:
        x, y = cell
        m = self._rows.get(y)
        if m is None:
            return False
        i = x - self._x0
        return i >= 0 and (m >> i) & 1 == 1

    def cells(self) -> Iterator[tuple[int, int]]:
        """Cells in lexicographic (y, x) order."""
        for y in sorted(self._rows):
            m = self._rows[y]
            for i in _iter_bits(m):
                yield (self._x0 + i, y)

    def bbox(self) -> tuple[int, int, int, int]:
        """(xmin, ymin, xmax, ymax) of occupied cells; raises on empty."""
        if not self._rows:
            raise ValueError("empty cell set has no bounding box")
        ymin = min(self._rows)
        ymax = max(self._rows)
        xmax = self._x0 + max(m.bit_length() for m in self._rows.values()) - 1
        return (self._x0, ymin, xmax, ymax)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, CellSet):
            return NotImplemented
        return self._x0 == other._x0 and self._rows == other._rows

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self._x0, tuple(sorted(self._rows.items()))))
        return self._hash

    def __repr__(self) -> str:
        n = len(self)
        if n <= 8:
            return f"CellSet({sorted(self.cells())!r})"
        return f"CellSet(<{n} cells, bbox={self.bbox()}>)"

    # -- set algebra ----------------------------------------------------

    def _aligned(self, other: "CellSet") -> tuple[int, dict[int, int], dict[int, int]]:
        """Rebase both row tables onto a common x origin."""
        x0 = min(self._x0, other._x0) if other._rows else self._x0
        if not self._rows:
            x0 = other._x0
        sa = self._x0 - x0
        sb = other._x0 - x0
        ra = self._rows if sa == 0 else {y: m << sa for y, m in self._rows.items()}
        rb = other._rows if sb == 0 else {y: m << sb for y, m in other._rows.items()}
        return x0, ra, rb

    def union(self, other: "CellSet") -> "CellSet":
        x0, ra, rb = self._aligned(other)
        rows = dict(ra)
        for y, m in rb.items():
            rows[y] = rows.get(y, 0) | m
        return CellSet(x0, rows, _normalized=bool(ra))

    def intersection(self, other: "CellSet") -> "CellSet":
        x0, ra, rb = self._aligned(other)
        rows = {y: ra[y] & m for y, m in rb.items() if y in ra}
        return CellSet(x0, rows)

    def difference(self, other: "CellSet") -> "CellSet":
        x0, ra, rb = self._aligned(other)
        rows = {y: (m & ~rb[y]) if y in rb else m for y, m in ra.items()}
        return CellSet(x0, rows)

    def disjoint(self, other: "CellSet") -> bool:
        if len(self._rows) > len(other._rows):
            self, other = other, self
        _, ra, rb = self._aligned(other)
        return all(not (m & rb[y]) for y, m in ra.items() if y in rb)

    __or__ = union
    __and__ = intersection
    __sub__ = difference

    # -- geometry ops ---------------------------------------------------

    def translate(self, v: tuple[int, int]) -> "CellSet":
        dx, dy = v
        if not self._rows:
            return self
        _check_coord(self._x0 + dx)
        xmin, ymin, xmax, ymax = self.bbox()
        _check_coord(xmax + dx)
        _check_coord(ymin + dy)
        _check_coord(ymax + dy)
        return CellSet(
            self._x0 + dx,
            {y + dy: m for y, m in self._rows.items()},
            _normalized=True,
        )

    def rotate180(self) -> "CellSet":
        """Half-turn about the origin: cell (x, y) -> (-x-1, -y-1)."""
        if not self._rows:
            return self
        w = max(m.bit_length() for m in self._rows.values())
        out: dict[int, int] = {}
        for y, m in self._rows.items():
            wy = m.bit_length()
            rev = int(bin(m)[2:][::-1], 2)
            # bit i (x = x0+i) lands at x' = -(x0+i)-1; with the common
            # origin -(x0+w) that is bit w-1-i.
            out[-y - 1] = rev << (w - wy)
        return CellSet(-self._x0 - w, out)

    def wrap(self, width: int, height: int) -> tuple["CellSet", bool]:
        """Reduce all cells mod (width, height) into [0,width)x[0,height).

        Returns (reduced set, collided) where ``collided`` is True when two
        distinct cells landed on the same residue (a torus self-overlap).
        """
        full = (1 << width) - 1
        rows: dict[int, int] = {}
        collided = False
        for y, m in self._rows.items():
            mask = m << (self._x0 % width) if self._x0 % width else m
            folded = 0
            while mask:
                part = mask & full
                if folded & part:
                    collided = True
                folded |= part
                mask >>= width
            yy = y % height
            if rows.get(yy, 0) & folded:
                collided = True
            rows[yy] = rows.get(yy, 0) | folded
        return CellSet(0, rows), collided

    def components(self) -> list["CellSet"]:
        """Edge-connected components, sorted by their minimum (y, x) cell."""
        remaining = {y: m for y, m in self._rows.items()}
        out: list[CellSet] = []
        ys = sorted(remaining)
        for y_seed in ys:
            while remaining.get(y_seed, 0):
                m = remaining[y_seed]
                seed = m & -m
                comp: dict[int, int] = {}
                remaining[y_seed] ^= seed
                frontier = [(y_seed, seed)]
                while frontier:
                    y, grow = frontier.pop()
                    # smear horizontally within the row
                    cur = comp.get(y, 0) | grow
                    avail = remaining.get(y, 0) | cur
                    while True:
                        nxt = (cur | (cur << 1) | (cur >> 1)) & avail
                        if nxt == cur:
                            break
                        cur = nxt
                    new = cur & ~comp.get(y, 0)
                    comp[y] = cur
                    if y in remaining:
                        remaining[y] &= ~cur
                    if not new:
                        continue
                    for yn in (y - 1, y + 1):
                        touch = remaining.get(yn, 0) & new
                        if touch:
                            frontier.append((yn, touch))
                out.append(CellSet(self._x0, comp))

        def first_cell_yx(c: CellSet) -> tuple[int, int]:
            x, y = next(c.cells())
            return (y, x)

        out.sort(key=first_cell_yx)
        return out


EMPTY = CellSet(0, {}, _normalized=True)


# ---------------------------------------------------------------------------
# Placements and regions
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Placement:
    """A named tile translated by (dx, dy)."""

    tile: str
    dx: int
    dy: int


@dataclass(frozen=True)
class Region:
    """Finite universe for partition checks: a box or a torus."""

    kind: str  # "box" | "torus"
    width: int
    height: int
    origin: tuple[int, int] = (0, 0)

    def __post_init__(self):
        if self.kind not in ("box", "torus"):
            raise ValueError(f"unknown region kind {self.kind!r}")
        if self.width < 1 or self.height < 1:
            raise ValueError("region dimensions must be >= 1")

    @property
    def area(self) -> int:
        return self.width * self.height


def parse_region(text: str) -> Region:
    """Parse a region literal like ``box:8x8`` or ``torus:3696x56``."""
    try:
        kind, dims = text.split(":", 1)
        w, h = dims.lower().split("x", 1)
        return Region(kind, int(w), int(h))
    except (ValueError, TypeError) as exc:
        raise ValueError(f"bad region literal {text!r}") from exc


@dataclass(frozen=True)
class PartitionReport:
    ok: bool
    uncovered: CellSet
    overlaps: CellSet


def placement_cells(region: Region, placement: Placement, tiles: dict[str, CellSet]) -> CellSet:
    """Cells a placement occupies inside the region's coordinate frame.

    Torus placements are reduced mod (width, height); a torus self-overlap
    is reported as part of the overlap set by verify_partition.
    """
    if placement.tile not in tiles:
        raise KeyError(f"unknown tile id {placement.tile!r}")
    cs = tiles[placement.tile].translate((placement.dx, placement.dy))
    if region.kind == "torus":
        ox, oy = region.origin
        cs, _ = cs.translate((-ox, -oy)).wrap(region.width, region.height)
        cs = cs.translate((ox, oy))
    return cs


def verify_partition(
    region: Region,
    placements: list[Placement],
    tiles: dict[str, CellSet],
) -> PartitionReport:
    """Check that the placements cover every region cell exactly once.

    Cells covered twice (including torus self-overlaps of a single
    placement, and box placements escaping the box) are reported in
    ``overlaps``; region cells never covered make up ``uncovered``.
    """
    ox, oy = region.origin
    W, H = region.width, region.height
    full = (1 << W) - 1
    covered = [0] * H
    overlap = [0] * H
    outside = EMPTY

    for pl in placements:
        if pl.tile not in tiles:
            raise KeyError(f"unknown tile id {pl.tile!r}")
        tile = tiles[pl.tile]
        base_x = tile._x0 + pl.dx - ox
        if region.kind == "torus":
            for ty, m in tile._rows.items():
                yy = (ty + pl.dy - oy) % H
                mask = m << (base_x % W)
                while mask:
                    part = mask & full
                    overlap[yy] |= covered[yy] & part
                    covered[yy] |= part
                    mask >>= W
        else:
            xmin, ymin, xmax, ymax = tile.bbox()
            fits = (
                base_x >= 0
                and base_x + (xmax - xmin) < W
                and 0 <= ymin + pl.dy - oy
                and ymax + pl.dy - oy < H
            )
            if fits:
                for ty, m in tile._rows.items():
                    y = ty + pl.dy - oy
                    mask = m << base_x
                    overlap[y] |= covered[y] & mask
                    covered[y] |= mask
            else:
                cs = tile.translate((pl.dx, pl.dy))
                box = CellSet.rect(ox, oy, W, H)
                outside = outside | (cs - box)
                for x, y in (cs & box).cells():
                    bit = 1 << (x - ox)
                    yy = y - oy
                    overlap[yy] |= covered[yy] & bit
                    covered[yy] |= bit

    unc_rows = {y: full & ~covered[y] for y in range(H) if full & ~covered[y]}
    ovl_rows = {y: overlap[y] for y in range(H) if overlap[y]}
    uncovered = CellSet(0, unc_rows).translate((ox, oy)) if unc_rows else EMPTY
    overlaps = CellSet(0, ovl_rows).translate((ox, oy)) if ovl_rows else EMPTY
    if outside:
        overlaps = overlaps | outside
    return PartitionReport(not unc_rows and not ovl_rows and not outside, uncovered, overlaps)


# ---------------------------------------------------------------------------
# Boundary words
# ---------------------------------------------------------------------------

_LEFT_TURN = {"R": "U", "U": "L", "L": "D", "D": "R"}
_RIGHT_TURN = {v: k for k, v in _LEFT_TURN.items()}
_STEP = {"R": (1, 0), "L": (-1, 0), "U": (0, 1), "D": (0, -1)}


def has_holes(cs: CellSet) -> bool:
    """True if the complement has a bounded component (4-connectivity)."""
    if not cs:
        return False
    xmin, ymin, xmax, ymax = cs.bbox()
    x0, y0 = xmin - 1, ymin - 1
    w, h = xmax - xmin + 3, ymax - ymin + 3
    free = CellSet.rect(x0, y0, w, h) - cs
    outer_seed = (x0, y0)
    for comp in free.components():
        if outer_seed not in comp:
            return True
    return False


def _edge_has_interior_left(cells: set, v: tuple[int, int], d: str) -> bool:
    x, y = v
    if d == "R":
        return (x, y) in cells and (x, y - 1) not in cells
    if d == "L":
        return (x - 1, y - 1) in cells and (x - 1, y) not in cells
    if d == "U":
        return (x - 1, y) in cells and (x, y) not in cells
    return (x, y - 1) in cells and (x - 1, y - 1) not in cells  # "D"


def boundary_word(cs: CellSet) -> str:
    """Counter-clockwise boundary word over {U, D, L, R}.

    The traversal starts at the lexicographically least boundary vertex
    and keeps the interior on the left, so the word is deterministic and
    its length equals the perimeter.  Requires an edge-connected set with
    no holes.
    """
    if not cs:
        raise BoundaryError("empty cell set has no boundary")
    if len(cs.components()) != 1:
        raise BoundaryError("cell set is disconnected")
    if has_holes(cs):
        raise BoundaryError("cell set has holes")

    cells = set(cs.cells())
    perimeter = 0
    for (x, y) in cells:
        perimeter += (x + 1, y) not in cells
        perimeter += (x - 1, y) not in cells
        perimeter += (x, y + 1) not in cells
        perimeter += (x, y - 1) not in cells

    start = min((x, y) for x, y in cells)
    # At the least vertex the only valid interior-left departure is R.
    v = start
    d = "R"
    assert _edge_has_interior_left(cells, v, d)
    word: list[str] = []
    while True:
        word.append(d)
        x, y = v
        sx, sy = _STEP[d]
        v = (x + sx, y + sy)
        if v == start:
            break
        nd = _LEFT_TURN[d]
        for _ in range(4):
            if _edge_has_interior_left(cells, v, nd):
                break
            nd = _RIGHT_TURN[nd]
        else:
            raise BoundaryError(f"boundary traversal stuck at {v}")
        d = nd
    if len(word) != perimeter:
        raise BoundaryError("boundary is not a single closed curve")
    return "".join(word)


# ---------------------------------------------------------------------------
# File formats
# ---------------------------------------------------------------------------


def format_tile(name: str, cs: CellSet) -> str:
    """Polyomino file body: bit-exact, cells in (y, x) order, LF lines."""
    lines = [f"tile {name}"]
    lines.extend(f"cell {x} {y}" for x, y in cs.cells())
    return "\n".join(lines) + "\n"


def parse_tiles(text: str) -> list[tuple[str, CellSet]]:
    """Parse one or more ``tile``/``cell`` sections."""
    out: list[tuple[str, CellSet]] = []
    name = None
    cells: list[tuple[int, int]] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if parts[0] == "tile" and len(parts) == 2:
            if name is not None:
                out.append((name, CellSet.from_cells(cells)))
            name = parts[1]
            cells = []
        elif parts[0] == "cell" and len(parts) == 3:
            if name is None:
                raise ValueError(f"line {lineno}: cell before tile header")
            cells.append((int(parts[1]), int(parts[2])))
        else:
            raise ValueError(f"line {lineno}: bad polyomino line {line!r}")
    if name is not None:
        out.append((name, CellSet.from_cells(cells)))
    return out


def format_placements(placements: list[Placement]) -> str:
    return "".join(f"place {p.tile} {p.dx} {p.dy}\n" for p in placements)


def parse_placements(text: str) -> list[Placement]:
    out: list[Placement] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if parts[0] != "place" or len(parts) != 4:
            raise ValueError(f"line {lineno}: bad placement line {line!r}")
        out.append(Placement(parts[1], int(parts[2]), int(parts[3])))
    return out
