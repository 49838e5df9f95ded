"""Assemble the four tiles into a verified torus tiling, and decode back.

The locators form a rigid lattice: level y (one per encoder row) places a
locator every PER blocks, shifted LOC+t blocks right of level y-1.  That
stagger leaves two width-t holes per period in every even block row, and
the holes of consecutive levels line up in columns, so a linker dropped
into each hole relays the N/F bit constraints between the exposed
encoding blocks of the encoders below and above it.  Each encoder slides
inside the slit of its locator; starting it LOC-1-(k-1)(t+2) blocks past
the locator origin exposes exactly slot k on both sides.  The remaining
odd-row columns take GAP-1 linkers per period, and every leftover void is
a plus for the tiny filler.

Because each level shifts by half a period, going up R rows shifts the
lattice framing by R/2 periods; the flat grid adjacency used by the
solver therefore closes up on the torus exactly when R is a multiple of
2Q, which ``assemble`` requires.
"""

from __future__ import annotations

from dataclasses import dataclass

from .geometry import (
    EMPTY,
    CellSet,
    Placement,
    Region,
    placement_cells,
    verify_partition,
)
from .reduction import ReductionOutput, color_bits, reduce
from .stamps import BLOCK_H, BLOCK_W, plus
from .wang import DiamondTiling, WangSet


class AssemblyError(ValueError):
    pass


class AssemblyClosureError(AssemblyError):
    """Row/period combination that cannot close on a torus."""


class SlotSelectionError(AssemblyError):
    """No copy assignment satisfies the neighbor rule (correctness alarm)."""


class HoleShapeError(AssemblyError):
    def __init__(self, cells: list[tuple[int, int]]):
        super().__init__(f"residual hole is not a plus: {sorted(cells)}")
        self.cells = cells


class AssemblyOverlapError(AssemblyError):
    def __init__(self, first: Placement, second: Placement, cells: CellSet):
        sample = sorted(cells.cells())[:6]
        super().__init__(
            f"placement {second} overlaps {first} at {sample}"
            + ("..." if cells.area > 6 else "")
        )
        self.first = first
        self.second = second
        self.cells = cells


class DecodeError(ValueError):
    pass


@dataclass(frozen=True)
class Lattice:
    """Torus frame for R encoder rows and Q lattice periods."""

    rows: int
    periods: int
    per: int  # blocks
    shift: int  # blocks moved right per level = LOC + t

    @property
    def width_blocks(self) -> int:
        return self.periods * self.per

    @property
    def width(self) -> int:
        return self.width_blocks * BLOCK_W

    @property
    def height(self) -> int:
        return self.rows * 2 * BLOCK_H

    def offset_blocks(self, y: int) -> int:
        return (y * self.shift) % self.width_blocks

    def locator_origin(self, y: int, p: int) -> int:
        return (self.offset_blocks(y) + p * self.per) % self.width_blocks

    def region(self) -> Region:
        return Region("torus", self.width, self.height)


@dataclass
class AssemblyPlan:
    lattice: Lattice
    slots: list[list[int]]  # exposed slot index per (y, p)
    placements: list[Placement]
    census: dict[str, int]

    def census_line(self) -> str:
        c = self.census
        return (
            f"locators={c['locator']} encoders={c['encoder']} "
            f"linkers={c['linker']} fillers={c['filler']}"
        )


def _slots_by_copy(slot_map: dict[int, tuple[int, int]]) -> dict[int, list[int]]:
    out: dict[int, list[int]] = {}
    for k, (i, j) in slot_map.items():
        out.setdefault(i, [0, 0, 0])[j] = k
    return out


def choose_slots(
    tiling: DiamondTiling, slot_map: dict[int, tuple[int, int]]
) -> list[list[int]]:
    """Pick an exposed slot per lattice site.

    Rows are processed upward; row 0 takes each tile's first copy, and
    every later site takes the smallest copy whose slot differs from the
    already-fixed slots of both lower neighbors (y-1, p) and (y-1, p+1).
    Three copies against two exclusions always leave a choice.  On the
    wrap row the same rule is re-checked against row R-1 and repaired
    locally; if a local repair is impossible the whole grid falls back to
    the alternating schedule copy = y mod 2, which satisfies every
    constraint outright for even R.
    """
    R, Q = tiling.rows, tiling.periods
    g = tiling.grid
    copies = _slots_by_copy(slot_map)
    k = [[0] * Q for _ in range(R)]
    for p in range(Q):
        k[0][p] = copies[g[0][p]][0]
    for y in range(1, R):
        for p in range(Q):
            banned = {k[y - 1][p], k[y - 1][(p + 1) % Q]}
            options = [kk for kk in copies[g[y][p]] if kk not in banned]
            if not options:
                raise SlotSelectionError(f"no slot available at ({y}, {p})")
            k[y][p] = options[0]

    def wrap_ok(p: int) -> bool:
        return k[0][p] not in (k[R - 1][p], k[R - 1][(p + 1) % Q])

    for p in range(Q):
        if wrap_ok(p):
            continue
        banned = {
            k[R - 1][p],
            k[R - 1][(p + 1) % Q],
            k[1][p],
            k[1][(p - 1) % Q],
        }
        options = [kk for kk in copies[g[0][p]] if kk not in banned]
        if options:
            k[0][p] = options[0]
        else:
            # provably valid fallback: copies alternate with row parity
            for y in range(R):
                for pp in range(Q):
                    k[y][pp] = copies[g[y][pp]][y % 2]
            break

    for y in range(R):
        for p in range(Q):
            if k[y][p] in (k[(y - 1) % R][p], k[(y - 1) % R][(p + 1) % Q]):
                raise SlotSelectionError(f"slot conflict at ({y}, {p})")
    return k


class _Coverage:
    """Incremental torus occupancy with first-conflict attribution."""

    def __init__(self, region: Region, tiles: dict[str, CellSet]):
        self.region = region
        self.tiles = tiles
        self.rows = [0] * region.height
        self.full = (1 << region.width) - 1
        self.placed: list[Placement] = []

    def _row_masks(self, pl: Placement):
        tile = self.tiles[pl.tile]
        W, H = self.region.width, self.region.height
        base_x = (tile._x0 + pl.dx) % W
        merged: dict[int, int] = {}
        for ty, m in tile._rows.items():
            y = (ty + pl.dy) % H
            mask = m << base_x
            folded = merged.get(y, 0)
            while mask:
                part = mask & self.full
                if folded & part:
                    raise AssemblyOverlapError(pl, pl, CellSet(0, {y: folded & part}))
                folded |= part
                mask >>= W
            merged[y] = folded
        return merged

    def add(self, pl: Placement):
        masks = self._row_masks(pl)
        conflict = {y: self.rows[y] & m for y, m in masks.items() if self.rows[y] & m}
        if conflict:
            cells = CellSet(0, conflict)
            for earlier in self.placed:
                if not placement_cells(self.region, earlier, self.tiles).disjoint(cells):
                    raise AssemblyOverlapError(earlier, pl, cells)
            raise AssemblyOverlapError(pl, pl, cells)
        for y, m in masks.items():
            self.rows[y] |= m
        self.placed.append(pl)

    def uncovered_rows(self) -> dict[int, int]:
        return {
            y: self.full & ~m for y, m in enumerate(self.rows) if self.full & ~m
        }


def assemble(
    ws: WangSet, tiling: DiamondTiling, out: ReductionOutput | None = None
) -> tuple[AssemblyPlan, Region]:
    """Place locators, encoders, linkers and fillers for a Wang tiling.

    Raises AssemblyOverlapError as soon as two placements collide; for a
    valid input tiling the construction must succeed, so an overlap means
    either an invalid tiling (the intended negative signal) or a
    construction bug.
    """
    if out is None:
        out = reduce(ws)
    p = out.params
    R, Q = tiling.rows, tiling.periods
    if R % 2:
        raise AssemblyClosureError("row count must be even")
    if R % (2 * Q):
        raise AssemblyClosureError(
            f"lattice monodromy: need rows divisible by 2*periods ({2 * Q}), got {R}"
        )
    lat = Lattice(R, Q, p.per, p.loc + p.t)
    region = lat.region()
    slots = choose_slots(tiling, out.slot_map)

    cov = _Coverage(region, out.tiles)
    Wb = lat.width_blocks

    def block_col(c: int) -> int:
        return (c % Wb) * BLOCK_W

    for y in range(R):
        for q in range(Q):
            cov.add(Placement("locator", block_col(lat.locator_origin(y, q)), 28 * y))

    starts: dict[tuple[int, int], int] = {}
    for y in range(R):
        for q in range(Q):
            origin = lat.locator_origin(y, q)
            srel = p.loc - 1 - (slots[y][q] - 1) * (p.t + 2)
            starts[(y, q)] = srel
            cov.add(Placement("encoder", block_col(origin + srel), 28 * y + 14))

    linkers = 0
    for y in range(R):
        for q in range(Q):
            origin = lat.locator_origin(y, q)
            srel = starts[(y, q)]
            for c in range(p.gap + 1, srel):
                cov.add(Placement("linker", block_col(origin + c), 28 * y + 14))
                linkers += 1
            for c in range(srel + p.enc, p.per + p.gap):
                cov.add(Placement("linker", block_col(origin + c), 28 * y + 14))
                linkers += 1
            # the two width-t holes per period in the even block row below
            for i in range(p.t):
                cov.add(Placement("linker", block_col(origin + p.loc + i), 28 * y))
                cov.add(Placement("linker", block_col(origin - p.t + i), 28 * y))
                linkers += 2

    placements = fill_holes(region, cov, out.tiles)
    fillers = sum(1 for pl in placements if pl.tile == "filler")
    census = {
        "locator": R * Q,
        "encoder": R * Q,
        "linker": linkers,
        "filler": fillers,
    }
    plan = AssemblyPlan(lat, slots, placements, census)
    return plan, region


def fill_holes(
    region: Region,
    placements: "list[Placement] | _Coverage",
    tiles: dict[str, CellSet],
    filler_name: str = "filler",
) -> list[Placement]:
    """Fill every residual void with a tiny filler.

    Every connected uncovered component must be a translate of the plus
    (possibly wrapped around the torus); anything else raises
    HoleShapeError listing the cells.  Returns the extended placement
    list.
    """
    if isinstance(placements, _Coverage):
        cov = placements
    else:
        cov = _Coverage(region, tiles)
        for pl in placements:
            cov.add(pl)

    W, H = region.width, region.height
    free: set[tuple[int, int]] = set()
    for y, mask in cov.uncovered_rows().items():
        chunk_bits = 4096
        base = 0
        while mask:
            chunk = mask & ((1 << chunk_bits) - 1)
            mask >>= chunk_bits
            while chunk:
                low = chunk & -chunk
                free.add((base + low.bit_length() - 1, y))
                chunk ^= low
            base += chunk_bits

    plus_cells = sorted(plus(0, 0).cells(), key=lambda c: (c[1], c[0]))
    fillers: list[Placement] = []
    seen: set[tuple[int, int]] = set()
    for start in sorted(free, key=lambda c: (c[1], c[0])):
        if start in seen:
            continue
        comp = {start}
        stack = [start]
        while stack:
            x, y = stack.pop()
            for nx, ny in ((x + 1, y), (x - 1, y), (x, y + 1), (x, y - 1)):
                if region.kind == "torus":
                    nx, ny = nx % W, ny % H
                c = (nx, ny)
                if c in free and c not in comp:
                    comp.add(c)
                    stack.append(c)
        seen |= comp
        anchor = None
        if len(comp) == 9:
            cmin = min(comp, key=lambda c: (c[1], c[0]))
            for rx, ry in plus_cells:
                ax, ay = cmin[0] - rx, cmin[1] - ry
                cand = {
                    ((ax + px) % W, (ay + py) % H)
                    if region.kind == "torus"
                    else (ax + px, ay + py)
                    for px, py in plus_cells
                }
                if cand == comp:
                    anchor = (ax % W, ay % H) if region.kind == "torus" else (ax, ay)
                    break
        if anchor is None:
            raise HoleShapeError(sorted(comp))
        fillers.append(Placement(filler_name, anchor[0], anchor[1]))

    for pl in fillers:
        cov.add(pl)
    return list(cov.placed)


# ---------------------------------------------------------------------------
# Decoding
# ---------------------------------------------------------------------------


def _probe_mid(encoder: CellSet, block: int, side: str) -> str:
    """Read the N/F bit of one encoding block off the encoder's own cells."""
    bx = block * BLOCK_W
    if side == "north":
        is_n = (bx + 42, 16) in encoder
        is_f = (bx + 41, 21) in encoder
    else:
        is_n = (bx + 41, -7) in encoder
        is_f = (bx + 42, -12) in encoder
    if is_n == is_f:
        raise DecodeError(f"block {block} has no unambiguous {side} mid bump")
    return "N" if is_n else "F"


def decode(
    plan_or_placements: "AssemblyPlan | list[Placement]",
    out: ReductionOutput,
    region: Region | None = None,
) -> DiamondTiling:
    """Recover the simulated Wang tiling from an assembly.

    Only the locator lattice and the encoder start columns are used:
    slot k = (LOC - 1 - (start - origin)) / (t+2) + 1 must be a
    power-of-two slot, which names the simulated tile.  The N/F bits of
    the exposed encoding blocks are then read straight off the encoder
    tile's cells and cross-checked against that tile's colors.
    """
    if isinstance(plan_or_placements, AssemblyPlan):
        placements = plan_or_placements.placements
        region = plan_or_placements.lattice.region()
    else:
        placements = plan_or_placements
        if region is None:
            raise ValueError("decoding a raw placement list needs the region")

    p = out.params
    W = region.width
    if W % (p.per * BLOCK_W):
        raise DecodeError("region width is not a whole number of lattice periods")
    Wb = W // BLOCK_W
    Q = Wb // p.per

    locator_cols: dict[int, list[int]] = {}
    encoder_starts: dict[int, list[int]] = {}
    for pl in placements:
        if pl.tile == "locator":
            if pl.dy % 28 or pl.dx % BLOCK_W:
                raise DecodeError(f"locator off the lattice grid: {pl}")
            locator_cols.setdefault(pl.dy // 28, []).append(pl.dx // BLOCK_W)
        elif pl.tile == "encoder":
            if (pl.dy - 14) % 28 or pl.dx % BLOCK_W:
                raise DecodeError(f"encoder off the lattice grid: {pl}")
            encoder_starts.setdefault((pl.dy - 14) // 28, []).append(pl.dx // BLOCK_W)

    R = region.height // 28
    if sorted(locator_cols) != list(range(R)) or sorted(encoder_starts) != list(range(R)):
        raise DecodeError("placements do not contain the full locator lattice")

    grid: list[list[int]] = [[-1] * Q for _ in range(R)]
    for y in range(R):
        origins = sorted(c % Wb for c in locator_cols[y])
        if len(origins) != Q:
            raise DecodeError(f"row {y}: expected {Q} locators, got {len(origins)}")
        off = y * (p.loc + p.t) % Wb
        for s_abs in encoder_starts[y]:
            home = None
            for origin in origins:
                d = (s_abs - origin) % Wb
                if p.gap + 1 <= d <= 2 * p.gap:
                    home = (origin, d)
                    break
            if home is None:
                raise DecodeError(f"encoder at column {s_abs} sits in no locator slit")
            origin, d = home
            num = p.loc - 1 - d
            if num % (p.t + 2):
                raise DecodeError(f"encoder start {s_abs} not slot-aligned")
            k = num // (p.t + 2) + 1
            if k not in out.slot_map:
                raise DecodeError(f"exposed slot {k} is not a power of two")
            tile_idx, _copy = out.slot_map[k]
            q = ((origin - off) % Wb) // p.per
            if ((origin - off) % Wb) % p.per:
                raise DecodeError(f"locator at column {origin} off the rigid lattice")
            if grid[y][q] != -1:
                raise DecodeError(f"two encoders decode to site ({y}, {q})")
            grid[y][q] = tile_idx

            nw, ne, sw, se = _tile_colors(out, tile_idx)
            enc = out.tiles["encoder"]
            base = (k - 1) * (p.t + 2) + 1
            for seg, (nc, sc) in (
                (0, (nw, sw)),
                (p.seg + p.gap, (ne, se)),
            ):
                nbits = [_probe_mid(enc, seg + base + i, "north") for i in range(p.t)]
                sbits = [_probe_mid(enc, seg + base + i, "south") for i in range(p.t)]
                if nbits != color_bits(nc, p.t) or sbits != color_bits(sc, p.t):
                    raise DecodeError(
                        f"mid bumps of slot {k} disagree with the slot table"
                    )

    if any(v == -1 for row in grid for v in row):
        raise DecodeError("some lattice sites have no encoder")
    return DiamondTiling(R, Q, tuple(tuple(row) for row in grid))


def _tile_colors(out: ReductionOutput, tile_idx: int) -> tuple[int, int, int, int]:
    """(nw, ne, sw, se) of a simulated tile, read back from encoder specs."""
    p = out.params
    k = 2 ** (3 * tile_idx)
    base = (k - 1) * (p.t + 2) + 1

    def bits_at(seg: int, side: str) -> int:
        val = 0
        for i in range(p.t):
            bs = out.encoder_specs[seg + base + i]
            lab = bs.north if side == "north" else bs.south
            val = (val << 1) | (1 if lab.mid == "F" else 0)
        return val

    right = p.seg + p.gap
    return (
        bits_at(0, "north"),
        bits_at(right, "north"),
        bits_at(0, "south"),
        bits_at(right, "south"),
    )
