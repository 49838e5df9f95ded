"""Construct the four tiles simulating a Wang set: tiny filler, linker,
locator, and encoder.

Sizes in building blocks, for a set of n tiles, m colors, t = ceil(log2 m):

* a slot (one half of a simulated tile) is t+2 blocks: marker, t
  encoding blocks, marker;
* an encoding segment holds 2^(3n-1) slots, SEG = 2^(3n-1)*(t+2) blocks;
* each concave area of the locator, and the encoder's central padding
  segment, is GAP = SEG - t - 1 blocks, so no concave area can swallow a
  whole encoding segment;
* a locator row is LOC = 2*GAP + 1 blocks and the encoder is
  ENC = 2*SEG + GAP blocks, which puts the two portions of one simulated
  tile exactly LOC blocks apart;
* the lattice repeats every PER = 2*(LOC + t) blocks.

Tile i (1-based) occupies the three slots 2^(3(i-1)+j), j = 0..2, of both
encoding segments; power-of-two slot indices make any two distinct slot
differences unequal, which is what pins down encoder alignment later.
"""

from __future__ import annotations

from dataclasses import dataclass

from .blocks import BLANK, BlockSpec, SideLabel, build_block, build_row, label
from .geometry import CellSet
from .stamps import BLOCK_H, BLOCK_W, plus
from .wang import WangSet

# Construction sizes grow like 8^n; refuse absurd inputs instead of
# silently allocating forever.
MAX_SEG_BLOCKS = 2**24


class ReductionSizeError(ValueError):
    pass


@dataclass(frozen=True)
class ReductionParams:
    n: int
    m: int
    t: int
    seg: int  # encoding-segment length, blocks
    gap: int  # concave/padding length, blocks
    loc: int  # locator row length, blocks
    enc: int  # encoder length, blocks
    per: int  # lattice period, blocks

    @property
    def connector_col(self) -> int:
        return self.gap

    @property
    def slots_per_segment(self) -> int:
        return self.seg // (self.t + 2)

    def as_text(self) -> str:
        return (
            f"n={self.n} m={self.m} t={self.t} SEG={self.seg} GAP={self.gap} "
            f"LOC={self.loc} ENC={self.enc} PER={self.per}"
        )


def params(ws: WangSet) -> ReductionParams:
    n, m, t = ws.n, ws.m, ws.t
    seg = 2 ** (3 * n - 1) * (t + 2)
    if seg > MAX_SEG_BLOCKS:
        raise ReductionSizeError(
            f"encoding segment of {seg} blocks exceeds the supported size"
        )
    gap = seg - t - 1
    loc = 2 * gap + 1
    enc = 2 * seg + gap
    per = 2 * (loc + t)
    assert loc == 2 ** (3 * n) * (t + 2) - 2 * t - 1
    assert enc == 3 * 2 ** (3 * n - 1) * (t + 2) - t - 1
    return ReductionParams(n, m, t, seg, gap, loc, enc, per)


def color_bits(c: int, t: int) -> list[str]:
    """Binary expansion of a color index, MSB first, 0 -> N and 1 -> F."""
    if not 0 <= c < 2**t:
        raise ValueError(f"color index {c} out of range for {t} bits")
    return ["F" if (c >> (t - 1 - k)) & 1 else "N" for k in range(t)]


def slot_map(ws: WangSet) -> dict[int, tuple[int, int]]:
    """Slot index -> (tile index, copy): tile i sits at 2^(3(i-1)+j)."""
    out: dict[int, tuple[int, int]] = {}
    for i in range(ws.n):
        for j in range(3):
            out[2 ** (3 * i + j)] = (i, j)
    return out


MARKER_LEFT = label("M", None, "L")
MARKER_RIGHT = label("M", None, "R")


def encoder_specs(ws: WangSet) -> list[BlockSpec]:
    """Per-block labels of the encoder row.

    Left encoding segment, central padding, right encoding segment.  In
    a used slot the left portion encodes (nw, sw) and the right portion
    encodes (ne, se), as (north, south) mid-bump bit strings; unused
    slots and the padding are blank.
    """
    p = params(ws)
    smap = slot_map(ws)
    blank = BlockSpec(BLANK, BLANK)
    marker_l = BlockSpec(MARKER_LEFT, MARKER_LEFT)
    marker_r = BlockSpec(MARKER_RIGHT, MARKER_RIGHT)

    def segment(left: bool) -> list[BlockSpec]:
        out: list[BlockSpec] = []
        for s in range(1, p.slots_per_segment + 1):
            if s not in smap:
                out.extend([blank] * (p.t + 2))
                continue
            tile = ws.tiles[smap[s][0]]
            north_color, south_color = (tile.nw, tile.sw) if left else (tile.ne, tile.se)
            nbits = color_bits(north_color, p.t)
            sbits = color_bits(south_color, p.t)
            out.append(marker_l)
            for k in range(p.t):
                out.append(
                    BlockSpec(label("C", nbits[k], "A"), label("C", sbits[k], "A"))
                )
            out.append(marker_r)
        return out

    specs = segment(left=True) + [blank] * p.gap + segment(left=False)
    assert len(specs) == p.enc
    return specs


SELECTOR_RIGHT = label("R", None, "M")  # leftmost locator blocks
SELECTOR_LEFT = label("L", None, "M")  # rightmost locator blocks
OUTER = label("", None, "CM")
CONCAVE = label("", None, "ACM")


@dataclass(frozen=True)
class LocatorLayout:
    bottom: tuple[BlockSpec, ...]
    top: tuple[BlockSpec, ...]
    connector_col: int


def locator_specs(ws: WangSet) -> LocatorLayout:
    """Block labels of the locator's two rows.

    Row ends are selectors labeled on both sides; other blocks carry the
    plain outer label on the outer boundary and the concave label on the
    side facing the slit.  The column over/under the central connector
    is fused flat on that side.
    """
    p = params(ws)

    def row(bottom: bool) -> tuple[BlockSpec, ...]:
        outer_side, gap_side = ("south", "north") if bottom else ("north", "south")

        def make(col: int) -> BlockSpec:
            if col == 0:
                return BlockSpec(SELECTOR_RIGHT, SELECTOR_RIGHT)
            if col == p.loc - 1:
                return BlockSpec(SELECTOR_LEFT, SELECTOR_LEFT)
            sides: dict[str, SideLabel | None] = {outer_side: OUTER}
            sides[gap_side] = None if col == p.connector_col else CONCAVE
            return BlockSpec(sides.get("north"), sides.get("south"))

        return tuple(make(c) for c in range(p.loc))

    return LocatorLayout(row(bottom=True), row(bottom=False), p.connector_col)


@dataclass(frozen=True)
class ReductionOutput:
    tiles: dict[str, CellSet]  # filler, linker, locator, encoder
    params: ReductionParams
    slot_map: dict[int, tuple[int, int]]
    encoder_specs: tuple[BlockSpec, ...]
    locator: LocatorLayout

    @property
    def left_exposed_cols(self) -> range:
        """Block columns of the left exposed slot, locator-origin relative."""
        return range(self.params.loc, self.params.loc + self.params.t)

    @property
    def right_exposed_cols(self) -> range:
        return range(2 * self.params.loc + self.params.t, 2 * self.params.loc + 2 * self.params.t)


TILE_NAMES = ("filler", "linker", "locator", "encoder")


def reduce(ws: WangSet) -> ReductionOutput:
    """Build all four tiles plus layout metadata.

    The tiny filler and the linker are fixed; the locator is its two
    rows at y = 0 and 28 fused through the flat connector block at
    (connector column, y = 14); the encoder is a single fused row.
    """
    p = params(ws)
    layout = locator_specs(ws)
    enc_specs = encoder_specs(ws)

    filler = plus(0, 0)
    linker = build_block(BlockSpec(label("A", None, "C"), label("A", None, "C")))
    connector = CellSet.rect(p.connector_col * BLOCK_W, BLOCK_H, BLOCK_W, BLOCK_H)
    locator = (
        build_row(list(layout.bottom))
        | connector
        | build_row(list(layout.top)).translate((0, 2 * BLOCK_H))
    )
    encoder = build_row(enc_specs)

    tiles = {
        "filler": filler,
        "linker": linker,
        "locator": locator,
        "encoder": encoder,
    }
    return ReductionOutput(tiles, p, slot_map(ws), tuple(enc_specs), layout)


def format_params(p: ReductionParams) -> str:
    lines = [
        f"n {p.n}",
        f"m {p.m}",
        f"t {p.t}",
        f"SEG {p.seg}",
        f"GAP {p.gap}",
        f"LOC {p.loc}",
        f"ENC {p.enc}",
        f"PER {p.per}",
    ]
    return "\n".join(lines) + "\n"


def format_slots(ws: WangSet, smap: dict[int, tuple[int, int]]) -> str:
    lines = []
    for k in sorted(smap):
        i, j = smap[k]
        lines.append(f"slot {k} tile {i + 1} copy {j} name {ws.tiles[i].name}")
    return "\n".join(lines) + "\n"
