"""Side labels, building-block synthesis, and the stacking criterion.

A side of a building block is described by a label ``{bumps|mid|dents}``:
plus bumps on the bump segment, an optional N/F plus bump on the handle,
and plus dents on the dent segment.  A block spec holds an optional label
per side; an absent side is a flat edge with no handle at all, used where
the edge ends up in the interior of a fused tile.

``stackable`` is the label-level criterion for two blocks meeting
north-to-south without overlap; ``stack_residual`` evaluates the same
question geometrically and also reports the leftover plus-shaped holes,
so the two can be checked against each other exhaustively.
"""

from __future__ import annotations

import functools
import re
from dataclasses import dataclass

from . import stamps
from .geometry import CellSet
from .stamps import BLOCK_H, BLOCK_W, LETTERS


@dataclass(frozen=True)
class SideLabel:
    """One side's features: bump letters, optional mid (N/F), dent letters."""

    bumps: frozenset[str]
    mid: str | None
    dents: frozenset[str]

    def __post_init__(self):
        for s in (self.bumps, self.dents):
            bad = set(s) - set(LETTERS)
            if bad:
                raise ValueError(f"bad position letters {sorted(bad)}")
        if self.mid is not None and self.mid not in stamps.MIDS:
            raise ValueError(f"bad mid letter {self.mid!r}")

    def __str__(self) -> str:
        return format_label(self)


def label(bumps: str = "", mid: str | None = None, dents: str = "") -> SideLabel:
    return SideLabel(frozenset(bumps), mid, frozenset(dents))


BLANK = label()

_LABEL_RE = re.compile(r"^\{([^{}|]*)\|([^{}|]*)\|([^{}|]*)\}$")


def _parse_letters(part: str, lineno_msg: str) -> frozenset[str]:
    if not part:
        return frozenset()
    letters = part.split(",")
    if len(set(letters)) != len(letters):
        raise ValueError(f"repeated letters in {lineno_msg}")
    for ch in letters:
        if ch not in LETTERS:
            raise ValueError(f"bad position letter {ch!r} in {lineno_msg}")
    return frozenset(letters)


def parse_label(text: str) -> SideLabel:
    """Parse ``{A||C}``-style notation; ``{||}`` is the blank label."""
    m = _LABEL_RE.match(text)
    if not m:
        raise ValueError(f"malformed side label {text!r}")
    bumps, mid, dents = m.group(1), m.group(2), m.group(3)
    if mid not in ("", "N", "F"):
        raise ValueError(f"middle part must be empty, N or F: {text!r}")
    return SideLabel(
        _parse_letters(bumps, text),
        mid or None,
        _parse_letters(dents, text),
    )


def format_label(side: SideLabel) -> str:
    return "{%s|%s|%s}" % (
        ",".join(sorted(side.bumps)),
        side.mid or "",
        ",".join(sorted(side.dents)),
    )


@dataclass(frozen=True)
class BlockSpec:
    """A building block: optional north and south side labels.

    At least one side must be present; an absent side means the edge is
    flat (no handle, no dents) because it faces the interior of a fused
    tile.
    """

    north: SideLabel | None
    south: SideLabel | None

    def __post_init__(self):
        if self.north is None and self.south is None:
            raise ValueError("a block needs at least one labeled side")


def spec(north: str | None, south: str | None) -> BlockSpec:
    """Convenience constructor from label texts (None = absent side)."""
    return BlockSpec(
        parse_label(north) if north is not None else None,
        parse_label(south) if south is not None else None,
    )


def format_block_line(bs: BlockSpec) -> str:
    n = format_label(bs.north) if bs.north is not None else "-"
    s = format_label(bs.south) if bs.south is not None else "-"
    return f"block {n} {s}"


def parse_block_line(line: str) -> BlockSpec:
    parts = line.split()
    if len(parts) != 3 or parts[0] != "block":
        raise ValueError(f"bad block line {line!r}")
    n = None if parts[1] == "-" else parse_label(parts[1])
    s = None if parts[2] == "-" else parse_label(parts[2])
    return BlockSpec(n, s)


def _side_features(side: str, lab: SideLabel) -> tuple[CellSet, CellSet]:
    """(added bumps, carved voids) of one labeled side, block-local."""
    add = stamps.stamp("handle-bump", side)
    carve = stamps.stamp("handle-void", side)
    for letter in lab.bumps:
        add = add | stamps.plus_bump(side, stamps.position_column(side, letter, "bump"))
    if lab.mid is not None:
        add = add | stamps.stamp(f"mid-{lab.mid}", side)
    for letter in lab.dents:
        carve = carve | stamps.plus_dent_void(side, stamps.position_column(side, letter, "dent"))
    return add, carve


@functools.lru_cache(maxsize=65536)
def build_block(bs: BlockSpec) -> CellSet:
    """Cell set of a building block in block-local coordinates.

    The base rectangle is [0,84) x [0,14); each present side contributes
    its handle bump, its handle-dent void (the shared interior holes are
    carved once), its lettered plus bumps and dents, and the optional
    mid bump.
    """
    add = CellSet.from_cells([])
    carve = add
    if bs.north is not None:
        a, c = _side_features("north", bs.north)
        add, carve = add | a, carve | c
    if bs.south is not None:
        a, c = _side_features("south", bs.south)
        add, carve = add | a, carve | c
    return (stamps.BASE - carve) | add


def stackable(upper_south: SideLabel, lower_north: SideLabel) -> bool:
    """Label criterion for stacking one block directly on another.

    With the upper block's south side labeled S and the lower block's
    north side labeled T, the placement at vertical offset 14 is
    overlap-free iff T's bumps are dented in S and S's bumps are dented
    in T.  Mid parts never collide between just two blocks, so they are
    ignored here.
    """
    return lower_north.bumps <= upper_south.dents and upper_south.bumps <= lower_north.dents


@dataclass(frozen=True)
class StackResult:
    overlap: bool
    holes: tuple[tuple[int, int], ...]  # anchors of residual plus voids


def stack_residual(upper: BlockSpec, lower: BlockSpec) -> StackResult:
    """Geometric oracle for stacking ``upper`` at (0, 14) over ``lower``.

    Returns the overlap flag plus the anchors of all residual plus-shaped
    voids in the interface band (unfilled dents and unclaimed interior
    holes).  Both facing sides must be labeled.
    """
    if lower.north is None or upper.south is None:
        raise ValueError("stack_residual needs labeled facing sides")
    lo = build_block(lower)
    up = build_block(upper).translate((0, BLOCK_H))
    if not lo.disjoint(up):
        return StackResult(True, ())

    _, lo_carve = _side_features("north", lower.north)
    _, up_carve = _side_features("south", upper.south)
    voids = (lo_carve | up_carve.translate((0, BLOCK_H))) - lo - up
    anchors = []
    for comp in voids.components():
        x, y = next(comp.cells())  # least (y, x) cell = plus stem bottom
        if comp != stamps.plus(x, y):
            raise AssertionError(f"non-plus residual void at {(x, y)}")
        anchors.append((x, y))
    return StackResult(False, tuple(sorted(anchors)))


def build_row(specs: list[BlockSpec]) -> CellSet:
    """Fuse a row of blocks at x offsets 0, 84, 168, ...

    Vertical internal edges carry no features, so horizontally adjacent
    blocks simply abut.  Runs of equal specs are assembled by doubling so
    long padding stretches stay cheap.
    """
    if not specs:
        raise ValueError("empty block row")
    runs: list[tuple[BlockSpec, int]] = []
    for bs in specs:
        if runs and runs[-1][0] == bs:
            runs[-1] = (bs, runs[-1][1] + 1)
        else:
            runs.append((bs, 1))
    out = CellSet.from_cells([])
    x = 0
    for bs, count in runs:
        out = out | _repeat_block(bs, count).translate((x, 0))
        x += BLOCK_W * count
    return out


@functools.lru_cache(maxsize=4096)
def _repeat_block(bs: BlockSpec, count: int) -> CellSet:
    if count == 1:
        return build_block(bs)
    half = _repeat_block(bs, count // 2)
    out = half | half.translate((BLOCK_W * (count // 2), 0))
    if count % 2:
        out = out | build_block(bs).translate((BLOCK_W * (count - 1), 0))
    return out
