"""Fixed cell-level feature stamps for the 84x14 building block.

Every decorated block is composed from the constants here, in block-local
coordinates where the base rectangle is [0,84) x [0,14).  The block reads
as 12x2 level-2 squares (7x7 cell blocks); the five columns of each of the
left and right segments are addressed by the letters A, C, L, M, R, and
the two middle-segment columns carry the L-shaped handles.

Feature families:

* plus bumps/dents on level-2 columns (the rigid-pattern system), and
* the handle plus its two optional plus attachments N ("near") and
  F ("far"), whose choice encodes one bit (the color-matching system).

The handle-dent voids are *defined* as the translate of the mating
bump union, so bump/dent complementarity holds by construction; the
figure-traced outlines in the test suite cross-check the shapes
independently.
"""

from __future__ import annotations

from .geometry import CellSet

BLOCK_W = 84
BLOCK_H = 14
LEVEL2 = 7

LETTERS = "ACLMR"
MIDS = "NF"

# Letter -> level-2 column, for bumps as written in a label.
# North bumps sit on the left segment, south bumps on the right segment;
# dents use the opposite segment with the same letter order.
_LEFT_COLS = {"A": 0, "C": 1, "L": 2, "M": 3, "R": 4}
_RIGHT_COLS = {"A": 11, "C": 10, "L": 9, "M": 8, "R": 7}


def plus(a: int, b: int) -> CellSet:
    """The 9-cell plus with vertical bar [a,a+1)x[b,b+5) and horizontal
    bar [a-2,a+3)x[b+2,b+3)."""
    cells = [(a, b + i) for i in range(5)]
    cells += [(a + dx, b + 2) for dx in (-2, -1, 1, 2)]
    return CellSet.from_cells(cells)


TINY_FILLER = plus(0, 0)

BASE = CellSet.rect(0, 0, BLOCK_W, BLOCK_H)

# -- middle-segment stamps (fixed positions) --------------------------------

NORTH_HANDLE_BUMP = CellSet.rect(38, 14, 1, 7) | CellSet.rect(38, 20, 4, 1)
SOUTH_HANDLE_BUMP = CellSet.rect(45, -7, 1, 7) | CellSet.rect(42, -7, 4, 1)

NORTH_MID_BUMP = {"N": plus(42, 16), "F": plus(41, 21)}
SOUTH_MID_BUMP = {"N": plus(41, -7), "F": plus(42, -12)}

# Interior holes shared by both handle-dent voids; carved once per block.
HOLE_H1 = plus(41, 7)
HOLE_H2 = plus(42, 2)

# A dented handle always carries both plus-shaped holes, ready to receive
# whichever N/F bump the neighbours present (or a tiny filler).
NORTH_HANDLE_VOID = (
    SOUTH_HANDLE_BUMP | SOUTH_MID_BUMP["N"] | SOUTH_MID_BUMP["F"]
).translate((0, BLOCK_H))
SOUTH_HANDLE_VOID = (
    NORTH_HANDLE_BUMP | NORTH_MID_BUMP["N"] | NORTH_MID_BUMP["F"]
).translate((0, -BLOCK_H))


def position_column(side: str, letter: str, role: str) -> int:
    """Level-2 column index for a lettered plus bump or dent.

    ``side`` is "north" or "south", ``role`` is "bump" or "dent".  Bumps
    named in a label's first part go on the left segment for north sides
    and on the right segment for south sides; dents (third part) go on
    the opposite segment, with the same letter ordering.
    """
    if side not in ("north", "south"):
        raise ValueError(f"bad side {side!r}")
    if role not in ("bump", "dent"):
        raise ValueError(f"bad role {role!r}")
    left = (side == "north") == (role == "bump")
    table = _LEFT_COLS if left else _RIGHT_COLS
    return table[letter]


def plus_bump(side: str, col: int) -> CellSet:
    """Plus bump protruding from the given side at a level-2 column."""
    if side == "north":
        return plus(LEVEL2 * col + 3, BLOCK_H)
    return plus(LEVEL2 * col + 3, -5)


def plus_dent_void(side: str, col: int) -> CellSet:
    """Cells removed from the base by a plus dent at a level-2 column."""
    if side == "north":
        return plus(LEVEL2 * col + 3, 9)
    return plus(LEVEL2 * col + 3, 0)


def stamp(kind: str, side: str, col: int | None = None) -> CellSet:
    """Look up a stamp by kind: ``plus-bump``, ``plus-dent``,
    ``handle-bump``, ``handle-void``, ``mid-N`` or ``mid-F``.

    Middle-segment stamps take no column argument.
    """
    north = side == "north"
    if kind in ("plus-bump", "plus-dent"):
        if col is None:
            raise ValueError(f"{kind} needs a column")
        return plus_bump(side, col) if kind == "plus-bump" else plus_dent_void(side, col)
    if col is not None:
        raise ValueError(f"{kind} takes no column argument")
    if kind == "handle-bump":
        return NORTH_HANDLE_BUMP if north else SOUTH_HANDLE_BUMP
    if kind == "handle-void":
        return NORTH_HANDLE_VOID if north else SOUTH_HANDLE_VOID
    if kind in ("mid-N", "mid-F"):
        table = NORTH_MID_BUMP if north else SOUTH_MID_BUMP
        return table[kind[-1]]
    raise ValueError(f"unknown stamp kind {kind!r}")
