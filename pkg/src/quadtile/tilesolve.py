"""Independent tiling decision procedures.

Two tools kept deliberately separate from the construction code so they
can act as oracles for it:

* ``bn_factorize``: the boundary-word criterion for a single connected
  tile.  A connected, hole-free polyomino tiles the plane by translation
  iff its boundary word factors as A B C A^ B^ C^, where X^ reverses X
  and swaps U<->D, L<->R, and C may be empty.  No factorization = the
  tile cannot tile the plane.

* ``exact_tile_search``: bounded exhaustive search for an exact cover of
  a finite box or torus by translated copies of the given tiles.  With a
  large enough budget the answer is definitive either way; running out
  of budget is reported as a distinct outcome.
"""

from __future__ import annotations

import time
from dataclasses import dataclass

from .geometry import CellSet, Placement, Region, boundary_word, verify_partition

_COMPLEMENT = {"U": "D", "D": "U", "L": "R", "R": "L"}


def hat(word: str) -> str:
    """Reverse the word and complement each letter (path reversal)."""
    return "".join(_COMPLEMENT[c] for c in reversed(word))


@dataclass(frozen=True)
class BNFactorization:
    a: str
    b: str
    c: str
    rotation: int  # cyclic offset into the boundary word where A starts

    def factors(self) -> tuple[str, str, str, str, str, str]:
        return (self.a, self.b, self.c, hat(self.a), hat(self.b), hat(self.c))

    def word(self) -> str:
        return "".join(self.factors())


def bn_factorize(p: CellSet) -> BNFactorization | None:
    """Search the boundary word for a pseudo-square/hexagon factorization.

    Tries every cyclic rotation and every split A|B|C with A, B nonempty
    and C possibly empty.  Returns None iff no factorization exists, in
    which case the tile does not tile the plane by translation.
    """
    w = boundary_word(p)
    n = len(w)
    if n % 2:
        return None
    half = n // 2
    ww = w + w
    for r in range(n):
        x = ww[r : r + n]
        tail = x[half:]
        for i in range(1, half):
            if tail[:i] != hat(x[:i]):
                continue
            for j in range(1, half - i + 1):
                a = x[:i]
                b = x[i : i + j]
                c = x[i + j : half]
                if tail[i : i + j] == hat(b) and tail[i + j :] == hat(c):
                    return BNFactorization(a, b, c, r)
    return None


@dataclass(frozen=True)
class SearchLimits:
    max_nodes: int = 10_000_000
    max_seconds: float = 600.0

    def __post_init__(self):
        if self.max_nodes <= 0 or self.max_seconds <= 0:
            raise ValueError("budgets must be positive")


FOUND = "found"
NONE = "none"
BUDGET = "budget"


@dataclass
class SearchOutcome:
    status: str  # FOUND | NONE | BUDGET
    placements: list[Placement] | None
    nodes: int


def exact_tile_search(
    tiles: list[tuple[str, CellSet]],
    region: Region,
    limits: SearchLimits = SearchLimits(),
) -> SearchOutcome:
    """Exhaustive search for an exact cover of the region.

    Branches on the first uncovered cell in (y, x) order; candidate
    placements take the tiles in the given order and, within a tile,
    anchor cells in (y, x) order, so the first solution found is the
    deterministic least one.  An exhausted search is a definitive "no";
    exceeding the node or time budget is reported separately.
    """
    if region.area <= 0:
        raise ValueError("region must have positive area")
    W, H = region.width, region.height
    torus = region.kind == "torus"
    ox, oy = region.origin
    full = (1 << W) - 1

    # Candidate placements covering a target cell: every (tile, anchor
    # cell) pair, offsets computed while probing.  Tiles larger than the
    # region can never fit and are dropped up front.
    shapes: list[tuple[str, list[tuple[int, int]]]] = []
    for name, cs in tiles:
        if cs.area <= region.area:
            shapes.append((name, sorted(cs.cells(), key=lambda c: (c[1], c[0]))))
    if not shapes:
        return SearchOutcome(NONE, None, 0)

    rows = [0] * H
    area_left = W * H
    min_area = min(len(cells) for _, cells in shapes)
    out: list[Placement] = []
    nodes = 0
    deadline = time.monotonic() + limits.max_seconds

    def first_free() -> tuple[int, int] | None:
        for y in range(H):
            m = full & ~rows[y]
            if m:
                return ((m & -m).bit_length() - 1, y)
        return None

    def search() -> str:
        nonlocal nodes, area_left
        nodes += 1
        if nodes > limits.max_nodes:
            return BUDGET
        if not nodes % 4096 and time.monotonic() > deadline:
            return BUDGET
        target = first_free()
        if target is None:
            return FOUND
        if area_left < min_area:
            return NONE
        tx, ty = target
        for name, tile_cells in shapes:
            for ax, ay in tile_cells:
                placed = []
                ok = True
                for cx, cy in tile_cells:
                    x, y = tx + cx - ax, ty + cy - ay
                    if torus:
                        x, y = x % W, y % H
                    elif not (0 <= x < W and 0 <= y < H):
                        ok = False
                        break
                    if rows[y] >> x & 1:
                        ok = False
                        break
                    rows[y] |= 1 << x
                    placed.append((x, y))
                if ok and len(placed) == len(tile_cells):
                    area_left -= len(placed)
                    out.append(Placement(name, ox + tx - ax, oy + ty - ay))
                    status = search()
                    if status != NONE:
                        return status
                    out.pop()
                    area_left += len(placed)
                for x, y in placed:
                    rows[y] &= ~(1 << x)
        return NONE

    status = search()
    if status == FOUND:
        return SearchOutcome(FOUND, list(out), nodes)
    return SearchOutcome(status, None, nodes)


def search_is_sound(
    tiles: list[tuple[str, CellSet]], region: Region, outcome: SearchOutcome
) -> bool:
    """Every found cover must pass the partition verifier."""
    if outcome.status != FOUND:
        return True
    report = verify_partition(region, outcome.placements, dict(tiles))
    return report.ok
