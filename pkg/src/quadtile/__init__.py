"""quadtile: simulate Wang dominoes with a four-polyomino tile set.

The package builds, for any diamond-edge Wang tile set, four polyominoes
(tiny filler, linker, locator, encoder) whose translational tilings of
the plane simulate the Wang tilings of the input set, assembles and
verifies such tilings exactly on torus fundamental domains, and decodes
them back.
"""

from .geometry import CellSet, Placement, Region, verify_partition
from .wang import WangSet, parse_wang_set, solve_torus
from .reduction import ReductionParams, reduce
from .assembly import assemble, decode
from .tilesolve import bn_factorize, exact_tile_search

__all__ = [
    "CellSet",
    "Placement",
    "Region",
    "verify_partition",
    "WangSet",
    "parse_wang_set",
    "solve_torus",
    "ReductionParams",
    "reduce",
    "assemble",
    "decode",
    "bn_factorize",
    "exact_tile_search",
]

__version__ = "0.1.0"
