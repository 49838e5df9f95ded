"""Command-line interface.

Subcommands cover the full pipeline: ``reduce`` builds the four tiles
from a Wang set, ``wang-solve`` searches torus tilings, ``assemble``
realizes one geometrically, ``verify`` re-checks any placement file,
``roundtrip`` chains solve/assemble/verify/decode, ``bn-check`` and
``tile-solve`` run the independent deciders, and ``render`` draws
scenes.  Exit codes: 0 success, 1 negative mathematical answer (no
tiling / does not tile / verification failed), 2 operational error.

Every command is a pure function of its inputs; reports and files are
byte-identical across runs.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import assembly, geometry, reduction, render, tilesolve, wang

OK, NEGATIVE, ERROR = 0, 1, 2


def _read(path: str) -> str:
    return Path(path).read_text(encoding="utf-8")


def _load_wang(args) -> wang.WangSet:
    return wang.parse_wang_set(_read(args.wang), pad_colors=args.pad_colors)


def _load_tiles_dir(path: str) -> dict[str, geometry.CellSet]:
    tiles: dict[str, geometry.CellSet] = {}
    files = sorted(Path(path).glob("*.poly"))
    if not files:
        raise FileNotFoundError(f"no .poly files in {path}")
    for f in files:
        for name, cs in geometry.parse_tiles(f.read_text(encoding="utf-8")):
            if name in tiles:
                raise ValueError(f"duplicate tile name {name!r} in {path}")
            tiles[name] = cs
    return tiles


def _write_tiles(out_dir: Path, tiles: dict[str, geometry.CellSet]) -> None:
    out_dir.mkdir(parents=True, exist_ok=True)
    for name in sorted(tiles):
        (out_dir / f"{name}.poly").write_text(
            geometry.format_tile(name, tiles[name]), encoding="utf-8"
        )


def cmd_reduce(args) -> int:
    ws = _load_wang(args)
    out = reduction.reduce(ws)
    out_dir = Path(args.out)
    _write_tiles(out_dir, out.tiles)
    (out_dir / "params.txt").write_text(
        reduction.format_params(out.params), encoding="utf-8"
    )
    (out_dir / "slots.txt").write_text(
        reduction.format_slots(ws, out.slot_map), encoding="utf-8"
    )
    if args.svg:
        gallery = render.tiles_gallery(
            [(n, out.tiles[n]) for n in reduction.TILE_NAMES]
        )
        (out_dir / "tiles.svg").write_text(
            render.render_svg(gallery, scale=args.scale), encoding="utf-8"
        )
    print(out.params.as_text())
    return OK


def cmd_wang_solve(args) -> int:
    ws = _load_wang(args)
    if args.count:
        n = wang.solve_torus(ws, args.rows, args.periods, mode="count")
        print(f"count={n}")
        return OK if n else NEGATIVE
    tiling = wang.solve_torus(ws, args.rows, args.periods)
    if tiling is None:
        print("no wang tiling")
        return NEGATIVE
    text = wang.format_tiling(ws, tiling)
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    print(text, end="")
    return OK


def _assemble(ws, args):
    out = reduction.reduce(ws)
    if args.tiling:
        tiling = wang.parse_tiling(ws, _read(args.tiling))
    else:
        tiling = wang.solve_torus(ws, args.rows, args.periods)
        if tiling is None:
            return None, None, None
    plan, region = assembly.assemble(ws, tiling, out)
    return out, tiling, (plan, region)


def cmd_assemble(args) -> int:
    ws = _load_wang(args)
    out, tiling, assembled = _assemble(ws, args)
    if assembled is None:
        print("no wang tiling")
        return NEGATIVE
    plan, region = assembled
    out_dir = Path(args.out)
    _write_tiles(out_dir, out.tiles)
    (out_dir / "placements.txt").write_text(
        geometry.format_placements(plan.placements), encoding="utf-8"
    )
    (out_dir / "region.txt").write_text(
        f"torus:{region.width}x{region.height}\n", encoding="utf-8"
    )
    (out_dir / "tiling.txt").write_text(
        wang.format_tiling(ws, tiling), encoding="utf-8"
    )
    print(f"region torus:{region.width}x{region.height}")
    print(plan.census_line())
    return OK


def cmd_verify(args) -> int:
    tiles = _load_tiles_dir(args.tiles)
    placements = geometry.parse_placements(_read(args.placements))
    region = geometry.parse_region(args.region)
    report = geometry.verify_partition(region, placements, tiles)
    if report.ok:
        print("partition: ok")
        return OK
    print(
        f"partition: FAIL uncovered={report.uncovered.area} "
        f"overlaps={report.overlaps.area}"
    )
    for label_, cs in (("uncovered", report.uncovered), ("overlap", report.overlaps)):
        for x, y in list(cs.cells())[:5]:
            print(f"{label_} {x} {y}")
    return NEGATIVE


def cmd_roundtrip(args) -> int:
    if args.rows % 2:
        raise SystemExit2("row count must be even")
    ws = _load_wang(args)
    out = reduction.reduce(ws)
    print(out.params.as_text())
    tiling = wang.solve_torus(ws, args.rows, args.periods)
    if tiling is None:
        print("no wang tiling")
        return NEGATIVE
    plan, region = assembly.assemble(ws, tiling, out)
    report = geometry.verify_partition(region, plan.placements, out.tiles)
    print(f"region torus:{region.width}x{region.height}")
    print(plan.census_line())
    if not report.ok:
        print(
            f"roundtrip: FAIL verify uncovered={report.uncovered.area} "
            f"overlaps={report.overlaps.area}"
        )
        return NEGATIVE
    decoded = assembly.decode(plan, out)
    if decoded != tiling:
        print("roundtrip: FAIL decode differs from input tiling")
        return NEGATIVE
    print("roundtrip: ok")
    if args.report_dir:
        _write_report(args.report_dir, ws, out, plan, region)
    return OK


def _write_report(report_dir: str, ws, out, plan, region) -> None:
    """Delimited summary plus overview figures."""
    d = Path(report_dir)
    d.mkdir(parents=True, exist_ok=True)
    rows = [("key", "value"), ("n", out.params.n), ("m", out.params.m),
            ("t", out.params.t), ("SEG", out.params.seg), ("GAP", out.params.gap),
            ("LOC", out.params.loc), ("ENC", out.params.enc), ("PER", out.params.per),
            ("width", region.width), ("height", region.height)]
    rows += sorted(plan.census.items())
    (d / "report.csv").write_text(
        "\n".join(f"{k},{v}" for k, v in rows) + "\n", encoding="utf-8"
    )
    scene = render.placement_scene(out.tiles, plan.placements, region)
    (d / "overview.svg").write_text(render.render_svg(scene, scale=2), encoding="utf-8")
    try:
        render.render_png(scene, str(d / "overview.png"))
    except ImportError:
        pass


def cmd_bn_check(args) -> int:
    tiles = geometry.parse_tiles(_read(args.polyomino))
    if len(tiles) != 1:
        raise ValueError("bn-check expects exactly one tile in the file")
    name, cs = tiles[0]
    fact = tilesolve.bn_factorize(cs)
    if fact is None:
        print("tiles-plane: no")
        return NEGATIVE
    print("tiles-plane: yes")
    a, b, c = fact.a, fact.b, fact.c
    print(f"A={a} B={b} C={c}")
    print(f"word={fact.word()}")
    return OK


def cmd_tile_solve(args) -> int:
    tiles = sorted(_load_tiles_dir(args.tiles).items())
    region = geometry.parse_region(args.region)
    limits = tilesolve.SearchLimits(args.node_budget, args.time_budget)
    outcome = tilesolve.exact_tile_search(tiles, region, limits)
    if outcome.status == tilesolve.BUDGET:
        print(f"budget exhausted after {outcome.nodes} nodes")
        return ERROR
    if outcome.status == tilesolve.NONE:
        print(f"tiling: none ({outcome.nodes} nodes)")
        return NEGATIVE
    print(f"tiling: found ({outcome.nodes} nodes)")
    text = geometry.format_placements(outcome.placements)
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    print(text, end="")
    return OK


def cmd_render(args) -> int:
    tiles = _load_tiles_dir(args.tiles)
    if args.placements:
        placements = geometry.parse_placements(_read(args.placements))
        region = geometry.parse_region(args.region) if args.region else None
        items = render.placement_scene(tiles, placements, region)
    else:
        items = render.tiles_gallery(sorted(tiles.items()))
    svg = render.render_svg(items, scale=args.scale)
    Path(args.out).write_text(svg, encoding="utf-8")
    print(f"wrote {args.out}")
    if args.png:
        render.render_png(items, args.png)
        print(f"wrote {args.png}")
    return OK


class SystemExit2(Exception):
    """Usage-level error that should exit with code 2."""


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="quadtile",
        description="Simulate Wang dominoes with four polyomino tiles.",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    def add_wang(p):
        p.add_argument("--wang", required=True, help="Wang set file")
        p.add_argument(
            "--pad-colors",
            action="store_true",
            help="pad single-color sets with an unused color",
        )

    p = sub.add_parser("reduce", help="build the four tiles from a Wang set")
    add_wang(p)
    p.add_argument("--out", required=True, help="output directory")
    p.add_argument("--svg", action="store_true", help="also render tiles.svg")
    p.add_argument("--scale", type=int, default=4)
    p.set_defaults(func=cmd_reduce)

    p = sub.add_parser("wang-solve", help="search torus tilings of a Wang set")
    add_wang(p)
    p.add_argument("--rows", type=int, required=True)
    p.add_argument("--periods", type=int, required=True)
    p.add_argument("--count", action="store_true", help="count all tilings")
    p.add_argument("--out", help="write the tiling file here")
    p.set_defaults(func=cmd_wang_solve)

    p = sub.add_parser("assemble", help="assemble a torus tiling of the four tiles")
    add_wang(p)
    p.add_argument("--rows", type=int, default=2)
    p.add_argument("--periods", type=int, default=1)
    p.add_argument("--tiling", help="use this tiling file instead of solving")
    p.add_argument("--out", required=True, help="output directory")
    p.set_defaults(func=cmd_assemble)

    p = sub.add_parser("verify", help="verify a placement file covers a region exactly")
    p.add_argument("--tiles", required=True, help="directory of .poly files")
    p.add_argument("--placements", required=True)
    p.add_argument("--region", required=True, help="box:WxH or torus:WxH")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("roundtrip", help="solve, assemble, verify, decode, compare")
    add_wang(p)
    p.add_argument("--rows", type=int, required=True)
    p.add_argument("--periods", type=int, required=True)
    p.add_argument("--report-dir", help="write report.csv and overview figures here")
    p.set_defaults(func=cmd_roundtrip)

    p = sub.add_parser("bn-check", help="boundary-word plane-tiling test for one tile")
    p.add_argument("polyomino", help="polyomino file with one tile")
    p.set_defaults(func=cmd_bn_check)

    p = sub.add_parser("tile-solve", help="exhaustive exact-cover search")
    p.add_argument("--tiles", required=True, help="directory of .poly files")
    p.add_argument("--region", required=True, help="box:WxH or torus:WxH")
    p.add_argument("--node-budget", type=int, default=10_000_000)
    p.add_argument("--time-budget", type=float, default=600.0)
    p.add_argument("--out", help="write placements here")
    p.set_defaults(func=cmd_tile_solve)

    p = sub.add_parser("render", help="render tiles or a placement scene to SVG")
    p.add_argument("--tiles", required=True, help="directory of .poly files")
    p.add_argument("--placements", help="placement file (scene mode)")
    p.add_argument("--region", help="wrap cells into this region (torus scenes)")
    p.add_argument("--out", required=True, help="output SVG path")
    p.add_argument("--png", help="also rasterize to this PNG (needs matplotlib)")
    p.add_argument("--scale", type=int, default=4)
    p.set_defaults(func=cmd_render)

    return ap


def main(argv: list[str] | None = None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        return args.func(args)
    except SystemExit2 as exc:
        print(f"error: {exc}", file=sys.stderr)
        return ERROR
    except (
        OSError,
        ValueError,
        KeyError,
        wang.WangParseError,
        assembly.AssemblyError,
        assembly.DecodeError,
    ) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return ERROR


if __name__ == "__main__":
    sys.exit(main())
