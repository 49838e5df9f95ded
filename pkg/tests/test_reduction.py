import pytest

from quadtile.blocks import BLANK, BlockSpec, build_block, label, parse_label
from quadtile.reduction import (
    ReductionSizeError,
    color_bits,
    encoder_specs,
    locator_specs,
    params,
    reduce,
    slot_map,
)
from quadtile.stamps import BLOCK_H, BLOCK_W
from quadtile.wang import parse_wang_set

FIG_SET = """
colors red green blue yellow
tile t1 nw=green ne=red sw=red se=yellow
tile t2 nw=yellow ne=blue sw=blue se=red
tile t3 nw=red ne=yellow sw=yellow se=green
"""

UNIFORM = "tile u nw=a ne=a sw=a se=a"


@pytest.fixture(scope="module")
def fig_ws():
    return parse_wang_set(FIG_SET)


@pytest.fixture(scope="module")
def uni_ws():
    return parse_wang_set(UNIFORM, pad_colors=True)


class TestParams:
    def test_three_tile_four_color(self, fig_ws):
        p = params(fig_ws)
        assert (p.seg, p.gap, p.loc) == (1024, 1021, 2043)
        assert (p.enc, p.per) == (3069, 4090)

    def test_padded_single_tile(self, uni_ws):
        p = params(uni_ws)
        assert (p.seg, p.gap, p.loc, p.enc, p.per) == (12, 10, 21, 34, 44)

    def test_huge_sets_reported(self):
        lines = "\n".join(
            f"tile t{i} nw=a ne=a sw=a se=b" for i in range(12)
        )
        ws = parse_wang_set(lines)
        with pytest.raises(ReductionSizeError):
            params(ws)


class TestColorBits:
    def test_two_bit_table(self):
        assert color_bits(0, 2) == ["N", "N"]
        assert color_bits(1, 2) == ["N", "F"]
        assert color_bits(2, 2) == ["F", "N"]
        assert color_bits(3, 2) == ["F", "F"]

    def test_one_bit(self):
        assert color_bits(0, 1) == ["N"]
        assert color_bits(1, 1) == ["F"]

    def test_out_of_range(self):
        with pytest.raises(ValueError):
            color_bits(4, 2)

    def test_tile1_left_portion_labels(self, fig_ws):
        # green nw / red sw with red,green,blue,yellow pinned = indices 1, 0
        p = params(fig_ws)
        specs = encoder_specs(fig_ws)
        slot1 = specs[0 : p.t + 2]
        assert slot1[0].north == parse_label("{M||L}")
        norths = [bs.north.mid for bs in slot1[1:-1]]
        souths = [bs.south.mid for bs in slot1[1:-1]]
        assert norths == ["N", "F"]  # green = 1
        assert souths == ["N", "N"]  # red = 0


class TestSlotMap:
    def test_three_tiles_power_slots(self, fig_ws):
        sm = slot_map(fig_ws)
        by_tile = {}
        for k, (i, j) in sm.items():
            by_tile.setdefault(i, set()).add(k)
        assert by_tile == {0: {1, 2, 4}, 1: {8, 16, 32}, 2: {64, 128, 256}}

    def test_covers_powers_of_two(self, fig_ws):
        sm = slot_map(fig_ws)
        assert set(sm) == {2**e for e in range(9)}
        copies = [j for (_, j) in sm.values()]
        assert copies.count(0) == copies.count(1) == copies.count(2) == 3


class TestEncoderSpecs:
    def test_markers_bracket_used_slots(self, fig_ws):
        p = params(fig_ws)
        specs = encoder_specs(fig_ws)
        sm = slot_map(fig_ws)
        for seg_start in (0, p.seg + p.gap):
            for s in range(1, p.slots_per_segment + 1):
                base = seg_start + (s - 1) * (p.t + 2)
                block0 = specs[base]
                blockN = specs[base + p.t + 1]
                if s in sm:
                    assert block0.north == block0.south == parse_label("{M||L}")
                    assert blockN.north == blockN.south == parse_label("{M||R}")
                else:
                    assert block0 == BlockSpec(BLANK, BLANK)

    def test_padding_segment_blank(self, fig_ws):
        p = params(fig_ws)
        specs = encoder_specs(fig_ws)
        for bs in specs[p.seg : p.seg + p.gap]:
            assert bs == BlockSpec(BLANK, BLANK)

    def test_same_slot_portions_loc_apart(self, fig_ws):
        p = params(fig_ws)
        for s in slot_map(fig_ws):
            last_left_enc = (s - 1) * (p.t + 2) + p.t
            first_right_enc = p.seg + p.gap + (s - 1) * (p.t + 2) + 1
            assert first_right_enc - last_left_enc - 1 == p.loc

    def test_labels_decode_back_to_colors(self, fig_ws):
        p = params(fig_ws)
        specs = encoder_specs(fig_ws)
        sm = slot_map(fig_ws)
        for s, (i, _) in sm.items():
            tile = fig_ws.tiles[i]
            for seg_start, (nc, sc) in (
                (0, (tile.nw, tile.sw)),
                (p.seg + p.gap, (tile.ne, tile.se)),
            ):
                base = seg_start + (s - 1) * (p.t + 2)
                blocks = specs[base + 1 : base + 1 + p.t]
                nbits = [b.north.mid for b in blocks]
                sbits = [b.south.mid for b in blocks]
                assert nbits == color_bits(nc, p.t)
                assert sbits == color_bits(sc, p.t)


class TestLocatorSpecs:
    def test_selector_ends(self, uni_ws):
        layout = locator_specs(uni_ws)
        for row in (layout.bottom, layout.top):
            assert row[0].north == row[0].south == parse_label("{R||M}")
            assert row[-1].north == row[-1].south == parse_label("{L||M}")

    def test_boundary_and_concave_labels(self, uni_ws):
        layout = locator_specs(uni_ws)
        outer = parse_label("{||C,M}")
        concave = parse_label("{||A,C,M}")
        for col, bs in enumerate(layout.bottom[1:-1], start=1):
            assert bs.south == outer
            if col == layout.connector_col:
                assert bs.north is None
            else:
                assert bs.north == concave
        for col, bs in enumerate(layout.top[1:-1], start=1):
            assert bs.north == outer
            if col == layout.connector_col:
                assert bs.south is None
            else:
                assert bs.south == concave

    def test_block_count(self, uni_ws):
        layout = locator_specs(uni_ws)
        assert len(layout.bottom) + len(layout.top) + 1 == 2 * 21 + 1


class TestReduce:
    def test_filler_has_nine_cells(self, uni_ws):
        assert reduce(uni_ws).tiles["filler"].area == 9

    def test_linker_disconnected_two_pieces(self, uni_ws):
        assert len(reduce(uni_ws).tiles["linker"].components()) == 2

    def test_encoder_width(self, uni_ws):
        out = reduce(uni_ws)
        xmin, _, xmax, _ = out.tiles["encoder"].bbox()
        assert xmax - xmin + 1 == 34 * BLOCK_W == 2856

    def test_fixed_tiles_independent_of_set(self, uni_ws, fig_ws):
        a, b = reduce(uni_ws), reduce(fig_ws)
        assert a.tiles["filler"] == b.tiles["filler"]
        assert a.tiles["linker"] == b.tiles["linker"]

    def test_encoder_area_matches_block_sum(self, uni_ws):
        out = reduce(uni_ws)
        total = sum(build_block(bs).area for bs in out.encoder_specs)
        assert out.tiles["encoder"].area == total

    def test_locator_area_matches_block_sum(self, uni_ws):
        out = reduce(uni_ws)
        total = (
            sum(build_block(bs).area for bs in out.locator.bottom)
            + sum(build_block(bs).area for bs in out.locator.top)
            + BLOCK_W * BLOCK_H
        )
        assert out.tiles["locator"].area == total

    def test_locator_half_turn_gives_mirror_selectors(self, uni_ws):
        # A half turn preserves selector letters but swaps the ends, so the
        # rotated locator is the one with L and R selector labels exchanged;
        # everything except the four end blocks maps onto itself.
        from quadtile.blocks import build_row
        from quadtile.geometry import CellSet
        from quadtile import reduction as red

        out = reduce(uni_ws)
        loc = out.tiles["locator"]

        def swap_ends(row):
            swapped = list(row)
            for i in (0, -1):
                lab = row[i].north
                other = red.SELECTOR_LEFT if lab == red.SELECTOR_RIGHT else red.SELECTOR_RIGHT
                swapped[i] = BlockSpec(other, other)
            return swapped

        p = out.params
        connector = CellSet.rect(p.connector_col * BLOCK_W, BLOCK_H, BLOCK_W, BLOCK_H)
        mirrored = (
            build_row(swap_ends(out.locator.bottom))
            | connector
            | build_row(swap_ends(out.locator.top)).translate((0, 2 * BLOCK_H))
        )
        r = loc.rotate180()
        xmin, ymin, _, _ = r.bbox()
        x0, y0, _, _ = mirrored.bbox()
        assert r.translate((x0 - xmin, y0 - ymin)) == mirrored
        assert r.translate((x0 - xmin, y0 - ymin)) != loc

    def test_exposure_columns(self, uni_ws):
        out = reduce(uni_ws)
        assert list(out.left_exposed_cols) == [21]
        assert list(out.right_exposed_cols) == [43]

    def test_locator_connector_fused_flat(self, uni_ws):
        out = reduce(uni_ws)
        from quadtile.geometry import CellSet

        col = out.params.connector_col
        loc = out.tiles["locator"]
        # connector itself plus the flat edges it fuses to: full-width rows
        # just below y=14 and just above y=28 in the connector column
        connector = CellSet.rect(col * BLOCK_W, BLOCK_H, BLOCK_W, BLOCK_H)
        below_edge = CellSet.rect(col * BLOCK_W, BLOCK_H - 1, BLOCK_W, 1)
        above_edge = CellSet.rect(col * BLOCK_W, 2 * BLOCK_H, BLOCK_W, 1)
        for must in (connector, below_edge, above_edge):
            assert (loc & must) == must
