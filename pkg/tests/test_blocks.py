import itertools
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import outlines
from quadtile import stamps
from quadtile.blocks import (
    BLANK,
    BlockSpec,
    SideLabel,
    build_block,
    build_row,
    format_block_line,
    format_label,
    label,
    parse_block_line,
    parse_label,
    spec,
    stack_residual,
    stackable,
)
from quadtile.geometry import CellSet
from quadtile.stamps import BLOCK_H, BLOCK_W

labels_st = st.builds(
    SideLabel,
    st.frozensets(st.sampled_from("ACLMR")),
    st.one_of(st.none(), st.sampled_from("NF")),
    st.frozensets(st.sampled_from("ACLMR")),
)


class TestLabelNotation:
    def test_parse_examples(self):
        s = parse_label("{A||C}")
        assert s == label("A", None, "C")
        assert parse_label("{||}") == BLANK
        assert parse_label("{C|F|A}") == label("C", "F", "A")

    def test_multi_letter_parts(self):
        s = parse_label("{||A,C,M}")
        assert s.dents == frozenset("ACM") and not s.bumps and s.mid is None

    @given(labels_st)
    def test_roundtrip(self, lab):
        assert parse_label(format_label(lab)) == lab

    def test_canonical_text_roundtrip(self):
        for text in ("{A||C}", "{||}", "{C|N|A}", "{||A,C,M}", "{M||L}", "{R||M}"):
            assert format_label(parse_label(text)) == text

    def test_malformed_rejected(self):
        for bad in ("{A|C}", "A||C", "{A||C", "{A|Z|C}", "{A,A||}", "{Q||}", "{|NF|}"):
            with pytest.raises(ValueError):
                parse_label(bad)

    def test_block_line_roundtrip(self):
        bs = spec("{A||C}", None)
        line = format_block_line(bs)
        assert line == "block {A||C} -"
        assert parse_block_line(line) == bs

    def test_block_needs_one_side(self):
        with pytest.raises(ValueError):
            BlockSpec(None, None)


class TestBuildBlockAgainstTracedOutlines:
    def test_tiny_filler_matches_figure(self):
        traced = outlines.fill_outline(outlines.TINY_FILLER)
        assert traced.area == 9
        xmin, ymin, _, _ = traced.bbox()
        assert traced.translate((-xmin - 2, -ymin)) == stamps.TINY_FILLER

    def test_linker_matches_figure(self):
        traced = outlines.fill_outlines(outlines.LINKER_PIECE_NW, outlines.LINKER_PIECE_SE)
        assert build_block(spec("{A||C}", "{A||C}")) == traced

    def test_half_block_matches_figure(self):
        traced = outlines.fill_outline(outlines.HALF_CM_SOUTH)
        assert build_block(spec(None, "{||C,M}")) == traced

    def test_blank_block_matches_figure(self):
        traced = outlines.fill_outlines(outlines.BLANK_PIECE_NW, outlines.BLANK_PIECE_SE)
        assert build_block(spec("{||}", "{||}")) == traced

    def test_encoding_block_matches_figure(self):
        traced = outlines.fill_outlines(outlines.ENC_PIECE_NW, outlines.ENC_PIECE_SE)
        assert build_block(spec("{C|F|A}", "{C|N|A}")) == traced

    def test_flat_north_edge_when_side_absent(self):
        b = build_block(spec(None, "{||C,M}"))
        _, _, _, ymax = b.bbox()
        assert ymax == BLOCK_H - 1
        top_row = CellSet.rect(0, BLOCK_H - 1, BLOCK_W, 1)
        assert (b & top_row) == top_row

    def test_linker_is_two_pieces(self):
        assert len(build_block(spec("{A||C}", "{A||C}")).components()) == 2


class TestAreas:
    def test_blank_area(self):
        assert build_block(spec("{||}", "{||}")).area == 1158

    def test_area_law_both_sides(self):
        rng = random.Random(7)
        for _ in range(40):
            labs = []
            for _side in range(2):
                bumps = "".join(c for c in "ACLMR" if rng.random() < 0.4)
                dents = "".join(c for c in "ACLMR" if rng.random() < 0.4)
                mid = rng.choice([None, "N", "F"])
                labs.append(label(bumps, mid, dents))
            bs = BlockSpec(labs[0], labs[1])
            nb = len(labs[0].bumps) + len(labs[1].bumps)
            nm = (labs[0].mid is not None) + (labs[1].mid is not None)
            nd = len(labs[0].dents) + len(labs[1].dents)
            assert build_block(bs).area == 1158 + 9 * (nb + nm) - 9 * nd


class TestStackable:
    def test_linker_on_linker(self):
        a = parse_label("{A||C}")
        assert not stackable(a, a)

    def test_selector_marker_pairing(self):
        assert stackable(parse_label("{L||M}"), parse_label("{M||L}"))
        assert stackable(parse_label("{M||L}"), parse_label("{L||M}"))

    def test_blank_on_blank(self):
        assert stackable(BLANK, BLANK)


class TestStackResidual:
    def test_linker_over_linker_overlaps(self):
        linker = spec("{A||C}", "{A||C}")
        assert stack_residual(linker, linker).overlap

    def test_linker_over_encoding_block(self):
        r = stack_residual(spec("{A||C}", "{A||C}"), spec("{C|N|A}", "{C|N|A}"))
        assert not r.overlap
        # all residual holes are interior handle holes, never label dents
        hole_anchors = {(41, 7), (42, 2), (41, 7 + BLOCK_H), (42, 2 + BLOCK_H)}
        assert set(r.holes) <= hole_anchors
        assert len(r.holes) == 3

    def test_blank_over_blank_has_four_holes(self):
        r = stack_residual(spec("{||}", "{||}"), spec("{||}", "{||}"))
        assert not r.overlap
        assert len(r.holes) == 4

    def test_requires_labeled_facing_sides(self):
        with pytest.raises(ValueError):
            stack_residual(spec(None, None if False else "{||}"), spec(None, "{||}"))


class TestLemmaEquivalence:
    """Geometric overlap must equal the label criterion, always."""

    def test_mid_grid_never_overlaps_two_blocks(self):
        for m1, m2 in itertools.product([None, "N", "F"], repeat=2):
            upper = BlockSpec(BLANK, label("", m2, "C"))
            lower = BlockSpec(label("C", m1, ""), BLANK)
            r = stack_residual(upper, lower)
            assert r.overlap == (not stackable(upper.south, lower.north))
            assert not r.overlap

    @given(labels_st, labels_st)
    @settings(max_examples=400, deadline=None)
    def test_random_pairs(self, upper_south, lower_north):
        upper = BlockSpec(BLANK, upper_south)
        lower = BlockSpec(lower_north, BLANK)
        geom = stack_residual(upper, lower)
        assert geom.overlap == (not stackable(upper_south, lower_north))


class TestMisalignedStacks:
    """Interlocking handles force column alignment.

    A nonzero horizontal shift either overlaps, or pushes the blocks so
    far apart that neither handle reaches the other block at all (that
    degenerate separation cannot occur inside full rows).  A shift that
    kept the handles interlocked without overlapping would disprove the
    alignment argument, so any such case is reported and fails.
    """

    @pytest.mark.parametrize(
        "upper,lower",
        [
            (("{||}", "{||}"), ("{||}", "{||}")),
            (("{A||C}", "{A||C}"), ("{C|N|A}", "{C|N|A}")),
            (("{L||M}", "{M||L}"), ("{M||L}", "{L||M}")),
        ],
    )
    def test_interlocked_shifts_always_overlap(self, upper, lower):
        up = build_block(spec(*upper))
        lo = build_block(spec(*lower))
        exempt = []
        for s in range(-BLOCK_W + 1, BLOCK_W):
            if s == 0 or not up.translate((s, BLOCK_H)).disjoint(lo):
                continue
            upper_band = CellSet.rect(s, BLOCK_H, BLOCK_W, 7)
            lower_band = CellSet.rect(0, 7, BLOCK_W, 7)
            interlocked = not stamps.NORTH_HANDLE_BUMP.disjoint(upper_band) or (
                not stamps.SOUTH_HANDLE_BUMP.translate((s, BLOCK_H)).disjoint(lower_band)
            )
            assert not interlocked, f"interlocked non-overlapping shift {s}"
            exempt.append(s)
        # the exempt shifts must be the fully separated ones only
        assert all(abs(s) >= 42 for s in exempt), exempt


class TestThreeStackBitLaw:
    def setup_method(self):
        self.mid_y = BlockSpec(label("", None, "ACM"), label("", None, "ACM"))

    def stack(self, below_mid, above_mid):
        x = BlockSpec(label("C", below_mid, "A"), BLANK)
        z = BlockSpec(BLANK, label("C", above_mid, "A"))
        bx = build_block(x)
        by = build_block(self.mid_y).translate((0, BLOCK_H))
        bz = build_block(z).translate((0, 2 * BLOCK_H))
        return bx, by, bz

    def test_overlap_iff_present_and_unequal(self):
        for below, above in itertools.product([None, "N", "F"], repeat=2):
            bx, by, bz = self.stack(below, above)
            pair_overlap = (
                not bx.disjoint(by) or not by.disjoint(bz) or not bx.disjoint(bz)
            )
            expected = below is not None and above is not None and below != above
            assert pair_overlap == expected, (below, above)

    def test_residual_holes_are_plus_shaped(self):
        for below, above in itertools.product([None, "N", "F"], repeat=2):
            if below and above and below != above:
                continue
            bx, by, bz = self.stack(below, above)
            union = bx | by | bz
            voids = CellSet.from_cells([])
            for side, bs, dy in (
                ("north", bx, 0),
                ("north", by, BLOCK_H),
                ("south", by, BLOCK_H),
                ("south", bz, 2 * BLOCK_H),
            ):
                voids = voids | stamps.stamp("handle-void", side).translate((0, dy))
            claimed_y = 2 - (below is not None) - (above is not None)
            y_holes = [
                c
                for c in (voids - union).components()
                if BLOCK_H <= next(c.cells())[1] < 2 * BLOCK_H
            ]
            for comp in (voids - union).components():
                x, y = next(comp.cells())
                assert comp == stamps.plus(x, y)
            assert len(y_holes) == claimed_y


class TestBuildRow:
    def test_single_block(self):
        bs = spec("{||}", "{||}")
        assert build_row([bs]) == build_block(bs)

    def test_two_blanks_fuse(self):
        bs = spec("{||}", "{||}")
        row = build_row([bs, bs])
        assert row.area == 2 * 1158
        assert row == build_block(bs) | build_block(bs).translate((BLOCK_W, 0))

    def test_mixed_row_matches_naive_union(self):
        specs = [
            spec("{M||L}", "{M||L}"),
            spec("{C|N|A}", "{C|F|A}"),
            spec("{M||R}", "{M||R}"),
            spec("{||}", "{||}"),
            spec("{||}", "{||}"),
        ]
        naive = CellSet.from_cells([])
        for j, bs in enumerate(specs):
            naive = naive | build_block(bs).translate((BLOCK_W * j, 0))
        assert build_row(specs) == naive
