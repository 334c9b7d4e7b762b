"""Membership engine: frozen expected values for every interval kind and
the multi-edge models."""

from fractions import Fraction as F

import pytest

from cspaces.corpus import build
from cspaces.construct import exclude_endpoints
from cspaces.membership import is_controlled, parse_controlled
from cspaces.model import (PAUSE, EdgePoint, Seg, Track, Vertex, assemble,
                           reverse_path)
from cspaces.presentation import normalize

from helpers import Z, O, H


def path(*atoms, start, end):
    return assemble(start, list(atoms), end)


V0, V1 = Vertex("v0"), Vertex("v1")
FULL_UP = path(Seg("e0", Z, O), start=V0, end=V1)
FULL_DOWN = path(Seg("e0", O, Z), start=V1, end=V0)
HALF_UP = path(Seg("e0", Z, H), start=V0, end=EdgePoint("e0", H))
MID_PAUSE_UP = path(Seg("e0", Z, H), PAUSE, Seg("e0", H, O), start=V0, end=V1)


class TestOneJumpInterval:
    sp = build("c_interval")

    def test_full_run_controlled(self):
        assert is_controlled(self.sp, FULL_UP)

    def test_half_run_rejected(self):
        assert not is_controlled(self.sp, HALF_UP)

    def test_mid_pause_run_controlled(self):
        assert is_controlled(self.sp, MID_PAUSE_UP)

    def test_reversed_run_rejected(self):
        assert not is_controlled(self.sp, FULL_DOWN)

    def test_trivial_loop_at_endpoint_controlled(self):
        assert is_controlled(self.sp, path(start=V0, end=V0))

    def test_trivial_loop_at_interior_rejected(self):
        m = EdgePoint("e0", H)
        assert not is_controlled(self.sp, path(start=m, end=m))

    def test_double_jump_via_end_pause(self):
        # up, pause at the top is fine, but coming back down is not
        p = path(Seg("e0", Z, O), PAUSE, Seg("e0", O, Z), start=V0, end=V0)
        assert not is_controlled(self.sp, p)


class TestNaturalInterval:
    sp = build("natural_interval")

    def test_anything_controlled(self):
        for p in (FULL_UP, FULL_DOWN, HALF_UP, MID_PAUSE_UP):
            assert is_controlled(self.sp, p)

    def test_wiggle_controlled(self):
        p = path(Seg("e0", Z, H), Seg("e0", H, F(1, 4)),
                 Seg("e0", F(1, 4), O), start=V0, end=V1)
        assert is_controlled(self.sp, p)


class TestDirectedInterval:
    sp = build("d_interval")

    def test_increasing_controlled(self):
        for p in (FULL_UP, HALF_UP, MID_PAUSE_UP):
            assert is_controlled(self.sp, p)

    def test_decreasing_rejected(self):
        assert not is_controlled(self.sp, FULL_DOWN)

    def test_interior_increasing_controlled(self):
        p = path(Seg("e0", F(1, 4), F(3, 4)),
                 start=EdgePoint("e0", F(1, 4)), end=EdgePoint("e0", F(3, 4)))
        assert is_controlled(self.sp, p)


class TestDelayedIntervals:
    minus = build("delayed_minus")
    plus = build("delayed_plus")

    def test_undelayed_run_rejected(self):
        assert not is_controlled(self.minus, FULL_UP)
        assert not is_controlled(self.plus, FULL_UP)

    def test_start_pause_accepted_by_minus_only(self):
        p = path(PAUSE, Seg("e0", Z, O), start=V0, end=V1)
        assert is_controlled(self.minus, p)
        assert not is_controlled(self.plus, p)

    def test_end_pause_accepted_by_plus_only(self):
        p = path(Seg("e0", Z, O), PAUSE, start=V0, end=V1)
        assert is_controlled(self.plus, p)
        assert not is_controlled(self.minus, p)


class TestReversibleOneJump:
    sp = build("reversible_one_jump")

    def test_both_full_runs_controlled(self):
        assert is_controlled(self.sp, FULL_UP)
        assert is_controlled(self.sp, FULL_DOWN)

    def test_half_runs_rejected(self):
        assert not is_controlled(self.sp, HALF_UP)
        assert not is_controlled(self.sp, path(Seg("e0", O, H),
                                               start=V1, end=EdgePoint("e0", H)))

    def test_round_trip_controlled(self):
        p = path(Seg("e0", Z, O), Seg("e0", O, Z), start=V0, end=V0)
        assert is_controlled(self.sp, p)


class TestSiphon:
    sp = build("siphon")

    def test_partial_rise_controlled(self):
        assert is_controlled(self.sp, HALF_UP)

    def test_full_fall_controlled(self):
        assert is_controlled(self.sp, FULL_DOWN)

    def test_partial_fall_rejected(self):
        p = path(Seg("e0", O, H), start=V1, end=EdgePoint("e0", H))
        assert not is_controlled(self.sp, p)

    def test_rise_then_full_fall_controlled(self):
        p = path(Seg("e0", Z, O), Seg("e0", O, Z), start=V0, end=V0)
        assert is_controlled(self.sp, p)

    def test_rise_then_partial_fall_rejected(self):
        p = path(Seg("e0", Z, O), Seg("e0", O, H),
                 start=V0, end=EdgePoint("e0", H))
        assert not is_controlled(self.sp, p)


class TestSiphonOsc:
    sp = build("siphon_osc")

    def test_partial_fall_from_below_top_controlled(self):
        p = path(Seg("e0", F(9, 10), F(3, 10)),
                 start=EdgePoint("e0", F(9, 10)), end=EdgePoint("e0", F(3, 10)))
        assert is_controlled(self.sp, p)

    def test_partial_fall_from_top_rejected(self):
        p = path(Seg("e0", O, F(3, 10)),
                 start=V1, end=EdgePoint("e0", F(3, 10)))
        assert not is_controlled(self.sp, p)

    def test_full_fall_from_top_controlled(self):
        assert is_controlled(self.sp, FULL_DOWN)


class TestTwoJump:
    """Two one-jump edges glued at a middle anchor: accepted monotone
    images are exactly the low half, the high half, or the whole."""
    sp = build("two_jump")

    def test_full_double_jump(self):
        p = path(Seg("e0", Z, O), Seg("e1", Z, O),
                 start=V0, end=V1)
        assert is_controlled(self.sp, p)
        out = parse_controlled(self.sp, p)
        assert out.count == 2 and len(out.instances) == 2

    def test_single_halves(self):
        assert is_controlled(self.sp, path(Seg("e0", Z, O),
                                           start=V0, end=Vertex("vm")))
        assert is_controlled(self.sp, path(Seg("e1", Z, O),
                                           start=Vertex("vm"), end=V1))

    def test_partial_images_rejected(self):
        # image [0, 3/4] in chain coordinates: full low jump + half high jump
        p = path(Seg("e0", Z, O), Seg("e1", Z, H),
                 start=V0, end=EdgePoint("e1", H))
        assert not is_controlled(self.sp, p)
        assert not is_controlled(self.sp, path(Seg("e0", H, O),
                                               start=EdgePoint("e0", H),
                                               end=Vertex("vm")))


class TestWindowWithMixedKinds:
    """Directed / one-jump / directed chain: crossing the jump edge needs
    the full unit sweep."""
    sp = build("window_2_3e")

    def test_short_crossing_rejected(self):
        # image [1/2, 3/2]: enters the jump edge but stops halfway
        p = path(Seg("e0", H, O), Seg("e1", Z, H),
                 start=EdgePoint("e0", H), end=EdgePoint("e1", H))
        assert not is_controlled(self.sp, p)

    def test_long_crossing_accepted(self):
        # image [1/2, 5/2]: full sweep of the jump edge
        p = path(Seg("e0", H, O), Seg("e1", Z, O), Seg("e2", Z, H),
                 start=EdgePoint("e0", H), end=EdgePoint("e2", H))
        assert is_controlled(self.sp, p)


class TestLineWindow:
    """Integer-anchored window of the controlled line: runs are chains of
    unit jumps between consecutive anchors."""
    sp = build("c_line_window")  # three unit jumps on one edge

    def test_unit_jump_controlled(self):
        p = path(Seg("e0", F(1, 3), F(2, 3)),
                 start=EdgePoint("e0", F(1, 3)), end=EdgePoint("e0", F(2, 3)))
        assert is_controlled(self.sp, p)

    def test_half_jump_rejected(self):
        p = path(Seg("e0", F(1, 3), H),
                 start=EdgePoint("e0", F(1, 3)), end=EdgePoint("e0", H))
        assert not is_controlled(self.sp, p)

    def test_off_anchor_jump_rejected(self):
        p = path(Seg("e0", F(1, 6), H),
                 start=EdgePoint("e0", F(1, 6)), end=EdgePoint("e0", H))
        assert not is_controlled(self.sp, p)

    def test_multi_jump_chain_controlled(self):
        p = path(Seg("e0", Z, O), start=V0, end=Vertex("v3"))
        out = parse_controlled(self.sp, p)
        assert out.controlled and out.count == 3


class TestExcludedEndpoint:
    sp = exclude_endpoints(build("siphon"), [V1])

    def test_run_ending_at_excluded_point_rejected(self):
        assert not is_controlled(self.sp, FULL_UP)

    def test_pass_through_jump_accepted(self):
        p = path(Seg("e0", H, O), Seg("e0", O, Z),
                 start=EdgePoint("e0", H), end=V0)
        assert is_controlled(self.sp, p)

    def test_run_starting_at_excluded_point_rejected(self):
        assert not is_controlled(self.sp, FULL_DOWN)


class TestTrackInput:
    def test_track_canonicalized_and_parsed(self):
        tr = Track(((F(0), V0), (F(1, 2), EdgePoint("e0", H)), (F(1), V1)))
        assert is_controlled(build("c_interval"), tr)
        assert is_controlled(build("d_interval"), tr)

    def test_track_with_dwell_is_a_pause(self):
        tr = Track(((F(0), V0), (F(1), V1)))
        sp = build("delayed_plus")
        assert not is_controlled(sp, tr)
        dw = Track(((F(0), V0), (F(1, 2), V1), (F(1), V1)))
        assert is_controlled(sp, dw)


class TestParseOutcome:
    def test_uncontrolled_reports_failure_position(self):
        out = parse_controlled(build("c_interval"), HALF_UP)
        assert not out.controlled
        assert out.count is None
        assert out.fail_at is not None

    def test_instance_count_reflects_ambiguity(self):
        # a natural edge admits a single fragment covering; count is finite
        out = parse_controlled(build("natural_interval"), FULL_UP)
        assert out.controlled and out.count >= 1
