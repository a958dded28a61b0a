import random

import pytest

from ORDERS.base_order import BadPrefix
from ORDERS.builtin_orders import FiniteOrder
from ORDERS.errors import NeedsMoreStages, OrderSpecError, UnverifiedPrefix
from ORDERS.order_tools import find_bad_prefix, order_laws_report
from REVERSAL.true_stages import F3, Injection, is_true, random_injection
from REVERSAL.xi_order import (FLAT_POSET, SHARP_POSET, SINGLETON, Anchor, FalseVerdict, InsufficientPrefix,
                               OmegaPartWitness, OmegaStarUpTo, Placement, PointedPoset, TrueVerdict, XiOrder,
                               anchor_log, decode_from_bad, lemma43_check, omega_certificate, omega_split,
                               placement_check, xi_leq_naive, xi_matrix, xi_to_dot)

# x < y, z < w
TWO_CHAINS = PointedPoset(FiniteOrder(4, le=[(0, 1), (2, 3)], name="two_chains"), 0)
POINTED = [SINGLETON, FLAT_POSET, SHARP_POSET, TWO_CHAINS]


class TestAnchors:
    def test_f3(self):
        log = anchor_log(F3, 5)
        assert log.at(1) == Anchor(1, 0, Placement.ABOVE)
        assert [log.at(s).placement for s in range(2, 5)] == [Placement.BELOW] * 3
        assert log.to_json()[:2] == [{"stage": 1, "anchor": 0, "dir": "above"},
                                     {"stage": 2, "anchor": 1, "dir": "below"}]

    def test_identity_only_goes_below(self):
        log = anchor_log(Injection.identity(), 6)
        assert all(a == Anchor(s + 1, s, Placement.BELOW) for s, a in enumerate(log.entries))


class TestXiOrder:
    def test_singleton_f3_is_a_chain(self):
        order = XiOrder(F3, SINGLETON, 6)
        # x_0 < x_5 < x_4 < x_3 < x_2 < x_1
        ranking = [0, 5, 4, 3, 2, 1]
        for i, a in enumerate(ranking):
            for b in ranking[i:]:
                assert order.leq(a, b)
            for b in ranking[:i]:
                assert not order.leq(a, b)

    @pytest.mark.parametrize("pointed", POINTED)
    def test_fast_leq_matches_matrix(self, pointed):
        rng = random.Random(4)
        for _ in range(50):
            f = random_injection(rng)
            stages = 12
            order = XiOrder(f, pointed, stages)
            rel = xi_matrix(f, pointed, stages)
            for a in order.enumerate():
                for b in order.enumerate():
                    assert order.leq(a, b) == bool(rel[a, b])

    @pytest.mark.parametrize("pointed", POINTED)
    def test_is_a_partial_order(self, pointed):
        order = XiOrder(F3, pointed, 5)
        codes = list(order.enumerate())
        assert order_laws_report(order, codes).ok
        for a in codes:
            for b in codes:
                if a != b:
                    assert not (order.leq(a, b) and order.leq(b, a))

    def test_naive_pairs(self):
        assert xi_leq_naive(F3, SINGLETON, (0, 0), (3, 0))
        assert not xi_leq_naive(F3, SINGLETON, (1, 0), (2, 0))

    def test_blocks_copy_the_pointed_poset(self):
        order = XiOrder(Injection.identity(), FLAT_POSET, 4)
        x, y, z = order.block(2)
        assert order.leq(x, z) and not order.leq(z, x)
        assert not order.leq(x, y) and not order.leq(y, z)

    def test_needs_more_stages(self):
        order = XiOrder(F3, FLAT_POSET, 3)
        with pytest.raises(NeedsMoreStages) as info:
            order.leq(0, order.size)
        assert info.value.stage == 3 and info.value.bound == 3
        with pytest.raises(NeedsMoreStages):
            order.encode(3, 0)

    def test_labels(self):
        order = XiOrder(F3, FLAT_POSET, 3)
        assert order.label(order.encode(2, 2)) == "z_2"
        assert order.label(0) == "x_0"

    def test_rejects_zero_stages(self):
        with pytest.raises(ValueError):
            XiOrder(F3, SINGLETON, 0)

    def test_many_stages(self):
        order = XiOrder(Injection.identity(), SINGLETON, 1500)
        assert order.leq(order.x_at(1499), order.x_at(0))
        assert not order.leq(order.x_at(0), order.x_at(1499))
        order = XiOrder(F3, FLAT_POSET, 1200)
        assert order.leq(order.x_at(0), order.x_at(1199))
        assert order.leq(order.x_at(1199), order.x_at(1))
        assert order.leq(order.x_at(0), order.encode(1199, 1))
        assert not order.leq(order.encode(1199, 1), order.x_at(0))


class TestPointedPoset:
    def test_rejects_cycles(self):
        with pytest.raises(OrderSpecError):
            PointedPoset(FiniteOrder(2, le=[(0, 1), (1, 0)]), 0)

    def test_rejects_short_names(self):
        with pytest.raises(OrderSpecError):
            PointedPoset(FiniteOrder(2), 0, ("x",))


class TestPlacement:
    def test_f3(self):
        order = XiOrder(F3, FLAT_POSET, 7)
        for m in range(1, 7):
            for n in range(m):
                assert placement_check(F3, FLAT_POSET, m, n, order=order)

    @pytest.mark.parametrize("pointed", POINTED)
    def test_random_injections(self, pointed):
        rng = random.Random(43)
        for _ in range(50):
            f = random_injection(rng)
            order = XiOrder(f, pointed, 16)
            assert all(placement_check(f, pointed, m, n, order=order) for m in range(1, 16) for n in range(m))

    def test_rejects_bad_indices(self):
        with pytest.raises(ValueError):
            placement_check(F3, SINGLETON, 2, 2)

    def test_old_name(self):
        assert lemma43_check is placement_check


class TestDecode:
    def test_identity_family(self):
        f = Injection.identity()
        order = XiOrder(f, SINGLETON, 6)
        bad = find_bad_prefix(order, 6, 10_000)
        assert bad.seq == (0, 1, 2, 3, 4, 5)
        for n in range(5):
            assert decode_from_bad(order, bad, n) == TrueVerdict(n + 1)
        assert decode_from_bad(order, bad, 5) == InsufficientPrefix(6)

    def test_identity_family_to_twenty(self):
        f = Injection.identity()
        order = XiOrder(f, SINGLETON, 21)
        bad = find_bad_prefix(order, 21, 1_000_000)
        for n in range(20):
            verdict = decode_from_bad(order, bad, n)
            assert verdict == TrueVerdict(n + 1) and is_true(f, n)

    def test_f3(self):
        order = XiOrder(F3, SINGLETON, 6)
        bad = find_bad_prefix(order, 5, 10_000)
        assert bad.seq == (1, 2, 3, 4, 5)
        assert decode_from_bad(order, bad, 0) == FalseVerdict(1)
        assert [decode_from_bad(order, bad, n) for n in range(1, 5)] == [TrueVerdict(i) for i in range(1, 5)]
        assert isinstance(decode_from_bad(order, bad, 5), InsufficientPrefix)

    def test_agrees_with_classification(self):
        rng = random.Random(9)
        for _ in range(20):
            f = random_injection(rng)
            order = XiOrder(f, SINGLETON, 10)
            bad = find_bad_prefix(order, 4, 100_000)
            if not isinstance(bad, BadPrefix):
                continue
            for n in range(10):
                verdict = decode_from_bad(order, bad, n)
                if isinstance(verdict, TrueVerdict):
                    assert is_true(f, n)
                if isinstance(verdict, FalseVerdict):
                    assert not is_true(f, n)

    def test_rejects_good_prefix(self):
        order = XiOrder(F3, SINGLETON, 4)
        with pytest.raises(UnverifiedPrefix):
            decode_from_bad(order, BadPrefix((0, 1), order), 0)


class TestOmegaSplit:
    def test_f3(self):
        split = omega_split(F3, 6)
        assert split.omega == (0,)
        assert split.omega_star == (1, 2, 3, 4, 5)
        assert split.linear

    def test_random_injections_give_linear_orders(self):
        rng = random.Random(15)
        for _ in range(30):
            f = random_injection(rng)
            for stages in (5, 10, 15):
                assert omega_split(f, stages).linear
            rel = xi_matrix(f, SINGLETON, 15)
            assert (rel | rel.T).all()

    def test_certificates(self):
        assert omega_certificate(F3, 0) == OmegaPartWitness(1)
        assert omega_certificate(F3, 2, 7) == OmegaStarUpTo(7)


def test_xi_to_dot_marks_anchors():
    dot = xi_to_dot(XiOrder(F3, SINGLETON, 3))
    assert dot.startswith('digraph "xi({x}, 3)" {')
    assert '  n1 -> n0 [style=dashed, label="above"];' in dot
    assert '  n2 -> n1 [style=dashed, label="below"];' in dot
    assert dot.endswith("}\n")
    assert dot == xi_to_dot(XiOrder(F3, SINGLETON, 3))
