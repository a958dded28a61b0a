import itertools
import random

import pytest

from ORDERS.base_order import FinSubset
from ORDERS.builtin_orders import AntichainOrder, FiniteOrder, OmegaOrder, RadoOrder
from ORDERS.errors import OrderSpecError
from ORDERS.order_tools import random_finite_order
from ORDERS.powerset import PowerMode, all_subsets, flat_leq, sharp_leq
from ORDERS.symbolic import Shape, SymbolicSubset
from SPACES.power_space import ClosedCode, In, Out, PowerSpace, closed_from_set, closed_member, psi
from SPACES.translate import (FlatMembership, running_intersection, translate_flat, translate_flat_code,
                              translate_sharp)


def fs(*codes):
    return FinSubset.of(codes)


def fin(order, *codes):
    return SymbolicSubset.fin(order, codes)


class TestPsi:
    def test_empty_index_flat(self):
        space = PowerSpace(OmegaOrder(), PowerMode.FLAT)
        assert psi(space, fin(space.base, 3), fs())
        assert psi(space, SymbolicSubset(Shape.CO_UP, fs(2), space.base), fs())

    def test_flat_down_closure(self):
        space = PowerSpace(OmegaOrder(), PowerMode.FLAT)
        assert psi(space, fin(space.base, 7), fs(2, 5))
        assert not psi(space, fin(space.base, 3), fs(2, 5))
        # CoDown({5}) 无上界，所以它的向下闭包是全体
        assert psi(space, SymbolicSubset(Shape.CO_DOWN, fs(5), space.base), fs(100))

    def test_sharp_up_closure(self):
        space = PowerSpace(OmegaOrder(), PowerMode.SHARP)
        assert psi(space, fin(space.base, 7), fs(2, 5))
        assert not psi(space, fin(space.base, 3), fs(2, 5))
        assert psi(space, SymbolicSubset(Shape.UP, fs(4), space.base), fs(1))

    def test_index_union_is_intersection(self):
        rng = random.Random(5)
        for mode in PowerMode:
            for _ in range(20):
                order = random_finite_order(rng, 5)
                space = PowerSpace(order, mode)
                subsets = all_subsets(range(5), 2)
                i, j = rng.choice(subsets), rng.choice(subsets)
                for x in subsets:
                    point = fin(order, *x.elems)
                    assert psi(space, point, i.union(j)) == (psi(space, point, i) and psi(space, point, j))


class TestClosedFromSet:
    def test_sharp_finite_generators(self):
        order = AntichainOrder()
        code = closed_from_set(PowerSpace(order, PowerMode.SHARP), fin(order, 0, 1))
        assert code.finite_stages == 2
        assert closed_member(code, fin(order, 0, 1), 0) == In(2, exact=True)
        assert closed_member(code, fin(order, 0), 0) == Out(1, fs(1))

    def test_flat_down_set_over_omega(self):
        order = OmegaOrder()
        code = closed_from_set(PowerSpace(order, PowerMode.FLAT), SymbolicSubset(Shape.DOWN, fs(5), order))
        assert closed_member(code, fin(order, 3), 10) == In(10, exact=True)
        # 第一个排除 {7} 的指标是 {6}：6 ∉ {5}↓ 且 6 ∈ {7}↓
        assert closed_member(code, fin(order, 7), 10) == Out(6, fs(6))

    def test_flat_empty_set_excludes_everything(self):
        order = OmegaOrder()
        code = closed_from_set(PowerSpace(order, PowerMode.FLAT), fin(order))
        for x in ([0], [4, 9], [12]):
            assert isinstance(closed_member(code, fin(order, *x), 0), Out)
        assert closed_member(code, fin(order), 0).exact

    def test_sharp_up_set_is_an_infinite_stream(self):
        order = OmegaOrder()
        code = closed_from_set(PowerSpace(order, PowerMode.SHARP), SymbolicSubset(Shape.UP, fs(3), order))
        assert code.finite_stages is None
        assert code.stage(2) == () and code.stage(4) == (fs(4),)
        verdict = closed_member(code, fin(order, 2, 9), 20)
        assert verdict == In(20, exact=False)
        assert closed_member(code, fin(order, 4, 5), 20) == Out(3, fs(3))
        assert closed_member(code, fin(order, 6), 20) == Out(3, fs(3))

    def test_whole_space(self):
        space = PowerSpace(OmegaOrder(), PowerMode.SHARP)
        assert closed_member(ClosedCode.whole(space), fin(space.base, 1, 2), 5) == In(0, exact=True)

    def test_json(self):
        space = PowerSpace(AntichainOrder(), PowerMode.SHARP)
        code = closed_from_set(space, fin(space.base, 0, 3))
        data = code.to_json()
        assert data == {"mode": "sharp", "stages": [[[0]], [[3]]], "tail": "empty"}
        again = ClosedCode.from_json(space, data)
        assert again.stage(1) == (fs(3),)
        with pytest.raises(ValueError):
            ClosedCode.from_json(PowerSpace(AntichainOrder(), PowerMode.FLAT), data)


class TestTranslate:
    def test_subset_case(self):
        order = OmegaOrder()
        decide = translate_flat(order, [fs(2, 6)])
        assert decide(fs(2)) == FlatMembership(True)
        assert decide(fs(1, 5)).member

    def test_antichain_exclusion(self):
        order = AntichainOrder(4)
        decide = translate_flat(order, [fs(0)])
        assert decide(fs(1)) == FlatMembership(False, (1,))

    def test_flat_agreement(self):
        rng = random.Random(2024)
        for _ in range(200):
            order = random_finite_order(rng, 6)
            points = all_subsets(range(6), 3)
            generators = [rng.choice(points) for _ in range(rng.randint(0, 3))]
            decide = translate_flat(order, generators)
            code = translate_flat_code(order, generators)
            for x in points:
                expected = any(flat_leq(order, x, e) for e in generators)
                assert decide(x).member == expected
                assert isinstance(closed_member(code, fin(order, *x.elems), 0), In) == expected

    def test_sharp_agreement(self):
        rng = random.Random(99)
        for _ in range(200):
            order = random_finite_order(rng, 6)
            points = all_subsets(range(6), 3)
            nonempty = [p for p in points if len(p)]
            generators = [rng.choice(nonempty) for _ in range(rng.randint(1, 3))]
            code = translate_sharp(order, generators)
            for x in points:
                expected = any(sharp_leq(order, x, e) for e in generators)
                assert isinstance(closed_member(code, fin(order, *x.elems), 0), In) == expected

    def test_sharp_examples(self):
        order = AntichainOrder()
        code = translate_sharp(order, [fs(0), fs(1)])
        assert code.finite_stages == 1 and code.stage(0) == (fs(0, 1),)
        omega = OmegaOrder()
        assert isinstance(closed_member(translate_sharp(omega, [fs(0, 1)]), fin(omega, 0), 0), In)

    def test_sharp_rejects_empty_generator(self):
        with pytest.raises(OrderSpecError):
            translate_sharp(OmegaOrder(), [fs(1), fs()])

    def test_flat_code_without_generators(self):
        order = FiniteOrder(3)
        code = translate_flat_code(order, [])
        assert code.finite_stages == 1
        assert code.stage(0) == (fs(),)
        assert isinstance(closed_member(code, fin(order, 1), 0), Out)

    def test_flat_code_on_infinite_base(self):
        rado = RadoOrder()
        a, b = rado.nth(0), rado.nth(1)
        code = translate_flat_code(rado, [fs(b)])
        assert isinstance(closed_member(code, fin(rado, a), 0), In)
        verdict = closed_member(code, fin(rado, rado.nth(2)), 0)
        assert verdict == Out(2, fs(rado.nth(2)))


class TestRunningIntersection:
    def test_membership_is_conjunction(self):
        order = AntichainOrder(4)
        space = PowerSpace(order, PowerMode.SHARP)
        first = closed_from_set(space, fin(order, 0, 1))
        second = closed_from_set(space, fin(order, 2))
        running = running_intersection([first, second])
        assert len(running) == 2
        both = running[-1]
        assert both.finite_stages == 5
        assert closed_member(both, fin(order, 0, 1, 2), 0).exact
        assert closed_member(both, fin(order, 0, 1), 0) == Out(1, fs(2))
        for x in all_subsets(range(4)):
            point = fin(order, *x.elems)
            expected = all(isinstance(closed_member(c, point, 0), In) for c in (first, second))
            assert isinstance(closed_member(both, point, 0), In) == expected

    def test_descending(self):
        rng = random.Random(8)
        order = random_finite_order(rng, 5)
        points = all_subsets(range(5), 3)
        codes = [translate_sharp(order, [rng.choice(points[1:])]) for _ in range(4)]
        running = running_intersection(codes)
        for x in points:
            inside = [isinstance(closed_member(c, fin(order, *x.elems), 0), In) for c in running]
            assert all(later <= earlier for earlier, later in zip(inside, inside[1:]))


def test_translations_cover_every_small_order():
    # 3 元载体上的全部拟序（按边集枚举）
    pairs = [(a, b) for a in range(3) for b in range(3) if a != b]
    points = all_subsets(range(3))
    for k in range(len(pairs) + 1):
        for edges in itertools.combinations(pairs, k):
            order = FiniteOrder(3, le=edges)
            generators = [fs(0, 1), fs(2)]
            decide = translate_flat(order, generators)
            sharp = translate_sharp(order, generators)
            for x in points:
                assert decide(x).member == any(flat_leq(order, x, e) for e in generators)
                assert isinstance(closed_member(sharp, fin(order, *x.elems), 0), In) == any(
                    sharp_leq(order, x, e) for e in generators)
