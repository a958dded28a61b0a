import pytest

from ORDERS.base_order import BadPrefix, FinSubset
from ORDERS.builtin_orders import AntichainOrder, FiniteOrder, OmegaOrder, OmegaStarOrder, RadoOrder
from ORDERS.errors import ConstructionError, UnverifiedPrefix
from ORDERS.order_tools import NotFoundWithinBudget, find_bad_prefix, is_bad_prefix
from ORDERS.powerset import PowerMode, all_subsets, power_order
from SPACES.alex_upper import (AlexandroffSpace, TopologyMode, UpperSpace, base_space, finer_witness,
                               refinement_check)
import SPACES.noetherian as noetherian
from SPACES.base_space import ChainCode, OpenCode
from SPACES.noetherian import (Grew, NoChangeOnSample, NotCoveredUpTo, NotFoundUpTo, OpenIn, ascending_from_bad,
                               bad_from_ascending, closed_complement_scan, compact_cover_prefix, compactness_check,
                               eff_open_member, stabilization_scan)


class TestBaseSpace:
    def test_members(self):
        assert base_space(OmegaOrder(), TopologyMode.ALEXANDROFF).member(5, 3)
        upper = base_space(OmegaOrder(), TopologyMode.UPPER)
        assert isinstance(upper, UpperSpace)
        assert not upper.member(2, FinSubset.of([4]))
        assert all(upper.member(x, FinSubset()) for x in range(20))

    @pytest.mark.parametrize("order", [OmegaOrder(), OmegaStarOrder(), RadoOrder(), FiniteOrder(3, le=[(0, 2)])])
    def test_base_invariants(self, order):
        sample = [order.nth(i) for i in range(min(order.size or 6, 6))]
        alex = AlexandroffSpace(order)
        upper = UpperSpace(order)
        subsets = all_subsets(sample, 2)
        for x in sample:
            assert alex.member(x, alex.covering_index(x))
            assert upper.member(x, upper.covering_index(x))
            for i in sample:
                for j in sample:
                    if alex.member(x, i) and alex.member(x, j):
                        k = alex.k(x, i, j)
                        assert alex.member(x, k)
                        assert all(alex.member(y, i) and alex.member(y, j) for y in sample if alex.member(y, k))
            for i in subsets:
                for j in subsets:
                    if upper.member(x, i) and upper.member(x, j):
                        k = upper.k(x, i, j)
                        assert upper.member(x, k)
                        assert all(upper.member(y, i) and upper.member(y, j) for y in sample if upper.member(y, k))


class TestRefinement:
    def test_omega(self):
        report = refinement_check(OmegaOrder(), range(10))
        assert report.ok and report.checked == 1024 * 10

    def test_rado(self):
        rado = RadoOrder()
        assert refinement_check(rado, [rado.nth(i) for i in range(10)]).ok

    def test_antichain(self):
        assert refinement_check(AntichainOrder(5), range(5)).ok

    def test_witness(self):
        assert finer_witness(OmegaOrder(), FinSubset.of([4]), 6) == (6,)
        assert finer_witness(OmegaOrder(), FinSubset.of([4]), 3) == ()


class TestEffOpenMember:
    def test_empty_code(self):
        space = AlexandroffSpace(OmegaOrder())
        assert eff_open_member(space, OpenCode(h=lambda n: ()), 3, 50) == NotFoundUpTo(50)
        assert eff_open_member(space, OpenCode.empty(), 3, 50) == NotFoundUpTo(50)

    def test_first_witness(self):
        alex = AlexandroffSpace(OmegaOrder())
        assert eff_open_member(alex, OpenCode.from_stages([[0]]), 7, 5) == OpenIn(0, 0)
        upper = UpperSpace(OmegaOrder())
        code = OpenCode(h=lambda n: (FinSubset.of([n]),))
        # 3 ∉ {0}↓，所以阶段 0 已经是见证
        assert eff_open_member(upper, code, 3, 10) == OpenIn(0, FinSubset.of([0]))
        later = OpenCode(h=lambda n: (FinSubset.of([n + 3]),) if n < 4 else (FinSubset.of([0]),))
        assert eff_open_member(upper, later, 3, 10) == OpenIn(4, FinSubset.of([0]))
        assert eff_open_member(upper, later, 3, 4) == NotFoundUpTo(4)

    def test_json(self):
        code = OpenCode.from_stages([[1, 2], [], [5]])
        data = code.to_json()
        assert data == {"stages": [[1, 2], [], [5]], "tail": "empty"}
        assert OpenCode.from_json(data).stage(2) == (5,)
        with pytest.raises(ValueError):
            OpenCode(h=lambda n: ()).to_json()


class TestAscendingChains:
    def test_separators_are_the_bad_elements(self):
        order = OmegaStarOrder()
        chain = ascending_from_bad(order, find_bad_prefix(order, 3, 100))
        assert chain.separators == (0, 1, 2)
        space = AlexandroffSpace(order)
        assert isinstance(eff_open_member(space, chain.at(0), 0, 5), NotFoundUpTo)
        assert isinstance(eff_open_member(space, chain.at(1), 0, 5), OpenIn)

    def test_length_one(self):
        order = OmegaOrder()
        chain = ascending_from_bad(order, BadPrefix((4,), order))
        reports = stabilization_scan(AlexandroffSpace(order), chain, 1, [4], 3)
        assert reports == [Grew(0, 4)]

    def test_rejects_unverified(self):
        order = OmegaOrder()
        with pytest.raises(UnverifiedPrefix):
            ascending_from_bad(order, BadPrefix((1, 2), order))

    def test_omega_star_round_trip(self):
        order = OmegaStarOrder()
        bad = find_bad_prefix(order, 10, 10_000)
        chain = ascending_from_bad(order, bad)
        space = AlexandroffSpace(order)
        reports = stabilization_scan(space, chain, 10, bad.seq, 11)
        assert all(isinstance(r, Grew) for r in reports)
        assert [r.witness for r in reports] == list(bad.seq)
        assert all(isinstance(r, Grew) for r in closed_complement_scan(space, chain, 10, bad.seq, 11))
        recovered = bad_from_ascending(order, chain, 10, 1_000_000)
        assert isinstance(recovered, BadPrefix) and len(recovered) == 10
        assert is_bad_prefix(order, recovered.seq)

    def test_sharp_rado_round_trip(self):
        order = power_order(RadoOrder(), PowerMode.SHARP)
        bad = find_bad_prefix(order, 10, 1_000_000)
        assert isinstance(bad, BadPrefix)
        chain = ascending_from_bad(order, bad)
        reports = stabilization_scan(AlexandroffSpace(order), chain, 10, bad.seq, 11)
        assert sum(isinstance(r, Grew) for r in reports) == 10
        recovered = bad_from_ascending(order, chain, 10, 1_000_000)
        assert isinstance(recovered, BadPrefix) and len(recovered) == 10

    def test_principal_chain_over_omega_star(self):
        order = OmegaStarOrder()
        chain = ChainCode(g=lambda n, t: (n,) if t == 0 else ())
        recovered = bad_from_ascending(order, chain, 6, 100_000)
        assert isinstance(recovered, BadPrefix) and len(recovered) == 6

    def test_separator_checks_use_the_chain(self, monkeypatch):
        def shifted(g, **kwargs):
            return ChainCode(g=lambda n, t: g(n + 1, t), **kwargs)

        monkeypatch.setattr(noetherian, "ChainCode", shifted)
        order = OmegaStarOrder()
        with pytest.raises(ConstructionError):
            ascending_from_bad(order, BadPrefix((0, 1, 2), order))

    def test_replay_picks_in_search_order(self):
        # 5 在 G_1 里就出现，0 要到 G_9 才出现
        chain = ChainCode(g=lambda n, t: ((5, 0) if n >= 9 else (5,)) if t == 0 and n >= 1 else ())
        recovered = bad_from_ascending(AntichainOrder(), chain, 2, 10_000)
        assert recovered.seq == (5, 0)

    def test_replay_walks_the_chain(self):
        order = OmegaStarOrder()
        chain = ascending_from_bad(order, BadPrefix((1, 3, 5), order))
        assert bad_from_ascending(order, chain, 6, 10_000).seq == (0, 1, 2, 3, 4, 5)
        # G_3 = {0, ..., 5} 只有六个元素
        assert isinstance(bad_from_ascending(order, chain, 7, 2_000), NotFoundWithinBudget)

    def test_search_after_greedy_stalls(self):
        order = FiniteOrder(3, le=[(0, 1), (0, 2)])
        chain = ChainCode(g=lambda n, t: (t,) if n >= 1 and t < 3 else ())
        assert bad_from_ascending(order, chain, 2, 2_000).seq == (1, 2)

    def test_stable_chain(self):
        order = OmegaStarOrder()
        chain = ChainCode(g=lambda n, t: (0,) if t == 0 else ())
        result = bad_from_ascending(order, chain, 3, 2_000)
        assert isinstance(result, NotFoundWithinBudget)
        reports = stabilization_scan(AlexandroffSpace(order), chain, 4, range(10), 5)
        assert reports == [NoChangeOnSample(n) for n in range(4)]

    def test_shrinking_chain_shows_no_growth(self):
        order = OmegaOrder()
        chain = ChainCode(g=lambda n, t: (n,) if t == 0 else ())
        reports = stabilization_scan(AlexandroffSpace(order), chain, 5, range(10), 3)
        assert all(isinstance(r, NoChangeOnSample) for r in reports)


class TestCompactness:
    def test_antichain_needs_every_stage(self):
        space = AlexandroffSpace(AntichainOrder(3))
        assert compact_cover_prefix(space, OpenCode.from_stages([[0], [1], [2]]), 10) == 3

    def test_full_first_stage(self):
        space = AlexandroffSpace(AntichainOrder(3))
        assert compact_cover_prefix(space, OpenCode.from_stages([[0, 1, 2]]), 10) == 1

    def test_bottom_covers_a_chain(self):
        space = AlexandroffSpace(FiniteOrder(3, le=[(0, 1), (1, 2)]))
        assert compact_cover_prefix(space, OpenCode.from_stages([[0]]), 10) == 1

    def test_not_covered(self):
        space = AlexandroffSpace(AntichainOrder(3))
        opens = [OpenCode.from_stages([[0], [1]]), OpenCode.from_stages([[2], [1], [0]])]
        assert compactness_check(space, opens, 10) == [NotCoveredUpTo(10), 3]

    def test_infinite_carrier(self):
        with pytest.raises(ValueError):
            compact_cover_prefix(AlexandroffSpace(OmegaOrder()), OpenCode.empty(), 5)
