import itertools
import logging
from dataclasses import dataclass
from typing import Dict, List, Tuple

from ORDERS.base_order import FinSubset
from ORDERS.errors import ConstructionError
from ORDERS.powerset import sharp_leq
from REVERSAL.flat_chain import SeparatorReport
from REVERSAL.true_stages import Injection
from REVERSAL.xi_order import SHARP_POSET, Placement, XiOrder
from SPACES.power_space import ClosedCode
from SPACES.translate import running_intersection, translate_sharp

logger = logging.getLogger(__name__)

X, Y = 0, 1


@dataclass(frozen=True)
class SharpStage:
    s: int
    a: FinSubset
    b: FinSubset
    generators: Tuple[FinSubset, ...]


@dataclass(frozen=True)
class ClaimsReport:
    antichain: bool
    avoidance: bool
    persistence: bool

    @property
    def ok(self) -> bool:
        return self.antichain and self.avoidance and self.persistence


def _sorted(generators) -> Tuple[FinSubset, ...]:
    return tuple(sorted(set(generators), key=lambda e: e.elems))


class SharpChain:
    """
    Ξ_f(P, x) 上（P = {x, y} 为反链）的下降闭集链 F_s = ⋂_{t <= s} E_t↓♯。
    a_s 是 E_s 中唯一含 x_s 的成员，b_s 是唯一含 y_s 的成员。
    """

    def __init__(self, f: Injection, stages: int):
        self.f = f
        self.stages = stages
        self.order = XiOrder(f, SHARP_POSET, stages + 1)
        self._cache: Dict[int, SharpStage] = {}

    def _el(self, stage: int, p: int) -> int:
        return self.order.encode(stage, p)

    def stage(self, s: int) -> SharpStage:
        for t in range(len(self._cache), s + 1):
            self._cache[t] = self._build(t)
        return self._cache[s]

    def _build(self, t: int) -> SharpStage:
        if t == 0:
            a, b = FinSubset((self._el(0, X),)), FinSubset((self._el(0, Y),))
            return SharpStage(0, a, b, _sorted([a, b]))
        anchor = self.order.log.at(t)
        if anchor.placement is Placement.ABOVE:
            prev = self._cache[anchor.anchor]
            a = prev.b.union(FinSubset((self._el(t, X),)))
            b = prev.b.union(FinSubset((self._el(t, Y),)))
            rest = [e for e in prev.generators if e not in (prev.a, prev.b)]
        else:
            prev = self._cache[t - 1]
            a = prev.a.without(self._el(t - 1, X)).union(FinSubset((self._el(t, X),)))
            b = prev.b.without(self._el(t - 1, Y)).union(FinSubset((self._el(t, Y),)))
            rest = [e for e in prev.generators if e != prev.a]
        return SharpStage(t, a, b, _sorted(rest + [a, b]))

    def in_closure(self, generators, x: FinSubset) -> bool:
        """x ∈ E↓♯。"""
        return any(sharp_leq(self.order, x, e) for e in generators)

    def claims(self, s: int) -> ClaimsReport:
        st = self.stage(s)
        points = sorted(set(itertools.chain.from_iterable(st.generators)))
        antichain = all(not self.order.leq(p, q) for p in points for q in points if p != q)
        others = [e for e in st.generators if e != st.b]
        avoidance = not self.in_closure(others, st.b)
        persistence = all(self.in_closure(self.stage(i).generators, st.a) for i in range(s + 1))
        return ClaimsReport(antichain, avoidance, persistence)

    def in_chain(self, s: int, x: FinSubset) -> bool:
        """x ∈ F_s。"""
        return all(self.in_closure(self.stage(t).generators, x) for t in range(s + 1))

    def separator(self, s: int) -> SeparatorReport:
        anchor = self.order.log.at(s + 1)
        if anchor.placement is Placement.ABOVE:
            case, n0, witness = "i", anchor.anchor, self.stage(anchor.anchor).b
        else:
            case, n0, witness = "ii", None, self.stage(s).a
        report = SeparatorReport(
            s=s, case=case, n0=n0, witness=witness,
            in_current=self.in_chain(s, witness),
            out_next=not self.in_closure(self.stage(s + 1).generators, witness),
        )
        if not report.strict:
            raise ConstructionError(f"sharp separator {witness.elems} fails at stage {s}: {report}")
        logger.debug("sharp chain: stage %d case %s separator %s", s, case, witness.elems)
        return report

    def code(self, s: int) -> ClosedCode:
        return running_intersection([translate_sharp(self.order, self.stage(t).generators) for t in range(s + 1)])[-1]

    def candidates(self) -> List[FinSubset]:
        """所有阶段的生成元，去重后按阶段顺序排列。"""
        pool: List[FinSubset] = []
        for s in range(self.stages + 1):
            pool.extend(e for e in self.stage(s).generators if e not in pool)
        return pool


def sharp_stage(f: Injection, s: int) -> SharpStage:
    return SharpChain(f, s + 1).stage(s)


def sharp_claims(f: Injection, s: int) -> ClaimsReport:
    return SharpChain(f, s + 1).claims(s)


def sharp_separator(f: Injection, s: int) -> SeparatorReport:
    return SharpChain(f, s + 1).separator(s)


def sharp_chain_code(f: Injection, s: int) -> ClosedCode:
    """第 s 个位置在 upper(P^♯(Ξ)) 中的闭集编码：各阶段 translate_sharp 的逐步交。"""
    return SharpChain(f, s + 1).code(s)


def sharp_chain_candidates(f: Injection, stages: int) -> List[FinSubset]:
    return SharpChain(f, stages).candidates()
