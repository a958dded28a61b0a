import logging
from dataclasses import dataclass
from typing import Dict, List, Optional, Tuple

from ORDERS.base_order import FinSubset
from ORDERS.errors import ConstructionError
from ORDERS.powerset import flat_leq
from REVERSAL.true_stages import Injection, true_set_at
from REVERSAL.xi_order import FLAT_POSET, Placement, XiOrder
from SPACES.power_space import ClosedCode
from SPACES.translate import translate_flat_code

logger = logging.getLogger(__name__)

X, Y, Z = 0, 1, 2


@dataclass(frozen=True)
class FlatStage:
    s: int
    a: FinSubset
    b: FinSubset
    generators: Tuple[FinSubset, ...]


@dataclass(frozen=True)
class SeparatorReport:
    """第 s 步的分隔集：属于第 s 个闭集、不属于第 s+1 个闭集。case 为 "i" 时 n0 是锚点阶段。"""
    s: int
    case: str
    n0: Optional[int]
    witness: FinSubset
    in_current: bool
    out_next: bool

    @property
    def strict(self) -> bool:
        return self.in_current and self.out_next


def in_flat_closure(order: XiOrder, generators, x: FinSubset) -> bool:
    """x ∈ E↓♭，即 x 被某个生成元在 <=♭ 下控制。"""
    return any(flat_leq(order, x, e) for e in generators)


class FlatChain:
    """
    Ξ_f(P, x) 上（P = {x, y, z}，x < z，y 与两者不可比）的下降闭集链 F_s = E_s↓♭：
    a_s = {x_s, y_s} ∪ {y_n : n ∈ T_s}，b_s = {z_s} ∪ {y_n : n ∈ T_s}，
    E_s = {a_s, b_s} ∪ {b_n : n ∈ T_s}。
    """

    def __init__(self, f: Injection, stages: int):
        """
        :param f: 单射。
        :param stages: 链的位置数 S；内部的 Ξ 多构造一个阶段，用于检查最后一步。
        """
        self.f = f
        self.stages = stages
        self.order = XiOrder(f, FLAT_POSET, stages + 1)
        self._cache: Dict[int, FlatStage] = {}

    def _el(self, stage: int, p: int) -> int:
        return self.order.encode(stage, p)

    def stage(self, s: int) -> FlatStage:
        if s not in self._cache:
            trues = true_set_at(self.f, s).members
            ys = [self._el(n, Y) for n in trues]
            a = FinSubset.of([self._el(s, X), self._el(s, Y)] + ys)
            b = FinSubset.of([self._el(s, Z)] + ys)
            generators = [a, b] + [self.stage(n).b for n in trues]
            self._cache[s] = FlatStage(s, a, b, tuple(generators))
        return self._cache[s]

    def separator(self, s: int) -> SeparatorReport:
        anchor = self.order.log.at(s + 1)
        if anchor.placement is Placement.ABOVE:
            case, n0, witness = "i", anchor.anchor, self.stage(anchor.anchor).b
        else:
            case, n0, witness = "ii", None, self.stage(s).a
        report = SeparatorReport(
            s=s, case=case, n0=n0, witness=witness,
            in_current=in_flat_closure(self.order, self.stage(s).generators, witness),
            out_next=not in_flat_closure(self.order, self.stage(s + 1).generators, witness),
        )
        if not report.strict:
            raise ConstructionError(f"flat separator {witness.elems} fails at stage {s}: {report}")
        logger.debug("flat chain: stage %d case %s separator %s", s, case, witness.elems)
        return report

    def code(self, s: int) -> ClosedCode:
        return translate_flat_code(self.order, self.stage(s).generators)

    def candidates(self) -> List[FinSubset]:
        pool = []
        for s in range(self.stages + 1):
            st = self.stage(s)
            pool.extend([st.a, st.b])
        return pool


def flat_stage(f: Injection, s: int) -> FlatStage:
    return FlatChain(f, s + 1).stage(s)


def flat_separator(f: Injection, s: int) -> SeparatorReport:
    return FlatChain(f, s + 1).separator(s)


def flat_chain_code(f: Injection, s: int) -> ClosedCode:
    """第 s 个位置在 upper(P^♭(Ξ)) 中的闭集编码。"""
    return FlatChain(f, s + 1).code(s)


def flat_chain_candidates(f: Injection, stages: int) -> List[FinSubset]:
    """所有生成元 a_s, b_s（s <= stages），作为 bad_from_chain 的候选池。"""
    return FlatChain(f, stages).candidates()
