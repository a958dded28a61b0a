import logging
from dataclasses import dataclass
from enum import Enum
from typing import Optional, Sequence, Tuple

from ORDERS.base_order import FinSubset, QuasiOrder
from ORDERS.order_tools import Direction, closure_contains
from ORDERS.powerset import all_subsets
from SPACES.base_space import CSCSpace

logger = logging.getLogger(__name__)


class TopologyMode(Enum):
    ALEXANDROFF = "alexandroff"
    UPPER = "upper"


class AlexandroffSpace(CSCSpace):
    """alex(Q)：指标是元素本身，U_q = q↑，k(q, p, r) = q。"""

    def member(self, x: int, i: int) -> bool:
        return self.order.leq(i, x)

    def k(self, x: int, i: int, j: int) -> int:
        return x

    def covering_index(self, x: int) -> int:
        return x


class UpperSpace(CSCSpace):
    """upper(Q)：指标是有限集 i，V_i = Q \\ (i↓)，ℓ(q, i, j) = i ∪ j。空集指标给出整个空间。"""

    def member(self, x: int, i: FinSubset) -> bool:
        return not closure_contains(self.order, Direction.DOWN, i, x)

    def k(self, x: int, i: FinSubset, j: FinSubset) -> FinSubset:
        return i.union(j)

    def covering_index(self, x: int) -> FinSubset:
        return FinSubset()


def base_space(order: QuasiOrder, mode: TopologyMode) -> CSCSpace:
    if mode is TopologyMode.ALEXANDROFF:
        return AlexandroffSpace(order)
    return UpperSpace(order)


def finer_witness(order: QuasiOrder, i: FinSubset, n: int) -> Tuple[int, ...]:
    """alex(Q) 比 upper(Q) 有效更细的见证：f(i, n) = {n}（n ∉ i↓ 时），否则为空。"""
    if order.is_valid(n) and not closure_contains(order, Direction.DOWN, i, n):
        return (n,)
    return ()


@dataclass(frozen=True)
class RefinementReport:
    ok: bool
    checked: int
    counterexample: Optional[Tuple[int, Tuple[int, ...]]] = None


def refinement_check(order: QuasiOrder, sample: Sequence[int]) -> RefinementReport:
    """
    对样本中每个点 x 与样本的每个有限子集 i，验证
    x ∈ V_i  ⇔  (∃n)(∃q ∈ f(i, n))(x ∈ U_q)。
    右侧的阶段 n 取遍样本以及 x 自身的编码。
    """
    upper = UpperSpace(order)
    alex = AlexandroffSpace(order)
    sample = sorted(set(order.check(x) for x in sample))
    checked = 0
    for i in all_subsets(sample):
        for x in sample:
            lhs = upper.member(x, i)
            stages = sorted(set(sample) | {x})
            rhs = any(alex.member(x, q) for n in stages for q in finer_witness(order, i, n))
            checked += 1
            if lhs != rhs:
                logger.error("refinement fails at x=%s, i=%s", x, i.elems)
                return RefinementReport(False, checked, (x, i.elems))
    return RefinementReport(True, checked)
