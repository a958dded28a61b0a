import itertools
import logging
import random
from dataclasses import dataclass
from enum import Enum
from typing import Dict, List, Optional, Sequence, Union

import networkx as nx

from ORDERS.base_order import BadPrefix, FinSubset, QuasiOrder
from ORDERS.builtin_orders import FiniteOrder
from ORDERS.errors import UnverifiedPrefix

logger = logging.getLogger(__name__)


class Relation(Enum):
    EQUIVALENT = "equivalent"
    STRICT_LESS = "strict_less"
    STRICT_GREATER = "strict_greater"
    INCOMPARABLE = "incomparable"
    # 别名：只有一个方向成立就是严格关系
    LEQ_ONLY = "strict_less"
    GEQ_ONLY = "strict_greater"


class Direction(Enum):
    DOWN = "down"
    UP = "up"


@dataclass(frozen=True)
class NotFoundWithinBudget:
    """有界搜索没有结果。这只是一个判决，绝不意味着该序是 wqo。"""
    budget: int
    spent: int
    exhaustive: bool = False


@dataclass(frozen=True)
class LawReport:
    reflexive: bool
    transitive: bool
    counterexample: Optional[tuple] = None

    @property
    def ok(self) -> bool:
        return self.reflexive and self.transitive


def relation_query(order: QuasiOrder, a: int, b: int) -> Relation:
    ab = order.leq(a, b)
    ba = order.leq(b, a)
    if ab and ba:
        return Relation.EQUIVALENT
    if ab:
        return Relation.STRICT_LESS
    if ba:
        return Relation.STRICT_GREATER
    return Relation.INCOMPARABLE


def closure_contains(order: QuasiOrder, direction: Direction, gens: FinSubset, q: int) -> bool:
    """Down: q ∈ gens↓；Up: q ∈ gens↑。gens 为空时恒为 False。"""
    order.check(q)
    if direction is Direction.DOWN:
        return any(order.leq(q, p) for p in gens)
    return any(order.leq(p, q) for p in gens)


def is_bad_prefix(order: QuasiOrder, seq: Sequence[int]) -> bool:
    for code in seq:
        order.check(code)
    for n in range(1, len(seq)):
        for m in range(n):
            if order.leq(seq[m], seq[n]):
                return False
    return True


def verified_prefix(order: QuasiOrder, seq: Sequence[int]) -> BadPrefix:
    if not is_bad_prefix(order, seq):
        raise UnverifiedPrefix(f"{list(seq)} is not a bad prefix of {order.name}")
    return BadPrefix(tuple(seq), order)


class _BudgetExhausted(Exception):
    pass


def search_window(order: QuasiOrder, window: List[int], target_len: int, budget: int, spent: int):
    """
    在窗口内做深度优先搜索：前缀必须是枚举顺序的子序列，且始终保持为坏前缀。
    返回 (找到的序列或 None, 已用的扩展次数)。
    """
    prefix: List[int] = []
    counter = [spent]

    def extend(start: int) -> bool:
        if len(prefix) == target_len:
            return True
        for pos in range(start, len(window)):
            if counter[0] >= budget:
                raise _BudgetExhausted()
            counter[0] += 1
            code = window[pos]
            if any(order._leq(p, code) for p in prefix):
                continue
            prefix.append(code)
            if extend(pos + 1):
                return True
            prefix.pop()
        return False

    try:
        found = extend(0)
    except _BudgetExhausted:
        return None, counter[0]
    return (list(prefix) if found else None), counter[0]


def find_bad_prefix(order: QuasiOrder, target_len: int, budget: int) -> Union[BadPrefix, NotFoundWithinBudget]:
    """
    有界搜索长度为 target_len 的坏前缀。

    按编码升序枚举载体，窗口（前 w 个元素）逐次加倍；每个窗口内做确定性的 DFS。
    budget 统计的是候选扩展次数，跨窗口累计。
    """
    if target_len < 1:
        raise ValueError(f"target_len must be >= 1, got {target_len}")
    spent = 0
    width = max(target_len, 2)
    enumeration = order.enumerate()
    window: List[int] = []
    while True:
        window.extend(itertools.islice(enumeration, width - len(window)))
        exhaustive = len(window) < width
        logger.info("find_bad_prefix(%s): window %d, spent %d/%d", order.name, len(window), spent, budget)
        found, spent = search_window(order, window, target_len, budget, spent)
        if found is not None:
            return verified_prefix(order, found)
        if spent >= budget:
            logger.warning("find_bad_prefix(%s): budget %d exhausted", order.name, budget)
            return NotFoundWithinBudget(budget=budget, spent=spent)
        if exhaustive:
            return NotFoundWithinBudget(budget=budget, spent=spent, exhaustive=True)
        width *= 2


def order_laws_report(order: QuasiOrder, sample: Sequence[int]) -> LawReport:
    """在有限样本上精确检查自反性与传递性。"""
    for q in sample:
        if not order.leq(q, q):
            return LawReport(False, True, (q,))
    for p, q, r in itertools.product(sample, repeat=3):
        if order.leq(p, q) and order.leq(q, r) and not order.leq(p, r):
            return LawReport(True, False, (p, q, r))
    return LawReport(True, True)


def random_finite_order(rng: random.Random, n: int, density: float = 0.3) -> FiniteOrder:
    """随机有限拟序：随机 <= 边的自反传递闭包，允许出现等价类。"""
    edges = [(a, b) for a in range(n) for b in range(n) if a != b and rng.random() < density]
    return FiniteOrder(n, le=edges, name=f"random({n})")


def order_to_dot(order: QuasiOrder, codes: Sequence[int], label: str = "order",
                 names: Optional[Dict[int, str]] = None) -> str:
    """有限编码集合上的 Hasse 图（等价类合并后取传递约简），输出 DOT 文本。"""
    names = names or {}
    codes = sorted(set(codes))
    graph = nx.DiGraph()
    graph.add_nodes_from(codes)
    graph.add_edges_from((a, b) for a in codes for b in codes if a != b and order.leq(a, b))
    condensed = nx.condensation(graph)
    reduced = nx.transitive_reduction(condensed)

    def node_label(scc: int) -> str:
        members = sorted(condensed.nodes[scc]["members"])
        return " ~ ".join(names.get(m, str(m)) for m in members)

    node_id = {scc: min(condensed.nodes[scc]["members"]) for scc in condensed.nodes}
    lines = [f'digraph "{label}" {{', "  rankdir=BT;"]
    for scc in sorted(condensed.nodes, key=lambda s: node_id[s]):
        lines.append(f'  n{node_id[scc]} [label="{node_label(scc)}"];')
    for u, v in sorted(reduced.edges, key=lambda e: (node_id[e[0]], node_id[e[1]])):
        lines.append(f"  n{node_id[u]} -> n{node_id[v]};")
    lines.append("}")
    return "\n".join(lines) + "\n"
