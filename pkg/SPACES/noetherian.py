import logging
from dataclasses import dataclass
from typing import Dict, List, Sequence, Tuple, Union

from ORDERS.base_order import BadPrefix, QuasiOrder
from ORDERS.order_tools import NotFoundWithinBudget, is_bad_prefix, search_window, verified_prefix
from ORDERS.errors import ConstructionError, UnverifiedPrefix
from ORDERS.pairing import tuple_unpair
from SPACES.alex_upper import AlexandroffSpace
from SPACES.base_space import CSCSpace, ChainCode, Index, OpenCode

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class OpenIn:
    stage: int
    index: Index


@dataclass(frozen=True)
class NotFoundUpTo:
    horizon: int


@dataclass(frozen=True)
class Grew:
    position: int
    witness: int


@dataclass(frozen=True)
class NoChangeOnSample:
    position: int


@dataclass(frozen=True)
class NotCoveredUpTo:
    horizon: int


def eff_open_member(space: CSCSpace, h: OpenCode, x: int, horizon: int) -> Union[OpenIn, NotFoundUpTo]:
    """扫描 horizon 之前的阶段；成员关系只是半可判定的，NotFoundUpTo 只对该 horizon 成立。"""
    space.order.check(x)
    for n in range(horizon):
        for i in h.stage(n):
            if space.member(x, i):
                return OpenIn(n, i)
    return NotFoundUpTo(horizon)


def ascending_from_bad(order: QuasiOrder, bad: BadPrefix) -> ChainCode:
    """
    由坏前缀 (q_0, ..., q_{L-1}) 构造 alex(Q) 上的上升开集链 G_n = {q_i : i < n}↑。
    位置 n 的分隔元是 q_n：q_n ∈ G_{n+1} 且 q_n ∉ G_n，两者都通过产出的链编码判定。
    """
    if not is_bad_prefix(order, bad.seq):
        raise UnverifiedPrefix(f"{list(bad.seq)} is not bad in {order.name}")
    seq = bad.seq

    def g(n: int, t: int) -> Tuple[int, ...]:
        return (seq[t],) if t < min(n, len(seq)) else ()

    chain = ChainCode(g=g, finite_stages=len(seq), separators=tuple(seq), label=f"ascending({order.name})")
    space = AlexandroffSpace(order)
    # 第 len(seq) 个阶段之后都为空，所以 horizon = len(seq) 时 NotFoundUpTo 是精确的
    horizon = len(seq)
    for n, q in enumerate(seq):
        if isinstance(eff_open_member(space, chain.at(n), q, horizon), OpenIn) or isinstance(
                eff_open_member(space, chain.at(n + 1), q, horizon), NotFoundUpTo):
            raise ConstructionError(f"separator q_{n}={q} does not witness G_{n} < G_{n + 1}")
    return chain


def bad_from_ascending(order: QuasiOrder, chain: ChainCode, length: int,
                       budget: int) -> Union[BadPrefix, NotFoundWithinBudget]:
    """
    从不稳定的上升开集链中逐个取出坏序列的元素。

    已有 (q_i, n_i)_{i<k} 时，按编码升序搜索三元组 (元素, 链位置 n, 阶段)，
    取第一个满足 q ∈ G_n 且对所有 i < k 都有 q_i ≰ q 的元素作为 q_k，n_k = n。
    被拒绝的三元组以后也不会被接受，所以搜索从上一次停下的位置继续即可。

    有限链在最后一个严格增长之后就稳定了，贪心选择可能在那之前用完候选。
    此时用剩余预算在已见到的链成员上做一次坏前缀 DFS。

    参数:
    - budget: 前一半用于三元组测试，后一半留给 DFS

    返回:
    - 长度为 length 的 BadPrefix；预算用完时返回 NotFoundWithinBudget
    """
    space = AlexandroffSpace(order)
    replay_budget = budget - budget // 2
    picked: List[int] = []
    seen: Dict[int, int] = {}
    spent = 0
    code = 0
    while len(picked) < length and spent < replay_budget:
        spent += 1
        rank, position, stage = tuple_unpair(code, 3)
        code += 1
        if order.size is not None and rank >= order.size:
            continue
        q = order.nth(rank)
        if q in seen or not any(space.member(q, i) for i in chain.g(position, stage)):
            continue
        seen[q] = rank
        if not any(order.leq(p, q) for p in picked):
            picked.append(q)
            logger.debug("bad_from_ascending: q_%d=%d in G_%d", len(picked) - 1, q, position)
    if len(picked) == length:
        return verified_prefix(order, picked)
    logger.info("bad_from_ascending: replay stopped at %d of %d, searching %d chain members",
                len(picked), length, len(seen))
    found, spent = search_window(order, sorted(seen, key=seen.get), length, budget, spent)
    if found is not None:
        return verified_prefix(order, found)
    logger.warning("bad_from_ascending: budget %d exhausted with %d chain members", budget, len(seen))
    return NotFoundWithinBudget(budget=budget, spent=spent)


def stabilization_scan(space: CSCSpace, chain: ChainCode, positions: int, sample: Sequence[int],
                       horizon: int) -> List[Union[Grew, NoChangeOnSample]]:
    """对每个位置 n 在样本里找 G_{n+1} \\ G_n 的见证；NoChangeOnSample 只相对于样本与 horizon 成立。"""
    reports = []
    for n in range(positions):
        current, following = chain.at(n), chain.at(n + 1)
        witness = None
        for x in sample:
            if isinstance(eff_open_member(space, following, x, horizon), OpenIn) and isinstance(
                    eff_open_member(space, current, x, horizon), NotFoundUpTo):
                witness = x
                break
        reports.append(Grew(n, witness) if witness is not None else NoChangeOnSample(n))
    return reports


def closed_complement_scan(space: CSCSpace, chain: ChainCode, positions: int, sample: Sequence[int],
                           horizon: int) -> List[Union[Grew, NoChangeOnSample]]:
    """
    闭集形式：C_n = X \\ G_n 构成下降链，C_n \\ C_{n+1} 的见证就是 G_{n+1} \\ G_n 的见证。
    另外检查样本上 C_{n+1} ⊆ C_n，违反时抛出 ConstructionError。
    """
    reports = stabilization_scan(space, chain, positions, sample, horizon)
    for n in range(positions):
        for x in sample:
            out_next = isinstance(eff_open_member(space, chain.at(n + 1), x, horizon), NotFoundUpTo)
            out_now = isinstance(eff_open_member(space, chain.at(n), x, horizon), NotFoundUpTo)
            if out_next and not out_now:
                raise ConstructionError(f"complements do not descend at position {n}: point {x}")
    return reports


def compact_cover_prefix(space: CSCSpace, h: OpenCode, horizon: int) -> Union[int, NotCoveredUpTo]:
    """有限点集上，最小的 N 使前 N 个阶段覆盖所有点。"""
    if space.order.size is None:
        raise ValueError("compact_cover_prefix needs a finite carrier")
    uncovered = set(space.points())
    if not uncovered:
        return 0
    for n in range(horizon):
        indices = h.stage(n)
        uncovered = {x for x in uncovered if not any(space.member(x, i) for i in indices)}
        if not uncovered:
            return n + 1
    logger.warning("compact_cover_prefix: %d points still uncovered at horizon %d", len(uncovered), horizon)
    return NotCoveredUpTo(horizon)


def compactness_check(space: CSCSpace, opens: Sequence[OpenCode], horizon: int) -> List[Union[int, NotCoveredUpTo]]:
    return [compact_cover_prefix(space, h, horizon) for h in opens]
