import logging
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple, Union

from ORDERS.base_order import BadPrefix, FinSubset, QuasiOrder
from ORDERS.errors import ConstructionError, UnverifiedPrefix
from ORDERS.order_tools import NotFoundWithinBudget, is_bad_prefix, verified_prefix
from ORDERS.powerset import PowerMode, power_order
from ORDERS.symbolic import SymbolicSubset, iter_members
from SPACES.power_space import ClosedCode, In, Out, PowerSpace, closed_member, psi

logger = logging.getLogger(__name__)

DEFAULT_POOL_SIZE = 256
DEFAULT_HORIZON = 64


@dataclass(frozen=True)
class LookaheadInconclusive:
    """没有任何候选 r_j 的受限链在窗口内继续增长；这是启发式的失败判决，不是反例。"""
    candidates: Tuple[int, ...]
    window: int
    found: Tuple[int, ...] = ()


@dataclass(frozen=True)
class StillInUpTo:
    horizon: int


@dataclass(frozen=True)
class ChainFromBad:
    """由坏序列得到的闭集链前缀，以及每一步的分隔点（第 n 个分隔点在 F_n 里、不在 F_{n+1} 里）。"""
    mode: PowerMode
    codes: Tuple[ClosedCode, ...]
    separators: Tuple[FinSubset, ...]


class _Budget:
    def __init__(self, budget: int):
        self.budget = budget
        self.spent = 0

    def take(self) -> bool:
        if self.spent >= self.budget:
            return False
        self.spent += 1
        return True


def default_pool(base: QuasiOrder, pool_size: int = DEFAULT_POOL_SIZE) -> List[FinSubset]:
    """升序的幂集编码 0, 1, 2, ... 对应的有限集，最多 pool_size 个。"""
    order = power_order(base, PowerMode.FLAT)
    limit = pool_size if order.size is None else min(pool_size, order.size)
    return [order.decode(c) for c in range(limit)]


def _inside(code: ClosedCode, x: FinSubset, horizon: int) -> bool:
    return isinstance(closed_member(code, SymbolicSubset.fin(code.space.base, x.elems), horizon), In)


def bad_from_chain(space: PowerSpace, chain: Sequence[ClosedCode], length: int, budget: int,
                   pool: Optional[Sequence[FinSubset]] = None, horizon: int = DEFAULT_HORIZON,
                   lookahead: int = 8) -> Union[BadPrefix, NotFoundWithinBudget, LookaheadInconclusive]:
    """
    从下降闭集链里抽出坏序列。

    参数:
    - space: 闭集所在的幂空间，决定模式。
    - chain: 下降链的前缀 F_0 ⊇ F_1 ⊇ ...（调用方保证，必要时先做 running_intersection）。
    - length: 需要的坏序列长度。
    - budget: 成员测试次数的上限。
    - pool: 候选有限集；默认是升序幂集编码。
    - lookahead: Sharp 模式下判断受限链是否继续增长的窗口 W。

    返回:
    - Flat: P_f^♭(Q) 中的坏前缀（幂集编码）；Sharp: Q 中的坏前缀。
    """
    pool = list(pool) if pool is not None else default_pool(space.base)
    meter = _Budget(budget)
    if space.mode is PowerMode.FLAT:
        return _flat_extract(space, list(chain), length, meter, pool, horizon)
    return _sharp_extract(space, list(chain), length, meter, pool, horizon, lookahead)


def _flat_extract(space, chain, length, meter, pool, horizon):
    found: List[FinSubset] = []
    position = -1
    while len(found) < length:
        hit = None
        for m in range(position + 1, len(chain) - 1):
            for a in pool:
                if not meter.take():
                    logger.warning("bad_from_chain(flat): budget %d exhausted at length %d", meter.budget, len(found))
                    return NotFoundWithinBudget(meter.budget, meter.spent)
                if _inside(chain[m], a, horizon) and not _inside(chain[m + 1], a, horizon):
                    hit = (m, a)
                    break
            if hit:
                break
        if hit is None:
            logger.warning("bad_from_chain(flat): chain shows no further strict step on the pool")
            return NotFoundWithinBudget(meter.budget, meter.spent, exhaustive=True)
        position, a = hit
        logger.debug("bad_from_chain(flat): %s leaves the chain after position %d", a.elems, position)
        found.append(a)
    order = power_order(space.base, PowerMode.FLAT)
    try:
        return verified_prefix(order, [order.encode(a) for a in found])
    except UnverifiedPrefix as e:
        raise ConstructionError(f"extracted sets do not form a bad sequence: {e}")


def _restricted_inside(code: ClosedCode, picks: Sequence[int], a: FinSubset, horizon: int) -> bool:
    # a ∈ {q}↓♯ 当且仅当 q ∈ a↑
    base = code.space.base
    return all(any(base._leq(p, q) for p in a) for q in picks) and _inside(code, a, horizon)


def _grows(chain, picks, pool, start, window, meter, horizon) -> Optional[bool]:
    for n in range(start, min(start + window, len(chain) - 1)):
        for a in pool:
            if not meter.take():
                return None
            if _restricted_inside(chain[n], picks, a, horizon) and not _restricted_inside(chain[n + 1], picks, a, horizon):
                return True
    return False


def _sharp_extract(space, chain, length, meter, pool, horizon, lookahead):
    base = space.base
    picks: List[int] = []
    while len(picks) < length:
        hit = None
        for ell in range(len(chain) - 1):
            for a in pool:
                if not meter.take():
                    logger.warning("bad_from_chain(sharp): budget %d exhausted at length %d", meter.budget, len(picks))
                    return NotFoundWithinBudget(meter.budget, meter.spent)
                if not _restricted_inside(chain[ell], picks, a, horizon):
                    continue
                verdict = closed_member(chain[ell + 1], SymbolicSubset.fin(base, a.elems), horizon)
                if isinstance(verdict, Out):
                    hit = (ell, verdict.index)
                    break
            if hit:
                break
        if hit is None:
            logger.warning("bad_from_chain(sharp): restricted chain shows no strict step on the pool")
            return NotFoundWithinBudget(meter.budget, meter.spent, exhaustive=True)
        ell, separator = hit
        candidates = separator.elems
        if len(picks) + 1 == length:
            picks.append(candidates[0])
            break
        chosen = None
        for r in candidates:
            grows = _grows(chain, picks + [r], pool, ell + 1, lookahead, meter, horizon)
            if grows is None:
                return NotFoundWithinBudget(meter.budget, meter.spent)
            if grows:
                chosen = r
                break
        if chosen is None:
            logger.warning("bad_from_chain(sharp): no candidate of %s grows within %d positions", candidates, lookahead)
            return LookaheadInconclusive(candidates, lookahead, tuple(picks))
        logger.debug("bad_from_chain(sharp): picked %d from %s at position %d", chosen, candidates, ell)
        picks.append(chosen)
    try:
        return verified_prefix(base, picks)
    except UnverifiedPrefix as e:
        raise ConstructionError(f"extracted elements do not form a bad sequence: {e}")


def chain_from_bad(order: QuasiOrder, mode: PowerMode, bad: BadPrefix) -> ChainFromBad:
    """
    坏序列 (q_0, ..., q_{L-1}) 给出严格下降的闭集链：
    Flat: F_n = ⋂_{i <= n} {Q \\ q_i↑}↓♭，分隔点 {q_{n+1}}；
    Sharp: H_n = {q_i : i <= n}↓♯，分隔点 {q_0, ..., q_n}。
    两种模式的指标流都是 [{q_0}], ..., [{q_n}]，每个分隔点都用 closed_member 复核。
    """
    if len(bad.seq) < 2:
        raise UnverifiedPrefix("chain_from_bad needs a bad prefix of length >= 2")
    if not is_bad_prefix(order, bad.seq):
        raise UnverifiedPrefix(f"{list(bad.seq)} is not bad in {order.name}")
    space = PowerSpace(order, mode)
    seq = bad.seq
    codes = tuple(ClosedCode.from_stages(space, [[(q,)] for q in seq[:n + 1]], label=f"{mode.value}_chain[{n}]")
                  for n in range(len(seq)))
    separators = []
    for n in range(len(seq) - 1):
        if mode is PowerMode.FLAT:
            separator = FinSubset((seq[n + 1],))
        else:
            separator = FinSubset.of(seq[:n + 1])
        point = SymbolicSubset.fin(order, separator.elems)
        if not isinstance(closed_member(codes[n], point, 0), In) or not isinstance(
                closed_member(codes[n + 1], point, 0), Out):
            raise ConstructionError(f"separator {separator.elems} does not witness step {n}")
        separators.append(separator)
    return ChainFromBad(mode, codes, tuple(separators))


def finite_witness_flat(code: ClosedCode, subset: SymbolicSubset, horizon: int,
                        scan_limit: Optional[int] = None) -> Union[FinSubset, StillInUpTo]:
    """
    A ∉ F 时给出有限的 a ⊆ A 且 a ∉ F：对证书指标里的每个 q，取 A 中第一个在 q 之上的元素。
    """
    if code.space.mode is not PowerMode.FLAT:
        raise ValueError("finite_witness_flat works on flat closed codes")
    verdict = closed_member(code, subset, horizon)
    if isinstance(verdict, In):
        return StillInUpTo(horizon)
    base = subset.base
    picked = []
    for q in verdict.index:
        above = next((p for p in iter_members(subset, scan_limit) if base._leq(q, p)), None)
        if above is None:
            raise ConstructionError(f"no member of A above {q}, contradicting certificate {verdict}")
        picked.append(above)
    witness = FinSubset.of(picked)
    if not psi(code.space, SymbolicSubset.fin(base, witness.elems), verdict.index):
        raise ConstructionError(f"witness {witness.elems} is not excluded by {verdict.index.elems}")
    return witness
