import itertools
import logging
from dataclasses import dataclass
from typing import Callable, List, Optional, Sequence, Tuple

from ORDERS.base_order import FinSubset, QuasiOrder
from ORDERS.errors import OrderSpecError
from ORDERS.pairing import pair, tuple_pair, tuple_unpair, unpair
from ORDERS.powerset import PowerMode
from ORDERS.symbolic import SymbolicSubset
from SPACES.power_space import ClosedCode, In, Out, PowerSpace, Verdict, closed_member

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class FlatMembership:
    """translate_flat 的判决；不属于时 certificate 是 (q_0, ..., q_{n-1})，q_i ∈ x 且 q_i ∉ e_i↓。"""
    member: bool
    certificate: Optional[Tuple[int, ...]] = None


def _flat_certificate(order: QuasiOrder, generators: Sequence[FinSubset], x: FinSubset) -> Optional[Tuple[int, ...]]:
    picks = []
    for e in generators:
        escaping = [q for q in x if not any(order._leq(q, p) for p in e)]
        if not escaping:
            return None
        picks.append(escaping[0])
    return tuple(picks)


def translate_flat(order: QuasiOrder, generators: Sequence[FinSubset]) -> Callable[[FinSubset], FlatMembership]:
    """
    把可数空间里的闭集 E↓♭（E = {e_0, ..., e_{n-1}}）翻译到非可数空间：
    𝓕_E = ⋂ {Q \\ q_i↑ : i < n}↓♭，交取遍 q_i ∉ e_i↓ 的元组。
    对有限 x，排除证书总可以从 x 自身取。

    返回:
    - 一个判定函数 x -> FlatMembership。
    """
    generators = [FinSubset.of(order.check(c) for c in e) for e in generators]

    def decide(x: FinSubset) -> FlatMembership:
        for c in x:
            order.check(c)
        certificate = _flat_certificate(order, generators, x)
        if certificate is None:
            return FlatMembership(True)
        return FlatMembership(False, certificate)

    return decide


def translate_flat_code(order: QuasiOrder, generators: Sequence[FinSubset]) -> ClosedCode:
    """
    translate_flat 的编码形式：阶段 k 解码为基序枚举下标的 n 元组 (r_0, ..., r_{n-1})，
    若对应元素 q_i 都满足 q_i ∉ e_i↓，就给出指标 {q_0, ..., q_{n-1}}。
    """
    generators = [FinSubset.of(order.check(c) for c in e) for e in generators]
    n = len(generators)
    space = PowerSpace(order, PowerMode.FLAT)
    decide_member = translate_flat(order, generators)

    def h(k: int) -> Tuple[FinSubset, ...]:
        ranks = tuple_unpair(k, n) if n else ()
        if order.size is not None and any(r >= order.size for r in ranks):
            return ()
        codes = [order.nth(r) for r in ranks]
        if all(not any(order._leq(q, p) for p in e) for q, e in zip(codes, generators)):
            return (FinSubset.of(codes),)
        return ()

    if n == 0:
        finite = 1
    elif order.size is not None:
        finite = 0 if order.size == 0 else tuple_pair((order.size - 1,) * n) + 1
    else:
        finite = None

    def decide(x: FinSubset) -> Verdict:
        verdict = decide_member(x)
        if verdict.member:
            return In(0, exact=True)
        stage = tuple_pair(tuple(order.rank(q) for q in verdict.certificate))
        return Out(stage, FinSubset.of(verdict.certificate))

    return ClosedCode(h=h, space=space, finite_stages=finite, decide_finite=decide,
                      label=f"translate_flat({[e.elems for e in generators]})")


def translate_sharp(order: QuasiOrder, generators: Sequence[FinSubset]) -> ClosedCode:
    """
    E↓♯ 的翻译：对 e_0 × ... × e_{n-1} 的每个元组取基本闭集 {{q_0}, ..., {q_{n-1}}}↓♯，
    一个元组占一个阶段，是有限表示。
    """
    generators = [FinSubset.of(order.check(c) for c in e) for e in generators]
    if any(len(e) == 0 for e in generators):
        raise OrderSpecError("translate_sharp needs nonempty generators")
    space = PowerSpace(order, PowerMode.SHARP)
    stages = [[FinSubset.of(t)] for t in itertools.product(*(e.elems for e in generators))]
    return ClosedCode.from_stages(space, stages, label=f"translate_sharp({[e.elems for e in generators]})")


def running_intersection(codes: Sequence[ClosedCode]) -> List[ClosedCode]:
    """
    H_n = ⋂_{m <= n} F_m：把前 n+1 个编码的指标流交错合并。
    阶段 k 解为 (m, j)，给出 F_m 的第 j 个阶段；各分量都精确时结果也带精确判定。
    """
    out = []
    for n in range(len(codes)):
        out.append(_intersection(list(codes[:n + 1])))
    return out


def _intersection(parts: List[ClosedCode]) -> ClosedCode:
    space = parts[0].space
    width = len(parts)

    def h(k: int) -> Tuple[FinSubset, ...]:
        m, j = unpair(k)
        if m >= width:
            return ()
        return parts[m].stage(j)

    finite = None
    if all(p.finite_stages is not None for p in parts):
        longest = max(p.finite_stages for p in parts)
        finite = 0 if longest == 0 else pair(width - 1, longest - 1) + 1

    decide = None
    if all(p.finite_stages is not None or p.decide_finite is not None for p in parts):
        def decide(x: FinSubset) -> Verdict:
            point = SymbolicSubset.fin(space.base, x.elems)
            for m, part in enumerate(parts):
                verdict = closed_member(part, point, 0)
                if isinstance(verdict, Out):
                    return Out(pair(m, verdict.stage), verdict.index)
            return In(0, exact=True)

    return ClosedCode(h=h, space=space, finite_stages=finite, decide_finite=decide,
                      label=" ∩ ".join(p.label for p in parts))

