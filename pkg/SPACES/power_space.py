import logging
from dataclasses import dataclass
from typing import Any, Callable, Dict, Optional, Sequence, Tuple, Union

from ORDERS.base_order import FinSubset, QuasiOrder
from ORDERS.errors import ConstructionError
from ORDERS.powerset import PowerMode
from ORDERS.symbolic import Shape, SymbolicSubset, in_down_closure, in_up_closure, sym_member

logger = logging.getLogger(__name__)


class PowerSpace:
    """
    upper(P_f^♭(Q)) / upper(P_f^♯(Q)) 的非可数版本：点是 Q 的（符号）子集，指标是有限集。
    两种模式下指标的并都对应基本闭集的交。
    """

    def __init__(self, base: QuasiOrder, mode: PowerMode):
        self.base = base
        self.mode = mode

    @property
    def name(self) -> str:
        return f"upper_{self.mode.value}({self.base.name})"

    def __repr__(self) -> str:
        return f"<PowerSpace {self.name}>"


def psi(space: PowerSpace, x: SymbolicSubset, index: FinSubset) -> bool:
    """
    基本开集成员关系 Ψ_∈(X, i)。

    参数:
    - space: 所在的幂空间。
    - x: 符号子集 X。
    - index: 有限指标 i。

    返回:
    - Flat: i ⊆ X↓；Sharp: i ∩ X↑ = ∅。
    """
    for q in index:
        space.base.check(q)
    if space.mode is PowerMode.FLAT:
        return all(in_down_closure(x, q) for q in index)
    return not any(in_up_closure(x, q) for q in index)


@dataclass(frozen=True)
class In:
    """在 horizon 之前的阶段里没有找到排除证书；exact 为 True 时这就是最终结论。"""
    horizon: int
    exact: bool = False


@dataclass(frozen=True)
class Out:
    stage: int
    index: FinSubset


Verdict = Union[In, Out]


@dataclass(frozen=True)
class ClosedCode:
    """
    有效闭集 F_h：X ∈ F_h 当且仅当对所有 n 和所有 i ∈ h(n)，Ψ_∈(X, i) 都不成立。
    decide_finite 不为 None 时，对 Fin 点给出精确判决。
    """
    h: Callable[[int], Tuple[FinSubset, ...]]
    space: PowerSpace
    finite_stages: Optional[int] = None
    decide_finite: Optional[Callable[[FinSubset], Verdict]] = None
    label: str = ""

    def stage(self, n: int) -> Tuple[FinSubset, ...]:
        if self.finite_stages is not None and n >= self.finite_stages:
            return ()
        return tuple(self.h(n))

    @classmethod
    def from_stages(cls, space: PowerSpace, stages: Sequence[Sequence[FinSubset]], label: str = "") -> "ClosedCode":
        frozen = tuple(tuple(FinSubset.of(i) for i in s) for s in stages)
        return cls(h=lambda n: frozen[n], space=space, finite_stages=len(frozen), label=label)

    @classmethod
    def whole(cls, space: PowerSpace) -> "ClosedCode":
        return cls(h=lambda n: (), space=space, finite_stages=0, label="whole")

    def to_json(self) -> Dict[str, Any]:
        if self.finite_stages is None:
            raise ValueError("only finitely presented codes have a JSON form")
        return {"mode": self.space.mode.value,
                "stages": [[i.to_json() for i in self.stage(n)] for n in range(self.finite_stages)],
                "tail": "empty"}

    @classmethod
    def from_json(cls, space: PowerSpace, data: Dict[str, Any]) -> "ClosedCode":
        if data.get("mode", space.mode.value) != space.mode.value:
            raise ValueError(f"code is for mode {data['mode']!r}, space is {space.mode.value!r}")
        if data.get("tail", "empty") != "empty":
            raise ValueError(f"unsupported tail marker {data.get('tail')!r}")
        return cls.from_stages(space, data["stages"])


def closed_member(code: ClosedCode, x: SymbolicSubset, horizon: int) -> Verdict:
    """
    X ∈ F_h 是 Π⁰₁ 的：找到 Out 就是确定的；否则返回 In(horizon)。
    只列出有限个阶段的编码扫描全部阶段，In 是精确的；带 decide_finite 的编码对 Fin 点直接精确判定。
    """
    if code.decide_finite is not None and x.shape is Shape.FIN:
        verdict = code.decide_finite(x.gens)
        if isinstance(verdict, In):
            return In(horizon, exact=True)
        if not psi(code.space, x, verdict.index) or verdict.index not in code.stage(verdict.stage):
            raise ConstructionError(f"{code.label}: certificate {verdict} does not exclude {x.gens.elems}")
        return verdict
    limit = horizon
    if code.finite_stages is not None:
        limit = code.finite_stages if code.decide_finite is None else min(horizon, code.finite_stages)
    for n in range(limit):
        for index in code.stage(n):
            if psi(code.space, x, index):
                return Out(n, index)
    return In(limit, exact=code.finite_stages is not None and limit >= code.finite_stages)


def _enumerated_stream(base: QuasiOrder, emit: Callable[[int], bool]) -> Tuple[Callable[[int], Tuple[FinSubset, ...]], Optional[int]]:
    def h(n: int) -> Tuple[FinSubset, ...]:
        code = base.nth(n)
        return (FinSubset((code,)),) if emit(code) else ()

    return h, base.size


def closed_from_set(space: PowerSpace, subset: SymbolicSubset) -> ClosedCode:
    """
    由 E 构造闭集，每个阶段最多给出一个指标，按基序枚举顺序。

    - Sharp: ⋂_{e ∈ E} {e}↓♯，阶段 n 在 c_n ∈ E 时给出 {c_n}；E 为 Fin 时直接给出 E 的元素，是有限表示。
    - Flat: ⋂_{q ∉ E↓} {Q \\ q↑}↓♭，阶段 n 在 c_n ∉ E↓ 时给出 {c_n}。
    """
    base = space.base
    label = f"closed_from_set({space.mode.value}, {subset.shape.value}{subset.gens.elems})"
    if space.mode is PowerMode.SHARP:
        if subset.shape is Shape.FIN:
            return ClosedCode.from_stages(space, [[(e,)] for e in subset.gens], label=label)
        h, finite = _enumerated_stream(base, lambda c: sym_member(subset, c))
        return ClosedCode(h=h, space=space, finite_stages=finite, label=label)

    h, finite = _enumerated_stream(base, lambda c: not in_down_closure(subset, c))

    def decide(x: FinSubset) -> Verdict:
        escaping = [base.rank(a) for a in x if not in_down_closure(subset, a)]
        if not escaping:
            return In(0, exact=True)
        # a ∉ E↓ 时 {a} 在阶段 rank(a) 出现，所以第一个证书不会晚于它
        point = SymbolicSubset(Shape.FIN, x, base)
        for n in range(min(escaping) + 1):
            for index in h(n):
                if psi(space, point, index):
                    return Out(n, index)
        raise ConstructionError(f"{label}: no certificate found for {x.elems}")

    return ClosedCode(h=h, space=space, finite_stages=finite, decide_finite=decide, label=label)
