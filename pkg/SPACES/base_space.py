from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, Hashable, List, Optional, Sequence, Tuple

from ORDERS.base_order import QuasiOrder

Index = Hashable


class CSCSpace(ABC):
    """
    可数第二可数空间：点集、指标集 I、基本开集成员关系 x ∈ U_i，以及
    满足 x ∈ U_{k(x,i,j)} ⊆ U_i ∩ U_j 的函数 k。
    """

    def __init__(self, order: QuasiOrder):
        self.order = order

    @abstractmethod
    def member(self, x: int, i: Index) -> bool:
        """
        :param x: 点的编码。
        :param i: 基本开集的指标。
        :return: x 是否属于 U_i。
        """
        pass

    @abstractmethod
    def k(self, x: int, i: Index, j: Index) -> Index:
        pass

    @abstractmethod
    def covering_index(self, x: int) -> Index:
        """一个包含 x 的基本开集指标。"""
        pass

    def points(self):
        return self.order.enumerate()


@dataclass(frozen=True)
class OpenCode:
    """
    有效开集 G_h = ⋃_n ⋃_{i ∈ h(n)} U_i。
    finite_stages 不为 None 时为有限表示：之后的阶段全为空。
    """
    h: Callable[[int], Tuple[Index, ...]]
    finite_stages: Optional[int] = None
    label: str = ""

    def stage(self, n: int) -> Tuple[Index, ...]:
        if self.finite_stages is not None and n >= self.finite_stages:
            return ()
        return tuple(self.h(n))

    @classmethod
    def from_stages(cls, stages: Sequence[Sequence[Index]], label: str = "") -> "OpenCode":
        frozen = tuple(tuple(s) for s in stages)
        return cls(h=lambda n: frozen[n], finite_stages=len(frozen), label=label)

    @classmethod
    def empty(cls) -> "OpenCode":
        return cls(h=lambda n: (), finite_stages=0, label="empty")

    def to_json(self, encode: Callable[[Index], Any] = lambda i: i) -> Dict[str, Any]:
        if self.finite_stages is None:
            raise ValueError("only finitely presented codes have a JSON form")
        return {"stages": [[encode(i) for i in self.stage(n)] for n in range(self.finite_stages)],
                "tail": "empty"}

    @classmethod
    def from_json(cls, data: Dict[str, Any], decode: Callable[[Any], Index] = lambda i: i) -> "OpenCode":
        if data.get("tail", "empty") != "empty":
            raise ValueError(f"unsupported tail marker {data.get('tail')!r}")
        return cls.from_stages([[decode(i) for i in stage] for stage in data["stages"]])


@dataclass(frozen=True)
class ChainCode:
    """有效开集序列：位置 n 对应 OpenCode g(n, ·)。separators 记录构造时已知的分隔元。"""
    g: Callable[[int, int], Tuple[Index, ...]]
    finite_stages: Optional[int] = None
    separators: Tuple[int, ...] = field(default=())
    label: str = ""

    def at(self, n: int) -> OpenCode:
        return OpenCode(h=lambda t: self.g(n, t), finite_stages=self.finite_stages, label=f"{self.label}[{n}]")

    @classmethod
    def from_opens(cls, opens: List[OpenCode], label: str = "") -> "ChainCode":
        stages = [o.finite_stages for o in opens]
        finite = max(stages) if opens and all(s is not None for s in stages) else None

        def g(n: int, t: int) -> Tuple[Index, ...]:
            if n >= len(opens):
                return opens[-1].stage(t) if opens else ()
            return opens[n].stage(t)

        return cls(g=g, finite_stages=finite, label=label)
