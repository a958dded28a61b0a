from dataclasses import dataclass
from enum import Enum
from typing import Any, Dict, Iterator, Optional

from ORDERS.base_order import FinSubset, QuasiOrder
from ORDERS.errors import OrderSpecError
from ORDERS.order_tools import Direction, closure_contains


class Shape(Enum):
    FIN = "fin"
    UP = "up"
    DOWN = "down"
    CO_UP = "co_up"      # Q \ (F↑)
    CO_DOWN = "co_down"  # Q \ (F↓)


@dataclass(frozen=True)
class SymbolicSubset:
    """Q 的有限描述子集（可以是无限集），成员关系可判定。"""
    shape: Shape
    gens: FinSubset
    base: QuasiOrder

    def __post_init__(self):
        for code in self.gens:
            self.base.check(code)

    @classmethod
    def fin(cls, base: QuasiOrder, codes) -> "SymbolicSubset":
        return cls(Shape.FIN, FinSubset.of(codes), base)

    @classmethod
    def from_json(cls, base: QuasiOrder, data: Dict[str, Any]) -> "SymbolicSubset":
        try:
            shape = Shape(data["shape"])
            gens = FinSubset.of(data.get("set", []))
        except (KeyError, ValueError, TypeError) as e:
            raise OrderSpecError(f"bad symbolic subset {data!r}: {e}")
        return cls(shape, gens, base)

    def to_json(self) -> Dict[str, Any]:
        return {"shape": self.shape.value, "set": self.gens.to_json()}

    @property
    def is_finite_shape(self) -> bool:
        return self.shape is Shape.FIN


def sym_member(subset: SymbolicSubset, q: int) -> bool:
    base = subset.base
    base.check(q)
    if subset.shape is Shape.FIN:
        return q in subset.gens
    if subset.shape is Shape.UP:
        return closure_contains(base, Direction.UP, subset.gens, q)
    if subset.shape is Shape.DOWN:
        return closure_contains(base, Direction.DOWN, subset.gens, q)
    if subset.shape is Shape.CO_UP:
        return not closure_contains(base, Direction.UP, subset.gens, q)
    return not closure_contains(base, Direction.DOWN, subset.gens, q)


def in_down_closure(subset: SymbolicSubset, q: int) -> bool:
    """q ∈ X↓。"""
    base = subset.base
    gens = subset.gens
    if subset.shape in (Shape.FIN, Shape.DOWN):
        return closure_contains(base, Direction.DOWN, gens, q)
    if subset.shape is Shape.CO_UP:
        # Q \ F↑ 本身向下封闭
        return sym_member(subset, q)
    if subset.shape is Shape.UP:
        base.check(q)
        return any(base.common_upper(q, g) for g in gens)
    base.check(q)
    return base.escapes_down(q, gens.elems)


def in_up_closure(subset: SymbolicSubset, q: int) -> bool:
    """q ∈ X↑。"""
    base = subset.base
    gens = subset.gens
    if subset.shape in (Shape.FIN, Shape.UP):
        return closure_contains(base, Direction.UP, gens, q)
    if subset.shape is Shape.CO_DOWN:
        return sym_member(subset, q)
    if subset.shape is Shape.DOWN:
        base.check(q)
        return any(base.common_lower(q, g) for g in gens)
    base.check(q)
    return base.escapes_up(q, gens.elems)


def iter_members(subset: SymbolicSubset, limit: Optional[int] = None) -> Iterator[int]:
    """按编码升序枚举成员；Fin 直接给出，其余形状扫描载体（limit 限制扫描的载体元素个数）。"""
    if subset.shape is Shape.FIN:
        yield from subset.gens
        return
    for scanned, code in enumerate(subset.base.enumerate()):
        if limit is not None and scanned >= limit:
            return
        if sym_member(subset, code):
            yield code
