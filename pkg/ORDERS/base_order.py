import itertools
import threading
from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import Iterable, Iterator, List, Optional, Sequence, Tuple

from ORDERS.errors import CarrierError, UnsupportedShape

# universe 的三种形态
FINITE = "finite"
ALL_NATURALS = "all_naturals"
PAIR_ENCODED = "pair_encoded"


@dataclass(frozen=True)
class FinSubset:
    """元素编码的有限集合，elems 严格递增（规范形式唯一）。"""
    elems: Tuple[int, ...] = ()

    def __post_init__(self):
        if any(b <= a for a, b in zip(self.elems, self.elems[1:])):
            raise ValueError(f"FinSubset elems must be strictly increasing, got {self.elems}")
        if self.elems and self.elems[0] < 0:
            raise ValueError(f"FinSubset elems must be naturals, got {self.elems}")

    @classmethod
    def of(cls, items: Iterable[int]) -> "FinSubset":
        return cls(tuple(sorted(set(items))))

    def __iter__(self) -> Iterator[int]:
        return iter(self.elems)

    def __len__(self) -> int:
        return len(self.elems)

    def __contains__(self, code: int) -> bool:
        return code in self.elems

    def union(self, other: "FinSubset") -> "FinSubset":
        return FinSubset.of(self.elems + other.elems)

    def without(self, code: int) -> "FinSubset":
        return FinSubset(tuple(e for e in self.elems if e != code))

    def to_json(self) -> List[int]:
        return list(self.elems)


EMPTY = FinSubset()


class QuasiOrder(ABC):
    """
    编码后的拟序：载体是自然数的子集，leq 是全定义、确定性的判定谓词。
    所有算法都只把它当作 oracle 使用。
    """

    def __init__(self, name: str):
        self.name = name
        self._enum_cache: List[int] = []
        self._rank_cache = {}
        self._enum_iter: Optional[Iterator[int]] = None
        self._enum_lock = threading.Lock()

    @property
    @abstractmethod
    def universe(self) -> str:
        """FINITE / ALL_NATURALS / PAIR_ENCODED 之一。"""
        pass

    @property
    @abstractmethod
    def size(self) -> Optional[int]:
        """有限载体返回元素个数，无限载体返回 None。"""
        pass

    @abstractmethod
    def is_valid(self, code: int) -> bool:
        pass

    @abstractmethod
    def _leq(self, a: int, b: int) -> bool:
        """不做合法性检查的比较，子类实现。"""
        pass

    def check(self, code: int) -> int:
        if not isinstance(code, int) or isinstance(code, bool) or code < 0 or not self.is_valid(code):
            raise CarrierError(f"{code!r} is not a valid code of {self.name}")
        return code

    def leq(self, a: int, b: int) -> bool:
        self.check(a)
        self.check(b)
        return self._leq(a, b)

    def enumerate(self) -> Iterator[int]:
        """按编码升序枚举载体。"""
        codes = (c for c in itertools.count() if self.is_valid(c))
        if self.size is not None:
            codes = itertools.islice(codes, self.size)
        return codes

    def _grow_to(self, i: int):
        with self._enum_lock:
            if self._enum_iter is None:
                self._enum_iter = self.enumerate()
            while len(self._enum_cache) <= i:
                try:
                    code = next(self._enum_iter)
                except StopIteration:
                    raise CarrierError(f"{self.name} has no element number {i}")
                self._rank_cache[code] = len(self._enum_cache)
                self._enum_cache.append(code)

    def nth(self, i: int) -> int:
        """枚举顺序中的第 i 个元素。"""
        if i < 0:
            raise CarrierError(f"negative enumeration index {i}")
        if i >= len(self._enum_cache):
            self._grow_to(i)
        return self._enum_cache[i]

    def rank(self, code: int) -> int:
        """nth 的逆：code 在枚举顺序中的位置。"""
        self.check(code)
        while code not in self._rank_cache:
            self._grow_to(len(self._enum_cache))
        return self._rank_cache[code]

    # --- 闭包判定所需的结构查询；有限载体默认暴力扫描 ---

    def _require_finite(self, what: str):
        if self.size is None:
            raise UnsupportedShape(f"{self.name} cannot decide '{what}' on an infinite carrier")

    def common_upper(self, a: int, b: int) -> bool:
        """a, b 是否有公共上界。"""
        self._require_finite("common_upper")
        return any(self._leq(a, c) and self._leq(b, c) for c in self.enumerate())

    def common_lower(self, a: int, b: int) -> bool:
        """a, b 是否有公共下界。"""
        self._require_finite("common_lower")
        return any(self._leq(c, a) and self._leq(c, b) for c in self.enumerate())

    def escapes_down(self, q: int, gens: Sequence[int]) -> bool:
        """是否存在 p >= q 且 p 不在 gens↓ 中。"""
        self._require_finite("escapes_down")
        return any(
            self._leq(q, p) and not any(self._leq(p, g) for g in gens)
            for p in self.enumerate()
        )

    def escapes_up(self, q: int, gens: Sequence[int]) -> bool:
        """是否存在 p <= q 且 p 不在 gens↑ 中。"""
        self._require_finite("escapes_up")
        return any(
            self._leq(p, q) and not any(self._leq(g, p) for g in gens)
            for p in self.enumerate()
        )

    def __repr__(self) -> str:
        return f"<{self.__class__.__name__} {self.name}>"


@dataclass(frozen=True)
class BadPrefix:
    """坏序列的有限前缀：任意 m < n 都有 seq[m] 不 <= seq[n]。"""
    seq: Tuple[int, ...]
    order: QuasiOrder

    def __len__(self) -> int:
        return len(self.seq)
