import itertools
from enum import Enum
from functools import lru_cache
from typing import Iterable, Optional, Sequence, Tuple

from ORDERS.base_order import ALL_NATURALS, FINITE, FinSubset, QuasiOrder
from ORDERS.builtin_orders import ProductOrder, SumOrder
from ORDERS.pairing import bits_of, mask_of, unpair


class PowerMode(Enum):
    FLAT = "flat"    # Hoare 序
    SHARP = "sharp"  # Smyth 序


def _checked(order: QuasiOrder, subset: FinSubset) -> FinSubset:
    for code in subset:
        order.check(code)
    return subset


def flat_leq(order: QuasiOrder, a: FinSubset, b: FinSubset) -> bool:
    """A <=♭ B：A 的每个元素都在 B 的某个元素之下，即 A ⊆ B↓。"""
    _checked(order, a)
    _checked(order, b)
    return all(any(order._leq(x, y) for y in b) for x in a)


def sharp_leq(order: QuasiOrder, a: FinSubset, b: FinSubset) -> bool:
    """A <=♯ B：B 的每个元素都在 A 的某个元素之上，即 B ⊆ A↑。"""
    _checked(order, a)
    _checked(order, b)
    return all(any(order._leq(x, y) for x in a) for y in b)


def power_leq(order: QuasiOrder, mode: PowerMode, a: FinSubset, b: FinSubset) -> bool:
    return flat_leq(order, a, b) if mode is PowerMode.FLAT else sharp_leq(order, a, b)


class PowerOrder(QuasiOrder):
    """
    P_f(Q) 上的 Hoare / Smyth 拟序。
    编码：第 k 位为 1 表示包含基序枚举中的第 k 个元素，因此对任意基序都是双射。
    """

    def __init__(self, base: QuasiOrder, mode: PowerMode):
        super().__init__(f"{mode.value}_power({base.name})")
        self.base = base
        self.mode = mode
        self._decode = lru_cache(maxsize=65536)(self._decode_uncached)

    @property
    def universe(self) -> str:
        return FINITE if self.base.size is not None else ALL_NATURALS

    @property
    def size(self) -> Optional[int]:
        return None if self.base.size is None else 2 ** self.base.size

    def is_valid(self, code: int) -> bool:
        return code >= 0 and (self.size is None or code < self.size)

    def _decode_uncached(self, code: int) -> FinSubset:
        return FinSubset.of(self.base.nth(k) for k in bits_of(code))

    def decode(self, code: int) -> FinSubset:
        self.check(code)
        return self._decode(code)

    def encode(self, subset: FinSubset) -> int:
        return mask_of(self.base.rank(e) for e in subset)

    def _leq(self, a: int, b: int) -> bool:
        return power_leq(self.base, self.mode, self._decode(a), self._decode(b))


def power_order(order: QuasiOrder, mode: PowerMode) -> PowerOrder:
    return PowerOrder(order, mode)


def product_to_flat_sum(left: QuasiOrder, right: QuasiOrder, code: int,
                        total: Optional[SumOrder] = None) -> FinSubset:
    """
    (q, r) ∈ L × R 映到 {(q, 0), (r, 1)} ∈ P_f(L ⊕ R)。
    积序在这个映射下被 <=♭ 反射，P_f^♭ 的坏序列可以由积的坏序列得到。
    """
    q, r = unpair(code)
    total = total or SumOrder(left, right)
    return FinSubset.of([total.encode(q, 0), total.encode(r, 1)])


def flat_embedding_check(left: QuasiOrder, right: QuasiOrder, sample: Sequence[int]) -> bool:
    """对样本中的积元素两两验证：(q0, r0) <= (q1, r1) 当且仅当映像满足 <=♭。"""
    product = ProductOrder(left, right)
    total = SumOrder(left, right)
    images = {code: product_to_flat_sum(left, right, product.check(code), total) for code in sample}
    for a in sample:
        for b in sample:
            if product.leq(a, b) != flat_leq(total, images[a], images[b]):
                return False
    return True


def all_subsets(codes: Iterable[int], max_size: Optional[int] = None) -> Tuple[FinSubset, ...]:
    """有限集合的全部子集（可限制大小），按 (大小, 字典序) 排列。"""
    codes = sorted(set(codes))
    top = len(codes) if max_size is None else min(max_size, len(codes))
    return tuple(FinSubset(c) for k in range(top + 1) for c in itertools.combinations(codes, k))
