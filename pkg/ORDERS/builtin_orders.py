import itertools
from typing import Iterable, Optional, Sequence, Tuple

import networkx as nx
import numpy as np

from ORDERS.base_order import ALL_NATURALS, FINITE, PAIR_ENCODED, QuasiOrder
from ORDERS.errors import OrderSpecError
from ORDERS.pairing import pair, unpair


class FiniteOrder(QuasiOrder):
    """
    0..n-1 上的有限拟序：给定的 <= 边取自反传递闭包。
    允许环（视为声明的等价）；lt 边若落在环上则报错。
    """

    def __init__(self, n: int, le: Iterable[Tuple[int, int]] = (), lt: Iterable[Tuple[int, int]] = (),
                 name: Optional[str] = None):
        super().__init__(name or f"finite({n})")
        if not isinstance(n, int) or n < 0:
            raise OrderSpecError(f"element count must be a natural, got {n!r}")
        self._n = n
        le = [tuple(e) for e in le]
        lt = [tuple(e) for e in lt]
        if any(len(e) != 2 for e in le + lt):
            raise OrderSpecError("every edge must be a pair [a, b]")
        for a, b in le + lt:
            if not (isinstance(a, int) and isinstance(b, int) and 0 <= a < n and 0 <= b < n):
                raise OrderSpecError(f"edge ({a}, {b}) mentions a code outside 0..{n - 1}")

        graph = nx.DiGraph()
        graph.add_nodes_from(range(n))
        graph.add_edges_from(le + lt)
        closure = nx.transitive_closure(graph, reflexive=True)
        self._matrix = np.zeros((n, n), dtype=bool)
        for a, b in closure.edges:
            self._matrix[a, b] = True
        np.fill_diagonal(self._matrix, True)
        for a, b in lt:
            if self._matrix[b, a]:
                raise OrderSpecError(f"strict edge {a} < {b} lies on a cycle")
        self.edges = tuple(sorted(set(le + lt)))

    @classmethod
    def from_matrix(cls, matrix: np.ndarray, name: Optional[str] = None) -> "FiniteOrder":
        """用已经是拟序的布尔矩阵构造（仍会做一次闭包）。"""
        n = matrix.shape[0]
        edges = [(int(a), int(b)) for a, b in zip(*np.nonzero(matrix)) if a != b]
        return cls(n, le=edges, name=name)

    @property
    def universe(self) -> str:
        return FINITE

    @property
    def size(self) -> Optional[int]:
        return self._n

    @property
    def matrix(self) -> np.ndarray:
        return self._matrix.copy()

    def is_valid(self, code: int) -> bool:
        return 0 <= code < self._n

    def _leq(self, a: int, b: int) -> bool:
        return bool(self._matrix[a, b])


class OmegaOrder(QuasiOrder):
    """ω：通常的自然数序。"""

    def __init__(self):
        super().__init__("omega")

    @property
    def universe(self) -> str:
        return ALL_NATURALS

    @property
    def size(self) -> Optional[int]:
        return None

    def is_valid(self, code: int) -> bool:
        return code >= 0

    def _leq(self, a: int, b: int) -> bool:
        return a <= b

    def common_upper(self, a: int, b: int) -> bool:
        return True

    def common_lower(self, a: int, b: int) -> bool:
        return True

    def escapes_down(self, q: int, gens: Sequence[int]) -> bool:
        # gens↓ 是有限的
        return True

    def escapes_up(self, q: int, gens: Sequence[int]) -> bool:
        # 取 p = 0
        return not gens or min(gens) > 0


class OmegaStarOrder(QuasiOrder):
    """ω*：编码 n 表示从顶端数起的第 n 个元素，leq(a, b) 当且仅当 b <= a。"""

    def __init__(self):
        super().__init__("omega_star")

    @property
    def universe(self) -> str:
        return ALL_NATURALS

    @property
    def size(self) -> Optional[int]:
        return None

    def is_valid(self, code: int) -> bool:
        return code >= 0

    def _leq(self, a: int, b: int) -> bool:
        return b <= a

    def common_upper(self, a: int, b: int) -> bool:
        return True

    def common_lower(self, a: int, b: int) -> bool:
        return True

    def escapes_down(self, q: int, gens: Sequence[int]) -> bool:
        # q 的上界是编码 0..q；gens↓ 是编码 >= min(gens)
        return not gens or min(gens) > 0

    def escapes_up(self, q: int, gens: Sequence[int]) -> bool:
        return True


class AntichainOrder(QuasiOrder):
    """反链：只有 a <= a。size 为 None 时是无限反链。"""

    def __init__(self, size: Optional[int] = None):
        super().__init__("antichain" if size is None else f"antichain({size})")
        self._size = size

    @property
    def universe(self) -> str:
        return ALL_NATURALS if self._size is None else FINITE

    @property
    def size(self) -> Optional[int]:
        return self._size

    def is_valid(self, code: int) -> bool:
        return code >= 0 and (self._size is None or code < self._size)

    def _leq(self, a: int, b: int) -> bool:
        return a == b

    def common_upper(self, a: int, b: int) -> bool:
        return a == b

    def common_lower(self, a: int, b: int) -> bool:
        return a == b

    def escapes_down(self, q: int, gens: Sequence[int]) -> bool:
        return q not in gens

    def escapes_up(self, q: int, gens: Sequence[int]) -> bool:
        return q not in gens


class RadoOrder(QuasiOrder):
    """
    Rado 序：元素是 i < j 的对 (i, j)，编码为 pair(i, j)。
    (i, j) <= (k, l) 当且仅当 (i = k 且 j <= l) 或 j < k。
    """

    def __init__(self):
        super().__init__("rado")

    @staticmethod
    def encode(i: int, j: int) -> int:
        if not 0 <= i < j:
            raise OrderSpecError(f"Rado elements need i < j, got ({i}, {j})")
        return pair(i, j)

    @staticmethod
    def decode(code: int) -> Tuple[int, int]:
        return unpair(code)

    @property
    def universe(self) -> str:
        return PAIR_ENCODED

    @property
    def size(self) -> Optional[int]:
        return None

    def is_valid(self, code: int) -> bool:
        i, j = unpair(code)
        return i < j

    def _leq(self, a: int, b: int) -> bool:
        i, j = unpair(a)
        k, l = unpair(b)
        return (i == k and j <= l) or j < k

    def lower_set(self, code: int) -> Tuple[int, ...]:
        """(i, j)↓ 总是有限的：{(i, l) : i < l <= j} ∪ {(k, l) : k < l < i}。"""
        i, j = unpair(code)
        out = [pair(i, l) for l in range(i + 1, j + 1)]
        out.extend(pair(k, l) for l in range(i) for k in range(l))
        return tuple(sorted(out))

    def common_upper(self, a: int, b: int) -> bool:
        # (k, l) 只要 k 大于两者的 j 就在两者之上
        return True

    def common_lower(self, a: int, b: int) -> bool:
        return any(self._leq(c, b) for c in self.lower_set(a))

    def escapes_down(self, q: int, gens: Sequence[int]) -> bool:
        # gens↓ 有限而 q↑ 无限
        return True

    def escapes_up(self, q: int, gens: Sequence[int]) -> bool:
        return any(not any(self._leq(g, p) for g in gens) for p in self.lower_set(q))


def _component_size(left: QuasiOrder, right: QuasiOrder, combine) -> Optional[int]:
    if left.size is None or right.size is None:
        return None
    return combine(left.size, right.size)


class SumOrder(QuasiOrder):
    """不交和 Q ⊕ R：元素编码 pair(x, tag)，tag 为 0（左）或 1（右），跨 tag 不可比。"""

    def __init__(self, left: QuasiOrder, right: QuasiOrder):
        super().__init__(f"sum({left.name},{right.name})")
        self.left = left
        self.right = right

    def encode(self, x: int, tag: int) -> int:
        self._side(tag).check(x)
        return pair(x, tag)

    def _side(self, tag: int) -> QuasiOrder:
        if tag == 0:
            return self.left
        if tag == 1:
            return self.right
        raise OrderSpecError(f"sum tags are 0 or 1, got {tag}")

    @property
    def universe(self) -> str:
        return PAIR_ENCODED

    @property
    def size(self) -> Optional[int]:
        return _component_size(self.left, self.right, lambda a, b: a + b)

    def is_valid(self, code: int) -> bool:
        x, tag = unpair(code)
        return tag in (0, 1) and self._side(tag).is_valid(x)

    def _leq(self, a: int, b: int) -> bool:
        x, s = unpair(a)
        y, t = unpair(b)
        return s == t and self._side(s)._leq(x, y)

    def _split(self, gens: Sequence[int], tag: int) -> Tuple[int, ...]:
        out = []
        for g in gens:
            y, t = unpair(g)
            if t == tag:
                out.append(y)
        return tuple(out)

    def common_upper(self, a: int, b: int) -> bool:
        x, s = unpair(a)
        y, t = unpair(b)
        return s == t and self._side(s).common_upper(x, y)

    def common_lower(self, a: int, b: int) -> bool:
        x, s = unpair(a)
        y, t = unpair(b)
        return s == t and self._side(s).common_lower(x, y)

    def escapes_down(self, q: int, gens: Sequence[int]) -> bool:
        x, s = unpair(q)
        return self._side(s).escapes_down(x, self._split(gens, s))

    def escapes_up(self, q: int, gens: Sequence[int]) -> bool:
        x, s = unpair(q)
        return self._side(s).escapes_up(x, self._split(gens, s))


class ProductOrder(QuasiOrder):
    """积 Q × R：编码 pair(a, b)，逐坐标比较。"""

    def __init__(self, left: QuasiOrder, right: QuasiOrder):
        super().__init__(f"product({left.name},{right.name})")
        self.left = left
        self.right = right

    def encode(self, a: int, b: int) -> int:
        self.left.check(a)
        self.right.check(b)
        return pair(a, b)

    @property
    def universe(self) -> str:
        return PAIR_ENCODED

    @property
    def size(self) -> Optional[int]:
        return _component_size(self.left, self.right, lambda a, b: a * b)

    def is_valid(self, code: int) -> bool:
        a, b = unpair(code)
        return self.left.is_valid(a) and self.right.is_valid(b)

    def _leq(self, a: int, b: int) -> bool:
        a0, a1 = unpair(a)
        b0, b1 = unpair(b)
        return self.left._leq(a0, b0) and self.right._leq(a1, b1)

    def common_upper(self, a: int, b: int) -> bool:
        a0, a1 = unpair(a)
        b0, b1 = unpair(b)
        return self.left.common_upper(a0, b0) and self.right.common_upper(a1, b1)

    def common_lower(self, a: int, b: int) -> bool:
        a0, a1 = unpair(a)
        b0, b1 = unpair(b)
        return self.left.common_lower(a0, b0) and self.right.common_lower(a1, b1)

    def _escapes(self, q: int, gens: Sequence[int], method: str) -> bool:
        # p 逃出 g 只需某一坐标逃出；枚举把 gens 分给左右坐标的所有方式
        q0, q1 = unpair(q)
        parts = [unpair(g) for g in gens]
        for sides in itertools.product((0, 1), repeat=len(parts)):
            left_gens = tuple(g0 for (g0, _), side in zip(parts, sides) if side == 0)
            right_gens = tuple(g1 for (_, g1), side in zip(parts, sides) if side == 1)
            if getattr(self.left, method)(q0, left_gens) and getattr(self.right, method)(q1, right_gens):
                return True
        return False

    def escapes_down(self, q: int, gens: Sequence[int]) -> bool:
        return self._escapes(q, gens, "escapes_down")

    def escapes_up(self, q: int, gens: Sequence[int]) -> bool:
        return self._escapes(q, gens, "escapes_up")
