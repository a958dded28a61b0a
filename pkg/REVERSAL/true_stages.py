import json
import logging
import random
from dataclasses import dataclass
from functools import lru_cache
from typing import Any, Dict, Iterable, Optional, Tuple, Union

from ORDERS.base_order import FinSubset
from ORDERS.errors import OrderSpecError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Injection:
    """
    单射 f: ℕ → ℕ，有限表加仿射尾部：k < len(table) 时 f(k) = table[k]，否则 f(k) = k + tail_offset。
    tail_offset > max(table) 保证整体单射，且表之后的阶段全是 f-true 的。
    """
    table: Tuple[int, ...] = ()
    tail_offset: int = 0

    def __post_init__(self):
        if not all(isinstance(v, int) and not isinstance(v, bool) and v >= 0 for v in self.table):
            raise OrderSpecError(f"injection table must hold naturals, got {list(self.table)}")
        if not isinstance(self.tail_offset, int) or isinstance(self.tail_offset, bool) or self.tail_offset < 0:
            raise OrderSpecError(f"tail_offset must be a natural, got {self.tail_offset!r}")
        if len(set(self.table)) != len(self.table):
            raise OrderSpecError(f"injection table has a duplicate entry: {list(self.table)}")
        if self.table and self.tail_offset <= max(self.table):
            raise OrderSpecError(f"tail_offset {self.tail_offset} must exceed max(table) = {max(self.table)}")

    def __call__(self, k: int) -> int:
        if k < 0:
            raise ValueError(f"injections are defined on naturals, got {k}")
        if k < len(self.table):
            return self.table[k]
        return k + self.tail_offset

    @classmethod
    def identity(cls) -> "Injection":
        return cls((), 0)

    @property
    def tail_start(self) -> int:
        """尾部的第一个取值；它之后的自然数全在值域里。"""
        return len(self.table) + self.tail_offset

    def to_json(self) -> Dict[str, Any]:
        return {"table": list(self.table), "tail_offset": self.tail_offset}


F3 = Injection((2, 0, 1), 3)


def injection_from_json(data: Dict[str, Any]) -> Injection:
    if not isinstance(data, dict) or "table" not in data or "tail_offset" not in data:
        raise OrderSpecError(f"injection JSON needs 'table' and 'tail_offset', got {data!r}")
    if not isinstance(data["table"], list):
        raise OrderSpecError("injection 'table' must be a list")
    return Injection(tuple(data["table"]), data["tail_offset"])


def injection_to_json(f: Injection) -> Dict[str, Any]:
    return f.to_json()


def load_injection(path: str) -> Injection:
    """读取 injection JSON 文件；格式或取值不合法时抛出 OrderSpecError。"""
    with open(path, "r", encoding="utf-8") as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as e:
            raise OrderSpecError(f"{path}: not valid JSON ({e})")
    return injection_from_json(data)


def random_injection(rng: random.Random, max_table: int = 6) -> Injection:
    length = rng.randint(0, max_table)
    values = rng.sample(range(2 * max_table + 2), length)
    offset = (max(values) + 1 if values else 0) + rng.randint(0, 2)
    return Injection(tuple(values), offset)


@dataclass(frozen=True)
class TrueSet:
    s: int
    members: FinSubset

    def __contains__(self, n: int) -> bool:
        return n in self.members


@dataclass(frozen=True)
class TrueUpTo:
    horizon: int
    exact: bool = True


@dataclass(frozen=True)
class FalseWithWitness:
    k: int


@lru_cache(maxsize=4096)
def _true_members(f: Injection, s: int) -> Tuple[int, ...]:
    # n ∈ T_s 当且仅当 f(n) 小于 f(n+1), ..., f(s) 的最小值
    members = []
    suffix_min = None
    for n in range(s - 1, -1, -1):
        following = f(n + 1)
        suffix_min = following if suffix_min is None else min(suffix_min, following)
        if f(n) < suffix_min:
            members.append(n)
    return tuple(reversed(members))


def true_set_at(f: Injection, s: int) -> TrueSet:
    """
    T_s = {n < s : 对所有 n < k <= s 都有 f(n) < f(k)}。

    参数:
    - f: 单射。
    - s: 阶段。

    返回:
    - TrueSet，members 按升序。
    """
    if s < 0:
        raise ValueError(f"stages are naturals, got {s}")
    return TrueSet(s, FinSubset(_true_members(f, s)))


def true_at(f: Injection, n: int, s: int) -> bool:
    return n in true_set_at(f, s)


def is_true_upto(f: Injection, n: int, horizon: int) -> Union[TrueUpTo, FalseWithWitness]:
    """
    n 是否 f-true：(∀k > n)(f(n) < f(k))。
    表内逐个检查；表外 f 严格递增，只需比较第一个尾部阶段，所以判决总是精确的。
    """
    value = f(n)
    for k in range(n + 1, len(f.table)):
        if f(k) < value:
            return FalseWithWitness(k)
    first_tail = max(len(f.table), n + 1)
    if f(first_tail) < value:
        return FalseWithWitness(first_tail)
    return TrueUpTo(horizon, exact=True)


def is_true(f: Injection, n: int) -> bool:
    return isinstance(is_true_upto(f, n, n + 1), TrueUpTo)


def range_naive(f: Injection, n: int) -> bool:
    return n in f.table or n >= f.tail_start


def _decoded_at(f: Injection, n: int, m: int) -> bool:
    return any(f(k) == n for k in range(m))


def range_member_decoded(f: Injection, n: int) -> bool:
    """
    n ∈ range(f) 当且仅当 (∀m ∈ T)(f(m) > n → (∃k < m)(f(k) = n))，T 是全部 f-true 阶段。
    m 只需检查到 max(len(table), n - tail_offset + 1)：那之后的尾部阶段都是 true 且 f(m) > n。
    """
    bound = max(len(f.table), n - f.tail_offset + 1)
    for m in range(bound + 1):
        if f(m) > n and is_true(f, m) and not _decoded_at(f, n, m):
            return False
    return True


def range_from_true_set(f: Injection, stages: Iterable[int], n: int) -> Optional[bool]:
    """
    只用已知为 true 的阶段集合判断 n ∈ range(f)。
    集合中没有 f(m) > n 的阶段时无法判断，返回 None。
    """
    stages = sorted(set(stages))
    for m in stages:
        if not is_true(f, m):
            raise ValueError(f"stage {m} is not f-true")
    relevant = [m for m in stages if f(m) > n]
    if not relevant:
        return None
    return all(_decoded_at(f, n, m) for m in relevant)
