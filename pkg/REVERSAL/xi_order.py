import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, List, Optional, Tuple, Union

import numpy as np

from ORDERS.base_order import FINITE, BadPrefix, QuasiOrder
from ORDERS.builtin_orders import FiniteOrder
from ORDERS.errors import NeedsMoreStages, OrderSpecError, UnverifiedPrefix
from ORDERS.order_tools import is_bad_prefix, order_to_dot
from REVERSAL.true_stages import FalseWithWitness, Injection, is_true_upto, true_set_at

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class PointedPoset:
    """有限偏序 P 以及其中的指定元素 x；names 只用于输出。"""
    poset: FiniteOrder
    x: int
    names: Tuple[str, ...] = ()

    def __post_init__(self):
        self.poset.check(self.x)
        m = self.poset.matrix
        if np.any(m & m.T & ~np.eye(self.poset.size, dtype=bool)):
            raise OrderSpecError(f"{self.poset.name} is not antisymmetric")
        if self.names and len(self.names) != self.poset.size:
            raise OrderSpecError("names must label every element of P")

    @property
    def size(self) -> int:
        return self.poset.size

    def name_of(self, p: int) -> str:
        return self.names[p] if self.names else f"p{p}"


SINGLETON = PointedPoset(FiniteOrder(1, name="{x}"), 0, ("x",))
# x < z，y 与两者都不可比
FLAT_POSET = PointedPoset(FiniteOrder(3, le=[(0, 2)], name="xyz"), 0, ("x", "y", "z"))
SHARP_POSET = PointedPoset(FiniteOrder(2, name="xy"), 0, ("x", "y"))


class Placement(Enum):
    ABOVE = "above"
    BELOW = "below"


@dataclass(frozen=True)
class Anchor:
    stage: int
    anchor: int
    placement: Placement


@dataclass(frozen=True)
class AnchorLog:
    """
    阶段 s+1 的放置方式：D = (T_s ∪ {s}) \\ T_{s+1} 非空时紧贴在 x_{min D} 之上，否则紧贴在 x_s 之下。
    entries[0] 对应阶段 1。
    """
    entries: Tuple[Anchor, ...] = field(default=())

    def at(self, stage: int) -> Anchor:
        return self.entries[stage - 1]

    def to_json(self) -> List[Dict[str, Any]]:
        return [{"stage": a.stage, "anchor": a.anchor, "dir": a.placement.value} for a in self.entries]


def anchor_log(f: Injection, stages: int) -> AnchorLog:
    entries = []
    for s in range(stages - 1):
        before = set(true_set_at(f, s).members) | {s}
        dropped = before - set(true_set_at(f, s + 1).members)
        if dropped:
            entries.append(Anchor(s + 1, min(dropped), Placement.ABOVE))
        else:
            entries.append(Anchor(s + 1, s, Placement.BELOW))
        logger.debug("xi: stage %d placed %s x_%d", s + 1, entries[-1].placement.value, entries[-1].anchor)
    return AnchorLog(tuple(entries))


def anchor_log_json(log: AnchorLog) -> List[Dict[str, Any]]:
    return log.to_json()


class XiOrder(QuasiOrder):
    """
    Ξ_f(P, x) 的前 stages 个阶段。元素 (n, p) 编码为 n * |P| + p。
    跨阶段的比较沿 AnchorLog 归约：较新的一整块只通过它的锚点与旧元素比较。
    """

    def __init__(self, f: Injection, pointed: PointedPoset, stages: int):
        if stages < 1:
            raise ValueError(f"stages must be >= 1, got {stages}")
        super().__init__(f"xi({pointed.poset.name}, {stages})")
        self.f = f
        self.pointed = pointed
        self.stages = stages
        self.log = anchor_log(f, stages)
        self._width = pointed.size
        self._memo: Dict[Tuple[int, int], bool] = {}

    @property
    def universe(self) -> str:
        return FINITE

    @property
    def size(self) -> Optional[int]:
        return self.stages * self._width

    def is_valid(self, code: int) -> bool:
        return 0 <= code < self.stages * self._width

    def check(self, code: int) -> int:
        if isinstance(code, int) and not isinstance(code, bool) and code >= self.stages * self._width:
            raise NeedsMoreStages(code // self._width, self.stages)
        return super().check(code)

    def encode(self, stage: int, p: int) -> int:
        if stage >= self.stages:
            raise NeedsMoreStages(stage, self.stages)
        self.pointed.poset.check(p)
        return stage * self._width + p

    def decode(self, code: int) -> Tuple[int, int]:
        self.check(code)
        return divmod(code, self._width)

    def x_at(self, stage: int) -> int:
        return self.encode(stage, self.pointed.x)

    def block(self, stage: int) -> Tuple[int, ...]:
        return tuple(self.encode(stage, p) for p in range(self._width))

    def label(self, code: int) -> str:
        stage, p = self.decode(code)
        return f"{self.pointed.name_of(p)}_{stage}"

    def _requires(self, a: int, b: int) -> Tuple[Tuple[int, int], ...]:
        """a ≤ b 依赖的比较；每一项的较大阶段都严格小于 max(a, b) 的阶段。"""
        sa = a // self._width
        sb = b // self._width
        if sa == sb:
            return ()
        if sa > sb:
            anchor = self.log.at(sa)
            xa = self.x_at(anchor.anchor)
            if anchor.placement is Placement.ABOVE:
                return (xa, b), (b, xa)
            return ((xa, b),)
        anchor = self.log.at(sb)
        xb = self.x_at(anchor.anchor)
        if anchor.placement is Placement.ABOVE:
            return ((a, xb),)
        return (a, xb), (xb, a)

    def _combine(self, a: int, b: int) -> bool:
        sa, pa = divmod(a, self._width)
        sb, pb = divmod(b, self._width)
        if sa == sb:
            return self.pointed.poset._leq(pa, pb)
        deps = self._requires(a, b)
        first = self._memo[deps[0]]
        if len(deps) == 1:
            return first
        # 紧贴在锚点之上 / 之下：只有严格关系才传递过来
        return first and not self._memo[deps[1]]

    def _resolve(self, a: int, b: int) -> bool:
        """
        沿 AnchorLog 逐层归约，用显式栈代替递归，阶段数很大时也不会超出递归深度。
        """
        if (a, b) in self._memo:
            return self._memo[(a, b)]
        stack = [(a, b)]
        while stack:
            pair = stack[-1]
            if pair in self._memo:
                stack.pop()
                continue
            missing = [d for d in self._requires(*pair) if d not in self._memo]
            if missing:
                stack.extend(missing)
                continue
            self._memo[pair] = self._combine(*pair)
            stack.pop()
        return self._memo[(a, b)]

    def _leq(self, a: int, b: int) -> bool:
        return self._resolve(a, b)


def xi_order(f: Injection, pointed: PointedPoset, stages: int) -> Tuple[XiOrder, AnchorLog]:
    order = XiOrder(f, pointed, stages)
    return order, order.log


def xi_matrix(f: Injection, pointed: PointedPoset, stages: int) -> np.ndarray:
    """逐阶段重放定义，得到前 stages 个阶段上完整的布尔关系矩阵。"""
    width = pointed.size
    base = pointed.poset.matrix
    log = anchor_log(f, stages)
    rel = np.zeros((stages * width, stages * width), dtype=bool)
    rel[:width, :width] = base
    for s in range(1, stages):
        anchor = log.at(s)
        old = slice(0, s * width)
        new = slice(s * width, (s + 1) * width)
        xa = anchor.anchor * width + pointed.x
        below_anchor = rel[old, xa]
        above_anchor = rel[xa, old]
        if anchor.placement is Placement.ABOVE:
            rel[old, new] = below_anchor[:, None]
            rel[new, old] = (above_anchor & ~below_anchor)[None, :]
        else:
            rel[new, old] = above_anchor[None, :]
            rel[old, new] = (below_anchor & ~above_anchor)[:, None]
        rel[new, new] = base
    return rel


def xi_leq_naive(f: Injection, pointed: PointedPoset, a: Tuple[int, int], b: Tuple[int, int]) -> bool:
    """a, b 是 (stage, p)。"""
    width = pointed.size
    rel = xi_matrix(f, pointed, max(a[0], b[0]) + 1)
    return bool(rel[a[0] * width + a[1], b[0] * width + b[1]])


def placement_check(f: Injection, pointed: PointedPoset, m: int, n: int, order: Optional[XiOrder] = None) -> bool:
    """
    n < m 时检查：
    - n ∈ T_m ⇒ P_m <= x_n，且 P_n 中与 x_n 不可比的 y 与整个 P_m 不可比；
    - n ∉ T_m ⇒ x_n <= P_m。
    """
    if not n < m:
        raise ValueError(f"placement_check needs n < m, got n={n}, m={m}")
    order = order if order is not None and order.stages > m else XiOrder(f, pointed, m + 1)
    xn = order.x_at(n)
    block = order.block(m)
    if n in true_set_at(f, m):
        if not all(order.leq(z, xn) for z in block):
            return False
        for y in order.block(n):
            if not order.leq(xn, y) and not order.leq(y, xn):
                if any(order.leq(z, y) or order.leq(y, z) for z in block):
                    return False
        return True
    return all(order.leq(xn, z) for z in block)


lemma43_check = placement_check


@dataclass(frozen=True)
class TrueVerdict:
    witness: int


@dataclass(frozen=True)
class FalseVerdict:
    k: int


@dataclass(frozen=True)
class InsufficientPrefix:
    prefix_len: int


def decode_from_bad(order: XiOrder, bad: BadPrefix, n: int,
                    prefix_len: Optional[int] = None) -> Union[TrueVerdict, FalseVerdict, InsufficientPrefix]:
    """
    n 是 f-true 当且仅当坏序列中某个 q_i <= x_n。只把阶段大于 n 的 q_i 算作见证，
    并与精确分类交叉核对：找到见证但 n 不是 true 时说明前缀太短，返回 InsufficientPrefix。
    """
    if not is_bad_prefix(order, bad.seq):
        raise UnverifiedPrefix(f"{list(bad.seq)} is not bad in {order.name}")
    prefix_len = len(bad.seq) if prefix_len is None else min(prefix_len, len(bad.seq))
    xn = order.x_at(n)
    witness = next((i for i, q in enumerate(bad.seq[:prefix_len])
                    if order.decode(q)[0] > n and order.leq(q, xn)), None)
    exact = is_true_upto(order.f, n, order.stages)
    if witness is not None:
        if isinstance(exact, FalseWithWitness):
            logger.info("decode_from_bad: witness %d for false stage %d, prefix too short", witness, n)
            return InsufficientPrefix(prefix_len)
        return TrueVerdict(witness)
    if isinstance(exact, FalseWithWitness):
        return FalseVerdict(exact.k)
    return InsufficientPrefix(prefix_len)


@dataclass(frozen=True)
class OmegaPartWitness:
    k: int


@dataclass(frozen=True)
class OmegaStarUpTo:
    horizon: int
    exact: bool = True


def omega_certificate(f: Injection, n: int, horizon: int = 0) -> Union[OmegaPartWitness, OmegaStarUpTo]:
    """在 W = Ξ_f({x}, x) 中，x_n 属于 ω 部分当且仅当 n 不是 f-true。"""
    verdict = is_true_upto(f, n, horizon)
    if isinstance(verdict, FalseWithWitness):
        return OmegaPartWitness(verdict.k)
    return OmegaStarUpTo(verdict.horizon, verdict.exact)


@dataclass(frozen=True)
class OmegaSplit:
    omega: Tuple[int, ...]
    omega_star: Tuple[int, ...]
    linear: bool


def omega_split(f: Injection, stages: int) -> OmegaSplit:
    """把 W 的前 stages 个点分成 ω 部分与 ω* 部分，并检查 W 在这些点上是线性序。"""
    order = XiOrder(f, SINGLETON, stages)
    omega, star = [], []
    for n in range(stages):
        (omega if isinstance(omega_certificate(f, n), OmegaPartWitness) else star).append(n)
    codes = list(order.enumerate())
    linear = all(order.leq(a, b) or order.leq(b, a) for a in codes for b in codes)
    return OmegaSplit(tuple(omega), tuple(star), linear)


def xi_to_dot(order: XiOrder, stages: Optional[int] = None) -> str:
    """前 stages 个阶段的 Hasse 图，外加虚线标出每个阶段 x 的锚点。"""
    stages = order.stages if stages is None else min(stages, order.stages)
    codes = [c for s in range(stages) for c in order.block(s)]
    text = order_to_dot(order, codes, label=order.name, names={c: order.label(c) for c in codes})
    lines = text.rstrip("\n").split("\n")
    extra = []
    for s in range(1, stages):
        anchor = order.log.at(s)
        extra.append(f'  n{order.x_at(s)} -> n{order.x_at(anchor.anchor)} '
                     f'[style=dashed, label="{anchor.placement.value}"];')
    return "\n".join(lines[:-1] + extra + lines[-1:]) + "\n"
