import math
from typing import Iterable, Sequence, Tuple


def pair(i: int, j: int) -> int:
    """Cantor 对角配对。

    参数:
    - i, j: 两个自然数。

    返回:
    - (i + j)(i + j + 1) / 2 + j，对每个分量严格单调。
    """
    if i < 0 or j < 0:
        raise ValueError(f"pair() expects naturals, got ({i}, {j})")
    s = i + j
    return s * (s + 1) // 2 + j


def unpair(code: int) -> Tuple[int, int]:
    """pair 的逆映射。"""
    if code < 0:
        raise ValueError(f"unpair() expects a natural, got {code}")
    w = (math.isqrt(8 * code + 1) - 1) // 2
    j = code - w * (w + 1) // 2
    return w - j, j


def tuple_pair(items: Sequence[int]) -> int:
    """把 n 元组编码为一个自然数（n 固定时是双射）。

    说明:
    - n = 0 时只有空元组，编码为 0。
    - n = 1 时编码为分量本身。
    - n >= 2 时编码为 pair(items[0], tuple_pair(items[1:]))。
    """
    if not items:
        return 0
    if len(items) == 1:
        return items[0]
    return pair(items[0], tuple_pair(items[1:]))


def tuple_unpair(code: int, n: int) -> Tuple[int, ...]:
    """tuple_pair 的逆映射；n = 0 时只接受 code = 0。"""
    if n == 0:
        if code != 0:
            raise ValueError("only code 0 denotes the empty tuple")
        return ()
    if n == 1:
        return (code,)
    head, rest = unpair(code)
    return (head,) + tuple_unpair(rest, n - 1)


def bits_of(code: int) -> Tuple[int, ...]:
    """返回 code 二进制表示中为 1 的位下标（升序）。"""
    if code < 0:
        raise ValueError(f"finite-set codes are naturals, got {code}")
    out = []
    k = 0
    while code:
        if code & 1:
            out.append(k)
        code >>= 1
        k += 1
    return tuple(out)


def mask_of(indices: Iterable[int]) -> int:
    """bits_of 的逆映射。"""
    mask = 0
    for k in indices:
        mask |= 1 << k
    return mask
