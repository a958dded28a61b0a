import json
import logging
import os
from typing import Any, Dict

from ORDERS.base_order import QuasiOrder
from ORDERS.builtin_orders import (AntichainOrder, FiniteOrder, OmegaOrder, OmegaStarOrder, ProductOrder, RadoOrder,
                                   SumOrder)
from ORDERS.errors import OrderSpecError

logger = logging.getLogger(__name__)

ORDER_KINDS = ("finite", "omega", "omega_star", "antichain", "rado", "sum", "product")


def build_order(spec: Dict[str, Any]) -> QuasiOrder:
    """
    由 OrderSpec（JSON 对象）构造拟序。

    :param spec: {"kind": "finite", "elements": n, "le": [[a, b], ...], "lt": [...]}
                 | {"kind": "rado"} | {"kind": "omega"} | {"kind": "omega_star"}
                 | {"kind": "antichain", "elements": n?}
                 | {"kind": "sum" | "product", "left": spec, "right": spec}
    :return: 对应的 QuasiOrder。
    """
    if not isinstance(spec, dict):
        raise OrderSpecError(f"order spec must be an object, got {type(spec).__name__}")
    kind = spec.get("kind")
    if kind not in ORDER_KINDS:
        raise OrderSpecError(f"unknown order kind {kind!r}; expected one of {', '.join(ORDER_KINDS)}")

    if kind == "finite":
        n = spec.get("elements")
        if not isinstance(n, int) or isinstance(n, bool) or n < 0:
            raise OrderSpecError("finite order needs a natural 'elements' count")
        return FiniteOrder(n, le=spec.get("le", []), lt=spec.get("lt", []), name=spec.get("name"))
    if kind == "omega":
        return OmegaOrder()
    if kind == "omega_star":
        return OmegaStarOrder()
    if kind == "antichain":
        n = spec.get("elements")
        if n is not None and (not isinstance(n, int) or n < 0):
            raise OrderSpecError("antichain 'elements' must be a natural when given")
        return AntichainOrder(n)
    if kind == "rado":
        return RadoOrder()

    if "left" not in spec or "right" not in spec:
        raise OrderSpecError(f"{kind} order needs 'left' and 'right'")
    left = build_order(spec["left"])
    right = build_order(spec["right"])
    return SumOrder(left, right) if kind == "sum" else ProductOrder(left, right)


def load_order(path: str) -> QuasiOrder:
    """从 JSON 文件读取 OrderSpec。"""
    if not os.path.exists(path):
        raise FileNotFoundError(f"Order spec file \"{path}\" does not exist!")
    with open(path, "r", encoding="utf-8") as f:
        try:
            spec = json.load(f)
        except json.JSONDecodeError as e:
            raise OrderSpecError(f"{path}: not valid JSON ({e})")
    order = build_order(spec)
    logger.debug("Loaded order %s from %s", order.name, path)
    return order
