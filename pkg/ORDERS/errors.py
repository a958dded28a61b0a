# ORDERS/errors.py
# 全项目共用的异常类型。均继承自内置异常，调用方可以只捕获 ValueError 等。


class CarrierError(ValueError):
    """编码不属于该序的载体。"""


class OrderSpecError(ValueError):
    """OrderSpec / Injection 等输入描述不合法。"""


class NeedsMoreStages(LookupError):
    """查询的 Ξ 元素超出了已构造的阶段数，需要用更大的 stages 重建。"""

    def __init__(self, stage: int, bound: int):
        super().__init__(f"stage {stage} is outside the constructed bound {bound}; rebuild with more stages")
        self.stage = stage
        self.bound = bound


class UnsupportedShape(NotImplementedError):
    """某个基础序无法判定所需的闭包查询。"""


class ConstructionError(RuntimeError):
    """构造出的分隔元 / 证书复核失败。出现即说明实现有 bug。"""


class UnverifiedPrefix(ValueError):
    """传入的前缀不是坏序列。"""
