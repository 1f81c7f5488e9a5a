"""
服务基类，封装 context 和通用的比较逻辑
"""
from abc import ABC
from fractions import Fraction
from typing import Union

from ..context import Context

Real = Union[Fraction, float, int]


class BaseEngine(ABC):
    """
    计算服务基类，封装 context 和容差比较

    所有需要容差或搜索深度配置的服务类都应该继承此类
    """

    def __init__(self, context: Context = None):
        self.context = context or Context()

    @staticmethod
    def _exact(*values: Real) -> bool:
        return all(isinstance(v, (Fraction, int)) for v in values)

    def _tolerance(self, lhs: Real, rhs: Real) -> float:
        scale = max(abs(float(lhs)), abs(float(rhs)))
        return max(self.context.abs_tol, self.context.rel_tol * scale)

    def _exceeds(self, lhs: Real, rhs: Real) -> bool:
        """
        lhs > rhs 是否成立

        精确值直接比较；含浮点数时允许 1e−12 相对 / 1e−15 绝对容差
        """
        if self._exact(lhs, rhs):
            return lhs > rhs
        return float(lhs) > float(rhs) + self._tolerance(lhs, rhs)

    def _close(self, lhs: Real, rhs: Real) -> bool:
        if self._exact(lhs, rhs):
            return lhs == rhs
        return abs(float(lhs) - float(rhs)) <= self._tolerance(lhs, rhs)
