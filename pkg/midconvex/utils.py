"""
midconvex 工具函数模块。

提供有理数解析、规格字符串拆分和数值格式化等实用函数。
"""

import numbers
from fractions import Fraction
from typing import TypeAlias, Union

from .exceptions import InvalidArgument


RationalLike: TypeAlias = Union[Fraction, int, str]
"""有理数输入类型别名，支持 Fraction、int 或 "m/q" / 十进制字符串。"""


def parse_rational(value: RationalLike) -> Fraction:
    """将多种有理数表示转换为最简 Fraction。

    支持以下输入：
    - Fraction / int：直接转换
    - "m/q" 字符串：按分数解析并约分
    - 十进制字符串（如 "0.25"、"-1e-3"）：按精确十进制值解析

    Args:
        value: 有理数表示。

    Returns:
        最简形式的 Fraction（分母为正）。

    Raises:
        InvalidArgument: 字符串无法解析，或传入了 float/bool 等非精确类型。

    Examples:
        >>> parse_rational("6/8")
        Fraction(3, 4)
        >>> parse_rational(" -13/5 ")
        Fraction(-13, 5)
        >>> parse_rational("0.1")
        Fraction(1, 10)
    """
    if isinstance(value, bool) or isinstance(value, float):
        raise InvalidArgument(f"有理数不接受 {type(value).__name__} 输入: {value!r}")
    if isinstance(value, (Fraction, int)):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError):
            raise InvalidArgument(f"无法解析的有理数: {value!r}")
    raise InvalidArgument(f"不支持的有理数类型: {type(value)}")


def split_args(text: str) -> list[str]:
    """拆分 "a,b,c" 形式的参数列表，忽略空白"""
    return [part.strip() for part in text.split(",") if part.strip()] if text else []


def parse_interval(text: str) -> tuple[Fraction, Fraction]:
    """解析 "lo,hi" 区间，要求 lo < hi"""
    parts = split_args(text)
    if len(parts) != 2:
        raise InvalidArgument(f"区间格式应为 lo,hi，得到 {text!r}")
    lo, hi = (parse_rational(p) for p in parts)
    if not lo < hi:
        raise InvalidArgument(f"区间需要 lo < hi，得到 [{lo}, {hi}]")
    return lo, hi


def format_real(value) -> Union[str, float]:
    """JSON 输出：精确值输出为 "m/q" 字符串，浮点数原样输出"""
    if isinstance(value, (Fraction, int)) and not isinstance(value, bool):
        return str(Fraction(value))
    if isinstance(value, numbers.Real):
        return float(value)
    raise TypeError(f"不支持的数值类型: {type(value)}")
