from enum import Enum
from fractions import Fraction
from typing import Annotated, Any, Callable, Optional, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, PlainSerializer, PlainValidator


def _to_fraction(v: Any) -> Fraction:
    if isinstance(v, Fraction):
        return v
    if isinstance(v, bool):
        raise ValueError("bool 不是有理数")
    if isinstance(v, int):
        return Fraction(v)
    if isinstance(v, str):
        return Fraction(v.strip())
    raise ValueError(f"无法解释为有理数: {v!r}")


def _to_real(v: Any) -> Union[Fraction, float]:
    if isinstance(v, float):
        return v
    return _to_fraction(v)


def _real_json(v: Union[Fraction, float]) -> Union[str, float]:
    return str(v) if isinstance(v, Fraction) else float(v)


Rational = Annotated[
    Fraction,
    PlainValidator(_to_fraction),
    PlainSerializer(str, return_type=str, when_used="json"),
]
"""精确有理数；JSON 中序列化为 "m/q" 字符串。"""

RealOrRational = Annotated[
    Union[Fraction, float],
    PlainValidator(_to_real),
    PlainSerializer(_real_json, when_used="json"),
]
"""精确时为 Fraction，否则为 binary64 浮点数。"""


class _Frozen(BaseModel):
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)


class EulerSign(str, Enum):
    """n | a^ℓ − 1 或 n | a^ℓ + 1"""
    DIVIDES_MINUS = "DividesMinus"
    DIVIDES_PLUS = "DividesPlus"


class ReducedLambda(_Frozen):
    """λ = m/(2^j·n)，n 为奇数"""
    m: int = Field(..., ge=1, description="分子")
    j: int = Field(..., ge=0, description="分母中 2 的幂次")
    n: int = Field(..., ge=1, description="分母的奇数部分")
    value: Rational = Field(..., description="m/(2^j·n)")
    canonical: bool = Field(..., description="value ≤ 1/2")


class MuOrbit(_Frozen):
    """μ_n 在 M_n 上从 start 出发的轨道"""
    n: int = Field(..., ge=3)
    start: int
    states: list[int] = Field(..., description="一个最小周期内的状态")
    period: int = Field(..., ge=1, description="最小周期")
    half_totient: int = Field(..., description="ℓ = φ(n)/2")


class DyadicOrbit(_Frozen):
    """序列 k ↦ d_Z(2^k λ) 的预周期部分与循环部分"""
    value: Rational = Field(..., description="λ")
    reduced: Optional[ReducedLambda] = Field(default=None, description="λ ∈ {0,1} 时为空")
    preperiod: list[Rational] = Field(default_factory=list)
    cycle: list[Rational] = Field(..., min_length=1)
    minimal_period: int = Field(..., ge=1)
    half_totient: int = Field(default=0, description="ℓ；n = 1 时为 0")


class ClosedFormSource(str, Enum):
    CYCLE_BLOCK = "CycleBlock"
    ZERO_ENDPOINT = "ZeroEndpoint"


class TakagiTerm(_Frozen):
    weight: Rational
    scale: Rational


class TakagiClosedForm(_Frozen):
    """无穷级数 Σ 2^{-k} ψ(d_Z(2^k λ)) 的有限闭式"""
    lam: Rational = Field(..., serialization_alias="lambda")
    reduced: Optional[ReducedLambda] = Field(default=None, description="规范化（≤ 1/2）后的分解")
    terms: list[TakagiTerm] = Field(default_factory=list)
    source: ClosedFormSource
    preperiod_length: int = Field(default=0, description="j 个权重为 2^{-k} 的项")
    block_length: int = Field(default=0, description="ℓ 个权重为 1/(2^k − 2^{k−ℓ}) 的项")

    def pairs(self) -> list[tuple[Fraction, Fraction]]:
        return [(t.weight, t.scale) for t in self.terms]


class PsiFunction(_Frozen):
    """[0, 1/2] 上的函数 ψ"""
    evaluator: Callable[[Any], Any]
    description: str = ""
    exact: bool = Field(default=False, description="在有理数上返回 Fraction")

    def __call__(self, t):
        return self.evaluator(t)


class GridFunction(_Frozen):
    """二进网格 {i·2^{-N}} 上的函数值"""
    grid_exponent: int = Field(..., ge=1)
    values: np.ndarray

    @property
    def size(self) -> int:
        return (1 << self.grid_exponent) + 1

    def points(self) -> np.ndarray:
        return np.arange(self.size, dtype=float) / (1 << self.grid_exponent)

    def at(self, lam: Fraction) -> float:
        """在网格点 λ 处取值"""
        index = lam * (1 << self.grid_exponent)
        if index.denominator != 1 or not 0 <= index <= self.size - 1:
            raise ValueError(f"{lam} 不是网格点")
        return float(self.values[int(index)])


class ErrorKind(str, Enum):
    POWER = "power"
    QUADRATIC = "quadratic"
    TABLE = "table"
    ZERO = "zero"


class ErrorFunction(_Frozen):
    """误差函数 φ；只依赖 |u|，且 φ(0) = 0"""
    kind: ErrorKind
    c: RealOrRational = Field(default=Fraction(0), description="系数")
    p: RealOrRational = Field(default=Fraction(2), description="指数")
    points: list[tuple[Rational, float]] = Field(default_factory=list, description="Table 的 (|u|, value) 节点")
    domain_radius: float = Field(default=float("inf"), gt=0, description="½D_Δ 的半宽")
    spec: str = Field(default="", description="文本形式")


class RegularizationMode(str, Enum):
    ANALYTIC_EXACT = "AnalyticExact"
    BOUNDED_SEARCH = "BoundedSearch"


class RegularizedErrorFunction(_Frozen):
    """φ*(u) = inf_m m²φ(u/m)"""
    base: ErrorFunction
    mode: RegularizationMode
    m_max: int = Field(default=64, ge=1)
    certified: bool
    collapsed: bool = Field(default=False, description="AnalyticExact 下 φ* ≡ 0")


class BoundRule(str, Enum):
    RATIONAL_NK = "RationalNK"
    TAKAGI_CLOSED_FORM = "TakagiClosedForm"
    TAKAGI_TRUNCATED = "TakagiTruncated"
    COMPOSITION = "Composition"
    INTRO_SPECIAL_CASE = "IntroSpecialCase"


class BoundEstimate(_Frozen):
    rule: BoundRule
    upper_estimate: RealOrRational = Field(..., serialization_alias="value")
    certified: bool
    detail: str = ""


class BoundReport(_Frozen):
    """同一 (λ, u, φ) 的全部上界估计"""
    lam: Rational = Field(..., serialization_alias="lambda")
    u: RealOrRational
    phi: str = ""
    estimates: list[BoundEstimate] = Field(default_factory=list)
    best: Optional[int] = None
    unbounded: bool = False

    @property
    def best_estimate(self) -> Optional[BoundEstimate]:
        return None if self.best is None else self.estimates[self.best]

    def by_rule(self, rule: BoundRule) -> Optional[BoundEstimate]:
        return next((e for e in self.estimates if e.rule == rule), None)


class TestFunctionKind(str, Enum):
    __test__ = False

    QUADRATIC = "quad"
    NEG_QUADRATIC = "negquad"
    POLYNOMIAL = "poly"
    ABS_VALUE = "abs"
    SAMPLED_TABLE = "table"


class TestFunction(_Frozen):
    """待检验的一维函数 f : [lo, hi] → R"""
    __test__ = False

    kind: TestFunctionKind
    coeffs: list[Rational] = Field(default_factory=list, description="c0 + c1·x + …")
    points: list[tuple[Rational, float]] = Field(default_factory=list)
    lo: Rational
    hi: Rational
    spec: str = ""


class ViolationCertificate(_Frozen):
    x: RealOrRational
    y: RealOrRational
    lam: Rational = Field(..., serialization_alias="lambda")
    lhs: RealOrRational
    rhs: RealOrRational
    rule: str


class GapRow(_Frozen):
    lam: Rational = Field(..., serialization_alias="lambda")
    gap: RealOrRational
    bound: Optional[RealOrRational] = None
    rule: str = ""
    holds: bool = True


