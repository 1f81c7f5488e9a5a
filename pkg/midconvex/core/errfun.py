"""
误差函数 φ 及其正则化 φ*(u) = inf_{m∈N} m²φ(u/m)
"""
import csv
import logging
from fractions import Fraction
from typing import Iterable, Union

import fsspec
import numpy as np

from ..data_types import (
    ErrorFunction,
    ErrorKind,
    PsiFunction,
    RegularizationMode,
    RegularizedErrorFunction,
)
from ..exceptions import InvalidArgument, OutOfDomain, UnboundedRegularization
from ..utils import parse_rational, split_args

logger = logging.getLogger(__name__)

Real = Union[Fraction, float]

DEFAULT_SEARCH_DEPTH = 64


def power(c: Real, p: Real, domain_radius: float = float("inf")) -> ErrorFunction:
    """φ(u) = c·|u|^p"""
    if p < 0:
        raise InvalidArgument(f"指数必须非负，得到 {p}")
    spec = f"pow:{c},{p}"
    if c == 0:
        return ErrorFunction(kind=ErrorKind.ZERO, domain_radius=domain_radius, spec=spec)
    kind = ErrorKind.QUADRATIC if p == 2 else ErrorKind.POWER
    return ErrorFunction(kind=kind, c=c, p=p, domain_radius=domain_radius, spec=spec)


def quadratic(c: Real, domain_radius: float = float("inf")) -> ErrorFunction:
    """φ(u) = c·u²；c < 0 对应强凸性"""
    phi = power(c, Fraction(2), domain_radius)
    return phi.model_copy(update={"spec": f"quad:{c}"})


def zero(domain_radius: float = float("inf")) -> ErrorFunction:
    return ErrorFunction(kind=ErrorKind.ZERO, domain_radius=domain_radius, spec="zero")


def table(points: Iterable[tuple], spec: str = "table") -> ErrorFunction:
    """
    由 (u, value) 节点给出的 φ，按 |u| 线性插值

    缺少 u = 0 的节点时补上 (0, 0)；φ(0) ≠ 0 的表被拒绝。
    """
    nodes: dict[Fraction, float] = {}
    for u, value in points:
        key = abs(parse_rational(u) if isinstance(u, str) else Fraction(u))
        value = float(value)
        if key in nodes and nodes[key] != value:
            raise InvalidArgument(f"表中 |u| = {key} 的取值不一致（φ 必须为偶函数）")
        nodes[key] = value
    if nodes.get(Fraction(0), 0.0) != 0.0:
        raise InvalidArgument("表中 φ(0) ≠ 0")
    nodes[Fraction(0)] = 0.0
    ordered = sorted(nodes.items())
    radius = float(ordered[-1][0])
    if radius <= 0:
        raise InvalidArgument("表至少需要一个 u ≠ 0 的节点")
    return ErrorFunction(kind=ErrorKind.TABLE, points=ordered, domain_radius=radius, spec=spec)


def load_table(path: str) -> ErrorFunction:
    """读取 CSV（每行 u,value），path 可以是本地路径或 fsspec 支持的 URL"""
    with fsspec.open(path, "r", encoding="utf-8") as f:
        rows = [row for row in csv.reader(f) if row and not row[0].lstrip().startswith("#")]
    if rows and not _looks_numeric(rows[0][0]):
        rows = rows[1:]
    return table(((row[0], row[1]) for row in rows), spec=f"table:{path}")


def _looks_numeric(text: str) -> bool:
    try:
        parse_rational(text)
    except InvalidArgument:
        return False
    return True


def parse_error_function(spec: str) -> ErrorFunction:
    """
    解析文本形式: "pow:c,p"、"quad:c"、"zero"、"table:path.csv"

    Examples:
        >>> parse_error_function("pow:1,2").kind
        <ErrorKind.QUADRATIC: 'quadratic'>
    """
    name, _, rest = spec.strip().partition(":")
    name = name.lower()
    if name == "zero":
        return zero()
    if name == "table":
        if not rest:
            raise InvalidArgument("table: 需要文件路径")
        return load_table(rest)
    args = split_args(rest)
    if name == "quad" and len(args) == 1:
        return quadratic(parse_rational(args[0])).model_copy(update={"spec": spec})
    if name == "pow" and len(args) == 2:
        return power(parse_rational(args[0]), parse_rational(args[1])).model_copy(update={"spec": spec})
    raise InvalidArgument(f"无法解析的误差函数: {spec!r}（支持 pow:c,p / quad:c / zero / table:path.csv）")


def _check_domain(phi: ErrorFunction, u: Real) -> None:
    if abs(u) > phi.domain_radius:
        raise OutOfDomain(u, phi.domain_radius)


def _zero_like(u: Real) -> Real:
    return 0.0 if isinstance(u, float) else Fraction(0)


def eval_phi(phi: ErrorFunction, u: Real) -> Real:
    """φ(|u|)；有理 u 与有理 c、整数 p 时精确"""
    _check_domain(phi, u)
    if phi.kind == ErrorKind.ZERO or u == 0:
        return _zero_like(u)
    if phi.kind == ErrorKind.TABLE:
        xs = np.array([float(x) for x, _ in phi.points])
        ys = np.array([y for _, y in phi.points])
        return float(np.interp(float(abs(u)), xs, ys))
    magnitude = abs(u)
    if isinstance(magnitude, float):
        return float(phi.c) * magnitude ** float(phi.p)
    return phi.c * magnitude ** phi.p


def regularize(phi: ErrorFunction, m_max: int = DEFAULT_SEARCH_DEPTH) -> RegularizedErrorFunction:
    """
    φ* 的计算方式

    幂函数族 c·|u|^p 按符号与指数解析处理（m²·c·(|u|/m)^p = c·m^{2−p}|u|^p 关于 m 单调）：
      - c > 0：p ≤ 2 时 φ* = φ，p > 2 时 φ* ≡ 0
      - c < 0：p ≥ 2 时 φ* = φ，p < 2 时 φ* = −∞（UnboundedRegularization）
    Table 在 m ≤ m_max 上有限搜索，结果只是 φ* 的上近似，不作认证。
    """
    if phi.kind == ErrorKind.ZERO:
        return RegularizedErrorFunction(base=phi, mode=RegularizationMode.ANALYTIC_EXACT, certified=True)
    if phi.kind == ErrorKind.TABLE:
        logger.warning("φ* 由 m ≤ %d 的有限搜索近似，相关估计不作认证", m_max)
        return RegularizedErrorFunction(
            base=phi,
            mode=RegularizationMode.BOUNDED_SEARCH,
            m_max=m_max,
            certified=False,
        )
    if phi.c > 0:
        collapsed = phi.p > 2
    elif phi.p < 2:
        raise UnboundedRegularization(f"{phi.spec or phi.kind.value}: c < 0 且 p < 2 时 φ* = −∞")
    else:
        collapsed = False
    return RegularizedErrorFunction(
        base=phi,
        mode=RegularizationMode.ANALYTIC_EXACT,
        certified=True,
        collapsed=collapsed,
    )


def eval_phi_star(reg: RegularizedErrorFunction, u: Real) -> Real:
    """φ*(u)"""
    phi = reg.base
    _check_domain(phi, u)
    if reg.mode == RegularizationMode.BOUNDED_SEARCH:
        return min(m * m * eval_phi(phi, u / m) for m in range(1, reg.m_max + 1))
    if reg.collapsed:
        return _zero_like(u)
    return eval_phi(phi, u)


def as_error_function(reg: RegularizedErrorFunction) -> ErrorFunction:
    """把解析形式的 φ* 重新表示为 ErrorFunction"""
    if reg.mode != RegularizationMode.ANALYTIC_EXACT:
        raise InvalidArgument("只有 AnalyticExact 的 φ* 可以重新表示为误差函数")
    if reg.collapsed:
        return zero(reg.base.domain_radius)
    return reg.base


def idempotence_check(reg: RegularizedErrorFunction, samples: Iterable[Real]) -> bool:
    """(φ*)* = φ*：在样本点上比较再次正则化的结果"""
    twice = regularize(as_error_function(reg), reg.m_max)
    return all(eval_phi_star(twice, u) == eval_phi_star(reg, u) for u in samples)


def psi_from(reg: RegularizedErrorFunction, u: Real = Fraction(1)) -> PsiFunction:
    """ψ(t) = φ*(t·u)"""
    exact = reg.mode == RegularizationMode.ANALYTIC_EXACT and not isinstance(u, float)
    return PsiFunction(
        evaluator=lambda t: eval_phi_star(reg, t * u),
        description=f"t ↦ φ*(t·{u}), φ = {reg.base.spec}",
        exact=exact,
    )
