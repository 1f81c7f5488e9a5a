"""
在具体一维函数上验证 φ-Jensen 凸性及 Φ(λ, u) 上界
"""
import csv
import logging
import math
from fractions import Fraction
from typing import Iterable, Optional, Union

import fsspec
import numpy as np

from .base import BaseEngine
from .bounds import BoundEngine
from .errfun import eval_phi, regularize
from ..context import Context
from ..data_types import (
    ErrorFunction,
    GapRow,
    TestFunction,
    TestFunctionKind,
    ViolationCertificate,
)
from ..exceptions import InvalidArgument
from ..utils import parse_rational, split_args

logger = logging.getLogger(__name__)

Real = Union[Fraction, float]

MIDPOINT_RULE = "midpoint"


def make_test_function(
    kind: TestFunctionKind,
    lo: Fraction,
    hi: Fraction,
    coeffs: Iterable = (),
    points: Iterable[tuple] = (),
    spec: str = "",
) -> TestFunction:
    if not lo < hi:
        raise InvalidArgument(f"定义域需要 lo < hi，得到 [{lo}, {hi}]")
    return TestFunction(
        kind=kind,
        coeffs=[Fraction(c) for c in coeffs],
        points=sorted((Fraction(x), float(v)) for x, v in points),
        lo=lo,
        hi=hi,
        spec=spec or kind.value,
    )


def parse_test_function(spec: str, lo: Fraction, hi: Fraction) -> TestFunction:
    """
    解析 "quad:a,b,c"（ax²+bx+c）、"negquad:a"（−ax²）、"poly:c0,c1,…"、"abs"、"table:path.csv"
    """
    name, _, rest = spec.strip().partition(":")
    name = name.lower()
    args = [parse_rational(a) for a in split_args(rest)] if name != "table" else []
    if name == "quad" and len(args) == 3:
        a, b, c = args
        return make_test_function(TestFunctionKind.QUADRATIC, lo, hi, coeffs=[c, b, a], spec=spec)
    if name == "negquad" and len(args) == 1:
        return make_test_function(TestFunctionKind.NEG_QUADRATIC, lo, hi, coeffs=[0, 0, -args[0]], spec=spec)
    if name == "poly" and args:
        return make_test_function(TestFunctionKind.POLYNOMIAL, lo, hi, coeffs=args, spec=spec)
    if name == "abs" and not args:
        return make_test_function(TestFunctionKind.ABS_VALUE, lo, hi, spec=spec)
    if name == "table" and rest:
        with fsspec.open(rest, "r", encoding="utf-8") as f:
            rows = [row for row in csv.reader(f) if row and not row[0].lstrip().startswith("#")]
        try:
            points = [(parse_rational(row[0]), float(row[1])) for row in rows]
        except InvalidArgument:
            points = [(parse_rational(row[0]), float(row[1])) for row in rows[1:]]
        return make_test_function(TestFunctionKind.SAMPLED_TABLE, lo, hi, points=points, spec=spec)
    raise InvalidArgument(f"无法解析的测试函数: {spec!r}（支持 quad:a,b,c / negquad:a / poly:c0,… / abs / table:path.csv）")


def eval_test_function(f: TestFunction, x: Real) -> Real:
    """f(x)；多项式类在有理 x 处精确求值"""
    if isinstance(x, float):
        # λx + (1−λ)y 的舍入误差不应落到定义域之外
        slack = 1e-12 * max(1.0, abs(float(f.lo)), abs(float(f.hi)))
        if x < f.lo - slack or x > f.hi + slack:
            raise InvalidArgument(f"{x} 不在定义域 [{f.lo}, {f.hi}] 内")
        x = min(max(x, float(f.lo)), float(f.hi))
    elif x < f.lo or x > f.hi:
        raise InvalidArgument(f"{x} 不在定义域 [{f.lo}, {f.hi}] 内")
    if f.kind == TestFunctionKind.ABS_VALUE:
        return abs(x)
    if f.kind == TestFunctionKind.SAMPLED_TABLE:
        xs = np.array([float(p) for p, _ in f.points])
        ys = np.array([v for _, v in f.points])
        return float(np.interp(float(x), xs, ys))
    acc = Fraction(0) if not isinstance(x, float) else 0.0
    for c in reversed(f.coeffs):
        acc = acc * x + (c if not isinstance(x, float) else float(c))
    return acc


def reduced_fractions(denominator_max: int) -> list[Fraction]:
    """[0,1] 中分母 ≤ denominator_max 的全部最简分数，按大小排序"""
    values = {Fraction(a, q) for q in range(1, denominator_max + 1) for a in range(q + 1) if math.gcd(a, q) == 1}
    return sorted(values)


class Checker(BaseEngine):
    """φ-Jensen 凸性及上界的网格验证；结果只代表"网格上成立"。"""

    def __init__(self, context: Context = None, bounds: Optional[BoundEngine] = None):
        super().__init__(context)
        self.bounds = bounds or BoundEngine(self.context)

    @staticmethod
    def grid(f: TestFunction, count: int) -> list[Fraction]:
        if count < 2:
            raise InvalidArgument(f"网格点数必须 ≥ 2，得到 {count}")
        step = (f.hi - f.lo) / (count - 1)
        return [f.lo + i * step for i in range(count)]

    def verify_midconvex(self, f: TestFunction, phi: ErrorFunction, grid_count: int) -> list[ViolationCertificate]:
        """
        在均匀网格的所有点对上检查 f((x+y)/2) ≤ ½f(x) + ½f(y) + φ((x−y)/2)

        返回的反例列表为空表示在网格上成立。
        """
        points = self.grid(f, grid_count)
        values = [eval_test_function(f, x) for x in points]
        half = Fraction(1, 2)
        violations = []
        for i, x in enumerate(points):
            for j in range(i + 1, len(points)):
                y = points[j]
                lhs = eval_test_function(f, (x + y) / 2)
                rhs = half * values[i] + half * values[j] + eval_phi(phi, (x - y) / 2)
                if self._exceeds(lhs, rhs):
                    violations.append(ViolationCertificate(x=x, y=y, lam=half, lhs=lhs, rhs=rhs, rule=MIDPOINT_RULE))
        logger.info("midpoint check %s on %d points: %d violations", f.spec, grid_count, len(violations))
        return violations

    def convexity_gap(self, f: TestFunction, lam: Fraction, x: Real, y: Real) -> Real:
        """f(λx + (1−λ)y) − λf(x) − (1−λ)f(y)"""
        return eval_test_function(f, lam * x + (1 - lam) * y) - lam * eval_test_function(f, x) - (1 - lam) * eval_test_function(f, y)

    def verify_lambda_bound(
        self,
        f: TestFunction,
        phi: ErrorFunction,
        lam: Fraction,
        pair_count: int,
    ) -> list[ViolationCertificate]:
        """
        在 pair_count 个网格点的有序点对上检查凸性缺口 ≤ build_report 的最优认证估计
        """
        lam = Fraction(lam)
        reg = regularize(phi, self.context.search_depth)
        points = self.grid(f, pair_count)
        violations = []
        for x in points:
            for y in points:
                if x == y:
                    continue
                gap = self.convexity_gap(f, lam, x, y)
                best = self.bounds.build_report(lam, x - y, phi, reg=reg).best_estimate
                if best is None:
                    logger.debug("λ=%s u=%s: 没有认证估计，跳过", lam, x - y)
                    continue
                if self._exceeds(gap, best.upper_estimate):
                    violations.append(ViolationCertificate(
                        x=x, y=y, lam=lam, lhs=gap, rhs=best.upper_estimate, rule=best.rule.value,
                    ))
        return violations

    def gap_profile(
        self,
        f: TestFunction,
        phi: ErrorFunction,
        x: Fraction,
        y: Fraction,
        denominator_max: int,
    ) -> list[GapRow]:
        """对分母 ≤ denominator_max 的每个最简 λ 给出 (λ, 缺口, 最优上界)"""
        reg = regularize(phi, self.context.search_depth)
        rows = []
        for lam in reduced_fractions(denominator_max):
            gap = self.convexity_gap(f, lam, x, y)
            best = self.bounds.build_report(lam, x - y, phi, reg=reg).best_estimate
            if best is None:
                rows.append(GapRow(lam=lam, gap=gap, holds=False))
                continue
            holds = not self._exceeds(gap, best.upper_estimate)
            if not holds:
                logger.warning("λ=%s: 缺口 %s 超过上界 %s（%s）", lam, gap, best.upper_estimate, best.rule.value)
            rows.append(GapRow(lam=lam, gap=gap, bound=best.upper_estimate, rule=best.rule.value, holds=holds))
        return rows
