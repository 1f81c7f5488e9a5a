from fractions import Fraction
from typing import Optional, Union

from .context import Context
from .core.bounds import BoundEngine
from .core.checker import Checker, parse_test_function
from .core.dyadic import dz, dz_double_identity_check, dz_iterate, orbit
from .core.errfun import eval_phi, eval_phi_star, parse_error_function, regularize
from .core.numtheory import (
    euler_sharpened_check,
    half_totient,
    mu,
    mu_orbit,
    reduce_lambda,
    residue_set,
    totient,
)
from .core.takagi import (
    closed_form,
    eval_closed,
    fixed_point_solve,
    functional_equation_residual,
    orbit_series,
    truncated_series,
)
from .data_types import BoundReport, ErrorFunction
from .utils import parse_rational

__all__ = [
    "Engine",
    "Context",
    "closed_form",
    "dz",
    "dz_double_identity_check",
    "dz_iterate",
    "eval_closed",
    "eval_phi",
    "eval_phi_star",
    "euler_sharpened_check",
    "fixed_point_solve",
    "functional_equation_residual",
    "half_totient",
    "mu",
    "mu_orbit",
    "orbit",
    "orbit_series",
    "parse_error_function",
    "parse_rational",
    "parse_test_function",
    "reduce_lambda",
    "regularize",
    "residue_set",
    "totient",
    "truncated_series",
]


class Engine:
    """
    计算入口

    ```python
    from fractions import Fraction
    from midconvex import Engine

    engine = Engine()
    report = engine.report("1/4", 1, "pow:1,1")
    print(report.best_estimate)
    # 也可以直接使用服务
    # engine.bounds.takagi_bound(Fraction(1, 5), 1, engine.regularize("quad:1"))
    ```
    """
    def __init__(self, context: Optional[Context] = None):
        self.context: Context = context or Context()
        self.bounds = BoundEngine(self.context)
        self.checker = Checker(self.context, self.bounds)

    @staticmethod
    def error_function(phi: Union[str, ErrorFunction]) -> ErrorFunction:
        return parse_error_function(phi) if isinstance(phi, str) else phi

    def regularize(self, phi: Union[str, ErrorFunction]):
        """φ → φ*，搜索深度取自 context"""
        return regularize(self.error_function(phi), self.context.search_depth)

    def report(
        self,
        lam: Union[str, Fraction],
        u: Union[str, Fraction, float],
        phi: Union[str, ErrorFunction],
    ) -> BoundReport:
        """
        计算 (λ, u, φ) 的上界报告

        Args:
            lam: λ，"m/q" 字符串或 Fraction
            u: 位移；字符串按精确有理数解析
            phi: 误差函数或其文本形式

        Returns:
            BoundReport: 全部估计及最优认证估计
        """
        lam = parse_rational(lam)
        if isinstance(u, (str, int)):
            u = parse_rational(u)
        return self.bounds.build_report(lam, u, self.error_function(phi))
