"""
扩展误差 Φ(λ, u) 的上界估计
"""
import logging
from fractions import Fraction
from typing import Iterable, Optional, Union

from .base import BaseEngine
from .errfun import eval_phi, eval_phi_star, psi_from, regularize
from .takagi import closed_form, eval_closed, truncated_series
from ..data_types import (
    BoundEstimate,
    BoundReport,
    BoundRule,
    ErrorFunction,
    RegularizedErrorFunction,
)
from ..exceptions import BoundViolation, InvalidArgument, UnboundedRegularization

logger = logging.getLogger(__name__)

Real = Union[Fraction, float]

HALF = Fraction(1, 2)


def _unit_interval(lam) -> Fraction:
    if isinstance(lam, float):
        raise InvalidArgument(f"λ 必须是有理数（无理 λ 处 Φ = ∞），得到 float {lam}")
    lam = Fraction(lam)
    if not 0 <= lam <= 1:
        raise InvalidArgument(f"λ 必须在 [0,1] 内，得到 {lam}")
    return lam


class BoundEngine(BaseEngine):
    """Φ(λ, u) 的各条上界规则及其汇总"""

    def rational_nk_bound(self, n: int, k: int, u: Real, reg: RegularizedErrorFunction) -> Real:
        """
        n·k·φ*(u/(n+k))

        λ = n/(n+k) 时的有理组合上界；n, k 不必互素。
        """
        if n < 0 or k < 0 or n + k == 0:
            raise InvalidArgument(f"需要 n, k ≥ 0 且 n + k ≥ 1，得到 n={n}, k={k}")
        return n * k * eval_phi_star(reg, u / (n + k))

    def takagi_bound(self, lam: Fraction, u: Real, reg: RegularizedErrorFunction) -> Real:
        """Σ 2^{-k} φ*(d_Z(2^k λ)·u)，按有限闭式精确求值"""
        form = closed_form(_unit_interval(lam), keep_zero=self.context.keep_zero_terms)
        return eval_closed(form, psi_from(reg, u))

    def truncated_bound(
        self,
        lam: Fraction,
        u: Real,
        reg: RegularizedErrorFunction,
        terms: Optional[int] = None,
    ) -> Real:
        """
        前 N 项部分和加余项 ⟨λ⟩²·2^{-(N+2)}·max_{1≤m≤⟨λ⟩}|φ*(u/m)|

        对每个 N 都是 Φ(λ, u) 的上界。
        """
        value, tail = truncated_series(
            _unit_interval(lam),
            psi_from(reg, u),
            terms or self.context.series_terms,
        )
        return value + tail

    def composition_bound(self, lam: Fraction, mu: Fraction, u: Real, reg: RegularizedErrorFunction) -> Real:
        """Φ(λμ, u) ≤ λ·Φ(μ, u) + Φ(λ, μu)，两项都用 Takagi 上界"""
        lam, mu = _unit_interval(lam), _unit_interval(mu)
        return lam * self.takagi_bound(mu, u, reg) + self.takagi_bound(lam, mu * u, reg)

    @staticmethod
    def intro_special_case(lam: Fraction, u: Real, phi: ErrorFunction) -> Optional[Real]:
        """
        直接由中点不等式两步推出的 Φ（使用 φ 而不是 φ*）

        λ = 1/2 → φ(u/2)；λ ∈ {1/3, 2/3} → 2φ(u/3)；λ ∈ {0, 1} → 0；其余 None
        """
        lam = Fraction(lam)
        if lam in (0, 1):
            return 0.0 if isinstance(u, float) else Fraction(0)
        if lam == HALF:
            return eval_phi(phi, u / 2)
        if lam in (Fraction(1, 3), Fraction(2, 3)):
            return 2 * eval_phi(phi, u / 3)
        return None

    def sharpness_check(self, n: int, m: int, u: Real, reg: RegularizedErrorFunction) -> bool:
        """
        检查 Takagi 上界 ≤ n·m·φ*(u/(n+m))，其中 λ = n/(n+m)

        Returns:
            两边是否相等（二次 φ 时恒相等）

        Raises:
            BoundViolation: 不等式不成立
        """
        if n < 1 or m < 1:
            raise InvalidArgument(f"需要 n, m ≥ 1，得到 n={n}, m={m}")
        takagi = self.takagi_bound(Fraction(n, n + m), u, reg)
        nk = self.rational_nk_bound(n, m, u, reg)
        if self._exceeds(takagi, nk):
            raise BoundViolation(f"n={n}, m={m}, u={u}: Takagi {takagi} > nm·φ*(u/(n+m)) {nk}", takagi, nk)
        return self._close(takagi, nk)

    def _default_factors(self, lam: Fraction, u: Real) -> tuple[Fraction, Fraction, Real]:
        # λ ≤ 1/2: λ = ½·(2λ)；λ > 1/2 走对称点 (1 − λ, −u)
        if lam <= HALF:
            return HALF, 2 * lam, u
        return HALF, 2 * (1 - lam), -u

    def build_report(
        self,
        lam: Fraction,
        u: Real,
        phi: ErrorFunction,
        reg: Optional[RegularizedErrorFunction] = None,
        factors: Iterable[tuple[Fraction, Fraction]] = (),
    ) -> BoundReport:
        """
        汇总 (λ, u, φ) 的全部上界估计

        Args:
            lam: λ ∈ [0,1]，有理数
            u: 位移 x − y
            phi: 误差函数
            reg: 已算好的 φ*（缺省时现算）
            factors: 额外的 (λ', μ') 分解，要求 λ'·μ' = λ

        Returns:
            BoundReport。φ* 无下界时 unbounded = True 且没有任何估计。
        """
        lam = _unit_interval(lam)
        if reg is None:
            try:
                reg = regularize(phi, self.context.search_depth)
            except UnboundedRegularization as e:
                logger.error("%s", e)
                return BoundReport(lam=lam, u=u, phi=phi.spec, unbounded=True)

        certified = reg.certified
        estimates: list[BoundEstimate] = []

        n, q = lam.numerator, lam.denominator
        estimates.append(BoundEstimate(
            rule=BoundRule.RATIONAL_NK,
            upper_estimate=self.rational_nk_bound(n, q - n, u, reg),
            certified=certified,
            detail=f"n={n}, k={q - n}",
        ))
        estimates.append(BoundEstimate(
            rule=BoundRule.TAKAGI_CLOSED_FORM,
            upper_estimate=self.takagi_bound(lam, u, reg),
            certified=certified,
        ))
        estimates.append(BoundEstimate(
            rule=BoundRule.TAKAGI_TRUNCATED,
            upper_estimate=self.truncated_bound(lam, u, reg),
            certified=certified,
            detail=f"N={self.context.series_terms}",
        ))

        pairs = [self._default_factors(lam, u)]
        for outer, inner in factors:
            outer, inner = Fraction(outer), Fraction(inner)
            if outer * inner != lam:
                raise InvalidArgument(f"{outer}·{inner} ≠ λ = {lam}")
            pairs.append((outer, inner, u))
        for outer, inner, shift in pairs:
            estimates.append(BoundEstimate(
                rule=BoundRule.COMPOSITION,
                upper_estimate=self.composition_bound(outer, inner, shift, reg),
                certified=certified,
                detail=f"λ'={outer}, μ'={inner}",
            ))

        intro = self.intro_special_case(lam, u, phi)
        if intro is not None:
            estimates.append(BoundEstimate(
                rule=BoundRule.INTRO_SPECIAL_CASE,
                upper_estimate=intro,
                certified=True,
            ))

        candidates = [i for i, e in enumerate(estimates) if e.certified]
        best = min(candidates, key=lambda i: estimates[i].upper_estimate) if candidates else None
        if not certified:
            logger.debug("λ=%s u=%s: φ* 未认证，仅 IntroSpecialCase 可作为认证估计", lam, u)
        return BoundReport(lam=lam, u=u, phi=phi.spec, estimates=estimates, best=best)
