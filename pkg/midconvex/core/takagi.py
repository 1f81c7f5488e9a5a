"""
Takagi 型函数 T_ψ(λ) = Σ 2^{-k} ψ(d_Z(2^k λ))

- 有理 λ 的有限闭式（预周期 j 项 + 长度 ℓ 的循环块）
- 基于最小周期的独立求和（用作闭式的对照）
- 带余项上界的截断级数
- 函数方程 f(λ) = ½f(2λ) + ψ(λ) 的压缩迭代求解
"""
import logging
import math
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Optional, Sequence, Union

import numpy as np

from .dyadic import dz, orbit
from .numtheory import half_totient, reduce_lambda
from ..data_types import (
    ClosedFormSource,
    DyadicOrbit,
    GridFunction,
    PsiFunction,
    TakagiClosedForm,
    TakagiTerm,
)
from ..exceptions import InternalInvariantError, InvalidArgument

logger = logging.getLogger(__name__)

Real = Union[Fraction, float]
PsiLike = Union[PsiFunction, Callable[[Fraction], Real]]


def denominator_order(lam: Fraction) -> int:
    """⟨λ⟩ = min{m ∈ N : mλ ∈ Z}，即约分后的分母"""
    return Fraction(lam).denominator


def _is_exact(value) -> bool:
    return isinstance(value, (Fraction, int))


def _exact_dot(weights: Sequence[Fraction], values: Sequence[Fraction]) -> Fraction:
    """
    Σ w_i·v_i，在公共分母上做整数累加

    闭式中权重与 ψ 值的分母只有少数几种，乘数按分母缓存。
    """
    weights = [Fraction(w) for w in weights]
    values = [Fraction(v) for v in values]
    w_den = math.lcm(*{w.denominator for w in weights}) if weights else 1
    v_den = math.lcm(*{v.denominator for v in values}) if values else 1
    w_scale = {d: w_den // d for d in {w.denominator for w in weights}}
    v_scale = {d: v_den // d for d in {v.denominator for v in values}}
    total = sum(
        w.numerator * w_scale[w.denominator] * v.numerator * v_scale[v.denominator]
        for w, v in zip(weights, values)
    )
    return Fraction(total, w_den * v_den)


@lru_cache(maxsize=4096)
def _closed_form_cached(lam: Fraction, keep_zero: bool) -> TakagiClosedForm:
    if lam in (0, 1):
        terms = [TakagiTerm(weight=Fraction(2), scale=Fraction(0))] if keep_zero else []
        return TakagiClosedForm(lam=lam, terms=terms, source=ClosedFormSource.ZERO_ENDPOINT)

    canonical = min(lam, 1 - lam)
    reduced = reduce_lambda(canonical)
    orb = orbit(reduced)
    j, n = reduced.j, reduced.n
    ell = half_totient(n)

    terms = [TakagiTerm(weight=Fraction(1, 1 << k), scale=orb.preperiod[k]) for k in range(j)]
    denominator = (1 << ell) - 1
    for i in range(ell):
        # 1/(2^k − 2^{k−ℓ}) = 2^{ℓ−k}/(2^ℓ − 1)，k = j + i
        k = j + i
        weight = Fraction(1 << (ell - k), denominator) if k <= ell else Fraction(1, (1 << (k - ell)) * denominator)
        terms.append(TakagiTerm(weight=weight, scale=orb.cycle[i % orb.minimal_period]))
    if n == 1 and keep_zero:
        terms.append(TakagiTerm(weight=Fraction(2, 1 << j), scale=Fraction(0)))
    if not keep_zero:
        terms = [t for t in terms if t.scale != 0]

    form = TakagiClosedForm(
        lam=lam,
        reduced=reduced,
        terms=terms,
        source=ClosedFormSource.CYCLE_BLOCK,
        preperiod_length=j,
        block_length=ell,
    )
    squares = eval_closed(form, lambda t: t * t)
    if squares != lam * (1 - lam):
        raise InternalInvariantError(f"λ={lam}: Σ weight·scale² = {squares} ≠ λ(1−λ)")
    logger.debug("closed form λ=%s: %d terms (j=%d, ℓ=%d)", lam, len(terms), j, ell)
    return form


def closed_form(lam: Fraction, keep_zero: bool = False) -> TakagiClosedForm:
    """
    有理 λ ∈ [0,1] 的闭式

    λ = m/(2^j n) 时给出 j 个权重 2^{-k} 的项和 ℓ = φ(n)/2 个权重
    1/(2^k − 2^{k−ℓ}) 的项，scale 为 d_Z(2^k λ)。λ > 1/2 先换成 1 − λ
    （d_Z(2^k λ) = d_Z(2^k(1−λ))）。scale 为 0 的项默认丢弃。

    Examples:
        >>> closed_form(Fraction(1, 5)).pairs()
        [(Fraction(4, 3), Fraction(1, 5)), (Fraction(2, 3), Fraction(2, 5))]
    """
    lam = Fraction(lam)
    if not 0 <= lam <= 1:
        raise InvalidArgument(f"λ 必须在 [0,1] 内，得到 {lam}")
    return _closed_form_cached(lam, keep_zero)


def eval_closed(form: TakagiClosedForm, psi_star: PsiLike) -> Real:
    """Σ weight·ψ*(scale)，逐项取 form.terms 中的权重；ψ* 在有理数上精确时结果精确"""
    weights = [t.weight for t in form.terms]
    values = [psi_star(t.scale) for t in form.terms]
    if all(_is_exact(v) for v in values):
        return _exact_dot(weights, values)
    return sum(float(w) * float(v) for w, v in zip(weights, values))


def orbit_series(orb: DyadicOrbit, psi: PsiLike) -> Real:
    """
    Σ_k 2^{-k} ψ(d_Z(2^k λ))，由最小周期 p 直接求和：

        Σ_{k<j} 2^{-k} ψ(pre_k) + 2^{-j}/(1 − 2^{-p}) · Σ_{i<p} 2^{-i} ψ(cyc_i)

    不经过闭式的权重，用作 eval_closed 的对照。
    """
    j, p = len(orb.preperiod), len(orb.cycle)
    head = [psi(s) for s in orb.preperiod]
    cycle = [psi(s) for s in orb.cycle]

    if not all(_is_exact(v) for v in head + cycle):
        head_sum = sum(float(v) * 2.0 ** -k for k, v in enumerate(head))
        cycle_sum = sum(float(v) * 2.0 ** -i for i, v in enumerate(cycle))
        return head_sum + cycle_sum * 2.0 ** -j / (1.0 - 2.0 ** -p)

    head = [Fraction(v) for v in head]
    cycle = [Fraction(v) for v in cycle]
    den = math.lcm(*{v.denominator for v in head + cycle})
    # 分子按 2 的幂移位累加：H/2^{j−1} 为预周期部分，C/2^{p−1} 为一个周期的部分和
    head_num = sum((v.numerator * (den // v.denominator)) << (j - 1 - k) for k, v in enumerate(head))
    cycle_num = sum((v.numerator * (den // v.denominator)) << (p - 1 - i) for i, v in enumerate(cycle))
    head_sum = Fraction(head_num, den << (j - 1)) if j else Fraction(0)
    return head_sum + Fraction(2 * cycle_num, (den << j) * ((1 << p) - 1))


def takagi_value(lam: Fraction, psi: PsiLike) -> Real:
    return eval_closed(closed_form(lam), psi)


def truncated_series(
    lam: Union[Fraction, float],
    psi: PsiLike,
    terms: int,
    order: Optional[int] = None,
) -> tuple[Real, Real]:
    """
    部分和 Σ_{k<terms} 2^{-k} ψ(d_Z(2^k λ)) 及余项上界

    Args:
        lam: Fraction 时精确计算；float 时按 binary64 计算
        psi: ψ
        terms: 项数 N ≥ 1
        order: ⟨λ⟩；λ 为 Fraction 时缺省取其分母

    Returns:
        (value, tail_bound)。有理 λ 的余项为 ⟨λ⟩²·2^{-(N+2)}·max_{1≤m≤⟨λ⟩}|ψ(1/m)|；
        浮点 λ 的余项为 2^{1−N}·sup|ψ|（sup 取在已出现的 scale 上）。
    """
    if terms < 1:
        raise InvalidArgument(f"terms 必须 ≥ 1，得到 {terms}")

    if isinstance(lam, float):
        d = dz(lam)
        value = 0.0
        seen = []
        for k in range(terms):
            psi_value = float(psi(d))
            seen.append(abs(psi_value))
            value += psi_value / 2.0 ** k
            d = dz(2 * d)
        return value, 2.0 ** (1 - terms) * max(seen)

    lam = Fraction(lam)
    if order is None:
        order = denominator_order(lam)
    r, q = lam.numerator % lam.denominator, lam.denominator
    r = min(r, q - r)
    values = []
    for _ in range(terms):
        values.append(psi(Fraction(r, q)))
        r = min(2 * r, q - 2 * r)
    if all(_is_exact(v) for v in values):
        acc = Fraction(0)
        for v in values:
            acc = 2 * acc + v
        value = acc / (1 << (terms - 1))
    else:
        value = sum(float(v) / 2.0 ** k for k, v in enumerate(values))

    if order == 1:
        # λ ∈ Z：所有 d_Z(2^k λ) = 0，级数恒为 0
        return value, Fraction(0)
    peak = max(abs(psi(Fraction(1, m))) for m in range(1, order + 1))
    if _is_exact(peak):
        return value, Fraction(order * order, 1 << (terms + 2)) * peak
    return value, order * order * 2.0 ** -(terms + 2) * float(peak)


def _psi_on_half_grid(psi: PsiLike, grid_exponent: int) -> np.ndarray:
    size = 1 << grid_exponent
    return np.array([float(psi(Fraction(i, size))) for i in range(size // 2 + 1)], dtype=float)


def _apply_operator(f: np.ndarray, psi_half: np.ndarray, grid_exponent: int) -> np.ndarray:
    size = 1 << grid_exponent
    half = size // 2
    lower = np.arange(half + 1)
    upper = np.arange(half + 1, size + 1)
    out = np.empty_like(f)
    # λ ≤ 1/2: ½f(2λ) + ψ(λ)；λ > 1/2: ½f(2λ−1) + ψ(1−λ)
    out[lower] = 0.5 * f[2 * lower] + psi_half[lower]
    out[upper] = 0.5 * f[2 * upper - size] + psi_half[size - upper]
    return out


def fixed_point_solve(psi: PsiLike, grid_exponent: int, iterations: int) -> GridFunction:
    """
    从零函数出发迭代算子 𝒯_ψ，求 T_ψ 在网格 {i·2^{-N}} 上的值

    𝒯_ψ 是 ½-压缩，I 次迭代后与 T_ψ 的 sup 距离 ≤ 2^{-I}·2·sup|ψ|。
    网格为二进网格，λ ↦ 2λ 与 λ ↦ 2λ − 1 都是精确的下标映射 i ↦ 2i, i ↦ 2i − 2^N。
    """
    if not isinstance(grid_exponent, int) or grid_exponent < 1:
        raise InvalidArgument(f"网格必须为二进网格 2^N + 1，N ≥ 1，得到 N={grid_exponent}")
    if iterations < 0:
        raise InvalidArgument(f"迭代次数必须非负，得到 {iterations}")
    psi_half = _psi_on_half_grid(psi, grid_exponent)
    if psi_half[0] != 0:
        raise InvalidArgument(f"需要 ψ(0) = 0，得到 {psi_half[0]}")
    f = np.zeros((1 << grid_exponent) + 1, dtype=float)
    for _ in range(iterations):
        f = _apply_operator(f, psi_half, grid_exponent)
    logger.debug("fixed point N=%d I=%d sup|ψ|=%g", grid_exponent, iterations, np.max(np.abs(psi_half)))
    return GridFunction(grid_exponent=grid_exponent, values=f)


def operator_defect(f: GridFunction, psi: PsiLike) -> np.ndarray:
    """逐点 |f(λ) − 𝒯_ψ f(λ)|"""
    psi_half = _psi_on_half_grid(psi, f.grid_exponent)
    return np.abs(f.values - _apply_operator(f.values, psi_half, f.grid_exponent))


def functional_equation_residual(f: GridFunction, psi: PsiLike) -> float:
    """max_λ |f(λ) − 𝒯_ψ f(λ)|"""
    return float(np.max(operator_defect(f, psi)))


def sample_grid(fn: Callable[[Fraction], Real], grid_exponent: int) -> GridFunction:
    size = 1 << grid_exponent
    values = np.array([float(fn(Fraction(i, size))) for i in range(size + 1)], dtype=float)
    return GridFunction(grid_exponent=grid_exponent, values=values)


def grid_distance(f: GridFunction, g: GridFunction) -> float:
    if f.grid_exponent != g.grid_exponent:
        raise InvalidArgument("网格不一致")
    return float(np.max(np.abs(f.values - g.values)))
