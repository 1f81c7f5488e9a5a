"""
到最近整数的距离 d_Z 及其二倍迭代轨道
"""
import logging
from fractions import Fraction
from typing import Union

from .numtheory import half_totient, mu_orbit, reduce_lambda
from ..data_types import DyadicOrbit, ReducedLambda
from ..exceptions import InternalInvariantError, InvalidArgument

logger = logging.getLogger(__name__)

Scalar = Union[Fraction, float, int]


def dz(x: Scalar) -> Scalar:
    """
    d_Z(x) = dist(x, Z)，结果在 [0, 1/2] 内

    Fraction 输入精确计算；float 输入按 round-half-to-even 取最近整数。

    Examples:
        >>> dz(Fraction(7, 10))
        Fraction(3, 10)
        >>> dz(Fraction(-13, 5))
        Fraction(2, 5)
    """
    if isinstance(x, int):
        return Fraction(0)
    return abs(x - round(x))


def dz_double_identity_check(x: Scalar) -> bool:
    """d_Z(2x) = d_Z(2·d_Z(x)) = min(2·d_Z(x), 1 − 2·d_Z(x))"""
    d = dz(x)
    return dz(2 * x) == dz(2 * d) == min(2 * d, 1 - 2 * d)


def _residue(x: Fraction) -> tuple[int, int]:
    """x = a/q 时返回 (q·d_Z(x), q)"""
    q = x.denominator
    r = x.numerator % q
    return min(r, q - r), q


def dz_iterate(x: Scalar, k: int) -> Scalar:
    """
    d_Z(2^k x)，按 (d_Z ∘ (2 d_Z)^k)(x) 逐步计算，不构造 2^k x

    有理数路径只在固定分母 q 下迭代分子：r ↦ min(2r, q − 2r)。
    """
    if k < 0:
        raise InvalidArgument(f"k 必须非负，得到 {k}")
    if isinstance(x, float):
        d = dz(x)
        for _ in range(k):
            d = dz(2 * d)
        return d
    r, q = _residue(Fraction(x))
    for _ in range(k):
        r = min(2 * r, q - 2 * r)
    return Fraction(r, q)


def _iterate_residues(x: Fraction, count: int) -> list[int]:
    """前 count 个 q·d_Z(2^k x)"""
    r, q = _residue(x)
    out = []
    for _ in range(count):
        out.append(r)
        r = min(2 * r, q - 2 * r)
    return out


def orbit(lam: Union[ReducedLambda, Fraction]) -> DyadicOrbit:
    """
    序列 d_Z(2^k λ) 的预周期 + 循环表示

    前 j 项直接迭代；k ≥ j 的部分取 m' = n·d_Z(2^j λ) ∈ M_n，
    由 μ_n 轨道给出（m' 与 m 满足 n | m − m' 或 n | m + m'）。
    两条路径在 k ≤ j + 2ℓ 范围内交叉校验。
    """
    if not isinstance(lam, ReducedLambda):
        value = Fraction(lam)
        if value in (0, 1):
            return DyadicOrbit(value=value, preperiod=[], cycle=[Fraction(0)], minimal_period=1)
        lam = reduce_lambda(value)

    j, n = lam.j, lam.n
    preperiod = [dz_iterate(lam.value, k) for k in range(j)]
    if n == 1:
        cycle, period, ell = [Fraction(0)], 1, 0
    else:
        m_prime = dz_iterate(lam.value, j) * n
        mu = mu_orbit(n, int(m_prime))
        cycle = [Fraction(s, n) for s in mu.states]
        period, ell = mu.period, mu.half_totient

    horizon = j + 2 * max(ell, 1)
    q = lam.value.denominator
    direct = _iterate_residues(lam.value, horizon + 1)
    for k, r in enumerate(direct):
        expected = preperiod[k] if k < j else cycle[(k - j) % period]
        if Fraction(r, q) != expected:
            raise InternalInvariantError(
                f"λ={lam.value}: d_Z(2^{k}λ) 直接迭代得 {Fraction(r, q)}，μ_n 轨道得 {expected}"
            )
    logger.debug("orbit λ=%s j=%d n=%d period=%d ℓ=%d", lam.value, j, n, period, ell)
    return DyadicOrbit(
        value=lam.value,
        reduced=lam,
        preperiod=preperiod,
        cycle=cycle,
        minimal_period=period,
        half_totient=ell,
    )


def dyadic_orbit_values(lam: Union[DyadicOrbit, Fraction], count: int) -> list[Fraction]:
    """前 count 个 d_Z(2^k λ)"""
    orb = lam if isinstance(lam, DyadicOrbit) else orbit(Fraction(lam))
    j = len(orb.preperiod)
    return [
        orb.preperiod[k] if k < j else orb.cycle[(k - j) % orb.minimal_period]
        for k in range(count)
    ]
