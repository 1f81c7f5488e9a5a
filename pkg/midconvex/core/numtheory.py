"""
数论工具：欧拉函数、M_n 与 μ_n 轨道、λ 的 m/(2^j·n) 分解
"""
import logging
import math
from fractions import Fraction

from ..data_types import EulerSign, MuOrbit, ReducedLambda
from ..exceptions import InternalInvariantError, InvalidArgument

logger = logging.getLogger(__name__)


def gcd(a: int, b: int) -> int:
    """最大公约数，gcd(0, 0) = 0"""
    return math.gcd(a, b)


def factorize(n: int) -> dict[int, int]:
    """试除法分解 n ≥ 1，返回 {素数: 幂次}"""
    if n < 1:
        raise InvalidArgument(f"factorize 需要 n ≥ 1，得到 {n}")
    factors: dict[int, int] = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            factors[d] = factors.get(d, 0) + 1
            n //= d
        d += 1 if d == 2 else 2
    if n > 1:
        factors[n] = factors.get(n, 0) + 1
    return factors


def totient(n: int) -> int:
    """
    欧拉函数 φ(n)

    Examples:
        >>> totient(9)
        6
        >>> totient(15)
        8
    """
    result = n
    for p in factorize(n):
        result -= result // p
    return result


def _require_odd(n: int, minimum: int) -> None:
    if n % 2 == 0 or n < minimum:
        raise InvalidArgument(f"需要奇数 n ≥ {minimum}，得到 {n}")


def half_totient(n: int) -> int:
    """ℓ = ⌊φ(n)/2⌋；仅当 n = 1 时为 0"""
    _require_odd(n, 1)
    return totient(n) // 2


def residue_set(n: int) -> list[int]:
    """M_n = {m ∈ {1,…,(n−1)/2} : gcd(m, n) = 1}，升序"""
    _require_odd(n, 3)
    return [m for m in range(1, (n - 1) // 2 + 1) if math.gcd(m, n) == 1]


def _in_residue_set(n: int, m: int) -> bool:
    return 1 <= m <= (n - 1) // 2 and math.gcd(m, n) == 1


def mu(n: int, m: int) -> int:
    """μ_n(m) = min(2m, n − 2m)"""
    _require_odd(n, 3)
    if not _in_residue_set(n, m):
        raise InvalidArgument(f"{m} 不属于 M_{n}")
    return min(2 * m, n - 2 * m)


def mu_orbit(n: int, m: int) -> MuOrbit:
    """
    从 m 迭代 μ_n 直到首次回到 m，记录最小周期

    最小周期必须整除 ℓ = φ(n)/2，且 μ_n^ℓ(m) = m。
    """
    ell = half_totient(n)
    states = [m]
    current = mu(n, m)
    while current != m:
        if len(states) >= ell:
            raise InternalInvariantError(f"μ_{n} 从 {m} 出发在 ℓ={ell} 步内未返回")
        states.append(current)
        current = min(2 * current, n - 2 * current)
    period = len(states)
    if ell % period != 0:
        raise InternalInvariantError(f"μ_{n} 轨道周期 {period} 不整除 ℓ={ell}")
    return MuOrbit(n=n, start=m, states=states, period=period, half_totient=ell)


def multiplicative_order(a: int, n: int) -> int:
    """a 模 n 的乘法阶"""
    if n < 2 or math.gcd(a, n) != 1:
        raise InvalidArgument(f"需要 n ≥ 2 且 gcd(a, n) = 1，得到 a={a}, n={n}")
    order = totient(n)
    for p, e in factorize(order).items():
        for _ in range(e):
            if pow(a, order // p, n) == 1:
                order //= p
            else:
                break
    return order


def euler_sharpened_check(n: int, a: int) -> EulerSign:
    """判断 n | a^ℓ − 1 还是 n | a^ℓ + 1，其中 ℓ = φ(n)/2"""
    _require_odd(n, 3)
    if math.gcd(a, n) != 1:
        raise InvalidArgument(f"gcd({a}, {n}) ≠ 1")
    residue = pow(a, half_totient(n), n)
    minus = residue == 1
    plus = residue == n - 1
    if minus == plus:
        raise InternalInvariantError(f"{a}^ℓ mod {n} = {residue}，与 ±1 均不符")
    return EulerSign.DIVIDES_MINUS if minus else EulerSign.DIVIDES_PLUS


def reduce_lambda(lam: Fraction) -> ReducedLambda:
    """
    把 λ ∈ (0,1) 写成 m/(2^j·n)，n 为奇数

    Examples:
        >>> r = reduce_lambda(Fraction(1, 6))
        >>> (r.m, r.j, r.n)
        (1, 1, 3)
    """
    lam = Fraction(lam)
    if not 0 < lam < 1:
        raise InvalidArgument(f"λ 必须在 (0,1) 内，得到 {lam}")
    n = lam.denominator
    j = (n & -n).bit_length() - 1
    n >>= j
    return ReducedLambda(
        m=lam.numerator,
        j=j,
        n=n,
        value=lam,
        canonical=lam <= Fraction(1, 2),
    )
