"""Independent reference computations.

These are deliberately naive (series, enumeration, cofactor expansion) and
share no code with the production paths they are used to check. Running the
module prints the zeta'(-1) reproduction that backs the baked-in constant::

    python -m widomkit.oracles
"""

from __future__ import annotations

import math
from fractions import Fraction

__all__ = [
    "zeta_prime_minus_one_oracle",
    "airy_maclaurin",
    "cofactor_det",
    "brute_force_lis",
    "single_particle_series",
    "poisson_pmf",
]

# B_4, B_6, ..., B_14
_BERNOULLI = {
    4: Fraction(-1, 30),
    6: Fraction(1, 42),
    8: Fraction(-1, 30),
    10: Fraction(5, 66),
    12: Fraction(-691, 2730),
    14: Fraction(7, 6),
}


def zeta_prime_minus_one_oracle(n: int = 16) -> float:
    """zeta'(-1) via Glaisher-Kinkelin, zeta'(-1) = 1/12 - ln A.

    ln A is obtained from the hyperfactorial sum_{k<=n} k ln k and its
    Euler-Maclaurin expansion, carried to n^-12.
    """
    s = math.fsum(k * math.log(k) for k in range(2, n + 1))
    ln_n = math.log(n)
    ln_a = s - (n * n / 2.0 + n / 2.0 + 1.0 / 12.0) * ln_n + n * n / 4.0
    # remainder terms -B_2k / (2k (2k-1) (2k-2) n^(2k-2))
    for two_k, b in _BERNOULLI.items():
        ln_a += float(b) / (two_k * (two_k - 1) * (two_k - 2)) / n ** (two_k - 2)
    return 1.0 / 12.0 - ln_a


def airy_maclaurin(z: float, terms: int = 150) -> tuple[float, float]:
    """(Ai(z), Ai'(z)) from the Maclaurin series; cancellation limits it to about 1e-12 for |z| <= 3.

    Coefficients follow from Ai'' = z Ai: (n+2)(n+1) a_{n+2} = a_{n-1}.
    """
    a = [0.0] * (terms + 3)
    a[0] = 1.0 / (3.0 ** (2.0 / 3.0) * math.gamma(2.0 / 3.0))
    a[1] = -1.0 / (3.0 ** (1.0 / 3.0) * math.gamma(1.0 / 3.0))
    for n in range(1, terms + 1):
        a[n + 2] = a[n - 1] / ((n + 2) * (n + 1))
    value = math.fsum(a[n] * z**n for n in range(terms + 3))
    slope = math.fsum(n * a[n] * z ** (n - 1) for n in range(1, terms + 3))
    return value, slope


def cofactor_det(a) -> float:
    """Laplace expansion along the first row. Exponential cost; n <= 8."""
    rows = [list(map(float, r)) for r in a]
    n = len(rows)
    if n == 0:
        return 1.0
    if n == 1:
        return rows[0][0]
    total = 0.0
    for j in range(n):
        minor = [r[:j] + r[j + 1:] for r in rows[1:]]
        total += (-1) ** j * rows[0][j] * cofactor_det(minor)
    return total


def brute_force_lis(seq) -> int:
    """Longest strictly increasing subsequence by checking every subset."""
    seq = list(seq)
    best = 0
    for mask in range(1 << len(seq)):
        picked = [seq[i] for i in range(len(seq)) if mask >> i & 1]
        if len(picked) > best and all(u < v for u, v in zip(picked, picked[1:])):
            best = len(picked)
    return best


def single_particle_series(y: int, x: int, t: float, p: float, q: float, terms: int = 400) -> float:
    """One ASEP particle: P(y -> x at time t) by direct series summation.

    Rightward steps at rate p, leftward at rate q, so the displacement is a
    difference of independent Poisson counts:
    e^{-t} sum_k (pt)^{k+d} (qt)^k / ((k+d)! k!) with d = x - y.
    """
    d = x - y
    a, b = (p * t, q * t) if d >= 0 else (q * t, p * t)
    d = abs(d)
    # leading term a^d / d!, then ratio a b / ((k+d+1)(k+1))
    term = 1.0
    for j in range(1, d + 1):
        term *= a / j
    total = 0.0
    for k in range(terms):
        total += term
        term *= a * b / ((k + d + 1) * (k + 1))
        if term == 0.0:
            break
    return math.exp(-t) * total


def poisson_pmf(k: int, lam: float) -> float:
    if k < 0:
        return 0.0
    return math.exp(k * math.log(lam) - lam - math.lgamma(k + 1)) if lam > 0 else float(k == 0)


if __name__ == "__main__":
    value = zeta_prime_minus_one_oracle()
    print(f"zeta'(-1) oracle     = {value:.17g}")
    print(f"c0 sine = ln2/12+3z' = {math.log(2) / 12 + 3 * value:.17g}")
    print(f"c0 airy = ln2/24+z'  = {math.log(2) / 24 + value:.17g}")
