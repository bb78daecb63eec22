"""Scalar special functions for the outage bounds and the Gaussian approximation.

All incomplete-gamma shapes occurring in this toolkit are positive integers, so
closed summation forms are used throughout; the small-argument branches switch
to all-positive tail series to avoid the cancellation the textbook
``1 - exp(-x) * sum`` form suffers when the result is tiny.
"""

from __future__ import annotations

import math

import numpy as np

_EPS = 1e-17


def _check_shape(a: int) -> int:
    if a != int(a) or a < 1:
        raise ValueError(f"integer shape a >= 1 required, got {a}")
    return int(a)


def _tail_series(x: float, a: int) -> float:
    """S = sum_{n>=0} x^n * a! / (a+n)!  (so that P(a,x) = x^a e^-x S / a!)."""
    term = 1.0
    total = 1.0
    n = 0
    while term > _EPS * total:
        n += 1
        term *= x / (a + n)
        total += term
        if n > 10_000:  # unreachable for x < a + 1
            break
    return total


def reg_lower_inc_gamma(x: float, a: int) -> float:
    """Regularized lower incomplete gamma 1/(a-1)! * integral_0^x t^(a-1) e^-t dt.

    Equals the CDF at x of a Gamma(a, 1) variable, i.e. of half a chi-square
    with 2a degrees of freedom.
    """
    a = _check_shape(a)
    if x < 0:
        raise ValueError(f"x >= 0 required, got {x}")
    if x == 0.0:
        return 0.0
    if x < a + 1:
        # tail form e^-x sum_{j>=a} x^j/j!: all positive, no cancellation
        log_lead = a * math.log(x) - math.lgamma(a + 1) - x
        return math.exp(log_lead) * _tail_series(x, a)
    acc = 0.0
    term = 1.0
    for j in range(a):
        if j > 0:
            term *= x / j
        acc += term
    return 1.0 - math.exp(-x) * acc


def log_reg_lower_inc_gamma(x: float, a: int) -> float:
    """log of reg_lower_inc_gamma, stable for arbitrarily small x > 0."""
    a = _check_shape(a)
    if x < 0:
        raise ValueError(f"x >= 0 required, got {x}")
    if x == 0.0:
        return -math.inf
    if x < a + 1:
        rest = _tail_series(x, a) - 1.0
        return a * math.log(x) - math.lgamma(a + 1) - x + math.log1p(rest)
    return math.log(reg_lower_inc_gamma(x, a))


def reg_lower_inc_gamma_ratio(x: float, a: int) -> float:
    """Density-to-mass ratio [x^(a-1) e^-x / (a-1)!] / reg_lower_inc_gamma(x, a).

    The logarithmic derivative of the regularized lower incomplete gamma in x;
    tends to a/x as x -> 0.
    """
    a = _check_shape(a)
    if x <= 0:
        raise ValueError(f"x > 0 required, got {x}")
    if x < a + 1:
        return a / (x * _tail_series(x, a))
    pdf = math.exp((a - 1) * math.log(x) - x - math.lgamma(a))
    return pdf / reg_lower_inc_gamma(x, a)


def gauss_q(x: float) -> float:
    """Standard normal tail probability Q(x) = integral_x^inf exp(-t^2/2)/sqrt(2 pi) dt."""
    return 0.5 * math.erfc(x / math.sqrt(2.0))


def _e1(x: float) -> float:
    """E_1(x) for x > 0: power series below 1, modified Lentz continued fraction above."""
    if x < 1.0:
        # E_1(x) = -gamma - ln x + sum_{k>=1} (-1)^(k+1) x^k / (k k!)
        total = -np.euler_gamma - math.log(x)
        term = 1.0
        for k in range(1, 60):
            term *= -x / k
            delta = -term / k
            total += delta
            if abs(delta) < _EPS * abs(total):
                break
        return total
    tiny = 1e-300
    b = x + 1.0
    c = 1.0 / tiny
    d = 1.0 / b
    h = d
    for i in range(1, 200):
        an = -float(i * i)
        b += 2.0
        d = 1.0 / (an * d + b)
        c = b + an / c
        delta = c * d
        h *= delta
        if abs(delta - 1.0) < _EPS:
            break
    return h * math.exp(-x)


def exp_integral_en(n: int, x: float) -> float:
    """Exponential integral E_n(x) = integral_1^inf e^(-x t) / t^n dt for x > 0, n >= 0."""
    if n != int(n) or n < 0:
        raise ValueError(f"integer n >= 0 required, got {n}")
    if x <= 0:
        raise ValueError(f"x > 0 required, got {x}")
    n = int(n)
    if n == 0:
        return math.exp(-x) / x
    value = _e1(x)
    emx = math.exp(-x)
    for j in range(1, n):
        value = (emx - x * value) / j
    return value


def upper_inc_gamma_int(a: int, z: float) -> float:
    """Upper incomplete gamma integral_z^inf t^(a-1) e^-t dt for integer a (any sign), z > 0."""
    if a != int(a):
        raise ValueError(f"integer a required, got {a}")
    if z <= 0:
        raise ValueError(f"z > 0 required, got {z}")
    a = int(a)
    if a >= 1:
        acc = 0.0
        term = 1.0
        for j in range(a):
            if j > 0:
                term *= z / j
            acc += term
        return math.factorial(a - 1) * math.exp(-z) * acc
    # descend from Gamma(0, z) = E_1(z) using Gamma(a, z) = (Gamma(a+1, z) - z^a e^-z) / a
    value = _e1(z)
    for b in range(-1, a - 1, -1):
        value = (value - z**b * math.exp(-z)) / b
    return value


def laguerre(n: int, alpha: int, x):
    """Generalized Laguerre polynomial L_n^alpha(x) by the three-term recurrence.

    Accepts scalar or ndarray x.
    """
    if n != int(n) or n < 0:
        raise ValueError(f"integer n >= 0 required, got {n}")
    if alpha != int(alpha) or alpha < 0:
        raise ValueError(f"integer alpha >= 0 required, got {alpha}")
    n, alpha = int(n), int(alpha)
    prev = np.ones_like(np.asarray(x, dtype=float)) if isinstance(x, np.ndarray) else 1.0
    if n == 0:
        return prev
    cur = 1.0 + alpha - x
    for i in range(1, n):
        prev, cur = cur, ((2 * i + 1 + alpha - x) * cur - (i + alpha) * prev) / (i + 1)
    return cur
