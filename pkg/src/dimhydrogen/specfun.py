"""Special functions with exact or tightly controlled error.

Only integer dimensions occur, so Γ is needed at integer and half-integer
arguments alone and is built by recurrence from Γ(1) and Γ(1/2).  The Airy
function is evaluated from its Maclaurin series inside ``AIRY_SERIES_LIMIT``
and from the standard large-argument expansions outside.
"""

from dataclasses import dataclass
import math

import numpy as np

SQRT_PI = math.sqrt(math.pi)

# |x| at which Ai switches from the Maclaurin series to the asymptotic form.
AIRY_SERIES_LIMIT = 6.0

# Ai(0) and -Ai'(0)
_AI0 = 0.355028053887817239260
_AIP0 = 0.258819403792806798405

MAX_AIRY_ZERO = 10


@dataclass(frozen=True)
class HalfInteger:
    """A positive multiple of 1/2, stored as ``twice_value``."""

    twice_value: int

    def __post_init__(self):
        if int(self.twice_value) != self.twice_value or self.twice_value < 1:
            raise ValueError(f"twice_value must be a positive integer, got {self.twice_value!r}")

    @classmethod
    def from_value(cls, x):
        twice = 2 * x
        if twice != round(twice):
            raise ValueError(f"{x!r} is not a multiple of 1/2")
        return cls(int(round(twice)))

    @property
    def value(self):
        return self.twice_value / 2


def _as_half_integer(x):
    return x if isinstance(x, HalfInteger) else HalfInteger.from_value(x)


def gamma_half_integer(x):
    """Γ(x) for x in {1/2, 1, 3/2, ...} by the recurrence Γ(x+1) = xΓ(x).

    ``x`` may be a :class:`HalfInteger` or a number that is a multiple of 1/2.
    The product is accumulated in the same order for every argument, so
    ``gamma_half_integer(x + 1) == x * gamma_half_integer(x)`` holds bit for bit.
    """
    x = _as_half_integer(x)
    twice = x.twice_value
    if twice % 2:
        value, arg = SQRT_PI, 0.5
    else:
        value, arg = 1.0, 1.0
    while 2 * arg < twice:
        value = arg * value
        arg += 1.0
    return value


def sphere_surface_area(dimension):
    """Surface area of the unit (D-1)-sphere embedded in D dimensions."""
    if int(dimension) != dimension or dimension < 1:
        raise ValueError(f"dimension must be a positive integer, got {dimension!r}")
    dimension = int(dimension)
    return 2.0 * math.pi ** (dimension / 2) / gamma_half_integer(HalfInteger(dimension))


# ----------------------------------------------------------------------- Airy


def _airy_series(x):
    x3 = x * x * x
    f_term, g_term = 1.0, x
    f_sum, g_sum = f_term, g_term
    k = 0
    while True:
        k += 1
        f_term *= x3 / ((3 * k - 1) * (3 * k))
        g_term *= x3 / ((3 * k) * (3 * k + 1))
        f_sum += f_term
        g_sum += g_term
        if abs(f_term) + abs(g_term) < 1e-18 * (abs(f_sum) + abs(g_sum)) or k > 200:
            break
    return _AI0 * f_sum - _AIP0 * g_sum


def _asymptotic_coefficients(count):
    u = [1.0]
    for k in range(1, count):
        u.append(u[-1] * (6 * k - 5) * (6 * k - 3) * (6 * k - 1) / ((2 * k - 1) * 216 * k))
    return u


_U = _asymptotic_coefficients(60)


def _airy_asymptotic_negative(z):
    zeta = 2.0 / 3.0 * z ** 1.5
    p_sum, q_sum = 0.0, 0.0
    last = math.inf
    for k, u in enumerate(_U):
        term = u / zeta ** k
        if term > last:
            break
        last = term
        sign = -1.0 if (k // 2) % 2 else 1.0
        if k % 2 == 0:
            p_sum += sign * term
        else:
            q_sum += sign * term
    phase = zeta + math.pi / 4
    return (math.sin(phase) * p_sum - math.cos(phase) * q_sum) / (SQRT_PI * z ** 0.25)


def _airy_asymptotic_positive(x):
    zeta = 2.0 / 3.0 * x ** 1.5
    total = 0.0
    last = math.inf
    for k, u in enumerate(_U):
        term = u / zeta ** k
        if term > last:
            break
        last = term
        total += -term if k % 2 else term
    return math.exp(-zeta) * total / (2.0 * SQRT_PI * x ** 0.25)


def airy_ai(x):
    """Airy function Ai at a real argument (scalar or array)."""
    if np.ndim(x):
        return np.array([airy_ai(float(v)) for v in np.ravel(x)]).reshape(np.shape(x))
    x = float(x)
    if abs(x) <= AIRY_SERIES_LIMIT:
        return _airy_series(x)
    if x < 0:
        return _airy_asymptotic_negative(-x)
    return _airy_asymptotic_positive(x)


def airy_negative_zero(n):
    """The n-th zero a_n < 0 of Ai, 1 <= n <= 10, to about 1e-12 absolute."""
    if int(n) != n or not 1 <= n <= MAX_AIRY_ZERO:
        raise ValueError(f"Airy zero index must be in 1..{MAX_AIRY_ZERO}, got {n!r}")
    t = 3.0 * math.pi * (4 * n - 1) / 8.0
    guess = -t ** (2.0 / 3.0) * (1.0 + 5.0 / (48.0 * t * t))
    lo, hi = guess - 0.2, guess + 0.2
    f_lo, f_hi = airy_ai(lo), airy_ai(hi)
    if f_lo * f_hi > 0:
        raise ArithmeticError(f"failed to bracket Airy zero {n}")
    while hi - lo > 1e-13:
        mid = 0.5 * (lo + hi)
        f_mid = airy_ai(mid)
        if f_mid == 0.0:
            return mid
        if (f_mid < 0) == (f_lo < 0):
            lo, f_lo = mid, f_mid
        else:
            hi = mid
    return 0.5 * (lo + hi)
