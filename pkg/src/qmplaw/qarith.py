"""q-arithmetic and the two classical special functions used downstream.

Exact paths: when ``q`` is a :class:`fractions.Fraction` (or int) every
finite q-quantity here is returned as an exact rational, and q-binomials
are additionally available as integer-coefficient polynomials in q
(:class:`QPolynomial`).  Float paths are plain double precision.

The infinite q-Pochhammer truncation rule lives here and is shared by
the orthogonal-polynomial norms and weights: the product over
``(1 - x q^j)`` is cut at the first index J with ``|x| q^J < tol*(1-q)``,
which bounds the dropped log-mass by ``tol / (1 - tol)``.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Sequence

import numpy as np
from scipy import integrate, special

from .errors import DomainError, NonConvergentError

_POCHHAMMER_TOL = 1e-15
_POCHHAMMER_CAP = 50_000_000


def _is_exact(*values) -> bool:
    return all(isinstance(v, (int, Fraction)) for v in values)


# ---------------------------------------------------------------------------
# q-integers, q-factorials, q-binomials
# ---------------------------------------------------------------------------

def q_int(n: int, q):
    """[n]_q = (1 - q^n) / (1 - q); equals n at q = 1."""
    if n < 0:
        raise DomainError(f"q-integer needs n >= 0, got {n}")
    if q == 1:
        return n
    if _is_exact(q):
        q = Fraction(q)
        return (1 - q**n) / (1 - q)
    return (1.0 - q**n) / (1.0 - q)


def q_factorial(n: int, q):
    """[n]_q! = prod_{m=1..n} [m]_q."""
    out = Fraction(1) if _is_exact(q) else 1.0
    for m in range(1, n + 1):
        out *= q_int(m, q)
    return out


def q_binomial(n: int, m: int, q):
    """Gaussian binomial [n choose m]_q; zero when m < 0 or m > n.

    Uses the short product over min(m, n - m) factors so large n stays
    cheap.  Exact for rational q, float otherwise.
    """
    if m < 0 or m > n:
        return Fraction(0) if _is_exact(q) else 0.0
    m = min(m, n - m)
    if q == 1:
        return math.comb(n, m)
    if _is_exact(q):
        q = Fraction(q)
        num = Fraction(1)
        den = Fraction(1)
        for k in range(1, m + 1):
            num *= 1 - q ** (n - m + k)
            den *= 1 - q**k
        return num / den
    out = 1.0
    for k in range(1, m + 1):
        out *= (1.0 - q ** (n - m + k)) / (1.0 - q**k)
    return out


def log_q_binomial(n: float, m: int, q: float) -> float:
    """log [n choose m]_q for real n >= m >= 0 and 0 < q < 1.

    Supports non-integer n (the exponent alpha + j); returns -inf when
    the q-binomial vanishes.
    """
    if m < 0 or n - m < -1e-12:
        return -math.inf
    logq = math.log(q)
    out = 0.0
    for k in range(1, m + 1):
        out += math.log1p(-math.exp((n - m + k) * logq))
        out -= math.log1p(-math.exp(k * logq))
    return out


# ---------------------------------------------------------------------------
# Integer-coefficient polynomials in q
# ---------------------------------------------------------------------------

class QPolynomial:
    """Polynomial in q with exact integer coefficients.

    coeffs[k] is the coefficient of q^k; trailing zeros are stripped so
    the zero polynomial has an empty coefficient list.
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Sequence[int] = ()):
        cs = list(coeffs)
        while cs and cs[-1] == 0:
            cs.pop()
        self.coeffs = cs

    @classmethod
    def monomial(cls, k: int, coeff: int = 1) -> "QPolynomial":
        return cls([0] * k + [coeff])

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    def __eq__(self, other) -> bool:
        if isinstance(other, QPolynomial):
            return self.coeffs == other.coeffs
        if isinstance(other, int):
            return self.coeffs == ([other] if other else [])
        return NotImplemented

    def __hash__(self):
        return hash(tuple(self.coeffs))

    def __add__(self, other: "QPolynomial") -> "QPolynomial":
        if isinstance(other, int):
            other = QPolynomial([other])
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for k, v in enumerate(b):
            out[k] += v
        return QPolynomial(out)

    __radd__ = __add__

    def __mul__(self, other) -> "QPolynomial":
        if isinstance(other, int):
            return QPolynomial([other * c for c in self.coeffs])
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1) if self and other else []
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
        return QPolynomial(out)

    __rmul__ = __mul__

    def shift(self, k: int) -> "QPolynomial":
        """Multiply by q^k."""
        if not self.coeffs:
            return QPolynomial()
        return QPolynomial([0] * k + self.coeffs)

    def __call__(self, q):
        acc = Fraction(0) if _is_exact(q) else 0.0
        for c in reversed(self.coeffs):
            acc = acc * q + c
        return acc

    def __repr__(self) -> str:
        return f"QPolynomial({self.coeffs})"


def q_binomial_poly(n: int, m: int) -> QPolynomial:
    """[n choose m]_q as a QPolynomial, via the Pascal recurrence."""
    if m < 0 or m > n:
        return QPolynomial()
    m = min(m, n - m)
    # row-by-row: [r choose k]_q = [r-1 choose k-1]_q + q^k [r-1 choose k]_q
    row = [QPolynomial([1])]
    for r in range(1, n + 1):
        new = [QPolynomial([1])]
        for k in range(1, min(r, m) + 1):
            prev_k = row[k] if k < len(row) else QPolynomial()
            new.append(row[k - 1] + prev_k.shift(k))
        row = new
    return row[m]


def q_factorial_poly(n: int) -> QPolynomial:
    """[n]_q! as a QPolynomial."""
    out = QPolynomial([1])
    for m in range(1, n + 1):
        out = out * QPolynomial([1] * m)
    return out


# ---------------------------------------------------------------------------
# q-Pochhammer symbols
# ---------------------------------------------------------------------------

def q_pochhammer(x, q, n=None, tol: float = _POCHHAMMER_TOL):
    """(x; q)_n = prod_{j=0..n-1} (1 - x q^j); n=None means n = infinity.

    The infinite product requires q < 1 and truncates once
    |x| q^J < tol*(1-q); the relative error of the result is then at
    most tol/(1-tol).
    """
    if n is not None and n is not math.inf:
        out = Fraction(1) if _is_exact(x, q) else 1.0
        xq = x
        for _ in range(int(n)):
            out *= 1 - xq
            xq = xq * q
        return out
    if q >= 1:
        raise NonConvergentError("infinite q-Pochhammer needs q < 1")
    if x == 0:
        return 1.0
    return math.exp(log_q_pochhammer_inf(float(x), float(q), tol))


def log_q_pochhammer_inf(x: float, q: float, tol: float = _POCHHAMMER_TOL) -> float:
    """log (x; q)_inf for x < 1, sharing the truncation rule above.

    The cut index J solves |x| q^J < tol*(1-q) in closed form and the
    partial products are summed vectorised, so q very close to 1 stays
    affordable.
    """
    if q >= 1:
        raise NonConvergentError("infinite q-Pochhammer needs q < 1")
    if x >= 1:
        raise DomainError(f"log (x;q)_inf needs x < 1, got x={x}")
    if x == 0:
        return 0.0
    cutoff = tol * (1.0 - q)
    if abs(x) < cutoff:
        return 0.0
    logq = math.log(q)
    J = int(math.ceil(math.log(cutoff / abs(x)) / logq))
    if J > _POCHHAMMER_CAP:
        raise NonConvergentError(
            f"q-Pochhammer truncation needs {J} factors, cap is {_POCHHAMMER_CAP}"
        )
    out = 0.0
    for start in range(0, J, 1_000_000):
        js = np.arange(start, min(start + 1_000_000, J))
        out += float(np.sum(np.log1p(-x * np.exp(js * logq))))
    return out


# ---------------------------------------------------------------------------
# Regularised incomplete beta and the dilogarithm
# ---------------------------------------------------------------------------

def incomplete_beta_reg(x: float, a: float, b: float) -> float:
    """I_x(a, b), the regularised incomplete beta function."""
    if not 0 <= x <= 1:
        raise DomainError(f"I_x(a,b) needs x in [0,1], got {x}")
    if a <= 0 or b <= 0:
        raise DomainError(f"I_x(a,b) needs a, b > 0, got a={a}, b={b}")
    return float(special.betainc(a, b, x))


def incomplete_beta_reg_quadrature(x: float, a: float, b: float) -> float:
    """Oracle route for I_x(a,b): adaptive quadrature of the defining integral."""
    if not 0 <= x <= 1:
        raise DomainError(f"I_x(a,b) needs x in [0,1], got {x}")
    if x == 0:
        return 0.0
    norm = math.gamma(a + b) / (math.gamma(a) * math.gamma(b))
    # u-substitutions absorb the endpoint power singularities when a,b < 1
    val, _ = integrate.quad(
        lambda t: t ** (a - 1) * (1 - t) ** (b - 1), 0, x,
        points=[0, x] if x < 1 else None, limit=200,
    )
    return norm * val


def dilog(x: float) -> float:
    """Li_2(x) = -int_0^x log(1-t)/t dt, for x <= 1."""
    if x > 1:
        raise DomainError(f"dilog is real only for x <= 1, got {x}")
    return float(special.spence(1.0 - x))


def dilog_quadrature(x: float) -> float:
    """Oracle route for Li_2: adaptive quadrature of the defining integral."""
    if x > 1:
        raise DomainError(f"dilog is real only for x <= 1, got {x}")
    if x == 0:
        return 0.0
    val, _ = integrate.quad(lambda t: -math.log1p(-t) / t, 0, x, limit=200)
    return val
