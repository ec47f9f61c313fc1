"""Spectral moments of the classical and q-deformed Laguerre unitary
ensembles, their large-N limits, and the c = 0 half-order correction.

The closed formula for the q-ensemble moment of order p is

    m_{N,p} = (1-q)^p [p]_q! * sum_{j<N} sum_{i<=p}
              q^{(p-i)(alpha-i) + p j} [p,i]_q [alpha+j,i]_q [p-i+j,j]_q,

evaluated exactly for rational q and in log space with exactly rounded
(fsum) accumulation otherwise.  The limiting moment per particle is

    M_p = (1/(lambda p)) * sum_m C(p,m) s^{c m} (1-s^c)^{p-m} I_{1-s}(m+1, p),

with s = exp(-lambda), cross-computable by an integral representation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

from scipy import integrate

from .errors import DomainError
from .params import ModelParams
from .qarith import incomplete_beta_reg, log_q_binomial, q_binomial, q_factorial


def lue_moment(N: int, p: int, alpha: int) -> int:
    """Exact integer moment of the classical Laguerre unitary ensemble:
    p! * sum_{j<N} sum_i C(p,i) C(alpha+j,i) C(p-i+j,j)."""
    return math.factorial(p) * sum(
        math.comb(p, i) * math.comb(alpha + j, i) * math.comb(p - i + j, j)
        for j in range(N)
        for i in range(p + 1)
    )


def _falling(x: int, k: int) -> int:
    out = 1
    for m in range(k):
        out *= x - m
    return out


def lue_moment_alt_forms(N: int, p: int, alpha: int) -> tuple[Fraction, Fraction]:
    """Two independent published evaluations of the classical moment,
    as exact rationals (used purely as cross-checks)."""
    if p == 0:
        return Fraction(N), Fraction(N)
    first = Fraction(0)
    for i in range(1, p + 1):
        term = Fraction(
            (-1) ** (i - 1) * _falling(N + alpha + p - i, p) * _falling(N + p - i, p),
            math.factorial(p - i) * math.factorial(i - 1),
        )
        first += term
    first /= p
    second = Fraction(0)
    for j in range((p - 1) // 2 + 1):
        second += Fraction(
            math.comb(N - 1, j) * math.comb(N + alpha - 1, j)
            * math.comb(2 * N + alpha + p - 2 * j - 2, p - 2 * j - 1),
            j + 1,
        )
    second *= N * (N + alpha) * math.factorial(p - 1)
    return first, second


def qlue_moment(params: ModelParams, p: int):
    """Spectral moment of order p of the q-ensemble.

    Exact rational for rational q with integer alpha; otherwise a
    log-space float evaluation with fsum accumulation.  q = 1 falls back
    to the classical sum (with real alpha supported via products).
    """
    if p < 0:
        raise DomainError("moment order must be nonnegative")
    N, q, alpha = params.N, params.q, params.alpha
    if p == 0:
        return N
    if q == 1:
        if isinstance(alpha, int) or float(alpha).is_integer():
            return lue_moment(N, p, int(alpha))
        return _lue_moment_real_alpha(N, p, float(alpha))
    if params.exact:
        return _qlue_moment_exact(N, p, int(alpha), Fraction(q))
    return _qlue_moment_float(N, p, float(alpha), float(q))


def _qlue_moment_exact(N: int, p: int, alpha: int, q: Fraction) -> Fraction:
    total = Fraction(0)
    for j in range(N):
        for i in range(p + 1):
            binoms = q_binomial(p, i, q) * q_binomial(alpha + j, i, q) \
                * q_binomial(p - i + j, j, q)
            if binoms == 0:
                continue
            total += q ** ((p - i) * (alpha - i) + p * j) * binoms
    return (1 - q) ** p * q_factorial(p, q) * total


def _qlue_moment_float(N: int, p: int, alpha: float, q: float) -> float:
    logq = math.log(q)
    # log prefactor (1-q)^p [p]_q! = prod_{m=1..p} (1-q^m)
    log_pref = sum(math.log1p(-math.exp(m * logq)) for m in range(1, p + 1))
    log_terms = []
    for j in range(N):
        for i in range(p + 1):
            # symmetric form keeps every q-binomial a short product
            lb = log_q_binomial(p, i, q) + log_q_binomial(alpha + j, i, q) \
                + log_q_binomial(p - i + j, p - i, q)
            if lb == -math.inf:
                continue
            log_terms.append(((p - i) * (alpha - i) + p * j) * logq + lb)
    if not log_terms:
        return 0.0
    top = max(log_terms)
    return math.exp(log_pref + top) * math.fsum(math.exp(t - top) for t in log_terms)


def _lue_moment_real_alpha(N: int, p: int, alpha: float) -> float:
    def binom_real(x: float, k: int) -> float:
        out = 1.0
        for m in range(k):
            out *= (x - m) / (k - m)
        return out

    return math.factorial(p) * math.fsum(
        math.comb(p, i) * binom_real(alpha + j, i) * math.comb(p - i + j, j)
        for j in range(N)
        for i in range(p + 1)
    )


def limit_moment(p: int, lam: float, c: float) -> float:
    """Limiting moment per particle M_p of the q-deformed law."""
    if lam < 0:
        raise DomainError(f"lam must be nonnegative, got {lam}")
    if p == 0:
        return 1.0
    if lam == 0:
        return 0.0
    s = math.exp(-lam)
    sc = math.exp(-c * lam)
    if sc == 1.0:
        # c = 0 collapses the sum to the m = p term (0^0 = 1)
        total = incomplete_beta_reg(1.0 - s, p + 1, p)
    else:
        total = math.fsum(
            math.comb(p, m) * sc**m * (1.0 - sc) ** (p - m)
            * incomplete_beta_reg(1.0 - s, m + 1, p)
            for m in range(p + 1)
        )
    return total / (lam * p)


def limit_moment_integral(p: int, lam: float, c: float) -> float:
    """Integral route for M_p:
    int_0^1 s^{pt} sum_i (1-s^{c+t})^i (s^c (1-s^t))^{p-i} C(p,i)^2 dt."""
    if lam <= 0:
        raise DomainError("integral route needs lam > 0")
    if p == 0:
        return 1.0
    s = math.exp(-lam)

    def integrand(t: float) -> float:
        st = s**t
        sct = s ** (c + t)
        return (s ** (p * t)) * math.fsum(
            math.comb(p, i) ** 2 * (1.0 - sct) ** i * (s**c * (1.0 - st)) ** (p - i)
            for i in range(p + 1)
        )

    val, _ = integrate.quad(integrand, 0.0, 1.0, epsabs=1e-13, epsrel=1e-13, limit=200)
    return val


def subleading_moment_c0(p: int, d: int, lam: float) -> float:
    """Half-order coefficient at c = 0:
    (1/2) I_{1-s}(p+1, p) + (d/2) C(2p, p) s^p (1-s)^p   (p >= 1)."""
    if p < 1:
        raise DomainError("half-order term is defined for p >= 1")
    s = math.exp(-lam)
    return 0.5 * incomplete_beta_reg(1.0 - s, p + 1, p) \
        + 0.5 * d * math.comb(2 * p, p) * (s * (1.0 - s)) ** p


def narayana(p: int, j: int) -> Fraction:
    """Narayana number N(p, j) = (1/p) C(p,j) C(p,j-1); zero at j = 0."""
    if p < 1 or j < 1 or j > p:
        return Fraction(0)
    return Fraction(math.comb(p, j) * math.comb(p, j - 1), p)


def classical_mp_moment(p: int, c: float):
    """Moments of the Marchenko-Pastur law: sum_j N(p,j) (1+c)^j; 1 at p=0."""
    if p == 0:
        return 1 if isinstance(c, (int, Fraction)) else 1.0
    return sum(narayana(p, j) * (1 + c) ** j for j in range(1, p + 1))


# ---------------------------------------------------------------------------
# Convergence probes
# ---------------------------------------------------------------------------

@dataclass
class MomentReport:
    """One row of a convergence probe at a given system size."""

    p: int
    N: int
    exact_value: float
    leading: float
    subleading: float | None = None
    residuals: dict = field(default_factory=dict)


def convergence_probe(p: int, lam: float, c: float, d: int,
                      N_list: list[int]) -> list[MomentReport]:
    """Compare finite-N moments against the limit (and, at c = 0, the
    half-order correction); attaches empirical decay rates."""
    if any(b <= a for a, b in zip(N_list, N_list[1:])):
        raise DomainError("N_list must be increasing")
    Mp = limit_moment(p, lam, c)
    reports = []
    for N in N_list:
        params = ModelParams.from_rates(lam, c, d, N)
        m = float(qlue_moment(params, p))
        res = {"leading_abs_err": abs(m / N - Mp)}
        sub = None
        if c == 0 and p >= 1:
            sub = subleading_moment_c0(p, d, lam)
            res["half_order_abs_err"] = abs(m - N * Mp - sub)
        reports.append(MomentReport(p, N, m, Mp, sub, res))
    _attach_rates(reports, "leading_abs_err")
    _attach_rates(reports, "half_order_abs_err")
    return reports


def _attach_rates(reports: list[MomentReport], key: str) -> None:
    for prev, cur in zip(reports, reports[1:]):
        if key not in prev.residuals or key not in cur.residuals:
            continue
        e0, e1 = prev.residuals[key], cur.residuals[key]
        if e0 > 0 and e1 > 0:
            rate = math.log(e0 / e1) / math.log(cur.N / prev.N)
            cur.residuals[key + "_rate"] = rate


def empirical_rates(reports: list[MomentReport], key: str = "leading_abs_err"
                    ) -> list[float]:
    return [r.residuals[key + "_rate"] for r in reports if key + "_rate" in r.residuals]
