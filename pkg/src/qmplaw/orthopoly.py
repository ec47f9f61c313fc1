"""Little q-Laguerre (Wall) polynomials on the lattice {q^m}.

Covers recurrence tables for four normalisations, forward evaluation,
zeros via symmetric tridiagonal eigenvalues, Jackson q-integration with
a certified geometric tail bound, the determinantal one-point function
(summed over orthonormal polynomials in scaled arithmetic), Gaussian
quadrature from the Jacobi matrix, and the empirical zero measure.

Norms are kept in log scale throughout:

    h_n = (1-q) q^{(alpha+1) n} (q;q)_n / (q^{alpha+1};q)_n
          * (q;q)_inf / (q^{alpha+1};q)_inf.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from scipy.linalg import eigh_tridiagonal

from .combinatorics import laguerre_coeffs
from .errors import DomainError, EigensolveError, NonConvergentError
from .params import ModelParams
from .qarith import log_q_pochhammer_inf

KINDS = ("classical", "q-standard", "q-monic", "q-normalized")

_JACKSON_CAP = 500_000


# ---------------------------------------------------------------------------
# Recurrence tables
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class RecurrenceTable:
    """Coefficients and log-norms of one polynomial family up to n_max.

    ``off[n]`` holds lam_n for the monic kinds and a_n for the
    orthonormal kind; ``lead[n]`` is only populated for the q-standard
    kind, whose recurrence is not monic.
    """

    kind: str
    n_max: int
    params: ModelParams
    b: tuple
    off: tuple
    log_h: tuple
    lead: tuple | None = None


def log_norms(params: ModelParams, n_max: int) -> list[float]:
    """log h_n for n = 0..n_max (orthogonality norms of the standard kind)."""
    q, alpha = float(params.q), float(params.alpha)
    if not 0 < q < 1:
        raise DomainError("norms need q in (0, 1)")
    logq = math.log(q)
    const = math.log1p(-q) + log_q_pochhammer_inf(q, q) \
        - log_q_pochhammer_inf(math.exp((alpha + 1) * logq), q)
    out = []
    acc = 0.0
    for n in range(n_max + 1):
        out.append(const + (alpha + 1) * n * logq + acc)
        acc += math.log1p(-math.exp((n + 1) * logq))
        acc -= math.log1p(-math.exp((alpha + n + 1) * logq))
    return out


def build_recurrence(kind: str, n_max: int, params: ModelParams,
                     with_norms: bool = True) -> RecurrenceTable:
    """Tabulate recurrence coefficients (and norms, unless skipped)."""
    if kind not in KINDS:
        raise DomainError(f"kind must be one of {KINDS}, got {kind!r}")
    if params.alpha <= -1:
        raise DomainError("alpha must exceed -1")
    q, alpha = params.q, params.alpha
    lead = None
    if kind in ("classical", "q-monic"):
        pairs = [laguerre_coeffs(kind, n, params) for n in range(n_max + 1)]
        b = tuple(x for x, _ in pairs)
        off = tuple(x for _, x in pairs)
    elif kind == "q-normalized":
        pairs = [laguerre_coeffs(kind, n, params) for n in range(n_max + 1)]
        b = tuple(x for x, _ in pairs)
        off = tuple(x for _, x in pairs)
        # consistency: a_n^2 equals (1-q)^2 * lam_n of the monic kind
        for n in (1, min(2, n_max)):
            lam = laguerre_coeffs("q-monic", n, params)[1]
            if abs(off[n] ** 2 - float((1 - q) ** 2 * lam)) > 1e-12 * abs(off[n] ** 2):
                raise DomainError("normalized/monic coefficient mismatch")
    else:  # q-standard
        fq = float(q)
        a_par = fq ** float(alpha)
        b, off, lead = [], [], []
        for n in range(n_max + 1):
            qn = fq**n
            b.append(qn * (1 - a_par * qn * fq) + a_par * qn * (1 - qn))
            off.append(a_par * qn * (1 - qn))
            lead.append(qn * (1 - a_par * qn * fq))
        b, off, lead = tuple(b), tuple(off), tuple(lead)
    if kind == "classical":
        log_h = tuple(
            math.lgamma(n + float(alpha) + 1) - math.lgamma(n + 1)
            for n in range(n_max + 1)
        )
    elif with_norms:
        log_h = tuple(log_norms(params, n_max))
    else:
        log_h = ()
    return RecurrenceTable(kind, n_max, params, b, off, log_h, lead)


def eval_poly(n: int, x, table: RecurrenceTable):
    """Evaluate the degree-n family member by forward recurrence."""
    if n > table.n_max:
        raise DomainError(f"degree {n} exceeds table n_max {table.n_max}")
    if table.kind == "q-standard":
        return _eval_q_standard(n, x, table)
    if table.kind == "classical":
        # (n+1) L_{n+1} = (2n + alpha + 1 - x) L_n - (n + alpha) L_{n-1}
        alpha = table.params.alpha
        prev, cur = 0.0, 1.0
        for m in range(n):
            prev, cur = cur, ((table.b[m] - x) * cur - (m + alpha) * prev) / (m + 1)
        return cur
    if table.kind == "q-monic":
        prev, cur = 0, 1
        for m in range(n):
            prev, cur = cur, (x - table.b[m]) * cur - table.off[m] * prev
        return cur
    # q-normalized: x phi_m = a_{m+1} phi_{m+1} + b_m phi_m + a_m phi_{m-1}
    prev, cur = 0.0, math.exp(-0.5 * table.log_h[0])
    for m in range(n):
        prev, cur = cur, ((x - table.b[m]) * cur - (table.off[m] * prev if m else 0.0)) \
            / table.off[m + 1]
    return cur


def _eval_q_standard(n: int, x, table: RecurrenceTable):
    prev = 1
    if n == 0:
        return prev
    q, alpha = table.params.q, table.params.alpha
    cur = 1 - x / (1 - q ** (alpha + 1)) if table.params.exact \
        else 1.0 - x / (1.0 - float(q) ** float(alpha + 1))
    for m in range(1, n):
        A, B, C = table.lead[m], table.b[m], table.off[m]
        prev, cur = cur, ((B - x) * cur - C * prev) / A
    return cur


def little_q_laguerre(n: int, x, q, alpha):
    """p_n(x; q^alpha | q) with p_0 = 1, p_1 = 1 - x/(1 - q^{alpha+1}).

    Exact for rational inputs; mirrors the q-standard recurrence without
    needing a prebuilt table.
    """
    exact = isinstance(q, (int, Fraction)) and isinstance(x, (int, Fraction)) \
        and isinstance(alpha, int)
    if not exact:
        q, x, alpha = float(q), float(x), float(alpha)
    a_par = q**alpha
    prev = Fraction(1) if exact else 1.0
    if n == 0:
        return prev
    cur = 1 - x / (1 - a_par * q)
    for m in range(1, n):
        qm = q**m
        A = qm * (1 - a_par * qm * q)
        B = qm * (1 - a_par * qm * q) + a_par * qm * (1 - qm)
        C = a_par * qm * (1 - qm)
        prev, cur = cur, ((B - x) * cur - C * prev) / A
    return cur


def log_weight(x: float, params: ModelParams) -> float:
    """log of the lattice weight x^alpha (qx; q)_inf at a point of (0, 1]."""
    if not 0 < x <= 1:
        raise DomainError(f"weight needs x in (0, 1], got {x}")
    q, alpha = float(params.q), float(params.alpha)
    return alpha * math.log(x) + log_q_pochhammer_inf(q * x, q)


# ---------------------------------------------------------------------------
# Zeros
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ZeroSet:
    """Sorted zeros of the degree-n polynomial, all inside (0, 1)."""

    n: int
    zeros: np.ndarray
    params: ModelParams


def zeros(n: int, params: ModelParams, check_residuals: bool = True) -> ZeroSet:
    """Zeros of p_n as eigenvalues of the n x n Jacobi matrix.

    Each zero is certified by Sturm counts: the k-th value must bracket
    the k-th true eigenvalue within 1e-8 of the spectrum span.  (Forward
    evaluation of p_n at an interior zero is exponentially
    ill-conditioned, so a bracket certificate is the meaningful residual.)
    """
    if n < 1:
        raise DomainError("need degree n >= 1")
    table = build_recurrence("q-normalized", n, params, with_norms=False)
    diag = np.asarray(table.b[:n], dtype=float)
    offd = np.asarray(table.off[1:n], dtype=float)
    try:
        vals = eigh_tridiagonal(diag, offd, eigvals_only=True)
    except Exception as exc:  # LAPACK non-convergence
        raise EigensolveError(str(exc)) from exc
    vals = np.sort(vals)
    if check_residuals:
        span = max(vals[-1] - vals[0], 1e-300)
        delta = 1e-8 * span
        k = np.arange(n)
        lo_ok = sturm_count(vals - delta, diag, offd) <= k
        hi_ok = sturm_count(vals + delta, diag, offd) >= k + 1
        if not (np.all(lo_ok) and np.all(hi_ok)):
            bad = int(np.argmin(lo_ok & hi_ok))
            raise EigensolveError(
                f"zero {bad} not certified within {delta:.3e} by Sturm counts")
    return ZeroSet(n, vals, params)


def sturm_count(x: np.ndarray, diag: np.ndarray, offd: np.ndarray) -> np.ndarray:
    """Number of eigenvalues of the tridiagonal matrix strictly below each x,
    by the safeguarded LDL^T sign count; vectorised over x."""
    x = np.atleast_1d(np.asarray(x, dtype=float))
    tiny = 1e-300
    d = diag[0] - x
    count = (d < 0).astype(int)
    for i in range(1, len(diag)):
        d = np.where(np.abs(d) < tiny, -tiny, d)
        d = (diag[i] - x) - offd[i - 1] ** 2 / d
        count += d < 0
    return count


# ---------------------------------------------------------------------------
# Jackson q-integration
# ---------------------------------------------------------------------------

def jackson_integral(f, A: float, q: float, tol: float = 1e-12,
                     j_cap: int = _JACKSON_CAP) -> float:
    """(1-q) sum_j A q^j f(A q^j), truncated by a geometric tail bound.

    The tail after index J is bounded by A q^{J+1} sup_{i>J} |f|; the sup
    is estimated from a trailing window of samples, so integrands must
    stay bounded along the remaining lattice.
    """
    if not 0 < q < 1:
        raise NonConvergentError("Jackson integral needs q in (0, 1)")
    total = 0.0
    window: list[float] = []
    Aqj = A
    for j in range(j_cap):
        fv = f(Aqj)
        total += Aqj * fv
        window.append(abs(fv))
        if len(window) > 8:
            window.pop(0)
        tail = Aqj * q / (1.0) * max(window)
        if len(window) == 8 and tail < tol:
            return (1.0 - q) * total
        Aqj *= q
    raise NonConvergentError(f"no certified tail within {j_cap} lattice points")


def gauss_quadrature(n: int, params: ModelParams) -> tuple[np.ndarray, np.ndarray]:
    """Golub-Welsch nodes and weights for the lattice weight.

    Weights are v_{0k}^2 * mu_0 with mu_0 = h_0 = integral of the weight.
    """
    table = build_recurrence("q-normalized", n, params)
    diag = np.asarray(table.b[:n], dtype=float)
    offd = np.asarray(table.off[1:n], dtype=float)
    try:
        vals, vecs = eigh_tridiagonal(diag, offd)
    except Exception as exc:
        raise EigensolveError(str(exc)) from exc
    order = np.argsort(vals)
    mu0 = math.exp(table.log_h[0])
    return vals[order], (vecs[0, order] ** 2) * mu0


# ---------------------------------------------------------------------------
# One-point function and Jackson moments
# ---------------------------------------------------------------------------

def one_point_function(x: float, params: ModelParams, N: int | None = None) -> float:
    """Mean eigenvalue density sum_{j<N} p_j(x)^2 / h_j * weight(x).

    Orthonormal-polynomial recurrence with running rescaling keeps the
    partial sums representable for N in the thousands.
    """
    N = params.N if N is None else N
    table = build_recurrence("q-normalized", N, params)
    logw = log_weight(x, params)
    # phi_j = e^{offset/2} * f_j with f_0 = 1; offset soaks up 1/h_0 and
    # any rescaling, so no intermediate ever leaves double range
    offset = -table.log_h[0]
    prev, cur = 0.0, 1.0
    ssum = 1.0
    for m in range(N - 1):
        prev, cur = cur, ((x - table.b[m]) * cur
                          - (table.off[m] * prev if m else 0.0)) / table.off[m + 1]
        mag = max(abs(cur), abs(prev))
        if mag > 1e100 or 0.0 < mag < 1e-100:
            prev /= mag
            cur /= mag
            ssum /= mag * mag
            offset += 2.0 * math.log(mag)
        ssum += cur * cur
    return math.exp(offset + logw) * ssum if ssum > 0 else 0.0


def one_point_jackson_moment(p: int, params: ModelParams, N: int | None = None,
                             tol: float = 1e-10) -> float:
    """int x^p rho_N(x) d_q x over (0, 1]."""
    q = float(params.q)
    return jackson_integral(
        lambda x: x**p * one_point_function(x, params, N), 1.0, q, tol=tol)


def moment_via_jackson(p: int, j: int, params: ModelParams,
                       tol: float = 1e-12) -> float:
    """(1/h_j) int x^p p_j(x)^2 weight(x) d_q x via Jackson summation."""
    q = float(params.q)
    table = build_recurrence("q-standard", j, params)
    log_hj = log_norms(params, j)[j]

    def f(x: float) -> float:
        pj = eval_poly(j, x, table)
        return x**p * pj * pj * math.exp(log_weight(x, params) - log_hj)

    return jackson_integral(f, 1.0, q, tol=tol)


def jackson_moment_closed(p: int, j: int, params: ModelParams):
    """Closed-form value of the same Jackson moment:
    (1-q)^p q^{pj} [p]_q! sum_i q^{(p-i)(alpha-i)} [p,i][alpha+j,i][p-i+j,j]."""
    from .combinatorics import crossing_gf_closed
    alpha = params.alpha
    if not float(alpha).is_integer():
        raise DomainError("closed Jackson moment needs integer alpha")
    q = params.q
    return (1 - q) ** p * crossing_gf_closed(p, j, int(alpha), q)


# ---------------------------------------------------------------------------
# Empirical zero measure
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class EmpiricalZeroMeasure:
    """Uniform atoms of mass 1/n at the zeros of the degree-n polynomial."""

    zeros: np.ndarray

    @property
    def n(self) -> int:
        return len(self.zeros)

    def moment(self, p: int) -> float:
        return float(np.mean(self.zeros**p))

    def cdf(self, x) -> np.ndarray:
        return np.searchsorted(self.zeros, np.atleast_1d(x), side="right") / self.n

    def ks_distance(self, cdf_values_at_zeros: np.ndarray) -> float:
        """sup-distance against a continuous CDF evaluated at the atoms."""
        k = np.arange(1, self.n + 1) / self.n
        km = np.arange(0, self.n) / self.n
        f = np.asarray(cdf_values_at_zeros)
        return float(max(np.max(np.abs(f - k)), np.max(np.abs(f - km))))


def empirical_zero_measure(n: int, params: ModelParams) -> EmpiricalZeroMeasure:
    return EmpiricalZeroMeasure(zeros(n, params).zeros)
