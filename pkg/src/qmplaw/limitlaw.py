"""The q-deformed Marchenko-Pastur law.

With s = exp(-lambda), the critical rate lambda_c solves
s (1 + s^c) = 1 and the support endpoints are

    a, b = ( sqrt(s (1 - s^{c+1})) -/+ sqrt(s^{c+1} (1 - s)) )^2.

Below lambda_c the law is a single band on (a, b).  Above lambda_c a
saturated region appears on (b, 1) where the density equals the hard
constraint 1/(lambda x).  Three evaluation routes are provided for the
band density (two closed arctan forms and a quadrature of the Stieltjes
inversion), plus CDF, Cauchy transform, the classical law recovered as
lambda -> 0, and the arcsine-mixture representation coming from the
recurrence-coefficient envelope.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import integrate, optimize

from .errors import DomainError, QuadratureError, RootBracketError

_CRITICAL_WINDOW = 1e-10

BAND, SATURATED, CRITICAL = "band", "saturated", "critical"


def lambda_crit(c: float) -> float:
    """Unique positive root of exp(-lam)(1 + exp(-c lam)) = 1."""
    if c < 0:
        raise DomainError(f"c must be nonnegative, got {c}")

    def f(lam: float) -> float:
        return math.exp(-lam) * (1.0 + math.exp(-c * lam)) - 1.0

    hi = 1.0
    while f(hi) > 0:
        hi *= 2.0
    lam = optimize.brentq(f, 1e-12, hi, xtol=1e-15, rtol=8.9e-16)
    for _ in range(4):  # Newton polish
        s = math.exp(-lam)
        sc = math.exp(-c * lam)
        df = -s * (1 + sc) - c * s * sc
        lam -= f(lam) / df
    return lam


@dataclass(frozen=True)
class LimitShape:
    """Geometry of the limiting law at given (lambda, c)."""

    lam: float
    c: float
    s: float
    lambda_c: float
    a: float
    b: float
    sat_end: float
    regime: str


def shape(lam: float, c: float) -> LimitShape:
    """Support endpoints, saturation endpoint and regime flag."""
    if lam <= 0:
        raise DomainError("shape needs lam > 0; the lam = 0 law is classical")
    if c < 0:
        raise DomainError(f"c must be nonnegative, got {c}")
    s = math.exp(-lam)
    sc1 = math.exp(-(c + 1.0) * lam)
    u = math.sqrt(s * (1.0 - sc1))
    v = math.sqrt(sc1 * (1.0 - s))
    a = (u - v) ** 2
    b = min((u + v) ** 2, 1.0)
    lc = lambda_crit(c)
    if abs(lam - lc) <= _CRITICAL_WINDOW:
        regime = CRITICAL
    elif lam > lc:
        regime = SATURATED
    else:
        regime = BAND
    sat_end = 1.0 if regime == SATURATED else b
    return LimitShape(lam, c, s, lc, a, b, sat_end, regime)


# ---------------------------------------------------------------------------
# Density: closed forms and the quadrature route
# ---------------------------------------------------------------------------

def density(x, lam: float, c: float):
    """Limiting density, factored arctan form (stable near the edges)."""
    if lam <= 0:
        raise DomainError("density needs lam > 0; use mp_density for lam = 0")
    sh = shape(lam, c)
    xs = np.atleast_1d(np.asarray(x, dtype=float))
    out = np.zeros_like(xs)
    band = (xs > sh.a) & (xs < sh.b)
    if np.any(band):
        xb = xs[band]
        r1 = np.sqrt(1.0 - xb)
        ra = math.sqrt(1.0 - sh.a)
        rb = math.sqrt(max(1.0 - sh.b, 0.0))
        core = np.sqrt((xb - sh.a) * (sh.b - xb))
        if sh.regime == SATURATED:
            arg = np.sqrt((xb - sh.a) / (sh.b - xb)) * (r1 + rb) / (r1 + ra)
        else:
            arg = core / ((r1 + ra) * (r1 + rb))
        out[band] = 2.0 / (math.pi * lam * xb) * np.arctan(arg)
    if sh.regime == SATURATED:
        sat = (xs >= sh.b) & (xs < 1.0)
        out[sat] = 1.0 / (lam * xs[sat])
    return out if np.ndim(x) else float(out[0])


def density_v0(x, lam: float, c: float):
    """Same law via the unfactored surd form (edge-cancellation prone)."""
    if lam <= 0:
        raise DomainError("density needs lam > 0")
    sh = shape(lam, c)
    xs = np.atleast_1d(np.asarray(x, dtype=float))
    out = np.zeros_like(xs)
    s, sc1 = sh.s, math.exp(-(c + 1.0) * lam)
    band = (xs > sh.a) & (xs < sh.b)
    if np.any(band):
        xb = xs[band]
        root = 2.0 * s * np.sqrt(math.exp(-c * lam) * (1.0 - xb))
        num = xb - s - sc1 + root
        den = s + sc1 + root - xb
        ratio = np.maximum(num, 0.0) / np.maximum(den, 1e-300)
        out[band] = 2.0 / (math.pi * lam * xb) * np.arctan(np.sqrt(ratio))
    if sh.regime == SATURATED:
        sat = (xs >= sh.b) & (xs < 1.0)
        out[sat] = 1.0 / (lam * xs[sat])
    return out if np.ndim(x) else float(out[0])


def x0_x1(x: float, lam: float, c: float) -> tuple[float, float]:
    """Center and half-width of the t-window of the Stieltjes inversion:
    roots of x^2 - 2(t + s^c t - 2 s^c t^2) x + t^2 (1 - s^c)^2."""
    if not 0 < x < 1:
        raise DomainError(f"x0_x1 needs x in (0,1), got {x}")
    sc = math.exp(-c * lam)
    den = (1.0 - sc) ** 2 + 4.0 * sc * x
    x0 = x * (1.0 + sc) / den
    x1 = 2.0 * x * math.sqrt(sc * (1.0 - x)) / den
    return x0, x1


def density_integral_rep(x: float, lam: float, c: float) -> float:
    """Quadrature route: (1/pi lambda sqrt((1-s^c)^2 + 4 s^c x)) times the
    arcsine-kernel t-integral over (max(x0-x1, s), x0+x1)."""
    if lam <= 0:
        raise DomainError("density needs lam > 0")
    if not 0 < x < 1:
        return 0.0
    s = math.exp(-lam)
    sc = math.exp(-c * lam)
    x0, x1 = x0_x1(x, lam, c)
    lo = max(x0 - x1, s)
    hi = x0 + x1
    if hi <= lo or x1 <= 0:
        return 0.0
    # t = x0 - x1 cos(phi) turns the square-root factors into a smooth kernel
    phi_hi = math.pi
    cos_lo = (x0 - lo) / x1
    phi_lo = math.acos(min(1.0, max(-1.0, cos_lo)))

    def integrand(phi: float) -> float:
        return 1.0 / (x0 - x1 * math.cos(phi))

    val, err = integrate.quad(integrand, phi_lo, phi_hi, epsabs=1e-12,
                              epsrel=1e-12, limit=200)
    if err > 1e-8:
        raise QuadratureError(f"density quadrature error {err:.2e}")
    pref = 1.0 / (math.pi * lam * math.sqrt((1.0 - sc) ** 2 + 4.0 * sc * x))
    return pref * val


# ---------------------------------------------------------------------------
# CDF and moments of the law
# ---------------------------------------------------------------------------

def _band_integral(f, lo: float, hi: float, sh: LimitShape,
                   epsabs: float = 1e-11) -> float:
    """int_lo^hi f(x) rho_band(x) dx with u^2-substitutions absorbing the
    square-root edges (and the 1/sqrt(x) hard edge when a = 0)."""
    lam, c = sh.lam, sh.c
    lo = max(lo, sh.a)
    hi = min(hi, sh.b)
    if hi <= lo:
        return 0.0
    mid = 0.5 * (lo + hi)
    total = 0.0
    # left piece: x = lo + u^2
    w = math.sqrt(mid - lo)
    val, err1 = integrate.quad(
        lambda u: 2.0 * u * f(lo + u * u) * density(lo + u * u, lam, c),
        0.0, w, epsabs=epsabs, epsrel=1e-11, limit=400)
    total += val
    # right piece: x = hi - u^2
    w = math.sqrt(hi - mid)
    val, err2 = integrate.quad(
        lambda u: 2.0 * u * f(hi - u * u) * density(hi - u * u, lam, c),
        0.0, w, epsabs=epsabs, epsrel=1e-11, limit=400)
    total += val
    if err1 + err2 > 1e-8:
        raise QuadratureError(f"band quadrature error {err1 + err2:.2e}")
    return total


def cdf(x, lam: float, c: float):
    """Distribution function of the limiting law; monotone by construction."""
    sh = shape(lam, c)
    xs = np.atleast_1d(np.asarray(x, dtype=float))
    out = np.empty_like(xs)
    for i, xi in enumerate(xs):
        if xi <= sh.a:
            out[i] = 0.0
        elif xi < sh.b:
            out[i] = _band_integral(lambda _: 1.0, sh.a, xi, sh)
        else:
            band_mass = _band_integral(lambda _: 1.0, sh.a, sh.b, sh)
            if sh.regime == SATURATED:
                out[i] = band_mass + (math.log(min(xi, 1.0)) - math.log(sh.b)) / lam
            else:
                out[i] = band_mass
        out[i] = min(max(out[i], 0.0), 1.0)
    return out if np.ndim(x) else float(out[0])


def law_moment(p: int, lam: float, c: float) -> float:
    """int x^p rho(x) dx by edge-adapted quadrature."""
    sh = shape(lam, c)
    total = _band_integral(lambda t: t**p, sh.a, sh.b, sh)
    if sh.regime == SATURATED:
        if p == 0:
            total += (0.0 - math.log(sh.b)) / lam
        else:
            total += (1.0 - sh.b**p) / (p * lam)
    return total


def cdf_values(xs_sorted: np.ndarray, lam: float, c: float) -> np.ndarray:
    """CDF at many sorted points via cumulative panel quadrature."""
    sh = shape(lam, c)
    xs = np.asarray(xs_sorted, dtype=float)
    out = np.zeros_like(xs)
    acc = 0.0
    prev = sh.a
    for i, xi in enumerate(xs):
        if xi <= sh.a:
            out[i] = 0.0
            continue
        ub = min(xi, sh.sat_end if sh.regime == SATURATED else sh.b)
        if ub > prev:
            if prev < sh.b:
                acc += _band_integral(lambda _: 1.0, prev, min(ub, sh.b), sh,
                                      epsabs=1e-12)
            if sh.regime == SATURATED and ub > sh.b:
                lo_sat = max(prev, sh.b)
                acc += (math.log(ub) - math.log(lo_sat)) / lam
            prev = ub
        out[i] = min(acc, 1.0)
    return out


# ---------------------------------------------------------------------------
# Cauchy transform
# ---------------------------------------------------------------------------

def cauchy_transform(z: complex, lam: float, c: float) -> complex:
    """g(z) = int rho(x)/(z - x) dx for z off the support."""
    sh = shape(lam, c)
    lo, hi = sh.a, sh.sat_end
    zr = complex(z)
    if lo <= zr.real <= hi and abs(zr.imag) == 0:
        raise DomainError(f"Cauchy transform evaluated on the support: {z}")
    re = _band_integral(lambda t: ((zr - t) ** -1).real, sh.a, sh.b, sh)
    im = _band_integral(lambda t: ((zr - t) ** -1).imag, sh.a, sh.b, sh)
    g = complex(re, im)
    if sh.regime == SATURATED:
        val, err = integrate.quad(
            lambda t: (1.0 / (lam * t) * ((zr - t) ** -1)).real, sh.b, 1.0,
            epsabs=1e-12, limit=200)
        vali, _ = integrate.quad(
            lambda t: (1.0 / (lam * t) * ((zr - t) ** -1)).imag, sh.b, 1.0,
            epsabs=1e-12, limit=200)
        g += complex(val, vali)
    return g


# ---------------------------------------------------------------------------
# Classical law and the arcsine mixture
# ---------------------------------------------------------------------------

def mp_density(x, c: float):
    """Marchenko-Pastur density with edges (sqrt(c+1) +/- 1)^2."""
    if c < 0:
        raise DomainError(f"c must be nonnegative, got {c}")
    xm = (math.sqrt(c + 1.0) - 1.0) ** 2
    xp = (math.sqrt(c + 1.0) + 1.0) ** 2
    xs = np.atleast_1d(np.asarray(x, dtype=float))
    out = np.zeros_like(xs)
    inside = (xs > xm) & (xs < xp)
    xi = xs[inside]
    out[inside] = np.sqrt((xp - xi) * (xi - xm)) / (2.0 * math.pi * xi)
    return out if np.ndim(x) else float(out[0])


def envelope_A(t: float, lam: float, c: float) -> float:
    """Limit of the off-diagonal recurrence coefficient along n/N -> t."""
    e = math.exp(-lam * t)
    return e * math.sqrt(math.exp(-c * lam) * (1.0 - e) * (1.0 - math.exp(-(c + t) * lam)))


def envelope_B(t: float, lam: float, c: float) -> float:
    """Limit of the diagonal recurrence coefficient along n/N -> t."""
    e = math.exp(-lam * t)
    ec = math.exp(-(c + t) * lam)
    return e * (1.0 - ec) + ec * (1.0 - e)


def arcsine_mixture_density(x: float, lam: float, c: float,
                            scan: int = 400) -> float:
    """Zero-distribution density: mixture over t in (0,1) of arcsine laws
    on [B(t) - 2A(t), B(t) + 2A(t)].

    The active t-window {t : |x - B| <= 2A} is located by a sign scan plus
    Brent refinement of 2A - |x - B|; interior window endpoints carry
    inverse-square-root integrable singularities removed by u^2
    substitutions.
    """
    if lam <= 0:
        raise DomainError("mixture needs lam > 0")
    if not 0 < x < 1:
        return 0.0

    def psi(t: float) -> float:
        return 2.0 * envelope_A(t, lam, c) - abs(x - envelope_B(t, lam, c))

    ts = np.linspace(0.0, 1.0, scan + 1)
    vals = np.array([psi(t) for t in ts])
    pos = vals > 0
    if not np.any(pos):
        return 0.0
    i_first = int(np.argmax(pos))
    i_last = scan - int(np.argmax(pos[::-1]))
    if i_first == 0:
        t_lo = 0.0
    else:
        try:
            t_lo = optimize.brentq(psi, ts[i_first - 1], ts[i_first], xtol=1e-15)
        except ValueError as exc:
            raise RootBracketError(str(exc)) from exc
    if i_last == scan:
        t_hi = 1.0
    else:
        try:
            t_hi = optimize.brentq(psi, ts[i_last], ts[i_last + 1], xtol=1e-15)
        except ValueError as exc:
            raise RootBracketError(str(exc)) from exc

    def kernel(t: float) -> float:
        A2 = 2.0 * envelope_A(t, lam, c)
        B = envelope_B(t, lam, c)
        sq = (B + A2 - x) * (x - B + A2)
        return 1.0 / math.sqrt(max(sq, 1e-300))

    mid = 0.5 * (t_lo + t_hi)
    total = 0.0
    # left half: interior endpoint -> u^2 substitution, boundary -> direct
    if t_lo > 0.0:
        w = math.sqrt(mid - t_lo)
        val, _ = integrate.quad(lambda u: 2.0 * u * kernel(t_lo + u * u), 0.0, w,
                                epsabs=1e-10, epsrel=1e-10, limit=400)
    else:
        val, _ = integrate.quad(kernel, t_lo, mid, epsabs=1e-10, epsrel=1e-10,
                                limit=400, points=[t_lo, mid])
    total += val
    if t_hi < 1.0:
        w = math.sqrt(t_hi - mid)
        val, _ = integrate.quad(lambda u: 2.0 * u * kernel(t_hi - u * u), 0.0, w,
                                epsabs=1e-10, epsrel=1e-10, limit=400)
    else:
        val, _ = integrate.quad(kernel, mid, t_hi, epsabs=1e-10, epsrel=1e-10,
                                limit=400, points=[mid, t_hi])
    total += val
    return total / math.pi
