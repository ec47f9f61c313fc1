"""Brute-force combinatorial oracles for the spectral-moment formulas.

Three independent routes are provided:

* weighted Motzkin-path enumeration driven by three-term recurrence
  coefficients (East at height k carries b_k, South-East carries lam_k),
* exhaustive enumeration of two-row bipartite matchings with a crossing
  statistic, summed as a generating function in q,
* the closed-form evaluations those enumerations must reproduce.

Everything here is exact (integers / rationals / integer-coefficient
polynomials in q) and intentionally naive; node caps keep runtimes
bounded.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Callable, Iterator, Sequence

from .errors import DomainError, ResourceLimitError
from .params import ModelParams
from .qarith import QPolynomial, q_binomial, q_factorial, q_int

DEFAULT_NODE_CAP = 10**8

EAST, NORTH_EAST, SOUTH_EAST = "E", "NE", "SE"


# ---------------------------------------------------------------------------
# Motzkin paths
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class MotzkinPath:
    """A lattice path in the first quadrant over steps {E, NE, SE}."""

    start_height: int
    steps: tuple[str, ...]

    def __post_init__(self):
        if self.start_height < 0:
            raise DomainError("start height must be nonnegative")
        h = self.start_height
        for s in self.steps:
            h += {EAST: 0, NORTH_EAST: 1, SOUTH_EAST: -1}[s]
            if h < 0:
                raise DomainError("path drops below height 0")

    @property
    def end_height(self) -> int:
        ups = self.steps.count(NORTH_EAST)
        downs = self.steps.count(SOUTH_EAST)
        return self.start_height + ups - downs


def _coeff(seq, k: int):
    return seq(k) if callable(seq) else seq[k]


def enumerate_motzkin_paths(p: int, j: int, node_cap: int = DEFAULT_NODE_CAP
                            ) -> Iterator[MotzkinPath]:
    """Yield every path of length p from height j back to height j."""
    visited = 0
    stack: list[str] = []

    def rec(h: int, remaining: int):
        nonlocal visited
        visited += 1
        if visited > node_cap:
            raise ResourceLimitError(f"Motzkin enumeration exceeded {node_cap} nodes")
        if remaining == 0:
            if h == j:
                yield MotzkinPath(j, tuple(stack))
            return
        if abs(h - j) > remaining:
            return
        for step, dh in ((EAST, 0), (NORTH_EAST, 1), (SOUTH_EAST, -1)):
            nh = h + dh
            if nh < 0:
                continue
            stack.append(step)
            yield from rec(nh, remaining - 1)
            stack.pop()

    yield from rec(j, p)


def motzkin_weight_sum(p: int, j: int,
                       b_seq: Sequence | Callable[[int], object],
                       lam_seq: Sequence | Callable[[int], object],
                       node_cap: int = DEFAULT_NODE_CAP):
    """Total weight of Mot_{p,j,j} under (b, lam) step weights.

    East at height k weighs b_k, South-East at height k weighs lam_k,
    North-East weighs 1.  Exhaustive depth-first enumeration, exact when
    the coefficients are exact.
    """
    visited = 0
    total = None

    def rec(h: int, remaining: int, weight):
        nonlocal visited, total
        visited += 1
        if visited > node_cap:
            raise ResourceLimitError(f"Motzkin enumeration exceeded {node_cap} nodes")
        if remaining == 0:
            if h == j:
                total = weight if total is None else total + weight
            return
        if abs(h - j) > remaining:
            return
        rec(h, remaining - 1, weight * _coeff(b_seq, h))
        rec(h + 1, remaining - 1, weight)
        if h >= 1:
            rec(h - 1, remaining - 1, weight * _coeff(lam_seq, h))

    rec(j, p, 1)
    return 0 if total is None else total


def laguerre_coeffs(kind: str, n: int, params: ModelParams):
    """Three-term recurrence coefficients at index n.

    classical      -> (b_n, lam_n) = (2n + alpha + 1, n (n + alpha))
    q-monic        -> (b_n, lam_n) for the monic family on the moment scale
    q-normalized   -> (b_n, a_n) for the orthonormal family on (0, 1)
    """
    alpha, q = params.alpha, params.q
    if kind == "classical":
        return (2 * n + alpha + 1, n * (n + alpha))
    if kind == "q-monic":
        if q == 1:
            return (2 * n + alpha + 1, n * (n + alpha))
        b = q**n * q_int_real(n + alpha + 1, q) + q ** (n + alpha) * q_int_real(n, q)
        lam = q ** (2 * n + alpha - 1) * q_int_real(n, q) * q_int_real(n + alpha, q)
        return (b, lam)
    if kind == "q-normalized":
        if q == 1:
            raise DomainError("q-normalized coefficients need q < 1")
        fq = float(q)
        qn = fq**n
        qna = fq ** (n + alpha)
        b = qn * (1.0 - qna * fq) + qna * (1.0 - qn)
        a = qn * math.sqrt(fq ** (alpha - 1) * (1.0 - qn) * (1.0 - qna))
        return (b, a)
    raise DomainError(f"unknown coefficient kind {kind!r}")


def q_int_real(n, q):
    """[n]_q for possibly non-integer n: (1 - q^n)/(1 - q)."""
    if q == 1:
        return n
    if isinstance(q, (int, Fraction)) and isinstance(n, int) and n >= 0:
        return q_int(n, q)
    return (1.0 - float(q) ** n) / (1.0 - float(q))


# ---------------------------------------------------------------------------
# Bipartite matchings and the crossing statistic
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class BipartiteMatching:
    """Two-row matching on (alpha + j + p) top and (j + p) bottom vertices.

    Vertices are 1-indexed left to right; the first alpha + j top and
    the first j bottom vertices are the negative ones.  Edges join a top
    vertex to a bottom vertex, no vertex twice, and no edge joins a
    negative top to a negative bottom.
    """

    p: int
    j: int
    alpha: int
    edges: frozenset = field(default_factory=frozenset)

    def __post_init__(self):
        n_top = self.alpha + self.j + self.p
        n_bot = self.j + self.p
        tops = [a for a, _ in self.edges]
        bots = [b for _, b in self.edges]
        if len(set(tops)) != len(tops) or len(set(bots)) != len(bots):
            raise DomainError("a vertex belongs to two edges")
        for a, b in self.edges:
            if not (1 <= a <= n_top and 1 <= b <= n_bot):
                raise DomainError(f"edge ({a},{b}) out of range")
            if a <= self.alpha + self.j and b <= self.j:
                raise DomainError(f"edge ({a},{b}) joins two negative vertices")

    @property
    def n_top(self) -> int:
        return self.alpha + self.j + self.p

    @property
    def n_bottom(self) -> int:
        return self.j + self.p


def crossing_number(m: BipartiteMatching) -> int:
    """Crossings of a matching: edge pairs in reversed order, plus each
    edge against every isolated vertex strictly left of its endpoint in
    the same row."""
    edges = sorted(m.edges)
    matched_top = {a for a, _ in edges}
    matched_bot = {b for _, b in edges}
    iso_top = [v for v in range(1, m.n_top + 1) if v not in matched_top]
    iso_bot = [v for v in range(1, m.n_bottom + 1) if v not in matched_bot]
    cr = 0
    for i, (a, b) in enumerate(edges):
        for (c, d) in edges[i + 1:]:
            if (a - c) * (b - d) < 0:
                cr += 1
        cr += sum(1 for v in iso_top if v < a)
        cr += sum(1 for v in iso_bot if v < b)
    return cr


def enumerate_matchings(p: int, j: int, alpha: int, t: int,
                        node_cap: int = DEFAULT_NODE_CAP
                        ) -> Iterator[BipartiteMatching]:
    """Yield every matching with exactly t edges, in lexicographic order
    of (matched top set, matched bottom set, partner assignment)."""
    if t > p + j or t > p + alpha + j:
        return
    n_top = alpha + j + p
    n_bot = j + p
    n_tneg = alpha + j
    n_bneg = j
    visited = 0
    for top_set in combinations(range(1, n_top + 1), t):
        for bot_set in combinations(range(1, n_bot + 1), t):
            # assign partners to tops in sorted order
            def rec(i: int, remaining: tuple, acc: list):
                nonlocal visited
                visited += 1
                if visited > node_cap:
                    raise ResourceLimitError(
                        f"matching enumeration exceeded {node_cap} nodes")
                if i == t:
                    yield BipartiteMatching(p, j, alpha, frozenset(acc))
                    return
                a = top_set[i]
                for b in remaining:
                    if a <= n_tneg and b <= n_bneg:
                        continue
                    acc.append((a, b))
                    rest = tuple(x for x in remaining if x != b)
                    yield from rec(i + 1, rest, acc)
                    acc.pop()

            yield from rec(0, bot_set, [])


def crossing_gf(p: int, j: int, alpha: int, t: int, q=None,
                node_cap: int = DEFAULT_NODE_CAP):
    """sum over matchings with t edges of q^crossing, by enumeration.

    With q=None the exact generating polynomial is returned; otherwise
    it is evaluated at q (exact for rational q).

    The enumeration walks (matched top set, matched bottom set, partner
    permutation) and accumulates the crossing count incrementally: the
    isolated-vertex crossings depend only on the matched sets, and each
    partner choice adds the number of already-placed partners to its
    right.  Agreement with :func:`crossing_number` on explicit matchings
    is covered by tests.
    """
    coeffs = [0] * (1 + max_crossing_bound(p, j, alpha, t))
    if t > p + j or t > p + alpha + j or t < 0:
        return QPolynomial(coeffs) if q is None else 0
    n_top = alpha + j + p
    n_bot = j + p
    n_tneg = alpha + j
    n_bneg = j
    budget = node_cap

    tops = list(combinations(range(1, n_top + 1), t))
    bots = list(combinations(range(1, n_bot + 1), t))
    top_info = [(sum(a - 1 - i for i, a in enumerate(ts)),
                 sum(1 for a in ts if a <= n_tneg)) for ts in tops]
    bot_info = [(sum(b - 1 - i for i, b in enumerate(bs)),
                 sum(1 for b in bs if b <= n_bneg)) for bs in bots]

    def rec(depth: int, used: int, inv: int, base: int, r_t: int, r_b: int):
        nonlocal budget
        budget -= 1
        if budget < 0:
            raise ResourceLimitError(f"matching enumeration exceeded {node_cap} nodes")
        if depth == t:
            coeffs[base + inv] += 1
            return
        # ranks < r_b sit on the negative bottom side and are unavailable
        # to the first r_t tops, which sit on the negative top side
        lo = r_b if depth < r_t else 0
        for r in range(lo, t):
            bit = 1 << r
            if not used & bit:
                rec(depth + 1, used | bit, inv + (used >> (r + 1)).bit_count(),
                    base, r_t, r_b)

    for base_t, r_t in top_info:
        for base_b, r_b in bot_info:
            rec(0, 0, 0, base_t + base_b, r_t, r_b)

    poly = QPolynomial(coeffs)
    return poly if q is None else poly(q)


def max_crossing_bound(p: int, j: int, alpha: int, t: int) -> int:
    """Coarse upper bound on the crossing count of a t-edge matching."""
    n_top = alpha + j + p
    n_bot = j + p
    return t * (t - 1) // 2 + t * (n_top - t) + t * (n_bot - t)


def crossing_gf_closed(p: int, j: int, alpha: int, q):
    """Closed form for the full-edge (t = p) crossing generating function:
    [p]_q! * sum_i q^{(p-i)(alpha-i) + p j} [p,i]_q [alpha+j,i]_q [p-i+j,j]_q."""
    total = Fraction(0) if isinstance(q, (int, Fraction)) else 0.0
    for i in range(p + 1):
        term = q_binomial(p, i, q) * q_binomial(alpha + j, i, q) \
            * q_binomial(p - i + j, j, q)
        if term == 0:
            continue
        e = (p - i) * (alpha - i) + p * j
        total += q**e * term
    return q_factorial(p, q) * total


def matching_count_closed(p: int, j: int, alpha: int) -> int:
    """Number of full-edge matchings: p! * sum_i C(p,i) C(alpha+j,i) C(p-i+j,j)."""
    return math.factorial(p) * sum(
        math.comb(p, i) * math.comb(alpha + j, i) * math.comb(p - i + j, j)
        for i in range(p + 1)
    )
