"""Ensemble parameters for the q-deformed Laguerre unitary ensemble.

The ensemble is parametrised by a rate ``lam`` >= 0, an aspect slope
``c`` >= 0, a lattice offset ``d`` and the system size ``N``.  The
quantisation parameter and the weight exponent are derived as

    q = exp(-lam / N),        alpha = c * N + d,

and ``s = exp(-lam)`` is the value of q^N that controls the limit shape.
``lam = 0`` denotes the classical (q = 1) ensemble.

For exact rational work the alternative constructor
:meth:`ModelParams.from_q_alpha` stores a rational ``q`` and an integer
``alpha`` directly; the rate fields are then left as ``None``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import DomainError

Number = int | float | Fraction


@dataclass(frozen=True)
class ModelParams:
    """Immutable parameter bundle; all derived quantities are cached fields."""

    N: int
    q: Number
    alpha: Number
    lam: float | None = None
    c: float | None = None
    d: int | None = None

    def __post_init__(self):
        if self.N < 1:
            raise DomainError(f"N must be a positive integer, got {self.N}")
        if not (0 < self.q <= 1):
            raise DomainError(f"q must lie in (0, 1], got {self.q}")
        if self.alpha <= -1:
            raise DomainError(f"alpha must exceed -1, got {self.alpha}")

    @classmethod
    def from_rates(cls, lam: float, c: float, d: int, N: int) -> "ModelParams":
        if lam < 0:
            raise DomainError(f"lam must be nonnegative, got {lam}")
        if c < 0:
            raise DomainError(f"c must be nonnegative, got {c}")
        q = math.exp(-lam / N) if lam > 0 else 1
        return cls(N=N, q=q, alpha=c * N + d, lam=float(lam), c=float(c), d=d)

    @classmethod
    def from_q_alpha(cls, q: Number, alpha: Number, N: int = 1) -> "ModelParams":
        return cls(N=N, q=q, alpha=alpha)

    @property
    def s(self) -> float:
        """exp(-lam), i.e. q**N."""
        if self.lam is not None:
            return math.exp(-self.lam)
        return float(self.q) ** self.N

    @property
    def is_classical(self) -> bool:
        return self.q == 1

    @property
    def exact(self) -> bool:
        """True when q is rational and alpha integral, enabling exact paths."""
        return isinstance(self.q, (int, Fraction)) and (
            isinstance(self.alpha, int)
            or (isinstance(self.alpha, Fraction) and self.alpha.denominator == 1)
        )
