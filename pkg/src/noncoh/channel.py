"""Channel and input-distribution domain model.

The magnitude channel has Rayleigh-type transition density
f(y|x) = 2y/(x^2+sigma^2) exp(-y^2/(x^2+sigma^2)), and the input magnitude
is concentrated on {0, x2} with probabilities {1-a2, a2}.  The derived
quantities

    alpha = (x2^2/(x2^2+sigma^2)) * ((x^2+sigma^2)/sigma^2)
    beta  = (a2/(1-a2)) * (sigma^2/(x2^2+sigma^2))

select which closed-form route applies, and for beta < 1 the crossover
magnitude y* makes the two weighted conditional densities equal.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

from .errors import DegenerateInput, DomainError, MissingPowerBudget


class Case(enum.Enum):
    CASE_I = "CaseI"
    CASE_II = "CaseII"
    CASE_III = "CaseIII"
    ORACLE_FALLBACK = "OracleFallback"
    DEGENERATE = "Degenerate"


@dataclass(frozen=True)
class ChannelParams:
    """Noise power sigma^2 (natural units) and optional power budget P."""

    sigma2: float
    power_budget: float | None = None

    def __post_init__(self):
        if not self.sigma2 > 0.0:
            raise DomainError("sigma2 must be positive")
        if self.power_budget is not None and not self.power_budget > 0.0:
            raise DomainError("power_budget must be positive when present")


@dataclass(frozen=True)
class TwoPointInput:
    """Discrete input magnitude law: mass a2 at x2 > 0, mass 1-a2 at 0."""

    a2: float
    x2: float

    def __post_init__(self):
        if not 0.0 <= self.a2 <= 1.0:
            raise DomainError("a2 must be in [0, 1]")
        if self.x2 < 0.0:
            raise DomainError("x2 must be nonnegative")

    @property
    def a1(self) -> float:
        return 1.0 - self.a2

    @property
    def mean_square(self) -> float:
        """E[X^2] = a2 * x2^2, checked against the power constraint."""
        return self.a2 * self.x2**2

    def is_degenerate(self) -> bool:
        return self.a2 in (0.0, 1.0) or self.x2 == 0.0


@dataclass(frozen=True)
class DerivedParams:
    alpha: float
    beta: float
    y_star_sq: float | None
    case: Case


def nearest_reciprocal(alpha: float) -> tuple[int, float]:
    """Nearest point 1/n (n a positive integer) to alpha, and the distance."""
    if alpha >= 1.5:
        return 1, alpha - 1.0
    inv = 1.0 / alpha
    n0 = max(1, int(round(inv)))
    best = min((n0 - 1, n0, n0 + 1), key=lambda m: abs(alpha - 1.0 / m) if m >= 1 else math.inf)
    return best, abs(alpha - 1.0 / best)


# Routing constants.  Within SNAP_TOL of 1/n (n <= SNAP_N_MAX) the finite-sum
# case applies; inside the wider GUARD_TOL band the closed forms lose
# precision to cancellation and evaluation falls back to quadrature.
SNAP_TOL = 1e-9
GUARD_TOL = 1e-5
SNAP_N_MAX = 64


def derive_params(
    x: float,
    inp: TwoPointInput,
    ch: ChannelParams,
    snap_tol: float = SNAP_TOL,
    snap_n_max: int = SNAP_N_MAX,
) -> DerivedParams:
    """alpha, beta, y*^2 and the closed-form case for evaluating J(x).

    x must be one of the two mass points {0, x2}.
    """
    if inp.is_degenerate():
        raise DegenerateInput(
            "two-point input collapses to a single mass point (a2 in {0,1} or x2 = 0)"
        )
    if x != 0.0 and x != inp.x2:
        raise DomainError(f"x must be one of the mass points 0 or x2={inp.x2}")
    s2 = ch.sigma2
    big = inp.x2**2 + s2
    alpha = (inp.x2**2 / big) * ((x * x + s2) / s2)
    beta = (inp.a2 / inp.a1) * (s2 / big)
    y_star_sq = None
    if beta < 1.0:
        y_star_sq = -s2 * big / inp.x2**2 * math.log(beta)
    n, dist = nearest_reciprocal(alpha)
    if dist < snap_tol and n <= snap_n_max:
        case = Case.CASE_I
    elif beta < 1.0:
        case = Case.CASE_II
    else:
        case = Case.CASE_III
    return DerivedParams(alpha=alpha, beta=beta, y_star_sq=y_star_sq, case=case)


def transition_density(y: float, x: float, ch: ChannelParams) -> float:
    """Rayleigh-type magnitude transition density f(y|x); integrates to 1."""
    if y < 0.0 or x < 0.0:
        raise DomainError("transition_density requires y >= 0 and x >= 0")
    scale = x * x + ch.sigma2
    return 2.0 * y / scale * math.exp(-y * y / scale)


def snr_of(ch: ChannelParams) -> float:
    """Linear SNR = P / sigma^2."""
    if ch.power_budget is None:
        raise MissingPowerBudget("ChannelParams.power_budget is not set")
    return ch.power_budget / ch.sigma2


def snr_from_db(db: float) -> float:
    return 10.0 ** (db / 10.0)


def snr_to_db(snr_linear: float) -> float:
    if snr_linear <= 0.0:
        raise DomainError("linear SNR must be positive")
    return 10.0 * math.log10(snr_linear)
