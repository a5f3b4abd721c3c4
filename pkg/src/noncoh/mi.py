"""Closed-form mutual information of the two-mass-point magnitude channel.

The core integral J(x) (the Rayleigh-weighted log mixture density) has three
closed forms:

* a finite sum when alpha = 1/n for a positive integer n,
* a 2F1-at-(-beta) form with a pi/sin(pi/alpha) reflection term, convergent
  for beta < 1,
* a 2F1-at-(-1/beta) form with no removable indeterminations, the default
  for beta >= 1 (by analytic continuation it is valid for every beta > 0).

Mutual information assembles as

    I = -a1 - a1 log s2 - a2 - a2 log(x2^2 + s2) - a1 J(0) - a2 J(x2),

and the analytic derivative dI/da2 (with x2^2 = P/a2 tied in capacity mode)
feeds the capacity root-finder.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass, field

import numpy as np

from . import oracle, specfun
from .channel import (
    Case,
    ChannelParams,
    TwoPointInput,
    derive_params,
    nearest_reciprocal,
    GUARD_TOL,
    SNAP_N_MAX,
    SNAP_TOL,
)
from .errors import (
    CaseMismatch,
    ConsistencyError,
    DegenerateInput,
    DomainError,
    NearSingularAlpha,
    NoConvergence,
)
from .oracle import QuadratureConfig
from .specfun import SpecfunConfig

LOG2 = math.log(2.0)

# Test hook: deliberately corrupt the beta>=1 closed form so that the
# end-to-end verification suite can demonstrate sensitivity to sign faults.
_FAULT_FLIP_SIGN = os.environ.get("NONCOH_FAULT_INJECT", "") == "flip-2f1-sign"


@dataclass(frozen=True)
class EvalPolicy:
    """Routing and tolerance knobs for the closed-form evaluation."""

    snap_tol: float = SNAP_TOL
    guard_tol: float = GUARD_TOL
    snap_n_max: int = SNAP_N_MAX
    # below this alpha (i.e. 1/alpha beyond the snap table) the beta<1 form
    # degrades in wide bands around alpha = 1/n, while the beta>=1 form has
    # no singular factors; route small alpha there unconditionally
    case2_alpha_min: float = 1.0 / 64.5
    deriv_guard: float = 1e-5
    series: SpecfunConfig = field(default_factory=SpecfunConfig)
    quadrature: QuadratureConfig = field(default_factory=QuadratureConfig)


DEFAULT_POLICY = EvalPolicy()


@dataclass(frozen=True)
class JEval:
    value: float
    case: Case
    terms_used: int
    truncation_bound: float


@dataclass(frozen=True)
class MIResult:
    nats: float
    j0: float
    j_x2: float
    case_j0: Case
    case_jx2: Case
    diagnostics: dict


def _beta_pow_recip_alpha(beta: float, alpha: float) -> float:
    """beta^(1/alpha) in log space to survive extreme beta and small alpha."""
    return math.exp(math.log(beta) / alpha)


def _case1_value(x, inp, ch, n):
    s2 = ch.sigma2
    big = inp.x2**2 + s2
    beta = (inp.a2 / inp.a1) * (s2 / big)
    j11 = -(x * x + s2) / big
    j12 = math.log(inp.a2 / big)
    if beta <= 1.0:
        # (1 - (-beta)^n) log(1 + 1/beta) - sum_{k=1..n} (-beta)^(n-k)/k,
        # all terms O(1) for beta <= 1
        sign_n = -1.0 if n % 2 else 1.0
        tail = 0.0
        for k in range(1, n + 1):
            m = n - k
            sign = -1.0 if m % 2 else 1.0
            tail += sign * beta**m / k
        j13 = (1.0 - sign_n * beta**n) * math.log1p(1.0 / beta) - tail
    else:
        # same quantity with the beta^n blow-up cancelled analytically:
        # J13 = log(1 + 1/beta) - sum_{j>=1} (-1)^(j+1) beta^(-j) / (n+j)
        if beta >= 1.25:
            n_terms = int(math.ceil(37.0 / math.log(beta))) + 4
            j = np.arange(1, n_terms + 1, dtype=float)
            signs = np.where(np.arange(1, n_terms + 1) % 2 == 1, 1.0, -1.0)
            s = float(np.sum(signs * beta**(-j) / (n + j)))
        else:
            m0, n_tail = 24, 96
            j = np.arange(1, m0 + n_tail + 1, dtype=float)
            signs = np.where(np.arange(1, m0 + n_tail + 1) % 2 == 1, 1.0, -1.0)
            terms = signs * beta**(-j) / (n + j)
            s = float(terms[:m0].sum() + specfun._euler_average(terms[m0:])[0])
        j13 = math.log1p(1.0 / beta) - s
    return j11 + j12 + j13


def _case2_value(x, inp, ch, alpha, beta, cfg):
    res = specfun.gauss_2f1_diag(
        1.0, (alpha - 1.0) / alpha, (2.0 * alpha - 1.0) / alpha, -beta, cfg
    )
    value = (
        -1.0
        - x * x / ch.sigma2
        + math.log(inp.a1 / ch.sigma2)
        + math.log1p(beta)
        - alpha * beta / (alpha - 1.0) * res.value
        + _beta_pow_recip_alpha(beta, alpha) * specfun.pi_csc_recip(alpha)
    )
    return value, res


def _case3_value(x, inp, ch, alpha, beta, cfg):
    s2 = ch.sigma2
    big = inp.x2**2 + s2
    res = specfun.gauss_2f1_diag(
        1.0, (alpha + 1.0) / alpha, (2.0 * alpha + 1.0) / alpha, -1.0 / beta, cfg
    )
    hyp_term = alpha / (beta * (alpha + 1.0)) * res.value
    if _FAULT_FLIP_SIGN:
        hyp_term = -hyp_term
    value = (
        -(x * x + s2) / big
        + math.log(inp.a2 / big)
        + math.log1p(1.0 / beta)
        - hyp_term
    )
    return value, res


def j_case1(x: float, inp: TwoPointInput, ch: ChannelParams,
            policy: EvalPolicy = DEFAULT_POLICY) -> float:
    """Finite-sum closed form, valid when alpha is the reciprocal of a
    positive integer (any beta > 0)."""
    dp = derive_params(x, inp, ch, policy.snap_tol, policy.snap_n_max)
    n, dist = nearest_reciprocal(dp.alpha)
    if dist >= policy.snap_tol or n > policy.snap_n_max:
        raise CaseMismatch(f"alpha={dp.alpha} is not 1/n within {policy.snap_tol}")
    return _case1_value(x, inp, ch, n)


def j_case2(x: float, inp: TwoPointInput, ch: ChannelParams,
            policy: EvalPolicy = DEFAULT_POLICY) -> float:
    """Closed form with the 2F1 at -beta and the pi/sin reflection term.

    Convergence-oriented route for beta < 1; by analytic continuation it is
    valid for all beta > 0 away from alpha = 1/n.
    """
    dp = derive_params(x, inp, ch, policy.snap_tol, policy.snap_n_max)
    _, dist = nearest_reciprocal(dp.alpha)
    if dist < policy.snap_tol:
        raise CaseMismatch(
            f"the beta<1 form is undefined at alpha = 1/n (alpha={dp.alpha})"
        )
    if dist < policy.guard_tol:
        raise NearSingularAlpha(
            f"alpha={dp.alpha} within the cancellation guard band around 1/n"
        )
    return _case2_value(x, inp, ch, dp.alpha, dp.beta, policy.series)[0]


def j_case3(x: float, inp: TwoPointInput, ch: ChannelParams,
            policy: EvalPolicy = DEFAULT_POLICY) -> float:
    """Closed form with the 2F1 at -1/beta; free of indeterminations and
    valid for every alpha, beta > 0 (default route for beta >= 1)."""
    dp = derive_params(x, inp, ch, policy.snap_tol, policy.snap_n_max)
    return _case3_value(x, inp, ch, dp.alpha, dp.beta, policy.series)[0]


def _j_eval(x, inp, ch, policy: EvalPolicy) -> JEval:
    dp = derive_params(x, inp, ch, policy.snap_tol, policy.snap_n_max)
    alpha, beta = dp.alpha, dp.beta
    n, dist = nearest_reciprocal(alpha)
    if dist < policy.snap_tol and n <= policy.snap_n_max:
        return JEval(_case1_value(x, inp, ch, n), Case.CASE_I, n, 0.0)
    value = math.nan
    case = Case.ORACLE_FALLBACK
    terms, bound = 0, math.nan
    in_guard = dist < policy.guard_tol and n <= policy.snap_n_max
    if not (in_guard and beta < 1.0):
        try:
            if beta < 1.0 and alpha >= policy.case2_alpha_min and not in_guard:
                value, res = _case2_value(x, inp, ch, alpha, beta, policy.series)
                case = Case.CASE_II
            else:
                value, res = _case3_value(x, inp, ch, alpha, beta, policy.series)
                case = Case.CASE_III
            terms, bound = res.terms_used, res.truncation_bound
        except (NoConvergence, DomainError, OverflowError):
            value = math.nan
    if not math.isfinite(value):
        value = oracle.j_quadrature(x, inp, ch, policy.quadrature)
        case = Case.ORACLE_FALLBACK
        terms, bound = 0, policy.quadrature.abs_tol
    return JEval(value, case, terms, bound)


def mutual_information(
    inp: TwoPointInput,
    ch: ChannelParams,
    policy: EvalPolicy = DEFAULT_POLICY,
) -> MIResult:
    """I(X;Y) in nats for the two-mass-point input, each J routed by case.

    Degenerate inputs (a2 in {0, 1} or x2 = 0) return exactly 0.
    """
    if inp.is_degenerate():
        return MIResult(0.0, math.nan, math.nan, Case.DEGENERATE, Case.DEGENERATE, {})
    j0 = _j_eval(0.0, inp, ch, policy)
    j2 = _j_eval(inp.x2, inp, ch, policy)
    s2 = ch.sigma2
    big = inp.x2**2 + s2
    nats = (
        -inp.a1
        - inp.a1 * math.log(s2)
        - inp.a2
        - inp.a2 * math.log(big)
        - inp.a1 * j0.value
        - inp.a2 * j2.value
    )
    if nats < 0.0:
        if nats < -1e-10:
            raise ConsistencyError(f"mutual information came out negative: {nats}")
        nats = 0.0
    if nats > LOG2 + 1e-10:
        raise ConsistencyError(f"mutual information exceeds log 2: {nats}")
    diagnostics = {
        "j0_terms": j0.terms_used,
        "j0_truncation_bound": j0.truncation_bound,
        "jx2_terms": j2.terms_used,
        "jx2_truncation_bound": j2.truncation_bound,
    }
    return MIResult(nats, j0.value, j2.value, j0.case, j2.case, diagnostics)


def input_entropy(inp: TwoPointInput) -> float:
    """Binary entropy H(X) in nats; log 2 at a2 = 1/2, zero at the ends."""
    a2 = inp.a2
    if a2 in (0.0, 1.0):
        return 0.0
    a1 = 1.0 - a2
    return -a1 * math.log(a1) - a2 * math.log(a2)


def conditional_entropy(
    inp: TwoPointInput,
    ch: ChannelParams,
    policy: EvalPolicy = DEFAULT_POLICY,
) -> float:
    """H(X|Y) = H(X) - I(X;Y), clamped to zero within rounding (1e-10)."""
    h = input_entropy(inp) - mutual_information(inp, ch, policy).nats
    if h < 0.0:
        if h < -1e-10:
            raise ConsistencyError(f"conditional entropy came out negative: {h}")
        h = 0.0
    return h


def continuation_residual(
    alpha: float,
    beta: float,
    cfg: SpecfunConfig = specfun.DEFAULT_CONFIG,
    guard_tol: float = GUARD_TOL,
) -> float:
    """Difference between the two closed-form routes written as an identity:

        alpha*beta/(alpha-1) 2F1(1,(a-1)/a;(2a-1)/a;-beta) + alpha
        - pi beta^(1/alpha)/sin(pi/alpha)
        - alpha/(beta(alpha+1)) 2F1(1,(a+1)/a;(2a+1)/a;-1/beta)

    evaluated with both hypergeometric series on convergent routes; zero for
    every alpha, beta > 0 away from alpha = 1/n.
    """
    if alpha <= 0.0 or beta <= 0.0:
        raise DomainError("continuation_residual requires alpha, beta > 0")
    _, dist = nearest_reciprocal(alpha)
    if dist < guard_tol:
        raise NearSingularAlpha(f"alpha={alpha} within guard band of 1/n")
    lhs = (
        alpha * beta / (alpha - 1.0)
        * specfun.gauss_2f1(1.0, (alpha - 1.0) / alpha, (2.0 * alpha - 1.0) / alpha, -beta, cfg)
        + alpha
        - _beta_pow_recip_alpha(beta, alpha) * specfun.pi_csc_recip(alpha)
    )
    rhs = (
        alpha / (beta * (alpha + 1.0))
        * specfun.gauss_2f1(1.0, (alpha + 1.0) / alpha, (2.0 * alpha + 1.0) / alpha, -1.0 / beta, cfg)
    )
    return lhs - rhs


def hyp3f2_sin_identity_residual(
    alpha: float,
    cfg: SpecfunConfig = specfun.DEFAULT_CONFIG,
    guard_tol: float = GUARD_TOL,
) -> float:
    """Residual of the reduction of two 3F2(-1) sums to pi/sin(pi/alpha):

        alpha + 3F2(1,1,(a-1)/a; 2,(2a-1)/a; -1)/(alpha-1)
              + 3F2(1,1,(a+1)/a; 2,(2a+1)/a; -1)/(alpha+1)
        = pi / sin(pi/alpha).
    """
    if alpha <= 0.0:
        raise DomainError("alpha must be positive")
    _, dist = nearest_reciprocal(alpha)
    if dist < guard_tol:
        raise NearSingularAlpha(f"alpha={alpha} within guard band of 1/n")
    f1 = specfun.hyp_pfq(
        [1.0, 1.0, (alpha - 1.0) / alpha], [2.0, (2.0 * alpha - 1.0) / alpha], -1.0, cfg
    )
    f2 = specfun.hyp_pfq(
        [1.0, 1.0, (alpha + 1.0) / alpha], [2.0, (2.0 * alpha + 1.0) / alpha], -1.0, cfg
    )
    s = alpha + f1.value / (alpha - 1.0) + f2.value / (alpha + 1.0)
    return s - specfun.pi_csc_recip(alpha)


def mi_derivative_a2(
    inp: TwoPointInput,
    ch: ChannelParams,
    policy: EvalPolicy = DEFAULT_POLICY,
) -> float:
    """Analytic dI/da2, assembled by the chain rule over the beta>=1 closed
    form for both J integrals (the indetermination-free route).

    With ch.power_budget present the nonzero mass point is tied to the
    probability through x2^2 = P/a2; otherwise x2 is held fixed.  The
    hypergeometric building blocks are the argument and parameter partials
    of 2F1(1, b; b+1; z), i.e. the 2F1(2, 1+b; 2+b; z) and
    3F2(2, 1+b, 1+b; 2+b, 2+b; z) terms in series form.
    """
    a2 = inp.a2
    if a2 <= 0.0 or a2 >= 1.0:
        raise DegenerateInput("derivative requires 0 < a2 < 1")
    a1 = 1.0 - a2
    s2 = ch.sigma2
    capacity = ch.power_budget is not None
    if capacity:
        p_bud = ch.power_budget
        x2sq = p_bud / a2
        if inp.x2 > 0.0 and abs(inp.x2**2 - x2sq) > 1e-6 * x2sq:
            raise DomainError(
                "capacity mode requires x2^2 = power_budget / a2 "
                f"(got x2^2={inp.x2 ** 2}, expected {x2sq})"
            )
        x2sq_p = -p_bud / a2**2
        v_p = s2 / p_bud
    else:
        if inp.x2 <= 0.0:
            raise DegenerateInput("derivative requires x2 > 0")
        x2sq = inp.x2**2
        x2sq_p = 0.0
        v_p = 0.0
    big = x2sq + s2
    big_p = x2sq_p
    v = s2 / x2sq
    if abs(v - round(v)) < policy.deriv_guard:
        raise NearSingularAlpha(
            f"sigma^2/x2^2 = {v} too close to an integer (alpha near 1/n)"
        )
    u = (a1 / a2) * (big / s2)
    u_p = (-1.0 / a2**2) * (big / s2) + (a1 / a2) * (big_p / s2)
    b0, b2 = 2.0 + v, 1.0 + v
    fam0 = specfun.hyp2f1_1b(b0, u, policy.series)
    fam2 = specfun.hyp2f1_1b(b2, u, policy.series)

    def hyp_term_derivative(b, fam):
        # d/da2 of (u/b) * 2F1(1, b; b+1; -u)
        return (u_p * b - u * v_p) / b**2 * fam.value + (u / b) * (
            v_p * fam.d_db - u_p * fam.d_dz
        )

    j0 = (
        -s2 / big + math.log(a2) - math.log(big) + math.log1p(u)
        - (u / b0) * fam0.value
    )
    j2 = (
        -1.0 + math.log(a2) - math.log(big) + math.log1p(u)
        - (u / b2) * fam2.value
    )
    j0_p = (
        s2 * big_p / big**2 + 1.0 / a2 - big_p / big + u_p / (1.0 + u)
        - hyp_term_derivative(b0, fam0)
    )
    j2_p = (
        1.0 / a2 - big_p / big + u_p / (1.0 + u)
        - hyp_term_derivative(b2, fam2)
    )
    return (
        math.log(s2) - math.log(big) - a2 * big_p / big
        + j0 - a1 * j0_p - j2 - a2 * j2_p
    )
