"""Real-argument special functions used by the closed-form expressions.

Everything here is scalar double-precision: Pochhammer symbols, the
generalized hypergeometric series pFq with truncation diagnostics, the Gauss
2F1 on the real axis left of z = 1, the digamma function, the (real branch
of the) incomplete beta integral, and partial sums of the alternating
log(1+q) series.  A dedicated evaluator for the family 2F1(1, b; b+1; -u)
together with its parameter and argument derivatives backs the analytic
mutual-information derivative.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DivergenceError, DomainError, NoConvergence, PoleError

# Euler's constant to 30 significant digits (series oracle for digamma).
EULER_GAMMA = 0.577215664901532860606512090082

_LD = np.longdouble
_PI_LD = _LD("3.14159265358979323846264338327950288")


@dataclass(frozen=True)
class SpecfunConfig:
    """Series evaluation knobs.

    abs_tol is the truncation target for the absolute remainder,
    max_terms caps the number of summed terms, and transform_threshold is
    the |z| above which gauss_2f1 switches to the z/(z-1) transformation.
    """

    abs_tol: float = 1e-14
    max_terms: int = 10**7
    transform_threshold: float = 0.5

    def __post_init__(self):
        if not (0.0 < self.abs_tol < 1.0):
            raise ValueError("abs_tol must be in (0, 1)")
        if self.max_terms < 1:
            raise ValueError("max_terms must be >= 1")
        if not (0.0 < self.transform_threshold < 1.0):
            raise ValueError("transform_threshold must be in (0, 1)")


DEFAULT_CONFIG = SpecfunConfig()


@dataclass(frozen=True)
class SeriesResult:
    """Partial-sum value plus truncation diagnostics."""

    value: float
    terms_used: int
    truncation_bound: float


def pochhammer(a: float, k: int) -> float:
    """Rising factorial a(a+1)...(a+k-1); equals 1 for k = 0.

    Overflow saturates to +-inf and propagates.
    """
    if k < 0:
        raise DomainError("pochhammer requires k >= 0")
    out = 1.0
    x = float(a)
    for _ in range(k):
        out *= x
        x += 1.0
    return out


def _term_ratio(numer, denom, z, k):
    r = z / (k + 1.0)
    for a in numer:
        r *= a + k
    for b in denom:
        bk = b + k
        if bk == 0.0:
            raise DomainError(
                f"denominator parameter {b} hits a pole at term k={k}"
            )
        r /= bk
    return r


def _euler_average(terms):
    """Sum an (eventually) alternating tail by iterated pairwise averaging
    of its partial sums.  Returns (value, error_estimate); the value keeps
    the dtype of the input terms."""
    s = np.cumsum(terms)
    prev = s[-1]
    best = prev
    best_err = abs(float(terms[-1]))
    while s.size > 1:
        s = 0.5 * (s[:-1] + s[1:])
        cur = s[-1]
        err = abs(float(cur - prev))
        if err < best_err:
            best, best_err = cur, err
        prev = cur
    return best, best_err


def hyp_pfq(numer, denom, z, cfg: SpecfunConfig = DEFAULT_CONFIG) -> SeriesResult:
    """Generalized hypergeometric series sum_k [prod (xi)_k / prod (eta)_k] z^k / k!.

    Raises DomainError when a denominator parameter is a nonpositive integer
    reached before truncation, DivergenceError outside the convergence
    region, and NoConvergence when max_terms is exhausted above abs_tol.
    """
    numer = [float(a) for a in numer]
    denom = [float(b) for b in denom]
    z = float(z)
    p, q = len(numer), len(denom)
    if p > q + 1 and z != 0.0:
        raise DivergenceError(f"{p}F{q} has zero radius of convergence")
    if p == q + 1:
        if abs(z) > 1.0:
            raise DivergenceError(f"{p}F{q} diverges for |z| > 1 (z={z})")
        s = sum(denom) - sum(numer)
        if z == 1.0 and s <= 0.0:
            raise DivergenceError("series diverges at z = 1 (sum(eta) - sum(xi) <= 0)")
        if z == -1.0 and s <= -1.0:
            raise DivergenceError("series diverges at z = -1 (sum(eta) - sum(xi) <= -1)")

    tol = cfg.abs_tol

    # Near z = -1 with p = q + 1 the terms decay like a power of k and plain
    # summation stalls; sum a head directly and accelerate the alternating
    # tail by iterated term pairing.
    neg = [-c for c in numer + denom if c < 0.0]
    if (
        p == q + 1
        and z < 0.0
        and abs(z) >= 0.9
        and cfg.max_terms >= int(max(48.0, (max(neg) if neg else 0.0) + 16.0)) + 72
    ):
        m0 = int(max(48.0, (max(neg) if neg else 0.0) + 16.0))
        term = 1.0
        total = 1.0
        for k in range(m0 - 1):
            term *= _term_ratio(numer, denom, z, k)
            total += term
        n_tail = 72
        tail_terms = np.empty(n_tail)
        for j in range(n_tail):
            term *= _term_ratio(numer, denom, z, m0 - 1 + j)
            tail_terms[j] = term
        tail, err = _euler_average(tail_terms)
        value = total + float(tail)
        bound = max(err, abs(value) * 1e-16)
        if bound <= tol:
            return SeriesResult(value, m0 + n_tail, bound)
        # fall through to plain summation if acceleration was not enough

    # Negative parameters make the term ratio spike near k = -param (the
    # terms can decay below tolerance and later hump back up), so stopping
    # is deferred past all sign changes, and the remainder bound uses the
    # worst future ratio |z| (1 + D/k) rather than the current one.
    k_min = int(max(neg)) + 4 if neg else 1
    drift = abs(sum(numer) - sum(denom)) + 1.0
    term = 1.0
    total = 1.0
    k = 0
    while k < cfg.max_terms:
        term *= _term_ratio(numer, denom, z, k)
        total += term
        k += 1
        if k >= k_min and abs(term) <= tol:
            rho = abs(_term_ratio(numer, denom, z, k))
            if p == q + 1:
                rho = max(rho, abs(z) * (1.0 + drift / (k + 1.0)))
            rho = min(rho, 0.999)
            bound = abs(term) * rho / (1.0 - rho)
            if bound <= tol:
                return SeriesResult(total, k, bound)
    raise NoConvergence(
        f"series did not reach abs_tol={tol} within {cfg.max_terms} terms"
    )


def gauss_2f1_diag(xi1, xi2, eta1, z, cfg: SpecfunConfig = DEFAULT_CONFIG) -> SeriesResult:
    """Gauss 2F1(xi1, xi2; eta1; z) for real z < 1, with series diagnostics.

    Inside |z| <= cfg.transform_threshold (and for 0 < z < 1) the defining
    series is summed directly; for z below -transform_threshold the argument
    transformation w = z/(z-1) maps into (0, 1) first:

        2F1(a, b; c; z) = (1-z)^(-a) 2F1(a, c-b; c; w).
    """
    xi1, xi2, eta1, z = float(xi1), float(xi2), float(eta1), float(z)
    if z >= 1.0:
        raise DomainError(f"2F1 is evaluated only for z < 1 (z={z})")
    if eta1 <= 0.0 and eta1 == math.floor(eta1):
        raise DomainError(f"2F1 undefined for nonpositive integer eta1={eta1}")
    if z < -cfg.transform_threshold:
        w = z / (z - 1.0)
        res = hyp_pfq([xi1, eta1 - xi2], [eta1], w, cfg)
        pref = (1.0 - z) ** (-xi1)
        return SeriesResult(pref * res.value, res.terms_used, pref * res.truncation_bound)
    return hyp_pfq([xi1, xi2], [eta1], z, cfg)


def gauss_2f1(xi1, xi2, eta1, z, cfg: SpecfunConfig = DEFAULT_CONFIG) -> float:
    """Value of the analytic continuation of 2F1 at real z < 1."""
    return gauss_2f1_diag(xi1, xi2, eta1, z, cfg).value


def digamma(x: float) -> float:
    """Logarithmic derivative of the gamma function, for real x away from
    the poles at nonpositive integers, to absolute error below 1e-13.

    Uses the upward recurrence psi(x+1) = psi(x) + 1/x to shift the argument
    above 10, then the asymptotic expansion in 1/x^2.
    """
    x = float(x)
    if x <= 0.0 and x == math.floor(x):
        raise PoleError(f"digamma has a pole at {x}")
    acc = 0.0
    while x < 10.0:
        acc -= 1.0 / x
        x += 1.0
    inv2 = 1.0 / (x * x)
    # Bernoulli tail: 1/12 - 1/(120 x^2) + 1/(252 x^4) - 1/(240 x^6)
    #                 + 1/(132 x^8) - 691/(32760 x^10)
    tail = inv2 * (
        1.0 / 12.0
        - inv2
        * (
            1.0 / 120.0
            - inv2
            * (
                1.0 / 252.0
                - inv2 * (1.0 / 240.0 - inv2 * (1.0 / 132.0 - inv2 * 691.0 / 32760.0))
            )
        )
    )
    return acc + math.log(x) - 0.5 / x - tail


def digamma_series_oracle(q: float, terms: int = 2_000_000) -> float:
    """Independent test oracle for digamma:

        psi(q+1) = -gamma + sum_{k>=0} q/((k+1)(k+1+q)).

    The raw series converges like 1/K, so the truncated remainder is
    replaced by its Euler-Maclaurin value log(1 + q/(K+1)) + f(K)/2
    (error O(1/K^2) of the half-term, i.e. ~1e-13 at the default K).
    """
    k = np.arange(terms, dtype=float)
    head = float(np.sum(q / ((k + 1.0) * (k + 1.0 + q))))
    kk = float(terms)
    tail = math.log1p(q / (kk + 1.0)) + 0.5 * q / ((kk + 1.0) * (kk + 1.0 + q))
    return -EULER_GAMMA + head + tail


def incomplete_beta(z: float, b: float, one_minus_a: float) -> float:
    """Incomplete beta integral B_z(b, 1-a) = int_0^z t^(b-1) (1-t)^(-a) dt.

    Real-valued; requires b > 0 and |z| < 1.  For z < 0 the integral along
    the real segment is real only when b is an integer (the t^(b-1) factor
    otherwise leaves the real axis), so noninteger b raises DomainError
    there.
    """
    z, b = float(z), float(b)
    a = 1.0 - float(one_minus_a)
    if b <= 0.0:
        raise DomainError("incomplete_beta requires b > 0")
    if abs(z) >= 1.0:
        raise DomainError("incomplete_beta requires |z| < 1")
    if z == 0.0:
        return 0.0
    if z < 0.0:
        if b != math.floor(b):
            raise DomainError(
                "B_z with z < 0 is real-valued only for integer b"
            )
        pref = (-1.0) ** int(b) * abs(z) ** b
    else:
        pref = z**b
    # B_z(b, 1-a) = z^b sum_k (a)_k z^k / (k! (b+k)), ratio -> z
    coef = 1.0  # (a)_k / k!
    total = 1.0 / b
    k = 0
    zk = 1.0
    while k < DEFAULT_CONFIG.max_terms:
        coef *= (a + k) / (k + 1.0)
        zk *= z
        term = coef * zk / (b + k + 1.0)
        total += term
        k += 1
        if abs(term) <= 1e-16 * max(1.0, abs(total)) and abs(z) ** 2 < 1.0:
            bound = abs(term) * abs(z) / (1.0 - abs(z))
            if bound <= 1e-15 * max(1.0, abs(total)):
                return pref * total
    raise NoConvergence("incomplete_beta series stalled")


def log1p_series_partial_sum(q: float, n: int) -> float:
    """Partial sum T_n = sum_{k=1..n} (-1)^(k+1) q^k / k of the log(1+q)
    series; satisfies 0 <= T_n <= q for 0 <= q <= 1."""
    if n < 1:
        raise DomainError("n must be a positive integer")
    k = np.arange(1, n + 1, dtype=float)
    signs = np.where(np.arange(1, n + 1) % 2 == 1, 1.0, -1.0)
    return float(np.sum(signs * np.power(q, k) / k))


def pi_csc_recip(alpha: float) -> float:
    """pi / sin(pi/alpha) with the argument reduced modulo the period in
    extended precision, so accuracy survives large 1/alpha."""
    a = _LD(alpha)
    inv = _LD(1.0) / a
    n = int(np.rint(inv))
    # reduced argument 1/alpha - n computed as (1 - n*alpha)/alpha
    r = (_LD(1.0) - _LD(n) * a) / a
    s = np.sin(_PI_LD * r)
    if n % 2 == 1:
        s = -s
    if s == 0.0:
        raise DomainError(f"sin(pi/alpha) vanishes at alpha={alpha}")
    return float(_PI_LD / s)


def _sin_cos_pi_ld(b_ld):
    """sin(pi*b) and cos(pi*b) in long double with exact period reduction."""
    n = int(np.rint(float(b_ld)))
    r = b_ld - _LD(n)
    s = np.sin(_PI_LD * r)
    c = np.cos(_PI_LD * r)
    if n % 2 == 1:
        s, c = -s, -c
    return s, c


@dataclass(frozen=True)
class F21Family:
    """2F1(1, b; b+1; -u) with partial derivatives d/db and d/dz at z=-u."""

    value: float
    d_db: float
    d_dz: float


def hyp2f1_1b(b: float, u: float, cfg: SpecfunConfig = DEFAULT_CONFIG) -> F21Family:
    """Evaluate phi(b, u) = 2F1(1, b; b+1; -u) together with its partials
    for u >= 0 and b > 0 (b bounded away from integers when u >= 1).

    The same mathematical objects written as hypergeometric series are
    d/dz phi = [b/(1+b)] 2F1(2, 1+b; 2+b; z) and
    d/db phi = [z/(1+b)^2] 3F2(2, 1+b, 1+b; 2+b, 2+b; z); those series only
    converge for |z| < 1, so for u >= 1 this routine evaluates the exact
    elementary continuation

        phi(b, -u) = pi b u^(-b)/sin(pi b)
                     - b sum_{m>=0} (-1)^m u^(-(m+1)) / (m+1-b)

    (and its derivatives) in extended precision; near u = 1 the alternating
    tails are resummed by iterated pairwise averaging.
    """
    b = float(b)
    u = float(u)
    if u < 0.0:
        raise DomainError("hyp2f1_1b expects u >= 0 (argument z = -u)")
    if b <= 0.0:
        raise DomainError("hyp2f1_1b expects b > 0")
    dist = abs(b - np.rint(b))
    if u >= 1.0 and dist < 1e-8:
        raise DomainError(
            f"b={b} too close to an integer for the continuation formula"
        )
    if u < 1.0:
        return _family_direct(b, u, cfg)
    return _family_star(b, u)


def _family_direct(b, u, cfg):
    if u == 0.0:
        return F21Family(1.0, 0.0, b / (b + 1.0))
    if u <= 0.8:
        n = max(8, int(math.ceil(math.log(cfg.abs_tol) / math.log(u))) + 6)
        n = min(n, 4000)
        euler_from = None
    else:
        n, euler_from = 24 + 72, 24
    k = np.arange(n, dtype=float)
    zk = (-u) ** k
    t_phi = (b / (b + k)) * zk
    t_db = (k / (b + k) ** 2) * zk
    t_dz = np.zeros(n)
    t_dz[1:] = (b * k[1:] / (b + k[1:])) * (-u) ** (k[1:] - 1.0)
    if euler_from is None:
        return F21Family(float(t_phi.sum()), float(t_db.sum()), float(t_dz.sum()))
    m0 = euler_from
    p, _ = _euler_average(t_phi[m0:])
    dbv, _ = _euler_average(t_db[m0:])
    dzv, _ = _euler_average(t_dz[m0:])
    return F21Family(
        float(t_phi[:m0].sum() + p),
        float(t_db[:m0].sum() + dbv),
        float(t_dz[:m0].sum() + dzv),
    )


def _family_star(b, u):
    # reflection head + power series in 1/u, in long double: the head and
    # the m = round(b)-1 term cancel to O(1) near integer b
    b_ld = _LD(b)
    u_ld = _LD(u)
    euler = u < 1.25
    if euler:
        n, m0 = 24 + 72, 24
    else:
        n = min(40000, max(12, int(math.ceil(40.0 / math.log(u))) + 8))
        m0 = None
    lu = np.log(u_ld)
    sb, cb = _sin_cos_pi_ld(b_ld)
    ub = np.exp(-b_ld * lu)
    head = _PI_LD * b_ld * ub / sb
    head_db = (
        _PI_LD * ub / sb
        - _PI_LD * b_ld * ub * lu / sb
        - _PI_LD * _PI_LD * b_ld * ub * cb / (sb * sb)
    )
    head_du = -_PI_LD * b_ld * b_ld * np.exp(-(b_ld + 1) * lu) / sb
    m = np.arange(n).astype(_LD)
    sgn = _LD(-1.0) ** (np.arange(n) % 2)
    um1 = np.exp(-(m + 1) * lu)
    d = m + _LD(1.0) - b_ld
    t_T = sgn * um1 / d
    t_Tb = sgn * um1 / (d * d)
    t_Tu = -sgn * (m + 1) * np.exp(-(m + 2) * lu) / d
    if euler:
        T = t_T[:m0].sum() + _euler_average(t_T[m0:])[0]
        Tb = t_Tb[:m0].sum() + _euler_average(t_Tb[m0:])[0]
        Tu = t_Tu[:m0].sum() + _euler_average(t_Tu[m0:])[0]
    else:
        T, Tb, Tu = t_T.sum(), t_Tb.sum(), t_Tu.sum()
    value = float(head - b_ld * T)
    d_db = float(head_db - T - b_ld * Tb)
    d_dz = float(-(head_du - b_ld * Tu))
    return F21Family(value, d_db, d_dz)
