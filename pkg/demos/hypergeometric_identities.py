#!/usr/bin/env python3
"""The special-function layer under the closed forms, shown through the
identities it must satisfy: the Gauss-series log identity, the continuation
formula connecting the two closed-form routes, the reduction of two
3F2(-1) sums to pi/sin(pi/alpha), and the digamma reflection rules.

Run:  python demos/hypergeometric_identities.py
"""

import math

from noncoh import (
    continuation_residual,
    digamma,
    gauss_2f1,
    hyp3f2_sin_identity_residual,
    hyp_pfq,
    incomplete_beta,
)

print(__doc__)

print("z * 2F1(1,1;2;-z) = log(1+z), summed as a series:")
for z in (0.3, 0.9, 1.0):
    got = z * gauss_2f1(1.0, 1.0, 2.0, -z)
    print(f"   z={z}: series={got:.15f}  log1p={math.log1p(z):.15f}")

print("\n2F1(a,b;b+1;z) = b z^-b B_z(b, 1-a) against the beta integral:")
for (a, b, z) in [(0.3, 1.5, 0.4), (-0.5, 0.25, 0.9)]:
    lhs = gauss_2f1(a, b, b + 1.0, z)
    rhs = b * z ** (-b) * incomplete_beta(z, b, 1.0 - a)
    print(f"   a={a:+.2f} b={b} z={z}: 2F1={lhs:.12f}  beta form={rhs:.12f}")

print("""
Continuation formula: the beta<1 route (2F1 at -beta, plus a pi/sin
reflection term) and the beta>=1 route (2F1 at -1/beta) describe one
function.  Residuals over a few (alpha, beta):
""")
for alpha, beta in [(1.7, 0.4), (0.37, 2.5), (3.2, 1.0), (6.3, 0.17)]:
    r = continuation_residual(alpha, beta)
    print(f"   alpha={alpha:4} beta={beta:4}: residual = {r:+.2e}")

print("""
Two generalized hypergeometric sums at argument -1 collapse to an
elementary reflection value:
   alpha + 3F2(...;-1)/(alpha-1) + 3F2(...;-1)/(alpha+1) = pi/sin(pi/alpha)
""")
for alpha in (0.6, 2.0, 5.5):
    r = hyp3f2_sin_identity_residual(alpha)
    print(f"   alpha={alpha}: residual = {r:+.2e} "
          f"(pi/sin = {math.pi / math.sin(math.pi / alpha):+.6f})")

print("\nDigamma reflection rules used in that reduction:")
for q in (0.1, 0.23, 0.4):
    refl = digamma(1.0 - q) - digamma(q) - math.pi / math.tan(math.pi * q)
    half = digamma(0.5 + q) - digamma(0.5 - q) - math.pi * math.tan(math.pi * q)
    print(f"   q={q}: reflection residual {refl:+.1e}, half-shift {half:+.1e}")

print("\nSeries diagnostics are part of every evaluation:")
res = hyp_pfq([1.0, 1.0, 1.5], [2.0, 2.5], -1.0)
print(f"   3F2(1,1,1.5; 2,2.5; -1) = {res.value:.15f} "
      f"({res.terms_used} terms, remainder <= {res.truncation_bound:.1e})")
