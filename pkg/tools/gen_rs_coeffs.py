"""Generate the power-series tables for the Riemann-Siegel correction terms.

The remainder of the Riemann-Siegel formula is expanded in terms of

    Psi(p) = cos(2*pi*(p**2 - p - 1/16)) / cos(2*pi*p)

and its derivatives.  With z = p - 1/2 we have Psi = -cos(2 pi z^2 - 5 pi/8) / cos(2 pi z),
whose Taylor series we divide out in high precision.  Each C_n is a linear
combination of Psi derivatives,

    C_n = sum_k d[n, k] * Psi^(3n - 4k) / pi^(2n - 2k),

with d[0, 0] = 1 and

    d[n+1, k] = -d[n, k] / (32 (3n + 3 - 4k)) - (3n + 4 - 4k)/2 * d[n, k-1].

The recursion reproduces the classical closed forms of C_1..C_4 exactly
(checked in tests/test_rs_coeffs.py).  Each C_n is written out as a power
series in z.

Run from the repository root:

    python3 tools/gen_rs_coeffs.py > src/ladderlab/_rs_coeffs.py
"""

from fractions import Fraction

import mpmath as mp

mp.mp.dps = 200
NTERMS = 160
MAX_ORDER = 6
CUTOFF = mp.mpf("1e-24")


def psi_series(n):
    twopi = 2 * mp.pi
    c58, s58 = mp.cos(5 * mp.pi / 8), mp.sin(5 * mp.pi / 8)
    num = [mp.mpf(0)] * n
    den = [mp.mpf(0)] * n
    for j in range(n):
        if 4 * j < n:
            num[4 * j] += -c58 * (-1) ** j * twopi ** (2 * j) / mp.factorial(2 * j)
        if 4 * j + 2 < n:
            num[4 * j + 2] += -s58 * (-1) ** j * twopi ** (2 * j + 1) / mp.factorial(2 * j + 1)
        if 2 * j < n:
            den[2 * j] = (-1) ** j * twopi ** (2 * j) / mp.factorial(2 * j)
    q = [mp.mpf(0)] * n
    for i in range(n):
        acc = num[i] - sum(q[j] * den[i - j] for j in range(i))
        q[i] = acc / den[0]
    return q


def deriv(series, m):
    out = list(series)
    for _ in range(m):
        out = [out[i] * i for i in range(1, len(out))]
    return out


def combo(terms, n):
    """Sum of weight * Psi^(order) as a series truncated to n terms."""
    psi = psi_series(n + 3 * MAX_ORDER + 2)
    res = [mp.mpf(0)] * n
    for weight, order in terms:
        d = deriv(psi, order)
        for i in range(n):
            res[i] += weight * d[i]
    return res


def gabcke_weights(max_order):
    d = {(0, 0): Fraction(1)}
    for n in range(max_order):
        for k in range((3 * n + 3) // 4 + 1):
            v = Fraction(0)
            if (n, k) in d:
                v -= d[(n, k)] / (32 * (3 * n + 3 - 4 * k))
            if (n, k - 1) in d:
                v -= Fraction(3 * n + 4 - 4 * k, 2) * d[(n, k - 1)]
            if v:
                d[(n + 1, k)] = v
    return d


def main():
    d = gabcke_weights(MAX_ORDER)
    specs = []
    for n in range(MAX_ORDER + 1):
        terms = []
        for (m, k), w in sorted(d.items()):
            if m == n:
                weight = mp.mpf(w.numerator) / w.denominator / mp.pi ** (2 * n - 2 * k)
                terms.append((weight, 3 * n - 4 * k))
        specs.append(terms)
    print('"""Power series of the Riemann-Siegel corrections C_0..C_6 in z = p - 1/2.')
    print()
    print("Generated by tools/gen_rs_coeffs.py; do not edit by hand.")
    print('"""')
    print()
    print("RS_COEFFS = (")
    for k, spec in enumerate(specs):
        series = combo(spec, NTERMS)
        last = max(i for i, c in enumerate(series) if abs(c) * mp.mpf(0.5) ** i > CUTOFF)
        print("    (  # C_%d" % k)
        for c in series[: last + 1]:
            print("        %s," % mp.nstr(c, 20, min_fixed=0, max_fixed=0))
        print("    ),")
    print(")")


if __name__ == "__main__":
    main()
