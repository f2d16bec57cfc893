#!/usr/bin/env python3
"""Generate classical modular polynomial data files (MODPOLY v1 format).

Phi_l(X, j) = (X - j(q^l)) * prod_k (X - j(zeta^k q^(1/l))).  The power sums
of the roots are modular functions holomorphic on the upper half plane, so
each is a polynomial in j recovered from its principal part and constant
term.  Newton's identities then give the coefficients.  Everything is exact
integer arithmetic.

usage: gen_modpoly.py OUTDIR [ell ...]
"""
import sys
from fractions import Fraction
from pathlib import Path

CHECK_TERMS = 4
MOD61 = (1 << 61) - 1


def sigma3(n):
    return sum(d ** 3 for d in range(1, n + 1) if n % d == 0)


def mul(a, b, n):
    out = [0] * n
    for i, x in enumerate(a[:n]):
        if x:
            for k, y in enumerate(b[: n - i]):
                out[i + k] += x * y
    return out


def j_times_q(n):
    """Power series q*j(q) to n terms."""
    e4 = [1] + [240 * sigma3(k) for k in range(1, n)]
    e4cubed = mul(mul(e4, e4, n), e4, n)
    eta24 = [1] + [0] * (n - 1)
    for k in range(1, n):
        factor = [0] * n
        factor[0] = 1
        factor[k] = -1
        for _ in range(24):
            eta24 = mul(eta24, factor, n)
    # e4cubed / eta24, eta24[0] == 1
    h = [0] * n
    for i in range(n):
        acc = e4cubed[i] - sum(h[k] * eta24[i - k] for k in range(i))
        h[i] = acc
    return h


def modular_polynomial(ell):
    deg = ell + 1
    top = ell * deg
    length = top + ell * CHECK_TERMS + deg + 2
    h = j_times_q(length)
    # hp[k][i] = coefficient of q^(i-k) in j^k
    hp = [[1] + [0] * (length - 1)]
    for _ in range(top):
        hp.append(mul(hp[-1], h, length))

    def jpow_coeff(k, e):
        i = e + k
        return hp[k][i] if 0 <= i < length else 0

    power_sums = []
    for m in range(1, deg + 1):
        # series of s_m as dict exponent -> coefficient, exponents -m*ell .. CHECK_TERMS
        s = {}
        for e in range(-m * ell, CHECK_TERMS + 1):
            c = 0
            if e % ell == 0:
                c += jpow_coeff(m, e // ell)
            c += ell * jpow_coeff(m, ell * e)
            s[e] = c
        poly = [0] * (m * ell + 1)
        for k in range(m * ell, 0, -1):
            c = s[-k]
            poly[k] = c
            if c:
                for e in range(-k, CHECK_TERMS + 1):
                    s[e] -= c * jpow_coeff(k, e)
        poly[0] = s[0]
        for e in range(-m * ell, CHECK_TERMS + 1):
            if e != 0 and s[e] != 0:
                raise RuntimeError(f"power sum {m} not a polynomial in j (q^{e})")
        power_sums.append(poly)

    def padd(a, b):
        n = max(len(a), len(b))
        return [(a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0) for i in range(n)]

    def pmul(a, b):
        out = [0] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x:
                for k, y in enumerate(b):
                    out[i + k] += x * y
        return out

    elem = [[Fraction(1)]]
    for m in range(1, deg + 1):
        acc = [Fraction(0)]
        for i in range(1, m + 1):
            term = pmul(elem[m - i], [Fraction(c) for c in power_sums[i - 1]])
            if i % 2 == 0:
                term = [-c for c in term]
            acc = padd(acc, term)
        acc = [c / m for c in acc]
        elem.append(acc)

    coeffs = {}
    for m in range(deg + 1):
        sign = -1 if m % 2 else 1
        for ydeg, c in enumerate(elem[m]):
            if c == 0:
                continue
            if c.denominator != 1:
                raise RuntimeError("non-integral coefficient")
            coeffs[(deg - m, ydeg)] = sign * c.numerator
    for (i, k), c in coeffs.items():
        if coeffs.get((k, i)) != c:
            raise RuntimeError(f"asymmetric coefficient at {(i, k)}")
    return coeffs


def write_file(path, ell, coeffs):
    lines = [f"MODPOLY v1 ell={ell}"]
    checksum = 0
    for (i, k) in sorted(coeffs, reverse=True):
        if i < k:
            continue
        c = coeffs[(i, k)]
        lines.append(f"{i} {k} {c}")
        checksum = (checksum + (i * 131 + k) * (c % MOD61)) % MOD61
    lines.append(f"CHECKSUM {checksum}")
    path.write_text("\n".join(lines) + "\n")


def main():
    out = Path(sys.argv[1])
    ells = [int(a) for a in sys.argv[2:]] or [2, 3, 5, 7, 11, 13]
    out.mkdir(parents=True, exist_ok=True)
    for ell in ells:
        coeffs = modular_polynomial(ell)
        write_file(out / f"phi_{ell}.txt", ell, coeffs)
        print(f"ell={ell}: {len(coeffs)} monomials")


if __name__ == "__main__":
    main()
