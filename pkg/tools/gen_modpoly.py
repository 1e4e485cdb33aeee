"""Generate classical modular polynomials Phi_ell(X, J) from q-expansions.

Writes the line-oriented text format read by ``ellgauss.ray.load_modular_polys``:

    ell <ell>
    i j c          # c * X^i * J^j

Method: with w = q^(1/ell), the roots of Phi_ell(X, j(q)) are j(q^ell) and
j(zeta^k w) for k = 0..ell-1.  The power sums of the last ell roots are ell
times the part of j(w)^m whose w-exponents are multiples of ell; Newton's
identities turn them into elementary symmetric functions, and each
coefficient series is finally rewritten as a polynomial in j by peeling off
poles.  Everything is exact integer arithmetic.

Usage:  python tools/gen_modpoly.py 3 5 7 11 13 > src/ellgauss/data/modpoly.txt
"""

import sys


def sigma3(n):
    return sum(d ** 3 for d in range(1, n + 1) if n % d == 0)


def series_mul(a, b, n):
    """Product of power series a, b (lists, constant first) truncated to n terms."""
    out = [0] * n
    for i, x in enumerate(a[:n]):
        if x:
            for j, y in enumerate(b[: n - i]):
                out[i + j] += x * y
    return out


def series_inv(a, n):
    assert a[0] == 1
    out = [0] * n
    out[0] = 1
    for k in range(1, n):
        out[k] = -sum(a[i] * out[k - i] for i in range(1, min(k, len(a) - 1) + 1))
    return out


def j_coefficients(n):
    """c[0..n-1] with j(q) = sum c[i] q^(i-1)."""
    e4 = [1] + [240 * sigma3(k) for k in range(1, n)]
    prod = [1] + [0] * (n - 1)
    for k in range(1, n):
        factor = [0] * n
        factor[0] = 1
        factor[k] = -1
        prod = series_mul(prod, factor, n)
    p24 = [1] + [0] * (n - 1)
    for _ in range(24):
        p24 = series_mul(p24, prod, n)
    return series_mul(series_mul(series_mul(e4, e4, n), e4, n), series_inv(p24, n), n)


class Laurent:
    """Truncated Laurent series: coefficient of q^(val + i) is c[i], up to q^prec."""

    def __init__(self, val, coeffs, prec):
        self.val = val
        self.prec = prec
        self.c = list(coeffs[: max(0, prec - val + 1)])

    def coeff(self, e):
        i = e - self.val
        return self.c[i] if 0 <= i < len(self.c) else 0

    def __add__(self, other):
        val = min(self.val, other.val)
        prec = min(self.prec, other.prec)
        return Laurent(val, [self.coeff(e) + other.coeff(e) for e in range(val, prec + 1)], prec)

    def scale(self, k):
        return Laurent(self.val, [k * x for x in self.c], self.prec)

    def __sub__(self, other):
        return self + other.scale(-1)

    def __mul__(self, other):
        val = self.val + other.val
        prec = min(self.prec + other.val, other.prec + self.val)
        n = prec - val + 1
        return Laurent(val, series_mul(self.c, other.c, n), prec)

    def exact_div(self, k):
        assert all(x % k == 0 for x in self.c), "non-integral Newton step"
        return Laurent(self.val, [x // k for x in self.c], self.prec)


def modular_polynomial(ell, margin=4):
    prec_q = 2 * ell + 2 * margin
    prec_w = ell * prec_q + ell + 2
    jc = j_coefficients(prec_w + 2)
    jw = Laurent(-1, jc, prec_w)

    # power sums of the ell roots j(zeta^k w) as series in q
    power_sums = []
    cur = Laurent(0, [1], prec_w)
    for m in range(1, ell + 1):
        cur = cur * jw
        lo = -((-cur.val) // ell) if cur.val < 0 else (cur.val + ell - 1) // ell
        coeffs = [ell * cur.coeff(ell * e) for e in range(lo, cur.prec // ell + 1)]
        power_sums.append(Laurent(lo, coeffs, cur.prec // ell))

    # elementary symmetric functions via Newton's identities
    elem = [Laurent(0, [1], prec_q)]
    for k in range(1, ell + 1):
        acc = Laurent(0, [0], prec_q)
        for i in range(1, k + 1):
            term = elem[k - i] * power_sums[i - 1]
            acc = acc + (term if i % 2 else term.scale(-1))
        elem.append(acc.exact_div(k))

    # Psi(X) = sum_k (-1)^k e_k X^(ell-k); Phi = (X - j(q^ell)) Psi
    psi = {ell - k: (elem[k] if k % 2 == 0 else elem[k].scale(-1)) for k in range(ell + 1)}
    jl_coeffs = [0] * (ell * (prec_q // ell + 2) + 1)
    for i, c in enumerate(jc[: prec_q // ell + 3]):
        if i * ell < len(jl_coeffs):
            jl_coeffs[i * ell] = c
    j_ell = Laurent(-ell, jl_coeffs, prec_q)
    zero = Laurent(0, [0], prec_q)
    phi = {}
    for i in range(ell + 2):
        s = psi.get(i - 1, zero) - j_ell * psi.get(i, zero)
        phi[i] = s

    # powers of j in q, for rewriting each coefficient series as a polynomial in J
    jq = Laurent(-1, jc, ell + 6)
    jpow = [Laurent(0, [1], ell + 6)]
    for _ in range(ell + 1):
        jpow.append(jpow[-1] * jq)

    result = {}
    for i, s in phi.items():
        top = ell + 1
        for c in range(top, -1, -1):
            a = s.coeff(-c)
            if a:
                result[(i, c)] = a
                s = s - jpow[c].scale(a)
        assert s.prec >= 1, "insufficient precision"
        for e in range(-top - 1, 2):
            assert s.coeff(e) == 0, f"residual at q^{e} for X^{i}"
    for (i, c), v in result.items():
        assert result.get((c, i)) == v, "Phi is not symmetric"
    return result


def main(argv):
    ells = [int(a) for a in argv] or [3, 5, 7, 11, 13]
    out = sys.stdout
    out.write("# classical modular polynomials Phi_ell(X, J), generated by tools/gen_modpoly.py\n")
    out.write("# line format: i j c  meaning c * X^i * J^j\n")
    for ell in ells:
        phi = modular_polynomial(ell)
        out.write(f"ell {ell}\n")
        for (i, c) in sorted(phi):
            out.write(f"{i} {c} {phi[(i, c)]}\n")


if __name__ == "__main__":
    main(sys.argv[1:])
