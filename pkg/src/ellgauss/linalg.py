"""Dense linear algebra over any field from :mod:`ellgauss.fields`.

Matrices are lists of rows of raw field elements.  Everything is plain
Gaussian elimination; the systems met in point counting have at most a few
dozen unknowns.
"""

from .errors import SingularSystem


def _echelon(R, M):
    """Reduced row echelon form in place; returns the pivot columns."""
    rows = len(M)
    cols = len(M[0]) if rows else 0
    pivots = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        pr = next((i for i in range(r, rows) if not R.is_zero(M[i][c])), None)
        if pr is None:
            continue
        M[r], M[pr] = M[pr], M[r]
        inv = R.inv(M[r][c])
        M[r] = [R.mul(inv, x) for x in M[r]]
        for i in range(rows):
            if i != r and not R.is_zero(M[i][c]):
                f = M[i][c]
                M[i] = [R.sub(x, R.mul(f, y)) for x, y in zip(M[i], M[r])]
        pivots.append(c)
        r += 1
    return pivots


def rank(R, A):
    M = [list(row) for row in A]
    return len(_echelon(R, M)) if M else 0


def solve(R, A, b):
    """One solution x of A x = b (free variables set to zero).

    Raises SingularSystem when the system is inconsistent.
    """
    ncols = len(A[0])
    M = [list(row) + [bi] for row, bi in zip(A, b)]
    pivots = _echelon(R, M)
    if ncols in pivots:
        raise SingularSystem("inconsistent linear system")
    x = [R.zero] * ncols
    for i, c in enumerate(pivots):
        x[c] = M[i][-1]
    return x


def solve_unique(R, A, b):
    """Like :func:`solve` but insists on a unique solution."""
    ncols = len(A[0])
    M = [list(row) + [bi] for row, bi in zip(A, b)]
    pivots = _echelon(R, M)
    if ncols in pivots or len(pivots) < ncols:
        raise SingularSystem("system has no unique solution")
    return [M[i][-1] for i in range(ncols)]


def kernel(R, A):
    """Basis of the right null space of A."""
    ncols = len(A[0])
    M = [list(row) for row in A]
    pivots = _echelon(R, M)
    basis = []
    for free in (c for c in range(ncols) if c not in pivots):
        v = [R.zero] * ncols
        v[free] = R.one
        for i, c in enumerate(pivots):
            v[c] = R.neg(M[i][free])
        basis.append(v)
    return basis


def det(R, A):
    M = [list(row) for row in A]
    n = len(M)
    d = R.one
    for c in range(n):
        pr = next((i for i in range(c, n) if not R.is_zero(M[i][c])), None)
        if pr is None:
            return R.zero
        if pr != c:
            M[c], M[pr] = M[pr], M[c]
            d = R.neg(d)
        d = R.mul(d, M[c][c])
        inv = R.inv(M[c][c])
        for i in range(c + 1, n):
            if not R.is_zero(M[i][c]):
                f = R.mul(M[i][c], inv)
                M[i] = [R.sub(x, R.mul(f, y)) for x, y in zip(M[i], M[c])]
    return d


def matvec(R, A, x):
    out = []
    for row in A:
        acc = R.zero
        for a, b in zip(row, x):
            acc = R.add(acc, R.mul(a, b))
        out.append(acc)
    return out
