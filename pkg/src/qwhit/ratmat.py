"""Dense exact linear algebra over the rationals.

Matrices are tuples of tuples of Fraction (immutable, hashable); vectors are
tuples of Fraction.  Everything here is small and dense: ranks stay below ten
or so throughout the package.
"""

from __future__ import annotations

from fractions import Fraction

F0 = Fraction(0)
F1 = Fraction(1)

Vec = tuple
Mat = tuple


def vec(xs) -> Vec:
    return tuple(Fraction(x) for x in xs)


def mat(rows) -> Mat:
    return tuple(tuple(Fraction(x) for x in row) for row in rows)


def eye(n: int) -> Mat:
    return tuple(tuple(F1 if i == j else F0 for j in range(n)) for i in range(n))


def zeros(n: int, m: int | None = None) -> Mat:
    m = n if m is None else m
    return tuple((F0,) * m for _ in range(n))


def madd(a: Mat, b: Mat) -> Mat:
    return tuple(tuple(x + y for x, y in zip(ra, rb)) for ra, rb in zip(a, b))


def msub(a: Mat, b: Mat) -> Mat:
    return tuple(tuple(x - y for x, y in zip(ra, rb)) for ra, rb in zip(a, b))


def mscale(a: Mat, s) -> Mat:
    s = Fraction(s)
    return tuple(tuple(x * s for x in row) for row in a)


def mmul(a: Mat, b: Mat) -> Mat:
    bt = tuple(zip(*b))
    return tuple(tuple(sum(x * y for x, y in zip(row, col)) for col in bt) for row in a)


def mvec(a: Mat, v: Vec) -> Vec:
    return tuple(sum(x * y for x, y in zip(row, v)) for row in a)


def vadd(u: Vec, v: Vec) -> Vec:
    return tuple(x + y for x, y in zip(u, v))


def vsub(u: Vec, v: Vec) -> Vec:
    return tuple(x - y for x, y in zip(u, v))


def vscale(u: Vec, s) -> Vec:
    s = Fraction(s)
    return tuple(x * s for x in u)


def transpose(a: Mat) -> Mat:
    return tuple(zip(*a))


def minv(a: Mat) -> Mat:
    n = len(a)
    work = [list(row) + [F1 if i == j else F0 for j in range(n)]
            for i, row in enumerate(a)]
    for col in range(n):
        piv = next((r for r in range(col, n) if work[r][col]), None)
        if piv is None:
            raise ZeroDivisionError("singular matrix")
        work[col], work[piv] = work[piv], work[col]
        inv = 1 / work[col][col]
        work[col] = [x * inv for x in work[col]]
        for r in range(n):
            if r != col and work[r][col]:
                f = work[r][col]
                work[r] = [x - f * y for x, y in zip(work[r], work[col])]
    return tuple(tuple(row[n:]) for row in work)


def det(a: Mat) -> Fraction:
    n = len(a)
    work = [list(row) for row in a]
    out = F1
    for col in range(n):
        piv = next((r for r in range(col, n) if work[r][col]), None)
        if piv is None:
            return F0
        if piv != col:
            work[col], work[piv] = work[piv], work[col]
            out = -out
        out *= work[col][col]
        inv = 1 / work[col][col]
        for r in range(col + 1, n):
            if work[r][col]:
                f = work[r][col] * inv
                work[r] = [x - f * y for x, y in zip(work[r], work[col])]
    return out


def charpoly(a: Mat) -> list[Fraction]:
    """Coefficients [c_0..c_n] of det(tI - a) = sum c_k t^k, exact
    Faddeev-LeVerrier recursion."""
    n = len(a)
    coeffs = [F0] * (n + 1)
    coeffs[n] = F1
    m = zeros(n)
    c = F1
    for k in range(1, n + 1):
        m = mmul(a, madd(m, mscale(eye(n), c)))
        c = -Fraction(sum(m[i][i] for i in range(n)), k)
        coeffs[n - k] = c
    return coeffs


def solve(a: Mat, b: Vec) -> Vec | None:
    """One solution of a x = b, or None when inconsistent.  Requires the
    system to determine x uniquely on its pivot columns; free columns get 0."""
    n, m = len(a), len(a[0])
    work = [list(row) + [bv] for row, bv in zip(a, b)]
    pivots = []
    r = 0
    for col in range(m):
        piv = next((i for i in range(r, n) if work[i][col]), None)
        if piv is None:
            continue
        work[r], work[piv] = work[piv], work[r]
        inv = 1 / work[r][col]
        work[r] = [x * inv for x in work[r]]
        for i in range(n):
            if i != r and work[i][col]:
                f = work[i][col]
                work[i] = [x - f * y for x, y in zip(work[i], work[r])]
        pivots.append(col)
        r += 1
        if r == n:
            break
    for i in range(r, n):
        if work[i][m]:
            return None
    x = [F0] * m
    for i, col in enumerate(pivots):
        x[col] = work[i][m]
    return tuple(x)


def rank(a: Mat) -> int:
    n, m = len(a), len(a[0])
    work = [list(row) for row in a]
    r = 0
    for col in range(m):
        piv = next((i for i in range(r, n) if work[i][col]), None)
        if piv is None:
            continue
        work[r], work[piv] = work[piv], work[r]
        inv = 1 / work[r][col]
        work[r] = [x * inv for x in work[r]]
        for i in range(n):
            if i != r and work[i][col]:
                f = work[i][col]
                work[i] = [x - f * y for x, y in zip(work[i], work[r])]
        r += 1
        if r == n:
            break
    return r


def kernel_basis(a: Mat) -> list[Vec]:
    n, m = len(a), len(a[0])
    work = [list(row) for row in a]
    pivots: list[int] = []
    r = 0
    for col in range(m):
        piv = next((i for i in range(r, n) if work[i][col]), None)
        if piv is None:
            continue
        work[r], work[piv] = work[piv], work[r]
        inv = 1 / work[r][col]
        work[r] = [x * inv for x in work[r]]
        for i in range(n):
            if i != r and work[i][col]:
                f = work[i][col]
                work[i] = [x - f * y for x, y in zip(work[i], work[r])]
        pivots.append(col)
        r += 1
    free = [c for c in range(m) if c not in pivots]
    basis = []
    for fc in free:
        v = [F0] * m
        v[fc] = F1
        for i, pc in enumerate(pivots):
            v[pc] = -work[i][fc]
        basis.append(tuple(v))
    return basis


def span_equals(a: list[Vec], b: list[Vec]) -> bool:
    """Do two lists of row vectors span the same subspace?"""
    ra = rank(tuple(a)) if a else 0
    rb = rank(tuple(b)) if b else 0
    if not a and not b:
        return True
    both = rank(tuple(list(a) + list(b)))
    return ra == rb == both
