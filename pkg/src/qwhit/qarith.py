"""Exact arithmetic in the quantum parameter.

Scalars live in the field of fractions of Laurent polynomials in rational
powers of q, with rational coefficients.  Every value is kept in a canonical
reduced form, so equality testing is literal dictionary comparison and a zero
test never needs numerics.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd, lcm

F0 = Fraction(0)
F1 = Fraction(1)


def _as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    raise TypeError(f"expected an exact rational, got {type(x).__name__}")


# ---------------------------------------------------------------------------
# dense polynomial helpers (index = exponent, Fraction coefficients)

def _trim(a: list[Fraction]) -> list[Fraction]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _dense_divmod(a: list[Fraction], b: list[Fraction]):
    a = a[:]
    q = [F0] * (max(len(a) - len(b) + 1, 0))
    inv_lead = 1 / b[-1]
    for k in range(len(a) - len(b), -1, -1):
        c = a[k + len(b) - 1] * inv_lead
        if c:
            q[k] = c
            for i, bc in enumerate(b):
                a[k + i] -= c * bc
    return q, _trim(a)


def _dense_gcd(a: list[Fraction], b: list[Fraction]) -> list[Fraction]:
    a, b = a[:], b[:]
    while b:
        _, r = _dense_divmod(a, b)
        a, b = b, r
    # monic normalisation
    inv = 1 / a[-1]
    return [c * inv for c in a]


def _canonical(num: dict, den: dict):
    """Reduce num/den so den is a polynomial in q^{1/L} with constant term 1
    and gcd(num shifted to a polynomial, den) = 1."""
    num = {e: c for e, c in num.items() if c}
    den = {e: c for e, c in den.items() if c}
    if not den:
        raise ZeroDivisionError("laurent scalar with zero denominator")
    if not num:
        return {}, {F0: F1}
    if len(den) == 1:
        (e0, c0), = den.items()
        if e0 == 0 and c0 == 1:
            return num, {F0: F1}
        return {e - e0: c / c0 for e, c in num.items()}, {F0: F1}
    L = lcm(*(e.denominator for e in list(num) + list(den)))
    ni = {int(e * L): c for e, c in num.items()}
    di = {int(e * L): c for e, c in den.items()}
    mn, md = min(ni), min(di)
    a = [F0] * (max(ni) - mn + 1)
    for e, c in ni.items():
        a[e - mn] = c
    b = [F0] * (max(di) - md + 1)
    for e, c in di.items():
        b[e - md] = c
    g = _dense_gcd(a, b)
    if len(g) > 1:
        a, _ = _dense_divmod(a, g)
        b, _ = _dense_divmod(b, g)
    scale = 1 / b[0]
    shift = mn - md
    num_out = {Fraction(i + shift, L): c * scale for i, c in enumerate(a) if c}
    den_out = {Fraction(i, L): c * scale for i, c in enumerate(b) if c}
    if len(den_out) == 1:
        return _canonical(num_out, den_out)
    return num_out, den_out


class LaurentScalar:
    """Canonical rational function in q (fractional exponents allowed)."""

    __slots__ = ("num", "den")

    def __init__(self, num: dict, den: dict | None = None, *, canonical: bool = False):
        if den is None:
            den = {F0: F1}
        if canonical:
            self.num, self.den = num, den
        else:
            self.num, self.den = _canonical(num, den)

    # -- constructors -------------------------------------------------------
    @classmethod
    def zero(cls) -> "LaurentScalar":
        return cls({}, {F0: F1}, canonical=True)

    @classmethod
    def one(cls) -> "LaurentScalar":
        return cls({F0: F1}, {F0: F1}, canonical=True)

    @classmethod
    def from_rational(cls, r) -> "LaurentScalar":
        r = _as_fraction(r)
        if not r:
            return cls.zero()
        return cls({F0: r}, {F0: F1}, canonical=True)

    @classmethod
    def q_power(cls, e) -> "LaurentScalar":
        return cls({_as_fraction(e): F1}, {F0: F1}, canonical=True)

    @classmethod
    def monomial(cls, coeff, e) -> "LaurentScalar":
        coeff = _as_fraction(coeff)
        if not coeff:
            return cls.zero()
        return cls({_as_fraction(e): coeff}, {F0: F1}, canonical=True)

    # -- predicates ---------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.num

    def is_one(self) -> bool:
        return self.num == {F0: F1} and self.den == {F0: F1}

    def __bool__(self) -> bool:
        return bool(self.num)

    def is_polynomial(self) -> bool:
        return self.den == {F0: F1}

    # -- arithmetic ---------------------------------------------------------
    def _coerce(self, other):
        if isinstance(other, LaurentScalar):
            return other
        if isinstance(other, (int, Fraction)):
            return LaurentScalar.from_rational(other)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if self.den == o.den:
            num = dict(self.num)
            for e, c in o.num.items():
                num[e] = num.get(e, F0) + c
            return LaurentScalar(num, dict(self.den))
        num = _dict_mul(self.num, o.den)
        for e, c in _dict_mul(o.num, self.den).items():
            num[e] = num.get(e, F0) + c
        return LaurentScalar(num, _dict_mul(self.den, o.den))

    __radd__ = __add__

    def __neg__(self):
        return LaurentScalar({e: -c for e, c in self.num.items()}, dict(self.den),
                             canonical=True)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if not self.num or not o.num:
            return LaurentScalar.zero()
        return LaurentScalar(_dict_mul(self.num, o.num), _dict_mul(self.den, o.den))

    __rmul__ = __mul__

    def inverse(self) -> "LaurentScalar":
        if not self.num:
            raise ZeroDivisionError("inverting zero laurent scalar")
        return LaurentScalar(dict(self.den), dict(self.num))

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    def __pow__(self, n: int):
        if not isinstance(n, int):
            return NotImplemented
        if n == 0:
            return LaurentScalar.one()
        base = self if n > 0 else self.inverse()
        out = LaurentScalar.one()
        for _ in range(abs(n)):
            out = out * base
        return out

    def __eq__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self.num == o.num and self.den == o.den

    def __hash__(self):
        return hash((frozenset(self.num.items()), frozenset(self.den.items())))

    # -- involutions and expansions ----------------------------------------
    def bar(self) -> "LaurentScalar":
        """The substitution q -> q^{-1}."""
        return LaurentScalar({-e: c for e, c in self.num.items()},
                             {-e: c for e, c in self.den.items()})

    def as_rational(self) -> Fraction:
        if not self.num:
            return F0
        if self.num.keys() == {F0} and self.den == {F0: F1}:
            return self.num[F0]
        raise ValueError(f"{self} is not a constant")

    def eps_series(self, order: int) -> list[Fraction]:
        """Coefficients of eps^0..eps^order after substituting q = 1 + eps.

        Requires a polynomial value (trivial denominator); exponents may be
        fractional, handled by the generalised binomial series.
        """
        if not self.is_polynomial():
            raise ValueError("eps expansion requires a laurent polynomial")
        out = [F0] * (order + 1)
        for e, c in self.num.items():
            term = F1
            for k in range(order + 1):
                out[k] += c * term
                term = term * (e - k) / (k + 1)
        return out

    # -- formatting ---------------------------------------------------------
    @staticmethod
    def _poly_str(p: dict, var: str) -> str:
        if not p:
            return "0"
        parts = []
        for e in sorted(p):
            c = p[e]
            if e == 0:
                parts.append(str(c))
            else:
                es = str(e) if e.denominator == 1 else f"({e})"
                head = f"{var}^{es}" if e != 1 else var
                parts.append(head if c == 1 else f"{c}*{head}")
        return " + ".join(parts).replace("+ -", "- ")

    def to_str(self, var: str = "q") -> str:
        ns = self._poly_str(self.num, var)
        if self.den == {F0: F1}:
            return ns
        return f"({ns})/({self._poly_str(self.den, var)})"

    def __str__(self):
        return self.to_str()

    def __repr__(self):
        return f"LaurentScalar({self.to_str()})"


def _dict_mul(a: dict, b: dict) -> dict:
    out: dict = {}
    for ea, ca in a.items():
        for eb, cb in b.items():
            e = ea + eb
            out[e] = out.get(e, F0) + ca * cb
    return out


ZERO = LaurentScalar.zero()
ONE = LaurentScalar.one()
Q = LaurentScalar.q_power(1)


def qpow(e) -> LaurentScalar:
    return LaurentScalar.q_power(e)


# ---------------------------------------------------------------------------
# balanced q-numbers: [n] = (q^n - q^-n)/(q - q^-1), in base q^d

def q_int(n: int, d=1) -> LaurentScalar:
    d = _as_fraction(d)
    if n < 0:
        return -q_int(-n, d)
    num = {}
    for k in range(n):
        e = d * (n - 1 - 2 * k)
        num[e] = num.get(e, F0) + 1
    return LaurentScalar(num)


def q_factorial(n: int, d=1) -> LaurentScalar:
    out = ONE
    for k in range(2, n + 1):
        out = out * q_int(k, d)
    return out


def q_binom(m: int, k: int, d=1) -> LaurentScalar:
    """Balanced q-binomial [m choose k] in base q^d."""
    if k < 0 or k > m:
        return ZERO
    value = q_factorial(m, d) / (q_factorial(k, d) * q_factorial(m - k, d))
    if not value.is_polynomial():
        raise ArithmeticError("q-binomial failed to reduce to a polynomial")
    return value


# unbalanced q-numbers (n)_t = (t^n - 1)/(t - 1), used by the q-exponential

def q_paren(n: int, t: LaurentScalar) -> LaurentScalar:
    out = ZERO
    p = ONE
    for _ in range(n):
        out = out + p
        p = p * t
    return out


def q_paren_factorial(n: int, t: LaurentScalar) -> LaurentScalar:
    out = ONE
    for k in range(2, n + 1):
        out = out * q_paren(k, t)
    return out


def gauss_product_check(m: int, c: int) -> LaurentScalar:
    """Return sum_k (-1)^k [m choose k] q^{kc} after checking it equals the
    factored form prod_{p=0}^{m-1} (1 - q^{m-1-2p+c})."""
    total = ZERO
    for k in range(m + 1):
        term = q_binom(m, k) * qpow(k * c)
        total = total + term if k % 2 == 0 else total - term
    prod = ONE
    for p in range(m):
        prod = prod * (ONE - qpow(m - 1 - 2 * p + c))
    if total != prod:
        raise ArithmeticError(f"q-binomial sum failed product identity (m={m}, c={c})")
    return total


def qbinom_root_scan(m: int, c_range=None) -> list[int]:
    """Integer exponents c within c_range where the alternating q-binomial sum
    vanishes identically.  The factored form shows these are exactly
    m-1-2p for p = 0..m-1."""
    if c_range is None:
        c_range = range(-(m + 2), m + 3)
    return [c for c in c_range if gauss_product_check(m, c).is_zero()]


# ---------------------------------------------------------------------------
# minimal dense matrix helpers over any ring with +, -, * and is_zero();
# scalars multiply entries from the right so ring elements may embed scalars.

def mat_eye(n: int, one, zero):
    return [[one if i == j else zero for j in range(n)] for i in range(n)]


def mat_mul(a, b, zero):
    n, m, p = len(a), len(b), len(b[0])
    out = [[zero for _ in range(p)] for _ in range(n)]
    for i in range(n):
        ai = a[i]
        oi = out[i]
        for k in range(m):
            c = ai[k]
            if hasattr(c, "is_zero") and c.is_zero():
                continue
            bk = b[k]
            for j in range(p):
                d = bk[j]
                if hasattr(d, "is_zero") and d.is_zero():
                    continue
                oi[j] = oi[j] + c * d
    return out


def mat_add(a, b):
    return [[x + y for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def mat_sub(a, b):
    return [[x - y for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def mat_scale(a, s):
    return [[x * s for x in row] for row in a]


def mat_is_zero(a) -> bool:
    return all(x.is_zero() for row in a for x in row)


def mat_eq(a, b) -> bool:
    return mat_is_zero(mat_sub(a, b))


def mat_trace(a, zero):
    out = zero
    for i in range(len(a)):
        out = out + a[i][i]
    return out


def mat_kron(a, b, zero):
    n, m = len(a), len(b)
    out = [[zero for _ in range(n * m)] for _ in range(n * m)]
    for i in range(n):
        for j in range(n):
            c = a[i][j]
            if hasattr(c, "is_zero") and c.is_zero():
                continue
            for k in range(m):
                for l in range(m):
                    d = b[k][l]
                    if hasattr(d, "is_zero") and d.is_zero():
                        continue
                    out[i * m + k][j * m + l] = c * d
    return out


def q_exp_nilpotent(x, t: LaurentScalar, one, zero):
    """exp_t(x) = sum_k x^k / (k)_t! for a nilpotent matrix x.

    The factorial uses the unbalanced (k)_t = (t^k - 1)/(t - 1).  Raises if x
    fails to be nilpotent within dim(x) + 1 steps.
    """
    n = len(x)
    out = mat_eye(n, one, zero)
    term = mat_eye(n, one, zero)
    fact = ONE
    for k in range(1, n + 2):
        term = mat_mul(term, x, zero)
        if mat_is_zero(term):
            return out
        fact = fact * q_paren(k, t)
        out = mat_add(out, mat_scale(term, fact.inverse()))
    raise ArithmeticError("q_exp_nilpotent: matrix is not nilpotent")


def mat_inv_unipotent(x, one, zero):
    """Inverse of a matrix of the form 1 + n with n nilpotent (Neumann sum)."""
    m = len(x)
    eye = mat_eye(m, one, zero)
    n = mat_sub(x, eye)
    out = mat_eye(m, one, zero)
    term = mat_eye(m, one, zero)
    for k in range(1, m + 2):
        term = mat_mul(term, n, zero)
        if mat_is_zero(term):
            return out
        out = mat_add(out, term) if k % 2 == 0 else mat_sub(out, term)
    raise ArithmeticError("mat_inv_unipotent: 1 - x is not nilpotent")
