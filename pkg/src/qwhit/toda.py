"""Deformed quantum Toda Hamiltonians as exact difference operators.

Torus functions are Laurent polynomials in z_1..z_l, where z_i stands for the
exponential e^{-h(y, alpha_i)}.  A difference operator is a finite sum of
terms coeff(z) * T_lam with rational-weight shifts lam, composed through the
exact rule T_lam z_i = q^{-(lam, alpha_i)} z_i T_lam.  The Hamiltonians come
out of the Whittaker generators of the centre: project a Casimir, send f_i
to chibar(f_i) z_i and K_lam to T_lam, then conjugate by the half-sum twist
q^{-(rho, lam)}.

Sign note: the potential of the closed-form type-A Hamiltonian is
+(q - q^{-1})^2 chi_i chibar_i z_i, the sign the trace pipeline produces and
the one whose quasiclassical limit matches the classical operator with
potential +sum_i chi_i chibar_i e^{-alpha_i(y)}.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from . import uqalg
from .qarith import LaurentScalar, qpow


class DifferenceOperator:
    """Finite map {shift lam -> {z-exponent -> scalar}} over a root system."""

    __slots__ = ("rs", "terms")

    def __init__(self, rs, terms=None):
        self.rs = rs
        clean = {}
        for lam, zpart in (terms or {}).items():
            zclean = {z: c for z, c in zpart.items() if not c.is_zero()}
            if zclean:
                clean[tuple(Fraction(x) for x in lam)] = zclean
        self.terms = clean

    # -- constructors --------------------------------------------------------
    @classmethod
    def zero(cls, rs):
        return cls(rs)

    @classmethod
    def identity(cls, rs):
        return cls.shift(rs, (0,) * rs.rank)

    @classmethod
    def shift(cls, rs, lam, coeff=None):
        zero_z = (0,) * rs.rank
        return cls(rs, {tuple(lam): {zero_z: coeff if coeff is not None else qpow(0)}})

    @classmethod
    def z_monomial(cls, rs, zexp, coeff=None):
        lam0 = (Fraction(0),) * rs.rank
        return cls(rs, {lam0: {tuple(zexp): coeff if coeff is not None else qpow(0)}})

    # -- ring structure ------------------------------------------------------
    def is_zero(self):
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        return isinstance(other, DifferenceOperator) and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(
            (lam, z, c) for lam, zp in self.terms.items() for z, c in zp.items()
        ))

    def __add__(self, other):
        out = {lam: dict(zp) for lam, zp in self.terms.items()}
        for lam, zpart in other.terms.items():
            slot = out.setdefault(lam, {})
            for z, c in zpart.items():
                slot[z] = slot[z] + c if z in slot else c
        return DifferenceOperator(self.rs, out)

    def __neg__(self):
        return self.scale(LaurentScalar.from_rational(-1))

    def __sub__(self, other):
        return self + (-other)

    def scale(self, scalar):
        out = {
            lam: {z: c * scalar for z, c in zpart.items()}
            for lam, zpart in self.terms.items()
        }
        return DifferenceOperator(self.rs, out)

    def __mul__(self, other):
        """Operator composition: self after other."""
        if isinstance(other, LaurentScalar):
            return self.scale(other)
        out = {}
        for lam1, zp1 in self.terms.items():
            for lam2, zp2 in other.terms.items():
                lam = tuple(a + b for a, b in zip(lam1, lam2))
                slot = out.setdefault(lam, {})
                for a, c1 in zp1.items():
                    for b, c2 in zp2.items():
                        # commute T_{lam1} past z^b
                        c = c1 * c2 * qpow(-self.rs.pair(lam1, b))
                        z = tuple(x + y for x, y in zip(a, b))
                        slot[z] = slot[z] + c if z in slot else c
        return DifferenceOperator(self.rs, out)

    def apply(self, func):
        """Act on a torus function given as {z-exponent -> scalar}."""
        out = {}
        for lam, zpart in self.terms.items():
            for b, d in func.items():
                shifted = d * qpow(-self.rs.pair(lam, b))
                for a, c in zpart.items():
                    z = tuple(x + y for x, y in zip(a, b))
                    val = c * shifted
                    out[z] = out[z] + val if z in out else val
        return {z: c for z, c in out.items() if not c.is_zero()}

    def __str__(self):
        if not self.terms:
            return "0"
        bits = []
        for lam in sorted(self.terms):
            for z in sorted(self.terms[lam]):
                c = self.terms[lam][z]
                factors = []
                for i, a in enumerate(z):
                    if a:
                        factors.append(f"z{i + 1}" + (f"^{a}" if a != 1 else ""))
                if any(lam):
                    factors.append("T[" + ",".join(str(x) for x in lam) + "]")
                mono = "*".join(factors) if factors else "1"
                bits.append(f"({c})*{mono}")
        return " + ".join(bits)

    __repr__ = __str__


def commutator(d1, d2):
    return d1 * d2 - d2 * d1


def lower_rep(y, chibar):
    """Difference operator of a lower-Borel element: f_i becomes the
    multiplication operator chibar(f_i) z_i and K_lam becomes the shift T_lam.

    Opposite combinations of f-letters that add up to a non-simple root
    vector cancel on the nose, because the z_i commute.
    """
    if chibar.side != "f":
        raise ValueError("lower_rep needs an f-side character")
    alg = y.alg
    rank = alg.rs.rank
    out = {}
    for (fw, lam, ew), c in y.terms.items():
        if ew:
            raise ValueError("lower_rep applies to elements without e-letters")
        zexp = [0] * rank
        coeff = c
        for i in fw:
            zexp[i] += 1
            coeff = coeff * chibar.values[i]
        slot = out.setdefault(lam, {})
        z = tuple(zexp)
        slot[z] = slot[z] + coeff if z in slot else coeff
    return DifferenceOperator(alg.rs, out)


def phi_conjugate(op):
    """Conjugate by multiplication with the rho-exponential: each shift T_lam
    picks up the scalar q^{-(rho, lam)}."""
    rho = op.rs.rho
    out = {
        lam: {z: c * qpow(-op.rs.pair(rho, lam)) for z, c in zpart.items()}
        for lam, zpart in op.terms.items()
    }
    return DifferenceOperator(op.rs, out)


def toda_hamiltonian(alg, rep_name, chi, chibar):
    """Hamiltonian of one fundamental representation: project the Casimir to
    the Whittaker model, lower to a difference operator, conjugate by rho."""
    rep = uqalg.rep_matrices(alg, rep_name)
    gen = uqalg.whittaker_generator(alg, rep, chi)
    return phi_conjugate(lower_rep(gen, chibar))


def closed_form_M1(alg, chi_vals, chibar_vals):
    """Type-A first Hamiltonian in closed form: sum of squared weight shifts
    plus the nearest-neighbour potential.

    Accepts raw value tuples so the degenerate case (all couplings zero,
    free Hamiltonian) stays expressible; the pipeline itself needs
    non-singular characters.
    """
    if alg.rs.series != "A":
        raise ValueError("the closed form is specific to type A")
    rep = uqalg.rep_matrices(alg, "V1")
    rank = alg.rs.rank
    vals = [
        v if isinstance(v, LaurentScalar) else LaurentScalar.from_rational(v)
        for v in chi_vals
    ]
    vbars = [
        v if isinstance(v, LaurentScalar) else LaurentScalar.from_rational(v)
        for v in chibar_vals
    ]
    rs = alg.rs
    out = DifferenceOperator.zero(rs)
    for mu in rep.weights:
        out = out + DifferenceOperator.shift(rs, tuple(2 * x for x in mu))
    coupling = (qpow(1) - qpow(-1)) * (qpow(1) - qpow(-1))
    for i in range(rank):
        lam = tuple(a + b for a, b in zip(rep.weights[i], rep.weights[i + 1]))
        zexp = tuple(1 if k == i else 0 for k in range(rank))
        c = coupling * vals[i] * vbars[i]
        term = DifferenceOperator(rs, {lam: {zexp: c}})
        out = out + term
    return out


@dataclass(frozen=True)
class TodaSystem:
    alg: object
    chi: uqalg.Character
    chibar: uqalg.Character
    hamiltonians: tuple


def build_toda_system(alg, chi_vals, chibar_vals):
    """All fundamental-representation Hamiltonians for one type-A algebra."""
    chi = uqalg.character("e", chi_vals)
    chibar = uqalg.character("f", chibar_vals)
    hams = tuple(
        toda_hamiltonian(alg, f"V{k + 1}", chi, chibar)
        for k in range(alg.rs.rank)
    )
    return TodaSystem(alg=alg, chi=chi, chibar=chibar, hamiltonians=hams)


def eps_series(scalar, order):
    """Exact Taylor coefficients of scalar(q = 1 + eps) up to eps^order."""

    def expand(d):
        out = [Fraction(0)] * (order + 1)
        for e, c in d.items():
            binom = Fraction(1)
            for k in range(order + 1):
                out[k] += c * binom
                binom = binom * (e - k) / (k + 1)
        return out

    num = expand(scalar.num)
    den = expand(scalar.den)
    if den[0] == 0:
        raise ZeroDivisionError("coefficient has a pole at q = 1")
    inv = [Fraction(0)] * (order + 1)
    inv[0] = 1 / den[0]
    for k in range(1, order + 1):
        acc = sum(den[j] * inv[k - j] for j in range(1, k + 1))
        inv[k] = -acc / den[0]
    return [
        sum(num[j] * inv[k - j] for j in range(k + 1))
        for k in range(order + 1)
    ]


def quasiclassical_potential_check(system):
    """Compare the first Hamiltonian against the classical Toda operator at
    q = 1 + eps.

    The kinetic terms must carry coefficient exactly 1 (so they degenerate to
    squared shifts), each simple-root potential coefficient must vanish to
    first order and open with +4 chi_i chibar_i at eps^2, and the classical
    additive constant (rho, rho) is reported but deliberately not matched.
    """
    alg = system.alg
    rs = alg.rs
    if rs.series != "A" or rs.rank > 2:
        raise ValueError("the quasiclassical check is wired for A_1 and A_2")
    m1 = system.hamiltonians[0]
    report = {
        "ok": True,
        "kinetic": [],
        "potential": [],
        "ignored_constant": str(rs.pair(rs.rho, rs.rho)),
        "sign_convention": "potential opens with +4 chi_i chibar_i at eps^2",
    }
    zero_z = (0,) * rs.rank
    for lam, zpart in sorted(m1.terms.items()):
        for zexp, coeff in sorted(zpart.items()):
            if zexp == zero_z:
                ok = coeff == qpow(0)
                report["kinetic"].append({
                    "shift": [str(x) for x in lam],
                    "coeff": str(coeff),
                    "ok": ok,
                })
                report["ok"] = report["ok"] and ok
                continue
            if sum(zexp) != 1:
                report["potential"].append({
                    "shift": [str(x) for x in lam],
                    "z": list(zexp),
                    "coeff": str(coeff),
                    "ok": False,
                    "note": "unexpected multi-z potential term",
                })
                report["ok"] = False
                continue
            i = zexp.index(1)
            series = eps_series(coeff, 2)
            prod = system.chi.values[i] * system.chibar.values[i]
            expected = 4 * eps_series(prod, 0)[0]
            ok = series[0] == 0 and series[1] == 0 and series[2] == expected
            report["potential"].append({
                "z": list(zexp),
                "series": [str(x) for x in series],
                "expected_eps2": str(expected),
                "ok": ok,
            })
            report["ok"] = report["ok"] and ok
    return report
