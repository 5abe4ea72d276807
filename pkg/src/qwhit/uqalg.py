"""Quantized enveloping algebras presented on a Coxeter element.

The algebra has generators e_i, f_i and group-likes K_lam for rational weights
lam, subject to the cross relation e_i f_j - q^{c_ji} f_j e_i =
delta_ij (K_i - K_i^{-1})/(q_i - q_i^{-1}) and deformed Serre relations whose
coefficients carry the Cayley pairing c_ij of the chosen Coxeter element.
The relative orientation of the cross and Serre exponents is forced: with
both Serre sides at q^{r c_ij}, only the c_ji cross closes the diamond on
words like e_1 f_2 f_1 f_1, and it is the one the realization map produces.
Elements are kept in a normal form f-word * K * e-word, with one-sided words
reduced by a Groebner-completed rewriting system, so equality and the zero
test are structural.
"""

from __future__ import annotations

import itertools
import os
from dataclasses import dataclass
from fractions import Fraction
from math import comb

from . import qarith, ratmat, rootsys
from .qarith import ONE, ZERO, LaurentScalar, q_binom, qpow

STEP_BUDGET = int(os.environ.get("QWHIT_STEP_BUDGET", "5000000"))


def _word_key(rank_of, word):
    return (len(word), tuple(rank_of[x] for x in word))


class Algebra:
    """Coxeter presentation of the quantized enveloping algebra for ctx.

    Holds the straightening rules for one-sided words (shared by the e and f
    sides, whose deformed Serre relations are identical in shape), the
    adapted normal ordering of the positive roots, and memo tables for the
    cross-relation rewriting.
    """

    def __init__(self, ctx: rootsys.CoxeterContext):
        self.ctx = ctx
        self.rs = ctx.rs
        self.rank = ctx.rs.rank
        self.zero_weight = tuple(Fraction(0) for _ in range(self.rank))
        # letters are 0-based generator indices ordered by their pi position
        pos = {v - 1: k for k, v in enumerate(ctx.pi)}
        self.letter_rank = [pos[i] for i in range(self.rank)]
        self.ordering = rootsys.normal_ordering(ctx)
        self._steps = 0
        self._reduce_cache: dict = {}
        self._etf_cache: dict = {}
        self._root_vector_cache: dict = {}
        self._a_cache: dict = {}
        s = ratmat.mat(ctx.s_matrix)
        one = ratmat.eye(self.rank)
        self.cayley_op = ratmat.mmul(ratmat.madd(one, s),
                                     ratmat.minv(ratmat.msub(one, s)))
        self.rules = self._serre_groebner()

    # -- bookkeeping ---------------------------------------------------------
    def _tick(self, n=1):
        self._steps += n
        if self._steps > STEP_BUDGET:
            raise ArithmeticError(
                f"rewriting exceeded the step budget ({STEP_BUDGET}); "
                "set QWHIT_STEP_BUDGET higher for larger computations"
            )

    def weight(self, vec):
        return tuple(Fraction(x) for x in vec)

    def simple_weight(self, i):
        return self.weight(self.rs.simple_root(i))

    def word_weight(self, word):
        out = [0] * self.rank
        for i in word:
            out[i] += 1
        return tuple(out)

    def q_i(self, i):
        return self.rs.d[i]

    def c_pair(self, i, j):
        return self.ctx.cayley[i][j]

    def cayley_apply(self, vec):
        return ratmat.mvec(self.cayley_op, [Fraction(x) for x in vec])

    # -- straightening rules for one-sided words ------------------------------
    def _serre_relators(self):
        relators = []
        for i in range(self.rank):
            for j in range(self.rank):
                if i == j:
                    continue
                m = 1 - self.rs.cartan[i][j]
                poly = {}
                for r in range(m + 1):
                    word = (i,) * (m - r) + (j,) + (i,) * r
                    coef = q_binom(m, r, self.rs.d[i]) * qpow(r * self.c_pair(i, j))
                    if r % 2:
                        coef = -coef
                    poly[word] = poly.get(word, ZERO) + coef
                relators.append({w: c for w, c in poly.items() if not c.is_zero()})
        return relators

    def _normalize_rule(self, poly):
        lead = max(poly, key=lambda w: _word_key(self.letter_rank, w))
        inv = poly[lead].inverse()
        tail = {w: -(c * inv) for w, c in poly.items() if w != lead}
        return lead, tail

    def _reduce_poly(self, poly, rules):
        """Fully reduce a word polynomial modulo the given rewriting rules."""
        out = {}
        work = dict(poly)
        while work:
            self._tick()
            word = max(work, key=lambda w: _word_key(self.letter_rank, w))
            coef = work.pop(word)
            if coef.is_zero():
                continue
            hit = None
            for lead, tail in rules:
                k = len(lead)
                for p in range(len(word) - k + 1):
                    if word[p:p + k] == lead:
                        hit = (p, lead, tail)
                        break
                if hit:
                    break
            if hit is None:
                out[word] = out.get(word, ZERO) + coef
                continue
            p, lead, tail = hit
            for v, c in tail.items():
                w2 = word[:p] + v + word[p + len(lead):]
                work[w2] = work.get(w2, ZERO) + coef * c
                if work[w2].is_zero():
                    del work[w2]
        return {w: c for w, c in out.items() if not c.is_zero()}

    def _serre_groebner(self):
        """Complete the deformed Serre relators to a confluent rule set."""
        rules = []
        for rel in self._serre_relators():
            lead, tail = self._normalize_rule(rel)
            if (lead, tail) not in rules:
                rules.append((lead, tail))
        queue = list(itertools.product(range(len(rules)), repeat=2))
        while queue:
            gi, gj = queue.pop()
            lead1, tail1 = rules[gi]
            lead2, tail2 = rules[gj]
            overlaps = []
            for k in range(1, min(len(lead1), len(lead2))):
                if lead1[-k:] == lead2[:k]:
                    # glued word lead1 + lead2[k:], rewritten two ways
                    s_poly = {}
                    for v, c in tail1.items():
                        w = v + lead2[k:]
                        s_poly[w] = s_poly.get(w, ZERO) + c
                    for v, c in tail2.items():
                        w = lead1[:len(lead1) - k] + v
                        s_poly[w] = s_poly.get(w, ZERO) - c
                    overlaps.append(s_poly)
            if gi != gj and len(lead2) < len(lead1):
                for p in range(len(lead1) - len(lead2) + 1):
                    if lead1[p:p + len(lead2)] == lead2:
                        s_poly = dict(tail1)
                        for v, c in tail2.items():
                            w = lead1[:p] + v + lead1[p + len(lead2):]
                            s_poly[w] = s_poly.get(w, ZERO) - c
                        overlaps.append(s_poly)
            for s_poly in overlaps:
                rem = self._reduce_poly(s_poly, rules)
                if rem:
                    lead, tail = self._normalize_rule(rem)
                    rules.append((lead, tail))
                    n = len(rules)
                    queue.extend((n - 1, t) for t in range(n))
                    queue.extend((t, n - 1) for t in range(n - 1))
        return rules

    def reduce_word(self, word):
        """Expansion of a one-sided word in irreducible words."""
        word = tuple(word)
        cached = self._reduce_cache.get(word)
        if cached is None:
            cached = self._reduce_poly({word: ONE}, self.rules)
            self._reduce_cache[word] = cached
        return cached

    def is_irreducible(self, word):
        return self.reduce_word(word) == {tuple(word): ONE}

    # -- element constructors -------------------------------------------------
    def zero(self):
        return PBWElement(self, {})

    def one(self):
        return PBWElement(self, {((), self.zero_weight, ()): ONE})

    def e(self, i):
        return PBWElement(self, {((), self.zero_weight, (i,)): ONE})

    def f(self, i):
        return PBWElement(self, {((i,), self.zero_weight, ()): ONE})

    def k(self, lam):
        return PBWElement(self, {((), self.weight(lam), ()): ONE})

    def k_simple(self, i):
        return self.k(self.simple_weight(i))

    def from_terms(self, terms):
        return PBWElement(self, {m: c for m, c in terms.items() if not c.is_zero()})

    def word(self, tokens):
        """Product of generator tokens ('e', i), ('f', i) or ('k', lam)."""
        out = self.one()
        for kind, arg in tokens:
            if kind == "e":
                out = out * self.e(arg)
            elif kind == "f":
                out = out * self.f(arg)
            elif kind == "k":
                out = out * self.k(arg)
            else:
                raise ValueError(f"unknown generator token {kind!r}")
        return out

    # -- structured one-letter multiplications -------------------------------
    def _mul_e(self, terms, i):
        out = {}
        for (fw, lam, ew), c in terms.items():
            for ew2, s in self.reduce_word(ew + (i,)).items():
                key = (fw, lam, ew2)
                val = out.get(key, ZERO) + c * s
                if val.is_zero():
                    out.pop(key, None)
                else:
                    out[key] = val
        return out

    def _mul_k(self, terms, mu):
        if all(x == 0 for x in mu):
            return dict(terms)
        out = {}
        for (fw, lam, ew), c in terms.items():
            wt = self.word_weight(ew)
            factor = qpow(-self.rs.pair(mu, wt)) if any(wt) else ONE
            key = (fw, tuple(a + b for a, b in zip(lam, mu)), ew)
            val = out.get(key, ZERO) + c * factor
            if val.is_zero():
                out.pop(key, None)
            else:
                out[key] = val
        return out

    def _etf(self, ew, j):
        """Terms of e^{ew} f_j in normal form, memoized on the reduced word."""
        key = (ew, j)
        cached = self._etf_cache.get(key)
        if cached is not None:
            return cached
        if not ew:
            result = {((j,), self.zero_weight, ()): ONE}
        else:
            head, i = ew[:-1], ew[-1]
            result = {}
            # cross relation: e_i f_j = q^{c_ji} f_j e_i + delta_ij (...)
            lead = qpow(self.c_pair(j, i))
            for (fw, lam, ew2), c in self._etf(head, j).items():
                for ew3, s in self.reduce_word(ew2 + (i,)).items():
                    k2 = (fw, lam, ew3)
                    val = result.get(k2, ZERO) + c * s * lead
                    if val.is_zero():
                        result.pop(k2, None)
                    else:
                        result[k2] = val
            if i == j:
                denom = (qpow(self.rs.d[i]) - qpow(-self.rs.d[i])).inverse()
                alpha = self.simple_weight(i)
                minus_alpha = tuple(-x for x in alpha)
                wt_head = self.word_weight(head)
                shift = self.rs.pair(alpha, wt_head)
                for sign, lamv, fac in (
                    (1, alpha, qpow(-shift)),
                    (-1, minus_alpha, qpow(shift)),
                ):
                    k2 = ((), lamv, head)
                    val = result.get(k2, ZERO) + denom * fac * sign
                    if val.is_zero():
                        result.pop(k2, None)
                    else:
                        result[k2] = val
        self._etf_cache[key] = result
        return result

    def _mul_f(self, terms, j):
        out = {}
        alpha_j = self.simple_weight(j)
        for (fw, lam, ew), c in terms.items():
            for (fj, eta, ew2), s in self._etf(ew, j).items():
                if fj:
                    factor = qpow(-self.rs.pair(lam, alpha_j))
                    for fw2, s2 in self.reduce_word(fw + (j,)).items():
                        key = (fw2, lam, ew2)
                        val = out.get(key, ZERO) + c * s * factor * s2
                        if val.is_zero():
                            out.pop(key, None)
                        else:
                            out[key] = val
                else:
                    key = (fw, tuple(a + b for a, b in zip(lam, eta)), ew2)
                    val = out.get(key, ZERO) + c * s
                    if val.is_zero():
                        out.pop(key, None)
                    else:
                        out[key] = val
        return out

    def _mul_monomial(self, terms, mono, coef):
        fw, lam, ew = mono
        current = {m: c * coef for m, c in terms.items()}
        for j in fw:
            current = self._mul_f(current, j)
        current = self._mul_k(current, lam)
        for i in ew:
            current = self._mul_e(current, i)
        return current


class PBWElement:
    """Element in normal form: a finite sum of monomials f-word * K_lam * e-word."""

    __slots__ = ("alg", "terms")

    def __init__(self, alg, terms):
        self.alg = alg
        self.terms = terms

    def is_zero(self):
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if not isinstance(other, PBWElement):
            return NotImplemented
        return self.alg is other.alg and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset((m, c) for m, c in self.terms.items()))

    def __add__(self, other):
        if not isinstance(other, PBWElement):
            return NotImplemented
        out = dict(self.terms)
        for m, c in other.terms.items():
            val = out.get(m, ZERO) + c
            if val.is_zero():
                out.pop(m, None)
            else:
                out[m] = val
        return PBWElement(self.alg, out)

    def __neg__(self):
        return PBWElement(self.alg, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        if not isinstance(other, PBWElement):
            return NotImplemented
        return self + (-other)

    def scale(self, s):
        if not isinstance(s, LaurentScalar):
            s = LaurentScalar.from_rational(s)
        if s.is_zero():
            return PBWElement(self.alg, {})
        return PBWElement(self.alg, {m: c * s for m, c in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, LaurentScalar)):
            return self.scale(other)
        if not isinstance(other, PBWElement):
            return NotImplemented
        out = {}
        for mono, coef in other.terms.items():
            for m, c in self.alg._mul_monomial(self.terms, mono, coef).items():
                val = out.get(m, ZERO) + c
                if val.is_zero():
                    out.pop(m, None)
                else:
                    out[m] = val
        return PBWElement(self.alg, out)

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction, LaurentScalar)):
            return self.scale(other)
        return NotImplemented

    def commutator(self, other):
        return self * other - other * self

    # -- structure queries ----------------------------------------------------
    def is_e_only(self):
        return all(not fw and not any(lam) for (fw, lam, _) in self.terms)

    def is_f_only(self):
        return all(not ew and not any(lam) for (_, lam, ew) in self.terms)

    def is_lower_borel(self):
        return all(not ew for (_, _, ew) in self.terms)

    def counit(self):
        """Image under e_i, f_i -> 0, K_lam -> 1."""
        out = ZERO
        for (fw, _, ew), c in self.terms.items():
            if not fw and not ew:
                out = out + c
        return out

    def coefficient(self, mono):
        return self.terms.get(mono, ZERO)

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda mc: (mc[0][0], mc[0][2], mc[0][1]))

    def __str__(self):
        if not self.terms:
            return "0"
        bits = []
        for (fw, lam, ew), c in self.sorted_terms():
            factors = []
            for i in fw:
                factors.append(f"f{i + 1}")
            if any(lam):
                factors.append("K[" + ",".join(str(x) for x in lam) + "]")
            for i in ew:
                factors.append(f"e{i + 1}")
            mono = "*".join(factors) if factors else "1"
            bits.append(f"({c})*{mono}")
        return " + ".join(bits)

    __repr__ = __str__


def normal_form(alg, tokens):
    """Normal form of a product of generator tokens; see Algebra.word."""
    return alg.word(tokens)


def pbw_dimension_check(alg, max_height):
    """Compare counts of irreducible one-sided words against monomials in
    positive-root symbols, multidegree by multidegree up to max_height."""
    rs = alg.rs
    roots = rs.positive_roots
    for total in range(1, max_height + 1):
        words = {}
        for word in itertools.product(range(alg.rank), repeat=total):
            if alg.is_irreducible(word):
                deg = alg.word_weight(word)
                words[deg] = words.get(deg, 0) + 1

        # count multisets of positive roots with the given multidegree
        def count(idx, remaining):
            if all(x == 0 for x in remaining):
                return 1
            if idx == len(roots):
                return 0
            root = roots[idx]
            total_here = 0
            mult = 0
            current = remaining
            while all(x >= 0 for x in current):
                total_here += count(idx + 1, current)
                current = tuple(a - b for a, b in zip(current, root))
                mult += 1
            return total_here
        for deg, n_words in words.items():
            expected = count(0, deg)
            if n_words != expected:
                raise AssertionError(
                    f"irreducible word count {n_words} != PBW count {expected} "
                    f"at multidegree {deg}"
                )
    return True


# ---------------------------------------------------------------------------
# root vectors


def _minimal_segment(ordering, gamma_pos):
    ordering = list(ordering)
    gamma = ordering[gamma_pos]
    candidates = []
    for p in range(gamma_pos):
        for r in range(gamma_pos + 1, len(ordering)):
            if tuple(a + b for a, b in zip(ordering[p], ordering[r])) == gamma:
                candidates.append((p, r))
    if not candidates:
        raise ValueError(f"root {gamma} admits no two-term decomposition")
    best = min(candidates, key=lambda pr: pr[1] - pr[0])
    for p, r in candidates:
        if (p, r) != best and best[0] <= p and r <= best[1]:
            raise RuntimeError("minimal segment is not unique")
    return best


def root_vector(alg, beta, sign="+"):
    """Root vector for a positive root, by the q-commutator recursion over the
    adapted normal ordering.  Simple roots return the bare generator."""
    if sign not in ("+", "-"):
        raise ValueError(f"sign must be '+' or '-', got {sign!r}")
    beta = tuple(int(x) for x in beta)
    key = (beta, sign)
    cached = alg._root_vector_cache.get(key)
    if cached is not None:
        return cached
    ordering = alg.ordering.ordering
    if beta not in ordering:
        raise ValueError(f"{beta} is not a positive root here")
    if sum(beta) == 1:
        i = beta.index(1)
        result = alg.e(i) if sign == "+" else alg.f(i)
    else:
        pos = ordering.index(beta)
        p, r = _minimal_segment(ordering, pos)
        a_root, b_root = ordering[p], ordering[r]
        w = alg.rs.pair(a_root, b_root) + _cayley_pair_vec(alg, a_root, b_root)
        if sign == "+":
            ea = root_vector(alg, a_root, "+")
            eb = root_vector(alg, b_root, "+")
            result = ea * eb - (eb * ea).scale(qpow(w))
        else:
            fa = root_vector(alg, a_root, "-")
            fb = root_vector(alg, b_root, "-")
            result = fb * fa - (fa * fb).scale(qpow(-w))
    alg._root_vector_cache[key] = result
    return result


def _cayley_pair_vec(alg, x, y):
    total = Fraction(0)
    for i, xi in enumerate(x):
        if not xi:
            continue
        for j, yj in enumerate(y):
            if yj:
                total += Fraction(xi) * alg.ctx.cayley[i][j] * yj
    return total


def a_constant(alg, beta):
    """The normalization constant a(beta) read off [e_beta, f_beta] =
    a(beta) (K_beta - K_beta^{-1}) / (q - q^{-1})."""
    beta = tuple(int(x) for x in beta)
    cached = alg._a_cache.get(beta)
    if cached is not None:
        return cached
    e_b = root_vector(alg, beta, "+")
    f_b = root_vector(alg, beta, "-")
    comm = e_b.commutator(f_b)
    plus = alg.weight(beta)
    minus = tuple(-x for x in plus)
    c_plus = comm.coefficient(((), plus, ()))
    c_minus = comm.coefficient(((), minus, ()))
    if c_plus.is_zero() or c_minus != -c_plus or len(comm.terms) != 2:
        raise RuntimeError(f"[e_beta, f_beta] has unexpected shape: {comm}")
    value = c_plus * (qpow(1) - qpow(-1))
    alg._a_cache[beta] = value
    return value


# ---------------------------------------------------------------------------
# characters and the Whittaker projection


@dataclass(frozen=True)
class Character:
    """Non-singular character of a one-sided subalgebra: generator i maps to
    values[i], all nonzero."""

    side: str
    values: tuple

    def __post_init__(self):
        if self.side not in ("e", "f"):
            raise ValueError("side must be 'e' or 'f'")
        if any(v.is_zero() for v in self.values):
            raise ValueError("non-singular characters need nonzero values")


def character(side, values):
    vals = tuple(
        v if isinstance(v, LaurentScalar) else LaurentScalar.from_rational(v)
        for v in values
    )
    return Character(side=side, values=vals)


def apply_character(chi, x):
    """Value of the character on a one-sided element (pure e or pure f part)."""
    out = ZERO
    for (fw, lam, ew), c in x.terms.items():
        if any(lam):
            raise ValueError("character applies to one-sided elements only")
        if chi.side == "e":
            if fw:
                raise ValueError("e-side character applied to an f-word")
            word = ew
        else:
            if ew:
                raise ValueError("f-side character applied to an e-word")
            word = fw
        val = c
        for i in word:
            val = val * chi.values[i]
        out = out + val
    return out


def rho_chi(x, chi):
    """Projection onto the lower Borel part along the character ideal:
    f^t K_lam e^r maps to chi(e^r) f^t K_lam."""
    if chi.side != "e":
        raise ValueError("the Whittaker projection uses an e-side character")
    out = {}
    for (fw, lam, ew), c in x.terms.items():
        val = c
        for i in ew:
            val = val * chi.values[i]
        if val.is_zero():
            continue
        key = (fw, lam, ())
        acc = out.get(key, ZERO) + val
        if acc.is_zero():
            out.pop(key, None)
        else:
            out[key] = acc
    return PBWElement(x.alg, out)


def whittaker_action(x, v, chi):
    """Action of an e-side element on the Whittaker model: project [x, v]."""
    return rho_chi(x.commutator(v), chi)


# ---------------------------------------------------------------------------
# representations


class RepMatrices:
    """Exact matrices for a fundamental module, twisted into the Coxeter
    presentation; every defining relation is checked at build time."""

    def __init__(self, alg, name, k_index):
        rs = alg.rs
        if rs.series != "A":
            raise ValueError("the module catalogue covers type A only")
        n = rs.rank
        self.alg = alg
        self.name = name
        self.k_index = k_index
        basis = sorted(itertools.combinations(range(1, n + 2), k_index),
                       key=lambda s: (sum(s), s))
        self.basis = basis
        self.dim = len(basis)
        index = {s: p for p, s in enumerate(basis)}
        omegas = [rs.fundamental_weight(i) for i in range(n)]
        weights = []
        for s in basis:
            mu = [Fraction(0)] * n
            for i in range(n):
                hi = (1 if i + 1 in s else 0) - (1 if i + 2 in s else 0)
                if hi:
                    mu = [m + hi * o for m, o in zip(mu, omegas[i])]
            weights.append(tuple(mu))
        self.weights = tuple(weights)

        def empty():
            return [[ZERO] * self.dim for _ in range(self.dim)]

        self.x_plus = []
        self.x_minus = []
        for i in range(n):
            xp = empty()
            xm = empty()
            for s in basis:
                if i + 2 in s and i + 1 not in s:
                    t = tuple(sorted(set(s) - {i + 2} | {i + 1}))
                    xp[index[t]][index[s]] = ONE
                if i + 1 in s and i + 2 not in s:
                    t = tuple(sorted(set(s) - {i + 1} | {i + 2}))
                    xm[index[t]][index[s]] = ONE
            self.x_plus.append(xp)
            self.x_minus.append(xm)

        twist = alg.ctx.twist
        self.e_mats = []
        self.f_mats = []
        for i in range(n):
            nu = [Fraction(0)] * n
            for p in range(n):
                if twist[i][p]:
                    nu = [m + twist[i][p] * o for m, o in zip(nu, omegas[p])]
            ke = self.k_matrix(nu)
            kf = self.k_matrix([-x for x in nu])
            self.e_mats.append(qarith.mat_mul(self.x_plus[i], ke, ZERO))
            self.f_mats.append(qarith.mat_mul(kf, self.x_minus[i], ZERO))
        self._check_relations()

    def k_matrix(self, lam):
        return [
            [
                qpow(self.alg.rs.pair(lam, self.weights[r])) if r == s else ZERO
                for s in range(self.dim)
            ]
            for r in range(self.dim)
        ]

    def _check_relations(self):
        alg = self.alg
        rs = alg.rs
        n = rs.rank
        dim = self.dim
        eye = qarith.mat_eye(dim, ONE, ZERO)
        for i in range(n):
            alpha = rs.simple_root(i)
            ki = self.k_matrix(alpha)
            ki_inv = self.k_matrix([-x for x in alpha])
            assert qarith.mat_eq(qarith.mat_mul(ki, ki_inv, ZERO), eye)
            for j in range(n):
                # K alpha_i conjugation scales e_j by q^{(alpha_i, alpha_j)}
                lhs = qarith.mat_mul(ki, qarith.mat_mul(self.e_mats[j], ki_inv, ZERO), ZERO)
                rhs = qarith.mat_scale(self.e_mats[j], qpow(rs.pair(alpha, rs.simple_root(j))))
                if not qarith.mat_eq(lhs, rhs):
                    raise RuntimeError(f"{self.name}: K-e relation fails at ({i},{j})")
                lhs = qarith.mat_mul(ki, qarith.mat_mul(self.f_mats[j], ki_inv, ZERO), ZERO)
                rhs = qarith.mat_scale(self.f_mats[j], qpow(-rs.pair(alpha, rs.simple_root(j))))
                if not qarith.mat_eq(lhs, rhs):
                    raise RuntimeError(f"{self.name}: K-f relation fails at ({i},{j})")
        for i in range(n):
            for j in range(n):
                cross = qarith.mat_sub(
                    qarith.mat_mul(self.e_mats[i], self.f_mats[j], ZERO),
                    qarith.mat_scale(
                        qarith.mat_mul(self.f_mats[j], self.e_mats[i], ZERO),
                        qpow(alg.c_pair(j, i)),
                    ),
                )
                if i == j:
                    di = rs.d[i]
                    coef = (qpow(di) - qpow(-di)).inverse()
                    alpha = rs.simple_root(i)
                    target = qarith.mat_scale(
                        qarith.mat_sub(self.k_matrix(alpha),
                                       self.k_matrix([-x for x in alpha])),
                        coef,
                    )
                else:
                    target = [[ZERO] * dim for _ in range(dim)]
                if not qarith.mat_eq(cross, target):
                    raise RuntimeError(f"{self.name}: cross relation fails at ({i},{j})")
        for i in range(n):
            for j in range(n):
                if i == j:
                    continue
                m = 1 - rs.cartan[i][j]
                total = [[ZERO] * dim for _ in range(dim)]
                for r in range(m + 1):
                    coef = q_binom(m, r, rs.d[i]) * qpow(r * alg.c_pair(i, j))
                    if r % 2:
                        coef = -coef
                    term = eye
                    for _ in range(m - r):
                        term = qarith.mat_mul(term, self.e_mats[i], ZERO)
                    term = qarith.mat_mul(term, self.e_mats[j], ZERO)
                    for _ in range(r):
                        term = qarith.mat_mul(term, self.e_mats[i], ZERO)
                    total = qarith.mat_add(total, qarith.mat_scale(term, coef))
                if not qarith.mat_is_zero(total):
                    raise RuntimeError(f"{self.name}: e-Serre fails at ({i},{j})")
                total = [[ZERO] * dim for _ in range(dim)]
                for r in range(m + 1):
                    coef = q_binom(m, r, rs.d[i]) * qpow(r * alg.c_pair(i, j))
                    if r % 2:
                        coef = -coef
                    term = eye
                    for _ in range(m - r):
                        term = qarith.mat_mul(term, self.f_mats[i], ZERO)
                    term = qarith.mat_mul(term, self.f_mats[j], ZERO)
                    for _ in range(r):
                        term = qarith.mat_mul(term, self.f_mats[i], ZERO)
                    total = qarith.mat_add(total, qarith.mat_scale(term, coef))
                if not qarith.mat_is_zero(total):
                    raise RuntimeError(f"{self.name}: f-Serre fails at ({i},{j})")

    def evaluate_word(self, word, side):
        mats = self.e_mats if side == "e" else self.f_mats
        out = qarith.mat_eye(self.dim, ONE, ZERO)
        for i in word:
            out = qarith.mat_mul(out, mats[i], ZERO)
        return out

    def evaluate(self, x):
        """Matrix of a PBWElement in this module."""
        out = [[ZERO] * self.dim for _ in range(self.dim)]
        for (fw, lam, ew), c in x.terms.items():
            m = self.evaluate_word(fw, "f")
            if any(lam):
                m = qarith.mat_mul(m, self.k_matrix(lam), ZERO)
            if ew:
                m = qarith.mat_mul(m, self.evaluate_word(ew, "e"), ZERO)
            out = qarith.mat_add(out, qarith.mat_scale(m, c))
        return out


def rep_matrices(alg, name):
    """Named module catalogue: 'V1'..'Vl' are the fundamental modules."""
    if not (name.startswith("V") and name[1:].isdigit()):
        raise ValueError(f"unknown module name {name!r}")
    k = int(name[1:])
    if k < 1 or k > alg.rank:
        raise ValueError(f"module index out of range in {name!r}")
    return RepMatrices(alg, name, k)


# ---------------------------------------------------------------------------
# R-matrix evaluations


def _ordered_roots(alg):
    return alg.ordering.ordering


def _exp_factor_first_leg(alg, rep, beta, swap):
    """One q-exponential factor of the R-matrix under (id x pi_V).

    swap=False keeps e_beta in the algebra leg (the R factor); swap=True is
    the flipped factor with K f_beta in the algebra leg (the R_21 factor).
    """
    a_inv = a_constant(alg, beta).inverse()
    scale = (qpow(1) - qpow(-1)) * a_inv
    t_beta = alg.cayley_apply(beta)
    q_beta = alg.rs.pair(beta, beta)
    if not swap:
        first = root_vector(alg, beta, "+").scale(scale)
        second = qarith.mat_mul(rep.k_matrix(t_beta),
                                rep.evaluate(root_vector(alg, beta, "-")), ZERO)
    else:
        first = (alg.k(t_beta) * root_vector(alg, beta, "-")).scale(scale)
        second = rep.evaluate(root_vector(alg, beta, "+"))
    mat = [[first.scale(second[r][s]) if not second[r][s].is_zero() else alg.zero()
            for s in range(rep.dim)] for r in range(rep.dim)]
    return qarith.q_exp_nilpotent(mat, qpow(-q_beta), alg.one(), alg.zero())


def _cartan_diag(alg, rep, plus):
    """Diagonal Cartan factor of (id x pi_V) R (plus) or R_21 (minus):
    basis vector of weight mu pairs with K_{(1 +/- T) mu}."""
    eye = []
    for r in range(rep.dim):
        mu = rep.weights[r]
        t_mu = alg.cayley_apply(mu)
        lam = tuple(m + t for m, t in zip(mu, t_mu)) if plus else tuple(
            m - t for m, t in zip(mu, t_mu))
        eye.append(alg.k(lam))
    return [[eye[r] if r == s else alg.zero() for s in range(rep.dim)]
            for r in range(rep.dim)]


def r_matrix_in_rep(alg, rep):
    """The pair (L^-, L^+): the R-matrix and the inverse of its flip, with the
    second leg evaluated in the module."""
    zero = alg.zero()
    lminus = _cartan_diag(alg, rep, plus=True)
    for beta in _ordered_roots(alg):
        lminus = qarith.mat_mul(lminus, _exp_factor_first_leg(alg, rep, beta, False), zero)
    r21 = _cartan_diag(alg, rep, plus=False)
    for beta in _ordered_roots(alg):
        r21 = qarith.mat_mul(r21, _exp_factor_first_leg(alg, rep, beta, True), zero)
    # invert r21 = D (1 + N) with N nilpotent: (1+N)^{-1} D^{-1}
    dinv = []
    for r in range(rep.dim):
        mu = rep.weights[r]
        t_mu = alg.cayley_apply(mu)
        lam = tuple(-(m - t) for m, t in zip(mu, t_mu))
        dinv.append(alg.k(lam))
    dinv_mat = [[dinv[r] if r == s else zero for s in range(rep.dim)]
                for r in range(rep.dim)]
    unipotent = qarith.mat_mul(dinv_mat, r21, zero)
    lplus = qarith.mat_mul(
        qarith.mat_inv_unipotent(unipotent, alg.one(), zero), dinv_mat, zero
    )
    return lminus, lplus


def r_matrix_vv(alg, rep):
    """Numeric R-matrix (pi_V x pi_V) R on V x V."""
    dim = rep.dim
    size = dim * dim
    out = [[ZERO] * size for _ in range(size)]
    for r in range(dim):
        for s in range(dim):
            mu = rep.weights[r]
            nu = rep.weights[s]
            t_nu = alg.cayley_apply(nu)
            lam = tuple(n + t for n, t in zip(nu, t_nu))
            out[r * dim + s][r * dim + s] = qpow(alg.rs.pair(mu, lam))
    for beta in _ordered_roots(alg):
        a_inv = a_constant(alg, beta).inverse()
        scale = (qpow(1) - qpow(-1)) * a_inv
        t_beta = alg.cayley_apply(beta)
        q_beta = alg.rs.pair(beta, beta)
        first = qarith.mat_scale(rep.evaluate(root_vector(alg, beta, "+")), scale)
        second = qarith.mat_mul(rep.k_matrix(t_beta),
                                rep.evaluate(root_vector(alg, beta, "-")), ZERO)
        factor = qarith.q_exp_nilpotent(
            qarith.mat_kron(first, second, ZERO), qpow(-q_beta), ONE, ZERO
        )
        out = qarith.mat_mul(out, factor, ZERO)
    return out


def yang_baxter_check(alg, rep):
    """Exact check of R12 R13 R23 = R23 R13 R12 on V x V x V."""
    r = r_matrix_vv(alg, rep)
    d = rep.dim
    size = d ** 3

    def lift(mat, legs):
        out = [[ZERO] * size for _ in range(size)]
        for i1 in range(d):
            for i2 in range(d):
                for i3 in range(d):
                    row = (i1 * d + i2) * d + i3
                    idx = {1: i1, 2: i2, 3: i3}
                    for j_a in range(d):
                        for j_b in range(d):
                            v = mat[idx[legs[0]] * d + idx[legs[1]]][j_a * d + j_b]
                            if v.is_zero():
                                continue
                            jdx = dict(idx)
                            jdx[legs[0]] = j_a
                            jdx[legs[1]] = j_b
                            col = (jdx[1] * d + jdx[2]) * d + jdx[3]
                            out[row][col] = out[row][col] + v
        return out

    r12 = lift(r, (1, 2))
    r13 = lift(r, (1, 3))
    r23 = lift(r, (2, 3))
    lhs = qarith.mat_mul(qarith.mat_mul(r12, r13, ZERO), r23, ZERO)
    rhs = qarith.mat_mul(qarith.mat_mul(r23, r13, ZERO), r12, ZERO)
    return qarith.mat_eq(lhs, rhs)


# ---------------------------------------------------------------------------
# central elements and their Whittaker images


def casimir_CV(alg, rep):
    """Central element (id x tr_V)(R_21 R (1 x K_{2 rho})) for the module."""
    zero = alg.zero()
    r21 = _cartan_diag(alg, rep, plus=False)
    for beta in _ordered_roots(alg):
        r21 = qarith.mat_mul(r21, _exp_factor_first_leg(alg, rep, beta, True), zero)
    rmat = _cartan_diag(alg, rep, plus=True)
    for beta in _ordered_roots(alg):
        rmat = qarith.mat_mul(rmat, _exp_factor_first_leg(alg, rep, beta, False), zero)
    prod = qarith.mat_mul(r21, rmat, zero)
    two_rho = tuple(2 * x for x in alg.rs.rho)
    out = alg.zero()
    for j in range(rep.dim):
        out = out + prod[j][j].scale(qpow(alg.rs.pair(two_rho, rep.weights[j])))
    return out


def whittaker_generator(alg, rep, chi):
    """Whittaker image of the central element: a lower-Borel element."""
    return rho_chi(casimir_CV(alg, rep), chi)
