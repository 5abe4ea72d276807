"""Command line front end.

Every subcommand runs exact computations, validates the invariants it
advertises, and emits one JSON report on stdout (or to ``--out``).  Reports
carry ``"schema": "1"`` and are byte-identical for identical flags and seed;
wall-clock time goes to stderr so it never perturbs the payload.

Exit codes: 0 when every check in the report passed, 1 when a check or an
internal invariant failed (diagnostic on stderr), 2 for unknown commands or
malformed flag values.

The environment variable ``QWHIT_STEP_BUDGET`` caps rewriting steps in the
algebra engine; it is read once at import time by :mod:`qwhit.uqalg`.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
import time
from fractions import Fraction
from itertools import permutations

from . import acceptance, crosssec, qarith, rootsys, toda, uqalg
from .qarith import LaurentScalar, q_binom, qpow
from .ratmat import charpoly, eye, mat, minv, mmul

F = Fraction


# -- flag parsing and serialization helpers -----------------------------------

def _parse_ints(text):
    try:
        return tuple(int(x) for x in text.split(","))
    except ValueError:
        raise ValueError(f"expected a comma list of integers, got {text!r}")


def _parse_rationals(text):
    try:
        return tuple(F(x) for x in text.split(","))
    except (ValueError, ZeroDivisionError):
        raise ValueError(f"expected a comma list of rationals, got {text!r}")


def _parse_matrix(text):
    try:
        rows = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValueError(f"matrix is not valid JSON: {exc}")
    if (not isinstance(rows, list) or not rows
            or not all(isinstance(r, list) for r in rows)):
        raise ValueError("matrix JSON must be a list of rows")
    try:
        return mat([[F(str(x)) for x in row] for row in rows])
    except (ValueError, ZeroDivisionError):
        raise ValueError("matrix entries must be rational strings")


def _ser_mat(m):
    return [[str(x) for x in row] for row in m]


def _ser_vec(v):
    return [str(x) for x in v]


def _ser_pbw(x):
    out = []
    for (fw, lam, ew), coeff in x.sorted_terms():
        out.append({
            "f": list(fw),
            "lambda": [str(v) for v in lam],
            "e": list(ew),
            "coeff": str(coeff),
        })
    return out


def _ser_diffop(op):
    out = []
    for lam, zpart in sorted(op.terms.items()):
        for zexp, coeff in sorted(zpart.items()):
            out.append({
                "shift": [str(v) for v in lam],
                "z": list(zexp),
                "coeff": str(coeff),
            })
    return out


def _root_system(args):
    return rootsys.build_root_system(args.type, args.rank)


def _context(args):
    rs = _root_system(args)
    pi = _parse_ints(args.pi) if args.pi else None
    return rootsys.coxeter_context(rs, pi)


def _character_values(text, rank, default=1):
    if text is None:
        return (F(default),) * rank
    vals = _parse_rationals(text)
    if len(vals) != rank:
        raise ValueError(f"expected {rank} character values, got {len(vals)}")
    return vals


# -- subcommand bodies ---------------------------------------------------------

def cmd_root_system(args):
    rs = _root_system(args)
    outputs = {
        "series": rs.series,
        "rank": rs.rank,
        "cartan": [list(row) for row in rs.cartan],
        "d": [str(x) for x in rs.d],
        "bform": _ser_mat(rs.bform),
        "positive_roots": [list(r) for r in rs.positive_roots],
        "heights": list(rs.heights),
        "rho": _ser_vec(rs.rho),
        "coxeter_number": rs.coxeter_number,
    }
    n = rs.rank
    checks = {
        "bform_symmetric": all(
            rs.bform[i][j] == rs.bform[j][i]
            for i in range(n) for j in range(n)),
        "bform_symmetrizes_cartan": all(
            rs.bform[i][j] == rs.d[i] * rs.cartan[i][j]
            for i in range(n) for j in range(n)),
    }
    return outputs, checks


def cmd_cayley(args):
    ctx = _context(args)
    rs = ctx.rs
    n = rs.rank
    outputs = {
        "pi": list(ctx.pi),
        "s_matrix": _ser_mat(ctx.s_matrix),
        "cayley": _ser_mat(ctx.cayley),
        "epsilon": [list(row) for row in ctx.epsilon],
        "twist": _ser_mat(ctx.twist),
        "coxeter_number": ctx.coxeter_number,
    }
    checks = {
        "cayley_identity": all(
            ctx.cayley[i][j] == ctx.epsilon[i][j] * rs.bform[i][j]
            for i in range(n) for j in range(n)),
        "antisymmetric": all(
            ctx.cayley[i][j] == -ctx.cayley[j][i]
            for i in range(n) for j in range(n)),
    }
    return outputs, checks


def cmd_orbits(args):
    ctx = _context(args)
    orbits = rootsys.coxeter_orbits(ctx)
    h = ctx.coxeter_number
    outputs = {
        "pi": list(ctx.pi),
        "coxeter_number": h,
        "orbit_sizes": [len(o) for o in orbits],
        "orbits": [[list(r) for r in o] for o in orbits],
    }
    checks = {
        "orbit_count_equals_rank": len(orbits) == ctx.rs.rank,
        "sizes_divide_coxeter_number": all(h % len(o) == 0 for o in orbits),
    }
    return outputs, checks


def cmd_qbinom_scan(args):
    if args.m is not None and args.n is not None and args.m != args.n:
        raise ValueError("--m and --n disagree; give one of them")
    top = args.m if args.m is not None else args.n
    if top is None:
        top = 6
    if top < 1:
        raise ValueError("need --m >= 1")
    scans = []
    all_ok = True
    for m in range(1, top + 1):
        got = sorted(qarith.qbinom_root_scan(m))
        want = sorted({m - 1 - 2 * p for p in range(m)})
        edges = (m - 1 in got) and (-(m - 1) in got)
        scans.append({
            "m": m,
            "vanishing_c": got,
            "expected": want,
            "match": got == want,
            "contains_edges": edges,
        })
        all_ok = all_ok and got == want and edges
    outputs = {"max_m": top, "scans": scans}
    checks = {"vanishing_sets_match": all_ok}
    return outputs, checks


def _serre_sum(rs, ctx, i, j):
    m = 1 - rs.cartan[i][j]
    total = LaurentScalar.zero()
    for r in range(m + 1):
        term = q_binom(m, r, rs.d[i]) * qpow(F(r) * ctx.cayley[i][j])
        if r % 2:
            term = term * (-1)
        total = total + term
    return total


def cmd_serre_check(args):
    rs = _root_system(args)
    if args.pi:
        orderings = [_parse_ints(args.pi)]
    else:
        orderings = list(permutations(range(1, rs.rank + 1)))
    checked = 0
    all_zero = True
    for pi in orderings:
        ctx = rootsys.coxeter_context(rs, pi)
        for i in range(rs.rank):
            for j in range(rs.rank):
                if i == j:
                    continue
                checked += 1
                if not _serre_sum(rs, ctx, i, j).is_zero():
                    all_zero = False
    outputs = {
        "orderings": [list(pi) for pi in orderings],
        "identities_checked": checked,
        "all_zero": all_zero,
    }
    checks = {"all_zero": all_zero}
    return outputs, checks


def cmd_casimir(args):
    alg = uqalg.Algebra(_context(args))
    rep = uqalg.rep_matrices(alg, args.rep)
    c = uqalg.casimir_CV(alg, rep)
    rank = alg.rs.rank
    gens = [alg.e(i) for i in range(rank)] + [alg.f(i) for i in range(rank)]
    gens += [alg.k(tuple(1 if k == i else 0 for k in range(rank)))
             for i in range(rank)]
    central = all(c.commutator(g).is_zero() for g in gens)
    outputs = {
        "rep": args.rep,
        "term_count": len(c.terms),
        "terms": _ser_pbw(c),
    }
    checks = {"central": central}
    return outputs, checks


def cmd_whittaker(args):
    alg = uqalg.Algebra(_context(args))
    rank = alg.rs.rank
    chi = uqalg.character("e", _character_values(args.chi, rank))
    rep = uqalg.rep_matrices(alg, args.rep)
    img = uqalg.whittaker_generator(alg, rep, chi)
    invariant = all(
        uqalg.whittaker_action(alg.e(i), img, chi).is_zero()
        for i in range(rank))
    outputs = {
        "rep": args.rep,
        "chi": _ser_vec(chi.values),
        "term_count": len(img.terms),
        "terms": _ser_pbw(img),
    }
    checks = {
        "lower_borel": img.is_lower_borel(),
        "invariant_under_whittaker_action": invariant,
    }
    return outputs, checks


def cmd_toda(args):
    alg = uqalg.Algebra(_context(args))
    rank = alg.rs.rank
    chi_vals = _character_values(args.chi, rank)
    chibar_vals = _character_values(args.chibar, rank)
    system = toda.build_toda_system(alg, chi_vals, chibar_vals)
    hams = system.hamiltonians
    outputs = {
        "chi": _ser_vec(chi_vals),
        "chibar": _ser_vec(chibar_vals),
        "hamiltonians": [_ser_diffop(h) for h in hams],
    }
    checks = {}
    if alg.rs.series == "A":
        closed = toda.closed_form_M1(alg, chi_vals, chibar_vals)
        outputs["closed_form_match"] = hams[0] == closed
        checks["closed_form_match"] = hams[0] == closed
    if args.check_commute:
        zero = all(
            toda.commutator(hams[a], hams[b]).is_zero()
            for a in range(len(hams)) for b in range(a + 1, len(hams)))
        outputs["commutators_zero"] = zero
        checks["commutators_zero"] = zero
    return outputs, checks


def _rnd_frac(rng, lo=-4, hi=4, den=3):
    return F(rng.randint(lo, hi), rng.randint(1, den))


def _rnd_unitriangular(rng, n):
    m = [[F(1) if i == j else F(0) for j in range(n)] for i in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            m[i][j] = _rnd_frac(rng)
    return mat(m)


def cmd_cross_section(args):
    if args.matrix is None and args.n is None:
        raise ValueError("give --matrix (with optional --n) or --n alone")
    if args.matrix is not None:
        m = _parse_matrix(args.matrix)
        if args.n is not None and args.n != len(m):
            raise ValueError(
                f"--n {args.n} disagrees with the {len(m)}-row matrix")
        if args.s_rep is not None:
            s_rep = _parse_matrix(args.s_rep)
            witness = crosssec.cell_witness(m, s_rep)
            outputs = {
                "matrix": _ser_mat(m),
                "s_rep": _ser_mat(s_rep),
                "in_cell": witness is not None,
            }
            if witness is not None:
                outputs["witness"] = [_ser_mat(witness[0]),
                                      _ser_mat(witness[1])]
            return outputs, {"in_cell": witness is not None}
        in_cell = crosssec.bruhat_cell_test(m)
        outputs = {"matrix": _ser_mat(m), "in_cell": in_cell}
        if not in_cell:
            return outputs, {"in_cell": False}
        conj, point = crosssec.cross_section(m)
        outputs.update({
            "conjugator": _ser_mat(conj),
            "slice_point": _ser_mat(point),
            "slice_params": _ser_vec(crosssec.slice_params(point)),
            "char_poly": _ser_vec(charpoly(m)),
        })
        checks = {
            "in_cell": True,
            "on_slice": crosssec.is_slice_point(point),
            "char_poly_preserved": charpoly(m) == charpoly(point),
        }
        return outputs, checks
    n = args.n
    if n < 2:
        raise ValueError("need --n >= 2")
    rng = random.Random(args.seed)
    s = crosssec.coxeter_rep(n)
    good = 0
    for _ in range(args.trials):
        v = _rnd_unitriangular(rng, n)
        u = _rnd_unitriangular(rng, n)
        m = mmul(mmul(v, s), u)
        conj, point = crosssec.cross_section(m)
        g = _rnd_unitriangular(rng, n)
        conj2, point2 = crosssec.cross_section(mmul(mmul(g, m), minv(g)))
        if (crosssec.is_slice_point(point)
                and mmul(mmul(conj, m), minv(conj)) == point
                and charpoly(m) == charpoly(point)
                and point2 == point
                and conj2 == mmul(conj, minv(g))):
            good += 1
    outputs = {"n": n, "trials": args.trials, "successes": good}
    checks = {"all_trials_ok": good == args.trials}
    return outputs, checks


def cmd_kostant_section(args):
    if args.b is None and args.n is None:
        raise ValueError("give --b (with optional --n) or --n alone")
    if args.b is not None:
        b = _parse_matrix(args.b)
        n = len(b)
        if args.n is not None and args.n != n:
            raise ValueError(
                f"--n {args.n} disagrees with the {n}-row matrix")
        a, x = crosssec.kostant_section(b)
        f = crosssec.shift_matrix(n)
        bf = mat([[b[i][j] + f[i][j] for j in range(n)] for i in range(n)])
        xf = mat([[x[i][j] + f[i][j] for j in range(n)] for i in range(n)])
        coords = [-charpoly(xf)[n - 2 - k] for k in range(n - 1)]
        outputs = {
            "b": _ser_mat(b),
            "conjugator": _ser_mat(a),
            "section_point": _ser_mat(x),
            "companion_coordinates": _ser_vec(coords),
            "char_poly": _ser_vec(charpoly(bf)),
        }
        checks = {
            "conjugation_identity": mmul(mmul(a, bf), minv(a)) == xf,
            "char_poly_preserved": charpoly(bf) == charpoly(xf),
            "coordinates_read_off_first_row": coords == [
                x[0][k + 1] for k in range(n - 1)],
        }
        return outputs, checks
    n = args.n
    if n < 2:
        raise ValueError("need --n >= 2")
    rng = random.Random(args.seed)
    f = crosssec.shift_matrix(n)
    good = 0
    for _ in range(args.trials):
        b = [[F(0)] * n for _ in range(n)]
        for i in range(n):
            for j in range(i + 1, n):
                b[i][j] = _rnd_frac(rng)
            if i < n - 1:
                b[i][i] = _rnd_frac(rng)
        b[n - 1][n - 1] = -sum(b[i][i] for i in range(n - 1))
        b = mat(b)
        a, x = crosssec.kostant_section(b)
        bf = mat([[b[i][j] + f[i][j] for j in range(n)] for i in range(n)])
        xf = mat([[x[i][j] + f[i][j] for j in range(n)] for i in range(n)])
        if (mmul(mmul(a, bf), minv(a)) == xf
                and charpoly(bf) == charpoly(xf)):
            good += 1
    outputs = {"n": n, "trials": args.trials, "successes": good}
    checks = {"all_trials_ok": good == args.trials}
    return outputs, checks


def cmd_rmatrix_check(args):
    n = args.n if args.n else 3
    if n < 2:
        raise ValueError("need --n >= 2")
    rng = random.Random(args.seed)
    zero = mat([[0] * n for _ in range(n)])
    good = 0
    for _ in range(args.trials):
        x = [[_rnd_frac(rng) for _ in range(n)] for _ in range(n)]
        x[n - 1][n - 1] -= sum(x[i][i] for i in range(n))
        y = [[_rnd_frac(rng) for _ in range(n)] for _ in range(n)]
        y[n - 1][n - 1] -= sum(y[i][i] for i in range(n))
        if crosssec.mcybe_check(mat(x), mat(y)) == zero:
            good += 1
    half_ok = True
    for part, upper in (("plus", True), ("minus", False)):
        r = crosssec.rmatrix_endo(n, part)
        for i in range(n):
            for j in range(n):
                if i == j:
                    continue
                e = [[F(0)] * n for _ in range(n)]
                e[i][j] = F(1)
                y = r(mat(e))
                tri_ok = (crosssec.is_upper_triangular(y) if upper
                          else crosssec.is_lower_triangular(y))
                killed = (i > j) if part == "plus" else (i < j)
                if not tri_ok or (killed and y != zero):
                    half_ok = False
    outputs = {
        "n": n,
        "trials": args.trials,
        "residual_zero": good,
        "half_operators_triangular": half_ok,
    }
    checks = {
        "mcybe_residual_zero": good == args.trials,
        "image_kernel_identities": half_ok,
    }
    return outputs, checks


def cmd_gstar(args):
    if args.x is None or args.u_params is None:
        raise ValueError("--x and --u-params are both required")
    h_diag = list(_parse_rationals(args.x))
    c = list(_parse_rationals(args.u_params))
    n = len(h_diag)
    if args.n is not None and args.n != n:
        raise ValueError(f"--n {args.n} disagrees with {n} entries in --x")
    if len(c) != n - 1:
        raise ValueError(f"expected {n - 1} u-coordinates, got {len(c)}")
    n_plus = _parse_matrix(args.matrix) if args.matrix else eye(n)
    el = crosssec.mu_inverse_point(h_diag, n_plus, c)
    q = crosssec.q_map(el)
    report = crosssec.eq_character_report(h_diag, c)
    outputs = {
        "h_plus": _ser_mat(el.h_plus),
        "n_plus": _ser_mat(el.n_plus),
        "u": _ser_mat(el.n_minus),
        "l_plus": _ser_mat(el.l_plus),
        "l_minus": _ser_mat(el.l_minus),
        "q_map": _ser_mat(q),
        "q_map_characters": _ser_vec(crosssec.fundamental_characters(q)),
        "slice_report": {
            "regular": report["regular"],
            "matches_torus_times_u": report["matches_torus_times_u"],
            "matches_torus": report["matches_torus"],
            "characters": _ser_vec(report["characters"]),
        },
    }
    checks = {
        "q_map_in_cell": crosssec.bruhat_cell_test(q),
        "character_identity": report["matches_torus_times_u"],
        "character_identity_under_guard": (not report["regular"]
                                           or report["matches_torus"]),
    }
    return outputs, checks


def cmd_acceptance(args):
    suite = args.suite or "all"
    if suite == "all":
        report = acceptance.run_all(args.seed)
        outputs = report
        checks = {"all_passed": report["all_passed"]}
    else:
        try:
            k = int(suite)
        except ValueError:
            raise ValueError(f"--suite must be 'all' or 1..13, got {suite!r}")
        if not 1 <= k <= 13:
            raise ValueError(f"--suite must be 'all' or 1..13, got {suite!r}")
        rep = acceptance.CRITERIA[k - 1](args.seed)
        outputs = rep
        checks = {"passed": rep["passed"]}
    return outputs, checks


HANDLERS = {
    "root-system": cmd_root_system,
    "cayley": cmd_cayley,
    "orbits": cmd_orbits,
    "qbinom-scan": cmd_qbinom_scan,
    "serre-check": cmd_serre_check,
    "casimir": cmd_casimir,
    "whittaker": cmd_whittaker,
    "toda": cmd_toda,
    "cross-section": cmd_cross_section,
    "kostant-section": cmd_kostant_section,
    "rmatrix-check": cmd_rmatrix_check,
    "gstar": cmd_gstar,
    "acceptance": cmd_acceptance,
}


def _add_type_rank(p, pi=True):
    p.add_argument("--type", required=True, help="series letter, e.g. A, B, G")
    p.add_argument("--rank", type=int, required=True)
    if pi:
        p.add_argument("--pi", help="permutation as a comma list, e.g. 2,1")


def build_parser():
    parser = argparse.ArgumentParser(
        prog="qwhit",
        description="Exact checks for Coxeter realizations, Whittaker "
                    "reduction, q-Toda operators and cross-sections.")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", help="write the JSON report to this file")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("root-system", parents=[common],
                       help="Cartan datum and positive roots")
    _add_type_rank(p, pi=False)

    p = sub.add_parser("cayley", parents=[common],
                       help="Coxeter element and Cayley transform")
    _add_type_rank(p)

    p = sub.add_parser("orbits", parents=[common],
                       help="root orbits of the Coxeter element")
    _add_type_rank(p)

    p = sub.add_parser("qbinom-scan", parents=[common],
                       help="vanishing set of the alternating Gauss sum")
    p.add_argument("--m", type=int, help="largest order to scan (default 6)")
    p.add_argument("--n", type=int, help="alias for --m")

    p = sub.add_parser("serre-check", parents=[common],
                       help="deformed Serre relator character sums")
    _add_type_rank(p)

    p = sub.add_parser("casimir", parents=[common],
                       help="central element of a representation")
    _add_type_rank(p)
    p.add_argument("--rep", default="V1")

    p = sub.add_parser("whittaker", parents=[common],
                       help="Whittaker projection of the central element")
    _add_type_rank(p)
    p.add_argument("--rep", default="V1")
    p.add_argument("--chi", help="character values, comma rationals")

    p = sub.add_parser("toda", parents=[common],
                       help="deformed Toda difference operators")
    _add_type_rank(p)
    p.add_argument("--chi", help="character values, comma rationals")
    p.add_argument("--chibar", help="opposite character values")
    p.add_argument("--check-commute", action="store_true")

    p = sub.add_parser("cross-section", parents=[common],
                       help="conjugate a cell element onto the slice")
    p.add_argument("--matrix", help="JSON rows of rational strings")
    p.add_argument("--s-rep",
                   help="alternative cell representative (JSON matrix); "
                        "reports the membership test only")
    p.add_argument("--n", type=int, help="random-trial mode: matrix size")
    p.add_argument("--trials", type=int, default=50)
    p.add_argument("--seed", type=int, default=7)

    p = sub.add_parser("kostant-section", parents=[common],
                       help="sweep a traceless upper-triangular matrix onto "
                            "the companion slice")
    p.add_argument("--b", help="JSON rows of rational strings")
    p.add_argument("--n", type=int, help="random-trial mode: matrix size")
    p.add_argument("--trials", type=int, default=50)
    p.add_argument("--seed", type=int, default=7)

    p = sub.add_parser("rmatrix-check", parents=[common],
                       help="modified classical Yang-Baxter residual")
    p.add_argument("--n", type=int, help="matrix size (default 3)")
    p.add_argument("--trials", type=int, default=50)
    p.add_argument("--seed", type=int, default=7)

    p = sub.add_parser("gstar", parents=[common],
                       help="dressing-orbit point, q-map and characters")
    p.add_argument("--n", type=int, help="matrix size (checked against --x)")
    p.add_argument("--x", help="torus diagonal, comma rationals, product 1")
    p.add_argument("--u-params", dest="u_params",
                   help="subdiagonal coordinates, comma rationals")
    p.add_argument("--matrix", help="unipotent upper factor (JSON matrix)")

    p = sub.add_parser("acceptance", parents=[common],
                       help="run the acceptance criteria")
    p.add_argument("--suite", default="all",
                   help="'all' or a criterion number 1..13")
    p.add_argument("--seed", type=int, default=7)

    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    handler = HANDLERS[args.command]
    started = time.monotonic()
    try:
        outputs, checks = handler(args)
    except ValueError as exc:
        print(f"qwhit {args.command}: {exc}", file=sys.stderr)
        return 2
    except AssertionError as exc:
        print(f"qwhit {args.command}: invariant failure: {exc}",
              file=sys.stderr)
        return 1
    except ArithmeticError as exc:
        print(f"qwhit {args.command}: {exc}", file=sys.stderr)
        return 1
    inputs = {
        k: v for k, v in sorted(vars(args).items())
        if k not in ("command", "out") and v is not None
    }
    report = {
        "schema": "1",
        "command": args.command,
        "inputs": inputs,
        "outputs": outputs,
        "checks": checks,
    }
    payload = json.dumps(report, indent=2) + "\n"
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(payload)
    else:
        sys.stdout.write(payload)
    elapsed = time.monotonic() - started
    print(f"elapsed: {elapsed:.3f}s", file=sys.stderr)
    if all(checks.values()):
        return 0
    failed = sorted(k for k, v in checks.items() if not v)
    print(f"qwhit {args.command}: failed checks: {', '.join(failed)}",
          file=sys.stderr)
    return 1


if __name__ == "__main__":
    raise SystemExit(main())
