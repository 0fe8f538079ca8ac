"""Reproduction checks for the classification tables and the 2-jet strata.

Each check returns a ``Check`` record; ``verify_all`` runs the whole
suite (used by ``kgsing tables verify``).
"""

from dataclasses import dataclass
from fractions import Fraction
import random

from . import tables
from .analysis import _quotient_span, determinacy_order, jet_codim, kge_codim
from .classify import classify
from .ring import Poly, VecPoly
from .tables import NormalFormParams
from .tangent import span, tk_generators, tke_generators


@dataclass
class Check:
    name: str
    ok: bool
    detail: str = ""


def spans_quotient(basis, vectors):
    """Do the classes of ``vectors`` form a basis of the quotient by ``basis``?"""
    rows = [basis.normal_form(v.truncate(basis.m)) for v in vectors]
    missing, rk = _quotient_span(rows, basis)
    return not missing and rk == len(vectors) == len(basis.standard_monomials), missing


def random_params(row, rng):
    """Admissible random signs and moduli for a table row."""
    s = tuple(rng.choice((1, -1)) for _ in range(4))
    tail = tuple(rng.choice((1, -1)) for _ in range(3))
    delta = tuple(rng.choice((1, -1)) for _ in range(3))
    alpha = 0
    if row.type in ("(6)",) or (row.table == 3 and row.type == "(4)"):
        while True:
            alpha = Fraction(rng.randint(-9, 9), rng.randint(1, 4))
            if tables.star_ok(delta[0], delta[1], alpha):
                break
    elif row.type == "(10)" or (row.table == 3 and row.type == "(8)"):
        while True:
            alpha = {key: Fraction(rng.randint(-6, 6), rng.randint(1, 3))
                     for key in ((1, 2), (1, 3), (2, 3))}
            if tables.star_star_ok(delta, alpha):
                break
    return NormalFormParams(s=s, tail=tail, l1=0, delta=delta, alpha=alpha)


def random_q(row, rng):
    if row.table != 2:
        return None
    return rng.randint(row.q_min, row.q_min + 1)


def check_type_1k(k, q, n, m_max=8):
    """Type (1,k) of the Lambda_{q-1} family: codim k-1, k-determined, and the
    quotient basis is e_q, x_q e_q, ..., x_q^{k-2} e_q."""
    r = tables.row(2, f"(1,{k})")
    germ = tables.normal_form(r, q, n)
    c = kge_codim(germ, m_max)
    d = determinacy_order(germ, m_max)
    want = sorted((q - 1, tuple(i if v == q - 1 else 0 for v in range(n))) for i in range(k - 1))
    got = sorted(c.quotient_basis)
    ok = c.certified and c.value == k - 1 and d.certified and d.order == k and got == want
    return Check(f"type (1,{k}) q={q} n={n}", ok,
                 f"codim {c.describe()}, determinacy {d.describe()}, basis {got}")


def check_row(row, prm=None, q=None, n=None, m_max=8):
    """Normal form of a row: determinacy and codimension columns, and label."""
    germ = tables.normal_form(row, q, n, prm)
    c = kge_codim(germ, m_max)
    d = determinacy_order(germ, m_max)
    problems = []
    if not c.certified or c.value != row.quotient_dim:
        problems.append(f"quotient dimension {c.describe()} != {row.quotient_dim}")
    if not row.moduli and c.value != row.ex_cod:
        problems.append(f"codimension {c.value} != ex.cod {row.ex_cod}")
    if not d.certified or d.order != row.determinacy:
        problems.append(f"determinacy {d.describe()} != {row.determinacy}")
    res = classify(germ, cross_check=False)
    if res.row is None or res.row.key != row.key:
        problems.append(f"classified as {res.table} {res.label} ({res.reason})")
    qq = tables.row_q(row, q)
    return Check(f"table {row.table} {row.label} q={qq} n={germ.nvars}", not problems,
                 "; ".join(problems) or f"codim {c.value}, determinacy {d.order}")


def check_table4(row, q=None, n=None, prm=None, m_max=8):
    """The printed quotient generators span the quotient and are independent."""
    q = tables.row_q(row, q)
    germ = tables.normal_form(row, q, n, prm)
    c = kge_codim(germ, m_max)
    basis = span(tke_generators(germ), c.degree)
    vecs = tables.generators_in_normal_form(row, q, germ.nvars)
    ok, missing = spans_quotient(basis, vecs)
    return Check(f"table 4 {row.table} {row.label} q={q}", ok and c.certified,
                 f"{len(vecs)} generators" + (f", unspanned {missing}" if missing else ""))


def _quad_vec(q, n, mono):
    e = tables.offset_monomial(mono, q, n)
    return VecPoly.from_monomial(n, q, q - 1, e)


def _linear_part(q, n, first):
    """Classes x_j e_q for j = first..n (1-based)."""
    return [VecPoly.from_monomial(n, q, q - 1, tuple(1 if v == j - 1 else 0 for v in range(n)))
            for j in range(first, n + 1)]


def check_seven_case(index, q, n=None):
    """Seven-case suite: the listed basis of the jet quotient and the K[G]^2-codimension."""
    n = n if n is not None else q + 2
    alphas, mons = tables.SEVEN_CASES[index]
    germ = tables.lambda_two_jet(q, n, *alphas)
    basis = _jet_basis(germ)
    vecs = _linear_part(q, n, q - 2) + [_quad_vec(q, n, m) for m in mons]
    ok, missing = spans_quotient(basis, vecs)
    cod = jet_codim(germ, 2)
    want = n - q + tables.SEVEN_CASE_CODIM[index]
    return Check(f"seven-case {index + 1} alpha={alphas} q={q}", ok and cod == want,
                 f"codim {cod} (expected {want})" + (f", unspanned {missing}" if missing else ""))


def check_fifteen_case(index, q=3, n=None):
    """Fifteen-case suite: representative parameter, basis and the expected codimension."""
    n = n if n is not None else q + 2
    a, mons = tables.FIFTEEN_CASES[index]
    germ = tables.lambda_a_jet(q, n, a)
    basis = _jet_basis(germ)
    vecs = _linear_part(q, n, q - 2) + [_quad_vec(q, n, m) for m in mons]
    ok, missing = spans_quotient(basis, vecs)
    cod = jet_codim(germ, 2)
    want = n - q + tables.FIFTEEN_CASE_CODIM[index + 1]
    return Check(f"fifteen-case {index + 1} a={a} q={q}", ok and cod == want,
                 f"codim {cod} (expected {want})" + (f", unspanned {missing}" if missing else ""))


def _jet_basis(germ):
    """Standard basis of TK[G](j^2) + M^3 restricted to origin-vanishing jets."""
    basis = span(tk_generators(germ), 2)
    # the constant classes e_i lie outside M E^p and are not part of the jet quotient
    basis.standard_monomials = [s for s in basis.standard_monomials if sum(s[1]) > 0]
    return basis


def verify_all(seed=0, m_max=8):
    rng = random.Random(seed)
    out = []
    for k in range(2, 6):
        for q in (1, 2, 3):
            out.append(check_type_1k(k, q, q + 1, m_max))
    for row in tables.ROWS:
        prm = random_params(row, rng)
        q = random_q(row, rng)
        out.append(check_row(row, prm, q, None, m_max))
        out.append(check_table4(row, q, None, prm, m_max))
    for q in (3, 4):
        for i in range(len(tables.SEVEN_CASES)):
            out.append(check_seven_case(i, q))
    for i in range(len(tables.FIFTEEN_CASES)):
        out.append(check_fifteen_case(i))
    return out
