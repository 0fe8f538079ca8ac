"""Normal forms, determinacy, codimensions and unfolding generators of the
generic constraint germs with extended codimension at most 4.

Table 1: q = 0, r = 1.  Table 2: r = 0, q >= 1 with normal form
``(x1, ..., x_{q-1}, sum_{j<=l1} x_j - sum_{l1<j<=l} x_j + gt(x_{l+1}, ...))``.
Table 3: r = 1, 1 <= q <= 3 with normal form ``(x1, ..., xq, h)``.

Variables in this module are 1-based (x1 = index 1) to match the printed
normal forms; builders return germs with the usual 0-based API.
"""

from dataclasses import dataclass
from fractions import Fraction

from .germ import ConstraintGerm
from .ring import Poly, VecPoly


@dataclass(frozen=True)
class Row:
    table: int
    type: str
    k: int = None
    determinacy: int = 0
    ex_cod: int = 0
    quotient_dim: int = 0
    moduli: bool = False
    l_offset: int = None      # Table 2: l = q - l_offset
    q_fixed: int = None       # Table 3: q is fixed per row
    q_min: int = 1
    corner: int = 0           # number of corner coordinates t
    null: int = 0             # corank c of the remaining quadratic form

    @property
    def label(self):
        if self.k is not None:
            return self.type.replace("k", str(self.k))
        return self.type

    @property
    def key(self):
        return (self.table, self.label)


def _rows():
    rows = []
    for k in range(2, 6):
        rows.append(Row(1, "(1,k)", k, k, k - 1, k - 1, q_min=0, corner=0, null=0 if k == 2 else 1))
    rows.append(Row(1, "(2)", None, 3, 4, 4, q_min=0, corner=0, null=2))
    for k in range(2, 6):
        rows.append(Row(2, "(1,k)", k, k, k - 1, k - 1, l_offset=1, q_min=1,
                        corner=0, null=0 if k == 2 else 1))
    rows.append(Row(2, "(2)", None, 3, 4, 4, l_offset=1, q_min=1, corner=0, null=2))
    for k in range(2, 5):
        rows.append(Row(2, "(3,k)", k, k, k, k, l_offset=2, q_min=2, corner=1, null=0))
    for k in (3, 4):
        rows.append(Row(2, "(4,k)", k, k, k, k, l_offset=2, q_min=2, corner=1, null=1))
    rows.append(Row(2, "(5)", None, 3, 4, 4, l_offset=2, q_min=2, corner=1, null=1))
    rows.append(Row(2, "(6)", None, 2, 3, 4, True, l_offset=3, q_min=3, corner=2, null=0))
    rows.append(Row(2, "(7)", None, 3, 4, 4, l_offset=3, q_min=3, corner=2, null=0))
    rows.append(Row(2, "(8)", None, 3, 4, 4, l_offset=3, q_min=3, corner=2, null=0))
    rows.append(Row(2, "(9)", None, 3, 4, 4, l_offset=3, q_min=3, corner=2, null=1))
    rows.append(Row(2, "(10)", None, 3, 4, 7, True, l_offset=4, q_min=4, corner=3, null=0))
    for k in range(2, 5):
        rows.append(Row(3, "(1,k)", k, k, k, k, q_fixed=1, corner=1, null=0))
    rows.append(Row(3, "(2)", None, 3, 4, 4, q_fixed=1, corner=1, null=1))
    for k in (3, 4):
        rows.append(Row(3, "(3,k)", k, k, k, k, q_fixed=1, corner=1, null=1))
    rows.append(Row(3, "(4)", None, 2, 3, 4, True, q_fixed=2, corner=2, null=0))
    rows.append(Row(3, "(5)", None, 3, 4, 4, q_fixed=2, corner=2, null=0))
    rows.append(Row(3, "(6)", None, 3, 4, 4, q_fixed=2, corner=2, null=0))
    rows.append(Row(3, "(7)", None, 3, 4, 4, q_fixed=2, corner=2, null=1))
    rows.append(Row(3, "(8)", None, 3, 4, 7, True, q_fixed=3, corner=3, null=0))
    return tuple(rows)


ROWS = _rows()
_BY_KEY = {r.key: r for r in ROWS}


def row(table, label):
    return _BY_KEY[(table, label)]


def rows(table=None):
    return [r for r in ROWS if table is None or r.table == table]


def stratum_codim(t, c):
    """Extended codimension of the stratum with t corner coordinates and a
    quadratic form of corank c in the remaining directions."""
    return t + 1 + c * (c + 1) // 2


# ---------------------------------------------------------------- builders

def _x(n, i):
    return Poly.var(n, i - 1)


def _sq_tail(n, start, signs):
    """sum_{j >= start} s_j x_j^2 with signs taken from ``signs`` cyclically."""
    p = Poly.zero(n)
    for t, j in enumerate(range(start, n + 1)):
        s = signs[t % len(signs)] if signs else 1
        p = p + _x(n, j) ** 2 * s
    return p


@dataclass(frozen=True)
class NormalFormParams:
    """Signs and moduli of a normal form.

    ``s`` are the explicit +-1 signs of the row in printed order, ``tail``
    the signs of the sum of squares, ``l1`` the number of +x_j terms in the
    linear block (Table 2), and ``delta``/``alpha`` the moduli of rows
    (6)/(10) and (4)/(8).  ``alpha`` is a number for (6)/(4) and a dict
    {(1,2): a12, (1,3): a13, (2,3): a23} for (10)/(8).
    """

    s: tuple = (1, 1, 1, 1)
    tail: tuple = (1,)
    l1: int = 0
    delta: tuple = (1, 1, 1)
    alpha: object = 0


def star_ok(d1, d2, a):
    return 4 * d1 * d2 - a * a != 0


def star_star_ok(delta, alpha):
    d = delta
    a12, a13, a23 = alpha[(1, 2)], alpha[(1, 3)], alpha[(2, 3)]
    if 4 * d[0] * d[1] - a12 ** 2 == 0 or 4 * d[0] * d[2] - a13 ** 2 == 0:
        return False
    if 4 * d[1] * d[2] - a23 ** 2 == 0:
        return False
    det = (4 * d[0] * d[1] * d[2] + a12 * a13 * a23 - d[2] * a12 ** 2
           - d[1] * a13 ** 2 - d[0] * a23 ** 2)
    return det != 0


def _gtilde(r, q, n, prm):
    """The function gt of a Table 2 row (or h of Tables 1/3) as a Poly."""
    s = [Fraction(v) for v in prm.s]
    x = lambda i: _x(n, i)  # noqa: E731
    t, lab = r.table, r.type
    if t == 1:
        if lab == "(1,k)":
            return x(1) ** r.k + _sq_tail(n, 2, prm.tail)
        return x(1) ** 3 + x(1) * x(2) ** 2 * s[0] + _sq_tail(n, 3, prm.tail)
    if t == 2:
        if lab == "(1,k)":
            return x(q) ** r.k * s[0] + _sq_tail(n, q + 1, prm.tail)
        if lab == "(2)":
            return x(q) ** 3 + x(q) * x(q + 1) ** 2 * s[0] + _sq_tail(n, q + 2, prm.tail)
        if lab == "(3,k)":
            return x(q - 1) ** r.k * s[0] + _sq_tail(n, q, prm.tail)
        if lab == "(4,k)":
            return (x(q) ** r.k * s[0] + x(q - 1) * x(q) * s[1]
                    + _sq_tail(n, q + 1, prm.tail))
        if lab == "(5)":
            return x(q - 1) ** 2 * s[0] + x(q) ** 3 * s[1] + _sq_tail(n, q + 1, prm.tail)
        if lab == "(6)":
            d1, d2 = (Fraction(v) for v in prm.delta[:2])
            return (x(q - 1) ** 2 * d1 + x(q - 2) ** 2 * d2
                    + x(q - 2) * x(q - 1) * Fraction(prm.alpha) + _sq_tail(n, q, prm.tail))
        if lab == "(7)":
            return ((x(q - 2) + x(q - 1) * s[1]) ** 2 * s[0] + x(q - 1) ** 3 * s[2]
                    + _sq_tail(n, q, prm.tail))
        if lab == "(8)":
            return (x(q - 2) ** 3 * s[0] + x(q - 1) ** 2 * s[1]
                    + x(q - 2) * x(q - 1) * s[2] + _sq_tail(n, q, prm.tail))
        if lab == "(9)":
            return (x(q) ** 3 + x(q - 2) * x(q) * s[0] + x(q - 1) * x(q) * s[1]
                    + x(q - 2) * x(q - 1) * s[2] + _sq_tail(n, q + 1, prm.tail))
        if lab == "(10)":
            v = [q - 3, q - 2, q - 1]
            return _ternary(n, v, prm) + _sq_tail(n, q, prm.tail)
    if t == 3:
        if lab == "(1,k)":
            return x(1) ** r.k + _sq_tail(n, 2, prm.tail)
        if lab == "(2)":
            return x(2) ** 3 + x(1) ** 2 * s[0] + _sq_tail(n, 3, prm.tail)
        if lab == "(3,k)":
            return x(2) ** r.k + x(1) * x(2) * s[0] + _sq_tail(n, 3, prm.tail)
        if lab == "(4)":
            d1, d2 = (Fraction(v) for v in prm.delta[:2])
            return (x(1) ** 2 * d1 + x(2) ** 2 * d2 + x(1) * x(2) * Fraction(prm.alpha)
                    + _sq_tail(n, 3, prm.tail))
        if lab == "(5)":
            return (x(1) ** 3 + x(2) ** 2 * s[0] + x(1) * x(2) * s[1]
                    + _sq_tail(n, 3, prm.tail))
        if lab == "(6)":
            return ((x(1) + x(2) * s[0]) ** 2 + x(2) ** 3 * s[1] + _sq_tail(n, 3, prm.tail))
        if lab == "(7)":
            return (x(3) ** 3 + x(1) * x(3) * s[0] + x(2) * x(3) * s[1]
                    + x(1) * x(2) * s[2] + _sq_tail(n, 4, prm.tail))
        if lab == "(8)":
            return _ternary(n, [1, 2, 3], prm) + _sq_tail(n, 4, prm.tail)
    raise KeyError((t, lab))


def _ternary(n, v, prm):
    p = Poly.zero(n)
    for j in range(3):
        p = p + _x(n, v[j]) ** 2 * Fraction(prm.delta[j])
    for (i, j), a in prm.alpha.items():
        p = p + _x(n, v[i - 1]) * _x(n, v[j - 1]) * Fraction(a)
    return p + _x(n, v[0]) * _x(n, v[1]) * _x(n, v[2]) * Fraction(prm.s[0])


def min_nvars(r, q):
    """Smallest n for which every printed variable of the row exists."""
    if r.table == 1:
        return 2 if r.type == "(2)" else 1
    if r.table == 2:
        return q + 1 if r.type == "(2)" else q
    return {"(2)": 2, "(3,k)": 2, "(7)": 3}.get(r.type, q)


def row_q(r, q=None):
    if r.table == 1:
        return 0
    if r.table == 3:
        return r.q_fixed
    return max(r.q_min, q if q is not None else r.q_min)


def normal_form(r, q=None, n=None, prm=None):
    """The printed normal form of row ``r`` as a ConstraintGerm."""
    prm = prm or NormalFormParams()
    q = row_q(r, q)
    n = max(min_nvars(r, q), n if n is not None else 0)
    if r.table == 1:
        return ConstraintGerm(n, [], [_gtilde(r, q, n, prm)])
    if r.table == 3:
        return ConstraintGerm(n, [_x(n, i) for i in range(1, q + 1)], [_gtilde(r, q, n, prm)])
    l = q - r.l_offset
    if not 0 <= prm.l1 <= (l + 1) // 2:
        raise ValueError("l1 out of range")
    last = _gtilde(r, q, n, prm)
    for j in range(1, l + 1):
        last = last + (_x(n, j) if j <= prm.l1 else -_x(n, j))
    return ConstraintGerm(n, [_x(n, i) for i in range(1, q)] + [last], [])


# ---------------------------------------------------- quotient generators

def generator_monomials(r, q=None):
    """Quotient-generator row as a list of {variable (1-based): power} in the normal
    form's coordinates, together with the (0-based) component index."""
    q = row_q(r, q)
    lab, t = r.type, r.table
    if t == 1:
        comp = 0
        if lab == "(1,k)":
            mons = [{1: i} for i in range(r.k - 1)]
        else:
            mons = [{}, {1: 1}, {2: 1}, {1: 2}]
    elif t == 2:
        comp = q - 1
        mons = {
            "(1,k)": lambda: [{q: i} for i in range(r.k - 1)],
            "(2)": lambda: [{}, {q: 1}, {q + 1: 1}, {q: 2}],
            "(3,k)": lambda: [{q - 1: i} for i in range(r.k)],
            "(4,k)": lambda: [{q: i} for i in range(r.k)],
            "(5)": lambda: [{}, {q - 1: 1}, {q: 1}, {q - 1: 1, q: 1}],
            "(6)": lambda: [{}, {q - 2: 1}, {q - 1: 1}, {q - 2: 1, q - 1: 1}],
            "(7)": lambda: [{}, {q - 2: 1}, {q - 1: 1}, {q - 1: 2}],
            # the quadratic class is the square of the variable carrying the cubic term
            "(8)": lambda: [{}, {q - 2: 1}, {q - 1: 1}, {q - 2: 2}],
            "(9)": lambda: [{}, {q - 2: 1}, {q - 1: 1}, {q: 1}],
            "(10)": lambda: [{}, {q - 3: 1}, {q - 2: 1}, {q - 1: 1}, {q - 3: 1, q - 2: 1},
                             {q - 3: 1, q - 1: 1}, {q - 2: 1, q - 1: 1}],
        }[lab]()
    else:
        comp = q
        mons = {
            "(1,k)": lambda: [{1: i} for i in range(r.k)],
            "(2)": lambda: [{}, {1: 1}, {2: 1}, {1: 1, 2: 1}],
            "(3,k)": lambda: [{2: i} for i in range(r.k)],
            "(4)": lambda: [{}, {1: 1}, {2: 1}, {1: 1, 2: 1}],
            "(5)": lambda: [{}, {1: 1}, {2: 1}, {1: 2}],
            "(6)": lambda: [{}, {1: 1}, {2: 1}, {2: 2}],
            "(7)": lambda: [{}, {1: 1}, {2: 1}, {3: 1}],
            "(8)": lambda: [{}, {1: 1}, {2: 1}, {3: 1}, {1: 1, 2: 1}, {1: 1, 3: 1},
                            {2: 1, 3: 1}],
        }[lab]()
    mons = [{v: e for v, e in m.items() if e} for m in mons]
    return comp, mons


def generators_in_normal_form(r, q, n):
    """Quotient generators as VecPolys for the normal form on n variables."""
    q = row_q(r, q)
    comp, mons = generator_monomials(r, q)
    p = q + (1 if r.table in (1, 3) else 0)
    out = []
    for m in mons:
        e = [0] * n
        for v, k in m.items():
            e[v - 1] = k
        out.append(VecPoly.from_monomial(n, p, comp, tuple(e)))
    return out


# ---------------------------------------------------------------- strata of
# the 2-jets with t = 2 (seven alpha cases) and t = 2, c = 1 (fifteen a-cases)

def lambda_two_jet(q, n, a11, a12, a22, signs=None):
    """2-jet (x1..x_{q-1}, sum_{j<=q-3} +-x_j + a11 x_{q-2}^2 + a12 x_{q-2}x_{q-1}
    + a22 x_{q-1}^2 + sum_{j>=q} +-x_j^2)."""
    signs = signs or (1,)
    last = Poly.zero(n)
    for j in range(1, q - 2):
        last = last + _x(n, j) * signs[(j - 1) % len(signs)]
    last = (last + _x(n, q - 2) ** 2 * Fraction(a11) + _x(n, q - 2) * _x(n, q - 1) * Fraction(a12)
            + _x(n, q - 1) ** 2 * Fraction(a22) + _sq_tail(n, q, signs))
    return ConstraintGerm(n, [_x(n, i) for i in range(1, q)] + [last], [])


SEVEN_CASES = (
    # (alpha11, alpha12, alpha22), quadratic quotient monomials in
    # 1-based offsets relative to q: -2 -> x_{q-2}, -1 -> x_{q-1}
    ((1, 1, 1), [{-2: 2}]),
    ((1, 0, 1), [{-2: 1, -1: 1}]),
    ((1, 1, 0), [{-1: 2}]),
    ((0, 1, 0), [{-2: 2}, {-1: 2}]),
    ((0, 0, 1), [{-2: 2}, {-2: 1, -1: 1}]),
    ((1, 0, 0), [{-2: 1, -1: 1}, {-1: 2}]),
    ((0, 0, 0), [{-2: 2}, {-2: 1, -1: 1}, {-1: 2}]),
)

SEVEN_CASE_CODIM = (4, 4, 4, 5, 5, 5, 6)  # minus (n - q)


def lambda_a_jet(q, n, a, signs=None):
    """2-jet g_a with a = (a_{q-2,q-2}, a_{q-2,q-1}, a_{q-2,q}, a_{q-1,q-1}, a_{q-1,q})."""
    signs = signs or (1,)
    A, B, C, D, E = (Fraction(v) for v in a)
    x = lambda i: _x(n, i)  # noqa: E731
    last = Poly.zero(n)
    for j in range(1, q - 2):
        last = last + x(j) * signs[(j - 1) % len(signs)]
    last = (last + x(q - 2) ** 2 * A + x(q - 2) * x(q - 1) * B + x(q - 2) * x(q) * C
            + x(q - 1) ** 2 * D + x(q - 1) * x(q) * E + _sq_tail(n, q + 1, signs))
    return ConstraintGerm(n, [x(i) for i in range(1, q)] + [last], [])


# offsets relative to q: 0 -> x_q, -1 -> x_{q-1}, -2 -> x_{q-2}
_XQ2, _XQ1Q, _XQ2Q = {0: 2}, {-1: 1, 0: 1}, {-2: 1, 0: 1}
_X12, _X2Q1, _X22 = {-1: 2}, {-2: 1, -1: 1}, {-2: 2}

FIFTEEN_CASES = (
    ((0, 0, 0, 0, 0), [_XQ2, _XQ1Q, _XQ2Q, _X12, _X2Q1, _X22]),
    ((0, 1, 0, 0, 1), [_XQ2, _XQ2Q, _X22]),
    ((0, 0, 1, 0, 0), [_X12, _XQ2, _XQ1Q]),
    ((0, 1, 0, 1, 0), [_XQ2, _XQ1Q, _XQ2Q, _X22]),
    ((0, 1, 0, 0, 0), [_XQ2, _XQ1Q, _XQ2Q, _X12, _X22]),
    ((1, 0, 0, 0, 0), [_XQ2, _XQ1Q, _X12, _XQ2Q, _X2Q1]),
    ((1, 1, 0, 0, 0), [_XQ2, _XQ1Q, _XQ2Q, _X12]),
    ((1, 0, 0, 0, 1), [_XQ2, _XQ2Q]),
    ((1, 0, 0, 1, 0), [_XQ2, _XQ1Q, _XQ2Q, _X2Q1]),
    ((0, 0, 0, 1, 0), [_XQ2, _XQ2Q, _X22, _XQ1Q, _X2Q1]),
    ((0, 0, 1, 1, 0), [_XQ2, _XQ1Q]),
    ((0, 1, 1, 0, 0), [_XQ2, _XQ1Q, _X12]),
    ((0, 1, 1, 0, 1), [_XQ2]),
    ((0, 0, 1, 0, 1), [_XQ2, _X22]),
    ((0, 0, 0, 0, 1), [_XQ2, _XQ2Q, _X22]),
)

# K[G]^2 codimension minus (n - q), grouped as in the printed table
FIFTEEN_CASE_CODIM = {13: 4, 8: 5, 11: 5, 14: 5, 2: 6, 3: 6, 12: 6, 15: 6,
                      4: 7, 7: 7, 9: 7, 5: 8, 6: 8, 10: 8, 1: 9}


def offset_monomial(m, q, n):
    e = [0] * n
    for off, k in m.items():
        e[q + off - 1] += k
    return tuple(e)
