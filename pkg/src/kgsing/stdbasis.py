"""Truncated standard bases by graded echelonization of the jet space.

The submodule generated by a list of VecPolys is computed modulo terms of
degree > m as the linear span of all monomial multiples x^b * gen.  Rows are
head-reduced against pivots indexed by the module order, so the pivot
columns are exactly the leading monomials of the truncated module and the
remaining columns are its standard monomials.
"""

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

try:
    from gmpy2 import mpq as _Q
except ImportError:  # pragma: no cover
    _Q = Fraction

from .errors import ApproxPivotAmbiguous, ZeroElement
from .order import leading, term_key
from .ring import (Poly, VecPoly, mono_div, mono_divides, mono_lcm,
                   monomials_of_degree, monomials_upto)


@lru_cache(maxsize=64)
def jet_space(n, p, m):
    """Columns (component, exponents) of J^m(n, p), largest first."""
    cols = [(i, e) for e in monomials_upto(n, m) for i in range(p)]
    cols.sort(key=lambda t: term_key(*t))
    index = {c: k for k, c in enumerate(cols)}
    return tuple(cols), index


@dataclass(frozen=True)
class Gen:
    """A module generator multiplied by every monomial of degree >= depth."""

    vec: VecPoly
    depth: int = 0


@dataclass
class TruncatedModuleBasis:
    generators: list
    m: int
    rank: int
    nvars: int
    standard_monomials: list
    stabilized: bool
    tol: float = None
    pivots: dict = field(default=None, repr=False)
    span_dim: int = 0
    min_pivot: float = None
    max_dropped: float = 0.0

    def codim(self):
        """Number of standard monomials (the quotient dimension mod degree m+1)."""
        return len(self.standard_monomials)

    def counts_by_degree(self):
        out = [0] * (self.m + 1)
        for _, e in self.standard_monomials:
            out[sum(e)] += 1
        return out

    def leading_monomials(self):
        return [leading(g)[:2] for g in self.generators]

    def normal_form(self, f):
        """Remainder of f after full reduction by the echelon rows."""
        cols, index = jet_space(self.nvars, self.rank, self.m)
        row = _vec_to_row(f, index, self.m, self.tol)
        red = _Reducer(self.tol)
        red.full_reduce(row, self.pivots)
        return _row_to_vec(row, cols, self.nvars, self.rank, self.tol, self.m)


class _Reducer:
    def __init__(self, tol):
        self.tol = tol
        self.max_dropped = 0.0
        self.min_pivot = None

    def _zero(self, v):
        if self.tol is None:
            return v == 0
        a = abs(v)
        if a < self.tol:
            if a > self.max_dropped:
                self.max_dropped = a
            return True
        return False

    def sub(self, row, f, piv):
        for j, v in piv.items():
            nv = row.get(j, 0) - f * v
            if self._zero(nv):
                row.pop(j, None)
            else:
                row[j] = nv

    def head_reduce(self, row, pivots):
        while row:
            c = min(row)
            piv = pivots.get(c)
            if piv is None:
                return c
            self.sub(row, row[c], piv)
        return None

    def full_reduce(self, row, pivots):
        while True:
            cands = [c for c in row if c in pivots]
            if not cands:
                return
            c = min(cands)
            self.sub(row, row[c], pivots[c])

    def make_pivot(self, row, c):
        h = row[c]
        if self.tol is not None:
            a = abs(h)
            if a < 10 * self.tol:
                raise ApproxPivotAmbiguous(
                    f"pivot magnitude {a:.3e} within 10x tolerance of zero")
            if self.min_pivot is None or a < self.min_pivot:
                self.min_pivot = a
        inv = 1 / h
        return {j: v * inv for j, v in row.items()}


def _conv(c, tol):
    if tol is None:
        return _Q(c.numerator, c.denominator)
    return float(c)


def _vec_to_row(f, index, m, tol, mult=None):
    row = {}
    for i, e, c in f.terms():
        if mult is not None:
            e = tuple(a + b for a, b in zip(e, mult))
        if sum(e) > m:
            continue
        row[index[(i, e)]] = _conv(c, tol)
    return row


def _row_to_vec(row, cols, n, p, tol, m):
    comps = [dict() for _ in range(p)]
    for k, v in row.items():
        i, e = cols[k]
        comps[i][e] = Fraction(int(v.numerator), int(v.denominator)) if tol is None else float(v)
    return VecPoly([Poly(n, c, m, tol) for c in comps])


def _as_gen(g):
    return g if isinstance(g, Gen) else Gen(g, 0)


def echelonize(gens, m, n=None, p=None, tol=None):
    """Head-reduced echelon rows of the truncated module; returns (pivots, reducer)."""
    gens = [_as_gen(g) for g in gens]
    if gens:
        n = gens[0].vec.nvars
        p = gens[0].vec.rank
        tol = gens[0].vec.tol
    cols, index = jet_space(n, p, m)
    pivots = {}
    red = _Reducer(tol)
    # scale rows in approx mode so that the tolerance is relative
    prepared = []
    for g in gens:
        o = g.vec.order()
        if o is None:
            continue
        terms = [(i, e, _conv(c, tol)) for i, e, c in g.vec.terms() if sum(e) <= m]
        if tol is not None:
            s = max((abs(c) for _, _, c in terms), default=0.0)
            if s:
                terms = [(i, e, c / s) for i, e, c in terms]
        prepared.append((g.depth, o, terms))
    top = max((m - o for _, o, _ in prepared), default=-1)
    for d in range(0, top + 1):
        mults = monomials_of_degree(n, d)
        for depth, o, terms in prepared:
            if d < depth or d + o > m:
                continue
            for b in mults:
                row = {}
                for i, e, c in terms:
                    ee = tuple(x + y for x, y in zip(e, b))
                    if sum(ee) <= m:
                        row[index[(i, ee)]] = c
                if not row:
                    continue
                c = red.head_reduce(row, pivots)
                if c is not None:
                    pivots[c] = red.make_pivot(row, c)
    return pivots, red, cols


def standard_basis_truncated(gens, m, n=None, p=None, tol=None):
    """Standard basis of the module spanned by ``gens`` modulo degree m+1.

    ``gens`` holds VecPolys or ``Gen`` wrappers carrying a multiplier depth.
    n, p and tol are only needed when ``gens`` is empty.
    """
    gens = [_as_gen(g) for g in gens]
    if gens:
        n, p, tol = gens[0].vec.nvars, gens[0].vec.rank, gens[0].vec.tol
    pivots, red, cols = echelonize(gens, m, n, p, tol)
    standard = [cols[k] for k in range(len(cols)) if k not in pivots]
    layer = [k for k, (_, e) in enumerate(cols) if sum(e) == m]
    stabilized = bool(layer) and all(k in pivots for k in layer)
    # minimal leading monomials give the standard basis proper
    lead = sorted(pivots)
    minimal = []
    for k in lead:
        i, e = cols[k]
        if not any(j == i and mono_divides(f, e) for j, f in (cols[t] for t in minimal)):
            minimal.append(k)
    generators = []
    for k in minimal:
        row = dict(pivots[k])
        tail = {c: v for c, v in row.items() if c != k}
        red.full_reduce(tail, pivots)
        tail[k] = row[k]
        generators.append(_row_to_vec(tail, cols, n, p, tol, m))
    return TruncatedModuleBasis(
        generators=generators, m=m, rank=p, nvars=n,
        standard_monomials=standard, stabilized=stabilized, tol=tol,
        pivots=pivots, span_dim=len(pivots), min_pivot=red.min_pivot,
        max_dropped=red.max_dropped)


def spoly(f, g):
    """Cancellation combination on the lcm of leading monomials (0 across components)."""
    if f.is_zero() or g.is_zero():
        raise ZeroElement("spoly of the zero element")
    i, a, ca = leading(f)
    j, b, cb = leading(g)
    if i != j:
        return VecPoly([Poly.zero(f.nvars, None, f.tol) for _ in range(f.rank)])
    lcm = mono_lcm(a, b)
    return f.mul_monomial(mono_div(lcm, a), 1 / ca) - g.mul_monomial(mono_div(lcm, b), 1 / cb)


def divide(f, S, m):
    """Division with remainder modulo degree m+1.

    Among elements whose leading monomial divides the current term the one
    with the largest leading monomial is used.  Returns (cofactors, remainder).
    """
    n, p, tol = f.nvars, f.rank, f.tol
    heads = [leading(s) for s in S]
    order = sorted(range(len(S)), key=lambda t: term_key(heads[t][0], heads[t][1]))
    cof = [Poly.zero(n, m, tol) for _ in S]
    rem = [dict() for _ in range(p)]
    cur = f.truncate(m)
    while not cur.is_zero():
        i, e, c = leading(cur)
        for t in order:
            j, a, ca = heads[t]
            if j == i and mono_divides(a, e):
                q = mono_div(e, a)
                coef = c / ca
                cur = (cur - S[t].mul_monomial(q, coef)).truncate(m)
                cof[t] = cof[t] + Poly.monomial(q, coef, m, tol)
                break
        else:
            rem[i][e] = c
            comps = list(cur.comps)
            comps[i] = comps[i] - Poly.monomial(e, c, None, tol)
            cur = VecPoly(comps)
    return cof, VecPoly([Poly(n, r, m, tol) for r in rem])


def contains(basis, f):
    return divide(f.truncate(basis.m), basis.generators, basis.m)[1].is_zero()


def nakayama_stable(basis):
    return basis.stabilized
