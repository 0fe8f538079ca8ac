"""Independent reference computations over the truncated jet space.

A module element is a dict {(component, exponents): Fraction}.  The
submodule generated by a set of elements, modulo terms of degree > m, is the
row space of all monomial multiples; everything here is plain dense Gaussian
elimination over the full monomial basis, sharing no code with the package.
"""

from fractions import Fraction
from itertools import product


def monomials(n, m):
    """All exponent tuples of total degree <= m."""
    return [e for e in product(range(m + 1), repeat=n) if sum(e) <= m]


def columns(n, p, m):
    return [(i, e) for i in range(p) for e in monomials(n, m)]


def as_dict(vec):
    """VecPoly -> plain dict (only reads its terms)."""
    return {(i, tuple(e)): Fraction(c) for i, e, c in vec.terms() if c != 0}


def multiples(elem, n, m, depth=0):
    """x^b * elem for depth <= |b| <= m, truncated at degree m."""
    out = []
    for b in monomials(n, m):
        if sum(b) < depth:
            continue
        row = {}
        for (i, e), c in elem.items():
            ee = tuple(x + y for x, y in zip(e, b))
            if sum(ee) <= m:
                row[(i, ee)] = row.get((i, ee), 0) + c
        row = {k: v for k, v in row.items() if v != 0}
        if row:
            out.append(row)
    return out


class DenseSpan:
    """Row-echelon form of a set of dict vectors over a fixed column list."""

    def __init__(self, cols):
        self.cols = list(cols)
        self.index = {c: k for k, c in enumerate(self.cols)}
        self.rows = {}      # pivot column -> dense row (pivot entry 1)

    def _dense(self, d):
        v = [Fraction(0)] * len(self.cols)
        for k, c in d.items():
            v[self.index[k]] += c
        return v

    def _reduce(self, v):
        v = list(v)
        for k in range(len(v)):
            if v[k] != 0 and k in self.rows:
                f = v[k]
                r = self.rows[k]
                v = [a - f * b for a, b in zip(v, r)]
        return v

    def add(self, d):
        v = self._reduce(self._dense(d))
        piv = next((k for k, x in enumerate(v) if x != 0), None)
        if piv is None:
            return False
        s = v[piv]
        v = [x / s for x in v]
        # keep earlier rows reduced against the new pivot
        for k, r in self.rows.items():
            if r[piv] != 0:
                f = r[piv]
                self.rows[k] = [a - f * b for a, b in zip(r, v)]
        self.rows[piv] = v
        return True

    @property
    def rank(self):
        return len(self.rows)

    def contains(self, d):
        return all(x == 0 for x in self._reduce(self._dense(d)))


def module_span(gens, n, p, m, depths=None):
    """DenseSpan of the submodule generated by ``gens`` (dicts) mod degree m+1."""
    sp = DenseSpan(columns(n, p, m))
    depths = depths or [0] * len(gens)
    for g, d in zip(gens, depths):
        for row in multiples(g, n, m, d):
            sp.add(row)
    return sp


def truncate(d, m):
    return {k: v for k, v in d.items() if sum(k[1]) <= m}
