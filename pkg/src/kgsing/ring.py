"""Sparse multivariate polynomials over Q (or floats) with jet truncation.

A ``Poly`` is a finite map from exponent tuples to coefficients.  In exact
mode coefficients are ``Fraction``; in approx mode they are floats and any
value below the tolerance is treated as zero.  Variable indices are 0-based
throughout the Python API; reports print them as x1..xn.
"""

from fractions import Fraction
from itertools import combinations_with_replacement
import math
import operator

from .errors import NonLocalSubstitution, SingularLinearPart

DEFAULT_TOL = 1e-9


def _coerce(c, tol):
    if tol is None:
        if isinstance(c, float):
            raise TypeError("float coefficient in exact mode")
        return Fraction(c)
    return float(c)


def _zero(c, tol):
    return c == 0 if tol is None else abs(c) < tol


def _min_trunc(a, b):
    if a is None:
        return b
    if b is None:
        return a
    return min(a, b)


def monomials_upto(n, m, start=0):
    """All exponent tuples in n variables with start <= degree <= m."""
    out = []
    for d in range(start, m + 1):
        out.extend(monomials_of_degree(n, d))
    return out


def monomials_of_degree(n, d):
    out = []
    for combo in combinations_with_replacement(range(n), d):
        e = [0] * n
        for i in combo:
            e[i] += 1
        out.append(tuple(e))
    return out


def mono_mul(a, b):
    return tuple(map(operator.add, a, b))


def mono_divides(a, b):
    return all(x <= y for x, y in zip(a, b))


def mono_div(b, a):
    return tuple(y - x for x, y in zip(a, b))


def mono_lcm(a, b):
    return tuple(max(x, y) for x, y in zip(a, b))


class Poly:
    __slots__ = ("nvars", "terms", "trunc", "tol")

    def __init__(self, nvars, terms=None, trunc=None, tol=None):
        self.nvars = nvars
        self.trunc = trunc
        self.tol = tol
        clean = {}
        if terms:
            for e, c in terms.items():
                e = tuple(e)
                if len(e) != nvars:
                    raise ValueError(f"exponent {e} does not match nvars={nvars}")
                if trunc is not None and sum(e) > trunc:
                    continue
                c = _coerce(c, tol)
                if not _zero(c, tol):
                    clean[e] = c
        self.terms = clean

    # -- constructors -------------------------------------------------
    @classmethod
    def zero(cls, nvars, trunc=None, tol=None):
        return cls(nvars, None, trunc, tol)

    @classmethod
    def const(cls, nvars, c, trunc=None, tol=None):
        return cls(nvars, {(0,) * nvars: c}, trunc, tol)

    @classmethod
    def var(cls, nvars, i, trunc=None, tol=None):
        e = [0] * nvars
        e[i] = 1
        return cls(nvars, {tuple(e): 1}, trunc, tol)

    @classmethod
    def monomial(cls, exps, c=1, trunc=None, tol=None):
        return cls(len(exps), {tuple(exps): c}, trunc, tol)

    def _new(self, terms, trunc):
        # terms already clean and coerced
        p = Poly.__new__(Poly)
        p.nvars = self.nvars
        p.trunc = trunc
        p.tol = self.tol
        if trunc is not None:
            terms = {e: c for e, c in terms.items() if sum(e) <= trunc}
        tol = self.tol
        p.terms = {e: c for e, c in terms.items() if not _zero(c, tol)}
        return p

    def _lift(self, other):
        if isinstance(other, Poly):
            if other.nvars != self.nvars:
                raise ValueError("nvars mismatch")
            if (other.tol is None) != (self.tol is None):
                raise ValueError("mixed exact/approx coefficients")
            return other
        return Poly.const(self.nvars, other, None, self.tol)

    # -- queries ------------------------------------------------------
    def is_zero(self):
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def degree(self):
        return max((sum(e) for e in self.terms), default=-1)

    def order(self):
        """Lowest degree of a term, or None for the zero polynomial."""
        return min((sum(e) for e in self.terms), default=None)

    def coeff(self, exps):
        z = Fraction(0) if self.tol is None else 0.0
        return self.terms.get(tuple(exps), z)

    def constant_term(self):
        return self.coeff((0,) * self.nvars)

    def linear_coeffs(self):
        out = []
        for i in range(self.nvars):
            e = [0] * self.nvars
            e[i] = 1
            out.append(self.coeff(e))
        return out

    def homogeneous(self, d):
        return self._new({e: c for e, c in self.terms.items() if sum(e) == d}, self.trunc)

    def variables(self):
        used = set()
        for e in self.terms:
            used.update(i for i, x in enumerate(e) if x)
        return sorted(used)

    def evaluate(self, point):
        tot = Fraction(0) if self.tol is None else 0.0
        for e, c in self.terms.items():
            t = c
            for x, k in zip(point, e):
                if k:
                    t = t * x ** k
            tot = tot + t
        return tot

    # -- arithmetic ---------------------------------------------------
    def __add__(self, other):
        other = self._lift(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            out[e] = out.get(e, 0) + c
        return self._new(out, _min_trunc(self.trunc, other.trunc))

    __radd__ = __add__

    def __neg__(self):
        return self._new({e: -c for e, c in self.terms.items()}, self.trunc)

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def scale(self, c):
        c = _coerce(c, self.tol)
        return self._new({e: v * c for e, v in self.terms.items()}, self.trunc)

    def __mul__(self, other):
        if not isinstance(other, Poly):
            return self.scale(other)
        other = self._lift(other)
        t = _min_trunc(self.trunc, other.trunc)
        out = {}
        for e1, c1 in self.terms.items():
            d1 = sum(e1)
            for e2, c2 in other.terms.items():
                if t is not None and d1 + sum(e2) > t:
                    continue
                e = mono_mul(e1, e2)
                out[e] = out.get(e, 0) + c1 * c2
        return self._new(out, t)

    __rmul__ = __mul__

    def mul_trunc(self, other, m):
        """Product with every term of degree > m discarded on the fly."""
        out = {}
        by_deg = {}
        for e2, c2 in other.terms.items():
            by_deg.setdefault(sum(e2), []).append((e2, c2))
        degs = sorted(by_deg)
        for e1, c1 in self.terms.items():
            d1 = sum(e1)
            for d2 in degs:
                if d1 + d2 > m:
                    break
                for e2, c2 in by_deg[d2]:
                    e = tuple(map(operator.add, e1, e2))
                    out[e] = out.get(e, 0) + c1 * c2
        return self._new(out, _min_trunc(_min_trunc(self.trunc, other.trunc), m))

    def __pow__(self, k):
        if k < 0:
            raise ValueError("negative power")
        result = Poly.const(self.nvars, 1, self.trunc, self.tol)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def mul_monomial(self, exps, c=1):
        c = _coerce(c, self.tol)
        return self._new({mono_mul(e, exps): v * c for e, v in self.terms.items()}, self.trunc)

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.nvars == other.nvars and self.terms == other.terms
        return self.terms == Poly.const(self.nvars, other, None, self.tol).terms

    def __hash__(self):
        return hash((self.nvars, frozenset(self.terms.items())))

    # -- jet operations -----------------------------------------------
    def truncate(self, m):
        return self._new(self.terms, m)

    def partial(self, j):
        out = {}
        for e, c in self.terms.items():
            k = e[j]
            if k:
                ne = list(e)
                ne[j] = k - 1
                out[tuple(ne)] = c * k
        t = None if self.trunc is None else max(self.trunc - 1, 0)
        return self._new(out, t)

    def with_trunc(self, m):
        return self.truncate(m) if m is not None else self._new(self.terms, None)

    def to_approx(self, tol=DEFAULT_TOL):
        p = Poly(self.nvars, {e: float(c) for e, c in self.terms.items()}, self.trunc, tol)
        return p

    def __repr__(self):
        return f"Poly({format_poly(self)})"

    def __str__(self):
        return format_poly(self)


def substitute(p, subs, m=None, affine=False, nvars_out=None):
    """Compose p with x_i -> subs[i].

    ``subs`` is a dict (missing variables stay put) or a full list of images.
    When the images live in a different ring, pass a full list; ``nvars_out``
    is then taken from the images.  Images with nonzero constant term are only
    accepted with ``affine=True`` and a genuine (untruncated) polynomial p.
    """
    n = p.nvars
    if isinstance(subs, dict):
        images = [subs.get(i) for i in range(n)]
    else:
        images = list(subs)
        if len(images) != n:
            raise ValueError("substitution list must cover every variable")
    if nvars_out is None:
        nvars_out = next((im.nvars for im in images if im is not None), n)
    for i in range(n):
        if images[i] is None:
            if nvars_out != n:
                raise ValueError("partial substitution across rings")
            images[i] = Poly.var(n, i, None, p.tol)
    for im in images:
        if im.nvars != nvars_out:
            raise ValueError("substituted polynomials disagree on nvars")
        if not _zero(im.constant_term(), im.tol):
            if not affine or p.trunc is not None:
                raise NonLocalSubstitution(
                    "substituted series has a nonzero constant term")
    t = m
    if not affine:
        t = _min_trunc(m, p.trunc)
    powers = [dict() for _ in range(n)]

    def power(i, k):
        cache = powers[i]
        if k not in cache:
            if k == 0:
                cache[k] = Poly.const(nvars_out, 1, None, p.tol)
            elif k == 1:
                cache[k] = images[i] if t is None else images[i].truncate(t)
            else:
                half = power(i, k // 2)
                sq = half.mul_trunc(half, t) if t is not None else half * half
                if k % 2:
                    one = power(i, 1)
                    sq = sq.mul_trunc(one, t) if t is not None else sq * one
                cache[k] = sq
        return cache[k]

    zero = Fraction(0) if p.tol is None else 0.0
    acc = {}
    for e, c in p.terms.items():
        term = None
        for i, k in enumerate(e):
            if not k:
                continue
            f = power(i, k)
            if term is None:
                term = f
            else:
                term = term.mul_trunc(f, t) if t is not None else term * f
        if term is None:
            key = (0,) * nvars_out
            acc[key] = acc.get(key, zero) + c
            continue
        for e2, c2 in term.terms.items():
            acc[e2] = acc.get(e2, zero) + c * c2
    out = Poly(nvars_out, None, t, p.tol)
    tol = p.tol
    out.terms = {e: c for e, c in acc.items()
                 if not _zero(c, tol) and (t is None or sum(e) <= t)}
    return out


def translate(p, point):
    """p(x + point) for a genuine polynomial p."""
    n = p.nvars
    subs = [Poly(n, {tuple(1 if j == i else 0 for j in range(n)): 1,
                     (0,) * n: point[i]}, None, p.tol) for i in range(n)]
    return substitute(p, subs, None, affine=True)


class VecPoly:
    """An element of the free module of rank p over the polynomial ring."""

    __slots__ = ("comps",)

    def __init__(self, comps):
        comps = list(comps)
        if not comps:
            raise ValueError("VecPoly needs at least one component")
        n = comps[0].nvars
        if any(c.nvars != n for c in comps):
            raise ValueError("components disagree on nvars")
        self.comps = comps

    @classmethod
    def unit(cls, nvars, p, i, tol=None, trunc=None):
        return cls([Poly.const(nvars, 1 if j == i else 0, trunc, tol) for j in range(p)])

    @classmethod
    def from_monomial(cls, nvars, p, i, exps, c=1, tol=None, trunc=None):
        return cls([Poly.monomial(exps, c, trunc, tol) if j == i
                    else Poly.zero(nvars, trunc, tol) for j in range(p)])

    @property
    def nvars(self):
        return self.comps[0].nvars

    @property
    def rank(self):
        return len(self.comps)

    @property
    def tol(self):
        return self.comps[0].tol

    @property
    def trunc(self):
        ts = [c.trunc for c in self.comps if c.trunc is not None]
        return min(ts) if ts else None

    def is_zero(self):
        return all(c.is_zero() for c in self.comps)

    def order(self):
        ords = [c.order() for c in self.comps if not c.is_zero()]
        return min(ords) if ords else None

    def __getitem__(self, i):
        return self.comps[i]

    def __len__(self):
        return len(self.comps)

    def __iter__(self):
        return iter(self.comps)

    def __add__(self, other):
        return VecPoly([a + b for a, b in zip(self.comps, other.comps)])

    def __sub__(self, other):
        return VecPoly([a - b for a, b in zip(self.comps, other.comps)])

    def __neg__(self):
        return VecPoly([-a for a in self.comps])

    def __mul__(self, s):
        return VecPoly([a * s for a in self.comps])

    __rmul__ = __mul__

    def __eq__(self, other):
        return isinstance(other, VecPoly) and self.comps == other.comps

    def __hash__(self):
        return hash(tuple(self.comps))

    def truncate(self, m):
        return VecPoly([c.truncate(m) for c in self.comps])

    def partial(self, j):
        return VecPoly([c.partial(j) for c in self.comps])

    def mul_monomial(self, exps, c=1):
        return VecPoly([a.mul_monomial(exps, c) for a in self.comps])

    def terms(self):
        """Iterate (component, exponents, coefficient)."""
        for i, c in enumerate(self.comps):
            for e, v in c.terms.items():
                yield i, e, v

    def __repr__(self):
        return "VecPoly(" + ", ".join(format_poly(c) for c in self.comps) + ")"


def truncate(p, m):
    return p.truncate(m)


def partial(p, j):
    return p.partial(j)


# -- formal implicit function -----------------------------------------------

def _mat_inverse(mat, tol):
    """Gauss-Jordan inverse of a small scalar matrix; None if singular."""
    k = len(mat)
    a = [list(row) + [Fraction(int(i == j)) if tol is None else float(i == j)
                      for j in range(k)] for i, row in enumerate(mat)]
    for col in range(k):
        piv = max(range(col, k), key=lambda r: abs(a[r][col]))
        if _zero(a[piv][col], tol):
            return None
        a[col], a[piv] = a[piv], a[col]
        pv = a[col][col]
        a[col] = [v / pv for v in a[col]]
        for r in range(k):
            if r != col and not _zero(a[r][col], tol):
                f = a[r][col]
                a[r] = [x - f * y for x, y in zip(a[r], a[col])]
    return [row[k:] for row in a]


def implicit_solve(h_sel, solve_vars, m):
    """Solve h_sel = 0 for the variables ``solve_vars`` as jets of degree m.

    Returns {var: Poly} with images free of the solved variables.  Uses formal
    Newton iteration with a power-series Jacobian inverse, so the order of
    agreement doubles each step.
    """
    if not h_sel:
        return {}
    n = h_sel[0].nvars
    tol = h_sel[0].tol
    k = len(solve_vars)
    if len(h_sel) != k:
        raise SingularLinearPart("need as many equations as solved variables")
    for h in h_sel:
        if not _zero(h.constant_term(), tol):
            raise SingularLinearPart("equation does not vanish at the origin")
    j0 = [[h.linear_coeffs()[v] for v in solve_vars] for h in h_sel]
    j0inv = _mat_inverse(j0, tol)
    if j0inv is None:
        raise SingularLinearPart("linear part is not invertible in the solved variables")
    hs = [h.truncate(m + 1) if h.trunc is None else h for h in h_sel]
    jac = [[h.partial(v) for v in solve_vars] for h in hs]
    phi = {v: Poly.zero(n, m, tol) for v in solve_vars}
    steps = max(1, math.ceil(math.log2(m + 1)))
    prec = 0  # phi agrees with the solution through this degree
    for it in range(steps + m + 1):
        # a Newton step from agreement through degree p reaches degree 2p + 1
        t = min(m, 2 * prec + 1) if it < steps else m
        res = [substitute(h, phi, t) for h in hs]
        if t == m and all(r.is_zero() for r in res):
            break
        if it < steps:
            jm = [[substitute(e, phi, t) for e in row] for row in jac]
            inv = _series_inverse(jm, j0inv, t, n, tol)
        else:  # extra chord steps only if rounding stalled the Newton loop
            inv = [[Poly.const(n, c, m, tol) for c in row] for row in j0inv]
        for a, v in enumerate(solve_vars):
            corr = Poly.zero(n, m, tol)
            for b in range(k):
                corr = corr + inv[a][b].mul_trunc(res[b], t)
            diff = phi[v] - corr
            phi[v] = diff._new(diff.terms, m)  # later steps fill degrees above t
        prec = t
    return phi


def _series_inverse(jm, j0inv, m, n, tol):
    k = len(jm)
    c0 = [[Poly.const(n, c, m, tol) for c in row] for row in j0inv]
    # N = J0^{-1} (J - J0), nilpotent modulo degree m+1
    nmat = []
    for i in range(k):
        row = []
        for j in range(k):
            acc = Poly.zero(n, m, tol)
            for t in range(k):
                dev = jm[t][j] - Poly.const(n, jm[t][j].constant_term(), m, tol)
                acc = acc + c0[i][t].mul_trunc(dev, m)
            row.append(acc)
        nmat.append(row)
    ident = [[Poly.const(n, int(i == j), m, tol) for j in range(k)] for i in range(k)]
    total = [row[:] for row in ident]
    power = [row[:] for row in ident]
    for _ in range(m):
        power = _matmul(power, nmat, m, n, tol)
        power = [[-e for e in row] for row in power]
        if all(e.is_zero() for row in power for e in row):
            break
        total = [[a + b for a, b in zip(r1, r2)] for r1, r2 in zip(total, power)]
    return _matmul(total, c0, m, n, tol)


def _matmul(a, b, m, n, tol):
    k = len(a)
    out = []
    for i in range(k):
        row = []
        for j in range(len(b[0])):
            acc = Poly.zero(n, m, tol)
            for t in range(len(b)):
                acc = acc + a[i][t].mul_trunc(b[t][j], m)
            row.append(acc)
        out.append(row)
    return out


# -- text form ---------------------------------------------------------------

def _fmt_coeff(c):
    if isinstance(c, Fraction):
        return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"
    return repr(float(c))


def format_monomial(e, names=None):
    parts = []
    for i, k in enumerate(e):
        if not k:
            continue
        name = names[i] if names else f"x{i + 1}"
        parts.append(name if k == 1 else f"{name}^{k}")
    return "*".join(parts) if parts else "1"


def format_poly(p, names=None):
    from .order import mono_key

    if p.is_zero():
        return "0"
    items = sorted(p.terms.items(), key=lambda t: mono_key(t[0]))
    out = []
    for e, c in items:
        neg = c < 0
        a = -c if neg else c
        mono = format_monomial(e, names)
        if mono == "1":
            body = _fmt_coeff(a)
        elif a == 1:
            body = mono
        else:
            body = f"{_fmt_coeff(a)}*{mono}"
        if not out:
            out.append(f"-{body}" if neg else body)
        else:
            out.append(f"- {body}" if neg else f"+ {body}")
    return " ".join(out)


def parse_poly(text, names=None, tol=None, line=1, col0=1):
    from .parse import PolyParser

    return PolyParser(text, names, tol, line, col0).parse()
