"""Corank data, the extended intrinsic derivative and alpha-invariants."""

from dataclasses import dataclass, field
from fractions import Fraction

from .errors import CorankTooHigh, DegenerateKernelForm


# -- small exact linear algebra ---------------------------------------------

def _zero(v, tol):
    return v == 0 if tol is None else abs(v) < tol


def _one(tol):
    return Fraction(1) if tol is None else 1.0


def rref(mat, tol=None):
    """Reduced row echelon form; returns (rows, pivot columns)."""
    a = [list(r) for r in mat]
    if not a:
        return a, []
    ncol = len(a[0])
    piv = []
    r = 0
    for c in range(ncol):
        best = None
        for i in range(r, len(a)):
            if not _zero(a[i][c], tol):
                if tol is None:
                    best = i
                    break
                if best is None or abs(a[i][c]) > abs(a[best][c]):
                    best = i
        if best is None:
            continue
        a[r], a[best] = a[best], a[r]
        pv = a[r][c]
        a[r] = [v / pv for v in a[r]]
        for i in range(len(a)):
            if i != r and not _zero(a[i][c], tol):
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        piv.append(c)
        r += 1
        if r == len(a):
            break
    return a[:r], piv


def rank(mat, tol=None):
    return len(rref(mat, tol)[1])


def nullspace(mat, ncols=None, tol=None):
    """Basis (list of vectors) of {v : mat v = 0}."""
    if not mat:
        n = ncols
        return [[_one(tol) if i == j else _one(tol) * 0 for i in range(n)] for j in range(n)]
    n = len(mat[0])
    rows, piv = rref(mat, tol)
    free = [c for c in range(n) if c not in piv]
    out = []
    for f in free:
        v = [_one(tol) * 0] * n
        v[f] = _one(tol)
        for row, pc in zip(rows, piv):
            v[pc] = -row[f]
        out.append(v)
    return out


def left_nullspace(mat, tol=None):
    if not mat:
        return []
    t = [list(col) for col in zip(*mat)]
    return nullspace(t, len(mat), tol)


def solve(mat, rhs, tol=None):
    """Unique solution of a square system, or None when singular."""
    n = len(mat)
    aug = [list(r) + [b] for r, b in zip(mat, rhs)]
    rows, piv = rref(aug, tol)
    if piv != list(range(n)):
        return None
    return [rows[i][n] for i in range(n)]


def matvec(mat, v):
    return [sum(a * b for a, b in zip(row, v)) for row in mat]


def hessian(poly):
    """Matrix of second derivatives at the origin."""
    n = poly.nvars
    one = _one(poly.tol)
    h = [[one * 0] * n for _ in range(n)]
    for e, c in poly.terms.items():
        if sum(e) != 2:
            continue
        idx = [i for i, k in enumerate(e) if k]
        if len(idx) == 1:
            i = idx[0]
            h[i][i] = 2 * c
        else:
            i, j = idx
            h[i][j] = c
            h[j][i] = c
    return h


def bilinear(mat, v, w):
    return sum(v[i] * mat[i][j] * w[j] for i in range(len(v)) for j in range(len(w))
               if v[i] and w[j])


# -- corank data --------------------------------------------------------------

@dataclass
class CorankData:
    differential: list
    rank: int
    corank: int
    eq_rank: int
    eq_corank: int
    ineq_rank: int
    mu: list = None
    W_basis: list = None
    kernel_basis: list = field(default_factory=list)
    cokernel_rep: int = None


def _normalize_mu(mu, tol):
    first = next(i for i, v in enumerate(mu) if not _zero(v, tol))
    s = mu[first]
    return [v / s for v in mu], first


def corank_data(germ, components=None):
    """Linear data of the differential at the origin.

    ``components`` restricts to a subset of components (default: all).
    mu is normalized so that its first nonzero entry is 1; that entry's
    coordinate vector represents the cokernel.
    """
    tol = germ.tol
    comps = list(germ.components) if components is None else [germ.components[i] for i in components]
    d = [c.linear_coeffs() for c in comps]
    n = germ.nvars
    rk = rank(d, tol) if d else 0
    dg = d[:germ.q] if components is None else d
    dh = d[germ.q:] if components is None else []
    eq_rank = rank(dh, tol) if dh else 0
    kernel = nullspace(d, n, tol) if d else nullspace([], n, tol)
    data = CorankData(d, rk, len(d) - rk, eq_rank, len(dh) - eq_rank,
                      rank(dg, tol) if dg else 0, kernel_basis=kernel)
    if len(d) - rk == 1:
        mu = left_nullspace(d, tol)[0]
        mu, rep = _normalize_mu(mu, tol)
        data.mu = mu
        data.cokernel_rep = rep
        rows = [d[j] for j in range(len(d)) if not _zero(mu[j], tol)]
        data.W_basis = nullspace(rows, n, tol)
    return data


@dataclass
class IntrinsicData:
    D2_matrix: list
    basis: list
    alpha: list = None
    v_vectors: list = None
    k_indices: list = None
    omega0: bool = False

    def projective_alpha(self):
        """alpha scaled so that its first nonzero entry is +-1."""
        flat = [x for row in self.alpha for x in row] if self.alpha else []
        s = next((abs(x) for x in flat if x != 0), None)
        if s is None:
            return self.alpha
        return [[x / s for x in row] for row in self.alpha]


def _second(comps, mu, tol):
    """mu-weighted Hessian: the cokernel-valued second derivative."""
    n = comps[0].nvars
    one = _one(tol)
    tot = [[one * 0] * n for _ in range(n)]
    for c, m in zip(comps, mu):
        if _zero(m, tol):
            continue
        h = hessian(c)
        for i in range(n):
            for j in range(n):
                tot[i][j] += m * h[i][j]
    return tot


def extended_intrinsic(germ, components=None):
    """D~^2 on W_f, valued in the cokernel through mu."""
    data = corank_data(germ, components)
    if data.corank != 1:
        raise CorankTooHigh(f"corank {data.corank} != 1")
    comps = list(germ.components) if components is None else [germ.components[i] for i in components]
    hs = _second(comps, data.mu, germ.tol)
    W = data.W_basis
    D2 = [[bilinear(hs, a, b) for b in W] for a in W]
    return IntrinsicData(D2, W), data, hs


def alpha_invariants(germ, kind="lambda"):
    """alpha (Lambda_{l,q}, r = 0) or alpha' (Theta_{q,q+1}, r = 1) invariants.

    The returned matrices use the second-derivative convention
    alpha_ij = D^2(v_i, v_j).
    """
    tol = germ.tol
    if kind == "lambda":
        info, data, hs = extended_intrinsic(germ, list(range(germ.q)))
        comps = list(germ.g)
        k_idx = [j for j, m in enumerate(data.mu) if _zero(m, tol)]
        cons = [comps[k].linear_coeffs() for k in k_idx]
    elif kind == "theta":
        if germ.r != 1:
            raise CorankTooHigh("theta invariants need exactly one equality")
        h = germ.h[0]
        if any(not _zero(v, tol) for v in h.linear_coeffs()):
            raise CorankTooHigh("equality has nonzero differential")
        hs = hessian(h)
        dg = [c.linear_coeffs() for c in germ.g]
        if rank(dg, tol) != germ.q:
            raise CorankTooHigh("inequality block is not a submersion")
        data = corank_data(germ)
        one = _one(tol)
        info = IntrinsicData(hs, [[one if i == j else one * 0 for i in range(germ.nvars)]
                                  for j in range(germ.nvars)])
        k_idx = list(range(germ.q))
        cons = dg
    else:
        raise ValueError(kind)
    n = germ.nvars
    kernel = data.kernel_basis if kind == "lambda" else nullspace(cons, n, tol)
    kform = [[bilinear(hs, a, b) for b in kernel] for a in kernel]
    if kernel and rank(kform, tol) < len(kernel):
        raise DegenerateKernelForm("second derivative is degenerate on the kernel")
    # unknown v in R^n: v in W (lambda) is enforced through the kernel rows below
    rows = [[sum(hs[i][j] * w[j] for j in range(n)) for i in range(n)] for w in kernel]
    extra = []
    if kind == "lambda":
        nz = [c.linear_coeffs() for c, m in zip(germ.g, data.mu) if not _zero(m, tol)]
        extra = [r for r in rref(nz, tol)[0]]
    vs = []
    one = _one(tol)
    for i in range(len(k_idx)):
        mat = rows + cons + extra
        rhs = [one * 0] * len(rows) + [one if t == i else one * 0 for t in range(len(cons))] \
            + [one * 0] * len(extra)
        v = _least_square_exact(mat, rhs, n, tol)
        if v is None:
            raise DegenerateKernelForm("v-vector system is singular")
        vs.append(v)
    alpha = [[bilinear(hs, a, b) for b in vs] for a in vs]
    info.alpha = alpha
    info.v_vectors = vs
    info.k_indices = k_idx
    info.omega0 = bool(alpha) and all(_zero(x, tol) for row in alpha for x in row)
    return info


def _least_square_exact(mat, rhs, n, tol):
    """Solve a consistent system with a unique solution (rows may exceed n)."""
    aug = [list(r) + [b] for r, b in zip(mat, rhs)]
    rows, piv = rref(aug, tol)
    if n in piv or piv != list(range(n)):
        return None
    return [rows[i][n] for i in range(n)]


# -- nondegeneracy predicates -------------------------------------------------

def coefficient_form(alpha):
    """Quadratic-form coefficients a_ii = D_ii / 2, a_ij = D_ij (i < j)."""
    k = len(alpha)
    return {(i, j): (alpha[i][i] / 2 if i == j else alpha[i][j])
            for i in range(k) for j in range(i, k)}


def star(a11, a12, a22):
    """Condition (*) in coefficient form: 4 a11 a22 - a12^2 != 0 (with a11 a22 != 0)."""
    return a11 * a22 != 0 and 4 * a11 * a22 - a12 ** 2 != 0


def star_star_value(a):
    return (4 * a[0, 0] * a[1, 1] * a[2, 2] + a[0, 1] * a[0, 2] * a[1, 2]
            - a[2, 2] * a[0, 1] ** 2 - a[1, 1] * a[0, 2] ** 2 - a[0, 0] * a[1, 2] ** 2)


def star_star(a):
    """Condition (**) for a 3x3 coefficient dictionary."""
    if any(a[i, i] == 0 for i in range(3)):
        return False
    for i, j in ((0, 1), (0, 2), (1, 2)):
        if 4 * a[i, i] * a[j, j] - a[i, j] ** 2 == 0:
            return False
    return star_star_value(a) != 0


def P(a):
    """P(a) for a = (a_{q-2,q-2}, a_{q-2,q-1}, a_{q-2,q}, a_{q-1,q-1}, a_{q-1,q})."""
    A, B, C, D, E = a
    return C * E * (C * C * D - B * C * E + A * E * E)


def w_sets(alpha):
    """Membership flags in W1, W2, W3 for a 3x3 alpha (second-derivative convention)."""
    x = alpha
    w1 = x[0][0] * x[1][1] * x[2][2] == 0
    w2 = ((x[0][0] * x[1][1] - x[0][1] ** 2) * (x[1][1] * x[2][2] - x[1][2] ** 2)
          * (x[2][2] * x[0][0] - x[0][2] ** 2)) == 0
    w3 = (x[0][0] * x[1][1] * x[2][2] + 2 * x[0][1] * x[0][2] * x[1][2]
          - x[2][2] * x[0][1] ** 2 - x[1][1] * x[0][2] ** 2 - x[0][0] * x[1][2] ** 2) == 0
    return w1, w2, w3


@dataclass
class Conditions:
    star: bool = None
    star_star: bool = None
    p_nonzero: bool = None
    w1: bool = None
    w2: bool = None
    w3: bool = None
    omega0: bool = None


def nondegeneracy_conditions(alpha, context=None):
    """Evaluate (*), (**), W-set membership for an alpha matrix.

    ``context`` may carry the 5-vector ``a`` for P(a).
    """
    out = Conditions()
    k = len(alpha)
    if k:
        out.omega0 = all(x == 0 for row in alpha for x in row)
    a = coefficient_form(alpha) if k else {}
    if k == 2:
        out.star = star(a[0, 0], a[0, 1], a[1, 1])
    if k == 3:
        out.star_star = star_star(a)
        out.w1, out.w2, out.w3 = w_sets(alpha)
    if context is not None and "a" in context:
        out.p_nonzero = P(context["a"]) != 0
    return out
