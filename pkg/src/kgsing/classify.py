"""Invariant-first classification of constraint germs.

A fully reduced germ is brought to the shape

    (y_1, ..., y_{q-1}, sum_j c_j y_j + phi(y_K, w))        (r = 0)
    (y_1, ..., y_q, phi(y, w))                              (r = 1)

by taking the component functions as coordinates.  Here y_K are the
*corner* coordinates: inequality components that do not enter the unique
linear relation among the differentials (r = 0), or all inequality
components (r = 1).  The quadratic form of phi in the w directions is split
into its nondegenerate part, which is eliminated by solving
d(phi)/du = 0, and its null directions z.  The residual psi(y, z) carries
all remaining invariants: quadratic coefficients in y, orders of the
restriction to the null directions, cubic discriminants, and P(a).

Every match is cross-checked against the K[G]_e-codimension and the
determinacy order computed by the standard-basis engine.
"""

from dataclasses import dataclass, field, replace
from fractions import Fraction
from itertools import permutations
import math

from . import tables
from .analysis import (M_MAX, _quotient_span, check_versal, determinacy_order,
                       is_submersion, kge_codim)
from .errors import CrossCheckFailure, MarginTooSmall, NotClassified
from .germ import ConstraintGerm, Step, _pivoted_selection, full_reduce
from .intrinsic import hessian, left_nullspace, nullspace, rank, star_star
from .ring import Poly, VecPoly, implicit_solve, substitute
from .stdbasis import contains
from .tangent import span, tk1_generators, tke_generators

DEFAULT_DEGREE = 6
MARGIN_FACTOR = 1e3

OUTSIDE = "outside-budget"


@dataclass
class Decision:
    """A zero/nonzero or sign decision with the value it was based on."""

    name: str
    value: object
    zero: bool

    @property
    def margin(self):
        return abs(float(self.value))


@dataclass
class ClassificationResult:
    table: object                      # 1, 2, 3, "submersion", "trivial" or OUTSIDE
    label: str = None
    k: int = None
    params: dict = field(default_factory=dict)
    stratum_codim: int = None
    stratum_lower_bound: int = None
    orbit_codim: object = None         # CodimResult of the reduced germ
    determinacy: object = None
    unfolding_generators: list = field(default_factory=list)
    margins: list = field(default_factory=list)
    reduced: ConstraintGerm = None
    trace: tuple = ()
    reason: str = ""
    budget: int = 4
    row: object = None
    prenormal: object = None

    @property
    def matched(self):
        return self.row is not None

    @property
    def moduli(self):
        return self.row is not None and self.row.moduli

    @property
    def generic(self):
        if self.table in ("submersion", "trivial"):
            return True
        return self.row is not None and self.stratum_codim <= self.budget

    def min_margin(self):
        vals = [d.margin for d in self.margins if not d.zero]
        return min(vals) if vals else None


@dataclass
class Prenormal:
    """Coordinates in which the germ reads (y, sum c_j y_j + phi) or (y, phi)."""

    kind: str                 # "morse" (q = 0), "lambda" (r = 0) or "theta" (r = 1)
    table: int
    t: int                    # number of corner coordinates
    phi: Poly                 # in variables (y_K [t], w [nw])
    nw: int
    corner_comps: tuple       # component indices of the corner coordinates
    corner_funcs: tuple       # their component functions (reduced coordinates)
    w_forms: tuple            # w_i as linear Polys in the reduced coordinates
    target: int               # component carrying phi
    l: int = 0
    l1: int = 0
    coeffs: tuple = ()        # c_j of the linear block
    sign: int = 0             # +-1 when the sign of phi is canonical, 0 if free


class _Decider:
    def __init__(self, tol, factor=MARGIN_FACTOR):
        self.tol = tol
        self.factor = factor
        self.log = []

    def zero(self, name, v):
        if self.tol is None:
            z = v == 0
        else:
            a = abs(v)
            z = a < self.tol
            if not z and a < self.factor * self.tol:
                self.log.append(Decision(name, v, False))
                raise MarginTooSmall(
                    f"decision {name!r}: |{v:.3e}| is within {self.factor:g}x tolerance")
        self.log.append(Decision(name, v, z))
        return z


# ------------------------------------------------------------ prenormal form

def _lift(p, n_total):
    """Embed a Poly on n variables into a ring with n_total >= n variables."""
    pad = (0,) * (n_total - p.nvars)
    return Poly(n_total, {e + pad: c for e, c in p.terms.items()}, p.trunc, p.tol)


def _project(p, keep):
    """Restrict to the variables ``keep`` (others must not occur)."""
    idx = {v: t for t, v in enumerate(keep)}
    terms = {}
    for e, c in p.terms.items():
        ne = [0] * len(keep)
        for v, k in enumerate(e):
            if k:
                if v not in idx:
                    raise ValueError("variable outside the projection occurs")
                ne[idx[v]] = k
        terms[tuple(ne)] = c
    return Poly(len(keep), terms, p.trunc, p.tol)


def _straighten(germ, comps, m):
    """Coordinates (Y_comps, w) with Y_t = component comps[t].

    Returns (images, free): images[v] expresses x_v as a Poly in the
    variables (Y [len(comps)], w [free]); ``free`` lists the x kept as w.
    """
    n, tol = germ.nvars, germ.tol
    k = len(comps)
    rows = [germ.components[i].linear_coeffs() for i in comps]
    rsel, csel = _pivoted_selection(rows, tol)
    if len(rsel) < k:
        raise NotClassified("coordinate components are dependent")
    solve_vars = [csel[rsel.index(t)] for t in range(k)]
    free = [v for v in range(n) if v not in solve_vars]
    N = n + k
    eqs = [_lift(germ.components[i], N) - Poly.var(N, n + t, None, tol)
           for t, i in enumerate(comps)]
    sol = implicit_solve(eqs, solve_vars, m)
    keep = [n + t for t in range(k)] + free
    images = []
    for v in range(n):
        if v in sol:
            images.append(_project(sol[v], keep))
        else:
            images.append(Poly.var(n, keep.index(v), None, tol))
    return images, free


def prenormalize(germ, m=DEFAULT_DEGREE, decider=None):
    """Prenormal form of a fully reduced germ whose only obstruction to being
    a submersion is a single relation (corank one)."""
    dec = decider or _Decider(germ.tol)
    n, q, r, tol = germ.nvars, germ.q, germ.r, germ.tol
    if q == 0 and r == 1:
        forms = tuple(Poly.var(n, i, None, tol) for i in range(n))
        return Prenormal("morse", 1, 0, germ.h[0].truncate(m), n, (), (), forms, 0)
    if r == 1:
        images, free = _straighten(germ, list(range(q)), m)
        phi = substitute(germ.h[0], images, m)
        forms = tuple(Poly.var(n, v, None, tol) for v in free)
        return Prenormal("theta", 3, q, phi, n - q, tuple(range(q)),
                         tuple(germ.g), forms, q)
    # r = 0: one linear relation mu among the q differentials
    D = germ.differential()
    mus = left_nullspace(D, tol)
    if len(mus) != 1:
        raise NotClassified("inequality differentials do not have corank one")
    mu = mus[0]
    J = [j for j in range(q) if not dec.zero(f"mu[{j + 1}]", mu[j])]
    K = [j for j in range(q) if j not in J]
    jstar = J[-1]
    others = [i for i in range(q) if i != jstar]
    images, free = _straighten(germ, others, m)
    F = substitute(germ.g[jstar], images, m)
    pos = {i: t for t, i in enumerate(others)}
    lin = F.linear_coeffs()
    coeffs = tuple(lin[pos[j]] for j in J[:-1])
    for v, c in enumerate(lin):
        if v < len(others) and others[v] in J:
            continue
        if not dec.zero(f"linear coefficient {v + 1} of the combined component", c):
            raise NotClassified("combined component has an unexpected linear term")
    # phi = F restricted to y_J' = 0, in variables (y_K, w)
    nK = len(K)
    zero = Poly.zero(nK + len(free), None, tol)
    sub = []
    for v in range(len(others) + len(free)):
        if v < len(others):
            i = others[v]
            sub.append(zero if i in J else Poly.var(nK + len(free), K.index(i), None, tol))
        else:
            sub.append(Poly.var(nK + len(free), nK + v - len(others), None, tol))
    phi = substitute(F, sub, m, nvars_out=nK + len(free))
    l = len(J) - 1
    p = sum(1 for c in coeffs if c > 0)
    l1 = min(p, l + 1 - p)
    sign = 1 if p < l + 1 - p else (-1 if p > l + 1 - p else 0)
    if sign == -1:
        phi = -phi
    forms = tuple(Poly.var(n, v, None, tol) for v in free)
    return Prenormal("lambda", 2, nK, phi, len(free), tuple(K),
                     tuple(germ.g[k] for k in K), forms, jstar, l, l1, coeffs, sign)


# ------------------------------------------------------------ residual

@dataclass
class Residual:
    psi: Poly                 # in variables (y [t], z [c])
    t: int
    c: int
    null_basis: list          # vectors in w-space
    z_forms: tuple            # z_a as linear Polys in the reduced coordinates
    inertia: tuple            # (positive, negative) of the eliminated quadratic part


def inertia(mat, tol=None):
    """(n_plus, n_minus) of a symmetric matrix by symmetric elimination."""
    a = [list(r) for r in mat]
    npos = nneg = 0
    zero = (lambda v: v == 0) if tol is None else (lambda v: abs(v) < tol)
    while a:
        k = len(a)
        piv = next((i for i in range(k) if not zero(a[i][i])), None)
        if piv is None:
            pair = next(((i, j) for i in range(k) for j in range(i + 1, k)
                         if not zero(a[i][j])), None)
            if pair is None:
                break
            i, j = pair
            for s in range(k):
                a[i][s] = a[i][s] + a[j][s]
            for s in range(k):
                a[s][i] = a[s][i] + a[s][j]
            piv = i
        p = a[piv][piv]
        if p > 0:
            npos += 1
        else:
            nneg += 1
        rest = [s for s in range(k) if s != piv]
        a = [[a[u][v] - a[u][piv] * a[piv][v] / p for v in rest] for u in rest]
    return npos, nneg


def residual(pre, m=DEFAULT_DEGREE):
    tol = pre.phi.tol
    t, nw = pre.t, pre.nw
    H = hessian(pre.phi)
    Hww = [row[t:] for row in H[t:]]
    N = nullspace(Hww, nw, tol) if nw else []
    c = len(N)
    # complement of the null space by coordinate vectors
    E = []
    basis = [list(v) for v in N]
    one = Fraction(1) if tol is None else 1.0
    for i in range(nw):
        e = [one * 0] * nw
        e[i] = one
        if rank(basis + [e], tol) > len(basis):
            basis.append(e)
            E.append(e)
    cols = N + E
    nv = t + nw
    images = [Poly.var(nv, i, None, tol) for i in range(t)]
    for i in range(nw):
        p = Poly.zero(nv, None, tol)
        for a, vec in enumerate(cols):
            if vec[i]:
                p = p + Poly.var(nv, t + a, None, tol).scale(vec[i])
        images.append(p)
    phi2 = substitute(pre.phi, images, m)
    u_vars = list(range(t + c, nv))
    if u_vars:
        eqs = [phi2.partial(v).truncate(m) for v in u_vars]
        sol = implicit_solve(eqs, u_vars, m)
        phi2 = substitute(phi2, sol, m)
    psi = _project(phi2, list(range(t + c)))
    Huu = [[H2 for H2 in row[t + c:]] for row in hessian(substitute(pre.phi, images, 2))[t + c:]]
    inert = inertia(Huu, tol)
    # z as linear forms of w: rows of the inverse of [N | E] (as columns)
    z_forms = _dual_forms(cols, c, pre.w_forms, tol)
    return Residual(psi, t, c, N, z_forms, inert)


def _dual_forms(cols, c, w_forms, tol):
    from .ring import _mat_inverse

    nw = len(cols)
    if not nw or not c:
        return ()
    mat = [[cols[a][i] for a in range(nw)] for i in range(nw)]  # w = mat * (z, u)
    inv = _mat_inverse(mat, tol)
    out = []
    for a in range(c):
        p = Poly.zero(w_forms[0].nvars, None, tol)
        for i in range(nw):
            if inv[a][i]:
                p = p + w_forms[i].scale(inv[a][i])
        out.append(p)
    return tuple(out)


# ------------------------------------------------------------ decisions

def _exp(nv, pairs):
    e = [0] * nv
    for v, k in pairs:
        e[v] += k
    return tuple(e)


def _order_along(psi, var, dec, lo, hi, name):
    """Smallest k in [lo, hi] with a nonzero coefficient of var^k, else None."""
    nv = psi.nvars
    for k in range(lo, hi + 1):
        if not dec.zero(f"{name}^{k}", psi.coeff(_exp(nv, [(var, k)]))):
            return k
    return None


T2_LABELS = {"A": "(1,2)", "Ak": "(1,k)", "D4": "(2)", "y2": "(3,2)", "yk": "(3,k)",
             "yz": "(4,k)", "yy_z3": "(5)", "Q2": "(6)", "Q2null": "(7)",
             "Q2axis": "(8)", "P": "(9)", "Q3": "(10)"}
T3_LABELS = {"y2": "(1,2)", "yk": "(1,k)", "yz": "(3,k)", "yy_z3": "(2)", "Q2": "(4)",
             "Q2null": "(6)", "Q2axis": "(5)", "P": "(7)", "Q3": "(8)"}


def _decide(res, pre, dec, reduced):
    """Return (case, k, params, reason)."""
    psi, t, c = res.psi, res.t, res.c
    nv = t + c
    co = lambda *pairs: psi.coeff(_exp(nv, pairs))  # noqa: E731
    m = psi.trunc if psi.trunc is not None else DEFAULT_DEGREE
    if (t, c) == (0, 0):
        return "A", 2, {}, ""
    if (t, c) == (0, 1):
        k = _order_along(psi, 0, dec, 3, min(5, m), "z")
        if k is None:
            return None, None, {}, "residual has order > 5 in the null direction"
        # z -> -z flips the sign of an odd power, so only even powers carry a sign
        return "Ak", k, {"sign": _sgn(co((0, k))) if k % 2 == 0 else 1}, ""
    if (t, c) == (0, 2):
        a, b, cc, d = co((0, 3)), co((0, 2), (1, 1)), co((0, 1), (1, 2)), co((1, 3))
        disc = b * b * cc * cc - 4 * a * cc ** 3 - 4 * b ** 3 * d - 27 * a * a * d * d + 18 * a * b * cc * d
        if dec.zero("cubic discriminant", disc):
            return None, None, {}, "cubic on the null plane is degenerate"
        return "D4", None, {"sign": "-" if disc > 0 else "+"}, ""
    if (t, c) == (1, 0):
        a = co((0, 2))
        if not dec.zero("alpha", a):
            return "y2", 2, {"alpha_sign": _sgn(a)}, ""
        k = _order_along(psi, 0, dec, 3, min(4, m), "y")
        if k is None:
            return None, None, {}, "residual in the corner coordinate has order > 4"
        return "yk", k, {"sign": _sgn(co((0, k)))}, ""
    if (t, c) == (1, 1):
        ayz, ayy = co((0, 1), (1, 1)), co((0, 2))
        if not dec.zero("a_yz", ayz):
            k = _order_along(psi, 1, dec, 3, min(4, m), "z")
            if k is None:
                return None, None, {}, "restriction to the face has order > 4"
            return "yz", k, {}, ""
        if dec.zero("a_yy", ayy):
            return None, None, {}, "quadratic part vanishes on the corner/null plane"
        if dec.zero("z^3", co((1, 3))):
            return None, None, {}, "restriction to the face has order > 3"
        return "yy_z3", None, {}, ""
    if (t, c) == (2, 0):
        a11, a12, a22 = co((0, 2)), co((0, 1), (1, 1)), co((1, 2))
        z11, z22 = dec.zero("a11", a11), dec.zero("a22", a22)
        if not z11 and not z22:
            disc = 4 * a11 * a22 - a12 * a12
            if not dec.zero("4 a11 a22 - a12^2", disc):
                return "Q2", None, _moduli2(a11, a12, a22, res, pre), ""
            v = (-a12, 2 * a11)
            cub = sum(psi.coeff(_exp(2, [(0, i), (1, 3 - i)])) * v[0] ** i * v[1] ** (3 - i)
                      for i in range(4))
            if dec.zero("cubic on the null line", cub):
                return None, None, {}, "cubic vanishes on the null line"
            return "Q2null", None, {}, ""
        if z11 and z22:
            return None, None, {}, "both corner squares vanish"
        if dec.zero("a12", a12):
            return None, None, {}, "quadratic form is a single square on a corner axis"
        i = 0 if z11 else 1
        if dec.zero("cubic on the zero axis", co((i, 3))):
            return None, None, {}, "cubic vanishes on the isotropic corner axis"
        return "Q2axis", None, {"axis": i + 1}, ""
    if (t, c) == (2, 1):
        A, B, C = co((0, 2)), co((0, 1), (1, 1)), co((0, 1), (2, 1))
        D, E = co((1, 2)), co((1, 1), (2, 1))
        Pval = C * E * (C * C * D - B * C * E + A * E * E)
        if dec.zero("P(a)", Pval):
            return None, None, {}, "P(a) vanishes"
        if dec.zero("z^3", co((2, 3))):
            return None, None, {}, "cubic in the null direction vanishes"
        return "P", None, {"P": Pval}, ""
    if (t, c) == (3, 0):
        a = {(i, j): co((i, 1), (j, 1)) if i != j else co((i, 2))
             for i in range(3) for j in range(i, 3)}
        vals = [a[0, 0], a[1, 1], a[2, 2]]
        for i, j in ((0, 1), (0, 2), (1, 2)):
            vals.append(4 * a[i, i] * a[j, j] - a[i, j] ** 2)
        vals.append(4 * a[0, 0] * a[1, 1] * a[2, 2] + a[0, 1] * a[0, 2] * a[1, 2]
                    - a[2, 2] * a[0, 1] ** 2 - a[1, 1] * a[0, 2] ** 2
                    - a[0, 0] * a[1, 2] ** 2)
        names = ["a11", "a22", "a33", "minor12", "minor13", "minor23", "determinant"]
        if any(dec.zero(nm, v) for nm, v in zip(names, vals)):
            return None, None, {}, "condition (**) fails"
        if _cubic_in_tk1(reduced):
            return None, None, {}, "cubic term lies in the unipotent tangent space"
        return "Q3", None, _moduli3(a, res, pre), ""
    return None, None, {}, "stratum outside the tables"


def _sgn(v):
    return 1 if v > 0 else -1


def _moduli2(a11, a12, a22, res, pre):
    out = {"delta": (_sgn(a11), _sgn(a22))}
    sq = a12 * a12 / abs(a11 * a22)
    out["alpha_squared"] = sq
    out["alpha"] = (1 if a12 >= 0 else -1) * math.sqrt(float(sq))
    return out


def _moduli3(a, res, pre):
    out = {"delta": tuple(_sgn(a[i, i]) for i in range(3))}
    al, sq = {}, {}
    for i, j in ((0, 1), (0, 2), (1, 2)):
        s = a[i, j] * a[i, j] / abs(a[i, i] * a[j, j])
        sq[f"{i + 1}{j + 1}"] = s
        al[f"{i + 1}{j + 1}"] = (1 if a[i, j] >= 0 else -1) * math.sqrt(float(s))
    out["alpha_squared"] = sq
    out["alpha"] = al
    return out


def _cubic_in_tk1(germ):
    """Is j^3 - j^2 of the germ inside T K[G]_1(j^2) + M^4?"""
    exact = lambda c: c.truncate(2).with_trunc(None)  # noqa: E731
    j2 = ConstraintGerm(germ.nvars, [exact(c) for c in germ.g], [exact(c) for c in germ.h],
                        germ.names, (), germ.tol)
    basis = span(tk1_generators(j2), 3)
    cubic = VecPoly([c.homogeneous(3).with_trunc(None) for c in germ.components])
    return contains(basis, cubic)


# ------------------------------------------------------------ main entry

def _orbit_key(params, inertia):
    """Summary of the parameters that does not depend on relabelling corners."""
    key = [tuple(inertia)]
    if "delta" in params:
        key.append(tuple(sorted(params["delta"], reverse=True)))
    for name in ("sign", "alpha_sign"):
        if name in params:
            key.append(str(params[name]))
    sq = params.get("alpha_squared")
    if sq is not None:
        key.append(tuple(sorted(sq.values())) if isinstance(sq, dict) else (sq,))
    return key


def _normalize_sign(psi, pre):
    """Fix the global sign of psi when the equivalence allows flipping it."""
    if pre.sign != 0:
        return psi, pre.sign
    for e in sorted(psi.terms, key=lambda e: (sum(e),) + tuple(-x for x in e)):
        c = psi.terms[e]
        if c != 0:
            return (psi, 1) if c > 0 else (-psi, -1)
    return psi, 1


def classify(germ, budget=4, m_max=M_MAX, cross_check=True, degree=DEFAULT_DEGREE,
             margin_factor=MARGIN_FACTOR, reduce=True):
    """Classify an activated germ (the classification runs on its full reduction)."""
    red = full_reduce(germ) if reduce else germ
    dec = _Decider(red.tol, margin_factor)
    out = ClassificationResult(table=OUTSIDE, budget=budget, reduced=red,
                               trace=red.provenance)
    q, r, n = red.q, red.r, red.nvars
    if red.p == 0:
        out.table, out.label, out.stratum_codim = "trivial", "constant", 0
        out.reason = "no active constraints remain after reduction"
        return out
    if r == 0 and is_submersion(red):
        out.table, out.label, out.stratum_codim = "submersion", "B0", 0
        return out
    if r >= 2:
        out.reason = f"equality block of corank {r} after full reduction"
        out.stratum_lower_bound = q + r + n * (r - 1)
        return _finish_outside(out, red, m_max, dec)
    dg_rank = rank(red.differential()[:q], red.tol) if q else 0
    if r == 1 and dg_rank < q:
        out.reason = "inequality differentials are dependent on the equality locus (corank >= 2)"
        return _finish_outside(out, red, m_max, dec)
    if r == 0 and q - dg_rank >= 2:
        out.reason = f"inequality differentials have corank {q - dg_rank}"
        return _finish_outside(out, red, m_max, dec)
    if r == 1 and q >= 4:
        out.reason = "more than three active inequalities at an equality singularity"
        out.stratum_lower_bound = q + 1
        return _finish_outside(out, red, m_max, dec)
    m = degree if red.trunc is None else min(degree, red.trunc)
    pre = prenormalize(red, m, dec)
    res = residual(pre, m)
    psi, sg = _normalize_sign(res.psi, pre)
    res.psi = psi
    if pre.sign == 0 and sg < 0:
        # flipping the germ's sign swaps the inertia of the eliminated part
        res.inertia = res.inertia[::-1]
    out.prenormal = (pre, res)
    base = tables.stratum_codim(res.t, res.c)
    out.params.update({"l": pre.l, "l1": pre.l1, "inertia": res.inertia,
                       "corner": res.t, "null": res.c})
    if res.t > 3 or res.c > 2 or base > 4:
        out.reason = f"stratum with {res.t} corner coordinates and null corank {res.c}"
        out.stratum_lower_bound = base
        return _finish_outside(out, red, m_max, dec)
    logged = len(dec.log)
    case, k, params, reason = _decide(res, pre, dec, red)
    if pre.sign == 0 and case is not None:
        # the germ's sign is free: report the representative with the larger invariants
        flipped = replace(res, psi=-res.psi, inertia=res.inertia[::-1])
        alt = _Decider(dec.tol, dec.factor)
        case2, k2, params2, _ = _decide(flipped, pre, alt, red)
        if (case2, k2) == (case, k) and (_orbit_key(params2, flipped.inertia)
                                         > _orbit_key(params, res.inertia)):
            res, params = flipped, params2
            dec.log[logged:] = alt.log
            out.prenormal = (pre, res)
            out.params["inertia"] = res.inertia
    out.params.update(params)
    if case is None:
        out.reason = reason
        out.stratum_lower_bound = 5
        return _finish_outside(out, red, m_max, dec)
    label = (T3_LABELS if pre.table == 3 else T2_LABELS)[case]
    table = pre.table
    if k is not None and "k" in label:
        label = label.replace("k", str(k))
    try:
        row = tables.row(table, label)
    except KeyError:
        out.reason = f"type {label} is not a row of table {table}"
        out.stratum_lower_bound = 5
        return _finish_outside(out, red, m_max, dec)
    out.row, out.label, out.k = row, label, row.k
    out.stratum_codim = row.ex_cod
    out.table = table if row.ex_cod <= budget else OUTSIDE
    if out.table == OUTSIDE:
        out.reason = f"type {label} has stratum codimension {row.ex_cod} > budget {budget}"
    out.margins = list(dec.log)
    if cross_check:
        _cross_check(out, red, m_max)
    return out


def _finish_outside(out, red, m_max, dec):
    out.margins = list(dec.log)
    return out


def _cross_check(out, red, m_max):
    row = out.row
    kge = kge_codim(red, m_max)
    det = determinacy_order(red, m_max)
    out.orbit_codim, out.determinacy = kge, det
    problems = []
    if not kge.certified:
        problems.append(f"K[G]_e codimension not certified ({kge.describe()})")
    elif kge.value != row.quotient_dim:
        problems.append(f"K[G]_e codimension {kge.value} != {row.quotient_dim}")
    if not det.certified:
        problems.append("determinacy not certified")
    elif det.order != row.determinacy:
        problems.append(f"determinacy {det.order} != {row.determinacy}")
    if problems:
        raise CrossCheckFailure(f"invariants say table {row.table} {row.label}, but "
                                + "; ".join(problems))
    out.unfolding_generators = quotient_generators(out)


# ------------------------------------------------- quotient-generator transport

def _nf_variable_roles(row, q):
    """Map 1-based normal-form variables to ('corner', i) or ('null', a)."""
    t, c = row.corner, row.null
    if row.table == 1:
        return {1: ("null", 0), 2: ("null", 1)}
    if row.table == 3:
        roles = {i: ("corner", i - 1) for i in range(1, q + 1)}
        if c:
            roles[q + 1] = ("null", 0)
        if row.type in ("(2)", "(3,k)"):
            roles = {1: ("corner", 0), 2: ("null", 0)}
        if row.type == "(7)":
            roles = {1: ("corner", 0), 2: ("corner", 1), 3: ("null", 0)}
        return roles
    roles = {q - t + i: ("corner", i) for i in range(t)}
    for a in range(c):
        roles[q + a] = ("null", a)
    return roles


def quotient_generators(result):
    """Quotient-generator row transported to the reduced germ's coordinates.

    The classes are validated to span the computed quotient; the corner and
    null coordinates are permuted if the literal assignment does not.
    """
    if result.row is None:
        raise NotClassified("germ is not matched to a table row")
    row = result.row
    red = result.reduced
    pre, res = result.prenormal
    q = red.q
    comp, mons = tables.generator_monomials(row, q)
    target = pre.target
    roles = _nf_variable_roles(row, q)
    corner = list(pre.corner_funcs)
    null = list(res.z_forms)
    tol = red.tol
    b0 = span(tke_generators(red), result.orbit_codim.degree)
    last = None
    for cp in permutations(range(len(corner))):
        for zp in permutations(range(len(null))):
            funcs = {}
            used = {v for mono in mons for v in mono}
            for v, (kind, i) in roles.items():
                if v not in used:
                    continue
                funcs[v] = corner[cp[i]] if kind == "corner" else null[zp[i]] if null else None
            vecs = []
            for mono in mons:
                p = Poly.const(red.nvars, 1, None, tol)
                for v, k in mono.items():
                    p = p * funcs[v] ** k
                comps = [Poly.zero(red.nvars, None, tol) for _ in range(red.p)]
                comps[target] = p
                vecs.append(VecPoly(comps))
            rows = [b0.normal_form(v.truncate(b0.m)) for v in vecs]
            missing, rk = _quotient_span(rows, b0)
            if not missing and rk == len(vecs):
                return vecs
            last = missing
    raise CrossCheckFailure(f"quotient generators of {row.label} do not span the quotient "
                            f"(unspanned: {last})")


# ------------------------------------------------------------ genericity

@dataclass
class PointVerdict:
    point: tuple
    status: str                  # generic | non-generic | undecided
    label: str = None
    table: object = None
    reason: str = ""
    conditions: dict = field(default_factory=dict)
    versal: object = None
    classification: ClassificationResult = None
    kge: object = None


@dataclass
class GenericityVerdict:
    points: list
    budget: int

    @property
    def generic(self):
        return all(p.status == "generic" for p in self.points)

    @property
    def status(self):
        if any(p.status == "non-generic" for p in self.points):
            return "non-generic"
        if any(p.status == "undecided" for p in self.points):
            return "undecided"
        return "generic"


def _equality_corank(germ):
    if not germ.r:
        return 0
    return germ.r - rank([h.linear_coeffs() for h in germ.h], germ.tol)


def verdict_for_germ(germ, budget=4, m_max=M_MAX, directions=None, point=(),
                     margin_factor=MARGIN_FACTOR):
    """Genericity verdict at one point of an (optionally parametrized) system.

    ``directions`` are the initial speeds d(g,h)/du_i of a parameter family
    at the point (VecPolys on the activated germ's components).
    """
    from .errors import KGError

    cond = {"equality_corank_le_1": None, "no_active_inequality": None,
            "regular_equalities": None, "singular_equalities": None}
    ecork = _equality_corank(germ)
    cond["equality_corank_le_1"] = ecork <= 1
    v = PointVerdict(tuple(point), "undecided", conditions=cond)
    try:
        res = classify(germ, budget, m_max, margin_factor=margin_factor)
    except MarginTooSmall as e:
        v.reason = str(e)
        return v
    except (CrossCheckFailure, NotClassified) as e:
        v.reason = str(e)
        return v
    v.classification, v.label, v.table = res, res.label, res.table
    ok = res.generic and ecork <= 1
    key = ("no_active_inequality" if germ.q == 0 else
           "regular_equalities" if ecork == 0 else "singular_equalities")
    cond[key] = ok
    if not ok:
        v.status = "non-generic"
        v.reason = res.reason or f"type {res.label} exceeds budget {budget}"
        try:
            v.kge = kge_codim(res.reduced, min(m_max, 6))
        except KGError:
            v.kge = None
        return v
    v.status = "generic"
    v.kge = res.orbit_codim
    if directions is not None and res.table not in ("trivial", "submersion") and not res.moduli:
        try:
            vr = check_versal(germ, directions, m_max)
        except KGError as e:
            v.status, v.reason = "undecided", str(e)
            return v
        v.versal = vr
        if not vr.versal:
            v.status = "non-generic"
            v.reason = f"family is not versal; unspanned classes {vr.missing}"
    elif res.moduli:
        v.reason = "moduli type: generic stratumwise (no versality claim)"
    return v


def genericity_report(system, points=None, budget=4, m_max=M_MAX, directions=None,
                      jobs=1, degree=None, margin_factor=MARGIN_FACTOR):
    """Activate, reduce and classify a system at each sample point.

    ``system`` is a ConstraintSystem (its base point is used when ``points``
    is None); ``directions(point, germ)`` optionally returns the family's
    initial speeds at that point.
    """
    from dataclasses import replace

    from .germ import activate

    pts = [system.base_point] if points is None else list(points)

    def one(pt):
        sysp = replace(system, base_point=tuple(pt))
        germ = activate(sysp, degree)
        dirs = directions(pt, germ) if directions is not None else None
        return verdict_for_germ(germ, budget, m_max, dirs, pt, margin_factor)

    if jobs and jobs > 1 and len(pts) > 1:
        from concurrent.futures import ThreadPoolExecutor

        with ThreadPoolExecutor(max_workers=jobs) as ex:
            results = list(ex.map(one, pts))
    else:
        results = [one(p) for p in pts]
    return GenericityVerdict(results, budget)
