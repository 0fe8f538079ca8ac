"""Benchmark constraint systems (C1-DTLZ1, C2-DTLZ2) and their audits.

Both systems are written in local coordinates centred at the distinguished
point: the point itself is kept on the instance, and the constraint
polynomials are Taylor jets in the displacement from it (so the base point
of the returned system is the origin).  Transcendental constants are
computed with mpmath to 40 significant digits, turned into rationals, and
the coefficients are finally rounded to floats for the approximate mode.
"""

from dataclasses import dataclass, field
from fractions import Fraction
import math

import mpmath

from .analysis import check_versal, kge_codim
from .classify import verdict_for_germ
from .errors import KGError
from .germ import ConstraintSystem, activate, full_reduce
from .intrinsic import rank
from .ring import Poly, VecPoly, substitute

DEFAULT_TOL = 1e-9
AUDIT_MARGIN_FACTOR = 1e6
_DIGITS = 40


def _rational(x):
    with mpmath.workdps(_DIGITS + 10):
        return Fraction(mpmath.nstr(x, _DIGITS, min_fixed=-math.inf, max_fixed=math.inf))


@dataclass
class BenchmarkInstance:
    name: str
    params: dict
    point: tuple                 # the distinguished point in original coordinates
    degree: int
    mode: str
    system: ConstraintSystem     # centred at the point (base point = origin)
    tol: float = None
    notes: list = field(default_factory=list)


def _approx(p, tol):
    return p if tol is None else p.to_approx(tol)


def _ftilde_c1(n, z_vars, degree):
    """100 * sum (t^2 + 1 - cos(20 pi t)) expanded to ``degree``."""
    with mpmath.workdps(_DIGITS + 10):
        w = 20 * mpmath.pi
        coeffs = {2: Fraction(1)}
        for i in range(1, degree // 2 + 1):
            c = _rational((-1) ** (i + 1) * w ** (2 * i) / mpmath.factorial(2 * i))
            coeffs[2 * i] = coeffs.get(2 * i, 0) + c
    out = Poly.zero(n)
    for v in z_vars:
        t = Poly.var(n, v)
        for d, c in coeffs.items():
            if d <= degree:
                out = out + (t ** d).scale(100 * c)
    return out


def c1_dtlz1_instance(M, k, y_prime=None, degree=6, tol=DEFAULT_TOL):
    if M < 2 or k < 1:
        raise ValueError("need M >= 2 and k >= 1")
    if y_prime is None:
        y_prime = tuple(Fraction(1, 2) for _ in range(M - 2))
    y_prime = tuple(Fraction(v) for v in y_prime)
    if len(y_prime) != M - 2 or not all(0 < v < 1 for v in y_prime):
        raise ValueError("y' must lie in the open cube (0,1)^(M-2)")
    n = M - 1 + k
    names = tuple(f"y{i + 1}" for i in range(M - 1)) + tuple(f"z{j + 1}" for j in range(k))
    point = (Fraction(1),) + y_prime + tuple(Fraction(1, 2) for _ in range(k))
    x = [Poly.var(n, i) for i in range(n)]
    one = Poly.const(n, 1)
    ft = _ftilde_c1(n, range(M - 1, n), degree)
    # -g = (5/6)(1 + f)(1 + y1/5) - 1 with y1 = 1 + s1
    minus_g = (ft + one) * (one + x[0].scale(Fraction(1, 6))) - one
    g = [minus_g]
    for i in range(M - 1):                  # 0 <= y_i <= 1
        g.append(Poly.const(n, point[i] - 1) + x[i])
        g.append(Poly.const(n, -point[i]) - x[i])
    for j in range(M - 1, n):               # 0 <= z_j <= 1
        g.append(Poly.const(n, point[j] - 1) + x[j])
        g.append(Poly.const(n, -point[j]) - x[j])
    g = [_approx(p.truncate(degree).with_trunc(None), tol) for p in g]
    system = ConstraintSystem(n, g, (), (0,) * n if tol is None else (0.0,) * n, names)
    return BenchmarkInstance("C1-DTLZ1", {"M": M, "k": k, "y_prime": y_prime}, point,
                             degree, "exact" if tol is None else "approx", system, tol)


def c1_dtlz1_germ(M, k, y_prime=None, degree=6, tol=DEFAULT_TOL):
    return c1_dtlz1_instance(M, k, y_prime, degree, tol).system


def c2_dtlz2_instance(M, k, ell, degree=6, tol=DEFAULT_TOL):
    """Reformulated system in (zeta, z): inequalities -zeta_j <= 0, -g <= 0 and
    the box constraints on z; equality sum zeta_i^2 - 1 = 0.  The upper
    bounds zeta_j <= 1 are implied by the equality and are not listed."""
    if not 1 <= ell <= M or k < 1:
        raise ValueError("need 1 <= l <= M and k >= 1")
    n = M + k
    names = tuple(f"zeta{i + 1}" for i in range(M)) + tuple(f"z{j + 1}" for j in range(k))
    with mpmath.workdps(_DIGITS + 10):
        s = _rational(1 / mpmath.sqrt(ell))
    if tol is None and s * s * ell != 1:
        raise ValueError("exact mode needs a perfect-square l")
    zeta0 = [s if i < ell else Fraction(0) for i in range(M)]
    point = tuple(zeta0) + tuple(Fraction(1, 2) for _ in range(k))
    r2 = 1 - Fraction(ell, M)
    x = [Poly.var(n, i) for i in range(n)]
    one = Poly.const(n, 1)
    zeta = [Poly.const(n, zeta0[i]) + x[i] for i in range(M)]
    lam = Poly.zero(n)
    for zi in zeta:
        lam = lam + zi.scale(Fraction(1, M))
    dev = Poly.zero(n)
    for zi in zeta:
        dev = dev + (zi - lam) ** 2
    ft = Poly.zero(n)
    for j in range(M, n):
        ft = ft + x[j] ** 2
    minus_g = Poly.const(n, r2) - (one + ft) ** 2 * dev
    # the exact value at the point is zero; drop the rounding residue of 1/sqrt(l)
    minus_g = minus_g - Poly.const(n, minus_g.constant_term())
    g = [-zi for zi in zeta] + [minus_g]
    for j in range(M, n):
        g.append(Poly.const(n, point[j] - 1) + x[j])
        g.append(Poly.const(n, -point[j]) - x[j])
    h = Poly.zero(n)
    for zi in zeta:
        h = h + zi ** 2
    h = h - one
    h = h - Poly.const(n, h.constant_term())
    g = [_approx(p, tol) for p in g]
    h = [_approx(h, tol)]
    system = ConstraintSystem(n, g, h, (0,) * n if tol is None else (0.0,) * n, names)
    inst = BenchmarkInstance("C2-DTLZ2", {"M": M, "k": k, "l": ell, "r": math.sqrt(float(r2))},
                             point, degree, "exact" if tol is None else "approx", system, tol)
    return inst


def c2_dtlz2_germ(M, k, ell, degree=6, tol=DEFAULT_TOL):
    return c2_dtlz2_instance(M, k, ell, degree, tol).system


def c2_r_direction(inst, germ):
    """Initial speed of the r-family: d(-g)/dr = 2r on the -g component."""
    M = inst.params["M"]
    n, tol = germ.nvars, germ.tol
    r = inst.params["r"]
    comps = [Poly.zero(n, None, tol) for _ in range(germ.p)]
    active = dict(germ.provenance[0].data)["active"]
    comps[active.index(M)] = Poly.const(n, 2 * r if tol is not None else Fraction(2) * r, None, tol)
    return [VecPoly(comps)]


# ------------------------------------------------------------------ audits

@dataclass
class AuditResult:
    name: str
    params: dict
    verdict: str                      # generic | non-generic | undecided
    facts: dict = field(default_factory=dict)
    margins: list = field(default_factory=list)   # (name, |value|)
    margin_floor: float = None
    ok: bool = True
    messages: list = field(default_factory=list)

    @property
    def min_margin(self):
        vals = [v for _, v in self.margins if v is not None]
        return min(vals) if vals else None


def _check_margins(res, tol):
    res.margin_floor = AUDIT_MARGIN_FACTOR * tol if tol is not None else None
    mm = res.min_margin
    if tol is not None and mm is not None and mm < res.margin_floor:
        res.ok = False
        res.messages.append(f"smallest decision margin {mm:.3e} is below {res.margin_floor:.1e}")


def _basis_margins(res, label, cr):
    if cr is not None and cr.min_pivot is not None:
        res.margins.append((f"{label}: smallest pivot", abs(cr.min_pivot)))


def conditioned_c1_system(M, k, y_prime=None, degree=6, tol=DEFAULT_TOL):
    """The C1 jet in balanced coordinates, rounded to floats last.

    The z displacements are rescaled and -g is multiplied by 6 (a positive
    multiplier on an inequality) so that -g = s + tau^2 + ...; both are
    K[G]-equivalences, so every invariant is unchanged while the Taylor
    coefficients drop from ~1e12 to O(1).  The change is applied in exact
    arithmetic.  The ratio of the tau^4 and (tau^2)^2 coefficients (about
    2.8e-4) cannot be removed by any such rescaling and shows up as the
    smallest pivot of the degree >= 4 standard bases.
    """
    inst = c1_dtlz1_instance(M, k, y_prime, degree, None)
    n = inst.system.nvars
    with mpmath.workdps(_DIGITS + 10):
        c = _rational(1 / mpmath.sqrt(600 * (1 + 200 * mpmath.pi ** 2)))
    images = [Poly.var(n, i) if i < M - 1 else Poly.var(n, i).scale(c) for i in range(n)]
    g = [substitute(p, images, degree) for p in inst.system.g]
    g[0] = g[0].scale(6)
    g = [_approx(p, tol).with_trunc(None) for p in g]
    inst.system = ConstraintSystem(n, g, (), (0,) * n if tol is None else (0.0,) * n,
                                   inst.system.names)
    inst.tol, inst.mode = tol, "exact" if tol is None else "approx"
    inst.notes.append("z coordinates rescaled and -g multiplied by 6")
    return inst


def audit_c1(M=3, k=1, y_prime=None, degrees=range(2, 7), tol=DEFAULT_TOL, budget=4):
    inst = conditioned_c1_system(M, k, y_prime, max(degrees) + 1, tol)
    germ = activate(inst.system)
    res = AuditResult("C1-DTLZ1", dict(inst.params), "undecided")
    D = germ.differential()
    res.facts["active"] = dict(germ.provenance[0].data)["active"]
    res.facts["differentials"] = D
    rk = rank(D, tol)
    res.facts["parallel"] = germ.q == 2 and rk == 1 and all(
        abs(D[0][j] * D[1][0] - D[1][j] * D[0][0]) <= (tol or 0) for j in range(germ.nvars))
    bounds = {}
    for m in degrees:
        try:
            cr = kge_codim(germ, m, m_start=m)
        except KGError as e:
            bounds[m] = (None, False)
            res.messages.append(f"degree {m}: {e}")
            continue
        bounds[m] = (cr.value, cr.certified)
        _basis_margins(res, f"degree {m}", cr)
    res.facts["codim_by_degree"] = bounds
    res.facts["exceeds_budget_all_degrees"] = all(
        v is not None and v > budget and not c for v, c in bounds.values())
    try:
        v = verdict_for_germ(germ, budget, max(degrees), margin_factor=AUDIT_MARGIN_FACTOR)
        res.facts["classification"] = v.label or v.reason
        res.margins += [(d.name, d.margin) for d in
                        (v.classification.margins if v.classification else []) if not d.zero]
        res.verdict = v.status
    except KGError as e:
        res.messages.append(str(e))
    if res.facts["exceeds_budget_all_degrees"]:
        res.verdict = "non-generic"
    _check_margins(res, tol)
    return res


def audit_c2(M=3, k=2, ell=1, tol=DEFAULT_TOL, budget=4, m_max=6):
    inst = c2_dtlz2_instance(M, k, ell, 6, tol)
    germ = activate(inst.system)
    res = AuditResult("C2-DTLZ2", dict(inst.params), "undecided")
    res.facts["active"] = dict(germ.provenance[0].data)["active"]
    for key, gm in (("kge_codim", germ), ("kge_codim_reduced", None)):
        try:
            if gm is None:
                gm = full_reduce(germ)
            cr = kge_codim(gm, m_max)
        except KGError as e:
            res.facts[key] = (None, False)
            res.messages.append(f"{key}: {e}")
            continue
        res.facts[key] = (cr.value, cr.certified)
        if key == "kge_codim":
            res.facts["quotient_basis"] = cr.quotient_basis
        _basis_margins(res, key, cr)
    dirs = c2_r_direction(inst, germ)
    try:
        vr = check_versal(germ, dirs, m_max)
        res.facts["versal"] = vr.versal
    except KGError as e:
        res.facts["versal"] = False
        res.messages.append(str(e))
    try:
        v = verdict_for_germ(germ, budget, m_max, dirs, margin_factor=AUDIT_MARGIN_FACTOR)
    except KGError as e:
        res.messages.append(str(e))
        _check_margins(res, tol)
        return res
    res.facts["classification"] = v.label if v.label else v.reason
    if v.classification is not None:
        res.facts["table"] = v.classification.table
        res.margins += [(d.name, d.margin) for d in v.classification.margins if not d.zero]
    res.verdict = v.status
    if v.reason:
        res.messages.append(v.reason)
    _check_margins(res, tol)
    return res
