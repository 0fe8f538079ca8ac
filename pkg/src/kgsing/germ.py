"""Constraint systems, constraint germs and (full) reduction."""

from dataclasses import dataclass, field
from fractions import Fraction

from .errors import InfeasiblePoint, NonvanishingEquality, RankDeficient
from .ring import Poly, VecPoly, implicit_solve, substitute, translate

DEFAULT_SOLVE_DEGREE = 9


@dataclass(frozen=True)
class ConstraintSystem:
    """Inequalities g <= 0 and equalities h = 0 around ``base_point``."""

    nvars: int
    g: tuple
    h: tuple
    base_point: tuple
    names: tuple = None

    def __post_init__(self):
        object.__setattr__(self, "g", tuple(self.g))
        object.__setattr__(self, "h", tuple(self.h))
        object.__setattr__(self, "base_point", tuple(self.base_point))
        if len(self.base_point) != self.nvars:
            raise ValueError("base point has the wrong length")
        for p in self.g + self.h:
            if p.nvars != self.nvars:
                raise ValueError("constraint polynomial has the wrong nvars")


@dataclass(frozen=True)
class Step:
    kind: str
    data: tuple


@dataclass(frozen=True)
class ConstraintGerm:
    """A germ (g, h) at the origin; g holds only active inequalities."""

    nvars: int
    g: tuple
    h: tuple
    names: tuple = None
    provenance: tuple = ()
    tol: float = None

    def __post_init__(self):
        object.__setattr__(self, "g", tuple(self.g))
        object.__setattr__(self, "h", tuple(self.h))
        if self.names is None:
            object.__setattr__(self, "names", tuple(f"x{i + 1}" for i in range(self.nvars)))
        for p in self.g + self.h:
            if p.nvars != self.nvars:
                raise ValueError("component has the wrong nvars")
            c = p.constant_term()
            if (c != 0) if self.tol is None else abs(c) >= self.tol:
                raise ValueError("germ components must vanish at the origin")

    @property
    def q(self):
        return len(self.g)

    @property
    def r(self):
        return len(self.h)

    @property
    def p(self):
        return len(self.g) + len(self.h)

    @property
    def components(self):
        return self.g + self.h

    @property
    def gh(self):
        return VecPoly(self.components)

    @property
    def trunc(self):
        ts = [c.trunc for c in self.components if c.trunc is not None]
        return min(ts) if ts else None

    def differential(self):
        return [c.linear_coeffs() for c in self.components]

    def truncate(self, m):
        return ConstraintGerm(self.nvars, [c.truncate(m) for c in self.g],
                              [c.truncate(m) for c in self.h], self.names,
                              self.provenance, self.tol)

    def with_step(self, step):
        return ConstraintGerm(self.nvars, self.g, self.h, self.names,
                              self.provenance + (step,), self.tol)


def make_germ(g, h=(), names=None, tol=None):
    comps = list(g) + list(h)
    if not comps:
        raise ValueError("use ConstraintGerm directly for the empty germ")
    return ConstraintGerm(comps[0].nvars, g, h, names, (), comps[0].tol if tol is None else tol)


def _is_zero(v, tol):
    return v == 0 if tol is None else abs(v) <= tol


def activate(system, m=None):
    """Translate to the origin and keep the inequalities active there."""
    tol = None
    for p in system.g + system.h:
        tol = p.tol
        break
    point = system.base_point
    if tol is None:
        point = tuple(Fraction(v) for v in point)
    g_loc, active, dropped = [], [], []
    for i, gi in enumerate(system.g):
        t = translate(gi, point)
        v = t.constant_term()
        if _is_zero(v, tol):
            active.append(i)
            g_loc.append(_strip_constant(t, m))
        elif v > 0:
            raise InfeasiblePoint(f"inequality g{i + 1} is positive ({v}) at the base point")
        else:
            dropped.append(i)
    h_loc = []
    for j, hj in enumerate(system.h):
        t = translate(hj, point)
        v = t.constant_term()
        if not _is_zero(v, tol):
            raise NonvanishingEquality(f"equality h{j + 1} equals {v} at the base point")
        h_loc.append(_strip_constant(t, m))
    step = Step("activate", (("active", tuple(active)), ("dropped", tuple(dropped))))
    return ConstraintGerm(system.nvars, g_loc, h_loc, system.names, (step,), tol)


def _strip_constant(p, m):
    terms = {e: c for e, c in p.terms.items() if sum(e) > 0}
    return Poly(p.nvars, terms, m if m is not None else p.trunc, p.tol)


def _pivoted_selection(rows, tol):
    """Greedy full pivoting on a coefficient matrix.

    Returns (row indices, column indices) of the chosen pivots, picking at each
    step the entry of largest absolute value, first in row-major order.
    """
    a = [list(r) for r in rows]
    used_r, used_c = [], []
    while True:
        best = None
        for i, row in enumerate(a):
            if i in used_r:
                continue
            for j, v in enumerate(row):
                if j in used_c or _is_zero(v, tol):
                    continue
                if best is None or abs(v) > abs(best[2]):
                    best = (i, j, v)
        if best is None:
            return used_r, used_c
        i, j, v = best
        used_r.append(i)
        used_c.append(j)
        for t, row in enumerate(a):
            if t != i and not _is_zero(row[j], tol):
                f = row[j] / v
                a[t] = [x - f * y for x, y in zip(row, a[i])]


def reduce(germ, i_indices, k_indices=(), m=None, solve_vars=None):
    """Restrict the germ to the zero set of the selected equalities.

    ``i_indices`` select equality components (0-based); ``solve_vars`` the
    variables eliminated (chosen by pivoting when omitted).  Only regular
    selections are supported.
    """
    if k_indices:
        raise ValueError("inactive inequalities are removed by activate")
    i_indices = list(i_indices)
    if not i_indices:
        return germ
    tol = germ.tol
    lin = [germ.h[i].linear_coeffs() for i in i_indices]
    if solve_vars is None:
        rows, cols = _pivoted_selection(lin, tol)
        if len(rows) < len(i_indices):
            raise RankDeficient("selected equality differentials are dependent")
        solve_vars = [cols[rows.index(t)] for t in range(len(i_indices))]
    solve_vars = list(solve_vars)
    if len(_pivoted_selection([[r[v] for v in solve_vars] for r in lin], tol)[0]) < len(i_indices):
        raise RankDeficient("selected equality differentials are dependent")
    if m is None:
        m = germ.trunc if germ.trunc is not None else DEFAULT_SOLVE_DEGREE
    sel = [germ.h[i] for i in i_indices]
    sol = implicit_solve(sel, solve_vars, m)
    keep = [v for v in range(germ.nvars) if v not in solve_vars]
    n2 = len(keep)
    newidx = {v: t for t, v in enumerate(keep)}

    def move(p):
        terms = {}
        for e, c in p.terms.items():
            ne = [0] * n2
            for v, k in enumerate(e):
                if k:
                    ne[newidx[v]] = k
            terms[tuple(ne)] = c
        return Poly(n2, terms, p.trunc, p.tol)

    images = []
    for v in range(germ.nvars):
        if v in newidx:
            images.append(Poly.var(n2, newidx[v], None, tol))
        else:
            images.append(move(sol[v]))
    g2 = [substitute(c, images, m, nvars_out=n2) for c in germ.g]
    h2 = [substitute(c, images, m, nvars_out=n2)
          for j, c in enumerate(germ.h) if j not in i_indices]
    names = tuple(germ.names[v] for v in keep)
    step = Step("reduce", (("solved_equalities", tuple(i_indices)),
                           ("eliminated_vars", tuple(solve_vars)),
                           ("kept_vars", tuple(keep))))
    return ConstraintGerm(n2, g2, h2, names, germ.provenance + (step,), tol)


def full_reduce(germ, m=None):
    """Eliminate a maximal regular set of equalities (greedy largest pivot)."""
    if not germ.h:
        return germ
    lin = [h.linear_coeffs() for h in germ.h]
    rows, cols = _pivoted_selection(lin, germ.tol)
    if not rows:
        return germ
    order = sorted(range(len(rows)), key=lambda t: rows[t])
    return reduce(germ, [rows[t] for t in order], (), m, [cols[t] for t in order])
