"""Codimensions, determinacy, extended codimension and versality."""

from dataclasses import dataclass, field

from .errors import ConsistencyFailure, NotFiniteAtDegree, UncertifiedBase
from .ring import VecPoly
from .stdbasis import Gen, standard_basis_truncated
from .tangent import span, tk1_generators, tk_generators, tke_generators

M_MAX = 8


@dataclass
class CodimResult:
    """Codimension of a tangent space, or a lower bound when not stabilized.

    ``value`` is the certified codimension when ``certified`` is true and the
    best lower bound (quotient dimension at ``degree``) otherwise.
    """

    kind: str
    value: int
    certified: bool
    degree: int
    quotient_basis: list
    counts: list
    min_pivot: float = None
    max_dropped: float = 0.0

    @property
    def finite(self):
        return self.certified

    def describe(self):
        if self.certified:
            return str(self.value)
        return f">= {self.value} (not stabilized up to degree {self.degree})"


@dataclass
class Determinacy:
    order: int
    certified: bool
    searched_to: int
    criterion: str = ""

    def describe(self):
        if self.certified:
            return f"certified <= {self.order}"
        return f"unknown (up to degree {self.searched_to})"


@dataclass
class CodimReport:
    kge: CodimResult
    kg: CodimResult
    determinacy: Determinacy
    extended_codim: int = None
    submersion: bool = False
    quotient_basis: list = field(default_factory=list)

    @property
    def certified(self):
        return self.kge.certified


def is_submersion(germ):
    from .intrinsic import rank

    return rank(germ.differential(), germ.tol) == germ.p


def _usable_degree(germ, m_max, loss=1):
    t = germ.trunc
    if t is None:
        return m_max
    return min(m_max, t - loss)


def _empty_result(kind, m):
    return CodimResult(kind, 0, True, m, [], [0] * (m + 1))


def _result(kind, basis, drop_constants=False):
    std = basis.standard_monomials
    if drop_constants:
        std = [(i, e) for i, e in std if sum(e) > 0]
    counts = [0] * (basis.m + 1)
    for _, e in std:
        counts[sum(e)] += 1
    return CodimResult(kind, len(std), basis.stabilized, basis.m, list(std), counts,
                       basis.min_pivot, basis.max_dropped)


def kge_codim(germ, m_max=M_MAX, m_start=2):
    """K[G]_e codimension via Nakayama-stabilized truncated standard bases."""
    if germ.p == 0:
        return _empty_result("K[G]_e", 0)
    top = _usable_degree(germ, m_max)
    res = None
    for m in range(min(m_start, top), top + 1):
        res = _result("K[G]_e", span(tke_generators(germ), m))
        if res.certified:
            return res
    return res


def kg_codim(germ, m_max=M_MAX, check=True, m_start=2):
    """K[G] codimension in M_n E^p; cross-checks kge = kg - n + q + r."""
    if germ.p == 0:
        return _empty_result("K[G]", 0)
    top = _usable_degree(germ, m_max)
    res = None
    for m in range(min(m_start, top), top + 1):
        res = _result("K[G]", span(tk_generators(germ), m), drop_constants=True)
        if res.certified:
            break
    if check and res.certified and not is_submersion(germ):
        e = kge_codim(germ, m_max)
        if e.certified and e.value != res.value - germ.nvars + germ.p:
            raise ConsistencyFailure(
                f"kge={e.value} but kg - n + q + r = {res.value - germ.nvars + germ.p}")
    return res


def determinacy_order(germ, m_max=M_MAX, transversal=True):
    """Smallest certified determinacy degree.

    Degree m is accepted when M^m E^p lies in TK[G] + M^{m+1} E^p, or (with
    ``transversal``) when M^{m+1} E^p lies in TK[G]_1 + M^{m+2} E^p so that
    every higher jet over the m-jet is trivial.
    """
    if germ.p == 0:
        return Determinacy(1, True, 1, "empty")
    top = _usable_degree(germ, m_max)
    for m in range(1, top + 1):
        if span(tk_generators(germ), m).stabilized:
            return Determinacy(m, True, m, "tangent")
        if transversal and m + 1 <= top and span(tk1_generators(germ), m + 1).stabilized:
            return Determinacy(m, True, m, "unipotent")
    return Determinacy(top, False, top)


def jet_codim(germ, m):
    """Codimension of the K[G]^m orbit of the m-jet inside the origin-vanishing jets."""
    if germ.p == 0:
        return 0
    basis = span(tk_generators(germ.truncate(m + 1)), m)
    return sum(1 for _, e in basis.standard_monomials if sum(e) > 0)


def extended_codim(germ, m):
    """d_e of the m-jet: orbit codimension - n + q + r."""
    if germ.p == 0:
        return 0
    if germ.trunc is not None and germ.trunc < m:
        raise NotFiniteAtDegree(f"germ known only to degree {germ.trunc} < {m}")
    return jet_codim(germ, m) - germ.nvars + germ.p


def full_report(germ, m_max=M_MAX):
    sub = germ.p == 0 or is_submersion(germ)
    e = kge_codim(germ, m_max)
    k = kg_codim(germ, m_max, check=not sub)
    d = determinacy_order(germ, m_max)
    ext = None
    if d.certified and germ.p:
        ext = extended_codim(germ, d.order)
    return CodimReport(e, k, d, ext, sub, list(e.quotient_basis))


@dataclass
class VersalityResult:
    versal: bool
    missing: list
    quotient_dim: int
    spanned_dim: int


def check_versal(germ, directions, m_max=M_MAX):
    """Do the initial speeds together with TK[G]_e span the whole module?

    ``directions`` are VecPolys (d(g,h)/du_i at u = 0).  On failure the
    standard monomials left unspanned are reported.
    """
    base = kge_codim(germ, m_max)
    if not base.certified:
        raise UncertifiedBase("base germ codimension is not certified")
    m = base.degree
    b0 = span(tke_generators(germ), m)
    rows = []
    for d in directions:
        rows.append(b0.normal_form(d.truncate(m)))
    missing, rank = _quotient_span(rows, b0)
    return VersalityResult(not missing, missing, base.value, rank)


def _quotient_span(vectors, basis):
    """Echelonize normal forms over the standard monomials; return unspanned ones."""
    from .order import term_key

    std = list(basis.standard_monomials)
    pos = {s: k for k, s in enumerate(std)}
    tol = basis.tol
    pivots = {}
    for v in vectors:
        row = {pos[(i, e)]: c for i, e, c in v.terms()}
        while row:
            c = min(row)
            if c not in pivots:
                h = row[c]
                if tol is not None and abs(h) < tol:
                    del row[c]
                    continue
                pivots[c] = {j: x / h for j, x in row.items()}
                break
            f = row[c]
            for j, x in pivots[c].items():
                nv = row.get(j, 0) - f * x
                if (nv == 0) if tol is None else abs(nv) < tol:
                    row.pop(j, None)
                else:
                    row[j] = nv
    missing = [std[k] for k in range(len(std)) if k not in pivots]
    return missing, len(pivots)
