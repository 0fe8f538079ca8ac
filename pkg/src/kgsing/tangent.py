"""Generating sets of the K[G] tangent spaces of a constraint germ.

Each space is returned as module generators with a multiplier depth: a
generator of depth d stands for all products x^b * gen with |b| >= d.
"""

from dataclasses import dataclass

from .ring import Poly, VecPoly, monomials_of_degree
from .stdbasis import Gen, standard_basis_truncated

TK, TKE, TK1, TC = "TK[G]", "TK[G]_e", "TK[G]_1", "TC[G]"


@dataclass(frozen=True)
class TangentGenerators:
    kind: str
    germ: object
    module_gens: tuple

    def vectors(self):
        """Explicit generators, expanding multiplier depth into monomial factors."""
        out = []
        for g in self.module_gens:
            if g.depth == 0:
                out.append(g.vec)
            else:
                for b in monomials_of_degree(g.vec.nvars, g.depth):
                    out.append(g.vec.mul_monomial(b))
        return out


def _unit_vec(germ, k, poly):
    zero = Poly.zero(germ.nvars, None, germ.tol)
    return VecPoly([poly if t == k else zero for t in range(germ.p)])


def _tc(germ, depth):
    gens = []
    for i, gi in enumerate(germ.g):
        gens.append(Gen(_unit_vec(germ, i, gi), depth))
    for hj in germ.h:
        for k in range(germ.p):
            gens.append(Gen(_unit_vec(germ, k, hj), depth))
    return gens


def _derivatives(germ, depth):
    gh = germ.gh
    return [Gen(gh.partial(j), depth) for j in range(germ.nvars)]


def tc_g_generators(germ):
    return TangentGenerators(TC, germ, tuple(_tc(germ, 0)))


def tke_generators(germ):
    return TangentGenerators(TKE, germ, tuple(_derivatives(germ, 0) + _tc(germ, 0)))


def tk_generators(germ):
    return TangentGenerators(TK, germ, tuple(_derivatives(germ, 1) + _tc(germ, 0)))


def tk1_generators(germ):
    return TangentGenerators(TK1, germ, tuple(_derivatives(germ, 2) + _tc(germ, 1)))


def span(tangent, m, extra=()):
    germ = tangent.germ
    gens = [g for g in tangent.module_gens if not g.vec.is_zero()] + list(extra)
    return standard_basis_truncated(gens, m, germ.nvars, germ.p, germ.tol)


def jet_tangent(germ, m):
    """Standard basis of TK[G] modulo degree m+1 (tangent to the K[G]^m orbit)."""
    return span(tk_generators(germ), m)
