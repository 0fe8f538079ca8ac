"""Random K[G] jet transformations for property tests.

A transformation consists of a source diffeomorphism phi (invertible linear
part plus quadratic terms) and a matrix of functions in G: a positive
diagonal times a permutation on the inequality block, an invertible block
on the equalities, and a one-way mixing of equalities into inequalities.
"""

from dataclasses import dataclass
from fractions import Fraction

from kgsing.germ import ConstraintGerm
from kgsing.ring import Poly, substitute


def _det(mat):
    a = [[Fraction(x) for x in row] for row in mat]
    n = len(a)
    det = Fraction(1)
    for c in range(n):
        piv = next((r for r in range(c, n) if a[r][c] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != c:
            a[c], a[piv] = a[piv], a[c]
            det = -det
        det *= a[c][c]
        for r in range(c + 1, n):
            f = a[r][c] / a[c][c]
            a[r] = [x - f * y for x, y in zip(a[r], a[c])]
    return det


def random_invertible(rng, n, lo=-2, hi=2):
    while True:
        mat = [[rng.randint(lo, hi) for _ in range(n)] for _ in range(n)]
        if _det(mat) != 0:
            return mat


def _linear(n, coeffs, const=0):
    terms = {(0,) * n: Fraction(const)} if const else {}
    for j, c in enumerate(coeffs):
        if c:
            terms[tuple(1 if t == j else 0 for t in range(n))] = Fraction(c)
    return Poly(n, terms)


def _random_quadratic(rng, n, density=0.3):
    terms = {}
    for i in range(n):
        for j in range(i, n):
            if rng.random() < density:
                e = [0] * n
                e[i] += 1
                e[j] += 1
                terms[tuple(e)] = Fraction(rng.randint(-2, 2))
    return Poly(n, {e: c for e, c in terms.items() if c})


@dataclass
class Transform:
    A: list            # linear part of phi: phi(x) = A x + ...
    perm: list         # g'_i uses g_perm[i]
    diag0: list        # positive constants of the diagonal multipliers
    B0: list           # constant part of the equality block


def random_transform(germ, rng, degree, quadratic=True, mix=True, permute=True):
    """Apply a random K[G] transformation; returns (new germ, Transform)."""
    n, q, r = germ.nvars, germ.q, germ.r
    A = random_invertible(rng, n)
    phi = []
    for i in range(n):
        p = _linear(n, A[i])
        if quadratic:
            p = p + _random_quadratic(rng, n)
        phi.append(p)
    g_phi = [substitute(c.with_trunc(None), phi, degree) for c in germ.g]
    h_phi = [substitute(c.with_trunc(None), phi, degree) for c in germ.h]
    perm = list(range(q))
    if permute:
        rng.shuffle(perm)
    diag0 = [rng.randint(1, 3) for _ in range(q)]
    g_new = []
    for i in range(q):
        mult = _linear(n, [rng.randint(-1, 1) for _ in range(n)], diag0[i])
        gi = mult.mul_trunc(g_phi[perm[i]], degree)
        if mix:
            for hj in h_phi:
                nij = _linear(n, [rng.randint(-1, 1) for _ in range(n)], rng.randint(-1, 1))
                gi = gi + nij.mul_trunc(hj, degree)
        g_new.append(gi.truncate(degree))
    B0 = random_invertible(rng, r) if r else []
    h_new = []
    for j in range(r):
        hj = Poly.zero(n)
        for k in range(r):
            bjk = _linear(n, [rng.randint(-1, 1) for _ in range(n)] if mix else [0] * n, B0[j][k])
            hj = hj + bjk.mul_trunc(h_phi[k], degree)
        h_new.append(hj.truncate(degree))
    return ConstraintGerm(n, g_new, h_new), Transform(A, perm, diag0, B0)
