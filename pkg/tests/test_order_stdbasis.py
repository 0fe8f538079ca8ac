from itertools import product

import pytest

from kgsing.errors import ZeroElement
from kgsing.order import EQUAL, GREATER, LESS, cmp_monomial, cmp_term, leading
from kgsing.ring import Poly, VecPoly
from kgsing.stdbasis import (contains, divide, nakayama_stable, spoly,
                             standard_basis_truncated)
from kgsing.tables import normal_form, row
from kgsing.tangent import span, tke_generators

from conftest import P, V, germ


# --- local order -------------------------------------------------------------

def test_constant_beats_variable():
    assert cmp_monomial((0, 0), (1, 0)) == GREATER


def test_x1_beats_x2():
    assert cmp_monomial((1, 0), (0, 1)) == GREATER


def test_degree_two_revlex():
    assert cmp_monomial((2, 0), (1, 1)) == GREATER
    assert cmp_monomial((1, 1), (0, 2)) == GREATER


def _reference_greater(a, b):
    """Independent comparator: lower degree wins; within a degree the
    monomial whose last differing exponent is smaller wins."""
    if sum(a) != sum(b):
        return sum(a) < sum(b)
    for x, y in zip(reversed(a), reversed(b)):
        if x != y:
            return x < y
    return False


@pytest.mark.parametrize("n", [1, 2, 3])
def test_order_matches_reference(n):
    mons = [e for e in product(range(4), repeat=n) if sum(e) <= 3]
    for a in mons:
        for b in mons:
            want = EQUAL if a == b else (GREATER if _reference_greater(a, b) else LESS)
            assert cmp_monomial(a, b) == want


def test_term_order_is_term_over_position():
    assert cmp_term(0, (0, 1), 1, (0, 1)) == GREATER
    assert cmp_term(1, (1, 0), 0, (0, 1)) == GREATER


def test_leading_of_constant_vector():
    f = V(["1", "0", "-1"])
    assert leading(f) == (0, (0, 0, 0), 1)


def test_leading_pure_power():
    f = V(["0", "x2^3"])
    assert leading(f) == (1, (0, 3, 0), 1)


def test_leading_prefers_x1():
    assert leading(V(["0", "x1 + x2"])) == (1, (1, 0, 0), 1)


def test_leading_of_zero_raises():
    with pytest.raises(ZeroElement):
        leading(V(["0"]))


# --- s-polynomials and division ---------------------------------------------

def test_spoly_of_monomials_vanishes():
    assert spoly(V(["0", "x1"]), V(["0", "x2"])).is_zero()


def test_spoly_across_components_is_zero():
    assert spoly(V(["x1", "0"]), V(["0", "x1"])).is_zero()


def test_spoly_shared_leading_term():
    out = spoly(V(["1", "0", "2"]), V(["1", "0", "-3"]))
    assert out == V(["0", "0", "5"])


def _type13():
    return germ(g=["x1", "x1 + x2^3 + x3^2"])


def _tke_basis(g, m=4):
    return span(tke_generators(g), m)


def test_type13_standard_monomials():
    b = _tke_basis(_type13())
    assert sorted(b.standard_monomials) == [(1, (0, 0, 0)), (1, (0, 1, 0))]
    assert b.stabilized


def test_divide_member_leaves_zero_remainder():
    b = _tke_basis(_type13())
    _, rem = divide(V(["0", "x1"]), b.generators, b.m)
    assert rem.is_zero()


def test_divide_quotient_element_is_its_own_remainder():
    b = _tke_basis(_type13())
    f = V(["0", "x2"])
    _, rem = divide(f, b.generators, b.m)
    assert rem == f


def test_divide_zero():
    b = _tke_basis(_type13())
    cof, rem = divide(V(["0", "0"]), b.generators, b.m)
    assert rem.is_zero() and all(c.is_zero() for c in cof)


def test_divide_reconstructs_input():
    b = _tke_basis(_type13())
    f = V(["x1*x2 + 3", "x2^2 - x3 + x2"])
    cof, rem = divide(f, b.generators, b.m)
    total = rem
    for c, s in zip(cof, b.generators):
        total = total + VecPoly([c.mul_trunc(x, b.m) for x in s])
    assert total.truncate(b.m) == f.truncate(b.m)


def test_contains():
    b = _tke_basis(_type13())
    assert contains(b, V(["0", "x1 + x2^3 + x3^2"]))
    assert not contains(b, V(["0", "1"]))
    assert contains(b, V(["0", "0"]))


def test_monomial_generators_are_a_standard_basis():
    gens = [V(["x1^2", "0"]), V(["x1*x2", "0"]), V(["0", "x2^3"])]
    b = standard_basis_truncated(gens, 4)
    assert sorted(b.leading_monomials()) == sorted(leading(g)[:2] for g in gens)
    assert sorted(b.generators, key=repr) == sorted(gens, key=repr)


def test_morse_is_stable_at_degree_two():
    g = germ(h=["x1^2 + x2^2"], n=2)
    assert nakayama_stable(_tke_basis(g, 2))


def test_type15_not_stable_at_degree_three():
    r = row(1, "(1,5)")
    g = normal_form(r, 0, 2)
    assert not nakayama_stable(_tke_basis(g, 3))
    assert nakayama_stable(_tke_basis(g, 5))


def test_zero_module_never_stable():
    for m in (1, 2, 3):
        assert not standard_basis_truncated([], m, n=2, p=1).stabilized
