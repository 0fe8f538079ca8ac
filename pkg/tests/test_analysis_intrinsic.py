from fractions import Fraction

import pytest

from kgsing import bench
from kgsing.analysis import (check_versal, determinacy_order, extended_codim, full_report,
                             kg_codim, kge_codim)
from kgsing.errors import CorankTooHigh
from kgsing.germ import activate
from kgsing.intrinsic import (P as P_poly, alpha_invariants, corank_data, extended_intrinsic,
                              nondegeneracy_conditions, rank, star)
from kgsing.tables import normal_form, row, star_ok, star_star_ok

from conftest import P, V, germ


# --- codimensions ------------------------------------------------------------

def test_kge_type_13():
    c = kge_codim(germ(g=["x1", "x1 + x2^3 + x3^2"]))
    assert c.certified and c.value == 2
    assert sorted(c.quotient_basis) == [(1, (0, 0, 0)), (1, (0, 1, 0))]


def test_kge_submersion_is_zero():
    c = kge_codim(germ(g=["x1", "x2"]))
    assert c.certified and c.value == 0


def test_kge_morse():
    c = kge_codim(germ(h=["x1^2 + x2^2"], n=2))
    assert c.certified and c.value == 1


def test_kg_and_prop_22_for_type_13():
    g = germ(g=["x1", "x1 + x2^3 + x3^2"])
    assert kg_codim(g).value == 3
    assert kge_codim(g).value == kg_codim(g).value - g.nvars + g.p


def test_kg_morse():
    g = germ(h=["x1^2 + x2^2"], n=2)
    assert kg_codim(g).value == 2


def test_kg_submersion_finite_without_check():
    c = kg_codim(germ(g=["x1"], n=1), check=False)
    assert c.certified and c.value == 0


@pytest.mark.parametrize("k", [2, 3, 4, 5])
def test_determinacy_type_1k(k):
    d = determinacy_order(normal_form(row(2, f"(1,{k})"), 2, 3))
    assert d.certified and d.order == k


def test_determinacy_type_6():
    d = determinacy_order(normal_form(row(2, "(6)"), 3))
    assert d.certified and d.order == 2


def test_parallel_differentials_are_not_determined():
    g = germ(g=["x1", "-x1"], n=2)
    d = determinacy_order(g, 6)
    assert not d.certified
    c = kge_codim(g, 6)
    assert not c.certified and c.value > 4


def test_full_report_morse():
    rep = full_report(germ(h=["x1^2 + x2^2"], n=2))
    assert rep.kge.value == 1 and rep.kg.value == 2
    assert rep.determinacy.order == 2 and rep.extended_codim == 1


def test_extended_codim_matches_kge_for_type_13():
    g = germ(g=["x1", "x1 + x2^3 + x3^2"])
    assert extended_codim(g, 3) == 2


# --- versality ---------------------------------------------------------------

def test_versal_family_for_cubic():
    g = germ(h=["x1^3 + x2^2"], n=2)
    res = check_versal(g, [V(["1"], 2), V(["x1"], 2)])
    assert res.versal and res.quotient_dim == 2


def test_nonversal_reports_missing_class():
    g = germ(h=["x1^3 + x2^2"], n=2)
    res = check_versal(g, [V(["x1"], 2)])
    assert not res.versal
    assert res.missing == [(0, (0, 0))]


def test_morse_versal_with_constant():
    assert check_versal(germ(h=["x1^2 + x2^2"], n=2), [V(["1"], 2)]).versal


# --- linear data and the extended intrinsic derivative -----------------------

def test_corank_with_zero_differential_component():
    d = corank_data(germ(g=["x1", "x2^2 + x3^2"]))
    assert d.corank == 1
    assert d.mu == [0, 1]
    assert rank(d.W_basis) == 3
    assert rank(d.kernel_basis) == 2
    assert all(v[0] == 0 for v in d.kernel_basis)


def test_corank_with_dependent_differentials():
    d = corank_data(germ(g=["x1", "x1 + x2^2"], n=2))
    assert d.mu == [1, -1]
    assert len(d.W_basis) == 1 and d.W_basis[0][0] == 0


def test_corank_of_benchmark_pair_is_parallel():
    g = activate(bench.c1_dtlz1_germ(3, 1))
    d = corank_data(g, list(range(g.q)))
    assert d.rank == 1 and d.corank == 1


def test_intrinsic_degenerate_for_cubic_normal_direction():
    info, data, _ = extended_intrinsic(germ(g=["x1", "x1 + x2^3"], n=2))
    assert all(x == 0 for row in info.D2_matrix for x in row)


def test_intrinsic_nondegenerate_for_quadratic():
    info, _, _ = extended_intrinsic(germ(g=["x1", "x1 + x2^2"], n=2))
    assert info.D2_matrix == [[Fraction(-2)]]


def test_intrinsic_requires_corank_one():
    with pytest.raises(CorankTooHigh):
        extended_intrinsic(germ(g=["x1^2", "x2^2"], n=2))


def test_theta_alpha_for_table3_type4():
    g = germ(g=["x1", "x2"], h=["x1^2 + x1*x2 + x2^2 + x3^2"])
    info = alpha_invariants(g, "theta")
    assert info.alpha == [[2, 1], [1, 2]]
    cond = nondegeneracy_conditions(info.alpha)
    assert cond.star and not cond.omega0


def test_theta_alpha_zero_block_sets_omega0():
    g = germ(g=["x1", "x2"], h=["x3^2 + x1^3"])
    info = alpha_invariants(g, "theta")
    assert info.omega0


def test_star_condition():
    assert star_ok(1, 1, 1)
    assert not star_ok(1, 1, 2)
    assert star(1, 1, 1) and not star(1, 2, 1)


def test_star_star_condition():
    assert star_star_ok((1, 1, 1), {(1, 2): 1, (1, 3): 1, (2, 3): 1})
    assert not star_star_ok((1, 1, 1), {(1, 2): 2, (1, 3): 0, (2, 3): 0})


def test_p_vanishes_without_corner_coupling():
    assert P_poly((1, 1, 0, 1, 1)) == 0
    assert P_poly((1, 0, 1, 1, 1)) != 0
