"""Acceptance suite: one test per criterion, each recording a PASS/FAIL line.

Run ``pytest tests/test_acceptance.py -s`` to see the lines inline; the
summary section at the end of any pytest run repeats them.
"""

from itertools import permutations
import random
import time

from hypothesis import HealthCheck, given, settings, strategies as st
import pytest

from kgsing import bench, tables
from kgsing.analysis import determinacy_order, is_submersion, jet_codim, kg_codim, kge_codim
from kgsing.classify import classify
from kgsing.germ import full_reduce
from kgsing.intrinsic import bilinear, corank_data, extended_intrinsic, rank
from kgsing.stdbasis import Gen, contains, standard_basis_truncated
from kgsing.verify import (check_fifteen_case, check_row, check_seven_case, check_table4,
                           check_type_1k, random_params, random_q)

import oracle
from conftest import record_acceptance
from kgtransform import random_transform
from randgerm import (corank_one_inequalities, random_germ, random_vec, reducible_germ)

SEEDS = st.integers(min_value=0, max_value=2 ** 64 - 1)


def _settings(n):
    return settings(max_examples=n, deadline=None, derandomize=True, database=None,
                    suppress_health_check=list(HealthCheck))


def _run_property(number, title, prop, count_label):
    try:
        prop()
    except Exception as e:  # report, then let pytest show the falsifying example
        record_acceptance(number, title, False, f"{type(e).__name__}: {str(e).splitlines()[0]}")
        raise
    record_acceptance(number, title, True, count_label)


# ---------------------------------------------------------------------------- 1

def test_criterion_01_type_1k_suite():
    fails, worst = [], 0.0
    for k in range(2, 6):
        for q in (1, 2, 3):
            for n in range(q + 1, q + 4):
                t = time.perf_counter()
                c = check_type_1k(k, q, n)
                worst = max(worst, time.perf_counter() - t)
                if not c.ok:
                    fails.append(f"{c.name}: {c.detail}")
    ok = not fails and worst < 1.0
    record_acceptance(1, "type (1,k) suite", ok,
                      f"36 instances, {len(fails)} failing, slowest {worst:.3f} s"
                      + (f"; {fails[0]}" if fails else ""))
    assert not fails, fails
    assert worst < 1.0


# ---------------------------------------------------------------------------- 2

def test_criterion_02_table_rows():
    rng = random.Random(2)
    t0 = time.perf_counter()
    fails = []
    for r in tables.ROWS:
        prm = random_params(r, rng)
        q = random_q(r, rng)
        c = check_row(r, prm, q)
        if not c.ok:
            fails.append(f"{c.name}: {c.detail}")
        if r.moduli:
            q2 = tables.row_q(r, q)
            n = tables.normal_form(r, q2, None, prm).nvars
            gens = tables.generators_in_normal_form(r, q2, n)
            if len(gens) != r.quotient_dim:
                fails.append(f"{r.label}: quotient generator count {len(gens)} != {r.quotient_dim}")
    dt = time.perf_counter() - t0
    ok = not fails and dt < 120
    record_acceptance(2, "table 1-3 row reproduction", ok,
                      f"{len(tables.ROWS)} rows in {dt:.1f} s, {len(fails)} failing"
                      + (f"; {fails[0]}" if fails else ""))
    assert not fails, fails
    assert dt < 120


# ---------------------------------------------------------------------------- 3

def test_criterion_03_table4_generators():
    rng = random.Random(3)
    fails = []
    for r in tables.ROWS:
        prm = random_params(r, rng)
        c = check_table4(r, random_q(r, rng), None, prm)
        if not c.ok:
            fails.append(f"{c.name}: {c.detail}")
    record_acceptance(3, "quotient generators of the table rows", not fails,
                      f"{len(tables.ROWS)} rows, {len(fails)} failing"
                      + (f"; {fails[0]}" if fails else ""))
    assert not fails, fails


# ---------------------------------------------------------------------------- 4

def test_criterion_04_seven_case_suite():
    fails = []
    for q in (3, 4):
        for i in range(len(tables.SEVEN_CASES)):
            c = check_seven_case(i, q)
            if not c.ok:
                fails.append(f"{c.name}: {c.detail}")
    record_acceptance(4, "seven alpha-strata of the 2-jet", not fails,
                      f"14 instances, {len(fails)} failing" + (f"; {fails[0]}" if fails else ""))
    assert not fails, fails


# ---------------------------------------------------------------------------- 5

def test_criterion_05_parameter_strata_suite():
    fails = []
    computed, printed = {}, {}
    q = 3
    n = q + 2
    for i, (a, _) in enumerate(tables.FIFTEEN_CASES):
        c = check_fifteen_case(i, q, n)
        if not c.ok:
            fails.append(f"{c.name}: {c.detail}")
        cod = jet_codim(tables.lambda_a_jet(q, n, a), 2) - (n - q)
        computed.setdefault(cod, []).append(i + 1)
        printed.setdefault(tables.FIFTEEN_CASE_CODIM[i + 1], []).append(i + 1)
    grouping_ok = computed == printed
    ok = not fails and grouping_ok
    record_acceptance(5, "parameter strata of the corner 2-jet", ok,
                      f"{len(tables.FIFTEEN_CASES)} strata, {len(fails)} failing, codimension "
                      f"groups {dict(sorted(computed.items()))}"
                      + (f"; {fails[0]}" if fails else ""))
    assert not fails, fails
    assert grouping_ok, (computed, printed)


# ---------------------------------------------------------------------------- 6

def test_criterion_06_codimension_relation():
    @_settings(200)
    @given(SEEDS)
    def prop(seed):
        g = random_germ(random.Random(seed), n_max=4, p_max=3)
        from hypothesis import assume
        assume(not is_submersion(g))
        e = kge_codim(g, 6)
        k = kg_codim(g, 6, check=False)
        assume(e.certified and k.certified)
        assert e.value == k.value - g.nvars + g.p, (g, e.value, k.value)

    _run_property(6, "kge = kg - n + q + r", prop, "200 finite non-submersion germs")


# ---------------------------------------------------------------------------- 7

def test_criterion_07_reduction_does_not_raise_codim():
    @_settings(200)
    @given(SEEDS)
    def prop(seed):
        from hypothesis import assume
        g = reducible_germ(random.Random(seed))
        red = full_reduce(g)
        e = kge_codim(g, 6)
        er = kge_codim(red, 6)
        assume(e.certified and er.certified)
        assert red.nvars < g.nvars
        assert er.value <= e.value, (g, er.value, e.value)

    _run_property(7, "kge(full reduction) <= kge", prop, "200 reducible germs")


# ---------------------------------------------------------------------------- 8

def _oracle_case(seed):
    rng = random.Random(seed)
    n, p, m = rng.randint(1, 3), rng.randint(1, 3), rng.randint(1, 4)
    gens = [random_vec(rng, n, p, 3, 4) for _ in range(rng.randint(1, 4))]
    depths = [rng.choice((0, 0, 0, 1)) for _ in gens]
    probes = [random_vec(rng, n, p, 3, 4) for _ in range(2)]
    # a probe known to lie in the module: a combination of generator multiples
    comb = None
    for g, d in zip(gens, depths):
        b = [rng.randint(0, 1) for _ in range(n)]
        if sum(b) < d:
            b[0] = 1
        b = tuple(b)
        term = g.mul_monomial(b, rng.randint(-2, 2))
        comb = term if comb is None else comb + term
    return n, p, m, gens, depths, probes, comb


def test_criterion_08_oracle_equivalence():
    @_settings(500)
    @given(SEEDS)
    def prop(seed):
        n, p, m, gens, depths, probes, comb = _oracle_case(seed)
        basis = standard_basis_truncated([Gen(g, d) for g, d in zip(gens, depths)], m, n, p)
        dense = oracle.module_span([oracle.as_dict(g) for g in gens], n, p, m, depths)
        full = len(oracle.columns(n, p, m))
        assert basis.span_dim == dense.rank
        assert len(basis.standard_monomials) == full - dense.rank
        # the standard monomials complement the module
        for i, e in basis.standard_monomials:
            assert dense.add({(i, e): 1})
        assert dense.rank == full
        dense = oracle.module_span([oracle.as_dict(g) for g in gens], n, p, m, depths)
        for f in probes + [comb]:
            want = dense.contains(oracle.truncate(oracle.as_dict(f), m))
            assert contains(basis, f) == want
        assert contains(basis, comb)

    _run_property(8, "standard bases agree with dense linear algebra", prop,
                  "500 generator sets")


# ---------------------------------------------------------------------------- 9

def _label(g, m):
    try:
        r = classify(g, m_max=m)
        return (r.table, r.label)
    except Exception as e:  # the error class itself must be invariant
        return type(e).__name__


def test_criterion_09_invariance():
    @_settings(100)
    @given(SEEDS)
    def invariants(seed):
        from hypothesis import assume
        rng = random.Random(seed)
        g = random_germ(rng, n_max=3, p_max=3)
        d = determinacy_order(g, 5)
        assume(d.certified)
        e = kge_codim(g, 6)
        assume(e.certified)
        deg = d.order + 2
        g2, _ = random_transform(g, rng, deg)
        e2 = kge_codim(g2, deg - 1)
        d2 = determinacy_order(g2, deg - 1)
        assert (e2.value, e2.certified) == (e.value, True)
        assert (d2.order, d2.certified) == (d.order, True)
        assert _label(g2, deg - 1) == _label(g, deg - 1)

    @_settings(100)
    @given(SEEDS)
    def intrinsic_identity(seed):
        from hypothesis import assume
        rng = random.Random(seed)
        g = corank_one_inequalities(rng)
        assume(corank_data(g).corank == 1)
        g2, T = random_transform(g, rng, 4)
        info, data, hs = extended_intrinsic(g)
        info2, data2, _ = extended_intrinsic(g2)
        n = g.nvars
        # cokernel map: mu' M(0) = c mu
        nu = [0] * g.q
        for i in range(g.q):
            nu[T.perm[i]] = data2.mu[i] * T.diag0[i]
        rep = data.cokernel_rep
        c = nu[rep] / data.mu[rep]
        assert all(nu[j] == c * data.mu[j] for j in range(g.q))
        # source map: d phi(0) carries W' onto W
        AW = [[sum(T.A[i][j] * w[j] for j in range(n)) for i in range(n)] for w in data2.W_basis]
        assert len(AW) == len(data.W_basis) == rank(AW) == rank(AW + data.W_basis)
        assert info2.D2_matrix == [[c * bilinear(hs, a, b) for b in AW] for a in AW]

    def both():
        invariants()
        intrinsic_identity()

    _run_property(9, "K[G]-invariance and the intrinsic-derivative identity", both,
                  "100 germs x transformations; 100 corank-one identities")


# --------------------------------------------------------------------------- 10

def test_criterion_10_constrained_sphere_audit():
    t0 = time.perf_counter()
    fails = []
    for M in (2, 3, 4):
        for ell in range(1, M + 1):
            for k in (1, 2):
                res = bench.audit_c2(M, k, ell, tol=1e-9)
                ok = (res.facts.get("kge_codim") == (1, True) and res.facts.get("versal") is True
                      and res.ok and res.min_margin is not None and res.min_margin > 1e-3)
                if not ok:
                    fails.append(f"(M={M},k={k},l={ell}): kge {res.facts.get('kge_codim')}, "
                                 f"versal {res.facts.get('versal')}, "
                                 f"min margin {res.min_margin:.2e}")
    dt = time.perf_counter() - t0
    ok = not fails and dt < 30
    record_acceptance(10, "C2-DTLZ2 codimension 1 and versal r-family", ok,
                      f"18 configurations in {dt:.1f} s, {len(fails)} failing"
                      + (f": {'; '.join(fails)}" if fails else ""))
    assert not fails, fails
    assert dt < 30


# --------------------------------------------------------------------------- 11

C1_CASES = [(2, 1, None), (3, 1, None), (3, 2, None), (4, 1, None),
            (4, 1, (1 / 4, 2 / 3))]


def test_criterion_11_c1_audit():
    from fractions import Fraction
    t0 = time.perf_counter()
    fails = []
    for M, k, y in C1_CASES:
        yp = None if y is None else tuple(Fraction(v).limit_denominator(12) for v in y)
        res = bench.audit_c1(M, k, yp)
        facts = res.facts
        low = [m for m, (v, cert) in facts["codim_by_degree"].items()
               if cert or v is None or v <= 4]
        problems = []
        if not facts["parallel"]:
            problems.append("differentials not parallel")
        if low:
            problems.append(f"bound <= 4 or stabilized at degrees {low}")
        if res.verdict != "non-generic":
            problems.append(f"verdict {res.verdict} ({facts.get('classification')})")
        if problems:
            fails.append(f"(M={M},k={k},y'={yp}): " + ", ".join(problems))
    dt = time.perf_counter() - t0
    ok = not fails and dt < 30
    record_acceptance(11, "C1-DTLZ1 parallel gradients and unbounded codimension", ok,
                      f"{len(C1_CASES)} configurations in {dt:.1f} s, {len(fails)} failing"
                      + (f": {'; '.join(fails)}" if fails else ""))
    assert not fails, fails
    assert dt < 30


# --------------------------------------------------------------------------- 12

def _corner_match(a, b):
    """Classification parameters equal up to relabelling the corner coordinates."""
    plain = ("l", "l1", "inertia", "corner", "null", "sign")
    if any(a.get(k) != b.get(k) for k in plain):
        return False
    if "delta" not in a:
        return "delta" not in b
    t = len(a["delta"])
    for s in permutations(range(t)):
        if tuple(a["delta"][s[i]] for i in range(t)) != tuple(b["delta"]):
            continue
        sa, sb = a["alpha_squared"], b["alpha_squared"]
        if not isinstance(sa, dict):
            if sa == sb:
                return True
            continue
        key = lambda i, j: f"{min(i, j) + 1}{max(i, j) + 1}"
        if all(sb[key(i, j)] == sa[key(s[i], s[j])] for i in range(t) for j in range(i + 1, t)):
            return True
    return False


def _recovers_normal_form(r, prm, params):
    """The classification of a normal form reports its own signs and moduli."""
    if "delta" not in params:
        return True
    t = len(params["delta"])
    want = tuple(prm.delta[:t])
    if tuple(params["delta"]) not in (want, tuple(-d for d in want)):
        return False
    if isinstance(prm.alpha, dict):
        return all(params["alpha_squared"][f"{i}{j}"] == prm.alpha[(i, j)] ** 2
                   for i, j in ((1, 2), (1, 3), (2, 3)))
    return params["alpha_squared"] == prm.alpha ** 2


def test_criterion_12_round_trip():
    rng = random.Random(12)
    t0 = time.perf_counter()
    fails, total = [], 0
    for r in tables.ROWS:
        for _ in range(3):
            prm = random_params(r, rng)
            q = tables.row_q(r, random_q(r, rng))
            nmin = tables.min_nvars(r, q)
            rr = 1 if r.table in (1, 3) else 0
            n = rng.randint(nmin, max(nmin, min(q + rr + 3, nmin + 1)))
            g = tables.normal_form(r, q, n, prm)
            deg = r.determinacy + 2
            g2, _ = random_transform(g, rng, deg)
            total += 1
            try:
                base = classify(g, m_max=deg - 1)
                res = classify(g2, m_max=deg - 1)
            except Exception as e:
                fails.append(f"{r.key} n={n}: {type(e).__name__}: {e}")
                continue
            if res.row is None or res.row.key != r.key:
                fails.append(f"{r.key} n={n}: got {res.table} {res.label} ({res.reason})")
            elif not _recovers_normal_form(r, prm, base.params):
                fails.append(f"{r.key}: normal form parameters {base.params} vs {prm}")
            elif not _corner_match(base.params, res.params):
                fails.append(f"{r.key}: parameters {res.params} vs {base.params}")
    dt = time.perf_counter() - t0
    ok = not fails and dt < 300
    record_acceptance(12, "round-trip classification of scrambled normal forms", ok,
                      f"{total} scrambles over {len(tables.ROWS)} rows in {dt:.1f} s, "
                      f"{len(fails)} failing" + (f"; {fails[0]}" if fails else ""))
    assert not fails, fails
    assert dt < 300


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__, "-v", "-s"]))
