"""Acceptance suite.  One pass/fail line is printed per criterion."""

import itertools

import pytest

from levelzero.chartheory import (ClassFunction, character_table,
                                  conjugacy_classes, decompose, inner_product)
from levelzero.glnfq import (D_map, ZElem, all_labels, cuspidal_labels,
                             derivative, gl2_cuspidals_with_central,
                             is_cuspidal)
from levelzero.ringmat import (Partition, enumerate_gl,
                               lattice_stabilizer_check, subgroup)
from levelzero.typicality import (casselman_clifford_form, casselman_u_i,
                                  certify_orbit_condition,
                                  clifford_decomposition_check,
                                  clifford_orbits, iwahori_induction_check,
                                  level_zero_classes, orbit_normal_form,
                                  trace_pairing_injective, verify_corollary,
                                  verify_main_theorem)

FAST_GRID = [(2, 2, 2), (2, 2, 3), (2, 3, 2)]


def _report(number, title, ok):
    print("criterion %d (%s): %s" % (number, title, "PASS" if ok else "FAIL"))
    assert ok, "criterion %d failed" % number


def test_criterion_1_character_substrate():
    expected = {(2, 2, 1): 6, (2, 3, 1): 48, (3, 2, 1): 168,
                (2, 2, 2): 96, (2, 3, 2): 3888, (2, 2, 3): 1536}
    ok = True
    for (n, p, m), order in expected.items():
        G = enumerate_gl(n, p, m)
        ok = ok and G.order == order
        table = character_table(G)
        table.verify(full=True)
        ok = ok and sum(d * d for d in table.dims()) == order
    _report(1, "character substrate", ok)


def test_criterion_2_zelevinsky_ring():
    ok = True
    for q in (2, 3):
        chars = all_labels(1, q)
        for k in (1, 2, 3):
            for tup in itertools.product(chars, repeat=k):
                prod = ZElem.of(tup[0])
                expect = ZElem.of(tup[0]) + ZElem.unit(q)
                for chi in tup[1:]:
                    prod = prod * ZElem.of(chi)
                    expect = expect * (ZElem.of(chi) + ZElem.unit(q))
                ok = ok and D_map(prod) == expect
    for n, q in ((2, 2), (2, 3), (3, 2)):
        for cusp in cuspidal_labels(n, q):
            ok = ok and derivative(cusp, 0) == ZElem.of(cusp)
            ok = ok and derivative(cusp, n) == ZElem.unit(q)
            ok = ok and all(derivative(cusp, j).is_zero()
                            for j in range(1, n))
    for q in (2, 3):
        for a in all_labels(1, q):
            for b in all_labels(2, q):
                x, y = ZElem.of(a), ZElem.of(b)
                ok = ok and D_map(x * y) == D_map(x) * D_map(y)
    _report(2, "derivative calculus", ok)


def test_criterion_3_clifford_decomposition():
    ok = True
    for p, M, m in ((2, 2, 1), (2, 3, 1), (2, 3, 2), (3, 2, 1)):
        ok = ok and clifford_decomposition_check(Partition((1, 1)), m, M, p)
    for I in (Partition((1, 2)), Partition((2, 1))):
        ok = ok and clifford_decomposition_check(I, 1, 2, 2)
    _report(3, "layer decomposition identity", ok)


def _shapes(n):
    out = []
    for r in range(2, n + 1):
        for parts in itertools.product(range(1, n), repeat=r):
            if sum(parts) == n:
                out.append(Partition(parts))
    return out


def test_criterion_4_orbit_lemma():
    ok = True
    for q in (2, 3):
        for n in (2, 3, 4):
            for I in _shapes(n):
                nr = I.parts[-1]
                s = n - nr
                reps = {}
                for A in itertools.product(range(q), repeat=s * nr):
                    if any(A):
                        rep, tag = orbit_normal_form(tuple(A), I, q)
                        reps[rep] = tag
                ok = ok and bool(reps)
                for rep, tag in sorted(reps.items()):
                    ok = ok and tag["condition"] in ("cond1", "cond2")
                    certify_orbit_condition(rep, I, q)
    _report(4, "orbit representative conditions", ok)


def test_criterion_5_casselman_pieces():
    ok = True
    for q in (2, 3):
        for i, M in ((2, 2), (2, 3), (3, 3)):
            budget = 400_000 if (q, M) == (3, 3) else None
            for varpi in all_labels(1, q):
                chi = casselman_u_i(varpi, i, M, budget)
                ok = ok and chi.dim().integer_value() == \
                    (q + 1) * q ** (i - 2) * (q - 1)
                ok = ok and inner_product(chi, chi) == 1
                ok = ok and chi == casselman_clifford_form(varpi, i, M,
                                                          budget=budget)
    _report(5, "Casselman pieces", ok)


def test_criterion_6_cuspidal_existence():
    ok = True
    for q in (2, 3, 5):
        for chi in all_labels(1, q):
            found = gl2_cuspidals_with_central(q, chi)
            ok = ok and found and all(is_cuspidal(lab) for lab in found)
    _report(6, "cuspidals with prescribed center", ok)


def _run_grid(grid):
    main_ok = True
    coro_ok = True
    for n, p, M in grid:
        for t in level_zero_classes(n, p):
            I = t.partition()
            labels = t.cuspidals()
            for m in range(2, M + 1):
                main_ok = main_ok and \
                    verify_main_theorem(I, labels, m, M).passed
            coro_ok = coro_ok and verify_corollary(I, labels, M).passed
    return main_ok, coro_ok


def test_criteria_7_and_8_fast_grid():
    main_ok, coro_ok = _run_grid(FAST_GRID)
    _report(7, "main theorem, fast grid", main_ok)
    _report(8, "typicality corollary, fast grid", coro_ok)


@pytest.mark.stretch
def test_criteria_7_and_8_stretch_gl3():
    main_ok, coro_ok = _run_grid([(3, 2, 2)])
    _report(7, "main theorem, GL_3 stretch", main_ok)
    _report(8, "typicality corollary, GL_3 stretch", coro_ok)


def test_criterion_9_structural_lemmas():
    ok = True
    for p in (2, 3):
        for r in (1, 2, 3):
            for c in (1, 2, 3):
                ok = ok and trace_pairing_injective(r, c, p)
    for n, p, M in FAST_GRID:
        for I in _shapes(n):
            for m in range(1, M + 1):
                ok = ok and lattice_stabilizer_check(I, m, M, p)
            G = enumerate_gl(n, p, M)
            for m in range(1, M + 1):
                J1 = subgroup(G, ("P1m", I, m))
                J2 = subgroup(G, ("P", I, m))
                ok = ok and iwahori_induction_check(
                    J1, J2, ClassFunction.trivial(J2), I)
            for m in range(1, M):
                # orbit construction re-verifies theta equivariance and
                # normality of the layer on generators
                orbits = clifford_orbits(I, m, M, p)
                ok = ok and sum(len(o.orbit) for o in orbits) == \
                    p ** ((n - I.parts[-1]) * I.parts[-1])
                # K_I(m) normal in P_I(1,m): closed under conjugation
                P = subgroup(G, ("P1m", I, m))
                K = subgroup(G, ("KI", I, m))
                kset = set(K.elements)
                for g in P.generators():
                    ginv = P.inv(g)
                    for k in K.elements:
                        if P.mul(P.mul(g, k), ginv) not in kset:
                            ok = False
    _report(9, "structural lemma suite", ok)
