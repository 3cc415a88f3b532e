"""Level-zero layer: orbits, layer characters, theorem verifiers."""

import pytest

from levelzero.chartheory import (ClassFunction, character_table, decompose,
                                  inner_product)
from levelzero.glnfq import IrrLabel, all_labels, cuspidal_labels
from levelzero.ringmat import Partition, enumerate_gl, subgroup
from levelzero.typicality import (atypicality_witness, build_tau_I,
                                  casselman_clifford_form, casselman_u_i,
                                  certify_orbit_condition,
                                  clifford_decomposition_check,
                                  clifford_orbits, ind_level, inertial_eq,
                                  iwahori_induction_check, level_zero_classes,
                                  make_class, multiplicity_one_check,
                                  orbit_normal_form, trace_pairing_injective,
                                  twist_class, u_eta_character_n1,
                                  u_m_character, verify_corollary,
                                  verify_main_theorem)

I11 = Partition((1, 1))
T2 = IrrLabel(2, 1, 0)


def test_tau_shape():
    tau = build_tau_I(I11, [T2, T2], 2)
    assert tau.G.order == 96
    assert tau.P1.order == 32
    chi = tau.chi
    assert chi.dim() == 1


def test_u_m_vanishes_at_depth_one():
    tau = build_tau_I(I11, [T2, T2], 2)
    assert u_m_character(tau, 1).is_zero()
    assert not u_m_character(tau, 2).is_zero()
    assert u_m_character(tau, 2).dim().integer_value() == 3


def test_u_m_vanishes_for_single_block():
    cusp = cuspidal_labels(2, 2)[0]
    tau = build_tau_I(Partition((2,)), [cusp], 2)
    assert u_m_character(tau, 2).is_zero()


def test_multiplicity_one():
    tau = build_tau_I(I11, [T2, T2], 2)
    assert multiplicity_one_check(tau, 1)
    assert multiplicity_one_check(tau, 2)


def test_containment_chain_is_genuine():
    # ind at depth m+1 minus ind at depth m decomposes non-negatively
    tau = build_tau_I(I11, [T2, T2], 3)
    table = character_table(tau.G)
    for m in (1, 2):
        diff = ind_level(tau, m + 1) - ind_level(tau, m)
        assert decompose(diff, table).genuine


def test_clifford_orbits_f2():
    orbits = clifford_orbits(I11, 1, 2, 2)
    assert len(orbits) == 2
    sizes = sorted(len(o.orbit) for o in orbits)
    assert sizes == [1, 1]
    zero = [o for o in orbits if o.is_zero()][0]
    assert len(zero.stabilizer) == 32  # Z(id) = P_I(1,m)


def test_clifford_orbits_f3():
    orbits = clifford_orbits(I11, 1, 2, 3)
    assert sum(len(o.orbit) for o in orbits) == 3
    nonzero = [o for o in orbits if not o.is_zero()]
    assert len(nonzero) == 1 and len(nonzero[0].orbit) == 2


def test_clifford_decomposition():
    assert clifford_decomposition_check(I11, 1, 2, 2)
    assert clifford_decomposition_check(I11, 1, 2, 3)


def test_orbit_normal_forms():
    rep, tag = orbit_normal_form((1,), I11, 3)
    assert rep == (1,) and tag["condition"] == "cond2"
    # rank-1 matrix in the (2,2) shape gives condition 1
    A = (1, 0, 0, 0)
    rep, tag = orbit_normal_form(A, Partition((2, 2)), 2)
    assert tag["condition"] == "cond1" and tag["t"] == 1
    certify_orbit_condition(A, Partition((2, 2)), 2)
    with pytest.raises(ValueError):
        orbit_normal_form((0,), I11, 2)


def test_nr_one_representative():
    # in the (n, 1) shape every nonzero orbit contains [1, 0, ..., 0]
    rep, _tag = orbit_normal_form((0, 1, 0), Partition((3, 1)), 2)
    assert rep == (1, 0, 0)


def test_trace_pairing():
    for p in (2, 3):
        for r in (1, 2, 3):
            for c in (1, 2, 3):
                assert trace_pairing_injective(r, c, p)


def test_u_eta_multiplicative_sample():
    chi = u_eta_character_n1(I11, 1, 2, 2)
    Z = chi.group
    for z1 in Z.elements[::7]:
        for z2 in Z.elements[::5]:
            assert chi.value_of(Z.mul(z1, z2)) == \
                chi.value_of(z1) * chi.value_of(z2)


def test_casselman_piece():
    varpi = IrrLabel(2, 1, 0)
    chi = casselman_u_i(varpi, 2, 2)
    assert chi.dim().integer_value() == 3
    assert inner_product(chi, chi) == 1
    assert chi == casselman_clifford_form(varpi, 2, 2)


def test_inertial_classes():
    assert len(level_zero_classes(2, 2)) == 2
    assert len(level_zero_classes(2, 3)) == 6
    a = make_class(3, [(1, IrrLabel(3, 1, 0)), (1, IrrLabel(3, 1, 1))])
    b = make_class(3, [(1, IrrLabel(3, 1, 1)), (1, IrrLabel(3, 1, 0))])
    assert inertial_eq(a, b)
    with pytest.raises(ValueError):
        make_class(2, [(2, IrrLabel(2, 2, 1))])  # not cuspidal


def test_twist_permutes_classes():
    chi = IrrLabel(3, 1, 1)  # the order-2 character
    classes = level_zero_classes(2, 3)
    twisted = [twist_class(t, chi) for t in classes]
    assert sorted(t.parts for t in twisted) == sorted(t.parts for t in classes)


def test_iwahori_identity():
    G = enumerate_gl(2, 2, 2)
    J1 = subgroup(G, ("P1m", I11, 2))
    J2 = subgroup(G, ("P", I11, 2))
    assert iwahori_induction_check(J1, J2, ClassFunction.trivial(J2), I11)
    # J1 = J2 degenerates to the identity
    assert iwahori_induction_check(J2, J2, ClassFunction.trivial(J2), I11)


def test_trivial_character_is_atypical_for_cuspidal_class():
    tau = build_tau_I(I11, [T2, T2], 2)
    table = character_table(tau.G)
    triv = [chi for chi in table.irreducibles
            if chi == ClassFunction.trivial(tau.G)][0]
    cusp = make_class(2, [(2, cuspidal_labels(2, 2)[0])])
    w = atypicality_witness(triv, cusp, 2)
    assert w is not None and w[0].describe() == "{(1, X0), (1, X0)}"


def test_main_theorem_gl2_z4():
    rep = verify_main_theorem(I11, [T2, T2], 2, 2)
    assert rep.passed
    assert len(rep.constituents) == 1
    assert rep.constituents[0]["dim"] == 3
    assert rep.constituents[0]["witness"] is not None


def test_main_theorem_single_block_vacuous():
    cusp = cuspidal_labels(2, 2)[0]
    rep = verify_main_theorem(Partition((2,)), [cusp], 2, 2)
    assert rep.passed and rep.checks.get("vacuous")


def test_corollary_gl2_z4():
    rep = verify_corollary(I11, [T2, T2], 2)
    assert rep.passed
    for entry in rep.typical:
        assert entry["constant"] and entry["witness"] is None


def test_report_json_is_stable():
    rep1 = verify_main_theorem(I11, [T2, T2], 2, 2)
    rep2 = verify_main_theorem(I11, [T2, T2], 2, 2)
    assert rep1.to_json() == rep2.to_json()
    assert '"schema": 1' in rep1.to_json()
