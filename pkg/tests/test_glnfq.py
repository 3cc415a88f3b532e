"""Residue-field layer: induction ring, cuspidals, derivatives."""

import pytest

from levelzero.glnfq import (D_map, IrrLabel, ZElem, all_labels,
                             central_character, cuspidal_labels,
                             cuspidal_support, derivative,
                             gl2_cuspidals_with_central, hc_product,
                             is_cuspidal, unit_label, x_term, zelem_from_text,
                             zelem_to_text)


def test_label_dims():
    assert unit_label(2).dim() == 1
    dims = sorted(lab.dim() for lab in all_labels(2, 3))
    assert dims == [1, 1, 2, 2, 2, 3, 3, 4]


def test_cuspidal_counts():
    # GL_1: everything is cuspidal; GL_2(F_q) has q(q-1)/2 cuspidals
    assert len(cuspidal_labels(1, 3)) == 2
    assert len(cuspidal_labels(2, 2)) == 1
    assert len(cuspidal_labels(2, 3)) == 3
    # GL_3(F_2): (q^3 - q)/3 = 2
    assert len(cuspidal_labels(3, 2)) == 2
    for lab in cuspidal_labels(2, 3):
        assert lab.dim() == 2  # q - 1


def test_hc_product_dimension():
    # dim(a . b) = [G : P] dim(a) dim(b), here [GL_2 : B] = q + 1
    for q in (2, 3):
        chis = all_labels(1, q)
        x = hc_product(ZElem.of(chis[0]), ZElem.of(chis[0]))
        assert x.dim() == (q + 1) * 1 * 1
        assert x.grades() == [2]


def test_hc_product_commutative():
    q = 3
    a, b = all_labels(1, q)[0], all_labels(1, q)[1]
    assert ZElem.of(a) * ZElem.of(b) == ZElem.of(b) * ZElem.of(a)


def test_cuspidal_support():
    q = 2
    cusp = cuspidal_labels(2, q)[0]
    supp = cuspidal_support(cusp)
    assert supp.parts == ((2, cusp),)
    chi = all_labels(1, q)[0]
    steinberg = [lab for lab, c in (ZElem.of(chi) * ZElem.of(chi)).coeffs.items()
                 if lab.dim() == q]
    supp2 = cuspidal_support(steinberg[0])
    assert [k for k, _ in supp2.parts] == [1, 1]


def test_derivative_of_cuspidal():
    for n, q in ((2, 2), (2, 3), (3, 2)):
        for cusp in cuspidal_labels(n, q):
            assert derivative(cusp, 0) == ZElem.of(cusp)
            assert derivative(cusp, n) == ZElem.unit(q)
            for k in range(1, n):
                assert derivative(cusp, k).is_zero()


def test_derivative_principal_series():
    # D(chi_1 . ... . chi_n) = prod (chi_i + 1)
    q = 2
    chi = all_labels(1, q)[0]
    e = ZElem.of(chi)
    prod2 = e * e
    expect = (e + ZElem.unit(q)) * (e + ZElem.unit(q))
    assert D_map(prod2) == expect


def test_d_multiplicative():
    q = 2
    chi = all_labels(1, q)[0]
    cusp = cuspidal_labels(2, q)[0]
    a, b = ZElem.of(chi), ZElem.of(cusp)
    assert D_map(a * b) == D_map(a) * D_map(b)


def test_x_term():
    q = 3
    chis = [all_labels(1, q)[0], all_labels(1, q)[1]]
    x0 = x_term(chis, 0)
    assert x0.dim() == (q + 1)


def test_central_characters_cover():
    from levelzero.chartheory import conjugacy_classes
    from levelzero.glnfq import glq
    for q in (2, 3):
        cc1 = conjugacy_classes(glq(1, q))
        for chi in all_labels(1, q):
            vals = {a: chi.char().values[cc1.class_of[(a,)]]
                    for a in range(1, q)}
            found = gl2_cuspidals_with_central(q, chi)
            assert found, "no cuspidal with central character %s" % chi.name()
            for lab in found:
                assert is_cuspidal(lab)
                assert central_character(lab) == vals


def test_zelem_text_round_trip():
    q = 3
    chi = all_labels(1, q)[0]
    x = ZElem.of(chi) * ZElem.of(chi) + 2 * ZElem.unit(q)
    assert zelem_from_text(zelem_to_text(x)) == x


def test_grade_guard():
    from levelzero.ringmat import BudgetExceeded
    with pytest.raises(BudgetExceeded):
        all_labels(5, 3)
