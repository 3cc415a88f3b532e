"""Character-theory layer, checked against independent small-group facts."""

from fractions import Fraction

from levelzero.chartheory import (ClassFunction, character_table,
                                  conjugacy_classes, decompose, induce,
                                  inner_product, parse_table, restrict,
                                  serialize_table)
from levelzero.ringmat import Partition, enumerate_gl, subgroup


def test_gl2_f2_table():
    # GL_2(F_2) is symmetric group S_3: three classes, dims 1,1,2
    G = enumerate_gl(2, 2, 1)
    cc = conjugacy_classes(G)
    assert cc.r == 3
    assert sorted(cc.sizes) == [1, 2, 3]
    table = character_table(G)
    assert table.dims() == [1, 1, 2]
    table.verify(full=True)


def _derived_subgroup_order(G):
    gens = {G.mul(G.mul(g, h), G.inv(G.mul(h, g)))
            for g in G.elements for h in G.elements}
    closure = set(gens)
    frontier = list(closure)
    while frontier:
        nxt = []
        for a in frontier:
            for b in gens:
                c = G.mul(a, b)
                if c not in closure:
                    closure.add(c)
                    nxt.append(c)
        frontier = nxt
    return len(closure)


def test_linear_character_count_is_abelianization():
    # independent oracle: degree-1 characters are characters of G/[G,G]
    for p in (2, 3):
        G = enumerate_gl(2, p, 1)
        table = character_table(G)
        linear = sum(1 for d in table.dims() if d == 1)
        assert linear == G.order // _derived_subgroup_order(G)


def test_table_count_equals_class_count():
    for n, p, m in ((2, 2, 1), (2, 3, 1), (2, 2, 2)):
        G = enumerate_gl(n, p, m)
        table = character_table(G)
        assert table.r == conjugacy_classes(G).r
        assert sum(d * d for d in table.dims()) == G.order


def test_regular_character():
    G = enumerate_gl(2, 3, 1)
    table = character_table(G)
    dec = decompose(ClassFunction.regular(G), table)
    assert dec.as_ints() == table.dims()


def test_frobenius_reciprocity():
    G = enumerate_gl(2, 2, 2)
    B = subgroup(G, ("borel", 1))
    triv = ClassFunction.trivial(B)
    ind = induce(B, triv, G)
    assert ind.dim().integer_value() == G.order // B.order
    for chi in character_table(G).irreducibles:
        lhs = inner_product(ind, chi)
        rhs = inner_product(triv, restrict(chi, B))
        assert lhs == rhs
    # <ind 1, 1> counts double cosets; for the trivial character it is >= 1
    assert inner_product(ind, ClassFunction.trivial(G)) >= 1


def test_central_values_are_roots_of_unity_times_dim():
    G = enumerate_gl(2, 3, 1)
    table = character_table(G)
    z = (2, 0, 0, 2)  # the nontrivial central element
    for chi in table.irreducibles:
        v = chi.value_of(z) * chi.value_of(z).conj()
        assert v == chi.dim() * chi.dim()


def test_serialization_round_trip():
    G = enumerate_gl(2, 3, 1)
    table = character_table(G)
    text = serialize_table(table)
    again = parse_table(text, G)
    assert serialize_table(again) == text
    for a, b in zip(table.irreducibles, again.irreducibles):
        assert a == b


def test_inner_product_exact():
    G = enumerate_gl(2, 2, 1)
    table = character_table(G)
    chi = table.irreducibles[-1]  # the 2-dimensional one
    assert inner_product(chi, chi) == Fraction(1)
    assert inner_product(chi * chi, ClassFunction.trivial(G)) == 1
