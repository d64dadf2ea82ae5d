import itertools

import pytest

from gpdcov.groups import (FiniteGroup, Subgroup, all_homomorphisms,
                           find_isomorphism, generating_set, is_isomorphic)


def brute_force_subgroups(g):
    """Oracle: test every subset of the elements for closure."""
    out = []
    for size in range(1, g.order + 1):
        for subset in itertools.combinations(range(g.order), size):
            sset = set(subset)
            if g.identity not in sset:
                continue
            if any(g.inverse(a) not in sset for a in subset):
                continue
            if any(g.mult(a, b) not in sset
                   for a in subset for b in subset):
                continue
            out.append(tuple(subset))
    return sorted(out, key=lambda s: (len(s), s))


def test_rejects_broken_tables():
    with pytest.raises(ValueError):
        FiniteGroup([[0, 1], [1, 1]])  # 1 has no inverse
    with pytest.raises(ValueError):
        FiniteGroup([[1, 0], [1, 0]])  # no identity
    # a magma that is not associative
    with pytest.raises(ValueError):
        FiniteGroup([[0, 1, 2], [1, 2, 0], [2, 1, 0]])


def test_cyclic_structure():
    g = FiniteGroup.cyclic(4)
    assert g.order == 4 and g.identity == 0
    assert g.mult(3, 2) == 1 and g.inverse(1) == 3
    assert g.element_order(1) == 4 and g.element_order(2) == 2
    assert g.is_abelian()


def test_symmetric_structure():
    s3 = FiniteGroup.symmetric(3)
    assert s3.order == 6 and not s3.is_abelian()
    assert s3.names[s3.identity] == "e"
    a = s3.index_of_name("(12)")
    b = s3.index_of_name("(123)")
    assert s3.element_order(a) == 2 and s3.element_order(b) == 3
    # (12)∘(123) applies (123) first: 1->2->1, 2->3, 3->1->2 = (23)
    assert s3.names[s3.mult(a, b)] == "(23)"


@pytest.mark.parametrize("group,expected_orders", [
    (FiniteGroup.trivial(), [1]),
    (FiniteGroup.cyclic(4), [1, 2, 4]),
    (FiniteGroup.symmetric(3), [1, 2, 2, 2, 3, 6]),
])
def test_subgroup_enumeration_vs_brute_force(group, expected_orders):
    subs = group.subgroups()
    assert [s.order for s in subs] == expected_orders
    assert [s.elements for s in subs] == brute_force_subgroups(group)


def test_subgroup_enumeration_bound():
    with pytest.raises(ValueError):
        FiniteGroup.cyclic(5).subgroups(max_order=4)


def test_subgroup_validation():
    g = FiniteGroup.cyclic(4)
    with pytest.raises(ValueError):
        Subgroup(g, [0, 1])  # not closed
    with pytest.raises(ValueError):
        Subgroup(g, [2])  # missing identity


def test_normality_and_normalizers():
    c4 = FiniteGroup.cyclic(4)
    for sub in c4.subgroups():
        assert sub.is_normal()
    s3 = FiniteGroup.symmetric(3)
    flip = s3.generated_subgroup([s3.index_of_name("(12)")])
    assert not flip.is_normal()
    # oracle: conjugate by all six elements
    keepers = [x for x in range(6)
               if {s3.mult(s3.mult(x, h), s3.inverse(x))
                   for h in flip.elements} == set(flip.elements)]
    assert flip.normalizer().elements == tuple(sorted(keepers))
    assert flip.normalizer().elements == flip.elements
    alt = s3.generated_subgroup([s3.index_of_name("(123)")])
    assert alt.is_normal() and alt.index == 2


def test_normalizer_properties():
    s3 = FiniteGroup.symmetric(3)
    for sub in s3.subgroups():
        norm = sub.normalizer()
        assert set(sub.elements) <= set(norm.elements)
        inside = Subgroup(norm.as_group(),
                          [norm.elements.index(k) for k in sub.elements])
        assert inside.is_normal()


def test_cosets_index_quotient():
    c4 = FiniteGroup.cyclic(4)
    whole = c4.full_subgroup()
    assert whole.right_cosets() == ((0, 1, 2, 3),)
    assert whole.quotient().order == 1

    half = c4.subgroup([0, 2])
    assert half.index == 2
    assert half.right_cosets() == ((0, 2), (1, 3))
    q = half.quotient()
    assert find_isomorphism(q, FiniteGroup.cyclic(2)) is not None

    s3 = FiniteGroup.symmetric(3)
    alt = s3.generated_subgroup([s3.index_of_name("(123)")])
    assert alt.quotient().order == 2
    flip = s3.generated_subgroup([s3.index_of_name("(12)")])
    with pytest.raises(ValueError):
        flip.quotient()


def test_generated_subgroups():
    c4 = FiniteGroup.cyclic(4)
    assert c4.generated_subgroup([]).elements == (0,)
    assert c4.generated_subgroup([1]).elements == (0, 1, 2, 3)
    s3 = FiniteGroup.symmetric(3)
    gen = s3.generated_subgroup(
        [s3.index_of_name("(12)"), s3.index_of_name("(123)")])
    assert gen.order == 6


@pytest.mark.parametrize("group", [FiniteGroup.cyclic(4),
                                   FiniteGroup.symmetric(3)])
def test_lagrange_and_lattice_closure(group):
    subs = group.subgroups()
    keys = {s.elements for s in subs}
    for s in subs:
        assert group.order % s.order == 0
        assert s.index * s.order == group.order
        for t in subs:
            assert s.intersection(t).elements in keys
            assert s.join(t).elements in keys


def test_homomorphism_enumeration():
    c4 = FiniteGroup.cyclic(4)
    endos = list(all_homomorphisms(c4, c4))
    # multiplication by 0, 1, 2, 3
    assert len(endos) == 4
    for f in endos:
        assert f[0] == 0
        assert all(f[c4.mult(a, b)] == c4.mult(f[a], f[b])
                   for a in range(4) for b in range(4))
    s3 = FiniteGroup.symmetric(3)
    assert find_isomorphism(s3, s3) is not None
    assert not is_isomorphic(c4, FiniteGroup.cyclic(5))
    klein = FiniteGroup([[0, 1, 2, 3], [1, 0, 3, 2],
                         [2, 3, 0, 1], [3, 2, 1, 0]])
    assert not is_isomorphic(c4, klein)


def test_generating_sets():
    assert generating_set(FiniteGroup.trivial()) == ()
    assert len(generating_set(FiniteGroup.cyclic(4))) == 1
    s3 = FiniteGroup.symmetric(3)
    gens = generating_set(s3)
    assert s3.generated_subgroup(gens).order == 6


def test_subgroup_as_group_round_trip():
    s3 = FiniteGroup.symmetric(3)
    alt = s3.generated_subgroup([s3.index_of_name("(123)")])
    g = alt.as_group()
    assert g.order == 3
    assert find_isomorphism(g, FiniteGroup.cyclic(3)) is not None
