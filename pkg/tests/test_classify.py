import pytest

from gpdcov import (GroupoidMorphism, build_lattice, classify_covering,
                    components, compose_morphisms, equivalent_coverings,
                    fibered_product, meet_covering, pullback_covering,
                    pushout_covering, trivial_groupoid, universal_cover,
                    vertex_group)


@pytest.fixture(scope="module")
def lat_c4(c4):
    return build_lattice(c4, 0)


@pytest.fixture(scope="module")
def lat_s3(s3):
    return build_lattice(s3, 0)


def test_pullback_along_identity(cov02, c4):
    pb = pullback_covering(cov02, GroupoidMorphism.identity(c4))
    assert equivalent_coverings(cov02, pb.covering) is not None
    # the pullback square commutes
    assert compose_morphisms(cov02.morphism, pb.to_total) == \
        compose_morphisms(GroupoidMorphism.identity(c4),
                          pb.covering.morphism)


def test_pullback_of_universal_by_itself(c4_univ):
    pb = pullback_covering(c4_univ, c4_univ.morphism)
    assert len(components(pb.covering.total)) == 4
    assert pb.covering.total.n_objects == 16


def test_pullback_of_classifier_doubles(c4, t1):
    from gpdcov import omega
    om = omega(c4)
    incl = GroupoidMorphism(t1, c4, (0,), (c4.identity[0],))
    pb = pullback_covering(om.covering, incl)
    parts = components(pb.covering.total)
    assert len(parts) == 2
    assert all(len(blk) == 1 for blk in parts.blocks)


def test_fibered_product_base_check(cov02, s3_covers):
    other = next(iter(s3_covers.values()))
    with pytest.raises(ValueError):
        fibered_product(cov02, other)


def test_lattice_c4_chain(lat_c4):
    assert len(lat_c4.nodes) == 3
    assert [n.fold for n in lat_c4.nodes] == [4, 2, 1]
    assert all(n.regular for n in lat_c4.nodes)
    n = len(lat_c4.nodes)
    for i in range(n):
        for j in range(n):
            assert lat_c4.subgroup_leq(i, j) or lat_c4.subgroup_leq(j, i)


def test_lattice_t1_single_node(t1):
    lat = build_lattice(t1, 0)
    assert len(lat.nodes) == 1
    assert lat.nodes[0].fold == 1 and lat.nodes[0].regular


def test_lattice_s3_shape(lat_s3):
    assert len(lat_s3.nodes) == 6
    assert sorted(n.fold for n in lat_s3.nodes) == [1, 2, 3, 3, 3, 6]
    assert sum(1 for n in lat_s3.nodes if not n.regular) == 3
    non_regular_folds = {n.fold for n in lat_s3.nodes if not n.regular}
    assert non_regular_folds == {3}


def test_lattice_order_reversal(lat_s3):
    n = len(lat_s3.nodes)
    for i in range(n):
        for j in range(n):
            sub_i = set(lat_s3.nodes[i].subgroup.elements)
            sub_j = set(lat_s3.nodes[j].subgroup.elements)
            assert lat_s3.covering_leq(i, j) == (sub_j <= sub_i)


def test_lattice_fold_is_index(lat_s3):
    for node in lat_s3.nodes:
        assert node.fold == \
            lat_s3.cov_group.order // node.subgroup.order


def test_classify_external_covers(lat_s3, s3_covers, s3):
    vg = vertex_group(s3, 0)
    for sub in vg.subgroups():
        cov = s3_covers[sub.elements]
        node = classify_covering(lat_s3, cov)
        assert node.fold == sub.index
        pair = equivalent_coverings(node.covering, cov)
        assert pair is not None
        # the equivalence really commutes over the base
        assert compose_morphisms(node.covering.morphism, pair.phi) == \
            compose_morphisms(pair.psi, cov.morphism)


def test_meet_examples(lat_s3):
    top = lat_s3.nodes[-1]  # whole subgroup = identity covering class
    assert top.subgroup.order == 6 and top.fold == 1
    for node in lat_s3.nodes:
        assert meet_covering(top, node) is node
        assert meet_covering(node, node) is node
    order2 = [n for n in lat_s3.nodes if n.subgroup.order == 2]
    bottom = lat_s3.nodes[0]
    for a in order2:
        for b in order2:
            if a is not b:
                assert meet_covering(a, b) is bottom


def test_join_via_pushout(lat_s3, s3):
    from gpdcov import find_groupoid_isomorphism
    order2 = [n for n in lat_s3.nodes if n.subgroup.order == 2]
    a, b = order2[0], order2[1]
    push = pushout_covering(a.orbit.covering, b.orbit.covering)
    # two distinct flips generate everything: the pushout is the
    # identity covering class, i.e. the base itself
    assert push.quotient.n_objects == 1
    assert find_groupoid_isomorphism(push.quotient, s3) is not None
    # legs commute with the orbit morphisms
    assert compose_morphisms(push.leg_first, a.orbit.projection) == \
        push.orbit_covering.morphism
    assert compose_morphisms(push.leg_second, b.orbit.projection) == \
        push.orbit_covering.morphism


def test_pushout_with_itself(lat_c4):
    mid = lat_c4.nodes[1]
    push = pushout_covering(mid.orbit.covering, mid.orbit.covering)
    assert push.quotient == mid.orbit.quotient


def test_pushout_with_whole_group(lat_c4):
    mid, top = lat_c4.nodes[1], lat_c4.nodes[2]
    push = pushout_covering(mid.orbit.covering, top.orbit.covering)
    assert push.quotient.n_objects == 1  # identity covering class


def test_pushout_requires_common_universal(lat_c4, lat_s3):
    with pytest.raises(ValueError):
        pushout_covering(lat_c4.nodes[1].orbit.covering,
                         lat_s3.nodes[1].orbit.covering)


def test_round_trip_through_gamma(lat_s3, s3_covers, s3):
    # delta(gamma(cover)) is equivalent to the cover: the round trip of
    # the main correspondence on external covers
    vg = vertex_group(s3, 0)
    half = vg.generated_subgroup([vg.index_of_name("(12)")])
    cov = s3_covers[half.elements]
    node = classify_covering(lat_s3, cov)
    assert equivalent_coverings(node.covering, cov) is not None


def test_quotient_vertex_groups_match_subgroups(lat_s3):
    from gpdcov.groups import find_isomorphism
    for node in lat_s3.nodes:
        vg = vertex_group(node.covering.total,
                          node.covering.marked_object)
        assert find_isomorphism(vg, node.subgroup.as_group()) is not None
