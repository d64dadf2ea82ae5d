import pytest

from gpdcov import (Covering, CoveringFailure, FiniteGroup,
                    GroupoidMorphism, all_morphisms, check_covering,
                    compose_morphisms, covering_morphisms,
                    equivalent_coverings, fiber, fiber_transport, fold,
                    group_groupoid, is_weak_equivalence, lift_arrow,
                    lift_morphism, monodromy, omega, pushforward_vertex,
                    require_covering, vertex_group)
from gpdcov.covering import find_covering_isomorphism


def test_identity_is_covering(c4):
    out = check_covering(GroupoidMorphism.identity(c4))
    assert isinstance(out, Covering)
    assert fold(out) == 1


def test_fold_map_is_covering(c4):
    om = omega(c4)
    out = check_covering(om.covering.morphism)
    assert isinstance(out, Covering)
    assert fold(out) == 2


def test_collapse_is_not_covering(i2, t1):
    collapse = GroupoidMorphism(i2, t1, (0, 0), (0, 0, 0, 0))
    out = check_covering(collapse)
    assert isinstance(out, CoveringFailure)
    assert out.at_object == 0
    assert (out.total_star_size, out.base_star_size) == (2, 1)
    with pytest.raises(ValueError):
        require_covering(collapse)


def test_check_covering_rejects_nonfunctorial(c4, t1):
    bad = GroupoidMorphism(c4, c4, (0,), (0, 2, 1, 3))
    with pytest.raises(ValueError):
        check_covering(bad)


def test_fiber_examples(id_c4, cov02, c4):
    fb = fiber(id_c4, 0)
    assert fb.objects == (0,) and len(fb.arrows) == 1  # only the identity
    om = omega(c4)
    fb2 = fiber(om.covering, 0)
    assert len(fb2.objects) == 2
    assert all(len(fb2.groupoid.loops(x)) == 1
               for x in fb2.groupoid.objects)
    assert len(fiber(cov02, 0).objects) == 2
    with pytest.raises(ValueError):
        fiber(cov02, 9)


def test_fiber_transport_identity(cov02, c4):
    tr = fiber_transport(cov02, c4.identity[0])
    assert all(tr.obj_map[x] == x for x in tr.obj_map)
    assert all(tr.arr_map[a] == a for a in tr.arr_map)


def test_fiber_transport_generator_cycles(c4_univ):
    # objects of the universal total are the singleton classes of the
    # four loops, in arrow order; transporting along the generator shifts
    # every class down by one
    tr = fiber_transport(c4_univ, 1)
    assert tr.obj_map == {b: (b + 3) % 4 for b in range(4)}


def test_fiber_transport_contravariant(c4_univ, c4):
    for f in range(4):
        for g in range(4):
            tf = fiber_transport(c4_univ, f)
            tg = fiber_transport(c4_univ, g)
            tfg = fiber_transport(c4_univ, c4.compose_arrows(f, g))
            for x in tfg.obj_map:
                assert tfg.obj_map[x] == tg.obj_map[tf.obj_map[x]]


def test_transport_then_inverse_is_identity(cov02, c4):
    tr = fiber_transport(cov02, 1)
    back = fiber_transport(cov02, c4.inverse[1])
    for x in tr.obj_map:
        assert back.obj_map[tr.obj_map[x]] == x


def test_lift_arrow(c4_univ, cov02, c4):
    # identity lifts to the identity
    for x in c4_univ.total.objects:
        e = c4.identity[0]
        assert lift_arrow(c4_univ, e, x) == c4_univ.total.identity[x]
    # uniqueness oracle: scan the star directly
    for at in c4_univ.total.objects:
        for a in range(4):
            lifted = lift_arrow(c4_univ, a, at)
            matches = [b for b in c4_univ.total.arrows
                       if c4_univ.total.cod[b] == at
                       and c4_univ.morphism.arr_map[b] == a]
            assert matches == [lifted]
    # the loop 2 lifts to loops on the half cover
    for at in cov02.total.objects:
        lifted = lift_arrow(cov02, 2, at)
        assert cov02.total.dom[lifted] == at
    with pytest.raises(ValueError):
        lift_arrow(cov02, 1, 99)


def test_pushforward_examples(c4_univ, id_c4, cov02):
    assert pushforward_vertex(c4_univ, 0).elements == (0,)
    assert pushforward_vertex(id_c4, 0).elements == (0, 1, 2, 3)
    got = pushforward_vertex(cov02, cov02.marked_object)
    arrows = tuple(got.parent.arrows[k] for k in got.elements)
    assert arrows == (0, 2)


def test_lift_morphism_examples(c4, c4_univ, cov02, t1):
    # lifting the projection against itself with the identity seed
    m = lift_morphism(cov02, cov02.morphism, cov02.marked_object,
                      cov02.marked_object)
    assert m == GroupoidMorphism.identity(cov02.total)
    # constant morphism from the point lifts everywhere
    const = GroupoidMorphism(t1, c4, (0,), (c4.identity[0],))
    for seed in c4_univ.total.objects:
        got = lift_morphism(c4_univ, const, 0, seed)
        assert got is not None and got.obj_map == (seed,)
    # the identity of the base does not lift to a proper cover
    assert lift_morphism(cov02, GroupoidMorphism.identity(c4), 0,
                         cov02.marked_object) is None
    with pytest.raises(ValueError):
        lift_morphism(cov02, GroupoidMorphism.identity(c4), 0, 99)


def test_lift_morphism_requires_connected_source(c4, cov02):
    from gpdcov import disjoint_union
    two = disjoint_union(c4, c4)
    m = GroupoidMorphism(two, c4, (0, 0), tuple(range(4)) + tuple(range(4)))
    with pytest.raises(ValueError):
        lift_morphism(cov02, m, 0, 0)


def test_monodromy(id_c4, c4_univ, cov02):
    act = monodromy(id_c4, 0)
    assert act.carrier == (0,)
    assert act.stabilizer(0).order == 4
    act = monodromy(c4_univ, 0)
    assert len(act.carrier) == 4 and act.is_transitive()
    # regular right action: the table is the right translation table
    for x in act.carrier:
        assert sorted(act.act(x, k) for k in range(4)) == [0, 1, 2, 3]
        assert act.stabilizer(x).order == 1
    act = monodromy(cov02, 0)
    assert len(act.orbit(act.carrier[0])) == 2
    assert act.stabilizer(cov02.marked_object).elements == (0, 2)


def test_orbit_stabilizer_product(s3_covers):
    for cov in s3_covers.values():
        act = monodromy(cov, 0)
        for x in act.carrier:
            assert len(act.orbit(x)) * act.stabilizer(x).order == 6


def test_fold_equals_index(s3_covers, cov02):
    for elems, cov in s3_covers.items():
        assert fold(cov) == 6 // len(elems)
    assert fold(cov02) == 2


def test_fold_preconditions(c4):
    from gpdcov import disjoint_union
    two = disjoint_union(c4, c4)
    bad = require_covering(GroupoidMorphism(
        c4, two, (0,), tuple(range(4))))
    with pytest.raises(ValueError):
        fold(bad)  # base disconnected


def test_weak_equivalence(c4, c4_univ, t1, i2):
    assert is_weak_equivalence(GroupoidMorphism.identity(c4))
    assert not is_weak_equivalence(c4_univ.morphism)
    incl = GroupoidMorphism(t1, i2, (0,), (i2.identity[0],))
    assert is_weak_equivalence(incl)


def test_weak_equivalence_plus_covering_is_iso(s3_covers, id_c4):
    for cov in s3_covers.values():
        assert is_weak_equivalence(cov.morphism) == \
            cov.morphism.is_bijective()
    assert is_weak_equivalence(id_c4.morphism)


def test_lifting_composites_composes_lifts(cov02, c4_univ, c4):
    # witnesses compose: the lift of f∘h into x is the lift of f into x
    # composed with the lift of h into its domain
    for cov in (cov02, c4_univ):
        for at in cov.total.objects:
            for f in c4.arrows:
                for h in c4.arrows:
                    lf = lift_arrow(cov, f, at)
                    lh = lift_arrow(cov, h, cov.total.dom[lf])
                    combined = cov.total.compose_arrows(lf, lh)
                    assert combined == lift_arrow(
                        cov, c4.compose_arrows(f, h), at)


def test_arrow_between_coverings_is_covering(c4, c4_univ, cov02,
                                             s3_univ, s3_covers):
    triangles = [(cov02, c4_univ)]
    triangles += [(cov, s3_univ) for cov in s3_covers.values()]
    for below, above in triangles:
        seed = next(x for x in below.total.objects
                    if below.morphism.obj_map[x] ==
                    above.morphism.obj_map[above.marked_object])
        r = lift_morphism(below, above.morphism, above.marked_object,
                          seed)
        assert r is not None
        assert compose_morphisms(below.morphism, r) == above.morphism
        assert isinstance(check_covering(r), Covering)


def test_connected_coverings_are_epi(c4, cov02):
    target = group_groupoid(FiniteGroup.symmetric(3))
    seen = {}
    for m in all_morphisms(c4, target):
        key = tuple(compose_morphisms(m, cov02.morphism).arr_map)
        assert key not in seen or seen[key] == (m.obj_map, m.arr_map)
        seen[key] = (m.obj_map, m.arr_map)


def test_covering_morphisms_counts(id_c4, cov02, c4_univ):
    # nothing maps the identity covering into a proper cover
    assert covering_morphisms(id_c4, cov02) == []
    # exactly one projection from the half cover down to the identity
    assert len(covering_morphisms(cov02, id_c4)) == 1
    # the universal cover maps onto the half cover once per fiber point
    assert len(covering_morphisms(c4_univ, cov02)) == 2
    assert len(covering_morphisms(c4_univ, c4_univ)) == 4


def test_equivalence_self_and_fold_invariant(cov02, c4_univ):
    pair = equivalent_coverings(cov02, cov02)
    assert pair is not None
    assert pair.phi == GroupoidMorphism.identity(cov02.total)
    assert equivalent_coverings(cov02, c4_univ) is None  # folds differ


def test_equivalence_with_base_isomorphism():
    # same group presented with permuted element ids: covers correspond
    # through a nontrivial base isomorphism
    c4 = FiniteGroup.cyclic(4)
    sigma = (0, 1, 3, 2)
    inv = tuple(sigma.index(i) for i in range(4))
    table = [[sigma[c4.mult(inv[i], inv[j])] for j in range(4)]
             for i in range(4)]
    other = FiniteGroup(table)
    g1 = group_groupoid(c4)
    g2 = group_groupoid(other)
    assert g1 != g2
    from gpdcov import covering_from_subgroup
    vg1 = vertex_group(g1, 0)
    vg2 = vertex_group(g2, 0)
    cov1 = covering_from_subgroup(g1, 0, vg1.subgroup([0, 2]))
    cov2 = covering_from_subgroup(g2, 0, vg2.subgroup([0, 3]))
    with pytest.raises(ValueError):
        equivalent_coverings(cov1, cov2, fixed_base=True)
    pair = equivalent_coverings(cov1, cov2, fixed_base=False)
    assert pair is not None
    assert compose_morphisms(cov1.morphism, pair.phi) == \
        compose_morphisms(pair.psi, cov2.morphism)


def test_find_covering_isomorphism_disconnected(c4):
    om1 = omega(c4).covering
    om2 = omega(c4).covering
    iso = find_covering_isomorphism(om1, om2)
    assert iso is not None
    assert compose_morphisms(om2.morphism, iso) == om1.morphism


def test_pushforward_injectivity_guard(c4, t1):
    # a non-covering morphism with a non-injective loop map must be
    # caught, not silently accepted
    collapse = GroupoidMorphism(c4, t1, (0,), (0, 0, 0, 0))
    fake = Covering(collapse, [{0: 0}])
    from gpdcov.errors import TheoremViolation
    with pytest.raises(TheoremViolation):
        pushforward_vertex(fake, 0)
