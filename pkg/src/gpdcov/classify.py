"""Equivalence classes of connected coverings and the Galois lattice.

Over a connected base G with universal covering u and covering
transformation group Γ = Cov(total(u)/G), the connected coverings of G up
to equivalence correspond bijectively — and order-reversingly — to the
subgroups of Γ: a subgroup Π goes to the quotient covering
total(u)/Π -> G, and a covering comes back via the transformations of the
projection from total(u) onto it.

:func:`build_lattice` constructs one node per subgroup and then verifies
the whole correspondence geometrically: round trips, order reversal,
meet/join against pullback components and pushouts, fold = index, and
regularity = normality.  Any failure raises :class:`TheoremViolation`
naming the clause, because each of these is a theorem.

Naming note: on the subgroup side, meet = intersection and join =
generated subgroup.  Geometrically the meet corresponds to the marked
component of the fibered product over G, and the join to the pushout
under the universal cover.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import TheoremViolation
from .covering import (Covering, GroupoidMorphism, check_covering,
                       components, compose_morphisms, equivalent_coverings,
                       fold, lift_morphism)
from .construct import OrbitGroupoid, orbit_groupoid, universal_cover
from .groupoid import (FiniteGroupoid, component_subgroupoid, is_connected,
                       vertex_group)
from .groups import Subgroup, find_isomorphism
from .transform import covering_transformations, is_regular


@dataclass(frozen=True)
class PullbackCovering:
    """Pullback of a covering p along a morphism f into its base: a
    covering over f's source whose objects/arrows are the matching pairs."""
    covering: Covering            # projection onto f's source
    to_total: GroupoidMorphism    # projection onto total(p); covers f
    obj_pairs: tuple              # (object of f.source, object of total(p))
    arr_pairs: tuple


def pullback_covering(p: Covering, f: GroupoidMorphism) -> PullbackCovering:
    if f.target != p.base:
        raise ValueError("morphism must land in the covering's base")
    h = f.source
    t = p.total
    obj_pairs = tuple((x, y) for x in h.objects for y in t.objects
                      if f.obj_map[x] == p.morphism.obj_map[y])
    arr_pairs = tuple((a, b) for a in h.arrows for b in t.arrows
                      if f.arr_map[a] == p.morphism.arr_map[b])
    opos = {pair: i for i, pair in enumerate(obj_pairs)}
    apos = {pair: i for i, pair in enumerate(arr_pairs)}
    dom = tuple(opos[(h.dom[a], t.dom[b])] for a, b in arr_pairs)
    cod = tuple(opos[(h.cod[a], t.cod[b])] for a, b in arr_pairs)
    identity = tuple(apos[(h.identity[x], t.identity[y])]
                     for x, y in obj_pairs)
    inverse = tuple(apos[(h.inverse[a], t.inverse[b])] for a, b in arr_pairs)
    compose = {}
    for i, (a1, b1) in enumerate(arr_pairs):
        for j, (a2, b2) in enumerate(arr_pairs):
            if h.cod[a2] == h.dom[a1] and t.cod[b2] == t.dom[b1]:
                compose[(i, j)] = apos[(h.compose_arrows(a1, a2),
                                        t.compose_arrows(b1, b2))]
    gpd = FiniteGroupoid(
        len(obj_pairs), dom, cod, identity, compose, inverse,
        obj_labels=tuple(f"({h.obj_labels[x]},{t.obj_labels[y]})"
                         for x, y in obj_pairs),
        arr_labels=tuple(f"({h.arr_labels[a]},{t.arr_labels[b]})"
                         for a, b in arr_pairs))
    proj1 = GroupoidMorphism(gpd, h,
                             tuple(x for x, _ in obj_pairs),
                             tuple(a for a, _ in arr_pairs))
    proj2 = GroupoidMorphism(gpd, t,
                             tuple(y for _, y in obj_pairs),
                             tuple(b for _, b in arr_pairs))
    cov = check_covering(proj1)
    if not isinstance(cov, Covering):
        raise TheoremViolation(
            f"pullback projection failed the covering check: {cov.message}")
    return PullbackCovering(covering=cov, to_total=proj2,
                            obj_pairs=obj_pairs, arr_pairs=arr_pairs)


@dataclass(frozen=True)
class FiberedProduct:
    """The product of two coverings of the same base in the category of
    coverings: the pullback over the base with its two projections."""
    covering: Covering            # over the common base
    proj_first: GroupoidMorphism
    proj_second: GroupoidMorphism
    obj_pairs: tuple
    arr_pairs: tuple


def fibered_product(p: Covering, q: Covering) -> FiberedProduct:
    if p.base != q.base:
        raise ValueError("coverings must share a base")
    pb = pullback_covering(p, q.morphism)
    over_base = compose_morphisms(q.morphism, pb.covering.morphism)
    cov = check_covering(over_base)
    if not isinstance(cov, Covering):
        raise TheoremViolation(
            f"fibered product is not a covering of the base: {cov.message}")
    return FiberedProduct(covering=cov,
                          proj_first=pb.to_total,
                          proj_second=pb.covering.morphism,
                          obj_pairs=pb.obj_pairs,
                          arr_pairs=pb.arr_pairs)


@dataclass(frozen=True)
class PushoutResult:
    """Quotient of a common universal total by the group generated by two
    covering-transformation groups, with the induced maps from both
    quotients."""
    orbit_covering: Covering      # universal total -> pushout quotient
    quotient: FiniteGroupoid
    leg_first: GroupoidMorphism   # total(p') -> quotient
    leg_second: GroupoidMorphism  # total(q') -> quotient


def _induced_on_quotient(src_cov: Covering, dst_cov: Covering):
    """The morphism total(src_cov) -> total(dst_cov) sending each orbit to
    the orbit containing it, for two orbit morphisms from one groupoid."""
    src = src_cov.morphism
    dst = dst_cov.morphism
    obj_map = [None] * src.target.n_objects
    for x in src.source.objects:
        v = dst.obj_map[x]
        o = src.obj_map[x]
        if obj_map[o] is None:
            obj_map[o] = v
        elif obj_map[o] != v:
            raise ValueError("first quotient is not finer than the second")
    arr_map = [None] * src.target.n_arrows
    for a in src.source.arrows:
        v = dst.arr_map[a]
        o = src.arr_map[a]
        if arr_map[o] is None:
            arr_map[o] = v
        elif arr_map[o] != v:
            raise ValueError("first quotient is not finer than the second")
    m = GroupoidMorphism(src.target, dst.target, obj_map, arr_map)
    bad = m.functoriality_violations()
    if bad:
        raise TheoremViolation(f"induced quotient map not functorial: "
                               f"{bad[0]}")
    return m


def pushout_covering(p_orbit: Covering, q_orbit: Covering) -> PushoutResult:
    """Pushout of two orbit morphisms out of the same universal total:
    the quotient by the group generated by both transformation groups."""
    if p_orbit.total != q_orbit.total:
        raise ValueError("orbit morphisms must share their source")
    if not is_connected(p_orbit.total) \
            or len(p_orbit.total.loops(0)) != 1:
        raise ValueError("pushout requires orbit morphisms from a "
                         "universal (connected, simply connected) total")
    cov_p = covering_transformations(p_orbit)
    cov_q = covering_transformations(q_orbit)
    # close the union of the two automorphism sets under composition
    gens = list(cov_p.transformations) + list(cov_q.transformations)
    closed = {}
    for t in gens:
        closed[(t.obj_map, t.arr_map)] = t
    frontier = list(closed.values())
    while frontier:
        nxt = []
        for t1 in gens:
            for t2 in frontier:
                c = compose_morphisms(t1, t2)
                key = (c.obj_map, c.arr_map)
                if key not in closed:
                    closed[key] = c
                    nxt.append(c)
        frontier = nxt
    morphs = sorted(closed.values(), key=lambda t: t.obj_map)
    from .construct import GroupAction
    from .groups import FiniteGroup
    pos = {t.obj_map: i for i, t in enumerate(morphs)}
    table = tuple(
        tuple(pos[compose_morphisms(t1, t2).obj_map] for t2 in morphs)
        for t1 in morphs)
    group = FiniteGroup(table)
    action = GroupAction(group, p_orbit.total,
                         tuple(t.obj_map for t in morphs),
                         tuple(t.arr_map for t in morphs))
    orb = orbit_groupoid(action)
    return PushoutResult(
        orbit_covering=orb.covering,
        quotient=orb.quotient,
        leg_first=_induced_on_quotient(p_orbit, orb.covering),
        leg_second=_induced_on_quotient(q_orbit, orb.covering))


class CoveringClass:
    """One node of the lattice: the subgroup Π of Γ with its canonical
    quotient covering of the base and the orbit morphism from the
    universal total."""

    def __init__(self, subgroup: Subgroup, covering: Covering,
                 orbit: OrbitGroupoid, fold_count: int, regular: bool):
        self.subgroup = subgroup
        self.covering = covering
        self.orbit = orbit
        self.fold = fold_count
        self.regular = regular
        self.lattice = None  # filled by GaloisLattice

    def __repr__(self):
        return (f"CoveringClass(order={self.subgroup.order}, "
                f"fold={self.fold}, regular={self.regular})")


class GaloisLattice:
    """All covering classes over one base, indexed by the subgroups of the
    universal covering-transformation group, with both the subgroup order
    and the covering order available."""

    def __init__(self, base, base_object, universal, cov_group, nodes):
        self.base = base
        self.base_object = base_object
        self.universal = universal
        self.cov_group = cov_group
        self.nodes = tuple(nodes)
        self._by_subgroup = {n.subgroup.elements: i
                             for i, n in enumerate(self.nodes)}
        for n in self.nodes:
            n.lattice = self

    def __len__(self):
        return len(self.nodes)

    def node_for_subgroup(self, sub: Subgroup) -> CoveringClass:
        try:
            return self.nodes[self._by_subgroup[sub.elements]]
        except KeyError:
            raise ValueError("subgroup is not a node of this lattice") \
                from None

    def index_of(self, node: CoveringClass) -> int:
        return self._by_subgroup[node.subgroup.elements]

    def subgroup_leq(self, i: int, j: int) -> bool:
        """Subgroup inclusion Π_i ⊆ Π_j (top = identity covering)."""
        return set(self.nodes[i].subgroup.elements) <= \
            set(self.nodes[j].subgroup.elements)

    def covering_leq(self, i: int, j: int) -> bool:
        """The covering order: node_i ⪯ node_j iff node_j's quotient
        projects onto node_i's, i.e. Π_j ⊆ Π_i."""
        return self.subgroup_leq(j, i)

    def meet(self, i: int, j: int) -> int:
        sub = self.nodes[i].subgroup.intersection(self.nodes[j].subgroup)
        return self._by_subgroup[sub.elements]

    def join(self, i: int, j: int) -> int:
        sub = self.nodes[i].subgroup.join(self.nodes[j].subgroup)
        return self._by_subgroup[sub.elements]


def _quotient_to_base(universal: Covering, orb: OrbitGroupoid) -> Covering:
    """The covering quotient -> base induced by the universal projection
    (constant on orbits of covering transformations)."""
    proj = orb.projection
    base = universal.base
    obj_map = [None] * orb.quotient.n_objects
    for x in universal.total.objects:
        o = proj.obj_map[x]
        v = universal.morphism.obj_map[x]
        if obj_map[o] is None:
            obj_map[o] = v
        elif obj_map[o] != v:
            raise TheoremViolation(
                "universal projection is not constant on orbits")
    arr_map = [None] * orb.quotient.n_arrows
    for a in universal.total.arrows:
        o = proj.arr_map[a]
        v = universal.morphism.arr_map[a]
        if arr_map[o] is None:
            arr_map[o] = v
        elif arr_map[o] != v:
            raise TheoremViolation(
                "universal projection is not constant on arrow orbits")
    m = GroupoidMorphism(orb.quotient, base, obj_map, arr_map)
    cov = check_covering(m)
    if not isinstance(cov, Covering):
        raise TheoremViolation(
            f"quotient projection failed the covering check: {cov.message}")
    marked = universal.marked_object
    if marked is None:
        marked = 0
    cov.marked_object = proj.obj_map[marked]
    return cov


def classify_covering(lattice: GaloisLattice, q: Covering) -> CoveringClass:
    """The lattice node of an arbitrary connected covering of the base:
    lift the universal projection through q and read off the covering
    transformations of the lift."""
    if q.base != lattice.base:
        raise ValueError("covering does not live over the lattice base")
    if not is_connected(q.total):
        raise ValueError("classification applies to connected coverings")
    u = lattice.universal
    marked = u.marked_object if u.marked_object is not None else 0
    base_pt = u.morphism.obj_map[marked]
    seed = None
    for cand in q.total.objects:
        if q.morphism.obj_map[cand] == base_pt:
            seed = cand
            break
    if seed is None:
        raise TheoremViolation("connected covering misses a base object")
    r = lift_morphism(q, u.morphism, marked, seed)
    if r is None:
        raise TheoremViolation(
            "universal cover does not lift over a connected covering")
    r_cov = check_covering(r)
    if not isinstance(r_cov, Covering):
        raise TheoremViolation(
            f"projection from the universal cover is not a covering: "
            f"{r_cov.message}")
    r_cov.marked_object = marked
    cov_r = covering_transformations(r_cov)
    sub = lattice.cov_group.subgroup_of_morphisms(cov_r.transformations)
    return lattice.node_for_subgroup(sub)


def meet_covering(a: CoveringClass, b: CoveringClass) -> CoveringClass:
    """The class of the component of the fibered product that the
    universal cover maps into; verified equivalent to the node of the
    subgroup intersection before returning it."""
    if a.lattice is None or a.lattice is not b.lattice:
        raise ValueError("classes must belong to one lattice")
    lat = a.lattice
    prod = fibered_product(a.covering, b.covering)
    marked = lat.universal.marked_object
    # obj_pairs carry (second factor, first factor); see fibered_product
    pair = (b.orbit.projection.obj_map[marked],
            a.orbit.projection.obj_map[marked])
    marked_obj = prod.obj_pairs.index(pair)
    blocks = components(prod.covering.total).blocks
    block = next(blk for blk in blocks if marked_obj in blk)
    comp, obj_ids, arr_ids = component_subgroupoid(
        prod.covering.total, block)
    incl_obj = {v: i for i, v in enumerate(obj_ids)}
    proj = GroupoidMorphism(
        comp, lat.base,
        tuple(prod.covering.morphism.obj_map[v] for v in obj_ids),
        tuple(prod.covering.morphism.arr_map[v] for v in arr_ids))
    comp_cov = check_covering(proj)
    if not isinstance(comp_cov, Covering):
        raise TheoremViolation(
            f"pullback component is not a covering: {comp_cov.message}")
    comp_cov.marked_object = incl_obj[marked_obj]
    expect = lat.nodes[lat.meet(lat.index_of(a), lat.index_of(b))]
    if equivalent_coverings(expect.covering, comp_cov) is None:
        raise TheoremViolation(
            "pullback component is not equivalent to the intersection "
            "node (lattice meet law)")
    return expect


def build_lattice(g: FiniteGroupoid, g0: int = 0) -> GaloisLattice:
    """Construct and verify the full classification lattice over g.

    Verified clauses (any failure raises TheoremViolation naming it):
    bijection and order reversal; both round trips; meet and join laws
    against pullback components and pushouts; fold = subgroup index; and
    regularity = normality.  Finally the vertex group of each quotient is
    checked isomorphic to its subgroup.
    """
    if not is_connected(g):
        raise ValueError("lattice construction requires a connected base")
    u = universal_cover(g, g0)
    cov_group = covering_transformations(u)
    gamma = cov_group.group
    subs = gamma.subgroups()
    nodes = []
    for sub in subs:
        orb = orbit_groupoid(cov_group.action_of_subgroup(sub))
        quot_cov = _quotient_to_base(u, orb)
        node = CoveringClass(
            subgroup=sub,
            covering=quot_cov,
            orbit=orb,
            fold_count=fold(quot_cov),
            regular=is_regular(quot_cov))
        nodes.append(node)
    lattice = GaloisLattice(g, g0, u, cov_group, nodes)
    _verify_lattice(lattice)
    return lattice


def _verify_lattice(lat: GaloisLattice):
    gamma = lat.cov_group.group
    n = len(lat.nodes)
    for node in lat.nodes:
        # round trip Π -> quotient covering -> Cov of the orbit morphism
        orbit_cov = node.orbit.covering
        orbit_cov.marked_object = lat.universal.marked_object
        back = covering_transformations(orbit_cov)
        sub = lat.cov_group.subgroup_of_morphisms(back.transformations)
        if sub != node.subgroup:
            raise TheoremViolation(
                "round trip failed: Cov of the quotient projection is not "
                "the defining subgroup (clause: bijection round trip)")
        # fold = index
        if node.fold != gamma.order // node.subgroup.order:
            raise TheoremViolation(
                "fold of a quotient covering differs from the subgroup "
                "index (clause: fold formula)")
        # regularity = normality in Γ
        if node.regular != node.subgroup.is_normal():
            raise TheoremViolation(
                "regularity does not match normality of the subgroup "
                "(clause: regularity)")
        # vertex group of the quotient is the subgroup
        vg = vertex_group(node.covering.total,
                          node.covering.marked_object)
        if find_isomorphism(vg, node.subgroup.as_group()) is None:
            raise TheoremViolation(
                "vertex group of a quotient is not isomorphic to its "
                "subgroup (clause: quotient vertex group)")
    for i in range(n):
        for j in range(n):
            include = lat.subgroup_leq(i, j)
            # order reversal, verified geometrically: a projection from
            # quotient_i onto quotient_j exists iff Π_i ⊆ Π_j
            has_map = _orbit_map_exists(lat.nodes[i], lat.nodes[j])
            if has_map != include:
                raise TheoremViolation(
                    "covering order does not mirror reversed subgroup "
                    "inclusion (clause: order reversal)")
            # meet law (pullback component) — verified inside
            meet_covering(lat.nodes[i], lat.nodes[j])
            # join law (pushout)
            push = pushout_covering(lat.nodes[i].orbit.covering,
                                    lat.nodes[j].orbit.covering)
            join_node = lat.nodes[lat.join(i, j)]
            if push.quotient != join_node.orbit.quotient:
                raise TheoremViolation(
                    "pushout quotient differs from the join node "
                    "(clause: join law)")


def _orbit_map_exists(a: CoveringClass, b: CoveringClass) -> bool:
    """Whether quotient_a projects onto quotient_b compatibly with the two
    orbit morphisms (possible iff the a-orbits refine the b-orbits)."""
    try:
        m = _induced_on_quotient(a.orbit.covering, b.orbit.covering)
    except ValueError:
        return False
    out = check_covering(m)
    if not isinstance(out, Covering):
        raise TheoremViolation(
            "induced projection between quotients is not a covering")
    return True
