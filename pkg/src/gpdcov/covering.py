"""Groupoid morphisms, covering projections, liftings and monodromy.

A morphism of groupoids p : total -> base is a covering projection when its
restriction star(x) -> star(p x) is a bijection for every total object x.
The inverse bijections (one per total object) are computed once and cached
as the covering's witness: every lifting construction afterwards is a pure
table lookup.

Conventions (fixed package-wide, see :mod:`gpdcov.groupoid`): stars collect
arrows INTO an object, compose(f, h) applies h first, and the monodromy of
a loop f at a fiber object x is ``x·f = dom(lift of f at x)`` — a right
action of the base vertex group on the fiber.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .errors import TheoremViolation
from .groupoid import (FiniteGroupoid, VertexGroup, components, is_connected,
                       subgroupoid, vertex_group)
from .groups import Subgroup, all_homomorphisms


class GroupoidMorphism:
    """An object map and an arrow map between finite groupoids."""

    def __init__(self, source, target, obj_map, arr_map):
        self.source = source
        self.target = target
        self.obj_map = tuple(int(x) for x in obj_map)
        self.arr_map = tuple(int(x) for x in arr_map)
        if len(self.obj_map) != source.n_objects:
            raise ValueError("object map must cover all source objects")
        if len(self.arr_map) != source.n_arrows:
            raise ValueError("arrow map must cover all source arrows")
        for x in self.obj_map:
            if not 0 <= x < target.n_objects:
                raise ValueError(f"object image {x} out of range")
        for a in self.arr_map:
            if not 0 <= a < target.n_arrows:
                raise ValueError(f"arrow image {a} out of range")

    def obj(self, x: int) -> int:
        return self.obj_map[x]

    def arr(self, a: int) -> int:
        return self.arr_map[a]

    @classmethod
    def identity(cls, g: FiniteGroupoid) -> "GroupoidMorphism":
        return cls(g, g, tuple(g.objects), tuple(g.arrows))

    def functoriality_violations(self) -> list:
        src, dst = self.source, self.target
        bad = []
        for a in src.arrows:
            fa = self.arr_map[a]
            if dst.dom[fa] != self.obj_map[src.dom[a]]:
                bad.append(f"arrow {a}: image dom mismatch")
            if dst.cod[fa] != self.obj_map[src.cod[a]]:
                bad.append(f"arrow {a}: image cod mismatch")
        for x in src.objects:
            if self.arr_map[src.identity[x]] != dst.identity[self.obj_map[x]]:
                bad.append(f"object {x}: identity not preserved")
        for (f, h), v in src.compose.items():
            img = dst.compose.get((self.arr_map[f], self.arr_map[h]))
            if img != self.arr_map[v]:
                bad.append(f"pair ({f}, {h}): composition not preserved")
        return bad

    def is_functorial(self) -> bool:
        return not self.functoriality_violations()

    def is_bijective(self) -> bool:
        return (self.source.n_objects == self.target.n_objects
                and self.source.n_arrows == self.target.n_arrows
                and len(set(self.obj_map)) == self.source.n_objects
                and len(set(self.arr_map)) == self.source.n_arrows)

    def inverse(self) -> "GroupoidMorphism":
        if not self.is_bijective():
            raise ValueError("morphism is not bijective")
        obj_inv = [0] * self.target.n_objects
        for x, y in enumerate(self.obj_map):
            obj_inv[y] = x
        arr_inv = [0] * self.target.n_arrows
        for a, b in enumerate(self.arr_map):
            arr_inv[b] = a
        return GroupoidMorphism(self.target, self.source, obj_inv, arr_inv)

    def __eq__(self, other):
        return (isinstance(other, GroupoidMorphism)
                and self.source == other.source
                and self.target == other.target
                and self.obj_map == other.obj_map
                and self.arr_map == other.arr_map)

    def __repr__(self):
        return (f"GroupoidMorphism({self.source!r} -> {self.target!r})")


def compose_morphisms(outer: GroupoidMorphism,
                      inner: GroupoidMorphism) -> GroupoidMorphism:
    """outer ∘ inner (inner applied first)."""
    if inner.target != outer.source:
        raise ValueError("morphisms are not composable")
    return GroupoidMorphism(
        inner.source, outer.target,
        tuple(outer.obj_map[x] for x in inner.obj_map),
        tuple(outer.arr_map[a] for a in inner.arr_map))


@dataclass(frozen=True)
class CoveringFailure:
    """Where and how the star-bijection test failed."""
    at_object: int
    base_object: int
    total_star_size: int
    base_star_size: int
    kind: str  # "not-injective" | "not-surjective"
    message: str


class Covering:
    """A verified covering projection with its per-object lifting witness.

    ``witness[x]`` maps each base arrow into p(x) to its unique lift into
    x.  Use :func:`check_covering` to build one.
    """

    def __init__(self, morphism: GroupoidMorphism, witnesses,
                 marked_object=None):
        self.morphism = morphism
        self.witnesses = tuple(dict(w) for w in witnesses)
        self.marked_object = marked_object

    @property
    def total(self) -> FiniteGroupoid:
        return self.morphism.source

    @property
    def base(self) -> FiniteGroupoid:
        return self.morphism.target

    def lift(self, base_arrow: int, at: int) -> int:
        """The unique arrow into ``at`` lying over ``base_arrow``."""
        try:
            return self.witnesses[at][base_arrow]
        except KeyError:
            raise ValueError(
                f"arrow {base_arrow} does not end at the image of object "
                f"{at}") from None

    def __repr__(self):
        return f"Covering({self.total!r} -> {self.base!r})"


def check_covering(f: GroupoidMorphism):
    """Decide the covering property: a :class:`Covering` with witnesses, or
    a :class:`CoveringFailure` naming an object whose star map is not a
    bijection.  Non-functorial input is an error, not a negative."""
    bad = f.functoriality_violations()
    if bad:
        raise ValueError("morphism is not functorial: " + "; ".join(bad))
    src, dst = f.source, f.target
    stars_dst = {}
    for y in dst.objects:
        stars_dst[y] = [a for a in dst.arrows if dst.cod[a] == y]
    witnesses = []
    for x in src.objects:
        y = f.obj_map[x]
        wit = {}
        for a in src.arrows:
            if src.cod[a] != x:
                continue
            img = f.arr_map[a]
            if img in wit:
                return CoveringFailure(
                    at_object=x, base_object=y,
                    total_star_size=sum(1 for b in src.arrows
                                        if src.cod[b] == x),
                    base_star_size=len(stars_dst[y]),
                    kind="not-injective",
                    message=(f"star map not injective at object "
                             f"{src.obj_labels[x]}: arrows "
                             f"{src.arr_labels[wit[img]]} and "
                             f"{src.arr_labels[a]} both map to "
                             f"{dst.arr_labels[img]}"))
            wit[img] = a
        if len(wit) != len(stars_dst[y]):
            missing = next(a for a in stars_dst[y] if a not in wit)
            return CoveringFailure(
                at_object=x, base_object=y,
                total_star_size=len(wit),
                base_star_size=len(stars_dst[y]),
                kind="not-surjective",
                message=(f"star map not surjective at object "
                         f"{src.obj_labels[x]}: base arrow "
                         f"{dst.arr_labels[missing]} into "
                         f"{dst.obj_labels[y]} has no lift (star sizes "
                         f"{len(wit)} vs {len(stars_dst[y])})"))
        witnesses.append(wit)
    return Covering(f, witnesses)


def require_covering(f: GroupoidMorphism) -> Covering:
    out = check_covering(f)
    if isinstance(out, CoveringFailure):
        raise ValueError(out.message)
    return out


@dataclass(frozen=True)
class Fiber:
    """The subgroupoid over one base object: the objects mapping onto it
    and the arrows mapping onto its identity."""
    over: int
    objects: tuple
    arrows: tuple
    groupoid: FiniteGroupoid
    obj_ids: tuple  # embedding of groupoid objects back into the total
    arr_ids: tuple


def fiber(p: Covering, base_obj: int) -> Fiber:
    if not 0 <= base_obj < p.base.n_objects:
        raise ValueError(f"unknown object id {base_obj}")
    f = p.morphism
    objs = tuple(x for x in p.total.objects if f.obj_map[x] == base_obj)
    e = p.base.identity[base_obj]
    arrs = tuple(a for a in p.total.arrows if f.arr_map[a] == e)
    gpd, obj_ids, arr_ids = subgroupoid(p.total, objs, arrs)
    return Fiber(over=base_obj, objects=objs, arrows=arrs,
                 groupoid=gpd, obj_ids=obj_ids, arr_ids=arr_ids)


def lift_arrow(p: Covering, a: int, at: int) -> int:
    """The unique arrow into ``at`` with image ``a``; requires
    p(at) = cod(a)."""
    if not 0 <= at < p.total.n_objects:
        raise ValueError(f"unknown total object id {at}")
    if not 0 <= a < p.base.n_arrows:
        raise ValueError(f"unknown base arrow id {a}")
    if p.morphism.obj_map[at] != p.base.cod[a]:
        raise ValueError(
            f"object {at} does not lie over cod of arrow {a}")
    return p.lift(a, at)


@dataclass(frozen=True)
class FiberTransport:
    """The isomorphism Fiber(cod f) -> Fiber(dom f) induced by a base
    arrow f, as maps on total ids.  Contravariant: transporting f∘g equals
    transporting f, then g."""
    along: int
    source: Fiber
    target: Fiber
    obj_map: dict
    arr_map: dict


def fiber_transport(p: Covering, f_arrow: int) -> FiberTransport:
    base = p.base
    src = fiber(p, base.cod[f_arrow])
    dst = fiber(p, base.dom[f_arrow])
    total = p.total
    obj_map = {}
    for x in src.objects:
        obj_map[x] = total.dom[p.lift(f_arrow, x)]
    arr_map = {}
    for s in src.arrows:
        a1 = p.lift(f_arrow, total.dom[s])
        a2 = p.lift(f_arrow, total.cod[s])
        arr_map[s] = total.compose_arrows(
            total.compose_arrows(total.inverse[a2], s), a1)
    return FiberTransport(along=f_arrow, source=src, target=dst,
                          obj_map=obj_map, arr_map=arr_map)


def pushforward_vertex(p: Covering, x: int) -> Subgroup:
    """The image of the loop group at x inside the base vertex group at
    p(x), as a subgroup of :func:`vertex_group`.  Injectivity of the loop
    map is asserted, not assumed."""
    f = p.morphism
    loops = p.total.loops(x)
    images = [f.arr_map[a] for a in loops]
    if len(set(images)) != len(images):
        raise TheoremViolation(
            f"loop map at object {x} is not injective; covering witness "
            "is inconsistent")
    vg = vertex_group(p.base, f.obj_map[x])
    return Subgroup(vg, (vg.index_by_arrow[a] for a in images))


def _propagate_lift(p: Covering, f: GroupoidMorphism, block, root: int,
                    seed: int):
    """Spread the unique lift of f (restricted to the connected object set
    ``block``) along stars from f(root) = p(seed).  Returns (obj_img,
    arr_img) dicts; inconsistency means the subgroup criterion was not
    checked by the caller and is reported as a theorem violation."""
    src = f.source
    total = p.total
    obj_img = {root: seed}
    arr_img = {}
    queue = [root]
    while queue:
        y = queue.pop()
        ty = obj_img[y]
        for a in src.arrows:
            if src.cod[a] != y:
                continue
            lifted = p.lift(f.arr_map[a], ty)
            arr_img[a] = lifted
            x = src.dom[a]
            tx = total.dom[lifted]
            if x in obj_img:
                if obj_img[x] != tx:
                    raise TheoremViolation(
                        f"lift propagation inconsistent at object {x}")
            else:
                obj_img[x] = tx
                queue.append(x)
    missing = [x for x in block if x not in obj_img]
    if missing:
        raise ValueError(
            f"object set is not connected: {missing[0]} unreachable")
    return obj_img, arr_img


def lift_morphism(p: Covering, f: GroupoidMorphism, f0: int,
                  seed: int):
    """The unique lift g of f through p with g(f0) = seed, or None.

    Requires f.source connected and f(f0) = p(seed).  The lift exists iff
    the f-image of the loop group at f0 lands inside the pushforward loop
    group at seed; on success the result satisfies p∘g = f and is verified
    functorial.
    """
    if f.target != p.base:
        raise ValueError("morphism target must be the covering's base")
    if not is_connected(f.source):
        raise ValueError("lifting requires a connected source")
    if not 0 <= f0 < f.source.n_objects:
        raise ValueError(f"unknown source object id {f0}")
    if not 0 <= seed < p.total.n_objects:
        raise ValueError(f"unknown total object id {seed}")
    if f.obj_map[f0] != p.morphism.obj_map[seed]:
        raise ValueError("seed does not lie over the image of the source "
                         "object")
    loop_images = {f.arr_map[a] for a in f.source.loops(f0)}
    seed_images = {p.morphism.arr_map[a] for a in p.total.loops(seed)}
    if not loop_images <= seed_images:
        return None
    obj_img, arr_img = _propagate_lift(
        p, f, tuple(f.source.objects), f0, seed)
    lifted = GroupoidMorphism(
        f.source, p.total,
        tuple(obj_img[x] for x in f.source.objects),
        tuple(arr_img[a] for a in f.source.arrows))
    if not lifted.is_functorial():
        raise TheoremViolation("propagated lift is not functorial")
    if compose_morphisms(p.morphism, lifted) != f:
        raise TheoremViolation("propagated lift does not cover the "
                               "requested morphism")
    return lifted


class MonodromyAction:
    """The right action of the base vertex group at a base object on the
    fiber objects over it: x·f = dom(lift of f at x)."""

    def __init__(self, covering: Covering, base_object: int):
        fb = fiber(covering, base_object)
        if not fb.objects:
            raise ValueError(f"empty fiber over object {base_object}")
        self.covering = covering
        self.base_object = base_object
        self.group: VertexGroup = vertex_group(covering.base, base_object)
        self.carrier = fb.objects
        total = covering.total
        self._table = {
            (x, k): total.dom[covering.lift(self.group.arrows[k], x)]
            for x in self.carrier for k in range(self.group.order)}

    def act(self, x: int, k: int) -> int:
        return self._table[(x, k)]

    def orbit(self, x: int) -> tuple:
        seen = {x}
        frontier = [x]
        while frontier:
            y = frontier.pop()
            for k in range(self.group.order):
                z = self.act(y, k)
                if z not in seen:
                    seen.add(z)
                    frontier.append(z)
        return tuple(sorted(seen))

    def stabilizer(self, x: int) -> Subgroup:
        return Subgroup(self.group,
                        (k for k in range(self.group.order)
                         if self.act(x, k) == x))

    def is_transitive(self) -> bool:
        return len(self.orbit(self.carrier[0])) == len(self.carrier)


def monodromy(p: Covering, base_object: int) -> MonodromyAction:
    return MonodromyAction(p, base_object)


def fold(p: Covering) -> int:
    """The constant fiber-object count over a connected base."""
    if not is_connected(p.base):
        raise ValueError("fold requires a connected base")
    counts = [0] * p.base.n_objects
    for x in p.total.objects:
        counts[p.morphism.obj_map[x]] += 1
    if counts[0] == 0:
        raise ValueError("empty covering has no fold")
    if any(c != counts[0] for c in counts):
        raise TheoremViolation(
            "fiber cardinality varies over a connected base")
    return counts[0]


def is_weak_equivalence(f: GroupoidMorphism) -> bool:
    """True iff f induces a bijection on components and isomorphisms on
    all vertex groups."""
    if not f.is_functorial():
        raise ValueError("morphism is not functorial")
    src_parts = components(f.source)
    dst_parts = components(f.target)
    if len(src_parts) != len(dst_parts):
        return False
    hit = {src_parts.block_index(x): dst_parts.block_index(f.obj_map[x])
           for x in f.source.objects}
    if len(set(hit.values())) != len(dst_parts):
        return False
    for x in f.source.objects:
        loops = f.source.loops(x)
        images = {f.arr_map[a] for a in loops}
        if len(images) != len(loops):
            return False
        if len(loops) != len(f.target.loops(f.obj_map[x])):
            return False
    return True


# -- morphism enumeration ----------------------------------------------------

def covering_morphisms(p: Covering, q: Covering, cap: int = 100000):
    """All morphisms total(p) -> total(q) commuting with the projections
    to the common base, in a canonical order.

    A candidate is determined per component of total(p) by the image of
    that component's least object, which must be a fiber object of q whose
    pushforward loop group absorbs the component's; everything else is
    forced by unique lifting.
    """
    if p.base != q.base:
        raise ValueError("coverings must share a base")
    parts = components(p.total)
    per_block = []
    for block in parts.blocks:
        root = block[0]
        base_pt = p.morphism.obj_map[root]
        loop_imgs = {p.morphism.arr_map[a] for a in p.total.loops(root)}
        pieces = []
        for cand in fiber(q, base_pt).objects:
            cand_imgs = {q.morphism.arr_map[a]
                         for a in q.total.loops(cand)}
            if loop_imgs <= cand_imgs:
                pieces.append(
                    _propagate_lift(q, p.morphism, block, root, cand))
        per_block.append(pieces)
    count = 1
    for pieces in per_block:
        count *= len(pieces)
        if count > cap:
            raise ValueError(f"morphism enumeration exceeds cap {cap}")
    out = []
    for combo in itertools.product(*per_block):
        obj_map = [0] * p.total.n_objects
        arr_map = [0] * p.total.n_arrows
        for obj_img, arr_img in combo:
            for x, v in obj_img.items():
                obj_map[x] = v
            for a, v in arr_img.items():
                arr_map[a] = v
        out.append(GroupoidMorphism(p.total, q.total, obj_map, arr_map))
    return out


def _connected_morphisms(src: FiniteGroupoid, block, dst: FiniteGroupoid,
                         iso_objects: bool):
    """Yield all morphisms from the full subgroupoid on the connected
    object set ``block`` into dst, as (obj_img, arr_img) dict pairs.

    Every morphism factors as: pick the image y0 of the root, a vertex
    group homomorphism at the root, and one arrow into y0 for each other
    object (the image of a fixed spanning arrow).  With ``iso_objects`` the
    object images are forced to be distinct.
    """
    root = block[0]
    tree = {root: None}
    for x in block[1:]:
        hom_arrows = src.hom(x, root)
        if not hom_arrows:
            # connected in the zigzag sense means hom is nonempty already
            raise ValueError("object set is not connected")
        tree[x] = hom_arrows[0]
    vg_src = vertex_group(src, root)
    others = tuple(x for x in block if x != root)
    block_arrows = [a for a in src.arrows
                    if src.dom[a] in tree and src.cod[a] in tree]
    # conjugate each arrow into a loop at the root: t_y ∘ a ∘ t_x⁻¹
    loop_index = {}
    for a in block_arrows:
        x, y = src.dom[a], src.cod[a]
        loop = a
        if x != root:
            loop = src.compose_arrows(loop, src.inverse[tree[x]])
        if y != root:
            loop = src.compose_arrows(tree[y], loop)
        loop_index[a] = vg_src.index_by_arrow[loop]
    for y0 in dst.objects:
        vg_dst = vertex_group(dst, y0)
        homs = list(all_homomorphisms(vg_src, vg_dst))
        star_y0 = [a for a in dst.arrows if dst.cod[a] == y0]
        compose = dst.compose
        inv = dst.inverse
        for h in homs:
            if iso_objects and len(set(h)) != vg_src.order:
                continue
            mapped = {a: vg_dst.arrows[h[loop_index[a]]]
                      for a in block_arrows}
            for choice in itertools.product(star_y0, repeat=len(others)):
                u = {root: dst.identity[y0]}
                for x, ua in zip(others, choice):
                    u[x] = ua
                obj_img = {x: dst.dom[u[x]] for x in block}
                if iso_objects and len(set(obj_img.values())) != len(block):
                    continue
                arr_img = {}
                for a in block_arrows:
                    img = compose[(mapped[a], u[src.dom[a]])]
                    arr_img[a] = compose[(inv[u[src.cod[a]]], img)]
                yield obj_img, arr_img


def all_morphisms(src: FiniteGroupoid, dst: FiniteGroupoid,
                  cap: int = 200000):
    """Yield every groupoid morphism src -> dst (exhaustive; desk scale).

    Raises if a cheap upper bound on the candidate count exceeds ``cap``.
    """
    from .groups import generating_set
    parts = components(src)
    bound = 1
    for block in parts.blocks:
        gens = len(generating_set(vertex_group(src, block[0])))
        per = 0
        for y0 in dst.objects:
            star = sum(1 for a in dst.arrows if dst.cod[a] == y0)
            per += (vertex_group(dst, y0).order ** gens
                    ) * max(1, star) ** (len(block) - 1)
        bound *= max(per, 1)
        if bound > cap:
            raise ValueError(f"morphism enumeration bound exceeds {cap}")
    gens = [list(_connected_morphisms(src, block, dst, iso_objects=False))
            for block in parts.blocks]
    for combo in itertools.product(*gens):
        obj_map = [0] * src.n_objects
        arr_map = [0] * src.n_arrows
        for obj_img, arr_img in combo:
            for x, v in obj_img.items():
                obj_map[x] = v
            for a, v in arr_img.items():
                arr_map[a] = v
        m = GroupoidMorphism(src, dst, obj_map, arr_map)
        yield m


def groupoid_isomorphisms(src: FiniteGroupoid, dst: FiniteGroupoid):
    """Yield the isomorphisms src -> dst (possibly none)."""
    if (src.n_objects != dst.n_objects or src.n_arrows != dst.n_arrows):
        return
    src_parts = components(src)
    dst_parts = components(dst)
    if len(src_parts) != len(dst_parts):
        return

    def assemble(block_choices):
        obj_map = [0] * src.n_objects
        arr_map = [0] * src.n_arrows
        for obj_img, arr_img in block_choices:
            for x, v in obj_img.items():
                obj_map[x] = v
            for a, v in arr_img.items():
                arr_map[a] = v
        return GroupoidMorphism(src, dst, obj_map, arr_map)

    def backtrack(i, used, acc):
        if i == len(src_parts.blocks):
            m = assemble(acc)
            if m.is_bijective() and m.is_functorial():
                yield m
            return
        block = src_parts.blocks[i]
        for j, dblock in enumerate(dst_parts.blocks):
            if j in used or len(dblock) != len(block):
                continue
            dset = set(dblock)
            for obj_img, arr_img in _connected_morphisms(
                    src, block, dst, iso_objects=True):
                if any(v not in dset for v in obj_img.values()):
                    continue
                yield from backtrack(i + 1, used | {j}, acc + [(obj_img,
                                                                arr_img)])

    yield from backtrack(0, frozenset(), [])


def find_groupoid_isomorphism(src: FiniteGroupoid, dst: FiniteGroupoid):
    for m in groupoid_isomorphisms(src, dst):
        return m
    return None


@dataclass(frozen=True)
class EquivalencePair:
    """Isomorphisms (phi on totals, psi on bases) with p∘phi = psi∘q."""
    phi: GroupoidMorphism
    psi: GroupoidMorphism


def _seeded_iso_over(p: Covering, f: GroupoidMorphism):
    """An isomorphism g: f.source -> total(p) with p∘g = f, found by
    seeding unique lifting at every fiber object with matching loop-image
    group; None when no seed works."""
    src = f.source
    root = 0
    base_pt = f.obj_map[root]
    loop_imgs = {f.arr_map[a] for a in src.loops(root)}
    for cand in fiber(p, base_pt).objects:
        cand_imgs = {p.morphism.arr_map[a] for a in p.total.loops(cand)}
        if loop_imgs != cand_imgs:
            continue
        g = lift_morphism(p, f, root, cand)
        if g is not None and g.is_bijective():
            return g
    return None


def equivalent_coverings(p: Covering, q: Covering, fixed_base: bool = True):
    """Search for an equivalence pair (phi, psi) with p∘phi = psi∘q, where
    phi: total(q) -> total(p) and psi: base(q) -> base(p).

    With ``fixed_base`` the bases must coincide and psi is the identity.
    Both coverings must be connected.  Returns None when the coverings are
    inequivalent.
    """
    for name, cov in (("first", p), ("second", q)):
        if not is_connected(cov.total) or not is_connected(cov.base):
            raise ValueError(f"{name} covering is not connected")
    if p.total.n_objects != q.total.n_objects \
            or p.total.n_arrows != q.total.n_arrows:
        return None
    if fixed_base:
        if p.base != q.base:
            raise ValueError("fixed-base equivalence requires equal bases")
        phi = _seeded_iso_over(p, q.morphism)
        if phi is None:
            return None
        return EquivalencePair(phi, GroupoidMorphism.identity(p.base))
    for psi in groupoid_isomorphisms(q.base, p.base):
        phi = _seeded_iso_over(p, compose_morphisms(psi, q.morphism))
        if phi is not None:
            return EquivalencePair(phi, psi)
    return None


def find_covering_isomorphism(p: Covering, q: Covering):
    """An isomorphism phi: total(p) -> total(q) with q∘phi = p, matching
    components via seeded lifting; None if the coverings differ.  Bases
    must coincide; totals may be disconnected."""
    if p.base != q.base:
        raise ValueError("coverings must share a base")
    if p.total.n_objects != q.total.n_objects \
            or p.total.n_arrows != q.total.n_arrows:
        return None
    p_parts = components(p.total).blocks
    q_parts = components(q.total).blocks

    def block_pieces(block):
        root = block[0]
        base_pt = p.morphism.obj_map[root]
        loop_imgs = {p.morphism.arr_map[a] for a in p.total.loops(root)}
        found = []
        for j, qblock in enumerate(q_parts):
            if len(qblock) != len(block):
                continue
            for cand in qblock:
                if q.morphism.obj_map[cand] != base_pt:
                    continue
                cand_imgs = {q.morphism.arr_map[a]
                             for a in q.total.loops(cand)}
                if loop_imgs != cand_imgs:
                    continue
                piece = _propagate_lift(q, p.morphism, block, root, cand)
                found.append((j, piece))
        return found

    options = [block_pieces(block) for block in p_parts]

    def backtrack(i, used, acc):
        if i == len(p_parts):
            return list(acc)
        for j, piece in options[i]:
            if j in used:
                continue
            got = backtrack(i + 1, used | {j}, acc + [piece])
            if got is not None:
                return got
        return None

    combo = backtrack(0, frozenset(), [])
    if combo is None:
        return None
    obj_map = [0] * p.total.n_objects
    arr_map = [0] * p.total.n_arrows
    for obj_img, arr_img in combo:
        for x, v in obj_img.items():
            obj_map[x] = v
        for a, v in arr_img.items():
            arr_map[a] = v
    phi = GroupoidMorphism(p.total, q.total, obj_map, arr_map)
    if not (phi.is_bijective() and phi.is_functorial()):
        return None
    if compose_morphisms(q.morphism, phi) != p.morphism:
        return None
    return phi
