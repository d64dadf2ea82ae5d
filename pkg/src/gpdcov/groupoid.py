"""Finite groupoids stored as explicit composition tables.

A groupoid is a category in which every arrow is invertible.  Objects and
arrows are dense small integers; composition is a partial table keyed by
composable pairs.  ``compose(f, h)`` is defined exactly when
``cod(h) == dom(f)`` and denotes "h first, then f" — the composite
f∘h : dom(h) -> cod(f).

The *star* of an object x is the set of arrows INTO x (codomain x).  In a
groupoid any nonempty sieve on x is already all of star(x), so stars play
the role of canonical neighborhoods; every lifting construction in this
package works star-by-star under this codomain convention.

Everything is immutable after construction and all operations are pure.
"""

from __future__ import annotations

from dataclasses import dataclass

from .groups import FiniteGroup


class FiniteGroupoid:
    """Extensional finite groupoid: object count, arrow endpoint tables,
    identity/inverse tables and a full composition table.

    Construction performs only shape checks; :func:`validate` reports on
    the category and groupoid laws.  The builders in this module always
    return law-abiding instances.
    """

    def __init__(self, n_objects, dom, cod, identity, compose, inverse,
                 obj_labels=None, arr_labels=None):
        self.n_objects = int(n_objects)
        self.dom = tuple(int(x) for x in dom)
        self.cod = tuple(int(x) for x in cod)
        if len(self.dom) != len(self.cod):
            raise ValueError("dom and cod tables must have equal length")
        self.identity = tuple(int(x) for x in identity)
        if len(self.identity) != self.n_objects:
            raise ValueError("one identity arrow per object required")
        self.compose = {(int(f), int(h)): int(v)
                        for (f, h), v in dict(compose).items()}
        self.inverse = tuple(int(x) for x in inverse)
        if len(self.inverse) != len(self.dom):
            raise ValueError("inverse table must cover all arrows")
        if obj_labels is None:
            obj_labels = tuple(str(i) for i in range(self.n_objects))
        if arr_labels is None:
            arr_labels = tuple(str(i) for i in range(len(self.dom)))
        self.obj_labels = tuple(str(s) for s in obj_labels)
        self.arr_labels = tuple(str(s) for s in arr_labels)
        if len(self.obj_labels) != self.n_objects:
            raise ValueError("object label count mismatch")
        if len(self.arr_labels) != len(self.dom):
            raise ValueError("arrow label count mismatch")

    @property
    def n_arrows(self) -> int:
        return len(self.dom)

    @property
    def objects(self) -> range:
        return range(self.n_objects)

    @property
    def arrows(self) -> range:
        return range(self.n_arrows)

    def compose_arrows(self, f: int, h: int) -> int:
        """f∘h (h applied first); raises if not composable."""
        try:
            return self.compose[(f, h)]
        except KeyError:
            raise ValueError(
                f"arrows {f} and {h} are not composable "
                f"(cod({h})={self.cod[h]} != dom({f})={self.dom[f]})"
            ) from None

    def inv(self, a: int) -> int:
        return self.inverse[a]

    def hom(self, x: int, y: int) -> tuple:
        """Arrows x -> y in ascending id order."""
        return tuple(a for a in self.arrows
                     if self.dom[a] == x and self.cod[a] == y)

    def loops(self, x: int) -> tuple:
        return self.hom(x, x)

    def __eq__(self, other):
        return (isinstance(other, FiniteGroupoid)
                and self.n_objects == other.n_objects
                and self.dom == other.dom
                and self.cod == other.cod
                and self.identity == other.identity
                and self.compose == other.compose
                and self.inverse == other.inverse)

    def __repr__(self):
        return (f"FiniteGroupoid(objects={self.n_objects}, "
                f"arrows={self.n_arrows})")


@dataclass(frozen=True)
class Star:
    """All arrows into one object — the maximal sieve on it."""
    at: int
    arrows: tuple


@dataclass(frozen=True)
class Violation:
    kind: str
    ids: tuple
    message: str


@dataclass(frozen=True)
class ValidationReport:
    violations: tuple

    @property
    def ok(self) -> bool:
        return not self.violations


@dataclass(frozen=True)
class Partition:
    """A partition of the objects; blocks ordered by least member."""
    blocks: tuple

    def block_index(self, x: int) -> int:
        for i, blk in enumerate(self.blocks):
            if x in blk:
                return i
        raise ValueError(f"object {x} not in any block")

    def __len__(self):
        return len(self.blocks)


def validate(g: FiniteGroupoid) -> ValidationReport:
    """Report every violated category/groupoid law with the offending ids.

    Structural breakage (ids out of range, composition keyed on
    non-composable pairs) is reported first; law checks run only on the
    structurally sound part so they cannot crash.
    """
    bad = []
    n, m = g.n_objects, g.n_arrows
    for a in range(m):
        if not 0 <= g.dom[a] < n:
            bad.append(Violation("dom-range", (a,),
                                 f"arrow {a} has out-of-range dom"))
        if not 0 <= g.cod[a] < n:
            bad.append(Violation("cod-range", (a,),
                                 f"arrow {a} has out-of-range cod"))
        if not 0 <= g.inverse[a] < m:
            bad.append(Violation("inverse-range", (a,),
                                 f"arrow {a} has out-of-range inverse"))
    for x in range(n):
        e = g.identity[x]
        if not 0 <= e < m:
            bad.append(Violation("identity-range", (x,),
                                 f"object {x} has out-of-range identity"))
    for (f, h), v in g.compose.items():
        if not (0 <= f < m and 0 <= h < m and 0 <= v < m):
            bad.append(Violation("compose-range", (f, h),
                                 f"composition entry ({f}, {h}) out of range"))
    if bad:
        return ValidationReport(tuple(bad))

    for x in range(n):
        e = g.identity[x]
        if g.dom[e] != x or g.cod[e] != x:
            bad.append(Violation(
                "identity-endpoints", (x, e),
                f"identity arrow {e} of object {x} is not a loop at {x}"))
    for (f, h), v in g.compose.items():
        if g.cod[h] != g.dom[f]:
            bad.append(Violation(
                "compose-domain", (f, h),
                f"composition defined on non-composable pair ({f}, {h})"))
        else:
            if g.dom[v] != g.dom[h] or g.cod[v] != g.cod[f]:
                bad.append(Violation(
                    "compose-endpoints", (f, h, v),
                    f"composite of ({f}, {h}) has wrong endpoints"))
    for f in range(m):
        for h in range(m):
            if (g.cod[h] == g.dom[f]) != ((f, h) in g.compose):
                bad.append(Violation(
                    "compose-partiality", (f, h),
                    f"composition of ({f}, {h}) defined iff composable "
                    "violated"))
    if bad:
        return ValidationReport(tuple(bad))

    for a in range(m):
        e_hit = g.compose[(a, g.identity[g.dom[a]])]
        if e_hit != a:
            bad.append(Violation(
                "identity-right", (a,),
                f"a∘id != a for arrow {a}"))
        if g.compose[(g.identity[g.cod[a]], a)] != a:
            bad.append(Violation(
                "identity-left", (a,),
                f"id∘a != a for arrow {a}"))
        i = g.inverse[a]
        if g.dom[i] != g.cod[a] or g.cod[i] != g.dom[a]:
            bad.append(Violation(
                "inverse-endpoints", (a, i),
                f"inverse of arrow {a} has wrong endpoints"))
        else:
            if g.compose[(a, i)] != g.identity[g.cod[a]]:
                bad.append(Violation(
                    "inverse-right", (a, i),
                    f"a∘a⁻¹ != id for arrow {a}"))
            if g.compose[(i, a)] != g.identity[g.dom[a]]:
                bad.append(Violation(
                    "inverse-left", (a, i),
                    f"a⁻¹∘a != id for arrow {a}"))
    # Associativity over all composable triples (f, h, k): f∘(h∘k) = (f∘h)∘k.
    for (f, h) in g.compose:
        fh = g.compose[(f, h)]
        for k in range(m):
            if g.cod[k] != g.dom[h]:
                continue
            if g.compose[(fh, k)] != g.compose[(f, g.compose[(h, k)])]:
                bad.append(Violation(
                    "associativity", (f, h, k),
                    f"associativity fails on triple ({f}, {h}, {k})"))
    return ValidationReport(tuple(bad))


def star(g: FiniteGroupoid, x: int) -> Star:
    """The arrows with codomain x, in ascending id order."""
    if not 0 <= x < g.n_objects:
        raise ValueError(f"unknown object id {x}")
    return Star(at=x, arrows=tuple(a for a in g.arrows if g.cod[a] == x))


def components(g: FiniteGroupoid) -> Partition:
    """Connected components: x and y share a block iff hom(x, y) is
    nonempty (in a groupoid this relation is already symmetric and
    transitive)."""
    parent = list(range(g.n_objects))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for a in g.arrows:
        ra, rb = find(g.dom[a]), find(g.cod[a])
        if ra != rb:
            parent[max(ra, rb)] = min(ra, rb)
    blocks = {}
    for x in g.objects:
        blocks.setdefault(find(x), []).append(x)
    ordered = tuple(tuple(sorted(blocks[r])) for r in sorted(blocks))
    return Partition(ordered)


def is_connected(g: FiniteGroupoid) -> bool:
    return len(components(g)) == 1


class VertexGroup(FiniteGroup):
    """The group of loops at one object, with its embedding back into the
    groupoid (element i is the arrow ``self.arrows[i]``)."""

    def __init__(self, groupoid: FiniteGroupoid, at: int):
        if not 0 <= at < groupoid.n_objects:
            raise ValueError(f"unknown object id {at}")
        loops = groupoid.loops(at)
        pos = {a: i for i, a in enumerate(loops)}
        table = tuple(
            tuple(pos[groupoid.compose_arrows(a, b)] for b in loops)
            for a in loops)
        super().__init__(
            table, names=tuple(groupoid.arr_labels[a] for a in loops))
        self.groupoid = groupoid
        self.at = at
        self.arrows = loops
        self.index_by_arrow = pos


def vertex_group(g: FiniteGroupoid, x: int) -> VertexGroup:
    """The fundamental group of g at x (arrows x -> x under composition)."""
    return VertexGroup(g, x)


def disjoint_union(g: FiniteGroupoid, h: FiniteGroupoid) -> FiniteGroupoid:
    """Coproduct groupoid.  The first summand keeps its ids; the second is
    shifted by ``g.n_objects`` / ``g.n_arrows``."""
    no, na = g.n_objects, g.n_arrows
    dom = g.dom + tuple(x + no for x in h.dom)
    cod = g.cod + tuple(x + no for x in h.cod)
    identity = g.identity + tuple(a + na for a in h.identity)
    inverse = g.inverse + tuple(a + na for a in h.inverse)
    compose = dict(g.compose)
    for (f, k), v in h.compose.items():
        compose[(f + na, k + na)] = v + na
    return FiniteGroupoid(
        no + h.n_objects, dom, cod, identity, compose, inverse,
        obj_labels=g.obj_labels + h.obj_labels,
        arr_labels=g.arr_labels + h.arr_labels)


def opposite(g: FiniteGroupoid) -> FiniteGroupoid:
    """Same arrows with dom/cod swapped and composition reversed."""
    compose = {(h, f): v for (f, h), v in g.compose.items()}
    return FiniteGroupoid(
        g.n_objects, g.cod, g.dom, g.identity, compose, g.inverse,
        obj_labels=g.obj_labels, arr_labels=g.arr_labels)


def subgroupoid(g: FiniteGroupoid, objs, arrs):
    """The subgroupoid on the given objects and arrows, re-indexed densely.

    Returns (groupoid, obj_ids, arr_ids) where the id tuples embed the
    result back into g.  The arrow set must be closed under composition,
    inverse and identities of the chosen objects.
    """
    objs = tuple(sorted(set(objs)))
    arrs = tuple(sorted(set(arrs)))
    opos = {x: i for i, x in enumerate(objs)}
    apos = {a: i for i, a in enumerate(arrs)}
    for a in arrs:
        if g.dom[a] not in opos or g.cod[a] not in opos:
            raise ValueError(f"arrow {a} leaves the chosen object set")
    for x in objs:
        if g.identity[x] not in apos:
            raise ValueError(f"identity of object {x} missing from arrows")
    compose = {}
    for f in arrs:
        for h in arrs:
            if g.cod[h] == g.dom[f]:
                v = g.compose[(f, h)]
                if v not in apos:
                    raise ValueError(
                        f"arrow set not closed under composition at "
                        f"({f}, {h})")
                compose[(apos[f], apos[h])] = apos[v]
    for a in arrs:
        if g.inverse[a] not in apos:
            raise ValueError(f"arrow set not closed under inverse at {a}")
    sub = FiniteGroupoid(
        len(objs),
        tuple(opos[g.dom[a]] for a in arrs),
        tuple(opos[g.cod[a]] for a in arrs),
        tuple(apos[g.identity[x]] for x in objs),
        compose,
        tuple(apos[g.inverse[a]] for a in arrs),
        obj_labels=tuple(g.obj_labels[x] for x in objs),
        arr_labels=tuple(g.arr_labels[a] for a in arrs))
    return sub, objs, arrs


def component_subgroupoid(g: FiniteGroupoid, block):
    """The full subgroupoid on one set of objects plus all arrows between
    them (used for connected components)."""
    block = set(block)
    arrs = [a for a in g.arrows if g.dom[a] in block and g.cod[a] in block]
    return subgroupoid(g, block, arrs)


# -- builders ---------------------------------------------------------------

def trivial_groupoid(label: str = "*") -> FiniteGroupoid:
    return FiniteGroupoid(
        1, (0,), (0,), (0,), {(0, 0): 0}, (0,),
        obj_labels=(label,), arr_labels=(f"id_{label}",))


def codiscrete_groupoid(n: int, labels=None) -> FiniteGroupoid:
    """Exactly one arrow between each ordered pair of objects."""
    if n < 0:
        raise ValueError("object count must be nonnegative")
    if labels is None:
        labels = tuple(str(i) for i in range(n))

    def aid(i, j):  # the unique arrow i -> j
        return i * n + j

    dom, cod, arr_labels = [], [], []
    for i in range(n):
        for j in range(n):
            dom.append(i)
            cod.append(j)
            arr_labels.append(f"{labels[i]}>{labels[j]}")
    identity = tuple(aid(i, i) for i in range(n))
    inverse = tuple(aid(cod[a], dom[a]) for a in range(n * n))
    compose = {}
    for i in range(n):
        for j in range(n):
            for k in range(n):
                compose[(aid(j, k), aid(i, j))] = aid(i, k)
    return FiniteGroupoid(n, dom, cod, identity, compose, inverse,
                          obj_labels=labels, arr_labels=arr_labels)


def group_groupoid(group: FiniteGroup, label: str = "*") -> FiniteGroupoid:
    """The one-object groupoid whose arrows are the group elements (arrow
    id = element id, so vertex_group recovers the group on the nose)."""
    n = group.order
    compose = {(a, b): group.mult(a, b) for a in range(n) for b in range(n)}
    return FiniteGroupoid(
        1, (0,) * n, (0,) * n, (group.identity,), compose,
        group.inverse_table,
        obj_labels=(label,), arr_labels=group.names)


def relabeled(g: FiniteGroupoid, obj_labels=None, arr_labels=None):
    return FiniteGroupoid(
        g.n_objects, g.dom, g.cod, g.identity, g.compose, g.inverse,
        obj_labels=obj_labels if obj_labels is not None else g.obj_labels,
        arr_labels=arr_labels if arr_labels is not None else g.arr_labels)
