"""JSON document formats for groupoids, morphisms, actions and presheaves.

All documents are plain JSON objects with human-readable names; parsing
resolves names to dense ids and validation errors carry JSON paths.
Morphism documents may reference their source/target groupoids either
inline or by a file path relative to the document's own location.

Groupoid document:
    {"objects": ["x", ...],
     "arrows": [{"name": "f", "dom": "x", "cod": "y"}, ...],
     "compose": [["f", "h", "fh"], ...],        # f∘h = fh
     "inverse": {"f": "g", ...}}                 # optional, derivable

One-object shorthand (a group by its multiplication table):
    {"group_table": [["e", "a", ...], ...],
     "elements": ["e", "a", ...],                # optional
     "object": "*"}                              # optional

Morphism document:
    {"source": <path or inline groupoid>, "target": <path or inline>,
     "objects": {"x": "px", ...}, "arrows": {"f": "pf", ...}}

Action document:
    {"space": <path or inline>, "elements": [...], "group_table": [[...]],
     "maps": {"g": {"objects": {...}, "arrows": {...}}, ...}}

Presheaf document:
    {"base": <path or inline>, "sets": {"x": ["a", ...], ...},
     "maps": {"f": {"a": "b", ...}, ...}}
"""

from __future__ import annotations

import json
import os

from .covering import Covering, GroupoidMorphism, require_covering
from .groupoid import FiniteGroupoid, validate
from .topos import Presheaf


class DocumentError(ValueError):
    """Input/format error, carrying the JSON path of the offense."""

    def __init__(self, path: str, message: str):
        self.path = path
        super().__init__(f"{path}: {message}")


def _need(obj, key, path, kind=None):
    if not isinstance(obj, dict) or key not in obj:
        raise DocumentError(path, f"missing required key {key!r}")
    val = obj[key]
    if kind is not None and not isinstance(val, kind):
        raise DocumentError(f"{path}/{key}",
                            f"expected {kind.__name__}")
    return val


def parse_groupoid(doc, path: str = "") -> FiniteGroupoid:
    if not isinstance(doc, dict):
        raise DocumentError(path or "/", "groupoid document must be an "
                            "object")
    if "group_table" in doc:
        return _parse_group_table(doc, path)
    objects = _need(doc, "objects", path, list)
    if len(set(objects)) != len(objects):
        raise DocumentError(f"{path}/objects", "object names must be "
                            "unique")
    obj_index = {str(name): i for i, name in enumerate(objects)}
    arrows = _need(doc, "arrows", path, list)
    names, dom, cod = [], [], []
    for i, arr in enumerate(arrows):
        apath = f"{path}/arrows/{i}"
        name = str(_need(arr, "name", apath))
        for key, out in (("dom", dom), ("cod", cod)):
            val = str(_need(arr, key, apath))
            if val not in obj_index:
                raise DocumentError(f"{apath}/{key}",
                                    f"unknown object {val!r}")
            out.append(obj_index[val])
        names.append(name)
    if len(set(names)) != len(names):
        raise DocumentError(f"{path}/arrows", "arrow names must be unique")
    arr_index = {name: i for i, name in enumerate(names)}
    compose = {}
    for i, entry in enumerate(_need(doc, "compose", path, list)):
        cpath = f"{path}/compose/{i}"
        if not (isinstance(entry, list) and len(entry) == 3):
            raise DocumentError(cpath, "expected [f, h, fh]")
        ids = []
        for name in entry:
            if str(name) not in arr_index:
                raise DocumentError(cpath, f"unknown arrow {name!r}")
            ids.append(arr_index[str(name)])
        f, h, fh = ids
        if (f, h) in compose and compose[(f, h)] != fh:
            raise DocumentError(cpath, "conflicting composition entries")
        compose[(f, h)] = fh
    identity = _derive_identities(len(objects), dom, cod, compose, path)
    if "inverse" in doc:
        inv_doc = _need(doc, "inverse", path, dict)
        inverse = []
        for i, name in enumerate(names):
            if name not in inv_doc:
                raise DocumentError(f"{path}/inverse",
                                    f"missing inverse of {name!r}")
            val = str(inv_doc[name])
            if val not in arr_index:
                raise DocumentError(f"{path}/inverse/{name}",
                                    f"unknown arrow {val!r}")
            inverse.append(arr_index[val])
    else:
        inverse = _derive_inverses(dom, cod, identity, compose, names, path)
    g = FiniteGroupoid(len(objects), dom, cod, identity, compose, inverse,
                       obj_labels=[str(x) for x in objects],
                       arr_labels=names)
    report = validate(g)
    if not report.ok:
        first = report.violations[0]
        raise DocumentError(path or "/",
                            f"not a groupoid: {first.message}")
    return g


def _parse_group_table(doc, path):
    table = _need(doc, "group_table", path, list)
    n = len(table)
    elements = doc.get("elements")
    if elements is None:
        elements = [str(i) for i in range(n)]
    elements = [str(e) for e in elements]
    if len(elements) != n or len(set(elements)) != n:
        raise DocumentError(f"{path}/elements",
                            "element names must be unique and match the "
                            "table size")
    index = {e: i for i, e in enumerate(elements)}
    int_table = []
    for i, row in enumerate(table):
        if not isinstance(row, list) or len(row) != n:
            raise DocumentError(f"{path}/group_table/{i}",
                                "table must be square")
        out = []
        for j, v in enumerate(row):
            key = str(v)
            if key in index:
                out.append(index[key])
            elif isinstance(v, int) and 0 <= v < n:
                out.append(v)
            else:
                raise DocumentError(f"{path}/group_table/{i}/{j}",
                                    f"unknown element {v!r}")
        int_table.append(out)
    from .groups import FiniteGroup
    from .groupoid import group_groupoid
    try:
        group = FiniteGroup(int_table, names=elements)
    except ValueError as exc:
        raise DocumentError(f"{path}/group_table", str(exc)) from None
    return group_groupoid(group, label=str(doc.get("object", "*")))


def _derive_identities(n_objects, dom, cod, compose, path):
    identity = [None] * n_objects
    for a in range(len(dom)):
        if dom[a] == cod[a] and compose.get((a, a)) == a:
            x = dom[a]
            if identity[x] is not None and identity[x] != a:
                raise DocumentError(path or "/",
                                    f"two idempotent loops at object {x}")
            identity[x] = a
    for x, e in enumerate(identity):
        if e is None:
            raise DocumentError(path or "/",
                                f"object index {x} has no identity arrow")
    return identity


def _derive_inverses(dom, cod, identity, compose, names, path):
    inverse = []
    for a in range(len(dom)):
        inv_a = None
        for b in range(len(dom)):
            if compose.get((a, b)) == identity[cod[a]] \
                    and compose.get((b, a)) == identity[dom[a]]:
                inv_a = b
                break
        if inv_a is None:
            raise DocumentError(path or "/",
                                f"arrow {names[a]!r} has no inverse")
        inverse.append(inv_a)
    return inverse


def emit_groupoid(g: FiniteGroupoid) -> dict:
    objects = _unique_labels(g.obj_labels)
    names = _unique_labels(g.arr_labels)
    return {
        "objects": list(objects),
        "arrows": [{"name": names[a], "dom": objects[g.dom[a]],
                    "cod": objects[g.cod[a]]} for a in g.arrows],
        "compose": [[names[f], names[h], names[v]]
                    for (f, h), v in sorted(g.compose.items())],
        "inverse": {names[a]: names[g.inverse[a]] for a in g.arrows},
    }


def _unique_labels(labels):
    seen = {}
    out = []
    for lbl in labels:
        if lbl not in seen:
            seen[lbl] = 0
            out.append(lbl)
        else:
            seen[lbl] += 1
            out.append(f"{lbl}#{seen[lbl]}")
    return out


def _resolve(doc, key, path, base_dir):
    val = _need(doc, key, path)
    if isinstance(val, str):
        fname = val if os.path.isabs(val) else os.path.join(base_dir, val)
        try:
            with open(fname, "r", encoding="utf-8") as fh:
                sub = json.load(fh)
        except OSError as exc:
            raise DocumentError(f"{path}/{key}",
                                f"cannot read {val!r}: {exc}") from None
        except json.JSONDecodeError as exc:
            raise DocumentError(f"{path}/{key}",
                                f"invalid JSON in {val!r}: {exc}") from None
        return parse_groupoid(sub, f"{path}/{key}")
    return parse_groupoid(val, f"{path}/{key}")


def parse_morphism(doc, base_dir: str = ".",
                   path: str = "") -> GroupoidMorphism:
    source = _resolve(doc, "source", path, base_dir)
    target = _resolve(doc, "target", path, base_dir)
    obj_doc = _need(doc, "objects", path, dict)
    arr_doc = _need(doc, "arrows", path, dict)
    src_obj = {lbl: i for i, lbl in
               enumerate(_unique_labels(source.obj_labels))}
    dst_obj = {lbl: i for i, lbl in
               enumerate(_unique_labels(target.obj_labels))}
    src_arr = {lbl: i for i, lbl in
               enumerate(_unique_labels(source.arr_labels))}
    dst_arr = {lbl: i for i, lbl in
               enumerate(_unique_labels(target.arr_labels))}
    obj_map = [None] * source.n_objects
    for name, img in obj_doc.items():
        if str(name) not in src_obj:
            raise DocumentError(f"{path}/objects",
                                f"unknown source object {name!r}")
        if str(img) not in dst_obj:
            raise DocumentError(f"{path}/objects/{name}",
                                f"unknown target object {img!r}")
        obj_map[src_obj[str(name)]] = dst_obj[str(img)]
    if any(v is None for v in obj_map):
        missing = source.obj_labels[obj_map.index(None)]
        raise DocumentError(f"{path}/objects",
                            f"missing image of object {missing!r}")
    arr_map = [None] * source.n_arrows
    for name, img in arr_doc.items():
        if str(name) not in src_arr:
            raise DocumentError(f"{path}/arrows",
                                f"unknown source arrow {name!r}")
        if str(img) not in dst_arr:
            raise DocumentError(f"{path}/arrows/{name}",
                                f"unknown target arrow {img!r}")
        arr_map[src_arr[str(name)]] = dst_arr[str(img)]
    if any(v is None for v in arr_map):
        missing = source.arr_labels[arr_map.index(None)]
        raise DocumentError(f"{path}/arrows",
                            f"missing image of arrow {missing!r}")
    m = GroupoidMorphism(source, target, obj_map, arr_map)
    bad = m.functoriality_violations()
    if bad:
        raise DocumentError(path or "/",
                            f"morphism is not functorial: {bad[0]}")
    return m


def emit_morphism(m: GroupoidMorphism) -> dict:
    src_obj = _unique_labels(m.source.obj_labels)
    dst_obj = _unique_labels(m.target.obj_labels)
    src_arr = _unique_labels(m.source.arr_labels)
    dst_arr = _unique_labels(m.target.arr_labels)
    return {
        "source": emit_groupoid(m.source),
        "target": emit_groupoid(m.target),
        "objects": {src_obj[x]: dst_obj[m.obj_map[x]]
                    for x in m.source.objects},
        "arrows": {src_arr[a]: dst_arr[m.arr_map[a]]
                   for a in m.source.arrows},
    }


def emit_covering(cov: Covering) -> dict:
    doc = emit_morphism(cov.morphism)
    if cov.marked_object is not None:
        doc["marked_object"] = _unique_labels(
            cov.total.obj_labels)[cov.marked_object]
    return doc


def parse_action(doc, base_dir: str = ".", path: str = ""):
    from .construct import GroupAction
    from .groups import FiniteGroup
    space = _resolve(doc, "space", path, base_dir)
    table = _need(doc, "group_table", path, list)
    elements = doc.get("elements")
    n = len(table)
    if elements is None:
        elements = [str(i) for i in range(n)]
    elements = [str(e) for e in elements]
    index = {e: i for i, e in enumerate(elements)}
    int_table = []
    for i, row in enumerate(table):
        out = []
        for j, v in enumerate(row):
            key = str(v)
            if key not in index:
                raise DocumentError(f"{path}/group_table/{i}/{j}",
                                    f"unknown element {v!r}")
            out.append(index[key])
        int_table.append(out)
    try:
        group = FiniteGroup(int_table, names=elements)
    except ValueError as exc:
        raise DocumentError(f"{path}/group_table", str(exc)) from None
    maps = _need(doc, "maps", path, dict)
    sp_obj = {lbl: i for i, lbl in
              enumerate(_unique_labels(space.obj_labels))}
    sp_arr = {lbl: i for i, lbl in
              enumerate(_unique_labels(space.arr_labels))}
    obj_maps, arr_maps = [], []
    for k, name in enumerate(elements):
        mpath = f"{path}/maps/{name}"
        if name not in maps:
            raise DocumentError(f"{path}/maps",
                                f"missing map for element {name!r}")
        entry = maps[name]
        obj_doc = _need(entry, "objects", mpath, dict)
        arr_doc = _need(entry, "arrows", mpath, dict)
        obj_row = [None] * space.n_objects
        for src, dst in obj_doc.items():
            if str(src) not in sp_obj or str(dst) not in sp_obj:
                raise DocumentError(f"{mpath}/objects",
                                    f"unknown object in {src!r} -> "
                                    f"{dst!r}")
            obj_row[sp_obj[str(src)]] = sp_obj[str(dst)]
        arr_row = [None] * space.n_arrows
        for src, dst in arr_doc.items():
            if str(src) not in sp_arr or str(dst) not in sp_arr:
                raise DocumentError(f"{mpath}/arrows",
                                    f"unknown arrow in {src!r} -> {dst!r}")
            arr_row[sp_arr[str(src)]] = sp_arr[str(dst)]
        if any(v is None for v in obj_row) or any(v is None
                                                  for v in arr_row):
            raise DocumentError(mpath, "maps must be total")
        obj_maps.append(obj_row)
        arr_maps.append(arr_row)
    try:
        return GroupAction(group, space, obj_maps, arr_maps)
    except ValueError as exc:
        raise DocumentError(path or "/", str(exc)) from None


def parse_presheaf(doc, base_dir: str = ".", path: str = "") -> Presheaf:
    base = _resolve(doc, "base", path, base_dir)
    sets_doc = _need(doc, "sets", path, dict)
    maps_doc = _need(doc, "maps", path, dict)
    obj_index = {lbl: i for i, lbl in
                 enumerate(_unique_labels(base.obj_labels))}
    arr_index = {lbl: i for i, lbl in
                 enumerate(_unique_labels(base.arr_labels))}
    sets = [()] * base.n_objects
    for name, elems in sets_doc.items():
        if str(name) not in obj_index:
            raise DocumentError(f"{path}/sets",
                                f"unknown base object {name!r}")
        sets[obj_index[str(name)]] = tuple(str(e) for e in elems)
    maps = {}
    for name, table in maps_doc.items():
        if str(name) not in arr_index:
            raise DocumentError(f"{path}/maps",
                                f"unknown base arrow {name!r}")
        maps[arr_index[str(name)]] = {str(k): str(v)
                                      for k, v in dict(table).items()}
    ps = Presheaf(base, sets, maps)
    try:
        ps.validate()
    except ValueError as exc:
        raise DocumentError(path or "/", str(exc)) from None
    return ps


def emit_presheaf(ps: Presheaf) -> dict:
    obj = _unique_labels(ps.base.obj_labels)
    arr = _unique_labels(ps.base.arr_labels)
    return {
        "base": emit_groupoid(ps.base),
        "sets": {obj[x]: [str(v) for v in ps.sets[x]]
                 for x in ps.base.objects},
        "maps": {arr[a]: {str(k): str(v) for k, v in ps.maps[a].items()}
                 for a in ps.base.arrows},
    }


def load_groupoid(fname: str) -> FiniteGroupoid:
    with open(fname, "r", encoding="utf-8") as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise DocumentError("/", f"invalid JSON: {exc}") from None
    return parse_groupoid(doc)


def load_morphism(fname: str) -> GroupoidMorphism:
    with open(fname, "r", encoding="utf-8") as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise DocumentError("/", f"invalid JSON: {exc}") from None
    return parse_morphism(doc, base_dir=os.path.dirname(
        os.path.abspath(fname)))


def load_covering(fname: str) -> Covering:
    m = load_morphism(fname)
    cov = require_covering(m)
    with open(fname, "r", encoding="utf-8") as fh:
        doc = json.load(fh)
    marked = doc.get("marked_object")
    if marked is not None:
        labels = _unique_labels(m.source.obj_labels)
        if str(marked) not in labels:
            raise DocumentError("/marked_object",
                                f"unknown object {marked!r}")
        cov.marked_object = labels.index(str(marked))
    return cov


def dumps(doc) -> str:
    """Canonical serialization: sorted keys, two-space indent, one
    trailing newline, LF endings."""
    return json.dumps(doc, sort_keys=True, indent=2,
                      ensure_ascii=False) + "\n"
