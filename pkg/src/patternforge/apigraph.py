"""API knowledge graph: typed nodes for API elements plus their semantic edges.

The graph is built from a declarative JSON model document (schema in
docs/api-model.md), validated, and frozen.  All queries used by synthesis and
hole analysis (assignability, creator lookup, member resolution through the
inheritance hierarchy) are answered here.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Optional, Union

from .errors import ModelError, UnknownType

PRIMITIVES = ("int", "long", "short", "double", "boolean", "char", "String")

# literal kinds that may stand in for a primitive target (Java constant
# narrowing / widening for literals, String for string literals)
LITERAL_FITS = {
    "int": ("int", "short", "long", "double", "char"),
    "long": ("long",),
    "short": ("short", "int", "long", "double"),
    "double": ("double",),
    "boolean": ("boolean",),
    "char": ("char", "int"),
    "string": ("String",),
}

NODE_CLASS = "Class"
NODE_INTERFACE = "Interface"
NODE_METHOD = "Method"
NODE_ENUM = "EnumClass"
NODE_ENUM_CONSTANT = "EnumConstant"
NODE_FIELD = "Field"

EDGE_HAVE_METHOD = "haveMethod"
EDGE_RETURN = "return"
EDGE_HAVE_CONSTANT = "haveConstant"
EDGE_IMPLEMENT = "implement"
EDGE_EXTEND = "extend"
EDGE_ITERABLE = "iterable"
EDGE_HAVE_FIELD = "haveField"
EDGE_FIELD_TYPE = "fieldType"


@dataclass(frozen=True)
class Param:
    name: str
    type_name: str
    doc: str = ""


@dataclass(frozen=True)
class MethodNode:
    owner: str
    name: str  # "new" for constructors
    params: tuple[Param, ...]
    returns: Optional[str]  # None for void / constructors
    static: bool = False
    constructor: bool = False
    comment: str = ""

    @property
    def token(self) -> str:
        return f"{self.owner}.{self.name}"

    @property
    def produced_type(self) -> Optional[str]:
        return self.owner if self.constructor else self.returns


@dataclass(frozen=True)
class FieldNode:
    owner: str
    name: str
    type_name: str
    static: bool = False
    comment: str = ""


@dataclass(frozen=True)
class TypeNode:
    kind: str  # Class | Interface | EnumClass
    name: str
    extends: Optional[str] = None
    implements: tuple[str, ...] = ()
    iterable: Optional[str] = None
    comment: str = ""


@dataclass(frozen=True)
class Creator:
    """A constructor, method, field, or enum constant that can produce a type."""

    kind: str  # constructor | method | field | enum
    owner: str
    name: str
    produced_type: str

    @property
    def key(self) -> str:
        return f"{self.owner}.{self.name}"


_CREATOR_RANK = {"constructor": 0, "method": 1, "field": 2, "enum": 3}


class ApiGraph:
    """Immutable directed graph over API elements; queries are read-only."""

    def __init__(
        self,
        types: dict[str, TypeNode],
        methods: dict[tuple[str, str], MethodNode],
        fields: dict[tuple[str, str], FieldNode],
        enum_constants: dict[str, tuple[str, ...]],
        model_hash: str = "",
    ):
        self.types = types
        self.methods = methods
        self.fields = fields
        self.enum_constants = enum_constants
        self.model_hash = model_hash
        self._ancestors: dict[str, frozenset[str]] = {}
        self._creators: dict[str, tuple[Creator, ...]] = {}
        self._method_owners: dict[str, tuple[str, ...]] = {}
        self._build_indexes()

    # -- construction ------------------------------------------------------

    def _build_indexes(self) -> None:
        for name in self.types:
            self._ancestors[name] = frozenset(self._walk_ancestors(name))
        owners: dict[str, list[str]] = {}
        for (owner, mname), m in sorted(self.methods.items()):
            if not m.constructor:
                owners.setdefault(mname, []).append(owner)
        self._method_owners = {k: tuple(v) for k, v in owners.items()}

    def _walk_ancestors(self, name: str) -> Iterable[str]:
        node = self.types[name]
        supers = list(node.implements)
        if node.extends:
            supers.append(node.extends)
        for sup in supers:
            yield sup
            yield from self._walk_ancestors(sup)

    # -- basic lookups -----------------------------------------------------

    def has_type(self, name: str) -> bool:
        return name in self.types or name in PRIMITIVES

    def is_primitive(self, name: str) -> bool:
        return name in PRIMITIVES

    def require_type(self, name: str) -> None:
        if not self.has_type(name):
            raise UnknownType(name)

    def is_enum(self, name: str) -> bool:
        node = self.types.get(name)
        return node is not None and node.kind == NODE_ENUM

    def is_interface(self, name: str) -> bool:
        node = self.types.get(name)
        return node is not None and node.kind == NODE_INTERFACE

    def constants_of(self, enum: str) -> tuple[str, ...]:
        return self.enum_constants.get(enum, ())

    def is_enum_constant(self, enum: str, constant: str) -> bool:
        return constant in self.enum_constants.get(enum, ())

    def method(self, owner: str, name: str) -> Optional[MethodNode]:
        return self.methods.get((owner, name))

    def constructor(self, type_name: str) -> Optional[MethodNode]:
        return self.methods.get((type_name, "new"))

    def field(self, owner: str, name: str) -> Optional[FieldNode]:
        return self.fields.get((owner, name))

    def declaring_owner(self, type_name: str, member: str, *, field: bool = False) -> Optional[str]:
        """Type that declares `member`, searching `type_name` then its supertypes."""
        if type_name in PRIMITIVES:
            return None
        if type_name not in self.types:
            return None
        table = self.fields if field else self.methods
        if (type_name, member) in table:
            return type_name
        for anc in sorted(self._ancestors.get(type_name, ())):
            if (anc, member) in table:
                return anc
        return None

    def owners_declaring(self, method_name: str) -> tuple[str, ...]:
        return self._method_owners.get(method_name, ())

    def resolve_call_token(self, token: str) -> Optional[MethodNode]:
        owner, _, name = token.rpartition(".")
        return self.methods.get((owner, name))

    def member_count(self) -> int:
        return (
            len(self.types)
            + len(self.methods)
            + len(self.fields)
            + sum(len(v) for v in self.enum_constants.values())
        )

    # -- assignability -----------------------------------------------------

    def is_assignable(self, from_type: str, to_type: str) -> bool:
        """Upcast check: same type or `to_type` reachable via extend/implement."""
        self.require_type(from_type)
        self.require_type(to_type)
        if from_type == to_type:
            return True
        return to_type in self._ancestors.get(from_type, ())

    def literal_fits(self, literal_kind: str, target: str) -> bool:
        return target in LITERAL_FITS.get(literal_kind, ())

    # -- creators ----------------------------------------------------------

    def creators_of(self, type_name: str) -> tuple[Creator, ...]:
        """Everything able to produce a value assignable to `type_name`.

        Order is deterministic: constructors, then methods, then fields, then
        enum constants; within a kind by (owner, name).
        """
        self.require_type(type_name)
        cached = self._creators.get(type_name)
        if cached is not None:
            return cached
        found: list[Creator] = []
        for (owner, name), m in self.methods.items():
            produced = m.produced_type
            if produced is None or not self.has_type(produced):
                continue
            if self.is_assignable(produced, type_name):
                kind = "constructor" if m.constructor else "method"
                found.append(Creator(kind, owner, name, produced))
        for (owner, name), f in self.fields.items():
            if self.has_type(f.type_name) and self.is_assignable(f.type_name, type_name):
                found.append(Creator("field", owner, name, f.type_name))
        for enum, constants in self.enum_constants.items():
            if self.is_assignable(enum, type_name):
                for constant in constants:
                    found.append(Creator("enum", enum, constant, enum))
        found.sort(key=lambda c: (_CREATOR_RANK[c.kind], c.owner, c.name))
        result = tuple(found)
        self._creators[type_name] = result
        return result

    def exact_creators_of(self, type_name: str) -> tuple[Creator, ...]:
        """Creators whose produced type is exactly `type_name` (popularity base)."""
        return tuple(c for c in self.creators_of(type_name) if c.produced_type == type_name)

    # -- serialization -----------------------------------------------------

    def to_document(self) -> dict:
        types = []
        for name in sorted(self.types):
            t = self.types[name]
            doc_kind = {NODE_CLASS: "class", NODE_INTERFACE: "interface", NODE_ENUM: "enum"}[t.kind]
            entry: dict = {"kind": doc_kind, "name": name}
            if t.comment:
                entry["comment"] = t.comment
            if t.extends:
                entry["extends"] = t.extends
            if t.implements:
                entry["implements"] = sorted(t.implements)
            if t.iterable:
                entry["iterable"] = t.iterable
            if t.kind == NODE_ENUM:
                entry["constants"] = list(self.enum_constants.get(name, ()))
            ctor = self.constructor(name)
            if ctor is not None:
                entry["constructor"] = _method_json(ctor)
            methods = [
                _method_json(m)
                for (owner, mname), m in sorted(self.methods.items())
                if owner == name and not m.constructor
            ]
            if methods:
                entry["methods"] = methods
            fields = [
                {
                    "name": f.name,
                    "type": f.type_name,
                    "static": f.static,
                    **({"comment": f.comment} if f.comment else {}),
                }
                for (owner, fname), f in sorted(self.fields.items())
                if owner == name
            ]
            if fields:
                entry["fields"] = fields
            types.append(entry)
        return {"version": 1, "model_hash": self.model_hash, "types": types}

    def dump(self, path: Union[str, Path]) -> None:
        Path(path).write_text(
            json.dumps(self.to_document(), indent=2, sort_keys=True) + "\n", encoding="utf-8"
        )

    def edges(self) -> list[tuple[str, str, str]]:
        """All edges as (edge-kind, from, to) triples, deterministically ordered."""
        out: list[tuple[str, str, str]] = []
        for name in sorted(self.types):
            t = self.types[name]
            if t.extends:
                out.append((EDGE_EXTEND, name, t.extends))
            for i in sorted(t.implements):
                out.append((EDGE_IMPLEMENT, name, i))
            if t.iterable:
                out.append((EDGE_ITERABLE, name, t.iterable))
        for (owner, mname), m in sorted(self.methods.items()):
            out.append((EDGE_HAVE_METHOD, owner, m.token))
            if m.returns:
                out.append((EDGE_RETURN, m.token, m.returns))
        for (owner, fname), f in sorted(self.fields.items()):
            out.append((EDGE_HAVE_FIELD, owner, f"{owner}.{fname}"))
            out.append((EDGE_FIELD_TYPE, f"{owner}.{fname}", f.type_name))
        for enum in sorted(self.enum_constants):
            for c in self.enum_constants[enum]:
                out.append((EDGE_HAVE_CONSTANT, enum, f"{enum}.{c}"))
        return out


def _method_json(m: MethodNode) -> dict:
    entry: dict = {
        "name": m.name,
        "params": [
            {"name": p.name, "type": p.type_name, **({"doc": p.doc} if p.doc else {})}
            for p in m.params
        ],
    }
    if m.returns:
        entry["returns"] = m.returns
    if m.static:
        entry["static"] = True
    if m.comment:
        entry["comment"] = m.comment
    if m.constructor:
        entry.pop("name")
    return entry


# --------------------------------------------------------------------------
# Model loading


def load_model(path: Union[str, Path]) -> dict:
    text = Path(path).read_text(encoding="utf-8")
    return json.loads(text)


def model_hash(document: dict) -> str:
    blob = json.dumps(document, sort_keys=True, separators=(",", ":")).encode("utf-8")
    return hashlib.sha256(blob).hexdigest()[:16]


def build_graph(document: dict) -> ApiGraph:
    """Validate an API model document and build the graph.

    Raises ModelError with a JSON-path-ish location for any dangling type
    reference, duplicate name, inheritance cycle, or interface constructor.
    """
    types: dict[str, TypeNode] = {}
    methods: dict[tuple[str, str], MethodNode] = {}
    fields: dict[tuple[str, str], FieldNode] = {}
    enum_constants: dict[str, tuple[str, ...]] = {}

    entries = document.get("types", [])
    for i, entry in enumerate(entries):
        path = f"types[{i}]"
        name = entry.get("name")
        if not name or not isinstance(name, str):
            raise ModelError(path, "type entry needs a name")
        if name in types or name in PRIMITIVES:
            raise ModelError(path, f"duplicate type name {name!r}")
        kind = {"class": NODE_CLASS, "interface": NODE_INTERFACE, "enum": NODE_ENUM}.get(
            entry.get("kind", "class")
        )
        if kind is None:
            raise ModelError(path, f"unknown kind {entry.get('kind')!r}")
        types[name] = TypeNode(
            kind=kind,
            name=name,
            extends=entry.get("extends"),
            implements=tuple(entry.get("implements", ())),
            iterable=entry.get("iterable"),
            comment=entry.get("comment", ""),
        )

    def known(type_name: str) -> bool:
        return type_name in types or type_name in PRIMITIVES

    for i, entry in enumerate(entries):
        path = f"types[{i}]"
        name = entry["name"]
        node = types[name]
        for sup in ([node.extends] if node.extends else []) + list(node.implements):
            if sup not in types:
                raise ModelError(path, f"{name} inherits from undeclared type {sup!r}")
        if node.iterable and not known(node.iterable):
            raise ModelError(path, f"iterable element type {node.iterable!r} undeclared")
        if node.kind == NODE_ENUM:
            constants = tuple(entry.get("constants", ()))
            if len(set(constants)) != len(constants):
                raise ModelError(path, f"duplicate enum constant in {name}")
            enum_constants[name] = constants

        ctor = entry.get("constructor")
        if ctor is not None:
            if node.kind == NODE_INTERFACE:
                raise ModelError(path, f"interface {name} cannot declare a constructor")
            methods[(name, "new")] = MethodNode(
                owner=name,
                name="new",
                params=_parse_params(ctor.get("params", ()), path),
                returns=None,
                constructor=True,
                comment=ctor.get("comment", ""),
            )
        for j, m in enumerate(entry.get("methods", ())):
            mpath = f"{path}.methods[{j}]"
            mname = m.get("name")
            if not mname:
                raise ModelError(mpath, "method needs a name")
            if mname == "new":
                raise ModelError(mpath, "'new' is reserved for constructors")
            if (name, mname) in methods:
                raise ModelError(mpath, f"duplicate method {name}.{mname}")
            methods[(name, mname)] = MethodNode(
                owner=name,
                name=mname,
                params=_parse_params(m.get("params", ()), mpath),
                returns=m.get("returns"),
                static=bool(m.get("static", False)),
                comment=m.get("comment", ""),
            )
        for j, f in enumerate(entry.get("fields", ())):
            fpath = f"{path}.fields[{j}]"
            fname = f.get("name")
            if not fname:
                raise ModelError(fpath, "field needs a name")
            if (name, fname) in fields:
                raise ModelError(fpath, f"duplicate field {name}.{fname}")
            fields[(name, fname)] = FieldNode(
                owner=name,
                name=fname,
                type_name=f["type"],
                static=bool(f.get("static", False)),
                comment=f.get("comment", ""),
            )

    # referential integrity for signatures
    for (owner, mname), m in methods.items():
        where = f"{owner}.{mname}"
        for p in m.params:
            if not known(p.type_name):
                raise ModelError(where, f"parameter type {p.type_name!r} undeclared")
        if m.returns is not None and not known(m.returns):
            raise ModelError(where, f"return type {m.returns!r} undeclared")
    for (owner, fname), f in fields.items():
        if not known(f.type_name):
            raise ModelError(f"{owner}.{fname}", f"field type {f.type_name!r} undeclared")

    _check_acyclic(types)
    digest = document.get("model_hash") or model_hash(document)
    return ApiGraph(types, methods, fields, enum_constants, digest)


def _parse_params(raw, path: str) -> tuple[Param, ...]:
    params = []
    for k, p in enumerate(raw):
        if "type" not in p:
            raise ModelError(f"{path}.params[{k}]", "parameter needs a type")
        params.append(Param(p.get("name", f"arg{k}"), p["type"], p.get("doc", "")))
    return tuple(params)


def _check_acyclic(types: dict[str, TypeNode]) -> None:
    WHITE, GRAY, BLACK = 0, 1, 2
    color = {name: WHITE for name in types}

    def visit(name: str, trail: list[str]) -> None:
        color[name] = GRAY
        node = types[name]
        supers = list(node.implements) + ([node.extends] if node.extends else [])
        for sup in supers:
            if color.get(sup) == GRAY:
                cycle = " -> ".join(trail + [name, sup])
                raise ModelError(name, f"inheritance cycle: {cycle}")
            if color.get(sup) == WHITE:
                visit(sup, trail + [name])
        color[name] = BLACK

    for name in types:
        if color[name] == WHITE:
            visit(name, [])


def load_graph(path: Union[str, Path]) -> ApiGraph:
    """Load either a raw model document or a previously dumped graph cache."""
    return build_graph(load_model(path))
