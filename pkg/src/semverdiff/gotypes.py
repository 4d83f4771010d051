"""Structural model of Go type expressions with canonical rendering.

Renderings are deterministic and fully qualified (named types carry their
package import path), so render equality coincides with structural equality.
A current-package context may be supplied to render same-package names bare,
matching how change messages are reported.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Union


@dataclass(frozen=True)
class Basic:
    name: str


@dataclass(frozen=True)
class Array:
    # Non-literal lengths (named constants, expressions) are kept as spelled.
    length: int | str
    elem: "TypeExpr"


@dataclass(frozen=True)
class Slice:
    elem: "TypeExpr"


@dataclass(frozen=True)
class Map:
    key: "TypeExpr"
    value: "TypeExpr"


@dataclass(frozen=True)
class FieldDef:
    name: str
    type: "TypeExpr"
    tag: str | None = None
    anonymous: bool = False
    exported: bool = False


@dataclass(frozen=True)
class Struct:
    fields: tuple[FieldDef, ...] = ()


@dataclass(frozen=True)
class MethodSig:
    name: str
    sig: "Func"


@dataclass(frozen=True)
class UnionTerm:
    type: "TypeExpr"
    tilde: bool = False


@dataclass(frozen=True)
class Interface:
    methods: tuple[MethodSig, ...] = ()
    embeds: tuple[UnionTerm, ...] = ()

    @property
    def has_unexported_method(self) -> bool:
        from .surface import is_exported

        return any(not is_exported(m.name) for m in self.methods)


@dataclass(frozen=True)
class Pointer:
    base: "TypeExpr"


@dataclass(frozen=True)
class Chan:
    direction: str  # "send", "recv", or "both"
    elem: "TypeExpr"


@dataclass(frozen=True)
class TypeParamDef:
    name: str
    constraint: "TypeExpr"


@dataclass(frozen=True)
class Func:
    params: tuple["TypeExpr", ...] = ()
    results: tuple["TypeExpr", ...] = ()
    variadic: bool = False  # when set, params[-1] is the element type
    type_params: tuple[TypeParamDef, ...] = ()


@dataclass(frozen=True)
class Named:
    package: str
    name: str
    args: tuple["TypeExpr", ...] = ()


@dataclass(frozen=True)
class TypeParamRef:
    name: str


TypeExpr = Union[
    Basic, Array, Slice, Map, Struct, Interface, Pointer, Chan, Func, Named, TypeParamRef
]

# Category labels for the breaking-change catalogue, keyed by variant.
_VARIANT_CATEGORY = {
    Basic: "Basic",
    Array: "Array",
    Slice: "Slice",
    Map: "Map",
    Struct: "Struct",
    Interface: "Interface",
    Pointer: "Pointer",
    Chan: "Channel",
    Func: "Function",
    Named: "Named",
    TypeParamRef: "Named",
}


def variant_category(t: TypeExpr) -> str:
    return _VARIANT_CATEGORY[type(t)]


def render_type_params(type_params: tuple[TypeParamDef, ...], current_package: str | None = None) -> str:
    inner = ", ".join(
        f"{tp.name} {render_type_expr(tp.constraint, current_package)}" for tp in type_params
    )
    return f"[{inner}]"


def render_field(f: FieldDef, current_package: str | None = None) -> str:
    out = render_type_expr(f.type, current_package) if f.anonymous else f"{f.name} {render_type_expr(f.type, current_package)}"
    if f.tag is not None:
        out += f" `{f.tag}`"
    return out


def render_method(m: MethodSig, current_package: str | None = None) -> str:
    # Method element style: name plus signature without the func keyword.
    return m.name + render_type_expr(m.sig, current_package)[len("func") :]


def render_type_expr(t: TypeExpr, current_package: str | None = None) -> str:
    """Canonical, deterministic rendering of a type expression."""
    r = lambda x: render_type_expr(x, current_package)  # noqa: E731

    if isinstance(t, Basic):
        return t.name
    if isinstance(t, TypeParamRef):
        return t.name
    if isinstance(t, Named):
        name = t.name if not t.package or t.package == current_package else f"{t.package}.{t.name}"
        if t.args:
            name += "[" + ", ".join(r(a) for a in t.args) + "]"
        return name
    if isinstance(t, Pointer):
        return "*" + r(t.base)
    if isinstance(t, Slice):
        return "[]" + r(t.elem)
    if isinstance(t, Array):
        return f"[{t.length}]" + r(t.elem)
    if isinstance(t, Map):
        return f"map[{r(t.key)}]{r(t.value)}"
    if isinstance(t, Chan):
        if t.direction == "send":
            return "chan<- " + r(t.elem)
        if t.direction == "recv":
            return "<-chan " + r(t.elem)
        return "chan " + r(t.elem)
    if isinstance(t, Func):
        parts = []
        for i, p in enumerate(t.params):
            if t.variadic and i == len(t.params) - 1:
                parts.append("..." + r(p))
            else:
                parts.append(r(p))
        out = "func"
        if t.type_params:
            out += render_type_params(t.type_params, current_package)
        out += "(" + ", ".join(parts) + ")"
        if len(t.results) == 1:
            out += " " + r(t.results[0])
        elif len(t.results) > 1:
            out += " (" + ", ".join(r(x) for x in t.results) + ")"
        return out
    if isinstance(t, Struct):
        return "struct{" + "; ".join(render_field(f, current_package) for f in t.fields) + "}"
    if isinstance(t, Interface):
        elems = [render_method(m, current_package) for m in t.methods]
        elems.extend(("~" if e.tilde else "") + r(e.type) for e in t.embeds)
        return "interface{" + "; ".join(elems) + "}"
    raise TypeError(f"unknown type expression: {t!r}")


def normalized_params(f: Func) -> tuple[str, ...]:
    """Parameter renderings with a variadic final parameter in slice form.

    Used so that a pure variadic flip (...T <-> []T) is reported once as a
    variadic change rather than doubling as a parameter change.
    """
    params = list(f.params)
    if f.variadic and params:
        params[-1] = Slice(params[-1])
    return tuple(render_type_expr(p) for p in params)


def is_comparable(
    t: TypeExpr,
    resolve: Callable[[Named], TypeExpr | None] | None = None,
    _seen: frozenset = frozenset(),
) -> bool:
    """Whether values of the type support equality comparison.

    Slices, maps, and funcs are non-comparable; arrays and structs inherit
    from their elements. Named types are resolved through `resolve` when
    possible and assumed comparable otherwise.
    """
    if isinstance(t, (Slice, Map, Func)):
        return False
    if isinstance(t, Array):
        return is_comparable(t.elem, resolve, _seen)
    if isinstance(t, Struct):
        return all(is_comparable(f.type, resolve, _seen) for f in t.fields)
    if isinstance(t, Named):
        if resolve is None or t in _seen:
            return True
        underlying = resolve(t)
        if underlying is None:
            return True
        return is_comparable(underlying, resolve, _seen | {t})
    # Basic, Pointer base, Chan, Interface, TypeParamRef are all comparable.
    return True


def type_to_structure(t: TypeExpr) -> dict:
    """Structured (JSON-ready) form of a type expression."""
    if isinstance(t, Basic):
        return {"kind": "basic", "name": t.name}
    if isinstance(t, TypeParamRef):
        return {"kind": "typeparam", "name": t.name}
    if isinstance(t, Named):
        out = {"kind": "named", "package": t.package, "name": t.name}
        if t.args:
            out["args"] = [type_to_structure(a) for a in t.args]
        return out
    if isinstance(t, Pointer):
        return {"kind": "pointer", "base": type_to_structure(t.base)}
    if isinstance(t, Slice):
        return {"kind": "slice", "elem": type_to_structure(t.elem)}
    if isinstance(t, Array):
        return {"kind": "array", "length": t.length, "elem": type_to_structure(t.elem)}
    if isinstance(t, Map):
        return {"kind": "map", "key": type_to_structure(t.key), "value": type_to_structure(t.value)}
    if isinstance(t, Chan):
        return {"kind": "chan", "direction": t.direction, "elem": type_to_structure(t.elem)}
    if isinstance(t, Func):
        return {
            "kind": "func",
            "params": [type_to_structure(p) for p in t.params],
            "results": [type_to_structure(x) for x in t.results],
            "variadic": t.variadic,
            "type_params": [
                {"name": tp.name, "constraint": type_to_structure(tp.constraint)}
                for tp in t.type_params
            ],
        }
    if isinstance(t, Struct):
        return {
            "kind": "struct",
            "fields": [
                {
                    "name": f.name,
                    "type": type_to_structure(f.type),
                    "tag": f.tag,
                    "anonymous": f.anonymous,
                    "exported": f.exported,
                }
                for f in t.fields
            ],
        }
    if isinstance(t, Interface):
        return {
            "kind": "interface",
            "methods": [{"name": m.name, "sig": type_to_structure(m.sig)} for m in t.methods],
            "embeds": [{"tilde": e.tilde, "type": type_to_structure(e.type)} for e in t.embeds],
        }
    raise TypeError(f"unknown type expression: {t!r}")
