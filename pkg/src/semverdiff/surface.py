"""Exported API surface extraction for one module version.

Walks the module tree (minus filtered layout directories and nested modules),
parses every non-test .go file at declaration level, and keeps the exported
objects: top-level names, methods of exported named types, and the structural
types behind them.
"""

from __future__ import annotations

import json
import logging
import os
import unicodedata
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

from .gotypes import TypeExpr, TypeParamDef, render_type_expr, render_type_params, type_to_structure
from .parser import GoFile, GoSyntaxError, parse_go_file
from .versions import SemanticVersion

logger = logging.getLogger(__name__)

# Project-layout directories whose packages are not meant to be imported.
FILTERED_LAYOUT_DIRS = frozenset(
    {"cmd", "internal", "vendor", "config", "init", "scripts", "build", "deployment", "test"}
)


class ParseFailure(ValueError):
    """A source file could not be parsed and was skipped."""


class SurfaceEmpty(ValueError):
    """No source file parsed; the module version is invalid."""


def is_exported(identifier: str) -> bool:
    """True iff the identifier starts with an uppercase letter."""
    return bool(identifier) and unicodedata.category(identifier[0]) == "Lu"


def filter_layout(package_dir_relative: str, extra: frozenset[str] | set[str] = frozenset()) -> bool:
    """True when the relative package directory must be excluded."""
    if package_dir_relative in ("", "."):
        return False
    segments = package_dir_relative.replace("\\", "/").split("/")
    banned = FILTERED_LAYOUT_DIRS | set(extra)
    return any(seg in banned for seg in segments)


@dataclass(frozen=True)
class ExportedObject:
    name: str
    kind: str  # const | var | type | func | method
    type: TypeExpr
    const_value: str | None = None
    receiver: str | None = None
    type_params: tuple[TypeParamDef, ...] = ()

    @property
    def key(self) -> str:
        return f"{self.receiver}.{self.name}" if self.receiver else self.name


@dataclass
class PackageSurface:
    import_path: str
    objects: dict[str, ExportedObject] = field(default_factory=dict)


@dataclass
class ApiSurface:
    module_path: str
    version: SemanticVersion | None
    packages: dict[str, PackageSurface] = field(default_factory=dict)
    parse_failures: list[tuple[str, str]] = field(default_factory=list)


def _objects_from_file(gofile: GoFile) -> list[ExportedObject]:
    out: list[ExportedObject] = []
    for c in gofile.consts:
        if is_exported(c.name):
            out.append(ExportedObject(name=c.name, kind="const", type=c.type, const_value=c.value))
    for v in gofile.vars:
        if is_exported(v.name):
            out.append(ExportedObject(name=v.name, kind="var", type=v.type))
    for t in gofile.types:
        if is_exported(t.name):
            out.append(ExportedObject(name=t.name, kind="type", type=t.type, type_params=t.type_params))
    for f in gofile.funcs:
        if f.receiver is None:
            if is_exported(f.name):
                out.append(ExportedObject(name=f.name, kind="func", type=f.sig))
        elif is_exported(f.receiver) and is_exported(f.name):
            out.append(ExportedObject(name=f.name, kind="method", type=f.sig, receiver=f.receiver))
    return out


def _package_path(module_path: str, rel_dir: str) -> str:
    if rel_dir in ("", "."):
        return module_path
    return f"{module_path}/{rel_dir}"


def extract_surface(
    module_root: str | Path,
    module_path: str,
    version: SemanticVersion | None = None,
    *,
    jobs: int = 1,
    extra_excluded_dirs: tuple[str, ...] = (),
) -> ApiSurface:
    """Extract the exported API surface of the module rooted at module_root.

    Files that fail to parse are recorded and skipped; raises SurfaceEmpty
    when nothing parses at all. Two walks of the same tree yield identical
    surfaces regardless of the jobs count.
    """
    root = Path(module_root)
    banned = set(extra_excluded_dirs)
    files: list[tuple[str, Path]] = []
    for dirpath, dirnames, filenames in os.walk(root):
        rel = Path(dirpath).relative_to(root).as_posix()
        keep = []
        for d in sorted(dirnames):
            sub_rel = d if rel == "." else f"{rel}/{d}"
            if filter_layout(sub_rel, banned):
                continue
            if (Path(dirpath) / d / "go.mod").is_file():
                continue  # nested module
            keep.append(d)
        dirnames[:] = keep
        for fn in sorted(filenames):
            if fn.endswith(".go") and not fn.endswith("_test.go"):
                files.append((rel, Path(dirpath) / fn))

    def parse_one(entry: tuple[str, Path]) -> tuple[str, str, GoFile | None, str | None]:
        rel_dir, path = entry
        pkg_path = _package_path(module_path, rel_dir)
        try:
            text = path.read_text(encoding="utf-8")
            return rel_dir, path.name, parse_go_file(text, pkg_path), None
        except (OSError, UnicodeDecodeError, GoSyntaxError) as exc:
            return rel_dir, path.name, None, str(exc)

    if jobs > 1 and len(files) > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(parse_one, files))
    else:
        results = [parse_one(f) for f in files]

    surface = ApiSurface(module_path=module_path, version=version)
    parsed_count = 0
    for rel_dir, filename, gofile, error in results:
        rel_file = filename if rel_dir == "." else f"{rel_dir}/{filename}"
        if gofile is None:
            logger.warning("parse failure in %s: %s", rel_file, error)
            surface.parse_failures.append((rel_file, error or "parse failure"))
            continue
        parsed_count += 1
        pkg_path = _package_path(module_path, rel_dir)
        pkg = surface.packages.setdefault(pkg_path, PackageSurface(import_path=pkg_path))
        for obj in _objects_from_file(gofile):
            pkg.objects.setdefault(obj.key, obj)

    if parsed_count == 0:
        raise SurfaceEmpty(f"no parseable source files under {root}")
    return surface


def surface_to_dict(surface: ApiSurface) -> dict:
    """JSON-ready document with stable ordering of packages and object keys."""
    version = None
    if surface.version is not None:
        version = surface.version.raw or surface.version.render()
    packages = []
    for path in sorted(surface.packages):
        pkg = surface.packages[path]
        objects = []
        for key in sorted(pkg.objects):
            obj = pkg.objects[key]
            entry: dict = {
                "key": key,
                "kind": obj.kind,
                "type": {
                    "render": render_type_expr(obj.type),
                    "structure": type_to_structure(obj.type),
                },
            }
            if obj.kind == "const":
                entry["value"] = obj.const_value
            if obj.receiver is not None:
                entry["receiver"] = obj.receiver
            if obj.type_params:
                entry["type_params"] = render_type_params(obj.type_params)
            objects.append(entry)
        packages.append({"path": path, "objects": objects})
    return {"module": surface.module_path, "version": version, "packages": packages}


def surface_to_json(surface: ApiSurface) -> str:
    return json.dumps(surface_to_dict(surface), indent=2, ensure_ascii=False) + "\n"
