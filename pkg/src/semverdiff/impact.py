"""Client-side impact analysis for a library's breaking changes.

Files whose imports are disjoint from the breaking packages are skipped
without being scanned; surviving files are tokenized (string- and
comment-aware) and selector occurrences are matched against breaking nodes
through each file's import bindings.
"""

from __future__ import annotations

import logging
import os
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path

from . import parser as _goparser
from .diff import ChangeRecord
from .manifest import MANIFEST_NAME, MalformedManifest, parse_manifest
from .parser import GoFile, GoSyntaxError, Token
from .surface import ApiSurface, ParseFailure

logger = logging.getLogger(__name__)

# Matching entry point, kept as a module global so the short-circuit is
# observable: skipped files must never reach it.
tokenize = _goparser.tokenize


@dataclass(frozen=True)
class BreakingNode:
    package: str
    key: str
    category: str
    condition: str
    record: ChangeRecord


@dataclass
class ImportBinding:
    file: str
    bindings: dict[str, str] = field(default_factory=dict)
    dot_imports: set[str] = field(default_factory=set)
    blank_imports: set[str] = field(default_factory=set)

    @property
    def package_paths(self) -> set[str]:
        """p(c) for the file: blank imports expose no identifiers."""
        return set(self.bindings.values()) | self.dot_imports


@dataclass(frozen=True)
class ClientUsage:
    client_module: str
    client_version: str | None
    file: str
    line: int
    qualified_name: str
    node: BreakingNode

    @property
    def client_id(self) -> tuple[str, str | None]:
        return (self.client_module, self.client_version)


@dataclass
class ScanReport:
    scanned: list[str] = field(default_factory=list)
    skipped: list[str] = field(default_factory=list)


@dataclass
class ImpactResult:
    usages: list[ClientUsage]
    nodes: list[BreakingNode]
    reports: list[ScanReport] = field(default_factory=list)

    def condition_usage_counts(self) -> Counter:
        counts: Counter = Counter()
        for u in self.usages:
            counts[(u.node.category, u.node.condition)] += 1
        return counts


def collect_breaking_nodes(
    records: list[ChangeRecord], old_surface: ApiSurface | None = None
) -> list[BreakingNode]:
    """One node per breaking record, deduplicated by (package, key).

    A Package/Remove record expands to every exported object key the package
    had in the old surface.
    """
    nodes: dict[tuple[str, str], BreakingNode] = {}
    for record in sorted(records, key=lambda r: (r.package, r.node, r.category, r.condition)):
        if not record.breaking:
            continue
        if record.category == "Package" and record.condition == "Remove":
            if old_surface is None:
                continue
            pkg = old_surface.packages.get(record.package)
            if pkg is None:
                continue
            for key in sorted(pkg.objects):
                nodes.setdefault(
                    (record.package, key),
                    BreakingNode(record.package, key, record.category, record.condition, record),
                )
            continue
        if not record.node:
            continue
        nodes.setdefault(
            (record.package, record.node),
            BreakingNode(record.package, record.node, record.category, record.condition, record),
        )
    return list(nodes.values())


def bind_imports(source_file: str, file: str = "") -> ImportBinding:
    """Extract the import bindings of one source file.

    The default alias is the last path segment; explicit aliases are honored;
    "." imports land in dot_imports and "_" imports in blank_imports.
    """
    try:
        tokens = _goparser.tokenize(source_file)
        p = _goparser._Parser(tokens, "")
        p.skip_semis()
        if not p.at_keyword("package"):
            raise GoSyntaxError("missing package clause", p.cur().line)
        p.advance()
        p.expect_ident()
        shell = GoFile(package_name="")
        while True:
            p.skip_semis()
            if p.at_keyword("import"):
                p._parse_import_decl(shell)
            else:
                break
    except GoSyntaxError as exc:
        raise ParseFailure(f"{file or '<source>'}: {exc}") from exc

    binding = ImportBinding(file=file)
    for spec in shell.imports:
        if spec.blank:
            binding.blank_imports.add(spec.path)
        elif spec.dot:
            binding.dot_imports.add(spec.path)
        else:
            alias = spec.alias if spec.alias else spec.path.rsplit("/", 1)[-1]
            binding.bindings[alias] = spec.path
    return binding


def _selector_occurrences(tokens: list[Token]) -> tuple[list[tuple[str, str, int]], list[tuple[str, int]]]:
    """Collect (base, member, line) selector pairs and bare identifier uses."""
    selectors: list[tuple[str, str, int]] = []
    bares: list[tuple[str, int]] = []
    n = len(tokens)
    for i, tok in enumerate(tokens):
        if tok.kind != "ident":
            continue
        prev_is_dot = i > 0 and tokens[i - 1].kind == "op" and tokens[i - 1].text == "."
        next_is_dot = i + 2 < n and tokens[i + 1].kind == "op" and tokens[i + 1].text == "." and tokens[i + 2].kind == "ident"
        if next_is_dot:
            selectors.append((tok.text, tokens[i + 2].text, tokens[i + 2].line))
        if not prev_is_dot:
            bares.append((tok.text, tok.line))
    return selectors, bares


def _match_file(
    rel_file: str,
    text: str,
    binding: ImportBinding,
    nodes_by_package: dict[str, dict[str, BreakingNode]],
    client_module: str,
    client_version: str | None,
) -> list[ClientUsage]:
    tokens = tokenize(text)
    selectors, bares = _selector_occurrences(tokens)

    alias_packages = {
        alias: pkg for alias, pkg in binding.bindings.items() if pkg in nodes_by_package
    }
    dot_packages = sorted(binding.dot_imports & set(nodes_by_package))

    # Package-qualified type mentions, used as witnesses for method nodes.
    qualified_uses: set[tuple[str, str]] = set()
    for base, member, _line in selectors:
        pkg = alias_packages.get(base)
        if pkg is not None:
            qualified_uses.add((pkg, member))
    for pkg in dot_packages:
        for name, _line in bares:
            qualified_uses.add((pkg, name))

    usages: list[ClientUsage] = []

    def add(node: BreakingNode, line: int, qualified_name: str) -> None:
        usages.append(
            ClientUsage(
                client_module=client_module,
                client_version=client_version,
                file=rel_file,
                line=line,
                qualified_name=qualified_name,
                node=node,
            )
        )

    for base, member, line in selectors:
        pkg = alias_packages.get(base)
        if pkg is None:
            continue
        node = nodes_by_package[pkg].get(member)
        if node is not None:
            add(node, line, f"{base}.{member}")
    for pkg in dot_packages:
        pkg_nodes = nodes_by_package[pkg]
        for name, line in bares:
            node = pkg_nodes.get(name)
            if node is not None:
                add(node, line, name)

    # Method nodes ("T.M"): a selector x.M counts when the file also mentions
    # the receiver type through the same package.
    method_nodes: list[tuple[str, BreakingNode]] = []
    for pkg, keyed in nodes_by_package.items():
        for key, node in keyed.items():
            if "." in key:
                method_nodes.append((pkg, node))
    for pkg, node in sorted(method_nodes, key=lambda x: (x[0], x[1].key)):
        recv, method = node.key.split(".", 1)
        if (pkg, recv) not in qualified_uses:
            continue
        alias = next((a for a in sorted(alias_packages) if alias_packages[a] == pkg), None)
        for base, member, line in selectors:
            if member == method:
                label = f"{alias}.{node.key}" if alias is not None else node.key
                add(node, line, label)

    usages.sort(key=lambda u: (u.file, u.line, u.qualified_name, u.node.key))
    return usages


def scan_client(
    client_root: str | Path,
    nodes: list[BreakingNode],
    client_module: str = "",
    client_version: str | None = None,
    report: ScanReport | None = None,
) -> list[ClientUsage]:
    """Find usages of breaking nodes in one client checkout.

    Stage 1 skips every file whose imported package paths are disjoint from
    the breaking packages; only surviving files are tokenized and matched.
    """
    root = Path(client_root)
    nodes_by_package: dict[str, dict[str, BreakingNode]] = {}
    for node in nodes:
        nodes_by_package.setdefault(node.package, {})[node.key] = node
    breaking_packages = set(nodes_by_package)

    usages: list[ClientUsage] = []
    for dirpath, dirnames, filenames in os.walk(root):
        dirnames.sort()
        for fn in sorted(filenames):
            if not fn.endswith(".go"):
                continue
            path = Path(dirpath) / fn
            rel_file = path.relative_to(root).as_posix()
            try:
                text = path.read_text(encoding="utf-8")
                binding = bind_imports(text, rel_file)
            except (OSError, UnicodeDecodeError, ParseFailure) as exc:
                logger.warning("skipping client file %s: %s", path, exc)
                continue
            if not (binding.package_paths & breaking_packages):
                if report is not None:
                    report.skipped.append(rel_file)
                continue
            if report is not None:
                report.scanned.append(rel_file)
            usages.extend(
                _match_file(rel_file, text, binding, nodes_by_package, client_module, client_version)
            )
    return usages


def _client_identity(root: Path) -> str:
    manifest_path = root / MANIFEST_NAME
    if manifest_path.is_file():
        try:
            return parse_manifest(manifest_path.read_text(encoding="utf-8")).module_path
        except (OSError, UnicodeDecodeError, MalformedManifest):
            pass
    return root.name


def analyze_impact(
    library_records: list[ChangeRecord],
    clients: list[str | Path],
    old_surface: ApiSurface | None = None,
    client_ids: list[tuple[str, str | None]] | None = None,
) -> ImpactResult:
    """Run the client scan for every client root and concatenate the results."""
    nodes = collect_breaking_nodes(library_records, old_surface)
    result = ImpactResult(usages=[], nodes=nodes)
    if not nodes:
        return result
    for idx, client_root in enumerate(clients):
        root = Path(client_root)
        if client_ids is not None and idx < len(client_ids):
            module, version = client_ids[idx]
        else:
            module, version = _client_identity(root), None
        report = ScanReport()
        result.usages.extend(
            scan_client(root, nodes, client_module=module, client_version=version, report=report)
        )
        result.reports.append(report)
    return result


def usage_to_dict(usage: ClientUsage) -> dict:
    client = usage.client_module
    if usage.client_version:
        client = f"{client}@{usage.client_version}"
    return {
        "client": client,
        "file": usage.file,
        "line": usage.line,
        "name": usage.qualified_name,
        "package": usage.node.package,
        "condition": usage.node.condition,
    }
