"""Breaking-change detection and SemVer compliance analysis for Go-style modules."""

from .versions import (
    InvalidVersion,
    NotAnUpgrade,
    SemanticVersion,
    UpgradeLevel,
    classify_upgrade,
    compare_versions,
    parse_version,
    sort_and_pair,
)
from .manifest import (
    DependencyEdge,
    MalformedManifest,
    ModuleManifest,
    Requirement,
    discover_modules,
    extract_edges,
    parse_manifest,
)
from .surface import (
    ApiSurface,
    ExportedObject,
    PackageSurface,
    ParseFailure,
    SurfaceEmpty,
    extract_surface,
    filter_layout,
    is_exported,
    surface_to_json,
)
from .gotypes import render_type_expr
from .diff import (
    CATALOGUE,
    ChangeRecord,
    ComplianceVerdict,
    ModuleMismatch,
    check_compliance,
    diff_package,
    diff_surfaces,
    records_to_ndjson,
    records_to_text,
)
from .impact import (
    BreakingNode,
    ClientUsage,
    ImportBinding,
    analyze_impact,
    bind_imports,
    collect_breaking_nodes,
    scan_client,
)
from .corpus import (
    CorpusEntry,
    CorruptGraphFile,
    DependencyGraph,
    LayoutError,
    UpgradeStats,
    aggregate_upgrade_stats,
    analyze_corpus,
    build_graph,
    condition_table,
    identify_roles,
    ingest_corpus,
    load_graph,
    persist_graph,
    time_series,
    validate_corpus,
    write_reports,
)

__all__ = [
    "CATALOGUE",
    "ApiSurface",
    "BreakingNode",
    "ChangeRecord",
    "ClientUsage",
    "ComplianceVerdict",
    "CorpusEntry",
    "CorruptGraphFile",
    "DependencyEdge",
    "DependencyGraph",
    "ExportedObject",
    "ImportBinding",
    "InvalidVersion",
    "LayoutError",
    "MalformedManifest",
    "ModuleManifest",
    "ModuleMismatch",
    "NotAnUpgrade",
    "PackageSurface",
    "ParseFailure",
    "Requirement",
    "SemanticVersion",
    "SurfaceEmpty",
    "UpgradeLevel",
    "UpgradeStats",
    "aggregate_upgrade_stats",
    "analyze_corpus",
    "analyze_impact",
    "bind_imports",
    "build_graph",
    "check_compliance",
    "classify_upgrade",
    "collect_breaking_nodes",
    "compare_versions",
    "condition_table",
    "diff_package",
    "diff_surfaces",
    "discover_modules",
    "extract_edges",
    "extract_surface",
    "filter_layout",
    "identify_roles",
    "ingest_corpus",
    "is_exported",
    "load_graph",
    "parse_manifest",
    "parse_version",
    "persist_graph",
    "records_to_ndjson",
    "records_to_text",
    "render_type_expr",
    "scan_client",
    "sort_and_pair",
    "surface_to_json",
    "time_series",
    "validate_corpus",
    "write_reports",
]

__version__ = "0.1.0"
