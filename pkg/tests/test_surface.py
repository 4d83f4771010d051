from __future__ import annotations

import json

import pytest
from hypothesis import given, strategies as st

from conftest import write_module
from semverdiff.surface import (
    FILTERED_LAYOUT_DIRS,
    SurfaceEmpty,
    extract_surface,
    filter_layout,
    is_exported,
    surface_to_dict,
    surface_to_json,
)
from semverdiff.versions import parse_version

MOD = "example.com/lib"


class TestIsExported:
    @pytest.mark.parametrize(
        "name,expected",
        [
            ("NewAgentClient", True),
            ("newAgentClient", False),
            ("Überschrift", True),
            ("_Private", False),
            ("x", False),
            ("日本語", False),
            ("", False),
        ],
    )
    def test_cases(self, name, expected):
        assert is_exported(name) is expected

    @given(st.characters(min_codepoint=0x41, max_codepoint=0x2FFF), st.text("abcXYZ09_", max_size=4))
    def test_matches_uppercase_category_oracle(self, first, rest):
        import unicodedata

        name = first + rest
        assert is_exported(name) is (unicodedata.category(first) == "Lu")


class TestFilterLayout:
    @pytest.mark.parametrize("dirname", sorted(FILTERED_LAYOUT_DIRS))
    def test_all_nine_directories(self, dirname):
        assert filter_layout(dirname) is True
        assert filter_layout(f"{dirname}/auth") is True
        assert filter_layout(f"x/{dirname}/y") is True

    def test_normal_paths_kept(self):
        assert filter_layout("pkg/api") is False
        assert filter_layout("") is False
        assert filter_layout(".") is False

    def test_extra_exclusions(self):
        assert filter_layout("gen/proto", {"gen"}) is True
        assert filter_layout("gen/proto") is False

    def test_segment_must_match_exactly(self):
        assert filter_layout("internals/auth") is False
        assert filter_layout("mycmd") is False


class TestExtractSurface:
    def test_only_exported_objects(self, tmp_path):
        write_module(tmp_path, MOD, {"lib.go": "package lib\n\nfunc Foo() {}\n\nfunc bar() {}\n"})
        surface = extract_surface(tmp_path, MOD)
        assert list(surface.packages[MOD].objects) == ["Foo"]

    def test_empty_tree_raises(self, tmp_path):
        with pytest.raises(SurfaceEmpty):
            extract_surface(tmp_path, MOD)

    def test_struct_fields_exported_flags(self, tmp_path):
        write_module(tmp_path, MOD, {"lib.go": "package lib\n\ntype T struct {\n\tA int\n\tb int\n}\n"})
        surface = extract_surface(tmp_path, MOD)
        fields = surface.packages[MOD].objects["T"].type.fields
        assert [(f.name, f.exported) for f in fields] == [("A", True), ("b", False)]

    def test_methods_of_exported_types(self, tmp_path):
        src = (
            "package lib\n\n"
            "type Tree struct{}\n\n"
            "type hidden struct{}\n\n"
            "func (t *Tree) Grow() {}\n\n"
            "func (t *Tree) prune() {}\n\n"
            "func (h *hidden) Grow() {}\n"
        )
        write_module(tmp_path, MOD, {"lib.go": src})
        surface = extract_surface(tmp_path, MOD)
        keys = set(surface.packages[MOD].objects)
        assert keys == {"Tree", "Tree.Grow"}
        method = surface.packages[MOD].objects["Tree.Grow"]
        assert method.kind == "method" and method.receiver == "Tree"

    def test_filtered_directories_are_not_walked(self, tmp_path):
        files = {"lib.go": "package lib\n\nfunc Keep() {}\n"}
        for d in FILTERED_LAYOUT_DIRS:
            files[f"{d}/code.go"] = f"package {d}\n\nfunc Planted() {{}}\n"
        write_module(tmp_path, MOD, files)
        surface = extract_surface(tmp_path, MOD)
        assert set(surface.packages) == {MOD}

    def test_nested_module_excluded(self, tmp_path):
        write_module(
            tmp_path,
            MOD,
            {
                "lib.go": "package lib\n\nfunc Keep() {}\n",
                "sub/go.mod": "module example.com/lib/sub\n",
                "sub/sub.go": "package sub\n\nfunc Nested() {}\n",
            },
        )
        surface = extract_surface(tmp_path, MOD)
        assert set(surface.packages) == {MOD}

    def test_test_files_excluded(self, tmp_path):
        write_module(
            tmp_path,
            MOD,
            {
                "lib.go": "package lib\n\nfunc Keep() {}\n",
                "lib_test.go": "package lib\n\nfunc TestOnly() {}\n",
            },
        )
        surface = extract_surface(tmp_path, MOD)
        assert list(surface.packages[MOD].objects) == ["Keep"]

    def test_build_constrained_files_unioned(self, tmp_path):
        write_module(
            tmp_path,
            MOD,
            {
                "a_linux.go": "//go:build linux\n\npackage lib\n\nfunc OnLinux() {}\n",
                "a_windows.go": "//go:build windows\n\npackage lib\n\nfunc OnWindows() {}\n",
            },
        )
        surface = extract_surface(tmp_path, MOD)
        assert set(surface.packages[MOD].objects) == {"OnLinux", "OnWindows"}

    def test_parse_failure_recorded_and_skipped(self, tmp_path):
        write_module(
            tmp_path,
            MOD,
            {
                "good.go": "package lib\n\nfunc Keep() {}\n",
                "bad.go": "package lib\n\nfunc ( broken\n",
            },
        )
        surface = extract_surface(tmp_path, MOD)
        assert list(surface.packages[MOD].objects) == ["Keep"]
        assert [path for path, _ in surface.parse_failures] == ["bad.go"]

    def test_subpackage_import_paths(self, tmp_path):
        write_module(
            tmp_path,
            MOD,
            {
                "lib.go": "package lib\n\nfunc Root() {}\n",
                "api/v2/api.go": "package v2\n\nfunc Call() {}\n",
            },
        )
        surface = extract_surface(tmp_path, MOD)
        assert set(surface.packages) == {MOD, f"{MOD}/api/v2"}

    def test_deterministic_and_jobs_independent(self, tmp_path):
        files = {"lib.go": "package lib\n\nfunc A() {}\n"}
        for i in range(6):
            files[f"p{i}/p.go"] = f"package p{i}\n\nfunc P{i}() {{}}\n"
        write_module(tmp_path, MOD, files)
        docs = [
            surface_to_json(extract_surface(tmp_path, MOD, parse_version("v1.0.0"), jobs=j))
            for j in (1, 1, 4)
        ]
        assert docs[0] == docs[1] == docs[2]


class TestSerialization:
    def test_document_shape(self, tmp_path):
        write_module(
            tmp_path,
            MOD,
            {"lib.go": 'package lib\n\nconst Limit int = 10\n\nfunc Run(name string) error { return nil }\n'},
        )
        surface = extract_surface(tmp_path, MOD, parse_version("v1.2.3"))
        doc = surface_to_dict(surface)
        assert doc["module"] == MOD
        assert doc["version"] == "v1.2.3"
        (pkg,) = doc["packages"]
        assert pkg["path"] == MOD
        by_key = {o["key"]: o for o in pkg["objects"]}
        assert by_key["Limit"]["kind"] == "const"
        assert by_key["Limit"]["value"] == "10"
        assert by_key["Limit"]["type"]["render"] == "int"
        assert by_key["Run"]["type"]["render"] == "func(string) error"
        assert by_key["Run"]["type"]["structure"]["kind"] == "func"

    def test_json_round_trips_through_loads(self, tmp_path):
        write_module(tmp_path, MOD, {"lib.go": "package lib\n\nfunc A() {}\n"})
        surface = extract_surface(tmp_path, MOD)
        assert json.loads(surface_to_json(surface))["module"] == MOD
