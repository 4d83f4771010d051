from __future__ import annotations

import pytest
from hypothesis import given, strategies as st

from semverdiff.versions import (
    InvalidVersion,
    NotAnUpgrade,
    SemanticVersion,
    UpgradeLevel,
    classify_upgrade,
    compare_versions,
    parse_version,
    sort_and_pair,
)


def test_parse_module_tag():
    v = parse_version("v1.2.0")
    assert (v.major, v.minor, v.patch) == (1, 2, 0)
    assert v.prerelease == () and v.build == ()
    assert v.raw == "v1.2.0"
    assert v.render() == "1.2.0"


def test_parse_prerelease():
    v = parse_version("1.0.1-alpha")
    assert (v.major, v.minor, v.patch) == (1, 0, 1)
    assert v.prerelease == ("alpha",)


def test_parse_build():
    v = parse_version("1.0.1+001")
    assert v.build == ("001",)
    assert v.prerelease == ()


@pytest.mark.parametrize(
    "text",
    [
        "1.2",
        "1",
        "",
        "1.2.3.4",
        "01.2.3",
        "1.02.3",
        "1.2.-3",
        "1.2.3-",
        "1.2.3-alpha..1",
        "1.2.3-01",
        "1.2.3+",
        "v",
        "abc",
        "-1.2.3",
        "99999999999999999999.0.0",
    ],
)
def test_invalid_versions(text):
    with pytest.raises(InvalidVersion):
        parse_version(text)


def test_prerelease_numeric_with_leading_zero_rejected_but_build_allowed():
    with pytest.raises(InvalidVersion):
        parse_version("1.0.0-01")
    assert parse_version("1.0.0+01").build == ("01",)


def test_compare_core():
    assert compare_versions(parse_version("1.0.0"), parse_version("2.0.0")) == -1
    assert compare_versions(parse_version("2.0.0"), parse_version("1.0.0")) == 1
    assert compare_versions(parse_version("1.2.3"), parse_version("1.2.3")) == 0


def test_prerelease_precedes_release():
    assert parse_version("1.0.1-alpha") < parse_version("1.0.1")


def test_build_ignored_in_precedence():
    assert compare_versions(parse_version("1.0.1+001"), parse_version("1.0.1")) == 0
    assert parse_version("1.0.1+a") == parse_version("1.0.1+b")


def test_prerelease_identifier_ordering():
    order = [
        "1.0.0-alpha",
        "1.0.0-alpha.1",
        "1.0.0-alpha.beta",
        "1.0.0-beta",
        "1.0.0-beta.2",
        "1.0.0-beta.11",
        "1.0.0-rc.1",
        "1.0.0",
    ]
    parsed = [parse_version(t) for t in order]
    assert parsed == sorted(parsed)


def test_v_prefix_equivalent():
    assert compare_versions(parse_version("v1.2.3"), parse_version("1.2.3")) == 0


@pytest.mark.parametrize(
    "a,b,level",
    [
        ("1.0.0", "2.0.0", UpgradeLevel.MAJOR),
        ("v1.1.3", "v1.2.0", UpgradeLevel.MINOR),
        ("1.0.0", "1.0.1", UpgradeLevel.PATCH),
        ("0.3.0", "0.4.0", UpgradeLevel.DEVELOPMENT),
        ("0.3.0", "0.3.1", UpgradeLevel.DEVELOPMENT),
        ("1.0.0", "1.0.1-alpha", UpgradeLevel.PRERELEASE_BUILD),
        ("1.0.0-alpha", "1.0.0", UpgradeLevel.PRERELEASE_BUILD),
        ("1.0.0", "1.0.1+exp", UpgradeLevel.PRERELEASE_BUILD),
        ("0.4.0", "1.0.0", UpgradeLevel.MAJOR),
    ],
)
def test_classify_upgrade(a, b, level):
    assert classify_upgrade(parse_version(a), parse_version(b)) is level


def test_classify_rejects_non_upgrades():
    with pytest.raises(NotAnUpgrade):
        classify_upgrade(parse_version("1.0.0"), parse_version("1.0.0"))
    with pytest.raises(NotAnUpgrade):
        classify_upgrade(parse_version("2.0.0"), parse_version("1.0.0"))


def test_sort_and_pair():
    versions = [parse_version(t) for t in ("1.1.0", "2.0.0", "1.0.0")]
    pairs = sort_and_pair(versions)
    assert [(str(a), str(b)) for a, b in pairs] == [("1.0.0", "1.1.0"), ("1.1.0", "2.0.0")]


def test_sort_and_pair_trivial():
    assert sort_and_pair([parse_version("2.0.0")]) == []
    assert sort_and_pair([]) == []


def test_sort_and_pair_dedups_equal_precedence():
    versions = [parse_version("1.0.0+one"), parse_version("1.0.0+two")]
    assert sort_and_pair(versions) == []
    kept = sort_and_pair(versions + [parse_version("1.1.0")])
    assert kept[0][0].raw == "1.0.0+one"


# -- property tests -----------------------------------------------------------

_identifier = st.one_of(
    st.integers(min_value=0, max_value=999).map(str),
    st.from_regex(r"[0-9A-Za-z-]*[A-Za-z-][0-9A-Za-z-]*", fullmatch=True).filter(bool),
)

versions_st = st.builds(
    SemanticVersion,
    major=st.integers(0, 99),
    minor=st.integers(0, 99),
    patch=st.integers(0, 99),
    prerelease=st.lists(_identifier, max_size=3).map(tuple),
    build=st.lists(_identifier, max_size=2).map(tuple),
)


@given(versions_st)
def test_parse_render_round_trip(v):
    parsed = parse_version(v.render())
    assert (parsed.major, parsed.minor, parsed.patch) == (v.major, v.minor, v.patch)
    assert parsed.prerelease == v.prerelease
    assert parsed.build == v.build


@given(versions_st, versions_st)
def test_ordering_totality_and_antisymmetry(a, b):
    cmp_ab = compare_versions(a, b)
    cmp_ba = compare_versions(b, a)
    assert cmp_ab in (-1, 0, 1)
    assert cmp_ab == -cmp_ba


@given(versions_st, versions_st, versions_st)
def test_ordering_transitivity(a, b, c):
    x, y, z = sorted([a, b, c])
    assert compare_versions(x, y) <= 0
    assert compare_versions(y, z) <= 0
    assert compare_versions(x, z) <= 0


@given(versions_st, versions_st)
def test_classification_is_total_on_upgrades(a, b):
    if compare_versions(a, b) == 0:
        return
    low, high = (a, b) if a < b else (b, a)
    level = classify_upgrade(low, high)
    assert isinstance(level, UpgradeLevel)
    if low.prerelease or low.build or high.prerelease or high.build:
        assert level is UpgradeLevel.PRERELEASE_BUILD
    elif high.major == 0:
        assert level is UpgradeLevel.DEVELOPMENT
    elif low.major != high.major:
        assert level is UpgradeLevel.MAJOR
    elif low.minor != high.minor:
        assert level is UpgradeLevel.MINOR
    else:
        assert level is UpgradeLevel.PATCH
