import pytest
from hypothesis import given, strategies as st

from widomkit.errors import DegenerateSet, EmptyInput, InputError, ZeroScale
from widomkit.intervals import (
    IntervalUnion,
    affine_map,
    format_set_text,
    normalize_union,
    parse_bands,
    parse_set_text,
    read_set_file,
    write_set_file,
)


def test_normalize_sorts_and_merges():
    U = normalize_union([(2, 3), (0, 1), (0.5, 1.5)])
    assert U.bands == ((0.0, 1.5), (2.0, 3.0))


def test_touching_bands_merge():
    assert normalize_union([(0, 1), (1, 2)]).bands == ((0.0, 2.0),)


def test_properties():
    U = IntervalUnion(((-1, -0.6), (0.6, 1)))
    assert U.p == 2
    assert U.gaps == ((-0.6, 0.6),)
    assert U.hull == (-1.0, 1.0)
    assert U.length == pytest.approx(0.8)
    assert list(U.endpoints) == [-1, -0.6, 0.6, 1]
    assert U.band_index(0.7) == 1 and U.band_index(0.0) is None and U.band_index(1.0) is None
    assert U.contains(1.0) and not U.contains(0.0)


@pytest.mark.parametrize(
    "raw, exc",
    [([], EmptyInput), ([(1, 1)], DegenerateSet), ([(2, 1)], InputError), ([(0, float("inf"))], InputError)],
)
def test_normalize_errors(raw, exc):
    with pytest.raises(exc):
        normalize_union(raw)


def test_unsorted_direct_construction_rejected():
    with pytest.raises(InputError):
        IntervalUnion(((2, 3), (0, 1)))


def test_affine_map():
    U = affine_map(IntervalUnion(((0, 1), (2, 3))), -2.0, 1.0)
    assert U.bands == ((-5.0, -3.0), (-1.0, 1.0))
    with pytest.raises(ZeroScale):
        affine_map(U, 0.0, 1.0)


def test_parse_forms(tmp_path):
    U = parse_bands("-1 -0.6, 0.6 1")
    assert U.bands == ((-1.0, -0.6), (0.6, 1.0))
    assert parse_set_text("# comment\n0 1  # trailing\n\n2 3\n").bands == ((0.0, 1.0), (2.0, 3.0))
    with pytest.raises(InputError):
        parse_bands("0 1 2")
    with pytest.raises(InputError):
        parse_set_text("a b\n")
    path = tmp_path / "set.txt"
    write_set_file(U, path)
    assert read_set_file(path) == U


floats = st.floats(-100, 100, allow_nan=False, width=64)


@given(st.lists(st.tuples(floats, floats), min_size=1, max_size=8))
def test_normalize_idempotent_and_roundtrip(pairs):
    pairs = [(min(a, b), max(a, b)) for a, b in pairs]
    try:
        U = normalize_union(pairs)
    except DegenerateSet:
        return
    assert normalize_union(U.bands) == U
    assert parse_set_text(format_set_text(U)) == U
    for a, b in pairs:
        if a < b:
            assert U.contains(a) and U.contains(b)
