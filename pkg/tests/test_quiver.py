import pytest

from gorcat.quiver import (
    CycleError,
    InvalidAlgebra,
    RelationFormatError,
    UnknownSymbolError,
    path_basis,
    validate_algebra,
)

from conftest import a3_description, a3ab0_description, d4_description


def test_a3_dimension_six(a3):
    # paths: e1, e2, e3, a, b, ba
    assert a3.dim == 6


def test_a3_with_zero_relation_dimension_five(a3ab0):
    assert a3ab0.dim == 5


def test_loop_rejected():
    desc = {
        "field": {"char": 2},
        "vertices": ["1"],
        "arrows": [{"name": "l", "from": "1", "to": "1"}],
    }
    with pytest.raises(CycleError):
        validate_algebra(desc)


def test_two_cycle_rejected():
    desc = {
        "field": {"char": 2},
        "vertices": ["1", "2"],
        "arrows": [
            {"name": "a", "from": "1", "to": "2"},
            {"name": "b", "from": "2", "to": "1"},
        ],
    }
    with pytest.raises(CycleError):
        validate_algebra(desc)


def test_unknown_vertex_rejected():
    desc = {
        "field": {"char": 2},
        "vertices": ["1"],
        "arrows": [{"name": "a", "from": "1", "to": "9"}],
    }
    with pytest.raises(UnknownSymbolError):
        validate_algebra(desc)


def test_short_relation_rejected():
    desc = a3_description()
    desc["relations"] = [{"terms": [{"coeff": 1, "path": ["a"]}]}]
    with pytest.raises(RelationFormatError):
        validate_algebra(desc)


def test_noncomposable_relation_rejected():
    desc = a3_description()
    desc["relations"] = [{"terms": [{"coeff": 1, "path": ["a", "b"]}]}]
    with pytest.raises(RelationFormatError):
        validate_algebra(desc)


def test_unknown_arrow_in_relation_rejected():
    desc = a3_description()
    desc["relations"] = [{"terms": [{"coeff": 1, "path": ["b", "z"]}]}]
    with pytest.raises(UnknownSymbolError):
        validate_algebra(desc)


def test_nonprime_characteristic_rejected():
    desc = a3_description()
    desc["field"] = {"char": 6}
    with pytest.raises(InvalidAlgebra):
        validate_algebra(desc)


def test_path_basis_a3(a3):
    pb = path_basis(a3)
    assert pb[("3", "1")] == [("b", "a")]
    assert pb[("2", "1")] == [("a",)]
    assert pb[("1", "1")] == [()]
    total = sum(len(v) for v in pb.values())
    assert total == a3.dim


def test_path_basis_a3ab0(a3ab0):
    pb = path_basis(a3ab0)
    assert ("3", "1") not in pb
    assert sum(len(v) for v in pb.values()) == 5


def test_path_basis_d4(d4):
    # 4 trivial paths + 3 arrows
    assert d4.dim == 7


def test_opposite_involution(a3, a3ab0):
    for h in (a3, a3ab0):
        op = h.opposite()
        assert op.opposite() is h
        assert op.dim == h.dim
        arr = op.quiver.arrow_by_name["a"]
        assert (arr.source, arr.target) == ("1", "2")


def test_roundtrip_stability(a3ab0):
    again = validate_algebra(a3ab0.to_json())
    assert again.to_json() == a3ab0.to_json()
    assert again.fingerprint() == a3ab0.fingerprint()
    assert again.dim == a3ab0.dim
    for s in again.quiver.vertices:
        for t in again.quiver.vertices:
            assert again.basis_paths(s, t) == a3ab0.basis_paths(s, t)


def test_fingerprint_depends_on_characteristic():
    h2 = validate_algebra(a3_description(2))
    h3 = validate_algebra(a3_description(3))
    assert h2.fingerprint() != h3.fingerprint()
