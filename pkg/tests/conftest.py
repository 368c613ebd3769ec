import pytest

from gorcat.quiver import validate_algebra


def a3_description(p=2):
    return {
        "field": {"char": p},
        "vertices": ["1", "2", "3"],
        "arrows": [
            {"name": "a", "from": "2", "to": "1"},
            {"name": "b", "from": "3", "to": "2"},
        ],
        "relations": [],
    }


def a3ab0_description(p=2):
    d = a3_description(p)
    d["relations"] = [{"terms": [{"coeff": 1, "path": ["b", "a"]}]}]
    return d


def a2_description(p=2):
    return {
        "field": {"char": p},
        "vertices": ["1", "2"],
        "arrows": [{"name": "a", "from": "2", "to": "1"}],
        "relations": [],
    }


def d4_description(p=2):
    return {
        "field": {"char": p},
        "vertices": ["1", "2", "3", "4"],
        "arrows": [
            {"name": "a", "from": "1", "to": "4"},
            {"name": "b", "from": "2", "to": "4"},
            {"name": "c", "from": "3", "to": "4"},
        ],
        "relations": [],
    }


def kronecker_description(p=2):
    return {
        "field": {"char": p},
        "vertices": ["1", "2"],
        "arrows": [
            {"name": "a", "from": "2", "to": "1"},
            {"name": "b", "from": "2", "to": "1"},
        ],
        "relations": [],
    }


@pytest.fixture(scope="session")
def a3():
    return validate_algebra(a3_description())


@pytest.fixture(scope="session")
def a3_p3():
    return validate_algebra(a3_description(p=3))


@pytest.fixture(scope="session")
def a3ab0():
    return validate_algebra(a3ab0_description())


@pytest.fixture(scope="session")
def a2():
    return validate_algebra(a2_description())


@pytest.fixture(scope="session")
def d4():
    return validate_algebra(d4_description())


@pytest.fixture(scope="session")
def kronecker():
    return validate_algebra(kronecker_description())
