import random

import numpy as np
import pytest

from gorcat.exactla import PrimeField, ShapeError, stats


F2 = PrimeField(2)
F3 = PrimeField(3)
F5 = PrimeField(5)


def test_identity_system():
    ls = F2.linear_system(F2.identity(2), F2.identity(2))
    assert ls.rank == 2
    assert np.array_equal(ls.solution, F2.identity(2))
    assert ls.nullspace.shape[0] == 0


def test_rank_one_system():
    # hand elimination: [[1,1],[1,1]] over F_2 reduces to [[1,1],[0,0]]
    a = F2.mat([[1, 1], [1, 1]])
    ls = F2.linear_system(a, F2.zeros(2, 1))
    assert ls.rank == 1
    assert ls.nullspace.shape == (1, 2)
    assert np.array_equal(ls.nullspace[0], np.array([1, 1]))


def test_inconsistent_system():
    a = F2.zeros(2, 2)
    b = F2.mat([[1], [0]])
    assert F2.solve(a, b) is None
    assert F2.linear_system(a, b).solution is None


def test_solve_shape_error():
    with pytest.raises(ShapeError):
        F2.solve(F2.zeros(2, 2), F2.zeros(3, 1))


def test_nonprime_characteristic_rejected():
    for bad in (0, 1, 4, 6, 100, 101):
        with pytest.raises(ValueError):
            PrimeField(bad)


def test_subspace_same_line():
    e1 = F2.mat([[1, 0]])
    ops = F2.subspace_ops(e1, e1)
    assert ops.sum.shape[0] == 1
    assert ops.intersection.shape[0] == 1
    assert ops.included


def test_subspace_transverse_lines():
    e1 = F2.mat([[1, 0]])
    e2 = F2.mat([[0, 1]])
    ops = F2.subspace_ops(e1, e2)
    assert ops.sum.shape[0] == 2
    assert ops.intersection.shape[0] == 0
    assert not ops.included


def test_subspace_intersection_dim_one():
    # (1,1,0) + (0,1,1) = (1,0,1) over F_2, so the planes meet in a line
    b1 = F2.mat([[1, 1, 0], [0, 1, 1]])
    b2 = F2.mat([[1, 0, 1]])
    inter = F2.subspace_intersection(b1, b2)
    assert inter.shape[0] == 1
    assert np.array_equal(inter[0], np.array([1, 0, 1]))


def test_subspace_ambient_mismatch():
    with pytest.raises(ShapeError):
        F2.subspace_ops(F2.mat([[1, 0]]), F2.mat([[1, 0, 0]]))


def test_quotient_projection_kernel():
    u = F3.mat([[1, 2, 0]])
    proj = F3.quotient_projection(F3.row_space(u), 3)
    assert proj.shape == (2, 3)
    assert not F3.matmul(proj, u.T).any()
    assert F3.rank(proj) == 2


@pytest.mark.parametrize("field", [F2, F3, F5])
def test_random_consistent_solves(field):
    rng = random.Random(20260810)
    for _ in range(60):
        rows = rng.randrange(0, 6)
        cols = rng.randrange(0, 6)
        k = rng.randrange(0, 4)
        a = field.mat([[rng.randrange(field.p) for _ in range(cols)]
                       for _ in range(rows)], rows, cols)
        x = field.mat([[rng.randrange(field.p) for _ in range(k)]
                       for _ in range(cols)], cols, k)
        b = field.matmul(a, x)
        ls = field.linear_system(a, b)
        assert ls.solution is not None
        assert np.array_equal(field.matmul(a, ls.solution), b)
        assert ls.rank + ls.nullspace.shape[0] == cols


def test_determinism_bit_identical():
    a = F3.mat([[1, 2, 0], [2, 1, 1]])
    b = F3.mat([[1], [2]])
    first = F3.linear_system(a, b)
    second = F3.linear_system(a, b)
    assert np.array_equal(first.solution, second.solution)
    assert np.array_equal(first.nullspace, second.nullspace)
    assert first.rank == second.rank


def test_rref_canonical_form():
    r, pivots = F2.rref(F2.mat([[1, 1], [1, 0]]))
    assert pivots == (0, 1)
    assert np.array_equal(r, F2.identity(2))


def test_stats_counts_checks():
    before = stats.checked
    F2.nullspace(F2.mat([[1, 1], [1, 1]]))
    assert stats.checked > before
    assert stats.failed == 0


def test_modular_law_random():
    rng = random.Random(7)
    for _ in range(40):
        n = rng.randrange(1, 6)
        b1 = F2.mat([[rng.randrange(2) for _ in range(n)] for _ in range(rng.randrange(0, 4))], None, None) if rng.random() < 0.9 else F2.zeros(0, n)
        b2 = F2.mat([[rng.randrange(2) for _ in range(n)] for _ in range(rng.randrange(0, 4))], None, None) if rng.random() < 0.9 else F2.zeros(0, n)
        if b1.size == 0:
            b1 = F2.zeros(b1.shape[0] if b1.ndim == 2 else 0, n)
        if b2.size == 0:
            b2 = F2.zeros(b2.shape[0] if b2.ndim == 2 else 0, n)
        s = F2.subspace_sum(b1, b2)
        i = F2.subspace_intersection(b1, b2)
        assert s.shape[0] + i.shape[0] == F2.rank(b1) + F2.rank(b2)
