"""Exact dense linear algebra over a prime field F_p.

Every matrix is a 2-d numpy int64 array whose entries are canonical
representatives 0..p-1.  All elimination is plain Gaussian elimination;
matrices here are tiny, so no fraction-free or block tricks are used.
Echelon forms are the canonical representatives of subspaces: any
set-like comparison of subspaces goes through ``row_space``.

Internal consistency checks (rank-nullity, residual of solved systems)
are counted in ``stats`` and enabled by default; ``set_debug_checks``
turns them off.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = [
    "PrimeField",
    "LinearSolution",
    "SubspaceOps",
    "ShapeError",
    "stats",
    "set_debug_checks",
    "mat_key",
]

_PRIMES_LE_97 = frozenset(
    [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67,
     71, 73, 79, 83, 89, 97]
)


class ShapeError(ValueError):
    """Raised when matrix shapes are incompatible."""


class CheckStats:
    """Counters for internal consistency checks."""

    __slots__ = ("checked", "failed")

    def __init__(self):
        self.checked = 0
        self.failed = 0

    def reset(self):
        self.checked = 0
        self.failed = 0

    def record(self, ok: bool, what: str = "check"):
        self.checked += 1
        if not ok:
            self.failed += 1
            raise AssertionError("internal consistency check failed: " + what)


stats = CheckStats()
_debug = True


def set_debug_checks(on: bool):
    global _debug
    _debug = bool(on)


def debug_checks_enabled() -> bool:
    return _debug


def mat_key(a: np.ndarray) -> bytes:
    """Byte string identifying a canonical matrix (shape + entries)."""
    return np.asarray(a.shape, dtype=np.int64).tobytes() + np.ascontiguousarray(a).tobytes()


@dataclass(frozen=True)
class LinearSolution:
    """Outcome of solving A X = B: rank of A, a particular solution
    (None when inconsistent) and a row-basis of the right nullspace of A."""

    rank: int
    solution: np.ndarray | None
    nullspace: np.ndarray


@dataclass(frozen=True)
class SubspaceOps:
    """Sum/intersection/inclusion/quotient data for two row-span subspaces
    of a common ambient space.  ``projection`` maps the ambient space onto
    coordinates for ambient/span(basis1); ``quotient_basis`` rows are
    preimages of the corresponding quotient coordinates."""

    sum: np.ndarray
    intersection: np.ndarray
    included: bool
    quotient_basis: np.ndarray
    projection: np.ndarray


class PrimeField:
    """Arithmetic and elimination over F_p (p prime, 2 <= p <= 97)."""

    __slots__ = ("p", "_inv")

    def __init__(self, p: int):
        if not isinstance(p, int) or p not in _PRIMES_LE_97:
            raise ValueError(f"characteristic must be a prime in [2, 97], got {p!r}")
        self.p = p
        self._inv = np.array([0] + [pow(a, p - 2, p) for a in range(1, p)], dtype=np.int64)

    def __repr__(self):
        return f"PrimeField({self.p})"

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self):
        return hash(("PrimeField", self.p))

    # -- construction -------------------------------------------------

    def mat(self, data, rows: int | None = None, cols: int | None = None) -> np.ndarray:
        """Canonical matrix from nested lists / arrays, reduced mod p."""
        a = np.array(data, dtype=np.int64)
        if a.ndim == 1:
            a = a.reshape(1, -1) if rows is None or rows == 1 else a.reshape(-1, 1)
        if a.ndim != 2:
            if a.size == 0:
                a = a.reshape(rows or 0, cols or 0)
            else:
                raise ShapeError(f"expected 2-d data, got ndim={a.ndim}")
        if rows is not None and cols is not None and a.shape != (rows, cols):
            if a.size == rows * cols:
                a = a.reshape(rows, cols)
            else:
                raise ShapeError(f"data of size {a.size} cannot fill {rows}x{cols}")
        return np.mod(a, self.p)

    def zeros(self, rows: int, cols: int) -> np.ndarray:
        return np.zeros((rows, cols), dtype=np.int64)

    def identity(self, n: int) -> np.ndarray:
        return np.eye(n, dtype=np.int64)

    # -- arithmetic ---------------------------------------------------

    def matmul(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        if a.shape[1] != b.shape[0]:
            raise ShapeError(f"matmul shapes {a.shape} x {b.shape}")
        return np.mod(a @ b, self.p)

    def add(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        if a.shape != b.shape:
            raise ShapeError(f"add shapes {a.shape} vs {b.shape}")
        return np.mod(a + b, self.p)

    def sub(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        if a.shape != b.shape:
            raise ShapeError(f"sub shapes {a.shape} vs {b.shape}")
        return np.mod(a - b, self.p)

    def smul(self, c: int, a: np.ndarray) -> np.ndarray:
        return np.mod(int(c) * a, self.p)

    def neg(self, a: np.ndarray) -> np.ndarray:
        return np.mod(-a, self.p)

    def inv_scalar(self, a: int) -> int:
        a = int(a) % self.p
        if a == 0:
            raise ZeroDivisionError("0 has no inverse")
        return int(self._inv[a])

    # -- elimination --------------------------------------------------

    def rref(self, a: np.ndarray) -> tuple[np.ndarray, tuple[int, ...]]:
        """Reduced row echelon form and pivot columns."""
        r = np.mod(np.array(a, dtype=np.int64, copy=True), self.p)
        rows, cols = r.shape
        pivots = []
        cur = 0
        for c in range(cols):
            if cur >= rows:
                break
            pr = cur
            while pr < rows and r[pr, c] == 0:
                pr += 1
            if pr == rows:
                continue
            if pr != cur:
                r[[cur, pr]] = r[[pr, cur]]
            r[cur] = np.mod(r[cur] * self.inv_scalar(r[cur, c]), self.p)
            nz = [i for i in range(rows) if i != cur and r[i, c] != 0]
            for i in nz:
                r[i] = np.mod(r[i] - r[i, c] * r[cur], self.p)
            pivots.append(c)
            cur += 1
        return r, tuple(pivots)

    def rank(self, a: np.ndarray) -> int:
        return len(self.rref(a)[1])

    def row_space(self, a: np.ndarray) -> np.ndarray:
        """Canonical basis (RREF, zero rows dropped) of the row span."""
        r, pivots = self.rref(a)
        return np.ascontiguousarray(r[: len(pivots)])

    def nullspace(self, a: np.ndarray) -> np.ndarray:
        """Rows form a basis of {x : a @ x = 0}."""
        r, pivots = self.rref(a)
        cols = a.shape[1]
        free = [c for c in range(cols) if c not in set(pivots)]
        basis = self.zeros(len(free), cols)
        for k, f in enumerate(free):
            basis[k, f] = 1
            for i, pc in enumerate(pivots):
                basis[k, pc] = (-r[i, f]) % self.p
        if _debug:
            stats.record(len(pivots) + len(free) == cols, "rank-nullity")
            if len(free):
                stats.record(
                    not np.mod(a @ basis.T, self.p).any(), "nullspace residual"
                )
        return basis

    def solve(self, a: np.ndarray, b: np.ndarray) -> np.ndarray | None:
        """Particular solution X of a @ X = b, or None when inconsistent."""
        if a.shape[0] != b.shape[0]:
            raise ShapeError(f"solve shapes {a.shape} vs {b.shape}")
        n = a.shape[1]
        m = b.shape[1]
        aug = np.concatenate([a, b], axis=1)
        r, pivots = self.rref(aug)
        if any(pc >= n for pc in pivots):
            return None
        x = self.zeros(n, m)
        for i, pc in enumerate(pivots):
            x[pc] = r[i, n:]
        if _debug:
            stats.record(np.array_equal(np.mod(a @ x, self.p), np.mod(b, self.p)),
                         "solve residual")
        return x

    def inverse(self, a: np.ndarray) -> np.ndarray | None:
        if a.shape[0] != a.shape[1]:
            return None
        x = self.solve(a, self.identity(a.shape[0]))
        if x is None:
            return None
        if _debug:
            stats.record(np.array_equal(self.matmul(x, a), self.identity(a.shape[0])),
                         "inverse residual")
        return x

    def linear_system(self, a: np.ndarray, b: np.ndarray) -> LinearSolution:
        """Full description of a @ X = b: rank, particular solution, nullspace."""
        if a.shape[0] != b.shape[0]:
            raise ShapeError(f"linear_system shapes {a.shape} vs {b.shape}")
        sol = self.solve(a, b)
        ns = self.nullspace(a)
        rk = a.shape[1] - ns.shape[0]
        if _debug:
            stats.record(rk == self.rank(a), "rank agreement")
        return LinearSolution(rank=rk, solution=sol, nullspace=ns)

    # -- subspaces (row spans) -----------------------------------------

    def subspace_sum(self, b1: np.ndarray, b2: np.ndarray) -> np.ndarray:
        if b1.shape[1] != b2.shape[1]:
            raise ShapeError("ambient dimensions differ")
        return self.row_space(np.concatenate([b1, b2], axis=0))

    def subspace_intersection(self, b1: np.ndarray, b2: np.ndarray) -> np.ndarray:
        if b1.shape[1] != b2.shape[1]:
            raise ShapeError("ambient dimensions differ")
        if b1.shape[0] == 0 or b2.shape[0] == 0:
            return self.zeros(0, b1.shape[1])
        # coefficient pairs (alpha, beta) with alpha @ b1 = beta @ b2
        k = self.nullspace(np.concatenate([b1.T, self.neg(b2.T)], axis=1))
        vecs = self.matmul(k[:, : b1.shape[0]], b1)
        inter = self.row_space(vecs)
        if _debug:
            d1 = self.rank(b1)
            d2 = self.rank(b2)
            ds = self.subspace_sum(b1, b2).shape[0]
            stats.record(ds + inter.shape[0] == d1 + d2, "modular law dims")
        return inter

    def subspace_contains(self, outer: np.ndarray, inner: np.ndarray) -> bool:
        """span(outer) >= span(inner)?"""
        if outer.shape[1] != inner.shape[1]:
            raise ShapeError("ambient dimensions differ")
        return self.rank(outer) == self.rank(np.concatenate([outer, inner], axis=0))

    def quotient_projection(self, basis: np.ndarray, ambient: int) -> np.ndarray:
        """Projection matrix of F^ambient onto coordinates for the quotient
        by span(basis); kernel of the returned ((ambient-r) x ambient) map
        is exactly span(basis)."""
        if basis.shape[1] != ambient:
            raise ShapeError("ambient dimension mismatch")
        r, pivots = self.rref(basis)
        free = [c for c in range(ambient) if c not in set(pivots)]
        proj = self.zeros(len(free), ambient)
        for j, f in enumerate(free):
            proj[j, f] = 1
            for i, pc in enumerate(pivots):
                proj[j, pc] = (-r[i, f]) % self.p
        return proj

    def subspace_ops(self, basis1: np.ndarray, basis2: np.ndarray) -> SubspaceOps:
        """Bundle of sum, intersection, inclusion (span1 <= span2) and the
        quotient of the ambient space by span(basis1)."""
        if basis1.shape[1] != basis2.shape[1]:
            raise ShapeError("ambient dimensions differ")
        n = basis1.shape[1]
        free_units = []
        _, pivots = self.rref(basis1)
        pivset = set(pivots)
        for c in range(n):
            if c not in pivset:
                e = self.zeros(1, n)
                e[0, c] = 1
                free_units.append(e)
        qbasis = (np.concatenate(free_units, axis=0) if free_units
                  else self.zeros(0, n))
        return SubspaceOps(
            sum=self.subspace_sum(basis1, basis2),
            intersection=self.subspace_intersection(basis1, basis2),
            included=self.subspace_contains(basis2, basis1),
            quotient_basis=qbasis,
            projection=self.quotient_projection(basis1, n),
        )

    def elements(self):
        return range(self.p)
