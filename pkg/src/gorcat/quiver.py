"""Bound quiver algebra presentations.

A presentation is a finite acyclic quiver plus admissible relations
(k-linear combinations of parallel paths of length >= 2).  Validation
produces an immutable :class:`AlgebraHandle` that carries a canonical
path basis of the quotient algebra, grouped by (source, target); the
handle is the shared context for every representation-level computation.

Paths are written in traversal order: ``("b", "a")`` starts at the
source of ``b`` and ends at the target of ``a``.
"""
from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass

import numpy as np

from .exactla import PrimeField

__all__ = [
    "Arrow",
    "Quiver",
    "Relation",
    "RelationTerm",
    "AlgebraHandle",
    "InvalidAlgebra",
    "CycleError",
    "UnknownSymbolError",
    "RelationFormatError",
    "validate_algebra",
    "path_basis",
]


class InvalidAlgebra(ValueError):
    """Rejected algebra description."""


class CycleError(InvalidAlgebra):
    pass


class UnknownSymbolError(InvalidAlgebra):
    pass


class RelationFormatError(InvalidAlgebra):
    pass


@dataclass(frozen=True)
class Arrow:
    name: str
    source: str
    target: str


@dataclass(frozen=True)
class RelationTerm:
    coeff: int
    path: tuple[str, ...]


@dataclass(frozen=True)
class Relation:
    terms: tuple[RelationTerm, ...]


class Quiver:
    """Finite acyclic quiver with ordered vertex labels and named arrows."""

    __slots__ = ("vertices", "arrows", "vertex_index", "arrow_by_name",
                 "arrows_out", "arrows_in", "topo_order")

    def __init__(self, vertices: list[str], arrows: list[Arrow]):
        vertices = [str(v) for v in vertices]
        if len(set(vertices)) != len(vertices):
            raise InvalidAlgebra("duplicate vertex labels")
        names = [a.name for a in arrows]
        if len(set(names)) != len(names):
            raise InvalidAlgebra("duplicate arrow names")
        if set(vertices) & set(names):
            raise InvalidAlgebra("arrow names must differ from vertex labels")
        self.vertices = tuple(vertices)
        self.vertex_index = {v: i for i, v in enumerate(self.vertices)}
        for a in arrows:
            if a.source not in self.vertex_index:
                raise UnknownSymbolError(f"arrow {a.name}: unknown vertex {a.source!r}")
            if a.target not in self.vertex_index:
                raise UnknownSymbolError(f"arrow {a.name}: unknown vertex {a.target!r}")
        self.arrows = tuple(arrows)
        self.arrow_by_name = {a.name: a for a in self.arrows}
        self.arrows_out = {v: tuple(a for a in self.arrows if a.source == v)
                           for v in self.vertices}
        self.arrows_in = {v: tuple(a for a in self.arrows if a.target == v)
                          for v in self.vertices}
        self.topo_order = self._toposort()

    def _toposort(self) -> tuple[str, ...]:
        indeg = {v: 0 for v in self.vertices}
        for a in self.arrows:
            indeg[a.target] += 1
        queue = [v for v in self.vertices if indeg[v] == 0]
        order = []
        while queue:
            v = queue.pop(0)
            order.append(v)
            for a in self.arrows_out[v]:
                indeg[a.target] -= 1
                if indeg[a.target] == 0:
                    queue.append(a.target)
        if len(order) != len(self.vertices):
            raise CycleError("quiver has an oriented cycle")
        return tuple(order)

    def path_endpoints(self, path: tuple[str, ...]) -> tuple[str, str]:
        """(source, target) of a composable arrow-name sequence."""
        if not path:
            raise RelationFormatError("empty path has no endpoints")
        arrows = []
        for name in path:
            if name not in self.arrow_by_name:
                raise UnknownSymbolError(f"unknown arrow {name!r} in path")
            arrows.append(self.arrow_by_name[name])
        for x, y in zip(arrows, arrows[1:]):
            if x.target != y.source:
                raise RelationFormatError(
                    f"path not composable: {x.name} ends at {x.target}, "
                    f"{y.name} starts at {y.source}")
        return arrows[0].source, arrows[-1].target


class AlgebraHandle:
    """Validated bound quiver algebra over ``PrimeField``.

    ``basis_paths(s, t)`` is the canonical basis of e_t * Lambda * e_s as
    reduced paths; the sum of their counts is the algebra dimension.
    """

    __slots__ = ("field", "quiver", "relations", "_paths", "_path_index",
                 "_ideal", "_free_cols", "_basis", "dim", "_op", "_json",
                 "_fingerprint")

    def __init__(self, field: PrimeField, quiver: Quiver,
                 relations: tuple[Relation, ...]):
        self.field = field
        self.quiver = quiver
        self.relations = relations
        self._check_relations()
        self._enumerate_paths()
        self._build_ideal()
        self._op = None
        self._json = None
        self._fingerprint = None
        self.dim = sum(len(b) for b in self._basis.values())

    # -- validation ----------------------------------------------------

    def _check_relations(self):
        for rel in self.relations:
            if not rel.terms:
                raise RelationFormatError("relation with no terms")
            sig = None
            for term in rel.terms:
                if len(term.path) < 2:
                    raise RelationFormatError(
                        "relation paths must have length >= 2 (admissibility)")
                ends = self.quiver.path_endpoints(term.path)
                if sig is None:
                    sig = ends
                elif ends != sig:
                    raise RelationFormatError(
                        "relation terms must share source and target")
                if term.coeff % self.field.p == 0:
                    raise RelationFormatError("relation term with zero coefficient")

    # -- path algebra structure ----------------------------------------

    def _enumerate_paths(self):
        q = self.quiver
        self._paths = {}
        for s in q.vertices:
            for t in q.vertices:
                self._paths[(s, t)] = []
        # depth-first growth; acyclicity keeps this finite
        for s in q.vertices:
            stack = [((), s)]
            while stack:
                path, at = stack.pop()
                self._paths[(s, at)].append(path)
                for a in q.arrows_out[at]:
                    stack.append((path + (a.name,), a.target))
        for key in self._paths:
            self._paths[key].sort(key=lambda p: (len(p), p))
        self._path_index = {
            key: {p: i for i, p in enumerate(plist)}
            for key, plist in self._paths.items()
        }

    def _build_ideal(self):
        f = self.field
        q = self.quiver
        gens: dict[tuple[str, str], list[np.ndarray]] = {}
        for rel in self.relations:
            s, t = q.path_endpoints(rel.terms[0].path)
            # all two-sided extensions u . rel . v
            for x in q.vertices:
                for u in self._paths[(x, s)]:
                    for y in q.vertices:
                        for v in self._paths[(t, y)]:
                            vec = f.zeros(1, len(self._paths[(x, y)]))
                            for term in rel.terms:
                                full = u + term.path + v
                                idx = self._path_index[(x, y)][full]
                                vec[0, idx] = (vec[0, idx] + term.coeff) % f.p
                            gens.setdefault((x, y), []).append(vec)
        self._ideal = {}
        self._free_cols = {}
        self._basis = {}
        for key, plist in self._paths.items():
            rows = gens.get(key)
            if rows:
                red, pivots = f.rref(np.concatenate(rows, axis=0))
                red = np.ascontiguousarray(red[: len(pivots)])
            else:
                red, pivots = f.zeros(0, len(plist)), ()
            pivset = set(pivots)
            free = tuple(i for i in range(len(plist)) if i not in pivset)
            self._ideal[key] = (red, pivots)
            self._free_cols[key] = free
            self._basis[key] = tuple(plist[i] for i in free)

    # -- public API ------------------------------------------------------

    @property
    def p(self) -> int:
        return self.field.p

    def vertex_count(self) -> int:
        return len(self.quiver.vertices)

    def basis_paths(self, source: str, target: str) -> tuple[tuple[str, ...], ...]:
        return self._basis[(source, target)]

    def all_paths(self, source: str, target: str) -> list[tuple[str, ...]]:
        return list(self._paths[(source, target)])

    def reduce_vector(self, source: str, target: str, vec: np.ndarray) -> np.ndarray:
        """Coordinates of a free-path-algebra vector in the quotient basis."""
        f = self.field
        key = (source, target)
        red, pivots = self._ideal[key]
        v = np.mod(np.array(vec, dtype=np.int64).reshape(-1), f.p)
        for i, pc in enumerate(pivots):
            if v[pc]:
                v = np.mod(v - v[pc] * red[i], f.p)
        return v[list(self._free_cols[key])] if self._free_cols[key] else f.zeros(1, 0)[0]

    def path_class(self, path: tuple[str, ...], source: str | None = None
                   ) -> tuple[str, str, np.ndarray]:
        """(source, target, coordinates) of a path's class in the basis."""
        if path:
            s, t = self.quiver.path_endpoints(path)
        else:
            if source is None:
                raise RelationFormatError("trivial path needs an explicit vertex")
            s = t = source
        vec = self.field.zeros(1, len(self._paths[(s, t)]))[0]
        vec[self._path_index[(s, t)][tuple(path)]] = 1
        return s, t, self.reduce_vector(s, t, vec)

    def compose_class(self, source: str, mid: str, target: str,
                      coords_first: np.ndarray, coords_second: np.ndarray) -> np.ndarray:
        """Class of (second after first): first in basis(source, mid),
        second in basis(mid, target)."""
        f = self.field
        out = f.zeros(1, len(self._paths[(source, target)]))[0]
        b1 = self._basis[(source, mid)]
        b2 = self._basis[(mid, target)]
        for i, p1 in enumerate(b1):
            c1 = int(coords_first[i])
            if not c1:
                continue
            for j, p2 in enumerate(b2):
                c2 = int(coords_second[j])
                if not c2:
                    continue
                idx = self._path_index[(source, target)][p1 + p2]
                out[idx] = (out[idx] + c1 * c2) % f.p
        return self.reduce_vector(source, target, out)

    def opposite(self) -> "AlgebraHandle":
        """Handle for the opposite algebra (arrows and relation paths
        reversed); the opposite of the opposite is this handle itself."""
        if self._op is None:
            q = self.quiver
            arrows = [Arrow(a.name, a.target, a.source) for a in q.arrows]
            rels = tuple(
                Relation(tuple(RelationTerm(t.coeff, tuple(reversed(t.path)))
                               for t in rel.terms))
                for rel in self.relations
            )
            op = AlgebraHandle(self.field, Quiver(list(q.vertices), arrows), rels)
            op._op = self
            self._op = op
        return self._op

    def to_json(self) -> dict:
        if self._json is None:
            self._json = {
                "field": {"char": self.field.p},
                "vertices": list(self.quiver.vertices),
                "arrows": [
                    {"name": a.name, "from": a.source, "to": a.target}
                    for a in self.quiver.arrows
                ],
                "relations": [
                    {"terms": [{"coeff": int(t.coeff % self.field.p),
                                "path": list(t.path)}
                               for t in rel.terms]}
                    for rel in self.relations
                ],
            }
        return self._json

    def fingerprint(self) -> str:
        if self._fingerprint is None:
            blob = json.dumps(self.to_json(), sort_keys=True).encode()
            self._fingerprint = hashlib.sha256(blob).hexdigest()
        return self._fingerprint

    def __repr__(self):
        return (f"AlgebraHandle(p={self.field.p}, vertices={len(self.quiver.vertices)}, "
                f"arrows={len(self.quiver.arrows)}, dim={self.dim})")


def validate_algebra(raw: dict) -> AlgebraHandle:
    """Validate a parsed algebra description into an immutable handle.

    Rejects cyclic quivers, unknown vertices/arrows, non-composable or
    too-short relation paths and non-prime characteristic.
    """
    if not isinstance(raw, dict):
        raise InvalidAlgebra("algebra description must be a mapping")
    field_part = raw.get("field", {})
    char = field_part.get("char") if isinstance(field_part, dict) else None
    if char is None:
        char = raw.get("char", raw.get("p", 2))
    try:
        field = PrimeField(int(char))
    except (TypeError, ValueError) as exc:
        raise InvalidAlgebra(str(exc)) from None
    vertices = raw.get("vertices")
    if not vertices:
        raise InvalidAlgebra("at least one vertex is required")
    arrows = []
    for item in raw.get("arrows", []):
        try:
            arrows.append(Arrow(str(item["name"]), str(item["from"]), str(item["to"])))
        except (KeyError, TypeError):
            raise InvalidAlgebra(f"malformed arrow entry: {item!r}") from None
    quiver = Quiver([str(v) for v in vertices], arrows)
    relations = []
    for item in raw.get("relations", []) or []:
        terms = item.get("terms") if isinstance(item, dict) else None
        if not terms:
            raise RelationFormatError(f"malformed relation entry: {item!r}")
        parsed = tuple(
            RelationTerm(int(t.get("coeff", 1)), tuple(str(x) for x in t["path"]))
            for t in terms
        )
        relations.append(Relation(parsed))
    return AlgebraHandle(field, quiver, tuple(relations))


def path_basis(handle: AlgebraHandle) -> dict[tuple[str, str], list[tuple[str, ...]]]:
    """Reduced path basis grouped by (source, target); totals to dim."""
    out = {}
    for s in handle.quiver.vertices:
        for t in handle.quiver.vertices:
            b = handle.basis_paths(s, t)
            if b:
                out[(s, t)] = list(b)
    return out
