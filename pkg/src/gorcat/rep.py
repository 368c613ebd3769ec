"""Objects and morphisms of the module category of a bound quiver algebra.

A representation assigns a vector space dimension to every vertex and a
matrix to every arrow, M_a : M_source -> M_target (rows = target dim).
With this convention Hom(P(i), M) is naturally M_i.  Everything is
immutable after construction and all operations are pure.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import exactla
from .exactla import mat_key
from .quiver import AlgebraHandle

__all__ = [
    "Representation",
    "Morphism",
    "MorphismParts",
    "DecompositionResult",
    "IsoResult",
    "standard_module",
    "hom_space",
    "hom_dim",
    "morphism_parts",
    "kernel",
    "image",
    "cokernel",
    "decompose",
    "is_isomorphic",
    "dualize",
    "dualize_morphism",
    "direct_sum",
    "cover_envelope",
    "projective_cover",
    "injective_envelope",
    "radical_rows",
    "path_action",
]

DEFAULT_ENUM_BUDGET = 4096


class Representation:
    """Finite-dimensional representation: dims per vertex + matrix per arrow."""

    __slots__ = ("handle", "dims", "maps", "_key", "proj_vertices")

    def __init__(self, handle: AlgebraHandle, dims, maps: dict, *,
                 check: bool = True, proj_vertices: tuple[str, ...] | None = None):
        self.handle = handle
        self.dims = tuple(int(d) for d in dims)
        if len(self.dims) != len(handle.quiver.vertices) or any(d < 0 for d in self.dims):
            raise ValueError(f"bad dimension vector {dims!r}")
        f = handle.field
        vi = handle.quiver.vertex_index
        fixed = {}
        for a in handle.quiver.arrows:
            m = maps.get(a.name)
            shape = (self.dims[vi[a.target]], self.dims[vi[a.source]])
            if m is None:
                m = f.zeros(*shape)
            else:
                m = f.mat(m, *shape)
                if m.shape != shape:
                    raise ValueError(
                        f"map for arrow {a.name} has shape {m.shape}, expected {shape}")
            m.setflags(write=False)
            fixed[a.name] = m
        self.maps = fixed
        self._key = None
        # metadata for projectives built as sums of standard P(i); not part
        # of the mathematical identity of the object
        self.proj_vertices = proj_vertices
        if check:
            self._check_relations()

    def _check_relations(self):
        f = self.handle.field
        for rel in self.handle.relations:
            s, t = self.handle.quiver.path_endpoints(rel.terms[0].path)
            vi = self.handle.quiver.vertex_index
            acc = f.zeros(self.dims[vi[t]], self.dims[vi[s]])
            for term in rel.terms:
                acc = f.add(acc, f.smul(term.coeff, path_action(self, term.path)))
            if acc.any():
                raise ValueError("arrow maps do not satisfy the relations")

    @property
    def total_dim(self) -> int:
        return sum(self.dims)

    @property
    def is_zero(self) -> bool:
        return self.total_dim == 0

    def dim_at(self, vertex: str) -> int:
        return self.dims[self.handle.quiver.vertex_index[vertex]]

    def key(self) -> bytes:
        if self._key is None:
            parts = [np.asarray(self.dims, dtype=np.int64).tobytes()]
            for a in self.handle.quiver.arrows:
                parts.append(mat_key(self.maps[a.name]))
            self._key = b"|".join(parts)
        return self._key

    def __eq__(self, other):
        return (isinstance(other, Representation)
                and other.handle is self.handle and other.key() == self.key())

    def __hash__(self):
        return hash(self.key())

    def __repr__(self):
        return f"Representation(dims={self.dims})"

    @classmethod
    def zero(cls, handle: AlgebraHandle) -> "Representation":
        return cls(handle, [0] * len(handle.quiver.vertices), {}, check=False)

    def to_json(self) -> dict:
        return {
            "dims": list(self.dims),
            "maps": {a.name: self.maps[a.name].tolist()
                     for a in self.handle.quiver.arrows},
        }

    @classmethod
    def from_json(cls, handle: AlgebraHandle, data: dict) -> "Representation":
        return cls(handle, data["dims"], data.get("maps", {}))


def path_action(m: Representation, path: tuple[str, ...]) -> np.ndarray:
    """Composite matrix of a path acting on ``m`` (first arrow acts first)."""
    handle = m.handle
    f = handle.field
    vi = handle.quiver.vertex_index
    s, t = handle.quiver.path_endpoints(path)
    acc = None
    for name in path:
        step = m.maps[name]
        acc = step if acc is None else f.matmul(step, acc)
    if acc is None:
        return f.identity(m.dims[vi[s]])
    return acc


class Morphism:
    """Vertexwise matrices intertwining the arrow actions."""

    __slots__ = ("source", "target", "blocks")

    def __init__(self, source: Representation, target: Representation,
                 blocks, *, check: bool = True):
        if source.handle is not target.handle:
            raise ValueError("morphism endpoints over different algebras")
        self.source = source
        self.target = target
        f = source.handle.field
        fixed = []
        for i, b in enumerate(blocks):
            shape = (target.dims[i], source.dims[i])
            b = f.mat(b, *shape)
            if b.shape != shape:
                raise ValueError(f"block {i} has shape {b.shape}, expected {shape}")
            b.setflags(write=False)
            fixed.append(b)
        if len(fixed) != len(source.dims):
            raise ValueError("one block per vertex required")
        self.blocks = tuple(fixed)
        if check:
            self._check_intertwining()

    def _check_intertwining(self):
        h = self.source.handle
        f = h.field
        vi = h.quiver.vertex_index
        for a in h.quiver.arrows:
            s, t = vi[a.source], vi[a.target]
            lhs = f.matmul(self.blocks[t], self.source.maps[a.name])
            rhs = f.matmul(self.target.maps[a.name], self.blocks[s])
            if not np.array_equal(lhs, rhs):
                raise ValueError(f"blocks do not intertwine arrow {a.name}")

    @classmethod
    def identity(cls, m: Representation) -> "Morphism":
        f = m.handle.field
        return cls(m, m, [f.identity(d) for d in m.dims], check=False)

    @classmethod
    def zero(cls, source: Representation, target: Representation) -> "Morphism":
        f = source.handle.field
        return cls(source, target,
                   [f.zeros(dt, ds) for dt, ds in zip(target.dims, source.dims)],
                   check=False)

    def compose(self, first: "Morphism") -> "Morphism":
        """self after first."""
        if first.target is not self.source and first.target.key() != self.source.key():
            raise ValueError("composition endpoint mismatch")
        f = self.source.handle.field
        return Morphism(first.source, self.target,
                        [f.matmul(a, b) for a, b in zip(self.blocks, first.blocks)],
                        check=False)

    def __matmul__(self, other):
        return self.compose(other)

    def __add__(self, other):
        f = self.source.handle.field
        return Morphism(self.source, self.target,
                        [f.add(a, b) for a, b in zip(self.blocks, other.blocks)],
                        check=False)

    def __sub__(self, other):
        f = self.source.handle.field
        return Morphism(self.source, self.target,
                        [f.sub(a, b) for a, b in zip(self.blocks, other.blocks)],
                        check=False)

    def scaled(self, c: int) -> "Morphism":
        f = self.source.handle.field
        return Morphism(self.source, self.target,
                        [f.smul(c, b) for b in self.blocks], check=False)

    @property
    def is_zero(self) -> bool:
        return not any(b.any() for b in self.blocks)

    def is_mono(self) -> bool:
        f = self.source.handle.field
        return all(f.rank(b) == b.shape[1] for b in self.blocks)

    def is_epi(self) -> bool:
        f = self.source.handle.field
        return all(f.rank(b) == b.shape[0] for b in self.blocks)

    def is_iso(self) -> bool:
        return (self.source.dims == self.target.dims
                and all(b.shape[0] == b.shape[1] for b in self.blocks)
                and self.is_mono())

    def inverse(self) -> "Morphism":
        f = self.source.handle.field
        inv = []
        for b in self.blocks:
            bi = f.inverse(b)
            if bi is None:
                raise ValueError("morphism is not invertible")
            inv.append(bi)
        return Morphism(self.target, self.source, inv, check=False)

    def flat(self) -> np.ndarray:
        """All block entries as one vector (fixed vertex order, row-major)."""
        if not self.blocks:
            return np.zeros(0, dtype=np.int64)
        return np.concatenate([b.reshape(-1) for b in self.blocks])

    def key(self) -> bytes:
        return b"|".join(mat_key(b) for b in self.blocks)

    def to_json(self) -> dict:
        return {"source_dims": list(self.source.dims),
                "target_dims": list(self.target.dims),
                "blocks": [b.tolist() for b in self.blocks]}

    def __repr__(self):
        return f"Morphism({self.source.dims} -> {self.target.dims})"


def morphism_from_flat(source: Representation, target: Representation,
                       vec: np.ndarray, *, check: bool = False) -> Morphism:
    blocks = []
    at = 0
    for dt, ds in zip(target.dims, source.dims):
        n = dt * ds
        blocks.append(vec[at:at + n].reshape(dt, ds))
        at += n
    return Morphism(source, target, blocks, check=check)


# -- direct sums -------------------------------------------------------


def direct_sum(parts: list[Representation], handle: AlgebraHandle | None = None
               ) -> tuple[Representation, list[Morphism], list[Morphism]]:
    """Block-diagonal sum with canonical inclusions and projections."""
    if not parts:
        if handle is None:
            raise ValueError("empty direct sum needs an explicit handle")
        return Representation.zero(handle), [], []
    handle = parts[0].handle
    f = handle.field
    nv = len(handle.quiver.vertices)
    dims = [sum(p.dims[i] for p in parts) for i in range(nv)]
    maps = {}
    vi = handle.quiver.vertex_index
    for a in handle.quiver.arrows:
        blocks = [p.maps[a.name] for p in parts]
        m = f.zeros(dims[vi[a.target]], dims[vi[a.source]])
        r = c = 0
        for b in blocks:
            m[r:r + b.shape[0], c:c + b.shape[1]] = b
            r += b.shape[0]
            c += b.shape[1]
        maps[a.name] = m
    pv = None
    if all(p.proj_vertices is not None for p in parts):
        pv = tuple(v for p in parts for v in p.proj_vertices)
    total = Representation(handle, dims, maps, check=False, proj_vertices=pv)
    incls, projs = [], []
    offsets = [0] * nv
    for p in parts:
        iblocks, pblocks = [], []
        for i in range(nv):
            inc = f.zeros(dims[i], p.dims[i])
            prj = f.zeros(p.dims[i], dims[i])
            o = offsets[i]
            if p.dims[i]:
                inc[o:o + p.dims[i], :] = f.identity(p.dims[i])
                prj[:, o:o + p.dims[i]] = f.identity(p.dims[i])
            iblocks.append(inc)
            pblocks.append(prj)
        incls.append(Morphism(p, total, iblocks, check=False))
        projs.append(Morphism(total, p, pblocks, check=False))
        for i in range(nv):
            offsets[i] += p.dims[i]
    return total, incls, projs


def stack_morphisms_to_sum(fs: list[Morphism], total: Representation,
                           incls: list[Morphism]) -> Morphism:
    """Combine f_k : M -> T_k into M -> (+) T_k."""
    src = fs[0].source
    acc = Morphism.zero(src, total)
    for f_k, inc in zip(fs, incls):
        acc = acc + (inc @ f_k)
    return acc


def stack_morphisms_from_sum(fs: list[Morphism], total: Representation,
                             projs: list[Morphism]) -> Morphism:
    """Combine f_k : T_k -> M into (+) T_k -> M."""
    tgt = fs[0].target
    acc = Morphism.zero(total, tgt)
    for f_k, prj in zip(fs, projs):
        acc = acc + (f_k @ prj)
    return acc


# -- standard modules --------------------------------------------------


def standard_module(handle: AlgebraHandle, kind: str, vertex: str) -> Representation:
    """Simple S(v), indecomposable projective P(v) or injective I(v)."""
    vertex = str(vertex)
    q = handle.quiver
    if vertex not in q.vertex_index:
        raise KeyError(f"unknown vertex {vertex!r}")
    if kind == "simple":
        dims = [0] * len(q.vertices)
        dims[q.vertex_index[vertex]] = 1
        return Representation(handle, dims, {}, check=False)
    if kind == "projective":
        f = handle.field
        vi = q.vertex_index
        dims = [len(handle.basis_paths(vertex, v)) for v in q.vertices]
        maps = {}
        for a in q.arrows:
            src_basis = handle.basis_paths(vertex, a.source)
            tgt_basis = handle.basis_paths(vertex, a.target)
            tgt_index = {p: i for i, p in enumerate(tgt_basis)}
            m = f.zeros(len(tgt_basis), len(src_basis))
            for j, pth in enumerate(src_basis):
                ext = pth + (a.name,)
                key = (vertex, a.target)
                vec = f.zeros(1, len(handle.all_paths(vertex, a.target)))[0]
                vec[handle.all_paths(vertex, a.target).index(ext)] = 1
                m[:, j] = handle.reduce_vector(vertex, a.target, vec)
            maps[a.name] = m
        return Representation(handle, dims, maps, proj_vertices=(vertex,))
    if kind == "injective":
        return dualize(standard_module(handle.opposite(), "projective", vertex))
    raise ValueError(f"unknown standard module kind {kind!r}")


# -- hom spaces --------------------------------------------------------


def _hom_system(m: Representation, n: Representation) -> tuple[np.ndarray, list[int]]:
    """Coefficient matrix of the intertwining equations; unknowns are the
    row-major entries of the per-vertex blocks in vertex order."""
    h = m.handle
    f = h.field
    vi = h.quiver.vertex_index
    nv = len(m.dims)
    sizes = [n.dims[i] * m.dims[i] for i in range(nv)]
    offs = [0] * nv
    for i in range(1, nv):
        offs[i] = offs[i - 1] + sizes[i - 1]
    total = sum(sizes)
    rows = []
    for a in h.quiver.arrows:
        s, t = vi[a.source], vi[a.target]
        neq = n.dims[t] * m.dims[s]
        if neq == 0:
            continue
        block = f.zeros(neq, total)
        # f_t @ M_a : row-major vec of (X M_a) = (I  (x) M_a^T) vec(X)
        if sizes[t]:
            k1 = np.kron(np.eye(n.dims[t], dtype=np.int64), m.maps[a.name].T)
            block[:, offs[t]:offs[t] + sizes[t]] = np.mod(k1, f.p)
        # N_a @ f_s : vec(N_a X) = (N_a (x) I) vec(X)
        if sizes[s]:
            k2 = np.kron(n.maps[a.name], np.eye(m.dims[s], dtype=np.int64))
            block[:, offs[s]:offs[s] + sizes[s]] = np.mod(
                block[:, offs[s]:offs[s] + sizes[s]] - k2, f.p)
        rows.append(block)
    if rows:
        system = np.concatenate(rows, axis=0)
    else:
        system = f.zeros(0, total)
    return system, sizes


_HOM_CACHE: dict[tuple[int, bytes, bytes], list[Morphism]] = {}


def hom_space(m: Representation, n: Representation) -> list[Morphism]:
    """Basis of Hom(m, n) as morphisms."""
    if m.handle is not n.handle:
        raise ValueError("hom between representations over different algebras")
    cache_key = (id(m.handle), m.key(), n.key())
    hit = _HOM_CACHE.get(cache_key)
    if hit is not None:
        return hit
    system, _ = _hom_system(m, n)
    basis = m.handle.field.nullspace(system)
    result = [morphism_from_flat(m, n, row) for row in basis]
    _HOM_CACHE[cache_key] = result
    return result


def hom_dim(m: Representation, n: Representation) -> int:
    if m.handle is not n.handle:
        raise ValueError("hom between representations over different algebras")
    cache_key = (id(m.handle), m.key(), n.key())
    hit = _HOM_CACHE.get(cache_key)
    if hit is not None:
        return len(hit)
    system, _ = _hom_system(m, n)
    total = system.shape[1]
    return total - m.handle.field.rank(system)


# -- kernels, images, cokernels ---------------------------------------


def _induced_on_sub(f_field, sub_incls, maps, arrows, vi):
    """Arrow maps induced on a vertexwise subspace closed under the action."""
    out = {}
    for a in arrows:
        s, t = vi[a.source], vi[a.target]
        rhs = f_field.matmul(maps[a.name], sub_incls[s])
        sol = f_field.solve(sub_incls[t], rhs)
        if sol is None:
            raise AssertionError("subspace not closed under arrow action")
        out[a.name] = sol
    return out


def kernel(f: Morphism) -> tuple[Representation, Morphism]:
    """Kernel object with its inclusion into the source."""
    h = f.source.handle
    fld = h.field
    vi = h.quiver.vertex_index
    incls = []
    for b in f.blocks:
        basis = fld.nullspace(b)  # rows
        incls.append(np.ascontiguousarray(basis.T))  # columns = basis vectors
    maps = _induced_on_sub(fld, incls, f.source.maps, h.quiver.arrows, vi)
    k = Representation(h, [c.shape[1] for c in incls], maps, check=False)
    return k, Morphism(k, f.source, incls, check=False)


def image(f: Morphism) -> tuple[Representation, Morphism, Morphism]:
    """Image object with inclusion into the target and the epi from the source."""
    h = f.source.handle
    fld = h.field
    vi = h.quiver.vertex_index
    incls = []
    for b in f.blocks:
        basis = fld.row_space(b.T)  # column space of b
        incls.append(np.ascontiguousarray(basis.T))
    maps = _induced_on_sub(fld, incls, f.target.maps, h.quiver.arrows, vi)
    img = Representation(h, [c.shape[1] for c in incls], maps, check=False)
    incl = Morphism(img, f.target, incls, check=False)
    epi_blocks = []
    for inc_b, b in zip(incls, f.blocks):
        sol = fld.solve(inc_b, b)
        if sol is None:
            raise AssertionError("image inclusion does not absorb the map")
        epi_blocks.append(sol)
    epi = Morphism(f.source, img, epi_blocks, check=False)
    return img, incl, epi


def cokernel(f: Morphism) -> tuple[Representation, Morphism]:
    """Cokernel object with the projection from the target."""
    h = f.source.handle
    fld = h.field
    vi = h.quiver.vertex_index
    projs = []
    for b in f.blocks:
        im_rows = fld.row_space(b.T)
        projs.append(fld.quotient_projection(im_rows, b.shape[0]))
    maps = {}
    for a in h.quiver.arrows:
        s, t = vi[a.source], vi[a.target]
        rhs = fld.matmul(projs[t], f.target.maps[a.name])
        solt = fld.solve(projs[s].T.copy(), rhs.T.copy())
        if solt is None:
            raise AssertionError("cokernel maps not induced")
        maps[a.name] = np.ascontiguousarray(solt.T)
    q = Representation(h, [pr.shape[0] for pr in projs], maps, check=False)
    return q, Morphism(f.target, q, projs, check=False)


@dataclass(frozen=True)
class MorphismParts:
    kernel: Representation
    kernel_incl: Morphism
    image: Representation
    image_incl: Morphism
    image_epi: Morphism
    cokernel: Representation
    cokernel_proj: Morphism


def morphism_parts(f: Morphism) -> MorphismParts:
    """Kernel, image and cokernel with their structural morphisms.

    Exactness identities (rank of the inclusion + rank of f = source dim,
    image = kernel of the projection) are recorded as debug checks.
    """
    k, kincl = kernel(f)
    img, iincl, iepi = image(f)
    q, qproj = cokernel(f)
    if exactla.debug_checks_enabled():
        fld = f.source.handle.field
        for i in range(len(f.blocks)):
            exactla.stats.record(
                k.dims[i] + img.dims[i] == f.source.dims[i], "rank-nullity of block")
            exactla.stats.record(
                img.dims[i] + q.dims[i] == f.target.dims[i], "coker dims")
            comp = fld.matmul(qproj.blocks[i], iincl.blocks[i])
            exactla.stats.record(not comp.any(), "image inside kernel of projection")
    return MorphismParts(k, kincl, img, iincl, iepi, q, qproj)


# -- duality -----------------------------------------------------------


def dualize(m: Representation) -> Representation:
    """Vector-space dual over the opposite algebra; an exact contravariant
    involution (dualize(dualize(m)) == m)."""
    op = m.handle.opposite()
    maps = {a.name: np.ascontiguousarray(m.maps[a.name].T)
            for a in m.handle.quiver.arrows}
    return Representation(op, m.dims, maps, check=False)


def dualize_morphism(f: Morphism) -> Morphism:
    dn = dualize(f.target)
    dm = dualize(f.source)
    return Morphism(dn, dm, [np.ascontiguousarray(b.T) for b in f.blocks], check=False)


# -- radical / top / covers / envelopes --------------------------------


def radical_rows(m: Representation) -> list[np.ndarray]:
    """Row basis of rad(m) at each vertex: the span of images of all
    incoming arrow maps."""
    h = m.handle
    fld = h.field
    out = []
    for i, v in enumerate(h.quiver.vertices):
        pieces = [m.maps[a.name].T for a in h.quiver.arrows_in[v]]
        if pieces:
            out.append(fld.row_space(np.concatenate(pieces, axis=0)))
        else:
            out.append(fld.zeros(0, m.dims[i]))
    return out


def _morphism_from_generator(p: Representation, m: Representation,
                             vertex: str, gen: np.ndarray) -> Morphism:
    """Morphism P(vertex) -> m sending the trivial-path basis vector to gen."""
    h = m.handle
    fld = h.field
    vi = h.quiver.vertex_index
    blocks = []
    for j, w in enumerate(h.quiver.vertices):
        basis = h.basis_paths(vertex, w)
        blk = fld.zeros(m.dims[j], len(basis))
        for col, pth in enumerate(basis):
            act = path_action(m, pth) if pth else fld.identity(m.dims[vi[vertex]])
            blk[:, col] = fld.matmul(act, gen.reshape(-1, 1)).reshape(-1)
        blocks.append(blk)
    return Morphism(p, m, blocks, check=False)


def projective_cover(m: Representation) -> Morphism:
    """Epi from a minimal projective onto m (kernel inside the radical)."""
    h = m.handle
    fld = h.field
    if m.is_zero:
        return Morphism(Representation.zero(h), m, [fld.zeros(d, 0) for d in m.dims],
                        check=False)
    rad = radical_rows(m)
    comps: list[Morphism] = []
    parts: list[Representation] = []
    for i, v in enumerate(h.quiver.vertices):
        _, pivots = fld.rref(rad[i])
        pivset = set(pivots)
        free = [c for c in range(m.dims[i]) if c not in pivset]
        for c in free:
            gen = fld.zeros(1, m.dims[i])[0]
            gen[c] = 1
            p = standard_module(h, "projective", v)
            parts.append(p)
            comps.append(_morphism_from_generator(p, m, v, gen))
    total, incls, projs = direct_sum(parts, handle=h)
    cover = stack_morphisms_from_sum(comps, total, projs)
    if exactla.debug_checks_enabled():
        exactla.stats.record(cover.is_epi(), "projective cover is epi")
        k, kincl = kernel(cover)
        radp = radical_rows(total)
        for i in range(len(total.dims)):
            sub = kincl.blocks[i].T
            exactla.stats.record(
                fld.subspace_contains(radp[i], fld.row_space(sub)),
                "cover kernel inside radical")
    return cover


def injective_envelope(m: Representation) -> Morphism:
    """Mono from m into a minimal injective (dual of the projective cover)."""
    cover_of_dual = projective_cover(dualize(m))
    return dualize_morphism(cover_of_dual)


def cover_envelope(m: Representation, kind: str) -> Morphism:
    if m.is_zero:
        raise ValueError("cover/envelope of the zero object is not defined")
    if kind in ("projective cover", "cover", "projective"):
        return projective_cover(m)
    if kind in ("injective envelope", "envelope", "injective"):
        return injective_envelope(m)
    raise ValueError(f"unknown kind {kind!r}")


# -- endomorphism-driven decomposition ---------------------------------


def _stable_power(f: Morphism, total: int) -> Morphism:
    acc = f
    n = 1
    while n < max(total, 1):
        acc = acc @ acc
        n *= 2
    return acc


def _fitting_split(m: Representation, f: Morphism):
    """ker/im splitting data from a stabilized endomorphism, or None."""
    big = _stable_power(f, m.total_dim)
    if big.is_zero:
        return None
    if big.is_iso():
        return None
    k, kincl = kernel(big)
    img, iincl, _ = image(big)
    if k.is_zero or img.is_zero:
        return None
    return (k, kincl, img, iincl)


def _all_combinations(basis: list[Morphism], p: int):
    """Every nonzero F_p-combination of the basis (deterministic order)."""
    import itertools
    for coeffs in itertools.product(range(p), repeat=len(basis)):
        if not any(coeffs):
            continue
        acc = None
        for c, b in zip(coeffs, basis):
            if c:
                term = b if c == 1 else b.scaled(c)
                acc = term if acc is None else acc + term
        yield acc


def _split_candidates(basis: list[Morphism], p: int, budget: int):
    d = len(basis)
    if d and p ** d <= budget:
        yield from _all_combinations(basis, p)
        return
    for b in basis:
        yield b
    for i in range(d):
        for j in range(i + 1, d):
            yield basis[i] + basis[j]


def _certainly_indecomposable(m: Representation, ends: list[Morphism],
                              budget: int) -> bool:
    """Sound locality test for End(m).

    True when End is provably local: 1-dimensional, fully enumerated with
    no splitter, or of the form (scalars + nilpotent subalgebra).
    """
    p = m.handle.field.p
    d = len(ends)
    if d == 1:
        return True
    if p ** d <= budget:
        return True  # full enumeration already ran in the split search
    fld = m.handle.field
    ident = Morphism.identity(m)
    nils = []
    for g in ends:
        shifted = None
        for lam in range(p):
            cand = g - ident.scaled(lam)
            if _stable_power(cand, m.total_dim).is_zero:
                shifted = cand
                break
        if shifted is None:
            return False
        if not shifted.is_zero:
            nils.append(shifted)
    if not nils:
        return True
    # close the span of the shifted elements under multiplication, then
    # check the resulting subalgebra is nilpotent
    span = fld.row_space(np.stack([n.flat() for n in nils]))
    while True:
        members = [morphism_from_flat(m, m, row) for row in span]
        prods = [(a @ b).flat() for a in members for b in members]
        newspan = fld.row_space(np.concatenate([span, np.stack(prods)]))
        if newspan.shape[0] == span.shape[0]:
            break
        span = newspan
    # nilpotency: the chain of power spans S >= S^2 >= ... must reach 0
    gens = [morphism_from_flat(m, m, row) for row in span]
    power = span
    for _ in range(span.shape[0] + 1):
        if power.shape[0] == 0:
            return True
        pmaps = [morphism_from_flat(m, m, row) for row in power]
        prods = [(a @ b).flat() for a in pmaps for b in gens]
        nxt = fld.row_space(np.stack(prods)) if prods else power[:0]
        if nxt.shape[0] == 0:
            return True
        if nxt.shape[0] >= power.shape[0]:
            return False  # stabilized at a nonzero span: not nilpotent
        power = nxt
    return False


@dataclass(frozen=True)
class DecompositionResult:
    """Multiset of indecomposable summands plus the splitting isomorphism
    from their direct sum onto the input."""

    parts: tuple[tuple[Representation, int], ...]
    iso: Morphism
    confirmed: bool
    note: str = ""

    def flat_parts(self) -> list[Representation]:
        return [p for p, mult in self.parts for _ in range(mult)]


def _group_parts(flat: list[Representation], budget: int
                 ) -> tuple[list[tuple[Representation, list[int]]], bool]:
    """Group a flat list of indecomposables into iso-classes."""
    groups: list[tuple[Representation, list[int]]] = []
    confirmed = True
    for idx, r in enumerate(flat):
        placed = False
        for rep, idxs in groups:
            res = is_isomorphic(rep, r, enum_budget=budget)
            if res.status == "yes":
                idxs.append(idx)
                placed = True
                break
            if res.status == "inconclusive":
                confirmed = False
        if not placed:
            groups.append((r, [idx]))
    return groups, confirmed


_DECOMP_CACHE: dict[tuple[int, bytes, int], DecompositionResult] = {}


def decompose(m: Representation, enum_budget: int = DEFAULT_ENUM_BUDGET
              ) -> DecompositionResult:
    """Split into indecomposables by iterated Fitting splittings over End(m).

    When no splitting is found the result is flagged ``confirmed`` only if
    indecomposability is provable (local endomorphism ring); otherwise the
    verdict is an explicit "decomposition unconfirmed", never a silent guess.
    """
    h = m.handle
    cache_key = (id(h), m.key(), enum_budget)
    hit = _DECOMP_CACHE.get(cache_key)
    if hit is not None:
        return hit
    result = _decompose_uncached(m, enum_budget)
    _DECOMP_CACHE[cache_key] = result
    return result


def _decompose_uncached(m: Representation, enum_budget: int) -> DecompositionResult:
    h = m.handle
    if m.is_zero:
        z = Representation.zero(h)
        return DecompositionResult(
            (), Morphism(z, m, [np.zeros((d, 0), dtype=np.int64) for d in m.dims],
                         check=False), True)
    ends = hom_space(m, m)
    p = h.field.p
    split = None
    for cand in _split_candidates(ends, p, enum_budget):
        split = _fitting_split(m, cand)
        if split is not None:
            break
    if split is None:
        if _certainly_indecomposable(m, ends, enum_budget):
            return DecompositionResult(((m, 1),), Morphism.identity(m), True)
        return DecompositionResult(((m, 1),), Morphism.identity(m), False,
                                   note="splitting budget exhausted; "
                                        "decomposition unconfirmed")
    k, kincl, img, iincl = split
    dk = decompose(k, enum_budget)
    di = decompose(img, enum_budget)
    flat = dk.flat_parts() + di.flat_parts()
    # maps from each flat part into m
    _, k_incls, _ = direct_sum(dk.flat_parts(), handle=h)
    _, i_incls, _ = direct_sum(di.flat_parts(), handle=h)
    part_maps = []
    for j, _ in enumerate(dk.flat_parts()):
        part_maps.append(kincl @ dk.iso @ k_incls[j])
    for j, _ in enumerate(di.flat_parts()):
        part_maps.append(iincl @ di.iso @ i_incls[j])
    groups, grouped_ok = _group_parts(flat, enum_budget)
    order = [i for _, idxs in groups for i in idxs]
    newflat = [flat[i] for i in order]
    part_maps = [part_maps[i] for i in order]
    total, _, projs = direct_sum(newflat, handle=h)
    iso = stack_morphisms_from_sum(part_maps, total, projs)
    parts = tuple((rep, len(idxs)) for rep, idxs in groups)
    confirmed = dk.confirmed and di.confirmed and grouped_ok
    if exactla.debug_checks_enabled():
        exactla.stats.record(iso.is_iso(), "decomposition iso invertible")
        exactla.stats.record(
            tuple(total.dims) == tuple(m.dims), "decomposition dims partition")
    return DecompositionResult(parts, iso, confirmed)


# -- isomorphism testing ------------------------------------------------


@dataclass(frozen=True)
class IsoResult:
    status: str  # "yes" | "no" | "inconclusive"
    iso: Morphism | None = None


def _basis_iso_scan(homs: list[Morphism]) -> Morphism | None:
    for f in homs:
        if f.is_iso():
            return f
    return None


_ISO_CACHE: dict[tuple[int, bytes, bytes, int], IsoResult] = {}


def is_isomorphic(m: Representation, n: Representation,
                  enum_budget: int = DEFAULT_ENUM_BUDGET) -> IsoResult:
    """Decide m = n (up to iso), producing the isomorphism when true.

    Enumerates Hom(m, n) when small enough; otherwise falls back to
    Krull-Schmidt comparison of confirmed decompositions.
    """
    if m.handle is not n.handle:
        raise ValueError("iso test across different algebras")
    if m.dims != n.dims:
        return IsoResult("no")
    cache_key = (id(m.handle), m.key(), n.key(), enum_budget)
    hit = _ISO_CACHE.get(cache_key)
    if hit is not None:
        return hit
    result = _is_isomorphic_uncached(m, n, enum_budget)
    _ISO_CACHE[cache_key] = result
    return result


def _is_isomorphic_uncached(m: Representation, n: Representation,
                            enum_budget: int) -> IsoResult:
    if m.key() == n.key():
        return IsoResult("yes", Morphism.identity(m))
    if m.is_zero:
        return IsoResult("yes", Morphism(m, n, [np.zeros((0, 0), dtype=np.int64)
                                                for _ in m.dims], check=False))
    homs = hom_space(m, n)
    if not homs:
        return IsoResult("no")
    quick = _basis_iso_scan(homs)
    if quick is not None:
        return IsoResult("yes", quick)
    p = m.handle.field.p
    if p ** len(homs) <= enum_budget:
        for f in _all_combinations(homs, p):
            if f.is_iso():
                return IsoResult("yes", f)
        return IsoResult("no")
    dm = decompose(m, enum_budget)
    dn = decompose(n, enum_budget)
    if not (dm.confirmed and dn.confirmed):
        return IsoResult("inconclusive")
    if len(dm.flat_parts()) == 1 and len(dn.flat_parts()) == 1:
        # both indecomposable with local End: some basis element of a
        # nonempty Hom must already be an iso, and none was found above
        return IsoResult("no")
    # match parts of m against parts of n
    remaining = list(dn.flat_parts())
    matches: list[tuple[int, Morphism]] = []
    for pm in dm.flat_parts():
        found = None
        for idx, pn in enumerate(remaining):
            if pn is None:
                continue
            sub = is_isomorphic(pm, pn, enum_budget)
            if sub.status == "inconclusive":
                return IsoResult("inconclusive")
            if sub.status == "yes":
                found = (idx, sub.iso)
                break
        if found is None:
            return IsoResult("no")
        matches.append(found)
        remaining[found[0]] = None
    # assemble: m ~ sum(parts m) ~ sum(matched parts n) ~ n
    msum, _, mprojs = direct_sum(dm.flat_parts(), handle=m.handle)
    nsum, nincls, _ = direct_sum(dn.flat_parts(), handle=m.handle)
    blocks = Morphism.zero(msum, nsum)
    for k, (idx, piso) in enumerate(matches):
        blocks = blocks + (nincls[idx] @ piso @ mprojs[k])
    iso = dn.iso @ blocks @ dm.iso.inverse()
    if exactla.debug_checks_enabled():
        exactla.stats.record(iso.is_iso(), "assembled iso invertible")
    return IsoResult("yes", iso)
