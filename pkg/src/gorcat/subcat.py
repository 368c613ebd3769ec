"""Finite additively-closed subcategories and minimal approximations.

A :class:`Subcategory` is a set of atlas indecomposables with add-closure
semantics: an arbitrary object belongs when all its indecomposable
summands are members.  Left/right approximations are built from Hom bases
and minimized by greedy summand deletion; the deletion test is linear
(surjectivity of the composition map onto the Hom spaces), so the result
factors every test map by construction.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import exactla
from .homcalc import IndecAtlas, VanishVerdict, ext_vanishes_all_degrees
from .rep import (
    Morphism,
    Representation,
    direct_sum,
    hom_dim,
    morphism_parts,
    stack_morphisms_from_sum,
    stack_morphisms_to_sum,
)

__all__ = [
    "Subcategory",
    "ApproxResult",
    "minimal_approximation",
    "SelfOrthVerdict",
    "is_self_orthogonal",
    "perp",
    "GenCogenReport",
    "gen_cogen_check",
]


class Subcategory:
    """add(members) inside a fixed atlas; members are pairwise
    non-isomorphic indecomposables given by their atlas indices."""

    def __init__(self, atlas: IndecAtlas, indices):
        self.atlas = atlas
        seen = []
        for i in indices:
            i = int(i)
            if i < 0 or i >= len(atlas.members):
                raise IndexError(f"atlas index {i} out of range")
            if i not in seen:
                seen.append(i)
        self.indices = tuple(sorted(seen))

    @classmethod
    def from_names(cls, atlas: IndecAtlas, names) -> "Subcategory":
        return cls(atlas, [atlas.by_name(n) for n in names])

    @classmethod
    def from_reps(cls, atlas: IndecAtlas, reps) -> "Subcategory":
        idxs = []
        for r in reps:
            counts = atlas.classify(r)
            if counts is None:
                raise ValueError("object does not classify into the atlas")
            idxs.extend(counts)
        return cls(atlas, idxs)

    @property
    def members(self) -> list[Representation]:
        return [self.atlas.members[i] for i in self.indices]

    @property
    def names(self) -> list[str]:
        return [self.atlas.names[i] for i in self.indices]

    @property
    def is_empty(self) -> bool:
        return not self.indices

    def key(self) -> tuple:
        return (self.atlas.fingerprint(), self.indices)

    def __eq__(self, other):
        return isinstance(other, Subcategory) and other.key() == self.key()

    def __hash__(self):
        return hash(self.key())

    def __contains__(self, obj) -> bool:
        return self.contains(obj)

    def contains(self, obj) -> bool:
        """add-membership: every indecomposable summand is a member."""
        if isinstance(obj, Representation):
            counts = self.atlas.classify(obj)
            if counts is None:
                raise ValueError("membership undecidable: decomposition unconfirmed")
            return all(i in self.indices for i in counts)
        if isinstance(obj, int):
            return obj in self.indices
        raise TypeError(f"cannot test membership of {type(obj)!r}")

    def contains_counts(self, counts: dict[int, int]) -> bool:
        return all(i in self.indices for i in counts)

    def __repr__(self):
        return f"Subcategory({', '.join(self.names)})"


@dataclass
class ApproxResult:
    """A left approximation u: M -> C0 or right approximation p: C0 -> M
    with minimality/mono/epi flags and the (co)kernel data."""

    morphism: Morphism
    side: str
    minimal: bool
    mono: bool
    epi: bool
    kernel: Representation
    kernel_incl: Morphism
    cokernel: Representation
    cokernel_proj: Morphism
    multiplicities: dict[int, int]

    @property
    def target(self) -> Representation:
        return self.morphism.target

    @property
    def source(self) -> Representation:
        return self.morphism.source


def _factors_everything(u: Morphism, cat: Subcategory, side: str) -> bool:
    """Left: every map source(u) -> member factors through u.
    Right: every map member -> target(u) factors through u."""
    from .rep import hom_space
    fld = u.source.handle.field
    atlas = cat.atlas
    for i in cat.indices:
        c = atlas.members[i]
        if side == "left":
            tests = hom_space(u.source, c)
            if not tests:
                continue
            through = hom_space(u.target, c)
            cols = [(psi @ u).flat() for psi in through]
        else:
            tests = hom_space(c, u.target)
            if not tests:
                continue
            through = hom_space(c, u.source)
            cols = [(u @ psi).flat() for psi in through]
        want = np.stack([t.flat() for t in tests])
        have = fld.row_space(np.stack(cols)) if cols else fld.zeros(0, want.shape[1])
        if not fld.subspace_contains(have, want):
            return False
    return True


_APPROX_CACHE: dict[tuple, ApproxResult] = {}


def minimal_approximation(m: Representation, cat: Subcategory, side: str
                          ) -> ApproxResult:
    """Minimal left/right add(C)-approximation of m.

    Builds the universal map from Hom bases (multiplicity = Hom dimension
    per member), then greedily deletes copies whose removal keeps the
    factorization property; by Krull-Schmidt the surviving map is the
    minimal approximation.  The zero map is legal when all Hom spaces
    vanish.
    """
    if side not in ("left", "right"):
        raise ValueError("side must be 'left' or 'right'")
    cache_key = (m.key(), cat.key(), side)
    hit = _APPROX_CACHE.get(cache_key)
    if hit is not None:
        return hit
    from .rep import hom_space
    atlas = cat.atlas
    handle = atlas.handle
    fld = handle.field
    copies: list[tuple[int, Morphism]] = []
    for i in cat.indices:
        c = atlas.members[i]
        basis = hom_space(m, c) if side == "left" else hom_space(c, m)
        for phi in basis:
            copies.append((i, phi))
    kept = list(range(len(copies)))

    def build(keep: list[int]) -> Morphism:
        if not keep:
            zero = Representation.zero(handle)
            if side == "left":
                return Morphism(m, zero, [np.zeros((0, d), dtype=np.int64)
                                          for d in m.dims], check=False)
            return Morphism(zero, m, [np.zeros((d, 0), dtype=np.int64)
                                      for d in m.dims], check=False)
        parts = [atlas.members[copies[k][0]] for k in keep]
        total, incls, projs = direct_sum(parts, handle=handle)
        if side == "left":
            return stack_morphisms_to_sum([copies[k][1] for k in keep], total, incls)
        return stack_morphisms_from_sum([copies[k][1] for k in keep], total, projs)

    changed = True
    while changed:
        changed = False
        for pos in list(kept):
            trial = [k for k in kept if k != pos]
            cand = build(trial)
            if _factors_everything(cand, cat, side):
                kept = trial
                changed = True
    u = build(kept)
    if exactla.debug_checks_enabled():
        exactla.stats.record(_factors_everything(u, cat, side),
                             "approximation factors every test map")
    parts = morphism_parts(u)
    mult: dict[int, int] = {}
    for k in kept:
        mult[copies[k][0]] = mult.get(copies[k][0], 0) + 1
    result = ApproxResult(
        morphism=u, side=side, minimal=True,
        mono=u.is_mono(), epi=u.is_epi(),
        kernel=parts.kernel, kernel_incl=parts.kernel_incl,
        cokernel=parts.cokernel, cokernel_proj=parts.cokernel_proj,
        multiplicities=mult)
    _APPROX_CACHE[cache_key] = result
    return result


@dataclass(frozen=True)
class SelfOrthVerdict:
    ok: bool
    status: str                    # "yes" | "no" | "inconclusive"
    witness: tuple | None = None   # (source_name, target_name, degree, dim)
    failures: tuple = ()           # every failing (source, target, degree, dim)


def is_self_orthogonal(cat: Subcategory, degree_bound: int | None = None
                       ) -> SelfOrthVerdict:
    """Ext^{>=1}(X, Y) = 0 for all member pairs?"""
    atlas = cat.atlas
    inconclusive = False
    failures: list[tuple] = []
    for i in cat.indices:
        for j in cat.indices:
            verdict = ext_vanishes_all_degrees(
                atlas.members[i], [atlas.members[j]],
                atlas=atlas if atlas.complete else None,
                degree_bound=degree_bound)
            if verdict.status == "fails":
                deg, name, dim = verdict.witness[:3]
                failures.append((atlas.names[i], name, deg, dim))
            elif verdict.status == "inconclusive":
                inconclusive = True
    if failures:
        return SelfOrthVerdict(False, "no", failures[0], tuple(failures))
    if inconclusive:
        return SelfOrthVerdict(False, "inconclusive")
    return SelfOrthVerdict(True, "yes")


def perp(cat: Subcategory, side: str, degrees: str = "all") -> Subcategory:
    """Perpendicular subcategory within the atlas.

    side="left": objects A with Ext(A, C) vanishing; side="right": the
    objects with Ext(C, A) vanishing.  degrees is "all" or "1".
    """
    atlas = cat.atlas
    if not atlas.complete:
        raise ValueError("perpendicular categories need a complete atlas")
    if side not in ("left", "right"):
        raise ValueError("side must be 'left' or 'right'")
    if degrees not in ("all", "1", 1):
        raise ValueError("degrees must be 'all' or '1'")
    out = []
    for i, m in enumerate(atlas.members):
        ok = True
        if degrees in ("1", 1):
            for j in cat.indices:
                d = atlas.ext1[i, j] if side == "left" else atlas.ext1[j, i]
                if d:
                    ok = False
                    break
        else:
            if side == "left":
                v = ext_vanishes_all_degrees(
                    m, [atlas.members[j] for j in cat.indices], atlas=atlas)
                ok = v.status == "vanishes"
            else:
                ok = True
                for j in cat.indices:
                    v = ext_vanishes_all_degrees(atlas.members[j], [m], atlas=atlas)
                    if v.status != "vanishes":
                        ok = False
                        break
        if ok:
            out.append(i)
    return Subcategory(atlas, out)


@dataclass
class GenCogenReport:
    generator: bool
    cogenerator: bool
    projective_generator: bool
    injective_cogenerator: bool
    witnesses: dict
    failures: dict


def gen_cogen_check(cat: Subcategory, ambient: Subcategory) -> GenCogenReport:
    """Is C a (projective) generator / (injective) cogenerator for X?

    cogenerator: every X-member admits a mono into add(C) with cokernel in
    add(X), checked on the minimal left approximation; generator dually.
    The orthogonality halves go through Ext-vanishing in all degrees.
    """
    atlas = cat.atlas
    if atlas is not ambient.atlas:
        raise ValueError("subcategories live in different atlases")
    if not set(cat.indices) <= set(ambient.indices):
        raise ValueError("C must be contained in X")
    witnesses: dict = {"cogenerator": {}, "generator": {}}
    failures: dict = {}
    cogen = True
    for i in ambient.indices:
        x = atlas.members[i]
        ap = minimal_approximation(x, cat, "left")
        ok = ap.mono and (ap.cokernel.is_zero
                          or ambient.contains(ap.cokernel))
        if ok:
            witnesses["cogenerator"][atlas.names[i]] = ap
        else:
            cogen = False
            failures.setdefault("cogenerator", {})[atlas.names[i]] = (
                "approximation not mono" if not ap.mono
                else "cokernel leaves the ambient subcategory")
    gen = True
    for i in ambient.indices:
        x = atlas.members[i]
        ap = minimal_approximation(x, cat, "right")
        ok = ap.epi and (ap.kernel.is_zero or ambient.contains(ap.kernel))
        if ok:
            witnesses["generator"][atlas.names[i]] = ap
        else:
            gen = False
            failures.setdefault("generator", {})[atlas.names[i]] = (
                "approximation not epi" if not ap.epi
                else "kernel leaves the ambient subcategory")
    # X perp C for injective cogenerator; C perp X for projective generator
    x_perp_c = True
    c_perp_x = True
    for i in ambient.indices:
        v = ext_vanishes_all_degrees(
            atlas.members[i], [atlas.members[j] for j in cat.indices], atlas=atlas)
        if v.status != "vanishes":
            x_perp_c = False
            failures.setdefault("x_perp_c", {})[atlas.names[i]] = v.witness
    for j in cat.indices:
        v = ext_vanishes_all_degrees(
            atlas.members[j], [atlas.members[i] for i in ambient.indices], atlas=atlas)
        if v.status != "vanishes":
            c_perp_x = False
            failures.setdefault("c_perp_x", {})[atlas.names[j]] = v.witness
    return GenCogenReport(
        generator=gen,
        cogenerator=cogen,
        projective_generator=gen and c_perp_x,
        injective_cogenerator=cogen and x_perp_c,
        witnesses=witnesses,
        failures=failures,
    )
