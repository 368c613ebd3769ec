import random

import numpy as np
import pytest

from gorcat import exactla
from gorcat.rep import (
    Morphism,
    Representation,
    cover_envelope,
    decompose,
    direct_sum,
    dualize,
    dualize_morphism,
    hom_dim,
    hom_space,
    injective_envelope,
    is_isomorphic,
    morphism_parts,
    projective_cover,
    standard_module,
)


@pytest.fixture(scope="module")
def std(a3):
    return {
        "S1": standard_module(a3, "simple", "1"),
        "S2": standard_module(a3, "simple", "2"),
        "S3": standard_module(a3, "simple", "3"),
        "P1": standard_module(a3, "projective", "1"),
        "P2": standard_module(a3, "projective", "2"),
        "P3": standard_module(a3, "projective", "3"),
        "I1": standard_module(a3, "injective", "1"),
        "I2": standard_module(a3, "injective", "2"),
        "I3": standard_module(a3, "injective", "3"),
    }


def test_standard_module_shapes(std):
    assert std["P3"].dims == (1, 1, 1)
    assert all(np.array_equal(std["P3"].maps[n], np.array([[1]])) for n in ("a", "b"))
    assert std["I2"].dims == (0, 1, 1)
    assert std["S1"].dims == (1, 0, 0)
    assert std["P1"] == std["S1"]
    assert std["P2"].dims == (1, 1, 0)
    assert std["I3"].dims == (0, 0, 1)


def test_injective_one_equals_projective_three(std):
    assert is_isomorphic(std["I1"], std["P3"]).status == "yes"
    assert is_isomorphic(std["I3"], std["S3"]).status == "yes"


# Hand-solved intertwiner systems for the six A3 indecomposables.
# Order: S1, S2, S3, P2, P3, I2; entry [i][j] = dim Hom(row, col).
HOM_TABLE = {
    "S1": {"S1": 1, "S2": 0, "S3": 0, "P2": 1, "P3": 1, "I2": 0},
    "S2": {"S1": 0, "S2": 1, "S3": 0, "P2": 0, "P3": 0, "I2": 1},
    "S3": {"S1": 0, "S2": 0, "S3": 1, "P2": 0, "P3": 0, "I2": 0},
    "P2": {"S1": 0, "S2": 1, "S3": 0, "P2": 1, "P3": 1, "I2": 1},
    "P3": {"S1": 0, "S2": 0, "S3": 1, "P2": 0, "P3": 1, "I2": 1},
    "I2": {"S1": 0, "S2": 0, "S3": 1, "P2": 0, "P3": 0, "I2": 1},
}


def test_hom_dimension_table(std):
    for src, row in HOM_TABLE.items():
        for tgt, expected in row.items():
            assert hom_dim(std[src], std[tgt]) == expected, (src, tgt)
            assert len(hom_space(std[src], std[tgt])) == expected


def test_hom_from_projective_is_fiber_dimension(std):
    for name in ("P1", "P2", "P3"):
        v = name[1]
        for other in ("S1", "S2", "S3", "P2", "P3", "I2"):
            assert hom_dim(std[name], std[other]) == std[other].dim_at(v)


def test_identity_in_end(std):
    for name in ("S1", "P2", "I2"):
        m = std[name]
        homs = hom_space(m, m)
        assert len(homs) >= 1
        ident = Morphism.identity(m)
        found = any(np.array_equal(h.flat(), ident.flat()) for h in homs) or \
            any((h - ident).is_zero for h in homs)
        # identity lies in the span: solve in coordinates
        flats = np.stack([h.flat() for h in homs])
        f = m.handle.field
        assert f.solve(flats.T.copy(), ident.flat().reshape(-1, 1)) is not None
        del found


def test_kernel_of_identity_is_zero(std):
    parts = morphism_parts(Morphism.identity(std["P3"]))
    assert parts.kernel.is_zero
    assert parts.cokernel.is_zero
    assert parts.image.dims == std["P3"].dims


def test_cokernel_of_s1_into_p2_is_s2(std):
    incl = hom_space(std["S1"], std["P2"])[0]
    assert incl.is_mono()
    parts = morphism_parts(incl)
    assert is_isomorphic(parts.cokernel, std["S2"]).status == "yes"


def test_image_of_zero_map(std):
    z = Morphism.zero(std["P2"], std["I2"])
    parts = morphism_parts(z)
    assert parts.image.is_zero
    assert is_isomorphic(parts.kernel, std["P2"]).status == "yes"


def test_decompose_sum_of_simples(std):
    m, _, _ = direct_sum([std["S1"], std["S2"]])
    res = decompose(m)
    assert res.confirmed
    names = sorted((tuple(p.dims), mult) for p, mult in res.parts)
    assert names == [((0, 1, 0), 1), ((1, 0, 0), 1)]
    assert res.iso.is_iso()


def test_decompose_projective_indecomposable(std):
    res = decompose(std["P3"])
    assert res.confirmed
    assert len(res.parts) == 1 and res.parts[0][1] == 1


def test_decompose_respects_multiplicity(std):
    m, _, _ = direct_sum([std["S2"], std["P3"], std["S2"]])
    res = decompose(m)
    assert res.confirmed
    mults = sorted(mult for _, mult in res.parts)
    assert mults == [1, 2]
    assert sum(p.total_dim * mult for p, mult in res.parts) == m.total_dim


def test_iso_basic(std):
    assert is_isomorphic(std["S1"], std["S1"]).status == "yes"
    assert is_isomorphic(std["S1"], std["S2"]).status == "no"
    r = is_isomorphic(std["P3"], std["I1"])
    assert r.status == "yes"
    assert r.iso.is_iso()


def test_dualize_simples(a3, std):
    for v in ("1", "2", "3"):
        d = dualize(standard_module(a3, "simple", v))
        s_op = standard_module(a3.opposite(), "simple", v)
        assert is_isomorphic(d, s_op).status == "yes"


def test_dualize_projective_gives_injective(a3, std):
    for v in ("1", "2", "3"):
        d = dualize(standard_module(a3, "projective", v))
        i_op = standard_module(a3.opposite(), "injective", v)
        assert is_isomorphic(d, i_op).status == "yes"


def test_dualize_involution(std):
    p2 = std["P2"]
    assert dualize(dualize(p2)) == p2


def test_dualize_swaps_hom_dimensions(std):
    rng = random.Random(11)
    names = list(HOM_TABLE)
    for _ in range(10):
        x, y = rng.choice(names), rng.choice(names)
        assert hom_dim(std[x], std[y]) == hom_dim(dualize(std[y]), dualize(std[x]))


def test_hom_additive(std):
    rng = random.Random(5)
    names = list(HOM_TABLE)
    for _ in range(8):
        x, y, z = (rng.choice(names) for _ in range(3))
        s, _, _ = direct_sum([std[x], std[y]])
        assert hom_dim(s, std[z]) == hom_dim(std[x], std[z]) + hom_dim(std[y], std[z])
        assert hom_dim(std[z], s) == hom_dim(std[z], std[x]) + hom_dim(std[z], std[y])


def test_cover_of_projective_is_iso(std):
    c = projective_cover(std["P2"])
    assert c.is_iso()


def test_cover_of_s2(std):
    c = projective_cover(std["S2"])
    assert c.is_epi()
    assert is_isomorphic(c.source, std["P2"]).status == "yes"
    parts = morphism_parts(c)
    assert is_isomorphic(parts.kernel, std["S1"]).status == "yes"


def test_envelope_of_s2(std):
    e = injective_envelope(std["S2"])
    assert e.is_mono()
    assert is_isomorphic(e.target, std["I2"]).status == "yes"


def test_cover_envelope_dispatch(std):
    assert cover_envelope(std["P1"], "projective cover").is_iso()
    assert cover_envelope(std["I3"], "injective envelope").is_iso()
    with pytest.raises(ValueError):
        cover_envelope(Representation.zero(std["S1"].handle), "projective cover")


def test_random_sums_redecompose(a3, std):
    rng = random.Random(99)
    basis = [std[n] for n in ("S1", "S2", "S3", "P2", "P3", "I2")]
    for _ in range(40):
        picks = [rng.choice(basis) for _ in range(rng.randrange(1, 4))]
        m, _, _ = direct_sum(picks)
        res = decompose(m)
        assert res.confirmed
        got = sorted(
            (tuple(p.dims), mult) for p, mult in res.parts)
        want = {}
        for p in picks:
            want[tuple(p.dims)] = want.get(tuple(p.dims), 0) + 1
        assert got == sorted(want.items())


def test_exactness_identities_counted(std):
    before = exactla.stats.checked
    incl = hom_space(std["S1"], std["P3"])[0]
    morphism_parts(incl)
    assert exactla.stats.checked > before
    assert exactla.stats.failed == 0
