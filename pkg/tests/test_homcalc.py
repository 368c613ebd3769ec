import random

import numpy as np
import pytest

from gorcat.homcalc import (
    IndecAtlas,
    NotExactError,
    ar_translate,
    enumerate_indecomposables,
    ext1_class_of_ses,
    ext_space,
    ext_vanishes_all_degrees,
    hom_exactness,
    proj_resolution,
    pullback,
    pushout,
    realize_ext1,
    ses_check,
    split_ses,
)
from gorcat.rep import (
    Morphism,
    direct_sum,
    hom_dim,
    hom_space,
    is_isomorphic,
    morphism_parts,
    standard_module,
)


@pytest.fixture(scope="module")
def std(a3):
    return {k: standard_module(a3, kind, v)
            for k, kind, v in [
                ("S1", "simple", "1"), ("S2", "simple", "2"), ("S3", "simple", "3"),
                ("P1", "projective", "1"), ("P2", "projective", "2"),
                ("P3", "projective", "3"),
                ("I1", "injective", "1"), ("I2", "injective", "2"),
                ("I3", "injective", "3")]}


@pytest.fixture(scope="module")
def atlas(a3):
    return enumerate_indecomposables(a3, "knitting")


def s1_p2_s2_sequence(std):
    f = hom_space(std["S1"], std["P2"])[0]
    parts = morphism_parts(f)
    return ses_check(f, parts.cokernel_proj), parts


def test_ses_check_accepts_kernel_sequence(std):
    ses, parts = s1_p2_s2_sequence(std)
    assert is_isomorphic(ses.right, std["S2"]).status == "yes"


def test_ses_check_rejects_non_exact(std):
    f = hom_space(std["S1"], std["P2"])[0]
    bad_g = Morphism.zero(std["P2"], std["S2"])
    with pytest.raises(NotExactError):
        ses_check(f, bad_g)


def test_split_sequence_hom_exact_both_sides(std):
    ses = split_ses(std["S1"], std["S2"])
    for t in (std["S1"], std["P3"], std["I2"], std["S3"]):
        assert hom_exactness(ses, t, "from")
        assert hom_exactness(ses, t, "into")


def test_nonsplit_sequence_hom_exactness(std):
    ses, _ = s1_p2_s2_sequence(std)
    # id_{S1} does not extend along S1 -> P2: dim Hom(P2,S1)=0 < dim Hom(S1,S1)=1
    assert not hom_exactness(ses, std["S1"], "into")
    # Hom(P3,-) is component-at-3, and all third components here vanish
    assert hom_exactness(ses, std["P3"], "from")


def test_pushout_of_identity(std):
    h = hom_space(std["S1"], std["P3"])[0]
    po = pushout(Morphism.identity(std["S1"]), h)
    assert is_isomorphic(po.obj, std["P3"]).status == "yes"


def test_pushout_dimension_formula(std):
    f = hom_space(std["S1"], std["P2"])[0]
    h = hom_space(std["S1"], std["P3"])[0]
    po = pushout(f, h)
    want = tuple(a + b - c for a, b, c in
                 zip(std["P2"].dims, std["P3"].dims, std["S1"].dims))
    assert po.obj.dims == want == (1, 2, 1)


def test_pullback_dimension_formula(std):
    g1 = [m for m in hom_space(std["P3"], std["S3"]) if m.is_epi()][0]
    g2 = [m for m in hom_space(std["I2"], std["S3"]) if m.is_epi()][0]
    pb = pullback(g1, g2)
    want = tuple(a + b - c for a, b, c in
                 zip(std["P3"].dims, std["I2"].dims, std["S3"].dims))
    # dims(P3) + dims(I2) - dims(S3): the legs are epi, so the defect is S3
    assert pb.obj.dims == want == (1, 2, 1)


def test_pushout_universal_property_random(a3, std):
    rng = random.Random(424242)
    names = ["S1", "S2", "S3", "P2", "P3", "I2"]
    fld = a3.field
    done = 0
    while done < 50:
        a, b, c, t = (std[rng.choice(names)] for _ in range(4))
        fs = hom_space(a, b)
        hs = hom_space(a, c)
        if not fs or not hs:
            continue
        f = rng.choice(fs)
        h = rng.choice(hs)
        po = pushout(f, h)
        # sample a compatible test pair (x, y) from the joint solution space
        xs = hom_space(b, t)
        ys = hom_space(c, t)
        nx, ny = len(xs), len(ys)
        if nx + ny == 0:
            continue
        cols = []
        for x in xs:
            cols.append((x @ f).flat())
        for y in ys:
            cols.append(((y @ h).scaled(fld.p - 1)).flat())
        system = np.stack(cols).T if cols else fld.zeros(0, 0)
        null = fld.nullspace(system.copy()) if system.size else fld.identity(nx + ny)
        if null.shape[0] == 0:
            continue
        coeffs = null[rng.randrange(null.shape[0])]
        x = Morphism.zero(b, t)
        for cf, xb in zip(coeffs[:nx], xs):
            if cf:
                x = x + xb.scaled(int(cf))
        y = Morphism.zero(c, t)
        for cf, yb in zip(coeffs[nx:], ys):
            if cf:
                y = y + yb.scaled(int(cf))
        assert ((x @ f) - (y @ h)).is_zero
        w = po.factor_through(x, y)
        assert ((w @ po.from_first) - x).is_zero
        assert ((w @ po.from_second) - y).is_zero
        done += 1


def test_resolution_of_projective_has_length_zero(std):
    res = proj_resolution(std["P2"])
    assert res.complete and res.length() == 0


def test_resolution_of_s3(std):
    res = proj_resolution(std["S3"])
    assert res.complete and res.length() == 1
    assert is_isomorphic(res.terms[0], std["P3"]).status == "yes"
    assert is_isomorphic(res.terms[1], std["P2"]).status == "yes"


def test_resolution_of_s3_with_relation(a3ab0):
    s3 = standard_module(a3ab0, "simple", "3")
    res = proj_resolution(s3)
    assert res.complete and res.length() == 2
    names = [standard_module(a3ab0, "projective", v) for v in ("3", "2", "1")]
    for term, expected in zip(res.terms, names):
        assert is_isomorphic(term, expected).status == "yes"


def test_ext_dimensions(std):
    assert ext_space(std["S3"], std["S1"], 1).dim == 0
    assert ext_space(std["S2"], std["S1"], 1).dim == 1
    for pname in ("P1", "P2", "P3"):
        for other in ("S1", "S2", "S3", "I2"):
            assert ext_space(std[pname], std[other], 1).dim == 0


def test_ext_dimension_shift_with_relation(a3ab0):
    s3 = standard_module(a3ab0, "simple", "3")
    s2 = standard_module(a3ab0, "simple", "2")
    s1 = standard_module(a3ab0, "simple", "1")
    res = proj_resolution(s3)
    omega1 = res.syzygies[0]
    assert is_isomorphic(omega1, s2).status == "yes"
    assert ext_space(s3, s1, 2).dim == ext_space(s2, s1, 1).dim == 1


def test_realize_zero_class_splits(std):
    es = ext_space(std["S2"], std["S1"], 1)
    ses = realize_ext1(es, [0])
    assert is_isomorphic(ses.mid, direct_sum([std["S1"], std["S2"]])[0]).status == "yes"


def test_realize_nonzero_class_is_p2(std):
    es = ext_space(std["S2"], std["S1"], 1)
    ses = realize_ext1(es, [1])
    assert is_isomorphic(ses.mid, std["P2"]).status == "yes"


def test_realize_s3_s2_gives_i2(std):
    es = ext_space(std["S3"], std["S2"], 1)
    assert es.dim == 1
    ses = realize_ext1(es, [1])
    assert is_isomorphic(ses.mid, std["I2"]).status == "yes"


def test_ext_class_round_trip(std):
    for src, tgt in [("S2", "S1"), ("S3", "S2")]:
        es = ext_space(std[src], std[tgt], 1)
        for coeffs in ([0], [1]):
            ses = realize_ext1(es, coeffs)
            got = ext1_class_of_ses(ses, es)
            if any(coeffs):
                assert list(got) == coeffs
            else:
                assert not any(got)


def test_ar_translate_values(std):
    t = ar_translate(std["S3"], "tau")
    assert is_isomorphic(t, std["S2"]).status == "yes"
    assert ar_translate(std["P2"], "tau") is None
    assert ar_translate(std["P1"], "tau") is None
    t = ar_translate(std["S2"], "tau_inv")
    assert is_isomorphic(t, std["S3"]).status == "yes"
    assert ar_translate(std["I2"], "tau_inv") is None
    # derived from the mesh structure: the middle orbit is P2 ... I2
    t = ar_translate(std["I2"], "tau")
    assert is_isomorphic(t, std["P2"]).status == "yes"


def test_ar_duality_spot_check(a3, atlas):
    # dim Ext^1(X, Y) = dim Hom(Y, tau X) for X non-projective (hereditary)
    for i, x in enumerate(atlas.members):
        ti = atlas.tau.get(i)
        if ti is None:
            continue
        for j, y in enumerate(atlas.members):
            assert atlas.ext1[i, j] == atlas.hom[j, ti]


def test_atlas_a3_has_six(atlas):
    assert atlas.complete
    assert len(atlas) == 6
    assert sorted(atlas.names) == sorted(["S(1)", "S(2)", "S(3)", "P(2)", "P(3)", "I(2)"])


def test_atlas_a2(a2):
    atlas = enumerate_indecomposables(a2, "knitting")
    assert atlas.complete and len(atlas) == 3


def test_atlas_d4(d4):
    atlas = enumerate_indecomposables(d4, "knitting")
    assert atlas.complete and len(atlas) == 12


def test_atlas_a3ab0(a3ab0):
    atlas = enumerate_indecomposables(a3ab0, "knitting")
    assert atlas.complete and len(atlas) == 5


def test_kronecker_incomplete(kronecker):
    atlas = enumerate_indecomposables(kronecker, "knitting", max_modules=8)
    assert not atlas.complete


def test_brute_force_matches_knitting(a2, a3, d4):
    for handle, bound in ((a2, (1, 1)), (a3, (1, 1, 1)), (d4, (1, 1, 1, 2))):
        knit = enumerate_indecomposables(handle, "knitting")
        brute = enumerate_indecomposables(handle, "brute", dim_bound=bound)
        assert not brute.complete
        within = [m for m in knit.members
                  if all(d <= b for d, b in zip(m.dims, bound))]
        assert len(within) == len(brute.members)
        for m in within:
            assert brute.member_index(m) is not None


def test_ext_vanishing_reachability(a3, atlas, std):
    v = ext_vanishes_all_degrees(std["S2"], [std["S1"]], atlas=atlas)
    assert v.status == "fails"
    assert v.witness[0] == 1
    for m in atlas.members:
        assert ext_vanishes_all_degrees(
            m, [std["P3"], std["I2"], std["I3"]], atlas=atlas).status == "vanishes"


def test_ext_vanishing_degree_two_with_relation(a3ab0):
    s3 = standard_module(a3ab0, "simple", "3")
    s1 = standard_module(a3ab0, "simple", "1")
    atlas = enumerate_indecomposables(a3ab0, "knitting")
    v = ext_vanishes_all_degrees(s3, [s1], atlas=atlas)
    assert v.status == "fails"
    assert v.witness[0] == 2
    # bounded fallback agrees
    v2 = ext_vanishes_all_degrees(s3, [s1], degree_bound=3)
    assert v2.status == "fails" and v2.witness[0] == 2


def test_ext_vanishing_requires_atlas_or_bound(std):
    with pytest.raises(ValueError):
        ext_vanishes_all_degrees(std["S2"], [std["S1"]])


def test_atlas_tau_orbits(atlas):
    def idx(name):
        return atlas.by_name(name)
    assert atlas.tau[idx("S(2)")] == idx("S(1)")
    assert atlas.tau[idx("S(3)")] == idx("S(2)")
    assert atlas.tau[idx("I(2)")] == idx("P(2)")
    assert atlas.tau_inv[idx("S(1)")] == idx("S(2)")
    assert atlas.tau_inv[idx("P(2)")] == idx("I(2)")
    assert idx("P(3)") not in atlas.tau
    assert idx("P(3)") not in atlas.tau_inv


def test_atlas_opposite_tables(atlas):
    op = atlas.opposite()
    assert op.complete and len(op) == len(atlas)
    n = len(atlas)
    for i in range(n):
        for j in range(n):
            assert op.hom[i, j] == atlas.hom[j, i]
            assert op.ext1[i, j] == atlas.ext1[j, i]
    assert op.tau == atlas.tau_inv
    assert op.tau_inv == atlas.tau


def test_atlas_serialization_round_trip(a3, atlas):
    import json
    blob = json.dumps(atlas.to_json(), sort_keys=True)
    again = IndecAtlas.from_json(a3, json.loads(blob))
    assert json.dumps(again.to_json(), sort_keys=True) == blob
