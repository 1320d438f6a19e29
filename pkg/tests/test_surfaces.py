import random

import pytest

from homcount.groups import GroupError, automorphisms
from homcount.surfaces import (HeegaardGluing, RepSampler, SurfaceError,
                               count_reps, enumerate_reps, heegaard_count,
                               is_torelli_word, mcg_apply, orbit_report,
                               parse_gluing_text, schur_invariant,
                               standard_generators, surface_relation_holds,
                               word_h1_matrix)


def test_rep_counts_and_enumeration(s3, a5):
    assert count_reps(1, s3) == 18
    assert count_reps(1, a5) == 300
    reps = list(enumerate_reps(1, s3))
    assert len(reps) == 18
    assert (0, 0) in set(reps)
    surj = list(enumerate_reps(1, s3, filter="surjective"))
    assert surj == []                      # commuting pairs are never S3
    assert len(list(enumerate_reps(2, s3))) == count_reps(2, s3)


def test_enumerate_schur_zero(a5, sl25_ext):
    total = 0
    zero = 0
    rng = random.Random(0)
    sampler = RepSampler(2, a5)
    for _ in range(100):
        t = sampler.draw(rng)
        total += 1
        if schur_invariant(t, a5, sl25_ext) == 0:
            zero += 1
    assert 0 < zero < total


def test_generators_preserve_relation(s3):
    rng = random.Random(1)
    sampler = RepSampler(2, s3)
    gens = standard_generators(2)
    assert len(gens) == 7
    for _ in range(300):
        t = sampler.draw(rng)
        for gen in gens:
            t2 = gen.apply(s3, t)
            assert surface_relation_holds(s3, t2)
            assert gen.unapply(s3, t2) == t


def test_generators_bijective_on_rep_set(s3):
    tups = set(enumerate_reps(1, s3))
    for gen in standard_generators(1):
        assert {gen.apply(s3, t) for t in tups} == tups


def test_mcg_word_interface(s3):
    t = (1, 1)
    assert mcg_apply([], s3, t) == t
    out = mcg_apply(["ta1", "ta1'"], s3, t)
    assert out == t
    with pytest.raises(SurfaceError):
        mcg_apply(["nope"], s3, t)
    # g=1 a-twist: (a, b) -> (a, ba)
    a, b = 2, 4
    if s3.mul(a, b) == s3.mul(b, a):
        got = mcg_apply(["ta1"], s3, (a, b))
        assert got == (a, s3.mul(b, a))


def test_h1_matrices():
    assert word_h1_matrix(["ta1"], 1) == [[1, 0], [1, 1]]
    assert not is_torelli_word(["ta1"], 1)
    assert is_torelli_word(["sep1"], 2)
    assert is_torelli_word([], 2)
    # inverse word cancels
    assert is_torelli_word(["ta1", "tb2", "tb2'", "ta1'"], 2)
    assert not is_torelli_word(["swap1"], 2)


def test_schur_lift_independence(a5, sl25_ext):
    rng = random.Random(2)
    sampler = RepSampler(2, a5)
    for _ in range(20):
        t = sampler.draw(rng)
        base = schur_invariant(t, a5, sl25_ext)
        for _ in range(20):
            assert schur_invariant(t, a5, sl25_ext, rng=rng) == base


def test_schur_requires_perfect(s3, sl25_ext):
    with pytest.raises(GroupError):
        schur_invariant((0, 0), s3, sl25_ext)


def test_schur_rejects_bad_tuple(a5, sl25_ext):
    bad = None
    for a in range(1, 60):
        for b in range(1, 60):
            if a5.comm(a, b) != 0:
                bad = (a, b)
                break
        if bad:
            break
    with pytest.raises(SurfaceError):
        schur_invariant(bad, a5, sl25_ext)


def test_schur_additivity(a5, sl25_ext):
    rng = random.Random(3)
    sampler = RepSampler(2, a5)
    C = sl25_ext.cover
    for _ in range(40):
        t1, t2 = sampler.draw(rng), sampler.draw(rng)
        s12 = schur_invariant(t1 + t2, a5, sl25_ext)
        assert s12 == C.mul(schur_invariant(t1, a5, sl25_ext),
                            schur_invariant(t2, a5, sl25_ext))


def test_orbit_report_trivial_seed(s3):
    rep = orbit_report([(0, 0, 0, 0)], s3, 2)
    assert rep.rows[0].size == 1
    assert not rep.rows[0].surjective
    assert rep.rows[0].aut_closed


def test_orbit_report_classes(s3):
    rng = random.Random(4)
    sampler = RepSampler(2, s3)
    seeds = [sampler.draw(rng) for _ in range(5)] + [(0, 0, 0, 0)]
    rep = orbit_report(seeds, s3, 2)
    assert sum(r.size for r in rep.rows) == rep.visited
    assert rep.visited <= count_reps(2, s3)


def test_orbit_schur_classes_never_mix(a5, sl25_ext):
    # small sampled orbits on the genus-2 A5 set; orbit_report itself raises
    # if an orbit mixes Schur classes
    rng = random.Random(5)
    sampler = RepSampler(2, a5)
    seeds = []
    while len(seeds) < 2:
        t = sampler.draw(rng)
        # keep tiny orbits out: demand a surjective tuple
        from homcount.groups import close_under_product
        if len(close_under_product(a5, t)) == 60:
            seeds.append(t)
    rep = orbit_report(seeds[:1], a5, 2, ext=sl25_ext, max_visited=400_000)
    assert rep.rows[0].schur_class in (0, sl25_ext.center_ids[1])


def test_mcg_commutes_with_automorphisms(s3):
    rng = random.Random(6)
    sampler = RepSampler(2, s3)
    auts = automorphisms(s3)
    gens = standard_generators(2)
    for _ in range(1000):
        t = sampler.draw(rng)
        phi = auts[rng.randrange(len(auts))]
        gen = gens[rng.randrange(len(gens))]
        lhs = tuple(phi[x] for x in gen.apply(s3, t))
        rhs = gen.apply(s3, tuple(phi[x] for x in t))
        assert lhs == rhs


def test_orbit_transitivity_recorded(a5, sl25_ext):
    """Empirical transitivity at genus 2: recorded, not asserted as theory.

    The guaranteed statement holds only for large genus; the report line
    documents what the loaded generator set actually achieves for A5.
    """
    from homcount.groups import subgroup_membership_masks
    from homcount.surfaces import enumerate_reps
    rng = random.Random(7)
    sampler = RepSampler(2, a5)
    masks, full_bit = subgroup_membership_masks(a5)

    def surjective(t):
        acc = -1
        for x in t:
            acc &= masks[x]
        return acc == full_bit

    seed = None
    while seed is None:
        t = sampler.draw(rng)
        if surjective(t) and schur_invariant(t, a5, sl25_ext) == 0:
            seed = t
    rep = orbit_report([seed], a5, 2, ext=sl25_ext, max_visited=2_000_000)
    total = sum(1 for _ in enumerate_reps(2, a5, filter="schur-zero",
                                          ext=sl25_ext))
    print("[RECORD] genus-2 A5 schur-zero orbit: size %d of %d, "
          "transitive=%s, aut-closed=%s"
          % (rep.rows[0].size, total, rep.rows[0].size == total,
             rep.rows[0].aut_closed))
    assert rep.rows[0].size <= total


def test_gluing_file():
    h = parse_gluing_text("genus 2\nword ta1 tb2' sep1\n")
    assert h.genus == 2 and h.word == ["ta1", "tb2'", "sep1"]
    with pytest.raises(SurfaceError):
        parse_gluing_text("word x\n")


def test_heegaard_empty_word(s3, a5):
    for g in (1, 2, 3):
        assert heegaard_count(HeegaardGluing(g, []), s3).homs == 6 ** g
    for g in (1, 2):
        assert heegaard_count(HeegaardGluing(g, []), a5).homs == 60 ** g


def test_heegaard_lens_space(s3, a5):
    out = heegaard_count(HeegaardGluing(1, ["tb1"] * 5), a5)
    assert out.homs == 25
    assert out.surjections == 0 and out.quotients == 0
    assert heegaard_count(HeegaardGluing(1, ["tb1"] * 5), s3).homs == 1


def test_heegaard_conjugate_gluings_agree(s3):
    base = heegaard_count(HeegaardGluing(1, ["tb1", "tb1"]), s3)
    conj = heegaard_count(
        HeegaardGluing(1, ["ta1", "tb1", "tb1", "ta1'"]), s3)
    assert base.homs == conj.homs


def test_gluing_h1_values():
    from homcount.surfaces import gluing_h1, is_homology_sphere_gluing
    assert gluing_h1(HeegaardGluing(2, [])) == (2, [])
    assert gluing_h1(HeegaardGluing(1, ["tb1"] * 5)) == (0, [5])
    assert gluing_h1(HeegaardGluing(1, ["tb1"])) == (0, [])
    assert gluing_h1(HeegaardGluing(1, ["ta1"])) == (1, [])
    assert is_homology_sphere_gluing(HeegaardGluing(1, ["tb1"]))
    assert not is_homology_sphere_gluing(HeegaardGluing(1, ["tb1"] * 5))
    # the standard genus-2 chain word glues S^3: a homology sphere whose
    # only homomorphism to A5 is trivial
    chain = HeegaardGluing(2, ["tb1", "ta1", "chain1", "ta2", "tb2"])
    assert is_homology_sphere_gluing(chain)


def test_heegaard_s3_chain_word(a5):
    chain = HeegaardGluing(2, ["tb1", "ta1", "chain1", "ta2", "tb2"])
    out = heegaard_count(chain, a5)
    assert out.homs == 1 and out.surjections == 0


def test_heegaard_poincare_like_word(a5):
    # a genus-2 Torelli-checkable word; counts stay consistent with Aut dedup
    h = HeegaardGluing(2, ["sep1"])
    out = heegaard_count(h, a5)
    assert out.surjections % len(automorphisms(a5)) == 0
    assert h.is_torelli()


def test_heegaard_homology_sphere_profile(a5, s3, a4):
    """The bundled genus-2 gluing is a homology sphere whose counts match
    the Poincare sphere: 121 homomorphisms to A5, one quotient, nothing
    into proper subgroups, and the affine identity 121 = 120 * 1 + 1."""
    from homcount.surfaces import is_homology_sphere_gluing, load_gluing
    from conftest import data_path
    h = load_gluing(data_path("hsphere.glu"))
    assert is_homology_sphere_gluing(h)
    out = heegaard_count(h, a5)
    assert (out.homs, out.surjections, out.quotients) == (121, 120, 1)
    assert heegaard_count(h, s3).homs == 1
    assert heegaard_count(h, a4).homs == 1
    assert out.homs == len(automorphisms(a5)) * out.quotients + 1
