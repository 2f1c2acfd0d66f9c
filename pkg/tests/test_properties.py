"""
Seeded sweeps over the named and random corpus.

Each test draws small random groupoids and actions, or walks every tuple of
wide subgroupoids of the named tables, and checks that the constructions agree
with the properties they are supposed to have.
"""

from itertools import product

import pytest

from gpdlab import corpus
from gpdlab.catequiv import (
    classify_functor,
    covering_correspondence,
    eta,
    eta_naturality,
    induced_partial_action,
    projection_functor,
    same_action,
    tau,
    tau_naturality,
    verify_star_morphism,
)
from gpdlab.core import is_isomorphism, validate_groupoid
from gpdlab.glob import check_full_dense, globalize, verify_universal, with_extra_orbit
from gpdlab.pact import (
    disjoint_union_actions,
    graph_iso,
    is_global,
    is_strict,
    relabel_points,
    validate_partial_action,
)
from gpdlab.prod import recognize_internal_semidirect, semidirect_trichotomy, validate_autaction
from gpdlab.subgrp import (
    internal_direct_report,
    is_normal,
    is_normal_bw,
    tuples_subgroupoid_check,
    wide_subgroupoids,
)

ACTION_SEEDS = range(200)
TRICHOTOMY_SEEDS = range(100)
MORPHISM_SEEDS = range(50)
GLOBALIZATION_SEEDS = range(50)

NAMED = corpus.small_groupoids()

pytestmark = pytest.mark.slow


def wide_tuples(parent, n):
    return product(wide_subgroupoids(parent), repeat=n)


def fresh_copy(q, tag):
    return relabel_points(q, {x: f"{tag}:{x}" for x in q.carrier}, name=f"{q.name}_{tag}")


class TestRandomGroupoids:
    """Test the generators themselves."""

    @pytest.mark.parametrize("seed", ACTION_SEEDS)
    def test_random_groupoid_is_valid(self, seed):
        """Test that every random table passes validation."""
        t = corpus.random_groupoid(corpus.make_rng(seed))
        assert len(t) <= 8
        assert validate_groupoid(t).passed

    def test_default_seed_is_reproducible(self, rng):
        """Test that the configured seed draws the same table twice."""
        assert corpus.random_groupoid(rng) == corpus.random_groupoid(corpus.make_rng())

    def test_isotropy_is_not_always_cyclic(self):
        """Test that Klein four and non-abelian isotropy groups are drawn."""
        klein, non_abelian = False, False
        for seed in ACTION_SEEDS:
            t = corpus.random_groupoid(corpus.make_rng(seed))
            for e in t.object_list:
                local = [g for g in t.by_domain[e] if t.r(g) == e]
                if len(local) == 4 and all(t.compose(g, g) == e for g in local):
                    klein = True
                if any(t.compose(g, h) != t.compose(h, g) for g in local for h in local):
                    non_abelian = True
        assert klein and non_abelian

    @pytest.mark.parametrize("seed", ACTION_SEEDS)
    def test_random_partial_action_is_strict(self, seed):
        """Test that restricted coset actions are valid and strict."""
        rng = corpus.make_rng(seed)
        t = corpus.random_groupoid(rng)
        p = corpus.random_partial_action(rng, t)
        assert len(p.carrier) <= 6
        assert validate_partial_action(p).passed
        assert is_strict(p)

    def test_coset_orbits_are_drawn(self):
        """Test that some random global actions have points with non-trivial stabilizers."""
        quotients = 0
        for seed in ACTION_SEEDS:
            rng = corpus.make_rng(seed)
            t = corpus.random_groupoid(rng)
            q = corpus.random_global_action(rng, t)
            assert is_global(q)
            if any(not t.is_object(g) and q.apply(g, x) == x for g, x in q.domain):
                quotients += 1
        assert quotients > 0

    @pytest.mark.parametrize("seed", MORPHISM_SEEDS)
    def test_random_non_strict_action(self, seed):
        """Test that the extra identity breaks strictness only."""
        rng = corpus.make_rng(seed)
        t = corpus.random_groupoid(rng)
        p = corpus.random_non_strict_action(rng, t)
        if p is None:
            pytest.skip(f"{t.name} is connected")
        assert validate_partial_action(p).passed
        assert not is_strict(p)

    @pytest.mark.parametrize("t", NAMED, ids=lambda t: t.name)
    def test_named_corpus(self, t):
        """Test that the sweep corpus is valid."""
        assert validate_groupoid(t).passed


class TestNamedSubgroupoids:
    """Test every tuple of wide subgroupoids of the named tables."""

    @pytest.mark.parametrize("parent", NAMED, ids=lambda t: t.name)
    def test_normal_forms_agree(self, parent):
        """Test that both normality forms agree on every wide subgroupoid."""
        for s in wide_subgroupoids(parent):
            assert is_normal(parent, s) == is_normal_bw(parent, s)

    @pytest.mark.parametrize("parent", NAMED, ids=lambda t: t.name)
    @pytest.mark.parametrize("n", [2, 3])
    def test_restricted_tuple_criteria(self, parent, n):
        """Test the direct check against r(h_i) = d(h_(i+1)) and the Iso criterion."""
        for subs in wide_tuples(parent, n):
            result = tuples_subgroupoid_check(parent, subs)
            assert result.iso_criterion is not None
            assert result.agree, [parent.sort(s) for s in subs]

    @pytest.mark.parametrize("parent", NAMED, ids=lambda t: t.name)
    @pytest.mark.parametrize("n", [1, 2])
    def test_direct_conditions_agree(self, parent, n):
        """Test that (i)-(iii) hold exactly when (iv)-(v) hold for one or two factors."""
        for subs in wide_tuples(parent, n):
            result = internal_direct_report(parent, subs)
            assert result.left == result.right, [parent.sort(s) for s in subs]

    @pytest.mark.parametrize("parent", NAMED, ids=lambda t: t.name)
    def test_direct_conditions_three_factors(self, parent):
        """Test (i)-(iii) implies (iv)-(v); the converse fails only through normality in E8."""
        converse_failures = []
        for subs in wide_tuples(parent, 3):
            result = internal_direct_report(parent, subs)
            assert not result.left or result.right, [parent.sort(s) for s in subs]
            if result.right and not result.left:
                assert result.product and result.trivial_intersection
                assert not result.normal
                assert "(ii)" in result.report.tags()
                converse_failures.append(subs)
        if parent.name == "E8":
            pinned = (frozenset({"x", "y", "a"}), frozenset({"x", "y", "b"}), corpus.E8_H1)
            assert pinned in converse_failures
        else:
            assert not converse_failures


class TestRandomActions:
    """Test action groupoids and the round trips on random actions."""

    @pytest.mark.parametrize("seed", ACTION_SEEDS)
    def test_partial_action_properties(self, seed):
        """Test the range lemma, the graph isomorphism, star injectivity and coverings."""
        rng = corpus.make_rng(seed)
        t = corpus.random_groupoid(rng)
        p = corpus.random_partial_action(rng, t)

        tags = validate_partial_action(p).tags()
        assert "range-identity" not in tags and "range-identity-converse" not in tags
        for g, x in p.domain:
            assert p.defined(t.r(g), p.apply(g, x))

        assert is_isomorphism(graph_iso(p))
        assert classify_functor(projection_functor(p)).star_injective
        global_, covering = covering_correspondence(p)
        assert global_ == covering == is_global(p)

        q = corpus.random_global_action(rng, t)
        global_, covering = covering_correspondence(q)
        assert global_ and covering

    @pytest.mark.parametrize("seed", ACTION_SEEDS)
    def test_tau_and_eta(self, seed):
        """Test that τ and η are isomorphisms onto the round trips."""
        rng = corpus.make_rng(seed)
        t = corpus.random_groupoid(rng)
        p = corpus.random_partial_action(rng, t)
        induced = induced_partial_action(projection_functor(p))
        assert same_action(relabel_points(p, tau(p)), induced)

        F = corpus.random_star_injective(rng, t)
        assert is_isomorphism(eta(F))
        covering, global_ = covering_correspondence(F)
        assert covering == global_

    @pytest.mark.parametrize("seed", MORPHISM_SEEDS)
    def test_naturality(self, seed):
        """Test both naturality squares on random morphisms."""
        rng = corpus.make_rng(seed)
        t = corpus.random_groupoid(rng)
        f, p, q = corpus.random_action_morphism(rng, t)
        assert tau_naturality(f, p, q)

        g, F1, F2 = corpus.random_star_morphism(rng, t)
        assert verify_star_morphism(g, F1, F2).passed
        assert eta_naturality(g, F1, F2)


class TestRandomGlobalization:
    """Test universality on random restrictions of global actions."""

    @pytest.mark.parametrize("seed", GLOBALIZATION_SEEDS)
    def test_universal(self, seed):
        """Test unique mediating morphisms into two other globalizations."""
        rng = corpus.make_rng(seed)
        t = corpus.random_groupoid(rng)
        f, p, q = corpus.random_action_morphism(rng, t, max_points=4)
        gl = globalize(p)
        assert is_global(gl.beta)
        assert all(gl.classes[y] for y in gl.carrier)

        # the global action p was cut from
        k = verify_universal(gl, q, f, exhaustive=True)
        assert all(k[gl.iota[x]] == f[x] for x in p.carrier)

        # β itself with an unrelated orbit added
        extra = fresh_copy(corpus.random_global_action(rng, t, max_points=4), "extra")
        bigger = with_extra_orbit(gl, extra)
        k = verify_universal(gl, bigger.beta, gl.iota, exhaustive=True)
        assert all(k[y] == y for y in gl.carrier)

        # q next to a second copy of itself
        doubled = disjoint_union_actions(q, fresh_copy(q, "copy"))
        k = verify_universal(gl, doubled, f)
        assert set(k.values()) <= set(q.carrier)

    @pytest.mark.parametrize("seed", GLOBALIZATION_SEEDS)
    def test_full_dense(self, seed):
        """Test that the universal globalization is full and dense."""
        rng = corpus.make_rng(seed)
        t = corpus.random_groupoid(rng)
        p = corpus.random_partial_action(rng, t, max_points=4)
        result = check_full_dense(globalize(p))
        assert result.full and result.dense


class TestRandomSemidirect:
    """Test the trichotomy and the semidirect recognizer."""

    @pytest.mark.parametrize("seed", TRICHOTOMY_SEEDS)
    def test_trichotomy_agrees(self, seed):
        """Test that the three conditions coincide when every object is fixed."""
        rng = corpus.make_rng(seed)
        t = corpus.random_groupoid(rng, max_elements=10)
        act = corpus.random_autaction(rng, t)
        assert len(act.group) <= 6
        assert validate_autaction(act).passed
        result = semidirect_trichotomy(t, act)
        assert result.objects_fixed
        assert result.agree

    def test_acting_groups_are_not_always_cyclic(self):
        """Test that generated groups of automorphisms include non-abelian ones."""
        s3 = corpus.symmetric_group_s3()
        groups = [corpus.random_autaction(corpus.make_rng(seed), s3).group for seed in range(60)]
        assert any(
            g.compose(a, b) != g.compose(b, a)
            for g in groups
            for a in g.elements
            for b in g.elements
        )

    def test_recognizer_cases(self):
        """Test the recognizer on every listed case, including two-object parents."""
        cases = corpus.internal_semidirect_cases()
        assert len(cases) >= 20
        assert any(len(parent.objects) > 1 for parent, _, _ in cases)
        for parent, h, sub in cases:
            F = recognize_internal_semidirect(parent, h, sub)
            assert is_isomorphism(F)
            assert len(F.source) == len(h) * len(sub)
