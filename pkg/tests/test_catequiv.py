"""
Tests for star-injective functors, induced actions and the round-trip isomorphisms.
"""

import pytest

from gpdlab import corpus
from gpdlab.catequiv import (
    SetFunctor,
    action_to_setfunctor,
    classify_functor,
    covering_correspondence,
    eta,
    eta_naturality,
    induced_partial_action,
    lift_action_morphism,
    projection_functor,
    same_action,
    setfunctor_to_action,
    tau,
    tau_naturality,
    validate_setfunctor,
    verify_star_morphism,
)
from gpdlab.core import GroupoidFunctor, identity_functor, is_isomorphism
from gpdlab.errors import AxiomError, NotFunctorialError, StrictnessError
from gpdlab.pact import is_global, is_strict, relabel_points, validate_partial_action


@pytest.fixture
def collapse(e8, z2) -> GroupoidFunctor:
    """E8 -> Z2 by the bit of each element."""
    bit = {"x": "1", "y": "1", "u": "1", "u-": "1", "a": "a", "v": "a", "v-": "a", "b": "a"}
    return GroupoidFunctor(e8, z2, bit, name="collapse")


@pytest.fixture
def iso_x(e8) -> GroupoidFunctor:
    return corpus.inclusion_functor(e8, {"x", "a"}, name="incl")


class TestClassifyFunctor:
    """Test star injectivity and surjectivity."""

    def test_identity(self, e8):
        """Test that the identity is a covering."""
        result = classify_functor(identity_functor(e8))
        assert result.star_injective and result.star_surjective and result.covering

    def test_inclusion(self, iso_x):
        """Test the inclusion of G_x."""
        result = classify_functor(iso_x)
        assert result.star_injective
        assert not result.star_surjective

    def test_collapse(self, collapse):
        """Test the bit map, which is onto every star but not injective."""
        result = classify_functor(collapse)
        assert not result.star_injective
        assert result.star_surjective
        assert not result.covering

    def test_not_a_functor(self, e8, z2):
        """Test that classification needs a functor."""
        mapping = {g: "1" for g in e8.elements}
        mapping["u"] = "a"
        with pytest.raises(NotFunctorialError):
            classify_functor(GroupoidFunctor(e8, z2, mapping))

    def test_projection(self, global_pair, identity_only):
        """Test projections of global and non-global actions."""
        assert classify_functor(projection_functor(global_pair)).covering
        result = classify_functor(projection_functor(identity_only))
        assert result.star_injective and not result.star_surjective


class TestInducedAction:
    """Test the action induced by a star-injective functor."""

    def test_inclusion(self, iso_x):
        """Test G_x acting on the single object x."""
        p = induced_partial_action(iso_x)
        assert p.carrier == ("x",)
        assert dict(p.act) == {("x", "x"): "x", ("a", "x"): "x"}
        assert validate_partial_action(p).passed
        assert is_strict(p)
        assert not is_global(p)

    def test_identity(self, e8):
        """Test that the identity functor induces a global action on the objects."""
        p = induced_partial_action(identity_functor(e8))
        assert p.carrier == ("x", "y")
        assert p.apply("u", "x") == "y"
        assert is_global(p)

    def test_not_star_injective(self, collapse):
        """Test that the bit map induces nothing."""
        with pytest.raises(AxiomError, match="not star-injective"):
            induced_partial_action(collapse)


class TestRoundTrips:
    """Test τ, η and the covering correspondence."""

    def test_tau(self, global_pair):
        """Test x ↦ (e_x|x)."""
        assert tau(global_pair) == {"p": "((x|x)|p)", "q": "((y|y)|q)"}

    def test_tau_relabels_into_induced(self, global_pair, identity_only, e8_star):
        """Test that relabelling by τ gives exactly the induced action."""
        for p in (global_pair, identity_only, e8_star):
            induced = induced_partial_action(projection_functor(p))
            assert same_action(relabel_points(p, tau(p)), induced)

    def test_tau_non_strict(self, global_pair):
        """Test that τ needs a strict action."""
        with pytest.raises(StrictnessError):
            tau(corpus.add_extra_identity(global_pair, "p", "(y|y)"))

    def test_eta(self, e8, iso_x):
        """Test h ↦ (Γ(h)|d(h))."""
        E = eta(identity_functor(e8))
        assert E("u") == "(u|x)"
        assert is_isomorphism(E)
        assert eta(iso_x)("a") == "(a|x)"

    def test_covering_correspondence(self, e8, global_pair, identity_only, iso_x):
        """Test that global actions correspond to coverings."""
        assert covering_correspondence(global_pair) == (True, True)
        assert covering_correspondence(identity_only) == (False, False)
        assert covering_correspondence(identity_functor(e8)) == (True, True)
        assert covering_correspondence(iso_x) == (False, False)


class TestMorphismsAcross:
    """Test morphisms on both sides and the naturality squares."""

    def test_lift_and_naturality(self, identity_only, global_pair):
        """Test the inclusion of the identity-only action into the global one."""
        f = {"p": "p", "q": "q"}
        lifted = lift_action_morphism(f, identity_only, global_pair)
        assert lifted("((x|x)|p)") == "((x|x)|p)"
        report = verify_star_morphism(
            lifted, projection_functor(identity_only), projection_functor(global_pair)
        )
        assert report.passed
        assert tau_naturality(f, identity_only, global_pair)
        assert eta_naturality(
            lifted, projection_functor(identity_only), projection_functor(global_pair)
        )

    def test_lift_non_morphism(self, identity_only, global_pair):
        """Test that lifting needs an action morphism."""
        with pytest.raises(AxiomError):
            lift_action_morphism({"p": "p", "q": "q"}, global_pair, identity_only)

    def test_non_commuting_square(self, e8, iso_x):
        """Test a functor that does not commute with the projections."""
        f = GroupoidFunctor(iso_x.source, iso_x.source, {"x": "x", "a": "x"}, name="kill")
        report = verify_star_morphism(f, iso_x, iso_x)
        assert ("a",) in report.witnesses("commutes")


class TestSetFunctors:
    """Test strongly injective set-valued functors."""

    def test_round_trip(self, global_pair):
        """Test action -> set functor -> action."""
        S = action_to_setfunctor(global_pair)
        assert S.objmap == {"(x|x)": ("p",), "(y|y)": ("q",)}
        assert S.morphmap["(x|y)"] == {"p": "q"}
        assert same_action(setfunctor_to_action(S), global_pair)

    def test_non_global(self, identity_only):
        """Test that only global actions give set functors."""
        with pytest.raises(AxiomError, match="not global"):
            action_to_setfunctor(identity_only)

    def test_not_strongly_injective(self, pair_xy):
        """Test a functor with the same fiber over both objects."""
        S = SetFunctor(
            pair_xy,
            {"(x|x)": ("p",), "(y|y)": ("p",)},
            {g: {"p": "p"} for g in pair_xy.elements},
        )
        assert validate_setfunctor(S).passed
        with pytest.raises(StrictnessError):
            setfunctor_to_action(S)

    def test_bijection_tag(self, pair_xy):
        """Test a missing image."""
        S = SetFunctor(
            pair_xy,
            {"(x|x)": ("p",), "(y|y)": ("q",)},
            {"(x|x)": {"p": "p"}, "(y|y)": {"q": "q"}, "(x|y)": {"p": "q"}},
        )
        assert ("(y|x)",) in validate_setfunctor(S).witnesses("bijection")
