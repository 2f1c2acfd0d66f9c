"""
Tests for groupoid tables, axiom validation, structural queries and functors.
"""

from itertools import product

import pytest

from conftest import mutate
from gpdlab import corpus
from gpdlab.config import reload_settings
from gpdlab.core import (
    GroupoidFunctor,
    GroupoidTable,
    ValidationReport,
    build_connected_iso,
    compose_chain,
    compose_functors,
    connected_components,
    disjoint_union,
    find_isomorphism,
    identity_functor,
    inverse_functor,
    is_connected,
    is_isomorphism,
    iso_subgroupoid,
    isotropy_group,
    pack,
    pair_groupoid,
    rename,
    restrict,
    validate_groupoid,
    verify_functor,
)
from gpdlab.errors import AxiomError, FormatError


class TestTableStructure:
    """Test structural checks done at construction time."""

    def test_unknown_id_in_comp(self, z2):
        """Test that a product naming an unknown element is a format error."""
        comp = dict(z2.comp)
        comp[("a", "a")] = "zz"
        with pytest.raises(FormatError, match="unknown ids"):
            mutate(z2, comp=comp)

    def test_partial_domain_map(self, e8):
        """Test that d must be total."""
        dmap = dict(e8.dmap)
        del dmap["u"]
        with pytest.raises(FormatError, match="map d undefined"):
            mutate(e8, dmap=dmap)

    def test_duplicate_elements(self, z2):
        """Test that duplicate ids are rejected."""
        with pytest.raises(FormatError, match="duplicate"):
            mutate(z2, elements=("1", "a", "a"))

    def test_empty_groupoid_rejected(self):
        """Test that a groupoid needs at least one object."""
        with pytest.raises(FormatError, match="at least one object"):
            GroupoidTable("empty", (), frozenset(), {}, {}, {}, {})

    def test_range_must_be_object(self, e8):
        """Test that r values must be objects."""
        rmap = dict(e8.rmap)
        rmap["u"] = "a"
        with pytest.raises(FormatError, match="non-object"):
            mutate(e8, rmap=rmap)


class TestValidateGroupoid:
    """Test the axiom validator on positive and single-mutation fixtures."""

    @pytest.mark.parametrize("name", ["Z2", "pair_xy", "pair_xy_x_Z2", "E8", "S3"])
    def test_positive_fixtures(self, name):
        """Test that every positive fixture passes."""
        report = validate_groupoid(corpus.positive_fixtures()[name])
        assert report.passed
        assert report.violations == []

    def test_printed_example_not_closed(self, e7):
        """Test that the seven-element table fails composability at (u, v)."""
        report = validate_groupoid(e7)
        assert not report.passed
        assert report.first("composability").witnesses == ("u", "v")

    def test_missing_product(self, e8):
        """Test a deleted product."""
        comp = dict(e8.comp)
        del comp[("u", "v")]
        report = validate_groupoid(mutate(e8, comp=comp))
        assert "composability" in report.tags()
        assert ("u", "v") in report.witnesses("composability")

    def test_product_of_non_composable_pair(self, e8):
        """Test a product defined where d(g) != r(h)."""
        comp = dict(e8.comp)
        comp[("u", "u")] = "b"
        report = validate_groupoid(mutate(e8, comp=comp))
        assert ("u", "u") in report.witnesses("composability")

    def test_wrong_domain_range(self, e8):
        """Test a product whose value has the wrong endpoints."""
        comp = dict(e8.comp)
        comp[("u", "v")] = "a"
        report = validate_groupoid(mutate(e8, comp=comp))
        assert report.tags()[0] == "domain-range"
        assert report.first("domain-range").witnesses == ("u", "v", "a")

    def test_left_identity(self, z2):
        """Test an object that does not act as a left identity."""
        comp = dict(z2.comp)
        comp[("1", "a")] = "1"
        report = validate_groupoid(mutate(z2, comp=comp))
        assert "identity" in report.tags()
        assert ("1", "a") in report.witnesses("identity")

    def test_object_with_inverse(self, e8):
        """Test an object whose inverse is not itself."""
        inv = dict(e8.inv)
        inv["x"] = "a"
        report = validate_groupoid(mutate(e8, inv=inv))
        assert ("x",) in report.witnesses("identity")

    def test_object_with_other_domain(self, e8):
        """Test an object whose domain is another object."""
        dmap = dict(e8.dmap)
        dmap["x"] = "y"
        report = validate_groupoid(mutate(e8, dmap=dmap))
        assert ("x",) in report.witnesses("identity")

    def test_inverse_law(self, z2):
        """Test a ∘ a = a in Z2, so a⁻¹a is not the identity."""
        comp = dict(z2.comp)
        comp[("a", "a")] = "a"
        report = validate_groupoid(mutate(z2, comp=comp))
        assert ("a",) in report.witnesses("inverse")

    def test_involution(self, e8):
        """Test an inverse map that is not an involution."""
        inv = dict(e8.inv)
        inv["u"] = "v-"
        report = validate_groupoid(mutate(e8, inv=inv))
        assert ("u",) in report.witnesses("involution")

    def test_associativity(self):
        """Test a Klein four table with ab = a."""
        v4 = corpus.klein_four()
        comp = dict(v4.comp)
        comp[("a", "b")] = "a"
        report = validate_groupoid(mutate(v4, comp=comp))
        assert "associativity" in report.tags()
        assert ("a", "a", "b") in report.witnesses("associativity")

    def test_inverse_of_product(self):
        """Test that (ab)⁻¹ = b⁻¹a⁻¹ is checked."""
        v4 = corpus.klein_four()
        comp = dict(v4.comp)
        comp[("a", "b")] = "a"
        report = validate_groupoid(mutate(v4, comp=comp))
        assert ("a", "b") in report.witnesses("inverse-product")

    def test_pair_groupoid_missing_product(self):
        """Test a pair groupoid with one composite removed."""
        pair3 = pair_groupoid(["x", "y", "z"])
        comp = dict(pair3.comp)
        del comp[("(y|z)", "(x|y)")]
        report = validate_groupoid(mutate(pair3, comp=comp))
        assert ("(y|z)", "(x|y)") in report.witnesses("composability")

    def test_pair_groupoid_wrong_composite(self):
        """Test a pair groupoid with one composite pointing at the wrong arrow."""
        pair3 = pair_groupoid(["x", "y", "z"])
        comp = dict(pair3.comp)
        comp[("(y|z)", "(x|y)")] = "(x|y)"
        report = validate_groupoid(mutate(pair3, comp=comp))
        assert "domain-range" in report.tags()


class TestValidationReport:
    """Test report plumbing."""

    def test_passed_reflects_violations(self):
        """Test that passed is true exactly without violations."""
        report = ValidationReport(subject="demo")
        assert report.passed
        report.add("identity", ("x",), "broken")
        assert not report.passed
        assert report.tags() == ["identity"]

    def test_witness_limit(self, monkeypatch):
        """Test that violations beyond the limit are only counted."""
        monkeypatch.setenv("GPDLAB_REPORT_WITNESS_LIMIT", "2")
        reload_settings()
        try:
            report = ValidationReport()
            for i in range(5):
                report.add("PGrA2", (str(i),), "broken")
            assert len(report.violations) == 2
            assert report.overflow == {"PGrA2": 3}
        finally:
            monkeypatch.delenv("GPDLAB_REPORT_WITNESS_LIMIT")
            reload_settings()

    def test_to_frame(self):
        """Test the DataFrame rendering."""
        report = ValidationReport()
        report.add("inverse", ("a", "b"), "message")
        frame = report.to_frame()
        assert list(frame.columns) == ["tag", "witnesses", "message"]
        assert frame.iloc[0]["witnesses"] == "a, b"

    def test_raise_if_failed(self):
        """Test conversion into an exception carrying the report."""
        report = ValidationReport(subject="demo")
        report.add("associativity", ("a", "b", "c"), "broken")
        with pytest.raises(AxiomError) as excinfo:
            report.raise_if_failed()
        assert excinfo.value.report is report
        assert excinfo.value.witnesses == ("a", "b", "c")


class TestStructuralQueries:
    """Test isotropy, Iso(G) and connectivity."""

    def test_isotropy_e8(self, e8):
        """Test G_x in E8."""
        assert isotropy_group(e8, "x") == {"x", "a"}

    def test_isotropy_group_as_groupoid(self, z2):
        """Test that the isotropy of a group is the group."""
        assert isotropy_group(z2, "1") == {"1", "a"}

    def test_isotropy_pair(self, pair_xy):
        """Test that pair groupoids have trivial isotropy."""
        assert isotropy_group(pair_xy, "(x|x)") == {"(x|x)"}

    def test_isotropy_non_object(self, e8):
        """Test that a non-object is rejected."""
        with pytest.raises(FormatError):
            isotropy_group(e8, "a")

    def test_iso_subgroupoid(self, e8, pair_xy, s3):
        """Test Iso(G) on three fixtures."""
        assert iso_subgroupoid(e8) == {"x", "y", "a", "b"}
        assert iso_subgroupoid(s3) == set(s3.elements)
        assert iso_subgroupoid(pair_xy) == {"(x|x)", "(y|y)"}

    def test_connectivity(self, e8, z2):
        """Test is_connected on connected and disconnected tables."""
        assert is_connected(e8)
        assert is_connected(z2)
        assert not is_connected(corpus.two_copies_z2())

    def test_connected_components(self):
        """Test the component split of two copies of Z2."""
        assert connected_components(corpus.two_copies_z2()) == [["1.0"], ["1.1"]]

    def test_chain_composability(self, e8):
        """Test that chains compose exactly when consecutive ends match."""
        for n in range(2, 5):
            for chain in product(e8.elements, repeat=n):
                matches = all(e8.d(chain[i]) == e8.r(chain[i + 1]) for i in range(n - 1))
                assert (compose_chain(e8, chain) is not None) == matches


class TestConstructors:
    """Test pair groupoids, restriction, renaming and disjoint unions."""

    def test_pair_single(self):
        """Test the trivial one-element pair groupoid."""
        t = pair_groupoid(["x"])
        assert t.elements == ("(x|x)",)
        assert validate_groupoid(t).passed

    def test_pair_two(self, pair_xy):
        """Test pair({x, y})."""
        assert len(pair_xy) == 4
        assert is_connected(pair_xy)
        assert validate_groupoid(pair_xy).passed

    def test_pair_three(self):
        """Test the composition rule (y|z)(x|y) = (x|z)."""
        t = pair_groupoid(["x", "y", "z"])
        assert len(t) == 9
        assert t.compose("(y|z)", "(x|y)") == "(x|z)"
        assert t.inverse("(x|z)") == "(z|x)"
        assert validate_groupoid(t).passed

    def test_pair_empty(self):
        """Test that an empty object set is rejected."""
        with pytest.raises(FormatError):
            pair_groupoid([])

    def test_restrict_isotropy(self, e8):
        """Test the restriction to G_x."""
        t = restrict(e8, {"x", "a"})
        assert t.elements == ("x", "a")
        assert t.compose("a", "a") == "x"
        assert validate_groupoid(t).passed

    def test_restrict_not_closed(self, e8):
        """Test that a subset missing an inverse is rejected."""
        with pytest.raises(FormatError, match="inverse"):
            restrict(e8, {"x", "y", "u"})

    def test_rename_and_disjoint_union(self, z2):
        """Test that colliding ids must be renamed first."""
        with pytest.raises(FormatError, match="disjoint"):
            disjoint_union([z2, z2])
        copy = rename(z2, lambda g: g + "'")
        union = disjoint_union([z2, copy])
        assert len(union) == 4
        assert validate_groupoid(union).passed

    def test_pack(self):
        """Test tuple ids."""
        assert pack("a", "b") == "(a|b)"
        assert pack(pack("x", "x"), "a") == "((x|x)|a)"


class TestFunctors:
    """Test functor verification, composition and isomorphism search."""

    def test_identity_functor(self, e8):
        """Test that the identity is an isomorphism."""
        assert is_isomorphism(identity_functor(e8))

    def test_non_functor(self, e8, z2):
        """Test a map sending u to a but v to 1, which breaks vu = a."""
        mapping = {g: "1" for g in e8.elements}
        mapping["u"] = "a"
        report = verify_functor(GroupoidFunctor(e8, z2, mapping))
        assert not report.passed
        assert "composition" in report.tags()

    def test_compose_and_invert(self, e8):
        """Test that F⁻¹∘F is the identity."""
        F = build_connected_iso(e8, "x")
        G = compose_functors(inverse_functor(F), F)
        assert all(G(g) == g for g in e8.elements)

    def test_find_isomorphism(self, e8):
        """Test that pair({x,y}) x Z2 is isomorphic to E8."""
        assert find_isomorphism(corpus.pair_times_z2(), e8) is not None
        assert find_isomorphism(corpus.klein_four(), corpus.cyclic_group(4)) is None


class TestConnectedIso:
    """Test the isomorphism G ≅ pair(G0) x G_e."""

    def test_e8(self, e8):
        """Test that a maps to ((x|x)|a)."""
        F = build_connected_iso(e8, "x")
        assert F("a") == "((x|x)|a)"
        assert F("x") == "((x|x)|x)"
        assert is_isomorphism(F)
        assert len(F.target) == 8

    def test_pair(self, pair_xy):
        """Test a trivial second factor."""
        F = build_connected_iso(pair_xy, "(x|x)")
        assert len(F.target) == 4
        assert is_isomorphism(F)

    def test_group(self, z2):
        """Test the one-object case."""
        F = build_connected_iso(z2, "1")
        assert F("a") == "((1|1)|a)"
        assert is_isomorphism(F)

    def test_not_connected(self):
        """Test that disconnected tables are rejected."""
        with pytest.raises(AxiomError, match="not connected"):
            build_connected_iso(corpus.two_copies_z2(), "1.0")

    def test_roundtrip_identity(self, s3):
        """Test the inverse composed with the isomorphism on S3."""
        F = build_connected_iso(s3, "123")
        back = inverse_functor(F)
        assert all(back(F(g)) == g for g in s3.elements)
