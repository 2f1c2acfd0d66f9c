"""
Tests for completing partial groupoid tables.
"""

import pytest

from gpdlab.closure import complete_closure
from gpdlab.config import reload_settings
from gpdlab.core import GroupoidTable, find_isomorphism, validate_groupoid
from gpdlab.errors import CompletionError, FormatError


def one_object_table(ids, inverses, comp=None):
    """A one-object partial table with unit '1'."""
    return GroupoidTable(
        "partial", tuple(ids), frozenset({"1"}),
        {g: "1" for g in ids}, {g: "1" for g in ids}, inverses, comp or {},
    )


@pytest.fixture
def small_cap(monkeypatch):
    monkeypatch.setenv("GPDLAB_CLOSURE_MAX_ELEMENTS", "12")
    yield reload_settings()
    monkeypatch.delenv("GPDLAB_CLOSURE_MAX_ELEMENTS")
    reload_settings()


class TestCompleteClosure:
    """Test the completion fixed point."""

    def test_printed_example(self, e7, e8):
        """Test that the seven-element table completes to a copy of E8."""
        completed = complete_closure(e7)
        assert len(completed) == 8
        assert completed.elements[:7] == e7.elements
        assert completed.compose("u", "v") == "_p0"
        assert completed.inverse("_p0") == "_p0"
        assert completed.d("_p0") == "y"
        assert validate_groupoid(completed).passed
        assert find_isomorphism(completed, e8) is not None

    def test_deterministic(self, e7):
        """Test that repeated runs agree."""
        assert complete_closure(e7) == complete_closure(e7)

    def test_complete_table_unchanged(self, e8):
        """Test that a groupoid is its own completion."""
        assert complete_closure(e8) == e8

    def test_conflicting_relation(self, e8):
        """Test that asserting vu = x contradicts vu = a."""
        with pytest.raises(CompletionError) as excinfo:
            complete_closure(e8, relations=[("v", "u", "x")])
        assert "v∘u" in str(excinfo.value)
        assert excinfo.value.chain

    def test_unknown_relation_id(self, e8):
        """Test that relations must name known elements."""
        with pytest.raises(FormatError):
            complete_closure(e8, relations=[("v", "u", "zz")])

    def test_arrows_and_inverses_only(self, pair_xy):
        """Test that identities and inverses alone close up to a pair groupoid."""
        partial = GroupoidTable(
            "arrows", ("x", "y", "u", "w"), frozenset({"x", "y"}),
            {"x": "x", "y": "y", "u": "x", "w": "y"},
            {"x": "x", "y": "y", "u": "y", "w": "x"},
            {"x": "x", "y": "y", "u": "w", "w": "u"},
            {},
        )
        completed = complete_closure(partial)
        assert len(completed) == 4
        assert completed.compose("w", "u") == "x"
        assert find_isomorphism(completed, pair_xy) is not None

    def test_involution_generator(self, z2):
        """Test that a self-inverse generator gives Z2."""
        completed = complete_closure(one_object_table(("1", "a"), {"1": "1", "a": "a"}))
        assert completed.compose("a", "a") == "1"
        assert find_isomorphism(completed, z2) is not None

    def test_cube_relation(self):
        """Test that g with g∘g = h and inverse h closes to Z3."""
        partial = one_object_table(
            ("1", "g", "h"), {"1": "1", "g": "h", "h": "g"}, {("g", "g"): "h"}
        )
        completed = complete_closure(partial)
        assert len(completed) == 3
        assert completed.compose("h", "h") == "g"

    def test_inconsistent_inverse(self):
        """Test that an inverse with swapped endpoints is rejected."""
        partial = GroupoidTable(
            "bad", ("x", "y", "u"), frozenset({"x", "y"}),
            {"x": "x", "y": "y", "u": "x"},
            {"x": "x", "y": "y", "u": "y"},
            {"x": "x", "y": "y", "u": "u"},
            {},
        )
        with pytest.raises(CompletionError, match="inconsistent"):
            complete_closure(partial)

    def test_size_cap(self, small_cap):
        """Test that a free generator runs into the element cap."""
        partial = one_object_table(("1", "g", "h"), {"1": "1", "g": "h", "h": "g"})
        with pytest.raises(CompletionError, match="exceeds 12 elements"):
            complete_closure(partial)
