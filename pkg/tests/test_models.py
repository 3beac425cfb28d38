from fractions import Fraction

import pytest

from errors import NotRigid, RankUnknown
from models import (
    ExtClass,
    RigidSubcat,
    coordinate_patterns,
    enumerate_rigid,
    ext,
    hom,
    in_add,
    make_rigid,
    multisets,
    strip,
)
from tabulated import parse_tabulated


def test_coordinate_patterns_start_at_zero():
    """Test coordinate patterns start with the zero class."""
    assert coordinate_patterns(0) == [()]
    assert coordinate_patterns(1) == [(0,), (1,), (-1,)]
    assert len(coordinate_patterns(2)) == 9
    assert len(coordinate_patterns(3)) == 14
    permuted = coordinate_patterns(1, permuted=True)
    assert permuted == [(0,), (-1,), (1,)]


def test_multisets_order():
    """Test multisets come out by size, then lexicographically."""
    assert multisets(["a", "b"], 1) == [(), ("a",), ("b",), ("a", "b")]
    assert multisets(["a"], 2) == [(), ("a",), ("a", "a")]
    assert multisets(["a", "b"], 2, max_total=1) == [(), ("a",), ("b",)]


def test_normalize_uses_registry_order(lam2):
    assert lam2.normalize(["[1,1]", "[1,2]"]) == ("[1,2]", "[1,1]")


def test_ext_class_components(lam2):
    """Test a class splits into components by summand."""
    xi = ExtClass.assemble(lam2, ("[1,1]", "[2,2]"), ("[2,2]",), {(0, 0): (Fraction(1),)})
    assert xi.coordinates == (Fraction(1),)
    assert xi.components(lam2) == {(0, 0): (Fraction(1),), (1, 0): ()}
    assert not xi.is_zero


def test_middle_of_sums(lam2):
    """[1,1]+[1,1] by [2,2]: one copy extends, the other splits off."""
    xi = ExtClass(("[1,1]", "[1,1]"), ("[2,2]",), (Fraction(1), Fraction(0)))
    assert lam2.middle(xi) == ("[1,2]", "[1,1]")


def test_spec_level_helpers(lam2):
    """Test the hom and ext basis helpers."""
    assert len(hom(lam2, "[2,2]", "[1,2]")) == 1
    basis = ext(lam2, "[1,1]", "[2,2]")
    assert [c.coordinates for c in basis] == [(Fraction(1),)]


def test_make_rigid(lam2):
    """Test make_rigid normalizes and certifies, or raises NotRigid."""
    R = make_rigid(lam2, ["[2,2]", "[1,2]"])
    assert R.members == ("[1,2]", "[2,2]")
    assert ("[2,2]", "[1,2]") in R.certificate
    with pytest.raises(NotRigid):
        make_rigid(lam2, ["[2,2]", "[1,1]"])


def test_enumerate_rigid(lam2):
    """Test every rigid subcategory of lambda_2 in order."""
    found = [R.members for R in enumerate_rigid(lam2)]
    assert found == [
        (),
        ("[1,2]",), ("[2,2]",), ("[1,1]",),
        ("[1,2]", "[2,2]"), ("[1,2]", "[1,1]"),
    ]


def test_rigid_subcat_helpers():
    """Test labels, membership and add(R) helpers."""
    R = RigidSubcat(("a", "b"))
    assert R.label == "a+b"
    assert RigidSubcat(()).label == "0"
    assert "a" in R and len(R) == 2
    assert strip(("a", "b", "c"), R) == ("c",)
    assert in_add(("a", "a"), R)
    assert not in_add(("c",), R)


def test_rank_needs_rigid_projectives():
    """Test rank is unknown when the projectives are not rigid."""
    model = parse_tabulated("object a\next a a = 1\n")
    with pytest.raises(RankUnknown):
        model.rank
