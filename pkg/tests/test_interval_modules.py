from fractions import Fraction

import pytest

from interval_modules import (
    IntervalModel,
    direct_sum,
    interval_multiplicities,
    interval_representation,
    parse_interval,
)
from models import ExtClass


def test_registry_for_two_vertices(lam2):
    """Projective-injective first, then the simple projective and the simple injective."""
    assert lam2.objects() == ("[1,2]", "[2,2]", "[1,1]")
    assert lam2.projectives() == ("[1,2]", "[2,2]")
    assert lam2.injectives() == ("[1,2]", "[1,1]")
    assert lam2.projective_injectives() == ("[1,2]",)
    assert lam2.name == "interval:2"


def test_hom_and_ext(lam2):
    """Test Hom and E dimensions between the three intervals."""
    assert lam2.hom_dim("[2,2]", "[1,2]") == 1
    assert lam2.hom_dim("[1,2]", "[1,1]") == 1
    assert lam2.hom_dim("[1,1]", "[2,2]") == 0
    assert lam2.ext_dim("[1,1]", "[2,2]") == 1
    assert lam2.ext_dim("[2,2]", "[1,1]") == 0
    assert lam2.ext_dim("[1,2]", "[1,2]") == 0


def test_nonsplit_middle(lam2):
    """Test the nonsplit class has middle [1,2] for either sign."""
    xi = ExtClass(("[1,1]",), ("[2,2]",), (Fraction(1),))
    assert lam2.middle(xi) == ("[1,2]",)
    assert lam2.realize(ExtClass(("[1,1]",), ("[2,2]",), (Fraction(-1),))) == ("[1,2]",)


def test_composition_through_projective_injective(lam2):
    """[2,2] -> [1,2] -> [1,1] composes to zero."""
    f = (Fraction(1),)
    assert lam2.compose("[2,2]", "[1,2]", "[1,1]", f, f) == ()
    identity = lam2.identity("[1,2]")
    assert lam2.compose("[1,2]", "[1,2]", "[1,1]", identity, f) == f


def test_three_vertices(lam3):
    """Test the registry and extensions of lambda_3."""
    assert len(lam3.objects()) == 6
    assert lam3.projectives() == ("[1,3]", "[2,3]", "[3,3]")
    assert lam3.rank == 3
    assert lam3.ext_dim("[1,1]", "[2,3]") == 1
    assert lam3.ext_dim("[1,1]", "[3,3]") == 0


def test_representations_decompose():
    """Test a direct sum decomposes into its intervals."""
    rep = interval_representation(3, 2, 3)
    assert rep.dims == (0, 1, 1)
    total = direct_sum([rep, interval_representation(3, 1, 1)], 3)
    assert interval_multiplicities(total) == {(2, 3): 1, (1, 1): 1}
    assert parse_interval("[2,3]") == (2, 3)


def test_invalid_sizes():
    """Test sizes and intervals out of range are rejected."""
    with pytest.raises(ValueError):
        IntervalModel(0)
    with pytest.raises(ValueError):
        interval_representation(2, 2, 1)
