from fractions import Fraction

from models import ExtClass, enumerate_rigid, make_rigid
from silting import LEFT, mutate

T = "P2>P1"


def test_registry_order(a2):
    """Stalks first, then the two-term complex, then shifts."""
    assert a2.objects() == ("P1", "P2", T, "P1[1]", "P2[1]")
    assert a2.projectives() == ("P1", "P2")
    assert a2.injectives() == ("P1[1]", "P2[1]")
    assert a2.rank == 2
    assert a2.is_reduced()


def test_extensions_between_stalks(a2):
    """Test E between the stalks and their shifts."""
    assert a2.ext_dim("P1[1]", "P1") == 1
    assert a2.ext_dim("P2[1]", "P2") == 1
    assert a2.ext_dim("P2[1]", "P1") == 1
    assert a2.ext_dim("P1[1]", "P2") == 0
    for x in a2.objects():
        assert a2.ext_dim("P1", x) == 0


def test_complex_is_rigid_and_compatible(a2):
    """Test the complex is rigid with its neighbours in the pentagon."""
    assert a2.is_rigid([T])
    assert a2.is_rigid(["P1", T])
    assert a2.is_rigid([T, "P2[1]"])
    assert not a2.is_rigid(["P1", "P1[1]"])


def test_hom_and_composition(a2):
    """Test Hom between the projectives and composing identities."""
    assert a2.hom_dim("P2", "P1") == 1
    assert a2.hom_dim("P1", "P2") == 0
    identity = a2.identity("P1")
    assert a2.compose("P1", "P1", "P1", identity, identity) == identity


def test_middles(a2):
    """P1 >-> T ->> P2[1] realizes the class of the arrow."""
    xi = ExtClass(("P2[1]",), ("P1",), (Fraction(1),))
    assert a2.middle(xi) == (T,)
    cancelled = ExtClass(("P1[1]",), ("P1",), (Fraction(1),))
    assert a2.middle(cancelled) == ()
    split = ExtClass(("P2[1]",), ("P1",), (Fraction(0),))
    assert a2.middle(split) == ("P1", "P2[1]")


def test_mutation_at_second_projective(a2):
    """Test mutating P2 away brings in the complex."""
    top = make_rigid(a2, ["P1", "P2"])
    assert mutate(a2, top, "P2", LEFT).members == ("P1", T)


def test_local_algebra(local):
    """k[x]/(x^2) has one non-rigid complex between its stalks."""
    assert local.objects() == ("P1", "P1>P1", "P1[1]")
    assert local.is_indecomposable("P1>P1")
    assert not local.is_rigid(["P1>P1"])
    assert local.rank == 1
    assert [R.members for R in enumerate_rigid(local)] == [(), ("P1",), ("P1[1]",)]


def test_point(point):
    """Test the two objects of the point algebra."""
    assert point.objects() == ("P1", "P1[1]")
    assert point.ext_dim("P1[1]", "P1") == 1
    assert point.describe()["algebra_dimension"] == 1
