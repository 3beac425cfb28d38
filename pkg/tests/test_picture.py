import json

import pytest

from check_flags import CERTIFICATES, CheckFlags
from picture import (
    ROOT,
    SINK,
    build_picture_category,
    check_associativity,
    check_cubical,
    check_i1_i2,
    export,
    homotopy_reduction_check,
)
from tabulated import parse_tabulated


@pytest.fixture(scope="module")
def lam2_picture(lam2):
    return build_picture_category(lam2)


@pytest.fixture(scope="module")
def a2_picture(a2):
    return build_picture_category(a2)


def test_module_category_objects(lam2_picture):
    """Test the objects and morphism counts of the picture category of lambda_2."""
    cat = lam2_picture
    assert [o.id for o in cat.objects] == ["A", "A/[1,2]", "A/[2,2]", "A/[1,1]", "O"]
    assert cat.root == ROOT
    assert cat.sink == SINK
    assert len(cat.morphisms) == 14
    assert len(cat.hom(ROOT, SINK)) == 2
    assert len(cat.out_of(ROOT)) == 6


def test_two_term_objects(a2_picture):
    """Test the pentagon gives one object per non-silting rigid class."""
    cat = a2_picture
    assert {o.id for o in cat.objects} == {"A", "A/P1", "A/P2>P1", "A/P2", "O"}
    assert len(cat.morphisms) == 21
    assert len(cat.hom(ROOT, SINK)) == 5
    for x in cat.model.objects():
        assert cat.class_of([x]) not in (ROOT, SINK)


def test_local_algebra(local):
    """Test a local algebra has only the root and the sink."""
    cat = build_picture_category(local)
    assert [o.id for o in cat.objects] == ["A", "O"]
    assert len(cat.morphisms) == 4
    assert len(cat.hom("A", "O")) == 2


def test_empty_model():
    """Test the zero category collapses to the sink."""
    cat = build_picture_category(parse_tabulated("bound 1\n"))
    assert [o.id for o in cat.objects] == ["O"]
    assert len(cat.morphisms) == 1
    assert cat.identity("O").is_identity


def test_identities_and_composition(lam2_picture):
    """Test identities are units and composition unions the payloads."""
    cat = lam2_picture
    f = cat.find("A", ["[2,2]"])
    assert f.target == "A/[2,2]"
    assert cat.compose(cat.identity("A"), f) == f
    assert cat.compose(f, cat.identity(f.target)) == f
    g = cat.find("A/[2,2]", ["[1,2]"])
    assert g.target == SINK
    h = cat.compose(f, g)
    assert h.source == "A" and h.target == SINK
    assert set(h.payload.members) == {"[1,2]", "[2,2]"}
    assert check_associativity(cat) == []


def test_payloads_are_transported(lam2_picture):
    """[1,1] over [2,2] moves to [1,2] in the reduced category."""
    cat = lam2_picture
    assert cat.transport(["[1,1]"], ["[2,2]"]) == ("[1,2]",)


def test_factorizations(lam2_picture):
    """Test every splitting of the payload gives a factorization."""
    cat = lam2_picture
    h = cat.find("A", ["[1,2]", "[2,2]"])
    pairs = cat.factorizations()[h.id]
    assert len(pairs) == 4
    assert (cat.identity("A").id, h.id) in pairs


def test_cubical_structure(lam2_picture, a2_picture):
    """Test both categories are cubical."""
    for cat in (lam2_picture, a2_picture):
        report = check_cubical(cat)
        assert report.passed, report.failures
        assert report.morphisms == len(cat.morphisms)


def test_interchange(lam2_picture, a2_picture):
    """Test both interchange properties on the small categories."""
    for cat in (lam2_picture, a2_picture):
        report = check_i1_i2(cat)
        assert report.passed, report.discrepancies
        assert report.checked > 0


def test_projective_injective_reduction(lam2, lam2_picture):
    """Test killing [1,2] identifies A with A/[1,2]."""
    report = homotopy_reduction_check(lam2, cat=lam2_picture)
    assert report.passed, report.failures
    assert report.projective_injectives == ["[1,2]"]
    assert report.object_map == {
        "A": "A",
        "A/[1,2]": "A",
        "A/[2,2]": "O",
        "A/[1,1]": "O",
        "O": "O",
    }


def test_reduction_check_without_projective_injectives(a2, a2_picture):
    """Test the map is the identity with no projective-injectives."""
    report = homotopy_reduction_check(a2, cat=a2_picture)
    assert report.passed
    assert report.object_map == {o.id: o.id for o in a2_picture.objects}


def test_exports(lam2_picture):
    """Test DOT, JSON and text exports."""
    dot = export(lam2_picture, "dot")
    assert dot.startswith("digraph picture {")
    assert '"A" -> "O" [label="[1,2]+[2,2]"];' in dot
    doc = json.loads(export(lam2_picture, "json"))
    assert doc["schema"] == 1
    assert doc["root"] == "A" and doc["sink"] == "O"
    assert len(doc["morphisms"]) == 14
    assert "provenance" not in doc
    assert export(lam2_picture, "text").startswith("5 objects, 14 morphisms")
    with pytest.raises(ValueError):
        export(lam2_picture, "svg")


def test_certificates(lam2):
    """Test provenance is attached per object when certificates are on."""
    CheckFlags.set_flag(CERTIFICATES, True)
    cat = build_picture_category(lam2)
    doc = cat.as_dict()
    assert set(doc["provenance"]) == {"A", "A/[1,2]", "A/[2,2]", "A/[1,1]", "O"}
    assert doc["provenance"]["O"][0]["reason"] == "silting"


def test_threads_do_not_change_the_result(lam2, lam2_picture):
    """Test building with threads gives the same category."""
    cat = build_picture_category(lam2, threads=3)
    assert cat.as_dict() == lam2_picture.as_dict()


def test_longer_module_category(lam3):
    """Test the picture category of lambda_3 is cubical and satisfies interchange."""
    cat = build_picture_category(lam3)
    assert len(cat.objects) == 14
    assert len(cat.morphisms) == 79
    cubical = check_cubical(cat)
    assert cubical.passed, cubical.failures
    interchange = check_i1_i2(cat)
    assert interchange.passed, interchange.discrepancies
