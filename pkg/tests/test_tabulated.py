from fractions import Fraction

import pytest
from tinydb import Query, TinyDB

from errors import MalformedSpec, RealizationUnavailable
from models import ExtClass
from tabulated import dump_tabulated, export_tabulated, load_tabulated, parse_tabulated


def test_load_text_file(tabulated_file):
    """Test loading a tabulated text file."""
    model = load_tabulated(tabulated_file)
    assert model.objects() == ("n", "p", "i")
    assert model.declared_flags("n") == (True, True)
    assert model.declared_flags("i") == (False, True)
    assert model.hom_dim("p", "n") == 1
    assert model.hom_dim("n", "p") == 0
    assert model.ext_dim("i", "p") == 1
    assert model.middle(ExtClass(("i",), ("p",), (Fraction(1),))) == ("n",)
    assert model.rank == 2


def test_ext_classes_are_the_tabulated_ones(tabulated_file):
    """Zero first, then the file's classes."""
    model = load_tabulated(tabulated_file)
    classes = model.ext_classes(("i",), ("p",))
    assert [c.coordinates for c in classes] == [(Fraction(0),), (Fraction(1),)]


def test_missing_middle_is_unavailable():
    """Test a nonzero class without a middle line raises."""
    model = parse_tabulated("object p proj\nobject i inj\next i p = 1\n")
    with pytest.raises(RealizationUnavailable):
        model.middle(ExtClass(("i",), ("p",), (Fraction(1),)))


def test_split_middle_defaults_to_the_sum():
    """Test the zero class realizes as the direct sum."""
    model = parse_tabulated("object p proj\nobject i inj\next i p = 1\n")
    assert model.middle(ExtClass(("i",), ("p",), (Fraction(0),))) == ("p", "i")


def test_empty_table():
    """Test a file with no objects is the zero category."""
    model = parse_tabulated("bound 1\n")
    assert model.objects() == ()
    assert model.rank == 0


@pytest.mark.parametrize("text", [
    "object a\nobject a\n",
    "object a\nhom a b = 1\n",
    "object a wobbly\n",
    "frobnicate a\n",
    "bound 0\n",
    "object a\nmiddle a a [1,1] = a\n",
    "object a\next a a = 1\nmiddle a a [1] = b\n",
    "object a\next a a = x\n",
])
def test_malformed_tables(text):
    """Test malformed tables raise MalformedSpec."""
    with pytest.raises(MalformedSpec):
        parse_tabulated(text)


def test_missing_file(tmp_path):
    with pytest.raises(MalformedSpec):
        load_tabulated(tmp_path / "absent.tab")


def test_text_export_round_trip(lam2, tmp_path):
    """Test lambda_2 survives a text export."""
    path = tmp_path / "lambda2.tab"
    export_tabulated(lam2, path)
    model = load_tabulated(path)
    assert model.objects() == lam2.objects()
    assert model.ext_dim("[1,1]", "[2,2]") == 1
    assert model.middle(ExtClass(("[1,1]",), ("[2,2]",), (Fraction(1),))) == ("[1,2]",)
    assert dump_tabulated(model).splitlines()[1:] == dump_tabulated(lam2).splitlines()[1:]


def test_tinydb_export_round_trip(lam2, tmp_path):
    """Test the TinyDB export and reading it back."""
    path = tmp_path / "lambda2.json"
    export_tabulated(lam2, path)

    db = TinyDB(path)
    Meta = Query()
    assert db.table("meta").get(Meta.key == "schema")["value"] == 1
    assert len(db.table("objects")) == 3
    db.close()

    model = load_tabulated(path)
    assert model.objects() == ("[1,2]", "[2,2]", "[1,1]")
    assert model.declared_flags("[1,2]") == (True, True)
    assert model.middle(ExtClass(("[1,1]",), ("[2,2]",), (Fraction(1),))) == ("[1,2]",)


def test_tinydb_without_schema(tmp_path):
    """Test a TinyDB file without a schema is rejected."""
    path = tmp_path / "broken.json"
    db = TinyDB(path)
    db.table("objects").insert({"id": "a", "index": 0, "proj": True, "inj": True})
    db.close()
    with pytest.raises(MalformedSpec):
        load_tabulated(path)
