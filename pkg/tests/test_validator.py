import pytest

from check_flags import ENOUGH_INJECTIVES, CheckFlags
from tabulated import load_tabulated, parse_tabulated
from validator import validate_zero_auslander

SECOND_EXTENSIONS = """\
object a inj
object b proj inj
object c
ext a c = 1
middle a c [1] = b
ext c c = 1
"""

# i has a nonsplit sequence p >-> p+i ->> i only; j keeps p's inflation into n
NO_PROJECTIVE_COVER = """\
object n proj inj
object p proj
object i inj
object j inj
ext i p = 1
middle i p [1] = p+i
ext j p = 1
middle j p [1] = n
"""

# i is covered by n with kernel j, and j is not projective
LONG_RESOLUTION = """\
object n proj inj
object p proj
object i inj
object j
ext i j = 1
middle i j [1] = n
ext j p = 1
middle j p [1] = n
"""

# no projective-injectives: p >-> p+p ->> i is the only sequence out of p
NO_DOMINANT_INFLATION = """\
object p proj
object i inj
ext i p = 1
middle i p [1] = p+p
"""

# x only inflates as x >-> p ->> i, and p is not injective
NO_INJECTIVE_HULL = """\
object n proj inj
object p proj
object i inj
object x
ext i p = 1
middle i p [1] = n
ext x p = 1
middle x p [1] = n
ext i x = 1
middle i x [1] = p
"""


def test_interval_model_passes(lam2):
    """Test mod of the A_2 path algebra passes every axiom."""
    report = validate_zero_auslander(lam2)
    assert report.passed
    assert report.failing() == []
    assert not report.reduced
    assert report.axiom("enough_injectives") is None


def test_two_term_models_pass(a2, local):
    """Test two-term categories pass and have no projective-injectives."""
    for model in (a2, local):
        report = validate_zero_auslander(model)
        assert report.passed, report.failing()
        assert report.reduced


def test_tabulated_model_passes(tabulated_file):
    """Test a tabulated file passes and names its witnesses."""
    report = validate_zero_auslander(load_tabulated(tabulated_file))
    assert report.passed
    witnesses = report.axiom("enough_projectives").witnesses
    assert "p >-> n ->> i" in witnesses


def test_enough_injectives_is_optional(lam2):
    """Test the enough-injectives axiom only runs when switched on."""
    CheckFlags.set_flag(ENOUGH_INJECTIVES, True)
    report = validate_zero_auslander(lam2)
    assert report.axiom("enough_injectives").passed


def test_inconsistent_flags(lambda2_text):
    """Test p cannot be injective while E(i, p) is nonzero."""
    text = lambda2_text.replace("object p proj\n", "object p proj inj\n")
    report = validate_zero_auslander(parse_tabulated(text))
    assert report.failing() == ["flag_consistency"]
    assert report.axiom("flag_consistency").failures[0].startswith("p:")


def test_split_sequence_must_split(lambda2_text):
    """Test a zero class with a nonsplit middle fails only the split axiom."""
    text = lambda2_text + "middle i p [0] = i\n"
    report = validate_zero_auslander(parse_tabulated(text))
    assert report.failing() == ["split_sequence"]
    assert report.axiom("split_sequence").failures == ["zero class of E(i, p) realized by i"]


@pytest.mark.parametrize("text, axiom, failure", [
    (NO_PROJECTIVE_COVER, "enough_projectives", "no conflation ending in i with projective middle"),
    (NO_DOMINANT_INFLATION, "projective_inflation", "projective p has no inflation into a projective-injective"),
])
def test_single_axiom_failures(text, axiom, failure):
    """Test each corrupted table fails exactly one axiom and names the object."""
    report = validate_zero_auslander(parse_tabulated(text))
    assert report.failing() == [axiom]
    assert report.axiom(axiom).failures == [failure]


def test_missing_injective_hull():
    """Test x without an injective hull fails only the optional axiom."""
    model = parse_tabulated(NO_INJECTIVE_HULL)
    assert validate_zero_auslander(model).passed
    CheckFlags.set_flag(ENOUGH_INJECTIVES, True)
    report = validate_zero_auslander(model)
    assert report.failing() == ["enough_injectives"]
    assert report.axiom("enough_injectives").failures == ["no conflation starting at x with injective middle"]


def test_long_resolution():
    """Test a non-projective kernel fails heredity and the E^2 check together.

    Given a projective presentation j >-> n ->> i, E^2(i, -) is E(j, -),
    so the two axioms fail on the same object and nothing else does.
    """
    report = validate_zero_auslander(parse_tabulated(LONG_RESOLUTION))
    assert report.failing() == ["heredity", "second_extensions_vanish"]
    assert report.axiom("heredity").failures == ["no projective presentation of i has a projective kernel"]
    assert report.axiom("second_extensions_vanish").failures == ["E^2(i, y) != 0 for y in ['p']"]


def test_missing_realization(lambda2_text):
    """Test deleting the only nonsplit middle leaves i uncovered and p without an inflation."""
    text = lambda2_text.replace("middle i p [1] = n\n", "")
    report = validate_zero_auslander(parse_tabulated(text))
    assert report.failing() == ["enough_projectives", "projective_inflation"]
    assert report.axiom("heredity").passed
    assert report.axiom("second_extensions_vanish").passed


def test_second_extensions():
    """Test E^2(a, c) is detected through the kernel of a's presentation."""
    report = validate_zero_auslander(parse_tabulated(SECOND_EXTENSIONS))
    result = report.axiom("second_extensions_vanish")
    assert not result.passed
    assert "E^2(a, y) != 0 for y in ['c']" in result.failures
