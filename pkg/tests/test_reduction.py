import pytest

from check_flags import CHOICE_INDEPENDENCE, CheckFlags
from errors import NotRigid, WitnessSearchExhausted
from models import enumerate_rigid
from reduction import (
    LEFT,
    MAX,
    MIN,
    RIGHT,
    approx_functor_F,
    bongartz,
    check_gcp,
    compare_reductions,
    find_witness,
    perp,
    reduce,
    rigid_bijection,
    thick_closure,
    thick_equal,
)
from silting import cached_poset
from tabulated import parse_tabulated
from validator import validate_zero_auslander

T = "P2>P1"

CORPUS = ["point", "local", "a2", "lam2", "lam3"]


def test_perpendicular_categories(lam2):
    """Test both one-sided perpendicular categories and their intersection."""
    assert perp(lam2, ["[2,2]"]) == ("[1,2]", "[2,2]")
    assert perp(lam2, ["[2,2]"], RIGHT) == ("[1,2]", "[2,2]", "[1,1]")
    assert perp(lam2, ["[2,2]"], LEFT) == ("[1,2]", "[2,2]")
    assert perp(lam2, ["[1,1]"]) == ("[1,2]", "[1,1]")


def test_reduce_module_category(lam2):
    """Test reducing along the simple projective leaves only [1,2]."""
    reduced = reduce(lam2, ["[2,2]"])
    assert reduced.objects() == ("[1,2]",)
    assert reduced.projectives() == ("[1,2]",)
    assert reduced.lift(["[1,2]"]) == ("[1,2]", "[2,2]")
    assert reduced.name == "interval:2/[2,2]"


def test_reduce_along_projective_injective(lam2):
    """Test killing [1,2] leaves E([1,1], [2,2]) and drops the Hom through it."""
    reduced = reduce(lam2, ["[1,2]"])
    assert reduced.objects() == ("[2,2]", "[1,1]")
    assert reduced.ext_dim("[1,1]", "[2,2]") == 1
    assert reduced.hom_dim("[2,2]", "[2,2]") == 1
    assert reduced.is_reduced()
    assert reduced.rank == 1


def test_reduce_rejects_non_rigid(lam2):
    """Test reduction refuses a subcategory with self-extensions."""
    with pytest.raises(NotRigid):
        reduce(lam2, ["[2,2]", "[1,1]"])


def test_bongartz_completions(a2):
    """Test both completions of T in the pentagon."""
    top = bongartz(a2, [T], MAX)
    assert top.members == ["P1", T]
    assert top.constructive_complete
    assert bongartz(a2, [T], MIN).members == [T, "P2[1]"]
    assert bongartz(a2, [], MAX).members == ["P1", "P2"]


def test_bongartz_module_category(lam2):
    """Test the maximal completion of [2,2] and its constructive witness."""
    result = bongartz(lam2, ["[2,2]"], MAX)
    assert result.members == ["[1,2]", "[2,2]"]
    assert result.witnesses[-1]["middle"] == ["[1,2]"]


def test_gcp_witnesses(lam2):
    """Test every object gets a left and a right witness."""
    report = check_gcp(lam2, ["[2,2]"])
    assert report.rigid == ["[2,2]"]
    assert len(report.witnesses) == 6
    w = find_witness(lam2, ("[1,1]",), ["[2,2]"], RIGHT, bound=2)
    assert w.left == ("[2,2]",)
    assert w.middle == ("[1,2]",)


def test_gcp_without_realization(lambda2_text):
    """Test a missing middle term exhausts the witness search."""
    model = parse_tabulated(lambda2_text.replace("middle i p [1] = n\n", ""))
    with pytest.raises(WitnessSearchExhausted):
        check_gcp(model, ["p"])


def test_approximation_functor(lam2):
    """Test F sends [1,1] to [1,2] and kills [2,2]."""
    assert approx_functor_F(lam2, ["[2,2]"], "[1,1]") == ("[1,2]",)
    assert approx_functor_F(lam2, ["[2,2]"], "[2,2]") == ()
    assert approx_functor_F(lam2, ["[2,2]"], "[1,2]") == ("[1,2]",)


def test_approximation_functor_two_term(a2):
    """Test F on T over each of the stalks."""
    assert approx_functor_F(a2, ["P2"], T) == ("P1[1]",)
    assert approx_functor_F(a2, ["P1[1]"], T) == ("P2[1]",)


def test_approximation_functor_without_second_pass(lam2):
    """Test F without the permuted re-check."""
    CheckFlags.set_flag(CHOICE_INDEPENDENCE, False)
    assert approx_functor_F(lam2, ["[2,2]"], "[1,1]") == ("[1,2]",)


def test_thick_closure(lam2):
    """Test a silting pair closes to everything and [2,2] alone stays put."""
    closure = thick_closure(lam2, ["[2,2]", "[1,1]"])
    assert closure.status == "closed"
    assert closure.members == ["[1,2]", "[2,2]", "[1,1]"]
    assert thick_closure(lam2, ["[2,2]"]).members == ["[2,2]"]


def test_thick_equal(lam2):
    """Test each of the decisive reasons."""
    assert thick_equal(lam2, ["[2,2]"], ["[2,2]"]).value is True
    assert thick_equal(lam2, ["[1,2]", "[2,2]"], ["[1,2]", "[1,1]"]).reason == "both silting"
    separated = thick_equal(lam2, ["[2,2]"], ["[1,1]"])
    assert separated.value is False
    assert separated.reason == "separating generator"
    sized = thick_equal(lam2, ["[1,2]"], ["[2,2]"])
    assert sized.value is False
    assert sized.reason == "reduced registries differ in size"


def test_rigid_bijection(lam2):
    """Test rigid subcategories over [2,2] match those of the reduction."""
    report = rigid_bijection(lam2, ["[2,2]"])
    assert report.roundtrip
    assert report.all_in_perp
    assert report.order_preserved
    assert report.ambient_silting == 1
    assert report.forward == [(["[2,2]"], []), (["[1,2]", "[2,2]"], ["[1,2]"])]


def test_rigid_bijection_two_term(a2):
    """Test the two siltings containing T survive reduction."""
    report = rigid_bijection(a2, [T])
    assert report.roundtrip
    assert report.ambient_silting == 2
    assert report.reduced_silting == 2
    assert report.order_preserved


def test_iterated_reduction(lam2):
    """Test reducing in two steps and rejecting pairs that are not nested."""
    report = compare_reductions(lam2, [], ["[2,2]"])
    assert report.registry_match
    assert report.hom_match
    assert report.ext_match
    assert report.silting_match
    with pytest.raises(ValueError):
        compare_reductions(lam2, ["[1,1]"], ["[2,2]"])


@pytest.mark.parametrize("name", CORPUS)
def test_reduction_along_every_rigid_subcategory(name, request):
    """Test every reduction of the corpus is 0-Auslander with a faithful bijection."""
    model = request.getfixturevalue(name)
    for R in enumerate_rigid(model):
        reduced = reduce(model, R.members)
        report = validate_zero_auslander(reduced)
        assert report.passed, (R.label, report.failing())
        bijection = rigid_bijection(model, R.members)
        assert bijection.roundtrip, R.label
        assert bijection.all_in_perp, R.label
        assert bijection.order_preserved, R.label
        assert bijection.reduced_silting == bijection.ambient_silting


@pytest.mark.parametrize("name", CORPUS)
def test_bongartz_extrema_everywhere(name, request):
    """Test both completions bound every silting subcategory containing R."""
    model = request.getfixturevalue(name)
    poset = cached_poset(model)
    for R in enumerate_rigid(model):
        top = poset.index(bongartz(model, R.members, MAX).members)
        bottom = poset.index(bongartz(model, R.members, MIN).members)
        for k in poset.within(R.members):
            assert poset.geq(top, k) and poset.geq(k, bottom), R.label


@pytest.mark.parametrize("name", CORPUS)
def test_approximations_everywhere(name, request):
    """Test witnesses exist for every object and F kills add(R)."""
    model = request.getfixturevalue(name)
    for R in enumerate_rigid(model):
        assert len(check_gcp(model, R.members).witnesses) == 2 * len(model.objects())
        remaining = set(reduce(model, R.members).objects())
        for x in model.objects():
            image = approx_functor_F(model, R.members, x)
            assert set(image) <= remaining, (R.label, x)
            if x in R.members:
                assert image == ()


@pytest.mark.parametrize("name", CORPUS)
def test_reduction_in_two_steps(name, request):
    """Test reduce(reduce(C, R), Q) agrees with reduce(C, Q) for nested R and Q."""
    model = request.getfixturevalue(name)
    rigid = enumerate_rigid(model)
    pairs = [(R, Q) for R in rigid for Q in rigid if set(R.members) <= set(Q.members)]
    assert pairs
    for R, Q in pairs:
        report = compare_reductions(model, R.members, Q.members)
        assert report.registry_match, (R.label, Q.label)
        assert report.hom_match, (R.label, Q.label)
        assert report.ext_match, (R.label, Q.label)
        assert report.silting_match, (R.label, Q.label)
