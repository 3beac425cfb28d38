import pytest

from errors import HomCountBudgetExceeded
from picture import build_picture_category
from presentations import (
    GroupPresentation,
    abelian_label,
    abelianization,
    b_generators,
    count_homomorphisms,
    cyclic_reduce,
    free_reduce,
    interval_rewriting,
    invariants,
    parse_presentation,
    parse_word,
    pi1_nerve,
    picture_group,
    presentation_from_poset,
    tietze_simplify,
    word_text,
)
from silting import explore_silt_poset


def test_words():
    """Test parsing, printing and reduction of words."""
    assert word_text(parse_word("a*B")) == "a*B"
    assert word_text(free_reduce(parse_word("a*A*b"))) == "b"
    assert word_text(cyclic_reduce(parse_word("a*b*A"))) == "b"
    assert parse_word("1") == ()
    assert word_text(()) == "1"


def test_presentation_validation():
    """Test lowercase, free-reduced and distinct names are enforced."""
    with pytest.raises(ValueError):
        GroupPresentation(("A",), ())
    with pytest.raises(ValueError):
        GroupPresentation(("a",), ((("a", 1), ("a", -1)),))
    with pytest.raises(ValueError):
        GroupPresentation(("a", "a"), ())


def test_presentation_text():
    """Test the text form and the dict form of a presentation."""
    pres = parse_presentation("gens: a b\nrels: a*b*A*B b*b\n")
    assert pres.generators == ("a", "b")
    assert pres.to_text() == "gens: a b\nrels: a*b*A*B b*b\n"
    assert pres.as_dict()["relators"] == ["a*b*A*B", "b*b"]


def test_tietze_drops_killed_generator():
    """<a, b | b> simplifies to <a | >."""
    pres = tietze_simplify(parse_presentation("gens: a b\nrels: b\n"))
    assert pres.generators == ("a",)
    assert pres.relators == ()
    assert pres.log[0]["generator"] == "b"


def test_tietze_solves_single_occurrences():
    """Test a relator with a single occurrence eliminates its generator."""
    pres = tietze_simplify(parse_presentation("gens: a b c\nrels: a*b*C\n"))
    assert len(pres.generators) == 2
    assert pres.relators == ()


def test_abelianization():
    """Test invariant factors of small presentations."""
    assert abelianization(parse_presentation("gens: a\nrels: a*a*a\n")) == [3]
    assert abelianization(parse_presentation("gens: a b\nrels: a*b*A*B\n")) == [0, 0]
    assert abelianization(parse_presentation("gens: a b\nrels: a*a\n")) == [2, 0]
    assert abelianization(GroupPresentation((), ())) == []


def test_abelian_labels():
    """Test labels for the abelian groups."""
    assert abelian_label([]) == "1"
    assert abelian_label([0]) == "Z"
    assert abelian_label([0, 0]) == "Z^2"
    assert abelian_label([2, 0]) == "Z/2 x Z"


def test_homomorphism_counts():
    """Test homomorphism counts and the search budget."""
    integers = parse_presentation("gens: a\nrels:\n")
    assert count_homomorphisms(integers, "S3") == 6
    assert count_homomorphisms(integers, "Z2") == 2
    commuting = parse_presentation("gens: a b\nrels: a*b*A*B\n")
    assert count_homomorphisms(commuting, "S3") == 18
    cube_root = parse_presentation("gens: a\nrels: a*a*a\n")
    assert count_homomorphisms(cube_root, "Z3") == 3
    assert count_homomorphisms(cube_root, "Z2") == 1
    with pytest.raises(HomCountBudgetExceeded):
        count_homomorphisms(parse_presentation("gens: a b c\nrels:\n"), "S3", budget=100)
    with pytest.raises(ValueError):
        count_homomorphisms(integers, "A5")


def test_two_element_chain(lam2):
    """A single covering relation gives the integers."""
    pres = presentation_from_poset(explore_silt_poset(lam2))
    assert pres.generators == ("g0_1",)
    assert pres.relators == ()
    result = invariants(pres)
    assert result.abelianization == [0]
    assert result.hom_counts == {"Z2": 2, "Z3": 3, "S3": 6}


def test_pentagon_without_labels(a2):
    """Test the unlabelled pentagon presentation abelianizes to Z^4."""
    pres = tietze_simplify(presentation_from_poset(explore_silt_poset(a2)))
    assert abelianization(pres) == [0, 0, 0, 0]


def test_interval_rewritings(a2):
    """Test every interval of the pentagon rewrites into covering generators."""
    poset = explore_silt_poset(a2)
    rewritings = interval_rewriting(poset)
    assert len(rewritings) == 8
    assert all(r.verified for r in rewritings)
    longest = max(rewritings, key=lambda r: r.steps)
    assert longest.generator == "g0_4"
    assert longest.steps == 2
    assert longest.word.count("*") == 2
    assert "g0_4" not in longest.word


def test_interval_rewriting_needs_chain_relators(a2):
    """Test a rewriting fails once the relators it would use are removed."""
    poset = explore_silt_poset(a2)
    pres = presentation_from_poset(poset)
    kept = tuple(r for r in pres.relators if all(g != "g0_4" for g, _ in r))
    assert len(kept) < len(pres.relators)
    rewritings = {r.generator: r for r in interval_rewriting(poset, GroupPresentation(pres.generators, kept))}
    assert not rewritings["g0_4"].verified
    assert rewritings["g0_4"].steps == 0
    assert rewritings["g0_4"].word == "g0_4"
    assert all(r.verified for name, r in rewritings.items() if name != "g0_4")


def test_labelled_rewriting_on_module_category(lam2):
    """Test a single covering interval rewrites to its own label."""
    poset = explore_silt_poset(lam2)
    labels = b_generators(build_picture_category(lam2)).edge_labels()
    [rewriting] = interval_rewriting(poset, labels=labels)
    assert rewriting.generator == "b0"
    assert rewriting.word == "b0"
    assert rewriting.verified


def test_generating_objects(lam2, a2, local):
    """Test the generating objects of three picture categories."""
    assert b_generators(build_picture_category(local)).objects == ["A"]
    report = b_generators(build_picture_category(lam2))
    assert report.objects == ["A/[1,2]"]
    assert report.edge_labels() == {(0, 1): "b0"}
    assert len(b_generators(build_picture_category(a2)).objects) == 3


def test_nerve_presentation(lam2):
    """Test the nerve route for lambda_2 gives Z."""
    pres = tietze_simplify(pi1_nerve(build_picture_category(lam2)))
    assert abelianization(pres) == [0]


def test_both_routes_agree_on_module_category(lam2):
    """Test both routes give Z for lambda_2."""
    report = picture_group(build_picture_category(lam2))
    assert report.agree
    assert report.poset_invariants.label == "Z"
    assert report.generating_objects == ["A/[1,2]"]


def test_both_routes_agree_on_pentagon(a2):
    """The picture group of kA_2 is free on two generators."""
    report = picture_group(build_picture_category(a2))
    assert report.agree
    assert report.poset_invariants.abelianization == [0, 0]
    assert report.poset_invariants.hom_counts["S3"] == 36
    assert report.nerve_invariants.hom_counts["Z3"] == 9


def test_both_routes_agree_on_longer_module_category(lam3):
    """Test both routes give Z^2 for lambda_3."""
    report = picture_group(build_picture_category(lam3))
    assert report.agree
    assert report.poset_invariants.abelianization == [0, 0]
    assert report.nerve_invariants.abelianization == [0, 0]
