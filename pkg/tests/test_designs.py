import random
from fractions import Fraction

import pytest

from splitauth import (
    DesignParams,
    InputError,
    ParseError,
    SplittingDesign,
    StructureError,
    canonicalize,
    check_divisibility,
    check_feasibility,
    check_fisher,
    check_parameter_relations,
    count_qualifying_blocks,
    format_design,
    load_design,
    parse_design,
    replication_number,
    store_design,
    verify_splitting_design,
)
from splitauth.fixtures import design_2_9, design_3_10, fano_design

from oracles import classical_cover_counts, replication_census

P_2_9 = DesignParams(t=2, v=9, c=2, u=2, lambda_=1, b=9)
P_3_10 = DesignParams(t=3, v=10, c=2, u=3, lambda_=1, b=15)
P_2_10 = DesignParams(t=2, v=10, c=2, u=2, lambda_=1)


# ---------------------------------------------------------------------------
# verification
# ---------------------------------------------------------------------------


@pytest.mark.parametrize(
    "fixture, t, histogram",
    [
        (design_2_9, 2, {1: 36}),
        (design_3_10, 3, {1: 120}),
        (fano_design, 2, {1: 21}),
    ],
)
def test_fixture_designs_verify(fixture, t, histogram):
    design, params = fixture()
    report = verify_splitting_design(design, t, 1)
    assert report.passed
    assert report.counterexample is None
    assert dict(report.histogram) == histogram
    assert report.strength == t and report.coverage == 1


def test_strength_three_design_verifies_at_strength_two():
    design, _ = design_3_10()
    report = verify_splitting_design(design, 2, 4)
    assert report.passed
    assert dict(report.histogram) == {4: 45}


def test_mutated_block_fails_with_least_counterexample():
    design, _ = design_2_9()
    blocks = list(design.blocks)
    assert blocks[0] == ((0, 1), (2, 4))
    blocks[0] = ((0, 1), (2, 5))
    bad = SplittingDesign(v=9, blocks=tuple(blocks), labels=design.labels)
    report = verify_splitting_design(bad, 2, 1)
    assert not report.passed
    assert report.counterexample == ((0, 4), 0)
    assert dict(report.histogram) == {0: 2, 1: 32, 2: 2}


def test_repeated_blocks_count_with_multiplicity():
    # A block family may repeat a block; coverage counts see each copy.
    design, _ = design_2_9()
    doubled = SplittingDesign(
        v=9, blocks=design.blocks + design.blocks[:1], labels=design.labels
    )
    assert count_qualifying_blocks(doubled, (0, 2)) == 2
    report = verify_splitting_design(doubled, 2, 1)
    assert not report.passed
    assert dict(report.histogram) == {1: 32, 2: 4}


def test_verification_ignores_block_and_sub_block_order():
    design, _ = design_3_10()
    rng = random.Random(7)
    blocks = [list(block) for block in design.blocks]
    for block in blocks:
        rng.shuffle(block)
    rng.shuffle(blocks)
    shuffled = SplittingDesign(
        v=design.v, blocks=tuple(tuple(b) for b in blocks), labels=design.labels
    )
    original = verify_splitting_design(design, 3, 1)
    report = verify_splitting_design(shuffled, 3, 1)
    assert report == original
    assert canonicalize(shuffled) == canonicalize(design)


def test_threaded_scan_agrees_with_serial():
    design, _ = design_3_10()
    serial = verify_splitting_design(design, 3, 1)
    threaded = verify_splitting_design(design, 3, 1, threads=4)
    assert threaded == serial


def test_verify_rejects_bad_strength_and_coverage():
    design, _ = design_2_9()
    with pytest.raises(InputError):
        verify_splitting_design(design, 3, 1)  # t exceeds u
    with pytest.raises(InputError):
        verify_splitting_design(design, 0, 1)
    with pytest.raises(InputError):
        verify_splitting_design(design, 2, 0)


@pytest.mark.parametrize(
    "design, subset, expected",
    [
        (design_2_9, (0, 1), 1),
        (design_2_9, (2, 4), 1),
        (design_3_10, (1, 2, 3), 1),
    ],
)
def test_count_qualifying_blocks_examples(design, subset, expected):
    d, _ = design()
    assert count_qualifying_blocks(d, subset) == expected


def test_count_qualifying_blocks_input_checks():
    design, _ = design_2_9()
    with pytest.raises(InputError):
        count_qualifying_blocks(design, (0, 0))
    with pytest.raises(InputError):
        count_qualifying_blocks(design, (0, 9))
    with pytest.raises(InputError):
        count_qualifying_blocks(design, (0, 1, 2))  # size beyond u


def test_fano_splitting_property_equals_classical_containment():
    # With singleton sub-blocks, proper coverage is plain containment.
    design, _ = fano_design()
    census = classical_cover_counts(design, 2)
    assert set(census.values()) == {1}
    for subset, expected in census.items():
        assert count_qualifying_blocks(design, subset) == expected


# ---------------------------------------------------------------------------
# replication numbers and parameter screening
# ---------------------------------------------------------------------------


def test_replication_number_examples():
    assert replication_number(P_2_9, 1) == 4
    assert replication_number(P_3_10, 1) == 9
    assert replication_number(P_3_10, 2) == 4
    assert replication_number(P_2_10, 1) == Fraction(9, 2)


@pytest.mark.parametrize(
    "fixture, params",
    [(design_2_9, P_2_9), (design_3_10, P_3_10)],
)
def test_replication_matches_brute_force_census(fixture, params):
    design, _ = fixture()
    for s in range(1, params.t + 1):
        expected = replication_number(params, s)
        census = replication_census(design, s)
        assert set(census.values()) == {expected}


def test_replication_number_rejects_out_of_range_order():
    with pytest.raises(InputError):
        replication_number(P_2_9, 0)
    with pytest.raises(InputError):
        replication_number(P_2_9, 3)


def test_counting_relations_on_strength_two_params():
    rel = check_parameter_relations(P_2_9)
    assert (rel.relation_a_holds, rel.relation_b_holds, rel.relation_c_holds) == (
        True,
        True,
        True,
    )


def test_relation_c_printed_form_is_specific_to_strength_two():
    # At t=3 the brute-force census still gives lambda_2 = 4 (see above), yet
    # the verbatim relation fails: 9 * 2**2 * 2 = 72 != 4 * 9.  Admissibility
    # must not be gated on it beyond strength 2.
    rel = check_parameter_relations(P_3_10)
    assert rel.relation_a_holds and rel.relation_b_holds
    assert rel.relation_c_holds is False
    assert check_feasibility(P_3_10).admissible


def test_relations_need_block_count():
    with pytest.raises(InputError):
        check_parameter_relations(P_2_10)


def test_relation_c_is_none_below_strength_two():
    rel = check_parameter_relations(DesignParams(1, 6, 2, 3, 4, b=4))
    assert rel.relation_c_holds is None


def test_divisibility_failures():
    assert check_divisibility(P_2_9) == ()
    assert check_divisibility(P_3_10) == ()
    assert check_divisibility(P_2_10) == (1,)


def test_fisher_inequality():
    assert check_fisher(P_2_9) is True
    assert check_fisher(P_3_10) is True
    assert check_fisher(DesignParams(1, 9, 2, 2, 4, b=2)) is None
    assert check_fisher(DesignParams(2, 12, 2, 2, 1, b=5)) is False
    with pytest.raises(InputError):
        check_fisher(DesignParams(2, 9, 2, 2, 1))


def test_feasibility_admits_both_fixture_parameter_sets():
    for params, blocks in ((P_2_9, 9), (P_3_10, 15)):
        report = check_feasibility(params)
        assert report.admissible
        assert report.block_count_required == blocks
        assert report.divisibility_failures == ()
        assert all(x.denominator == 1 for x in report.lambda_s_values)


def test_feasibility_rejects_fractional_replication():
    report = check_feasibility(P_2_10)
    assert not report.admissible
    assert report.divisibility_failures == (1,)
    assert report.block_count_required == Fraction(45, 4)
    # no integer b exists, so the incidence relations cannot hold either
    assert report.relation_a_holds is False and report.relation_b_holds is False
    assert report.fisher_holds is None


def test_feasibility_rejects_wrong_declared_block_count():
    report = check_feasibility(DesignParams(2, 9, 2, 2, 1, b=8))
    assert not report.admissible
    assert report.relation_b_holds is False


def test_params_validation():
    with pytest.raises(InputError):
        DesignParams(3, 9, 2, 2, 1)  # t > u
    with pytest.raises(InputError):
        DesignParams(2, 5, 2, 3, 1)  # c*u > v
    with pytest.raises(InputError):
        DesignParams(2, 9, 0, 2, 1)
    with pytest.raises(InputError):
        DesignParams(2, 9, 2, 2, 1, b=0)
    assert DesignParams(2, 9, 2, 2, 1).l == 4


def test_structural_validation():
    with pytest.raises(StructureError):
        SplittingDesign(v=4, blocks=()).validate()
    with pytest.raises(StructureError):
        SplittingDesign(v=4, blocks=(((0, 1), (1, 2)),)).validate()  # overlap
    with pytest.raises(StructureError):
        SplittingDesign(v=4, blocks=(((0, 1), (2, 4)),)).validate()  # out of range
    with pytest.raises(StructureError):
        SplittingDesign(
            v=4, blocks=(((0, 1), (2, 3)), ((0, 1),))
        ).validate()  # ragged block
    with pytest.raises(StructureError):
        SplittingDesign(v=4, blocks=(((0, 1), (2, 3)),), labels=(5, 3, 2, 1)).validate()


# ---------------------------------------------------------------------------
# canonical form
# ---------------------------------------------------------------------------

CANONICAL_2_9 = (
    ((0, 1), (2, 4)),
    ((0, 2), (7, 8)),
    ((0, 7), (5, 6)),
    ((0, 8), (1, 3)),
    ((1, 2), (3, 5)),
    ((1, 8), (6, 7)),
    ((2, 3), (4, 6)),
    ((3, 4), (5, 7)),
    ((4, 5), (6, 8)),
)


def test_canonicalize_frozen_form():
    design, _ = design_2_9()
    canon = canonicalize(design)
    assert canon.blocks == CANONICAL_2_9
    assert canon.labels == design.labels
    assert canonicalize(canon) == canon


def test_canonicalize_collapses_presentation_order():
    design, _ = design_2_9()
    rng = random.Random(3)
    for _ in range(5):
        blocks = [list(block) for block in design.blocks]
        for block in blocks:
            rng.shuffle(block)
        rng.shuffle(blocks)
        shuffled = SplittingDesign(
            v=design.v, blocks=tuple(tuple(b) for b in blocks), labels=design.labels
        )
        assert canonicalize(shuffled).blocks == CANONICAL_2_9


# ---------------------------------------------------------------------------
# file format
# ---------------------------------------------------------------------------


def test_design_file_round_trip(tmp_path):
    design, params = design_2_9()
    text = format_design(design, params.t, params.lambda_)
    again, again_params = parse_design(text)
    assert again == design
    assert again_params == params

    path = tmp_path / "roundtrip.design"
    store_design(design, params.t, params.lambda_, path)
    loaded, loaded_params = load_design(path)
    assert loaded == design and loaded_params == params


def test_parse_design_without_points_line_uses_seen_labels():
    design, params = parse_design(
        "t=2 v=3 c=1 u=2 lambda=1\n[[10],[30]]\n[[10],[40]]\n[[30],[40]]\n"
    )
    assert design.labels == (10, 30, 40)
    assert design.blocks == (((0,), (1,)), ((0,), (2,)), ((1,), (2,)))
    with pytest.raises(ParseError) as err:
        parse_design("t=2 v=4 c=1 u=2 lambda=1\n[[10],[30]]\n[[10],[40]]\n[[30],[40]]\n")
    assert "v=4" in str(err.value)


def test_parse_design_accepts_comments_and_blank_lines():
    text = (
        "# header first\n"
        "t=2 v=4 c=2 u=2 lambda=1  # inline comment\n"
        "\n"
        "points 1 2 3 4\n"
        "[[1,2],[3,4]]\n"
    )
    design, params = parse_design(text)
    assert design.num_blocks == 1
    assert design.labels == (1, 2, 3, 4)
    assert params.b == 1


@pytest.mark.parametrize(
    "text, lineno, fragment",
    [
        ("t=2 v=9 c=2 lambda=1\n[[1,2],[3,4]]\n", 1, "missing"),
        ("t=2 v=9 c=2 u=2 lambda=1 q=3\n[[1,2],[3,4]]\n", 1, "unknown header key"),
        ("t=2 v=9 c=2 u=2 lambda=x\n", 1, "not an integer"),
        ("t=2 v=4 c=2 u=2 lambda=1\nnot json\n", 2, "JSON"),
        ("t=2 v=4 c=2 u=2 lambda=1\n[[1,2]]\n", 2, "sub-blocks"),
        ("t=2 v=4 c=2 u=2 lambda=1\n[[1,2],[3]]\n", 2, "labels"),
        ("t=2 v=4 c=2 u=2 lambda=1\n[[1,2],[2,3]]\n", 2, "repeats"),
        ("t=2 v=4 c=2 u=2 lambda=1\npoints 1 2 3 4\npoints 1 2 3 4\n", 3, "duplicate points"),
        ("t=2 v=4 c=2 u=2 lambda=1\n[[1,2],[3,4]]\npoints 1 2 3 4\n", 3, "precede"),
        ("t=2 v=4 c=2 u=2 lambda=1\npoints 1 2 2 4\n", 2, "repeats a label"),
    ],
)
def test_parse_design_errors_carry_line_numbers(text, lineno, fragment):
    with pytest.raises(ParseError) as err:
        parse_design(text)
    assert err.value.line == lineno
    assert fragment in str(err.value)


@pytest.mark.parametrize(
    "text, fragment",
    [
        ("", "no header"),
        ("t=2 v=4 c=2 u=2 lambda=1\n", "no blocks"),
        ("t=2 v=4 c=2 u=2 lambda=1 b=2\n[[1,2],[3,4]]\n", "b=2"),
        ("t=2 v=5 c=2 u=2 lambda=1\n[[1,2],[3,4]]\n", "v=5"),
        ("t=2 v=4 c=2 u=2 lambda=1\npoints 1 2 3 5\n[[1,2],[3,4]]\n", "missing from the points line"),
    ],
)
def test_parse_design_whole_file_errors(text, fragment):
    with pytest.raises(ParseError) as err:
        parse_design(text)
    assert fragment in str(err.value)


def test_format_design_writes_original_labels():
    design, params = design_2_9()  # labelled 1..9
    text = format_design(design, params.t, params.lambda_)
    first, second = text.splitlines()[:2]
    assert first == "t=2 v=9 c=2 u=2 lambda=1 b=9"
    assert second == "points 1 2 3 4 5 6 7 8 9"
    assert "[[1,2],[3,5]]" in text


def test_fixture_labels_are_recorded():
    design, _ = design_2_9()
    assert design.labels == tuple(range(1, 10))
    assert design.label_of(0) == 1
    fano, _ = fano_design()
    assert fano.labels == tuple(range(7))
