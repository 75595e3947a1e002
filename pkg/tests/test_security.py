import random
from fractions import Fraction

import pytest

from splitauth import (
    AttackWitness,
    AuthCode,
    InputError,
    SecurityModel,
    decode,
    deception_bound,
    deception_probability,
    deception_profile,
    design_to_code,
    encode,
    encoding_rule_bound,
    is_optimal,
    joint_deception_probability,
    security_order,
)
from splitauth.fixtures import code_2_9, code_3_10, fano_design

F = Fraction


def fano_code():
    design, _ = fano_design()
    return design_to_code(design, 2)


# ---------------------------------------------------------------------------
# frozen fixture profiles
# ---------------------------------------------------------------------------


def test_two_fold_profile_of_nine_message_code():
    profile = deception_profile(code_2_9())
    assert [(row.order, row.probability, row.bound) for row in profile.orders] == [
        (0, F(4, 9), F(4, 9)),
        (1, F(1, 4), F(1, 4)),
    ]
    assert all(row.meets_bound for row in profile.orders)
    assert profile.security_order == 1
    assert profile.orders[0].witness == AttackWitness((), 0, F(4, 9))
    assert profile.orders[1].witness == AttackWitness((0,), 1, F(1, 4))


def test_three_fold_profile_of_ten_message_code():
    profile = deception_profile(code_3_10())
    assert [(row.order, row.probability, row.bound) for row in profile.orders] == [
        (0, F(3, 5), F(3, 5)),
        (1, F(4, 9), F(4, 9)),
        (2, F(1, 4), F(1, 4)),
    ]
    assert profile.security_order == 2
    assert profile.orders[2].witness == AttackWitness((0, 1), 2, F(1, 4))


def test_acceptance_only_diagnostic_exceeds_fresh_source():
    # Bare acceptance lets the opponent resend into an already-traced source,
    # so the diagnostic dominates the primary figure strictly above order 0.
    profile = deception_profile(code_2_9())
    assert profile.orders[0].acceptance_probability == F(4, 9)
    assert profile.orders[1].acceptance_probability == F(1, 2)
    assert profile.orders[1].acceptance_witness == AttackWitness((0,), 1, F(1, 2))

    profile = deception_profile(code_3_10())
    assert [row.acceptance_probability for row in profile.orders] == [
        F(3, 5),
        F(32, 45),
        F(47, 60),
    ]
    assert profile.orders[1].acceptance_witness == AttackWitness((2,), 5, F(7, 9))
    assert profile.orders[2].acceptance_witness == AttackWitness((0, 6), 8, F(1))
    for row in profile.orders:
        assert row.acceptance_probability >= row.probability


def test_singleton_cell_profile_meets_bound_up_to_order_one():
    profile = deception_profile(fano_code())
    assert [(row.probability, row.bound) for row in profile.orders] == [
        (F(3, 7), F(3, 7)),
        (F(1, 3), F(1, 3)),
        (F(1), F(1, 5)),
    ]
    assert profile.security_order == 1


def test_security_orders():
    assert security_order(code_2_9()) == 1
    assert security_order(code_3_10()) == 2
    assert security_order(fano_code()) == 1


# ---------------------------------------------------------------------------
# bounds and optimality
# ---------------------------------------------------------------------------


def test_deception_bound_closed_form():
    # c-splitting: c(u-i)/(v-i)
    c29 = code_2_9()
    assert deception_bound(c29, 0) == F(4, 9)
    assert deception_bound(c29, 1) == F(1, 4)
    for i in range(3):
        assert deception_bound(fano_code(), i) == F(3 - i, 7 - i)
    with pytest.raises(InputError):
        deception_bound(c29, -1)


def test_encoding_rule_bounds_and_optimality():
    assert encoding_rule_bound(code_2_9(), 2) == 9
    assert encoding_rule_bound(code_3_10(), 3) == 15
    assert encoding_rule_bound(fano_code(), 2) == 7
    assert is_optimal(code_2_9(), 2)
    assert is_optimal(code_3_10(), 3)
    assert is_optimal(fano_code(), 2)


@pytest.mark.parametrize(
    "fixture, t",
    [(code_2_9, 2), (code_3_10, 3)],
)
def test_removing_any_rule_breaks_optimality_and_some_equality(fixture, t):
    code = fixture()
    for drop in range(code.num_rules):
        smaller = AuthCode(
            num_messages=code.num_messages,
            rules=code.rules[:drop] + code.rules[drop + 1 :],
            message_labels=code.message_labels,
        )
        assert not is_optimal(smaller, t)
        broken = any(
            deception_probability(smaller, i).probability != deception_bound(smaller, i)
            for i in range(t)
        )
        assert broken


def test_rule_bound_rejects_nonpositive_surplus():
    tiny = AuthCode(num_messages=2, rules=(((0,), (1,)),))
    with pytest.raises(InputError):
        encoding_rule_bound(tiny, 3)  # factor i=2 empties the surplus
    with pytest.raises(InputError):
        encoding_rule_bound(tiny, 0)


# ---------------------------------------------------------------------------
# guards and the model
# ---------------------------------------------------------------------------


def test_order_must_stay_below_source_count():
    code = code_2_9()
    with pytest.raises(InputError):
        deception_probability(code, 2)
    with pytest.raises(InputError):
        deception_probability(code, -1)
    with pytest.raises(InputError):
        deception_profile(code, max_order=2)


def test_large_universe_needs_opt_in():
    rules = (tuple((m,) for m in range(0, 4)), tuple((m,) for m in range(4, 8)))
    wide = AuthCode(num_messages=80, rules=rules)
    with pytest.raises(InputError):
        deception_probability(wide, 0)
    # rules accept disjoint message sets, so any insertion hits at most one
    evaluation = deception_probability(wide, 0, allow_large=True)
    assert evaluation.probability == F(1, 2)
    assert joint_deception_probability(wide, 0, allow_large=True) == F(1, 2)


def test_only_the_all_uniform_model_exists():
    with pytest.raises(InputError):
        SecurityModel(source_distribution="skewed")
    evaluation = deception_probability(code_2_9(), 1, model=SecurityModel())
    assert evaluation.probability == F(1, 4)


def test_threaded_evaluation_agrees_with_serial():
    code = code_3_10()
    for i in range(3):
        serial = deception_probability(code, i)
        threaded = deception_probability(code, i, threads=4)
        assert threaded == serial


# ---------------------------------------------------------------------------
# independent joint-distribution route
# ---------------------------------------------------------------------------


@pytest.mark.parametrize("fixture", [code_2_9, code_3_10, fano_code])
def test_joint_enumerator_matches_optimized_evaluator(fixture):
    code = fixture()
    for i in range(code.num_sources):
        for predicate in ("fresh_source", "acceptance_only"):
            fast = deception_probability(code, i, predicate=predicate).probability
            slow = joint_deception_probability(code, i, predicate=predicate)
            assert fast == slow, (i, predicate)


# ---------------------------------------------------------------------------
# randomized property suites
# ---------------------------------------------------------------------------


def random_code(rng, max_messages=10):
    """A valid code with 2..3 sources and possibly unequal cell sizes."""
    u = rng.randint(2, 3)
    v = rng.randint(u + 1, max_messages)
    rules = []
    for _ in range(rng.randint(2, 6)):
        messages = list(range(v))
        rng.shuffle(messages)
        cells = []
        used = 0
        for s in range(u):
            headroom = v - used - (u - s - 1)
            size = rng.randint(1, min(3, headroom))
            cells.append(tuple(messages[used : used + size]))
            used += size
        rules.append(tuple(cells))
    return AuthCode(num_messages=v, rules=tuple(rules))


def test_bound_holds_on_random_codes():
    rng = random.Random(20260813)
    for _ in range(100):
        code = random_code(rng)
        for i in range(code.num_sources):
            achieved = deception_probability(code, i).probability
            assert achieved >= deception_bound(code, i), code


def test_encode_decode_inverse_and_disjoint_cells_on_random_codes():
    rng = random.Random(97)
    for _ in range(100):
        code = random_code(rng)
        for rule_index, rule in enumerate(code.rules):
            union: set[int] = set()
            for source, cell in enumerate(rule):
                assert union.isdisjoint(cell)
                union.update(cell)
                for split in range(len(cell)):
                    message = encode(code, rule_index, source, split)
                    assert decode(code, rule_index, message) == source


def test_joint_enumerator_matches_on_random_codes():
    rng = random.Random(5)
    for _ in range(25):
        code = random_code(rng, max_messages=8)
        for i in range(code.num_sources):
            fast = deception_probability(code, i).probability
            assert fast == joint_deception_probability(code, i)
