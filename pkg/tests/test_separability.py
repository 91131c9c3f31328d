import itertools
import random
from fractions import Fraction

import pytest

from sepchoice.choice_space import build_type_matrix, restrict_type_matrix, validate_space
from sepchoice.corpus import pr_box, random_separable
from sepchoice.scenarios import DOMINANCE_ALLOWED, fs_space, gen_mixture, gen_product, gen_table1
from sepchoice.separability import (
    ChshViolation,
    InvalidRule,
    JointChoiceRule,
    Label,
    MarginalityViolation,
    NotChshScenario,
    NotGenerating,
    NotTwoDms,
    TensorRowViolation,
    check_chsh,
    check_k_marginalizable,
    check_marginality,
    check_separable,
    check_separable_restrictions,
    chsh_values,
    classify,
    correlators,
    default_h_list,
    extension_system,
    has_unique_representation,
    is_generating,
    joint_type_matrix,
    solve_signed_measure,
)

from conftest import H_DOM, H_FS, signaling_rule

F = Fraction
HALF = F(1, 2)


def test_rule_structure_checks(fs):
    with pytest.raises(InvalidRule):
        JointChoiceRule(fs, {(0, 0): (F(1),) * 4})
    with pytest.raises(InvalidRule):
        JointChoiceRule(fs, {mp: (F(1),) for mp in fs.menu_paths()})


def test_validate_names_the_menu_path(fs):
    probs = {mp: (F(1, 4),) * 4 for mp in fs.menu_paths()}
    probs[(1, 0)] = (F(1, 2),) * 4
    with pytest.raises(InvalidRule, match=r"\[1, 0\].*sum to 2"):
        JointChoiceRule(fs, probs).validate()
    probs[(1, 0)] = (F(-1, 4), F(3, 4), F(1, 4), F(1, 4))
    with pytest.raises(InvalidRule, match="negative"):
        JointChoiceRule(fs, probs).validate()


@pytest.mark.parametrize("alpha", [F(0), F(1, 8), F(1, 4), F(1, 3), HALF])
def test_table1_marginality(alpha):
    assert check_marginality(gen_table1(alpha)) is None


def test_product_rules_satisfy_marginality():
    rule = gen_product([F(2, 3), F(1, 3), HALF, HALF], [F(1, 4), F(3, 4), F(1), F(0)])
    assert check_marginality(rule) is None


def test_signaling_example():
    v = check_marginality(signaling_rule())
    assert isinstance(v, MarginalityViolation)
    assert (v.lhs, v.rhs) == (1, 0)
    assert v.dm == 0 and v.fixed == ((1, 0, 0),)
    assert "x from {x,w}" in v.describe(fs_space())


@pytest.mark.parametrize("alpha", [F(0), F(1, 4), F(1, 3), HALF])
def test_table1_correlators(alpha):
    beta = HALF - alpha
    E = correlators(gen_table1(alpha))
    assert E[(0, 0)] == E[(1, 0)] == E[(0, 1)] == 2 * (alpha - beta)
    assert E[(1, 1)] == 2 * (beta - alpha)


def test_correlators_trivial_rules(fs):
    assert set(correlators(gen_table1(F(1, 4))).E.values()) == {0}
    both_first = gen_mixture(fs, {(0, 0): 1})
    assert set(correlators(both_first).E.values()) == {1}


def test_flip_changes_sign():
    r = gen_table1(HALF)
    assert correlators(r, frozenset({(1, 1)}))[(1, 1)] == 1
    assert correlators(r, frozenset({(1, 1)}))[(0, 1)] == -1


def test_chsh_examples():
    v = check_chsh(gen_table1(HALF))
    assert isinstance(v, ChshViolation)
    assert v.value == 4 and v.bound == 2 and v.expression == 0
    assert check_chsh(gen_table1(F(3, 8))) is None
    assert chsh_values(gen_table1(F(3, 8)))[0] == 2
    assert set(chsh_values(gen_table1(F(1, 4)))) == {0}


def test_chsh_lower_bound_at_alpha_zero():
    # alpha = 0 puts all mass on mismatches in three blocks: expression 1 is -4.
    v = check_chsh(gen_table1(F(0)))
    assert v is not None and v.value == -4 and v.bound == -2 and v.index == 1


def test_chsh_needs_binary_two_menu_space():
    s = validate_space({"dms": [{"alternatives": ["a", "b"], "menus": [["a", "b"]]}] * 2})
    rule = JointChoiceRule(s, {(0, 0): (F(1, 4),) * 4})
    with pytest.raises(NotChshScenario):
        check_chsh(rule)


def test_separable_examples(fs):
    res = check_separable(gen_table1(HALF))
    assert not res.feasible
    res.verify(joint_type_matrix(fs), gen_table1(HALF).stacked())
    A = joint_type_matrix(fs)
    for col in range(16):
        rule = JointChoiceRule.from_stacked(fs, A[:, col])
        res = check_separable(rule)
        assert res.feasible
        assert sum(res.witness) == 1 and res.witness[col] == 1
    res = check_separable(gen_table1(F(3, 8)))
    assert res.feasible
    assert (A.dot(res.witness) == gen_table1(F(3, 8)).stacked()).all()


def test_signed_measure(fs):
    A = joint_type_matrix(fs)
    rho = gen_table1(HALF).stacked()
    nu = solve_signed_measure(gen_table1(HALF))
    assert nu is not None and (A.dot(nu) == rho).all()
    assert min(nu) < 0
    assert solve_signed_measure(gen_table1(F(1, 4))) is not None
    assert solve_signed_measure(signaling_rule()) is None


def test_generating_and_uniqueness(fs):
    A1 = build_type_matrix(fs, 0)
    for cols in itertools.combinations(range(4), 3):
        assert is_generating(A1[:, list(cols)], fs, 0)
    for cols in itertools.combinations(range(4), 2):
        assert not is_generating(A1[:, list(cols)], fs, 0)
    assert is_generating(A1, fs, 0)
    assert has_unique_representation(restrict_type_matrix(fs, 0, [0, 2, 3]), fs, 0)
    assert not has_unique_representation(A1, fs, 0)
    three = validate_space({"dms": [{"alternatives": list("abcdef"),
                                     "menus": [["a", "b"], ["c", "d"], ["e", "f"]]}]})
    A3 = build_type_matrix(three, 0)
    assert A3.shape == (6, 8)
    assert is_generating(A3, three, 0)
    assert not has_unique_representation(A3, three, 0)
    with pytest.raises(NotGenerating):
        has_unique_representation(A1[:, [0, 1]], fs, 0)


@pytest.mark.parametrize("alpha", [F(0), F(1, 4), F(2, 5), HALF])
def test_table1_passes_unrestricted_restrictions(alpha):
    assert check_separable_restrictions(gen_table1(alpha), [H_FS, H_FS]) is None
    assert check_separable_restrictions(gen_table1(alpha)) is None


def test_table1_violates_dominance_restrictions():
    v = check_separable_restrictions(gen_table1(HALF), [H_DOM, H_FS])
    assert isinstance(v, TensorRowViolation)
    assert v.value < 0
    # the first violated row pairs a monotonicity row of the first DM with a nonnegativity row
    assert v.rows_per_dm[0] in (0, 1) and v.rows_per_dm[1] >= 2


def test_uniform_passes_restrictions():
    assert check_separable_restrictions(gen_table1(F(1, 4)), [H_FS, H_FS]) is None


def test_restrictions_catch_signaling():
    # adding-up rows tensored with nonnegativity rows already encode marginality
    v = check_separable_restrictions(signaling_rule())
    assert isinstance(v, TensorRowViolation) and v.rows_per_dm[0] in (0, 1)


def test_extension_examples():
    assert not check_k_marginalizable(gen_table1(HALF), 2, True).feasible
    for avg in (True, False):
        assert check_k_marginalizable(gen_table1(F(1, 4)), 2, avg).feasible
    res = check_k_marginalizable(gen_table1(F(1, 3)), 3, False)
    assert res.feasible
    A, b, ext = extension_system(gen_table1(F(1, 3)), 3, False)
    assert ext.n_dms == 4
    res.verify(A, b)


def test_extension_k1_is_the_rule_itself():
    # with one replica the extension must equal rho, so feasibility is marginality + validity
    assert check_k_marginalizable(gen_table1(HALF), 1, False).feasible


def test_extension_argument_checks():
    with pytest.raises(ValueError):
        check_k_marginalizable(gen_table1(HALF), 0, False)
    s = validate_space({"dms": [{"alternatives": ["a"], "menus": [["a"]]}] * 3})
    with pytest.raises(NotTwoDms):
        check_k_marginalizable(JointChoiceRule(s, {(0, 0, 0): (F(1),)}), 2, False)


def test_classify_examples():
    assert classify(gen_table1(HALF)).label is Label.ENTANGLED
    assert classify(gen_table1(F(1, 4))).label is Label.SEPARABLE
    assert classify(signaling_rule()).label is Label.SIGNALING
    assert classify(gen_table1(HALF), DOMINANCE_ALLOWED).label is Label.RESTRICTED_VIOLATION


def test_classify_alpha_zero_is_entangled():
    c = classify(gen_table1(F(0)))
    assert c.label is Label.ENTANGLED
    assert not c.evidence.feasible


def test_classify_invalid(fs):
    probs = {mp: (F(1, 2),) * 4 for mp in fs.menu_paths()}
    c = classify(JointChoiceRule(fs, probs))
    assert c.label is Label.INVALID
    assert "[0, 0]" in c.message


def test_classify_witness_reproduces_rule(fs):
    rng = random.Random(5)
    for _ in range(20):
        rule = random_separable(rng)
        c = classify(rule)
        assert c.label is Label.SEPARABLE
        assert (joint_type_matrix(fs).dot(c.evidence.witness) == rule.stacked()).all()


def test_pr_boxes_are_entangled():
    for a, b, c in itertools.product(range(2), repeat=3):
        rule = pr_box(a, b, c)
        assert classify(rule).label is Label.ENTANGLED
        assert check_chsh(rule) is not None


def test_default_h_list_shapes(fs):
    hs = default_h_list(fs, DOMINANCE_ALLOWED)
    assert [H.shape[0] for H in hs] == [8, 6]
