from fractions import Fraction

import pytest

from sepchoice.choice_space import restrict_type_matrix
from sepchoice.cone_geometry import v_to_h
from sepchoice.scenarios import (
    BadAlpha,
    BadIndividualRule,
    BadWeights,
    DOMINANCE_ALLOWED,
    fs_space,
    gen_dominance_space,
    gen_mixture,
    gen_product,
    gen_table1,
)
from sepchoice.separability import (
    Label,
    check_chsh,
    check_marginality,
    classify,
    correlators,
    has_unique_representation,
    joint_type_matrix,
)

from conftest import A_DOM, normalized_rows

F = Fraction
HALF = F(1, 2)
UNIFORM = [HALF] * 4


def test_table1_entries():
    assert set(gen_table1(HALF).stacked()) == {0, HALF}
    assert set(gen_table1(F(1, 4)).stacked()) == {F(1, 4)}


@pytest.mark.parametrize("alpha, label", [(HALF, Label.ENTANGLED), (F(1, 4), Label.SEPARABLE),
                                          (F(2, 5), Label.ENTANGLED)])
def test_table1_labels(alpha, label):
    assert classify(gen_table1(alpha)).label is label


@pytest.mark.parametrize("alpha", [F(-1, 10), F(3, 5), "7/10"])
def test_table1_range(alpha):
    with pytest.raises(BadAlpha):
        gen_table1(alpha)


def test_product_of_uniform_is_table1_quarter():
    assert (gen_product(UNIFORM, UNIFORM).stacked() == gen_table1(F(1, 4)).stacked()).all()


def test_product_of_deterministic_is_a_column():
    A = joint_type_matrix(fs_space())
    z = gen_product([1, 0, 0, 1], [0, 1, 1, 0]).stacked()
    assert set(z) <= {0, 1}
    assert any((A[:, k] == z).all() for k in range(16))


def test_product_separable():
    rule = gen_product([F(2, 3), F(1, 3), HALF, HALF], UNIFORM)
    assert check_marginality(rule) is None
    assert classify(rule).label is Label.SEPARABLE


@pytest.mark.parametrize("bad", [[1, 0, 0], [HALF, HALF, 1, 1], [F(3, 2), F(-1, 2), 1, 0]])
def test_product_rejects_bad_individual(bad):
    with pytest.raises(BadIndividualRule):
        gen_product(bad, UNIFORM)


def test_mixture_point_mass_is_first_column():
    fs = fs_space()
    assert (gen_mixture(fs, {(0, 0): 1}).stacked() == joint_type_matrix(fs)[:, 0]).all()


def test_mixture_of_agreeing_rules():
    fs = fs_space()
    # rules 0 = (x,y) and 3 = (w,z): both DMs always pick the same position
    rule = gen_mixture(fs, {(0, 0): HALF, (3, 3): HALF})
    E = correlators(rule)
    assert set(E.E.values()) == {1}
    assert check_chsh(rule) is None


def test_uniform_mixture_is_table1_quarter():
    fs = fs_space()
    w = {(i, j): F(1, 16) for i in range(4) for j in range(4)}
    assert (gen_mixture(fs, w).stacked() == gen_table1(F(1, 4)).stacked()).all()


@pytest.mark.parametrize("weights", [{(0, 0): HALF}, {(0, 0): F(3, 2), (1, 1): F(-1, 2)},
                                     {(0, 4): 1}, {(0,): 1}])
def test_mixture_rejects_bad_weights(weights):
    with pytest.raises(BadWeights):
        gen_mixture(fs_space(), weights)


def test_dominance_space():
    space, allowed = gen_dominance_space()
    assert allowed == DOMINANCE_ALLOWED
    A = restrict_type_matrix(space, 0, allowed[0])
    assert (A == A_DOM).all()
    assert has_unique_representation(A, space, 0)
    rows = normalized_rows(v_to_h(A))
    assert (1, 0, -1, 0) in rows and (0, -1, 0, 1) in rows


def test_restricted_mixture_uses_restricted_numbering():
    space, allowed = gen_dominance_space()
    rule = gen_mixture(space, {(1, 0): 1}, allowed=allowed)  # restricted rule 1 is (x, z)
    assert rule.prob([(0, 0), (0, 0)]) == 1 and rule.prob([(1, 1), (1, 0)]) == 1
