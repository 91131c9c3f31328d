import pytest

from sepchoice.choice_space import (
    BadIndex,
    BadLabel,
    DuplicateAlternative,
    DuplicateMenu,
    EmptyAllowedSet,
    EmptyMenu,
    NoDms,
    NoMenus,
    UnknownAlternative,
    build_type_matrix,
    enumerate_rules,
    restrict_type_matrix,
    validate_space,
)
from sepchoice.exact_linalg import fmat, identity

from conftest import A_DOM, A_FS


def one_dm(*menus, alts=None):
    alts = alts or sorted({a for M in menus for a in M})
    return validate_space({"dms": [{"alternatives": alts, "menus": [list(M) for M in menus]}]})


def test_two_menu_experiment_counts(fs):
    assert fs.n_dms == 2
    for t in range(2):
        assert fs.pair_count(t) == 4
        assert fs.rule_count(t) == 4
    assert len(fs.menu_paths()) == 4
    assert fs.joint_size() == 16


def test_single_menu_single_alternative():
    s = one_dm(["a"])
    assert s.rule_count(0) == 1
    assert s.pair_count(0) == 1


@pytest.mark.parametrize("raw, err", [
    ({"dms": [{"alternatives": ["x"], "menus": [["x", "x"]]}]}, DuplicateAlternative),
    ({"dms": [{"alternatives": ["x", "x"], "menus": [["x"]]}]}, DuplicateAlternative),
    ({"dms": [{"alternatives": ["x"], "menus": [[]]}]}, EmptyMenu),
    ({"dms": [{"alternatives": ["x"], "menus": [["y"]]}]}, UnknownAlternative),
    ({"dms": [{"alternatives": ["x", "y"], "menus": [["x", "y"], ["y", "x"]]}]}, DuplicateMenu),
    ({"dms": []}, NoDms),
    ({}, NoDms),
    ({"dms": [{"alternatives": ["x"], "menus": []}]}, NoMenus),
    ({"dms": [{"alternatives": ["a|b"], "menus": [["a|b"]]}]}, BadLabel),
])
def test_invalid_spaces(raw, err):
    with pytest.raises(err):
        validate_space(raw)


def test_rule_order_first_menu_fastest(fs):
    labels = [r.labels(fs) for r in enumerate_rules(fs, 0)]
    assert labels == [("x", "y"), ("w", "y"), ("x", "z"), ("w", "z")]


def test_rule_counts_are_products():
    assert len(enumerate_rules(one_dm(["a", "b"], ["c", "d", "e"]), 0)) == 6
    assert [r.labels(one_dm(["a", "b"])) for r in enumerate_rules(one_dm(["a", "b"]), 0)] == [("a",), ("b",)]


def test_type_matrix_matches_printed(fs):
    assert (build_type_matrix(fs, 0) == A_FS).all()
    assert list(build_type_matrix(fs, 0)[0]) == [1, 0, 1, 0]


def test_type_matrix_single_menu_is_identity():
    assert (build_type_matrix(one_dm(["a", "b"]), 0) == identity(2)).all()


def test_type_matrix_repeated_binary_menus():
    s = validate_space({"dms": [{"alternatives": ["a", "b", "c", "d"],
                                 "menus": [["a", "b"], ["c", "d"]]}]})
    A = build_type_matrix(s, 0)
    cols = {tuple(A[:, k]) for k in range(4)}
    assert cols == {(1, 0, 1, 0), (0, 1, 1, 0), (1, 0, 0, 1), (0, 1, 0, 1)}


def test_type_matrix_columns_are_single_valued(fs):
    A = build_type_matrix(fs, 1)
    for k in range(A.shape[1]):
        assert A[0, k] + A[1, k] == 1 and A[2, k] + A[3, k] == 1


def test_restriction(fs):
    assert (restrict_type_matrix(fs, 0, [0, 2, 3]) == A_DOM).all()
    assert (restrict_type_matrix(fs, 0, [0, 1, 2, 3]) == build_type_matrix(fs, 0)).all()
    assert list(restrict_type_matrix(fs, 0, [1])[:, 0]) == [0, 1, 1, 0]


@pytest.mark.parametrize("allowed, err", [([], EmptyAllowedSet), ([4], BadIndex),
                                          ([0, 0], BadIndex), ([-1], BadIndex)])
def test_restriction_errors(fs, allowed, err):
    with pytest.raises(err):
        restrict_type_matrix(fs, 0, allowed)


def test_joint_row_index_roundtrip(fs):
    for k, cells in enumerate(fs.joint_rows()):
        assert fs.joint_row_index(cells) == k


def test_choice_keys(fs):
    assert fs.choice_key((0, 1), (1, 0)) == "w|y"
    assert fs.to_json()["dms"][0]["menus"] == [["x", "w"], ["y", "z"]]
    assert validate_space(fs.to_json()) == fs
