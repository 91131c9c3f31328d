"""Named example rules: the two-DM, two-menu experiment and its variants."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

import numpy as np

from .choice_space import ChoiceSpace, validate_space
from .exact_linalg import as_rational, fvec
from .separability import JointChoiceRule, joint_type_matrix

__all__ = [
    "BadAlpha",
    "BadWeights",
    "BadIndividualRule",
    "ScenarioSpec",
    "fs_space",
    "gen_table1",
    "gen_product",
    "gen_mixture",
    "gen_dominance_space",
    "DOMINANCE_ALLOWED",
]


class BadAlpha(ValueError):
    pass


class BadWeights(ValueError):
    pass


class BadIndividualRule(ValueError):
    pass


@dataclass(frozen=True)
class ScenarioSpec:
    name: str
    params: Mapping[str, Fraction] = field(default_factory=dict)


def fs_space() -> ChoiceSpace:
    """Two DMs, alternatives x, w, y, z, menus {x, w} and {y, z} for both."""
    dm = {"alternatives": ["x", "w", "y", "z"], "menus": [["x", "w"], ["y", "z"]]}
    return validate_space({"dms": [dm, dict(dm)]})


def gen_table1(alpha) -> JointChoiceRule:
    """The four-block rule parametrized by ``alpha`` with ``beta = 1/2 - alpha``.

    DM 0 indexes rows, DM 1 columns; each block is a menu path.  Blocks
    (xw, xw), (xw, yz) and (yz, xw) put alpha on matching positions; block
    (yz, yz) puts alpha on mismatched positions.  ``alpha = 1/2`` gives the
    maximal CHSH violation.
    """
    alpha = as_rational(alpha)
    if not 0 <= alpha <= Fraction(1, 2):
        raise BadAlpha(f"alpha={alpha} outside [0, 1/2]")
    beta = Fraction(1, 2) - alpha
    match = (alpha, beta, beta, alpha)
    anti = (beta, alpha, alpha, beta)
    probs = {(0, 0): match, (0, 1): match, (1, 0): match, (1, 1): anti}
    return JointChoiceRule(fs_space(), probs)


def _individual(space: ChoiceSpace, t: int, rho) -> list[Fraction]:
    d = space.dms[t]
    rho = [as_rational(x) for x in rho]
    if len(rho) != d.pair_count:
        raise BadIndividualRule(f"DM {t} needs {d.pair_count} probabilities, got {len(rho)}")
    for j, off in enumerate(d.pair_offsets()):
        block = rho[off:off + d.menu_sizes[j]]
        if any(x < 0 for x in block) or sum(block) != 1:
            raise BadIndividualRule(f"DM {t}, menu {d.menu_label(j)}: {block} is not a distribution")
    return rho


def gen_product(*individual: Sequence, space: ChoiceSpace | None = None) -> JointChoiceRule:
    """Independent DMs: ``rho(cells) = prod_t rho_t(cell_t)``.

    Each individual rule is listed in the DM's (menu, position) row order.
    """
    space = space or fs_space()
    if len(individual) != space.n_dms:
        raise BadIndividualRule(f"need {space.n_dms} individual rules, got {len(individual)}")
    rhos = [_individual(space, t, r) for t, r in enumerate(individual)]
    z = []
    for cells in space.joint_rows():
        p = Fraction(1)
        for t, (j, i) in enumerate(cells):
            p *= rhos[t][space.dms[t].pair_offsets()[j] + i]
        z.append(p)
    return JointChoiceRule.from_stacked(space, z)


def gen_mixture(space: ChoiceSpace, weights: Mapping[tuple[int, ...], object],
                allowed=None) -> JointChoiceRule:
    """``rho = A nu`` where ``nu`` puts ``weights[(c_1, ..., c_T)]`` on that profile.

    Keys are per-DM rule indices (columns of each DM's type matrix, or of
    the restricted matrix when ``allowed`` is given).
    """
    A = joint_type_matrix(space, allowed)
    widths = []
    for t in range(space.n_dms):
        a = None if allowed is None else allowed[t]
        widths.append(space.rule_count(t) if a is None else len(a))
    nu = [Fraction(0)] * A.shape[1]
    total = Fraction(0)
    for key, w in weights.items():
        w = as_rational(w)
        key = tuple(key)
        if w < 0:
            raise BadWeights(f"weight {w} on {key} is negative")
        if len(key) != space.n_dms or any(not 0 <= c < n for c, n in zip(key, widths)):
            raise BadWeights(f"{key} is not a valid rule profile")
        col = 0
        for c, n in zip(key, widths):
            col = col * n + c
        nu[col] += w
        total += w
    if total != 1:
        raise BadWeights(f"weights sum to {total}, not 1")
    return JointChoiceRule.from_stacked(space, A.dot(fvec(nu)))


# DM 0 keeps rules (x, y), (x, z), (w, z): never w from {x, w} together with y from {y, z}.
DOMINANCE_ALLOWED = ((0, 2, 3), None)


def gen_dominance_space() -> tuple[ChoiceSpace, tuple]:
    return fs_space(), DOMINANCE_ALLOWED
