"""Decision procedures for joint probabilistic choice rules.

A joint rule assigns, to every menu path (one menu per DM), a probability
vector over that path's choice paths.  The tests here decide whether such a
rule can come from independent DMs who each follow a deterministic rule
drawn from a common (possibly correlated) distribution, and produce
certificates either way.
"""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache, reduce
from typing import Any, Mapping, Sequence

import numpy as np

from .choice_space import (
    ChoiceSpace,
    DmSpec,
    build_type_matrix,
    restrict_type_matrix,
)
from .cone_geometry import v_to_h
from .exact_linalg import (
    DimensionMismatch,
    fmat,
    fvec,
    in_span,
    kron_apply,
    kronecker,
    nullspace,
    rank,
    solve_particular,
)
from .simplex import FeasibilityResult, lp_feasible

__all__ = [
    "InvalidRule",
    "NotChshScenario",
    "NotGenerating",
    "NotTwoDms",
    "JointChoiceRule",
    "MarginalityViolation",
    "ChshViolation",
    "TensorRowViolation",
    "CorrelatorTable",
    "Label",
    "Classification",
    "joint_type_matrix",
    "individual_rule_space_basis",
    "check_marginality",
    "correlators",
    "chsh_values",
    "check_chsh",
    "check_separable",
    "solve_signed_measure",
    "is_generating",
    "has_unique_representation",
    "default_h_list",
    "check_separable_restrictions",
    "extension_system",
    "check_k_marginalizable",
    "classify",
    "CHSH_SIGNS",
]


class InvalidRule(ValueError):
    pass


class NotChshScenario(ValueError):
    pass


class NotGenerating(ValueError):
    pass


class NotTwoDms(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class JointChoiceRule:
    """``probs[menu_path]`` lists probabilities in Kronecker choice-path order."""

    space: ChoiceSpace
    probs: Mapping[tuple[int, ...], tuple[Fraction, ...]]

    def __post_init__(self):
        for mp in self.space.menu_paths():
            if mp not in self.probs:
                raise InvalidRule(f"menu path {list(mp)} has no probabilities")
            want = len(self.space.choice_paths(mp))
            if len(self.probs[mp]) != want:
                raise InvalidRule(f"menu path {list(mp)} needs {want} probabilities, "
                                  f"got {len(self.probs[mp])}")
        if len(self.probs) != len(self.space.menu_paths()):
            raise InvalidRule("probabilities given for unknown menu paths")

    def validate(self) -> None:
        """Raise InvalidRule unless every menu path carries a distribution."""
        for mp in self.space.menu_paths():
            p = self.probs[mp]
            for cp, x in zip(self.space.choice_paths(mp), p):
                if x < 0:
                    raise InvalidRule(f"menu path {list(mp)}: negative probability "
                                      f"{x} on {self.space.choice_key(mp, cp)}")
            total = sum(p, Fraction(0))
            if total != 1:
                raise InvalidRule(f"menu path {list(mp)}: probabilities sum to {total}, not 1")

    def prob(self, cells: Sequence[tuple[int, int]]) -> Fraction:
        """Probability of the joint cell given as one (menu, position) per DM."""
        mp = tuple(j for j, _ in cells)
        idx = 0
        for t, (j, i) in enumerate(cells):
            idx = idx * self.space.dms[t].menu_sizes[j] + i
        return self.probs[mp][idx]

    def stacked(self) -> np.ndarray:
        """All probabilities in the row order of the joint type matrix."""
        return fvec(self.prob(cells) for cells in self.space.joint_rows())

    @classmethod
    def from_stacked(cls, space: ChoiceSpace, z) -> "JointChoiceRule":
        z = fvec(z)
        if len(z) != space.joint_size():
            raise DimensionMismatch(f"expected {space.joint_size()} entries, got {len(z)}")
        probs = {}
        for mp in space.menu_paths():
            probs[mp] = tuple(
                z[space.joint_row_index(list(zip(mp, cp)))] for cp in space.choice_paths(mp))
        return cls(space, probs)


# ---------------------------------------------------------------- marginality


@dataclass(frozen=True)
class MarginalityViolation:
    """DM ``dm``'s choices summed over menu ``menus[0]`` vs ``menus[1]``
    give ``lhs != rhs`` while every other DM is held at ``fixed``."""

    dm: int
    menus: tuple[int, int]
    fixed: tuple[tuple[int, int, int], ...]  # (other DM, menu, position)
    lhs: Fraction
    rhs: Fraction

    def describe(self, space: ChoiceSpace) -> str:
        d = space.dms[self.dm]
        held = ", ".join(f"DM {s} picks {space.dms[s].label(j, i)} from "
                         f"{space.dms[s].menu_label(j)}" for s, j, i in self.fixed)
        return (f"marginality fails: P({held}) depends on DM {self.dm}'s menu; summed over "
                f"DM {self.dm}'s choices from {d.menu_label(self.menus[0])} it is {self.lhs}, "
                f"from {d.menu_label(self.menus[1])} it is {self.rhs}")


def _marginal_sum(rule: JointChoiceRule, t: int, j: int, fixed) -> Fraction:
    total = Fraction(0)
    for i in range(rule.space.dms[t].menu_sizes[j]):
        cells = list(fixed)
        cells.insert(t, (j, i))
        total += rule.prob(cells)
    return total


def check_marginality(rule: JointChoiceRule) -> MarginalityViolation | None:
    """First marginality (no-signaling) violation, or None if there is none."""
    space = rule.space
    T = space.n_dms
    for t in range(T):
        n_menus = len(space.dms[t].menus)
        if n_menus < 2:
            continue
        others = [s for s in range(T) if s != t]
        for fixed in itertools.product(*(space.dms[s].pairs() for s in others)):
            sums = [_marginal_sum(rule, t, j, fixed) for j in range(n_menus)]
            for j, j2 in itertools.combinations(range(n_menus), 2):
                if sums[j] != sums[j2]:
                    return MarginalityViolation(
                        t, (j, j2), tuple((s, a, b) for s, (a, b) in zip(others, fixed)),
                        sums[j], sums[j2])
    return None


# ----------------------------------------------------------------------- CHSH

# Coefficients of (E[0,0], E[1,0], E[0,1], E[1,1]) in the four CHSH
# expressions; E[a, b] has DM 0 facing menu a and DM 1 facing menu b.
CHSH_SIGNS = ((1, 1, 1, -1), (1, 1, -1, 1), (1, -1, 1, 1), (-1, 1, 1, 1))
_CHSH_KEYS = ((0, 0), (1, 0), (0, 1), (1, 1))


@dataclass(frozen=True)
class CorrelatorTable:
    E: Mapping[tuple[int, int], Fraction]

    def __getitem__(self, key: tuple[int, int]) -> Fraction:
        return self.E[key]


@dataclass(frozen=True)
class ChshViolation:
    index: int  # 2*expression for the upper bound, 2*expression + 1 for the lower
    value: Fraction

    @property
    def expression(self) -> int:
        return self.index // 2

    @property
    def bound(self) -> int:
        return 2 if self.index % 2 == 0 else -2

    def describe(self, space: ChoiceSpace) -> str:
        text = chsh_expression_text(space, self.expression)
        rel = ">" if self.bound > 0 else "<"
        return f"CHSH inequality {self.expression + 1} fails: {text} = {self.value} {rel} {self.bound}"


def _require_chsh(space: ChoiceSpace) -> None:
    if space.n_dms != 2 or any(d.menu_sizes != (2, 2) for d in space.dms):
        raise NotChshScenario("CHSH needs exactly 2 DMs, each with 2 menus of 2 alternatives")


def chsh_expression_text(space: ChoiceSpace, e: int) -> str:
    parts = []
    for sign, (a, b) in zip(CHSH_SIGNS[e], _CHSH_KEYS):
        term = f"E[{space.dms[0].menu_label(a)},{space.dms[1].menu_label(b)}]"
        parts.append(("+ " if sign > 0 else "- ") + term)
    text = " ".join(parts)
    return text[2:] if text.startswith("+ ") else "-" + text[2:]


def correlators(rule: JointChoiceRule, flip: frozenset = frozenset()) -> CorrelatorTable:
    """Coordination measure for each of the four menu paths.

    Mass where both DMs pick the same in-menu position counts +1, mass on
    mismatched positions -1.  ``flip`` holds ``(dm, menu)`` pairs whose two
    positions are swapped before pairing.
    """
    _require_chsh(rule.space)
    E = {}
    for a, b in _CHSH_KEYS:
        total = Fraction(0)
        for i1 in range(2):
            for i2 in range(2):
                p1 = 1 - i1 if (0, a) in flip else i1
                p2 = 1 - i2 if (1, b) in flip else i2
                p = rule.prob([(a, i1), (b, i2)])
                total += p if p1 == p2 else -p
        E[(a, b)] = total
    return CorrelatorTable(E)


def chsh_values(rule: JointChoiceRule, flip: frozenset = frozenset()) -> tuple[Fraction, ...]:
    E = correlators(rule, flip)
    return tuple(sum((s * E[k] for s, k in zip(signs, _CHSH_KEYS)), Fraction(0))
                 for signs in CHSH_SIGNS)


def check_chsh(rule: JointChoiceRule, flip: frozenset = frozenset()) -> ChshViolation | None:
    """First violated CHSH bound (8 bounds checked in order), or None."""
    for e, v in enumerate(chsh_values(rule, flip)):
        if v > 2:
            return ChshViolation(2 * e, v)
        if v < -2:
            return ChshViolation(2 * e + 1, v)
    return None


# ------------------------------------------------------------- separability LP


def _type_matrix(space: ChoiceSpace, t: int, allowed) -> np.ndarray:
    if allowed is None:
        return build_type_matrix(space, t)
    return restrict_type_matrix(space, t, allowed)


def _allowed_list(space: ChoiceSpace, allowed) -> list:
    if allowed is None:
        return [None] * space.n_dms
    allowed = list(allowed)
    if len(allowed) != space.n_dms:
        raise DimensionMismatch(f"need one allowed set (or None) per DM, got {len(allowed)}")
    return [None if a is None else tuple(a) for a in allowed]


def joint_type_matrix(space: ChoiceSpace, allowed=None) -> np.ndarray:
    """Kronecker product of the (possibly restricted) per-DM type matrices."""
    mats = [_type_matrix(space, t, a) for t, a in enumerate(_allowed_list(space, allowed))]
    return reduce(kronecker, mats)


def check_separable(rule: JointChoiceRule, allowed=None) -> FeasibilityResult:
    """Is the rule a mixture of joint deterministic profiles?

    Decides ``exists nu >= 0 : A nu = rho`` for the joint type matrix ``A``.
    """
    A = joint_type_matrix(rule.space, allowed)
    rho = rule.stacked()
    res = lp_feasible(A, rho)
    if res.feasible:
        # adding-up of any one menu path forces total mass 1
        assert sum(res.witness, Fraction(0)) == 1
    return res


def solve_signed_measure(rule: JointChoiceRule) -> np.ndarray | None:
    """A signed ``nu`` with ``A nu = rho``; exists exactly when marginality holds."""
    return solve_particular(joint_type_matrix(rule.space), rule.stacked())


# ------------------------------------------------- generating / uniqueness


def individual_rule_space_basis(space: ChoiceSpace, dm: int) -> np.ndarray:
    """Columns span the vectors whose per-menu block sums are all equal."""
    d: DmSpec = space.dms[dm]
    offsets = d.pair_offsets()
    sizes = d.menu_sizes
    rows = []
    for j in range(1, len(sizes)):
        row = [0] * d.pair_count
        for i in range(sizes[0]):
            row[offsets[0] + i] = 1
        for i in range(sizes[j]):
            row[offsets[j] + i] -= 1
        rows.append(row)
    if not rows:
        return fmat(np.eye(d.pair_count, dtype=int).tolist())
    return nullspace(fmat(rows))


def is_generating(A_restricted, space: ChoiceSpace, dm: int) -> bool:
    """Do signed combinations of these columns reach every individual rule?"""
    A_restricted = A_restricted if isinstance(A_restricted, np.ndarray) else fmat(A_restricted)
    if A_restricted.shape[0] != space.pair_count(dm):
        raise DimensionMismatch(f"DM {dm} has {space.pair_count(dm)} rows, "
                                f"matrix has {A_restricted.shape[0]}")
    B = individual_rule_space_basis(space, dm)
    return all(in_span(A_restricted, B[:, k]) for k in range(B.shape[1]))


def has_unique_representation(A_restricted, space: ChoiceSpace, dm: int) -> bool:
    A_restricted = A_restricted if isinstance(A_restricted, np.ndarray) else fmat(A_restricted)
    if not is_generating(A_restricted, space, dm):
        raise NotGenerating(f"DM {dm}: the columns do not generate every choice rule")
    return rank(A_restricted) == A_restricted.shape[1]


# --------------------------------------------------- separable restrictions


@dataclass(frozen=True)
class TensorRowViolation:
    row: int
    rows_per_dm: tuple[int, ...]
    value: Fraction

    def describe(self, space: ChoiceSpace) -> str:
        parts = " x ".join(f"DM {t} row {r}" for t, r in enumerate(self.rows_per_dm))
        return f"separable restriction {self.row} ({parts}) evaluates to {self.value} < 0"


@lru_cache(maxsize=256)
def _cached_h(space: ChoiceSpace, t: int, allowed: tuple | None) -> np.ndarray:
    return v_to_h(_type_matrix(space, t, allowed))


def default_h_list(space: ChoiceSpace, allowed=None) -> list[np.ndarray]:
    return [_cached_h(space, t, a) for t, a in enumerate(_allowed_list(space, allowed))]


def check_separable_restrictions(rule: JointChoiceRule, h_list=None, allowed=None):
    """Check ``(H_1 ⊗ ... ⊗ H_T) rho >= 0`` and marginality.

    Returns None when both hold, otherwise the first TensorRowViolation or
    the MarginalityViolation.
    """
    space = rule.space
    if h_list is None:
        h_list = default_h_list(space, allowed)
    h_list = [H if isinstance(H, np.ndarray) else fmat(H) for H in h_list]
    if len(h_list) != space.n_dms:
        raise DimensionMismatch(f"need {space.n_dms} H matrices, got {len(h_list)}")
    for t, H in enumerate(h_list):
        if H.shape[1] != space.pair_count(t):
            raise DimensionMismatch(f"H for DM {t} has {H.shape[1]} columns, "
                                    f"DM {t} has {space.pair_count(t)} pairs")
    values = kron_apply(h_list, rule.stacked())
    heights = [H.shape[0] for H in h_list]
    for r, v in enumerate(values):
        if v < 0:
            per_dm = np.unravel_index(r, heights)
            return TensorRowViolation(r, tuple(int(x) for x in per_dm), v)
    return check_marginality(rule)


# ------------------------------------------------------------ extension test


def _extension_space(space: ChoiceSpace, k: int) -> ChoiceSpace:
    return ChoiceSpace((space.dms[0],) + (space.dms[1],) * k)


def extension_system(rule: JointChoiceRule, k: int, on_average: bool):
    """Linear system ``A x = b, x >= 0`` over extended rules with ``k`` copies of DM 1.

    ``x`` is the extended rule stacked in joint-row order of the extended
    space (DM 0 followed by ``k`` replicas of DM 1).  Rows: adding-up per
    extended menu path, marginality for every coordinate, then the virtual
    rule constraints (each virtual rule equals ``rho``, or their sum equals
    ``k * rho`` when ``on_average``).  A virtual rule keeps DM 0 and one
    replica and marginalizes every other replica at its first menu.
    """
    space = rule.space
    if space.n_dms != 2:
        raise NotTwoDms("the extension test is defined for two original DMs")
    if k < 1:
        raise ValueError("k must be at least 1")
    ext = _extension_space(space, k)
    n = ext.joint_size()
    rows: list[dict[int, int]] = []
    rhs: list[Fraction] = []

    for mp in ext.menu_paths():
        rows.append({ext.joint_row_index(list(zip(mp, cp))): 1 for cp in ext.choice_paths(mp)})
        rhs.append(Fraction(1))

    T = ext.n_dms
    for t in range(T):
        sizes = ext.dms[t].menu_sizes
        others = [s for s in range(T) if s != t]
        for fixed in itertools.product(*(ext.dms[s].pairs() for s in others)):
            for j in range(1, len(sizes)):
                row: dict[int, int] = {}
                for jj, sign in ((0, 1), (j, -1)):
                    for i in range(sizes[jj]):
                        cells = list(fixed)
                        cells.insert(t, (jj, i))
                        idx = ext.joint_row_index(cells)
                        row[idx] = row.get(idx, 0) + sign
                rows.append(row)
                rhs.append(Fraction(0))

    rho = {cells: rule.prob(cells) for cells in space.joint_rows()}
    replica_menu0 = space.dms[1].menu_sizes[0]

    def virtual_row(j: int, c0, c1) -> dict[int, int]:
        row = {}
        others = [r for r in range(1, k + 1) if r != j]
        for picks in itertools.product(range(replica_menu0), repeat=len(others)):
            cells = [c0] + [None] * k
            cells[j] = c1
            for r, i in zip(others, picks):
                cells[r] = (0, i)
            row[ext.joint_row_index(cells)] = 1
        return row

    for c0, c1 in space.joint_rows():
        if on_average:
            row: dict[int, int] = {}
            for j in range(1, k + 1):
                for idx, v in virtual_row(j, c0, c1).items():
                    row[idx] = row.get(idx, 0) + v
            rows.append(row)
            rhs.append(k * rho[(c0, c1)])
        else:
            for j in range(1, k + 1):
                rows.append(virtual_row(j, c0, c1))
                rhs.append(rho[(c0, c1)])

    A = np.full((len(rows), n), Fraction(0), dtype=object)
    for r, row in enumerate(rows):
        for idx, v in row.items():
            if v:
                A[r, idx] = Fraction(v)
    return A, fvec(rhs), ext


def check_k_marginalizable(rule: JointChoiceRule, k: int, on_average: bool) -> FeasibilityResult:
    """Does ``rho`` admit a marginality-respecting extension to ``k`` replicas of DM 1?"""
    A, b, _ = extension_system(rule, k, on_average)
    return lp_feasible(A, b)


# -------------------------------------------------------------- classification


class Label(str, enum.Enum):
    INVALID = "Invalid"
    SIGNALING = "Signaling"
    SEPARABLE = "Separable"
    ENTANGLED = "Entangled"
    RESTRICTED_VIOLATION = "RestrictedViolation"


@dataclass(frozen=True, eq=False)
class Classification:
    label: Label
    evidence: Any = None
    message: str = ""
    details: dict = field(default_factory=dict)


def classify(rule: JointChoiceRule, allowed=None) -> Classification:
    """Invalid, Signaling, RestrictedViolation, Separable or Entangled, in that order."""
    try:
        rule.validate()
        allowed = _allowed_list(rule.space, allowed)
        mv = check_marginality(rule)
        if mv is not None:
            return Classification(Label.SIGNALING, mv, mv.describe(rule.space))
        rv = check_separable_restrictions(rule, allowed=allowed)
        if rv is not None:
            return Classification(Label.RESTRICTED_VIOLATION, rv, rv.describe(rule.space))
        res = check_separable(rule, allowed)
    except (ValueError, IndexError) as exc:
        return Classification(Label.INVALID, None, str(exc))
    if res.feasible:
        return Classification(Label.SEPARABLE, res, "rule is a mixture of deterministic profiles")
    return Classification(Label.ENTANGLED, res,
                          "rule satisfies the separable restrictions but is not a mixture")
