"""Decision makers, menus, deterministic choice rules and index orderings.

Orderings used everywhere in the package:

* a DM's (menu, alternative) pairs are ordered by menu index, then by the
  alternative's position inside the menu;
* a DM's deterministic rules are ordered mixed-radix with the pick from the
  first menu varying fastest;
* joint objects (menu paths, choice paths, rows of the joint type matrix) use
  Kronecker order: the last DM varies fastest.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import prod
from typing import Iterator, Sequence

import numpy as np

__all__ = [
    "SpaceError",
    "EmptyMenu",
    "DuplicateAlternative",
    "UnknownAlternative",
    "DuplicateMenu",
    "NoDms",
    "NoMenus",
    "BadLabel",
    "EmptyAllowedSet",
    "BadIndex",
    "DmSpec",
    "ChoiceSpace",
    "DeterministicRule",
    "validate_space",
    "enumerate_rules",
    "build_type_matrix",
    "restrict_type_matrix",
]

LABEL_SEP = "|"


class SpaceError(ValueError):
    pass


class EmptyMenu(SpaceError):
    pass


class DuplicateAlternative(SpaceError):
    pass


class UnknownAlternative(SpaceError):
    pass


class DuplicateMenu(SpaceError):
    pass


class NoDms(SpaceError):
    pass


class NoMenus(SpaceError):
    pass


class BadLabel(SpaceError):
    pass


class EmptyAllowedSet(SpaceError):
    pass


class BadIndex(SpaceError, IndexError):
    pass


@dataclass(frozen=True)
class DmSpec:
    alternatives: tuple[str, ...]
    menus: tuple[tuple[str, ...], ...]

    @property
    def menu_sizes(self) -> tuple[int, ...]:
        return tuple(len(M) for M in self.menus)

    @property
    def pair_count(self) -> int:
        return sum(self.menu_sizes)

    @property
    def rule_count(self) -> int:
        return prod(self.menu_sizes)

    def pairs(self) -> list[tuple[int, int]]:
        """(menu index, in-menu position) for every row of the type matrix."""
        return [(j, i) for j, size in enumerate(self.menu_sizes) for i in range(size)]

    def pair_offsets(self) -> tuple[int, ...]:
        return tuple(itertools.accumulate((0,) + self.menu_sizes[:-1]))

    def label(self, menu: int, pos: int) -> str:
        return self.menus[menu][pos]

    def menu_label(self, menu: int) -> str:
        return "{" + ",".join(self.menus[menu]) + "}"


@dataclass(frozen=True)
class ChoiceSpace:
    dms: tuple[DmSpec, ...]

    @property
    def n_dms(self) -> int:
        return len(self.dms)

    def pair_count(self, t: int) -> int:
        return self.dms[t].pair_count

    def rule_count(self, t: int) -> int:
        return self.dms[t].rule_count

    def menu_paths(self) -> list[tuple[int, ...]]:
        return list(itertools.product(*(range(len(d.menus)) for d in self.dms)))

    def choice_paths(self, menu_path: Sequence[int]) -> list[tuple[int, ...]]:
        sizes = [self.dms[t].menu_sizes[j] for t, j in enumerate(menu_path)]
        return list(itertools.product(*(range(s) for s in sizes)))

    def joint_rows(self) -> list[tuple[tuple[int, int], ...]]:
        """Rows of the joint type matrix: one (menu, position) pair per DM."""
        return list(itertools.product(*(d.pairs() for d in self.dms)))

    def joint_size(self) -> int:
        return prod(d.pair_count for d in self.dms)

    def joint_row_index(self, cells: Sequence[tuple[int, int]]) -> int:
        idx = 0
        for d, (j, i) in zip(self.dms, cells):
            idx = idx * d.pair_count + d.pair_offsets()[j] + i
        return idx

    def choice_key(self, menu_path: Sequence[int], choice_path: Sequence[int]) -> str:
        return LABEL_SEP.join(
            self.dms[t].menus[j][i] for t, (j, i) in enumerate(zip(menu_path, choice_path)))

    def to_json(self) -> dict:
        return {"dms": [{"alternatives": list(d.alternatives),
                         "menus": [list(M) for M in d.menus]} for d in self.dms]}


@dataclass(frozen=True)
class DeterministicRule:
    dm: int
    picks: tuple[int, ...]

    def labels(self, space: ChoiceSpace) -> tuple[str, ...]:
        d = space.dms[self.dm]
        return tuple(d.menus[j][i] for j, i in enumerate(self.picks))


def validate_space(raw) -> ChoiceSpace:
    """Check a parsed space description and freeze it into a ChoiceSpace."""
    if not isinstance(raw, dict) or "dms" not in raw:
        raise NoDms("space description has no 'dms' list")
    dms_raw = raw["dms"]
    if not isinstance(dms_raw, list) or not dms_raw:
        raise NoDms("a choice space needs at least one DM")
    dms = []
    for t, d in enumerate(dms_raw):
        alts = [str(a) for a in d.get("alternatives", [])]
        seen = set()
        for a in alts:
            if LABEL_SEP in a:
                raise BadLabel(f"DM {t}: alternative {a!r} contains {LABEL_SEP!r}")
            if a in seen:
                raise DuplicateAlternative(f"DM {t}: alternative {a!r} declared twice")
            seen.add(a)
        menus_raw = d.get("menus", [])
        if not menus_raw:
            raise NoMenus(f"DM {t} has no menus")
        menus = []
        for j, M in enumerate(menus_raw):
            M = tuple(str(a) for a in M)
            if not M:
                raise EmptyMenu(f"DM {t}, menu {j} is empty")
            if len(set(M)) != len(M):
                raise DuplicateAlternative(f"DM {t}, menu {j} {list(M)} repeats an alternative")
            for a in M:
                if a not in seen:
                    raise UnknownAlternative(f"DM {t}, menu {j}: {a!r} is not one of DM {t}'s alternatives")
            if any(set(M) == set(N) for N in menus):
                raise DuplicateMenu(f"DM {t}, menu {j} {list(M)} duplicates an earlier menu")
            menus.append(M)
        dms.append(DmSpec(tuple(alts), tuple(menus)))
    return ChoiceSpace(tuple(dms))


def _iter_picks(sizes: Sequence[int]) -> Iterator[tuple[int, ...]]:
    # itertools.product varies its last factor fastest; reverse to make menu 1 fastest
    for rev in itertools.product(*(range(s) for s in reversed(sizes))):
        yield tuple(reversed(rev))


def enumerate_rules(space: ChoiceSpace, dm: int) -> list[DeterministicRule]:
    """All deterministic rules of ``dm``, first-menu pick varying fastest."""
    sizes = space.dms[dm].menu_sizes
    return [DeterministicRule(dm, picks) for picks in _iter_picks(sizes)]


def build_type_matrix(space: ChoiceSpace, dm: int) -> np.ndarray:
    d = space.dms[dm]
    rules = enumerate_rules(space, dm)
    offsets = d.pair_offsets()
    A = np.full((d.pair_count, len(rules)), Fraction(0), dtype=object)
    for c, rule in enumerate(rules):
        for j, i in enumerate(rule.picks):
            A[offsets[j] + i, c] = Fraction(1)
    return A


def restrict_type_matrix(space: ChoiceSpace, dm: int, allowed: Sequence[int]) -> np.ndarray:
    """Columns ``allowed`` of the type matrix, in the order given."""
    allowed = list(allowed)
    if not allowed:
        raise EmptyAllowedSet(f"DM {dm}: the allowed rule set is empty")
    n = space.rule_count(dm)
    if len(set(allowed)) != len(allowed):
        raise BadIndex(f"DM {dm}: allowed rule indices repeat: {allowed}")
    bad = [c for c in allowed if not (isinstance(c, int) and 0 <= c < n)]
    if bad:
        raise BadIndex(f"DM {dm}: rule indices {bad} outside 0..{n - 1}")
    return build_type_matrix(space, dm)[:, allowed]
