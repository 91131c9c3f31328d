"""JSON reading and writing for spaces, rules, cones and certificates.

Rationals are written as ``"p/q"`` or integer strings.  JSON numbers are
accepted on input only when they are integers.
"""

from __future__ import annotations

import json
from fractions import Fraction
from typing import Any

import numpy as np

from .choice_space import LABEL_SEP, ChoiceSpace, validate_space
from .exact_linalg import as_rational, fmat, format_rational, fvec

__all__ = [
    "ParseError",
    "matrix_to_json",
    "matrix_from_json",
    "vector_to_json",
    "vector_from_json",
    "rule_to_json",
    "rule_from_json",
    "load_json",
    "dumps",
]


class ParseError(ValueError):
    pass


def _read_rational(x) -> Fraction:
    if isinstance(x, float):
        raise ParseError(f"{x!r}: probabilities must be exact ('p/q' strings or integers)")
    try:
        return as_rational(x)
    except (TypeError, ValueError, ZeroDivisionError) as exc:
        raise ParseError(f"{x!r} is not an exact rational") from exc


def matrix_to_json(M: np.ndarray) -> list[list[str]]:
    return [[format_rational(x) for x in row] for row in M]


def matrix_from_json(rows, ncols: int | None = None) -> np.ndarray:
    return fmat([[_read_rational(x) for x in r] for r in rows], ncols=ncols)


def vector_to_json(v) -> list[str]:
    return [format_rational(x) for x in v]


def vector_from_json(values) -> np.ndarray:
    return fvec(_read_rational(x) for x in values)


def rule_to_json(rule) -> dict[str, Any]:
    space: ChoiceSpace = rule.space
    entries = []
    for mp in space.menu_paths():
        probs = {space.choice_key(mp, cp): format_rational(p)
                 for cp, p in zip(space.choice_paths(mp), rule.probs[mp])}
        entries.append({"menus": list(mp), "probs": probs})
    return {"space": space.to_json(), "rule": entries}


def rule_from_json(doc) -> "JointChoiceRule":
    """Parse a rule document.  Structural problems raise ParseError.

    Probability axioms (nonnegativity, adding-up) are not checked here; call
    ``JointChoiceRule.validate`` for that.
    """
    from .separability import JointChoiceRule

    if not isinstance(doc, dict) or "space" not in doc or "rule" not in doc:
        raise ParseError("a rule file needs 'space' and 'rule' keys")
    space = validate_space(doc["space"])
    T = space.n_dms
    probs: dict[tuple[int, ...], tuple[Fraction, ...]] = {}
    for entry in doc["rule"]:
        mp = entry.get("menus")
        if not isinstance(mp, list) or len(mp) != T:
            raise ParseError(f"menu path {mp!r} must list one menu index per DM ({T})")
        for t, j in enumerate(mp):
            if not isinstance(j, int) or not 0 <= j < len(space.dms[t].menus):
                raise ParseError(f"menu path {mp!r}: DM {t} has no menu {j!r}")
        mp = tuple(mp)
        if mp in probs:
            raise ParseError(f"menu path {list(mp)} listed twice")
        given = entry.get("probs")
        if not isinstance(given, dict):
            raise ParseError(f"menu path {list(mp)}: 'probs' must be an object")
        keys = [space.choice_key(mp, cp) for cp in space.choice_paths(mp)]
        missing = [k for k in keys if k not in given]
        if missing:
            raise ParseError(f"menu path {list(mp)}: missing choice paths {missing}")
        extra = sorted(set(given) - set(keys))
        if extra:
            raise ParseError(f"menu path {list(mp)}: unknown choice paths {extra} "
                             f"(keys join labels with {LABEL_SEP!r} in DM order)")
        probs[mp] = tuple(_read_rational(given[k]) for k in keys)
    absent = [list(mp) for mp in space.menu_paths() if mp not in probs]
    if absent:
        raise ParseError(f"menu paths {absent} are missing")
    return JointChoiceRule(space, probs)


def load_json(path) -> Any:
    with open(path, encoding="utf-8") as fh:
        return json.load(fh)


def dumps(doc) -> str:
    return json.dumps(doc, sort_keys=True, indent=2, ensure_ascii=False)
