"""Command-line front end.

Subcommands: validate, check, chsh, hrep, generate, certify, selftest.
Indices on the command line (DMs, menus, rules) are 1-based; indices inside
JSON documents are 0-based.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
import time
from fractions import Fraction
from typing import Any, Sequence

import numpy as np

from .choice_space import ChoiceSpace, SpaceError, enumerate_rules, validate_space
from .cone_geometry import DEFAULT_MAX_RAYS, Cone, TooLarge
from .exact_linalg import DimensionMismatch, as_rational, format_rational, kron_apply
from .io import ParseError, dumps, rule_from_json, rule_to_json, vector_from_json, vector_to_json
from .scenarios import (
    DOMINANCE_ALLOWED,
    BadAlpha,
    BadIndividualRule,
    BadWeights,
    fs_space,
    gen_mixture,
    gen_product,
    gen_table1,
)
from .separability import (
    ChshViolation,
    InvalidRule,
    Label,
    MarginalityViolation,
    NotChshScenario,
    TensorRowViolation,
    _marginal_sum,
    chsh_expression_text,
    chsh_values,
    check_chsh,
    check_k_marginalizable,
    check_marginality,
    classify,
    correlators,
    default_h_list,
    extension_system,
    joint_type_matrix,
)
from .simplex import FeasibilityResult, CertificateError

EXIT_OK = 0
EXIT_INTERNAL = 1
EXIT_INVALID = 2
EXIT_ENTANGLED = 3
EXIT_SIGNALING = 4
EXIT_RESTRICTED = 5
EXIT_REJECTED = 6

LABEL_EXIT = {
    Label.SEPARABLE: EXIT_OK,
    Label.ENTANGLED: EXIT_ENTANGLED,
    Label.SIGNALING: EXIT_SIGNALING,
    Label.RESTRICTED_VIOLATION: EXIT_RESTRICTED,
    Label.INVALID: EXIT_INVALID,
}

DEFAULT_MAX_K = 4

USER_ERRORS = (ParseError, SpaceError, InvalidRule, DimensionMismatch, NotChshScenario,
               BadAlpha, BadWeights, BadIndividualRule, json.JSONDecodeError, OSError,
               UnicodeDecodeError)


class UsageError(ValueError):
    pass


# ------------------------------------------------------------------ parsing


def _read_bytes(path: str) -> bytes:
    if path == "-":
        return sys.stdin.buffer.read()
    with open(path, "rb") as fh:
        return fh.read()


def _load(path: str) -> tuple[Any, bytes]:
    raw = _read_bytes(path)
    return json.loads(raw.decode("utf-8")), raw


def _load_rule(path: str):
    doc, raw = _load(path)
    return rule_from_json(doc), raw


def _index_list(text: str, what: str) -> list[int]:
    try:
        values = [int(x) for x in text.split(",") if x.strip()]
    except ValueError as exc:
        raise UsageError(f"{what}: {text!r} is not a comma-separated list of integers") from exc
    if not values:
        raise UsageError(f"{what}: empty list")
    if any(v < 1 for v in values):
        raise UsageError(f"{what}: indices are 1-based, got {values}")
    return [v - 1 for v in values]


def _parse_allowed(specs: Sequence[str] | None, space: ChoiceSpace) -> list | None:
    """``["1:1,3,4"]`` -> ``[(0, 2, 3), None]`` (1-based DM and rule numbers in)."""
    if not specs:
        return None
    allowed: list = [None] * space.n_dms
    for spec in specs:
        dm_text, sep, rules = spec.partition(":")
        if not sep:
            raise UsageError(f"--allowed {spec!r}: expected DM:RULE,RULE,...")
        dm = _index_list(dm_text, "--allowed DM")
        if len(dm) != 1 or dm[0] >= space.n_dms:
            raise UsageError(f"--allowed {spec!r}: DM must be one of 1..{space.n_dms}")
        if allowed[dm[0]] is not None:
            raise UsageError(f"--allowed given twice for DM {dm[0] + 1}")
        allowed[dm[0]] = tuple(_index_list(rules, f"--allowed for DM {dm[0] + 1}"))
    return allowed


def _parse_flip(specs: Sequence[str] | None) -> frozenset:
    out = set()
    for spec in specs or ():
        dm_text, sep, menu_text = spec.partition(":")
        if not sep:
            raise UsageError(f"--flip {spec!r}: expected DM:MENU")
        (dm,) = _index_list(dm_text, "--flip DM")
        (menu,) = _index_list(menu_text, "--flip MENU")
        if dm > 1 or menu > 1:
            raise UsageError(f"--flip {spec!r}: DM and MENU must be 1 or 2")
        out.add((dm, menu))
    return frozenset(out)


# ---------------------------------------------------------- report building


def _fr(x) -> str:
    return format_rational(Fraction(x))


def _profile_label(space: ChoiceSpace, allowed, col: int) -> str:
    widths = []
    for t in range(space.n_dms):
        a = None if allowed is None else allowed[t]
        widths.append(space.rule_count(t) if a is None else len(a))
    idx = []
    for w in reversed(widths):
        idx.append(col % w)
        col //= w
    idx.reverse()
    parts = []
    for t, c in enumerate(idx):
        a = None if allowed is None else allowed[t]
        rule_no = c if a is None else a[c]
        picks = ",".join(enumerate_rules(space, t)[rule_no].labels(space))
        parts.append(f"({picks})")
    return " x ".join(parts)


def _row_label(space: ChoiceSpace, row: int) -> str:
    cells = space.joint_rows()[row]
    mp = [j for j, _ in cells]
    cp = [i for _, i in cells]
    menus = "|".join(space.dms[t].menu_label(j) for t, j in enumerate(mp))
    return f"{space.choice_key(mp, cp)} @ {menus}"


def _feasibility_json(res: FeasibilityResult) -> dict:
    if res.feasible:
        return {"feasible": True, "witness": vector_to_json(res.witness)}
    return {"feasible": False, "farkas": vector_to_json(res.farkas)}


def _feasibility_from_json(doc) -> FeasibilityResult:
    if doc.get("feasible"):
        return FeasibilityResult(True, witness=vector_from_json(doc["witness"]))
    return FeasibilityResult(False, farkas=vector_from_json(doc["farkas"]))


def _evidence_json(ev) -> dict:
    if isinstance(ev, MarginalityViolation):
        return {"kind": "marginality", "dm": ev.dm, "menus": list(ev.menus),
                "fixed": [list(f) for f in ev.fixed], "lhs": _fr(ev.lhs), "rhs": _fr(ev.rhs)}
    if isinstance(ev, TensorRowViolation):
        return {"kind": "tensor_row", "row": ev.row, "rows_per_dm": list(ev.rows_per_dm),
                "value": _fr(ev.value)}
    raise TypeError(type(ev))


def _is_chsh_space(space: ChoiceSpace) -> bool:
    return space.n_dms == 2 and all(d.menu_sizes == (2, 2) for d in space.dms)


def _chsh_json(rule, flip: frozenset) -> dict:
    space = rule.space
    vals = chsh_values(rule, flip)
    viol = check_chsh(rule, flip)
    return {
        "verdict": "pass" if viol is None else "fail",
        "flip": sorted([dm, menu] for dm, menu in flip),
        "expressions": [{"text": chsh_expression_text(space, e), "value": _fr(v)}
                        for e, v in enumerate(vals)],
        "violation": None if viol is None else {
            "index": viol.index, "value": _fr(viol.value), "bound": viol.bound,
            "text": viol.describe(space)},
    }


def _correlators_json(rule, flip: frozenset) -> dict:
    space = rule.space
    E = correlators(rule, flip)
    return {f"{space.dms[0].menu_label(a)},{space.dms[1].menu_label(b)}": _fr(E[(a, b)])
            for a in range(2) for b in range(2)}


def build_report(rule, raw: bytes, allowed=None, chsh: bool = False, extension_k: int | None = None,
                 on_average: bool = False, flip: frozenset = frozenset(),
                 timing: bool = False) -> dict:
    """Run the classification pipeline and the optional extra tests."""
    clock: dict[str, float] = {}
    t0 = time.perf_counter()
    cls = classify(rule, allowed)
    clock["classify"] = time.perf_counter() - t0

    report: dict[str, Any] = {
        "input": {"sha256": hashlib.sha256(raw).hexdigest()},
        "classification": cls.label.value,
        "message": cls.message,
        "allowed": None if allowed is None else [None if a is None else list(a) for a in allowed],
        "tests": {},
    }
    tests = report["tests"]
    if cls.label is Label.INVALID:
        tests["validity"] = {"verdict": "fail", "message": cls.message}
        return report
    tests["validity"] = {"verdict": "pass"}

    if cls.label is Label.SIGNALING:
        tests["marginality"] = {"verdict": "fail", "certificate": _evidence_json(cls.evidence)}
    else:
        tests["marginality"] = {"verdict": "pass"}
        if cls.label is Label.RESTRICTED_VIOLATION:
            tests["separable_restrictions"] = {"verdict": "fail",
                                               "certificate": _evidence_json(cls.evidence)}
        else:
            tests["separable_restrictions"] = {"verdict": "pass"}
            tests["separability"] = {
                "verdict": "feasible" if cls.evidence.feasible else "infeasible",
                "certificate": _feasibility_json(cls.evidence),
            }

    if _is_chsh_space(rule.space):
        report["correlators"] = _correlators_json(rule, flip)
        if chsh:
            t0 = time.perf_counter()
            tests["chsh"] = _chsh_json(rule, flip)
            clock["chsh"] = time.perf_counter() - t0
    elif chsh:
        raise NotChshScenario("--chsh needs exactly 2 DMs, each with 2 menus of 2 alternatives")

    if extension_k is not None:
        t0 = time.perf_counter()
        res = check_k_marginalizable(rule, extension_k, on_average)
        clock["extension"] = time.perf_counter() - t0
        tests["extension"] = {
            "k": extension_k,
            "on_average": on_average,
            "verdict": "feasible" if res.feasible else "infeasible",
            "certificate": _feasibility_json(res),
        }

    if timing:
        report["timing"] = {k: round(v, 6) for k, v in clock.items()}
    return report


def _nonzero(v) -> list[tuple[int, Fraction]]:
    return [(i, x) for i, x in enumerate(v) if x != 0]


def render_text(report: dict, rule) -> str:
    space = rule.space
    allowed = report["allowed"]
    lines = [f"input sha256: {report['input']['sha256']}",
             f"classification: {report['classification']}",
             f"  {report['message']}"]
    tests = report["tests"]
    for name in ("validity", "marginality", "separable_restrictions"):
        if name in tests:
            lines.append(f"{name.replace('_', ' ')}: {tests[name]['verdict']}")
    if "separability" in tests:
        cert = _feasibility_from_json(tests["separability"]["certificate"])
        if cert.feasible:
            lines.append("separability LP: feasible, rho = A nu with nu >= 0:")
            for col, x in _nonzero(cert.witness):
                lines.append(f"  nu[{col}] = {x}  {_profile_label(space, allowed, col)}")
        else:
            yb = cert.farkas.dot(rule.stacked())
            lines.append(f"separability LP: infeasible, Farkas vector y with y^T A <= 0 "
                         f"and y^T rho = {yb} > 0:")
            for row, x in _nonzero(cert.farkas):
                lines.append(f"  y[{row}] = {x}  {_row_label(space, row)}")
    if "correlators" in report:
        lines.append("correlators:")
        for key, v in report["correlators"].items():
            lines.append(f"  E[{key}] = {v}")
    if "chsh" in tests:
        c = tests["chsh"]
        lines.append(f"CHSH: {c['verdict']}")
        for e in c["expressions"]:
            lines.append(f"  {e['text']} = {e['value']}")
        if c["violation"] is not None:
            lines.append(f"  {c['violation']['text']}")
    if "extension" in tests:
        x = tests["extension"]
        mode = "on average" if x["on_average"] else "exactly"
        lines.append(f"{x['k']}-marginalizable ({mode}): {x['verdict']}")
    if "timing" in report:
        lines.append("timing (s): " + ", ".join(f"{k}={v}" for k, v in report["timing"].items()))
    return "\n".join(lines)


# ---------------------------------------------------------------- certify


def certify_report(rule, raw: bytes, report: dict) -> list[str]:
    """Re-verify every certificate in ``report`` against ``rule``; return problems."""
    problems = []
    if report.get("input", {}).get("sha256") != hashlib.sha256(raw).hexdigest():
        problems.append("input digest does not match the rule file")
    allowed = report.get("allowed")
    if allowed is not None:
        allowed = [None if a is None else tuple(a) for a in allowed]
    tests = report.get("tests", {})
    rho = rule.stacked()

    if tests.get("validity", {}).get("verdict") == "pass":
        try:
            rule.validate()
        except InvalidRule as exc:
            problems.append(f"validity: {exc}")

    marg = tests.get("marginality")
    if marg is not None:
        if marg["verdict"] == "pass":
            if check_marginality(rule) is not None:
                problems.append("marginality: claimed to hold but fails")
        else:
            c = marg["certificate"]
            fixed = [(j, i) for _, j, i in c["fixed"]]
            lhs = _marginal_sum(rule, c["dm"], c["menus"][0], fixed)
            rhs = _marginal_sum(rule, c["dm"], c["menus"][1], fixed)
            if lhs == rhs or _fr(lhs) != c["lhs"] or _fr(rhs) != c["rhs"]:
                problems.append("marginality: violation certificate does not reproduce")

    restr = tests.get("separable_restrictions")
    if restr is not None:
        values = kron_apply(default_h_list(rule.space, allowed), rho)
        if restr["verdict"] == "pass":
            if any(v < 0 for v in values):
                problems.append("separable restrictions: claimed to hold but a row is negative")
        else:
            c = restr["certificate"]
            v = values[c["row"]]
            if not v < 0 or _fr(v) != c["value"]:
                problems.append("separable restrictions: violated row does not reproduce")

    def check_lp(name, A, b, entry):
        try:
            res = _feasibility_from_json(entry["certificate"])
            res.verify(A, b)
        except (CertificateError, ParseError, KeyError, ValueError) as exc:
            problems.append(f"{name}: certificate rejected ({exc})")
            return
        if (entry["verdict"] == "feasible") != res.feasible:
            problems.append(f"{name}: verdict disagrees with its certificate")

    if "separability" in tests:
        check_lp("separability", joint_type_matrix(rule.space, allowed), rho, tests["separability"])
    if "extension" in tests:
        x = tests["extension"]
        A, b, _ = extension_system(rule, int(x["k"]), bool(x["on_average"]))
        check_lp("extension", A, b, x)
    if "chsh" in tests:
        flip = frozenset((dm, menu) for dm, menu in tests["chsh"]["flip"])
        if tests["chsh"] != _chsh_json(rule, flip):
            problems.append("chsh: values do not reproduce")
    return problems


# --------------------------------------------------------------- commands


def cmd_validate(args) -> int:
    rule, _ = _load_rule(args.file)
    rule.validate()
    print(f"valid: {rule.space.n_dms} DMs, {len(rule.space.menu_paths())} menu paths, "
          f"{rule.space.joint_size()} probabilities")
    return EXIT_OK


def cmd_check(args) -> int:
    rule, raw = _load_rule(args.file)
    allowed = _parse_allowed(args.allowed, rule.space)
    flip = _parse_flip(args.flip)
    if args.avg and args.extension_k is None:
        raise UsageError("--avg needs --extension-k")
    if args.extension_k is not None:
        if args.extension_k < 1:
            raise UsageError("--extension-k must be at least 1")
        if args.extension_k > args.max_k:
            raise UsageError(f"--extension-k {args.extension_k} exceeds the cap {args.max_k} "
                             f"(raise it with --max-k)")
        if rule.space.n_dms != 2:
            raise UsageError("--extension-k needs exactly 2 DMs")
    report = build_report(rule, raw, allowed, args.chsh, args.extension_k, args.avg, flip,
                          args.timing)
    if args.json:
        print(dumps(report))
    else:
        print(render_text(report, rule))
    return LABEL_EXIT[Label(report["classification"])]


def cmd_chsh(args) -> int:
    rule, _ = _load_rule(args.file)
    rule.validate()
    flip = _parse_flip(args.flip)
    doc = {"correlators": _correlators_json(rule, flip), "chsh": _chsh_json(rule, flip)}
    if args.json:
        print(dumps(doc))
    else:
        for key, v in doc["correlators"].items():
            print(f"E[{key}] = {v}")
        for e in doc["chsh"]["expressions"]:
            print(f"{e['text']} = {e['value']}")
        v = doc["chsh"]["violation"]
        print("all CHSH inequalities hold" if v is None else v["text"])
    return EXIT_OK if doc["chsh"]["violation"] is None else EXIT_ENTANGLED


def cmd_hrep(args) -> int:
    doc, _ = _load(args.file)
    space = validate_space(doc["space"] if isinstance(doc, dict) and "space" in doc else doc)
    (dm,) = _index_list(str(args.dm), "--dm")
    if dm >= space.n_dms:
        raise UsageError(f"--dm must be one of 1..{space.n_dms}")
    allowed = [None] * space.n_dms
    if args.allowed:
        allowed[dm] = tuple(_index_list(args.allowed, "--allowed"))
    from .separability import _type_matrix
    cone = Cone.from_generators(_type_matrix(space, dm, allowed[dm]), max_rays=args.max_rays)
    out = {"dm": dm + 1, "allowed": None if allowed[dm] is None else [c + 1 for c in allowed[dm]],
           "rows": [f"{space.dms[dm].menu_label(j)}:{a}"
                    for j, M in enumerate(space.dms[dm].menus) for a in M]}
    out.update(cone.to_json())
    print(dumps(out))
    return EXIT_OK


def _uniform_rule(space: ChoiceSpace):
    from .separability import JointChoiceRule
    return JointChoiceRule(space, {mp: (Fraction(1, len(space.choice_paths(mp))),)
                                   * len(space.choice_paths(mp)) for mp in space.menu_paths()})


def cmd_generate(args) -> int:
    name = args.name
    if name == "table1":
        if args.alpha is None:
            raise UsageError("table1 needs --alpha")
        rule = gen_table1(_rational_arg(args.alpha, "--alpha"))
    elif name == "uniform":
        rule = _uniform_rule(fs_space())
    elif name == "product":
        if not args.dm_rule or len(args.dm_rule) != 2:
            raise UsageError("product needs --dm-rule twice (one per DM)")
        rule = gen_product(*[[_rational_arg(x, "--dm-rule") for x in r.split(",")]
                             for r in args.dm_rule])
    elif name == "mixture":
        if not args.weight:
            raise UsageError("mixture needs at least one --weight PROFILE:WEIGHT")
        space = fs_space()
        allowed = _parse_allowed(args.allowed, space)
        weights: dict[tuple[int, ...], Fraction] = {}
        for spec in args.weight:
            prof, sep, w = spec.partition(":")
            if not sep:
                raise UsageError(f"--weight {spec!r}: expected R1,R2:WEIGHT")
            key = tuple(_index_list(prof, "--weight profile"))
            weights[key] = weights.get(key, Fraction(0)) + _rational_arg(w, "--weight")
        rule = gen_mixture(space, weights, allowed=allowed)
    elif name == "dominance":
        space = fs_space()
        a0 = DOMINANCE_ALLOWED[0]
        n1 = space.rule_count(1)
        w = Fraction(1, len(a0) * n1)
        rule = gen_mixture(space, {(c0, c1): w for c0 in range(len(a0)) for c1 in range(n1)},
                           allowed=DOMINANCE_ALLOWED)
    else:
        raise UsageError(f"unknown scenario {name!r}")
    print(dumps(rule_to_json(rule)))
    return EXIT_OK


def _rational_arg(text: str, what: str) -> Fraction:
    try:
        return as_rational(text.strip())
    except (TypeError, ValueError, ZeroDivisionError) as exc:
        raise UsageError(f"{what}: {text!r} is not an exact rational") from exc


def cmd_certify(args) -> int:
    rule, raw = _load_rule(args.rule)
    report, _ = _load(args.report)
    if not isinstance(report, dict) or "tests" not in report:
        raise ParseError("report file has no 'tests'")
    problems = certify_report(rule, raw, report)
    if problems:
        for p in problems:
            print(f"rejected: {p}")
        return EXIT_REJECTED
    print(f"verified: {', '.join(sorted(report['tests']))}")
    return EXIT_OK


def _selftest_one(item) -> tuple[str, bool, bool, bool, bool, bool]:
    from .separability import check_separable, solve_signed_measure
    kind, rule = item
    marg = check_marginality(rule) is None
    sep = check_separable(rule).feasible
    chsh_ok = marg and check_chsh(rule) is None
    ext = check_k_marginalizable(rule, 2, True).feasible if marg else False
    signed = solve_signed_measure(rule) is not None
    return kind, marg, sep, chsh_ok, ext, signed


def cmd_selftest(args) -> int:
    from .corpus import build_corpus
    corpus = build_corpus(seed=args.seed, size=args.trials)
    if args.jobs > 1:
        from concurrent.futures import ProcessPoolExecutor
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            results = list(pool.map(_selftest_one, corpus, chunksize=16))
    else:
        results = [_selftest_one(item) for item in corpus]
    checks = {
        "marginality and CHSH <=> separable": sum(r[3] != r[2] for r in results),
        "separable <=> 2-marginalizable on average": sum(r[4] != r[2] for r in results),
        "signed solution <=> marginality": sum(r[5] != r[1] for r in results),
    }
    n_sep = sum(r[2] for r in results)
    print(f"{len(results)} rules (seed {args.seed}): {n_sep} separable, "
          f"{sum(r[1] and not r[2] for r in results)} entangled, "
          f"{sum(not r[1] for r in results)} signaling")
    for name, bad in checks.items():
        print(f"{'PASS' if bad == 0 else 'FAIL'} {name}: {bad} disagreements")
    return EXIT_OK if all(v == 0 for v in checks.values()) else EXIT_INTERNAL


# ------------------------------------------------------------------- main


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="sepchoice", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("validate", help="parse a rule file and check the probability axioms")
    s.add_argument("file")
    s.set_defaults(func=cmd_validate)

    s = sub.add_parser("check", help="classify a rule and emit certificates")
    s.add_argument("file")
    s.add_argument("--allowed", action="append", metavar="DM:R,R,...",
                   help="restrict a DM to these deterministic rules (1-based); repeatable")
    s.add_argument("--chsh", action="store_true", help="also evaluate the CHSH inequalities")
    s.add_argument("--flip", action="append", metavar="DM:MENU",
                   help="swap the two alternatives of a menu before computing correlators")
    s.add_argument("--extension-k", type=int, metavar="N",
                   help="test N-marginalizability of the second DM")
    s.add_argument("--avg", action="store_true", help="extension test on average")
    s.add_argument("--max-k", type=int, default=DEFAULT_MAX_K,
                   help=f"cap on --extension-k (default {DEFAULT_MAX_K})")
    s.add_argument("--json", action="store_true", help="print the report as JSON")
    s.add_argument("--timing", action="store_true", help="include wall-clock timings")
    s.set_defaults(func=cmd_check)

    s = sub.add_parser("chsh", help="correlators and CHSH values of a two-menu binary rule")
    s.add_argument("file")
    s.add_argument("--flip", action="append", metavar="DM:MENU")
    s.add_argument("--json", action="store_true")
    s.set_defaults(func=cmd_chsh)

    s = sub.add_parser("hrep", help="facet description of one DM's type-matrix cone")
    s.add_argument("file", help="space file or rule file")
    s.add_argument("--dm", type=int, default=1, help="DM number (1-based, default 1)")
    s.add_argument("--allowed", metavar="R,R,...", help="allowed rules (1-based)")
    s.add_argument("--max-rays", type=int, default=DEFAULT_MAX_RAYS)
    s.set_defaults(func=cmd_hrep)

    s = sub.add_parser("generate", help="print a named scenario's rule file")
    s.add_argument("name", help="table1, uniform, product, mixture or dominance")
    s.add_argument("--alpha", help="table1 parameter in [0, 1/2]")
    s.add_argument("--dm-rule", action="append", metavar="P,P,...",
                   help="product: one DM's probabilities in (menu, alternative) order; twice")
    s.add_argument("--weight", action="append", metavar="R1,R2:W",
                   help="mixture: weight on a rule profile (1-based rule numbers); repeatable")
    s.add_argument("--allowed", action="append", metavar="DM:R,R,...",
                   help="mixture: number rules within these allowed sets")
    s.set_defaults(func=cmd_generate)

    s = sub.add_parser("certify", help="re-verify the certificates of a saved JSON report")
    s.add_argument("rule")
    s.add_argument("report")
    s.set_defaults(func=cmd_certify)

    s = sub.add_parser("selftest", help="randomized equivalence checks on a seeded corpus")
    s.add_argument("--trials", type=int, default=200)
    s.add_argument("--seed", type=int, default=20240611)
    s.add_argument("--jobs", type=int, default=1)
    s.set_defaults(func=cmd_selftest)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except TooLarge as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except (UsageError, *USER_ERRORS) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except Exception as exc:  # noqa: BLE001
        print(f"internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
