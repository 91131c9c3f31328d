"""Seeded random rules for property checks on the two-DM, two-menu experiment.

All randomness goes through a ``random.Random`` instance and every number
produced is an exact rational with a small denominator.
"""

from __future__ import annotations

import itertools
import random
from fractions import Fraction
from functools import lru_cache
from typing import Iterator

import numpy as np

from .choice_space import ChoiceSpace, DmSpec, build_type_matrix
from .exact_linalg import fmat, fvec, rref
from .scenarios import DOMINANCE_ALLOWED, fs_space, gen_mixture, gen_table1
from .separability import JointChoiceRule, joint_type_matrix

__all__ = [
    "random_distribution",
    "random_separable",
    "random_table1",
    "random_signaling",
    "pr_box",
    "random_pr_mixture",
    "project_to_marginal",
    "random_projected",
    "build_corpus",
    "random_small_space",
    "random_restricted_candidate",
]


def random_distribution(rng: random.Random, n: int, den: int = 12) -> list[Fraction]:
    """Uniform random composition of ``den`` into ``n`` parts, scaled to sum 1."""
    cuts = sorted(rng.randint(0, den) for _ in range(n - 1))
    parts = [b - a for a, b in zip([0] + cuts, cuts + [den])]
    return [Fraction(p, den) for p in parts]


def random_separable(rng: random.Random, space: ChoiceSpace | None = None,
                     allowed=None, support: int | None = None) -> JointChoiceRule:
    space = space or fs_space()
    widths = [space.rule_count(t) if allowed is None or allowed[t] is None else len(allowed[t])
              for t in range(space.n_dms)]
    profiles = list(itertools.product(*(range(w) for w in widths)))
    support = support or rng.randint(1, min(6, len(profiles)))
    chosen = rng.sample(profiles, support)
    weights = random_distribution(rng, support, den=rng.choice([6, 10, 12, 24]))
    return gen_mixture(space, dict(zip(chosen, weights)), allowed=allowed)


def random_table1(rng: random.Random) -> JointChoiceRule:
    den = rng.choice([8, 16, 24, 40])
    return gen_table1(Fraction(rng.randint(0, den // 2), den))


def random_signaling(rng: random.Random, space: ChoiceSpace | None = None) -> JointChoiceRule:
    """Independent random distribution on every menu path (almost surely signaling)."""
    space = space or fs_space()
    probs = {mp: tuple(random_distribution(rng, len(space.choice_paths(mp))))
             for mp in space.menu_paths()}
    return JointChoiceRule(space, probs)


def pr_box(a: int, b: int, c: int) -> JointChoiceRule:
    """Extremal nonlocal no-signaling rule: positions agree iff ``m0*m1 ^ a*m0 ^ b*m1 ^ c == 0``."""
    probs = {}
    for m0, m1 in itertools.product(range(2), repeat=2):
        parity = (m0 * m1) ^ (a * m0) ^ (b * m1) ^ c
        probs[(m0, m1)] = tuple(Fraction(1, 2) if (i0 ^ i1) == parity else Fraction(0)
                                for i0, i1 in itertools.product(range(2), repeat=2))
    return JointChoiceRule(fs_space(), probs)


def random_pr_mixture(rng: random.Random) -> JointChoiceRule:
    """Mix a random relabelled PR box with a random separable rule."""
    box = pr_box(rng.randint(0, 1), rng.randint(0, 1), rng.randint(0, 1)).stacked()
    local = random_separable(rng).stacked()
    lam = Fraction(rng.randint(0, 12), 12)
    return JointChoiceRule.from_stacked(fs_space(), lam * box + (1 - lam) * local)


@lru_cache(maxsize=8)
def _tangent_projector(space: ChoiceSpace) -> np.ndarray:
    """Orthogonal projector onto ``{A nu : sum(nu) = 0}``, exact.

    Differences of columns of the joint type matrix span that space; a
    column basis ``B`` gives ``P = B (B^T B)^{-1} B^T``.
    """
    A = joint_type_matrix(space)
    D = A[:, 1:] - A[:, [0]]
    _, pivots = rref(D)
    B = D[:, pivots]
    G = B.T.dot(B)
    k = G.shape[0]
    aug = np.empty((k, 2 * k), dtype=object)
    aug[:, :k] = G
    aug[:, k:] = fmat(np.eye(k, dtype=int).tolist())
    R, _ = rref(aug)
    return B.dot(R[:, k:]).dot(B.T)


def _uniform(space: ChoiceSpace) -> np.ndarray:
    return JointChoiceRule(space, {mp: tuple(Fraction(1, len(space.choice_paths(mp)))
                                            for _ in space.choice_paths(mp))
                                  for mp in space.menu_paths()}).stacked()


def project_to_marginal(rule: JointChoiceRule) -> np.ndarray:
    """Nearest point to ``rho`` in the affine space of marginality-satisfying
    rules (may have negative entries).

    Marginality-satisfying rules are exactly the images ``A nu`` of signed
    measures with total mass 1, so the uniform rule plus the projection onto
    differences of columns of ``A`` lands there.
    """
    u = _uniform(rule.space)
    return u + _tangent_projector(rule.space).dot(rule.stacked() - u)


def random_projected(rng: random.Random, to_boundary: bool | None = None) -> JointChoiceRule:
    """Project random signaling data to marginality, then shrink toward the
    uniform rule until nonnegative (all the way to the boundary, or further)."""
    space = fs_space()
    u = _uniform(space)
    target = project_to_marginal(random_signaling(rng, space))
    if rng.random() < 0.5:
        # exaggerate the nonlocal direction so CHSH violations are common
        target = u + 3 * (target - u)
    d = target - u
    lam = Fraction(1)
    for ui, di in zip(u, d):
        if di < 0:
            lam = min(lam, ui / -di)
    if to_boundary is None:
        to_boundary = rng.random() < 0.5
    if not to_boundary:
        lam *= Fraction(rng.randint(1, 9), 10)
    return JointChoiceRule.from_stacked(space, u + lam * d)


def build_corpus(seed: int = 20240611, size: int = 520) -> list[tuple[str, JointChoiceRule]]:
    """Mixed corpus of rules on the two-DM, two-menu experiment.

    Kinds: random separable mixtures, restricted (dominance) mixtures, gen_table1
    members, projected marginal rules, PR-box mixtures and signaling rules.
    """
    rng = random.Random(seed)
    makers = [
        ("separable", 0.22, lambda: random_separable(rng)),
        ("dominance", 0.10, lambda: random_separable(rng, allowed=DOMINANCE_ALLOWED)),
        ("table1", 0.14, lambda: random_table1(rng)),
        ("projected", 0.28, lambda: random_projected(rng)),
        ("pr_mixture", 0.16, lambda: random_pr_mixture(rng)),
        ("signaling", 0.10, lambda: random_signaling(rng)),
    ]
    out = []
    for kind, share, make in makers:
        out += [(kind, make()) for _ in range(round(share * size))]
    while len(out) < size:
        out.append(("separable", random_separable(rng)))
    return out[:size]


def random_small_space(rng: random.Random, n_dms: int, max_menus: int = 2,
                       max_size: int = 3) -> ChoiceSpace:
    """Random space: each DM gets 1..max_menus distinct menus of size 1..max_size."""
    dms = []
    for t in range(n_dms):
        alts = tuple(f"a{t}_{i}" for i in range(max_size + 1))
        menus: list[tuple[str, ...]] = []
        target = rng.randint(1, max_menus)
        while len(menus) < target:
            M = tuple(rng.sample(alts, rng.randint(1, max_size)))
            if all(set(M) != set(N) for N in menus):
                menus.append(M)
        dms.append(DmSpec(alts, tuple(menus)))
    return ChoiceSpace(tuple(dms))


def random_restricted_candidate(rng: random.Random) -> JointChoiceRule:
    """A marginality-satisfying rule near the dominance-restricted model.

    A restricted mixture pushed toward a random no-signaling vertex (PR box
    or unrestricted deterministic profile); some of these leave the
    restricted model, some stay inside.
    """
    inside = random_separable(rng, allowed=DOMINANCE_ALLOWED).stacked()
    if rng.random() < 0.5:
        other = pr_box(rng.randint(0, 1), rng.randint(0, 1), rng.randint(0, 1)).stacked()
    else:
        other = random_separable(rng, support=1).stacked()
    eps = Fraction(rng.randint(0, 8), 16)
    return JointChoiceRule.from_stacked(fs_space(), (1 - eps) * inside + eps * other)
