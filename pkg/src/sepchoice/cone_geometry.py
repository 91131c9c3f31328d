"""Polyhedral cones in V- and H-representation.

Conversion in both directions runs the double description method on
integer data.  Zero sets are kept as int bitmasks and adjacency is decided
combinatorially, so no LP is needed to prune redundant rays.

Canonical H-representation produced by :func:`v_to_h` (rows are read as
``h . z >= 0``), in lexicographic order after normalization:

* every implicit equality as a pair of opposite rows;
* every coordinate row ``z_i >= 0`` that is valid on the cone;
* every remaining facet, written in each of its sparsest forms modulo the
  equalities.

For the type-matrix cones of a choice experiment this yields adding-up
pairs, nonnegativity and the extra restrictions (e.g. monotonicity) that a
restricted rule set induces.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from math import gcd
from typing import Sequence

import numpy as np

from .exact_linalg import (
    DimensionMismatch,
    fmat,
    fvec,
    integer_rows,
    kron_apply,
    normalize_first,
    nullspace,
    rank,
    rref,
    solve_particular,
)
from .simplex import lp_feasible

__all__ = [
    "TooLarge",
    "DEFAULT_MAX_RAYS",
    "Cone",
    "v_to_h",
    "h_to_v",
    "cone_contains",
    "tensor_necessity_check",
    "polytope_vertices",
    "product_of_simplices_vertices",
]

DEFAULT_MAX_RAYS = 100_000


class TooLarge(RuntimeError):
    """The double description ran past its ray budget."""


def _primitive(v: list[int]) -> list[int]:
    g = reduce(gcd, (abs(x) for x in v), 0)
    return [x // g for x in v] if g > 1 else v


def _pointed_rays(A: list[list[int]], n: int, max_rays: int) -> list[list[int]]:
    """Extreme rays of the pointed cone ``{y in Z^n : A y >= 0}``.

    ``A`` must have full column rank ``n``.
    """
    m = len(A)
    # greedy choice of n independent rows to seed the iteration
    seed: list[int] = []
    for i in range(m):
        if rank(fmat([A[k] for k in seed + [i]])) == len(seed) + 1:
            seed.append(i)
            if len(seed) == n:
                break
    if len(seed) < n:
        raise ValueError("constraint matrix is not of full column rank")
    A0 = fmat([A[i] for i in seed])
    aug = np.empty((n, 2 * n), dtype=object)
    aug[:, :n] = A0
    aug[:, n:] = fmat(np.eye(n, dtype=int).tolist())
    R, _ = rref(aug)
    inv = R[:, n:]
    rays: list[list[int]] = []
    zeros: list[int] = []
    for k in range(n):
        col = inv[:, k]
        den = reduce(lambda a, b: a * b // gcd(a, b), (x.denominator for x in col), 1)
        rays.append(_primitive([int(x * den) for x in col]))
        zeros.append(sum(1 << seed[i] for i in range(n) if i != k))

    for i in range(m):
        if i in seed:
            continue
        a = A[i]
        vals = [sum(x * y for x, y in zip(a, r)) for r in rays]
        pos = [k for k, s in enumerate(vals) if s > 0]
        neg = [k for k, s in enumerate(vals) if s < 0]
        new_rays, new_zeros = [], []
        for p in pos:
            for q in neg:
                common = zeros[p] & zeros[q]
                if bin(common).count("1") < n - 2:
                    continue
                if any(k != p and k != q and (zeros[k] & common) == common
                       for k in range(len(rays))):
                    continue
                sp, sq = vals[p], vals[q]
                r = _primitive([sp * x - sq * y for x, y in zip(rays[q], rays[p])])
                new_rays.append(r)
                new_zeros.append(common | (1 << i))
        keep = [k for k, s in enumerate(vals) if s >= 0]
        rays = [rays[k] for k in keep] + new_rays
        zeros = [zeros[k] | ((1 << i) if vals[k] == 0 else 0) for k in keep] + new_zeros
        if len(rays) > max_rays:
            raise TooLarge(f"double description exceeded {max_rays} rays")
    return rays


def _dd(H, max_rays: int) -> tuple[np.ndarray, list[tuple[Fraction, ...]]]:
    """Split ``{z : H z >= 0}`` into a lineality basis and pointed extreme rays.

    Returns ``(L, rays)``: ``L`` holds a lineality basis as columns (in RREF
    form, so each basis vector is 1 at its own pivot and 0 at the others) and
    ``rays`` the extreme rays of the cone cut down to ``z_pivot = 0``.
    """
    H = H if isinstance(H, np.ndarray) else fmat(H)
    d = H.shape[1]
    L = nullspace(H) if H.shape[0] else np.array(
        [[Fraction(int(i == j)) for j in range(d)] for i in range(d)], dtype=object)
    # pivots of the lineality basis: the coordinate where each column is 1
    # and all other columns are 0
    pivots = []
    if L.shape[1]:
        _, piv = rref(L.T)
        pivots = piv
    free = [j for j in range(d) if j not in pivots]
    if not free or H.shape[0] == 0:
        return L, []
    A = integer_rows(H[:, free])
    rays_y = _pointed_rays(A, len(free), max_rays)
    rays = []
    for y in rays_y:
        z = [Fraction(0)] * d
        for j, v in zip(free, y):
            z[j] = Fraction(v)
        rays.append(z)
    return L, rays


def _canonical(rows) -> np.ndarray:
    uniq = sorted({normalize_first(r) for r in rows if any(x != 0 for x in r)})
    return uniq


def _as_columns(vectors: list[tuple[Fraction, ...]], dim: int) -> np.ndarray:
    if not vectors:
        return np.empty((dim, 0), dtype=object)
    return fmat(vectors).T.copy()


def _as_rows(vectors: list[tuple[Fraction, ...]], dim: int) -> np.ndarray:
    if not vectors:
        return np.empty((0, dim), dtype=object)
    return fmat(vectors)


def h_to_v(H, max_rays: int = DEFAULT_MAX_RAYS) -> np.ndarray:
    """Generators (columns) of ``{z : H z >= 0}``.

    Lineality directions come out as ``+/-`` pairs; the remaining columns
    are the extreme rays of the pointed part.
    """
    H = H if isinstance(H, np.ndarray) else fmat(H)
    d = H.shape[1]
    L, rays = _dd(H, max_rays)
    vecs = [tuple(L[:, k]) for k in range(L.shape[1])]
    vecs += [tuple(-x for x in v) for v in vecs]
    vecs += [tuple(r) for r in rays]
    return _as_columns(_canonical(vecs), d)


def _sparsest_forms(f: Sequence[Fraction], L: np.ndarray) -> list[tuple[Fraction, ...]]:
    """All minimum-support vectors of the affine set ``f + span(L)``."""
    d, r = L.shape
    if r == 0:
        return [tuple(f)]
    found = {}
    for Z in itertools.combinations(range(d), r):
        sub = L[list(Z), :]
        if rank(sub) < r:
            continue
        lam = solve_particular(sub, [-f[i] for i in Z])
        p = tuple(Fraction(x) for x in (fvec(f) + L.dot(lam)))
        found[normalize_first(p)] = p
    if not found:
        return [tuple(f)]
    best = min(sum(1 for x in p if x != 0) for p in found.values())
    return [p for p in found.values() if sum(1 for x in p if x != 0) == best]


def v_to_h(gen, max_rays: int = DEFAULT_MAX_RAYS) -> np.ndarray:
    """Canonical H-representation (rows) of the cone spanned by ``gen``'s columns."""
    K = gen if isinstance(gen, np.ndarray) else fmat(gen)
    d, N = K.shape
    if N == 0:
        raise ValueError("need at least one generator")
    # the dual cone {h : h . k >= 0 for every generator k}
    Ldual, facets = _dd(K.T.copy(), max_rays)
    rows: list[tuple[Fraction, ...]] = []
    for k in range(Ldual.shape[1]):
        e = tuple(Ldual[:, k])
        rows += [e, tuple(-x for x in e)]
    for i in range(d):
        if all(K[i, j] >= 0 for j in range(N)):
            rows.append(tuple(Fraction(int(i == k)) for k in range(d)))
    for f in facets:
        rows += _sparsest_forms(f, Ldual)
    return _as_rows(_canonical(rows), d)


@dataclass(frozen=True, eq=False)
class Cone:
    """A cone ``{v_rep @ w : w >= 0}`` and/or ``{z : h_rep @ z >= 0}``."""

    v_rep: np.ndarray | None = None
    h_rep: np.ndarray | None = None

    def __post_init__(self):
        if self.v_rep is None and self.h_rep is None:
            raise ValueError("a cone needs a V- or an H-representation")
        if self.v_rep is not None and self.h_rep is not None:
            if self.v_rep.shape[0] != self.h_rep.shape[1]:
                raise DimensionMismatch("V- and H-representation live in different spaces")

    @classmethod
    def from_generators(cls, K, max_rays: int = DEFAULT_MAX_RAYS) -> "Cone":
        K = K if isinstance(K, np.ndarray) else fmat(K)
        return cls(v_rep=K, h_rep=v_to_h(K, max_rays))

    @classmethod
    def from_inequalities(cls, H, max_rays: int = DEFAULT_MAX_RAYS) -> "Cone":
        H = H if isinstance(H, np.ndarray) else fmat(H)
        return cls(v_rep=h_to_v(H, max_rays), h_rep=H)

    @property
    def dim(self) -> int:
        return self.v_rep.shape[0] if self.v_rep is not None else self.h_rep.shape[1]

    def representations_agree(self) -> bool:
        """Mutual inclusion check between the two representations."""
        if self.v_rep is None or self.h_rep is None:
            return True
        if self.v_rep.shape[1] and any(x < 0 for x in self.h_rep.dot(self.v_rep).ravel()):
            return False
        by_v = Cone(v_rep=self.v_rep)
        R = h_to_v(self.h_rep)
        return all(cone_contains(by_v, R[:, k]) for k in range(R.shape[1]))

    def to_json(self) -> dict:
        from .io import matrix_to_json
        out = {}
        if self.v_rep is not None:
            out["v"] = matrix_to_json(self.v_rep)
        if self.h_rep is not None:
            out["h"] = matrix_to_json(self.h_rep)
        return out


def cone_contains(c: Cone, z) -> bool:
    z = fvec(z)
    if len(z) != c.dim:
        raise DimensionMismatch(f"cone lives in dimension {c.dim}, vector has length {len(z)}")
    if c.h_rep is not None:
        return all(x >= 0 for x in c.h_rep.dot(z)) if c.h_rep.shape[0] else True
    if c.v_rep.shape[1] == 0:
        return all(x == 0 for x in z)
    return lp_feasible(c.v_rep, z).feasible


def tensor_necessity_check(cones: Sequence[Cone], z) -> bool:
    """Whether ``(H_1 ⊗ ... ⊗ H_T) z >= 0`` for the cones' H-representations.

    Every ``z`` in the cone generated by ``V_1 ⊗ ... ⊗ V_T`` passes; the
    converse can fail.
    """
    if any(c.h_rep is None for c in cones):
        raise ValueError("every cone needs an H-representation")
    z = fvec(z)
    width = int(np.prod([c.dim for c in cones]))
    if width != len(z):
        raise DimensionMismatch(f"tensor space has dimension {width}, vector has length {len(z)}")
    return all(x >= 0 for x in kron_apply([c.h_rep for c in cones], z))


def polytope_vertices(points) -> np.ndarray:
    """Vertices (columns) of the convex hull of ``points``' columns.

    A column is kept when it is not a convex combination of the others.
    """
    P = points if isinstance(points, np.ndarray) else fmat(points)
    cols = sorted({tuple(P[:, k]) for k in range(P.shape[1])})
    keep = []
    for k, p in enumerate(cols):
        others = [c for i, c in enumerate(cols) if i != k]
        if not others:
            keep.append(p)
            continue
        O = fmat(others).T
        A = np.vstack([O, fmat([[1] * len(others)])])
        if not lp_feasible(A, list(p) + [1]).feasible:
            keep.append(p)
    return _as_columns(keep, P.shape[0])


def product_of_simplices_vertices(menu_sizes: Sequence[int]) -> np.ndarray:
    """Vertices of the product of simplices, one simplex per menu.

    Computed from the inequality description alone: homogenize
    ``{z >= 0, sum over each menu block = 1}`` to the cone
    ``{(z, s) : z >= 0, block sums = s}``, enumerate its extreme rays and
    dehomogenize at ``s = 1``.
    """
    d = sum(menu_sizes)
    rows = []
    for i in range(d):
        rows.append([int(k == i) for k in range(d)] + [0])
    offset = 0
    for size in menu_sizes:
        block = [int(offset <= k < offset + size) for k in range(d)]
        rows.append(block + [-1])
        rows.append([-x for x in block] + [1])
        offset += size
    R = h_to_v(fmat(rows))
    verts = []
    for k in range(R.shape[1]):
        s = R[-1, k]
        if s > 0:
            verts.append(tuple(x / s for x in R[:-1, k]))
    return _as_columns(sorted(verts), d)
