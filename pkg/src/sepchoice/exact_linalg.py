"""Exact rational linear algebra on numpy object arrays of ``Fraction``.

Every matrix handled by the package is a 2-D ``numpy`` array with
``dtype=object`` whose entries are :class:`fractions.Fraction`.  Nothing in
here ever rounds.
"""

from __future__ import annotations

from fractions import Fraction
from functools import reduce
from math import gcd, lcm
from typing import Iterable, Sequence

import numpy as np

__all__ = [
    "primitive",
    "DimensionMismatch",
    "as_rational",
    "format_rational",
    "fmat",
    "fvec",
    "identity",
    "kronecker",
    "kron_apply",
    "rref",
    "rank",
    "nullspace",
    "in_span",
    "solve_particular",
    "integer_rows",
    "normalize_first",
]


class DimensionMismatch(ValueError):
    """Operands have incompatible shapes."""


def as_rational(x) -> Fraction:
    """Convert ``x`` to a Fraction without ever going through a float.

    Accepts ints, Fractions and strings such as ``"3"``, ``"-2/7"``.  Python
    floats are refused because they are already rounded.
    """
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x.strip())
    if isinstance(x, np.integer):
        return Fraction(int(x))
    raise TypeError(f"cannot read {x!r} as an exact rational (floats are not accepted)")


def format_rational(q: Fraction) -> str:
    q = as_rational(q)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def fmat(rows, ncols: int | None = None) -> np.ndarray:
    """Build a 2-D object array of Fractions from nested sequences."""
    rows = [list(r) for r in rows]
    if not rows:
        return np.empty((0, ncols or 0), dtype=object)
    width = len(rows[0])
    if any(len(r) != width for r in rows):
        raise DimensionMismatch("ragged matrix")
    out = np.empty((len(rows), width), dtype=object)
    for i, r in enumerate(rows):
        for j, x in enumerate(r):
            out[i, j] = as_rational(x)
    return out


def fvec(values: Iterable) -> np.ndarray:
    vals = [as_rational(v) for v in values]
    out = np.empty(len(vals), dtype=object)
    out[:] = vals
    return out


def identity(n: int) -> np.ndarray:
    out = np.full((n, n), Fraction(0), dtype=object)
    for i in range(n):
        out[i, i] = Fraction(1)
    return out


def _as_matrix(A) -> np.ndarray:
    if isinstance(A, np.ndarray) and A.dtype == object and A.ndim == 2:
        return A
    return fmat(A)


def kronecker(A, B) -> np.ndarray:
    """Block Kronecker product: block (i, j) of the result is ``A[i, j] * B``."""
    A = _as_matrix(A)
    B = _as_matrix(B)
    m, n = A.shape
    p, q = B.shape
    out = np.empty((m * p, n * q), dtype=object)
    for i in range(m):
        for j in range(n):
            out[i * p:(i + 1) * p, j * q:(j + 1) * q] = A[i, j] * B
    return out


def kron_apply(mats: Sequence[np.ndarray], z: np.ndarray) -> np.ndarray:
    """Compute ``(mats[0] ⊗ ... ⊗ mats[-1]) @ z`` without forming the product.

    ``z`` is reshaped into a tensor with one axis per factor (first factor
    slowest) and each factor is applied along its own axis.
    """
    mats = [_as_matrix(M) for M in mats]
    shape = [M.shape[1] for M in mats]
    if int(np.prod(shape)) != len(z):
        raise DimensionMismatch(
            f"vector of length {len(z)} does not match factor widths {shape}")
    t = np.asarray(z, dtype=object).reshape(shape)
    for axis, M in enumerate(mats):
        t = np.moveaxis(np.tensordot(M, t, axes=([1], [axis])), 0, axis)
    return t.reshape(-1)


def rref(A) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form and the list of pivot columns."""
    R = _as_matrix(A).copy()
    m, n = R.shape
    pivots: list[int] = []
    row = 0
    for col in range(n):
        if row == m:
            break
        piv = next((i for i in range(row, m) if R[i, col] != 0), None)
        if piv is None:
            continue
        if piv != row:
            R[[row, piv]] = R[[piv, row]]
        R[row] = R[row] / R[row, col]
        for i in range(m):
            if i != row and R[i, col] != 0:
                R[i] = R[i] - R[i, col] * R[row]
        pivots.append(col)
        row += 1
    return R, pivots


def integer_rows(A) -> list[list[int]]:
    """Scale each row by the lcm of its denominators; entries become ints."""
    out = []
    for r in _as_matrix(A):
        s = reduce(lcm, (x.denominator for x in r), 1)
        out.append([int(x * s) for x in r])
    return out


def rank(A) -> int:
    """Rank by fraction-free (Bareiss) elimination on integer-scaled rows."""
    M = integer_rows(A)
    m = len(M)
    n = len(M[0]) if m else 0
    r = 0
    prev = 1
    for col in range(n):
        piv = next((i for i in range(r, m) if M[i][col] != 0), None)
        if piv is None:
            continue
        M[r], M[piv] = M[piv], M[r]
        p = M[r][col]
        for i in range(r + 1, m):
            f = M[i][col]
            M[i] = [(p * M[i][j] - f * M[r][j]) // prev for j in range(n)]
        prev = p
        r += 1
        if r == m:
            break
    return r


def nullspace(A) -> np.ndarray:
    """Basis of the right null space, one basis vector per column.

    The basis comes from the RREF: basis vector ``k`` has a 1 in the
    ``k``-th free column and 0 in every other free column.
    """
    A = _as_matrix(A)
    n = A.shape[1]
    R, pivots = rref(A)
    free = [j for j in range(n) if j not in pivots]
    N = np.full((n, len(free)), Fraction(0), dtype=object)
    for k, f in enumerate(free):
        N[f, k] = Fraction(1)
        for i, p in enumerate(pivots):
            N[p, k] = -R[i, f]
    return N


def in_span(A, b) -> bool:
    """Whether ``b`` lies in the column space of ``A``."""
    return solve_particular(A, b) is not None


def solve_particular(A, b) -> np.ndarray | None:
    """Some exact ``v`` with ``A v = b`` (free variables set to 0), or None."""
    A = _as_matrix(A)
    b = fvec(b)
    m, n = A.shape
    if len(b) != m:
        raise DimensionMismatch(f"A has {m} rows but b has length {len(b)}")
    aug = np.empty((m, n + 1), dtype=object)
    aug[:, :n] = A
    aug[:, n] = b
    R, pivots = rref(aug)
    if pivots and pivots[-1] == n:
        return None
    v = np.full(n, Fraction(0), dtype=object)
    for i, p in enumerate(pivots):
        v[p] = R[i, n]
    return v


def normalize_first(v: Sequence[Fraction]) -> tuple[Fraction, ...]:
    """Scale so the first nonzero entry has absolute value 1 (sign kept)."""
    lead = next((x for x in v if x != 0), None)
    if lead is None:
        return tuple(Fraction(0) for _ in v)
    s = abs(lead)
    return tuple(Fraction(x) / s for x in v)


def primitive(v: Sequence[int]) -> list[int]:
    g = reduce(gcd, (abs(x) for x in v), 0)
    if g <= 1:
        return list(v)
    return [x // g for x in v]
