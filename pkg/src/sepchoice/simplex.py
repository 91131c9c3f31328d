"""Exact feasibility of ``{w >= 0 : A w = b}`` with self-checking certificates.

The core solver is a Phase-I simplex on an integer tableau (fraction-free
pivoting: the stored tableau is always ``D`` times the true tableau, where
``D`` is the last pivot) with Bland's smallest-index rule, so it terminates
and is deterministic.

``lp_feasible`` first asks HiGHS for a floating-point answer and tries to
turn it into an exact certificate by rational reconstruction.  A recovered
certificate is only returned after it has been re-verified in exact
arithmetic; if reconstruction fails the exact simplex decides.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from math import lcm

import numpy as np

from .exact_linalg import DimensionMismatch, fmat, fvec

log = logging.getLogger(__name__)

__all__ = ["FeasibilityResult", "CertificateError", "lp_feasible", "simplex_phase_one"]


class CertificateError(AssertionError):
    """A certificate failed exact re-verification."""


@dataclass(frozen=True, eq=False)
class FeasibilityResult:
    """Outcome of ``lp_feasible``.

    Exactly one of ``witness`` (``w >= 0`` with ``A w = b``) and ``farkas``
    (``y`` with ``y^T A <= 0`` and ``y^T b > 0``) is set.
    """

    feasible: bool
    witness: np.ndarray | None = None
    farkas: np.ndarray | None = None

    def __post_init__(self):
        if self.feasible != (self.witness is not None) or self.feasible == (self.farkas is not None):
            raise ValueError("a FeasibilityResult carries exactly one certificate")

    @property
    def certificate(self) -> np.ndarray:
        return self.witness if self.feasible else self.farkas

    def verify(self, A, b) -> None:
        """Re-check the certificate against ``A w = b`` exactly; raise if bad."""
        A = A if isinstance(A, np.ndarray) else fmat(A)
        b = fvec(b)
        Ai, s = _integer_rows(A)
        if self.feasible:
            w = self.witness
            if len(w) != A.shape[1]:
                raise CertificateError("witness has the wrong length")
            if any(x < 0 for x in w):
                raise CertificateError("witness has a negative entry")
            L = reduce(lcm, (x.denominator for x in w), 1)
            W = np.array([int(x * L) for x in w], dtype=object)
            lhs = Ai.dot(W) if len(W) else np.zeros(A.shape[0], dtype=object)
            if any(l != si * bi * L for l, si, bi in zip(lhs, s, b)):
                raise CertificateError("witness does not satisfy A w = b")
        else:
            y = self.farkas
            if len(y) != A.shape[0]:
                raise CertificateError("Farkas vector has the wrong length")
            ys = [yi / si for yi, si in zip(y, s)]
            L = reduce(lcm, (x.denominator for x in ys), 1)
            Y = np.array([int(x * L) for x in ys], dtype=object)
            yA = Y.dot(Ai) if len(Y) else np.zeros(A.shape[1], dtype=object)
            if any(x > 0 for x in yA):
                raise CertificateError("Farkas vector has y^T A > 0 somewhere")
            if not y.dot(b) > 0:
                raise CertificateError("Farkas vector has y^T b <= 0")

    def is_valid(self, A, b) -> bool:
        try:
            self.verify(A, b)
        except CertificateError:
            return False
        return True


def _integer_rows(A: np.ndarray) -> tuple[np.ndarray, list[int]]:
    """``(Ai, s)`` with ``Ai[i] = s[i] * A[i]`` integral and ``s[i] > 0``."""
    s = [reduce(lcm, (x.denominator for x in row), 1) for row in A]
    Ai = np.empty(A.shape, dtype=object)
    for i, row in enumerate(A):
        Ai[i] = [int(x * s[i]) if s[i] != 1 else int(x) for x in row]
    return Ai, s


def _check_shapes(A: np.ndarray, b: np.ndarray) -> None:
    if A.ndim != 2 or b.ndim != 1 or A.shape[0] != len(b):
        raise DimensionMismatch(f"A is {A.shape}, b has length {len(b)}")


def simplex_phase_one(A, b) -> FeasibilityResult:
    """Decide ``exists w >= 0: A w = b`` by exact Phase-I simplex (Bland's rule)."""
    A = A if isinstance(A, np.ndarray) and A.dtype == object else fmat(A)
    b = fvec(b)
    _check_shapes(A, b)
    m, n = A.shape
    if m == 0:
        return FeasibilityResult(True, witness=fvec([0] * n))

    # Row i of the working system is scale[i] * (row i of [A | b]), with the
    # sign chosen so the right-hand side is nonnegative and the scale clearing
    # all denominators.
    scale = []
    rows = []
    for i in range(m):
        s = reduce(lcm, (x.denominator for x in A[i]), b[i].denominator)
        if b[i] < 0:
            s = -s
        scale.append(s)
        rows.append([int(x * s) for x in A[i]] + [int(b[i] * s)])

    width = n + m + 1
    T = np.zeros((m + 1, width), dtype=object)
    T[:] = 0
    for i, r in enumerate(rows):
        T[i, :n] = r[:n]
        T[i, n + i] = 1
        T[i, -1] = r[-1]
    # reduced costs of min sum(artificials) with the artificial basis
    T[m, :n] = -T[:m, :n].sum(axis=0)
    T[m, -1] = -T[:m, -1].sum()
    basis = [n + i for i in range(m)]
    D = 1

    while True:
        obj = T[m]
        enter = next((j for j in range(n + m) if obj[j] < 0), None)
        if enter is None:
            break
        col = T[:m, enter]
        leave = None
        for i in range(m):
            if col[i] > 0:
                if leave is None:
                    leave = i
                    continue
                # ratio_i < ratio_leave, both pivots positive
                lhs = T[i, -1] * col[leave]
                rhs = T[leave, -1] * col[i]
                if lhs < rhs or (lhs == rhs and basis[i] < basis[leave]):
                    leave = i
        if leave is None:  # cannot happen: Phase I is bounded below by 0
            raise RuntimeError("Phase-I objective unbounded")
        p = T[leave, enter]
        prow = T[leave].copy()
        T = (T * p - np.outer(T[:, enter], prow)) // D
        T[leave] = prow
        D = p
        basis[leave] = enter

    optimum = Fraction(-T[m, -1], D)
    if optimum == 0:
        w = [Fraction(0)] * n
        for i, j in enumerate(basis):
            if j < n:
                w[j] = Fraction(T[i, -1], D)
        result = FeasibilityResult(True, witness=fvec(w))
    else:
        # reduced cost of artificial i is 1 - y_i for the scaled system
        y = [(1 - Fraction(T[m, n + i], D)) * scale[i] for i in range(m)]
        result = FeasibilityResult(False, farkas=fvec(y))
    result.verify(A, b)
    return result


def _reconstruct(values, max_den: int) -> np.ndarray:
    return fvec(Fraction(float(v)).limit_denominator(max_den) for v in values)


def _highs_guess(A: np.ndarray, b: np.ndarray) -> FeasibilityResult | None:
    from scipy.optimize import linprog

    m, n = A.shape
    Af = A.astype(float)
    bf = b.astype(float)
    # min 1'(s+ + s-)  s.t.  A w + s+ - s- = b,  w, s >= 0
    A_eq = np.hstack([Af, np.eye(m), -np.eye(m)])
    c = np.concatenate([np.zeros(n), np.ones(2 * m)])
    res = linprog(c, A_eq=A_eq, b_eq=bf, bounds=(0, None), method="highs-ds")
    if res.status != 0:
        return None
    for max_den in (10**4, 10**8):
        if res.fun < 1e-9:
            w = _reconstruct(res.x[:n], max_den)
            guess = FeasibilityResult(True, witness=w)
        else:
            y = _reconstruct(res.eqlin.marginals, max_den)
            guess = FeasibilityResult(False, farkas=y)
        if guess.is_valid(A, b):
            return guess
    return None


def lp_feasible(A, b, method: str = "auto") -> FeasibilityResult:
    """Decide whether ``A w = b`` has a solution ``w >= 0``.

    ``method="simplex"`` runs only the exact Bland simplex.  ``"auto"``
    tries a HiGHS answer with exact rational reconstruction first and falls
    back to the exact simplex; either way the returned certificate has been
    verified in exact arithmetic.
    """
    A = A if isinstance(A, np.ndarray) and A.dtype == object else fmat(A)
    b = fvec(b)
    _check_shapes(A, b)
    if method not in ("auto", "simplex"):
        raise ValueError(f"unknown method {method!r}")
    if method == "auto" and A.shape[0] and A.shape[1]:
        guess = _highs_guess(A, b)
        if guess is not None:
            return guess
        log.debug("rational reconstruction failed on a %s system; running exact simplex", A.shape)
    return simplex_phase_one(A, b)
