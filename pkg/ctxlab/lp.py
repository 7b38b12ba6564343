"""
Exact linear algebra over the rationals
Phase-one simplex with Bland's rule, and rank of constraint systems
"""
import logging
from fractions import Fraction as Frac
from typing import List, Optional, Sequence

import sympy

logger = logging.getLogger(__name__)


class SimplexTableau:
    """
    Dense phase-one tableau for A x = b, x >= 0.

    Columns 0..n-1 are the original variables, n..n+m-1 the artificials.
    The cost row holds reduced costs of the artificial sum being minimized.
    """

    def __init__(self, A: Sequence[Sequence[Frac]], b: Sequence[Frac]):
        self.m = len(A)
        self.n = len(A[0]) if A else 0
        self.A: List[List[Frac]] = []
        self.b: List[Frac] = []
        for i, row in enumerate(A):
            sign = -1 if b[i] < 0 else 1
            artificials = [Frac(int(k == i)) for k in range(self.m)]
            self.A.append([Frac(sign * v) for v in row] + artificials)
            self.b.append(Frac(sign * b[i]))
        self.basis = list(range(self.n, self.n + self.m))
        width = self.n + self.m
        self.c = [-sum((self.A[i][j] for i in range(self.m)), Frac(0)) if j < self.n else Frac(0) for j in range(width)]
        self.pivots = 0

    def pivot(self, i: int, j: int) -> None:
        piv = self.A[i][j]
        self.A[i] = [v / piv for v in self.A[i]]
        self.b[i] /= piv
        for k in range(self.m):
            if k != i and self.A[k][j] != 0:
                f = self.A[k][j]
                self.A[k] = [vk - f * vi for vk, vi in zip(self.A[k], self.A[i])]
                self.b[k] -= f * self.b[i]
        f = self.c[j]
        if f != 0:
            self.c = [ck - f * vi for ck, vi in zip(self.c, self.A[i])]
        self.basis[i] = j
        self.pivots += 1

    def bland_primal_step(self) -> str:
        entering = [j for j in range(len(self.c)) if self.c[j] < 0]
        if not entering:
            return "optimal"
        j = entering[0]
        rows = [(self.b[i] / self.A[i][j], self.basis[i], i) for i in range(self.m) if self.A[i][j] > 0]
        if not rows:
            return "unbounded"
        _, _, i = min(rows)
        self.pivot(i, j)
        return "go_on"

    def bland_primal(self) -> str:
        while True:
            status = self.bland_primal_step()
            if status != "go_on":
                return status

    def infeasibility(self) -> Frac:
        return sum((self.b[i] for i in range(self.m) if self.basis[i] >= self.n), Frac(0))

    def solution(self) -> List[Frac]:
        x = [Frac(0)] * self.n
        for i, j in enumerate(self.basis):
            if j < self.n:
                x[j] = self.b[i]
        return x


def feasible_point(A: Sequence[Sequence[Frac]], b: Sequence[Frac]) -> Optional[List[Frac]]:
    """A nonnegative exact solution of A x = b, or None when none exists"""
    if not A:
        return []
    tableau = SimplexTableau(A, b)
    status = tableau.bland_primal()
    logger.debug(f"Phase one: {status} after {tableau.pivots} pivots, {tableau.m}x{tableau.n}")
    if tableau.infeasibility() != 0:
        return None
    return tableau.solution()


def rank(rows: Sequence[Sequence[Frac]]) -> int:
    if not rows:
        return 0
    return int(sympy.Matrix([[sympy.Rational(v.numerator, v.denominator) for v in row] for row in rows]).rank())


def solve_exact(A: Sequence[Sequence[Frac]], b: Sequence[Frac]) -> Optional[List[Frac]]:
    """Unique solution of a square-or-tall system with independent columns, else None"""
    M = sympy.Matrix([[sympy.Rational(v.numerator, v.denominator) for v in row] for row in A])
    rhs = sympy.Matrix([sympy.Rational(v.numerator, v.denominator) for v in b])
    try:
        sol, params = M.gauss_jordan_solve(rhs)
    except ValueError:
        return None
    if params.shape[0] != 0:
        return None
    return [Frac(int(sympy.fraction(v)[0]), int(sympy.fraction(v)[1])) for v in sol]
