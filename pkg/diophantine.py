"""
Simultaneous Diophantine approximation by lattice reduction.

Given rationals a_1..a_n and 0 < eps < 1, find q > 0 and p_i with
|a_i - p_i/q| <= eps/q. The lattice spanned by (eps/Q, a_1, ..., a_n) and
-e_i contains (q*eps/Q, q*a_1 - p_1, ...), which LLL exposes as a short row.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from sympy import integer_nthroot

import config
from errors import InvalidInputError
from lattice import LatticeBasis, norm_sq, reduce_basis, to_fraction

logger = logging.getLogger(__name__)


def default_q(n: int, epsilon: Fraction) -> int:
    """Smallest integer Q with Q >= 2^(n(n+1)/4) * eps^-n."""
    fourth_power = Fraction(2) ** (n * (n + 1)) / epsilon ** (4 * n)
    ceiling = -(-fourth_power.numerator // fourth_power.denominator)
    root, exact = integer_nthroot(ceiling, 4)
    return int(root) if exact else int(root) + 1


def q_within_bound(q: int, n: int, epsilon: Fraction) -> bool:
    """0 < q < 2^(n(n+1)/4) * eps^-(n+1), compared on fourth powers."""
    if q <= 0:
        return False
    return Fraction(q) ** 4 < Fraction(2) ** (n * (n + 1)) / epsilon ** (4 * (n + 1))


@dataclass(frozen=True)
class SdaProblem:
    alphas: tuple[Fraction, ...]
    epsilon: Fraction
    Q: int | None = None
    X: int | None = field(default=None, compare=False)

    def __post_init__(self):
        alphas = tuple(to_fraction(a) for a in self.alphas)
        epsilon = to_fraction(self.epsilon)
        if not alphas:
            raise InvalidInputError('at least one alpha is required')
        if not 0 < epsilon < 1:
            raise InvalidInputError('epsilon must lie strictly between 0 and 1')
        object.__setattr__(self, 'alphas', alphas)
        object.__setattr__(self, 'epsilon', epsilon)
        if self.Q is None:
            object.__setattr__(self, 'Q', default_q(len(alphas), epsilon))
        elif self.Q < 1:
            raise InvalidInputError('Q must be at least 1')
        if self.X is None:
            bound = max(max(abs(a.numerator), a.denominator) for a in alphas)
            object.__setattr__(self, 'X', bound)

    @property
    def n(self) -> int:
        return len(self.alphas)


@dataclass(frozen=True)
class SdaSolution:
    q: int
    ps: tuple[int, ...]
    quality: Fraction
    row_norm_sq: Fraction

    def satisfies(self, problem: SdaProblem) -> bool:
        """Both approximation bounds, checked exactly."""
        if not q_within_bound(self.q, problem.n, problem.epsilon):
            return False
        return all(
            abs(a - Fraction(p, self.q)) <= problem.epsilon / self.q
            for a, p in zip(problem.alphas, self.ps)
        )


def build_sda_lattice(problem: SdaProblem) -> LatticeBasis:
    n = problem.n
    rows = [(problem.epsilon / problem.Q,) + problem.alphas]
    for i in range(1, n + 1):
        row = [Fraction(0)] * (n + 1)
        row[i] = Fraction(-1)
        rows.append(tuple(row))
    return LatticeBasis(tuple(rows))


def _solution_from_row(problem: SdaProblem, row: Sequence[Fraction]) -> SdaSolution | None:
    if row[0] == 0:
        return None
    q = row[0] * problem.Q / problem.epsilon
    if q.denominator != 1:
        return None
    q = abs(q.numerator)
    ps = tuple(math.floor(q * a + Fraction(1, 2)) for a in problem.alphas)
    quality = max(abs(q * a - p) for a, p in zip(problem.alphas, ps))
    return SdaSolution(q=q, ps=ps, quality=quality, row_norm_sq=norm_sq(row))


def solve_sda(problem: SdaProblem, delta=config.LLL_DELTA) -> SdaSolution | None:
    """
    Reduce the approximation lattice and return the first row that yields a
    valid (q, p) pair, or None when no row qualifies.
    """
    reduced = reduce_basis(build_sda_lattice(problem), delta).basis
    for row in reduced.rows:
        solution = _solution_from_row(problem, row)
        if solution is None:
            continue
        if solution.row_norm_sq >= 1:
            continue
        if solution.satisfies(problem):
            return solution
    logger.info('No reduced row solves the approximation problem (n=%d, eps=%s)',
                problem.n, problem.epsilon)
    return None
