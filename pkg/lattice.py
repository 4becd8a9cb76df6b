"""
Exact rational lattice machinery.

All arithmetic is done with fractions.Fraction: Gram-Schmidt data, the
reducedness checks and LLL itself are exact, so the reducedness conditions
can be verified with equality rather than tolerances.
"""

from __future__ import annotations

import itertools
import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import config
from errors import DimensionError, InvalidInputError, RankDeficientError

logger = logging.getLogger(__name__)

ENUMERATION_MAX_DIM = 6
ENUMERATION_MAX_BOUND = 5

Vector = tuple[Fraction, ...]


def to_fraction(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, (int, str)):
        return Fraction(value)
    raise InvalidInputError(f'cannot use {value!r} as an exact rational')


@dataclass(frozen=True)
class LatticeBasis:
    rows: tuple[Vector, ...]

    def __post_init__(self):
        rows = tuple(tuple(to_fraction(x) for x in row) for row in self.rows)
        if not rows:
            raise InvalidInputError('basis needs at least one row')
        width = len(rows[0])
        if width == 0 or any(len(row) != width for row in rows):
            raise InvalidInputError('basis rows must share one non-zero length')
        if len(rows) > width:
            raise RankDeficientError(f'{len(rows)} rows cannot be independent in dimension {width}')
        object.__setattr__(self, 'rows', rows)

    @classmethod
    def from_rows(cls, rows) -> LatticeBasis:
        return cls(tuple(tuple(row) for row in rows))

    @property
    def m(self) -> int:
        return len(self.rows)

    @property
    def dim(self) -> int:
        return len(self.rows[0])

    def is_integral(self) -> bool:
        return all(x.denominator == 1 for row in self.rows for x in row)


@dataclass(frozen=True)
class GramSchmidtData:
    ortho: tuple[Vector, ...]
    mu: tuple[tuple[Fraction, ...], ...]
    norms: tuple[Fraction, ...]


@dataclass
class LllStats:
    swaps: int = 0
    size_reductions: int = 0
    iterations: int = 0


# ==================== VECTOR OPERATIONS ====================


def inner_product(x: Sequence, y: Sequence) -> Fraction:
    if len(x) != len(y):
        raise InvalidInputError(f'length mismatch: {len(x)} vs {len(y)}')
    return sum((to_fraction(a) * to_fraction(b) for a, b in zip(x, y)), Fraction(0))


def norm_sq(y: Sequence) -> Fraction:
    if len(y) == 0:
        raise InvalidInputError('empty vector')
    return inner_product(y, y)


def sup_norm(y: Sequence) -> Fraction:
    if len(y) == 0:
        raise InvalidInputError('empty vector')
    return max(abs(to_fraction(v)) for v in y)


def _axpy(alpha: Fraction, x: Sequence[Fraction], y: Sequence[Fraction]) -> list[Fraction]:
    """y - alpha * x"""
    return [b - alpha * a for a, b in zip(x, y)]


# ==================== GRAM-SCHMIDT ====================


def gram_schmidt(basis: LatticeBasis) -> GramSchmidtData:
    ortho = []
    norms = []
    mu = []
    for i, row in enumerate(basis.rows):
        star = list(row)
        coefficients = []
        for j in range(i):
            coefficient = inner_product(row, ortho[j]) / norms[j]
            coefficients.append(coefficient)
            star = _axpy(coefficient, ortho[j], star)
        coefficients.append(Fraction(1))
        norm = inner_product(star, star)
        if norm == 0:
            raise RankDeficientError(f'row {i} lies in the span of the previous rows')
        ortho.append(tuple(star))
        norms.append(norm)
        mu.append(tuple(coefficients))
    return GramSchmidtData(ortho=tuple(ortho), mu=tuple(mu), norms=tuple(norms))


def _check_delta(delta: Fraction) -> Fraction:
    delta = to_fraction(delta)
    if not Fraction(1, 4) < delta < 1:
        raise InvalidInputError('delta must satisfy 1/4 < delta < 1')
    return delta


def is_lll_reduced(basis: LatticeBasis, delta=config.LLL_DELTA) -> bool:
    """Size condition |mu_ij| <= 1/2 and the Lovasz condition, checked exactly."""
    delta = _check_delta(delta)
    gso = gram_schmidt(basis)
    for i in range(basis.m):
        for j in range(i):
            if abs(gso.mu[i][j]) > Fraction(1, 2):
                return False
    for i in range(1, basis.m):
        if gso.norms[i] < (delta - gso.mu[i][i - 1] ** 2) * gso.norms[i - 1]:
            return False
    return True


# ==================== LLL ====================


@dataclass(frozen=True)
class LllResult:
    basis: LatticeBasis
    stats: LllStats


def reduce_basis(basis: LatticeBasis, delta=config.LLL_DELTA) -> LllResult:
    """LLL reduction with size-reduction subroutine and incremental GSO updates."""
    delta = _check_delta(delta)
    gso = gram_schmidt(basis)
    f = [list(row) for row in basis.rows]
    mu = [list(row) for row in gso.mu]
    big_f = list(gso.norms)
    n = len(f)
    stats = LllStats()
    half = Fraction(1, 2)

    def red(k, l):
        if abs(mu[k][l]) > half:
            r = math.floor(half + mu[k][l])
            f[k] = [a - r * b for a, b in zip(f[k], f[l])]
            for j in range(l):
                mu[k][j] -= r * mu[l][j]
            mu[k][l] -= r
            stats.size_reductions += 1

    k = 1
    while k < n:
        stats.iterations += 1
        red(k, k - 1)
        if big_f[k] < (delta - mu[k][k - 1] ** 2) * big_f[k - 1]:
            m = mu[k][k - 1]
            new_f = big_f[k] + m * m * big_f[k - 1]
            mu[k][k - 1] = m * big_f[k - 1] / new_f
            big_f[k] = big_f[k - 1] * big_f[k] / new_f
            big_f[k - 1] = new_f
            f[k], f[k - 1] = f[k - 1], f[k]
            for j in range(k - 1):
                mu[k][j], mu[k - 1][j] = mu[k - 1][j], mu[k][j]
            for i in range(k + 1, n):
                t = mu[i][k]
                mu[i][k] = mu[i][k - 1] - m * t
                mu[i][k - 1] = t + mu[k][k - 1] * mu[i][k]
            k = max(1, k - 1)
            stats.swaps += 1
        else:
            for l in range(k - 2, -1, -1):
                red(k, l)
            k += 1

    logger.debug('LLL dim=%d swaps=%d reductions=%d', n, stats.swaps, stats.size_reductions)
    return LllResult(basis=LatticeBasis(tuple(tuple(row) for row in f)), stats=stats)


def lll_reduce(basis: LatticeBasis, delta=config.LLL_DELTA) -> LatticeBasis:
    return reduce_basis(basis, delta).basis


# ==================== DETERMINANT / BASIS CHANGE ====================


def _determinant(matrix: list[list[Fraction]]) -> Fraction:
    a = [list(row) for row in matrix]
    size = len(a)
    det = Fraction(1)
    for col in range(size):
        pivot = next((r for r in range(col, size) if a[r][col] != 0), None)
        if pivot is None:
            return Fraction(0)
        if pivot != col:
            a[col], a[pivot] = a[pivot], a[col]
            det = -det
        det *= a[col][col]
        for r in range(col + 1, size):
            factor = a[r][col] / a[col][col]
            if factor:
                a[r] = [x - factor * y for x, y in zip(a[r], a[col])]
    return det


def lattice_determinant(basis: LatticeBasis) -> Fraction:
    """|det| of a square full-rank basis."""
    if basis.m != basis.dim:
        raise DimensionError(f'basis is {basis.m}x{basis.dim}, not square')
    det = abs(_determinant([list(row) for row in basis.rows]))
    if det == 0:
        raise RankDeficientError('basis rows are linearly dependent')
    return det


def change_of_basis(source: LatticeBasis, target: LatticeBasis) -> list[list[Fraction]]:
    """Rational matrix T with T * source = target (row convention)."""
    if source.m != target.m or source.dim != target.dim:
        raise DimensionError('bases have different shapes')
    m, d = source.m, source.dim
    # Solve x * S = t for every target row: augmented system S^T x^T = t^T.
    coefficients = []
    for row in target.rows:
        a = [[source.rows[j][c] for j in range(m)] + [row[c]] for c in range(d)]
        r = 0
        for col in range(m):
            pivot = next((i for i in range(r, d) if a[i][col] != 0), None)
            if pivot is None:
                raise RankDeficientError('source rows are linearly dependent')
            a[r], a[pivot] = a[pivot], a[r]
            a[r] = [x / a[r][col] for x in a[r]]
            for i in range(d):
                if i != r and a[i][col] != 0:
                    factor = a[i][col]
                    a[i] = [x - factor * y for x, y in zip(a[i], a[r])]
            r += 1
        if any(a[i][m] != 0 for i in range(r, d)):
            raise InvalidInputError('target row is outside the span of the source basis')
        coefficients.append([a[i][m] for i in range(m)])
    return coefficients


def is_unimodular(matrix: list[list[Fraction]]) -> bool:
    if any(x.denominator != 1 for row in matrix for x in row):
        return False
    return abs(_determinant(matrix)) == 1


def same_lattice(source: LatticeBasis, target: LatticeBasis) -> bool:
    try:
        return is_unimodular(change_of_basis(source, target))
    except InvalidInputError:
        return False


# ==================== ENUMERATION ORACLE ====================


def enumerate_short_vectors(basis: LatticeBasis, coeff_bound: int) -> list[tuple[Vector, Fraction]]:
    """All non-zero combinations with coefficients in [-bound, bound], shortest first."""
    if basis.m > ENUMERATION_MAX_DIM:
        raise DimensionError(f'enumeration is limited to {ENUMERATION_MAX_DIM} rows')
    if not 0 < coeff_bound <= ENUMERATION_MAX_BOUND:
        raise DimensionError(f'coefficient bound must lie in [1, {ENUMERATION_MAX_BOUND}]')

    found = []
    span = range(-coeff_bound, coeff_bound + 1)
    for coeffs in itertools.product(span, repeat=basis.m):
        if not any(coeffs):
            continue
        vector = tuple(
            sum((c * row[col] for c, row in zip(coeffs, basis.rows) if c), Fraction(0))
            for col in range(basis.dim)
        )
        found.append((vector, inner_product(vector, vector)))
    found.sort(key=lambda item: (item[1], item[0]))
    return found


def shortest_norm_sq(basis: LatticeBasis, coeff_bound: int) -> Fraction:
    return enumerate_short_vectors(basis, coeff_bound)[0][1]
