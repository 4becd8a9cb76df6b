"""
Super-increasing sequences and subset-sum instances.

Greedy decoding walks the weights from largest to smallest and takes a
weight whenever it still fits in the residual target.
"""

from __future__ import annotations

import logging
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from errors import InvalidInputError

logger = logging.getLogger(__name__)

LOG2_FRACTION_BITS = 64


def is_superincreasing(weights: Sequence[int]) -> bool:
    """True iff every weight is positive and exceeds the sum of its predecessors."""
    if len(weights) == 0:
        raise InvalidInputError('weights must be non-empty')
    total = 0
    for weight in weights:
        if weight <= 0 or weight <= total:
            return False
        total += weight
    return True


@dataclass(frozen=True)
class SuperIncreasingSequence:
    weights: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, 'weights', tuple(int(w) for w in self.weights))
        if not is_superincreasing(self.weights):
            raise InvalidInputError('weights are not super-increasing')

    @property
    def n(self) -> int:
        return len(self.weights)

    def total(self) -> int:
        return sum(self.weights)

    def __len__(self):
        return len(self.weights)

    def __iter__(self):
        return iter(self.weights)

    def __getitem__(self, index):
        return self.weights[index]


@dataclass(frozen=True)
class SubsetSumInstance:
    weights: tuple[int, ...]
    target: int

    def __post_init__(self):
        object.__setattr__(self, 'weights', tuple(int(w) for w in self.weights))
        if any(w <= 0 for w in self.weights):
            raise InvalidInputError('subset-sum weights must be positive')
        if self.target < 0:
            raise InvalidInputError('target must be non-negative')

    def check(self, solution: SolutionBits) -> bool:
        if len(solution.bits) != len(self.weights):
            return False
        return solution.dot(self.weights) == self.target


@dataclass(frozen=True)
class SolutionBits:
    bits: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, 'bits', tuple(int(b) for b in self.bits))
        if any(b not in (0, 1) for b in self.bits):
            raise InvalidInputError('solution bits must be 0 or 1')

    def dot(self, weights: Sequence[int]) -> int:
        return sum(w for w, bit in zip(weights, self.bits) if bit)


def generate_superincreasing(n: int, slack_bits: int, seed: int) -> SuperIncreasingSequence:
    """
    Deterministic super-increasing sequence.

    b_1 is drawn from [1, 2^slack_bits]; every later weight is the running
    total plus an offset drawn from the same range.
    """
    if n < 1:
        raise InvalidInputError('n must be at least 1')
    if slack_bits < 0:
        raise InvalidInputError('slack_bits must be non-negative')

    rng = random.Random(seed)
    upper = 1 << slack_bits
    weights = []
    total = 0
    for _ in range(n):
        weight = total + rng.randint(1, upper)
        weights.append(weight)
        total += weight
    return SuperIncreasingSequence(tuple(weights))


def _as_sequence(seq) -> SuperIncreasingSequence:
    if isinstance(seq, SuperIncreasingSequence):
        return seq
    return SuperIncreasingSequence(tuple(seq))


def solve_superincreasing(seq, s: int) -> SolutionBits | None:
    """
    Greedy subset-sum solver for super-increasing weights.

    Returns None when a residual is left after the scan, i.e. when s is not
    a subset sum of the weights.
    """
    seq = _as_sequence(seq)
    if s < 0:
        raise InvalidInputError('target must be non-negative')

    bits = [0] * seq.n
    residual = s
    for i in range(seq.n - 1, -1, -1):
        if residual >= seq.weights[i]:
            bits[i] = 1
            residual -= seq.weights[i]
    if residual != 0:
        return None
    return SolutionBits(tuple(bits))


def sorting_order(weights: Sequence[int]) -> list[int]:
    """Indices that sort weights ascending (ties broken by position)."""
    return sorted(range(len(weights)), key=lambda i: (weights[i], i))


def solve_superincreasing_set(weights: Sequence[int], s: int) -> SolutionBits | None:
    """
    Solve a subset sum whose weights are super-increasing once sorted.

    Bits come back in the caller's order. Raises InvalidInputError when the
    sorted weights are not super-increasing.
    """
    order = sorting_order(weights)
    ordered = [weights[i] for i in order]
    if not is_superincreasing(ordered):
        raise InvalidInputError('sorted weights are not super-increasing')

    solution = solve_superincreasing(SuperIncreasingSequence(tuple(ordered)), s)
    if solution is None:
        return None
    bits = [0] * len(weights)
    for position, index in enumerate(order):
        bits[index] = solution.bits[position]
    return SolutionBits(tuple(bits))


def _log2_fixed(value: int, fraction_bits: int = LOG2_FRACTION_BITS) -> Fraction:
    """floor(log2(value) * 2^fraction_bits) / 2^fraction_bits, by repeated squaring."""
    exponent = value.bit_length() - 1
    precision = fraction_bits + 64
    one = 1 << precision
    mantissa = (value << precision) >> exponent
    fraction = 0
    for _ in range(fraction_bits):
        mantissa = (mantissa * mantissa) >> precision
        fraction <<= 1
        if mantissa >= 2 * one:
            fraction |= 1
            mantissa >>= 1
    return Fraction((exponent << fraction_bits) | fraction, 1 << fraction_bits)


def _log2_rounded(value: int, fraction_bits: int = LOG2_FRACTION_BITS) -> Fraction:
    """log2(value) rounded to the nearest multiple of 2^-fraction_bits."""
    scaled = _log2_fixed(value, fraction_bits + 1) * (1 << (fraction_bits + 1))
    return Fraction((int(scaled) + 1) >> 1, 1 << fraction_bits)


def density(weights: Sequence[int]) -> Fraction:
    """
    Knapsack density n / log2(max weight).

    log2 is rounded to 64 fractional bits, so powers of two are exact.
    """
    if len(weights) == 0:
        raise InvalidInputError('weights must be non-empty')
    largest = max(weights)
    if largest < 2:
        raise InvalidInputError('largest weight must be at least 2')
    return Fraction(len(weights)) / _log2_rounded(int(largest))
