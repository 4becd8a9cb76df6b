"""
Factorial number system and the permutation combination step.

A code (u_1 ... u_n) with 0 <= u_i <= n - i indexes one of the n!
orderings of a vector: position i takes the (u_i + 1)-th element of
whatever has not been taken yet.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

from errors import InvalidInputError, OutOfRangeError


@dataclass(frozen=True)
class LehmerCode:
    digits: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, 'digits', tuple(int(u) for u in self.digits))
        n = len(self.digits)
        for i, u in enumerate(self.digits):
            if u < 0 or u > n - 1 - i:
                raise InvalidInputError(
                    f'digit u_{i + 1}={u} outside [0, {n - 1 - i}]')

    @property
    def n(self) -> int:
        return len(self.digits)


def factorial_carry(m: int, n: int) -> LehmerCode:
    """Digits of m in factorial base, most significant first."""
    if n < 0:
        raise InvalidInputError('n must be non-negative')
    if m < 0 or m >= math.factorial(n):
        raise OutOfRangeError(f'm must lie in [0, {n}!)')

    digits = []
    remainder = m
    for i in range(1, n + 1):
        place = math.factorial(n - i)
        u, remainder = divmod(remainder, place)
        digits.append(u)
    return LehmerCode(tuple(digits))


def lehmer_to_index(code: LehmerCode) -> int:
    if not isinstance(code, LehmerCode):
        code = LehmerCode(tuple(code))
    n = code.n
    return sum(u * math.factorial(n - i) for i, u in enumerate(code.digits, start=1))


def permute(elements: Sequence, code: LehmerCode, descending: bool = False) -> list:
    """
    Reorder elements by the code.

    descending=True applies the code to the reversed input, which is the
    D_0 = (E_n, ..., E_1) convention; the scheme always uses the given order.
    """
    if len(elements) != code.n:
        raise InvalidInputError(
            f'{len(elements)} elements for a code of length {code.n}')

    remaining = list(reversed(elements)) if descending else list(elements)
    return [remaining.pop(u) for u in code.digits]
