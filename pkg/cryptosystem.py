"""
Permutation-combination knapsack scheme.

Key generation disguises a super-increasing sequence b as a_i = b_i * w mod p.
Encryption hashes the message to a permutation selector D', reorders every
group of g public weights with the factorial code of D', keeps the first t
of each group and sums the weights picked by each block's bits.
"""

from __future__ import annotations

import hashlib
import logging
import math
import random
from dataclasses import dataclass, field
from typing import Sequence

from sympy import isprime, mod_inverse, nextprime

import config
from errors import (
    CorruptCiphertextError,
    InvalidInputError,
    KeyMismatchError,
    OutOfRangeError,
)
from knapsack_core import (
    SuperIncreasingSequence,
    generate_superincreasing,
    is_superincreasing,
    solve_superincreasing_set,
)
from permutation import factorial_carry, permute

logger = logging.getLogger(__name__)

DIGEST_BITS = 1024


@dataclass(frozen=True)
class SchemeParams:
    n: int = config.DEFAULT_N
    subsets: int = config.DEFAULT_SUBSETS
    group_size: int = config.DEFAULT_GROUP_SIZE
    take: int = config.DEFAULT_TAKE
    slack_bits: int = config.DEFAULT_SLACK_BITS
    hash_id: str = config.DEFAULT_HASH_ID

    def __post_init__(self):
        if self.subsets < 1 or self.group_size < 1:
            raise InvalidInputError('subsets and group_size must be positive')
        if self.n != self.subsets * self.group_size:
            raise InvalidInputError(
                f'n={self.n} must equal subsets*group_size='
                f'{self.subsets * self.group_size}')
        if not 1 <= self.take <= self.group_size:
            raise InvalidInputError(f'take must lie in [1, {self.group_size}]')
        if self.slack_bits < 0:
            raise InvalidInputError('slack_bits must be non-negative')
        if self.hash_id not in HASH_CONSTRUCTIONS:
            raise InvalidInputError(f'unknown hash_id {self.hash_id!r}')

    @property
    def block_bits(self) -> int:
        return self.subsets * self.take

    @property
    def selector_modulus(self) -> int:
        return math.factorial(self.group_size)

    @classmethod
    def desk(cls, n=16, subsets=2, take=4, slack_bits=8):
        """Two groups of n/2 weights, for tests and demos."""
        return cls(n=n, subsets=subsets, group_size=n // subsets, take=take,
                   slack_bits=slack_bits)


@dataclass(frozen=True)
class PrivateKey:
    b: SuperIncreasingSequence
    w: int
    w_inv: int
    p: int

    def __post_init__(self):
        if self.p <= self.b.total():
            raise InvalidInputError('modulus must exceed the sum of private weights')
        if not 1 <= self.w < self.p:
            raise InvalidInputError('multiplier must lie in [1, p)')
        if math.gcd(self.w, self.p) != 1:
            raise InvalidInputError('multiplier must be coprime to the modulus')
        if (self.w * self.w_inv) % self.p != 1:
            raise InvalidInputError('w_inv is not the inverse of w mod p')


@dataclass(frozen=True)
class PublicKey:
    a: tuple[int, ...]
    params: SchemeParams

    def __post_init__(self):
        object.__setattr__(self, 'a', tuple(int(x) for x in self.a))
        if len(self.a) != self.params.n:
            raise InvalidInputError(
                f'public key has {len(self.a)} weights, params say {self.params.n}')


@dataclass(frozen=True)
class Ciphertext:
    blocks: tuple[int, ...]
    d_prime: int
    msg_len_bytes: int = 0

    def __post_init__(self):
        object.__setattr__(self, 'blocks', tuple(int(c) for c in self.blocks))
        if self.d_prime < 0 or self.msg_len_bytes < 0:
            raise InvalidInputError('d_prime and msg_len_bytes must be non-negative')


@dataclass(frozen=True)
class MessageBlock:
    bits: tuple[int, ...] = field(default_factory=tuple)

    def encrypt_with(self, weights: Sequence[int]) -> int:
        if len(weights) != len(self.bits):
            raise InvalidInputError('block length does not match the selected weights')
        return sum(w for w, bit in zip(weights, self.bits) if bit)


# ==================== DIGEST ====================


def _sha256_ctr4(message: bytes) -> bytes:
    return b''.join(
        hashlib.sha256(message + ctr.to_bytes(4, 'big')).digest()
        for ctr in range(4)
    )


HASH_CONSTRUCTIONS = {
    'sha256-ctr4': _sha256_ctr4,
}


def digest_to_dprime(message: bytes, params: SchemeParams) -> int:
    """1024-bit digest of the whole message, reduced mod g!."""
    digest = HASH_CONSTRUCTIONS[params.hash_id](bytes(message))
    value = int.from_bytes(digest, 'big')
    return value % params.selector_modulus


# ==================== KEYS ====================


def build_keypair(params: SchemeParams, b, w: int, p: int | None = None):
    """Assemble a key pair from explicit trapdoor values; p defaults to the next prime above sum(b)."""
    if not isinstance(b, SuperIncreasingSequence):
        b = SuperIncreasingSequence(tuple(b))
    if len(b) != params.n:
        raise InvalidInputError(f'private sequence has {len(b)} weights, params say {params.n}')
    if p is None:
        p = int(nextprime(b.total()))
    elif not isprime(p):
        raise InvalidInputError(f'modulus {p} is not prime')

    w_inv = int(mod_inverse(w, p))
    sk = PrivateKey(b=b, w=w, w_inv=w_inv, p=p)
    pk = PublicKey(a=tuple((bi * w) % p for bi in b), params=params)
    return pk, sk


def keygen(params: SchemeParams, seed: int, multiplier: int | None = None):
    """Deterministic key pair for the given seed."""
    b = generate_superincreasing(params.n, params.slack_bits, seed)
    p = int(nextprime(b.total()))
    if multiplier is None:
        rng = random.Random(f'multiplier:{seed}')
        multiplier = rng.randint(2, p - 1)
    pk, sk = build_keypair(params, b, multiplier, p)
    logger.debug('Generated key n=%d seed=%d modulus_bits=%d',
                 params.n, seed, sk.p.bit_length())
    return pk, sk


# ==================== WEIGHT SELECTION ====================


def select_weights(vector: Sequence[int], d_prime: int, params: SchemeParams) -> list[int]:
    """Permute every group of g weights by the code of d_prime and keep the first t of each."""
    if len(vector) != params.n:
        raise InvalidInputError(f'vector has {len(vector)} entries, params say {params.n}')
    if d_prime < 0 or d_prime >= params.selector_modulus:
        raise OutOfRangeError(f'd_prime must lie in [0, {params.group_size}!)')

    code = factorial_carry(d_prime, params.group_size)
    g = params.group_size
    selected = []
    for k in range(params.subsets):
        group = list(vector[k * g:(k + 1) * g])
        selected.extend(permute(group, code)[:params.take])
    return selected


def selection_is_superincreasing(b, d_prime: int, params: SchemeParams) -> bool:
    """Whether the selected private weights stay super-increasing in their permuted order."""
    return is_superincreasing(select_weights(list(b), d_prime, params))


# ==================== MESSAGE BLOCKS ====================


def message_to_blocks(message: bytes, block_bits: int) -> list[MessageBlock]:
    """Most-significant bit first, zero-padded to a whole number of blocks."""
    bits = [(byte >> shift) & 1 for byte in message for shift in range(7, -1, -1)]
    block_count = -(-len(bits) // block_bits)
    bits.extend([0] * (block_count * block_bits - len(bits)))
    return [
        MessageBlock(tuple(bits[k * block_bits:(k + 1) * block_bits]))
        for k in range(block_count)
    ]


def blocks_to_message(blocks: Sequence[MessageBlock], msg_len_bytes: int) -> bytes:
    bits = [bit for block in blocks for bit in block.bits]
    if len(bits) < msg_len_bytes * 8:
        raise CorruptCiphertextError('ciphertext is shorter than the declared message length')
    if any(bits[msg_len_bytes * 8:]):
        raise CorruptCiphertextError('non-zero padding bits')
    out = bytearray()
    for i in range(msg_len_bytes):
        byte = 0
        for bit in bits[i * 8:(i + 1) * 8]:
            byte = (byte << 1) | bit
        out.append(byte)
    return bytes(out)


# ==================== ENCRYPT / DECRYPT ====================


def encrypt(pk: PublicKey, message: bytes) -> Ciphertext:
    params = pk.params
    d_prime = digest_to_dprime(message, params)
    weights = select_weights(pk.a, d_prime, params)
    blocks = [block.encrypt_with(weights)
              for block in message_to_blocks(message, params.block_bits)]
    return Ciphertext(blocks=tuple(blocks), d_prime=d_prime, msg_len_bytes=len(message))


def decrypt(sk: PrivateKey, params: SchemeParams, ct: Ciphertext) -> bytes:
    if len(sk.b) != params.n:
        raise KeyMismatchError(f'private key has {len(sk.b)} weights, params say {params.n}')
    expected_blocks = -(-ct.msg_len_bytes * 8 // params.block_bits)
    if len(ct.blocks) != expected_blocks:
        raise CorruptCiphertextError(
            f'{len(ct.blocks)} blocks for a {ct.msg_len_bytes}-byte message')

    selected = select_weights(sk.b.weights, ct.d_prime, params)
    if not is_superincreasing(sorted(selected)):
        raise KeyMismatchError('selected private weights are not super-increasing')

    decoded = []
    for k, c in enumerate(ct.blocks):
        target = (c * sk.w_inv) % sk.p
        solution = solve_superincreasing_set(selected, target)
        if solution is None:
            raise CorruptCiphertextError(f'block {k} does not decode')
        decoded.append(MessageBlock(solution.bits))
    return blocks_to_message(decoded, ct.msg_len_bytes)
