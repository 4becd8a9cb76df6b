"""
Key-recovery attack on the permutation-combination knapsack scheme.

Step 1 reduces the lattice spanned by (lambda, a_2, ..., a_l) and -a_1 e_i.
A short row is (lambda*k_1, k_1*a_2 - k_2*a_1, ...), so k_1/a_1 approximates
the hidden ratio U/p = w^-1/p. From k_1 an equivalent trapdoor (U', p') is
derived whose weights b'_i = U'*a_i mod p' are super-increasing.
Steps 2 and 3 rebuild the selected weights from the public D' and decode
every block with the equivalent key. Every recovered plaintext is
re-encrypted under the public key before it is reported as a success.
"""

from __future__ import annotations

import heapq
import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator, Sequence

import config
from cryptosystem import (
    Ciphertext,
    MessageBlock,
    PrivateKey,
    PublicKey,
    blocks_to_message,
    encrypt,
    select_weights,
)
from errors import CorruptCiphertextError, InvalidInputError
from knapsack_core import (
    SuperIncreasingSequence,
    is_superincreasing,
    solve_superincreasing_set,
)
from lattice import LatticeBasis, norm_sq, reduce_basis, to_fraction

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class AttackConfig:
    ell: int = 4
    lam: Fraction | None = None
    lambda_sweep: tuple[Fraction, ...] | None = None
    ell_sweep: tuple[int, ...] = tuple(config.ATTACK_ELL_SWEEP)
    lambda_offsets: tuple[int, ...] = tuple(config.ATTACK_LAMBDA_OFFSETS)
    max_candidates: int = config.ATTACK_MAX_CANDIDATES
    max_segments: int = config.ATTACK_MAX_SEGMENTS
    delta: Fraction = config.LLL_DELTA

    def __post_init__(self):
        if self.ell < 2:
            raise InvalidInputError('ell must be at least 2')
        if self.lam is not None and self.lam <= 0:
            raise InvalidInputError('lambda must be positive')
        if self.lambda_sweep is not None:
            sweep = tuple(Fraction(x) for x in self.lambda_sweep)
            if any(x <= 0 for x in sweep):
                raise InvalidInputError('lambda sweep values must be positive')
            object.__setattr__(self, 'lambda_sweep', sweep)
        if any(l < 2 for l in self.ell_sweep):
            raise InvalidInputError('ell sweep values must be at least 2')
        if self.max_candidates < 1:
            raise InvalidInputError('max_candidates must be positive')

    def sweep_points(self, n: int) -> list[tuple[int, Fraction]]:
        """(l, lambda) pairs in evaluation order; l is clipped to [2, n]."""
        ells = [l for l in (self.ell_sweep or (self.ell,)) if 2 <= l <= n]
        if not ells:
            ells = [max(2, min(self.ell, n))]
        points = []
        if self.lambda_sweep is not None or self.lam is not None:
            lambdas = self.lambda_sweep or (self.lam,)
            for lam in lambdas:
                points.extend((l, lam) for l in ells)
        else:
            # lambda * k_1 should land near b_l, roughly p * 2^(l - n)
            for offset in self.lambda_offsets:
                points.extend((l, Fraction(2) ** (l - n + offset)) for l in ells)
        seen = set()
        ordered = []
        for point in points:
            if point not in seen:
                seen.add(point)
                ordered.append(point)
        return ordered

    def segment_budget(self, n: int) -> int:
        return self.max_segments if self.max_segments > 0 else 2 * (n + 1)


@dataclass(frozen=True)
class CandidateMultiplier:
    k1: int
    source_vector: tuple[Fraction, ...]
    ks: tuple[int, ...]
    ell: int
    lam: Fraction

    @property
    def norm_sq(self) -> Fraction:
        return norm_sq(self.source_vector)


@dataclass(frozen=True)
class EquivalentKey:
    U_prime: int
    p_prime: int
    b_prime: SuperIncreasingSequence


@dataclass
class AttackReport:
    success: bool
    equivalent_key: EquivalentKey | None = None
    plaintext: bytes | None = None
    candidates_tried: int = 0
    config_used: AttackConfig = field(default_factory=AttackConfig)
    validation: bool = False
    winning_candidate: CandidateMultiplier | None = None
    sweep_points_tried: int = 0
    lll_swaps: int = 0
    literal_trapdoor_hits: int = 0


# ==================== STEP 1: LATTICE ====================


def build_attack_lattice(a: Sequence[int], lam) -> LatticeBasis:
    """Row 0 is (lambda, a_2, ..., a_l); row i carries -a_1 in column i."""
    l = len(a)
    if l < 2:
        raise InvalidInputError('the attack lattice needs at least two weights')
    if any(x < 1 for x in a):
        raise InvalidInputError('public weights must be positive')
    lam = Fraction(lam)
    rows = [(lam,) + tuple(Fraction(x) for x in a[1:])]
    for i in range(1, l):
        row = [Fraction(0)] * l
        row[i] = Fraction(-a[0])
        rows.append(tuple(row))
    return LatticeBasis(tuple(rows))


def candidate_from_row(a: Sequence[int], lam: Fraction, row: Sequence[Fraction]) -> CandidateMultiplier | None:
    row = tuple(to_fraction(x) for x in row)
    if row[0] == 0:
        return None
    if row[0] < 0:
        row = tuple(-x for x in row)
    k1 = row[0] / Fraction(lam)
    if k1.denominator != 1 or k1 <= 0:
        return None
    k1 = k1.numerator
    ks = []
    for i in range(1, len(row)):
        k = (k1 * a[i] - row[i]) / a[0]
        if k.denominator != 1:
            return None
        ks.append(k.numerator)
    return CandidateMultiplier(k1=k1, source_vector=tuple(row), ks=tuple(ks),
                               ell=len(row), lam=lam)


def _candidates_at(pk: PublicKey, l: int, lam: Fraction, delta) -> tuple[list[CandidateMultiplier], int]:
    weights = pk.a[:l]
    result = reduce_basis(build_attack_lattice(weights, lam), delta)
    found = []
    for row in result.basis.rows:
        candidate = candidate_from_row(weights, lam, row)
        if candidate is not None:
            found.append(candidate)
    found.sort(key=lambda c: (c.norm_sq, c.k1))
    return found, result.stats.swaps


def iter_multiplier_candidates(pk: PublicKey, attack_config: AttackConfig,
                               stats: AttackReport | None = None) -> Iterator[CandidateMultiplier]:
    """Candidates sweep point by sweep point, deduplicated by k1."""
    seen = set()
    for l, lam in attack_config.sweep_points(pk.params.n):
        found, swaps = _candidates_at(pk, l, lam, attack_config.delta)
        if stats is not None:
            stats.sweep_points_tried += 1
            stats.lll_swaps += swaps
        for candidate in found:
            if candidate.k1 in seen:
                continue
            seen.add(candidate.k1)
            yield candidate


def recover_multiplier_candidates(pk: PublicKey, attack_config: AttackConfig) -> list[CandidateMultiplier]:
    """All sweep points, deduplicated by k1, ordered by source norm then k1, capped."""
    best = {}
    for l, lam in attack_config.sweep_points(pk.params.n):
        found, _ = _candidates_at(pk, l, lam, attack_config.delta)
        for candidate in found:
            current = best.get(candidate.k1)
            if current is None or candidate.norm_sq < current.norm_sq:
                best[candidate.k1] = candidate
    ordered = sorted(best.values(), key=lambda c: (c.norm_sq, c.k1))
    return ordered[:attack_config.max_candidates]


# ==================== EQUIVALENT KEY ====================


def derive_equivalent_key(pk: PublicKey, U_prime: int, p_prime: int) -> EquivalentKey | None:
    if U_prime < 1 or p_prime < 2:
        return None
    b_prime = tuple((a * U_prime) % p_prime for a in pk.a)
    if not is_superincreasing(b_prime):
        return None
    return EquivalentKey(U_prime=U_prime, p_prime=p_prime,
                         b_prime=SuperIncreasingSequence(b_prime))


def simplest_between(lo: Fraction, hi: Fraction) -> Fraction:
    """Rational with the smallest denominator strictly inside (lo, hi), lo >= 0."""
    if not 0 <= lo < hi:
        raise InvalidInputError('need 0 <= lo < hi')
    # x = (p0*y + p1) / (q0*y + q1), y ranging over the current interval
    p0, p1, q0, q1 = 1, 0, 0, 1
    while True:
        whole = math.floor(lo)
        if whole + 1 < hi:
            y = Fraction(whole + 1)
            break
        if lo == whole:
            y = whole + Fraction(1, math.floor(1 / (hi - whole)) + 1)
            break
        p0, p1, q0, q1 = p0 * whole + p1, p0, q0 * whole + q1, q0
        lo, hi = 1 / (hi - whole), 1 / (lo - whole)
    return (p0 * y + p1) / (q0 * y + q1)


def _feasible_interval(a, floors, lo, hi):
    """Sub-interval of (lo, hi) where b'_i(x) = a_i*x - c_i is positive, super-increasing and sums below 1."""
    prefix_a = 0
    prefix_c = 0
    for a_i, c_i in zip(a, floors):
        # a_i*x - c_i > prefix_a*x - prefix_c
        slope = a_i - prefix_a
        offset = c_i - prefix_c
        if slope > 0:
            lo = max(lo, Fraction(offset, slope))
        elif slope < 0:
            hi = min(hi, Fraction(offset, slope))
        elif offset >= 0:
            return None
        # a_i*x - c_i > 0
        lo = max(lo, Fraction(c_i, a_i))
        prefix_a += a_i
        prefix_c += c_i
        if lo >= hi:
            return None
    hi = min(hi, Fraction(1 + prefix_c, prefix_a))
    if lo >= hi:
        return None
    return lo, hi


def refine_trapdoor(pk: PublicKey, k1: int, max_segments: int) -> tuple[int, int] | None:
    """
    Pick U'/p' just above k1/a1 so that b'_i = U'*a_i mod p' is super-increasing.

    Walks right from x = k1/a1 over the segments on which every floor(x*a_i)
    is constant; on each segment the conditions are linear in x.
    """
    a = pk.a
    start = Fraction(k1, a[0])
    floors = [math.floor(start * a_i) for a_i in a]
    breaks = [(Fraction(c + 1, a_i), i) for i, (a_i, c) in enumerate(zip(a, floors))]
    heapq.heapify(breaks)

    for segment in range(max_segments):
        end = breaks[0][0]
        interval = _feasible_interval(a, floors, start, end)
        if interval is not None:
            x = simplest_between(*interval)
            logger.debug('k1=%d: trapdoor found on segment %d (p\'=%d bits)',
                         k1, segment, x.denominator.bit_length())
            return x.numerator, x.denominator
        while breaks[0][0] == end:
            _, i = heapq.heappop(breaks)
            floors[i] += 1
            heapq.heappush(breaks, (Fraction(floors[i] + 1, a[i]), i))
        start = end
    return None


# ==================== STEPS 2-3: DECRYPTION ====================


def attack_decrypt(pk: PublicKey, eq: EquivalentKey, ct: Ciphertext) -> bytes | None:
    params = pk.params
    if ct.d_prime >= params.selector_modulus:
        return None
    selected_pub = select_weights(pk.a, ct.d_prime, params)
    selected = select_weights(eq.b_prime.weights, ct.d_prime, params)
    if not is_superincreasing(sorted(selected)):
        return None

    offsets = -(-sum(selected) // eq.p_prime)
    decoded = []
    for k, c in enumerate(ct.blocks):
        base = (c * eq.U_prime) % eq.p_prime
        block = None
        for m in range(offsets + 1):
            solution = solve_superincreasing_set(selected, base + m * eq.p_prime)
            if solution is None:
                continue
            candidate = MessageBlock(solution.bits)
            if candidate.encrypt_with(selected_pub) == c:
                block = candidate
                break
        if block is None:
            logger.debug('block %d does not decode under U\'=%d p\'=%d', k, eq.U_prime, eq.p_prime)
            return None
        decoded.append(block)
    try:
        return blocks_to_message(decoded, ct.msg_len_bytes)
    except CorruptCiphertextError:
        return None


def _evaluate_candidate(pk: PublicKey, ct: Ciphertext, candidate: CandidateMultiplier,
                        budget: int, report: AttackReport) -> tuple[EquivalentKey, bytes] | None:
    """Derive, decrypt and validate one candidate; None when it yields nothing usable."""
    trapdoors = [(candidate.k1, pk.a[0])]
    refined = refine_trapdoor(pk, candidate.k1, budget)
    if refined is not None and refined not in trapdoors:
        trapdoors.append(refined)

    for index, (U_prime, p_prime) in enumerate(trapdoors):
        eq = derive_equivalent_key(pk, U_prime, p_prime)
        if eq is None:
            continue
        if index == 0:
            report.literal_trapdoor_hits += 1
        plaintext = attack_decrypt(pk, eq, ct)
        if plaintext is None:
            continue
        if encrypt(pk, plaintext) != ct:
            logger.info('k1=%d decoded a plaintext that fails re-encryption', candidate.k1)
            continue
        return eq, plaintext
    return None


def full_attack(pk: PublicKey, ct: Ciphertext, attack_config: AttackConfig | None = None) -> AttackReport:
    """Run all three steps; never raises, the report says what happened."""
    attack_config = attack_config or AttackConfig()
    report = AttackReport(success=False, config_used=attack_config)
    budget = attack_config.segment_budget(pk.params.n)

    try:
        for candidate in iter_multiplier_candidates(pk, attack_config, report):
            if report.candidates_tried >= attack_config.max_candidates:
                break
            report.candidates_tried += 1

            try:
                result = _evaluate_candidate(pk, ct, candidate, budget, report)
            except ValueError as exc:
                logger.warning('k1=%d rejected: %s', candidate.k1, exc)
                continue
            if result is None:
                continue

            report.success = True
            report.validation = True
            report.equivalent_key, report.plaintext = result
            report.winning_candidate = candidate
            logger.info('Attack succeeded with k1=%d after %d candidates',
                        candidate.k1, report.candidates_tried)
            return report
    except ValueError as exc:
        # lattice construction or reduction failed; no further sweep points
        logger.error('Attack aborted: %s', exc)

    logger.info('Attack failed after %d candidates over %d sweep points',
                report.candidates_tried, report.sweep_points_tried)
    return report


# ==================== DIAGNOSTICS ====================


def true_multipliers(pk: PublicKey, sk: PrivateKey) -> list[int]:
    """k_i with a_i*U - k_i*p = b_i for the real trapdoor."""
    U = sk.w_inv
    return [(a * U - b) // sk.p for a, b in zip(pk.a, sk.b)]


def multiplier_diagnostics(pk: PublicKey, sk: PrivateKey) -> dict:
    """
    Check |a_i*k_1 - a_1*k_i| < p / 2^(n-i-1) for i >= 2 using the true k_i.

    Violations are counted and returned, never raised.
    """
    ks = true_multipliers(pk, sk)
    n = len(pk.a)
    violations = []
    for i in range(2, n + 1):
        gap = abs(pk.a[i - 1] * ks[0] - pk.a[0] * ks[i - 1])
        if not gap < Fraction(sk.p) / Fraction(2) ** (n - i - 1):
            violations.append(i)
    if violations:
        logger.debug('Multiplier bound violated at %d indices', len(violations))
    return {
        'k1': ks[0],
        'checked': n - 1,
        'violations': len(violations),
        'violating_indices': violations,
    }
