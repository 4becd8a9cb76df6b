"""
Seeded experiment harness for the lattice attack.

Each trial is keygen -> random message -> encrypt -> full_attack, fully
determined by (seed_base, n, trial). Records are identical across runs
except for wall_ms.
"""

from __future__ import annotations

import csv
import logging
import math
import random
import statistics
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

import config
from attack import AttackConfig, full_attack
from cryptosystem import SchemeParams, encrypt, keygen, selection_is_superincreasing
from errors import InvalidInputError
from lattice import LatticeBasis, reduce_basis

logger = logging.getLogger(__name__)

CSV_COLUMNS = ['n', 'seed', 'success', 'wall_ms', 'candidates', 'selection_ok', 'swaps']


@dataclass(frozen=True)
class TrialGrid:
    n_values: tuple[int, ...] = tuple(config.BENCH_N_VALUES)
    trials_per_point: int = config.BENCH_TRIALS
    seed_base: int = config.BENCH_SEED_BASE
    attack_config: AttackConfig = field(default_factory=AttackConfig)
    message_blocks: int = 2
    workers: int = config.BENCH_WORKERS

    def __post_init__(self):
        if self.trials_per_point < 1:
            raise InvalidInputError('trials_per_point must be at least 1')
        if not self.n_values:
            raise InvalidInputError('at least one n value is required')
        if any(n < 4 or n % 2 for n in self.n_values):
            raise InvalidInputError('n values must be even and at least 4')
        if self.message_blocks < 1:
            raise InvalidInputError('message_blocks must be at least 1')

    def trial_seed(self, n: int, trial: int) -> int:
        return self.seed_base + 1000 * n + trial


@dataclass(frozen=True)
class TrialRecord:
    n: int
    seed: int
    success: bool
    wall_ms: int
    candidates: int
    selection_ok: bool
    swaps: int
    validated: bool = False

    def deterministic_fields(self) -> tuple:
        return (self.n, self.seed, self.success, self.candidates,
                self.selection_ok, self.swaps, self.validated)


def desk_params(n: int) -> SchemeParams:
    """Two subsets of n/2 weights, half of each group kept."""
    group_size = n // 2
    return SchemeParams(n=n, subsets=2, group_size=group_size,
                        take=max(1, group_size // 2), slack_bits=config.DEFAULT_SLACK_BITS)


def trial_message(params: SchemeParams, seed: int, blocks: int) -> bytes:
    length = max(1, blocks * params.block_bits // 8)
    return random.Random(f'message:{seed}').randbytes(length)


def run_trial(n: int, seed: int, attack_config: AttackConfig, message_blocks: int = 2) -> TrialRecord:
    params = desk_params(n)
    pk, sk = keygen(params, seed)
    message = trial_message(params, seed, message_blocks)
    ct = encrypt(pk, message)

    started = time.perf_counter()
    report = full_attack(pk, ct, attack_config)
    wall_ms = int((time.perf_counter() - started) * 1000)

    if report.success and report.plaintext != message:
        # re-encryption matched, so the scheme itself is ambiguous for this message
        logger.warning('n=%d seed=%d: validated plaintext differs from the original', n, seed)

    return TrialRecord(
        n=n,
        seed=seed,
        success=report.success,
        wall_ms=wall_ms,
        candidates=report.candidates_tried,
        selection_ok=selection_is_superincreasing(sk.b, ct.d_prime, params),
        swaps=report.lll_swaps,
        validated=report.validation,
    )


def _run_trial_args(args) -> TrialRecord:
    return run_trial(*args)


def run_grid(grid: TrialGrid) -> list[TrialRecord]:
    jobs = [
        (n, grid.trial_seed(n, trial), grid.attack_config, grid.message_blocks)
        for n in grid.n_values
        for trial in range(grid.trials_per_point)
    ]
    logger.info('Running %d trials over n=%s', len(jobs), list(grid.n_values))

    if grid.workers > 1:
        with ProcessPoolExecutor(max_workers=grid.workers) as pool:
            records = list(pool.map(_run_trial_args, jobs))
    else:
        records = []
        for job in jobs:
            record = _run_trial_args(job)
            logger.debug('n=%d seed=%d success=%s', record.n, record.seed, record.success)
            records.append(record)

    return sorted(records, key=lambda r: (r.n, r.seed))


def summarize(records: Iterable[TrialRecord]) -> dict[int, dict]:
    """Per-n success rate (exact) and median wall time."""
    by_n: dict[int, list[TrialRecord]] = {}
    for record in records:
        by_n.setdefault(record.n, []).append(record)

    table = {}
    for n in sorted(by_n):
        group = by_n[n]
        successes = sum(1 for r in group if r.success)
        table[n] = {
            'trials': len(group),
            'successes': successes,
            'rate': Fraction(successes, len(group)),
            'median_ms': statistics.median(r.wall_ms for r in group),
            'selection_ok': sum(1 for r in group if r.selection_ok),
        }
    return table


def write_csv(records: Sequence[TrialRecord], path) -> None:
    with open(path, 'w', newline='') as handle:
        writer = csv.DictWriter(handle, fieldnames=CSV_COLUMNS, extrasaction='ignore')
        writer.writeheader()
        for record in records:
            row = asdict(record)
            row['success'] = int(record.success)
            row['selection_ok'] = int(record.selection_ok)
            writer.writerow(row)


# ==================== LLL SCALING ====================


def random_basis(dim: int, bits: int, seed: int) -> LatticeBasis:
    """Knapsack-style basis: identity plus a column of random weights."""
    rng = random.Random(f'basis:{dim}:{seed}')
    rows = []
    for i in range(dim):
        row = [0] * (dim + 1)
        row[i] = 1
        row[dim] = rng.getrandbits(bits) | 1
        rows.append(row)
    return LatticeBasis.from_rows(rows)


def measure_lll_scaling(dims: Sequence[int], bits: int = 32, seed: int = 0) -> list[tuple[int, int]]:
    """(dimension, swap count) for one random basis per dimension."""
    points = []
    for dim in dims:
        result = reduce_basis(random_basis(dim, bits, seed))
        points.append((dim, result.stats.swaps))
    return points


def scaling_slope(points: Sequence[tuple[int, int]]) -> float | None:
    """Least-squares slope of log(swaps) against log(dim); None with fewer than two usable points."""
    usable = [(math.log(d), math.log(s)) for d, s in points if d > 0 and s > 0]
    if len(usable) < 2 or len({x for x, _ in usable}) < 2:
        return None
    xs, ys = zip(*usable)
    return statistics.linear_regression(xs, ys).slope
