"""
Environment-driven configuration.

Loads env.<KNAPSACK_ENV> (falls back to .env) and exposes typed defaults.
CLI flags override anything read here.
"""

import os
from fractions import Fraction
from pathlib import Path

from dotenv import load_dotenv

ROOT = Path(__file__).resolve().parent

# Load environment-specific configuration
ENV = os.getenv('KNAPSACK_ENV', 'development')
env_file = ROOT / f'env.{ENV}'

if env_file.exists():
    load_dotenv(env_file)
else:
    load_dotenv()  # Fallback to .env


def _int_list(value):
    return [int(part) for part in value.split(',') if part.strip()]


LOG_LEVEL = os.getenv('KNAPSACK_LOG_LEVEL', 'INFO').upper()

# Lattice reduction
LLL_DELTA = Fraction(os.getenv('KNAPSACK_LLL_DELTA', '3/4'))

# Scheme parameters (full-size scheme by default)
DEFAULT_N = int(os.getenv('KNAPSACK_N', 1360))
DEFAULT_SUBSETS = int(os.getenv('KNAPSACK_SUBSETS', 8))
DEFAULT_GROUP_SIZE = int(os.getenv('KNAPSACK_GROUP_SIZE', 170))
DEFAULT_TAKE = int(os.getenv('KNAPSACK_TAKE', 128))
DEFAULT_SLACK_BITS = int(os.getenv('KNAPSACK_SLACK_BITS', 8))
DEFAULT_HASH_ID = os.getenv('KNAPSACK_HASH_ID', 'sha256-ctr4')

# Attack sweeps
ATTACK_ELL_SWEEP = _int_list(os.getenv('KNAPSACK_ATTACK_ELL_SWEEP', '4,6,8,10,12'))
ATTACK_LAMBDA_OFFSETS = _int_list(
    os.getenv('KNAPSACK_ATTACK_LAMBDA_OFFSETS',
              '0,-1,1,-2,2,-3,3,-4,4,-5,5,-6,6,-7,7,-8'))
ATTACK_MAX_CANDIDATES = int(os.getenv('KNAPSACK_ATTACK_MAX_CANDIDATES', 256))
# 0 means 2(n + 1) segments
ATTACK_MAX_SEGMENTS = int(os.getenv('KNAPSACK_ATTACK_MAX_SEGMENTS', 0))

# Benchmark grid
BENCH_N_VALUES = _int_list(os.getenv('KNAPSACK_BENCH_N_VALUES', '16,24,32'))
BENCH_TRIALS = int(os.getenv('KNAPSACK_BENCH_TRIALS', 50))
BENCH_SEED_BASE = int(os.getenv('KNAPSACK_BENCH_SEED_BASE', 20240601))
BENCH_WORKERS = int(os.getenv('KNAPSACK_BENCH_WORKERS', 1))

DEMO_SEED = int(os.getenv('KNAPSACK_DEMO_SEED', 7))
