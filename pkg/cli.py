#!/usr/bin/env python3
"""
Command-line entry point for the knapsack toolkit.

Usage:
  # Desk-scale key pair
  python cli.py keygen --n 16 --subsets 2 --group-size 8 --take 4 --seed 1 \
      --pub pub.json --priv priv.json

  # Encrypt / decrypt a file
  python cli.py encrypt --pub pub.json --in message.bin --out ct.json
  python cli.py decrypt --priv priv.json --in ct.json --out message.out

  # Break it with the public key only
  python cli.py attack --pubkey pub.json --ciphertext ct.json --json-report report.json

  # End-to-end narrative run
  python cli.py demo --seed 7

Exit codes: 0 success, 1 operation failure, 2 usage error.
"""

from __future__ import annotations

import argparse
import logging
import sys
from fractions import Fraction
from pathlib import Path

import config
from attack import AttackConfig, full_attack, multiplier_diagnostics
from bench import TrialGrid, measure_lll_scaling, run_grid, scaling_slope, summarize, write_csv
from cryptosystem import SchemeParams, decrypt, encrypt, keygen, selection_is_superincreasing
from diophantine import solve_sda
from errors import FormatError
from formats import (
    attack_report_to_dict,
    basis_from_dict,
    basis_to_dict,
    check_ciphertext_fits,
    ciphertext_from_dict,
    ciphertext_to_dict,
    private_key_from_dict,
    private_key_to_dict,
    public_key_from_dict,
    public_key_to_dict,
    read_json,
    sda_problem_from_dict,
    sda_solution_to_dict,
    write_json,
)
from knapsack_core import density
from lattice import reduce_basis

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_USAGE = 2


class UsageError(Exception):
    """Flags are individually valid but do not fit together."""


def _read_bytes(path) -> bytes:
    path = Path(path)
    if not path.exists():
        raise FormatError(str(path), 'file not found')
    return path.read_bytes()


def _params_from_args(args) -> SchemeParams:
    try:
        return SchemeParams(n=args.n, subsets=args.subsets, group_size=args.group_size,
                            take=args.take, slack_bits=args.slack_bits)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def _delta_from_args(args) -> Fraction:
    try:
        return Fraction(args.delta)
    except (ValueError, ZeroDivisionError) as exc:
        raise UsageError(f'--delta: {exc}') from exc


def _attack_config_from_args(args) -> AttackConfig:
    kwargs = {}
    if args.ell_sweep:
        kwargs['ell_sweep'] = tuple(args.ell_sweep)
    if args.lambda_exp_range:
        lo, hi = args.lambda_exp_range
        if lo > hi:
            raise UsageError('--lambda-exp-range needs LO <= HI')
        kwargs['lambda_sweep'] = tuple(Fraction(2) ** e for e in range(lo, hi + 1))
    if args.max_candidates is not None:
        kwargs['max_candidates'] = args.max_candidates
    try:
        return AttackConfig(**kwargs)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


# ==================== COMMANDS ====================


def cmd_keygen(args) -> int:
    params = _params_from_args(args)
    pk, sk = keygen(params, args.seed)
    write_json(args.pub, public_key_to_dict(pk))
    write_json(args.priv, private_key_to_dict(sk, params))
    print(f'✅ Key pair written: {args.pub}, {args.priv}')
    print(f'   n={params.n} subsets={params.subsets} g={params.group_size} t={params.take}')
    print(f'   modulus bits: {sk.p.bit_length()}, public density: {float(density(pk.a)):.4f}')
    return EXIT_OK


def cmd_encrypt(args) -> int:
    pk = public_key_from_dict(read_json(args.pub))
    message = _read_bytes(args.infile)
    ct = encrypt(pk, message)
    write_json(args.out, ciphertext_to_dict(ct))
    print(f'✅ Encrypted {len(message)} bytes into {len(ct.blocks)} block(s): {args.out}')
    return EXIT_OK


def _decrypt_params(args, key_params: SchemeParams | None, key_size: int) -> SchemeParams:
    if args.pub:
        params = public_key_from_dict(read_json(args.pub)).params
        if key_params is not None and key_params != params:
            raise UsageError('--pub params differ from the private key params')
    elif key_params is not None:
        params = key_params
    else:
        params = SchemeParams()
    if params.n != key_size:
        raise UsageError(f'private key has {key_size} weights, params say {params.n}; pass --pub')
    return params


def cmd_decrypt(args) -> int:
    sk, key_params = private_key_from_dict(read_json(args.priv))
    params = _decrypt_params(args, key_params, len(sk.b))
    ct = check_ciphertext_fits(ciphertext_from_dict(read_json(args.infile)), params)
    try:
        message = decrypt(sk, params, ct)
    except ValueError as exc:
        print(f'❌ Decryption failed: {exc}')
        return EXIT_FAILURE
    Path(args.out).write_bytes(message)
    print(f'✅ Decrypted {len(message)} bytes: {args.out}')
    return EXIT_OK


def cmd_attack(args) -> int:
    pk = public_key_from_dict(read_json(args.pubkey))
    ct = check_ciphertext_fits(ciphertext_from_dict(read_json(args.ciphertext)), pk.params)
    attack_config = _attack_config_from_args(args)

    report = full_attack(pk, ct, attack_config)
    if args.json_report:
        write_json(args.json_report, attack_report_to_dict(report))

    if args.privkey:
        sk, _ = private_key_from_dict(read_json(args.privkey))
        diagnostics = multiplier_diagnostics(pk, sk)
        print(f"   true k1={diagnostics['k1']}, multiplier bound violations: "
              f"{diagnostics['violations']}/{diagnostics['checked']}")

    print(f'Candidates tried: {report.candidates_tried} over {report.sweep_points_tried} sweep point(s)')
    if not report.success:
        print('❌ ATTACK FAILED')
        return EXIT_FAILURE

    eq = report.equivalent_key
    print(f"✅ ATTACK SUCCEEDED (U'={eq.U_prime}, p'={eq.p_prime})")
    if args.out:
        Path(args.out).write_bytes(report.plaintext)
        print(f'   plaintext written: {args.out}')
    return EXIT_OK


def cmd_lll(args) -> int:
    basis = basis_from_dict(read_json(args.infile))
    result = reduce_basis(basis, _delta_from_args(args))
    write_json(args.out, basis_to_dict(result.basis))
    print(f'✅ Reduced {basis.m}x{basis.dim} basis '
          f'({result.stats.swaps} swaps, {result.stats.size_reductions} size reductions): {args.out}')
    return EXIT_OK


def cmd_sda(args) -> int:
    problem = sda_problem_from_dict(read_json(args.infile))
    solution = solve_sda(problem, _delta_from_args(args))
    write_json(args.out, sda_solution_to_dict(solution, problem))
    if solution is None:
        print(f'❌ No approximation found (Q={problem.Q})')
        return EXIT_FAILURE
    print(f'✅ q={solution.q}: {args.out}')
    return EXIT_OK


def cmd_bench(args) -> int:
    try:
        grid = TrialGrid(
            n_values=tuple(args.n_values),
            trials_per_point=args.trials,
            seed_base=args.seed_base,
            workers=args.workers,
        )
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    records = run_grid(grid)
    if args.csv:
        write_csv(records, args.csv)
        print(f'Records written: {args.csv}')

    print(' n  | trials | success | rate  | median ms | selection_ok')
    for n, row in summarize(records).items():
        print(f" {n:<3}| {row['trials']:6d} | {row['successes']:7d} | {float(row['rate']):.3f} "
              f"| {row['median_ms']:9.1f} | {row['selection_ok']}")

    if args.scaling:
        points = measure_lll_scaling(args.scaling)
        slope = scaling_slope(points)
        print(f"LLL swaps by dimension: {', '.join(f'{d}:{s}' for d, s in points)}")
        if slope is not None:
            print(f'log-log slope: {slope:.2f}')
    return EXIT_OK


def cmd_demo(args) -> int:
    try:
        params = SchemeParams.desk(n=args.n, take=args.n // 4)
    except ValueError as exc:
        raise UsageError(f'--n: {exc}') from exc
    print(f'Desk instance: n={params.n}, {params.subsets} groups of {params.group_size}, '
          f'take {params.take}, seed {args.seed}')

    pk, sk = keygen(params, args.seed)
    message = args.message.encode()
    ct = encrypt(pk, message)
    print(f"1. Public key generated, modulus {sk.p.bit_length()} bits")
    print(f"2. Encrypted {len(message)} bytes into {len(ct.blocks)} blocks (D'={ct.d_prime})")
    print(f"   selected private weights super-increasing in order: "
          f"{selection_is_superincreasing(sk.b, ct.d_prime, params)}")

    report = full_attack(pk, ct, AttackConfig())
    print(f'3. Lattice attack: {report.candidates_tried} candidate(s), {report.lll_swaps} LLL swaps')
    if not report.success:
        print('❌ ATTACK FAILED')
        return EXIT_FAILURE

    eq = report.equivalent_key
    print(f"   equivalent key U'={eq.U_prime} p'={eq.p_prime} (true U={sk.w_inv} p={sk.p})")
    print(f'   recovered: {report.plaintext!r}')
    print('✅ ATTACK SUCCEEDED')
    return EXIT_OK


# ==================== PARSER ====================


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(description='Knapsack cryptosystem and lattice attack toolkit')
    parser.add_argument('--log-level', default=config.LOG_LEVEL,
                        help='Logging level (default from KNAPSACK_LOG_LEVEL)')
    sub = parser.add_subparsers(dest='command', required=True)

    p = sub.add_parser('keygen', help='Generate a key pair')
    p.add_argument('--n', type=int, default=config.DEFAULT_N)
    p.add_argument('--subsets', type=int, default=config.DEFAULT_SUBSETS)
    p.add_argument('--group-size', type=int, default=config.DEFAULT_GROUP_SIZE)
    p.add_argument('--take', type=int, default=config.DEFAULT_TAKE)
    p.add_argument('--slack-bits', type=int, default=config.DEFAULT_SLACK_BITS)
    p.add_argument('--seed', type=int, required=True)
    p.add_argument('--pub', required=True, help='Public key output file')
    p.add_argument('--priv', required=True, help='Private key output file')
    p.set_defaults(handler=cmd_keygen)

    p = sub.add_parser('encrypt', help='Encrypt a file with a public key')
    p.add_argument('--pub', required=True)
    p.add_argument('--in', dest='infile', required=True, help='Message file (raw bytes)')
    p.add_argument('--out', required=True, help='Ciphertext JSON output')
    p.set_defaults(handler=cmd_encrypt)

    p = sub.add_parser('decrypt', help='Decrypt a ciphertext with a private key')
    p.add_argument('--priv', required=True)
    p.add_argument('--pub', help='Public key supplying params when the private key file has none')
    p.add_argument('--in', dest='infile', required=True, help='Ciphertext JSON')
    p.add_argument('--out', required=True, help='Recovered message file')
    p.set_defaults(handler=cmd_decrypt)

    p = sub.add_parser('attack', help='Recover the plaintext from the public key alone')
    p.add_argument('--pubkey', required=True)
    p.add_argument('--ciphertext', required=True)
    p.add_argument('--ell-sweep', type=int, nargs='+', help='Lattice sizes l to try')
    p.add_argument('--lambda-exp-range', type=int, nargs=2, metavar=('LO', 'HI'),
                   help='Try lambda = 2^e for every e in [LO, HI]')
    p.add_argument('--max-candidates', type=int)
    p.add_argument('--json-report', help='Write the attack report here')
    p.add_argument('--out', help='Write the recovered plaintext here')
    p.add_argument('--privkey', help='Known private key, for multiplier diagnostics only')
    p.set_defaults(handler=cmd_attack)

    p = sub.add_parser('lll', help='LLL-reduce a matrix file')
    p.add_argument('--in', dest='infile', required=True)
    p.add_argument('--out', required=True)
    p.add_argument('--delta', default=str(config.LLL_DELTA))
    p.set_defaults(handler=cmd_lll)

    p = sub.add_parser('sda', help='Solve a simultaneous Diophantine approximation problem')
    p.add_argument('--in', dest='infile', required=True)
    p.add_argument('--out', required=True)
    p.add_argument('--delta', default=str(config.LLL_DELTA))
    p.set_defaults(handler=cmd_sda)

    p = sub.add_parser('bench', help='Run the seeded attack benchmark grid')
    p.add_argument('--n-values', type=int, nargs='+', default=config.BENCH_N_VALUES)
    p.add_argument('--trials', type=int, default=config.BENCH_TRIALS)
    p.add_argument('--seed-base', type=int, default=config.BENCH_SEED_BASE)
    p.add_argument('--workers', type=int, default=config.BENCH_WORKERS)
    p.add_argument('--csv', help='Write per-trial records here')
    p.add_argument('--scaling', type=int, nargs='+', metavar='DIM',
                   help='Also report LLL swap scaling over these dimensions')
    p.set_defaults(handler=cmd_bench)

    p = sub.add_parser('demo', help='keygen, encrypt and attack a desk-scale instance')
    p.add_argument('--seed', type=int, default=config.DEMO_SEED)
    p.add_argument('--n', type=int, default=16, help='Even key size, split into two groups')
    p.add_argument('--message', default='knapsack')
    p.set_defaults(handler=cmd_demo)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code in (0, None) else EXIT_USAGE

    logging.basicConfig(
        level=getattr(logging, str(args.log_level).upper(), logging.INFO),
        format='%(asctime)s %(levelname)s %(name)s: %(message)s',
    )

    try:
        return args.handler(args)
    except (FormatError, UsageError) as exc:
        print(f'❌ {exc}', file=sys.stderr)
        return EXIT_USAGE
    except ValueError as exc:
        print(f'❌ {exc}', file=sys.stderr)
        return EXIT_FAILURE


if __name__ == '__main__':
    sys.exit(main())
