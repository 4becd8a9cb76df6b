"""
JSON file formats for keys, ciphertexts, matrices and reports.

Big integers are written as decimal strings and rationals as "p/q" or "p".
Every parse error raises FormatError naming the offending field.
"""

from __future__ import annotations

import json
import logging
import math
from fractions import Fraction
from pathlib import Path
from typing import Any

from attack import AttackReport
from cryptosystem import Ciphertext, PrivateKey, PublicKey, SchemeParams
from diophantine import SdaProblem, SdaSolution
from errors import FormatError
from knapsack_core import SuperIncreasingSequence
from lattice import LatticeBasis

logger = logging.getLogger(__name__)

PARAM_FIELDS = ('n', 'subsets', 'group_size', 'take', 'slack_bits')


def serialize(obj: Any) -> Any:
    """Make ints, Fractions, bytes and tuples JSON-safe."""
    if isinstance(obj, bool):
        return obj
    if isinstance(obj, dict):
        return {k: serialize(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [serialize(item) for item in obj]
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, Fraction):
        return format_rational(obj)
    if isinstance(obj, bytes):
        return obj.hex()
    return obj


def format_rational(value: Fraction) -> str:
    value = Fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f'{value.numerator}/{value.denominator}'


# ==================== FIELD PARSERS ====================


def _require(data: dict, key: str, context: str):
    if not isinstance(data, dict):
        raise FormatError(context or 'document', 'expected a JSON object')
    if key not in data:
        raise FormatError(f'{context}.{key}' if context else key, 'missing')
    return data[key]


def parse_int(value, field: str) -> int:
    if isinstance(value, bool):
        raise FormatError(field, 'expected an integer')
    if isinstance(value, int):
        return value
    if isinstance(value, str):
        try:
            return int(value.strip())
        except ValueError:
            pass
    raise FormatError(field, f'expected a decimal integer, got {value!r}')


def parse_rational(value, field: str) -> Fraction:
    if isinstance(value, int) and not isinstance(value, bool):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError):
            pass
    raise FormatError(field, f'expected a rational "p/q", got {value!r}')


def parse_int_list(value, field: str) -> list[int]:
    if not isinstance(value, list):
        raise FormatError(field, 'expected a list')
    return [parse_int(item, f'{field}[{i}]') for i, item in enumerate(value)]


# ==================== KEYS ====================


def params_to_dict(params: SchemeParams) -> dict:
    data = {name: getattr(params, name) for name in PARAM_FIELDS}
    data['hash_id'] = params.hash_id
    return data


def params_from_dict(data) -> SchemeParams:
    values = {name: parse_int(_require(data, name, 'params'), f'params.{name}')
              for name in PARAM_FIELDS}
    hash_id = data.get('hash_id', 'sha256-ctr4')
    try:
        return SchemeParams(hash_id=hash_id, **values)
    except ValueError as exc:
        raise FormatError('params', str(exc)) from exc


def public_key_to_dict(pk: PublicKey) -> dict:
    return {'params': params_to_dict(pk.params), 'a': serialize(pk.a)}


def public_key_from_dict(data) -> PublicKey:
    params = params_from_dict(_require(data, 'params', ''))
    a = parse_int_list(_require(data, 'a', ''), 'a')
    try:
        return PublicKey(a=tuple(a), params=params)
    except ValueError as exc:
        raise FormatError('a', str(exc)) from exc


def private_key_to_dict(sk: PrivateKey, params: SchemeParams) -> dict:
    return {
        'params': params_to_dict(params),
        'b': serialize(sk.b.weights),
        'w': str(sk.w),
        'w_inv': str(sk.w_inv),
        'p': str(sk.p),
    }


def private_key_from_dict(data) -> tuple[PrivateKey, SchemeParams | None]:
    """Params are optional; files without them get None and need params from elsewhere."""
    params = None
    if isinstance(data, dict) and 'params' in data:
        params = params_from_dict(data['params'])
    b = parse_int_list(_require(data, 'b', ''), 'b')
    w = parse_int(_require(data, 'w', ''), 'w')
    w_inv = parse_int(_require(data, 'w_inv', ''), 'w_inv')
    p = parse_int(_require(data, 'p', ''), 'p')
    try:
        weights = SuperIncreasingSequence(tuple(b))
    except ValueError as exc:
        raise FormatError('b', str(exc)) from exc
    if p <= weights.total():
        raise FormatError('p', 'modulus must exceed the sum of private weights')
    if not 1 <= w < p or math.gcd(w, p) != 1:
        raise FormatError('w', 'multiplier must lie in [1, p) and be coprime to p')
    if (w * w_inv) % p != 1:
        raise FormatError('w_inv', 'not the inverse of w mod p')
    return PrivateKey(b=weights, w=w, w_inv=w_inv, p=p), params


# ==================== CIPHERTEXT ====================


def ciphertext_to_dict(ct: Ciphertext) -> dict:
    return {
        'blocks': serialize(ct.blocks),
        'd_prime': str(ct.d_prime),
        'msg_len_bytes': ct.msg_len_bytes,
    }


def ciphertext_from_dict(data) -> Ciphertext:
    blocks = parse_int_list(_require(data, 'blocks', ''), 'blocks')
    d_prime = parse_int(_require(data, 'd_prime', ''), 'd_prime')
    msg_len = parse_int(_require(data, 'msg_len_bytes', ''), 'msg_len_bytes')
    try:
        return Ciphertext(blocks=tuple(blocks), d_prime=d_prime, msg_len_bytes=msg_len)
    except ValueError as exc:
        raise FormatError('ciphertext', str(exc)) from exc


def check_ciphertext_fits(ct: Ciphertext, params: SchemeParams) -> Ciphertext:
    """Reject a ciphertext whose selector cannot come from these params."""
    if ct.d_prime >= params.selector_modulus:
        raise FormatError('d_prime', f'must be below {params.group_size}!')
    return ct


# ==================== MATRIX / SDA ====================


def basis_to_dict(basis: LatticeBasis) -> dict:
    return {'rows': [[format_rational(x) for x in row] for row in basis.rows]}


def basis_from_dict(data) -> LatticeBasis:
    rows = _require(data, 'rows', '')
    if not isinstance(rows, list) or not rows:
        raise FormatError('rows', 'expected a non-empty list of rows')
    parsed = []
    for i, row in enumerate(rows):
        if not isinstance(row, list):
            raise FormatError(f'rows[{i}]', 'expected a list')
        parsed.append(tuple(parse_rational(x, f'rows[{i}][{j}]') for j, x in enumerate(row)))
    try:
        return LatticeBasis(tuple(parsed))
    except ValueError as exc:
        raise FormatError('rows', str(exc)) from exc


def sda_problem_from_dict(data) -> SdaProblem:
    alphas = _require(data, 'alphas', '')
    if not isinstance(alphas, list):
        raise FormatError('alphas', 'expected a list')
    parsed = tuple(parse_rational(a, f'alphas[{i}]') for i, a in enumerate(alphas))
    epsilon = parse_rational(_require(data, 'epsilon', ''), 'epsilon')
    q_bound = data.get('Q')
    if q_bound is not None:
        q_bound = parse_int(q_bound, 'Q')
    try:
        return SdaProblem(alphas=parsed, epsilon=epsilon, Q=q_bound)
    except ValueError as exc:
        raise FormatError('alphas', str(exc)) from exc


def sda_solution_to_dict(solution: SdaSolution | None, problem: SdaProblem) -> dict:
    if solution is None:
        return {'found': False, 'Q': str(problem.Q)}
    return {
        'found': True,
        'Q': str(problem.Q),
        'q': str(solution.q),
        'p': serialize(solution.ps),
        'quality': format_rational(solution.quality),
        'row_norm_sq': format_rational(solution.row_norm_sq),
    }


# ==================== REPORTS ====================


def attack_report_to_dict(report: AttackReport) -> dict:
    cfg = report.config_used
    data = {
        'success': report.success,
        'validation': report.validation,
        'candidates_tried': report.candidates_tried,
        'sweep_points_tried': report.sweep_points_tried,
        'lll_swaps': report.lll_swaps,
        'config': {
            'ell_sweep': list(cfg.ell_sweep),
            'lambda_offsets': list(cfg.lambda_offsets),
            'lambda_sweep': None if cfg.lambda_sweep is None else serialize(cfg.lambda_sweep),
            'max_candidates': cfg.max_candidates,
            'delta': format_rational(cfg.delta),
        },
        'equivalent_key': None,
        'plaintext_hex': None,
    }
    if report.equivalent_key is not None:
        eq = report.equivalent_key
        data['equivalent_key'] = {
            'U_prime': str(eq.U_prime),
            'p_prime': str(eq.p_prime),
            'b_prime': serialize(eq.b_prime.weights),
        }
    if report.winning_candidate is not None:
        data['k1'] = str(report.winning_candidate.k1)
    if report.plaintext is not None:
        data['plaintext_hex'] = report.plaintext.hex()
    return data


# ==================== FILE I/O ====================


def read_json(path) -> Any:
    path = Path(path)
    if not path.exists():
        raise FormatError(str(path), 'file not found')
    try:
        return json.loads(path.read_text())
    except json.JSONDecodeError as exc:
        raise FormatError(str(path), f'invalid JSON ({exc.msg} at line {exc.lineno})') from exc


def write_json(path, data: dict) -> None:
    Path(path).write_text(json.dumps(data, indent=2) + '\n')
    logger.debug('Wrote %s', path)
