"""
End-to-end tests of the command-line surface and its exit codes.
"""

import json

import pytest

from cli import EXIT_FAILURE, EXIT_OK, EXIT_USAGE, main

DESK_FLAGS = ['--n', '16', '--subsets', '2', '--group-size', '8', '--take', '4']


@pytest.fixture
def desk_files(tmp_path):
    pub = tmp_path / 'pub.json'
    priv = tmp_path / 'priv.json'
    code = main(['keygen', *DESK_FLAGS, '--seed', '7', '--pub', str(pub), '--priv', str(priv)])
    assert code == EXIT_OK
    return tmp_path, pub, priv


def test_keygen_is_deterministic(desk_files):
    tmp_path, pub, priv = desk_files
    pub2 = tmp_path / 'pub2.json'
    priv2 = tmp_path / 'priv2.json'
    main(['keygen', *DESK_FLAGS, '--seed', '7', '--pub', str(pub2), '--priv', str(priv2)])
    assert pub.read_text() == pub2.read_text()
    assert priv.read_text() == priv2.read_text()


def test_keygen_inconsistent_params(tmp_path):
    code = main(['keygen', '--n', '16', '--subsets', '3', '--group-size', '8', '--take', '4',
                 '--seed', '1', '--pub', str(tmp_path / 'p'), '--priv', str(tmp_path / 's')])
    assert code == EXIT_USAGE


def test_encrypt_decrypt_round_trip(desk_files):
    tmp_path, pub, priv = desk_files
    message = tmp_path / 'message.bin'
    message.write_bytes(b'hello, lattice')
    ct = tmp_path / 'ct.json'
    out = tmp_path / 'out.bin'

    assert main(['encrypt', '--pub', str(pub), '--in', str(message), '--out', str(ct)]) == EXIT_OK
    assert all(isinstance(c, str) for c in json.loads(ct.read_text())['blocks'])
    assert main(['decrypt', '--priv', str(priv), '--in', str(ct), '--out', str(out)]) == EXIT_OK
    assert out.read_bytes() == message.read_bytes()


def test_decrypt_with_mismatched_key(desk_files):
    tmp_path, pub, _ = desk_files
    other_priv = tmp_path / 'other_priv.json'
    main(['keygen', '--n', '24', '--subsets', '2', '--group-size', '12', '--take', '6',
          '--seed', '1', '--pub', str(tmp_path / 'other_pub.json'), '--priv', str(other_priv)])
    message = tmp_path / 'm.bin'
    message.write_bytes(b'abc')
    ct = tmp_path / 'ct.json'
    main(['encrypt', '--pub', str(pub), '--in', str(message), '--out', str(ct)])

    code = main(['decrypt', '--priv', str(other_priv), '--in', str(ct), '--out', str(tmp_path / 'o')])
    assert code == EXIT_FAILURE


def test_missing_file_is_usage_error(tmp_path):
    code = main(['encrypt', '--pub', str(tmp_path / 'nope.json'), '--in', str(tmp_path / 'm'),
                 '--out', str(tmp_path / 'ct.json')])
    assert code == EXIT_USAGE


def test_malformed_key_is_usage_error(tmp_path, capsys):
    pub = tmp_path / 'pub.json'
    pub.write_text('{"params": {"n": 16}}')
    message = tmp_path / 'm.bin'
    message.write_bytes(b'x')
    code = main(['encrypt', '--pub', str(pub), '--in', str(message), '--out', str(tmp_path / 'c')])
    assert code == EXIT_USAGE
    assert 'params.subsets' in capsys.readouterr().err


def test_unknown_command():
    assert main(['frobnicate']) == EXIT_USAGE


def test_attack_command(desk_files):
    tmp_path, pub, _ = desk_files
    message = tmp_path / 'm.bin'
    message.write_bytes(b'knapsack')
    ct = tmp_path / 'ct.json'
    report = tmp_path / 'report.json'
    recovered = tmp_path / 'recovered.bin'
    main(['encrypt', '--pub', str(pub), '--in', str(message), '--out', str(ct)])

    code = main(['attack', '--pubkey', str(pub), '--ciphertext', str(ct),
                 '--json-report', str(report), '--out', str(recovered)])
    assert code == EXIT_OK
    data = json.loads(report.read_text())
    assert data['success'] is True
    assert data['validation'] is True
    assert recovered.read_bytes() == b'knapsack'


def test_attack_bad_lambda_range(desk_files):
    tmp_path, pub, _ = desk_files
    message = tmp_path / 'm.bin'
    message.write_bytes(b'k')
    ct = tmp_path / 'ct.json'
    main(['encrypt', '--pub', str(pub), '--in', str(message), '--out', str(ct)])
    code = main(['attack', '--pubkey', str(pub), '--ciphertext', str(ct),
                 '--lambda-exp-range', '3', '1'])
    assert code == EXIT_USAGE


def test_lll_command(tmp_path):
    matrix = tmp_path / 'matrix.json'
    matrix.write_text(json.dumps({'rows': [['1', '0'], ['1000', '1']]}))
    out = tmp_path / 'reduced.json'
    assert main(['lll', '--in', str(matrix), '--out', str(out)]) == EXIT_OK
    assert json.loads(out.read_text()) == {'rows': [['1', '0'], ['0', '1']]}


def test_lll_bad_delta(tmp_path):
    matrix = tmp_path / 'matrix.json'
    matrix.write_text(json.dumps({'rows': [['1', '0'], ['0', '1']]}))
    assert main(['lll', '--in', str(matrix), '--out', str(tmp_path / 'o'), '--delta', 'x']) == EXIT_USAGE


def test_sda_command(tmp_path):
    problem = tmp_path / 'sda.json'
    problem.write_text(json.dumps({'alphas': ['3/10'], 'epsilon': '1/4'}))
    out = tmp_path / 'solution.json'
    assert main(['sda', '--in', str(problem), '--out', str(out)]) == EXIT_OK
    assert json.loads(out.read_text())['q'] == '3'


def test_bench_command(tmp_path, capsys):
    records = tmp_path / 'records.csv'
    code = main(['bench', '--n-values', '16', '--trials', '1', '--csv', str(records)])
    assert code == EXIT_OK
    assert records.read_text().splitlines()[0] == 'n,seed,success,wall_ms,candidates,selection_ok,swaps'
    assert 'trials' in capsys.readouterr().out


def test_bench_rejects_zero_trials():
    assert main(['bench', '--n-values', '16', '--trials', '0']) == EXIT_USAGE


def test_demo_pinned_seed(capsys):
    assert main(['demo', '--seed', '7']) == EXIT_OK
    assert 'ATTACK SUCCEEDED' in capsys.readouterr().out


def _encrypt_file(tmp_path, pub, data=b'plain bytes'):
    message = tmp_path / 'm.bin'
    message.write_bytes(data)
    ct = tmp_path / 'ct.json'
    assert main(['encrypt', '--pub', str(pub), '--in', str(message), '--out', str(ct)]) == EXIT_OK
    return ct


def test_decrypt_bare_private_key_with_pub(desk_files):
    tmp_path, pub, priv = desk_files
    data = json.loads(priv.read_text())
    del data['params']
    bare = tmp_path / 'bare_priv.json'
    bare.write_text(json.dumps(data))
    ct = _encrypt_file(tmp_path, pub)
    out = tmp_path / 'out.bin'

    code = main(['decrypt', '--priv', str(bare), '--pub', str(pub), '--in', str(ct), '--out', str(out)])
    assert code == EXIT_OK
    assert out.read_bytes() == b'plain bytes'


def test_decrypt_bare_private_key_of_other_size_needs_pub(desk_files, capsys):
    tmp_path, pub, priv = desk_files
    data = json.loads(priv.read_text())
    del data['params']
    bare = tmp_path / 'bare_priv.json'
    bare.write_text(json.dumps(data))
    ct = _encrypt_file(tmp_path, pub)

    code = main(['decrypt', '--priv', str(bare), '--in', str(ct), '--out', str(tmp_path / 'o')])
    assert code == EXIT_USAGE
    assert '--pub' in capsys.readouterr().err


@pytest.mark.slow
def test_decrypt_bare_full_size_private_key(tmp_path):
    pub = tmp_path / 'pub.json'
    priv = tmp_path / 'priv.json'
    assert main(['keygen', '--seed', '3', '--pub', str(pub), '--priv', str(priv)]) == EXIT_OK
    data = json.loads(priv.read_text())
    del data['params']
    priv.write_text(json.dumps(data))
    ct = _encrypt_file(tmp_path, pub)
    out = tmp_path / 'out.bin'

    assert main(['decrypt', '--priv', str(priv), '--in', str(ct), '--out', str(out)]) == EXIT_OK
    assert out.read_bytes() == b'plain bytes'


def test_selector_out_of_range_is_usage_error(desk_files, capsys):
    tmp_path, pub, priv = desk_files
    ct = _encrypt_file(tmp_path, pub)
    data = json.loads(ct.read_text())
    data['d_prime'] = '40320'
    ct.write_text(json.dumps(data))

    assert main(['decrypt', '--priv', str(priv), '--in', str(ct), '--out', str(tmp_path / 'o')]) == EXIT_USAGE
    assert 'd_prime' in capsys.readouterr().err
    assert main(['attack', '--pubkey', str(pub), '--ciphertext', str(ct)]) == EXIT_USAGE
    assert 'd_prime' in capsys.readouterr().err
