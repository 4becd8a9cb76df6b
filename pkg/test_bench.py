import csv
from fractions import Fraction

import pytest

from attack import AttackConfig
from bench import (
    CSV_COLUMNS,
    TrialGrid,
    TrialRecord,
    desk_params,
    measure_lll_scaling,
    run_grid,
    scaling_slope,
    summarize,
    trial_message,
    write_csv,
)
from errors import InvalidInputError


def record(n, seed, success, wall_ms=10):
    return TrialRecord(n=n, seed=seed, success=success, wall_ms=wall_ms,
                       candidates=1, selection_ok=False, swaps=3, validated=success)


def test_grid_validation():
    with pytest.raises(InvalidInputError):
        TrialGrid(n_values=(16,), trials_per_point=0)
    with pytest.raises(InvalidInputError):
        TrialGrid(n_values=(15,), trials_per_point=1)
    with pytest.raises(InvalidInputError):
        TrialGrid(n_values=(), trials_per_point=1)


def test_trial_seed_layout():
    grid = TrialGrid(n_values=(16,), trials_per_point=1, seed_base=100)
    assert grid.trial_seed(16, 3) == 100 + 16000 + 3


def test_desk_params():
    params = desk_params(16)
    assert (params.subsets, params.group_size, params.take) == (2, 8, 4)


def test_trial_message_is_seeded():
    params = desk_params(16)
    assert trial_message(params, 5, 2) == trial_message(params, 5, 2)
    assert len(trial_message(params, 5, 2)) == 2


def test_single_point_grid():
    grid = TrialGrid(n_values=(16,), trials_per_point=1, seed_base=1)
    records = run_grid(grid)
    assert len(records) == 1
    assert records[0].n == 16
    assert records[0].success == records[0].validated


def test_grid_is_deterministic():
    grid = TrialGrid(n_values=(16,), trials_per_point=2, seed_base=9,
                     attack_config=AttackConfig(ell_sweep=(4, 6), lambda_offsets=(0, -1)))
    first = [r.deterministic_fields() for r in run_grid(grid)]
    second = [r.deterministic_fields() for r in run_grid(grid)]
    assert first == second
    assert [f[1] for f in first] == sorted(f[1] for f in first)


def test_summarize_empty():
    assert summarize([]) == {}


def test_summarize_counts():
    records = [record(16, 1, True), record(16, 2, False, 30), record(16, 3, True, 20),
               record(24, 1, True, 50)]
    table = summarize(records)
    assert table[16]['rate'] == Fraction(2, 3)
    assert table[16]['median_ms'] == 20
    assert table[24]['rate'] == 1
    assert list(table) == [16, 24]


def test_write_csv(tmp_path):
    path = tmp_path / 'records.csv'
    write_csv([record(16, 1, True)], path)
    with open(path, newline='') as handle:
        rows = list(csv.reader(handle))
    assert rows[0] == CSV_COLUMNS
    assert rows[1] == ['16', '1', '1', '10', '1', '0', '3']


def test_scaling_slope():
    assert scaling_slope([(2, 4), (4, 16), (8, 64)]) == pytest.approx(2.0)
    assert scaling_slope([(2, 4)]) is None
    assert scaling_slope([(2, 0), (4, 0)]) is None


def test_measure_lll_scaling():
    points = measure_lll_scaling([2, 4], bits=12)
    assert [d for d, _ in points] == [2, 4]
    assert all(swaps >= 0 for _, swaps in points)


@pytest.mark.slow
def test_desk_efficacy_grid():
    records = run_grid(TrialGrid(n_values=(16, 24, 32), trials_per_point=50))
    for n, row in summarize(records).items():
        assert row['rate'] >= Fraction(1, 2), n
    assert all(r.validated for r in records if r.success)
