"""
Tests for exact Gram-Schmidt, LLL and the enumeration oracle.
"""

import random
from fractions import Fraction

import pytest

from errors import DimensionError, InvalidInputError, RankDeficientError
from lattice import (
    LatticeBasis,
    enumerate_short_vectors,
    gram_schmidt,
    inner_product,
    is_lll_reduced,
    lattice_determinant,
    lll_reduce,
    norm_sq,
    reduce_basis,
    same_lattice,
    shortest_norm_sq,
    sup_norm,
)


def random_square_basis(rng, dim, bits):
    while True:
        rows = [[rng.randint(-(1 << bits), 1 << bits) for _ in range(dim)] for _ in range(dim)]
        basis = LatticeBasis.from_rows(rows)
        try:
            lattice_determinant(basis)
        except RankDeficientError:
            continue
        return basis


def test_vector_helpers():
    assert inner_product((1, 2), (3, 4)) == 11
    assert norm_sq((Fraction(1, 2), 1)) == Fraction(5, 4)
    assert sup_norm((-3, 2)) == 3
    with pytest.raises(InvalidInputError):
        inner_product((1,), (1, 2))
    with pytest.raises(InvalidInputError):
        norm_sq(())


def test_sup_norm_squared_bounded_by_norm():
    rng = random.Random(11)
    for _ in range(200):
        vector = [Fraction(rng.randint(-50, 50), rng.randint(1, 9)) for _ in range(rng.randint(1, 6))]
        assert sup_norm(vector) ** 2 <= norm_sq(vector)
        assert norm_sq(vector) <= len(vector) * sup_norm(vector) ** 2


def test_gram_schmidt_small():
    gso = gram_schmidt(LatticeBasis.from_rows([[1, 1], [1, 0]]))
    assert gso.ortho[1] == (Fraction(1, 2), Fraction(-1, 2))
    assert gso.norms == (2, Fraction(1, 2))
    assert gso.mu[1][0] == Fraction(1, 2)


def test_gram_schmidt_worked_example():
    gso = gram_schmidt(LatticeBasis.from_rows([[2, 0], [1, 1]]))
    assert gso.mu[1][0] == Fraction(1, 2)
    assert gso.ortho == ((2, 0), (0, 1))
    assert gso.norms == (4, 1)


def test_gram_schmidt_orthogonal():
    rng = random.Random(5)
    gso = gram_schmidt(random_square_basis(rng, 5, 8))
    for i in range(5):
        for j in range(i):
            assert inner_product(gso.ortho[i], gso.ortho[j]) == 0


def test_dependent_rows():
    with pytest.raises(RankDeficientError):
        gram_schmidt(LatticeBasis.from_rows([[1, 2], [2, 4]]))
    with pytest.raises(RankDeficientError):
        LatticeBasis.from_rows([[1, 0], [0, 1], [1, 1]])


def test_ragged_rows():
    with pytest.raises(InvalidInputError):
        LatticeBasis.from_rows([[1, 0], [1]])


def test_delta_bounds():
    basis = LatticeBasis.from_rows([[1, 0], [0, 1]])
    with pytest.raises(InvalidInputError):
        lll_reduce(basis, Fraction(1, 4))
    with pytest.raises(InvalidInputError):
        lll_reduce(basis, 1)


def test_lll_known_reduction():
    result = reduce_basis(LatticeBasis.from_rows([[1, 0], [1000, 1]]))
    assert result.basis.rows == ((1, 0), (0, 1))
    assert result.stats.swaps == 0


def test_lll_worked_example():
    result = reduce_basis(LatticeBasis.from_rows([[2, 0], [1, 1]]))
    assert set(result.basis.rows) == {(1, 1), (1, -1)}
    assert result.basis.rows == ((1, 1), (1, -1))
    assert result.stats.swaps == 1
    assert is_lll_reduced(result.basis)


def test_already_reduced_basis_is_unchanged():
    basis = LatticeBasis.from_rows([[1, 0, 0], [0, 1, 0], [0, 0, 1]])
    assert lll_reduce(basis) == basis


@pytest.mark.parametrize('seed', range(25))
def test_lll_output_is_reduced_and_equivalent(seed):
    rng = random.Random(seed)
    dim = rng.randint(2, 6)
    basis = random_square_basis(rng, dim, 16)
    reduced = lll_reduce(basis)

    assert is_lll_reduced(reduced)
    assert lattice_determinant(reduced) ** 2 == lattice_determinant(basis) ** 2
    assert same_lattice(basis, reduced)


def test_lll_rational_basis():
    basis = LatticeBasis.from_rows([[Fraction(1, 3), 5], [0, -7]])
    reduced = lll_reduce(basis)
    assert is_lll_reduced(reduced)
    assert lattice_determinant(reduced) == Fraction(7, 3)


@pytest.mark.slow
def test_lll_reducedness_suite():
    rng = random.Random('suite')
    for _ in range(200):
        basis = random_square_basis(rng, rng.randint(2, 10), 30)
        reduced = lll_reduce(basis)
        assert is_lll_reduced(reduced)
        assert lattice_determinant(reduced) ** 2 == lattice_determinant(basis) ** 2
        assert same_lattice(basis, reduced)


@pytest.mark.parametrize('seed', range(20))
def test_first_vector_against_enumeration(seed):
    rng = random.Random(f'oracle:{seed}')
    dim = rng.randint(2, 4)
    basis = random_square_basis(rng, dim, 6)
    reduced = lll_reduce(basis)
    bound = Fraction(2) ** (dim - 1) * shortest_norm_sq(basis, 3)
    assert norm_sq(reduced.rows[0]) <= bound


def test_not_reduced_detected():
    assert not is_lll_reduced(LatticeBasis.from_rows([[1, 0], [5, 1]]))


def test_same_lattice_rejects_sublattice():
    basis = LatticeBasis.from_rows([[1, 0], [0, 1]])
    doubled = LatticeBasis.from_rows([[2, 0], [0, 1]])
    assert not same_lattice(basis, doubled)


def test_determinant_needs_square():
    with pytest.raises(DimensionError):
        lattice_determinant(LatticeBasis.from_rows([[1, 0, 0], [0, 1, 0]]))


def test_enumeration_limits():
    basis = LatticeBasis.from_rows([[1 if i == j else 0 for j in range(7)] for i in range(7)])
    with pytest.raises(DimensionError):
        enumerate_short_vectors(basis, 1)
    with pytest.raises(DimensionError):
        enumerate_short_vectors(LatticeBasis.from_rows([[1]]), 6)


def test_enumeration_orders_by_norm():
    found = enumerate_short_vectors(LatticeBasis.from_rows([[1, 0], [0, 2]]), 1)
    assert found[0] == ((-1, 0), 1)
    assert [norm for _, norm in found] == sorted(norm for _, norm in found)
