import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from arknit import linalg as la

PRIMES = [2, 3, 5, 7]


@st.composite
def matrices(draw, max_dim=5):
    p = draw(st.sampled_from(PRIMES))
    r = draw(st.integers(0, max_dim))
    c = draw(st.integers(1, max_dim))
    vals = draw(st.lists(st.integers(0, p - 1), min_size=r * c, max_size=r * c))
    return np.array(vals, dtype=np.int64).reshape(r, c), p


def brute_rank(m, p):
    """Size of the row span by enumeration, as a power of p."""
    rows = [tuple(r) for r in m]
    span = set()
    for coeffs in itertools.product(range(p), repeat=len(rows)):
        v = np.zeros(m.shape[1], dtype=np.int64)
        for c, r in zip(coeffs, rows):
            v = (v + c * np.array(r)) % p
        span.add(tuple(v))
    return round(np.log(len(span)) / np.log(p))


def test_identity_rref():
    r, piv = la.rref(np.eye(2, dtype=np.int64), 5)
    assert np.array_equal(r, np.eye(2)) and piv == [0, 1] and la.rank(np.eye(2), 5) == 2


def test_zero_rref():
    r, piv = la.rref(np.zeros((3, 3), dtype=np.int64), 5)
    assert not r.any() and piv == [] and la.rank(r, 5) == 0


def test_rank_dependent_rows():
    m = np.array([[1, 2], [2, 4]])
    assert la.rank(m, 5) == 1 == brute_rank(m, 5)


def test_kernel_of_identity_is_empty():
    assert la.kernel_basis(np.eye(3, dtype=np.int64), 7).shape == (3, 0)


def test_kernel_of_zero_is_everything():
    k = la.kernel_basis(np.zeros((3, 3), dtype=np.int64), 7)
    assert la.rank(k, 7) == 3


def test_kernel_f3_enumerated():
    m = np.array([[1, 1]])
    k = la.kernel_basis(m, 3)
    assert k.shape == (2, 1)
    annihilated = {v for v in itertools.product(range(3), repeat=2) if (m @ np.array(v)) % 3 == 0}
    span = {tuple((c * k[:, 0]) % 3) for c in range(3)}
    assert span == annihilated
    assert (1, 2) in span


def test_solve_examples():
    b = np.array([1, 4])
    assert np.array_equal(la.solve(np.eye(2, dtype=np.int64), b, 5), b)
    assert la.solve(np.zeros((2, 2), dtype=np.int64), b, 5) is None
    assert np.array_equal(la.solve(np.array([[2]]), np.array([3]), 5), [4])


def test_inverse_examples():
    assert la.is_invertible(np.eye(3, dtype=np.int64), 5)
    assert not la.is_invertible(np.zeros((2, 2), dtype=np.int64), 5)
    u = np.array([[1, 1], [0, 1]])
    assert np.array_equal(la.inverse(u, 5), [[1, 4], [0, 1]])
    with pytest.raises(la.SingularMatrixError):
        la.inverse(np.zeros((2, 2), dtype=np.int64), 5)


def test_non_prime_rejected():
    with pytest.raises(ValueError):
        la.check_prime(6)
    assert la.check_prime(7) == 7


def test_field_scalars_refuse_mixed_characteristic():
    with pytest.raises(la.CharacteristicMismatch):
        la.FieldScalar(1, 3) + la.FieldScalar(1, 5)


def test_matpow_large_exponent():
    m = np.array([[1, 1], [0, 1]])
    assert np.array_equal(la.matpow(m, 5 ** 20 + 2, 5), [[1, 2], [0, 1]])


@given(matrices())
def test_rank_transpose(mp):
    m, p = mp
    assert la.rank(m, p) == la.rank(m.T, p)


@given(matrices())
def test_rank_nullity(mp):
    m, p = mp
    k = la.kernel_basis(m, p)
    assert m.shape[1] == la.rank(m, p) + k.shape[1]
    assert not ((m @ k) % p).any()


@settings(max_examples=50)
@given(matrices(max_dim=3))
def test_rank_matches_enumeration(mp):
    m, p = mp
    if m.shape[0] == 0:
        return
    assert la.rank(m, p) == brute_rank(m, p)


@given(matrices(), st.data())
def test_solve_contract(mp, data):
    m, p = mp
    b = np.array(data.draw(st.lists(st.integers(0, p - 1), min_size=m.shape[0], max_size=m.shape[0])), dtype=np.int64)
    x = la.solve(m, b, p)
    if x is not None:
        assert np.array_equal((m @ x) % p, b % p)
    else:
        assert la.rank(np.hstack([m, b.reshape(-1, 1)]), p) > la.rank(m, p)


@given(matrices())
def test_inverse_roundtrip(mp):
    m, p = mp
    if m.shape[0] != m.shape[1] or not la.is_invertible(m, p):
        return
    assert np.array_equal(la.matmul(m, la.inverse(m, p), p), np.eye(m.shape[0]))
