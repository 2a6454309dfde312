import math

import numpy as np
import pytest
from hypothesis import given, settings as hyp_settings, strategies as st

from maasslab.core.errors import DomainError, MissingPrimeError, TableExtentError
from maasslab.services.hecke import (
    divisor_count,
    factorize,
    hecke_extend,
    next_prime,
    primes_up_to,
    ramanujan_majorant,
)

A, B = 1.5493, 0.2469


@pytest.fixture
def small_table():
    return hecke_extend({2: A, 3: B, 5: 0.3, 7: -0.7, 11: 0.9, 13: -1.2}, 16)


def test_prime_helpers():
    assert primes_up_to(30) == [2, 3, 5, 7, 11, 13, 17, 19, 23, 29]
    assert primes_up_to(1) == []
    assert next_prime(1) == 2
    assert next_prime(31) == 37
    assert factorize(360) == {2: 3, 3: 2, 5: 1}
    assert divisor_count(360) == 24
    assert ramanujan_majorant(1) == 1.0


def test_multiplicative_and_prime_power_values(small_table):
    assert small_table[1] == 1.0
    assert small_table[4] == pytest.approx(A * A - 1.0)
    assert small_table[6] == pytest.approx(A * B)
    assert small_table[8] == pytest.approx(A ** 3 - 2.0 * A)
    assert small_table[9] == pytest.approx(B * B - 1.0)
    assert small_table[12] == pytest.approx((A * A - 1.0) * B)
    assert small_table[16] == pytest.approx(A * small_table[8] - small_table[4])


def test_missing_prime_is_reported(small_table):
    with pytest.raises(MissingPrimeError) as excinfo:
        hecke_extend({2: A, 5: 0.3}, 6)
    assert excinfo.value.prime == 3
    assert isinstance(excinfo.value, KeyError)


def test_extent_must_be_positive():
    with pytest.raises(DomainError):
        hecke_extend({}, 0)


def test_table_lookup_outside_extent(small_table):
    with pytest.raises(TableExtentError) as excinfo:
        small_table[17]
    assert excinfo.value.needed == 17
    assert excinfo.value.extent == 16
    with pytest.raises(TableExtentError):
        small_table.head(20)


def test_soft_bound_violations_are_recorded_not_fatal(caplog):
    table = hecke_extend({2: 5.0, 3: 0.1}, 4)
    assert table.bound_violations == (2, 4)
    assert table[4] == pytest.approx(24.0)
    assert "exceed" in caplog.text


def test_prime_eigenvalues_kept_up_to_extent():
    table = hecke_extend({2: A, 3: B, 5: 0.3, 7: -0.7}, 6)
    assert set(table.prime_eigenvalues) == {2, 3, 5}
    assert table.extent == 6
    np.testing.assert_allclose(table.head(3), [1.0, A, B])


@given(st.lists(st.floats(min_value=-2.0, max_value=2.0), min_size=15, max_size=15))
@hyp_settings(max_examples=60, deadline=None)
def test_hecke_relation_holds_for_all_pairs(prime_values):
    primes = primes_up_to(50)
    table = hecke_extend(dict(zip(primes, prime_values)), 50)
    for m in range(1, 8):
        for n in range(1, 8):
            g = math.gcd(m, n)
            expected = sum(table[m * n // (d * d)] for d in range(1, g + 1) if g % d == 0)
            assert table[m] * table[n] == pytest.approx(expected, abs=1e-9)
