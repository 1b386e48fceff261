from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hlvkit.macdonald import flag_count_poly, hall_littlewood
from hlvkit.oracle import (
    FpMatrix,
    HallVector,
    I_map,
    TooLarge,
    bundle_aut_order,
    centralizer_order,
    flag_count_bruteforce,
    gl_order,
    grassmannian_count,
    hall_littlewood_bruteforce,
    hall_product_bruteforce,
    hermite_representatives,
    lattice_count,
    nilpotent_mass_series,
    p1_parabolic_omega,
    p1_two_point_Cmu,
    standard_nilpotent,
    subspaces,
)
from hlvkit.partitions import Partition, enumerate_partitions
from hlvkit.scalars import Scalar
from hlvkit.symfunc import MultiSymSeries, SymFunc, h, m
from hlvkit.suites import cauchy_h, compositions, lift


def test_standard_nilpotent_has_its_type():
    for n in range(1, 5):
        for lam in enumerate_partitions(n):
            assert standard_nilpotent(lam, 2).nilpotent_type() == lam


def test_subspace_counts_are_gaussian_binomials():
    assert len(subspaces(3, 1, 2)) == 7
    assert len(subspaces(4, 2, 2)) == 35
    assert len(subspaces(2, 1, 3)) == 4


def test_flag_examples():
    assert flag_count_bruteforce([2], [1, 1], 2) == 3
    assert flag_count_bruteforce([1, 1], [1, 1], 2) == 1
    assert flag_count_bruteforce([2], [2], 3) == 1


def test_flag_caps():
    with pytest.raises(TooLarge):
        flag_count_bruteforce([5], [5], 2)
    with pytest.raises(TooLarge):
        flag_count_bruteforce([1], [1], 5)
    with pytest.raises(ValueError):
        flag_count_bruteforce([2], [1], 2)


def test_centralizer_examples():
    assert centralizer_order([2], 2) == 6
    assert centralizer_order([1, 1], 2) == 2
    assert centralizer_order([1], 3) == 2


def test_orbit_sizes_partition_the_nilpotent_cone():
    # sum of |GL| / |Z| over types is p^(n(n-1)), the number of nilpotent matrices
    for p in (2, 3):
        for n in range(1, 4):
            total = sum(Fraction(gl_order(n, p), centralizer_order(lam, p)) for lam in enumerate_partitions(n))
            assert total == p ** (n * (n - 1))


def test_mass_examples():
    assert nilpotent_mass_series(2, 2)[2] == Fraction(2, 3)
    assert nilpotent_mass_series(1, 3) == [1, Fraction(1, 2)]


def test_grassmannian_examples():
    assert [grassmannian_count(1, d, 3) for d in range(5)] == [1] * 5
    assert grassmannian_count(2, 1, 2) == 3
    assert grassmannian_count(2, 2, 2) == 7


def test_hermite_representatives_agree_with_lattices():
    for p in (2, 3):
        for n in (1, 2):
            for d in range(4):
                assert grassmannian_count(n, d, p) == lattice_count(n, d, p)


def test_hermite_diagonal_is_monomial():
    for rep in hermite_representatives(2, 2, 2):
        assert len(rep) == 2


def test_hall_product_examples():
    one = HallVector.basis([1], 2)
    prod = hall_product_bruteforce([1], [1], 2)
    assert prod == HallVector(2, {Partition([2]): Fraction(1, 2), Partition([1, 1]): Fraction(1, 2)})
    assert hall_product_bruteforce([1], [], 2) == one
    assert I_map(prod) == m(2) + 2 * m(1, 1)
    assert I_map(prod) == m(1) * m(1)


def test_I_map_examples():
    assert I_map(HallVector.basis([1, 1], 2)) == m(2) + m(1, 1)
    assert I_map(HallVector.basis([2], 2)) == m(2) + 3 * m(1, 1)
    assert I_map(HallVector.basis([2], 3)) == m(2) + 4 * m(1, 1)


def test_hall_product_is_associative():
    a, b, c = HallVector.basis([1], 2), HallVector.basis([1], 2), HallVector.basis([1], 2)
    assert (a * b) * c == a * (b * c)


@given(st.sampled_from([(lam, p) for n in range(1, 4) for lam in enumerate_partitions(n) for p in (2, 3)]))
@settings(max_examples=20)
def test_bruteforce_hall_littlewood(case):
    lam, p = case
    assert hall_littlewood_bruteforce(lam, p) == hall_littlewood(lam).substitute({"q": p})


@given(st.integers(min_value=1, max_value=3).flatmap(
    lambda n: st.tuples(st.sampled_from(enumerate_partitions(n)), st.sampled_from(compositions(n)))))
@settings(max_examples=30)
def test_flag_counts_match_polynomial(case):
    lam, mu = case
    assert flag_count_poly(lam, mu).substitute({"q": 2}) == Scalar.const(flag_count_bruteforce(lam, mu, 2))


def test_two_point_examples():
    assert p1_two_point_Cmu([1]) == MultiSymSeries.from_symfuncs(1, 1, [m(1), m(1)], 1)
    for mu in ([2], [1, 1]):
        assert p1_two_point_Cmu(mu) == cauchy_h(mu, 2)


def test_bundle_automorphisms():
    assert bundle_aut_order([0], 2) == 1
    assert bundle_aut_order([0, 0], 2) == 6
    # O + O(-1): diagonal units, one section of O(1) of dimension 2
    assert bundle_aut_order([0, 1], 2) == 4


def test_parabolic_examples():
    one = p1_parabolic_omega([1], 2, 3)
    assert all(layer == m(1) for layer in one)
    assert p1_parabolic_omega([2], 2, 0)[0] == (m(2) + 3 * m(1, 1)) / 6
    assert p1_parabolic_omega([1, 1], 2, 0)[0] == (m(2) + m(1, 1)) / 2
    with pytest.raises(TooLarge):
        p1_parabolic_omega([3], 2, 1)
