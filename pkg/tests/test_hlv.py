import random

import pytest

from hlvkit.hlv import (
    CurveData,
    IntegralityFailure,
    NegativeDimension,
    ParabolicData,
    ParabolicInvariants,
    count_gets_macdonald_series,
    dim_moduli,
    euler_form_higgs,
    euler_form_parabolic,
    hlv_H,
    hlv_kernel,
    kernel_weight,
    poincare_polynomial,
    springer_count,
)
from hlvkit.macdonald import flag_count_poly, hall_littlewood, macdonald_htilde
from hlvkit.partitions import Partition, SizeMismatch, enumerate_partitions, z_qt
from hlvkit.scalars import ONE, ZERO, q, s, sigma, t
from hlvkit.symfunc import MultiSymSeries, h, m, pexp

s1 = sigma(1)


def test_kernel_first_terms():
    K = hlv_kernel(CurveData(0, 1), 2)
    assert K.coefficient(1, ([1],)) == 1 / ((1 - t) * (q - 1))
    w = kernel_weight(Partition([1]), [s1])
    assert w == (1 - s1.inverse() * t) * (q - s1) / ((1 - t) * (q - 1))


def test_kernel_genus0_two_points_is_pexp():
    nmax = 4
    gen = MultiSymSeries.from_symfuncs(nmax, 1 / ((q - 1) * (1 - t)), [m(1), m(1)], 1)
    assert hlv_kernel(CurveData(0, 2), nmax) == pexp(gen)


def test_genus0_weights_are_inverse_norms():
    for n in range(1, 5):
        for lam in enumerate_partitions(n):
            assert kernel_weight(lam, []) == z_qt(lam).inverse()


def test_H_examples():
    H = hlv_H(CurveData(0, 1), 3)
    assert H.coefficient(1, ([1],)) == ONE
    H2 = hlv_H(CurveData(0, 2), 3)
    assert H2.degree(1) == MultiSymSeries.from_symfuncs(3, 1, [h(1), h(1)], 1)
    assert all(n == 1 for (n, _) in H2.terms)
    H11 = hlv_H(CurveData(1, 1), 1)
    assert H11.coefficient(1, ([1],)) == (1 - s1.inverse() * t) * (q - s1)


@pytest.mark.parametrize("g,k", [(0, 0), (0, 1), (0, 2), (1, 0), (1, 1), (1, 2)])
def test_H_integrality(g, k):
    H = hlv_H(CurveData(g, k), 3)
    for v in H.terms.values():
        v.as_laurent()


def test_integrality_failure_is_detected():
    from hlvkit.hlv import certify_laurent
    with pytest.raises(IntegralityFailure):
        certify_laurent(1 / (1 - t))


def test_curve_data_validation():
    with pytest.raises(ValueError):
        CurveData(-1, 0)
    with pytest.raises(ValueError):
        CurveData(1, 0, sigma=[])


def test_dim_moduli_examples():
    assert dim_moduli(1, ParabolicData(1, [[1]])) == 2
    assert dim_moduli(0, ParabolicData(2, [[1, 1]] * 4)) == 2
    assert dim_moduli(0, ParabolicData(2, [[1, 1]] * 3)) == 0
    with pytest.raises(NegativeDimension):
        dim_moduli(0, ParabolicData(2, [[1, 1]]))


def test_parabolic_data_validation():
    with pytest.raises(ValueError):
        ParabolicData(2, [[1]])
    with pytest.raises(ValueError):
        ParabolicData(0, [])
    assert ParabolicData.parse(2, "1,1;2").mults == ((1, 1), (2,))


def test_poincare_examples():
    assert poincare_polynomial(0, ParabolicData(2, [[1, 1]] * 3)) == ONE
    assert poincare_polynomial(1, ParabolicData(1, [[1]])) == (1 - s) ** 2
    assert poincare_polynomial(0, ParabolicData(1, [[1]])) == ONE


def test_poincare_is_insensitive_to_row_order():
    a = poincare_polynomial(0, ParabolicData(3, [[2, 1], [1, 2], [1, 1, 1], [2, 1]]))
    b = poincare_polynomial(0, ParabolicData(3, [[1, 2], [2, 1], [1, 1, 1], [1, 2]]))
    assert a == b


def test_poincare_integer_coefficients():
    for g, P in [(0, ParabolicData(2, [[1, 1]] * 4)), (1, ParabolicData(2, [[1, 1]])),
                 (0, ParabolicData(2, [[1, 1]] * 5))]:
        poly = poincare_polynomial(g, P).as_laurent()
        assert all(c.denominator == 1 for c in poly.terms.values())


def test_poincare_four_punctured_sphere_is_surface_like():
    # a smooth surface: P has constant term 1 and degree dim
    poly = poincare_polynomial(0, ParabolicData(2, [[1, 1]] * 4))
    assert poly.substitute({"s": 0}) == ONE
    assert poly == 1 + 5 * s ** 2


def test_rank_one_is_a_torus():
    for g in range(1, 4):
        assert poincare_polynomial(g, ParabolicData(1, [[1]])) == (1 - s) ** (2 * g)


def test_euler_form_examples():
    L = ParabolicInvariants(1, 0)
    assert euler_form_parabolic(0, L, L, []) == 1
    assert euler_form_parabolic(1, L, L, []) == 0
    E = ParabolicInvariants(1, 0, [[1, 0]])
    F = ParabolicInvariants(1, 0, [[0, 1]])
    assert euler_form_parabolic(0, E, F, [1]) == 0
    assert euler_form_higgs(1, L, L, []) == 0
    assert euler_form_higgs(0, L, L, []) == 2


def test_higgs_form_is_symmetrization():
    rng = random.Random(7)
    for _ in range(200):
        g = rng.randrange(3)
        k = rng.randrange(3)
        d = [rng.randrange(1, 3) for _ in range(k)]
        widths = [rng.randrange(1, 4) for _ in range(k)]

        def invariants():
            rows = [[rng.randrange(3) for _ in range(w)] for w in widths]
            r = rng.randrange(1, 4)
            return ParabolicInvariants(r, rng.randrange(-3, 4), rows)

        E, F = invariants(), invariants()
        # the closed form assumes the jumps add up to the rank
        E = ParabolicInvariants(sum(E.jumps[0]) if k else E.rank, E.degree, E.jumps)
        F = ParabolicInvariants(sum(F.jumps[0]) if k else F.rank, F.degree, F.jumps)
        if any(sum(row) != E.rank for row in E.jumps) or any(sum(row) != F.rank for row in F.jumps):
            continue
        sym = euler_form_parabolic(g, E, F, d) + euler_form_parabolic(g, F, E, d)
        assert sym == euler_form_higgs(g, E, F, d)


def test_count_gets_macdonald_examples():
    one = count_gets_macdonald_series([1], 3)
    assert one[0] == m(1) and all(layer.is_zero() for layer in one[1:])
    assert count_gets_macdonald_series([1, 1], 2)[0] == m(2) + m(1, 1)
    row = count_gets_macdonald_series([2], 2)
    assert row[0] == macdonald_htilde([2]) and row[1].is_zero()


def test_springer_examples():
    assert springer_count([1], [1], 2) == [ONE, ZERO, ZERO]
    assert springer_count([2], [1, 1], 0) == [1 + q]
    c = springer_count([1, 1], [1, 1], 1)
    assert c[0] == ONE
    assert c[1] == 1 + q.inverse()
    with pytest.raises(SizeMismatch):
        springer_count([2], [1], 1)


def test_degree_zero_layer_is_hall_littlewood():
    for n in range(1, 6):
        for lam in enumerate_partitions(n):
            assert count_gets_macdonald_series(lam, 0)[0] == hall_littlewood(lam)
