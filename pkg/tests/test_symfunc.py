from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from hlvkit.partitions import Partition, enumerate_partitions
from hlvkit.scalars import ONE, ZERO, Scalar, q, t
from hlvkit.symfunc import (
    X1,
    X2,
    AlphabetExpr,
    BadConstantTerm,
    ConstantTermPresent,
    DegreeCapExceeded,
    MixedDegree,
    MultiSymSeries,
    SymFunc,
    UnsupportedLeaf,
    cauchy_kernel,
    convert_basis,
    e,
    h,
    hall_pair,
    m,
    p,
    pexp,
    plethysm,
    plog,
    qt_pair,
    schur,
    set_degree_cap,
    degree_cap,
)

from strategies import laurent_polys


def lift(S, nmax):
    return MultiSymSeries(S.k, nmax, S.terms, S.basis)


def test_convert_basis_examples():
    assert convert_basis(h(2), "m") == m(2) + m(1, 1)
    assert convert_basis(p(2), "m") == m(2)
    assert convert_basis(e(2), "p") == (p(1, 1) - p(2)) / 2


def test_schur_jacobi_trudi_small():
    assert schur(2, 1).to("m") == m(2, 1) + 2 * m(1, 1, 1)
    assert schur(1, 1).to("m") == m(1, 1)
    assert schur(3).to("m") == h(3).to("m")


@pytest.mark.parametrize("basis", ["m", "h", "e", "p", "s"])
def test_round_trip_every_basis(basis):
    for n in range(1, 6):
        for lam in enumerate_partitions(n):
            F = SymFunc.basis_element(basis, lam)
            for other in ("m", "h", "e", "p", "s"):
                assert F.to(other).to(basis) == F


def test_degree_cap():
    old = degree_cap()
    set_degree_cap(3)
    try:
        with pytest.raises(DegreeCapExceeded):
            h(4).to("m")
    finally:
        set_degree_cap(old)


def test_hall_pair_examples():
    assert hall_pair(h(2), m(2)) == ONE
    assert hall_pair(p(2), p(2)) == Scalar.const(2)
    assert hall_pair(h(2), m(1, 1)) == ZERO


def test_power_sum_norms_match_h_m_duality():
    # (p_lam, p_mu) = delta z_lam, re-derived from (h, m) duality
    for n in range(1, 6):
        for lam in enumerate_partitions(n):
            for mu in enumerate_partitions(n):
                got = hall_pair(p(*lam), p(*mu))
                assert got == (Scalar.const(lam.z()) if lam == mu else ZERO)


def test_hall_pair_is_symmetric():
    for n in range(1, 5):
        parts = enumerate_partitions(n)
        for a in parts:
            for b in parts:
                assert hall_pair(schur(*a), h(*b)) == hall_pair(h(*b), schur(*a))


def test_schur_is_orthonormal():
    for n in range(1, 6):
        for a in enumerate_partitions(n):
            for b in enumerate_partitions(n):
                assert hall_pair(schur(*a), schur(*b)) == (ONE if a == b else ZERO)


def test_plethysm_examples():
    assert plethysm(p(2), (q - 1) * X1) == (q ** 2 - 1) * p(2).to("m")
    assert plethysm(h(1), X1 * X2, 2) == MultiSymSeries.from_symfuncs(1, 1, [h(1), h(1)], 1)
    want = (p(1, 1) / (1 - t) ** 2 + p(2) / (1 - t ** 2)) / 2
    assert plethysm(h(2), X1 / (1 - t)) == want.to("m")


def test_plethysm_scalar_alphabet():
    assert plethysm(h(2), q) == q ** 2
    assert plethysm(h(2), 1 / (1 - q)) == 1 / ((1 - q) * (1 - q ** 2))


def test_unsupported_leaf():
    with pytest.raises(UnsupportedLeaf):
        plethysm(h(1), "X")


def test_qt_pair_examples():
    assert qt_pair(m(1), m(1)) == (q - 1) * (1 - t)
    assert not qt_pair(h(2), h(2)).is_zero()
    assert qt_pair(m(1), h(2)) == ZERO


def test_qt_pair_symmetric():
    for n in range(1, 5):
        for a in enumerate_partitions(n):
            for b in enumerate_partitions(n):
                assert qt_pair(m(*a), h(*b)) == qt_pair(h(*b), m(*a))


@pytest.mark.parametrize("S", [q - 1, 1 - t, (q - 1) * (1 - t)])
def test_adjunction(S):
    for n in range(1, 5):
        for a in enumerate_partitions(n):
            for b in enumerate_partitions(n):
                F, G = schur(*a), h(*b)
                assert hall_pair(F, plethysm(G, S * X1)) == hall_pair(plethysm(F, S * X1), G)


def test_pexp_single_variable():
    a = q ** 2 * t
    W = pexp(MultiSymSeries(0, 4, {(1, ()): a}))
    assert [W.coefficient(n, ()) for n in range(5)] == [a ** n for n in range(5)]


def test_pexp_mass_example():
    W = pexp(MultiSymSeries(0, 2, {(1, ()): 1 / (q - 1)}))
    assert W.coefficient(2, ()) == q / ((q - 1) ** 2 * (q + 1))
    assert W.coefficient(2, ()).substitute({"q": 2}) == Scalar.const(Fraction(2, 3))


def test_pexp_two_alphabets_matches_h2():
    H = MultiSymSeries.from_symfuncs(2, 1 / (q - 1), [h(1), h(1)], 1)
    W = pexp(H)
    want = plethysm(h(2), X1 * X2 / (q - 1), 2)
    assert W.degree(2) == lift(want, 2)


def test_pexp_rejects_constant_term():
    with pytest.raises(ConstantTermPresent):
        pexp(MultiSymSeries.constant(1, 2))


def test_plog_examples():
    geo = MultiSymSeries(0, 4, {(n, ()): 1 for n in range(5)})
    assert plog(geo) == MultiSymSeries(0, 4, {(1, ()): 1})
    gen = MultiSymSeries.from_symfuncs(3, 1 / ((q - 1) * (1 - t)), [m(1), m(1)], 1)
    assert plog(pexp(gen)) == gen
    with pytest.raises(BadConstantTerm):
        plog(MultiSymSeries.constant(1, 2, 2))


def test_cauchy_kernel_examples():
    via, direct = cauchy_kernel(2, 4)
    assert via == direct
    assert direct.degree(1) == MultiSymSeries.from_symfuncs(4, 1, [h(1), m(1)], 1)
    two = MultiSymSeries.from_symfuncs(4, 1, [h(2), m(2)], 2) + MultiSymSeries.from_symfuncs(4, 1, [h(1, 1), m(1, 1)], 2)
    assert direct.degree(2) == two


def test_mixed_degree_rejected():
    with pytest.raises(MixedDegree):
        MultiSymSeries(2, 3, {(2, ((2,), (1,))): 1})


def test_text_format():
    assert (m(2) + (q + 1) * m(1, 1)).to_text() == "m[2] + (q+1)*m[1,1]"
    assert (m(1, 1) + m(2)).to_text() == "m[2] + m[1,1]"
    assert (m(2) * q.inverse() - 2 * m(1, 1)).to_text() == "q^-1*m[2] - 2*m[1,1]"
    assert SymFunc.zero().to_text() == "0"
    S = MultiSymSeries.from_symfuncs(1, 1 / (q - 1), [m(1), m(1)], 1)
    assert S.to_text() == "(1/(q-1))*T*m[1](X1)*m[1](X2)"


def test_json_shapes():
    F = m(2) + (q + 1) * m(1, 1)
    data = F.to_json()
    assert data["basis"] == "m"
    assert [term["partition"] for term in data["terms"]] == [[2], [1, 1]]
    S = MultiSymSeries.from_symfuncs(1, 1, [m(1), m(1)], 1)
    assert S.to_json()[0]["T"] == 1 and S.to_json()[0]["tuple"] == [[1], [1]]


coeffs = laurent_polys(max_terms=2)


@st.composite
def symfuncs(draw, max_degree=4):
    out = SymFunc.zero()
    for _ in range(draw(st.integers(min_value=1, max_value=3))):
        n = draw(st.integers(min_value=1, max_value=max_degree))
        parts = enumerate_partitions(n)
        lam = parts[draw(st.integers(min_value=0, max_value=len(parts) - 1))]
        out = out + SymFunc.basis_element("m", lam) * draw(coeffs)
    return out


ALPHABETS = [(q - 1) * X1, X1 / (1 - t), X1 + 1, q * X1 - t, (q - 1) * (1 - t) * X1]


@given(symfuncs(3), symfuncs(2), st.sampled_from(ALPHABETS))
def test_plethysm_is_ring_homomorphism(F, G, A):
    assert plethysm(F * G, A) == plethysm(F, A) * plethysm(G, A)
    assert plethysm(F + G, A) == plethysm(F, A) + plethysm(G, A)


@given(symfuncs(3), symfuncs(3))
def test_hall_pair_bilinear_symmetric(F, G):
    assert hall_pair(F, G) == hall_pair(G, F)
    assert hall_pair(F + G, G) == hall_pair(F, G) + hall_pair(G, G)


@st.composite
def series(draw, k=1, nmax=4):
    terms = {}
    for _ in range(draw(st.integers(min_value=1, max_value=3))):
        n = draw(st.integers(min_value=1, max_value=nmax))
        parts = enumerate_partitions(n)
        tup = tuple(parts[draw(st.integers(min_value=0, max_value=len(parts) - 1))] for _ in range(k))
        terms[(n, tup)] = draw(coeffs)
    return MultiSymSeries(k, nmax, terms)


@given(series())
def test_pexp_plog_round_trip(H):
    assert plog(pexp(H)) == H


@given(series(k=1, nmax=3), series(k=1, nmax=3))
def test_pexp_is_multiplicative(A, B):
    assert pexp(A + B) == pexp(A) * pexp(B)


@given(series(k=2, nmax=3), series(k=2, nmax=3))
def test_product_keeps_equal_degrees(A, B):
    C = A * B
    for (n, tup) in C.terms:
        assert all(lam.size == n for lam in tup)
