import random
from collections import Counter

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hlvkit.partitions import Partition, dominance_leq
from hlvkit.seriesalg import (
    InsufficientPrecision,
    LSeries,
    NotNilpotent,
    Order,
    TSMatrix,
    classify,
    classify_adaptive,
    constant_type,
    hermite_form,
    kernel_form,
    nilpotent_type,
    random_invertible,
    random_nilpotent_sample,
    smith_form,
)


def M(text):
    return TSMatrix.parse(text)


def orders(os):
    return [str(o) for o in os]


def test_series_arithmetic():
    a = LSeries(2, [1, 1], 4)
    inv = a.inverse()
    assert (a * inv).agrees(LSeries.const(1, 2, 4))
    assert inv.coeffs[:4] == [1, 1, 1, 1]
    x = LSeries.monomial(1, 1, 3, 5)
    assert x.val == 1
    assert (x * x).coeff(2) == 1
    with pytest.raises(InsufficientPrecision):
        LSeries(3, [1], 2).coeff(2)


def test_parse_and_text_round_trip():
    for text in ["0,x;0,0 @p=2,m=4", "1+x^2,0;x,1 @p=3,m=5"]:
        A = M(text)
        assert M(A.to_text()) == A
    with pytest.raises(ValueError):
        M("0,x;0,0")
    with pytest.raises(ValueError):
        M("0,x;0,0 @p=4,m=4")


def test_hermite_examples():
    g, H, os = hermite_form(M("0,1;1,0 @p=2,m=4"))
    assert H == TSMatrix.identity(2, 2, 4)
    g, H, os = hermite_form(M("x,0;0,1 @p=2,m=4"))
    assert H == M("x,0;0,1 @p=2,m=4") and orders(os) == ["1", "0"]
    A = M("x,1;x^2,x @p=2,m=4")
    g, H, os = hermite_form(A)
    assert (g @ A) == H
    assert H.rows[1][0].is_zero()
    assert orders(os)[0] == "1"


def test_smith_examples():
    g1, D, g2, os = smith_form(M("x,0;0,1 @p=2,m=4"))
    assert orders(os) == ["0", "1"]
    g1, D, g2, os = smith_form(M("x,x;x,x @p=2,m=4"))
    assert os[0] == Order(1) and not os[1].exact
    I = TSMatrix.identity(3, 3, 4)
    g1, D, g2, os = smith_form(I)
    assert D == I and orders(os) == ["0", "0", "0"]


def test_type_examples():
    assert nilpotent_type(TSMatrix.zeros(3, 3, 2, 4)) == Partition([3])
    assert nilpotent_type(M("0,x;0,0 @p=2,m=4")) == Partition([1, 1])
    assert nilpotent_type(TSMatrix.standard_nilpotent([2, 1], 3, 4)) == Partition([2, 1])
    with pytest.raises(NotNilpotent):
        nilpotent_type(M("0,1;1,0 @p=2,m=4"))


def test_kernel_form_examples():
    N = TSMatrix.standard_nilpotent([2, 1], 2, 4)
    kf = kernel_form(N)
    assert kf.lam == Partition([2, 1])
    kf = kernel_form(M("0,x;0,0 @p=2,m=4"))
    assert kf.lam == Partition([1, 1]) and orders(kf.pivot_orders()) == ["1"]


def test_kernel_form_of_conjugate():
    rng = random.Random(3)
    theta = M("0,x;0,0 @p=2,m=6")
    for _ in range(10):
        u = random_invertible(rng, 2, 2, 6)
        kf = kernel_form(u @ theta @ u.inverse())
        assert kf.lam == Partition([1, 1])
        assert orders(kf.pivot_orders()) == ["1"]


def test_classify_examples():
    for lam in ([2, 1], [1, 1, 1], [3]):
        N = TSMatrix.standard_nilpotent(lam, 2, 4)
        c = classify(N)
        assert c.lam == Partition(lam) and c.d == 0
    c = classify(M("0,x;0,0 @p=2,m=4"))
    assert (c.lam, c.d) == (Partition([1, 1]), 1)
    c = classify(M("0,1;0,0 @p=2,m=4"))
    assert (c.lam, c.d, c.nondegenerate) == (Partition([1, 1]), 0, True)


def test_classify_straightens():
    rng = random.Random(11)
    for _ in range(30):
        smp = random_nilpotent_sample(rng, 3, 3)
        c = classify_adaptive(smp.at)
        theta = smp.at(c.precision)
        N = TSMatrix.standard_nilpotent(c.lam, 3, c.precision)
        assert (c.g @ theta).agrees(N @ c.g)


def test_adaptive_classify_reports_precision():
    c = classify_adaptive(lambda prec: M(f"0,x^9;0,0 @p=2,m={prec}"))
    assert c.d == 9 and c.precision == 16


def test_adaptive_gives_up():
    # a single run is never accepted on its own
    with pytest.raises(InsufficientPrecision):
        classify_adaptive(lambda prec: M(f"0,x;0,0 @p=2,m={prec}"), start=8, limit=15)


def test_adaptive_cannot_see_past_both_precisions():
    # an entry beyond every tried precision looks like zero; callers pick start accordingly
    c = classify_adaptive(lambda prec: M(f"0,x^40;0,0 @p=2,m={prec}"))
    assert (c.lam, c.d) == (Partition([2]), 0)
    c = classify_adaptive(lambda prec: M(f"0,x^40;0,0 @p=2,m={prec}"), start=64)
    assert (c.lam, c.d) == (Partition([1, 1]), 40)


def test_type_of_constant_term_dominates():
    rng = random.Random(5)
    for _ in range(100):
        smp = random_nilpotent_sample(rng, rng.randrange(1, 4), 2)
        c = classify_adaptive(smp.at)
        assert dominance_leq(c.lam, constant_type(smp.at(c.precision).at_zero(), 2))


@st.composite
def matrices(draw, p=2, prec=6):
    r = draw(st.integers(min_value=1, max_value=3))
    c = draw(st.integers(min_value=1, max_value=3))
    ent = st.lists(st.integers(min_value=0, max_value=p - 1), min_size=prec, max_size=prec)
    rows = [[draw(ent) for _ in range(c)] for _ in range(r)]
    return TSMatrix.from_ints(rows, p, prec)


@given(matrices(), st.integers(min_value=0, max_value=2 ** 30))
@settings(max_examples=60)
def test_smith_orders_invariant_under_units(A, seed):
    rng = random.Random(seed)
    u = random_invertible(rng, A.nrows, A.p, A.min_prec())
    v = random_invertible(rng, A.ncols, A.p, A.min_prec())
    _, D, _, os = smith_form(A)
    _, D2, _, os2 = smith_form(u @ A @ v)
    assert [o.value for o in os if o.exact] == [o.value for o in os2 if o.exact]
    assert all(a.value <= b.value for a, b in zip(os, os[1:]) if a.exact and b.exact)


@given(matrices(), st.integers(min_value=0, max_value=2 ** 30))
@settings(max_examples=60)
def test_hermite_upper_triangular_and_invariant(A, seed):
    rng = random.Random(seed)
    g, H, os = hermite_form(A)
    assert (g @ A).agrees(H)
    assert all(H.rows[i][j].is_zero() for i in range(H.nrows) for j in range(min(i, H.ncols)))
    u = random_invertible(rng, A.nrows, A.p, A.min_prec())
    _, _, os2 = hermite_form(u @ A)
    assert orders(os) == orders(os2)


@given(st.integers(min_value=0, max_value=2 ** 30), st.integers(min_value=1, max_value=3))
@settings(max_examples=40)
def test_classify_conjugation_invariant(seed, n):
    rng = random.Random(seed)
    smp = random_nilpotent_sample(rng, n, 2)
    base = classify_adaptive(smp.at)
    data = random_nilpotent_sample(rng, n, 2).U

    def conj(prec):
        U = TSMatrix.from_ints(data, 2, prec)
        th = smp.at(prec)
        return U @ th @ U.inverse()

    other = classify_adaptive(conj)
    assert (other.lam, other.d) == (base.lam, base.d)


def test_poles_rejected():
    with pytest.raises(ValueError):
        classify(M("0,x^-1;0,0 @p=2,m=4"))
