"""Verification suites run by ``hlvkit verify``.

Each suite compares a brute-force or independent computation with the
algebraic one and returns a :class:`SuiteReport`.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional

from .hlv import CurveData, IntegralityFailure, hlv_H, hlv_kernel
from .macdonald import flag_count_poly, hall_littlewood, macdonald_htilde, verify_macdonald_axioms
from .oracle import (
    HallVector,
    I_map,
    flag_count_bruteforce,
    grassmannian_count,
    hall_product_bruteforce,
    nilpotent_mass_series,
    p1_parabolic_omega,
    p1_two_point_Cmu,
    p1_two_point_series,
)
from .partitions import Partition, enumerate_partitions, z_qt
from .scalars import ONE, Scalar, q, t
from .symfunc import AlphabetExpr, MultiSymSeries, SymFunc, h, m, pexp, plethysm


@dataclass
class SuiteReport:
    suite: str
    p: int
    max: int
    checks: int = 0
    failures: List[dict] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures

    def record(self, ok: bool, **case) -> None:
        self.checks += 1
        if not ok:
            self.failures.append({k: str(v) for k, v in case.items()})

    def to_json(self) -> dict:
        return {"suite": self.suite, "p": self.p, "max": self.max, "checks": self.checks,
                "failures": self.failures, "ok": self.ok}


def compositions(n: int) -> List[tuple]:
    """All compositions of n into positive parts."""
    if n == 0:
        return [()]
    out = []
    for first in range(1, n + 1):
        out.extend((first,) + rest for rest in compositions(n - first))
    return out


def lift(S: MultiSymSeries, nmax: int) -> MultiSymSeries:
    return MultiSymSeries(S.k, nmax, S.terms, S.basis)


def t_layer(S: MultiSymSeries, d: int, tmax: int) -> MultiSymSeries:
    """The t^d coefficient of every coefficient of S."""
    return S.copy_with({key: c.series("t", tmax)[d] for key, c in S.terms.items()})


def suite_flags(p: int, nmax: int) -> SuiteReport:
    rep = SuiteReport("flags", p, nmax)
    for n in range(nmax + 1):
        for lam in enumerate_partitions(n):
            for mu in compositions(n):
                want = flag_count_poly(lam, mu).substitute({"q": p})
                got = flag_count_bruteforce(lam, mu, p)
                rep.record(want == Scalar.const(got), lam=lam.text(), mu=list(mu), poly=want, brute=got)
    return rep


def mass_closed_form(nmax: int) -> MultiSymSeries:
    """pExp[T / (q - 1)] as a series with no alphabets."""
    return pexp(MultiSymSeries(0, nmax, {(1, ()): (q - 1).inverse()}))


def suite_mass(p: int, nmax: int) -> SuiteReport:
    rep = SuiteReport("mass", p, nmax)
    brute = nilpotent_mass_series(nmax, p)
    W = mass_closed_form(nmax)
    for n in range(nmax + 1):
        want = W.coefficient(n, ()).substitute({"q": p})
        rep.record(want == Scalar.const(brute[n]), n=n, closed=want, brute=brute[n])
    return rep


def grassmannian_series(n: int, dmax: int) -> List[Scalar]:
    """Coefficients of 1 / ((1 - t)(1 - q t) ... (1 - q^(n-1) t))."""
    den = ONE
    for i in range(n):
        den = den * (1 - q ** i * t)
    return den.inverse().series("t", dmax)


def suite_grass(p: int, nmax: int) -> SuiteReport:
    rep = SuiteReport("grass", p, nmax)
    for n in range(1, min(nmax, 3) + 1):
        coeffs = grassmannian_series(n, 4)
        for d in range(5):
            want = coeffs[d].substitute({"q": p})
            got = grassmannian_count(n, d, p)
            rep.record(want == Scalar.const(got), n=n, d=d, formula=want, brute=got)
    return rep


def suite_hall(p: int, nmax: int) -> SuiteReport:
    rep = SuiteReport("hall", p, nmax)
    for n in range(nmax + 1):
        for lam in enumerate_partitions(n):
            got = I_map(HallVector.basis(lam, p))
            want = hall_littlewood(lam).substitute({"q": p})
            rep.record(got == want, check="I(N_lam) = H_lam", lam=lam.text())
    for a in range(nmax + 1):
        for b in range(nmax + 1 - a):
            for lam in enumerate_partitions(a):
                for nu in enumerate_partitions(b):
                    prod = I_map(hall_product_bruteforce(lam, nu, p))
                    want = I_map(HallVector.basis(lam, p)) * I_map(HallVector.basis(nu, p))
                    rep.record(prod == want, check="multiplicative", lam=lam.text(), nu=nu.text())
    return rep


def cauchy_h(mu, p: int) -> MultiSymSeries:
    """prod_i h_mu_i[XY / (q - 1)] at q = p."""
    n = sum(mu)
    A = AlphabetExpr.symbol(1) * AlphabetExpr.symbol(2) / (q - 1)
    out = MultiSymSeries.constant(2, n)
    for x in mu:
        out = out * lift(plethysm(h(x), A, 2), n)
    return out.to("m").substitute({"q": p})


def genus0_two_point(nmax: int) -> MultiSymSeries:
    """pExp[XY / ((q - 1)(1 - t))]."""
    gen = MultiSymSeries.from_symfuncs(nmax, ((q - 1) * (1 - t)).inverse(), [m(1), m(1)], 1)
    return pexp(gen)


def suite_p1_two_point(p: int, nmax: int, tmax: int = 3) -> SuiteReport:
    nmax = min(nmax, 3)
    rep = SuiteReport("p1-two-point", p, nmax)
    for n in range(1, nmax + 1):
        for mu in compositions(n):
            rep.record(p1_two_point_Cmu(mu, p) == cauchy_h(mu, p), check="C_mu", mu=list(mu))
    layers = p1_two_point_series(nmax, tmax, p)
    W = genus0_two_point(nmax).substitute({"q": p})
    K = hlv_kernel(CurveData(0, 2), nmax).substitute({"q": p})
    for d in range(tmax + 1):
        rep.record(layers[d] == t_layer(W, d, tmax), check="assembled vs pExp", t_degree=d)
        rep.record(t_layer(K, d, tmax) == t_layer(W, d, tmax), check="kernel vs pExp", t_degree=d)
    return rep


def parabolic_expected(lam, p: int, dmax: int):
    """H~_lam[X; p, t] / z_lam(p, t) as a list of t-layers."""
    H = macdonald_htilde(lam)
    z = z_qt(Partition(lam))
    layers: List[Dict] = [{} for _ in range(dmax + 1)]
    for mu, c in H.terms.items():
        for d, v in enumerate((c / z).substitute({"q": p}).series("t", dmax)):
            layers[d][mu] = v
    return [SymFunc(layer, "m") for layer in layers]


def suite_p1_parabolic(p: int, nmax: int, dmax: int = 3) -> SuiteReport:
    nmax = min(nmax, 2)
    rep = SuiteReport("p1-parabolic", p, nmax)
    for n in range(1, nmax + 1):
        for lam in enumerate_partitions(n):
            got = p1_parabolic_omega(lam, p, dmax)
            want = parabolic_expected(lam, p, dmax)
            for d in range(dmax + 1):
                rep.record(got[d] == want[d], lam=lam.text(), t_degree=d, brute=got[d], macdonald=want[d])
    return rep


def suite_macdonald(p: int, nmax: int) -> SuiteReport:
    rep = SuiteReport("macdonald", p, nmax)
    for n in range(1, nmax + 1):
        for lam in enumerate_partitions(n):
            r = verify_macdonald_axioms(lam)
            rep.record(r.ok, lam=lam.text(), failed=r.failed())
    return rep


HLV_CASES = ((0, 1), (0, 2), (0, 3), (1, 0), (1, 1))


def suite_hlv(p: int, nmax: int) -> SuiteReport:
    rep = SuiteReport("hlv", p, nmax)
    for g, k in HLV_CASES:
        try:
            hlv_H(CurveData(g, k), nmax)
            ok = True
        except IntegralityFailure:
            ok = False
        rep.record(ok, g=g, k=k)
    return rep


SUITES: Dict[str, Callable[[int, int], SuiteReport]] = {
    "flags": suite_flags,
    "mass": suite_mass,
    "grass": suite_grass,
    "hall": suite_hall,
    "p1-two-point": suite_p1_two_point,
    "p1-parabolic": suite_p1_parabolic,
    "macdonald": suite_macdonald,
    "hlv": suite_hlv,
}

DEFAULT_MAX = {"flags": 4, "mass": 4, "grass": 3, "hall": 4, "p1-two-point": 3,
               "p1-parabolic": 2, "macdonald": 5, "hlv": 3}


def run_suite(name: str, p: int = 2, nmax: Optional[int] = None) -> SuiteReport:
    if name not in SUITES:
        raise KeyError(f"unknown suite {name!r}")
    return SUITES[name](p, DEFAULT_MAX[name] if nmax is None else nmax)
