"""Modified Macdonald polynomials obtained by solving their defining axioms.

For each degree n the unknowns are the monomial coefficients of H~_lambda.
The conditions are linear over Q(q,t):

* the m_nu coefficient of H~_lambda[(t-1)X] vanishes unless nu <= lambda,
* the m_nu coefficient of H~_lambda[(q-1)X] vanishes unless nu <= lambda',
* the m_(n) coefficient of H~_lambda is 1, i.e. H~_lambda[1] = 1.

The system is solved by exact Gaussian elimination and the result of each
degree is cached.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Dict, List, Mapping, Sequence, Tuple

from .partitions import Partition, SizeMismatch, conjugate, dominance_leq, enumerate_partitions, z_qt
from .scalars import ONE, ZERO, Scalar, q, t
from .symfunc import (
    X1,
    SymFunc,
    evaluate,
    hall_pair,
    plethysm,
    qt_pair,
    schur,
    transition,
)

DEFAULT_CAP = 8

_cap = DEFAULT_CAP


class SingularSystem(ArithmeticError):
    """The axiom system had no unique solution."""


class AxiomViolation(AssertionError):
    def __init__(self, which: Sequence[str]) -> None:
        super().__init__("failed checks: " + ", ".join(which))
        self.which = list(which)


def set_cap(n: int) -> None:
    global _cap
    _cap = n


def _scale_p(F: SymFunc, factor) -> SymFunc:
    """Multiply each p_rho coefficient of F by factor(rho) and return the m expansion."""
    Fp = F.to("p")
    return SymFunc({rho: c * factor(rho) for rho, c in Fp.terms.items()}, "p").to("m")


def _alphabet_scale(a: Scalar):
    def factor(rho):
        out = ONE
        for part in rho:
            out = out * a.frobenius(part)
        return out
    return factor


def plethystic_scale(F: SymFunc, a: Scalar) -> SymFunc:
    """F[a X] for a scalar a, in the monomial basis."""
    return _scale_p(F, _alphabet_scale(a))


def solve_linear(rows: List[List[Scalar]], rhs: List[Scalar]) -> List[Scalar]:
    """Unique solution of a consistent, possibly overdetermined, system."""
    nvars = len(rows[0]) if rows else 0
    A = [list(r) + [b] for r, b in zip(rows, rhs)]
    pivots: List[int] = []
    r = 0
    for col in range(nvars):
        piv = None
        best = None
        for i in range(r, len(A)):
            if not A[i][col].is_zero():
                # prefer the simplest pivot to keep intermediate sizes down
                size = len(A[i][col].n) + len(A[i][col].d)
                if best is None or size < best:
                    piv, best = i, size
        if piv is None:
            raise SingularSystem(f"no pivot for unknown {col}")
        A[r], A[piv] = A[piv], A[r]
        inv = A[r][col].inverse()
        A[r] = [x * inv for x in A[r]]
        for i in range(len(A)):
            if i != r and not A[i][col].is_zero():
                f = A[i][col]
                A[i] = [x - f * y for x, y in zip(A[i], A[r])]
        pivots.append(col)
        r += 1
    for i in range(r, len(A)):
        if not A[i][-1].is_zero():
            raise SingularSystem("inconsistent system")
    return [A[i][-1] for i in range(nvars)]


@lru_cache(maxsize=None)
def _twist_columns(n: int, which: str) -> Dict[Partition, SymFunc]:
    a = t - 1 if which == "t" else q - 1
    return {mu: plethystic_scale(SymFunc.basis_element("m", mu), a) for mu in enumerate_partitions(n)}


@dataclass(frozen=True)
class MacdonaldTable:
    """All H~_lambda of one degree, in the monomial basis."""

    n: int
    polys: Mapping[Partition, SymFunc] = field(default_factory=dict)

    def __getitem__(self, lam: Sequence[int]) -> SymFunc:
        return self.polys[Partition(lam)]


def _solve_one(lam: Partition) -> SymFunc:
    n = lam.size
    parts = enumerate_partitions(n)
    lamc = conjugate(lam)
    Mt = _twist_columns(n, "t")
    Mq = _twist_columns(n, "q")
    rows: List[List[Scalar]] = []
    rhs: List[Scalar] = []
    for nu in parts:
        if not dominance_leq(nu, lam):
            rows.append([Mt[mu].coefficient(nu) for mu in parts])
            rhs.append(ZERO)
        if not dominance_leq(nu, lamc):
            rows.append([Mq[mu].coefficient(nu) for mu in parts])
            rhs.append(ZERO)
    rows.append([ONE if mu == Partition([n]) else ZERO for mu in parts])
    rhs.append(ONE)
    sol = solve_linear(rows, rhs)
    return SymFunc(dict(zip(parts, sol)), "m")


@lru_cache(maxsize=None)
def macdonald_table(n: int) -> MacdonaldTable:
    if n > _cap:
        raise ValueError(f"degree {n} exceeds the Macdonald cap {_cap}")
    if n == 0:
        return MacdonaldTable(0, {Partition(): SymFunc.one()})
    return MacdonaldTable(n, {lam: _solve_one(lam) for lam in enumerate_partitions(n)})


def macdonald_htilde(lam: Sequence[int]) -> SymFunc:
    lam = Partition(lam)
    return macdonald_table(lam.size)[lam]


@lru_cache(maxsize=None)
def _hall_littlewood(lam: Partition) -> SymFunc:
    return macdonald_htilde(lam).substitute({"t": 0})


def hall_littlewood(lam: Sequence[int]) -> SymFunc:
    """H_lambda[X;q], the t = 0 specialization of H~_lambda."""
    return _hall_littlewood(Partition(lam))


def flag_count_poly(lam: Sequence[int], mu: Sequence[int]) -> Scalar:
    """(H_lambda, h_mu): the m_mu coefficient of H_lambda, mu sorted first."""
    lam = Partition(lam)
    if lam.size != sum(mu):
        raise SizeMismatch(f"|{lam.text()}| != sum of {list(mu)}")
    return hall_littlewood(lam).coefficient(Partition.from_composition(mu))


@dataclass
class AxiomReport:
    lam: Partition
    checks: Dict[str, bool]

    @property
    def ok(self) -> bool:
        return all(self.checks.values())

    def failed(self) -> List[str]:
        return [k for k, v in self.checks.items() if not v]


CHECKS = ("t_triangular", "q_triangular", "normalized", "orthogonal", "norm", "schur_specialization")


def verify_macdonald_axioms(lam: Sequence[int], strict: bool = False) -> AxiomReport:
    lam = Partition(lam)
    n = lam.size
    H = macdonald_htilde(lam)
    lamc = conjugate(lam)
    checks: Dict[str, bool] = {}
    Ht = plethystic_scale(H, t - 1)
    checks["t_triangular"] = all(dominance_leq(nu, lam) for nu in Ht.terms)
    Hq = plethystic_scale(H, q - 1)
    checks["q_triangular"] = all(dominance_leq(nu, lamc) for nu in Hq.terms)
    checks["normalized"] = H.coefficient([n]) == ONE and hall_pair(H, SymFunc.basis_element("h", [n])) == ONE
    checks["orthogonal"] = all(qt_pair(H, macdonald_htilde(mu)).is_zero()
                               for mu in enumerate_partitions(n) if mu != lam)
    checks["norm"] = qt_pair(H, H) == z_qt(lam)
    geo = (1 - q).inverse()
    s_lam = schur(*lam)
    expected = plethystic_scale(s_lam, geo) / evaluate(s_lam, geo)
    checks["schur_specialization"] = H.substitute({"t": q.inverse()}) == expected
    report = AxiomReport(lam, checks)
    if strict and not report.ok:
        raise AxiomViolation(report.failed())
    return report
