"""The HLV kernel, its plethystic logarithm and the Poincare polynomial endpoint.

The kernel for genus g and k marked points is

    sum over lambda of  prod_i N_lambda(sigma_i^-1) / N_lambda(1) * T^|lambda| * prod_j H~_lambda[X_j]

and H^HLV = (q-1)(1-t) pLog(kernel), whose coefficients are Laurent
polynomials in q, t and the sigma_i.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence

from .macdonald import macdonald_htilde
from .partitions import N_u, Partition, SizeMismatch, enumerate_partitions
from .scalars import ONE, ZERO, NotDivisible, Scalar, q, s, sigma, t
from .symfunc import MultiSymSeries, SymFunc, plog


class IntegralityFailure(ArithmeticError):
    """A coefficient that should be a Laurent polynomial is not."""


class NegativeDimension(ValueError):
    pass


@dataclass(frozen=True)
class CurveData:
    g: int
    k: int
    sigma: Optional[Sequence[Scalar]] = None

    def __post_init__(self) -> None:
        if self.g < 0 or self.k < 0:
            raise ValueError("genus and number of points must be nonnegative")
        if self.sigma is None:
            object.__setattr__(self, "sigma", tuple(sigma(i + 1) for i in range(self.g)))
        else:
            object.__setattr__(self, "sigma", tuple(Scalar.coerce(x) for x in self.sigma))
        if len(self.sigma) != self.g:
            raise ValueError(f"expected {self.g} sigma values, got {len(self.sigma)}")


@dataclass(frozen=True)
class ParabolicData:
    """Rank r and, for each marked point, the eigenvalue multiplicities r_i1, ..., r_im."""

    r: int
    mults: Sequence[Sequence[int]] = field(default_factory=tuple)

    def __post_init__(self) -> None:
        mults = tuple(tuple(int(x) for x in row) for row in self.mults)
        object.__setattr__(self, "mults", mults)
        if self.r < 1:
            raise ValueError("rank must be positive")
        for row in mults:
            if any(x < 0 for x in row):
                raise ValueError("multiplicities must be nonnegative")
            if sum(row) != self.r:
                raise ValueError(f"multiplicities {list(row)} do not sum to the rank {self.r}")

    @property
    def k(self) -> int:
        return len(self.mults)

    @classmethod
    def parse(cls, r: int, text: str) -> "ParabolicData":
        text = text.strip()
        rows = [] if not text else [[int(x) for x in part.split(",")] for part in text.split(";")]
        return cls(r, rows)


def kernel_weight(lam: Partition, sigmas: Sequence[Scalar]) -> Scalar:
    out = N_u(lam, ONE).inverse()
    for sg in sigmas:
        out = out * N_u(lam, sg.inverse())
    return out


def hlv_kernel(c: CurveData, nmax: int) -> MultiSymSeries:
    terms: Dict = {}
    for n in range(nmax + 1):
        for lam in enumerate_partitions(n):
            w = kernel_weight(lam, c.sigma)
            H = macdonald_htilde(lam)
            piece = MultiSymSeries.from_symfuncs(nmax, w, [H] * c.k, n)
            for key, v in piece.terms.items():
                terms[key] = terms.get(key, ZERO) + v
    return MultiSymSeries(c.k, nmax, terms)


def certify_laurent(c: Scalar) -> Scalar:
    try:
        c.as_laurent()
    except NotDivisible as exc:
        raise IntegralityFailure(f"coefficient {c} is not a Laurent polynomial") from exc
    return c


def hlv_H(c: CurveData, nmax: int) -> MultiSymSeries:
    """(q-1)(1-t) pLog of the kernel, every coefficient certified polynomial."""
    H = plog(hlv_kernel(c, nmax)) * ((q - 1) * (1 - t))
    for v in H.terms.values():
        certify_laurent(v)
    return H


def dim_moduli(g: int, P: ParabolicData) -> int:
    d = (2 * g - 2 + P.k) * P.r ** 2 - sum(x * x for row in P.mults for x in row) + 2
    if d < 0:
        raise NegativeDimension(f"dimension formula gives {d}")
    if d % 2:
        raise ValueError(f"dimension formula gives the odd value {d}")
    return d


POINCARE_SIGMA = s.inverse()


def poincare_polynomial(g: int, P: ParabolicData) -> Scalar:
    """Poincare polynomial of the character variety as a Laurent polynomial in s = q^(1/2)."""
    dim = dim_moduli(g, P)
    H = hlv_H(CurveData(g, P.k), P.r)
    key = tuple(Partition.from_composition(row) for row in P.mults)
    coeff = H.coefficient(P.r, key)
    # t = 1 is safe only because the coefficient is already certified polynomial
    bind = {"q": s ** -2, "t": 1}
    for i in range(g):
        bind[f"sigma{i + 1}"] = POINCARE_SIGMA
    out = coeff.substitute(bind) * s ** dim
    poly = certify_laurent(out).as_laurent()
    if any(x.denominator != 1 for x in poly.terms.values()):
        raise IntegralityFailure(f"{out} has non-integer coefficients")
    return out


# ---------------------------------------------------------------------------
# Euler forms


@dataclass(frozen=True)
class ParabolicInvariants:
    """Rank, degree and jumps r_ij (one row per marked point) of a parabolic sheaf."""

    rank: int
    degree: int
    jumps: Sequence[Sequence[int]] = ()


def euler_form_parabolic(g: int, E: ParabolicInvariants, F: ParabolicInvariants, d: Sequence[int]) -> int:
    if len(E.jumps) != len(d) or len(F.jumps) != len(d):
        raise ValueError("need one jump row per marked point")
    out = (1 - g) * E.rank * F.rank + E.rank * F.degree - F.rank * E.degree
    for di, re_, rf in zip(d, E.jumps, F.jumps):
        if len(re_) != len(rf):
            raise ValueError("jump rows must have equal length")
        out -= di * sum(re_[j] * rf[jj] for j in range(len(re_)) for jj in range(j + 1, len(rf)))
    return out


def euler_form_higgs(g: int, E: ParabolicInvariants, F: ParabolicInvariants, d: Sequence[int]) -> int:
    if len(E.jumps) != len(d) or len(F.jumps) != len(d):
        raise ValueError("need one jump row per marked point")
    out = (2 - 2 * g - sum(d)) * E.rank * F.rank
    for di, re_, rf in zip(d, E.jumps, F.jumps):
        out += di * sum(a * b for a, b in zip(re_, rf))
    return out


# ---------------------------------------------------------------------------
# counting series on the Macdonald side


def springer_denominator(lam: Partition) -> Scalar:
    out = ONE
    for a, l in lam.arm_legs():
        if l:
            out = out * (1 - t ** l * q ** (-a - 1))
    return out


def count_gets_macdonald_series(lam: Sequence[int], dmax: int) -> List[SymFunc]:
    """H~_lambda / prod over cells with l != 0 of (1 - t^l q^(-a-1)) as a t-series of SymFuncs."""
    lam = Partition(lam)
    den = springer_denominator(lam)
    H = macdonald_htilde(lam)
    layers: List[Dict] = [{} for _ in range(dmax + 1)]
    for mu, c in H.terms.items():
        for j, v in enumerate((c / den).series("t", dmax)):
            if not v.is_zero():
                layers[j][mu] = v
    return [SymFunc(layer, "m") for layer in layers]


def springer_count(lam: Sequence[int], mu: Sequence[int], dmax: int) -> List[Scalar]:
    lam = Partition(lam)
    if lam.size != sum(mu):
        raise SizeMismatch(f"|{lam.text()}| != sum of {list(mu)}")
    key = Partition.from_composition(mu)
    return [layer.coefficient(key) for layer in count_gets_macdonald_series(lam, dmax)]
