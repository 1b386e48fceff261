"""Symmetric functions in one or several alphabets.

Single-alphabet elements are :class:`SymFunc` objects, a basis tag plus a
sparse map from partitions to :class:`~hlvkit.scalars.Scalar` coefficients.
Graded series in k alphabets, where every alphabet carries the same degree
as the formal variable T, are :class:`MultiSymSeries` objects.

All basis changes go through the power sums, using rational transition
matrices built once per degree.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from itertools import product
from typing import Callable, Dict, Iterable, List, Mapping, Optional, Sequence, Tuple, Union

import flint

from .partitions import Partition, enumerate_partitions
from .scalars import ONE, ZERO, Coercible, Scalar, q, t

BASES = ("m", "h", "e", "p", "s")

_degree_cap = 12


class SymFuncError(ValueError):
    pass


class DegreeCapExceeded(SymFuncError):
    pass


class UnsupportedLeaf(SymFuncError):
    pass


class ConstantTermPresent(SymFuncError):
    pass


class BadConstantTerm(SymFuncError):
    pass


class MixedDegree(SymFuncError):
    """A multi-alphabet result whose alphabets do not share one degree."""


def set_degree_cap(n: int) -> None:
    global _degree_cap
    _degree_cap = n


def degree_cap() -> int:
    return _degree_cap


def _part(parts) -> Partition:
    # parts already known to be sorted and positive
    return tuple.__new__(Partition, parts)


def _merge(a: Partition, b: Partition) -> Partition:
    if not a:
        return b
    if not b:
        return a
    return _part(sorted(a + b, reverse=True))


# ---------------------------------------------------------------------------
# transition matrices


def _check_cap(n: int) -> None:
    if n > _degree_cap:
        raise DegreeCapExceeded(f"degree {n} exceeds the configured cap {_degree_cap}")


def _p_to_m_row(lam: Partition, n: int) -> Dict[Partition, int]:
    """Coefficients of p_lam in the monomial basis.

    The coefficient of m_mu counts the ways of distributing the parts of lam
    into labelled boxes whose contents sum to the parts of mu.
    """
    out: Dict[Partition, int] = {}
    for mu in enumerate_partitions(n):
        cnt = _count_fillings(tuple(lam), tuple(mu))
        if cnt:
            out[mu] = cnt
    return out


@lru_cache(maxsize=None)
def _count_fillings(parts: Tuple[int, ...], boxes: Tuple[int, ...]) -> int:
    if not parts:
        return 1 if not any(boxes) else 0
    first, rest = parts[0], parts[1:]
    total = 0
    for i, b in enumerate(boxes):
        if b >= first:
            nb = list(boxes)
            nb[i] -= first
            total += _count_fillings(rest, tuple(nb))
    return total


def _power_sum_expansion(n: int, sign: bool) -> Dict[Partition, Fraction]:
    # h_n (sign False) or e_n (sign True) in the p basis
    out = {}
    for nu in enumerate_partitions(n):
        c = Fraction(1, nu.z())
        if sign and (n - len(nu)) % 2:
            c = -c
        out[nu] = c
    return out


def _pmul(a: Mapping[Partition, Fraction], b: Mapping[Partition, Fraction]) -> Dict[Partition, Fraction]:
    out: Dict[Partition, Fraction] = {}
    for la, ca in a.items():
        for lb, cb in b.items():
            key = _merge(la, lb)
            out[key] = out.get(key, 0) + ca * cb
    return {k: v for k, v in out.items() if v}


def _multiplicative_in_p(lam: Partition, sign: bool) -> Dict[Partition, Fraction]:
    out: Dict[Partition, Fraction] = {_part(()): Fraction(1)}
    for part in lam:
        out = _pmul(out, _power_sum_expansion(part, sign))
    return out


def _schur_in_p(lam: Partition) -> Dict[Partition, Fraction]:
    """Jacobi-Trudi determinant det(h_{lam_i - i + j}) expanded in the p basis."""
    ell = len(lam)
    if ell == 0:
        return {_part(()): Fraction(1)}

    def entry(i: int, j: int) -> Optional[Dict[Partition, Fraction]]:
        k = lam[i] - i + j
        if k < 0:
            return None
        return _power_sum_expansion(k, False) if k else {_part(()): Fraction(1)}

    memo: Dict[Tuple[int, int], Dict[Partition, Fraction]] = {}

    def det(row: int, cols: int) -> Dict[Partition, Fraction]:
        # Laplace expansion along ``row`` over the still-unused columns
        if row == ell:
            return {_part(()): Fraction(1)}
        key = (row, cols)
        if key in memo:
            return memo[key]
        out: Dict[Partition, Fraction] = {}
        sign = 1
        for j in range(ell):
            if cols >> j & 1:
                continue
            e = entry(row, j)
            if e is not None:
                sub = det(row + 1, cols | (1 << j))
                for k, v in _pmul(e, sub).items():
                    out[k] = out.get(k, 0) + sign * v
            sign = -sign
        out = {k: v for k, v in out.items() if v}
        memo[key] = out
        return out

    return det(0, 0)


def _to_p_matrix(basis: str, n: int) -> "flint.fmpq_mat":
    parts = enumerate_partitions(n)
    idx = {lam: i for i, lam in enumerate(parts)}
    size = len(parts)
    rows = [[0] * size for _ in range(size)]
    for i, lam in enumerate(parts):
        if basis == "p":
            row = {lam: Fraction(1)}
        elif basis == "h":
            row = _multiplicative_in_p(lam, False)
        elif basis == "e":
            row = _multiplicative_in_p(lam, True)
        elif basis == "s":
            row = _schur_in_p(lam)
        else:
            raise ValueError(basis)
        for mu, c in row.items():
            rows[i][idx[mu]] = flint.fmpq(c.numerator, c.denominator)
    return flint.fmpq_mat(rows)


def _p_to_m_matrix(n: int) -> "flint.fmpq_mat":
    parts = enumerate_partitions(n)
    idx = {lam: i for i, lam in enumerate(parts)}
    rows = [[0] * len(parts) for _ in parts]
    for i, lam in enumerate(parts):
        for mu, c in _p_to_m_row(lam, n).items():
            rows[i][idx[mu]] = c
    return flint.fmpq_mat(rows)


@lru_cache(maxsize=None)
def _basis_to_p(basis: str, n: int) -> "flint.fmpq_mat":
    if basis == "m":
        return _p_to_m_matrix(n).inv()
    return _to_p_matrix(basis, n)


@lru_cache(maxsize=None)
def _p_to_basis(basis: str, n: int) -> "flint.fmpq_mat":
    if basis == "m":
        return _p_to_m_matrix(n)
    if basis == "p":
        return _to_p_matrix("p", n)
    return _to_p_matrix(basis, n).inv()


def transition(src: str, dst: str, n: int) -> Dict[Partition, Tuple[Tuple[Partition, Fraction], ...]]:
    """Rows of the change of basis: src_lam = sum of c * dst_mu over the row of lam."""
    for b in (src, dst):
        if b not in BASES:
            raise ValueError(f"unknown basis {b!r}")
    _check_cap(n)  # outside the cache so a lowered cap still applies
    return _transition(src, dst, n)


@lru_cache(maxsize=None)
def _transition(src: str, dst: str, n: int) -> Dict[Partition, Tuple[Tuple[Partition, Fraction], ...]]:
    parts = enumerate_partitions(n)
    if src == dst:
        return {lam: ((lam, Fraction(1)),) for lam in parts}
    mat = _basis_to_p(src, n) * _p_to_basis(dst, n)
    out = {}
    for i, lam in enumerate(parts):
        row = []
        for j, mu in enumerate(parts):
            c = mat[i, j]
            if c != 0:
                row.append((mu, Fraction(int(c.p), int(c.q))))
        out[lam] = tuple(row)
    return out


# ---------------------------------------------------------------------------
# SymFunc


def _fmt_coeff_factor(c: Scalar) -> Tuple[bool, str]:
    """(negative, text) for a coefficient printed in front of a basis element."""
    txt = c.to_text().replace(" ", "")
    if c.d.is_one() and len(c.n) == 1:
        # a single monomial: pull out the sign, bracket only a fractional constant
        neg = txt.startswith("-")
        txt = txt[1:] if neg else txt
        if txt == "1":
            return neg, ""
        return neg, (f"({txt})" if "/" in txt else txt) + "*"
    return False, f"({txt})*"


def format_terms(items: Sequence[Tuple[str, Scalar]]) -> str:
    """Join (basis element, coefficient) pairs as ``c1*b1 + c2*b2``."""
    out = []
    for k, (elem, c) in enumerate(items):
        neg, pre = _fmt_coeff_factor(c)
        body = pre + elem
        if k == 0:
            out.append(("-" if neg else "") + body)
        else:
            out.append((" - " if neg else " + ") + body)
    return "".join(out) if out else "0"


def _order_key(lam: Partition):
    # reverse lexicographic within a degree, degrees ascending
    return (sum(lam), tuple(-x for x in lam))


class SymFunc:
    """A symmetric function in one alphabet, stored in a fixed basis."""

    __slots__ = ("basis", "terms")

    def __init__(self, terms: Mapping[Sequence[int], Coercible] = (), basis: str = "m") -> None:
        if basis not in BASES:
            raise ValueError(f"unknown basis {basis!r}")
        self.basis = basis
        clean: Dict[Partition, Scalar] = {}
        for lam, c in dict(terms).items():
            c = Scalar.coerce(c)
            if not c.is_zero():
                lam = lam if isinstance(lam, Partition) else Partition(lam)
                clean[lam] = c
        self.terms = clean

    @classmethod
    def basis_element(cls, basis: str, lam: Sequence[int]) -> "SymFunc":
        return cls({Partition(lam): ONE}, basis)

    @classmethod
    def one(cls) -> "SymFunc":
        return cls({Partition(): ONE}, "m")

    @classmethod
    def zero(cls, basis: str = "m") -> "SymFunc":
        return cls({}, basis)

    def is_zero(self) -> bool:
        return not self.terms

    def degrees(self) -> List[int]:
        return sorted({lam.size for lam in self.terms})

    def coefficient(self, lam: Sequence[int]) -> Scalar:
        return self.terms.get(Partition(lam), ZERO)

    def homogeneous_part(self, n: int) -> "SymFunc":
        return SymFunc({lam: c for lam, c in self.terms.items() if lam.size == n}, self.basis)

    def to(self, basis: str) -> "SymFunc":
        if basis == self.basis:
            return self
        out: Dict[Partition, Scalar] = {}
        for lam, c in self.terms.items():
            for mu, k in transition(self.basis, basis, lam.size)[lam]:
                out[mu] = out.get(mu, ZERO) + c * k
        return SymFunc(out, basis)

    def map_coefficients(self, f: Callable[[Scalar], Scalar]) -> "SymFunc":
        return SymFunc({lam: f(c) for lam, c in self.terms.items()}, self.basis)

    def substitute(self, bindings: Mapping[str, Coercible]) -> "SymFunc":
        return self.map_coefficients(lambda c: c.substitute(bindings))

    def _coerce(self, other) -> "SymFunc":
        if isinstance(other, SymFunc):
            return other.to(self.basis)
        return SymFunc({Partition(): Scalar.coerce(other)}, "m").to(self.basis)

    def __add__(self, other) -> "SymFunc":
        other = self._coerce(other)
        out = dict(self.terms)
        for lam, c in other.terms.items():
            out[lam] = out.get(lam, ZERO) + c
        return SymFunc(out, self.basis)

    __radd__ = __add__

    def __neg__(self) -> "SymFunc":
        return SymFunc({lam: -c for lam, c in self.terms.items()}, self.basis)

    def __sub__(self, other) -> "SymFunc":
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "SymFunc":
        return self._coerce(other) - self

    def __mul__(self, other) -> "SymFunc":
        if isinstance(other, SymFunc):
            return self._product(other)
        c = Scalar.coerce(other)
        return SymFunc({lam: v * c for lam, v in self.terms.items()}, self.basis)

    __rmul__ = __mul__

    def __truediv__(self, other: Coercible) -> "SymFunc":
        return self * Scalar.coerce(other).inverse()

    def __pow__(self, k: int) -> "SymFunc":
        out = SymFunc.one().to(self.basis)
        for _ in range(k):
            out = out * self
        return out

    def _product(self, other: "SymFunc") -> "SymFunc":
        if self.basis == other.basis and self.basis in ("h", "e", "p"):
            a, b, basis = self, other, self.basis
        else:
            a, b, basis = self.to("p"), other.to("p"), "p"
        out: Dict[Partition, Scalar] = {}
        for la, ca in a.terms.items():
            for lb, cb in b.terms.items():
                key = _merge(la, lb)
                out[key] = out.get(key, ZERO) + ca * cb
        res = SymFunc(out, basis)
        return res if basis == self.basis else res.to(self.basis)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, SymFunc):
            a = self.to("m")
            b = other.to("m")
            return a.terms == b.terms
        if isinstance(other, (int, Fraction, Scalar)):
            return self == self._coerce(other)
        return NotImplemented

    def __hash__(self) -> int:
        return hash(frozenset(self.to("m").terms.items()))

    def sorted_items(self) -> List[Tuple[Partition, Scalar]]:
        return sorted(self.terms.items(), key=lambda kv: _order_key(kv[0]))

    def to_text(self) -> str:
        return format_terms([(f"{self.basis}[{lam.text() if lam else ''}]", c)
                             for lam, c in self.sorted_items()])

    __str__ = to_text

    def __repr__(self) -> str:
        return f"SymFunc({self.to_text()!r})"

    def to_json(self) -> dict:
        return {
            "basis": self.basis,
            "terms": [{"partition": list(lam), "coeff": c.to_json()} for lam, c in self.sorted_items()],
        }


def m(*lam: int) -> SymFunc:
    return SymFunc.basis_element("m", lam)


def h(*lam: int) -> SymFunc:
    return SymFunc.basis_element("h", lam)


def e(*lam: int) -> SymFunc:
    return SymFunc.basis_element("e", lam)


def p(*lam: int) -> SymFunc:
    return SymFunc.basis_element("p", lam)


def schur(*lam: int) -> SymFunc:
    return SymFunc.basis_element("s", lam)


def convert_basis(F: SymFunc, target: str) -> SymFunc:
    return F.to(target)


def hall_pair(F: SymFunc, G: SymFunc) -> Scalar:
    """The Hall scalar product, read off as (h-coefficients of F) . (m-coefficients of G)."""
    Fh = F.to("h")
    Gm = G.to("m")
    out = ZERO
    for lam, c in Fh.terms.items():
        d = Gm.terms.get(lam)
        if d is not None:
            out = out + c * d
    return out


# ---------------------------------------------------------------------------
# alphabets and plethysm

AlphaKey = Tuple[int, ...]


def _trim(key: Sequence[int]) -> AlphaKey:
    key = list(key)
    while key and key[-1] == 0:
        key.pop()
    return tuple(key)


class AlphabetExpr:
    """A polynomial in alphabet symbols X_1, X_2, ... with Scalar coefficients.

    A key ``(a_1, ..., a_k)`` stands for the product X_1^a_1 ... X_k^a_k.  Any
    Scalar may appear as a coefficient; p_n acts on it by v -> v^n on every
    variable, which covers monomials and geometric factors like 1/(1-t).
    """

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping[Sequence[int], Coercible] = ()) -> None:
        clean: Dict[AlphaKey, Scalar] = {}
        for k, c in dict(terms).items():
            if not isinstance(c, (Scalar, int, Fraction)) or isinstance(c, bool):
                raise UnsupportedLeaf(f"cannot use {type(c).__name__} inside an alphabet")
            c = Scalar.coerce(c)
            key = _trim(k)
            if any(x < 0 for x in key):
                raise UnsupportedLeaf("alphabet symbols cannot have negative powers")
            c = clean.get(key, ZERO) + c
            if c.is_zero():
                clean.pop(key, None)
            else:
                clean[key] = c
        self.terms = clean

    @classmethod
    def symbol(cls, i: int) -> "AlphabetExpr":
        if i < 1:
            raise ValueError("alphabets are numbered from 1")
        return cls({(0,) * (i - 1) + (1,): ONE})

    @property
    def n_alphabets(self) -> int:
        return max((len(k) for k in self.terms), default=0)

    @staticmethod
    def _wrap(x) -> "AlphabetExpr":
        if isinstance(x, AlphabetExpr):
            return x
        return AlphabetExpr({(): x})

    def __add__(self, other) -> "AlphabetExpr":
        other = self._wrap(other)
        out = dict(self.terms)
        for k, c in other.terms.items():
            out[k] = out.get(k, ZERO) + c
        return AlphabetExpr(out)

    __radd__ = __add__

    def __neg__(self) -> "AlphabetExpr":
        return AlphabetExpr({k: -c for k, c in self.terms.items()})

    def __sub__(self, other) -> "AlphabetExpr":
        return self + (-self._wrap(other))

    def __rsub__(self, other) -> "AlphabetExpr":
        return self._wrap(other) - self

    def __mul__(self, other) -> "AlphabetExpr":
        other = self._wrap(other)
        out: Dict[AlphaKey, Scalar] = {}
        for ka, ca in self.terms.items():
            for kb, cb in other.terms.items():
                n = max(len(ka), len(kb))
                key = tuple((ka[i] if i < len(ka) else 0) + (kb[i] if i < len(kb) else 0) for i in range(n))
                out[key] = out.get(key, ZERO) + ca * cb
        return AlphabetExpr(out)

    __rmul__ = __mul__

    def __truediv__(self, other: Coercible) -> "AlphabetExpr":
        return self * Scalar.coerce(other).inverse()

    def power_sum(self, n: int, k: int) -> Dict[Tuple[Partition, ...], Scalar]:
        """p_n of this expression as a k-alphabet element in the p basis."""
        out: Dict[Tuple[Partition, ...], Scalar] = {}
        for key, c in self.terms.items():
            key = key + (0,) * (k - len(key))
            tup = tuple(_part((n,) * a) for a in key)
            out[tup] = out.get(tup, ZERO) + c.frobenius(n)
        return out

    def __repr__(self) -> str:
        parts = []
        for key, c in self.terms.items():
            sym = "*".join(f"X{i + 1}" + (f"^{a}" if a > 1 else "") for i, a in enumerate(key) if a)
            parts.append(f"({c})" + ("*" + sym if sym else ""))
        return "AlphabetExpr(" + " + ".join(parts) + ")"


X1 = AlphabetExpr.symbol(1)
X2 = AlphabetExpr.symbol(2)

MultiKey = Tuple[Partition, ...]


def _multi_mul(a: Mapping[MultiKey, Scalar], b: Mapping[MultiKey, Scalar],
               keep: Optional[Callable[[MultiKey], bool]] = None) -> Dict[MultiKey, Scalar]:
    out: Dict[MultiKey, Scalar] = {}
    for ka, ca in a.items():
        for kb, cb in b.items():
            key = tuple(_merge(x, y) for x, y in zip(ka, kb))
            if keep is not None and not keep(key):
                continue
            out[key] = out.get(key, ZERO) + ca * cb
    return {k: v for k, v in out.items() if not v.is_zero()}


def plethysm(F: SymFunc, A: Union[AlphabetExpr, Coercible], k: Optional[int] = None):
    """F[A] for an alphabet expression A.

    Returns a Scalar when A involves no alphabet, a SymFunc for one alphabet
    and a MultiSymSeries for two or more.
    """
    A = AlphabetExpr._wrap(A)
    if k is None:
        k = A.n_alphabets
    Fp = F.to("p")
    cache: Dict[int, Dict[MultiKey, Scalar]] = {}
    unit: Dict[MultiKey, Scalar] = {tuple(_part(()) for _ in range(k)): ONE}
    total: Dict[MultiKey, Scalar] = {}
    for lam, c in Fp.terms.items():
        acc = unit
        for part in lam:
            if part not in cache:
                cache[part] = A.power_sum(part, k)
            acc = _multi_mul(acc, cache[part])
        for key, v in acc.items():
            total[key] = total.get(key, ZERO) + c * v
    total = {kk: v for kk, v in total.items() if not v.is_zero()}
    if k == 0:
        return total.get((), ZERO)
    if k == 1:
        return SymFunc({kk[0]: v for kk, v in total.items()}, "p").to("m")
    return MultiSymSeries.from_p_terms(k, total)


def evaluate(F: SymFunc, c: Coercible) -> Scalar:
    """F[c] for a scalar plethystic argument, e.g. F[1/(1-q)]."""
    return plethysm(F, AlphabetExpr._wrap(c), k=0)


def qt_pair(F: SymFunc, G: SymFunc) -> Scalar:
    return hall_pair(F, plethysm(G, (q - 1) * (1 - t) * X1, k=1))


# ---------------------------------------------------------------------------
# MultiSymSeries

SeriesKey = Tuple[int, MultiKey]


class MultiSymSeries:
    """A series sum_n T^n F_n with F_n a k-alphabet symmetric function of degree n in each alphabet."""

    __slots__ = ("k", "nmax", "basis", "terms")

    def __init__(self, k: int, nmax: int, terms: Mapping[Tuple[int, Sequence[Sequence[int]]], Coercible] = (),
                 basis: str = "m") -> None:
        if basis not in BASES:
            raise ValueError(f"unknown basis {basis!r}")
        self.k = k
        self.nmax = nmax
        self.basis = basis
        clean: Dict[SeriesKey, Scalar] = {}
        for (n, tup), c in dict(terms).items():
            tup = tuple(x if isinstance(x, Partition) else Partition(x) for x in tup)
            if len(tup) != k:
                raise ValueError(f"expected {k} partitions, got {len(tup)}")
            if any(lam.size != n for lam in tup):
                raise MixedDegree(f"partition sizes {[lam.size for lam in tup]} differ from T-degree {n}")
            if n > nmax:
                continue
            c = Scalar.coerce(c)
            if not c.is_zero():
                key = (n, tup)
                c = clean.get(key, ZERO) + c
                if c.is_zero():
                    del clean[key]
                else:
                    clean[key] = c
        self.terms = clean

    @classmethod
    def from_p_terms(cls, k: int, terms: Mapping[MultiKey, Scalar], nmax: Optional[int] = None,
                     basis: str = "m") -> "MultiSymSeries":
        """Build from k-alphabet p-basis terms with no T attached (degree read off the partitions)."""
        out = {}
        for tup, c in terms.items():
            sizes = {lam.size for lam in tup}
            if len(sizes) > 1:
                raise MixedDegree(f"alphabet degrees {sorted(sizes)} differ")
            n = sizes.pop() if sizes else 0
            out[(n, tup)] = c
        if nmax is None:
            nmax = max((n for n, _ in out), default=0)
        return cls(k, nmax, out, "p").to(basis)

    @classmethod
    def from_symfuncs(cls, nmax: int, coeff: Coercible, factors: Sequence[SymFunc], n: int) -> "MultiSymSeries":
        """coeff * T^n * factors[0][X_1] * ... * factors[k-1][X_k] in the m basis."""
        out: Dict[Tuple[int, MultiKey], Scalar] = {}
        c0 = Scalar.coerce(coeff)
        parts = [sorted(f.to("m").terms.items()) for f in factors]
        for combo in product(*parts):
            c = c0
            for _, v in combo:
                c = c * v
            key = (n, tuple(lam for lam, _ in combo))
            out[key] = out.get(key, ZERO) + c
        return cls(len(factors), nmax, out, "m")

    @classmethod
    def constant(cls, k: int, nmax: int, c: Coercible = 1, basis: str = "m") -> "MultiSymSeries":
        return cls(k, nmax, {(0, tuple(Partition() for _ in range(k))): c}, basis)

    def copy_with(self, terms: Mapping[SeriesKey, Scalar], nmax: Optional[int] = None,
                  basis: Optional[str] = None) -> "MultiSymSeries":
        return MultiSymSeries(self.k, self.nmax if nmax is None else nmax, terms,
                              self.basis if basis is None else basis)

    def is_zero(self) -> bool:
        return not self.terms

    def degree(self, n: int) -> "MultiSymSeries":
        return self.copy_with({key: c for key, c in self.terms.items() if key[0] == n})

    def truncate(self, nmax: int) -> "MultiSymSeries":
        return self.copy_with({key: c for key, c in self.terms.items() if key[0] <= nmax}, nmax=min(nmax, self.nmax))

    def coefficient(self, n: int, tup: Sequence[Sequence[int]]) -> Scalar:
        return self.terms.get((n, tuple(Partition(x) for x in tup)), ZERO)

    def to(self, basis: str) -> "MultiSymSeries":
        if basis == self.basis:
            return self
        out: Dict[SeriesKey, Scalar] = {}
        for (n, tup), c in self.terms.items():
            rows = [transition(self.basis, basis, n)[lam] for lam in tup]
            for combo in product(*rows):
                coeff = Fraction(1)
                for _, x in combo:
                    coeff *= x
                key = (n, tuple(mu for mu, _ in combo))
                out[key] = out.get(key, ZERO) + c * coeff
        return self.copy_with(out, basis=basis)

    def map_coefficients(self, f: Callable[[Scalar], Scalar]) -> "MultiSymSeries":
        return self.copy_with({key: f(c) for key, c in self.terms.items()})

    def substitute(self, bindings: Mapping[str, Coercible]) -> "MultiSymSeries":
        return self.map_coefficients(lambda c: c.substitute(bindings))

    def _same_shape(self, other: "MultiSymSeries") -> "MultiSymSeries":
        if not isinstance(other, MultiSymSeries):
            raise TypeError("expected a MultiSymSeries")
        if other.k != self.k:
            raise ValueError(f"alphabet counts differ: {self.k} vs {other.k}")
        return other.to(self.basis)

    def __add__(self, other: "MultiSymSeries") -> "MultiSymSeries":
        other = self._same_shape(other)
        out = dict(self.terms)
        for key, c in other.terms.items():
            out[key] = out.get(key, ZERO) + c
        return self.copy_with(out, nmax=min(self.nmax, other.nmax))

    def __neg__(self) -> "MultiSymSeries":
        return self.map_coefficients(lambda c: -c)

    def __sub__(self, other: "MultiSymSeries") -> "MultiSymSeries":
        return self + (-other)

    def __mul__(self, other) -> "MultiSymSeries":
        if isinstance(other, MultiSymSeries):
            return self._product(other)
        c = Scalar.coerce(other)
        return self.map_coefficients(lambda v: v * c)

    __rmul__ = __mul__

    def __truediv__(self, other: Coercible) -> "MultiSymSeries":
        return self * Scalar.coerce(other).inverse()

    def _product(self, other: "MultiSymSeries") -> "MultiSymSeries":
        other = self._same_shape(other)
        nmax = min(self.nmax, other.nmax)
        a = self.to("p")
        b = other.to("p")
        out = _series_mul(a.terms, b.terms, nmax)
        return MultiSymSeries(self.k, nmax, out, "p").to(self.basis)

    def frobenius(self, j: int) -> "MultiSymSeries":
        """p_j applied to the series, T included; the result stays in the p basis."""
        src = self.to("p")
        out = {}
        for (n, tup), c in src.terms.items():
            if n * j <= self.nmax:
                out[(n * j, tuple(_part(tuple(x * j for x in lam)) for lam in tup))] = c.frobenius(j)
        return MultiSymSeries(self.k, self.nmax, out, "p")

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, MultiSymSeries):
            return NotImplemented
        if other.k != self.k:
            return False
        nmax = min(self.nmax, other.nmax)
        a = self.truncate(nmax).to("m")
        b = other.truncate(nmax).to("m")
        return a.terms == b.terms

    def __hash__(self) -> int:
        return hash(frozenset(self.to("m").terms.items()))

    def sorted_items(self) -> List[Tuple[SeriesKey, Scalar]]:
        return sorted(self.terms.items(), key=lambda kv: (kv[0][0], [_order_key(lam) for lam in kv[0][1]]))

    def to_text(self) -> str:
        items = []
        for (n, tup), c in self.sorted_items():
            factors = [f"{self.basis}[{lam.text() if lam else ''}](X{i + 1})" for i, lam in enumerate(tup) if lam]
            tpow = "" if n == 0 else ("T" if n == 1 else f"T^{n}")
            elem = "*".join(([tpow] if tpow else []) + factors) or "1"
            items.append((elem, c))
        return format_terms(items)

    __str__ = to_text

    def __repr__(self) -> str:
        return f"MultiSymSeries(k={self.k}, nmax={self.nmax}, {self.to_text()!r})"

    def to_json(self) -> list:
        return [{"T": n, "tuple": [list(lam) for lam in tup], "coeff": c.to_json()}
                for (n, tup), c in self.sorted_items()]


def _series_mul(a: Mapping[SeriesKey, Scalar], b: Mapping[SeriesKey, Scalar], nmax: int) -> Dict[SeriesKey, Scalar]:
    out: Dict[SeriesKey, Scalar] = {}
    for (na, ta), ca in a.items():
        for (nb, tb), cb in b.items():
            n = na + nb
            if n > nmax:
                continue
            key = (n, tuple(_merge(x, y) for x, y in zip(ta, tb)))
            out[key] = out.get(key, ZERO) + ca * cb
    return out


def _slices(terms: Mapping[SeriesKey, Scalar]) -> Dict[int, Dict[SeriesKey, Scalar]]:
    out: Dict[int, Dict[SeriesKey, Scalar]] = {}
    for key, c in terms.items():
        out.setdefault(key[0], {})[key] = c
    return out


def _pexp_p(Hp: MultiSymSeries) -> Dict[SeriesKey, Scalar]:
    """pexp in the p basis through the recurrence d * W_d = sum_j j * L_j * W_(d-j)."""
    N = Hp.nmax
    L: Dict[SeriesKey, Scalar] = {}
    for j in range(1, N + 1):
        for key, c in Hp.frobenius(j).terms.items():
            L[key] = L.get(key, ZERO) + c / j
    Ls = _slices(L)
    unit = (0, tuple(_part(()) for _ in range(Hp.k)))
    W: Dict[int, Dict[SeriesKey, Scalar]] = {0: {unit: ONE}}
    for d in range(1, N + 1):
        acc: Dict[SeriesKey, Scalar] = {}
        for j in range(1, d + 1):
            if j not in Ls or not W[d - j]:
                continue
            for key, c in _series_mul(Ls[j], W[d - j], N).items():
                acc[key] = acc.get(key, ZERO) + c * j
        W[d] = {key: c / d for key, c in acc.items() if not c.is_zero()}
    out: Dict[SeriesKey, Scalar] = {}
    for sl in W.values():
        out.update(sl)
    return out


def pexp(H: MultiSymSeries) -> MultiSymSeries:
    """The plethystic exponential exp(sum_n p_n[H]/n), truncated at T^nmax."""
    if any(n == 0 for n, _ in H.terms):
        raise ConstantTermPresent("pexp needs a series without T^0 term")
    out = _pexp_p(H.to("p"))
    return MultiSymSeries(H.k, H.nmax, out, "p").to(H.basis)


def plog(W: MultiSymSeries) -> MultiSymSeries:
    """The inverse of :func:`pexp`, solved one T-degree at a time."""
    Wp = W.to("p")
    unit = (0, tuple(Partition() for _ in range(W.k)))
    const = {key: c for key, c in Wp.terms.items() if key[0] == 0}
    if const != {unit: ONE}:
        raise BadConstantTerm("plog needs constant term exactly 1")
    target = _slices(Wp.terms)
    H: Dict[SeriesKey, Scalar] = {}
    for d in range(1, W.nmax + 1):
        have = _pexp_p(MultiSymSeries(W.k, d, H, "p"))
        for key, c in target.get(d, {}).items():
            H[key] = H.get(key, ZERO) + c
        for key, c in have.items():
            if key[0] == d:
                H[key] = H.get(key, ZERO) - c
        H = {key: c for key, c in H.items() if not c.is_zero()}
    return MultiSymSeries(W.k, W.nmax, H, "p").to(W.basis)


def cauchy_kernel(k: int, nmax: int) -> Tuple[MultiSymSeries, MultiSymSeries]:
    """pExp[T X Y] computed as a pexp and as sum over lambda of T^|lambda| h_lambda[X] m_lambda[Y].

    Both are returned in the m basis.
    """
    if k != 2:
        raise ValueError("the Cauchy kernel is defined for two alphabets")
    gen = MultiSymSeries(2, nmax, {(1, (Partition([1]), Partition([1]))): ONE})
    via_pexp = pexp(gen)
    direct: Dict[SeriesKey, Scalar] = {}
    for n in range(nmax + 1):
        for lam in enumerate_partitions(n):
            for mu, c in transition("h", "m", n)[lam]:
                key = (n, (mu, lam))
                direct[key] = direct.get(key, ZERO) + Scalar.const(c)
    return via_pexp, MultiSymSeries(2, nmax, direct)
