"""Linear algebra over truncated power series F_p[[x]] and their Laurent extension.

Every entry carries its own absolute precision: an :class:`LSeries` with
``prec = N`` is known modulo x^N.  Arithmetic propagates precision the way
p-adic arithmetic does, so a result never claims more digits than its
inputs determine.  Any decision that depends on an unknown digit raises
:class:`InsufficientPrecision` instead of guessing.
"""

from __future__ import annotations

import random
import re
from dataclasses import dataclass
from typing import Callable, Iterable, List, Optional, Sequence, Tuple

from .partitions import Partition

SUPPORTED_PRIMES = (2, 3, 5)


class SeriesError(ArithmeticError):
    pass


class InsufficientPrecision(SeriesError):
    pass


class NotNilpotent(SeriesError):
    pass


def _check_prime(p: int) -> None:
    if p not in SUPPORTED_PRIMES:
        raise ValueError(f"p must be one of {SUPPORTED_PRIMES}, got {p}")


class Fp(int):
    """An element of the prime field F_p as a plain residue in [0, p)."""

    def __new__(cls, value: int, p: int) -> "Fp":
        _check_prime(p)
        self = super().__new__(cls, value % p)
        self.p = p
        return self


class LSeries:
    """A Laurent series over F_p known modulo x^prec.

    ``coeffs[i]`` is the coefficient of x^(start + i); ``coeffs`` has no
    leading or trailing zeros and every exponent in it is below ``prec``.
    An element with no coefficients is zero to precision.
    """

    __slots__ = ("p", "start", "coeffs", "prec")

    def __init__(self, p: int, coeffs: Sequence[int], prec: int, start: int = 0) -> None:
        cs = [c % p for c in coeffs[: max(prec - start, 0)]]
        k = 0
        while k < len(cs) and cs[k] == 0:
            k += 1
        cs = cs[k:]
        while cs and cs[-1] == 0:
            cs.pop()
        self.p = p
        self.start = start + k if cs else prec
        self.coeffs = cs
        self.prec = prec

    @classmethod
    def const(cls, c: int, p: int, prec: int) -> "LSeries":
        return cls(p, [c], prec)

    @classmethod
    def zero(cls, p: int, prec: int) -> "LSeries":
        return cls(p, [], prec)

    @classmethod
    def monomial(cls, c: int, k: int, p: int, prec: int) -> "LSeries":
        return cls(p, [c], prec, start=k)

    def is_zero(self) -> bool:
        """True when the series vanishes to its precision."""
        return not self.coeffs

    @property
    def val(self) -> Optional[int]:
        return self.start if self.coeffs else None

    def lower_val(self) -> int:
        """A certified lower bound on the true valuation."""
        return self.start

    def coeff(self, k: int) -> int:
        if k >= self.prec:
            raise InsufficientPrecision(f"coefficient of x^{k} requested at precision {self.prec}")
        i = k - self.start
        if 0 <= i < len(self.coeffs):
            return self.coeffs[i]
        return 0

    def _dense(self, lo: int, hi: int) -> List[int]:
        return [self.coeff(k) if k < self.prec else 0 for k in range(lo, hi)]

    def __add__(self, other: "LSeries") -> "LSeries":
        prec = min(self.prec, other.prec)
        lo = min(self.start, other.start, prec)
        a = self._dense(lo, prec)
        b = other._dense(lo, prec)
        return LSeries(self.p, [x + y for x, y in zip(a, b)], prec, lo)

    def __neg__(self) -> "LSeries":
        return LSeries(self.p, [-c for c in self.coeffs], self.prec, self.start)

    def __sub__(self, other: "LSeries") -> "LSeries":
        return self + (-other)

    def __mul__(self, other: "LSeries") -> "LSeries":
        prec = min(self.prec + other.start, other.prec + self.start)
        start = self.start + other.start
        if not self.coeffs or not other.coeffs:
            return LSeries.zero(self.p, prec)
        n = max(prec - start, 0)
        out = [0] * n
        for i, a in enumerate(self.coeffs):
            if i >= n:
                break
            if a:
                for j, b in enumerate(other.coeffs[: n - i]):
                    out[i + j] += a * b
        return LSeries(self.p, out, prec, start)

    def scale(self, c: int) -> "LSeries":
        return LSeries(self.p, [c * x for x in self.coeffs], self.prec, self.start)

    def inverse(self) -> "LSeries":
        if not self.coeffs:
            raise InsufficientPrecision("inverting a series that is zero to precision")
        v = self.start
        rel = self.prec - v
        u = self.coeffs + [0] * max(rel - len(self.coeffs), 0)
        inv0 = pow(u[0], self.p - 2, self.p)
        out = [inv0] + [0] * (rel - 1)
        for k in range(1, rel):
            acc = 0
            for i in range(1, min(k, len(self.coeffs) - 1) + 1):
                acc += u[i] * out[k - i]
            out[k] = (-acc * inv0) % self.p
        return LSeries(self.p, out, self.prec - 2 * v, -v)

    def __truediv__(self, other: "LSeries") -> "LSeries":
        return self * other.inverse()

    def with_prec(self, prec: int) -> "LSeries":
        return LSeries(self.p, self._dense(self.start, min(prec, self.prec)), min(prec, self.prec), self.start)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, LSeries):
            return NotImplemented
        return (self.p, self.start, self.coeffs, self.prec) == (other.p, other.start, other.coeffs, other.prec)

    def agrees(self, other: "LSeries") -> bool:
        """Equality to the smaller of the two precisions."""
        return (self - other).is_zero()

    def __hash__(self) -> int:
        return hash((self.p, self.start, tuple(self.coeffs), self.prec))

    def to_text(self) -> str:
        if not self.coeffs:
            return "0"
        parts = []
        for i, c in enumerate(self.coeffs):
            if not c:
                continue
            k = self.start + i
            mono = "" if k == 0 else ("x" if k == 1 else f"x^{k}")
            if not mono:
                parts.append(str(c))
            elif c == 1:
                parts.append(mono)
            else:
                parts.append(f"{c}*{mono}")
        return "+".join(parts)

    def __repr__(self) -> str:
        return f"{self.to_text()} + O(x^{self.prec})"


TSeries = LSeries


@dataclass(frozen=True)
class Order:
    """The order of a pivot: exact, or only bounded below when it vanished to precision."""

    value: int
    exact: bool = True

    def __str__(self) -> str:
        return str(self.value) if self.exact else f">={self.value}"


class TSMatrix:
    """A rectangular matrix of :class:`LSeries` over one prime."""

    __slots__ = ("p", "rows")

    def __init__(self, p: int, rows: Sequence[Sequence[LSeries]]) -> None:
        _check_prime(p)
        self.p = p
        self.rows = [list(r) for r in rows]
        if self.rows and len({len(r) for r in self.rows}) != 1:
            raise ValueError("matrix rows must have equal length")

    @property
    def nrows(self) -> int:
        return len(self.rows)

    @property
    def ncols(self) -> int:
        return len(self.rows[0]) if self.rows else 0

    @property
    def shape(self) -> Tuple[int, int]:
        return self.nrows, self.ncols

    def __getitem__(self, ij: Tuple[int, int]) -> LSeries:
        return self.rows[ij[0]][ij[1]]

    @classmethod
    def from_ints(cls, entries: Sequence[Sequence[Sequence[int]]], p: int, prec: int) -> "TSMatrix":
        """Entries given as coefficient lists c_0, c_1, ... of polynomials in x."""
        return cls(p, [[LSeries(p, list(e), prec) for e in row] for row in entries])

    @classmethod
    def from_constant(cls, entries: Sequence[Sequence[int]], p: int, prec: int) -> "TSMatrix":
        return cls(p, [[LSeries.const(c, p, prec) for c in row] for row in entries])

    @classmethod
    def identity(cls, n: int, p: int, prec: int) -> "TSMatrix":
        return cls.from_constant([[int(i == j) for j in range(n)] for i in range(n)], p, prec)

    @classmethod
    def zeros(cls, r: int, c: int, p: int, prec: int) -> "TSMatrix":
        return cls(p, [[LSeries.zero(p, prec) for _ in range(c)] for _ in range(r)])

    @classmethod
    def standard_nilpotent(cls, lam: Sequence[int], p: int, prec: int) -> "TSMatrix":
        """N_lambda: blocks of sizes lambda_i with [Id; 0] blocks just above the diagonal."""
        lam = Partition(lam)
        n = lam.size
        offs = _offsets(lam)
        rows = [[0] * n for _ in range(n)]
        for b in range(len(lam) - 1):
            for k in range(lam[b + 1]):
                rows[offs[b] + k][offs[b + 1] + k] = 1
        return cls.from_constant(rows, p, prec)

    @classmethod
    def parse(cls, text: str) -> "TSMatrix":
        """Parse ``0,x;0,0 @p=2,m=4``."""
        m = re.fullmatch(r"\s*(.*?)\s*@\s*p\s*=\s*(\d+)\s*,\s*m\s*=\s*(\d+)\s*", text)
        if not m:
            raise ValueError(f"expected 'entries @p=P,m=M', got {text!r}")
        body, p, prec = m.group(1), int(m.group(2)), int(m.group(3))
        _check_prime(p)
        rows = [[_parse_poly(e, p, prec) for e in row.split(",")] for row in body.split(";")]
        return cls(p, rows)

    def to_text(self) -> str:
        precs = {e.prec for r in self.rows for e in r}
        body = ";".join(",".join(e.to_text() for e in r) for r in self.rows)
        if len(precs) == 1:
            return f"{body} @p={self.p},m={precs.pop()}"
        return body + f" @p={self.p}"

    def __repr__(self) -> str:
        return f"TSMatrix({self.to_text()})"

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, TSMatrix):
            return NotImplemented
        return self.p == other.p and self.rows == other.rows

    __hash__ = None  # type: ignore[assignment]

    def copy(self) -> "TSMatrix":
        return TSMatrix(self.p, [list(r) for r in self.rows])

    def __matmul__(self, other: "TSMatrix") -> "TSMatrix":
        if self.ncols != other.nrows:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        out = []
        for r in self.rows:
            row = []
            for j in range(other.ncols):
                acc = None
                for k, a in enumerate(r):
                    term = a * other.rows[k][j]
                    acc = term if acc is None else acc + term
                row.append(acc if acc is not None else LSeries.zero(self.p, 0))
            out.append(row)
        return TSMatrix(self.p, out)

    def __add__(self, other: "TSMatrix") -> "TSMatrix":
        return TSMatrix(self.p, [[a + b for a, b in zip(ra, rb)] for ra, rb in zip(self.rows, other.rows)])

    def __sub__(self, other: "TSMatrix") -> "TSMatrix":
        return TSMatrix(self.p, [[a - b for a, b in zip(ra, rb)] for ra, rb in zip(self.rows, other.rows)])

    def __pow__(self, k: int) -> "TSMatrix":
        out = TSMatrix.identity(self.nrows, self.p, self.min_prec())
        for _ in range(k):
            out = out @ self
        return out

    def is_zero(self) -> bool:
        return all(e.is_zero() for r in self.rows for e in r)

    def agrees(self, other: "TSMatrix") -> bool:
        return self.shape == other.shape and (self - other).is_zero()

    def min_prec(self) -> int:
        return min((e.prec for r in self.rows for e in r), default=0)

    def min_start(self) -> int:
        return min((e.start for r in self.rows for e in r if not e.is_zero()), default=0)

    def block(self, r0: int, r1: int, c0: int, c1: int) -> "TSMatrix":
        return TSMatrix(self.p, [row[c0:c1] for row in self.rows[r0:r1]])

    def set_block(self, r0: int, c0: int, B: "TSMatrix") -> None:
        for i, row in enumerate(B.rows):
            for j, e in enumerate(row):
                self.rows[r0 + i][c0 + j] = e

    def at_zero(self) -> List[List[int]]:
        """The constant-term matrix; the entries must have no poles."""
        out = []
        for r in self.rows:
            row = []
            for e in r:
                if e.start < 0:
                    raise ValueError("matrix has poles")
                row.append(e.coeff(0))
            out.append(row)
        return out

    def swap_rows(self, i: int, j: int) -> None:
        self.rows[i], self.rows[j] = self.rows[j], self.rows[i]

    def swap_cols(self, i: int, j: int) -> None:
        for r in self.rows:
            r[i], r[j] = r[j], r[i]

    def add_row_multiple(self, dst: int, src: int, f: LSeries) -> None:
        """row[dst] -= f * row[src]"""
        self.rows[dst] = [a - f * b for a, b in zip(self.rows[dst], self.rows[src])]

    def add_col_multiple(self, dst: int, src: int, f: LSeries) -> None:
        """col[dst] -= col[src] * f"""
        for r in self.rows:
            r[dst] = r[dst] - r[src] * f

    def inverse(self) -> "TSMatrix":
        """Inverse over the Laurent field by Gauss-Jordan with minimal-order pivots."""
        n = self.nrows
        if n != self.ncols:
            raise ValueError("only square matrices can be inverted")
        A = self.copy()
        B = TSMatrix.identity(n, self.p, self.min_prec() if n else 0)
        for j in range(n):
            piv = _pick_pivot(A, range(j, n), [j])
            if piv is None:
                raise InsufficientPrecision("matrix is singular to the available precision")
            i, _ = piv
            A.swap_rows(i, j)
            B.swap_rows(i, j)
            inv = A.rows[j][j].inverse()
            A.rows[j] = [e * inv for e in A.rows[j]]
            B.rows[j] = [e * inv for e in B.rows[j]]
            for i2 in range(n):
                if i2 != j and not A.rows[i2][j].is_zero():
                    f = A.rows[i2][j]
                    A.add_row_multiple(i2, j, f)
                    B.add_row_multiple(i2, j, f)
        return B


def _offsets(lam: Sequence[int]) -> List[int]:
    out, acc = [], 0
    for x in lam:
        out.append(acc)
        acc += x
    return out


def _parse_poly(text: str, p: int, prec: int) -> LSeries:
    text = text.replace(" ", "")
    if not text:
        raise ValueError("empty matrix entry")
    coeffs: dict = {}
    for sign, term in re.findall(r"([+-]?)([^+-]+)", text):
        m = re.fullmatch(r"(\d+)?\*?(x(?:\^(\d+))?)?", term)
        if not m or (m.group(1) is None and m.group(2) is None):
            raise ValueError(f"cannot parse series term {term!r}")
        c = int(m.group(1)) if m.group(1) else 1
        k = 0 if not m.group(2) else int(m.group(3) or 1)
        coeffs[k] = coeffs.get(k, 0) + (-c if sign == "-" else c)
    top = max(coeffs) + 1
    return LSeries(p, [coeffs.get(k, 0) for k in range(top)], prec)


def _pick_pivot(A: TSMatrix, rows: Iterable[int], cols: Sequence[int]) -> Optional[Tuple[int, int]]:
    """Position of an entry of certified minimal order in the given window.

    Returns None when the whole window vanishes to precision.  Raises when a
    vanishing entry's precision is too low to rule out a smaller order.
    """
    rows = list(rows)
    best = None
    for i in rows:
        for j in cols:
            e = A.rows[i][j]
            if not e.is_zero() and (best is None or e.start < best[0]):
                best = (e.start, i, j)
    if best is None:
        return None
    v = best[0]
    for i in rows:
        for j in cols:
            e = A.rows[i][j]
            if e.is_zero() and e.prec < v:
                raise InsufficientPrecision(
                    f"entry ({i},{j}) vanishes only to x^{e.prec}, below the candidate pivot order {v}")
    return best[1], best[2]


def hermite_form(M: TSMatrix) -> Tuple[TSMatrix, TSMatrix, List[Order]]:
    """Left row operations g with g M upper triangular.

    Returns ``(g, gM, orders)`` where ``orders`` lists the orders of the
    diagonal entries.
    """
    A = M.copy()
    r, c = A.shape
    g = TSMatrix.identity(r, M.p, M.min_prec())
    orders: List[Order] = []
    for j in range(min(r, c)):
        piv = _pick_pivot(A, range(j, r), [j])
        if piv is None:
            orders.append(Order(min(A.rows[i][j].prec for i in range(j, r)), exact=False))
            continue
        i, _ = piv
        A.swap_rows(i, j)
        g.swap_rows(i, j)
        pv = A.rows[j][j]
        for i2 in range(j + 1, r):
            if not A.rows[i2][j].is_zero():
                f = A.rows[i2][j] / pv
                A.add_row_multiple(i2, j, f)
                g.add_row_multiple(i2, j, f)
            A.rows[i2][j] = LSeries.zero(M.p, A.rows[i2][j].prec)
        orders.append(Order(pv.start))
    return g, A, orders


def smith_form(M: TSMatrix) -> Tuple[TSMatrix, TSMatrix, TSMatrix, List[Order]]:
    """Row and column operations with g1 M g2 diagonal, orders weakly increasing.

    Returns ``(g1, D, g2, orders)``.
    """
    A = M.copy()
    r, c = A.shape
    prec = M.min_prec()
    g1 = TSMatrix.identity(r, M.p, prec)
    g2 = TSMatrix.identity(c, M.p, prec)
    orders: List[Order] = []
    for k in range(min(r, c)):
        piv = _pick_pivot(A, range(k, r), range(k, c))
        if piv is None:
            bound = min(A.rows[i][j].prec for i in range(k, r) for j in range(k, c))
            orders.extend(Order(bound, exact=False) for _ in range(k, min(r, c)))
            break
        i, j = piv
        A.swap_rows(i, k)
        g1.swap_rows(i, k)
        A.swap_cols(j, k)
        g2.swap_cols(j, k)
        pv = A.rows[k][k]
        for i2 in range(k + 1, r):
            if not A.rows[i2][k].is_zero():
                f = A.rows[i2][k] / pv
                A.add_row_multiple(i2, k, f)
                g1.add_row_multiple(i2, k, f)
            A.rows[i2][k] = LSeries.zero(M.p, A.rows[i2][k].prec)
        for j2 in range(k + 1, c):
            if not A.rows[k][j2].is_zero():
                f = A.rows[k][j2] / pv
                A.add_col_multiple(j2, k, f)
                g2.add_col_multiple(j2, k, f)
            A.rows[k][j2] = LSeries.zero(M.p, A.rows[k][j2].prec)
        orders.append(Order(pv.start))
    return g1, A, g2, orders


def rank(M: TSMatrix) -> int:
    """Rank over the fraction field: the number of invariant factors of certified order."""
    return sum(1 for o in smith_form(M)[3] if o.exact)


def _check_nilpotent(theta: TSMatrix) -> None:
    n = theta.nrows
    if n != theta.ncols:
        raise ValueError("nilpotent matrices must be square")
    if theta.min_start() < 0:
        raise ValueError("entries must be power series, not Laurent series with poles")
    if n and not (theta ** n).is_zero():
        raise NotNilpotent("theta^n does not vanish to precision")


def _type_from_kernel_dims(n: int, dims: Sequence[int]) -> Partition:
    parts = []
    prev = 0
    for d in dims:
        if d == prev:
            break
        parts.append(d - prev)
        prev = d
    if prev != n:
        raise NotNilpotent("kernels of powers do not exhaust the space")
    if any(a < b for a, b in zip(parts, parts[1:])):
        raise InsufficientPrecision(f"kernel dimensions {list(dims)} do not form a partition")
    return Partition(parts)


def nilpotent_type(theta: TSMatrix) -> Partition:
    """lambda_i = dim ker theta^i - dim ker theta^(i-1) over the fraction field."""
    _check_nilpotent(theta)
    n = theta.nrows
    dims = []
    power = TSMatrix.identity(n, theta.p, theta.min_prec())
    for _ in range(n):
        power = power @ theta
        dims.append(n - rank(power))
        if dims[-1] == n:
            break
    return _type_from_kernel_dims(n, dims)


def fp_rank(rows: Sequence[Sequence[int]], p: int) -> int:
    A = [[x % p for x in r] for r in rows]
    rk = 0
    ncols = len(A[0]) if A else 0
    for j in range(ncols):
        piv = next((i for i in range(rk, len(A)) if A[i][j]), None)
        if piv is None:
            continue
        A[rk], A[piv] = A[piv], A[rk]
        inv = pow(A[rk][j], p - 2, p)
        for i in range(len(A)):
            if i != rk and A[i][j]:
                f = A[i][j] * inv % p
                A[i] = [(a - f * b) % p for a, b in zip(A[i], A[rk])]
        rk += 1
    return rk


def constant_type(rows: Sequence[Sequence[int]], p: int) -> Partition:
    """Type of a nilpotent matrix over F_p."""
    n = len(rows)
    dims = []
    power = [[int(i == j) for j in range(n)] for i in range(n)]
    for _ in range(n):
        power = [[sum(power[i][k] * rows[k][j] for k in range(n)) % p for j in range(n)] for i in range(n)]
        dims.append(n - fp_rank(power, p))
        if dims[-1] == n:
            break
    if n and dims[-1] != n:
        raise NotNilpotent("constant term is not nilpotent")
    return _type_from_kernel_dims(n, dims) if n else Partition()


def _block_diag(blocks: Sequence[TSMatrix], p: int, prec: int) -> TSMatrix:
    n = sum(b.nrows for b in blocks)
    out = TSMatrix.zeros(n, n, p, prec)
    off = 0
    for b in blocks:
        out.set_block(off, off, b)
        off += b.nrows
    return out


@dataclass
class KernelForm:
    g: TSMatrix
    theta: TSMatrix
    lam: Partition

    def block(self, i: int, j: int) -> TSMatrix:
        offs = _offsets(self.lam)
        return self.theta.block(offs[i], offs[i] + self.lam[i], offs[j], offs[j] + self.lam[j])

    def pivot_orders(self) -> List[Order]:
        """Orders of the diagonal entries of the blocks just above the diagonal."""
        out = []
        for b in range(len(self.lam) - 1):
            B = self.block(b, b + 1)
            for k in range(self.lam[b + 1]):
                e = B.rows[k][k]
                out.append(Order(e.start) if not e.is_zero() else Order(e.prec, exact=False))
        return out


def _kernel_basis_form(theta: TSMatrix) -> Tuple[TSMatrix, List[int]]:
    """P with P^-1 theta P block upper triangular along the kernel filtration."""
    n = theta.nrows
    p = theta.p
    prec = theta.min_prec()
    if n == 0:
        return TSMatrix.identity(0, p, prec), []
    if theta.is_zero():
        return TSMatrix.identity(n, p, prec), [n]
    _, _, g2, orders = smith_form(theta)
    rk = sum(1 for o in orders if o.exact)
    kdim = n - rk
    if kdim == 0:
        # theta^n = 0 was already checked, so a full-rank block means lost precision
        raise InsufficientPrecision("a nilpotent block has trivial kernel to precision")
    perm = list(range(rk, n)) + list(range(rk))
    P = TSMatrix(p, [[row[j] for j in perm] for row in g2.rows])
    th1 = P.inverse() @ theta @ P
    sub = th1.block(kdim, n, kdim, n)
    PB, sizes = _kernel_basis_form(sub)
    ext = _block_diag([TSMatrix.identity(kdim, p, prec), PB], p, prec)
    return P @ ext, [kdim] + sizes


def _forced_zero(e: LSeries) -> LSeries:
    if not e.is_zero():
        raise InsufficientPrecision("an entry expected to vanish is nonzero to precision")
    return LSeries.zero(e.p, e.prec)


def kernel_form(theta: TSMatrix) -> KernelForm:
    """g with g theta g^-1 in strong kernel form.

    The result is block upper triangular with zero diagonal blocks of sizes
    lambda = type(theta), and every block just above the diagonal is upper
    triangular of full rank.
    """
    _check_nilpotent(theta)
    p = theta.p
    prec = theta.min_prec()
    P, sizes = _kernel_basis_form(theta)
    if any(a < b for a, b in zip(sizes, sizes[1:])):
        raise InsufficientPrecision(f"kernel filtration sizes {sizes} do not form a partition")
    lam = Partition(sizes)
    g = P.inverse()
    th = g @ theta @ P
    offs = _offsets(lam)
    # clear the diagonal blocks, which vanish to precision, and everything below them
    for bi in range(len(lam)):
        for bj in range(bi + 1):
            for i in range(offs[bi], offs[bi] + lam[bi]):
                for j in range(offs[bj], offs[bj] + lam[bj]):
                    th.rows[i][j] = _forced_zero(th.rows[i][j])
    # make each superdiagonal block upper triangular, last block first
    for b in range(len(lam) - 2, -1, -1):
        B = th.block(offs[b], offs[b] + lam[b], offs[b + 1], offs[b + 1] + lam[b + 1])
        gb, _, orders = hermite_form(B)
        if not all(o.exact for o in orders):
            raise InsufficientPrecision("superdiagonal block is not of full rank to precision")
        blocks = [TSMatrix.identity(x, p, prec) for x in lam]
        blocks[b] = gb
        G = _block_diag(blocks, p, prec)
        th = G @ th @ G.inverse()
        g = G @ g
        for bi in range(len(lam)):
            for bj in range(bi + 1):
                for i in range(offs[bi], offs[bi] + lam[bi]):
                    for j in range(offs[bj], offs[bj] + lam[bj]):
                        th.rows[i][j] = _forced_zero(th.rows[i][j])
        for k in range(lam[b + 1]):
            for i in range(k + 1, lam[b]):
                e = th.rows[offs[b] + i][offs[b + 1] + k]
                th.rows[offs[b] + i][offs[b + 1] + k] = _forced_zero(e)
    return KernelForm(g, th, lam)


@dataclass
class Classification:
    g: TSMatrix
    lam: Partition
    d: int
    pole_order: int
    precision: int

    @property
    def nondegenerate(self) -> bool:
        return self.d == 0


def classify(theta: TSMatrix) -> Classification:
    """Straighten theta to N_lambda by a kernel-strict g over the Laurent field.

    d is the order of det h, where h is the block-diagonal matrix carrying
    the strong kernel form onto one whose superdiagonal blocks are [Id; 0].
    """
    p = theta.p
    prec = theta.min_prec()
    kf = kernel_form(theta)
    lam = kf.lam
    m = len(lam)
    offs = _offsets(lam)
    th = kf.theta
    hs = [TSMatrix.identity(lam[0], p, prec)] if m else []
    for b in range(1, m):
        prod = hs[-1] @ kf.block(b - 1, b)
        hs.append(prod.block(0, lam[b], 0, lam[b]))
    d = 0
    for hb in hs:
        for k in range(hb.nrows):
            e = hb.rows[k][k]
            if e.is_zero():
                raise InsufficientPrecision("straightening matrix is singular to precision")
            d += e.start
    H = _block_diag(hs, p, prec) if m else TSMatrix.identity(0, p, prec)
    th = H @ th @ H.inverse()
    N = TSMatrix.standard_nilpotent(lam, p, prec)
    for b in range(m - 1):
        blk = th.block(offs[b], offs[b] + lam[b], offs[b + 1], offs[b + 1] + lam[b + 1])
        want = N.block(offs[b], offs[b] + lam[b], offs[b + 1], offs[b + 1] + lam[b + 1])
        if blk.min_prec() <= 0 or not blk.agrees(want):
            raise InsufficientPrecision("superdiagonal blocks could not be certified as [Id; 0]")
    n = lam.size
    U = TSMatrix.identity(n, p, prec)
    for J in range(m - 1, 1, -1):
        for i in range(J - 1):
            E = TSMatrix.zeros(n, n, p, prec)
            target = th.block(offs[i], offs[i] + lam[i], offs[J], offs[J] + lam[J])
            for r in range(lam[i]):
                for c in range(lam[J]):
                    E.rows[offs[i] + r][offs[J - 1] + c] = -target.rows[r][c]
            I = TSMatrix.identity(n, p, prec)
            th = (I + E) @ th @ (I - E)
            U = (I + E) @ U
    g = U @ H @ kf.g
    if not (g @ theta).agrees(N @ g):
        raise InsufficientPrecision("straightened matrix does not match N_lambda to precision")
    pole = max(0, -g.min_start())
    return Classification(g, lam, d, pole, theta.min_prec())


# ---------------------------------------------------------------------------
# random sampling helpers


def random_series(rng: random.Random, p: int, prec: int, max_deg: Optional[int] = None) -> LSeries:
    top = prec if max_deg is None else min(prec, max_deg + 1)
    return LSeries(p, [rng.randrange(p) for _ in range(top)], prec)


def random_invertible(rng: random.Random, n: int, p: int, prec: int) -> TSMatrix:
    while True:
        M = TSMatrix(p, [[random_series(rng, p, prec) for _ in range(n)] for _ in range(n)])
        if fp_rank(M.at_zero(), p) == n:
            return M


@dataclass(frozen=True)
class NilpotentSample:
    """theta = U S U^-1 with S strictly upper triangular, both given by polynomial entries.

    The data is exact, so theta can be expanded to any precision.
    """

    p: int
    S: Tuple[Tuple[Tuple[int, ...], ...], ...]
    U: Tuple[Tuple[Tuple[int, ...], ...], ...]

    @property
    def n(self) -> int:
        return len(self.S)

    def at(self, prec: int) -> TSMatrix:
        S = TSMatrix.from_ints(self.S, self.p, prec)
        U = TSMatrix.from_ints(self.U, self.p, prec)
        return U @ S @ U.inverse()

    def inner_type(self, prec: int = 64) -> Partition:
        """Type of S; conjugation does not change it."""
        return nilpotent_type(TSMatrix.from_ints(self.S, self.p, prec))


def random_nilpotent_sample(rng: random.Random, n: int, p: int, deg: int = 3) -> NilpotentSample:
    """Entries are polynomials of degree <= deg, i.e. elements of F_p[x]/x^(deg+1)."""

    def poly() -> Tuple[int, ...]:
        return tuple(rng.randrange(p) for _ in range(deg + 1))

    zero = (0,) * (deg + 1)
    S = tuple(tuple(poly() if j > i else zero for j in range(n)) for i in range(n))
    while True:
        U = tuple(tuple(poly() for _ in range(n)) for _ in range(n))
        if fp_rank([[e[0] for e in row] for row in U], p) == n:
            return NilpotentSample(p, S, U)


def random_nilpotent(rng: random.Random, n: int, p: int, prec: int) -> TSMatrix:
    """u S u^-1 with S strictly upper triangular and u a random unit."""
    return random_nilpotent_sample(rng, n, p, prec - 1).at(prec)


def classify_adaptive(build: Callable[[int], TSMatrix], start: int = 8, limit: int = 256) -> Classification:
    """Classify at increasing precision until two consecutive runs agree.

    build(prec) must return the same matrix expanded to precision prec.
    The returned Classification records the precision that succeeded.
    """
    prec = start
    prev: Optional[Classification] = None
    while prec <= limit:
        try:
            cur = classify(build(prec))
        except InsufficientPrecision:
            prev = None
        else:
            if prev is not None and (prev.lam, prev.d) == (cur.lam, cur.d):
                return prev
            prev = cur
        prec *= 2
    raise InsufficientPrecision(f"no stable classification up to precision {limit}")
