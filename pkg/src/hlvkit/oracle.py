"""Brute-force counting over small prime fields.

Everything here enumerates finite sets exhaustively: subspaces, flags,
matrices, bundle automorphisms on the projective line.  Nothing is sampled
and nothing uses the symmetric-function machinery except to package the
final answer, so these counts serve as independent checks of the algebraic
side.  Sizes are capped; larger inputs raise :class:`TooLarge`.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import combinations, permutations, product
from typing import Dict, FrozenSet, Iterator, List, Mapping, Optional, Sequence, Tuple

import numpy as np

from .partitions import Partition, SizeMismatch, conjugate, enumerate_partitions
from .scalars import Scalar
from .symfunc import MultiSymSeries, SymFunc

ORACLE_PRIMES = (2, 3)
MAX_N = 4
# matrices, subspaces or endomorphisms enumerated in a single call
MAX_ENUMERATION = 1 << 26

Vec = Tuple[int, ...]
Poly = Tuple[int, ...]


class TooLarge(ValueError):
    """The requested enumeration exceeds the hard caps."""


def _check(n: int, p: int, nmax: int = MAX_N) -> None:
    if p not in ORACLE_PRIMES:
        raise TooLarge(f"p={p} is not one of {ORACLE_PRIMES}")
    if n > nmax:
        raise TooLarge(f"size {n} exceeds the cap {nmax}")


# ---------------------------------------------------------------------------
# constant matrices over F_p


@dataclass(frozen=True)
class FpMatrix:
    p: int
    rows: Tuple[Tuple[int, ...], ...]

    def __post_init__(self) -> None:
        rows = tuple(tuple(x % self.p for x in r) for r in self.rows)
        if any(len(r) != len(rows) for r in rows):
            raise ValueError("FpMatrix must be square")
        object.__setattr__(self, "rows", rows)

    @property
    def n(self) -> int:
        return len(self.rows)

    @classmethod
    def zero(cls, n: int, p: int) -> "FpMatrix":
        return cls(p, tuple((0,) * n for _ in range(n)))

    @classmethod
    def identity(cls, n: int, p: int) -> "FpMatrix":
        return cls(p, tuple(tuple(int(i == j) for j in range(n)) for i in range(n)))

    def apply(self, v: Vec) -> Vec:
        return tuple(sum(a * b for a, b in zip(r, v)) % self.p for r in self.rows)

    def __matmul__(self, other: "FpMatrix") -> "FpMatrix":
        cols = list(zip(*other.rows))
        return FpMatrix(self.p, tuple(tuple(sum(a * b for a, b in zip(r, c)) for c in cols) for r in self.rows))

    def __pow__(self, k: int) -> "FpMatrix":
        out = FpMatrix.identity(self.n, self.p)
        for _ in range(k):
            out = out @ self
        return out

    def rank(self) -> int:
        return fp_rank(self.rows, self.p)

    def is_nilpotent(self) -> bool:
        return all(x == 0 for r in (self ** self.n).rows for x in r)

    def nilpotent_type(self) -> Partition:
        if not self.is_nilpotent():
            raise ValueError("matrix is not nilpotent")
        return _type_from_ranks(self.n, [(self ** i).rank() for i in range(self.n + 1)])


def fp_rank(rows: Sequence[Sequence[int]], p: int) -> int:
    A = [list(r) for r in rows]
    r = 0
    ncols = len(A[0]) if A else 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(A)) if A[i][c] % p), None)
        if piv is None:
            continue
        A[r], A[piv] = A[piv], A[r]
        inv = pow(A[r][c], -1, p)
        A[r] = [x * inv % p for x in A[r]]
        for i in range(len(A)):
            if i != r and A[i][c] % p:
                f = A[i][c]
                A[i] = [(x - f * y) % p for x, y in zip(A[i], A[r])]
        r += 1
    return r


def _type_from_ranks(n: int, ranks: Sequence[int]) -> Partition:
    # lambda_i = dim ker theta^i - dim ker theta^(i-1) = rank theta^(i-1) - rank theta^i
    return Partition.from_composition(ranks[i - 1] - ranks[i] for i in range(1, len(ranks)))


def standard_nilpotent(lam: Sequence[int], p: int) -> FpMatrix:
    """A nilpotent matrix of type lam: Jordan blocks of the conjugate sizes."""
    lam = Partition(lam)
    n = lam.size
    rows = [[0] * n for _ in range(n)]
    off = 0
    for size in conjugate(lam):
        for i in range(size - 1):
            rows[off + i][off + i + 1] = 1
        off += size
    return FpMatrix(p, tuple(map(tuple, rows)))


@lru_cache(maxsize=None)
def _vectors(n: int, p: int) -> Tuple[Vec, ...]:
    return tuple(product(range(p), repeat=n))


@lru_cache(maxsize=None)
def subspaces(n: int, k: int, p: int) -> Tuple[FrozenSet[Vec], ...]:
    """All k-dimensional subspaces of F_p^n, each as the set of its vectors.

    Enumerated through reduced row echelon bases, so each appears once.
    """
    if p ** n > 6561:
        raise TooLarge(f"F_{p}^{n} is too big to enumerate subspaces")
    out = []
    for pivots in combinations(range(n), k):
        free = [(i, j) for i, c in enumerate(pivots) for j in range(c + 1, n) if j not in pivots]
        for vals in product(range(p), repeat=len(free)):
            basis = [[0] * n for _ in range(k)]
            for i, c in enumerate(pivots):
                basis[i][c] = 1
            for (i, j), v in zip(free, vals):
                basis[i][j] = v
            out.append(_span(basis, p))
    return tuple(out)


def _span(basis: Sequence[Sequence[int]], p: int) -> FrozenSet[Vec]:
    n = len(basis[0]) if basis else 0
    vecs = set()
    for coeffs in product(range(p), repeat=len(basis)):
        vecs.add(tuple(sum(c * b[j] for c, b in zip(coeffs, basis)) % p for j in range(n)))
    if not basis:
        vecs = {()}
    return frozenset(vecs)


def _invariant(W: FrozenSet[Vec], N: FpMatrix) -> bool:
    return all(N.apply(v) in W for v in W)


def _invariant_subspaces(N: FpMatrix, k: int) -> List[FrozenSet[Vec]]:
    if k == 0:
        return [frozenset({(0,) * N.n})]
    return [W for W in subspaces(N.n, k, N.p) if _invariant(W, N)]


# ---------------------------------------------------------------------------
# flags and centralizers


def flag_count_bruteforce(lam: Sequence[int], mu: Sequence[int], p: int) -> int:
    """Number of partial flags of type mu in F_p^n preserved by N_lam."""
    lam = Partition(lam)
    mu = [int(x) for x in mu]
    if any(x < 0 for x in mu):
        raise ValueError("composition parts must be nonnegative")
    if lam.size != sum(mu):
        raise SizeMismatch(f"|{lam.text()}| != sum of {mu}")
    _check(lam.size, p)
    N = standard_nilpotent(lam, p)
    dims = []
    acc = 0
    for x in mu:
        acc += x
        dims.append(acc)
    layers = {dm: _invariant_subspaces(N, dm) for dm in set(dims)}

    def count(i: int, prev: FrozenSet[Vec]) -> int:
        if i == len(dims):
            return 1
        return sum(count(i + 1, W) for W in layers[dims[i]] if prev <= W)

    return count(0, frozenset({(0,) * lam.size}))


_PERMS: Dict[int, List[Tuple[Tuple[int, ...], int]]] = {}


def _perms_with_sign(n: int) -> List[Tuple[Tuple[int, ...], int]]:
    if n not in _PERMS:
        out = []
        for perm in permutations(range(n)):
            inv = sum(1 for i in range(n) for j in range(i + 1, n) if perm[i] > perm[j])
            out.append((perm, -1 if inv % 2 else 1))
        _PERMS[n] = out
    return _PERMS[n]


def _det(mats: np.ndarray) -> np.ndarray:
    """Exact integer determinants of a stack of small matrices with small entries."""
    n = mats.shape[-1]
    if n == 1:
        return mats[:, 0, 0]
    if n == 2:
        return mats[:, 0, 0] * mats[:, 1, 1] - mats[:, 0, 1] * mats[:, 1, 0]
    if n == 4:
        # Laplace expansion along the first two rows
        out = np.zeros(mats.shape[0], dtype=mats.dtype)
        for a, b in combinations(range(4), 2):
            c, d = (x for x in range(4) if x not in (a, b))
            top = mats[:, 0, a] * mats[:, 1, b] - mats[:, 0, b] * mats[:, 1, a]
            bot = mats[:, 2, c] * mats[:, 3, d] - mats[:, 2, d] * mats[:, 3, c]
            sign = -1 if (a + b + 1) % 2 else 1
            out += sign * top * bot
        return out
    out = np.zeros(mats.shape[0], dtype=mats.dtype)
    for j in range(n):
        minor = np.delete(mats[:, 1:, :], j, axis=2)
        out += (-1) ** j * mats[:, 0, j] * _det(minor)
    return out


def _nullspace_mod_p(rows: List[List[int]], ncols: int, p: int) -> List[List[int]]:
    A = [list(r) for r in rows]
    pivots: List[int] = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(A)) if A[i][c] % p), None)
        if piv is None:
            continue
        A[r], A[piv] = A[piv], A[r]
        inv = pow(A[r][c], -1, p)
        A[r] = [x * inv % p for x in A[r]]
        for i in range(len(A)):
            if i != r and A[i][c] % p:
                f = A[i][c]
                A[i] = [(x - f * y) % p for x, y in zip(A[i], A[r])]
        pivots.append(c)
        r += 1
    basis = []
    for fcol in (c for c in range(ncols) if c not in pivots):
        v = [0] * ncols
        v[fcol] = 1
        for i, pc in enumerate(pivots):
            v[pc] = -A[i][fcol] % p
        basis.append(v)
    return basis


def _count_invertible(basis: List[List[int]], n: int, p: int) -> int:
    """Invertible members of the F_p-span of the given flattened n x n matrices."""
    dim = len(basis)
    if p ** dim > MAX_ENUMERATION:
        raise TooLarge(f"{p}^{dim} matrices to enumerate")
    B = np.array(basis, dtype=np.int64).reshape(dim, n * n)
    chunk_dims = min(dim, 10)
    head = np.array(list(product(range(p), repeat=chunk_dims)), dtype=np.int64).reshape(-1, chunk_dims)
    head_part = (head @ B[:chunk_dims]).astype(np.int32)
    total = 0
    for tail in product(range(p), repeat=dim - chunk_dims):
        tail_part = (np.array(tail, dtype=np.int64) @ B[chunk_dims:]).astype(np.int32) if tail else 0
        mats = (head_part + tail_part) % p
        total += int(np.count_nonzero(_det(mats.reshape(-1, n, n)) % p))
    return total


@lru_cache(maxsize=None)
def _centralizer_order(lam: Partition, p: int) -> int:
    n = lam.size
    if n == 0:
        return 1
    N = standard_nilpotent(lam, p).rows
    # X N - N X = 0, unknowns X[i][j] at index i * n + j
    eqs = []
    for i in range(n):
        for j in range(n):
            row = [0] * (n * n)
            for k in range(n):
                row[i * n + k] += N[k][j]
                row[k * n + j] -= N[i][k]
            eqs.append([x % p for x in row])
    return _count_invertible(_nullspace_mod_p(eqs, n * n, p), n, p)


def centralizer_order(lam: Sequence[int], p: int) -> int:
    """|{g in GL_n(F_p) : g N_lam = N_lam g}| by enumerating the commutant."""
    lam = Partition(lam)
    _check(lam.size, p)
    return _centralizer_order(lam, p)


@lru_cache(maxsize=None)
def gl_order(n: int, p: int) -> int:
    """|GL_n(F_p)| by enumerating all n x n matrices."""
    _check(n, p)
    if n == 0:
        return 1
    basis = [[int(k == m) for m in range(n * n)] for k in range(n * n)]
    return _count_invertible(basis, n, p)


def nilpotent_mass_series(nmax: int, p: int) -> List[Fraction]:
    """Coefficients of sum over nilpotent classes of T^n / |centralizer|."""
    _check(nmax, p)
    return [sum((Fraction(1, centralizer_order(lam, p)) for lam in enumerate_partitions(n)), Fraction(0))
            for n in range(nmax + 1)]


# ---------------------------------------------------------------------------
# lattices in F_p((x))^n


def _compositions(total: int, parts: int) -> Iterator[Tuple[int, ...]]:
    if parts == 0:
        if total == 0:
            yield ()
        return
    for first in range(total + 1):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


def hermite_representatives(n: int, d: int, p: int) -> Iterator[Tuple[Tuple[Poly, ...], ...]]:
    """Lower triangular matrices with diagonal x^(m_i), sum m_i = d, entry (i, j) of degree < m_j.

    Entries are coefficient tuples, lowest degree first.
    """
    for ms in _compositions(d, n):
        slots = [(i, j) for i in range(n) for j in range(i)]
        choices = [list(product(range(p), repeat=ms[j])) for i, j in slots]
        for picked in product(*choices):
            M = [[() for _ in range(n)] for _ in range(n)]
            for i in range(n):
                M[i][i] = (0,) * ms[i] + (1,)
            for (i, j), poly in zip(slots, picked):
                M[i][j] = poly
            yield tuple(map(tuple, M))


def grassmannian_count(n: int, d: int, p: int) -> int:
    """Number of lattices x^d R^n in L in R^n of colength d, R = F_p[[x]]."""
    if p not in ORACLE_PRIMES:
        raise TooLarge(f"p={p} is not one of {ORACLE_PRIMES}")
    if n > 3 or d > 4:
        raise TooLarge("grassmannian counts are capped at n <= 3, d <= 4")
    if n < 0 or d < 0:
        raise ValueError("n and d must be nonnegative")
    return sum(1 for _ in hermite_representatives(n, d, p))


def lattice_count(n: int, d: int, p: int) -> int:
    """The same number, counted as x-stable subspaces of codimension d in (F_p[x]/x^d)^n."""
    if p not in ORACLE_PRIMES:
        raise TooLarge(f"p={p} is not one of {ORACLE_PRIMES}")
    dim = n * d
    if p ** dim > 4096:
        raise TooLarge(f"F_{p}^{dim} is too big")
    if d == 0:
        return 1
    # basis e_(i, k) = x^k in summand i, flattened to i * d + k
    shift = [[0] * dim for _ in range(dim)]
    for i in range(n):
        for k in range(d - 1):
            shift[i * d + k + 1][i * d + k] = 1
    X = FpMatrix(p, tuple(map(tuple, shift)))
    return len(_invariant_subspaces(X, dim - d))


# ---------------------------------------------------------------------------
# the Hall algebra of nilpotent matrices


@dataclass
class HallVector:
    """A finite combination of isomorphism classes [N_lam] over F_p."""

    p: int
    terms: Dict[Partition, Fraction] = field(default_factory=dict)

    def __post_init__(self) -> None:
        self.terms = {Partition(k): Fraction(v) for k, v in self.terms.items() if v != 0}

    @classmethod
    def basis(cls, lam: Sequence[int], p: int) -> "HallVector":
        return cls(p, {Partition(lam): Fraction(1)})

    def __add__(self, other: "HallVector") -> "HallVector":
        out = dict(self.terms)
        for k, v in other.terms.items():
            out[k] = out.get(k, Fraction(0)) + v
        return HallVector(self.p, out)

    def scale(self, c) -> "HallVector":
        return HallVector(self.p, {k: v * Fraction(c) for k, v in self.terms.items()})

    def __mul__(self, other: "HallVector") -> "HallVector":
        if self.p != other.p:
            raise ValueError("Hall vectors over different fields")
        out = HallVector(self.p)
        for a, x in self.terms.items():
            for b, y in other.terms.items():
                out = out + hall_product_bruteforce(a, b, self.p).scale(x * y)
        return out

    def __eq__(self, other: object) -> bool:
        return isinstance(other, HallVector) and self.p == other.p and self.terms == other.terms

    def to_text(self) -> str:
        if not self.terms:
            return "0"
        items = sorted(self.terms.items(), key=lambda kv: (kv[0].size, tuple(-x for x in kv[0])))
        return " + ".join(f"{v}*[N{k.text()}]" for k, v in items)


def _kernel_dims(N: FpMatrix, vecs: Sequence[Vec], upto: int) -> List[int]:
    """dim of {v in vecs : N^i v = 0} for i = 0..upto, vecs a subspace."""
    out = []
    p = N.p
    for i in range(upto + 1):
        Ni = N ** i
        zero = (0,) * N.n
        cnt = sum(1 for v in vecs if Ni.apply(v) == zero)
        out.append(_log(cnt, p))
    return out


def _log(x: int, p: int) -> int:
    k = 0
    while x > 1:
        x //= p
        k += 1
    return k


def _type_from_kernel_dims(dims: Sequence[int]) -> Partition:
    return Partition.from_composition(dims[i] - dims[i - 1] for i in range(1, len(dims)))


def _sub_and_quotient_types(N: FpMatrix, W: FrozenSet[Vec]) -> Tuple[Partition, Partition]:
    n = N.n
    sub = _type_from_kernel_dims(_kernel_dims(N, sorted(W), n))
    # ker of N^i on V/W has dimension dim {v : N^i v in W} - dim W
    dimW = _log(len(W), N.p)
    qdims = []
    for i in range(n + 1):
        Ni = N ** i
        cnt = sum(1 for v in _vectors(n, N.p) if Ni.apply(v) in W)
        qdims.append(_log(cnt, N.p) - dimW)
    return sub, _type_from_kernel_dims(qdims)


@lru_cache(maxsize=None)
def _hall_numbers(mu: Partition, p: int) -> Dict[Tuple[Partition, Partition], int]:
    """For (F_p^n, N_mu): number of invariant W by (quotient type, subobject type)."""
    N = standard_nilpotent(mu, p)
    out: Dict[Tuple[Partition, Partition], int] = {}
    for k in range(mu.size + 1):
        for W in _invariant_subspaces(N, k):
            sub, quo = _sub_and_quotient_types(N, W)
            out[(quo, sub)] = out.get((quo, sub), 0) + 1
    return out


def hall_product_bruteforce(lam: Sequence[int], nu: Sequence[int], p: int) -> HallVector:
    """[N_lam] * [N_nu]: extensions with quotient N_lam and subobject N_nu.

    The coefficient of [N_mu] is F * a_lam a_nu / a_mu, where F counts the
    N_mu-stable subspaces of the right types and a is the centralizer order.
    """
    lam, nu = Partition(lam), Partition(nu)
    n = lam.size + nu.size
    _check(n, p)
    out = {}
    for mu in enumerate_partitions(n):
        F = _hall_numbers(mu, p).get((lam, nu), 0)
        if F:
            out[mu] = Fraction(F * centralizer_order(lam, p) * centralizer_order(nu, p), centralizer_order(mu, p))
    return HallVector(p, out)


@lru_cache(maxsize=None)
def _I_basis(lam: Partition, p: int) -> SymFunc:
    return SymFunc({mu: flag_count_bruteforce(lam, mu, p) for mu in enumerate_partitions(lam.size)}, "m")


def I_map(v: HallVector, p: Optional[int] = None) -> SymFunc:
    """sum over mu of m_mu times the number of invariant flags of type mu, extended linearly."""
    p = v.p if p is None else p
    if p != v.p:
        raise ValueError("prime does not match the Hall vector")
    out = SymFunc.zero()
    for lam, c in v.terms.items():
        out = out + _I_basis(lam, p) * Scalar.const(c)
    return out


# ---------------------------------------------------------------------------
# the projective line


def _block_starts(mu: Sequence[int]) -> List[int]:
    out, acc = [], 0
    for x in mu:
        out.append(acc)
        acc += x
    return out


def _nilpotent_blocks(size: int, p: int) -> List[Tuple[Tuple[int, ...], ...]]:
    out = []
    for vals in product(range(p), repeat=size * size):
        M = FpMatrix(p, tuple(tuple(vals[i * size:(i + 1) * size]) for i in range(size)))
        if M.is_nilpotent():
            out.append(M.rows)
    return out


def two_point_pairs(mu: Sequence[int], p: int) -> Dict[Tuple[Partition, Partition], int]:
    """Q_mu sorted by (type A, type B): nilpotent block upper triangular A, B sharing diagonal blocks."""
    mu = [int(x) for x in mu]
    if any(x <= 0 for x in mu):
        raise ValueError("block sizes must be positive")
    n = sum(mu)
    _check(n, p, 3)
    starts = _block_starts(mu)
    upper = [(i, j) for a in range(len(mu)) for b in range(a + 1, len(mu))
             for i in range(starts[a], starts[a] + mu[a]) for j in range(starts[b], starts[b] + mu[b])]
    diag_choices = [[blk for blk in product(range(p), repeat=x * x)] for x in mu]
    out: Dict[Tuple[Partition, Partition], int] = {}
    types: Dict[Tuple[Tuple[int, ...], ...], Optional[Partition]] = {}

    def type_of(rows) -> Optional[Partition]:
        if rows not in types:
            M = FpMatrix(p, rows)
            types[rows] = M.nilpotent_type() if M.is_nilpotent() else None
        return types[rows]

    for diag in product(*diag_choices):
        base = [[0] * n for _ in range(n)]
        for a, blk in enumerate(diag):
            s = starts[a]
            for i in range(mu[a]):
                for j in range(mu[a]):
                    base[s + i][s + j] = blk[i * mu[a] + j]
        mats: Dict[Partition, int] = {}
        for vals in product(range(p), repeat=len(upper)):
            M = [row[:] for row in base]
            for (i, j), v in zip(upper, vals):
                M[i][j] = v
            tp = type_of(tuple(map(tuple, M)))
            if tp is not None:
                mats[tp] = mats.get(tp, 0) + 1
        # A and B range independently over the same set once the diagonal is fixed
        for ta, ca in mats.items():
            for tb, cb in mats.items():
                out[(ta, tb)] = out.get((ta, tb), 0) + ca * cb
    return out


def p1_two_point_Cmu(mu: Sequence[int], p: int = 2) -> MultiSymSeries:
    """sum over Q_mu of H_type(A)[X] H_type(B)[Y], over prod |GL_mu_i| prod_{i<j} p^(2 mu_i mu_j)."""
    mu = [int(x) for x in mu]
    n = sum(mu)
    pairs = two_point_pairs(mu, p)
    den = 1
    for x in mu:
        den *= gl_order(x, p)
    for a in range(len(mu)):
        for b in range(a + 1, len(mu)):
            den *= p ** (2 * mu[a] * mu[b])
    out = MultiSymSeries(2, n)
    for (ta, tb), cnt in sorted(pairs.items()):
        piece = MultiSymSeries.from_symfuncs(n, Fraction(cnt, den), [_I_basis(ta, p), _I_basis(tb, p)], n)
        out = out + piece
    return out


def p1_two_point_series(nmax: int, tmax: int, p: int = 2) -> List[MultiSymSeries]:
    """Sum over bundles O(-d_1)^mu_1 + ... (0 <= d_1 < ... ) of t^(sum d_i mu_i) C_mu, as t-layers."""
    layers = [MultiSymSeries(2, nmax) for _ in range(tmax + 1)]
    cache: Dict[Tuple[int, ...], MultiSymSeries] = {}
    for n in range(nmax + 1):
        if n == 0:
            layers[0] = layers[0] + MultiSymSeries.constant(2, nmax)
            continue
        for ds in _weak_sequences(n, tmax):
            mu, _ = _group(ds)
            key = tuple(mu)
            if key not in cache:
                cache[key] = p1_two_point_Cmu(mu, p)
            C = cache[key]
            layers[sum(ds)] = layers[sum(ds)] + MultiSymSeries(2, nmax, C.terms)
    return layers


def _weak_sequences(n: int, total: int) -> Iterator[Tuple[int, ...]]:
    """0 <= d_1 <= ... <= d_n with sum <= total."""
    def rec(k: int, lo: int, left: int, prefix: Tuple[int, ...]):
        if k == 0:
            yield prefix
            return
        for d in range(lo, left // k + 1):
            yield from rec(k - 1, d, left - d, prefix + (d,))
    yield from rec(n, 0, total, ())


def _group(ds: Sequence[int]) -> Tuple[List[int], List[int]]:
    mu: List[int] = []
    vals: List[int] = []
    for d in ds:
        if vals and vals[-1] == d:
            mu[-1] += 1
        else:
            mu.append(1)
            vals.append(d)
    return mu, vals


# polynomials over F_p as coefficient tuples, lowest degree first

def _ptrim(a: Sequence[int]) -> Poly:
    a = list(a)
    while a and a[-1] == 0:
        a.pop()
    return tuple(a)


def _padd(a: Poly, b: Poly, p: int) -> Poly:
    n = max(len(a), len(b))
    return _ptrim([((a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0)) % p for i in range(n)])


def _pmul(a: Poly, b: Poly, p: int) -> Poly:
    if not a or not b:
        return ()
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = (out[i + j] + x * y) % p
    return _ptrim(out)


def _pneg(a: Poly, p: int) -> Poly:
    return tuple((-x) % p for x in a)


def _mat_mul(A, B, p: int):
    n = len(A)
    out = []
    for i in range(n):
        row = []
        for j in range(n):
            acc: Poly = ()
            for k in range(n):
                acc = _padd(acc, _pmul(A[i][k], B[k][j], p), p)
            row.append(acc)
        out.append(row)
    return out


def _poly_det(A, p: int) -> Poly:
    n = len(A)
    out: Poly = ()
    for perm, sign in _perms_with_sign(n):
        term: Poly = (1,)
        for i, j in enumerate(perm):
            term = _pmul(term, A[i][j], p)
        out = _padd(out, term if sign > 0 else _pneg(term, p), p)
    return out


def _poly_rank(A, p: int) -> int:
    """Rank over F_p(x) by fraction-free elimination."""
    M = [list(r) for r in A]
    n_rows, n_cols = len(M), len(M[0]) if M else 0
    r = 0
    for c in range(n_cols):
        piv = next((i for i in range(r, n_rows) if M[i][c]), None)
        if piv is None:
            continue
        M[r], M[piv] = M[piv], M[r]
        for i in range(n_rows):
            if i != r and M[i][c]:
                a, b = M[r][c], M[i][c]
                M[i] = [_padd(_pmul(a, x, p), _pneg(_pmul(b, y, p), p), p) for x, y in zip(M[i], M[r])]
        r += 1
    return r


def _endomorphisms(ds: Sequence[int], p: int) -> Iterator[List[List[Poly]]]:
    """Matrices of maps of O(-d_1) + ... + O(-d_n): entry (i, j) of degree <= d_j - d_i."""
    n = len(ds)
    slots = [(i, j) for i in range(n) for j in range(n) if ds[j] >= ds[i]]
    choices = [list(product(range(p), repeat=ds[j] - ds[i] + 1)) for i, j in slots]
    size = 1
    for ch in choices:
        size *= len(ch)
    if size > MAX_ENUMERATION:
        raise TooLarge(f"{size} endomorphisms to enumerate")
    for picked in product(*choices):
        M: List[List[Poly]] = [[() for _ in range(n)] for _ in range(n)]
        for (i, j), poly in zip(slots, picked):
            M[i][j] = _ptrim(poly)
        yield M


def bundle_aut_order(ds: Sequence[int], p: int) -> int:
    """|Aut(O(-d_1) + ... + O(-d_n))| on the projective line over F_p, by enumeration."""
    ds = sorted(ds)
    count = 0
    for M in _endomorphisms(ds, p):
        det = _poly_det(M, p)
        if len(det) > 1:
            raise AssertionError("determinant of a bundle endomorphism must be constant")
        if det:
            count += 1
    return count


def p1_parabolic_omega(lam: Sequence[int], p: int = 2, dmax: int = 3) -> List[SymFunc]:
    """Weighted count of bundles with nilpotent endomorphism of generic type lam and a flag at 0.

    Layer d of the result sums, over E of degree -d with no positive-degree
    subbundle and over nilpotent theta in End(E) of generic type lam,
    H_type(theta(0))[X; p] / |Aut(E)|.
    """
    lam = Partition(lam)
    n = lam.size
    if n > 2 or dmax > 3:
        raise TooLarge("the parabolic oracle is capped at |lam| <= 2, dmax <= 3")
    _check(n, p)
    layers = [SymFunc.zero() for _ in range(dmax + 1)]
    for ds in _weak_sequences(n, dmax):
        aut = bundle_aut_order(ds, p)
        tally: Dict[Partition, int] = {}
        for M in _endomorphisms(ds, p):
            power = M
            for _ in range(n - 1):
                power = _mat_mul(power, M, p)
            if n and any(e for row in power for e in row):
                continue
            # generic type from ranks of powers over F_p(x)
            ranks = [n]
            P = [[(1,) if i == j else () for j in range(n)] for i in range(n)]
            for _ in range(n):
                P = _mat_mul(P, M, p)
                ranks.append(_poly_rank(P, p))
            if _type_from_ranks(n, ranks) != lam:
                continue
            at0 = FpMatrix(p, tuple(tuple(e[0] if e else 0 for e in row) for row in M))
            t0 = at0.nilpotent_type()
            tally[t0] = tally.get(t0, 0) + 1
        d = sum(ds)
        for t0, cnt in tally.items():
            layers[d] = layers[d] + _I_basis(t0, p) * Scalar.const(Fraction(cnt, aut))
    return layers


def hall_littlewood_bruteforce(lam: Sequence[int], p: int) -> SymFunc:
    """I([N_lam]) at the prime p."""
    lam = Partition(lam)
    _check(lam.size, p)
    return _I_basis(lam, p)
