"""Integer partitions and the hook products attached to them."""

from __future__ import annotations

from functools import lru_cache
from math import factorial
from typing import Iterable, Iterator, List, Sequence, Tuple

from .scalars import ONE, Scalar, q, t


class SizeMismatch(ValueError):
    pass


class ZeroArgument(ValueError):
    pass


class Partition(tuple):
    """A weakly decreasing tuple of positive integers.

    Cells are indexed (i, j) in matrix coordinates starting at 0, with row i
    of length ``self[i]``.
    """

    __slots__ = ()

    def __new__(cls, parts: Iterable[int] = ()) -> "Partition":
        parts = tuple(int(x) for x in parts)
        for a, b in zip(parts, parts[1:]):
            if a < b:
                raise ValueError(f"parts must be weakly decreasing: {parts}")
        if parts and parts[-1] < 1:
            raise ValueError(f"parts must be positive: {parts}")
        return super().__new__(cls, parts)

    @classmethod
    def from_composition(cls, parts: Iterable[int]) -> "Partition":
        """Sort a composition into a partition, dropping zero parts."""
        return cls(sorted((x for x in parts if x), reverse=True))

    @classmethod
    def parse(cls, text: str) -> "Partition":
        text = text.strip()
        if text in ("-", ""):
            return cls()
        return cls(int(x) for x in text.split(","))

    @property
    def size(self) -> int:
        return sum(self)

    def conjugate(self) -> "Partition":
        return conjugate(self)

    def cells(self) -> Iterator[Tuple[int, int]]:
        for i, row in enumerate(self):
            for j in range(row):
                yield i, j

    def arm(self, i: int, j: int) -> int:
        return self[i] - j - 1

    def leg(self, i: int, j: int) -> int:
        return self.conjugate()[j] - i - 1

    def arm_legs(self) -> List[Tuple[int, int]]:
        conj = self.conjugate()
        return [(self[i] - j - 1, conj[j] - i - 1) for i, j in self.cells()]

    def n(self) -> int:
        """Sum of the leg lengths over all cells."""
        return sum(i * row for i, row in enumerate(self))

    def multiplicities(self) -> dict:
        out: dict = {}
        for x in self:
            out[x] = out.get(x, 0) + 1
        return out

    def z(self) -> int:
        """The centralizer size prod i^{m_i} m_i! of a permutation of cycle type self."""
        out = 1
        for i, m in self.multiplicities().items():
            out *= i ** m * factorial(m)
        return out

    def text(self) -> str:
        return ",".join(map(str, self)) if self else "-"

    def __repr__(self) -> str:
        return f"Partition({self.text()})"


@lru_cache(maxsize=None)
def conjugate(lam: Partition) -> Partition:
    if not lam:
        return Partition()
    return Partition(sum(1 for x in lam if x > j) for j in range(lam[0]))


def dominance_leq(mu: Sequence[int], lam: Sequence[int]) -> bool:
    """True when mu is below lam in dominance order."""
    if sum(mu) != sum(lam):
        raise SizeMismatch(f"{tuple(mu)} and {tuple(lam)} have different sizes")
    a = b = 0
    for k in range(max(len(mu), len(lam))):
        a += mu[k] if k < len(mu) else 0
        b += lam[k] if k < len(lam) else 0
        if a > b:
            return False
    return True


@lru_cache(maxsize=None)
def enumerate_partitions(n: int) -> Tuple[Partition, ...]:
    """All partitions of n in reverse lexicographic order."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    out: List[Partition] = []

    def rec(rest: int, cap: int, prefix: Tuple[int, ...]) -> None:
        if rest == 0:
            out.append(Partition(prefix))
            return
        for k in range(min(rest, cap), 0, -1):
            rec(rest - k, k, prefix + (k,))

    rec(n, n, ())
    return tuple(out)


@lru_cache(maxsize=None)
def z_qt(lam: Partition) -> Scalar:
    """prod over cells of (q^a - t^(l+1)) (q^(a+1) - t^l)."""
    if not lam:
        raise ValueError("z_qt needs a nonempty partition")
    out = ONE
    for a, l in Partition(lam).arm_legs():
        out = out * (q ** a - t ** (l + 1)) * (q ** (a + 1) - t ** l)
    return out


def N_u(lam: Partition, u: Scalar) -> Scalar:
    """prod over cells of (q^a - u t^(1+l)) (q^(a+1) - u^-1 t^l)."""
    u = Scalar.coerce(u)
    if u.is_zero():
        raise ZeroArgument("N_u needs a nonzero argument")
    uinv = u.inverse()
    out = ONE
    for a, l in Partition(lam).arm_legs():
        out = out * (q ** a - u * t ** (1 + l)) * (q ** (a + 1) - uinv * t ** l)
    return out
