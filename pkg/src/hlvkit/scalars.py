"""Exact rational functions over Q in an ordered list of variables.

A :class:`Scalar` is stored as ``x^e * n / d`` where ``e`` is an integer
(possibly negative) exponent vector and ``n``, ``d`` are coprime polynomials
with no monomial factor, ``d`` having leading coefficient 1 under the
graded-lex order.  That form is unique, so equality is structural.

Polynomial arithmetic and gcd are delegated to FLINT via python-flint.
"""

from __future__ import annotations

import re
from fractions import Fraction
from functools import lru_cache
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple, Union

import flint

BASE_NAMES = ("q", "t", "s", "u")

Exps = Tuple[int, ...]


class ScalarError(ArithmeticError):
    """Base class for errors raised by exact scalar arithmetic."""


class DivisionByZero(ScalarError, ZeroDivisionError):
    pass


class NotDivisible(ScalarError):
    """An exact division left a remainder."""


class PoleAtSpecialization(ScalarError):
    """A substitution sent the denominator to zero."""


def _name_key(name: str):
    if name in BASE_NAMES:
        return (0, BASE_NAMES.index(name), "")
    m = re.fullmatch(r"sigma(\d+)", name)
    if m:
        return (1, int(m.group(1)), "")
    return (2, 0, name)


class VarSet:
    """An ordered tuple of distinct variable names with its FLINT context.

    Instances are interned, so two varsets with the same names are the same
    object.
    """

    __slots__ = ("names", "index", "ctx")

    _cache: Dict[Tuple[str, ...], "VarSet"] = {}

    def __new__(cls, names: Iterable[str]) -> "VarSet":
        names = tuple(names)
        found = cls._cache.get(names)
        if found is not None:
            return found
        if len(set(names)) != len(names):
            raise ValueError(f"duplicate variable names in {names}")
        for nm in names:
            if not re.fullmatch(r"[A-Za-z][A-Za-z0-9_]*", nm):
                raise ValueError(f"bad variable name {nm!r}")
        self = object.__new__(cls)
        self.names = names
        self.index = {nm: i for i, nm in enumerate(names)}
        self.ctx = flint.fmpq_mpoly_ctx.get(names or ("_",), "deglex")
        cls._cache[names] = self
        return self

    @classmethod
    def canonical(cls, names: Iterable[str]) -> "VarSet":
        """The varset holding q, t, s, u plus ``names`` in canonical order."""
        return cls(sorted(set(BASE_NAMES) | set(names), key=_name_key))

    def union(self, other: "VarSet") -> "VarSet":
        if other is self:
            return self
        return VarSet.canonical(self.names + other.names)

    def __len__(self) -> int:
        return len(self.names)

    def __repr__(self) -> str:
        return f"VarSet({list(self.names)})"


DEFAULT_VARS = VarSet.canonical(())


def sigma_name(i: int) -> str:
    return f"sigma{i}"


def _width(vs: VarSet) -> int:
    # contexts with no variables carry a dummy generator
    return max(len(vs.names), 1)


def _zero_exps(vs: VarSet) -> Exps:
    return (0,) * _width(vs)


def _monomial(vs: VarSet, exps: Sequence[int]):
    return vs.ctx.from_dict({tuple(exps): 1})


def _lift_exps(exps: Sequence[int], src: VarSet, dst: VarSet) -> Exps:
    out = [0] * _width(dst)
    for nm, k in zip(src.names, exps):
        out[dst.index[nm]] = k
    return tuple(out)


def _lift_poly(p, src: VarSet, dst: VarSet):
    if src is dst:
        return p
    return dst.ctx.from_dict({_lift_exps(e, src, dst): c for e, c in _terms(p)})


def _terms(p):
    return [(tuple(int(k) for k in e), c) for e, c in p.terms()]


def _first_monom(p) -> Exps:
    return tuple(int(k) for k in p.monoms()[0])


def _strip_content(p):
    """Split ``p`` into (exponents of its monomial content, p / content)."""
    if p.is_zero():
        return None, p
    c = p.term_content()
    exps = _first_monom(c)
    if any(exps):
        p = p / c
    return exps, p


def _to_fmpq(c) -> "flint.fmpq":
    if isinstance(c, flint.fmpq):
        return c
    if isinstance(c, Fraction):
        return flint.fmpq(c.numerator, c.denominator)
    if isinstance(c, int):
        return flint.fmpq(c)
    if isinstance(c, str):
        fr = Fraction(c)
        return flint.fmpq(fr.numerator, fr.denominator)
    raise TypeError(f"cannot use {type(c).__name__} as a rational coefficient")


def _to_fraction(c) -> Fraction:
    return Fraction(int(c.p), int(c.q))


# ---------------------------------------------------------------------------
# printing


def _fmt_coeff(c: Fraction) -> str:
    if c.denominator == 1:
        return str(c.numerator)
    return f"{c.numerator}/{c.denominator}"


def _fmt_terms(vs: VarSet, terms: Sequence[Tuple[Exps, Fraction]]) -> str:
    if not terms:
        return "0"
    ordered = sorted(terms, key=lambda ec: (sum(ec[0]), ec[0]), reverse=True)
    out: List[str] = []
    for k, (exps, c) in enumerate(ordered):
        neg = c < 0
        c = -c if neg else c
        factors = []
        for nm, e in zip(vs.names, exps):
            if e == 1:
                factors.append(nm)
            elif e:
                factors.append(f"{nm}^{e}")
        if not factors:
            body = _fmt_coeff(c)
        elif c == 1:
            body = "*".join(factors)
        else:
            body = _fmt_coeff(c) + "*" + "*".join(factors)
        if k == 0:
            out.append(("-" if neg else "") + body)
        else:
            out.append((" - " if neg else " + ") + body)
    return "".join(out)


# ---------------------------------------------------------------------------
# MultiPoly


class MultiPoly:
    """A Laurent polynomial with rational coefficients.

    Stored as ``x^shift * poly`` with ``poly`` free of monomial factors.
    """

    __slots__ = ("vs", "shift", "poly")

    def __init__(self, vs: VarSet, shift: Exps, poly) -> None:
        exps, poly = _strip_content(poly)
        if exps is None:
            shift = _zero_exps(vs)
        elif any(exps):
            shift = tuple(a + b for a, b in zip(shift, exps))
        self.vs = vs
        self.shift = tuple(shift)
        self.poly = poly

    @classmethod
    def from_terms(cls, terms: Mapping[Sequence[int], object], vs: VarSet = DEFAULT_VARS) -> "MultiPoly":
        """Build from a map of exponent vectors (negatives allowed) to coefficients."""
        w = _width(vs)
        items = []
        for e, c in terms.items():
            e = tuple(e)
            if len(vs.names) and len(e) != len(vs.names):
                raise ValueError(f"exponent vector {e} has wrong length for {vs}")
            if not len(vs.names):
                e = (0,) * w
            c = _to_fmpq(c)
            if c != 0:
                items.append((e, c))
        if not items:
            return cls(vs, _zero_exps(vs), vs.ctx.from_dict({}))
        low = tuple(min(e[i] for e, _ in items) for i in range(w))
        poly = vs.ctx.from_dict({tuple(a - b for a, b in zip(e, low)): c for e, c in items})
        return cls(vs, low, poly)

    @property
    def terms(self) -> Dict[Exps, Fraction]:
        sh = self.shift
        return {
            tuple(a + b for a, b in zip(e, sh))[: len(self.vs.names)]: _to_fraction(c)
            for e, c in _terms(self.poly)
        }

    def is_zero(self) -> bool:
        return self.poly.is_zero()

    def _align(self, other: "MultiPoly"):
        vs = self.vs.union(other.vs)
        a = (_lift_exps(self.shift, self.vs, vs), _lift_poly(self.poly, self.vs, vs))
        b = (_lift_exps(other.shift, other.vs, vs), _lift_poly(other.poly, other.vs, vs))
        return vs, a, b

    def __add__(self, other: "MultiPoly") -> "MultiPoly":
        vs, (ea, pa), (eb, pb) = self._align(other)
        low = tuple(min(x, y) for x, y in zip(ea, eb))
        pa = pa * _monomial(vs, [x - y for x, y in zip(ea, low)])
        pb = pb * _monomial(vs, [x - y for x, y in zip(eb, low)])
        return MultiPoly(vs, low, pa + pb)

    def __neg__(self) -> "MultiPoly":
        return MultiPoly(self.vs, self.shift, -self.poly)

    def __sub__(self, other: "MultiPoly") -> "MultiPoly":
        return self + (-other)

    def __mul__(self, other: "MultiPoly") -> "MultiPoly":
        vs, (ea, pa), (eb, pb) = self._align(other)
        return MultiPoly(vs, tuple(x + y for x, y in zip(ea, eb)), pa * pb)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, MultiPoly):
            return NotImplemented
        vs, (ea, pa), (eb, pb) = self._align(other)
        return ea == eb and pa == pb

    def __hash__(self) -> int:
        return hash(frozenset(self.terms.items()))

    def __str__(self) -> str:
        return _fmt_terms(self.vs, list(self.terms.items()))

    __repr__ = __str__


def exact_divide(a: MultiPoly, b: MultiPoly) -> MultiPoly:
    """Return ``c`` with ``a == b * c``, or raise :class:`NotDivisible`.

    Monomials are units in the Laurent ring, so only the monomial-free parts
    have to divide.
    """
    if b.is_zero():
        raise DivisionByZero("exact_divide by zero")
    vs, (ea, pa), (eb, pb) = a._align(b)
    try:
        c = pa / pb
    except Exception as exc:  # flint raises DomainError on a remainder
        raise NotDivisible(f"({a}) is not divisible by ({b})") from exc
    return MultiPoly(vs, tuple(x - y for x, y in zip(ea, eb)), c)


# ---------------------------------------------------------------------------
# Scalar

Coercible = Union["Scalar", int, Fraction]


class Scalar:
    """An element of Q(q, t, s, u, sigma_1, ...), always in normal form."""

    __slots__ = ("vs", "e", "n", "d", "_hash")

    def __init__(self, vs: VarSet, e: Exps, n, d, _normalized: bool = False) -> None:
        if not _normalized:
            vs, e, n, d = _normalize(vs, e, n, d)
        self.vs = vs
        self.e = e
        self.n = n
        self.d = d
        self._hash = None

    # construction -------------------------------------------------------

    @classmethod
    def const(cls, c, vs: VarSet = DEFAULT_VARS) -> "Scalar":
        c = _to_fmpq(c)
        return cls(vs, _zero_exps(vs), vs.ctx.from_dict({_zero_exps(vs): c} if c != 0 else {}),
                   vs.ctx.from_dict({_zero_exps(vs): 1}), _normalized=True)

    @classmethod
    def var(cls, name: str) -> "Scalar":
        vs = DEFAULT_VARS if name in BASE_NAMES else VarSet.canonical((name,))
        e = [0] * len(vs.names)
        e[vs.index[name]] = 1
        one = vs.ctx.from_dict({_zero_exps(vs): 1})
        return cls(vs, tuple(e), one, one, _normalized=True)

    @classmethod
    def monomial(cls, exps: Mapping[str, int], coeff=1) -> "Scalar":
        out = cls.const(coeff)
        for nm, k in exps.items():
            out = out * cls.var(nm) ** k
        return out

    @classmethod
    def from_multipoly(cls, num: MultiPoly, den: Optional[MultiPoly] = None) -> "Scalar":
        if den is None:
            one = num.vs.ctx.from_dict({_zero_exps(num.vs): 1})
            return cls(num.vs, num.shift, num.poly, one)
        vs, (ea, pa), (eb, pb) = num._align(den)
        if pb.is_zero():
            raise DivisionByZero("zero denominator")
        return cls(vs, tuple(x - y for x, y in zip(ea, eb)), pa, pb)

    @staticmethod
    def coerce(x: Coercible) -> "Scalar":
        if isinstance(x, Scalar):
            return x
        if isinstance(x, (int, Fraction)) and not isinstance(x, bool):
            return Scalar.const(x)
        raise TypeError(f"cannot coerce {type(x).__name__} to Scalar")

    # views --------------------------------------------------------------

    @property
    def num(self) -> MultiPoly:
        return MultiPoly(self.vs, self.e, self.n)

    @property
    def den(self) -> MultiPoly:
        return MultiPoly(self.vs, _zero_exps(self.vs), self.d)

    def is_zero(self) -> bool:
        return self.n.is_zero()

    def is_one(self) -> bool:
        return not any(self.e) and self.n.is_one() and self.d.is_one()

    def is_laurent_polynomial(self) -> bool:
        return self.d.is_one()

    def is_constant(self) -> bool:
        return not any(self.e) and self.n.is_constant() and self.d.is_constant()

    def to_fraction(self) -> Fraction:
        if not self.is_constant():
            raise ValueError(f"{self} is not a constant")
        if self.n.is_zero():
            return Fraction(0)
        return _to_fraction(self.n.leading_coefficient())

    def as_laurent(self) -> MultiPoly:
        """The numerator divided exactly by the denominator."""
        return exact_divide(self.num, self.den)

    def variables(self) -> List[str]:
        used = [0] * _width(self.vs)
        for src in (self.n, self.d):
            for e, _ in _terms(src):
                for i, k in enumerate(e):
                    used[i] |= bool(k)
        for i, k in enumerate(self.e):
            used[i] |= bool(k)
        return [nm for nm, u in zip(self.vs.names, used) if u]

    # arithmetic ---------------------------------------------------------

    def _align(self, other: "Scalar"):
        if other.vs is self.vs:
            return self.vs, self, other
        vs = self.vs.union(other.vs)
        return vs, self._lift(vs), other._lift(vs)

    def _lift(self, vs: VarSet) -> "Scalar":
        if vs is self.vs:
            return self
        src = self.vs
        return Scalar(vs, _lift_exps(self.e, src, vs), _lift_poly(self.n, src, vs),
                      _lift_poly(self.d, src, vs), _normalized=True)

    def __add__(self, other: Coercible) -> "Scalar":
        try:
            other = Scalar.coerce(other)
        except TypeError:
            return NotImplemented
        if other.is_zero():
            return self
        if self.is_zero():
            return other
        vs, a, b = self._align(other)
        low = tuple(min(x, y) for x, y in zip(a.e, b.e))
        na = a.n if a.e == low else a.n * _monomial(vs, [x - y for x, y in zip(a.e, low)])
        nb = b.n if b.e == low else b.n * _monomial(vs, [x - y for x, y in zip(b.e, low)])
        if a.d == b.d:
            return Scalar(vs, low, na + nb, a.d)
        g = a.d.gcd(b.d)
        if g.is_one():
            return Scalar(vs, low, na * b.d + nb * a.d, a.d * b.d)
        da, db = a.d / g, b.d / g
        return Scalar(vs, low, na * db + nb * da, a.d * db)

    __radd__ = __add__

    def __neg__(self) -> "Scalar":
        return Scalar(self.vs, self.e, -self.n, self.d, _normalized=True)

    def __sub__(self, other: Coercible) -> "Scalar":
        try:
            other = Scalar.coerce(other)
        except TypeError:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other: Coercible) -> "Scalar":
        return Scalar.coerce(other) - self

    def __mul__(self, other: Coercible) -> "Scalar":
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            if other == 0:
                return Scalar.const(0, self.vs)
            return Scalar(self.vs, self.e, self.n * _to_fmpq(other), self.d, _normalized=True)
        if not isinstance(other, Scalar):
            return NotImplemented
        if self.is_zero() or other.is_zero():
            return Scalar.const(0, self.vs.union(other.vs))
        vs, a, b = self._align(other)
        g1 = a.n.gcd(b.d)
        g2 = b.n.gcd(a.d)
        na, db = (a.n, b.d) if g1.is_one() else (a.n / g1, b.d / g1)
        nb, da = (b.n, a.d) if g2.is_one() else (b.n / g2, a.d / g2)
        n, d = na * nb, da * db
        lc = d.leading_coefficient()
        if lc != 1:
            n, d = n / lc, d / lc
        return Scalar(vs, tuple(x + y for x, y in zip(a.e, b.e)), n, d, _normalized=True)

    __rmul__ = __mul__

    def inverse(self) -> "Scalar":
        if self.is_zero():
            raise DivisionByZero("inverse of zero")
        n, d = self.d, self.n
        lc = d.leading_coefficient()
        if lc != 1:
            n, d = n / lc, d / lc
        return Scalar(self.vs, tuple(-x for x in self.e), n, d, _normalized=True)

    def __truediv__(self, other: Coercible) -> "Scalar":
        try:
            other = Scalar.coerce(other)
        except TypeError:
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other: Coercible) -> "Scalar":
        return Scalar.coerce(other) * self.inverse()

    def __pow__(self, k: int) -> "Scalar":
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return self.inverse() ** (-k)
        if k == 0:
            return Scalar.const(1, self.vs)
        return Scalar(self.vs, tuple(x * k for x in self.e), self.n ** k, self.d ** k, _normalized=True)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            other = Scalar.const(other)
        if not isinstance(other, Scalar):
            return NotImplemented
        if self.is_zero() or other.is_zero():
            return self.is_zero() and other.is_zero()
        vs, a, b = self._align(other)
        return a.e == b.e and a.n == b.n and a.d == b.d

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(self.to_text())
        return self._hash

    # maps ---------------------------------------------------------------

    def frobenius(self, k: int) -> "Scalar":
        """Replace every variable v by v**k (the action of p_k)."""
        if k == 1 or self.is_constant():
            return self
        w = [k] * _width(self.vs)
        return Scalar(self.vs, tuple(x * k for x in self.e), self.n.inflate(w), self.d.inflate(w),
                      _normalized=False)

    def substitute(self, bindings: Mapping[str, Coercible]) -> "Scalar":
        """Evaluate with ``bindings`` applied to the named variables simultaneously."""
        if not bindings:
            return self
        vals = {nm: Scalar.coerce(v) for nm, v in bindings.items() if nm in self.vs.index}
        if not vals:
            return self
        # numerator and denominator as honest polynomials
        pos = [max(x, 0) for x in self.e]
        neg = [max(-x, 0) for x in self.e]
        top = self.n * _monomial(self.vs, pos)
        bot = self.d * _monomial(self.vs, neg)
        vs = self.vs
        for v in vals.values():
            vs = vs.union(v.vs)
        vals = {nm: v._lift(vs) for nm, v in vals.items()}
        top_v = _eval_poly(top, self.vs, vs, vals)
        bot_v = _eval_poly(bot, self.vs, vs, vals)
        if bot_v.is_zero():
            raise PoleAtSpecialization(f"denominator of {self} vanishes under {dict(bindings)}")
        return top_v / bot_v

    def series(self, var: str, order: int) -> List["Scalar"]:
        """Coefficients of var**0 .. var**order in the expansion at var = 0."""
        if var not in self.vs.index:
            return [self] + [Scalar.const(0, self.vs)] * order
        i = self.vs.index[var]
        if self.e[i] < 0:
            raise PoleAtSpecialization(f"{self} has a pole at {var}=0")
        num = _split_by_var(self.n, i, self.vs)
        den = _split_by_var(self.d, i, self.vs)
        shift = list(self.e)
        shift[i] = 0
        mono = Scalar(self.vs, tuple(shift), _monomial(self.vs, _zero_exps(self.vs)),
                      _monomial(self.vs, _zero_exps(self.vs)), _normalized=True)
        b0 = den.get(0)
        if b0 is None:
            raise PoleAtSpecialization(f"{self} has a pole at {var}=0")
        b0inv = b0.inverse()
        zero = Scalar.const(0, self.vs)
        raw: List[Scalar] = []
        for j in range(order + 1):
            acc = num.get(j, zero)
            for k, bk in den.items():
                if 0 < k <= j:
                    acc = acc - bk * raw[j - k]
            raw.append(acc * b0inv)
        lead = self.e[i]
        out = [zero] * (order + 1)
        for j in range(order + 1 - lead):
            out[j + lead] = raw[j] * mono
        return out

    # text and JSON ------------------------------------------------------

    def to_text(self) -> str:
        num = self.num
        if self.d.is_one():
            return str(num)
        ns = str(num)
        if len(self.n) > 1 or "/" in ns:
            ns = f"({ns})"
        ds = str(self.den)
        if len(self.d) > 1:
            ds = f"({ds})"
        return f"{ns}/{ds}"

    __str__ = to_text

    def __repr__(self) -> str:
        return f"Scalar({self.to_text()!r})"

    def to_json(self) -> dict:
        used = self.variables()
        names = [nm for nm in self.vs.names if nm in used]
        pick = [self.vs.index[nm] for nm in names]

        def enc(mp: MultiPoly):
            items = sorted(mp.terms.items(), key=lambda ec: (sum(ec[0]), ec[0]), reverse=True)
            return [{"c": _fmt_coeff(c), "e": [e[i] for i in pick]} for e, c in items]

        return {"vars": names, "num": enc(self.num), "den": enc(self.den)}

    @classmethod
    def from_json(cls, data: Mapping) -> "Scalar":
        vs = VarSet.canonical(data["vars"])
        names = list(data["vars"])

        def dec(items):
            terms = {}
            for it in items:
                e = [0] * len(vs.names)
                for nm, k in zip(names, it["e"]):
                    e[vs.index[nm]] = k
                terms[tuple(e)] = Fraction(it["c"])
            return MultiPoly.from_terms(terms, vs)

        return cls.from_multipoly(dec(data["num"]), dec(data["den"]))


def _normalize(vs: VarSet, e: Exps, n, d):
    if d.is_zero():
        raise DivisionByZero("zero denominator")
    if n.is_zero():
        return vs, _zero_exps(vs), n, vs.ctx.from_dict({_zero_exps(vs): 1})
    g = n.gcd(d)
    if not g.is_one():
        n, d = n / g, d / g
    en, n = _strip_content(n)
    ed, d = _strip_content(d)
    e = tuple(a + b - c for a, b, c in zip(e, en, ed))
    lc = d.leading_coefficient()
    if lc != 1:
        n, d = n / lc, d / lc
    return vs, e, n, d


def _split_by_var(p, i: int, vs: VarSet) -> Dict[int, Scalar]:
    groups: Dict[int, dict] = {}
    for exps, c in _terms(p):
        k = exps[i]
        rest = list(exps)
        rest[i] = 0
        groups.setdefault(k, {})[tuple(rest)] = c
    one = vs.ctx.from_dict({_zero_exps(vs): 1})
    return {k: Scalar(vs, _zero_exps(vs), vs.ctx.from_dict(t), one) for k, t in groups.items()}


def _eval_poly(p, src: VarSet, dst: VarSet, vals: Mapping[str, Scalar]) -> Scalar:
    """Evaluate a polynomial of ``src`` at Scalars for some of its variables."""
    bound = [(src.index[nm], v) for nm, v in vals.items()]
    # fast path: every value is a constant times a Laurent monomial
    mono_vals = {}
    for i, v in bound:
        if v.is_zero():
            mono_vals[i] = None
        elif len(v.n) == 1 and len(v.d) == 1:
            c = v.n.leading_coefficient() / v.d.leading_coefficient()
            shift = tuple(a + b - x for a, b, x in zip(v.e, _first_monom(v.n), _first_monom(v.d)))
            mono_vals[i] = (c, shift)
        else:
            break
    else:
        w = _width(dst)
        out: Dict[Exps, object] = {}
        free = [(k, dst.index[nm]) for k, nm in enumerate(src.names) if k not in mono_vals]
        for exps, c in _terms(p):
            coeff = c
            ev = [0] * w
            dead = False
            for i, mv in mono_vals.items():
                k = exps[i]
                if not k:
                    continue
                if mv is None:
                    dead = True
                    break
                vc, vsh = mv
                coeff = coeff * vc ** k
                for j in range(w):
                    ev[j] += vsh[j] * k
            if dead:
                continue
            for k, j in free:
                ev[j] += exps[k]
            key = tuple(ev)
            out[key] = out.get(key, 0) + coeff
        return Scalar.from_multipoly(MultiPoly.from_terms({k: c for k, c in out.items()}, dst)
                                     if dst.names else MultiPoly.from_terms({}, dst))
    # general path
    total = Scalar.const(0, dst)
    powers: Dict[Tuple[int, int], Scalar] = {}
    free = [(k, nm) for k, nm in enumerate(src.names) if nm not in vals]
    bound_idx = dict(bound)
    for exps, c in _terms(p):
        term = Scalar.const(_to_fraction(c), dst)
        for i, v in bound_idx.items():
            k = exps[i]
            if k:
                key = (i, k)
                if key not in powers:
                    powers[key] = v ** k
                term = term * powers[key]
        for k, nm in free:
            if exps[k]:
                term = term * Scalar.var(nm)._lift(dst) ** exps[k]
        total = total + term
    return total


def S(x: Union[str, int, Fraction]) -> Scalar:
    """Shorthand: a variable name or a rational constant as a Scalar."""
    if isinstance(x, str):
        return Scalar.var(x)
    return Scalar.const(x)


q = Scalar.var("q")
t = Scalar.var("t")
s = Scalar.var("s")
u = Scalar.var("u")
ZERO = Scalar.const(0)
ONE = Scalar.const(1)


@lru_cache(maxsize=None)
def sigma(i: int) -> Scalar:
    return Scalar.var(sigma_name(i))
