"""Exact arithmetic in F_{p^n} and in length-two Witt vectors over it.

Two layers live here.

* ``ResidueRing`` is flat arithmetic in (Z/p^e)[y]/(M) for a monic ``M`` of
  degree ``n``.  With ``e = 1`` this is the field F_{p^n}; with ``e = 2`` and
  ``M`` lifted coefficient-wise it is the Galois ring GR(p^2, n), which is
  isomorphic to W_2(F_{p^n}).  Polynomial kernels use this layer because an
  element is just an int (n = 1) or a tuple of ints.
* ``FieldElement`` and ``Witt2`` are the user-facing values.  Witt addition and
  multiplication are done with the Witt-coordinate formulas; the isomorphism
  to the Galois ring (``FieldSpec.witt_to_ring`` / ``ring_to_witt``) is the
  bridge used by the fast paths and by the tests.
"""

from __future__ import annotations

import functools
import math
import re
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence, Union

__all__ = [
    "SpecMismatchError",
    "ResidueRing",
    "FieldSpec",
    "FieldElement",
    "Witt2",
    "field_inv",
    "witt_add",
    "witt_neg",
    "witt_sub",
    "witt_mul",
    "witt_frobenius",
    "teichmuller",
    "times_p",
    "witt_reduce",
    "witt_prime_iso",
    "witt_from_residue",
    "witt_sum_constants",
    "parse_field_element",
    "parse_witt",
    "parse_modulus",
]

P_MAX = 1 << 31


class SpecMismatchError(ValueError):
    """Operands come from different base fields."""


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    if p % 2 == 0:
        return p == 2
    r = math.isqrt(p)
    f = 3
    while f <= r:
        if p % f == 0:
            return False
        f += 2
    return True


# ---------------------------------------------------------------------------
# dense univariate helpers over Z/q, coefficient tuples low -> high


def _trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _fp_divmod(a: list[int], b: list[int], p: int) -> tuple[list[int], list[int]]:
    a = _trim([c % p for c in a])
    b = _trim([c % p for c in b])
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    inv = pow(b[-1], -1, p)
    quo = [0] * max(len(a) - len(b) + 1, 0)
    while len(a) >= len(b) and a:
        c = a[-1] * inv % p
        s = len(a) - len(b)
        quo[s] = c
        for i, bc in enumerate(b):
            a[s + i] = (a[s + i] - c * bc) % p
        _trim(a)
    return quo, a


def _fp_gcd(a: list[int], b: list[int], p: int) -> list[int]:
    a = _trim([c % p for c in a])
    b = _trim([c % p for c in b])
    while b:
        _, r = _fp_divmod(a, b, p)
        a, b = b, r
    return a


def _fp_mulmod(a: list[int], b: list[int], m: list[int], p: int) -> list[int]:
    prod = [0] * (len(a) + len(b))
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                prod[i + j] += x * y
    return _fp_divmod(prod, m, p)[1]


def _fp_powmod(a: list[int], e: int, m: list[int], p: int) -> list[int]:
    result = [1]
    base = _fp_divmod(a, m, p)[1]
    while e:
        if e & 1:
            result = _fp_mulmod(result, base, m, p)
        base = _fp_mulmod(base, base, m, p)
        e >>= 1
    return result


def is_irreducible(modulus: Sequence[int], p: int) -> bool:
    """Ben-Or test: no factor of degree <= n/2, via gcd(y^(p^i) - y, M)."""
    m = _trim([c % p for c in modulus])
    n = len(m) - 1
    if n < 1:
        return False
    if n == 1:
        return True
    y = [0, 1]
    power = y
    for _ in range(n // 2):
        power = _fp_powmod(power, p, m, p)
        diff = list(power) + [0] * max(0, 2 - len(power))
        diff[1] = (diff[1] - 1) % p
        g = _fp_gcd(m, diff, p)
        if len(g) > 1:
            return False
    return True


def default_modulus(p: int, n: int) -> tuple[int, ...]:
    """Monic irreducible of degree n whose tail, read as a base-p integer, is smallest."""
    if n == 1:
        return (0, 1)
    for code in range(p**n):
        tail = []
        c = code
        for _ in range(n):
            tail.append(c % p)
            c //= p
        cand = tuple(tail) + (1,)
        if is_irreducible(cand, p):
            return cand
    raise ValueError(f"no irreducible polynomial of degree {n} over F_{p}")  # unreachable


# ---------------------------------------------------------------------------
# residue rings (Z/p^e)[y]/(M)


class ResidueRing:
    """Arithmetic in (Z/p^e)[y]/(M); elements are ints (n = 1) or n-tuples.

    Instances are created through :func:`residue_ring`, which picks the
    scalar or the extension implementation.
    """

    p: int
    e: int
    n: int
    q: int
    modulus: tuple[int, ...]

    def __init__(self, p: int, e: int, modulus: Sequence[int]):
        self.p = p
        self.e = e
        self.q = p**e
        self.modulus = tuple(int(c) % self.q for c in modulus)
        self.n = len(self.modulus) - 1

    def __repr__(self) -> str:
        return f"{type(self).__name__}(p={self.p}, e={self.e}, n={self.n})"

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, ResidueRing)
            and (self.p, self.e, self.modulus) == (other.p, other.e, other.modulus)
        )

    def __hash__(self) -> int:
        return hash((self.p, self.e, self.modulus))

    # generic helpers built on the primitives -------------------------------
    def pow(self, a, k: int):
        if k < 0:
            return self.pow(self.inv(a), -k)
        result = self.one
        while k:
            if k & 1:
                result = self.mul(result, a)
            a = self.mul(a, a)
            k >>= 1
        return result

    def is_unit(self, a) -> bool:
        return self.valuation(a) == 0

    def teichmuller(self, a):
        """The (p^n - 1)-th-root-of-unity-or-zero lift of ``a mod p``."""
        return self.pow(a, self.p**self.n)

    def inv(self, a):
        if not self.is_unit(a):
            raise ZeroDivisionError(f"{a!r} is not a unit")
        # invert mod p by Fermat in F_{p^n}, then Newton-lift to mod p^e
        x = self.pow(self.lift_from_p(self.mod_p(a)), self.p**self.n - 2)
        prec = 1
        two = self.from_int(2)
        while prec < self.e:
            x = self.mul(x, self.sub(two, self.mul(a, x)))
            prec *= 2
        return x


class _ScalarRing(ResidueRing):
    """n = 1: elements are plain ints in [0, q)."""

    @property
    def zero(self) -> int:
        return 0

    @property
    def one(self) -> int:
        return 1 % self.q

    def from_int(self, i: int) -> int:
        return i % self.q

    def from_coeffs(self, coeffs: Sequence[int]) -> int:
        return int(coeffs[0]) % self.q

    def to_coeffs(self, a: int) -> tuple[int, ...]:
        return (a,)

    def add(self, a: int, b: int) -> int:
        return (a + b) % self.q

    def sub(self, a: int, b: int) -> int:
        return (a - b) % self.q

    def neg(self, a: int) -> int:
        return -a % self.q

    def mul(self, a: int, b: int) -> int:
        return a * b % self.q

    def smul(self, k: int, a: int) -> int:
        return k * a % self.q

    def is_zero(self, a: int) -> bool:
        return a == 0

    def pow(self, a: int, k: int) -> int:
        if k < 0:
            return pow(self.inv(a), -k, self.q)
        return pow(a, k, self.q)

    def inv(self, a: int) -> int:
        if a % self.p == 0:
            raise ZeroDivisionError(f"{a} is not a unit mod {self.q}")
        return pow(a, -1, self.q)

    def mod_p(self, a: int) -> tuple[int, ...]:
        return (a % self.p,)

    def lift_from_p(self, coeffs: Sequence[int]) -> int:
        return int(coeffs[0]) % self.p

    def valuation(self, a: int) -> int:
        if a == 0:
            return self.e
        v = 0
        while a % self.p == 0:
            a //= self.p
            v += 1
        return v

    def div_p(self, a: int) -> int:
        if a % self.p:
            raise ValueError(f"{a} is not divisible by p={self.p}")
        return a // self.p

    def teichmuller(self, a: int) -> int:
        return pow(a, self.p, self.q) if self.e > 1 else a


class _ExtRing(ResidueRing):
    """n > 1: elements are length-n tuples of residues, low degree first."""

    def __init__(self, p: int, e: int, modulus: Sequence[int]):
        super().__init__(p, e, modulus)
        if self.modulus[-1] != 1:
            raise ValueError("modulus must be monic")
        self._tail = self.modulus[:-1]
        self._zero = (0,) * self.n
        self._one = (1 % self.q,) + (0,) * (self.n - 1)

    @property
    def zero(self) -> tuple[int, ...]:
        return self._zero

    @property
    def one(self) -> tuple[int, ...]:
        return self._one

    def from_int(self, i: int) -> tuple[int, ...]:
        return (i % self.q,) + (0,) * (self.n - 1)

    def from_coeffs(self, coeffs: Sequence[int]) -> tuple[int, ...]:
        if len(coeffs) != self.n:
            raise ValueError(f"expected {self.n} coefficients, got {len(coeffs)}")
        return tuple(int(c) % self.q for c in coeffs)

    def to_coeffs(self, a: tuple[int, ...]) -> tuple[int, ...]:
        return a

    def add(self, a, b):
        q = self.q
        return tuple((x + y) % q for x, y in zip(a, b))

    def sub(self, a, b):
        q = self.q
        return tuple((x - y) % q for x, y in zip(a, b))

    def neg(self, a):
        q = self.q
        return tuple(-x % q for x in a)

    def smul(self, k: int, a):
        q = self.q
        return tuple(k * x % q for x in a)

    def mul(self, a, b):
        prod = [0] * (2 * self.n - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    prod[i + j] += x * y
        return self.reduce_wide(prod)

    def reduce_wide(self, prod: list[int]) -> tuple[int, ...]:
        """Reduce an unreduced product of length <= 2n-1 modulo (q, M); clobbers ``prod``."""
        n, q, tail = self.n, self.q, self._tail
        for k in range(len(prod) - 1, n - 1, -1):
            c = prod[k] % q
            if c:
                base = k - n
                for i, m in enumerate(tail):
                    prod[base + i] -= c * m
        return tuple(c % q for c in prod[:n])

    def is_zero(self, a) -> bool:
        return not any(a)

    def mod_p(self, a) -> tuple[int, ...]:
        p = self.p
        return tuple(x % p for x in a)

    def lift_from_p(self, coeffs: Sequence[int]):
        p = self.p
        return tuple(int(c) % p for c in coeffs)

    def valuation(self, a) -> int:
        if not any(a):
            return self.e
        v = 0
        p = self.p
        while all(x % p == 0 for x in a):
            a = tuple(x // p for x in a)
            v += 1
        return v

    def div_p(self, a):
        p = self.p
        if any(x % p for x in a):
            raise ValueError(f"{a} is not divisible by p={p}")
        return tuple(x // p for x in a)


@functools.lru_cache(maxsize=None)
def residue_ring(p: int, e: int, modulus: tuple[int, ...]) -> ResidueRing:
    if len(modulus) == 2:
        return _ScalarRing(p, e, modulus)
    return _ExtRing(p, e, modulus)


# ---------------------------------------------------------------------------
# base field


@dataclass(frozen=True)
class FieldSpec:
    """The base field k = F_p[y]/(modulus), p an odd prime below 2^31.

    ``modulus`` is a monic coefficient tuple, low degree first.  When omitted
    the default irreducible of :func:`default_modulus` is used; for ``n = 1``
    it is ignored and normalised to ``(0, 1)``.
    """

    p: int
    n: int = 1
    modulus: tuple[int, ...] | None = None

    def __post_init__(self):
        p, n = self.p, self.n
        if not isinstance(p, int) or not _is_prime(p):
            raise ValueError(f"p={p!r} is not prime")
        if p == 2:
            raise ValueError("characteristic 2 is not supported (p > 2 required)")
        if p >= P_MAX:
            raise ValueError(f"p={p} too large; need p < 2^31")
        if not isinstance(n, int) or n < 1:
            raise ValueError(f"extension degree must be >= 1, got {n!r}")
        if n == 1:
            object.__setattr__(self, "modulus", (0, 1))
            return
        if self.modulus is None:
            object.__setattr__(self, "modulus", default_modulus(p, n))
            return
        mod = tuple(int(c) % p for c in self.modulus)
        if len(mod) != n + 1 or mod[-1] != 1:
            raise ValueError(f"modulus must be monic of degree {n}: {self.modulus!r}")
        if not is_irreducible(mod, p):
            raise ValueError(f"modulus {mod!r} is reducible over F_{p}")
        object.__setattr__(self, "modulus", mod)

    @property
    def q(self) -> int:
        """Order of the field."""
        return self.p**self.n

    @cached_property
    def k(self) -> ResidueRing:
        return residue_ring(self.p, 1, self.modulus)

    @cached_property
    def w2(self) -> ResidueRing:
        """Galois-ring model (Z/p^2)[y]/(M~) of W_2(k), M~ the minimal lift."""
        return residue_ring(self.p, 2, self.modulus)

    # element constructors ----------------------------------------------------
    def elem(self, value: Union[int, Sequence[int], "FieldElement"]) -> "FieldElement":
        if isinstance(value, FieldElement):
            _check_same(self, value.spec)
            return value
        if isinstance(value, int):
            return FieldElement(self, self.k.from_int(value))
        return FieldElement(self, self.k.from_coeffs(tuple(value)))

    def witt(self, a0, a1=0) -> "Witt2":
        return Witt2(self.elem(a0), self.elem(a1))

    def elements(self) -> Iterable["FieldElement"]:
        """All q elements, in order of the base-p integer code of the coefficients."""
        p, n = self.p, self.n
        for code in range(p**n):
            coeffs = []
            for _ in range(n):
                coeffs.append(code % p)
                code //= p
            yield self.elem(coeffs)

    def basis(self) -> list["FieldElement"]:
        """F_p-basis 1, y, ..., y^(n-1)."""
        return [self.elem([int(i == j) for j in range(self.n)]) for i in range(self.n)]

    # Witt <-> Galois ring -----------------------------------------------------
    def witt_to_ring(self, w: "Witt2"):
        """(a0, a1) -> tau(a0) + p * tau(a1^(1/p)) in the Galois-ring model."""
        _check_same(self, w.spec)
        R = self.w2
        t0 = R.teichmuller(R.lift_from_p(self.k.to_coeffs(w.a0.value)))
        root = self.k.pow(w.a1.value, self.p ** (self.n - 1))  # a1^(1/p)
        tail = R.smul(self.p, R.lift_from_p(self.k.to_coeffs(root)))
        return R.add(t0, tail)

    def ring_to_witt(self, x) -> "Witt2":
        R, k = self.w2, self.k
        a0 = R.mod_p(x)
        t0 = R.teichmuller(R.lift_from_p(a0))
        c = R.mod_p(R.div_p(R.sub(x, t0)))
        a1 = k.pow(k.from_coeffs(c), self.p)
        return Witt2(FieldElement(self, k.from_coeffs(a0)), FieldElement(self, a1))

    def ring_frobenius(self, x):
        """Canonical Frobenius lift on the Galois-ring model."""
        R = self.w2
        if self.n == 1:
            return x
        t0 = R.teichmuller(R.lift_from_p(R.mod_p(x)))
        c = R.div_p(R.sub(x, t0))
        return R.add(R.pow(t0, self.p), R.smul(self.p, R.pow(c, self.p)))

    def ring_times_p(self, a: "FieldElement"):
        """times_p in the Galois-ring model: p * (any lift of a)."""
        R = self.w2
        return R.smul(self.p, R.lift_from_p(self.k.to_coeffs(a.value)))

    def ring_reduce(self, x) -> "FieldElement":
        return FieldElement(self, self.k.from_coeffs(self.w2.mod_p(x)))

    def ring_lift(self, a: "FieldElement"):
        """Coefficient-wise minimal lift of a field element into the Galois-ring model."""
        return self.w2.lift_from_p(self.k.to_coeffs(a.value))


def _check_same(a: FieldSpec, b: FieldSpec) -> None:
    if a is not b and a != b:
        raise SpecMismatchError(f"field mismatch: {a} vs {b}")


@dataclass(frozen=True)
class FieldElement:
    """Element of F_{p^n}; ``value`` is the canonical residue-ring element."""

    spec: FieldSpec
    value: Union[int, tuple]

    @property
    def coeffs(self) -> tuple[int, ...]:
        return self.spec.k.to_coeffs(self.value)

    def _coerce(self, other) -> "FieldElement":
        if isinstance(other, FieldElement):
            _check_same(self.spec, other.spec)
            return other
        if isinstance(other, int):
            return self.spec.elem(other)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return FieldElement(self.spec, self.spec.k.add(self.value, o.value))

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return FieldElement(self.spec, self.spec.k.sub(self.value, o.value))

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return o - self

    def __neg__(self):
        return FieldElement(self.spec, self.spec.k.neg(self.value))

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return FieldElement(self.spec, self.spec.k.mul(self.value, o.value))

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self * field_inv(o)

    def __pow__(self, k: int):
        return FieldElement(self.spec, self.spec.k.pow(self.value, k))

    def __bool__(self) -> bool:
        return not self.spec.k.is_zero(self.value)

    def __int__(self) -> int:
        if self.spec.n != 1:
            raise TypeError("only prime-field elements convert to int")
        return self.value

    def __str__(self) -> str:
        if self.spec.n == 1:
            return str(self.value)
        return ",".join(str(c) for c in self.coeffs)

    def __repr__(self) -> str:
        return f"FieldElement({self}; p={self.spec.p}, n={self.spec.n})"


def field_inv(a: FieldElement) -> FieldElement:
    """Multiplicative inverse; ``ZeroDivisionError`` on zero."""
    if not a:
        raise ZeroDivisionError("inverse of zero in F_q")
    return FieldElement(a.spec, a.spec.k.inv(a.value))


# ---------------------------------------------------------------------------
# Witt vectors of length two


@functools.lru_cache(maxsize=None)
def witt_sum_constants(p: int) -> tuple[int, ...]:
    """c_i = binom(p, i) / p mod p for i = 1..p-1 (index 0 unused)."""
    return (0,) + tuple((math.comb(p, i) // p) % p for i in range(1, p))


@dataclass(frozen=True)
class Witt2:
    """Witt vector (a0, a1) over k; the ring operations are the Witt formulas."""

    a0: FieldElement
    a1: FieldElement

    def __post_init__(self):
        _check_same(self.a0.spec, self.a1.spec)

    @property
    def spec(self) -> FieldSpec:
        return self.a0.spec

    def _coerce(self, other):
        if isinstance(other, Witt2):
            return other
        if isinstance(other, int):
            return witt_from_int(self.spec, other)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        return o if o is NotImplemented else witt_add(self, o)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        return o if o is NotImplemented else witt_sub(self, o)

    def __rsub__(self, other):
        o = self._coerce(other)
        return o if o is NotImplemented else witt_sub(o, self)

    def __neg__(self):
        return witt_neg(self)

    def __mul__(self, other):
        o = self._coerce(other)
        return o if o is NotImplemented else witt_mul(self, o)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        result = witt_from_int(self.spec, 1)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __truediv__(self, other):
        o = self._coerce(other)
        return o if o is NotImplemented else self * o.inverse()

    def inverse(self) -> "Witt2":
        if not self.a0:
            raise ZeroDivisionError(f"{self} is not a unit in W_2")
        spec = self.spec
        return spec.ring_to_witt(spec.w2.inv(spec.witt_to_ring(self)))

    def is_unit(self) -> bool:
        return bool(self.a0)

    def __bool__(self) -> bool:
        return bool(self.a0) or bool(self.a1)

    def __str__(self) -> str:
        return f"({self.a0}|{self.a1})"

    def __repr__(self) -> str:
        return f"Witt2{self}"


def _same(x: Witt2, y: Witt2) -> FieldSpec:
    _check_same(x.spec, y.spec)
    return x.spec


def witt_add(x: Witt2, y: Witt2) -> Witt2:
    spec = _same(x, y)
    p = spec.p
    k = spec.k
    c = witt_sum_constants(p)
    # carry = sum_{i=1}^{p-1} c_i x0^i y0^(p-i), Horner-style on powers
    xs = [k.one]
    for _ in range(p - 1):
        xs.append(k.mul(xs[-1], x.a0.value))
    ys = [k.one]
    for _ in range(p - 1):
        ys.append(k.mul(ys[-1], y.a0.value))
    carry = k.zero
    for i in range(1, p):
        if c[i]:
            carry = k.add(carry, k.smul(c[i], k.mul(xs[i], ys[p - i])))
    a0 = k.add(x.a0.value, y.a0.value)
    a1 = k.sub(k.add(x.a1.value, y.a1.value), carry)
    return Witt2(FieldElement(spec, a0), FieldElement(spec, a1))


def witt_neg(x: Witt2) -> Witt2:
    # p odd: -1 = (-1, 0) in Witt coordinates, so negation is coordinate-wise
    return Witt2(-x.a0, -x.a1)


def witt_sub(x: Witt2, y: Witt2) -> Witt2:
    return witt_add(x, witt_neg(y))


def witt_mul(x: Witt2, y: Witt2) -> Witt2:
    spec = _same(x, y)
    p = spec.p
    a0 = x.a0 * y.a0
    a1 = x.a0**p * y.a1 + x.a1 * y.a0**p
    return Witt2(a0, a1)


def witt_frobenius(x: Witt2) -> Witt2:
    p = x.spec.p
    return Witt2(x.a0**p, x.a1**p)


def teichmuller(a: FieldElement) -> Witt2:
    return Witt2(a, a.spec.elem(0))


def times_p(a: FieldElement) -> Witt2:
    """The map k -> W_2(k) whose precomposition with reduction is x -> p x."""
    return Witt2(a.spec.elem(0), a**a.spec.p)


def witt_reduce(x: Witt2) -> FieldElement:
    return x.a0


def witt_from_int(spec: FieldSpec, i: int) -> Witt2:
    return spec.ring_to_witt(spec.w2.from_int(i))


def witt_prime_iso(x: Witt2) -> int:
    """W_2(F_p) -> Z/p^2, (a0, a1) -> a0^p + p a1."""
    spec = x.spec
    if spec.n != 1:
        raise ValueError("witt_prime_iso is defined only for n = 1")
    p = spec.p
    return (pow(x.a0.value, p, p * p) + p * x.a1.value) % (p * p)


def witt_from_residue(spec: FieldSpec, r: int) -> Witt2:
    """Inverse of :func:`witt_prime_iso`."""
    if spec.n != 1:
        raise ValueError("witt_from_residue is defined only for n = 1")
    return spec.ring_to_witt(r % (spec.p**2))


# ---------------------------------------------------------------------------
# text forms

_WITT_RE = re.compile(r"^\(\s*([^|()]*?)\s*\|\s*([^|()]*?)\s*\)$")


def parse_field_element(text: str, spec: FieldSpec) -> FieldElement:
    """Integer for n = 1, or comma-separated coefficients ``c0,c1,...``."""
    parts = [s.strip() for s in text.strip().split(",")]
    try:
        nums = [int(s) for s in parts]
    except ValueError:
        raise ValueError(f"bad field element {text!r}") from None
    if len(nums) == 1 and spec.n >= 1:
        if spec.n == 1:
            return spec.elem(nums[0])
        return spec.elem([nums[0]] + [0] * (spec.n - 1))
    if len(nums) != spec.n:
        raise ValueError(f"field element {text!r} needs {spec.n} coefficients")
    return spec.elem(nums)


def parse_witt(text: str, spec: FieldSpec) -> Witt2:
    """``(a0|a1)`` in Witt coordinates."""
    m = _WITT_RE.match(text.strip())
    if not m:
        raise ValueError(f"bad Witt literal {text!r}; expected '(a0|a1)'")
    return Witt2(parse_field_element(m.group(1), spec), parse_field_element(m.group(2), spec))


_MOD_TERM = re.compile(r"([+-]?)\s*(\d*)\s*\*?\s*(y(?:\^(\d+))?)?")


def parse_modulus(text: str, p: int) -> tuple[int, ...]:
    """Parse a univariate polynomial in ``y`` such as ``y^2+1`` into a coefficient tuple."""
    s = text.replace(" ", "")
    if not s:
        raise ValueError("empty modulus")
    coeffs: dict[int, int] = {}
    pos = 0
    while pos < len(s):
        m = _MOD_TERM.match(s, pos)
        if not m or m.end() == pos:
            raise ValueError(f"bad modulus {text!r} near position {pos}")
        sign, num, var, exp = m.groups()
        if pos > 0 and not sign:
            raise ValueError(f"bad modulus {text!r} near position {pos}")
        if not num and not var:
            raise ValueError(f"bad modulus {text!r} near position {pos}")
        c = int(num) if num else 1
        if sign == "-":
            c = -c
        deg = (int(exp) if exp else 1) if var else 0
        coeffs[deg] = coeffs.get(deg, 0) + c
        pos = m.end()
    n = max(coeffs)
    return tuple(coeffs.get(i, 0) % p for i in range(n + 1))
