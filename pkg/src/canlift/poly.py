"""Sparse homogeneous polynomials over k or W_2(k).

Terms are stored as a dict from packed exponent keys (see ``_packing``) to
elements of the residue ring ``spec.k`` or ``spec.w2``.  The packing width is
a function of (number of variables, degree), so equal polynomials have equal
term dicts.
"""

from __future__ import annotations

import re
from typing import Iterable, Iterator, Mapping, Sequence, Union

from . import _backend
from ._packing import Layout, layout_for, repack
from .arith import (
    FieldElement,
    FieldSpec,
    SpecMismatchError,
    Witt2,
    parse_field_element,
    parse_witt,
)

__all__ = [
    "HomogPoly",
    "ParseError",
    "InhomogeneousError",
    "poly_mul",
    "poly_pow",
    "poly_mul_capped",
    "poly_pow_capped",
    "poly_partial",
    "poly_frobenius_pullback",
    "poly_permute",
    "poly_scale_vars",
    "parse_poly",
    "format_poly",
]

RING_TAGS = ("k", "w2")
Coeff = Union[int, FieldElement, Witt2]


def ring_of(spec: FieldSpec, tag: str):
    if tag == "k":
        return spec.k
    if tag == "w2":
        return spec.w2
    raise ValueError(f"unknown coefficient ring {tag!r}; expected 'k' or 'w2'")


def to_ring(spec: FieldSpec, tag: str, c):
    """Map an int, FieldElement (k only) or Witt2 (w2 only) into the residue ring."""
    ring = ring_of(spec, tag)
    if isinstance(c, int):
        return ring.from_int(c)
    if isinstance(c, FieldElement):
        if tag != "k":
            raise TypeError("a field element is not a W_2 coefficient; use teichmuller() or a Witt2")
        if c.spec != spec:
            raise SpecMismatchError(f"field mismatch: {c.spec} vs {spec}")
        return c.value
    if isinstance(c, Witt2):
        if tag != "w2":
            raise TypeError("a Witt vector is not a coefficient over k; reduce it first")
        if c.spec != spec:
            raise SpecMismatchError(f"field mismatch: {c.spec} vs {spec}")
        return spec.witt_to_ring(c)
    raise TypeError(f"unsupported coefficient {c!r}")


def from_ring(spec: FieldSpec, tag: str, x):
    if tag == "k":
        return FieldElement(spec, x)
    return spec.ring_to_witt(x)


class HomogPoly:
    """Homogeneous polynomial in x0..x_{num_vars-1} of fixed total degree."""

    __slots__ = ("spec", "ring_tag", "num_vars", "degree", "layout", "terms")

    def __init__(self, spec: FieldSpec, ring_tag: str, num_vars: int, degree: int,
                 terms: dict, layout: Layout | None = None):
        # internal constructor: ``terms`` packed with ``layout`` and already canonical
        self.spec = spec
        self.ring_tag = ring_tag
        self.num_vars = num_vars
        self.degree = degree
        self.layout = layout if layout is not None else layout_for(num_vars, degree)
        self.terms = terms

    # construction ----------------------------------------------------------
    @classmethod
    def from_terms(cls, spec: FieldSpec, ring_tag: str, terms: Mapping[Sequence[int], Coeff],
                   num_vars: int | None = None, degree: int | None = None) -> "HomogPoly":
        items = [(tuple(int(e) for e in exps), c) for exps, c in terms.items()]
        if num_vars is None:
            if not items:
                raise ValueError("num_vars is required for the zero polynomial")
            num_vars = len(items[0][0])
        degs = {sum(e) for e, _ in items}
        for e, _ in items:
            if len(e) != num_vars:
                raise ValueError(f"exponent vector {e} has wrong length (expected {num_vars})")
            if any(x < 0 for x in e):
                raise ValueError(f"negative exponent in {e}")
        if len(degs) > 1:
            raise InhomogeneousError(sorted(degs))
        if degree is None:
            degree = degs.pop() if degs else 0
        elif degs and degs.pop() != degree:
            raise InhomogeneousError(sorted({degree} | {sum(e) for e, _ in items}))
        ring = ring_of(spec, ring_tag)
        layout = layout_for(num_vars, degree)
        acc: dict = {}
        for e, c in items:
            k = layout.pack(e)
            x = to_ring(spec, ring_tag, c)
            acc[k] = ring.add(acc[k], x) if k in acc else x
        return cls(spec, ring_tag, num_vars, degree, _canon(acc, ring), layout)

    @classmethod
    def zero(cls, spec: FieldSpec, ring_tag: str, num_vars: int, degree: int = 0) -> "HomogPoly":
        ring_of(spec, ring_tag)
        return cls(spec, ring_tag, num_vars, degree, {})

    @classmethod
    def constant(cls, spec: FieldSpec, ring_tag: str, num_vars: int, c: Coeff = 1) -> "HomogPoly":
        return cls.from_terms(spec, ring_tag, {(0,) * num_vars: c}, num_vars, 0)

    @classmethod
    def monomial(cls, spec: FieldSpec, ring_tag: str, exps: Sequence[int], c: Coeff = 1) -> "HomogPoly":
        return cls.from_terms(spec, ring_tag, {tuple(exps): c}, len(exps))

    @classmethod
    def variable(cls, spec: FieldSpec, ring_tag: str, num_vars: int, i: int) -> "HomogPoly":
        e = [0] * num_vars
        e[i] = 1
        return cls.monomial(spec, ring_tag, e)

    # views -----------------------------------------------------------------
    @property
    def ring(self):
        return ring_of(self.spec, self.ring_tag)

    def items(self) -> Iterator[tuple[tuple[int, ...], object]]:
        """(exponent vector, raw ring element) in descending lex order."""
        unpack = self.layout.unpack
        for k in sorted(self.terms, reverse=True):
            yield unpack(k), self.terms[k]

    def as_dict(self) -> dict[tuple[int, ...], Union[FieldElement, Witt2]]:
        return {e: from_ring(self.spec, self.ring_tag, c) for e, c in self.items()}

    def coeff(self, exps: Sequence[int]) -> Union[FieldElement, Witt2]:
        exps = tuple(exps)
        if len(exps) != self.num_vars or sum(exps) != self.degree or min(exps, default=0) < 0:
            x = self.ring.zero
        else:
            x = self.terms.get(self.layout.pack(exps), self.ring.zero)
        return from_ring(self.spec, self.ring_tag, x)

    def raw_coeff(self, exps: Sequence[int]):
        exps = tuple(exps)
        if len(exps) != self.num_vars or sum(exps) != self.degree or min(exps, default=0) < 0:
            return self.ring.zero
        return self.terms.get(self.layout.pack(exps), self.ring.zero)

    def is_zero(self) -> bool:
        return not self.terms

    def __len__(self) -> int:
        return len(self.terms)

    def __bool__(self) -> bool:
        return bool(self.terms)

    # comparison ------------------------------------------------------------
    def _key(self):
        return (self.spec, self.ring_tag, self.num_vars,
                self.degree if self.terms else None, tuple(sorted(self.terms.items())))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, HomogPoly):
            return NotImplemented
        return self._key() == other._key()

    def __hash__(self) -> int:
        return hash(self._key())

    # arithmetic ------------------------------------------------------------
    def _check(self, other: "HomogPoly") -> None:
        if other.spec != self.spec:
            raise SpecMismatchError(f"field mismatch: {self.spec} vs {other.spec}")
        if other.ring_tag != self.ring_tag:
            raise ValueError(f"coefficient ring mismatch: {self.ring_tag} vs {other.ring_tag}")
        if other.num_vars != self.num_vars:
            raise ValueError(f"variable count mismatch: {self.num_vars} vs {other.num_vars}")

    def _combine(self, other: "HomogPoly", sign: int) -> "HomogPoly":
        self._check(other)
        if not other.terms:
            return self
        if not self.terms:
            return other if sign > 0 else -other
        if other.degree != self.degree:
            raise InhomogeneousError([self.degree, other.degree])
        ring = self.ring
        acc = dict(self.terms)
        op = ring.add if sign > 0 else ring.sub
        zero = ring.zero
        for k, c in other.terms.items():
            acc[k] = op(acc.get(k, zero), c)
        return HomogPoly(self.spec, self.ring_tag, self.num_vars, self.degree,
                         _canon(acc, ring), self.layout)

    def __add__(self, other):
        if not isinstance(other, HomogPoly):
            return NotImplemented
        return self._combine(other, 1)

    def __sub__(self, other):
        if not isinstance(other, HomogPoly):
            return NotImplemented
        return self._combine(other, -1)

    def __neg__(self) -> "HomogPoly":
        ring = self.ring
        return HomogPoly(self.spec, self.ring_tag, self.num_vars, self.degree,
                         {k: ring.neg(c) for k, c in self.terms.items()}, self.layout)

    def scale(self, c: Coeff) -> "HomogPoly":
        ring = self.ring
        x = to_ring(self.spec, self.ring_tag, c)
        terms = {k: ring.mul(x, v) for k, v in self.terms.items()}
        return HomogPoly(self.spec, self.ring_tag, self.num_vars, self.degree,
                         _canon(terms, ring), self.layout)

    def __mul__(self, other):
        if isinstance(other, HomogPoly):
            return poly_mul(self, other)
        if isinstance(other, (int, FieldElement, Witt2)):
            return self.scale(other)
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, (int, FieldElement, Witt2)):
            return self.scale(other)
        return NotImplemented

    def __pow__(self, m: int) -> "HomogPoly":
        return poly_pow(self, m)

    # coefficient maps ----------------------------------------------------------
    def reduce(self) -> "HomogPoly":
        """Coefficient-wise reduction W_2(k) -> k."""
        if self.ring_tag == "k":
            return self
        spec = self.spec
        k, w2 = spec.k, spec.w2
        terms = {key: k.from_coeffs(w2.mod_p(c)) for key, c in self.terms.items()}
        return HomogPoly(spec, "k", self.num_vars, self.degree, _canon(terms, k), self.layout)

    def lift(self) -> "HomogPoly":
        """Coefficient-wise minimal lift k -> W_2(k) (in the Galois-ring model)."""
        if self.ring_tag == "w2":
            return self
        spec = self.spec
        k, w2 = spec.k, spec.w2
        terms = {key: w2.lift_from_p(k.to_coeffs(c)) for key, c in self.terms.items()}
        return HomogPoly(spec, "w2", self.num_vars, self.degree, terms, self.layout)

    def __str__(self) -> str:
        return format_poly(self)

    def __repr__(self) -> str:
        return f"HomogPoly[{self.ring_tag}, deg {self.degree}]({format_poly(self)})"


def _canon(acc: dict, ring) -> dict:
    is_zero = ring.is_zero
    return {k: acc[k] for k in sorted(acc) if not is_zero(acc[k])}


def _aligned(f: HomogPoly, g: HomogPoly, degree: int) -> tuple[dict, dict, Layout]:
    layout = layout_for(f.num_vars, max(degree, f.degree, g.degree))
    return repack(f.terms, f.layout, layout), repack(g.terms, g.layout, layout), layout


def poly_mul(f: HomogPoly, g: HomogPoly) -> HomogPoly:
    f._check(g)
    degree = f.degree + g.degree
    a, b, layout = _aligned(f, g, degree)
    terms = _backend.mul(a, b, f.ring, layout)
    out_layout = layout_for(f.num_vars, degree)
    return HomogPoly(f.spec, f.ring_tag, f.num_vars, degree,
                     repack(terms, layout, out_layout), out_layout)


def poly_pow(f: HomogPoly, m: int) -> HomogPoly:
    """f^m by repeated squaring."""
    if m < 0:
        raise ValueError("negative power")
    result = HomogPoly.constant(f.spec, f.ring_tag, f.num_vars, 1)
    base = f
    while m:
        if m & 1:
            result = poly_mul(result, base)
        m >>= 1
        if m:
            base = poly_mul(base, base)
    return result


def poly_mul_capped(f: HomogPoly, g: HomogPoly, cap: int) -> HomogPoly:
    """Product with every monomial having some exponent > cap discarded.

    Exponents never decrease under multiplication, so the terms kept are
    exactly the terms of the full product whose exponents are all <= cap.
    """
    f._check(g)
    degree = f.degree + g.degree
    a, b, layout = _aligned(f, g, max(degree, cap))
    terms = _backend.mul(a, b, f.ring, layout, cap)
    out_layout = layout_for(f.num_vars, degree)
    return HomogPoly(f.spec, f.ring_tag, f.num_vars, degree,
                     repack(terms, layout, out_layout), out_layout)


def poly_pow_capped(f: HomogPoly, m: int, cap: int) -> HomogPoly:
    """f^m truncated to exponents <= cap in every variable (repeated squaring)."""
    if m < 0:
        raise ValueError("negative power")
    result = HomogPoly.constant(f.spec, f.ring_tag, f.num_vars, 1)
    base = f
    while m:
        if m & 1:
            result = poly_mul_capped(result, base, cap)
        m >>= 1
        if m:
            base = poly_mul_capped(base, base, cap)
    return result


def poly_partial(f: HomogPoly, i: int) -> HomogPoly:
    if not 0 <= i < f.num_vars:
        raise IndexError(f"variable index {i} out of range 0..{f.num_vars - 1}")
    ring = f.ring
    if f.degree == 0:
        return HomogPoly.zero(f.spec, f.ring_tag, f.num_vars, 0)
    out_layout = layout_for(f.num_vars, f.degree - 1)
    acc = {}
    for e, c in f.items():
        if e[i] == 0:
            continue
        d = list(e)
        d[i] -= 1
        acc[out_layout.pack(d)] = ring.smul(e[i], c)
    return HomogPoly(f.spec, f.ring_tag, f.num_vars, f.degree - 1, _canon(acc, ring), out_layout)


def poly_frobenius_pullback(f: HomogPoly) -> HomogPoly:
    """x_i -> x_i^p on variables, phi on coefficients."""
    spec = f.spec
    p = spec.p
    degree = p * f.degree
    out_layout = layout_for(f.num_vars, degree)
    if f.ring_tag == "w2":
        phi = spec.ring_frobenius
    else:
        k = spec.k
        def phi(x):
            return k.pow(x, p)
    acc = {out_layout.pack([p * x for x in e]): phi(c) for e, c in f.items()}
    return HomogPoly(spec, f.ring_tag, f.num_vars, degree, _canon(acc, f.ring), out_layout)


def poly_permute(f: HomogPoly, perm: Sequence[int]) -> HomogPoly:
    """Substitute x_i -> x_{perm[i]}."""
    if sorted(perm) != list(range(f.num_vars)):
        raise ValueError(f"{perm} is not a permutation of 0..{f.num_vars - 1}")
    acc = {}
    for e, c in f.items():
        d = [0] * f.num_vars
        for i, x in enumerate(e):
            d[perm[i]] = x
        acc[f.layout.pack(d)] = c
    return HomogPoly(f.spec, f.ring_tag, f.num_vars, f.degree, _canon(acc, f.ring), f.layout)


def poly_scale_vars(f: HomogPoly, scalars: Sequence[Coeff]) -> HomogPoly:
    """Substitute x_i -> s_i x_i."""
    ring = f.ring
    s = [to_ring(f.spec, f.ring_tag, c) for c in scalars]
    acc = {}
    for e, c in f.items():
        x = c
        for si, ei in zip(s, e):
            if ei:
                x = ring.mul(x, ring.pow(si, ei))
        acc[f.layout.pack(e)] = x
    return HomogPoly(f.spec, f.ring_tag, f.num_vars, f.degree, _canon(acc, ring), f.layout)


# ---------------------------------------------------------------------------
# text form


class ParseError(ValueError):
    def __init__(self, message: str, text: str = "", pos: int | None = None):
        self.pos = pos
        self.text = text
        if pos is not None:
            message = f"{message} at position {pos}"
        super().__init__(message)


class InhomogeneousError(ValueError):
    def __init__(self, degrees: Iterable[int]):
        self.degrees = sorted(set(degrees))
        super().__init__(f"polynomial is not homogeneous: term degrees {self.degrees}")


_TOKEN = re.compile(
    r"\s*(?:"
    r"(?P<witt>\([^()]*\))"
    r"|(?P<field>\[[^\[\]]*\])"
    r"|(?P<var>x(?P<idx>\d+)(?:\s*\^\s*(?P<exp>-?\d+))?)"
    r"|(?P<int>\d+)"
    r"|(?P<op>[-+*])"
    r")"
)


def _tokenize(text: str):
    pos, n = 0, len(text)
    toks = []
    while True:
        while pos < n and text[pos].isspace():
            pos += 1
        if pos >= n:
            break
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ParseError(f"unexpected character {text[pos]!r}", text, pos)
        toks.append((m.lastgroup if m.lastgroup != "idx" else "var", m, m.start(m.lastgroup)))
        pos = m.end()
    return toks


def parse_terms(text: str, spec: FieldSpec, ring_tag: str, allow_negative: bool):
    """Shared parser for polynomial and dual-element text.

    Returns a list of (exponent dict, ring element).  Coefficients are
    integers (reduced into the ring), Witt literals ``(a0|a1)`` over W_2, or
    bracketed field literals ``[c0,c1,...]`` over k.  A bare coefficient is a
    constant term.
    """
    ring = ring_of(spec, ring_tag)
    toks = _tokenize(text)
    i = 0
    terms = []

    def tok():
        return toks[i] if i < len(toks) else (None, None, len(text))

    def is_op(t, chars):
        return t[0] == "op" and t[1].group("op") in chars

    sign = 1
    if is_op(tok(), "+-"):
        sign = -1 if tok()[1].group("op") == "-" else 1
        i += 1
    while True:
        kind, m, at = tok()
        exps: dict[int, int] = {}
        coeff = ring.from_int(sign)
        need_factor = True
        if kind in ("int", "witt", "field"):
            coeff = ring.smul(sign, _parse_coeff(m, spec, ring_tag, text, at))
            i += 1
            need_factor = False
            if is_op(tok(), "*"):
                i += 1
                need_factor = True
        while need_factor:
            kind, m, at = tok()
            if kind is None:
                raise ParseError("unexpected end of input", text, at)
            if kind != "var":
                raise ParseError(f"expected a variable, got {text[at:m.end()].strip()!r}", text, at)
            v = int(m.group("idx"))
            e = int(m.group("exp")) if m.group("exp") is not None else 1
            if e < 0 and not allow_negative:
                raise ParseError("negative exponent in a polynomial", text, at)
            if e == 0:
                raise ParseError("zero exponent", text, at)
            exps[v] = exps.get(v, 0) + e
            i += 1
            need_factor = False
            if is_op(tok(), "*"):
                i += 1
                need_factor = True
        terms.append((exps, coeff))
        kind, m, at = tok()
        if kind is None:
            return terms
        if not is_op(tok(), "+-"):
            raise ParseError(f"expected '+' or '-', got {text[at:m.end()].strip()!r}", text, at)
        sign = -1 if m.group("op") == "-" else 1
        i += 1


def _parse_coeff(m, spec, ring_tag, text, start):
    ring = ring_of(spec, ring_tag)
    try:
        if m.group("int") is not None:
            return ring.from_int(int(m.group("int")))
        if m.group("witt") is not None:
            if ring_tag != "w2":
                raise ParseError("Witt literal used over k", text, start)
            return spec.witt_to_ring(parse_witt(m.group("witt"), spec))
        if ring_tag != "k":
            raise ParseError("field literal used over W_2; write a Witt literal (a0|a1)", text, start)
        return parse_field_element(m.group("field")[1:-1], spec).value
    except ParseError:
        raise
    except ValueError as exc:
        raise ParseError(str(exc), text, start) from None


def parse_poly(text: str, spec: FieldSpec, ring_tag: str = "w2",
               num_vars: int | None = None) -> HomogPoly:
    """Parse e.g. ``x0^3 + x1^3 + x2^3 - 3*x0*x1*x2``; whitespace is ignored."""
    raw = parse_terms(text, spec, ring_tag, allow_negative=False)
    top = max((max(e) for e, _ in raw if e), default=-1)
    if num_vars is None:
        num_vars = top + 1
        if num_vars == 0:
            raise ParseError("cannot infer the number of variables from a constant", text, 0)
    elif top >= num_vars:
        raise ParseError(f"variable x{top} out of range for {num_vars} variables", text, 0)
    degs = {sum(e.values()) for e, _ in raw}
    if len(degs) > 1:
        raise InhomogeneousError(degs)
    ring = ring_of(spec, ring_tag)
    acc: dict = {}
    for e, c in raw:
        vec = tuple(e.get(i, 0) for i in range(num_vars))
        acc[vec] = ring.add(acc[vec], c) if vec in acc else c
    degree = degs.pop()
    layout = layout_for(num_vars, degree)
    terms = {layout.pack(v): c for v, c in acc.items()}
    return HomogPoly(spec, ring_tag, num_vars, degree, _canon(terms, ring), layout)


def format_coeff(spec: FieldSpec, ring_tag: str, c) -> str:
    if spec.n == 1:
        return str(c)
    if ring_tag == "k":
        return "[" + ",".join(str(x) for x in c) + "]"
    return str(spec.ring_to_witt(c))


def format_monomial(exps: Sequence[int]) -> str:
    parts = []
    for i, e in enumerate(exps):
        if e == 1:
            parts.append(f"x{i}")
        elif e != 0:
            parts.append(f"x{i}^{e}")
    return "*".join(parts)


def format_terms(spec: FieldSpec, ring_tag: str, items: Iterable[tuple[Sequence[int], object]]) -> str:
    ring = ring_of(spec, ring_tag)
    q = ring.q
    out = []
    for e, c in items:
        # residues over k print canonically; over Z/p^2 the signed form reads better
        neg = spec.n == 1 and ring_tag == "w2" and c > q // 2
        if neg:
            c = q - c
        mono = format_monomial(e)
        if not mono:
            body = format_coeff(spec, ring_tag, c)
        elif c == ring.one:
            body = mono
        else:
            body = f"{format_coeff(spec, ring_tag, c)}*{mono}"
        if not out:
            out.append(f"-{body}" if neg else body)
        else:
            out.append(f" - {body}" if neg else f" + {body}")
    return "".join(out) if out else "0"


def format_poly(f: HomogPoly) -> str:
    """Canonical text; parses back to an equal polynomial."""
    return format_terms(f.spec, f.ring_tag, f.items())
