"""The graded dual module S^v and linear algebra over W_2(k).

S^v_t has basis the Laurent monomials x^a with every a_i <= -1 and sum t.
The polynomial ring acts by multiplying and discarding any monomial with a
nonnegative exponent.  Internally a dual element stores the negated exponent
vector (all entries >= 1) under the same packing as ``HomogPoly``.
"""

from __future__ import annotations

import functools
import itertools
import math
from typing import Iterable, Mapping, Sequence, Union

from . import _backend
from ._packing import Layout, layout_for, repack
from .arith import FieldElement, FieldSpec, SpecMismatchError, Witt2
from .poly import (
    Coeff,
    HomogPoly,
    InhomogeneousError,
    ParseError,
    format_terms,
    from_ring,
    parse_terms,
    ring_of,
    to_ring,
)

__all__ = [
    "DualElement",
    "Witt2Matrix",
    "dual_basis",
    "dual_basis_size",
    "dual_act",
    "dual_pairing",
    "dual_partial",
    "dual_frobenius",
    "howell_kernel",
    "kernel_raw",
    "parse_dual",
    "format_dual",
]


def dual_basis(num_vars: int, t: int) -> list[tuple[int, ...]]:
    """All exponent vectors with entries <= -1 summing to t, ascending lex order."""
    m = -t
    if num_vars < 1 or m < num_vars:
        return []
    out = []
    # compositions of m into num_vars positive parts via bar positions
    for bars in itertools.combinations(range(1, m), num_vars - 1):
        edges = (0,) + bars + (m,)
        out.append(tuple(edges[i] - edges[i + 1] for i in range(num_vars)))
    out.sort()
    return out


def dual_basis_size(num_vars: int, t: int) -> int:
    return math.comb(-t - 1, num_vars - 1) if -t >= num_vars else 0


def _dual_layout(num_vars: int, t: int) -> Layout:
    return layout_for(num_vars, max(-t, 1))


class DualElement:
    """Element of S^v_t over k or W_2(k)."""

    __slots__ = ("spec", "ring_tag", "num_vars", "degree", "layout", "terms")

    def __init__(self, spec: FieldSpec, ring_tag: str, num_vars: int, degree: int,
                 terms: dict, layout: Layout | None = None):
        # internal: keys pack the negated exponents
        self.spec = spec
        self.ring_tag = ring_tag
        self.num_vars = num_vars
        self.degree = degree
        self.layout = layout if layout is not None else _dual_layout(num_vars, degree)
        self.terms = terms

    @classmethod
    def from_terms(cls, spec: FieldSpec, ring_tag: str, terms: Mapping[Sequence[int], Coeff],
                   num_vars: int | None = None, degree: int | None = None) -> "DualElement":
        items = [(tuple(int(e) for e in exps), c) for exps, c in terms.items()]
        if num_vars is None:
            if not items:
                raise ValueError("num_vars is required for the zero element")
            num_vars = len(items[0][0])
        for e, _ in items:
            if len(e) != num_vars:
                raise ValueError(f"exponent vector {e} has wrong length (expected {num_vars})")
            if any(x >= 0 for x in e):
                raise ValueError(f"dual monomial {e} has a nonnegative exponent")
        degs = {sum(e) for e, _ in items}
        if degree is not None:
            degs.add(degree)
        if len(degs) > 1:
            raise InhomogeneousError(degs)
        degree = degs.pop() if degs else -num_vars
        ring = ring_of(spec, ring_tag)
        layout = _dual_layout(num_vars, degree)
        acc: dict = {}
        for e, c in items:
            k = layout.pack([-x for x in e])
            x = to_ring(spec, ring_tag, c)
            acc[k] = ring.add(acc[k], x) if k in acc else x
        return cls(spec, ring_tag, num_vars, degree, _canon(acc, ring), layout)

    @classmethod
    def zero(cls, spec: FieldSpec, ring_tag: str, num_vars: int, degree: int) -> "DualElement":
        return cls(spec, ring_tag, num_vars, degree, {})

    @classmethod
    def monomial(cls, spec: FieldSpec, ring_tag: str, exps: Sequence[int], c: Coeff = 1) -> "DualElement":
        return cls.from_terms(spec, ring_tag, {tuple(exps): c}, len(exps))

    @property
    def ring(self):
        return ring_of(self.spec, self.ring_tag)

    def items(self):
        """(exponent vector, raw ring element), ascending lex order of the exponents."""
        unpack = self.layout.unpack
        for k in sorted(self.terms, reverse=True):
            yield tuple(-x for x in unpack(k)), self.terms[k]

    def as_dict(self) -> dict[tuple[int, ...], Union[FieldElement, Witt2]]:
        return {e: from_ring(self.spec, self.ring_tag, c) for e, c in self.items()}

    def raw_coeff(self, exps: Sequence[int]):
        exps = tuple(exps)
        if len(exps) != self.num_vars or sum(exps) != self.degree or max(exps, default=-1) >= 0:
            return self.ring.zero
        return self.terms.get(self.layout.pack([-x for x in exps]), self.ring.zero)

    def coeff(self, exps: Sequence[int]) -> Union[FieldElement, Witt2]:
        return from_ring(self.spec, self.ring_tag, self.raw_coeff(exps))

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __len__(self) -> int:
        return len(self.terms)

    def _key(self):
        # the degree of zero is unconstrained
        return (self.spec, self.ring_tag, self.num_vars,
                self.degree if self.terms else None, tuple(sorted(self.terms.items())))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, DualElement):
            return NotImplemented
        return self._key() == other._key()

    def __hash__(self) -> int:
        return hash(self._key())

    def _check(self, other) -> None:
        if other.spec != self.spec:
            raise SpecMismatchError(f"field mismatch: {self.spec} vs {other.spec}")
        if other.ring_tag != self.ring_tag:
            raise ValueError(f"coefficient ring mismatch: {self.ring_tag} vs {other.ring_tag}")
        if other.num_vars != self.num_vars:
            raise ValueError(f"variable count mismatch: {self.num_vars} vs {other.num_vars}")

    def _combine(self, other: "DualElement", sign: int) -> "DualElement":
        self._check(other)
        if not other.terms:
            return self
        if not self.terms:
            return other if sign > 0 else -other
        if other.degree != self.degree:
            raise InhomogeneousError([self.degree, other.degree])
        ring = self.ring
        op = ring.add if sign > 0 else ring.sub
        acc = dict(self.terms)
        zero = ring.zero
        for k, c in other.terms.items():
            acc[k] = op(acc.get(k, zero), c)
        return DualElement(self.spec, self.ring_tag, self.num_vars, self.degree,
                           _canon(acc, ring), self.layout)

    def __add__(self, other):
        if not isinstance(other, DualElement):
            return NotImplemented
        return self._combine(other, 1)

    def __sub__(self, other):
        if not isinstance(other, DualElement):
            return NotImplemented
        return self._combine(other, -1)

    def __neg__(self) -> "DualElement":
        ring = self.ring
        return DualElement(self.spec, self.ring_tag, self.num_vars, self.degree,
                           {k: ring.neg(c) for k, c in self.terms.items()}, self.layout)

    def scale(self, c: Coeff) -> "DualElement":
        ring = self.ring
        x = to_ring(self.spec, self.ring_tag, c)
        return DualElement(self.spec, self.ring_tag, self.num_vars, self.degree,
                           _canon({k: ring.mul(x, v) for k, v in self.terms.items()}, ring),
                           self.layout)

    def __rmul__(self, other):
        if isinstance(other, (int, FieldElement, Witt2)):
            return self.scale(other)
        if isinstance(other, HomogPoly):
            return dual_act(other, self)
        return NotImplemented

    def permute(self, perm: Sequence[int]) -> "DualElement":
        """Substitute x_i -> x_{perm[i]}."""
        acc = {}
        nv = self.num_vars
        for k, c in self.terms.items():
            e = self.layout.unpack(k)
            d = [0] * nv
            for i, x in enumerate(e):
                d[perm[i]] = x
            acc[self.layout.pack(d)] = c
        return DualElement(self.spec, self.ring_tag, nv, self.degree, _canon(acc, self.ring), self.layout)

    def __str__(self) -> str:
        return format_dual(self)

    def __repr__(self) -> str:
        return f"DualElement[{self.ring_tag}, deg {self.degree}]({format_dual(self)})"


def _canon(acc: dict, ring) -> dict:
    is_zero = ring.is_zero
    return {k: acc[k] for k in sorted(acc) if not is_zero(acc[k])}


@functools.lru_cache(maxsize=256)
def _target_keys(num_vars: int, t: int, bits: int) -> tuple[int, ...]:
    from ._packing import get_layout
    layout = get_layout(num_vars, bits)
    return tuple(layout.pack([-x for x in e]) for e in dual_basis(num_vars, t))


def dual_act(f: HomogPoly, g: DualElement, strategy: str = "auto") -> DualElement:
    """f * g in S^v: multiply, then drop monomials with any exponent >= 0.

    ``strategy`` is "product" (sparse merge over all term pairs), "lookup"
    (for each target basis monomial, look up the matching terms of f), or
    "auto", which picks lookup when the target piece is much smaller than f.
    """
    if f.spec != g.spec:
        raise SpecMismatchError(f"field mismatch: {f.spec} vs {g.spec}")
    if f.ring_tag != g.ring_tag:
        raise ValueError(f"coefficient ring mismatch: {f.ring_tag} vs {g.ring_tag}")
    if f.num_vars != g.num_vars:
        raise ValueError(f"variable count mismatch: {f.num_vars} vs {g.num_vars}")
    nv = g.num_vars
    degree = g.degree + f.degree
    out_layout = _dual_layout(nv, degree)
    if not f.terms or not g.terms or degree > -nv:
        return DualElement(g.spec, g.ring_tag, nv, degree, {}, out_layout)
    if strategy == "auto":
        strategy = "lookup" if 4 * dual_basis_size(nv, degree) < len(f.terms) else "product"
    layout = layout_for(nv, max(f.degree, -g.degree))
    a = repack(f.terms, f.layout, layout)
    b = repack(g.terms, g.layout, layout)
    if strategy == "product":
        terms = _backend.dual_act(a, b, g.ring, layout)
    elif strategy == "lookup":
        terms = _lookup_act(a, b, g.ring, layout, _target_keys(nv, degree, layout.bits))
    else:
        raise ValueError(f"unknown strategy {strategy!r}")
    return DualElement(g.spec, g.ring_tag, nv, degree, repack(terms, layout, out_layout), out_layout)


def _lookup_act(f: dict, g: dict, ring, layout: Layout, targets: Sequence[int]) -> dict:
    # target t (negated exps) gets f[s - t] * g[s] over g-terms s with s >= t fieldwise
    H = layout.guard
    zero = ring.zero
    out = {}
    gi = list(g.items())
    for kt in targets:
        acc = zero
        for ks, c in gi:
            if (ks + H - kt) & H != H:
                continue
            fc = f.get(ks - kt)
            if fc is not None:
                acc = ring.add(acc, ring.mul(fc, c))
        if not ring.is_zero(acc):
            out[kt] = acc
    return dict(sorted(out.items()))


def dual_pairing(f: HomogPoly, g: DualElement) -> Union[FieldElement, Witt2]:
    """Coefficient of x0^-1 ... xN^-1 in f * g."""
    nv = f.num_vars
    if g.num_vars != nv:
        raise ValueError(f"variable count mismatch: {nv} vs {g.num_vars}")
    if g.terms and g.degree != -nv - f.degree:
        raise ValueError(f"degree mismatch: <S_{f.degree}, S^v_{g.degree}> needs S^v_{-nv - f.degree}")
    ring = g.ring
    if f.ring_tag != g.ring_tag:
        raise ValueError(f"coefficient ring mismatch: {f.ring_tag} vs {g.ring_tag}")
    acc = ring.zero
    for e, c in f.items():
        d = g.raw_coeff([-1 - x for x in e])
        if not ring.is_zero(d):
            acc = ring.add(acc, ring.mul(c, d))
    return from_ring(g.spec, g.ring_tag, acc)


def dual_partial(g: DualElement, i: int) -> DualElement:
    if not 0 <= i < g.num_vars:
        raise IndexError(f"variable index {i} out of range 0..{g.num_vars - 1}")
    ring = g.ring
    degree = g.degree - 1
    layout = _dual_layout(g.num_vars, degree)
    unit = g.layout.unit(i)
    acc = {}
    for k, c in g.terms.items():
        a = g.layout.field(k, i)  # exponent is -a
        acc[layout.pack(g.layout.unpack(k + unit))] = ring.smul(-a, c)
    return DualElement(g.spec, g.ring_tag, g.num_vars, degree, _canon(acc, ring), layout)


def dual_frobenius(g: DualElement) -> DualElement:
    """Exponents times p, coefficients through phi."""
    spec = g.spec
    p = spec.p
    degree = p * g.degree
    layout = _dual_layout(g.num_vars, degree)
    if g.ring_tag == "w2":
        phi = spec.ring_frobenius
    else:
        k = spec.k
        def phi(x):
            return k.pow(x, p)
    acc = {layout.pack([p * x for x in g.layout.unpack(key)]): phi(c) for key, c in g.terms.items()}
    return DualElement(spec, g.ring_tag, g.num_vars, degree, _canon(acc, g.ring), layout)


def parse_dual(text: str, spec: FieldSpec, ring_tag: str = "w2",
               num_vars: int | None = None) -> DualElement:
    """Parse e.g. ``x0^-2*x1^-2*x2^-2``; every variable must appear with a negative exponent."""
    raw = parse_terms(text, spec, ring_tag, allow_negative=True)
    top = max((max(e) for e, _ in raw if e), default=-1)
    if num_vars is None:
        num_vars = top + 1
    elif top >= num_vars:
        raise ParseError(f"variable x{top} out of range for {num_vars} variables", text, 0)
    terms = {}
    ring = ring_of(spec, ring_tag)
    for e, c in raw:
        vec = tuple(e.get(i, 0) for i in range(num_vars))
        if any(x >= 0 for x in vec):
            raise ParseError(f"dual monomial {vec} needs every exponent <= -1", text, 0)
        terms[vec] = ring.add(terms[vec], c) if vec in terms else c
    degs = {sum(v) for v in terms}
    if len(degs) > 1:
        raise InhomogeneousError(degs)
    degree = degs.pop()
    layout = _dual_layout(num_vars, degree)
    packed = {layout.pack([-x for x in v]): c for v, c in terms.items()}
    return DualElement(spec, ring_tag, num_vars, degree, _canon(packed, ring), layout)


def format_dual(g: DualElement) -> str:
    return format_terms(g.spec, g.ring_tag, g.items())


# ---------------------------------------------------------------------------
# linear algebra over W_2(k)


class Witt2Matrix:
    """Dense row-major matrix of Witt vectors."""

    __slots__ = ("spec", "rows", "cols", "entries")

    def __init__(self, spec: FieldSpec, rows: int, cols: int, entries: Sequence[Witt2]):
        if len(entries) != rows * cols:
            raise ValueError(f"{len(entries)} entries for a {rows}x{cols} matrix")
        self.spec = spec
        self.rows = rows
        self.cols = cols
        self.entries = tuple(entries)

    @classmethod
    def from_rows(cls, spec: FieldSpec, rows: Sequence[Sequence[Union[int, Witt2]]],
                  cols: int | None = None) -> "Witt2Matrix":
        if cols is None:
            cols = len(rows[0]) if rows else 0
        entries = []
        for r in rows:
            if len(r) != cols:
                raise ValueError("ragged matrix")
            for x in r:
                entries.append(x if isinstance(x, Witt2) else spec.ring_to_witt(spec.w2.from_int(x)))
        return cls(spec, len(rows), cols, entries)

    def __getitem__(self, ij: tuple[int, int]) -> Witt2:
        i, j = ij
        return self.entries[i * self.cols + j]

    def apply(self, v: Sequence[Witt2]) -> tuple[Witt2, ...]:
        spec = self.spec
        R = spec.w2
        vr = [spec.witt_to_ring(x) for x in v]
        out = []
        for i in range(self.rows):
            acc = R.zero
            for j in range(self.cols):
                acc = R.add(acc, R.mul(spec.witt_to_ring(self[i, j]), vr[j]))
            out.append(spec.ring_to_witt(acc))
        return tuple(out)

    def raw_rows(self) -> list[dict]:
        spec = self.spec
        R = spec.w2
        out = []
        for i in range(self.rows):
            row = {}
            for j in range(self.cols):
                x = spec.witt_to_ring(self[i, j])
                if not R.is_zero(x):
                    row[j] = x
            out.append(row)
        return out


def kernel_raw(ring, rows: Iterable[Mapping[int, object]], ncols: int) -> list[dict]:
    """Generators of {v : A v = 0} over a chain ring (Z/p^e)[y]/(M).

    Smith-style elimination A V = D with V invertible: pivots of minimal
    valuation, row operations below and beside the pivot, column operations
    (mirrored in V) to clear the pivot row.  A pivot of valuation v < e
    contributes the generator p^(e-v) V e_j; an untouched column contributes
    V e_j.  ``rows`` are sparse dicts column -> ring element; so are the
    returned vectors.
    """
    p, e = ring.p, ring.e
    A = [dict(r) for r in rows if r]
    A = [{c: x for c, x in r.items() if not ring.is_zero(x)} for r in A]
    V = {j: {j: ring.one} for j in range(ncols)}
    live_rows = [i for i, r in enumerate(A) if r]
    done_cols: dict[int, int] = {}
    valuation = ring.valuation

    while live_rows:
        best = None
        for i in live_rows:
            for j in sorted(A[i]):
                v = valuation(A[i][j])
                if best is None or v < best[0]:
                    best = (v, i, j)
                    if v == 0:
                        break
            if best is not None and best[0] == 0:
                break
        if best is None:
            break
        v, pi, pj = best
        prow = A[pi]
        unit = prow[pj]
        for _ in range(v):
            unit = ring.div_p(unit)
        uinv = ring.inv(unit)

        def factor(x):
            for _ in range(v):
                x = ring.div_p(x)
            return ring.mul(x, uinv)

        # clear column pj in the other live rows
        for i in live_rows:
            if i == pi or pj not in A[i]:
                continue
            fct = factor(A[i][pj])
            row = A[i]
            for c, x in prow.items():
                y = ring.sub(row.get(c, ring.zero), ring.mul(fct, x))
                if ring.is_zero(y):
                    row.pop(c, None)
                else:
                    row[c] = y
        # clear row pi beside the pivot; column pj is zero elsewhere now
        vj = V[pj]
        for c in [c for c in prow if c != pj]:
            fct = factor(prow[c])
            vc = V[c]
            for r, x in vj.items():
                y = ring.sub(vc.get(r, ring.zero), ring.mul(fct, x))
                if ring.is_zero(y):
                    vc.pop(r, None)
                else:
                    vc[r] = y
            del prow[c]
        done_cols[pj] = v
        live_rows = [i for i in live_rows if i != pi and A[i]]

    gens = []
    for j in range(ncols):
        v = done_cols.get(j)
        if v == 0:
            continue
        vec = V[j]
        if v is not None:
            s = p ** (e - v)
            vec = {r: ring.smul(s, x) for r, x in vec.items()}
            vec = {r: x for r, x in vec.items() if not ring.is_zero(x)}
        if vec:
            gens.append(dict(sorted(vec.items())))
    return gens


def howell_kernel(M: Witt2Matrix) -> list[tuple[Witt2, ...]]:
    """Generating set of the W_2(k)-module {v : M v = 0}."""
    spec = M.spec
    gens = kernel_raw(spec.w2, M.raw_rows(), M.cols)
    zero = spec.w2.zero
    return [tuple(spec.ring_to_witt(g.get(j, zero)) for j in range(M.cols)) for g in gens]
