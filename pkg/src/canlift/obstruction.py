"""Vanishing test for the obstruction to a lift being canonical.

For a lift f over W_2(k) of a degree-d hypersurface in P^N:

* the source is the submodule of S^v_{-2d} killed by f and by the conormal
  map g -> (f * dg/dx_i + 2 (df/dx_i) * g)_i;
* the composite sends g to h * F*(g) in S^v_{-d}, where
  h = -f^(2p-1) + 2 f^(p-1) F*(f) and F* is x_i -> x_i^p with phi on
  coefficients.

The lift is canonical iff the composite vanishes on the source.  Because the
composite is additive and phi-semilinear it is enough to test generators.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Optional

from .arith import FieldSpec
from .dualmod import (
    DualElement,
    dual_act,
    dual_basis,
    dual_frobenius,
    dual_pairing,
    dual_partial,
    kernel_raw,
)
from .poly import HomogPoly, poly_frobenius_pullback, poly_mul, poly_partial, poly_pow

__all__ = [
    "CrossCheckError",
    "HypersurfaceContext",
    "ObstructionReport",
    "conormal_map",
    "frobenius_composite",
    "fsquared_identity_check",
    "obstruction_kernel",
    "perp_matches_kernel",
    "euler_contraction",
    "in_p_image",
    "is_canonical",
    "obstruction_report",
]


class CrossCheckError(RuntimeError):
    """Two independent computations that must agree did not."""


class HypersurfaceContext:
    """A lift f over W_2(k) together with the powers the composite needs.

    Smoothness of f is the caller's responsibility.  The powers f^(p-1),
    f^(2p-1), F*(f) and the multiplier h are computed at construction.
    """

    def __init__(self, f: HomogPoly):
        if f.ring_tag != "w2":
            raise ValueError("the lift must have coefficients in W_2(k)")
        if f.is_zero():
            raise ValueError("the zero polynomial defines no hypersurface")
        ring = f.ring
        if not any(ring.is_unit(c) for c in f.terms.values()):
            raise ValueError("f is not primitive: every coefficient is divisible by p")
        self.spec: FieldSpec = f.spec
        self.f = f
        self.f0 = f.reduce()
        self.N = f.num_vars - 1
        self.d = f.degree
        p = self.spec.p
        t0 = time.perf_counter()
        self.partials = tuple(poly_partial(f, i) for i in range(f.num_vars))
        self.f_pm1 = poly_pow(f, p - 1)
        self.f_2pm1 = poly_mul(poly_mul(self.f_pm1, self.f_pm1), f)
        self.frob_f = poly_frobenius_pullback(f)
        self.h = -self.f_2pm1 + poly_mul(self.f_pm1, self.frob_f).scale(2)
        self.setup_ms = (time.perf_counter() - t0) * 1e3

    @property
    def num_vars(self) -> int:
        return self.N + 1

    @property
    def n(self) -> int:
        """Dimension of the hypersurface."""
        return self.N - 1

    def __repr__(self) -> str:
        return f"HypersurfaceContext(p={self.spec.p}, n_ext={self.spec.n}, N={self.N}, d={self.d})"


def _check_source(ctx: HypersurfaceContext, g: DualElement) -> None:
    if g.num_vars != ctx.num_vars:
        raise ValueError(f"variable count mismatch: {g.num_vars} vs {ctx.num_vars}")
    if g.terms and g.degree != -2 * ctx.d:
        raise ValueError(f"expected an element of S^v_{-2 * ctx.d}, got degree {g.degree}")


def conormal_map(ctx: HypersurfaceContext, g: DualElement) -> list[DualElement]:
    """Component i is f * dg/dx_i + 2 (df/dx_i) * g, in S^v_{-d-1}."""
    _check_source(ctx, g)
    out = []
    for i in range(ctx.num_vars):
        a = dual_act(ctx.f, dual_partial(g, i))
        b = dual_act(ctx.partials[i], g)
        out.append(a + b.scale(2))
    return out


def euler_contraction(components: list[DualElement]) -> DualElement:
    """sum_i x_i * c_i; zero exactly on the Euler kernel."""
    spec = components[0].spec
    nv = components[0].num_vars
    total = None
    for i, c in enumerate(components):
        xi = HomogPoly.variable(spec, c.ring_tag, nv, i)
        term = dual_act(xi, c)
        total = term if total is None else total + term
    return total


def frobenius_composite(ctx: HypersurfaceContext, g: DualElement,
                        strategy: str = "auto") -> DualElement:
    """h * F*(g) with h = -f^(2p-1) + 2 f^(p-1) F*(f); lands in S^v_{-d}."""
    _check_source(ctx, g)
    if g.ring_tag != "w2":
        raise ValueError("the composite is defined over W_2(k)")
    return dual_act(ctx.h, dual_frobenius(g), strategy=strategy)


def fsquared_identity_check(ctx: HypersurfaceContext) -> bool:
    """F*(f^2) == f * h exactly."""
    f = ctx.f
    lhs = poly_frobenius_pullback(poly_mul(f, f))
    rhs = poly_mul(f, ctx.h)
    return lhs == rhs


def in_p_image(g: DualElement) -> bool:
    """Every coefficient lies in p W_2(k), i.e. in the image of times_p."""
    ring = g.ring
    return all(ring.valuation(c) >= 1 for c in g.terms.values())


# ---------------------------------------------------------------------------
# the source module


def _columns(ctx: HypersurfaceContext, basis, with_conormal: bool, use_pairing: bool):
    spec = ctx.spec
    rows: dict = {}
    for j, b in enumerate(basis):
        g = DualElement.monomial(spec, "w2", b)
        if use_pairing:
            x = spec.witt_to_ring(dual_pairing(ctx.f, g))
            if not spec.w2.is_zero(x):
                rows.setdefault(("pair",), {})[j] = x
        else:
            for key, x in dual_act(ctx.f, g).terms.items():
                rows.setdefault(("f", key), {})[j] = x
        if with_conormal:
            for i, comp in enumerate(conormal_map(ctx, g)):
                for key, x in comp.terms.items():
                    rows.setdefault((i, key), {})[j] = x
    return [rows[k] for k in sorted(rows, key=repr)]


def _to_dual(ctx: HypersurfaceContext, basis, vec: dict) -> DualElement:
    return DualElement.from_terms(ctx.spec, "w2", {basis[j]: ctx.spec.ring_to_witt(x)
                                                   for j, x in vec.items()},
                                  ctx.num_vars, -2 * ctx.d)


def _kernel_of(ctx: HypersurfaceContext, basis, rows) -> list[DualElement]:
    gens = kernel_raw(ctx.spec.w2, rows, len(basis))
    return [_to_dual(ctx, basis, v) for v in gens]


def _satisfies(rows, vec: dict, ring) -> bool:
    for r in rows:
        acc = ring.zero
        for j, x in r.items():
            y = vec.get(j)
            if y is not None:
                acc = ring.add(acc, ring.mul(x, y))
        if not ring.is_zero(acc):
            return False
    return True


def perp_matches_kernel(ctx: HypersurfaceContext) -> bool:
    """(W_2 f)^perp == ker(f * -) on S^v_{-2d}, by mutual membership of generators.

    The pairing S_d x S^v_{-N-1-d} only reaches S^v_{-2d} when d = N + 1;
    for other degrees there is nothing to compare and this returns True.
    """
    if ctx.d != ctx.N + 1:
        return True
    basis = dual_basis(ctx.num_vars, -2 * ctx.d)
    ring = ctx.spec.w2
    rows_perp = _columns(ctx, basis, False, True)
    rows_ker = _columns(ctx, basis, False, False)
    gens_perp = kernel_raw(ring, rows_perp, len(basis))
    gens_ker = kernel_raw(ring, rows_ker, len(basis))
    return (all(_satisfies(rows_ker, v, ring) for v in gens_perp)
            and all(_satisfies(rows_perp, v, ring) for v in gens_ker))


def obstruction_kernel(ctx: HypersurfaceContext, verify: bool = True) -> list[DualElement]:
    """Generators of {g in S^v_{-2d} : f * g = 0 and conormal_map(g) = 0}.

    With ``verify`` the two descriptions of the annihilator of f are compared
    first (only meaningful for d = N + 1) and a mismatch raises.
    """
    if verify and not perp_matches_kernel(ctx):
        raise CrossCheckError("(W_2 f)^perp and ker(f *) disagree")
    basis = dual_basis(ctx.num_vars, -2 * ctx.d)
    rows = _columns(ctx, basis, True, False)
    return _kernel_of(ctx, basis, rows)


@dataclass
class Verdict:
    canonical: bool
    witness: Optional[DualElement]
    witness_image: Optional[DualElement]
    generators: list = field(default_factory=list)
    images: list = field(default_factory=list)
    timings_ms: dict = field(default_factory=dict)


def is_canonical(ctx: HypersurfaceContext, verify: bool = True) -> Verdict:
    """Does the composite vanish on every generator of the source module?"""
    t0 = time.perf_counter()
    gens = obstruction_kernel(ctx, verify=verify)
    t1 = time.perf_counter()
    images = [frobenius_composite(ctx, g) for g in gens]
    t2 = time.perf_counter()
    witness = image = None
    for g, im in zip(gens, images):
        if not im.is_zero():
            witness, image = g, im
            break
    timings = {
        "setup": round(ctx.setup_ms, 3),
        "kernel": round((t1 - t0) * 1e3, 3),
        "composite": round((t2 - t1) * 1e3, 3),
    }
    return Verdict(witness is None, witness, image, gens, images, timings)


@dataclass
class ObstructionReport:
    p: int
    n_ext: int
    N: int
    d: int
    canonical: bool
    inconclusive_n2: bool
    witness: Optional[str]
    kernel_rank: int
    timings_ms: dict

    def to_json(self) -> dict:
        return {
            "p": self.p,
            "n_ext": self.n_ext,
            "N": self.N,
            "d": self.d,
            "canonical": self.canonical,
            "inconclusive_n2": self.inconclusive_n2,
            "witness": self.witness,
            "kernel_rank": self.kernel_rank,
            "timings_ms": self.timings_ms,
        }


def flag_inconclusive(ctx: HypersurfaceContext, canonical: bool) -> bool:
    # the per-coordinate conormal formula can have a larger kernel than the
    # true differential only for curves; a negative verdict there is flagged
    return (not canonical) and ctx.n == 1


def obstruction_report(ctx: HypersurfaceContext, verify: bool = True) -> ObstructionReport:
    v = is_canonical(ctx, verify=verify)
    return ObstructionReport(
        p=ctx.spec.p,
        n_ext=ctx.spec.n,
        N=ctx.N,
        d=ctx.d,
        canonical=v.canonical,
        inconclusive_n2=flag_inconclusive(ctx, v.canonical),
        witness=str(v.witness) if v.witness is not None else None,
        kernel_rank=len(v.generators),
        timings_ms=v.timings_ms,
    )
