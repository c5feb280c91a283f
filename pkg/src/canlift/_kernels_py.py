"""Pure-Python sparse kernels; the reference the compiled module is tested against.

Polynomials are dicts from packed exponent keys to residue-ring elements.
Dual elements use the same packing on the negated (positive) exponents.
"""

from __future__ import annotations

from ._packing import Layout
from .arith import ResidueRing

NAME = "python"


def mul(a: dict, b: dict, ring: ResidueRing, layout: Layout, cap: int | None = None) -> dict:
    """Product of two sparse polynomials; with ``cap`` drop monomials having an exponent > cap."""
    if len(a) < len(b):
        a, b = b, a
    if not a or not b:
        return {}
    if cap is not None:
        off, guard = layout.cap_offset(cap), layout.guard
    else:
        off = guard = 0
    acc: dict = {}
    get = acc.get
    if ring.n == 1:
        bi = list(b.items())
        for ka, ca in a.items():
            for kb, cb in bi:
                k = ka + kb
                if (k + off) & guard:
                    continue
                acc[k] = get(k, 0) + ca * cb
        q = ring.q
        out = {}
        for k in sorted(acc):
            c = acc[k] % q
            if c:
                out[k] = c
        return out
    w = 2 * ring.n - 1
    bi = [(kb, [(j, y) for j, y in enumerate(cb) if y]) for kb, cb in b.items()]
    for ka, ca in a.items():
        xa = [(i, x) for i, x in enumerate(ca) if x]
        for kb, yb in bi:
            k = ka + kb
            if (k + off) & guard:
                continue
            slot = get(k)
            if slot is None:
                slot = acc[k] = [0] * w
            for i, x in xa:
                for j, y in yb:
                    slot[i + j] += x * y
    return _finish_wide(acc, ring)


def dual_act(f: dict, g: dict, ring: ResidueRing, layout: Layout) -> dict:
    """Multiply f (nonnegative exponents) into g (stored negated), truncating nonnegative results.

    A result field is kept iff g_i - f_i >= 1.  ``g + H - f - 1`` keeps every
    guard bit set exactly when no field borrows, and then the key is ``g - f``.
    """
    if not f or not g:
        return {}
    H, ones = layout.guard, layout.ones
    acc: dict = {}
    get = acc.get
    if ring.n == 1:
        fi = list(f.items())
        for kg, cg in g.items():
            base = kg + H - ones
            for kf, cf in fi:
                if (base - kf) & H != H:
                    continue
                k = kg - kf
                acc[k] = get(k, 0) + cf * cg
        q = ring.q
        out = {}
        for k in sorted(acc):
            c = acc[k] % q
            if c:
                out[k] = c
        return out
    w = 2 * ring.n - 1
    fi = [(kf, [(i, x) for i, x in enumerate(cf) if x]) for kf, cf in f.items()]
    for kg, cg in g.items():
        base = kg + H - ones
        yg = [(j, y) for j, y in enumerate(cg) if y]
        for kf, xf in fi:
            if (base - kf) & H != H:
                continue
            k = kg - kf
            slot = get(k)
            if slot is None:
                slot = acc[k] = [0] * w
            for i, x in xf:
                for j, y in yg:
                    slot[i + j] += x * y
    return _finish_wide(acc, ring)


def _finish_wide(acc: dict, ring) -> dict:
    out = {}
    for k in sorted(acc):
        c = ring.reduce_wide(acc[k])
        if any(c):
            out[k] = c
    return out
