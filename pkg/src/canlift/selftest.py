"""Small invariant suite behind ``canlift selftest``."""

from __future__ import annotations

import itertools
import math
import random
import time
from typing import Callable

from . import _backend
from ._packing import layout_for
from .arith import FieldSpec, witt_from_residue, witt_prime_iso
from .dwork import (
    DworkParams,
    closed_form_obstruction,
    dwork_context,
    dwork_ordinary,
    dwork_smooth,
    harmonic_ph,
    hd_coeff_oracle,
    hd_def,
    hd_eval,
    hd_mod,
    lifts,
    pipeline_obstruction,
    ratio_invariant,
)
from .obstruction import HypersurfaceContext, fsquared_identity_check, is_canonical
from .poly import parse_poly


def _witt_iso() -> bool:
    for p in (3, 5):
        spec = FieldSpec(p)
        ws = [witt_from_residue(spec, r) for r in range(p * p)]
        for a, b in itertools.product(range(p * p), repeat=2):
            x, y = ws[a], ws[b]
            if witt_prime_iso(x + y) != (a + b) % (p * p):
                return False
            if witt_prime_iso(x * y) != a * b % (p * p):
                return False
    return True


def _ring_axioms() -> bool:
    spec = FieldSpec(3, 2)
    rng = random.Random(7)
    els = list(spec.elements())
    for _ in range(200):
        x, y, z = (spec.witt(rng.choice(els), rng.choice(els)) for _ in range(3))
        if (x + y) + z != x + (y + z) or (x * y) * z != x * (y * z):
            return False
        if x * (y + z) != x * y + x * z or x + y != y + x or x * y != y * x:
            return False
    return True


def _three_way() -> bool:
    for p, N, m in itertools.product((5, 7), (2, 3, 4), (1, 2)):
        if (N + 1) % p == 0:
            continue
        spec = FieldSpec(p)
        P = m * p - 1
        for lam in range(p):
            params = DworkParams.of(spec, N, lam, eta=lam)
            a = hd_eval(hd_def(N + 1, P), params.eta)
            if a != hd_mod(N, p, m, params.eta) or a != hd_coeff_oracle(params, P):
                return False
    return True


def binomial_congruence_holds(p: int, m: int, j: int) -> bool:
    """binom(mp-1, j) against (-1)^j (1 - m pH_j), in the form that is true.

    Mod p^2 for j <= p.  Past p (m = 2) the j = p factor of the product is
    exactly 1 and not -(1 - 2), so the sign of the correction flips; there
    the literal form only holds mod p, which is all the Hasse-Dwork
    coefficient needs since its Pochhammer factor is then divisible by p.
    """
    q = p * p
    lhs = math.comb(m * p - 1, j) % q
    if j <= p:
        return lhs == (-1) ** j * (1 - m * harmonic_ph(j, p)) % q
    return lhs == (-1) ** (j - 1) * (1 - m * (harmonic_ph(j, p) - 1)) % q


def _binomial() -> bool:
    return all(binomial_congruence_holds(p, m, j)
               for p in (3, 5, 7, 11, 13) for m in (1, 2) for j in range(m * p))


def _closed_form() -> bool:
    for p, N in ((5, 2), (7, 3)):
        spec = FieldSpec(p)
        for lam in range(1, p):
            for eta in lifts(spec, spec.elem(lam)):
                params = DworkParams(spec, N, eta.a0, eta)
                if closed_form_obstruction(params) != pipeline_obstruction(params):
                    return False
    return True


def _uniqueness() -> bool:
    spec = FieldSpec(5)
    for lam in range(5):
        params = DworkParams.of(spec, 2, lam)
        if not dwork_smooth(params) or not dwork_ordinary(params):
            continue
        hits = [e for e in lifts(spec, params.lam)
                if is_canonical(dwork_context(params.with_eta(e))).canonical]
        if len(hits) != 1:
            return False
    return True


def _fermat() -> bool:
    spec = FieldSpec(5)
    f = parse_poly("x0^4 + x1^4 + x2^4 + x3^4", spec)
    return is_canonical(HypersurfaceContext(f)).canonical


def _ratio() -> bool:
    spec = FieldSpec(5)
    for lam in (3, 4):
        vals = {ratio_invariant(spec, 2, lam, e) for e in lifts(spec, spec.elem(lam))}
        if len(vals) != 1:
            return False
    return True


def _fsquared() -> bool:
    spec = FieldSpec(5)
    f = parse_poly("8*x0^3 + 8*x1^3 + 8*x2^3 - 3*x0*x1*x2", spec)
    return fsquared_identity_check(HypersurfaceContext(f))


def _backends() -> bool:
    names = _backend.available()
    if len(names) < 2:
        return True
    spec = FieldSpec(7, 2)
    rng = random.Random(3)
    layout = layout_for(3, 40)
    R = spec.w2
    def rand_poly(deg):
        out = {}
        for _ in range(25):
            a = rng.randint(0, deg)
            b = rng.randint(0, deg - a)
            out[layout.pack((a, b, deg - a - b))] = tuple(rng.randrange(R.q) for _ in range(2))
        return out
    a, b = rand_poly(9), rand_poly(7)
    from . import _kernels, _kernels_py  # type: ignore[attr-defined]
    return _kernels.mul(a, b, R, layout) == _kernels_py.mul(a, b, R, layout)


CHECKS: list[tuple[str, Callable[[], bool]]] = [
    ("witt_prime_iso is a ring isomorphism (p=3,5)", _witt_iso),
    ("W2(F9) ring axioms (200 random triples)", _ring_axioms),
    ("HD three-way equality (p=5,7; N=2..4)", _three_way),
    ("binomial congruence (p<=13)", _binomial),
    ("closed form = pipeline (p,N)=(5,2),(7,3)", _closed_form),
    ("unique canonical lift (p=5, N=2)", _uniqueness),
    ("Fermat quartic surface canonical (p=5)", _fermat),
    ("ratio invariance (p=5, N=2)", _ratio),
    ("F*(f^2) = f h", _fsquared),
    ("compiled and Python kernels agree", _backends),
]


def run_selftest() -> list[tuple[str, bool, float]]:
    out = []
    for name, fn in CHECKS:
        t0 = time.perf_counter()
        try:
            ok = bool(fn())
        except Exception:  # a crash is a failure of the check
            ok = False
        out.append((name, ok, (time.perf_counter() - t0) * 1e3))
    return out
