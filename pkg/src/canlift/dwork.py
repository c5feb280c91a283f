"""The Dwork family  eta * sum x_i^(N+1) - (N+1) * prod x_i  and its canonical lift.

Hasse-Dwork polynomials HD^P_M are computed three ways: exact integers
(``hd_def``), the harmonic-number congruence mod p^2 (``hd_mod``) and brute
force coefficient extraction from f^P (``hd_coeff_oracle``).

The obstruction on the invariant generator g_vee has the closed form

    -(N+1) eta^p E(eta) - phi(eta) HD^(2p-1)_(N+1)(eta)

where E is the "shifted" polynomial of ``hd_shifted_def``.  Modulo p,
E == binom(2p-1, p) HD^(p-1) == HD^(p-1), but modulo p^2 the k-th coefficient
of E carries an extra factor 1 - p H_k; ``naive_closed_form`` keeps the
version without it.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Optional, Sequence

from .arith import FieldElement, FieldSpec, Witt2, teichmuller
from .dualmod import DualElement
from .obstruction import CrossCheckError, HypersurfaceContext, frobenius_composite, is_canonical
from .poly import HomogPoly, poly_permute, poly_pow_capped, poly_scale_vars

__all__ = [
    "PreconditionError",
    "UniquenessFailure",
    "DworkParams",
    "HDPoly",
    "dwork_poly",
    "hd_def",
    "hd_eval",
    "hd_coeff_oracle",
    "harmonic_ph",
    "hd_mod_coeffs",
    "hd_mod",
    "katz_coeffs",
    "hd_shifted_def",
    "hd_shifted_mod_coeffs",
    "dwork_smooth",
    "dwork_ordinary",
    "g_vee",
    "dwork_context",
    "pipeline_obstruction",
    "closed_form_obstruction",
    "naive_closed_form",
    "canonical_eta",
    "ratio_invariant",
    "symmetry_check",
    "lifts",
]


class PreconditionError(ValueError):
    """Input outside the hypotheses (singular, non-ordinary, p | N+1, ...)."""


class UniquenessFailure(ArithmeticError):
    """The linear system for the lift parameter is singular."""


@dataclass(frozen=True)
class DworkParams:
    spec: FieldSpec
    N: int
    lam: Optional[FieldElement] = None
    eta: Optional[Witt2] = None

    def __post_init__(self):
        if self.N < 2:
            raise ValueError(f"N must be >= 2, got {self.N}")
        if self.eta is not None:
            if self.eta.spec != self.spec:
                raise ValueError("eta lives over a different field")
            if self.lam is None:
                object.__setattr__(self, "lam", self.eta.a0)
            elif self.eta.a0 != self.lam:
                raise ValueError(f"eta={self.eta} does not reduce to lambda={self.lam}")
        if self.lam is None:
            raise ValueError("lambda or eta is required")
        if self.lam.spec != self.spec:
            raise ValueError("lambda lives over a different field")

    @classmethod
    def of(cls, spec: FieldSpec, N: int, lam=None, eta=None) -> "DworkParams":
        """Convenience constructor accepting ints; an int eta is read in Z/p^2 (n = 1)."""
        if isinstance(lam, (int, tuple, list)):
            lam = spec.elem(lam)
        if isinstance(eta, int):
            eta = spec.ring_to_witt(spec.w2.from_int(eta))
        return cls(spec, N, lam, eta)

    @property
    def M(self) -> int:
        return self.N + 1

    def with_eta(self, eta: Witt2) -> "DworkParams":
        return DworkParams(self.spec, self.N, eta.a0, eta)

    def base_lift(self) -> Witt2:
        """eta if present, else the coefficient-wise minimal lift of lambda."""
        if self.eta is not None:
            return self.eta
        return self.spec.ring_to_witt(self.spec.ring_lift(self.lam))


def lifts(spec: FieldSpec, lam: FieldElement) -> list[Witt2]:
    """All q lifts of lam to W_2(k): minimal lift + p * t, t in k in code order."""
    base = spec.ring_lift(lam)
    R = spec.w2
    return [spec.ring_to_witt(R.add(base, spec.ring_times_p(t))) for t in spec.elements()]


# ---------------------------------------------------------------------------
# the polynomial


def dwork_poly(params: DworkParams, ring_tag: str = "w2") -> HomogPoly:
    """eta * sum x_i^(N+1) - (N+1) prod x_i (lambda over k)."""
    spec, M = params.spec, params.M
    if ring_tag == "w2":
        c = params.base_lift()
    else:
        c = params.lam
    terms = {}
    for i in range(M):
        e = [0] * M
        e[i] = M
        terms[tuple(e)] = c
    terms[(1,) * M] = -M
    return HomogPoly.from_terms(spec, ring_tag, terms, M, M)


# ---------------------------------------------------------------------------
# Hasse-Dwork polynomials


@dataclass(frozen=True)
class HDPoly:
    """HD^P_M as exact integers; ``coeffs[i]`` multiplies X^(i M)."""

    M: int
    P: int
    coeffs: tuple[int, ...]

    def items(self):
        for i, c in enumerate(self.coeffs):
            yield i * self.M, c

    def coefficient(self, e: int) -> int:
        if e % self.M or not 0 <= e // self.M < len(self.coeffs):
            return 0
        return self.coeffs[e // self.M]

    def as_dict(self) -> dict[int, int]:
        return {e: c for e, c in self.items() if c}

    def reduce(self, q: int) -> dict[int, int]:
        return {e: c % q for e, c in self.items() if c % q}

    def to_text(self) -> str:
        return _format_univariate(dict(self.items()))

    def to_text_mod(self, q: int) -> str:
        return f"{_format_univariate(self.reduce(q))} (mod {q})"

    def __str__(self) -> str:
        return self.to_text()


def _format_univariate(coeffs: dict[int, int]) -> str:
    out = []
    for e in sorted(coeffs):
        c = coeffs[e]
        if c == 0:
            continue
        mono = "" if e == 0 else ("X" if e == 1 else f"X^{e}")
        mag = abs(c)
        body = str(mag) if not mono else (mono if mag == 1 else f"{mag}*{mono}")
        if not out:
            out.append(f"-{body}" if c < 0 else body)
        else:
            out.append(f" - {body}" if c < 0 else f" + {body}")
    return "".join(out) if out else "0"


@lru_cache(maxsize=None)
def hd_def(M: int, P: int) -> HDPoly:
    """Exact HD^P_M: coefficient of X^(iM) is prod_k binom(P - k i, i) * (-M)^(P - i M)."""
    if M < 2 or P < 0:
        raise ValueError(f"need M >= 2 and P >= 0, got M={M}, P={P}")
    coeffs = []
    for i in range(P // M + 1):
        count = 1
        for k in range(M):
            count *= math.comb(P - k * i, i)
        coeffs.append(count * (-M) ** (P - i * M))
    return HDPoly(M, P, tuple(coeffs))


def _eval(spec: FieldSpec, coeffs: dict[int, int], x) -> object:
    R = spec.w2
    acc = R.zero
    for e, c in coeffs.items():
        c %= R.q
        if c:
            acc = R.add(acc, R.smul(c, R.pow(x, e)))
    return acc


def hd_eval(hd: HDPoly, eta: Witt2) -> Witt2:
    """Evaluate the exact polynomial at eta in W_2(k)."""
    spec = eta.spec
    return spec.ring_to_witt(_eval(spec, dict(hd.items()), spec.witt_to_ring(eta)))


def hd_coeff_oracle(params: DworkParams, P: int) -> Witt2:
    """Coefficient of prod x_i^P in dwork_poly^P, by brute-force powering.

    The power is truncated to exponents <= P in every variable, which never
    changes that coefficient since exponents only grow.
    """
    f = dwork_poly(params, "w2")
    fp = poly_pow_capped(f, P, P)
    return fp.coeff((P,) * params.M)


def harmonic_ph(k_idx: int, p: int) -> int:
    """p * H_k mod p^2 for 0 <= k <= 2p-1 (the j = p term contributes exactly 1)."""
    if not 0 <= k_idx <= 2 * p - 1:
        raise ValueError(f"harmonic_ph needs 0 <= k <= 2p-1, got k={k_idx}, p={p}")
    q = p * p
    total = 0
    for j in range(1, k_idx + 1):
        total += 1 if j == p else p * pow(j, -1, p)
    return total % q


def _pochhammer_prod(N: int, i: int, q: int) -> int:
    """prod_{j=1..N} {j/(N+1)}_i mod q."""
    inv = pow(N + 1, -1, q)
    out = 1
    for j in range(1, N + 1):
        a = j * inv % q
        for s in range(i):
            out = out * (a + s) % q
    return out


def _check_p_n(N: int, p: int) -> None:
    if (N + 1) % p == 0:
        raise PreconditionError(f"p={p} divides N+1={N + 1}")


@lru_cache(maxsize=None)
def hd_mod_coeffs(N: int, p: int, m: int) -> dict[int, int]:
    """HD^(mp-1)_(N+1) mod p^2 via the harmonic congruence; exponent -> residue."""
    if m not in (1, 2):
        raise ValueError(f"m must be 1 or 2, got {m}")
    _check_p_n(N, p)
    q = p * p
    M = N + 1
    P = m * p - 1
    lead = pow(-M, P, q)
    out = {}
    for i in range(P // M + 1):
        fact = math.factorial(i)
        if fact % p == 0:
            raise ArithmeticError(f"division by non-unit {fact}! in term i={i}")
        c = (1 - m * harmonic_ph(i * M, p)) * _pochhammer_prod(N, i, q) % q
        c = c * pow(pow(fact, N, q), -1, q) % q
        c = c * lead % q
        if c:
            out[i * M] = c
    return out


def hd_mod(N: int, p: int, m: int, lam_tilde: Witt2) -> Witt2:
    """HD^(mp-1)_(N+1)(lam_tilde) in W_2(k) via the harmonic congruence."""
    spec = lam_tilde.spec
    if spec.p != p:
        raise ValueError(f"lam_tilde lives over characteristic {spec.p}, not {p}")
    coeffs = hd_mod_coeffs(N, p, m)
    return spec.ring_to_witt(_eval(spec, coeffs, spec.witt_to_ring(lam_tilde)))


def katz_coeffs(N: int, p: int) -> dict[int, int]:
    """prod_j {j/(N+1)}_i / (i!)^N mod p, the mod-p shape of HD^(p-1) up to (-(N+1))^(p-1)."""
    _check_p_n(N, p)
    out = {}
    M = N + 1
    for i in range((p - 1) // M + 1):
        c = _pochhammer_prod(N, i, p) * pow(pow(math.factorial(i), N, p), -1, p) % p
        if c:
            out[i * M] = c
    return out


@lru_cache(maxsize=None)
def hd_shifted_def(N: int, p: int) -> dict[int, int]:
    """Exact E(X) = sum_k (2p-1)! / ((k+p)! k!^N c!) (-(N+1))^c X^((N+1)k), c = p-1-(N+1)k.

    eta^p E(eta) is the coefficient of x_j^(p(N+2)-1) prod_(i != j) x_i^(p-1)
    in f^(2p-1): take x_j^(N+1) p+k times, every other x_i^(N+1) k times and
    the product term c times.
    """
    M = N + 1
    out = {}
    top = math.factorial(2 * p - 1)
    for k in range((p - 1) // M + 1):
        c = p - 1 - M * k
        den = math.factorial(k + p) * math.factorial(k) ** N * math.factorial(c)
        out[M * k] = top // den * (-M) ** c
    return out


@lru_cache(maxsize=None)
def hd_shifted_mod_coeffs(N: int, p: int) -> dict[int, int]:
    """E mod p^2 via (-(N+1))^(p-1) sum_i (1 - pH_i)(1 - pH_(i(N+1))) prod_j {j/(N+1)}_i / (i!)^N."""
    _check_p_n(N, p)
    q = p * p
    M = N + 1
    lead = pow(-M, p - 1, q)
    out = {}
    for i in range((p - 1) // M + 1):
        c = (1 - harmonic_ph(i, p)) * (1 - harmonic_ph(i * M, p)) % q
        c = c * _pochhammer_prod(N, i, q) % q
        c = c * pow(pow(math.factorial(i), N, q), -1, q) % q
        c = c * lead % q
        if c:
            out[i * M] = c
    return out


# ---------------------------------------------------------------------------
# criteria


def dwork_smooth(params: DworkParams) -> bool:
    lam = params.lam
    if params.M % params.spec.p == 0:
        return False
    return bool(lam) and lam ** params.M != params.spec.elem(1)


def _hd_over_k(params: DworkParams, P: int) -> FieldElement:
    spec = params.spec
    k = spec.k
    acc = k.zero
    for e, c in hd_def(params.M, P).items():
        c %= spec.p
        if c:
            acc = k.add(acc, k.smul(c, k.pow(params.lam.value, e)))
    return FieldElement(spec, acc)


def dwork_ordinary(params: DworkParams) -> bool:
    """HD^(p-1)_(N+1)(lambda) != 0 in k; requires a smooth member."""
    if not dwork_smooth(params):
        raise PreconditionError(f"X({params.lam}) is not smooth for p={params.spec.p}, N={params.N}")
    return bool(_hd_over_k(params, params.spec.p - 1))


def g_vee(params: DworkParams) -> DualElement:
    """(sum x_i^-(N+1) + eta prod x_i^-1) prod x_i^-1, in S^v_{-2(N+1)}."""
    if params.eta is None:
        raise ValueError("g_vee needs eta")
    M = params.M
    terms: dict = {}
    for i in range(M):
        e = [-1] * M
        e[i] = -(M + 1)
        terms[tuple(e)] = 1
    terms[(-2,) * M] = params.eta
    return DualElement.from_terms(params.spec, "w2", terms, M, -2 * M)


def dwork_context(params: DworkParams) -> HypersurfaceContext:
    return HypersurfaceContext(dwork_poly(params, "w2"))


def pipeline_obstruction(params: DworkParams, ctx: HypersurfaceContext | None = None) -> Witt2:
    """Coefficient of prod x_i^-1 in the composite applied to g_vee."""
    if ctx is None:
        ctx = dwork_context(params)
    img = frobenius_composite(ctx, g_vee(params))
    return img.coeff((-1,) * params.M)


def _closed_form(params: DworkParams, first: dict[int, int]) -> Witt2:
    spec = params.spec
    if params.eta is None:
        raise ValueError("the closed form needs eta")
    _check_p_n(params.N, spec.p)
    R = spec.w2
    x = spec.witt_to_ring(params.eta)
    p = spec.p
    a = R.mul(R.pow(x, p), _eval(spec, first, x))
    b = R.mul(spec.ring_frobenius(x), _eval(spec, hd_mod_coeffs(params.N, p, 2), x))
    val = R.neg(R.add(R.smul(params.M, a), b))
    return spec.ring_to_witt(val)


def closed_form_obstruction(params: DworkParams) -> Witt2:
    """-(N+1) eta^p E(eta) - phi(eta) HD^(2p-1)(eta); equals ``pipeline_obstruction``."""
    return _closed_form(params, hd_shifted_mod_coeffs(params.N, params.spec.p))


def naive_closed_form(params: DworkParams) -> Witt2:
    """-(N+1) eta^p HD^(p-1)(eta) - phi(eta) HD^(2p-1)(eta).

    Agrees with ``closed_form_obstruction`` modulo p only; kept for comparison.
    """
    return _closed_form(params, hd_mod_coeffs(params.N, params.spec.p, 1))


def _solve_mod_p(A: list[list[int]], b: list[int], p: int) -> list[int]:
    n = len(A)
    M = [row[:] + [rhs] for row, rhs in zip(A, b)]
    for col in range(n):
        piv = next((r for r in range(col, n) if M[r][col] % p), None)
        if piv is None:
            raise UniquenessFailure("the linear system for the lift parameter is singular")
        M[col], M[piv] = M[piv], M[col]
        inv = pow(M[col][col], -1, p)
        M[col] = [x * inv % p for x in M[col]]
        for r in range(n):
            if r != col and M[r][col] % p:
                fct = M[r][col]
                M[r] = [(x - fct * y) % p for x, y in zip(M[r], M[col])]
    return [M[r][n] for r in range(n)]


def canonical_eta(spec: FieldSpec, N: int, lam, verify: bool = True) -> Witt2:
    """The unique lift eta of lambda killing the obstruction.

    Write eta = lam~ + p t with lam~ the minimal lift.  V(eta) is always in
    p W_2 and V(lam~ + p t) - V(lam~) = p * L(t) with L additive and
    F_p-linear, so t solves an n x n system over F_p built on the basis
    1, y, ..., y^(n-1).  With ``verify`` the answer is re-checked through
    the general obstruction pipeline.
    """
    params = DworkParams.of(spec, N, lam)
    if params.M % spec.p == 0:
        raise PreconditionError(f"p={spec.p} divides N+1={params.M}")
    if not dwork_smooth(params):
        raise PreconditionError(f"X({params.lam}) is singular")
    if not dwork_ordinary(params):
        raise PreconditionError(f"X({params.lam}) is not ordinary")
    R = spec.w2
    p, n = spec.p, spec.n
    base = spec.ring_lift(params.lam)

    def V(t_ring):
        eta = spec.ring_to_witt(R.add(base, t_ring))
        return spec.witt_to_ring(closed_form_obstruction(params.with_eta(eta)))

    v0 = V(R.zero)
    if R.valuation(v0) < 1:
        raise CrossCheckError("obstruction of the base lift is not divisible by p")
    rhs = [(-c) % p for c in R.mod_p(R.div_p(v0))]
    cols = []
    for b in spec.basis():
        diff = R.sub(V(spec.ring_times_p(b)), v0)
        cols.append(list(R.mod_p(R.div_p(diff))))
    A = [[cols[j][i] for j in range(n)] for i in range(n)]
    t = _solve_mod_p(A, rhs, p)
    eta = spec.ring_to_witt(R.add(base, spec.ring_times_p(spec.elem(t))))
    sol = params.with_eta(eta)
    if closed_form_obstruction(sol):
        raise CrossCheckError(f"solved eta={eta} does not kill the closed form")
    if verify:
        verdict = is_canonical(dwork_context(sol))
        if not verdict.canonical:
            raise CrossCheckError(f"solved eta={eta} fails the obstruction pipeline")
    return eta


def ratio_invariant(spec: FieldSpec, N: int, lam, eta: Witt2 | None = None) -> Witt2:
    """HD^(p-1)(eta) / HD^(2p-1)(eta) in W_2(k); independent of the lift eta."""
    params = DworkParams.of(spec, N, lam, eta)
    if not dwork_ordinary(params):
        raise PreconditionError(f"X({params.lam}) is not ordinary")
    R = spec.w2
    x = spec.witt_to_ring(params.base_lift())
    num = _eval(spec, hd_mod_coeffs(N, spec.p, 1), x)
    den = _eval(spec, hd_mod_coeffs(N, spec.p, 2), x)
    if not R.is_unit(den):
        raise PreconditionError("HD^(2p-1) is not a unit at this parameter")
    return spec.ring_to_witt(R.mul(num, R.inv(den)))


# ---------------------------------------------------------------------------
# symmetries


def _primitive_root_of_unity(spec: FieldSpec, order: int) -> Optional[FieldElement]:
    if (spec.q - 1) % order:
        return None
    primes = [r for r in range(2, order + 1) if order % r == 0 and all(r % s for s in range(2, r))]
    one = spec.elem(1)
    for z in spec.elements():
        if not z:
            continue
        if z ** order == one and all(z ** (order // r) != one for r in primes):
            return z
    return None


def _permutations(m: int) -> Sequence[Sequence[int]]:
    if m <= 6:
        return list(itertools.permutations(range(m)))
    # a transposition and an m-cycle generate S_m
    swap = [1, 0] + list(range(2, m))
    cycle = list(range(1, m)) + [0]
    return [swap, cycle]


def symmetry_check(params_or_poly, N: int | None = None) -> bool:
    """Invariance under permutations of the variables and under the scalings
    x_i -> zeta^(e_i) x_i with sum e_i == 0 mod N+1 (when k has a primitive
    (N+1)-th root of unity zeta), plus the group-order arithmetic for p > N+1."""
    if isinstance(params_or_poly, DworkParams):
        params = params_or_poly
        f = dwork_poly(params, "w2" if params.eta is not None else "k")
        M = params.M
    else:
        f = params_or_poly
        M = f.num_vars if N is None else N + 1
        if f.num_vars != M:
            return False
    spec = f.spec
    for perm in _permutations(M):
        if poly_permute(f, perm) != f:
            return False
    zeta = _primitive_root_of_unity(spec, M)
    if zeta is not None:
        z = teichmuller(zeta) if f.ring_tag == "w2" else zeta
        one = 1
        zinv = z ** (M - 1)
        for i in range(1, M):
            scal = [one] * M
            scal[0] = z
            scal[i] = zinv
            if poly_scale_vars(f, scal) != f:
                return False
    if spec.p > M:
        if (math.factorial(M) * M**M) % spec.p == 0:
            return False
    return True
