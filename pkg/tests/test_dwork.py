import itertools
import math

import pytest
from hypothesis import given, strategies as st

from canlift.arith import FieldSpec, teichmuller, witt_from_residue, witt_prime_iso
from canlift.dualmod import dual_act
from canlift.dwork import (
    DworkParams,
    PreconditionError,
    canonical_eta,
    closed_form_obstruction,
    dwork_context,
    dwork_ordinary,
    dwork_poly,
    dwork_smooth,
    g_vee,
    harmonic_ph,
    hd_coeff_oracle,
    hd_def,
    hd_eval,
    hd_mod,
    hd_mod_coeffs,
    hd_shifted_def,
    hd_shifted_mod_coeffs,
    katz_coeffs,
    lifts,
    naive_closed_form,
    pipeline_obstruction,
    ratio_invariant,
    symmetry_check,
)
from canlift.obstruction import conormal_map, is_canonical
from canlift.poly import parse_poly

F5 = FieldSpec(5)
F7 = FieldSpec(7)


def multinomial_hd(M, P):
    # coefficient of prod x_i^P in (X sum x_i^M - M prod x_i)^P: every x_i^M
    # is taken a times and the product term c = P - M a times
    out = {}
    for a in range(P // M + 1):
        c = P - M * a
        out[M * a] = math.factorial(P) // (math.factorial(a) ** M * math.factorial(c)) * (-M) ** c
    return out


def iso(x):
    return witt_prime_iso(x)


def test_dwork_poly_examples():
    f = dwork_poly(DworkParams.of(F5, 2, 1), "k")
    assert f == parse_poly("x0^3 + x1^3 + x2^3 - 3*x0*x1*x2", F5, "k")
    g = dwork_poly(DworkParams.of(F5, 2, eta=F5.witt(0, 1)))
    assert g == parse_poly("(0|1)*x0^3 + (0|1)*x1^3 + (0|1)*x2^3 - 3*x0*x1*x2", F5)
    h = dwork_poly(DworkParams.of(F5, 3, 0), "k")
    assert h == parse_poly("-4*x0*x1*x2*x3", F5, "k")
    assert not dwork_smooth(DworkParams.of(F5, 3, 0))


def test_hd_def_examples():
    assert hd_def(3, 2).as_dict() == {0: 9}
    assert hd_def(3, 4).as_dict() == {0: 81, 3: -72}
    assert hd_def(3, 9).as_dict() == {0: -19683, 3: 367416, 6: -204120, 9: 1680}


@pytest.mark.parametrize("M,P", [(M, P) for M in range(2, 8) for P in range(0, 27)])
def test_hd_def_against_multinomials(M, P):
    expect = {e: c for e, c in multinomial_hd(M, P).items() if c}
    assert hd_def(M, P).as_dict() == expect


def test_hd_def_structure():
    for M, P in itertools.product(range(2, 6), range(0, 20)):
        hd = hd_def(M, P)
        assert hd.coefficient(0) == (-M) ** P
        assert all(e % M == 0 for e, _ in hd.items())


def test_hd_coeff_oracle_examples():
    assert iso(hd_coeff_oracle(DworkParams.of(F5, 2, eta=F5.witt(0, 0)), 2)) == 9
    # the Teichmueller lift (3|0) is 18 in Z/25: 81 - 72 * 18^3 = 2
    assert iso(hd_coeff_oracle(DworkParams.of(F5, 2, eta=F5.witt(3, 0)), 4)) == 2
    # the integer 3, i.e. (3|2): 81 - 72 * 27 = 12
    assert iso(hd_coeff_oracle(DworkParams.of(F5, 2, eta=3), 4)) == 12
    assert iso(hd_coeff_oracle(DworkParams.of(F5, 3, eta=F5.witt(2, 4)), 3)) == (-4) ** 3 % 25


def test_hd_mod_examples():
    assert hd_mod_coeffs(2, 5, 1) == {0: 6, 3: 3}
    assert {e: c % 25 for e, c in hd_def(3, 4).items()} == {0: 6, 3: 3}
    assert hd_mod_coeffs(2, 5, 2)[0] == 17 == (-19683) % 25
    assert hd_def(3, 9).reduce(25) == {0: 17, 3: 16, 6: 5, 9: 5}


@pytest.mark.parametrize("p", [5, 7, 11, 13])
@pytest.mark.parametrize("N", [2, 3, 4, 5, 6])
@pytest.mark.parametrize("m", [1, 2])
def test_hd_mod_coefficients_equal_reduced_definition(p, N, m):
    if (N + 1) % p == 0:
        pytest.skip("p | N+1")
    q = p * p
    exact = {e: c % q for e, c in hd_def(N + 1, m * p - 1).items() if c % q}
    assert hd_mod_coeffs(N, p, m) == exact


@given(p=st.sampled_from([5, 7, 11]), N=st.integers(2, 5), m=st.sampled_from([1, 2]), data=st.data())
def test_three_way_at_random_eta(p, N, m, data):
    if (N + 1) % p == 0:
        return
    spec = FieldSpec(p)
    eta = witt_from_residue(spec, data.draw(st.integers(0, p * p - 1)))
    params = DworkParams(spec, N, eta.a0, eta)
    P = m * p - 1
    a = hd_eval(hd_def(N + 1, P), eta)
    assert a == hd_mod(N, p, m, eta)
    if N <= 4:
        assert a == hd_coeff_oracle(params, P)


def test_katz_formula_mod_p():
    for p, N in [(5, 2), (7, 2), (7, 3), (11, 4), (13, 5)]:
        lead = pow(-(N + 1), p - 1, p)
        expect = {e: c * lead % p for e, c in katz_coeffs(N, p).items() if c * lead % p}
        got = {e: c % p for e, c in hd_def(N + 1, p - 1).items() if c % p}
        assert got == expect
        assert {e: c % p for e, c in hd_mod_coeffs(N, p, 1).items() if c % p} == expect


def test_harmonic_examples():
    assert harmonic_ph(0, 5) == 0
    assert harmonic_ph(3, 5) == 5
    assert harmonic_ph(5, 5) == 1
    with pytest.raises(ValueError):
        harmonic_ph(10, 5)


@pytest.mark.parametrize("p", [3, 5, 7, 11, 13])
def test_harmonic_against_fractions(p):
    from fractions import Fraction

    q = p * p
    for k in range(2 * p):
        exact = sum(Fraction(p, j) for j in range(1, k + 1))
        want = exact.numerator * pow(exact.denominator, -1, q) % q
        assert harmonic_ph(k, p) == want


def test_smooth_and_ordinary_examples():
    assert not dwork_smooth(DworkParams.of(F5, 2, 1))
    assert dwork_smooth(DworkParams.of(F5, 2, 3))
    assert not any(dwork_smooth(DworkParams.of(FieldSpec(3), 2, lam)) for lam in range(3))
    assert not dwork_ordinary(DworkParams.of(F5, 2, 2))
    assert dwork_ordinary(DworkParams.of(F5, 2, 3))
    assert dwork_ordinary(DworkParams.of(F5, 2, 4))


def _evaluate(f, point):
    acc = None
    for e, c in f.as_dict().items():
        term = c
        for x, k in zip(point, e):
            term = term * x ** k
        acc = term if acc is None else acc + term
    return acc


@pytest.mark.parametrize("p,N,r", [(5, 2, 2), (7, 2, 1), (5, 3, 1), (11, 2, 2)])
def test_smoothness_against_jacobian(p, N, r):
    # search the affine chart x0 = 1 over F_(p^r), which contains mu_(N+1)
    from canlift.poly import poly_partial

    base = FieldSpec(p)
    big = FieldSpec(p, r)
    els = list(big.elements())
    for lam in range(p):
        params = DworkParams.of(base, N, lam)
        f = dwork_poly(DworkParams.of(big, N, big.elem(lam)), "k")
        partials = [poly_partial(f, i) for i in range(N + 1)]
        singular = False
        for rest in itertools.product(els, repeat=N):
            pt = (big.elem(1),) + rest
            if all(_evaluate(d, pt) == big.elem(0) for d in partials):
                singular = True
                break
        assert dwork_smooth(params) == (not singular)


def test_g_vee_example_and_conditions():
    params = DworkParams.of(F5, 2, eta=F5.witt(3, 0))
    expect = "x0^-4*x1^-1*x2^-1 + (3|0)*x0^-2*x1^-2*x2^-2 + x0^-1*x1^-4*x2^-1 + x0^-1*x1^-1*x2^-4"
    from canlift.dualmod import parse_dual

    assert g_vee(params) == parse_dual(expect, F5)
    for r in range(25):
        params = DworkParams.of(F5, 2, eta=r)
        ctx = dwork_context(params)
        g = g_vee(params)
        assert dual_act(ctx.f, g).is_zero()
        assert all(c.is_zero() for c in conormal_map(ctx, g))


CLOSED_FORM_P5_L3 = {3: 20, 8: 0, 13: 5, 18: 10, 23: 15}


def test_closed_form_values():
    for r, v in CLOSED_FORM_P5_L3.items():
        params = DworkParams.of(F5, 2, eta=r)
        assert iso(closed_form_obstruction(params)) == v
        assert iso(pipeline_obstruction(params)) == v


@pytest.mark.parametrize("p,N", [(5, 2), (7, 2), (5, 3), (7, 3), (7, 4)])
def test_naive_form_misses_harmonic_term(p, N):
    spec = FieldSpec(p)
    q = p * p
    M = N + 1
    hd1 = hd_def(M, p - 1)
    for lam in range(1, p):
        for eta in lifts(spec, spec.elem(lam)):
            params = DworkParams(spec, N, eta.a0, eta)
            x = iso(eta)
            corr = sum(-harmonic_ph(e // M, p) * c * pow(x, e, q) for e, c in hd1.items())
            diff = (-M) * pow(x, p, q) * corr % q
            got = (iso(pipeline_obstruction(params)) - iso(naive_closed_form(params))) % q
            assert got == diff and diff % p == 0


@pytest.mark.parametrize("p,N", [(5, 2), (7, 3), (11, 4), (13, 2), (13, 6)])
def test_shifted_polynomial_fast_path(p, N):
    q = p * p
    exact = {e: c % q for e, c in hd_shifted_def(N, p).items() if c % q}
    assert hd_shifted_mod_coeffs(N, p) == exact


def test_shifted_polynomial_is_a_power_coefficient():
    from canlift.poly import poly_pow

    for p, N in [(5, 2), (7, 2), (5, 3)]:
        spec = FieldSpec(p)
        for r in (2, 3, 11):
            params = DworkParams.of(spec, N, eta=r)
            f = dwork_poly(params)
            big = poly_pow(f, 2 * p - 1)
            mono = (p * (N + 2) - 1,) + (p - 1,) * N
            x = r % (p * p)
            q = p * p
            want = pow(x, p, q) * sum(c * pow(x, e, q) for e, c in hd_shifted_def(N, p).items()) % q
            assert iso(big.coeff(mono)) == want


@pytest.mark.parametrize("p,N", [(5, 2), (7, 2), (7, 3), (7, 4), (5, 3)])
def test_closed_form_equals_pipeline(p, N):
    spec = FieldSpec(p)
    for lam in range(p):
        for eta in lifts(spec, spec.elem(lam)):
            params = DworkParams(spec, N, eta.a0, eta)
            assert closed_form_obstruction(params) == pipeline_obstruction(params)


def test_closed_form_equals_pipeline_over_extension():
    spec = FieldSpec(5, 2)
    for lam in [spec.elem((1, 1)), spec.elem((3, 2)), spec.elem((0, 4))]:
        for eta in lifts(spec, lam)[:6]:
            params = DworkParams(spec, 2, lam, eta)
            assert closed_form_obstruction(params) == pipeline_obstruction(params)


def test_canonical_eta_examples():
    assert iso(canonical_eta(F5, 2, 3)) == 8
    assert canonical_eta(F5, 2, 3) == F5.witt(3, 3)
    assert iso(canonical_eta(F5, 2, 4)) == 4
    for lam in (0, 1, 2):
        with pytest.raises(PreconditionError):
            canonical_eta(F5, 2, lam)
    with pytest.raises(PreconditionError):
        canonical_eta(FieldSpec(3), 2, 2)


@pytest.mark.parametrize("spec,N", [(F5, 2), (F7, 2), (F7, 3), (FieldSpec(5, 2), 2)], ids=str)
def test_solver_agrees_with_exhaustive_scan(spec, N):
    for lam in spec.elements():
        params = DworkParams(spec, N, lam)
        if not dwork_smooth(params) or not dwork_ordinary(params):
            continue
        hits = [e for e in lifts(spec, lam) if is_canonical(dwork_context(params.with_eta(e))).canonical]
        assert hits == [canonical_eta(spec, N, lam)]


def test_ratio_examples():
    for r in (3, 8, 13, 18, 23):
        assert iso(ratio_invariant(F5, 2, 3, witt_from_residue(F5, r))) == 18
    assert len({ratio_invariant(F5, 2, 4, e) for e in lifts(F5, F5.elem(4))}) == 1
    with pytest.raises(PreconditionError):
        ratio_invariant(F5, 2, 2)


def test_ratio_from_exact_definitions():
    # evaluate both exact integer polynomials on each integer lift and divide mod p^2
    for p, N in [(5, 2), (7, 2), (7, 4)]:
        q = p * p
        spec = FieldSpec(p)
        for lam in range(1, p):
            params = DworkParams.of(spec, N, lam)
            if not dwork_smooth(params) or not dwork_ordinary(params):
                continue
            vals = set()
            for x in range(lam, q, p):
                num = sum(c * x ** e for e, c in hd_def(N + 1, p - 1).items()) % q
                den = sum(c * x ** e for e, c in hd_def(N + 1, 2 * p - 1).items()) % q
                vals.add(num * pow(den, -1, q) % q)
            assert len(vals) == 1
            assert iso(ratio_invariant(spec, N, lam)) == vals.pop()


def test_symmetry_examples():
    assert symmetry_check(DworkParams.of(F5, 2, 3))
    assert symmetry_check(DworkParams.of(F7, 2, eta=10))
    assert symmetry_check(DworkParams.of(F7, 4, 3))
    f = parse_poly("x0^3 + x1^3", F5, num_vars=3)
    assert not symmetry_check(f, 2)


def test_cube_root_scaling_fixes_dwork_cubic():
    from canlift.poly import poly_scale_vars

    f = dwork_poly(DworkParams.of(F7, 2, eta=10))
    zeta = teichmuller(F7.elem(2))
    assert iso(zeta * zeta * zeta) == 1
    assert poly_scale_vars(f, [zeta, zeta.inverse(), 1]) == f


PRIMES_TO_31 = [3, 5, 7, 11, 13, 17, 19, 23, 29, 31]


@pytest.mark.parametrize("p", PRIMES_TO_31)
def test_binomial_congruence_where_it_holds(p):
    from canlift.selftest import binomial_congruence_holds

    q = p * p
    for m in (1, 2):
        for j in range(m * p):
            assert binomial_congruence_holds(p, m, j)
            literal = (-1) ** j * (1 - m * harmonic_ph(j, p)) % q
            exact = math.comb(m * p - 1, j) % q
            if j <= p:
                assert exact == literal
            else:
                assert (exact - literal) % p == 0
