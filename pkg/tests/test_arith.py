import itertools

import pytest
from hypothesis import given, strategies as st

from canlift.arith import (
    FieldSpec,
    SpecMismatchError,
    default_modulus,
    field_inv,
    is_irreducible,
    parse_field_element,
    parse_modulus,
    parse_witt,
    teichmuller,
    times_p,
    witt_add,
    witt_frobenius,
    witt_from_residue,
    witt_mul,
    witt_neg,
    witt_prime_iso,
    witt_reduce,
)

SPECS = [FieldSpec(3), FieldSpec(5), FieldSpec(7), FieldSpec(3, 2), FieldSpec(5, 2), FieldSpec(7, 3)]


@st.composite
def witt_of(draw, spec):
    els = list(spec.elements()) if spec.q <= 400 else None
    pick = (lambda: draw(st.sampled_from(els))) if els else (
        lambda: spec.elem(tuple(draw(st.integers(0, spec.p - 1)) for _ in range(spec.n))))
    return spec.witt(pick(), pick())


def test_field_inv_examples():
    f5 = FieldSpec(5)
    assert field_inv(f5.elem(2)) == f5.elem(3)
    assert field_inv(f5.elem(1)) == f5.elem(1)
    f9 = FieldSpec(3, 2, (1, 0, 1))
    y = f9.elem((0, 1))
    assert field_inv(y) == f9.elem((0, 2))


def test_field_inv_zero_raises():
    with pytest.raises(ZeroDivisionError):
        field_inv(FieldSpec(5).elem(0))


@pytest.mark.parametrize("spec", [FieldSpec(3, 2), FieldSpec(5, 2), FieldSpec(3, 3)])
def test_field_inv_against_multiplication_table(spec):
    one = spec.elem(1)
    for a in spec.elements():
        if a != spec.elem(0):
            hits = [b for b in spec.elements() if a * b == one]
            assert hits == [field_inv(a)]


def test_witt_add_examples():
    f5 = FieldSpec(5)
    assert f5.witt(0, 0) + f5.witt(4, 2) == f5.witt(4, 2)
    f3 = FieldSpec(3)
    s = witt_add(f3.witt(1, 0), f3.witt(1, 0))
    # oracle: 1 + 1 = 2 in Z/9, decoded through the iso
    assert witt_prime_iso(s) == 2
    assert s == witt_from_residue(f3, 2)
    x = f5.witt(3, 1)
    assert x + witt_neg(x) == f5.witt(0, 0)


def test_witt_add_1_plus_1_in_F3():
    # 2 = a0^3 + 3 a1 in Z/9 with a0 = 2 forces a1 = 1
    f3 = FieldSpec(3)
    assert witt_add(f3.witt(1, 0), f3.witt(1, 0)) == f3.witt(2, 1)


def test_witt_mul_examples():
    f5 = FieldSpec(5)
    x = f5.witt(2, 4)
    assert f5.witt(1, 0) * x == x
    assert f5.witt(0, 1) * f5.witt(0, 1) == f5.witt(0, 0)
    assert witt_mul(f5.witt(2, 0), f5.witt(3, 0)) == f5.witt(1, 0)


def test_frobenius_examples():
    f5 = FieldSpec(5)
    for a0, a1 in itertools.product(range(5), repeat=2):
        assert witt_frobenius(f5.witt(a0, a1)) == f5.witt(a0, a1)
    f9 = FieldSpec(3, 2)
    y = f9.elem((0, 1))
    assert witt_frobenius(f9.witt(y, 0)) == f9.witt(-y, 0)


def test_teichmuller_and_times_p():
    f5 = FieldSpec(5)
    assert teichmuller(f5.elem(0)) == f5.witt(0, 0)
    assert teichmuller(f5.elem(1)) == f5.witt(1, 0)
    assert witt_prime_iso(teichmuller(f5.elem(3))) == 18
    assert times_p(f5.elem(0)) == f5.witt(0, 0)
    assert times_p(f5.elem(2)) == f5.witt(0, 2)
    assert witt_prime_iso(times_p(f5.elem(2))) == 10
    f9 = FieldSpec(3, 2)
    y = f9.elem((0, 1))
    assert times_p(y) == f9.witt(0, y ** 3)
    # p-fold sum of any lift of y
    for a1 in f9.elements():
        x = f9.witt(y, a1)
        assert x + x + x == times_p(y)


def test_iso_examples():
    f5 = FieldSpec(5)
    assert witt_prime_iso(f5.witt(0, 0)) == 0
    assert witt_prime_iso(f5.witt(1, 0)) == 1
    assert witt_prime_iso(f5.witt(3, 2)) == 3


def test_iso_only_for_prime_field():
    with pytest.raises(ValueError):
        witt_prime_iso(FieldSpec(3, 2).witt(1, 0))


@pytest.mark.parametrize("p", [3, 5, 7])
def test_iso_is_ring_isomorphism(p):
    spec = FieldSpec(p)
    q = p * p
    ws = [spec.witt(a0, a1) for a0 in range(p) for a1 in range(p)]
    image = [witt_prime_iso(w) for w in ws]
    assert sorted(image) == list(range(q))
    for x, a in zip(ws, image):
        for y, b in zip(ws, image):
            assert witt_prime_iso(x + y) == (a + b) % q
            assert witt_prime_iso(x * y) == a * b % q


@pytest.mark.parametrize("spec", SPECS, ids=str)
@given(data=st.data())
def test_ring_axioms(spec, data):
    x, y, z = (data.draw(witt_of(spec)) for _ in range(3))
    zero, one = spec.witt(0, 0), spec.witt(1, 0)
    assert (x + y) + z == x + (y + z)
    assert (x * y) * z == x * (y * z)
    assert x * (y + z) == x * y + x * z
    assert x + y == y + x and x * y == y * x
    assert x + zero == x and x * one == x
    assert x + witt_neg(x) == zero
    assert x - y + y == x


@pytest.mark.parametrize("spec", SPECS, ids=str)
@given(data=st.data())
def test_frobenius_is_ring_endomorphism_lifting_pth_power(spec, data):
    x, y = data.draw(witt_of(spec)), data.draw(witt_of(spec))
    assert witt_frobenius(x + y) == witt_frobenius(x) + witt_frobenius(y)
    assert witt_frobenius(x * y) == witt_frobenius(x) * witt_frobenius(y)
    assert witt_reduce(witt_frobenius(x)) == witt_reduce(x) ** spec.p


@pytest.mark.parametrize("spec", SPECS, ids=str)
@given(data=st.data())
def test_teichmuller_multiplicative_and_times_p(spec, data):
    x, y = data.draw(witt_of(spec)), data.draw(witt_of(spec))
    a, b = x.a0, y.a0
    assert teichmuller(a * b) == teichmuller(a) * teichmuller(b)
    assert times_p(a) == witt_from_p(spec) * x
    assert times_p(a) * times_p(b) == spec.witt(0, 0)


def witt_from_p(spec):
    one = spec.witt(1, 0)
    acc = spec.witt(0, 0)
    for _ in range(spec.p):
        acc = acc + one
    return acc


@pytest.mark.parametrize("spec", SPECS, ids=str)
@given(data=st.data())
def test_inverse(spec, data):
    x = data.draw(witt_of(spec))
    if x.a0 == spec.elem(0):
        assert not x.is_unit()
        return
    assert x * x.inverse() == spec.witt(1, 0)


def test_galois_ring_model_round_trip():
    for spec in SPECS[:5]:
        for a0 in spec.elements():
            for a1 in list(spec.elements())[:5]:
                w = spec.witt(a0, a1)
                assert spec.ring_to_witt(spec.witt_to_ring(w)) == w


def test_mismatched_specs_raise():
    with pytest.raises(SpecMismatchError):
        FieldSpec(5).witt(1, 0) + FieldSpec(7).witt(1, 0)


@pytest.mark.parametrize("p, n", [(4, 1), (2, 1), (9, 1), (1, 1)])
def test_invalid_field_spec(p, n):
    with pytest.raises(ValueError):
        FieldSpec(p, n)


def test_reducible_modulus_rejected():
    with pytest.raises(ValueError):
        FieldSpec(5, 2, (1, 0, 1))  # y^2 + 1 = (y - 2)(y + 2) over F5


def test_default_modulus():
    assert default_modulus(3, 2) == (1, 0, 1)
    assert default_modulus(7, 3) == (2, 0, 0, 1)
    for p, n in [(3, 2), (3, 3), (5, 2), (7, 2), (5, 3)]:
        assert is_irreducible(default_modulus(p, n), p)


def test_irreducibility_by_brute_force():
    # a cubic over F_p is irreducible iff it has no root
    p = 5
    for c0, c1, c2 in itertools.product(range(p), repeat=3):
        m = (c0, c1, c2, 1)
        has_root = any((c0 + c1 * t + c2 * t * t + t ** 3) % p == 0 for t in range(p))
        assert is_irreducible(m, p) == (not has_root)


def test_parsers():
    f9 = FieldSpec(3, 2)
    assert parse_field_element("1,2", f9) == f9.elem((1, 2))
    assert parse_witt("(1,2|0,1)", f9) == f9.witt((1, 2), (0, 1))
    assert parse_witt("(3|2)", FieldSpec(5)) == FieldSpec(5).witt(3, 2)
    assert parse_modulus("y^2+1", 3) == (1, 0, 1)
    assert parse_modulus("y^3 + 2", 7) == (2, 0, 0, 1)
    for bad in ("(1|", "1|2", "(a|b)"):
        with pytest.raises(ValueError):
            parse_witt(bad, FieldSpec(5))


def test_str_round_trip():
    for spec in SPECS:
        for a0 in list(spec.elements())[:7]:
            w = spec.witt(a0, a0 * a0 + spec.elem(1))
            assert parse_witt(str(w), spec) == w
            assert parse_field_element(str(a0), spec) == a0
