import itertools

import pytest
from hypothesis import given
from hypothesis import strategies as st

from hforge.finitefield import FFElem, ff_sqrt, ff_trace, field_create, legendre, quad_ext

FIELDS = [(3, 1), (5, 1), (7, 1), (3, 2), (5, 2), (3, 3), (7, 2), (11, 1)]


@pytest.fixture(scope="module", params=FIELDS, ids=lambda pn: f"F{pn[0]}^{pn[1]}")
def F(request):
    return field_create(*request.param)


def test_f4_tables():
    # 0, 1, lam, lam+1 are indices 0..3
    F4 = field_create(2, 2)
    assert F4.modulus == (1, 1, 1)
    assert F4.add_table.tolist() == [[0, 1, 2, 3], [1, 0, 3, 2], [2, 3, 0, 1], [3, 2, 1, 0]]
    assert F4.mul_table.tolist() == [[0, 0, 0, 0], [0, 1, 2, 3], [0, 2, 3, 1], [0, 3, 1, 2]]


def test_f9_modulus():
    assert field_create(3, 2).modulus == (1, 0, 1)


def test_composite_rejected():
    with pytest.raises(ValueError):
        field_create(6, 1)


def test_trace_examples():
    F9 = field_create(3, 2)
    assert ff_trace(F9.elem(0)) == 0
    theta_root = F9.elem(3)  # the adjoined root x
    assert ff_trace(theta_root) == 0
    for a in range(3):
        assert ff_trace(F9.elem(a)) == (2 * a) % 3


def test_legendre_examples():
    F7 = field_create(7)
    assert legendre(F7.elem(2)) == 1
    assert legendre(F7.elem(3)) == -1
    assert legendre(F7.elem(0)) == 0


def test_sqrt_examples():
    F7 = field_create(7)
    assert ff_sqrt(F7.elem(2)) == F7.elem(3)
    assert ff_sqrt(F7.elem(3)) is None
    assert ff_sqrt(F7.elem(0)) == F7.elem(0)


@pytest.mark.parametrize("p, order", [(3, 8), (7, 48)])
def test_eta_order(p, order):
    qe = quad_ext(field_create(p))
    assert qe.ext.q == p * p
    assert qe.ext.order_idx(qe.eta) == order


def test_i_m_squares_to_minus_one():
    qe = quad_ext(field_create(7))
    assert qe.ext.mul(qe.i_M, qe.i_M) == qe.ext.neg(1)
    assert quad_ext(field_create(5)).i_M is None


def test_quad_ext_rejects_char_two():
    with pytest.raises(ValueError):
        quad_ext(field_create(2, 2))


def test_primitive_element(F):
    assert F.order_idx(F.theta) == F.q - 1
    assert all(F.order_idx(a) < F.q - 1 for a in range(1, F.theta))


def test_fermat(F):
    for a in range(F.q):
        assert F.pow(a, F.q) == a


def test_fixed_field(F):
    prime = {F.from_int(k) for k in range(F.p)}
    for a in range(F.q):
        assert (F.pow(a, F.p) == a) == (a in prime)


def test_legendre_multiplicative(F):
    for x, y in itertools.product(range(1, F.q), repeat=2):
        assert F.legendre_idx(F.mul(x, y)) == F.legendre_idx(x) * F.legendre_idx(y)


def test_half_are_squares(F):
    assert sum(F.legendre_idx(a) == 1 for a in range(1, F.q)) == (F.q - 1) // 2


def test_quad_ext_invariants(F):
    qe = quad_ext(F)
    d = F.q
    assert qe.ext.order_idx(qe.eta) == (F.p - 1) * (d + 1)
    t = qe.in_base(qe.ext.pow(qe.thetabar, d + 1))
    assert F.order_idx(t) == d - 1
    for a in range(d):
        for b in range(d):
            assert qe.embed(F.add(a, b)) == qe.ext.add(qe.embed(a), qe.embed(b))
            assert qe.embed(F.mul(a, b)) == qe.ext.mul(qe.embed(a), qe.embed(b))


@st.composite
def field_pair(draw):
    F = field_create(*draw(st.sampled_from([(3, 2), (3, 3), (7, 2)])))
    return F, draw(st.integers(0, F.q - 1)), draw(st.integers(0, F.q - 1))


@given(field_pair())
def test_frobenius_additive(fab):
    F, a, b = fab
    assert F.pow(F.add(a, b), F.p) == F.add(F.pow(a, F.p), F.pow(b, F.p))


@given(field_pair(), st.integers(0, 10))
def test_trace_linear(fab, k):
    F, x, y = fab
    alpha = F.from_int(k)
    lhs = F.trace_idx(F.add(F.mul(alpha, x), y))
    assert lhs == (k * F.trace_idx(x) + F.trace_idx(y)) % F.p


@given(field_pair())
def test_element_arithmetic(fab):
    F, a, b = fab
    x, y = F.elem(a), F.elem(b)
    assert (x + y) - y == x
    if b:
        assert (x / y) * y == x
    assert isinstance(x * y, FFElem)


@given(field_pair())
def test_sqrt_roundtrip(fab):
    F, a, _ = fab
    r = ff_sqrt(F.elem(a))
    if legendre(F.elem(a)) >= 0:
        assert r is not None and r * r == F.elem(a)
        assert all(F.mul(s, s) != a for s in range(int(r)))
    else:
        assert r is None
