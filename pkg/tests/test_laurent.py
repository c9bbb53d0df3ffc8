import random

import pytest

from vertexalg.errors import VariableMismatch
from vertexalg.laurent import (
    LaurentElement,
    OneForm,
    TwoForm,
    VectorField,
    bracket,
    cartan,
    de_rham,
    de_rham_one,
    iota_one,
    iota_two,
    lie_derivative,
    zn_weight,
)
from vertexalg.scalar import ONE, ParamScalar

V = ("y1", "y2")


def mono(e1, e2, c=1):
    return LaurentElement.monomial(V, (e1, e2), c)


def random_laurent(rng, nterms=3, lo=-2, hi=3):
    out = LaurentElement(V)
    for _ in range(rng.randint(1, nterms)):
        out = out + mono(rng.randint(lo, hi), rng.randint(lo, hi), rng.randint(-4, 4))
    return out


def random_field(rng):
    return VectorField(V, {rng.randint(1, 2): random_laurent(rng)})


def test_mul_inverse():
    assert mono(1, 0) * mono(-1, 0) == LaurentElement.constant(V, 1)


def test_derive():
    f = mono(2, 1)
    assert f.derive(1) == mono(1, 1, 2)
    assert mono(-1, 0).derive(1) == mono(-2, 0, -1)


def test_variable_mismatch():
    with pytest.raises(VariableMismatch):
        mono(1, 0) + LaurentElement.monomial(("z",), (1,))


def test_de_rham():
    f = mono(1, 1)
    d = de_rham(f)
    assert d.component(1) == mono(0, 1)
    assert d.component(2) == mono(1, 0)


def test_de_rham_power():
    N = 4
    d = de_rham(mono(N, 0))
    assert d.component(1) == mono(N - 1, 0, N)
    assert d.component(2).is_zero()


def test_de_rham_veronese_generator():
    N, j = 3, 1
    d = de_rham(mono(N - j, j))
    assert d.component(1) == mono(N - j - 1, j, N - j)
    assert d.component(2) == mono(N - j, j - 1, j)


def test_gl2_bracket():
    e12 = VectorField(V, {2: mono(1, 0)})  # y1 d/dy2
    e21 = VectorField(V, {1: mono(0, 1)})  # y2 d/dy1
    b = bracket(e12, e21)
    assert b == VectorField(V, {1: mono(1, 0), 2: mono(0, 1, -1)})


def test_iota_one():
    tau = VectorField(V, {2: mono(1, 0)})
    assert iota_one(tau, OneForm(V, {2: LaurentElement.constant(V, 1)})) == mono(1, 0)


def test_iota_two_gluing():
    # contracting d/dy1 with k dy1^dy2/(y1^a y2^b) leaves k dy2/(y1^a y2^b)
    k = ParamScalar.var("k")
    a, b = 1, 1
    omega = TwoForm(V, {(1, 2): mono(-a, -b, 1).scale(k)})
    tau = VectorField(V, {1: LaurentElement.constant(V, 1)})
    out = iota_two(tau, omega)
    assert out == OneForm(V, {2: mono(-a, -b, 1).scale(k)})
    # second slot picks up the sign
    tau2 = VectorField(V, {2: LaurentElement.constant(V, 1)})
    assert iota_two(tau2, omega) == OneForm(V, {1: mono(-a, -b, -1).scale(k)})


def test_zn_weight():
    omega11 = TwoForm(V, {(1, 2): mono(-1, -1)})
    assert zn_weight(omega11, 3) == 0
    omega12 = TwoForm(V, {(1, 2): mono(-1, -2)})
    assert zn_weight(omega12, 2) == 1
    for N in (1, 2, 3, 5):
        assert zn_weight(VectorField(V, {1: mono(1, 0)}), N) == 0
    mixed = mono(1, 0) + mono(0, 2)
    assert zn_weight(mixed, 2) == "inhomogeneous"


def test_bracket_jacobi_random():
    rng = random.Random(5)
    for _ in range(200):
        a, b, c = random_field(rng), random_field(rng), random_field(rng)
        jac = (
            bracket(a, bracket(b, c))
            + bracket(b, bracket(c, a))
            + bracket(c, bracket(a, b))
        )
        assert jac.is_zero()


def test_cartan_magic_random():
    rng = random.Random(6)
    for _ in range(200):
        tau = random_field(rng)
        omega = OneForm(V, {rng.randint(1, 2): random_laurent(rng)})
        lhs = lie_derivative(tau, omega)
        rhs = iota_two(tau, de_rham_one(omega)) + de_rham(iota_one(tau, omega))
        assert lhs == rhs


def test_d_squared_zero_random():
    rng = random.Random(7)
    for _ in range(200):
        f = random_laurent(rng)
        assert de_rham_one(de_rham(f)).is_zero()


def test_cartan_dispatch():
    tau = VectorField(V, {1: mono(0, 1)})
    xi = VectorField(V, {2: mono(1, 0)})
    assert cartan("bracket", tau, xi) == bracket(tau, xi)
    omega = OneForm(V, {1: mono(1, 1)})
    assert cartan("iota", tau, omega) == iota_one(tau, omega)
    assert cartan("lie", tau, omega) == lie_derivative(tau, omega)
