import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from modrange import (
    AlgebraElement,
    DomainError,
    InputError,
    ModuleShape,
    ModuleVector,
    inner_product,
    module_action,
    modulus,
    normalize_at,
    random_vector,
)
from modrange.gelfand import algebra_star

from conftest import complexes, shape_and_vectors, shapes, vectors

SHAPE = ModuleShape.from_dims([2, 1])


def vec(*fibers):
    return ModuleVector(SHAPE, tuple(np.array(f, dtype=complex) for f in fibers))


def test_shape_validation():
    with pytest.raises(InputError):
        ModuleShape.from_dims([2, 0])
    assert SHAPE.n == 2 and SHAPE.total_dim == 3


def test_vector_fiber_lengths_checked():
    with pytest.raises(InputError):
        vec([1, 0, 0], [2])
    with pytest.raises(InputError):
        ModuleVector(SHAPE, (np.zeros(2),))


def test_inner_product_examples():
    x, y = vec([1, 0], [2]), vec([0, 1], [1j])
    np.testing.assert_array_equal(inner_product(x, y).values, [0, 2j])
    np.testing.assert_array_equal(inner_product(x, x).values, [1, 4])
    np.testing.assert_array_equal(inner_product(x, ModuleVector.zero(SHAPE)).values, [0, 0])


def test_inner_product_is_conjugate_linear_in_first_argument():
    x, y = vec([1, 0], [1]), vec([1, 0], [1])
    np.testing.assert_allclose(inner_product(x * 1j, y).values, [-1j, -1j])
    np.testing.assert_allclose(inner_product(x, y * 1j).values, [1j, 1j])


def test_inner_product_shape_mismatch():
    other = ModuleVector(ModuleShape.from_dims([1, 2]), (np.ones(1), np.ones(2)))
    with pytest.raises(InputError):
        inner_product(vec([1, 0], [1]), other)


def test_module_action_examples():
    x = vec([1, 0], [2])
    a = AlgebraElement(np.array([2, 1j]), SHAPE.space)
    assert module_action(x, a) == vec([2, 0], [2j])
    assert module_action(x, AlgebraElement.unit(SHAPE.space)) == x
    zero = ModuleVector.zero(SHAPE)
    assert module_action(zero, a) == zero


def test_modulus_examples():
    np.testing.assert_allclose(modulus(vec([3, 4], [0])).values, [5, 0])
    np.testing.assert_allclose(modulus(ModuleVector.zero(SHAPE)).values, [0, 0])
    np.testing.assert_allclose(modulus(vec([1, 0], [2])).values, [1, 2])


def test_normalize_at_examples():
    x = vec([2, 0], [4])
    assert normalize_at(x, 0).allclose(vec([1, 0], [2]))
    assert normalize_at(x, 1).allclose(vec([0.5, 0], [1]))
    with pytest.raises(DomainError):
        normalize_at(vec([0, 0], [1]), 0)


def test_random_vector_contract():
    a = random_vector(SHAPE, 7)
    assert a == random_vector(SHAPE, 7)
    assert a != random_vector(SHAPE, 8)
    assert [f.shape[0] for f in a.fibers] == [2, 1]
    u = random_vector(SHAPE, 1, "unit-fibers")
    np.testing.assert_allclose([np.linalg.norm(f) for f in u.fibers], [1, 1])
    r = random_vector(SHAPE, 1, "real-normal")
    assert all(np.all(f.imag == 0) for f in r.fibers)
    with pytest.raises(InputError):
        random_vector(SHAPE, 1, "uniform")


def _close(a, b, scale):
    np.testing.assert_allclose(a.values, b.values, rtol=0, atol=1e-12 * (1 + scale))


@given(shape_and_vectors(3), complexes, complexes)
def test_inner_product_linear_in_second_argument(data, a, b):
    _, x, y, z = data
    lhs = inner_product(x, y * a + z * b)
    rhs = inner_product(x, y) * a + inner_product(x, z) * b
    scale = max(np.abs(lhs.values).max(), np.abs(rhs.values).max(), 1.0)
    _close(lhs, rhs, 100 * scale)


@given(shape_and_vectors(2))
def test_inner_product_hermitian_and_positive(data):
    _, x, y = data
    np.testing.assert_array_equal(inner_product(y, x).values,
                                  algebra_star(inner_product(x, y)).values)
    xx = inner_product(x, x).values
    assert np.all(xx.real >= 0) and np.all(xx.imag == 0)
    for f, v in zip(x.fibers, xx):
        if not np.any(f):
            assert v == 0
        elif np.abs(f).max() > 1e-100:  # squares of smaller entries underflow
            assert v > 0


@given(shape_and_vectors(2), st.lists(complexes, min_size=3, max_size=3))
def test_inner_product_module_linearity(data, avals):
    shape, x, y = data
    a = AlgebraElement(np.array(avals[: shape.n]), shape.space)
    lhs = inner_product(x, module_action(y, a)).values
    rhs = inner_product(x, y).values * a.values
    np.testing.assert_allclose(lhs, rhs, rtol=1e-12, atol=1e-12)


@given(shape_and_vectors(2))
def test_cauchy_schwarz_per_character(data):
    _, x, y = data
    lhs = np.abs(inner_product(x, y).values) ** 2
    rhs = inner_product(x, x).values.real * inner_product(y, y).values.real
    assert np.all(lhs <= rhs * (1 + 1e-12) + 1e-12)


@given(shape_and_vectors(2))
def test_parallelogram_law_per_character(data):
    _, x, y = data
    m = lambda v: inner_product(v, v).values.real  # noqa: E731
    lhs = m(x + y) + m(x - y)
    rhs = 2 * m(x) + 2 * m(y)
    np.testing.assert_allclose(lhs, rhs, rtol=1e-12, atol=1e-12)


@given(shapes().flatmap(lambda s: st.tuples(st.just(s), vectors(s))))
def test_normalize_sets_character_modulus_to_one(data):
    shape, x = data
    for i in range(shape.n):
        if np.linalg.norm(x.fibers[i]) > 1e-100:
            assert abs(modulus(normalize_at(x, i)).values[i] - 1) < 1e-12
