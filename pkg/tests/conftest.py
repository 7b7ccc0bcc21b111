import numpy as np
import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from modrange import ModuleOperator, ModuleShape, ModuleVector

settings.register_profile(
    "default", max_examples=60, deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("default")

JORDAN = [[0, 1], [0, 0]]

finite = st.floats(-5, 5, allow_nan=False, allow_infinity=False)
complexes = st.builds(complex, finite, finite)
dims_st = st.lists(st.integers(1, 3), min_size=1, max_size=3)


@st.composite
def shapes(draw):
    return ModuleShape.from_dims(draw(dims_st))


@st.composite
def vectors(draw, shape):
    fibers = []
    for d in shape.dims:
        fibers.append(np.array(draw(st.lists(complexes, min_size=d, max_size=d))))
    return ModuleVector(shape, tuple(fibers))


@st.composite
def operators(draw, shape):
    blocks = []
    for d in shape.dims:
        vals = draw(st.lists(complexes, min_size=d * d, max_size=d * d))
        blocks.append(np.array(vals).reshape(d, d))
    return ModuleOperator(shape, tuple(blocks))


@st.composite
def shape_and_vectors(draw, k=2):
    shape = draw(shapes())
    return (shape, *[draw(vectors(shape)) for _ in range(k)])


@st.composite
def shape_and_operators(draw, k=1, nvec=0):
    shape = draw(shapes())
    ops = [draw(operators(shape)) for _ in range(k)]
    vecs = [draw(vectors(shape)) for _ in range(nvec)]
    return (shape, *ops, *vecs)


@pytest.fixture
def jordan():
    return ModuleOperator.from_blocks([JORDAN])


@pytest.fixture
def jordan_plus_scalar():
    return ModuleOperator.from_blocks([JORDAN, [[2]]])
