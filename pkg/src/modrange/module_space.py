"""The Hilbert module E = direct sum of C^{d_i}, one fiber per character.

The algebra-valued inner product is computed fiberwise and is
conjugate-linear in its first argument, linear in its second.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .exceptions import DomainError, InputError
from .gelfand import AlgebraElement, CharacterSpace, sqrt_positive

DISTRIBUTIONS = ("complex-normal", "real-normal", "unit-fibers")


@dataclass(frozen=True)
class ModuleShape:
    """Character space plus the fiber dimension over each character."""

    space: CharacterSpace
    dims: tuple[int, ...]

    def __post_init__(self):
        dims = tuple(int(d) for d in self.dims)
        if len(dims) != self.space.size:
            raise InputError(
                f"dims has {len(dims)} entries, space has {self.space.size} characters"
            )
        if any(d < 1 for d in dims):
            raise InputError(f"every fiber dimension must be >= 1, got {dims}")
        object.__setattr__(self, "dims", dims)

    @classmethod
    def from_dims(cls, dims: Sequence[int], labels: Sequence[str] = ()) -> "ModuleShape":
        return cls(CharacterSpace(len(dims), tuple(labels)), tuple(dims))

    @property
    def n(self) -> int:
        return self.space.size

    @property
    def total_dim(self) -> int:
        return sum(self.dims)


@dataclass(frozen=True, eq=False)
class ModuleVector:
    """An element of E: one complex coordinate vector per character."""

    shape: ModuleShape
    fibers: tuple[np.ndarray, ...]

    def __post_init__(self):
        fibers = tuple(np.array(f, dtype=complex).reshape(-1) for f in self.fibers)
        if len(fibers) != self.shape.n:
            raise InputError(f"expected {self.shape.n} fibers, got {len(fibers)}")
        for i, (f, d) in enumerate(zip(fibers, self.shape.dims)):
            if f.shape[0] != d:
                raise InputError(f"fiber {i} has length {f.shape[0]}, expected {d}")
            f.setflags(write=False)
        object.__setattr__(self, "fibers", fibers)

    @classmethod
    def zero(cls, shape: ModuleShape) -> "ModuleVector":
        return cls(shape, tuple(np.zeros(d) for d in shape.dims))

    @classmethod
    def embed(cls, shape: ModuleShape, i: int, fiber) -> "ModuleVector":
        """Vector equal to ``fiber`` over character ``i`` and zero elsewhere."""
        i = shape.space.check_index(i)
        fibers = [np.zeros(d, dtype=complex) for d in shape.dims]
        fibers[i] = np.asarray(fiber, dtype=complex)
        return cls(shape, tuple(fibers))

    def _check(self, other: "ModuleVector") -> None:
        if not isinstance(other, ModuleVector) or other.shape != self.shape:
            raise InputError("module vectors have different shapes")

    def __add__(self, other: "ModuleVector") -> "ModuleVector":
        self._check(other)
        return ModuleVector(self.shape, tuple(a + b for a, b in zip(self.fibers, other.fibers)))

    def __sub__(self, other: "ModuleVector") -> "ModuleVector":
        self._check(other)
        return ModuleVector(self.shape, tuple(a - b for a, b in zip(self.fibers, other.fibers)))

    def __mul__(self, alpha) -> "ModuleVector":
        alpha = complex(alpha)
        return ModuleVector(self.shape, tuple(alpha * f for f in self.fibers))

    __rmul__ = __mul__

    def __neg__(self) -> "ModuleVector":
        return self * -1

    def __eq__(self, other):
        if not isinstance(other, ModuleVector):
            return NotImplemented
        return self.shape == other.shape and all(
            np.array_equal(a, b) for a, b in zip(self.fibers, other.fibers)
        )

    def __repr__(self):
        return f"ModuleVector({[f.tolist() for f in self.fibers]!r})"

    def allclose(self, other: "ModuleVector", atol: float = 1e-12) -> bool:
        self._check(other)
        return all(np.allclose(a, b, rtol=0, atol=atol) for a, b in zip(self.fibers, other.fibers))


def inner_product(x: ModuleVector, y: ModuleVector) -> AlgebraElement:
    """Algebra-valued inner product; component i is ``vdot(x_i, y_i)``."""
    x._check(y)
    return AlgebraElement(
        np.array([np.vdot(a, b) for a, b in zip(x.fibers, y.fibers)]), x.shape.space
    )


def module_action(x: ModuleVector, a: AlgebraElement) -> ModuleVector:
    """Right action of the algebra: fiber i is scaled by ``a(phi_i)``."""
    if a.space != x.shape.space:
        raise InputError("algebra element and module vector use different character spaces")
    return ModuleVector(x.shape, tuple(v * f for v, f in zip(a.values, x.fibers)))


def modulus(x: ModuleVector) -> AlgebraElement:
    """``|x| = <x, x>^{1/2}``, i.e. the Euclidean norm of every fiber."""
    return sqrt_positive(inner_product(x, x))


def normalize_at(x: ModuleVector, i: int) -> ModuleVector:
    """Rescale ``x`` so that ``phi_i(|x|) = 1``."""
    i = x.shape.space.check_index(i)
    r = float(np.linalg.norm(x.fibers[i]))
    if r == 0.0:
        raise DomainError(f"fiber {i} is zero, phi_{i}(|x|) = 0 cannot be normalized")
    return x * (1.0 / r)


def random_vector(
    shape: ModuleShape,
    seed: int | np.random.Generator | None = None,
    distribution: str = "complex-normal",
) -> ModuleVector:
    """Deterministic pseudo-random module vector.

    ``complex-normal`` draws independent standard complex Gaussian entries,
    ``real-normal`` real Gaussians, ``unit-fibers`` complex Gaussians with
    every fiber rescaled to unit length.
    """
    if distribution not in DISTRIBUTIONS:
        raise InputError(f"unknown distribution {distribution!r}; choose from {DISTRIBUTIONS}")
    rng = np.random.default_rng(seed)
    fibers = []
    for d in shape.dims:
        if distribution == "real-normal":
            f = rng.standard_normal(d).astype(complex)
        else:
            f = (rng.standard_normal(d) + 1j * rng.standard_normal(d)) / np.sqrt(2.0)
            if distribution == "unit-fibers":
                f = f / np.linalg.norm(f)
        fibers.append(f)
    return ModuleVector(shape, tuple(fibers))
