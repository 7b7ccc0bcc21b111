"""Abelian C*-algebras represented through a finite Gelfand spectrum.

An element of the algebra is a complex function on a finite set of
characters; multiplication, addition and the involution act pointwise and
every character is a coordinate evaluation.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .exceptions import DomainError, InputError

DEFAULT_POSITIVITY_TOL = 1e-10


def _frozen(arr: np.ndarray) -> np.ndarray:
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class CharacterSpace:
    """Finite character set of an abelian C*-algebra.

    Parameters
    ----------
    size : int
        Number of characters (points of the spectrum).
    labels : sequence of str, optional
        Human-readable names, one per character. Defaults to ``phi0, phi1, ...``.
    """

    size: int
    labels: tuple[str, ...] = field(default=())

    def __post_init__(self):
        if int(self.size) != self.size or self.size < 1:
            raise InputError(f"character space needs size >= 1, got {self.size!r}")
        object.__setattr__(self, "size", int(self.size))
        labels = tuple(str(s) for s in self.labels)
        if not labels:
            labels = tuple(f"phi{i}" for i in range(self.size))
        if len(labels) != self.size:
            raise InputError(
                f"expected {self.size} labels, got {len(labels)}"
            )
        object.__setattr__(self, "labels", labels)

    def check_index(self, i: int) -> int:
        if not isinstance(i, (int, np.integer)) or not 0 <= i < self.size:
            raise InputError(f"character index {i!r} out of range [0, {self.size})")
        return int(i)


@dataclass(frozen=True, eq=False)
class AlgebraElement:
    """An element of the algebra, stored as its values on every character."""

    values: np.ndarray
    space: CharacterSpace

    def __post_init__(self):
        vals = np.array(self.values, dtype=complex).reshape(-1)
        if vals.shape[0] != self.space.size:
            raise InputError(
                f"algebra element has {vals.shape[0]} values, "
                f"space has {self.space.size} characters"
            )
        object.__setattr__(self, "values", _frozen(vals))

    @classmethod
    def unit(cls, space: CharacterSpace) -> "AlgebraElement":
        return cls(np.ones(space.size), space)

    @classmethod
    def zero(cls, space: CharacterSpace) -> "AlgebraElement":
        return cls(np.zeros(space.size), space)

    def __eq__(self, other):
        if not isinstance(other, AlgebraElement):
            return NotImplemented
        return self.space == other.space and np.array_equal(self.values, other.values)

    def __repr__(self):
        return f"AlgebraElement({self.values.tolist()!r})"

    def __add__(self, other):
        return algebra_add(self, other)

    def __mul__(self, other):
        if isinstance(other, AlgebraElement):
            return algebra_mul(self, other)
        return AlgebraElement(self.values * complex(other), self.space)

    __rmul__ = __mul__


def _same_space(a: AlgebraElement, b: AlgebraElement) -> None:
    if a.space != b.space:
        raise InputError("algebra elements live on different character spaces")


def apply_character(a: AlgebraElement, i: int) -> complex:
    """Evaluate the ``i``-th character at ``a``."""
    return complex(a.values[a.space.check_index(i)])


def algebra_mul(a: AlgebraElement, b: AlgebraElement) -> AlgebraElement:
    _same_space(a, b)
    return AlgebraElement(a.values * b.values, a.space)


def algebra_add(a: AlgebraElement, b: AlgebraElement) -> AlgebraElement:
    _same_space(a, b)
    return AlgebraElement(a.values + b.values, a.space)


def algebra_star(a: AlgebraElement) -> AlgebraElement:
    return AlgebraElement(np.conj(a.values), a.space)


def is_positive(a: AlgebraElement, tol: float = DEFAULT_POSITIVITY_TOL) -> bool:
    """True iff every value is real and nonnegative up to ``tol``."""
    if tol < 0:
        raise InputError("tolerance must be nonnegative")
    v = a.values
    return bool(np.all(np.abs(v.imag) <= tol) and np.all(v.real >= -tol))


def sqrt_positive(a: AlgebraElement, tol: float = DEFAULT_POSITIVITY_TOL) -> AlgebraElement:
    """Pointwise square root of a positive element.

    Imaginary dust and tiny negative real parts (within ``tol``) are clamped
    to zero before taking the root.
    """
    if not is_positive(a, tol):
        raise DomainError(f"element is not positive within tol={tol}: {a.values.tolist()}")
    return AlgebraElement(np.sqrt(np.clip(a.values.real, 0.0, None)), a.space)


def as_element(values: Sequence[complex] | np.ndarray, space: CharacterSpace) -> AlgebraElement:
    return AlgebraElement(np.asarray(values, dtype=complex), space)
