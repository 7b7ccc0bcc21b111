"""Adjointable operators on E as block-diagonal families.

An adjointable map commutes with the action of the algebra, in particular
with multiplication by the indicator of each character. It therefore maps
every fiber into itself, so L(E) is exactly the set of families of square
matrices ``{T_i}`` with ``T_i`` acting on fiber ``i``.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .exceptions import InputError
from .module_space import ModuleShape, ModuleVector

DEFAULT_PREDICATE_TOL = 1e-10

OPERATOR_CLASSES = ("generic", "self-adjoint", "unitary", "nilpotent", "normal")


@dataclass(frozen=True, eq=False)
class ModuleOperator:
    shape: ModuleShape
    blocks: tuple[np.ndarray, ...]

    def __post_init__(self):
        blocks = tuple(np.array(b, dtype=complex) for b in self.blocks)
        if len(blocks) != self.shape.n:
            raise InputError(f"expected {self.shape.n} blocks, got {len(blocks)}")
        for i, (b, d) in enumerate(zip(blocks, self.shape.dims)):
            if b.shape != (d, d):
                raise InputError(f"block {i} has shape {b.shape}, expected ({d}, {d})")
            b.setflags(write=False)
        object.__setattr__(self, "blocks", blocks)

    @classmethod
    def from_blocks(cls, blocks: Sequence, labels: Sequence[str] = ()) -> "ModuleOperator":
        blocks = [np.atleast_2d(np.asarray(b, dtype=complex)) for b in blocks]
        shape = ModuleShape.from_dims([b.shape[0] for b in blocks], labels)
        return cls(shape, tuple(blocks))

    @classmethod
    def identity(cls, shape: ModuleShape) -> "ModuleOperator":
        return cls(shape, tuple(np.eye(d) for d in shape.dims))

    @classmethod
    def zero(cls, shape: ModuleShape) -> "ModuleOperator":
        return cls(shape, tuple(np.zeros((d, d)) for d in shape.dims))

    def _check(self, other) -> None:
        if not isinstance(other, ModuleOperator) or other.shape != self.shape:
            raise InputError("operators act on modules of different shapes")

    def __add__(self, other):
        return op_add(self, other)

    def __sub__(self, other):
        return op_add(self, op_scale(-1, other))

    def __matmul__(self, other):
        if isinstance(other, ModuleVector):
            return apply(self, other)
        return op_compose(self, other)

    def __mul__(self, alpha):
        return op_scale(alpha, self)

    __rmul__ = __mul__

    @property
    def H(self) -> "ModuleOperator":
        return adjoint(self)

    def __eq__(self, other):
        if not isinstance(other, ModuleOperator):
            return NotImplemented
        return self.shape == other.shape and all(
            np.array_equal(a, b) for a, b in zip(self.blocks, other.blocks)
        )

    def __repr__(self):
        return f"ModuleOperator({[b.tolist() for b in self.blocks]!r})"

    def max_entry(self) -> float:
        return max(float(np.max(np.abs(b))) for b in self.blocks)

    def digest(self) -> str:
        """Short content hash used to identify an operator in reports."""
        h = hashlib.sha256()
        h.update(repr(self.shape.dims).encode())
        for b in self.blocks:
            h.update(np.ascontiguousarray(b, dtype=np.complex128).tobytes())
        return h.hexdigest()[:16]


def apply(T: ModuleOperator, x: ModuleVector) -> ModuleVector:
    if x.shape != T.shape:
        raise InputError("operator and vector have different shapes")
    return ModuleVector(T.shape, tuple(b @ f for b, f in zip(T.blocks, x.fibers)))


def adjoint(T: ModuleOperator) -> ModuleOperator:
    return ModuleOperator(T.shape, tuple(b.conj().T for b in T.blocks))


def op_add(T: ModuleOperator, S: ModuleOperator) -> ModuleOperator:
    T._check(S)
    return ModuleOperator(T.shape, tuple(a + b for a, b in zip(T.blocks, S.blocks)))


def op_scale(alpha: complex, T: ModuleOperator) -> ModuleOperator:
    alpha = complex(alpha)
    return ModuleOperator(T.shape, tuple(alpha * b for b in T.blocks))


def op_compose(T: ModuleOperator, S: ModuleOperator) -> ModuleOperator:
    """``T S`` (apply ``S`` first)."""
    T._check(S)
    return ModuleOperator(T.shape, tuple(a @ b for a, b in zip(T.blocks, S.blocks)))


def _max_dev(blocks_a, blocks_b) -> float:
    return max(float(np.max(np.abs(a - b))) for a, b in zip(blocks_a, blocks_b))


def is_self_adjoint(T: ModuleOperator, tol: float = DEFAULT_PREDICATE_TOL) -> bool:
    if tol < 0:
        raise InputError("tolerance must be nonnegative")
    return _max_dev(T.blocks, adjoint(T).blocks) <= tol


def is_unitary(T: ModuleOperator, tol: float = DEFAULT_PREDICATE_TOL) -> bool:
    if tol < 0:
        raise InputError("tolerance must be nonnegative")
    eye = [np.eye(d) for d in T.shape.dims]
    left = [b.conj().T @ b for b in T.blocks]
    right = [b @ b.conj().T for b in T.blocks]
    return max(_max_dev(left, eye), _max_dev(right, eye)) <= tol


def cartesian_parts(T: ModuleOperator) -> tuple[ModuleOperator, ModuleOperator]:
    """Self-adjoint ``M, N`` with ``T = M + iN``."""
    Ts = adjoint(T)
    M = ModuleOperator(T.shape, tuple((a + b) / 2 for a, b in zip(T.blocks, Ts.blocks)))
    N = ModuleOperator(T.shape, tuple((a - b) / 2j for a, b in zip(T.blocks, Ts.blocks)))
    return M, N


# -- random instances -------------------------------------------------------


def _ginibre(rng: np.random.Generator, d: int) -> np.ndarray:
    return (rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))) / np.sqrt(2.0)


def random_unitary_block(rng: np.random.Generator, d: int) -> np.ndarray:
    """Haar-distributed unitary via QR with the usual phase correction."""
    q, r = np.linalg.qr(_ginibre(rng, d))
    ph = np.diag(r) / np.abs(np.diag(r))
    return q * ph


def _random_block(rng: np.random.Generator, d: int, kind: str) -> np.ndarray:
    if kind == "generic":
        return _ginibre(rng, d)
    if kind == "self-adjoint":
        g = _ginibre(rng, d)
        return (g + g.conj().T) / 2
    if kind == "unitary":
        return random_unitary_block(rng, d)
    if kind == "nilpotent":
        u = random_unitary_block(rng, d)
        n = np.triu(_ginibre(rng, d), k=1)
        return u @ n @ u.conj().T
    if kind == "normal":
        u = random_unitary_block(rng, d)
        lam = (rng.standard_normal(d) + 1j * rng.standard_normal(d)) / np.sqrt(2.0)
        return (u * lam) @ u.conj().T
    raise InputError(f"unknown operator class {kind!r}; choose from {OPERATOR_CLASSES}")


def random_operator(
    shape: ModuleShape, kind: str = "generic", seed: int | np.random.Generator | None = None
) -> ModuleOperator:
    """Random block-diagonal operator of the given class, deterministic in ``seed``."""
    rng = np.random.default_rng(seed)
    return ModuleOperator(shape, tuple(_random_block(rng, d, kind) for d in shape.dims))


def random_unitary(shape: ModuleShape, seed: int | np.random.Generator | None = None) -> ModuleOperator:
    return random_operator(shape, "unitary", seed)
