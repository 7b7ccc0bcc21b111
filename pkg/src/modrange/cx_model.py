"""Continuous functions on a compact space, as a module over themselves.

X is replaced by finitely many sample points. Each point contributes one
evaluation character with a one-dimensional fiber, so a multiplication
operator ``f -> g f`` becomes the block-diagonal family of 1x1 matrices
``[g(x_i)]``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .exceptions import InputError
from .module_space import ModuleShape
from .norms import DEFAULT_THETA_STEPS, module_norm, module_numerical_radius
from .operators import ModuleOperator
from .verification import DEFAULT_TOL, CheckResult

SPACE_KINDS = ("interval", "circle", "custom")
NAMED_SYMBOLS = ("identity", "identity-coordinate", "exp-i-theta", "zero", "one")

Symbol = Callable[[np.ndarray], np.ndarray] | Sequence | str


@dataclass(frozen=True, eq=False)
class DiscretizedSpace:
    """Sample points standing in for X.

    ``interval`` uses ``m`` uniform points on ``[0, 1]`` (a single point sits
    at 0), ``circle`` the angles ``2 pi k / m``, ``custom`` whatever points
    are supplied.
    """

    kind: str
    points: np.ndarray

    def __post_init__(self):
        if self.kind not in SPACE_KINDS:
            raise InputError(f"unknown space kind {self.kind!r}; choose from {SPACE_KINDS}")
        pts = np.array(self.points, dtype=float).reshape(-1)
        if pts.size < 1:
            raise InputError("a discretized space needs at least one point")
        if not np.all(np.isfinite(pts)):
            raise InputError("sample points must be finite")
        if self.kind == "interval" and np.any(np.diff(pts) <= 0):
            raise InputError("interval points must be strictly increasing")
        if np.unique(pts).size != pts.size:
            raise InputError("sample points must be distinct")
        pts.setflags(write=False)
        object.__setattr__(self, "points", pts)

    @classmethod
    def interval(cls, m: int) -> "DiscretizedSpace":
        m = _check_m(m)
        return cls("interval", np.linspace(0.0, 1.0, m) if m > 1 else np.zeros(1))

    @classmethod
    def circle(cls, m: int) -> "DiscretizedSpace":
        m = _check_m(m)
        return cls("circle", 2 * np.pi * np.arange(m) / m)

    @classmethod
    def custom(cls, points: Sequence[float]) -> "DiscretizedSpace":
        return cls("custom", np.asarray(points, dtype=float))

    @classmethod
    def build(cls, kind: str, m: int | None = None, points=None) -> "DiscretizedSpace":
        if points is not None:
            if kind == "custom":
                return cls.custom(points)
            return cls(kind, np.asarray(points, dtype=float))
        if m is None:
            raise InputError(f"kind {kind!r} needs either m or explicit points")
        if kind == "interval":
            return cls.interval(m)
        if kind == "circle":
            return cls.circle(m)
        raise InputError("kind 'custom' needs explicit points")

    @property
    def m(self) -> int:
        return int(self.points.size)

    def shape(self) -> ModuleShape:
        labels = [f"x{k}" for k in range(self.m)]
        return ModuleShape.from_dims([1] * self.m, labels)


def _check_m(m) -> int:
    if int(m) != m or m < 1:
        raise InputError(f"m must be a positive integer, got {m!r}")
    return int(m)


@dataclass(frozen=True, eq=False)
class MultiplicationOperator:
    space: DiscretizedSpace
    symbol: np.ndarray
    operator: ModuleOperator

    @property
    def is_real(self) -> bool:
        return self.real_within(DEFAULT_TOL)

    def real_within(self, tol: float) -> bool:
        return bool(np.max(np.abs(self.symbol.imag)) <= tol)


def _polynomial(coeffs: Sequence) -> Callable[[np.ndarray], np.ndarray]:
    c = [complex(*z) if isinstance(z, (list, tuple)) else complex(z) for z in coeffs]
    if not c:
        raise InputError("polynomial symbol needs at least one coefficient")
    # np.polyval wants the leading coefficient first
    return lambda x: np.polyval(c[::-1], x.astype(complex))


def resolve_symbol(g: Symbol) -> Callable[[np.ndarray], np.ndarray] | np.ndarray:
    """Turn a symbol description into a callable or a value table.

    Accepted forms: a callable, a named builtin (``identity`` or
    ``identity-coordinate`` for g(x) = x, ``exp-i-theta``, ``zero``, ``one``),
    ``"poly:c0,c1,..."`` or ``{"poly": [c0, c1, ...]}`` with coefficients in
    increasing degree, ``{"values": [[re, im], ...]}``, or a plain sequence of
    values (numbers or ``[re, im]`` pairs).
    """
    if callable(g):
        return g
    if isinstance(g, str):
        if g in ("identity", "identity-coordinate"):
            return lambda x: x.astype(complex)
        if g == "exp-i-theta":
            return lambda x: np.exp(1j * x)
        if g == "zero":
            return lambda x: np.zeros(x.shape, dtype=complex)
        if g == "one":
            return lambda x: np.ones(x.shape, dtype=complex)
        if g.startswith("poly:"):
            try:
                coeffs = [complex(s.replace(" ", "")) for s in g[5:].split(",")]
            except ValueError as exc:
                raise InputError(f"bad polynomial coefficients in {g!r}") from exc
            return _polynomial(coeffs)
        raise InputError(
            f"unknown symbol {g!r}; choose from {NAMED_SYMBOLS}, 'poly:c0,c1,...' or a value table"
        )
    if isinstance(g, dict):
        if "poly" in g:
            return _polynomial(g["poly"])
        if "values" in g:
            return _value_table(g["values"])
        if "name" in g:
            return resolve_symbol(g["name"])
        raise InputError(f"symbol object needs 'name', 'poly' or 'values', got keys {sorted(g)}")
    return _value_table(g)


def _value_table(values) -> np.ndarray:
    out = []
    for k, z in enumerate(values):
        if isinstance(z, (list, tuple)):
            if len(z) != 2:
                raise InputError(f"symbol value {k} must be a number or an [re, im] pair")
            out.append(complex(float(z[0]), float(z[1])))
        else:
            out.append(complex(z))
    return np.array(out, dtype=complex)


def build_multiplication(space: DiscretizedSpace, g: Symbol) -> MultiplicationOperator:
    """Multiplication by ``g`` sampled at every point of ``space``."""
    g = resolve_symbol(g)
    if callable(g):
        vals = np.asarray(g(space.points), dtype=complex).reshape(-1)
        if vals.size == 1 and space.m > 1:
            vals = np.full(space.m, vals[0])
    else:
        vals = g
    if vals.size != space.m:
        raise InputError(f"symbol has {vals.size} samples, space has {space.m} points")
    if not np.all(np.isfinite(vals)):
        raise InputError("symbol is not finite at every sample point")
    vals = vals.copy()
    vals.setflags(write=False)
    op = ModuleOperator(space.shape(), tuple(np.array([[v]]) for v in vals))
    return MultiplicationOperator(space, vals, op)


def check_cx_identities(
    M: MultiplicationOperator, tol: float = DEFAULT_TOL, theta_steps: int = DEFAULT_THETA_STEPS
) -> list[CheckResult]:
    """Norm equals the sup of ``|g|``; for real ``g`` the radius equals the norm."""
    norm = module_norm(M.operator).value
    sup = float(np.max(np.abs(M.symbol)))
    scale = 1 + sup
    diff = abs(norm - sup)
    res = [CheckResult("cx_norm_sup", diff <= tol * scale, norm, sup, -diff, tol * scale,
                       None, {"m": M.space.m, "kind": M.space.kind})]
    real = M.real_within(tol)
    if real:
        omega = module_numerical_radius(M.operator, theta_steps).value
        diff = abs(omega - norm)
        res.append(CheckResult("cx_radius_equals_norm", diff <= tol * scale, omega, norm, -diff,
                               tol * scale, None, {"m": M.space.m}))
    return res


def dyadic_meshes(kind: str, levels: int, start: int = 1) -> list[DiscretizedSpace]:
    """Nested meshes: ``2^k + 1`` interval points or ``2^k`` circle points."""
    if kind == "interval":
        return [DiscretizedSpace.interval(2**k + 1) for k in range(start, start + levels)]
    if kind == "circle":
        return [DiscretizedSpace.circle(2**k) for k in range(start, start + levels)]
    raise InputError(f"dyadic refinement is defined for interval and circle, not {kind!r}")


def refinement_norms(kind: str, g: Symbol, levels: int = 8, start: int = 1) -> list[float]:
    return [module_norm(build_multiplication(s, g).operator).value
            for s in dyadic_meshes(kind, levels, start)]


def check_refinement(kind: str, g: Symbol, levels: int = 8, tol: float = DEFAULT_TOL) -> CheckResult:
    """The norm along nested dyadic meshes never decreases."""
    norms = refinement_norms(kind, g, levels)
    steps = np.diff(norms)
    worst = float(steps.min()) if steps.size else 0.0
    return CheckResult("cx_refinement_monotone", worst >= -tol, norms[0], norms[-1], worst, tol,
                       None, {"kind": kind, "norms": norms})
