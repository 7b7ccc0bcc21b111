"""Module norm, numerical radius and numerical range.

For a block-diagonal operator the defining suprema over characters and
normalized module elements collapse character by character:

* ``phi_i(|Tx|) = ||T_i x_i||`` and ``phi_i(|x|) = ||x_i||``, so the module
  norm is ``max_i ||T_i||``;
* the numerical radius is ``max_i w(T_i)`` with ``w`` the classical
  numerical radius of a matrix;
* the numerical range is the union of the classical ranges ``W(T_i)``.

The classical radius is computed with a rotation sweep: ``w(B)`` is the
maximum over ``theta`` of the top eigenvalue of
``H(theta) = (e^{i theta} B + e^{-i theta} B^*) / 2``. Every value the sweep
produces is attained by an explicit unit vector, so results are certified
lower bounds. :func:`monte_carlo_sup` samples the defining suprema directly
and is kept independent of the sweep so the two can be cross-checked.

Range values are the quadratic forms ``phi_i(<x, Tx>) = x_i^* T_i x_i``.
With the inner product conjugate-linear in the first slot this is the
complex conjugate of ``phi_i(<Tx, x>)``; it is the orientation in which
``W(aT + bI) = a W(T) + b`` holds for complex ``a, b``. Moduli, and hence
the numerical radius, do not depend on the orientation.
"""

from __future__ import annotations

import hashlib
from collections import OrderedDict
from dataclasses import dataclass, field

import numpy as np

from .exceptions import InputError
from .gelfand import AlgebraElement
from .module_space import ModuleVector, inner_product
from .operators import ModuleOperator, apply

DEFAULT_THETA_STEPS = 720
DEFAULT_REFINE_TOL = 1e-12
DEFAULT_INTERIOR_SAMPLES = 2000
MAX_REFINE_CANDIDATES = 6
QUANTITIES = ("norm", "bilinear", "radius")

_INV_PHI = (np.sqrt(5.0) - 1.0) / 2.0


@dataclass(frozen=True)
class SupWitness:
    """A supremum value together with the module element(s) attaining it.

    ``vector`` satisfies ``phi_character(|vector|) = 1``. ``secondary`` is the
    second argument of the bilinear form, when relevant, and ``theta`` the
    rotation angle at which a numerical-radius witness was found.
    """

    value: float
    character: int
    vector: ModuleVector
    quantity: str
    secondary: ModuleVector | None = None
    theta: float | None = None

    def to_dict(self) -> dict:
        d = {
            "quantity": self.quantity,
            "value": self.value,
            "character": self.character,
            "vector": [[[z.real, z.imag] for z in f.tolist()] for f in self.vector.fibers],
        }
        if self.secondary is not None:
            d["secondary"] = [
                [[z.real, z.imag] for z in f.tolist()] for f in self.secondary.fibers
            ]
        if self.theta is not None:
            d["theta"] = self.theta
        return d


def quadratic_form(T: ModuleOperator, x: ModuleVector) -> AlgebraElement:
    """``<x, Tx>``; component i is ``x_i^* T_i x_i``."""
    return inner_product(x, apply(T, x))


def evaluate_witness(T: ModuleOperator, w: SupWitness) -> float:
    """Re-evaluate the defining expression of ``w.quantity`` at the witness."""
    i = w.character
    x = w.vector.fibers[i]
    Tx = T.blocks[i] @ x
    if w.quantity == "norm":
        return float(np.linalg.norm(Tx))
    if w.quantity == "bilinear":
        return float(abs(np.vdot(Tx, w.secondary.fibers[i])))
    if w.quantity == "radius":
        return float(abs(np.vdot(x, Tx)))
    raise InputError(f"unknown quantity {w.quantity!r}")


# -- per-block classical quantities -----------------------------------------


def block_operator_norm(B) -> float:
    """Largest singular value of a square matrix."""
    B = np.atleast_2d(np.asarray(B, dtype=complex))
    return float(np.linalg.norm(B, 2))


def _rotated_top(B: np.ndarray, thetas: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Top eigenpairs of ``H(theta)`` for a batch of angles."""
    d = B.shape[0]
    e = np.exp(1j * thetas)
    if d == 1:
        return (e * B[0, 0]).real, np.ones((thetas.size, 1), dtype=complex)
    if d == 2:
        return _top_2x2(
            (e * B[0, 0]).real, (e * B[1, 1]).real, (e * B[0, 1] + np.conj(e * B[1, 0])) / 2
        )
    e = e[:, None, None]
    w, v = np.linalg.eigh((e * B + np.conj(e) * B.conj().T) / 2)
    return w[:, -1], v[:, :, -1]


def _rotated_top_value(B: np.ndarray, thetas: np.ndarray) -> np.ndarray:
    """Top eigenvalue of ``H(theta)`` only."""
    if B.shape[0] <= 2:
        return _rotated_top(B, thetas)[0]
    e = np.exp(1j * thetas)[:, None, None]
    return np.linalg.eigvalsh((e * B + np.conj(e) * B.conj().T) / 2)[:, -1]


def _grid_top(B: np.ndarray, steps: int, vectors: bool = True):
    """Top eigenpairs of ``H(theta)`` on the uniform grid ``2 pi k / steps``.

    ``H(theta + pi) = -H(theta)``, so for even ``steps`` one eigensolve on the
    first half of the grid also yields the second half from the bottom
    eigenpairs.
    """
    grid = 2 * np.pi * np.arange(steps) / steps
    if steps % 2 or B.shape[0] <= 2:
        if vectors:
            return _rotated_top(B, grid)
        return _rotated_top_value(B, grid)
    half = grid[: steps // 2]
    e = np.exp(1j * half)[:, None, None]
    H = (e * B + np.conj(e) * B.conj().T) / 2
    if not vectors:
        w = np.linalg.eigvalsh(H)
        return np.concatenate([w[:, -1], -w[:, 0]])
    w, v = np.linalg.eigh(H)
    return (np.concatenate([w[:, -1], -w[:, 0]]),
            np.concatenate([v[:, :, -1], v[:, :, 0]]))


def _top_2x2(a: np.ndarray, c: np.ndarray, b: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Top eigenpair of ``[[a, b], [conj(b), c]]`` for arrays of real ``a, c``."""
    x = (a - c) / 2
    bb = np.abs(b) ** 2
    r = np.hypot(x, np.abs(b))
    lam = (a + c) / 2 + r
    # lam - a = r - x, rewritten to avoid cancellation when x > 0
    gap = np.where(x > 0, bb / np.where(r + x > 0, r + x, 1.0), r - x)
    v = np.stack([b, gap.astype(complex)], axis=1)
    nv = np.linalg.norm(v, axis=1)
    # b == 0 and a >= c: the top eigenvector is e1
    degenerate = nv == 0
    v[degenerate] = [1.0, 0.0]
    nv[degenerate] = 1.0
    return lam, v / nv[:, None]


def _golden_refine(B: np.ndarray, lo: np.ndarray, hi: np.ndarray, tol: float) -> np.ndarray:
    """Golden-section maximization of the top rotated eigenvalue on each ``[lo, hi]``.

    All brackets are advanced together so each step costs one batched
    eigensolve. Returns the best abscissa found in every bracket.
    """
    a, b = lo.astype(float), hi.astype(float)
    c = b - _INV_PHI * (b - a)
    d = a + _INV_PHI * (b - a)
    fc = _rotated_top_value(B, c)
    fd = _rotated_top_value(B, d)
    while np.max(b - a) >= tol:
        left = fc > fd
        # left: keep [a, d], old c becomes new d; else keep [c, b], old d becomes new c
        b = np.where(left, d, b)
        a = np.where(left, a, c)
        new_c = np.where(left, b - _INV_PHI * (b - a), d)
        new_d = np.where(left, c, a + _INV_PHI * (b - a))
        probe = np.where(left, new_c, new_d)
        fp = _rotated_top_value(B, probe)
        fc, fd = np.where(left, fp, fd), np.where(left, fc, fp)
        c, d = new_c, new_d
    return np.where(fc >= fd, c, d)


@dataclass(frozen=True)
class _RadiusSearch:
    value: float
    theta: float
    vector: np.ndarray


_RADIUS_CACHE: OrderedDict = OrderedDict()
_RADIUS_CACHE_SIZE = 512


def _radius_search(B, theta_steps: int, refine_tol: float) -> _RadiusSearch:
    if theta_steps < 8:
        raise InputError(f"theta_steps must be >= 8, got {theta_steps}")
    B = np.ascontiguousarray(np.atleast_2d(np.asarray(B, dtype=complex)))
    # checks evaluate the radius of one operator many times; results are pure
    key = (hashlib.sha1(B.tobytes()).hexdigest(), B.shape, theta_steps, refine_tol)
    hit = _RADIUS_CACHE.get(key)
    if hit is None:
        hit = _radius_search_uncached(B, theta_steps, refine_tol)
        _RADIUS_CACHE[key] = hit
        if len(_RADIUS_CACHE) > _RADIUS_CACHE_SIZE:
            _RADIUS_CACHE.popitem(last=False)
    else:
        _RADIUS_CACHE.move_to_end(key)
    return hit


def _radius_search_uncached(B: np.ndarray, theta_steps: int, refine_tol: float) -> _RadiusSearch:
    d = B.shape[0]
    if not np.any(B):
        e0 = np.zeros(d, dtype=complex)
        e0[0] = 1.0
        return _RadiusSearch(0.0, 0.0, e0)

    step = 2 * np.pi / theta_steps
    grid = step * np.arange(theta_steps)
    fgrid = _grid_top(B, theta_steps, vectors=False)
    best = float(fgrid.max())

    # The true maximizer is within step/2 of a grid point, where the sweep
    # is at least w*cos(step/2); refine every local grid maximum that could
    # still hide it.
    window = 2.0 * abs(best) * (1.0 - np.cos(step)) + 1e-14 * (1.0 + abs(best))
    is_peak = (fgrid >= np.roll(fgrid, 1)) & (fgrid >= np.roll(fgrid, -1))
    cand = np.flatnonzero(is_peak & (fgrid >= best - window))
    cand = cand[np.argsort(-fgrid[cand], kind="stable")][:MAX_REFINE_CANDIDATES]

    thetas = [grid[int(np.argmax(fgrid))]]
    if refine_tol > 0 and cand.size:
        refined = _golden_refine(B, grid[cand] - step, grid[cand] + step, refine_tol)
        thetas.extend(np.mod(refined, 2 * np.pi).tolist())
    thetas = np.asarray(thetas)
    fvals, vecs = _rotated_top(B, thetas)
    k = int(np.argmax(fvals))
    v = vecs[k].copy()
    v.setflags(write=False)
    z = np.vdot(v, B @ v)
    # |v^* B v| >= Re(e^{i theta} v^* B v) = top eigenvalue
    value = max(float(fvals[k]), float(abs(z)))
    return _RadiusSearch(value, float(thetas[k]), v)


def block_numerical_radius(
    B, theta_steps: int = DEFAULT_THETA_STEPS, refine_tol: float = DEFAULT_REFINE_TOL
) -> float:
    """Classical numerical radius of a square matrix (certified lower bound)."""
    return _radius_search(B, theta_steps, refine_tol).value


# -- module quantities --------------------------------------------------------


def module_norm(T: ModuleOperator) -> SupWitness:
    """``sup phi(|Tx|)`` over characters and ``x`` with ``phi(|x|) = 1``."""
    vals, vecs = [], []
    for B in T.blocks:
        _, s, vh = np.linalg.svd(B)
        vals.append(float(s[0]))
        vecs.append(vh[0].conj())
    i = int(np.argmax(vals))
    return SupWitness(vals[i], i, ModuleVector.embed(T.shape, i, vecs[i]), "norm")


def module_norm_bilinear(T: ModuleOperator) -> SupWitness:
    """``sup |phi(<Tx, y>)|`` over ``phi(|x|) = phi(|y|) = 1``.

    The pair is built per character from the top right singular vector
    ``x_i`` and ``y_i = T_i x_i / ||T_i x_i||``; the value is obtained by
    evaluating the bilinear form at that pair, not copied from the SVD.
    When ``T_i x_i = 0`` the candidate reports 0 with ``y_i = x_i``.
    """
    vals, pairs = [], []
    for B in T.blocks:
        _, _, vh = np.linalg.svd(B)
        x = vh[0].conj()
        Tx = B @ x
        r = np.linalg.norm(Tx)
        y = Tx / r if r > 0 else x
        vals.append(float(abs(np.vdot(Tx, y))) if r > 0 else 0.0)
        pairs.append((x, y))
    i = int(np.argmax(vals))
    x, y = pairs[i]
    return SupWitness(
        vals[i],
        i,
        ModuleVector.embed(T.shape, i, x),
        "bilinear",
        secondary=ModuleVector.embed(T.shape, i, y),
    )


def module_numerical_radius(
    T: ModuleOperator,
    theta_steps: int = DEFAULT_THETA_STEPS,
    refine_tol: float = DEFAULT_REFINE_TOL,
) -> SupWitness:
    """``sup |phi(<Tx, x>)|`` over characters and ``x`` with ``phi(|x|) = 1``."""
    searches = [_radius_search(B, theta_steps, refine_tol) for B in T.blocks]
    i = int(np.argmax([s.value for s in searches]))
    s = searches[i]
    return SupWitness(
        s.value, i, ModuleVector.embed(T.shape, i, s.vector), "radius", theta=s.theta
    )


# -- numerical range ----------------------------------------------------------


@dataclass(frozen=True, eq=False)
class RangeSample:
    """Witness-backed sample of the numerical range.

    Points are grouped by character. ``theta`` is NaN for interior points.
    ``fibers[i]`` holds the unit witness vectors of character ``i`` row by
    row, in the same order as that character's points.
    """

    character: np.ndarray
    theta: np.ndarray
    value: np.ndarray
    fibers: tuple[np.ndarray, ...]
    theta_steps: int
    interior_samples: int
    seed: int | None
    meta: dict = field(default_factory=dict)

    def __len__(self):
        return int(self.value.shape[0])

    def points(self, i: int | None = None, boundary_only: bool = False) -> np.ndarray:
        mask = np.ones(len(self), dtype=bool)
        if i is not None:
            mask &= self.character == i
        if boundary_only:
            mask &= ~np.isnan(self.theta)
        return self.value[mask]

    def witness(self, k: int, shape) -> ModuleVector:
        """The module element behind point ``k`` (zero off its character)."""
        i = int(self.character[k])
        offset = int(np.flatnonzero(self.character == i)[0])
        return ModuleVector.embed(shape, i, self.fibers[i][k - offset])

    def evaluate(self, T: ModuleOperator) -> np.ndarray:
        """Quadratic forms of ``T`` at every stored witness, in point order."""
        out = []
        for i, W in enumerate(self.fibers):
            out.append(np.einsum("kd,de,ke->k", W.conj(), T.blocks[i], W))
        return np.concatenate(out) if out else np.zeros(0, dtype=complex)


def sample_numerical_range(
    T: ModuleOperator,
    theta_steps: int = DEFAULT_THETA_STEPS,
    interior_samples: int = DEFAULT_INTERIOR_SAMPLES,
    seed: int | None = 0,
) -> RangeSample:
    """Trace the boundary of every ``W(T_i)`` and add random interior points.

    For each character the boundary part evaluates ``v^* T_i v`` at the top
    eigenvector ``v`` of the rotated Hermitian part for every grid angle;
    ``interior_samples`` further points come from random unit vectors.
    """
    if theta_steps < 8:
        raise InputError(f"theta_steps must be >= 8, got {theta_steps}")
    if interior_samples < 0:
        raise InputError("interior_samples must be nonnegative")
    rng = np.random.default_rng(seed)
    grid = 2 * np.pi * np.arange(theta_steps) / theta_steps
    chars, thetas, fibers = [], [], []
    for i, B in enumerate(T.blocks):
        d = B.shape[0]
        _, vb = _grid_top(B, theta_steps)
        Z = (rng.standard_normal((interior_samples, d))
             + 1j * rng.standard_normal((interior_samples, d)))
        Z /= np.linalg.norm(Z, axis=1, keepdims=True)
        W = np.vstack([vb, Z])
        W.setflags(write=False)
        fibers.append(W)
        chars.append(np.full(W.shape[0], i))
        thetas.append(np.concatenate([grid, np.full(interior_samples, np.nan)]))
    fibers = tuple(fibers)
    values = np.concatenate(
        [np.einsum("kd,de,ke->k", W.conj(), B, W) for W, B in zip(fibers, T.blocks)]
    )
    return RangeSample(
        character=np.concatenate(chars),
        theta=np.concatenate(thetas),
        value=values,
        fibers=fibers,
        theta_steps=theta_steps,
        interior_samples=interior_samples,
        seed=seed,
    )


# -- sampling oracle ------------------------------------------------------------


def monte_carlo_sup(
    T: ModuleOperator, quantity: str, trials: int = 10_000, seed: int | None = 0
) -> float:
    """Lower bound on a defining supremum by direct sampling.

    Every trial draws a random module vector ``x`` (and, for ``bilinear``, a
    second vector ``y``), normalizes it at each character with a nonzero
    fiber and evaluates ``phi_i(|Tx|)``, ``|phi_i(<Tx, y>)|`` or
    ``|phi_i(<Tx, x>)|``. Normalizing at ``i`` divides fiber ``i`` by its
    length, which is done here in closed form for all trials at once.

    For ``bilinear`` half the trials use an independent random ``y``; the
    other half perturb the direction of ``Tx`` by a random amount, the
    alignment the supremum favours. Every evaluated pair is a genuine
    member of the constraint set, so the result stays a lower bound.
    """
    if quantity not in QUANTITIES:
        raise InputError(f"unknown quantity {quantity!r}; choose from {QUANTITIES}")
    if trials < 1:
        raise InputError("trials must be >= 1")
    rng = np.random.default_rng(seed)
    mix = rng.uniform(0.0, 1.0, trials) if quantity == "bilinear" else None
    best = 0.0
    for B in T.blocks:
        d = B.shape[0]
        X = rng.standard_normal((trials, d)) + 1j * rng.standard_normal((trials, d))
        nx = np.linalg.norm(X, axis=1)
        ok = nx > 0
        TX = X @ B.T
        if quantity == "norm":
            vals = np.linalg.norm(TX, axis=1)[ok] / nx[ok]
        elif quantity == "radius":
            vals = np.abs(np.einsum("kd,kd->k", X.conj(), TX))[ok] / nx[ok] ** 2
        else:
            G = rng.standard_normal((trials, d)) + 1j * rng.standard_normal((trials, d))
            G /= np.linalg.norm(G, axis=1, keepdims=True)
            ntx = np.linalg.norm(TX, axis=1)
            guided = TX + (mix * ntx)[:, None] * G
            Y = np.where((np.arange(trials) % 2 == 0)[:, None], G, guided)
            ny = np.linalg.norm(Y, axis=1)
            ok &= ny > 0
            vals = np.abs(np.einsum("kd,kd->k", TX.conj(), Y))[ok] / (nx[ok] * ny[ok])
        if vals.size:
            best = max(best, float(vals.max()))
    return best
