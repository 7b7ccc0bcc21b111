"""Executable checks of the norm, radius and range theorems, plus a fuzz driver.

Every check returns :class:`CheckResult` objects carrying the two compared
quantities, the signed margin (``rhs - lhs`` for an inequality
``lhs <= rhs``) and the tolerance that was folded in. A failing check is a
bug certificate: it keeps enough witness data to replay the instance.

Tolerance ladder: ``1e-12`` relative for algebraic identities, the caller's
``tol`` (default ``1e-9``) for inequalities between computed values, and
``set_tol`` (default ``1e-6``) plus a grid-resolution term for comparisons
of sampled sets.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, asdict
from typing import Sequence

import numpy as np

from .exceptions import InputError, PreconditionError
from .module_space import ModuleShape, ModuleVector, inner_product, random_vector
from .norms import (
    DEFAULT_THETA_STEPS,
    SupWitness,
    _rotated_top,
    evaluate_witness,
    module_norm,
    module_norm_bilinear,
    module_numerical_radius,
    monte_carlo_sup,
    sample_numerical_range,
)
from .operators import (
    OPERATOR_CLASSES,
    ModuleOperator,
    adjoint,
    apply,
    cartesian_parts,
    is_self_adjoint,
    is_unitary,
    op_add,
    op_compose,
    op_scale,
    random_operator,
    random_unitary,
)

DEFAULT_TOL = 1e-9
DEFAULT_SET_TOL = 1e-6
IDENTITY_TOL = 1e-12


@dataclass
class CheckResult:
    name: str
    passed: bool
    lhs: float
    rhs: float
    margin: float
    tolerance: float
    witness: dict | None = None
    detail: dict = field(default_factory=dict)
    instance: int | None = None

    def to_dict(self, with_witness: bool = True) -> dict:
        d = asdict(self)
        if not with_witness:
            d["witness"] = None
        if self.instance is None:
            d.pop("instance")
        return d


@dataclass
class VerificationReport:
    descriptor: dict
    results: list[CheckResult]

    @property
    def overall(self) -> bool:
        return all(r.passed for r in self.results)

    def failures(self) -> list[CheckResult]:
        return [r for r in self.results if not r.passed]

    def by_name(self, name: str) -> list[CheckResult]:
        return [r for r in self.results if r.name == name]

    def to_dict(self, witnesses: str = "all") -> dict:
        """``witnesses`` is ``"all"``, ``"failures"`` or ``"none"``."""
        out = []
        for r in self.results:
            keep = witnesses == "all" or (witnesses == "failures" and not r.passed)
            out.append(r.to_dict(with_witness=keep))
        return {
            "descriptor": self.descriptor,
            "overall": self.overall,
            "counts": {
                "checks": len(self.results),
                "failed": len(self.failures()),
            },
            "results": out,
        }


def _leq(name, lhs, rhs, tol, scale=1.0, witness=None, **detail) -> CheckResult:
    allowed = tol * scale
    margin = rhs - lhs
    return CheckResult(
        name, bool(margin >= -allowed), float(lhs), float(rhs), float(margin),
        float(allowed), witness, detail,
    )


def _cplx(z: complex) -> list[float]:
    return [float(z.real), float(z.imag)]


def _vec(x: ModuleVector) -> list:
    return [[_cplx(z) for z in f] for f in x.fibers]


# -- norm checks ---------------------------------------------------------------


def check_norm_axioms(
    T: ModuleOperator, S: ModuleOperator, alpha: complex, tol: float = DEFAULT_TOL
) -> list[CheckResult]:
    """Triangle inequality, absolute homogeneity and definiteness of the module norm."""
    T._check(S)
    nT, nS = module_norm(T).value, module_norm(S).value
    nTS = module_norm(op_add(T, S))
    triangle = _leq("norm_triangle", nTS.value, nT + nS, tol, 1 + nT + nS,
                    witness=nTS.to_dict())

    nA = module_norm(op_scale(alpha, T))
    target = abs(alpha) * nT
    resid = abs(nA.value - target)
    homog = CheckResult(
        "norm_homogeneity", resid <= tol * (1 + target), nA.value, target,
        target - nA.value, tol * (1 + target), nA.to_dict(),
        {"alpha": _cplx(alpha), "residual": resid},
    )
    # |T_jk| <= ||T_i|| for every entry, so a vanishing norm forces T = 0
    definite = _leq("norm_definiteness", T.max_entry(), nT, tol, 1 + nT)
    return [triangle, homog, definite]


def check_bilinear_characterization(T: ModuleOperator, tol: float = DEFAULT_TOL) -> CheckResult:
    n = module_norm(T)
    b = module_norm_bilinear(T)
    resid = abs(n.value - b.value)
    return CheckResult(
        "bilinear_characterization", resid <= tol * (1 + n.value), b.value, n.value,
        -resid, tol * (1 + n.value), b.to_dict(), {"residual": resid},
    )


def check_hilbert_reduction(T: ModuleOperator, tol: float = 1e-10) -> CheckResult:
    """Single character: the module norm is the operator norm of the block.

    The reference value is the square root of the top eigenvalue of
    ``B^* B``, computed without an SVD.
    """
    if T.shape.n != 1:
        raise PreconditionError("Hilbert-space reduction needs exactly one character")
    B = T.blocks[0]
    ref = math.sqrt(max(float(np.linalg.eigvalsh(B.conj().T @ B)[-1]), 0.0))
    val = module_norm(T).value
    resid = abs(val - ref)
    return CheckResult(
        "hilbert_reduction", resid <= tol * max(1.0, ref), val, ref, -resid,
        tol * max(1.0, ref), None, {"residual": resid},
    )


def check_self_adjoint_equality(
    T: ModuleOperator, tol: float = DEFAULT_TOL, theta_steps: int = DEFAULT_THETA_STEPS
) -> CheckResult:
    """For self-adjoint ``T`` the module norm equals the numerical radius."""
    if not is_self_adjoint(T, tol):
        raise PreconditionError("check_self_adjoint_equality needs a self-adjoint operator")
    n = module_norm(T).value
    w = module_numerical_radius(T, theta_steps)
    resid = abs(n - w.value)
    return CheckResult(
        "self_adjoint_equality", resid <= tol * (1 + n), w.value, n, -resid,
        tol * (1 + n), w.to_dict(), {"residual": resid},
    )


def check_equivalence(
    T: ModuleOperator, tol: float = DEFAULT_TOL, theta_steps: int = DEFAULT_THETA_STEPS
) -> CheckResult:
    """``w(T) <= |||T||| <= 2 w(T)``; reports the ratio ``|||T||| / w(T)``."""
    n = module_norm(T)
    w = module_numerical_radius(T, theta_steps)
    lower = n.value - w.value
    upper = 2 * w.value - n.value
    allowed = tol * (1 + n.value)
    ratio = n.value / w.value if w.value > 0 else None
    return CheckResult(
        "equivalence", bool(lower >= -allowed and upper >= -allowed), n.value,
        2 * w.value, min(lower, upper), allowed, w.to_dict(),
        {"radius": w.value, "norm": n.value, "ratio": ratio,
         "lower_margin": lower, "upper_margin": upper},
    )


def check_kittaneh(
    T: ModuleOperator, tol: float = DEFAULT_TOL, theta_steps: int = DEFAULT_THETA_STEPS
) -> CheckResult:
    """``|||T*T + TT*||| / 4 <= w(T)^2 <= |||T*T + TT*||| / 2``."""
    Ts = adjoint(T)
    mid = module_norm(op_add(op_compose(Ts, T), op_compose(T, Ts))).value
    w = module_numerical_radius(T, theta_steps)
    w2 = w.value ** 2
    lower = w2 - mid / 4
    upper = mid / 2 - w2
    allowed = tol * (1 + mid)
    return CheckResult(
        "kittaneh", bool(lower >= -allowed and upper >= -allowed), mid / 4, mid / 2,
        min(lower, upper), allowed, w.to_dict(),
        {"radius_squared": w2, "sum_norm": mid, "lower_margin": lower, "upper_margin": upper},
    )


def check_cartesian_identity(T: ModuleOperator) -> CheckResult:
    """``T = M + iN`` and ``T*T + TT* = 2(M^2 + N^2)`` blockwise."""
    M, N = cartesian_parts(T)
    Ts = adjoint(T)
    lhs = op_add(op_compose(Ts, T), op_compose(T, Ts))
    rhs = op_scale(2, op_add(op_compose(M, M), op_compose(N, N)))
    recon = op_add(M, op_scale(1j, N))
    resid = max((lhs - rhs).max_entry(), (recon - T).max_entry())
    sa = is_self_adjoint(M, 0.0) and is_self_adjoint(N, 0.0)
    scale = 1 + lhs.max_entry()
    return CheckResult(
        "cartesian_identity", bool(sa and resid <= IDENTITY_TOL * scale), resid, 0.0,
        -resid, IDENTITY_TOL * scale, None, {"parts_self_adjoint": sa},
    )


def check_adjoint_identity(T: ModuleOperator, x: ModuleVector, y: ModuleVector) -> CheckResult:
    """``<Tx, y> = <x, T*y>`` at every character."""
    a = inner_product(apply(T, x), y).values
    b = inner_product(x, apply(adjoint(T), y)).values
    resid = float(np.max(np.abs(a - b)))
    scale = 1 + float(np.max(np.abs(a)))
    return CheckResult("adjoint_identity", resid <= IDENTITY_TOL * scale, resid, 0.0,
                       -resid, IDENTITY_TOL * scale)


def check_lemma_bound(
    T: ModuleOperator,
    x: ModuleVector,
    tol: float = DEFAULT_TOL,
    theta_steps: int = DEFAULT_THETA_STEPS,
    omega: float | None = None,
) -> CheckResult:
    """``|phi_i(<Tx, x>)| <= phi_i(|x|^2) w(T)`` for every character, any ``x``."""
    if omega is None:
        omega = module_numerical_radius(T, theta_steps).value
    lhs = np.abs(inner_product(apply(T, x), x).values)
    sq = inner_product(x, x).values.real
    rhs = sq * omega
    margins = rhs - lhs
    allowed = tol * (1 + rhs)
    k = int(np.argmin(margins + allowed))
    return CheckResult(
        "lemma_bound", bool(np.all(margins >= -allowed)), float(lhs[k]), float(rhs[k]),
        float(margins[k]), float(allowed[k]), {"character": k, "vector": _vec(x)},
        {"radius": omega},
    )


def check_oracle_soundness(
    T: ModuleOperator,
    trials: int = 1000,
    seed: int = 0,
    tol: float = DEFAULT_TOL,
    theta_steps: int = DEFAULT_THETA_STEPS,
) -> list[CheckResult]:
    """Sampling oracles never exceed the analytic values (absolute slack ``tol``)."""
    analytic = {
        "norm": module_norm(T).value,
        "bilinear": module_norm_bilinear(T).value,
        "radius": module_numerical_radius(T, theta_steps).value,
    }
    out = []
    for q, val in analytic.items():
        mc = monte_carlo_sup(T, q, trials, seed)
        out.append(_leq(f"oracle_soundness_{q}", mc, val, tol,
                        trials=trials, seed=seed, ratio=mc / val if val > 0 else None))
    return out


def check_witnesses(T: ModuleOperator, theta_steps: int = DEFAULT_THETA_STEPS,
                    tol: float = DEFAULT_TOL) -> CheckResult:
    """Every reported supremum is reproduced by re-evaluating at its witness."""
    ws = [module_norm(T), module_norm_bilinear(T), module_numerical_radius(T, theta_steps)]
    resid, normed = 0.0, True
    for w in ws:
        resid = max(resid, abs(evaluate_witness(T, w) - w.value))
        for v in (w.vector, w.secondary):
            if v is not None:
                normed &= abs(np.linalg.norm(v.fibers[w.character]) - 1) <= IDENTITY_TOL
    return CheckResult("witness_reproduction", bool(resid <= tol and normed), resid, 0.0,
                       -resid, tol, None, {"unit_witnesses": bool(normed)})


# -- numerical range -----------------------------------------------------------


def _forms(B: np.ndarray, W: np.ndarray) -> np.ndarray:
    return np.einsum("kd,de,ke->k", W.conj(), B, W)


def _support(points: np.ndarray, thetas: np.ndarray) -> np.ndarray:
    """``max_z Re(e^{i theta} z)`` over the points, for every angle."""
    if points.size == 0:
        return np.full(thetas.shape, -np.inf)
    P = np.stack([points.real, points.imag])
    D = np.stack([np.cos(thetas), -np.sin(thetas)], axis=1)
    return (D @ P).max(axis=1)


@dataclass
class _SupportSample:
    """Per-character sample split into support points (with their directions) and the rest."""

    boundary: np.ndarray
    directions: np.ndarray
    interior: np.ndarray

    def support(self, thetas: np.ndarray) -> np.ndarray:
        # boundary[k] maximizes Re(e^{i directions[k]} z) over the whole convex
        # range, so in any direction the best boundary sample is one of the
        # two whose directions bracket it
        order = np.argsort(self.directions, kind="stable")
        b, dirs = self.boundary[order], self.directions[order]
        m = b.size
        j = np.searchsorted(dirs, thetas)
        cand = np.stack([(j - 1) % m, j % m, (j + 1) % m])
        h = (np.exp(1j * thetas)[None, :] * b[cand]).real.max(axis=0)
        return np.maximum(h, _support(self.interior, thetas))

    def max_chord(self) -> float:
        if self.boundary.size < 2:
            return 0.0
        b = self.boundary[np.argsort(self.directions, kind="stable")]
        return float(np.max(np.abs(np.diff(np.append(b, b[0])))))


def _split(sample, i: int, g=None, dir_map=None, extra=None) -> _SupportSample:
    """Support data of character ``i``; ``extra`` adds ``(values, directions)`` support points."""
    mask = sample.character == i
    th = sample.theta[mask]
    vals = sample.value[mask]
    bnd = ~np.isnan(th)
    pts, dirs = vals[bnd], th[bnd]
    if extra is not None:
        pts = np.concatenate([pts, extra[0]])
        dirs = np.concatenate([dirs, extra[1]])
    inner = vals[~bnd]
    if g is not None:
        pts, inner = g(pts), g(inner)
    if dir_map is not None:
        dirs = dir_map(dirs)
    return _SupportSample(pts, np.mod(dirs, 2 * np.pi), inner)


def _set_distance(a: list[_SupportSample], b: list[_SupportSample], steps: int):
    """Hausdorff distance between per-character samples via support functions.

    For convex sets the Hausdorff distance is the sup-norm distance of the
    support functions. Both sides carry an exact support point at every grid
    direction, so the comparison on the grid involves no sampling error.
    Returns ``(distance, grid_term)``; ``grid_term = chord * tan(step/2) / 2``
    bounds how far the true boundary can bulge between two grid directions
    and is reported as the resolution of the grid, not added to the tolerance.
    """
    step = 2 * np.pi / steps
    grid = step * np.arange(steps)
    half = math.tan(step / 2) / 2
    dist, term = 0.0, 0.0
    for sa, sb in zip(a, b):
        h = np.abs(sa.support(grid) - sb.support(grid))
        dist = max(dist, float(h.max()))
        term = max(term, (sa.max_chord() + sb.max_chord()) * half)
    return dist, term


def check_range_properties(
    T: ModuleOperator,
    S: ModuleOperator,
    U: ModuleOperator,
    alpha: complex,
    beta: complex,
    theta_steps: int = DEFAULT_THETA_STEPS,
    samples: int = 200,
    seed: int = 0,
    tol: float = DEFAULT_SET_TOL,
) -> list[CheckResult]:
    """Properties (i)-(v) of the numerical range on witness-backed samples.

    (i)-(iii) transport every witness through the identity, which must map
    range points exactly (within ``1e-12``), and then compare the two
    sampled sets per character by Hausdorff distance with tolerance
    ``tol * (1 + |||T|||)``. (iv) checks
    reality against self-adjointness; (v) decomposes every witness value of
    ``T + S`` exactly into values of ``T`` and ``S`` at the same witness.
    """
    T._check(S)
    T._check(U)
    if not is_unitary(U, max(tol, 1e-10)):
        raise PreconditionError("U is not unitary")
    alpha, beta = complex(alpha), complex(beta)
    nT = module_norm(T).value
    set_allowed = tol * (1 + nT)
    exact_scale = IDENTITY_TOL * (1 + (1 + abs(alpha)) * nT + abs(beta))
    base = sample_numerical_range(T, theta_steps, samples, seed)
    n = T.shape.n

    def transported(name, F, g, to_F, to_T, dir_map=None, shift=0.0):
        other = sample_numerical_range(F, theta_steps, samples, seed)
        resid = 0.0
        for i in range(n):
            resid = max(resid, float(np.max(np.abs(
                _forms(F.blocks[i], to_F(i, base.fibers[i])) - g(base.points(i))))))
            resid = max(resid, float(np.max(np.abs(
                g(_forms(T.blocks[i], to_T(i, other.fibers[i]))) - other.points(i)))))
        extra = [None] * n
        if shift:
            # support points of W(T) at grid + shift land on the grid after the map
            dirs = 2 * np.pi * np.arange(theta_steps) / theta_steps + shift
            for i, B in enumerate(T.blocks):
                extra[i] = (_forms(B, _rotated_top(B, dirs)[1]), dirs)
        dist, term = _set_distance(
            [_split(other, i) for i in range(n)],
            [_split(base, i, g, dir_map, extra[i]) for i in range(n)],
            theta_steps,
        )
        ok = resid <= exact_scale and dist <= set_allowed
        return CheckResult(
            name, bool(ok), dist, set_allowed, set_allowed - dist, set_allowed, None,
            {"transport_residual": resid, "grid_term": term, "points": len(other)},
        )

    same = lambda i, W: W  # noqa: E731
    # support direction theta of W(T) becomes -theta for the conjugate set and
    # theta - arg(alpha) for alpha W(T) + beta
    psi = float(np.angle(alpha)) if alpha else 0.0
    affine = op_add(op_scale(alpha, T), op_scale(beta, ModuleOperator.identity(T.shape)))
    res = [
        transported("range_adjoint_conjugate", adjoint(T), np.conj, same, same,
                    dir_map=np.negative),
        transported("range_affine", affine, lambda z: alpha * z + beta, same, same,
                    dir_map=lambda th: th - psi, shift=psi),
        transported(
            "range_unitary_invariance", op_compose(op_compose(U, T), adjoint(U)), lambda z: z,
            lambda i, W: W @ U.blocks[i].T, lambda i, W: W @ U.blocks[i].conj(),
        ),
    ]

    # (iv)
    im = float(np.max(np.abs(base.value.imag)))
    sa = is_self_adjoint(T, tol)
    nonreal = im > tol
    ok4 = (not sa or not nonreal) and (sa or nonreal)
    res.append(CheckResult(
        "range_real_iff_self_adjoint", bool(ok4), im, tol, (tol - im) if sa else (im - tol), tol, None,
        {"self_adjoint": sa, "nonreal_found": nonreal},
    ))

    # (v)
    TS = op_add(T, S)
    s = sample_numerical_range(TS, theta_steps, samples, seed)
    resid = float(np.max(np.abs(s.value - (s.evaluate(T) + s.evaluate(S)))))
    nS = module_norm(S).value
    sc = IDENTITY_TOL * (1 + nT + nS)
    res.append(CheckResult("range_subadditive", resid <= sc, resid, 0.0, -resid, sc, None,
                           {"points": len(s)}))
    return res


# -- fuzzing -------------------------------------------------------------------


@dataclass(frozen=True)
class FuzzConfig:
    trials: int = 100
    seed: int = 42
    classes: tuple[str, ...] = OPERATOR_CLASSES
    shapes: tuple[tuple[int, ...], ...] | None = None
    max_characters: int = 3
    max_dim: int = 4
    tol: float = DEFAULT_TOL
    set_tol: float = DEFAULT_SET_TOL
    theta_steps: int = DEFAULT_THETA_STEPS
    range_samples: int = 64
    mc_trials: int = 1000
    workers: int = 1

    def __post_init__(self):
        if self.trials < 1:
            raise InputError("trials must be >= 1")
        for c in self.classes:
            if c not in OPERATOR_CLASSES:
                raise InputError(f"unknown operator class {c!r}; choose from {OPERATOR_CLASSES}")
        if not self.classes:
            raise InputError("at least one operator class is required")

    def descriptor(self) -> dict:
        d = asdict(self)
        d.pop("workers")
        d["classes"] = list(self.classes)
        d["shapes"] = [list(s) for s in self.shapes] if self.shapes else None
        return d


def verify_instance(
    T: ModuleOperator,
    S: ModuleOperator | None = None,
    U: ModuleOperator | None = None,
    alpha: complex | None = None,
    beta: complex | None = None,
    x: ModuleVector | None = None,
    seed: int = 0,
    tol: float = DEFAULT_TOL,
    set_tol: float = DEFAULT_SET_TOL,
    theta_steps: int = DEFAULT_THETA_STEPS,
    range_samples: int = 200,
    mc_trials: int = 1000,
    descriptor: dict | None = None,
) -> VerificationReport:
    """Run every applicable check on one operator.

    Missing auxiliary data (a second operator, a unitary, scalars, a test
    vector) is drawn deterministically from ``seed``.
    """
    rng = np.random.default_rng(seed)
    shape = T.shape
    if S is None:
        S = random_operator(shape, "generic", rng)
    if U is None:
        U = random_unitary(shape, rng)
    if alpha is None:
        alpha = complex(*rng.standard_normal(2))
    if beta is None:
        beta = complex(*rng.standard_normal(2))
    if x is None:
        x = random_vector(shape, rng) * float(rng.uniform(0.1, 3.0))
        if shape.n > 1 and rng.uniform() < 0.5:
            x = zero_fiber(x, int(rng.integers(shape.n)))
    y = random_vector(shape, rng)
    sub_seed = int(rng.integers(2**31))

    omega = module_numerical_radius(T, theta_steps).value
    results: list[CheckResult] = []
    results += check_norm_axioms(T, S, alpha, tol)
    results.append(check_bilinear_characterization(T, tol))
    if shape.n == 1:
        results.append(check_hilbert_reduction(T, 1e-10))
    results.append(check_equivalence(T, tol, theta_steps))
    results.append(check_kittaneh(T, tol, theta_steps))
    if is_self_adjoint(T, tol):
        results.append(check_self_adjoint_equality(T, tol, theta_steps))
    results.append(check_lemma_bound(T, x, tol, theta_steps, omega=omega))
    results.append(check_cartesian_identity(T))
    results.append(check_adjoint_identity(T, x, y))
    results.append(check_witnesses(T, theta_steps, tol))
    results += check_oracle_soundness(T, mc_trials, sub_seed, tol, theta_steps)
    results += check_range_properties(T, S, U, alpha, beta, theta_steps, range_samples,
                                      sub_seed, set_tol)
    desc = {
        "dims": list(shape.dims),
        "characters": list(shape.space.labels),
        "operator": T.digest(),
        "seed": seed,
    }
    if descriptor:
        desc.update(descriptor)
    return VerificationReport(desc, results)


def zero_fiber(x: ModuleVector, i: int) -> ModuleVector:
    """Copy of ``x`` with fiber ``i`` set to zero."""
    fibers = list(x.fibers)
    fibers[i] = np.zeros(x.shape.dims[i])
    return ModuleVector(x.shape, tuple(fibers))


def _instance_seed(seed: int, k: int) -> int:
    return int(np.random.SeedSequence([seed, k]).generate_state(1)[0])


def _fuzz_one(config: FuzzConfig, k: int) -> VerificationReport:
    iseed = _instance_seed(config.seed, k)
    rng = np.random.default_rng(iseed)
    kind = config.classes[k % len(config.classes)]
    if config.shapes:
        dims = list(config.shapes[k % len(config.shapes)])
    else:
        n = int(rng.integers(1, config.max_characters + 1))
        dims = [int(d) for d in rng.integers(1, config.max_dim + 1, size=n)]
    if kind == "nilpotent" and max(dims) < 2:
        # a nilpotent 1x1 block is zero; keep one genuine Jordan-type block
        dims[0] = 2
    shape = ModuleShape.from_dims(dims)
    T = random_operator(shape, kind, rng)
    report = verify_instance(
        T, seed=int(rng.integers(2**31)), tol=config.tol, set_tol=config.set_tol,
        theta_steps=config.theta_steps, range_samples=config.range_samples,
        mc_trials=config.mc_trials, descriptor={"index": k, "class": kind, "instance_seed": iseed},
    )
    for r in report.results:
        r.instance = k
    return report


def _fuzz_chunk(args):
    config, ks = args
    return [_fuzz_one(config, k) for k in ks]


def fuzz_suite(config: FuzzConfig) -> VerificationReport:
    """Randomized campaign running every applicable check on generated instances.

    Instance ``k`` is generated from a seed derived from ``(config.seed, k)``
    and its operator class is ``config.classes[k % len(classes)]``, so the
    report does not depend on ``config.workers``.
    """
    ks = list(range(config.trials))
    if config.workers > 1:
        chunks = [ks[j::config.workers] for j in range(config.workers)]
        with ProcessPoolExecutor(config.workers) as ex:
            parts = list(ex.map(_fuzz_chunk, [(config, c) for c in chunks]))
        reports = sorted((r for p in parts for r in p), key=lambda r: r.descriptor["index"])
    else:
        reports = [_fuzz_one(config, k) for k in ks]
    results = [r for rep in reports for r in rep.results]
    desc = {"config": config.descriptor(), "instances": [rep.descriptor for rep in reports]}
    return VerificationReport(desc, results)


def summarize(report: VerificationReport) -> dict:
    """Per-check pass counts and worst margins."""
    out: dict[str, dict] = {}
    for r in report.results:
        s = out.setdefault(r.name, {"checks": 0, "failed": 0, "worst_margin": math.inf})
        s["checks"] += 1
        s["failed"] += int(not r.passed)
        s["worst_margin"] = min(s["worst_margin"], r.margin)
    return dict(sorted(out.items()))


def equivalence_ratios(report: VerificationReport) -> list[float]:
    return [r.detail["ratio"] for r in report.by_name("equivalence") if r.detail["ratio"]]


def kittaneh_positions(report: VerificationReport) -> list[float]:
    """``w^2 / |||T*T + TT*|||`` per instance; always in ``[1/4, 1/2]``."""
    return [r.detail["radius_squared"] / r.detail["sum_norm"]
            for r in report.by_name("kittaneh") if r.detail["sum_norm"] > 0]


def random_instance_pairs(
    count: int, seed: int, max_characters: int = 3, max_dim: int = 4,
    classes: Sequence[str] = OPERATOR_CLASSES,
):
    """Yield ``(T, x)`` pairs for lemma-style sweeps, including zero fibers."""
    rng = np.random.default_rng(seed)
    for k in range(count):
        n = int(rng.integers(1, max_characters + 1))
        shape = ModuleShape.from_dims(rng.integers(1, max_dim + 1, size=n).tolist())
        T = random_operator(shape, classes[k % len(classes)], rng)
        x = random_vector(shape, rng) * float(rng.uniform(0.0, 4.0))
        if rng.uniform() < 0.3:
            x = zero_fiber(x, int(rng.integers(n)))
        yield T, x
