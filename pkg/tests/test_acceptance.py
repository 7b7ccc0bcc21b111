"""Exit criteria, one test per criterion.

Every test prints a single ``[ACCEPT] <criterion>: PASS|FAIL ...`` line
(visible even under output capture) before asserting.

The 1000-instance fuzz campaign is run once per session and shared by the
criteria that are stated over it.
"""

import json
import time

import numpy as np
import pytest

from modrange import (
    DiscretizedSpace,
    FuzzConfig,
    ModuleOperator,
    ModuleShape,
    build_multiplication,
    fuzz_suite,
    module_norm,
    module_norm_bilinear,
    module_numerical_radius,
    monte_carlo_sup,
    random_operator,
)
from modrange.cli import main
from modrange.cx_model import check_cx_identities, refinement_norms
from modrange.verification import (
    check_equivalence,
    check_hilbert_reduction,
    check_kittaneh,
    check_lemma_bound,
    random_instance_pairs,
)

from conftest import JORDAN

pytestmark = pytest.mark.acceptance

CAMPAIGN = FuzzConfig(trials=1000, seed=42, max_characters=3, max_dim=4, tol=1e-9,
                      theta_steps=720)
TIME_LIMIT = 30.0


@pytest.fixture
def accept(capsys):
    def line(name: str, ok: bool, detail: str = "") -> bool:
        with capsys.disabled():
            print(f"\n[ACCEPT] {name}: {'PASS' if ok else 'FAIL'} {detail}".rstrip())
        return ok

    return line


@pytest.fixture(scope="session")
def campaign():
    t0 = time.perf_counter()
    report = fuzz_suite(CAMPAIGN)
    return report, time.perf_counter() - t0


def _failed(report, name):
    return sum(not r.passed for r in report.by_name(name))


def test_equivalence_campaign(campaign, accept):
    report, elapsed = campaign
    checks = report.by_name("equivalence")
    bad = _failed(report, "equivalence")
    ok = len(checks) == 1000 and bad == 0 and elapsed < TIME_LIMIT
    assert accept("equivalence over 1000 fuzzed instances", ok,
                  f"(violations={bad}, instances={len(checks)}, runtime={elapsed:.1f}s < {TIME_LIMIT:.0f}s)")


def test_sharpness(accept):
    J = ModuleOperator.from_blocks([JORDAN])
    ratio_j = check_equivalence(J).detail["ratio"]
    worst_sa = 0.0
    for k in range(50):
        shape = ModuleShape.from_dims(np.random.default_rng(k).integers(1, 5, size=3).tolist())
        H = random_operator(shape, "self-adjoint", k)
        worst_sa = max(worst_sa, abs(check_equivalence(H).detail["ratio"] - 1.0))
    ok = abs(ratio_j - 2.0) <= 1e-6 and worst_sa <= 1e-8
    assert accept("sharpness of both equivalence bounds", ok,
                  f"(Jordan ratio={ratio_j:.9f}, self-adjoint max |ratio-1|={worst_sa:.1e})")


def test_kittaneh(campaign, accept):
    report, _ = campaign
    bad = _failed(report, "kittaneh")
    lower = check_kittaneh(ModuleOperator.from_blocks([JORDAN])).detail["lower_margin"]
    upper = check_kittaneh(ModuleOperator.from_blocks([np.diag([1, 1j])])).detail["upper_margin"]
    ok = bad == 0 and abs(lower) < 1e-9 and abs(upper) < 1e-9
    assert accept("Kittaneh-type bounds", ok,
                  f"(violations={bad}, Jordan lower margin={lower:.1e}, diag(1,i) upper margin={upper:.1e})")


def test_bilinear(campaign, accept):
    report, _ = campaign
    worst = max(r.detail["residual"] for r in report.by_name("bilinear_characterization"))
    # pairwise oracle: 1e5 trials per instance, fiber dimensions up to 4
    rng = np.random.default_rng(7)
    worst_rel = 0.0
    for k in range(40):
        dims = rng.integers(1, 5, size=int(rng.integers(1, 4))).tolist()
        dims[0] = 4 if k % 2 == 0 else dims[0]
        T = random_operator(ModuleShape.from_dims(dims), CAMPAIGN.classes[k % 5], rng)
        exact = module_norm_bilinear(T).value
        mc = monte_carlo_sup(T, "bilinear", 100_000, k)
        # a nilpotent family of 1x1 blocks is zero, and then so is the oracle
        worst_rel = max(worst_rel, (exact - mc) / exact if exact > 0 else float(mc != 0))
    ok = worst <= 1e-9 and worst_rel <= 0.05
    assert accept("bilinear characterization", ok,
                  f"(max |bilinear-norm|={worst:.1e}, worst Monte-Carlo shortfall={100 * worst_rel:.2f}%)")


def test_hilbert_reduction(accept):
    rng = np.random.default_rng(0)
    worst = 0.0
    for k in range(100):
        d = 1 + k % 8
        B = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
        T = ModuleOperator.from_blocks([B])
        smax = float(np.linalg.svd(B, compute_uv=False)[0])
        worst = max(worst, abs(module_norm(T).value - smax) / max(1.0, smax))
        assert check_hilbert_reduction(T, 1e-10).passed
    assert accept("single-character reduction to the operator norm", worst <= 1e-10,
                  f"(100 matrices up to 8x8, max relative deviation={worst:.1e})")


def test_oracle_soundness(campaign, accept):
    report, _ = campaign
    names = ("oracle_soundness_norm", "oracle_soundness_bilinear", "oracle_soundness_radius")
    res = [r for n in names for r in report.by_name(n)]
    excess = max(r.lhs - r.rhs for r in res)
    ok = len(res) == 3000 and all(r.passed for r in res) and excess <= 1e-9
    assert accept("oracle soundness", ok, f"(3000 comparisons, max oracle excess={excess:.1e})")


def test_range_properties(campaign, accept):
    report, _ = campaign
    parts = {}
    for name in ("range_adjoint_conjugate", "range_affine", "range_unitary_invariance"):
        rs = report.by_name(name)
        parts[name] = max(r.lhs for r in rs)
        assert all(r.passed for r in rs) and len(rs) == 1000
    nil = [r for r in report.by_name("range_real_iff_self_adjoint")
           if report.descriptor["instances"][r.instance]["class"] == "nilpotent"]
    iv_ok = all(r.passed for r in report.by_name("range_real_iff_self_adjoint"))
    nil_ok = len(nil) == 200 and all(r.detail["nonreal_found"] for r in nil)
    v_ok = all(r.passed for r in report.by_name("range_subadditive"))
    ok = iv_ok and nil_ok and v_ok
    dist = ", ".join(f"{k.split('_', 1)[1]}={v:.1e}" for k, v in parts.items())
    assert accept("numerical-range properties (i)-(v)", ok,
                  f"(max Hausdorff {dist}; nilpotent non-real detected {sum(r.detail['nonreal_found'] for r in nil)}/{len(nil)})")


def test_range_allowance_is_the_stated_one(campaign):
    # the Hausdorff allowance is exactly 1e-6 * (1 + norm), nothing added
    report, _ = campaign
    norms = {}
    for r in report.by_name("equivalence"):
        norms[r.instance] = r.detail["norm"]
    for name in ("range_adjoint_conjugate", "range_affine", "range_unitary_invariance"):
        for r in report.by_name(name):
            assert r.tolerance == pytest.approx(1e-6 * (1 + norms[r.instance]), rel=1e-12)


def test_lemma_bound(accept):
    bad, zero_fiber, unnormalized = 0, 0, 0
    for T, x in random_instance_pairs(10_000, 2024):
        omega = module_numerical_radius(T).value
        bad += not check_lemma_bound(T, x, 1e-9, omega=omega).passed
        sq = [float(np.vdot(f, f).real) for f in x.fibers]
        zero_fiber += any(v == 0 for v in sq)
        unnormalized += any(v > 0 and abs(v - 1) > 1e-6 for v in sq)
    ok = bad == 0 and zero_fiber > 0 and unnormalized > 0
    assert accept("lemma bound on 10^4 pairs", ok,
                  f"(violations={bad}, pairs with a zero fiber={zero_fiber}, non-normalized={unnormalized})")


def test_cx_example(accept):
    M = build_multiplication(DiscretizedSpace.interval(101), "identity-coordinate")
    norm = module_norm(M.operator).value
    omega = module_numerical_radius(M.operator).value
    checks_ok = all(r.passed for r in check_cx_identities(M, 1e-9))
    g = lambda x: np.exp(-((x - 1 / 3) ** 2))  # noqa: E731
    fine = refinement_norms("interval", g, 10)
    mono = all(b >= a for a, b in zip(fine, fine[1:]))
    ok = abs(norm - 1) <= 1e-9 and abs(omega - 1) <= 1e-9 and checks_ok and mono
    assert accept("C(X) interval example", ok,
                  f"(norm={norm!r}, radius={omega!r}, dyadic refinement monotone={mono})")


def test_determinism(accept, tmp_path, capsys):
    outs = []
    for k, workers in enumerate(("1", "1", "3")):
        path = tmp_path / f"r{k}.json"
        code = main(["verify", "--fuzz", "--trials", "100", "--seed", "42", "--workers", workers,
                     "--output", str(path)])
        assert code == 0
        outs.append(path.read_bytes())
    capsys.readouterr()
    ok = outs[0] == outs[1] == outs[2]
    assert json.loads(outs[0])["seed"] == 42
    assert accept("deterministic verify reports", ok,
                  "(100 instances, two runs and workers=3 byte-identical)")
