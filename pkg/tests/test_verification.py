import json

import numpy as np
import pytest

from modrange import (
    FuzzConfig,
    InputError,
    ModuleOperator,
    ModuleShape,
    ModuleVector,
    PreconditionError,
    fuzz_suite,
    random_operator,
    random_unitary,
    random_vector,
    verify_instance,
)
from modrange import norms, verification
from modrange.verification import (
    check_equivalence,
    check_hilbert_reduction,
    check_kittaneh,
    check_lemma_bound,
    check_norm_axioms,
    check_oracle_soundness,
    check_range_properties,
    check_self_adjoint_equality,
    equivalence_ratios,
    kittaneh_positions,
    summarize,
)

from conftest import JORDAN

SHAPE = ModuleShape.from_dims([2, 1])


def test_norm_axiom_examples():
    I = ModuleOperator.identity(SHAPE)
    tri, hom, definite = check_norm_axioms(I, I, 0)
    assert tri.passed and tri.lhs == pytest.approx(2.0) and tri.margin == pytest.approx(0.0, abs=1e-15)
    assert hom.passed and hom.lhs == 0.0
    assert definite.passed
    T = random_operator(SHAPE, "generic", 1)
    S = random_operator(SHAPE, "generic", 2)
    res = check_norm_axioms(T, S, 2j)
    assert all(r.passed for r in res)
    assert res[1].detail["residual"] < 1e-9


def test_self_adjoint_equality_examples():
    assert check_self_adjoint_equality(ModuleOperator.identity(SHAPE)).rhs == pytest.approx(1.0)
    T = ModuleOperator.from_blocks([np.diag([-3.0, 1.0]), [[2.0]]])
    r = check_self_adjoint_equality(T)
    assert r.passed and r.lhs == pytest.approx(3.0, abs=1e-12) and r.rhs == pytest.approx(3.0)
    H = random_operator(ModuleShape.from_dims([4, 3, 2]), "self-adjoint", 3)
    assert check_self_adjoint_equality(H).detail["residual"] < 1e-8
    with pytest.raises(PreconditionError):
        check_self_adjoint_equality(ModuleOperator.from_blocks([JORDAN]))


def test_equivalence_examples(jordan):
    r = check_equivalence(jordan)
    assert r.passed and r.detail["ratio"] == pytest.approx(2.0, abs=1e-12)
    H = random_operator(SHAPE, "self-adjoint", 0)
    assert check_equivalence(H).detail["ratio"] == pytest.approx(1.0, abs=1e-12)
    z = check_equivalence(ModuleOperator.zero(SHAPE))
    assert z.passed and z.detail["ratio"] is None


def test_kittaneh_examples(jordan):
    r = check_kittaneh(jordan)
    assert r.passed and r.lhs == pytest.approx(0.25) and r.detail["radius_squared"] == pytest.approx(0.25)
    assert abs(r.detail["lower_margin"]) < 1e-9
    d = check_kittaneh(ModuleOperator.from_blocks([np.diag([1, 1j])]))
    assert d.passed and d.rhs == pytest.approx(1.0) and abs(d.detail["upper_margin"]) < 1e-9
    z = check_kittaneh(ModuleOperator.zero(SHAPE))
    assert z.passed and z.lhs == z.rhs == 0.0


def test_lemma_examples():
    T = random_operator(SHAPE, "generic", 4)
    r = check_lemma_bound(T, ModuleVector.zero(SHAPE))
    assert r.passed and r.lhs == r.rhs == 0.0
    x = random_vector(SHAPE, 1) * 3.0
    r = check_lemma_bound(ModuleOperator.identity(SHAPE), x)
    assert r.passed and abs(r.margin) < 1e-12
    r = check_lemma_bound(T, x)
    assert r.passed and r.margin > 0


def test_hilbert_reduction_needs_one_character():
    with pytest.raises(PreconditionError):
        check_hilbert_reduction(ModuleOperator.identity(SHAPE))
    T = random_operator(ModuleShape.from_dims([6]), "generic", 0)
    assert check_hilbert_reduction(T).passed


def test_range_property_examples(jordan):
    U = random_unitary(jordan.shape, 0)
    S = random_operator(jordan.shape, "generic", 1)
    res = {r.name: r for r in check_range_properties(jordan, S, U, 2, 1 + 1j, 720, 200, 0)}
    assert all(r.passed for r in res.values())
    I = ModuleOperator.identity(jordan.shape)
    res = {r.name: r for r in check_range_properties(jordan, S, I, 1, 0, 720, 200, 0)}
    assert res["range_unitary_invariance"].lhs == 0.0
    assert res["range_affine"].lhs == 0.0
    assert res["range_real_iff_self_adjoint"].detail == {"self_adjoint": False, "nonreal_found": True}
    H = random_operator(SHAPE, "self-adjoint", 2)
    res = {r.name: r for r in check_range_properties(H, random_operator(SHAPE, "generic", 3),
                                                     random_unitary(SHAPE, 4), 1j, -2, 720, 100, 0)}
    assert all(r.passed for r in res.values())
    assert res["range_real_iff_self_adjoint"].detail["self_adjoint"]
    with pytest.raises(PreconditionError):
        check_range_properties(jordan, S, S, 1, 0)


def test_oracle_soundness_reports_three_quantities():
    T = random_operator(SHAPE, "generic", 8)
    res = check_oracle_soundness(T, 500, 0)
    assert [r.name for r in res] == ["oracle_soundness_norm", "oracle_soundness_bilinear",
                                     "oracle_soundness_radius"]
    assert all(r.passed and 0 < r.detail["ratio"] <= 1 + 1e-12 for r in res)


def test_verify_instance_runs_every_check(jordan):
    rep = verify_instance(jordan, seed=3)
    names = {r.name for r in rep.results}
    assert {"equivalence", "kittaneh", "hilbert_reduction", "lemma_bound",
            "range_subadditive", "witness_reproduction"} <= names
    assert "self_adjoint_equality" not in names
    assert rep.overall
    json.dumps(rep.to_dict())


def test_fuzz_single_self_adjoint_instance():
    rep = fuzz_suite(FuzzConfig(trials=1, seed=42, classes=("self-adjoint",)))
    sa = rep.by_name("self_adjoint_equality")
    assert len(sa) == 1 and sa[0].passed and sa[0].instance == 0


def test_fuzz_deterministic_and_independent_of_workers():
    cfg = FuzzConfig(trials=12, seed=42)
    a = json.dumps(fuzz_suite(cfg).to_dict(), sort_keys=True)
    b = json.dumps(fuzz_suite(cfg).to_dict(), sort_keys=True)
    c = json.dumps(fuzz_suite(FuzzConfig(trials=12, seed=42, workers=3)).to_dict(), sort_keys=True)
    assert a == b == c
    d = json.dumps(fuzz_suite(FuzzConfig(trials=12, seed=43)).to_dict(), sort_keys=True)
    assert a != d


def test_fuzz_summaries():
    rep = fuzz_suite(FuzzConfig(trials=10, seed=1))
    assert rep.overall
    s = summarize(rep)
    assert s["equivalence"]["checks"] == 10 and s["equivalence"]["failed"] == 0
    assert all(1 - 1e-9 <= r <= 2 + 1e-9 for r in equivalence_ratios(rep))
    assert all(0.25 - 1e-9 <= p <= 0.5 + 1e-9 for p in kittaneh_positions(rep))
    classes = [d["class"] for d in rep.descriptor["instances"]]
    assert classes[:5] == list(FuzzConfig().classes)


def test_fuzz_config_validation():
    with pytest.raises(InputError):
        FuzzConfig(trials=0)
    with pytest.raises(InputError):
        FuzzConfig(classes=("wild",))
    assert "workers" not in FuzzConfig(workers=4).descriptor()


def test_checks_catch_a_broken_radius(monkeypatch, jordan):
    # halving every block radius breaks the upper equivalence bound and the
    # oracle comparison; the report must say which instance and check failed
    real = norms._radius_search_uncached

    def broken(B, steps, tol):
        r = real(B, steps, tol)
        return norms._RadiusSearch(r.value / 2, r.theta, r.vector)

    monkeypatch.setattr(norms, "_radius_search", broken)
    rep = verify_instance(jordan, seed=0)
    failed = {r.name for r in rep.failures()}
    assert {"equivalence", "kittaneh", "oracle_soundness_radius", "witness_reproduction"} <= failed
    eq = rep.by_name("equivalence")[0]
    assert eq.witness["quantity"] == "radius"
