from dataclasses import replace

import numpy as np
import pytest

from architope.models.function import FunctionHandle
from architope.models.learner import FitConfig, MlpLearner, PolynomialLearner
from architope.models.measure import QuadratureScheme
from architope.services.errors import TrainingError, ValidationError
from architope.services.learners import (
    MlpModel,
    PolynomialModel,
    extend_by_zero,
    fit_mlp,
    fit_model,
    fit_polynomial,
    gradient_check,
    init_mlp,
    model_from_dict,
    multi_indices,
    weighted_residual,
)
from architope.services.learners import mlp as mlp_module
from architope.services.metrics import lp_distance, lp_distance_over


def handle(fn, label="target", dimension=1):
    return FunctionHandle(evaluate=fn, output_dimension=1, label=label, dimension=dimension)


IDENTITY = handle(lambda pts: pts[:, :1], "x")


# ----- Polynomials -----

def test_multi_indices_are_graded():
    indices = multi_indices(2, 3)
    assert len(indices) == 10
    assert indices[0] == (0, 0)
    assert [sum(idx) for idx in indices] == sorted(sum(idx) for idx in indices)
    assert multi_indices(2, 2) == indices[:6]


@pytest.mark.parametrize("basis", ["chebyshev", "monomial"])
def test_linear_target_is_reproduced(shells, leb, basis):
    model = fit_polynomial(IDENTITY, shells.region(2), leb, 1, FitConfig(), basis=basis)
    x = np.linspace(-2, 2, 9)
    assert np.allclose(model.evaluate(x)[:, 0], x, atol=1e-10)


def test_constant_fit_of_a_half_indicator(shells, leb):
    step = handle(lambda pts: (pts[:, 0] >= 0).astype(float), "step")
    model = fit_polynomial(step, shells.region(1), leb, 0, FitConfig())
    assert model.coefficients[0, 0] == pytest.approx(0.5)


def test_zero_target_gives_zero_model(shells, decay):
    model = fit_polynomial(FunctionHandle.zero(), shells.region(3), decay, 4, FitConfig())
    assert np.allclose(model.coefficients, 0.0)
    assert model.fit_report.residual == pytest.approx(0.0, abs=1e-14)


def test_fit_is_a_local_minimum(shells, leb):
    rng = np.random.default_rng(11)
    region = shells.region(2)
    quad = QuadratureScheme(refinement=256)
    for _ in range(20):
        a, b = rng.normal(size=2)
        target = handle(lambda pts, a=a, b=b: np.sin(a * pts[:, 0]) + b * pts[:, 0] ** 2)
        model = fit_polynomial(target, region, leb, 3, FitConfig(), quad=quad)
        best = weighted_residual(model, target, region, leb, quad)
        for k in range(model.terms):
            for delta in (1e-3, -1e-3):
                coefficients = model.coefficients.copy()
                coefficients[0, k] += delta
                nudged = replace(model, coefficients=coefficients)
                assert weighted_residual(nudged, target, region, leb, quad) >= best - 1e-12


def test_residual_does_not_grow_with_degree(shells, leb):
    target = handle(lambda pts: np.exp(-np.abs(pts[:, 0])), "exp-decay")
    residuals = [
        fit_polynomial(target, shells.region(2), leb, degree, FitConfig()).fit_report.residual
        for degree in range(7)
    ]
    assert all(later <= earlier + 1e-12 for earlier, later in zip(residuals, residuals[1:]))


def test_rank_deficient_fit_still_returns_a_model(shells, leb):
    model = fit_polynomial(
        IDENTITY,
        shells.region(1),
        leb,
        3,
        FitConfig(),
        basis="monomial",
        quad=QuadratureScheme(refinement=2),
    )
    assert model.fit_report.rank_deficient
    assert model.fit_report.rank == 2
    assert np.allclose(model.evaluate(np.array([-0.5, 0.5]))[:, 0], [-0.5, 0.5])


def test_ridge_shrinks_coefficients(shells, leb):
    target = handle(lambda pts: np.cos(3 * pts[:, 0]), "cos")
    plain = fit_polynomial(target, shells.region(1), leb, 6, FitConfig())
    ridged = fit_polynomial(target, shells.region(1), leb, 6, FitConfig(ridge=1.0))
    assert np.linalg.norm(ridged.coefficients) < np.linalg.norm(plain.coefficients)
    assert not ridged.fit_report.rank_deficient


def test_negative_degree_is_rejected(shells, leb):
    with pytest.raises(ValidationError):
        fit_polynomial(IDENTITY, shells.region(1), leb, -1, FitConfig())
    with pytest.raises(ValueError):
        PolynomialLearner(degree=-1)


def test_multi_output_polynomial(plane_shells, leb2):
    both = FunctionHandle(
        evaluate=lambda pts: np.column_stack([pts[:, 0], pts[:, 0] * pts[:, 1]]),
        output_dimension=2,
        label="pair",
        dimension=2,
    )
    model = fit_polynomial(both, plane_shells.region(2), leb2, 2, FitConfig(node_budget=1024))
    points = np.array([[1.5, -0.5], [-1.2, 1.8]])
    assert np.allclose(model.evaluate(points), both(points), atol=1e-9)


# ----- Networks -----

def test_network_learns_a_constant(shells, leb):
    target = FunctionHandle.constant(0.5)
    config = FitConfig(epochs=1000, node_budget=256, seed=3)
    model = fit_mlp(target, shells.region(1), leb, [1, 8, 1], config)
    assert lp_distance(model.as_handle(), target, leb, shells.region(1), 2.0, QuadratureScheme()) < 0.05
    trace = model.fit_report.loss_trace
    assert len(trace) == 1000
    assert trace[-1] < trace[0]


def test_network_learns_a_sine(shells, leb):
    target = handle(lambda pts: np.sin(pts[:, 0]), "sin")
    config = FitConfig(epochs=2000, node_budget=512, seed=7)
    model = fit_mlp(target, shells.region(1), leb, [1, 16, 1], config)
    assert lp_distance(model.as_handle(), target, leb, shells.region(1), 2.0, QuadratureScheme()) < 0.05


def test_training_is_deterministic(shells, leb):
    target = handle(lambda pts: pts[:, 0] ** 2, "square")
    config = FitConfig(epochs=50, node_budget=128, batch_size=16, seed=5)
    first = fit_mlp(target, shells.region(2), leb, [1, 4, 1], config)
    second = fit_mlp(target, shells.region(2), leb, [1, 4, 1], config)
    for a, b in zip(first.parameters(), second.parameters()):
        assert np.array_equal(a, b)
    assert first.fit_report.loss_trace == second.fit_report.loss_trace


def test_divergence_is_reported(shells, leb):
    config = FitConfig(epochs=20, optimizer="sgd", learning_rate=1e3, node_budget=64)
    with pytest.raises(TrainingError) as info:
        fit_mlp(FunctionHandle.constant(100.0), shells.region(1), leb, [1, 4, 1], config)
    assert info.value.epoch >= 1


def test_widths_must_match_region_and_target(shells, leb):
    with pytest.raises(ValidationError):
        fit_mlp(IDENTITY, shells.region(1), leb, [2, 4, 1], FitConfig(epochs=1))


def test_fit_model_dispatches_on_learner(shells, leb):
    config = FitConfig(epochs=5, node_budget=64)
    net = fit_model(MlpLearner(hidden=(3,)), IDENTITY, shells.region(1), leb, config)
    poly = fit_model(PolynomialLearner(degree=2), IDENTITY, shells.region(1), leb, config)
    assert isinstance(net, MlpModel) and net.widths == (1, 3, 1)
    assert isinstance(poly, PolynomialModel) and poly.degree == 2


@pytest.mark.parametrize("h", [1e-4, 1e-6])
def test_gradient_check_on_random_networks(h):
    for seed in range(10):
        model = init_mlp([2, 5, 3, 2], "tanh", seed)
        x = np.random.default_rng(seed).normal(size=2)
        assert gradient_check(model, x, h) < 1e-5


def test_gradient_check_on_zero_network():
    widths = (1, 3, 1)
    zero = MlpModel(
        widths,
        "tanh",
        (np.zeros((3, 1)), np.zeros((1, 3))),
        (np.zeros(3), np.zeros(1)),
    )
    assert gradient_check(zero, np.array([0.0]), 1e-5) < 1e-6


def test_small_network_gradient_check():
    assert gradient_check(init_mlp([1, 4, 1], "tanh", 9), np.array([0.4]), 1e-5) < 1e-5


def test_zero_epochs_keep_the_initialization(shells, leb):
    config = FitConfig(epochs=0, node_budget=64, seed=12)
    model = fit_mlp(IDENTITY, shells.region(1), leb, [1, 4, 1], config)
    initial = init_mlp([1, 4, 1], "tanh", 12)
    for a, b in zip(model.parameters(), initial.parameters()):
        assert np.array_equal(a, b)
    assert model.fit_report.loss_trace == ()


def test_gradient_check_rejects_bad_inputs():
    with pytest.raises(ValidationError):
        gradient_check(init_mlp([1, 2, 1], "relu", 0), np.array([0.1]), 1e-5)
    with pytest.raises(ValidationError):
        gradient_check(init_mlp([1, 2, 1], "tanh", 0), np.array([0.1]), 1e-2)


def test_scaling_a_network_scales_its_output():
    model = init_mlp([1, 4, 1], "relu", 2)
    x = np.linspace(-1, 1, 5)
    assert np.allclose(model.scaled(-3.0).evaluate(x), -3.0 * model.evaluate(x))


# ----- Extension by zero and serialization -----

def test_extension_by_zero(shells, leb, quad):
    region = shells.region(2)
    one = PolynomialModel.constant([1.0], region.outer)
    extended = extend_by_zero(one, region)
    assert extended(np.array([0.0, 1.5, -1.5, 2.5]))[:, 0].tolist() == [0.0, 1.0, 1.0, 0.0]
    assert lp_distance_over(extended, FunctionHandle.zero(), shells, leb, 1.0, 8, quad) == pytest.approx(2.0)


def test_extension_rejects_dimension_mismatch(plane_shells, shells):
    with pytest.raises(ValueError):
        extend_by_zero(PolynomialModel.constant([1.0], shells.region(1).outer), plane_shells.region(1))


def test_models_survive_serialization(shells, leb):
    x = np.linspace(-2, 2, 7)
    poly = fit_polynomial(IDENTITY, shells.region(2), leb, 3, FitConfig())
    net = init_mlp([1, 3, 1], "tanh", 4)
    for model in (poly, net):
        restored = model_from_dict(model.to_dict())
        assert np.allclose(restored.evaluate(x), model.evaluate(x))
    with pytest.raises(ValidationError):
        model_from_dict({"kind": "forest"})


def test_gradient_check_flags_a_wrong_small_gradient(monkeypatch):
    model = init_mlp([2, 5, 3, 2], "tanh", 3)
    x = np.array([0.3, -0.7])
    exact = mlp_module.backward

    def perturbed(*args):
        grads = [g.copy() for g in exact(*args)]
        flat = np.concatenate([g.ravel() for g in grads])
        largest = np.max(np.abs(flat))
        candidates = [
            (abs(g[idx]), k, idx)
            for k, g in enumerate(grads)
            for idx in np.ndindex(g.shape)
            if 0.05 * largest <= abs(g[idx]) <= 0.5 * largest
        ]
        assert candidates
        _, k, idx = min(candidates)
        grads[k][idx] *= 1.0 + 1e-3
        return grads

    assert gradient_check(model, x, 1e-5) < 1e-5
    monkeypatch.setattr(mlp_module, "backward", perturbed)
    assert gradient_check(model, x, 1e-5) > 5e-4


@pytest.mark.parametrize(
    "target",
    [
        handle(lambda pts: np.exp(-np.abs(pts[:, 0])), "exp-decay"),
        handle(lambda pts: np.sin(2.0 * pts[:, 0]) + 0.5, "shifted sine"),
        handle(lambda pts: pts[:, 0] ** 2 - 1.0, "quadratic"),
    ],
)
@pytest.mark.parametrize("degree", [0, 3, 6])
def test_fitted_polynomials_never_vanish_on_a_region(shells, leb, quad, target, degree):
    config = FitConfig(p=1.0)
    for index in (1, 3):
        model = fit_polynomial(target, shells.region(index), leb, degree, config)
        assert np.max(np.abs(model.coefficients)) > 1e-6
        zero = FunctionHandle.zero()
        for n in range(1, len(shells) + 1):
            assert lp_distance(model.as_handle(), zero, leb, shells.region(n), 1.0, quad) > 1e-8
