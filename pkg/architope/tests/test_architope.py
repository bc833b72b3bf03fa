import time
import uuid
from concurrent.futures import ThreadPoolExecutor

import numpy as np
import pytest

from architope.adapters import json_store
from architope.models.architope import Architope, Tail, Term
from architope.models.function import FunctionHandle
from architope.models.learner import FitConfig, MlpLearner, PolynomialLearner
from architope.models.measure import MeasureSpec
from architope.services import cache
from architope.services.errors import AssumptionViolation, RegionFitError, TrainingError, ValidationError
from architope.services.learners import MlpModel, PolynomialModel, weighted_residual
from architope.services.metrics import ess_support_index, lp_distance, strict_norm
from architope.services.targets import exp_decay_tail, exp_decay_target
from architope.services.upgrade import (
    containment_architope,
    factor_scales,
    rescale,
    scale_models,
    upgrade,
)
from architope.services.upgrade import upgrade_service


def constant(value, partition):
    return PolynomialModel.constant([value], partition.bounding_box())


def identity(partition):
    return PolynomialModel(
        dimension=1,
        output_dimension=1,
        degree=1,
        basis="monomial",
        coefficients=np.array([[0.0, 1.0]]),
        reference_box=partition.bounding_box(),
    )


# ----- Evaluation -----

def test_single_term_gates_on_its_region(shells):
    architope = Architope(shells, (Term(1, 1.0, constant(1.0, shells)),))
    assert architope.evaluate(np.array([0.5]))[0, 0] == 1.0
    assert architope.evaluate(np.array([1.5]))[0, 0] == 0.0


def test_tail_covers_points_outside_the_partition(shells):
    architope = Architope(
        shells,
        (Term(1, 0.0, constant(1.0, shells)),),
        tail=Tail(2.0, constant(1.0, shells)),
    )
    assert architope.evaluate(np.array([100.0]))[0, 0] == 2.0
    assert architope.evaluate(np.array([0.0]))[0, 0] == 0.0


def test_each_point_takes_exactly_one_branch(shells):
    architope = Architope(
        shells,
        (Term(1, 1.0, constant(1.0, shells)), Term(2, 3.0, identity(shells))),
    )
    values = architope.evaluate(np.array([1.5, 1.0, -1.5]))[:, 0]
    # 1.0 sits on the face shared by K_1 and K_2 and belongs to K_1
    assert values.tolist() == pytest.approx([4.5, 1.0, -4.5])


def test_terms_are_validated(shells, plane_shells):
    one = constant(1.0, shells)
    with pytest.raises(ValueError, match="distinct"):
        Architope(shells, (Term(1, 1.0, one), Term(1, 2.0, one)))
    with pytest.raises(ValueError):
        Architope(shells, (Term(9, 1.0, one),))
    with pytest.raises(ValueError, match="non-zero"):
        Architope(shells, (Term(1, 0.0, one),), tail=Tail(0.0, one))
    with pytest.raises(ValueError, match="dimensions"):
        Architope(plane_shells, (Term(1, 1.0, one),))


def test_non_finite_points_are_rejected(shells):
    architope = Architope(shells, (Term(1, 1.0, constant(1.0, shells)),))
    with pytest.raises(ValueError):
        architope.evaluate(np.array([np.nan]))


# ----- Upgrade -----

def test_indicator_is_represented_exactly(shells, leb, quad):
    target = FunctionHandle.indicator(shells.region(1))
    result = upgrade(target, PolynomialLearner(degree=0), shells, leb, 2, FitConfig(), quad=quad)
    first, second = result.architope.terms
    assert first.model.coefficients[0, 0] == pytest.approx(1.0)
    assert second.model.coefficients[0, 0] == pytest.approx(0.0, abs=1e-12)
    assert result.report.strict_norm_n < 1e-8
    assert result.architope.tail.scale == 0.0


def test_zero_target(shells, decay, quad):
    result = upgrade(FunctionHandle.zero(), PolynomialLearner(degree=3), shells, decay, 4, FitConfig(), quad=quad)
    assert result.report.lp_total < 1e-10
    assert result.report.strict_norm_n < 1e-10
    for term in result.architope.terms:
        assert np.allclose(term.model.coefficients, 0.0)


def test_exp_decay_on_eight_shells(shells, leb, quad):
    target = exp_decay_target(1)
    config = FitConfig(p=1.0)
    errors = [
        upgrade(target, PolynomialLearner(degree=degree), shells, leb, 8, config, quad=quad).report.lp_total
        for degree in (0, 2, 4, 6)
    ]
    assert errors == sorted(errors, reverse=True)
    # the kink at the origin bounds what degree 6 achieves on K_1
    assert errors[-1] < 0.08
    assert exp_decay_tail(1.0, 1.0, shells.bounding_box()) == pytest.approx(2.0 * np.exp(-8.0))


def test_every_region_fit_is_optimal(shells, leb, quad):
    target = exp_decay_target(1)
    result = upgrade(target, PolynomialLearner(degree=2), shells, leb, 3, FitConfig(), quad=quad, fit_quad=quad)
    for term in result.architope.terms:
        region = shells.region(term.index)
        best = weighted_residual(term.model, target, region, leb, quad)
        nudged = term.model.scaled(1.001)
        assert weighted_residual(nudged, target, region, leb, quad) >= best


def test_support_stays_inside_fitted_regions(shells, leb, quad):
    result = upgrade(exp_decay_target(1), PolynomialLearner(degree=1), shells, leb, 3, FitConfig(), quad=quad)
    handle = result.architope.as_handle()
    assert ess_support_index(handle, shells, leb, quad) == 3
    assert handle(np.array([5.5, 50.0]))[:, 0].tolist() == [0.0, 0.0]


def test_network_upgrade(shells, leb, quad):
    config = FitConfig(epochs=300, node_budget=128, seed=1)
    target = FunctionHandle.constant(0.25)
    result = upgrade(target, MlpLearner(hidden=(4,)), shells, leb, 2, config, quad=quad)
    assert all(isinstance(term.model, MlpModel) for term in result.architope.terms)
    assert result.report.strict_norm_n < 0.1
    assert len(result.architope.terms[0].model.fit_report.loss_trace) == 300


def test_divergent_region_is_named(shells, leb, quad):
    config = FitConfig(epochs=10, optimizer="sgd", learning_rate=1e3, node_budget=64)
    target = FunctionHandle.indicator(shells.region(1), 100.0)
    with pytest.raises(RegionFitError) as info:
        upgrade(target, MlpLearner(hidden=(4,)), shells, leb, 2, config, quad=quad)
    assert info.value.index == 1
    assert isinstance(info.value.cause, TrainingError)


def test_massless_region_is_rejected(shells, quad):
    only_k1 = MeasureSpec(
        dimension=1,
        density=lambda pts: (np.abs(pts[:, 0]) <= 1.0).astype(float),
        label="k1-only",
    )
    with pytest.raises(AssumptionViolation) as info:
        upgrade(FunctionHandle.zero(), PolynomialLearner(degree=0), shells, only_k1, 2, FitConfig(), quad=quad)
    assert info.value.index == 2


def test_bad_region_count_and_dimension(shells, plane_shells, leb, quad):
    learner = PolynomialLearner(degree=0)
    with pytest.raises(ValidationError):
        upgrade(FunctionHandle.zero(), learner, shells, leb, 9, FitConfig(), quad=quad)
    with pytest.raises(ValidationError):
        upgrade(FunctionHandle.zero(), learner, plane_shells, leb, 1, FitConfig(), quad=quad)


def test_cached_fits_are_reused(shells, leb, quad, monkeypatch):
    key = uuid.uuid4().hex
    target = exp_decay_target(1)
    learner = PolynomialLearner(degree=2)
    first = upgrade(target, learner, shells, leb, 2, FitConfig(), quad=quad, cache_key=key)

    def refuse(*args, **kwargs):
        raise AssertionError("fit should have come from the cache")

    monkeypatch.setattr(upgrade_service, "fit_model", refuse)
    second = upgrade(target, learner, shells, leb, 2, FitConfig(), quad=quad, cache_key=key)
    for a, b in zip(first.architope.terms, second.architope.terms):
        assert np.array_equal(a.model.coefficients, b.model.coefficients)
        assert a.model.fit_report == b.model.fit_report
    assert second.report.lp_total == first.report.lp_total


def test_concurrent_workers_open_one_cache(monkeypatch):
    opened = []
    real_cache = cache.diskcache.Cache

    def slow_cache(*args, **kwargs):
        time.sleep(0.05)
        instance = real_cache(*args, **kwargs)
        opened.append(instance)
        return instance

    monkeypatch.setattr(cache, "_cache_instance", None)
    monkeypatch.setattr(cache.diskcache, "Cache", slow_cache)
    with ThreadPoolExecutor(max_workers=4) as pool:
        instances = list(pool.map(lambda _: cache._get_cache(), range(8)))
    assert len(opened) == 1
    assert all(instance is opened[0] for instance in instances)
    opened[0].close()


# ----- Transformations -----

def test_containment_reproduces_the_model(shells):
    model = identity(shells)
    architope = containment_architope(model, shells)
    x = np.array([-40.0, -3.5, 0.0, 1.0, 7.9, 12.0])
    assert np.allclose(architope.evaluate(x), model.evaluate(x))


def test_scaling_is_linear(shells, leb, quad):
    result = upgrade(exp_decay_target(1), PolynomialLearner(degree=2), shells, leb, 4, FitConfig(), quad=quad)
    architope = result.architope
    x = np.linspace(-5, 5, 21)
    assert np.allclose(rescale(architope, -2.0).evaluate(x), -2.0 * architope.evaluate(x))
    assert np.allclose(scale_models(architope, -2.0).evaluate(x), -2.0 * architope.evaluate(x))


def test_factor_scales_keeps_the_function(shells, leb, quad):
    result = upgrade(exp_decay_target(1), PolynomialLearner(degree=2), shells, leb, 3, FitConfig(), quad=quad)
    factored = factor_scales(result.architope, leb, 2.0, quad)
    x = np.linspace(-3, 3, 13)
    assert np.allclose(factored.evaluate(x), result.architope.evaluate(x))
    for term in factored.terms:
        region = shells.region(term.index)
        norm = lp_distance(term.model.as_handle(), FunctionHandle.zero(), leb, region, 2.0, quad)
        assert norm == pytest.approx(1.0)


def test_architope_round_trip(shells, leb, quad, tmp_path):
    result = upgrade(exp_decay_target(1), PolynomialLearner(degree=3), shells, leb, 3, FitConfig(), quad=quad)
    path = json_store.save_architope(tmp_path / "architope.json", result.architope)
    restored = json_store.load_architope(path)
    x = np.linspace(-4, 4, 17)
    assert np.allclose(restored.evaluate(x), result.architope.evaluate(x))
    assert restored.indices == (1, 2, 3)
    assert strict_norm(restored.as_handle(), shells, leb, 2.0, 8, quad) == pytest.approx(
        strict_norm(result.architope.as_handle(), shells, leb, 2.0, 8, quad)
    )


def test_strict_error_does_not_grow_with_degree(shells, decay, quad):
    target = exp_decay_target(1)
    errors = [
        upgrade(
            target, PolynomialLearner(degree=degree), shells, decay, 4, FitConfig(), quad=quad, fit_quad=quad
        ).report.strict_norm_n
        for degree in range(6)
    ]
    assert all(later <= earlier + 1e-9 for earlier, later in zip(errors, errors[1:]))
