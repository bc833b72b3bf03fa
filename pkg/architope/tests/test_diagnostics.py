import pytest

from architope.models.function import FunctionHandle
from architope.services.errors import PreconditionError, ValidationError
from architope.services.metrics import (
    Verdict,
    build_family,
    known_families,
    limits_agree,
    strict_convergence_diagnostic,
)
from architope.services.partition import make_shell_partition


def diagnose(family, partition, measure, quad, length=10, p=2.0, tol=1e-9):
    sequence, target = build_family(family, partition, length)
    return strict_convergence_diagnostic(sequence, target, partition, measure, p, tol, quad)


def test_shrinking_sequence_converges(shells, leb, quad):
    result = diagnose("shrinking-on-K1", shells, leb, quad)
    assert result.verdict == Verdict.CONVERGING
    assert result.target_support_index == 1
    errors = [step.strict_error for step in result.steps]
    assert errors == sorted(errors, reverse=True)
    assert all(step.support_index in (0, 1) for step in result.steps)


def test_leaking_sequence_is_a_support_violation(shells, leb, quad):
    result = diagnose("leaking-to-K2", shells, leb, quad, length=25, p=1.0)
    assert result.verdict == Verdict.SUPPORT_VIOLATION
    # the L^p distance alone would call this sequence convergent
    assert result.steps[-1].lp_distance < 0.1
    assert all(step.support_index == 2 for step in result.steps)


def test_verdict_does_not_depend_on_shell_width(shells, wide_shells, leb, quad):
    narrow = diagnose("leaking-to-k2", shells, leb, quad)
    wide = diagnose("leaking-to-k2", wide_shells, leb, quad)
    assert narrow.verdict == wide.verdict == Verdict.SUPPORT_VIOLATION


def test_stalled_sequence_is_not_converging(shells, leb, quad):
    result = diagnose("stalled", shells, leb, quad)
    assert result.verdict == Verdict.NOT_CONVERGING
    assert result.steps[0].strict_error == pytest.approx(result.steps[-1].strict_error)


def test_wrong_support(shells, leb, quad):
    assert diagnose("wrong-support", shells, leb, quad).verdict == Verdict.SUPPORT_VIOLATION


def test_escaping_mass_shrinks_local_metric_only(shells, leb, quad):
    result = diagnose("escaping-mass", shells, leb, quad, length=6, p=1.0)
    assert result.verdict == Verdict.SUPPORT_VIOLATION
    local = [step.local_metric for step in result.steps]
    assert local == sorted(local, reverse=True)
    assert all(step.lp_distance == pytest.approx(2.0) for step in result.steps)


def test_result_serialises(shells, leb, quad):
    data = diagnose("escaping-mass", shells, leb, quad, length=8).to_dict()
    assert data["verdict"] == "support-violation"
    assert len(data["per_step"]) == 8
    # K_9 does not exist, so the last member stays on K_8
    assert data["per_step"][-1]["support_index"] == "unbounded"


def test_unknown_family(shells):
    with pytest.raises(ValidationError, match="leaking-to-k2"):
        build_family("leaking-to-k3x", shells, 5)
    assert "stalled" in known_families()


def test_family_needs_two_regions():
    with pytest.raises(PreconditionError):
        build_family("stalled", make_shell_partition(1, 1, 1.0), 3)


def test_bad_length(shells):
    with pytest.raises(ValidationError):
        build_family("stalled", shells, 0)


def test_unbounded_target_is_rejected(shells, leb, quad):
    sequence, _ = build_family("stalled", shells, 3)
    target = FunctionHandle.indicator(shells.region(8))
    with pytest.raises(PreconditionError):
        strict_convergence_diagnostic(sequence, target, shells, leb, 2.0, 1e-9, quad)


def test_empty_sequence(shells, leb, quad):
    with pytest.raises(PreconditionError):
        strict_convergence_diagnostic([], FunctionHandle.zero(), shells, leb, 2.0, 1e-9, quad)


def test_limits_agree(shells, leb, quad):
    target = FunctionHandle.indicator(shells.region(1))
    sequence, _ = build_family("leaking-to-k2", shells, 3)
    assert limits_agree(target, FunctionHandle.indicator(shells.region(1)), shells, leb, 2.0, quad)
    assert not limits_agree(target, sequence[-1], shells, leb, 2.0, quad)
