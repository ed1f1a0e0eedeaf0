"""Acceptance matrix: one test per criterion, each at its stated tolerance and runtime budget."""

import pytest

from clocus import verify

SMOOTHNESS_SHORTFALL = (
    "random four-view quartics over GF(11) are smooth in roughly 55-60% of seeds; "
    "the 9/10 threshold is not reachable without choosing seeds (see the decisions ledger)"
)

CRITERIA = [
    pytest.param(1, verify.check_expected_formulas, id="c01-expected-formulas"),
    pytest.param(2, verify.check_measured_invariants, id="c02-measured-invariants"),
    pytest.param(3, verify.check_center_containment, id="c03-center-containment"),
    pytest.param(4, verify.check_grassmann_vanishing, id="c04-grassmann-vanishing"),
    pytest.param(5, verify.check_bounds_classifier, id="c05-bounds-classifier"),
    pytest.param(6, verify.check_singular_space, id="c06-singular-space"),
    pytest.param(7, verify.check_plucker, id="c07-plucker"),
    pytest.param(8, verify.check_round_trips, id="c08-round-trips"),
    pytest.param(9, verify.check_residual_cubic, id="c09-residual-cubic"),
    pytest.param(
        10,
        verify.check_smoothness_proxy,
        id="c10-smoothness-proxy",
        marks=pytest.mark.xfail(strict=True, reason=SMOOTHNESS_SHORTFALL),
    ),
    pytest.param(11, verify.check_oracle_equivalence, id="c11-oracle-equivalence"),
]


@pytest.mark.parametrize("number,check", CRITERIA)
def test_criterion(number, check, acceptance_log):
    result = check(verify.DEFAULT_SEED)
    status = "PASS" if result.passed and result.within_budget else "FAIL"
    line = f"criterion {number:>2} {status}  [{result.tag}] {result.detail} ({result.elapsed:.2f}s of {result.budget:g}s)"
    acceptance_log.append((number, line))
    print(line)
    assert result.number == number
    assert result.within_budget, f"runtime {result.elapsed:.2f}s exceeds {result.budget}s"
    assert result.passed, result.detail
