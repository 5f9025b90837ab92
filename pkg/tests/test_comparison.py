import math
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bfix import (
    ComparisonFunction,
    DomainError,
    EVIDENCE_AGAINST,
    EVIDENCE_FOR,
    ParameterError,
    RangeError,
    berinde_membership_check,
    berinde_min_term,
    berinde_min_term_profile,
    check_comparison_axioms,
    example_phi,
    function_from_name,
    gamma_summability_report,
    iterate,
    linear,
    list_function_templates,
    majorization_check,
    power_decay_orbit,
    power_gap_check,
    quadratic_gap,
)

radii = st.floats(min_value=0.0, max_value=50.0,
                  allow_nan=False, allow_infinity=False)


# --- evaluation wrapper -------------------------------------------------


def test_negative_input_rejected():
    with pytest.raises(DomainError):
        example_phi()(-1e-9)


def test_bad_outputs_rejected():
    negative = ComparisonFunction(fn=lambda t: -1.0, label="bad")
    with pytest.raises(RangeError):
        negative(1.0)
    blowup = ComparisonFunction(fn=lambda t: math.inf, label="worse")
    with pytest.raises(RangeError):
        blowup(1.0)


def test_iterate_basics():
    phi = linear(0.5)
    assert iterate(phi, 0, 8.0) == 8.0
    assert iterate(phi, 3, 8.0) == 1.0
    with pytest.raises(ParameterError):
        iterate(phi, -1, 1.0)


@settings(max_examples=100, deadline=None)
@given(r=radii, m=st.integers(0, 10), n=st.integers(0, 10))
def test_iterate_composes(r, m, n):
    phi = example_phi()
    assert iterate(phi, m + n, r) == iterate(phi, n, iterate(phi, m, r))


# --- builtin functions --------------------------------------------------


def test_example_value_at_break_is_exact():
    phi = example_phi()
    # the break point and its image are dyadic rationals, exact in binary
    assert Fraction(27, 64) - Fraction(27, 64) ** Fraction(4, 3) == Fraction(27, 256)
    assert phi(27.0 / 64.0) == 27.0 / 256.0
    assert phi(27.0 / 64.0) - 27.0 / 256.0 == 0.0


def test_example_is_flat_past_the_break():
    phi = example_phi()
    assert phi(0.5) == 27.0 / 256.0
    assert phi(100.0) == 27.0 / 256.0
    assert phi(0.0) == 0.0


@settings(max_examples=200, deadline=None)
@given(r=st.floats(min_value=1e-40, max_value=10.0))
def test_example_shrinks_positive_inputs(r):
    # near 2**-156 the gap r**(4/3) drops under one ulp of r and the
    # strict inequality is lost to rounding, so tiny inputs are excluded
    phi = example_phi()
    assert phi(r) < r


def test_quadratic_gap_matches_example_at_its_parameters():
    phi = example_phi()
    gap = quadratic_gap(1.0, 4.0 / 3.0)
    for r in [0.0, 0.01, 0.1, 0.3, 27.0 / 64.0, 0.6, 2.0]:
        assert gap(r) == pytest.approx(phi(r), rel=1e-9, abs=1e-15)


def test_builtin_parameter_validation():
    with pytest.raises(ParameterError):
        linear(-0.1)
    with pytest.raises(ParameterError):
        quadratic_gap(0.0, 2.0)
    with pytest.raises(ParameterError):
        quadratic_gap(1.0, 1.0)


def test_function_from_name():
    assert function_from_name("example_phi").label == "example_phi"
    assert function_from_name("linear(0.5)")(2.0) == 1.0
    assert function_from_name(" quadratic_gap( 1 , 1.5 ) ")(0.04) == \
        pytest.approx(0.04 - 0.04 ** 1.5)
    for bad in ["nope", "linear", "linear(a)", "linear(1,2)", "()"]:
        with pytest.raises(ParameterError):
            function_from_name(bad)
    assert list_function_templates() == [
        "example_phi", "linear(c)", "quadratic_gap(a,alpha)"]


# --- axiom evidence -----------------------------------------------------


def test_axioms_accept_example():
    # iterates decay cubically, so reaching 1e-9 needs about 3000 steps
    grid = [0.0, 0.01, 0.1, 0.3, 0.42, 1.0, 5.0]
    report = check_comparison_axioms(example_phi(), grid, horizon=5000,
                                     tol=1e-9)
    assert report.verdict == EVIDENCE_FOR


def test_axioms_reject_identity_and_growth():
    grid = [0.0, 0.5, 1.0]
    at_identity = check_comparison_axioms(linear(1.0), grid, horizon=100,
                                          tol=1e-12)
    assert at_identity.verdict == EVIDENCE_AGAINST
    assert "shrink" in at_identity.data["witnesses"]
    growing = check_comparison_axioms(linear(2.0), grid, horizon=2000,
                                      tol=1e-12)
    assert growing.verdict == EVIDENCE_AGAINST
    assert "decay" in growing.data["witnesses"]


def test_axioms_rejects_bad_grid():
    with pytest.raises(ParameterError):
        check_comparison_axioms(example_phi(), [], 10, 1e-9)
    with pytest.raises(ParameterError):
        check_comparison_axioms(example_phi(), [1.0, 0.5], 10, 1e-9)


# --- weighted summability ----------------------------------------------


def test_summability_verdicts_flip_with_the_exponent():
    phi = example_phi()
    # iterates decay like 27/n**3, so the weighted series behaves like
    # sum n**(gamma-3): convergent below exponent 2, divergent above
    assert gamma_summability_report(phi, 1.6, 0.1, 20000).verdict == EVIDENCE_FOR
    assert gamma_summability_report(phi, 2.5, 0.1, 20000).verdict == EVIDENCE_AGAINST


def test_summability_flags_explosive_iterates():
    report = gamma_summability_report(linear(2.0), 2.0, 0.1, 10000)
    assert report.verdict == EVIDENCE_AGAINST
    assert "overflow_at" in report.data


def test_summability_parameter_checks():
    with pytest.raises(ParameterError):
        gamma_summability_report(example_phi(), 0.0, 0.1, 100)
    with pytest.raises(DomainError):
        gamma_summability_report(example_phi(), 2.0, -0.1, 100)
    with pytest.raises(ParameterError):
        gamma_summability_report(example_phi(), 2.0, 0.1, 1)


# --- power-gap check ----------------------------------------------------


def test_power_gap_holds_for_example():
    report = power_gap_check(example_phi(), alpha=4.0 / 3.0, a=1.0,
                             eps=27.0 / 64.0, grid_size=2001)
    assert report.verdict == EVIDENCE_FOR
    assert report.data["witness"] is None


def test_power_gap_rejects_overstated_coefficient():
    report = power_gap_check(example_phi(), alpha=4.0 / 3.0, a=1.2,
                             eps=0.4, grid_size=500)
    assert report.verdict == EVIDENCE_AGAINST
    assert report.data["witness"] is not None


# --- scaled decay orbit -------------------------------------------------


def test_power_decay_orbit_approaches_cubed_target():
    report = power_decay_orbit(a=1.0, alpha=4.0 / 3.0, x0=0.1, n_max=10000)
    assert report.target == pytest.approx(27.0, rel=1e-9)
    by_n = {n: scaled for n, _, scaled in report.samples}
    assert by_n[100] == pytest.approx(18.966, abs=0.05)
    assert by_n[1000] == pytest.approx(25.675, abs=0.05)
    assert by_n[10000] == pytest.approx(26.827, abs=0.05)


def test_power_decay_orbit_quadratic_case():
    # alpha = 2 gives the classic 1/n decay with scaled limit 1
    report = power_decay_orbit(a=1.0, alpha=2.0, x0=0.5, n_max=10000)
    assert report.samples[-1][2] == pytest.approx(1.0, abs=0.01)


def test_power_decay_orbit_validation():
    with pytest.raises(ParameterError):
        power_decay_orbit(a=1.0, alpha=2.0, x0=2.0, n_max=100)  # leaves [0, inf)
    with pytest.raises(ParameterError):
        power_decay_orbit(a=1.0, alpha=2.0, x0=-0.1, n_max=100)
    with pytest.raises(ParameterError):
        power_decay_orbit(a=1.0, alpha=2.0, x0=0.5, n_max=100,
                          checkpoints=[200])


# --- berinde minimum terms ----------------------------------------------


def test_berinde_min_terms_diverge_for_example():
    profile = berinde_min_term_profile(example_phi(), a=0.99, b=1.1, r0=0.4,
                                       n_max=300)
    assert all(v == 0.0 for v in profile[:22])
    assert profile[22] > 0.0
    first_large = next(n for n, v in enumerate(profile) if v > 1000.0)
    assert first_large == 237
    assert profile[237] == pytest.approx(1079.77, rel=1e-3)
    # single-term and profile evaluations group the products differently
    assert berinde_min_term(example_phi(), 0.99, 1.1, 0.4, 237) == \
        pytest.approx(profile[237], rel=1e-12)


def test_berinde_min_term_validation():
    phi = example_phi()
    with pytest.raises(ParameterError):
        berinde_min_term(phi, 1.0, 1.1, 0.4, 3)
    with pytest.raises(ParameterError):
        berinde_min_term(phi, 0.5, 1.0, 0.4, 3)
    with pytest.raises(DomainError):
        berinde_min_term(phi, 0.5, 1.1, -0.4, 3)
    with pytest.raises(ParameterError):
        berinde_min_term(phi, 0.5, 1.1, 0.4, -1)


# --- majorization and class reduction -----------------------------------


def test_majorization_constant_mode_accepts_easy_case():
    b_seq = [1.0 / n ** 3 for n in range(1, 201)]
    report = majorization_check(linear(0.5), b_seq, gamma=1.5, r=1.0,
                                horizon=200, a=0.6)
    assert report.verdict == EVIDENCE_FOR
    assert report.data["premise_witness"] is None


def test_majorization_detects_premise_failure():
    b_seq = [1e-9 / n ** 3 for n in range(1, 101)]
    report = majorization_check(linear(0.9), b_seq, gamma=1.5, r=1.0,
                                horizon=100, a=0.5)
    assert report.verdict == EVIDENCE_AGAINST
    assert report.data["premise_witness"] is not None


def test_majorization_power_mode():
    b_seq = [0.5 ** n for n in range(1, 101)]
    report = majorization_check(linear(0.5), b_seq, gamma=1.5, r=1.0,
                                horizon=100, eps=0.5)
    assert report.verdict == EVIDENCE_FOR


def test_majorization_mode_validation():
    b_seq = [0.5 ** n for n in range(1, 11)]
    phi = linear(0.5)
    with pytest.raises(ParameterError):
        majorization_check(phi, b_seq, 1.5, 1.0, 10)
    with pytest.raises(ParameterError):
        majorization_check(phi, b_seq, 1.5, 1.0, 10, a=0.5, eps=0.5)
    with pytest.raises(ParameterError):
        majorization_check(phi, b_seq, 1.5, 1.0, 10, a=1.5)
    with pytest.raises(ParameterError):
        majorization_check(phi, b_seq, 1.5, 1.0, 10, eps=-1.0)
    with pytest.raises(ParameterError):
        majorization_check(phi, [0.0] * 10, 1.5, 1.0, 10, a=0.5)


def test_berinde_membership_requires_summable_terms():
    with pytest.raises(ParameterError) as err:
        berinde_membership_check(linear(0.5), a=0.9, b=1.2,
                                 b_seq=[1.0] * 200, gamma=2.0, r=1.0,
                                 horizon=200)
    assert "summable" in str(err.value)


def test_berinde_membership_positive_path():
    b_seq = [0.5 ** n for n in range(1, 61)]
    report = berinde_membership_check(linear(0.5), a=0.9, b=1.2, b_seq=b_seq,
                                      gamma=2.0, r=1.0, horizon=60)
    assert report.verdict == EVIDENCE_FOR
    assert report.data["via"] == "berinde(b=1.2)"
    assert report.claim == "gamma-summable(gamma=2)"


def test_berinde_membership_detects_inequality_failure():
    b_seq = [1e-6 * 0.5 ** n for n in range(1, 61)]
    report = berinde_membership_check(linear(0.9), a=0.5, b=1.05, b_seq=b_seq,
                                      gamma=2.0, r=1.0, horizon=60)
    assert report.verdict == EVIDENCE_AGAINST
    assert report.data["inequality_witness"] is not None


def test_berinde_membership_needs_enough_terms():
    with pytest.raises(ParameterError):
        berinde_membership_check(linear(0.5), a=0.9, b=1.2, b_seq=[0.5, 0.25],
                                 gamma=2.0, r=1.0, horizon=10)
