"""Verification checks: correct verdicts on true identities and detection of broken ones."""

import cmath
import math
from fractions import Fraction

import pytest

from alegenus import genus, numeric, special, verify
from alegenus.rings import QQ
from alegenus.series import FormalLaurentSeries, TruncatedQSeries
from alegenus.verify import Sample, Status

SAMPLES = verify.sample_points(8, 3, 2)


def _report_invariants(rep):
    if rep.status is Status.PASS:
        if rep.max_deviation is not None and rep.tolerance is not None:
            assert rep.max_deviation < rep.tolerance
        assert not rep.mismatches
    if rep.status is Status.FLAGGED:
        assert rep.notes


# -- samples ------------------------------------------------------------------------
def test_samples_deterministic_and_in_range():
    a = verify.sample_points(10, 7, 3)
    b = verify.sample_points(10, 7, 3)
    assert a == b
    for s in a:
        assert 0.8 <= s.tau.imag <= 1.5 and abs(s.tau.real) <= 0.5
    circle = verify.sample_points(5, 1, 2, circle=True)
    assert all(s.t2 == -s.t1 for s in circle)


def test_samples_avoid_lattice():
    data = genus.fixed_point_data(4)
    for s in verify.sample_points(20, 11, 4):
        for j in range(4):
            for which in (0, 1):
                assert genus.lattice_distance(data.pairing(j, which, s.t1, s.t2), s.tau) >= 0.05


# -- HI identity ---------------------------------------------------------------------
def test_hi_identity_passes():
    rep = verify.check_hi_identity(6, 8)
    assert rep.status is Status.PASS
    _report_invariants(rep)


def test_hi_identity_named_coefficients():
    lhs, rhs, _, _ = verify.hi_identity_sides(6, 8)
    p_hat = special.weierstrass_P_hat_wseries(6, 12)
    assert lhs.coefficient(2) == -p_hat
    g4 = FormalLaurentSeries.constant(special.QSERIES_QQ, special.g_hat(2, 6).scale(3))
    assert lhs.coefficient(4) == g4
    assert rhs.coefficient(4) == g4
    for k in (1, 3, 5, 7):
        assert lhs.coefficient(k).is_zero()


def test_hi_identity_detects_a_perturbation():
    lhs, rhs, _, _ = verify.hi_identity_sides(4, 6)
    bump = FormalLaurentSeries.constant(special.QSERIES_QQ, TruncatedQSeries.monomial(QQ, 2, 1))
    mism, _ = verify._w_mismatches(4, lhs.coefficient(4), rhs.coefficient(4) + bump)
    assert mism and mism[0]["q"] == "2"


def test_hi_identity_preconditions():
    with pytest.raises(ValueError):
        verify.check_hi_identity(4, 2)
    with pytest.raises(ValueError):
        verify.check_hi_identity(4, 5)


# -- beta recursion ---------------------------------------------------------------------
def test_beta_recursion_values():
    rep = verify.check_beta_recursion(8, 4)
    assert rep.status is Status.PASS
    betas = rep.values["betas"]
    assert betas[4] == special.g_hat(2, 8).scale(3)
    assert betas[6] == special.g_hat(3, 8).scale(5)


def test_beta_recursion_detects_wrong_eisenstein(monkeypatch):
    real = special.g_hat
    monkeypatch.setattr(verify, "g_hat", lambda k, q: real(k, q).scale(2))
    assert verify.check_beta_recursion(4, 3).status is Status.FAIL


def test_beta_recursion_precondition():
    with pytest.raises(ValueError):
        verify.check_beta_recursion(4, 1)


# -- P difference ---------------------------------------------------------------------
def test_P_difference_flags_printed_sign():
    rep = verify.check_P_difference(SAMPLES)
    assert rep.status is Status.FLAGGED
    assert rep.max_deviation < 1e-9
    assert abs(rep.values["literal_ratio"][0] + 1) < 1e-9
    _report_invariants(rep)


def test_P_difference_limits():
    tau, z = 0.1 + 1.1j, 0.21 + 0.13j
    th = lambda x: numeric.theta1_numeric(tau, x)  # noqa: E731
    rhs = lambda t: (2 * math.pi) ** 2 * (th(z) / numeric.eta_numeric(tau) ** 3) ** -2 * th(z + t) * th(z - t) / th(t) ** 2  # noqa: E731
    lhs = lambda t: numeric.wp_numeric(tau, t) - numeric.wp_numeric(tau, z)  # noqa: E731
    # z -> t: both vanish
    t = z + 1e-9
    assert abs(lhs(t)) < 1e-6 and abs(rhs(t)) < 1e-6
    # t -> 0: both ~ 1/t^2
    t = 1e-4 * (1 + 1j)
    assert abs(lhs(t) * t * t - 1) < 1e-6
    assert abs(rhs(t) * t * t - 1) < 1e-6


def test_P_difference_rejects_degenerate_samples():
    bad = [Sample(0.1 + 1.1j, 0.2 + 0.1j, 0.2 + 0.1j, -0.1)]
    with pytest.raises(ValueError):
        verify.check_P_difference(bad)


# -- modular laws -----------------------------------------------------------------------
def test_modular_laws_r2():
    reports = verify.check_modular_laws(2, SAMPLES)
    assert len(reports) == 8
    by_name = {r.check_name: r for r in reports}
    assert by_name["modular_law[z+tau]"].status is Status.FLAGGED
    for r in reports:
        assert r.max_deviation < 1e-9
        _report_invariants(r)


@pytest.mark.parametrize("r", [1, 3])
def test_modular_laws_other_r(r):
    reports = verify.check_modular_laws(r, verify.sample_points(5, 2, r))
    assert all(rep.status is not Status.FAIL for rep in reports)


def test_circle_restriction_consistent_with_full_laws():
    circle = verify.sample_points(6, 4, 2, circle=True)
    reports = verify.check_modular_laws(2, circle)
    assert all(rep.status is Status.PASS for rep in reports)
    for s in circle:
        # on t2 = -t1 the printed and derived z+tau factors coincide
        assert abs(verify._z_tau_factor_printed(s) / verify._z_tau_factor_derived(s) - 1) < 1e-12
        assert abs(genus.equivariant_genus_numeric(2, s.tau, s.z, s.t1, s.t2)
                   - genus.genus_circle_numeric(2, s.tau, s.z, s.t1)) < 1e-12


def test_modular_law_detects_a_wrong_factor(monkeypatch):
    laws = dict(verify.MODULAR_LAWS)
    transform, _ = laws["t1+tau"]
    laws["t1+tau"] = (transform, lambda s: cmath.exp(-2j * math.pi * s.z))
    monkeypatch.setattr(verify, "MODULAR_LAWS", laws)
    reports = {r.check_name: r for r in verify.check_modular_laws(2, SAMPLES[:3])}
    assert reports["modular_law[t1+tau]"].status is Status.FAIL


# -- poles ------------------------------------------------------------------------------
def test_richardson_recovers_simple_residue():
    p = 0.3 + 0.2j
    f = lambda t: 2.5 / (t - p) + cmath.exp(t) + t ** 3  # noqa: E731
    assert abs(verify.residue_estimate(f, p, 1e-2) - 2.5) < 1e-8


def test_richardson_sees_no_residue_of_analytic_function():
    f = lambda t: cmath.sin(t) / (1 + t * t)  # noqa: E731
    assert abs(verify.residue_estimate(f, 0.4, 1e-2)) < 1e-9


def test_scan_r2_spec_candidates():
    tau, z, t2 = 0.12 + 1.05j, 0.31 + 0.17j, 0.137 + 0.291j
    cands = {(c.j, c.m, c.n): c for c in verify.scan_poles(2, t2, tau, z)}
    assert cands[(1, 0, 0)].verdict == "cancels"
    assert cands[(2, 1, 0)].verdict == "genuine pole"
    assert cands[(2, 1, 0)].point == tau / 2


def test_scan_r3_all_lower_candidates_cancel():
    cands = verify.scan_poles(3, 0.137 + 0.291j, 0.12 + 1.05j, 0.31 + 0.17j, j_range=[1, 2])
    assert cands and all(c.verdict == "cancels" for c in cands)


@pytest.mark.parametrize("r", [2, 3])
def test_pole_structure_stable_under_halving(r):
    rep = verify.check_pole_structure(r)
    assert rep.status is Status.PASS
    assert rep.values["min_genuine_residue"] > 1e-3
    assert rep.max_deviation < 1e-6


def test_genuine_pole_residue_independent_of_probe():
    tau, z, t2 = 0.12 + 1.05j, 0.31 + 0.17j, 0.137 + 0.291j
    f = lambda t1: genus.equivariant_genus_numeric(2, tau, z, t1, t2, pole_tolerance=0)  # noqa: E731
    a = verify.residue_estimate(f, tau / 2, 1e-3)
    b = verify.residue_estimate(f, tau / 2, 5e-4)
    assert abs(a - b) < 1e-8 * abs(a)


# -- ellipticity ---------------------------------------------------------------------
def test_b2g_ellipticity():
    rep = verify.check_b2g_ellipticity(2, 3, SAMPLES[:4])
    assert rep.status is Status.PASS
    for key in ("b2:z+1", "b2:z+tau", "b2:S", "b4:S", "b6:S", "b4:z-independence", "b6:z-independence"):
        assert rep.values[key] < 1e-8


def test_b2_weight_two_fails_with_weight_zero():
    s = SAMPLES[0]
    b = verify.b_numeric(2, 1, s.tau, s.z)
    b_s = verify.b_numeric(2, 1, -1 / s.tau, s.z / s.tau)
    assert abs(b_s / (s.tau ** 2 * b) - 1) < 1e-9
    assert abs(b_s / b - 1) > 1e-3


# -- Jacobi index -----------------------------------------------------------------------
def test_index_of_known_forms():
    k3 = verify.measure_jacobi_index(genus.k3_numeric, SAMPLES[:4])
    assert abs(k3.index - 1) < 1e-6 and k3.weight == 0
    sq = verify.measure_jacobi_index(lambda t, z: genus.k3_numeric(t, z) ** 2, SAMPLES[:4])
    assert abs(sq.index - 2) < 1e-6 and sq.weight == 0
    th = verify.measure_jacobi_index(genus.theta_over_eta3_sq_numeric, SAMPLES[:4])
    assert abs(th.index - 1) < 1e-6 and th.weight == -2


def test_regularized_index_is_flagged_against_claim():
    index, rep = verify.check_jacobi_index("Z_reg", lambda t, z: genus.regularized_numeric(2, t, z),
                                           SAMPLES[:4], claimed_index=2, expected_weight=0)
    assert rep.status is Status.FLAGGED
    assert abs(index - 1) < 1e-6


# -- exact genus checks ----------------------------------------------------------------
@pytest.mark.parametrize("r", [1, 2])
def test_alpha0_flags_printed_eta_power(r):
    rep = verify.check_alpha0(r, 6)
    assert rep.status is Status.FLAGGED and not rep.mismatches


def test_expansion_theorem():
    assert verify.check_expansion_theorem(3, 6, 8).status is Status.PASS


def test_regularized_report_ratio():
    rep = verify.check_regularized(3, 4)
    assert rep.values["ratio_to_k3"] == Fraction(1, 8)
    assert not rep.mismatches


def test_special_identity_checks():
    for rep in (verify.check_eisenstein(), verify.check_eulerian(), verify.check_log_expansion()):
        assert rep.status is Status.PASS


def test_P_representations():
    assert verify.check_P_representations(SAMPLES[:3]).status is Status.PASS


# -- convergence ------------------------------------------------------------------------
@pytest.mark.filterwarnings("ignore::alegenus.numeric.ConvergenceWarning")
def test_deviation_shrinks_with_q_order():
    devs = [verify.check_theta_laws(SAMPLES[:4], q_order=n).max_deviation for n in (1, 2, 4)]
    assert devs[0] > devs[1] > devs[2]


def test_deviation_does_not_grow_from_20_to_40():
    for check in (verify.check_theta_laws, verify.check_P_difference):
        d20 = check(SAMPLES, q_order=20).max_deviation
        d40 = check(SAMPLES, q_order=40).max_deviation
        assert d40 <= max(d20, 1e-13)
    m20 = max(r.max_deviation for r in verify.check_modular_laws(2, SAMPLES, q_order=20))
    m40 = max(r.max_deviation for r in verify.check_modular_laws(2, SAMPLES, q_order=40))
    assert m40 <= max(m20, 1e-13)


# -- suite ------------------------------------------------------------------------------
def test_run_suite_has_no_failures_and_is_sorted():
    reports = verify.run_suite(2, seed=1, q_order=6, v_order=6, n_samples=6)
    names = [r.check_name for r in reports]
    assert names == sorted(names)
    assert all(r.status is not Status.FAIL for r in reports)
    flagged = {r.check_name for r in reports if r.status is Status.FLAGGED}
    assert {"P_difference", "modular_law[z+tau]", "alpha0[r=2]"} <= flagged
    for r in reports:
        _report_invariants(r)


def test_custom_tolerances_are_honoured():
    rep = verify.check_theta_laws(SAMPLES[:2], tolerances={"theta": 1e-30})
    assert rep.status is Status.FAIL
