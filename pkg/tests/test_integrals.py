import numpy as np
import pytest

from spincm import cm_dynamics, integrals, poisson


def test_free_case_matches_direct_determinant():
    st = cm_dynamics.CMState("compact", np.array([1.4, 0.1, -1.3]),
                             np.array([0.7, -0.2, 0.4]), np.zeros((3, 3)))
    tbl = integrals.extract(st)
    cp = np.poly(np.diag(st.p))
    for r in range(4):
        assert tbl.values[(r, 0)] == pytest.approx((-1) ** 3 * cp[r], abs=1e-12)
        for k in range(1, r + 1):
            assert abs(tbl.values[(r, k)]) < 1e-12


def test_leading_coefficient_convention():
    st = cm_dynamics.random_state(3, "compact", seed=0, spin_scale=0.6)
    tbl = integrals.extract(st)
    assert tbl.values[(0, 0)] == pytest.approx(-1.0, abs=1e-12)
    assert tbl.values[(1, 0)] == pytest.approx(np.sum(st.p), abs=1e-10)
    assert abs(tbl.values[(1, 1)]) < 1e-10  # vanishes on the reduced set


def test_fit_quality_with_oversampling():
    st = cm_dynamics.random_state(3, "compact", seed=1, spin_scale=0.6)
    tbl = integrals.extract(st)
    assert tbl.fit_residual < 1e-8
    assert tbl.condition < 1e4


def test_extract_requires_momentum_zero():
    st = cm_dynamics.random_state(3, "compact", seed=2, momentum_zero=False)
    with pytest.raises(ValueError):
        integrals.extract(st)


def test_reality_pattern_compact():
    worst = 0.0
    for seed in range(100):
        st = cm_dynamics.random_state(3, "compact", seed=seed, spin_scale=0.6)
        tbl = integrals.extract(st)
        for (r, k), v in tbl.values.items():
            if r == 0:
                continue
            worst = max(worst, abs(v.imag) if k % 2 == 0 else abs(v.real))
    assert worst < 1e-10


def test_sum_rules():
    # the single-odd-column rules hold as printed; from r = 3 on, only the
    # limit-matched combination (weights 4^-m) vanishes
    worst_low, worst_matched, smallest_r3 = 0.0, 0.0, np.inf
    for seed in range(100):
        st = cm_dynamics.random_state(3, "compact", seed=seed, spin_scale=0.6)
        tbl = integrals.extract(st)
        printed = integrals.sum_rule_residual(tbl)
        matched = integrals.limit_matching_residual(tbl)
        worst_low = max(worst_low, printed[0], printed[1])
        worst_matched = max(worst_matched, matched.max())
        smallest_r3 = min(smallest_r3, printed[2])
    assert worst_low < 1e-10
    assert worst_matched < 1e-10
    assert smallest_r3 > 1e-4  # the unweighted r=3 combination does not vanish


def test_free_case_sum_rules_trivial():
    st = cm_dynamics.CMState("compact", np.array([1.4, 0.1, -1.3]),
                             np.array([0.7, -0.2, 0.4]), np.zeros((3, 3)))
    assert integrals.sum_rule_residual(integrals.extract(st)).max() < 1e-14


def test_normal_form_even_in_spectral_kernel():
    worst = 0.0
    for seed in range(20):
        st = cm_dynamics.random_state(3, "normal", seed=seed, spin_scale=0.7)
        worst = max(worst, integrals.odd_column_residual(st))
    assert worst < 1e-10


def test_torus_invariance_of_extraction():
    st = cm_dynamics.random_state(3, "compact", seed=5, spin_scale=0.6)
    d = np.diag(np.exp(1j * np.array([0.9, -0.4, 1.7])))
    rotated = cm_dynamics.CMState("compact", st.q, st.p, d @ st.spin @ d.conj().T)
    t1, t2 = integrals.extract(st), integrals.extract(rotated)
    worst = max(abs(t1.values[key] - t2.values[key]) for key in t1.values)
    assert worst < 1e-10


def test_family_sizes():
    assert len(integrals.family_labels("compact", 2)) == integrals.expected_family_size("compact", 2) == 2
    assert len(integrals.family_labels("compact", 3)) == integrals.expected_family_size("compact", 3) == 4
    assert len(integrals.family_labels("normal", 3)) == integrals.expected_family_size("normal", 3) == 4
    assert integrals.family_labels("compact", 3) == [(1, 0), (2, 0), (3, 0), (3, 2)]
    assert integrals.family_labels("normal", 3) == [(1, 0), (2, 0), (3, 0), (3, 1)]


def test_independence_ranks():
    st2 = cm_dynamics.random_state(2, "compact", seed=11, spin_scale=0.8)
    st3 = cm_dynamics.random_state(3, "compact", seed=3, spin_scale=0.6)
    stn = cm_dynamics.random_state(3, "normal", seed=3, spin_scale=0.8)
    assert integrals.independence_rank(st2) == 2
    assert integrals.independence_rank(st3) == 4
    assert integrals.independence_rank(stn) == 4


def test_duplicated_member_does_not_change_rank():
    st = cm_dynamics.random_state(3, "compact", seed=3, spin_scale=0.6)
    labels = integrals.family_labels("compact", 3)
    assert integrals.independence_rank(st, labels=labels + [labels[0]]) == 4


def test_flow_invariance_of_integrals():
    st = cm_dynamics.random_state(3, "compact", seed=3, spin_scale=0.6)
    traj = cm_dynamics.integrate(st, 5.0, 1e-3, record_every=1000)
    labels = integrals.family_labels("compact", 3)
    vals = np.array([integrals.evaluate_family(s, labels) for s in traj.states])
    drift = np.abs(vals - vals[0]).max()
    assert drift < 1e-6 * max(1.0, np.abs(vals[0]).max())


def test_pairwise_involution():
    labels = integrals.family_labels("compact", 3)
    worst = 0.0
    for seed in range(5):
        st = cm_dynamics.random_state(3, "compact", seed=seed, spin_scale=0.6)
        for i, l1 in enumerate(labels):
            for l2 in labels[i + 1:]:
                worst = max(worst, integrals.involution_residual(st, l1, l2))
    assert worst < 1e-5


def test_involution_with_self_is_zero():
    st = cm_dynamics.random_state(3, "compact", seed=6, spin_scale=0.6)
    assert integrals.involution_residual(st, (2, 0), (2, 0)) == 0.0


def test_energy_commutes_with_family():
    st = cm_dynamics.random_state(3, "compact", seed=3, spin_scale=0.6)
    H = poisson.cm_energy_observable()
    for lab in integrals.family_labels("compact", 3):
        obs = integrals.integral_observable(*lab)
        assert abs(poisson.bracket("cm_stable", H, obs, st)) < 1e-5


def test_independence_ranks_four_particles():
    st = cm_dynamics.random_state(4, "compact", seed=1, spin_scale=0.7)
    assert integrals.independence_rank(st) == integrals.expected_family_size("compact", 4) == 7
    stn = cm_dynamics.random_state(4, "normal", seed=1, spin_scale=0.7)
    assert integrals.independence_rank(stn) == integrals.expected_family_size("normal", 4) == 6
