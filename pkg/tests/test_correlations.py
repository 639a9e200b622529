import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qubitpair.correlations import (
    DiscordBreakdown,
    MeasurementParams,
    binary_entropy,
    classical_correlation,
    classical_correlation_xstate,
    concurrence_general,
    concurrence_xstate,
    conditional_entropy_measured,
    discord_xstate,
    entanglement_of_formation,
    mutual_information,
    quantum_discord,
    reduced_state,
    von_neumann_entropy,
    xstate_conditional_entropy,
    xstate_total_correlation,
)
from qubitpair.errors import FormulaInconsistencyError, InvalidStateError
from qubitpair.model import ModelParams, XState, thermal_state
from qubitpair.propagator import evolve_closed_form

from conftest import bloch_directions, random_density_matrix, random_xstate, xstates

SINGLET = XState(p00=0.0, p10=0.5, p01=0.5, p11=0.0, coh=-0.5 + 0j)


def werner(p: float) -> np.ndarray:
    return p * SINGLET.to_matrix() + (1 - p) * np.eye(4, dtype=complex) / 4


class TestEntropy:
    def test_pure_state_has_zero_entropy(self):
        assert von_neumann_entropy(SINGLET.to_matrix()) == pytest.approx(0.0, abs=1e-12)

    def test_maximally_mixed(self):
        assert von_neumann_entropy(np.eye(4) / 4) == pytest.approx(2.0, rel=1e-14)

    def test_reference_spectrum(self):
        rho = np.diag([0.5, 0.25, 0.125, 0.125]).astype(complex)
        assert von_neumann_entropy(rho) == pytest.approx(1.75, rel=1e-14)

    def test_rejects_negative_eigenvalue(self):
        rho = np.diag([0.7, 0.5, -0.2, 0.0]).astype(complex)
        with pytest.raises(InvalidStateError):
            von_neumann_entropy(rho)

    def test_clamps_tiny_negative_noise(self):
        rho = np.diag([1.0, -1e-9, 0.0, 0.0]).astype(complex)
        assert von_neumann_entropy(rho) == pytest.approx(0.0, abs=1e-7)


class TestReducedState:
    def test_product_state(self):
        rho = np.zeros((4, 4), dtype=complex)
        rho[0, 0] = 1.0  # |00><00|
        for which in ("A", "B"):
            red = reduced_state(rho, which)
            assert np.allclose(red, [[1, 0], [0, 0]])

    def test_singlet_marginals_maximally_mixed(self):
        for which in ("A", "B"):
            assert np.allclose(reduced_state(SINGLET.to_matrix(), which), np.eye(2) / 2)

    def test_marginal_population_convention(self, rng):
        # A groups (rho11+rho22, rho33+rho44); B groups (rho11+rho33, rho22+rho44)
        x = random_xstate(rng)
        red_a = reduced_state(x.to_matrix(), "A")
        red_b = reduced_state(x.to_matrix(), "B")
        assert red_a[0, 0].real == pytest.approx(x.p00 + x.p10, rel=1e-14)
        assert red_b[0, 0].real == pytest.approx(x.p00 + x.p01, rel=1e-14)

    def test_against_index_contraction_oracle(self, rng):
        rho = random_density_matrix(rng)
        # independent contraction with explicit loops
        expect_a = np.zeros((2, 2), dtype=complex)
        expect_b = np.zeros((2, 2), dtype=complex)
        for a in range(2):
            for a2 in range(2):
                for b in range(2):
                    expect_a[a, a2] += rho[b + 2 * a, b + 2 * a2]
                    expect_b[a, a2] += rho[a + 2 * b, a2 + 2 * b]
        assert np.abs(reduced_state(rho, "A") - expect_a).max() < 1e-14
        assert np.abs(reduced_state(rho, "B") - expect_b).max() < 1e-14

    def test_rejects_unknown_subsystem(self, rng):
        with pytest.raises(ValueError):
            reduced_state(random_density_matrix(rng), "C")


class TestConcurrence:
    def test_singlet_maximal(self):
        assert concurrence_general(SINGLET.to_matrix()) == pytest.approx(1.0, abs=1e-12)
        assert concurrence_xstate(SINGLET) == 1.0

    def test_product_state_zero(self):
        rho = np.zeros((4, 4), dtype=complex)
        rho[0, 0] = 1.0
        assert concurrence_general(rho) == 0.0

    def test_diagonal_xstate_zero(self):
        x = XState(p00=0.4, p10=0.3, p01=0.2, p11=0.1, coh=0j)
        assert concurrence_xstate(x) == 0.0

    def test_werner_oracle_value(self):
        # Wootters spectrum gives max(0, (3p-1)/2) for this family
        assert concurrence_general(werner(0.5)) == pytest.approx(0.25, abs=1e-12)
        assert concurrence_general(werner(0.2)) == 0.0

    def test_xstate_fast_form_matches_general(self, rng):
        worst = 0.0
        for _ in range(500):
            x = random_xstate(rng)
            worst = max(worst, abs(concurrence_xstate(x) - concurrence_general(x.to_matrix())))
        assert worst <= 1e-12

    def test_thermal_reference_point(self):
        x = thermal_state(0.1, ModelParams(coupling_k=50.0))
        assert concurrence_xstate(x) == pytest.approx(
            concurrence_general(x.to_matrix()), abs=1e-12
        )

    def test_matches_direct_spinflip_eigenvalue_route(self, rng):
        # independent cross-check of the production route against the
        # textbook non-normal eigensolve
        from qubitpair.model import SIGMA_Y

        syy = np.kron(SIGMA_Y, SIGMA_Y)
        for _ in range(200):
            rho = random_density_matrix(rng)
            w = np.linalg.eigvals(rho @ (syy @ rho.conj() @ syy))
            assert np.abs(w.imag).max() < 1e-8
            lam = np.sort(np.sqrt(np.clip(w.real, 0.0, None)))[::-1]
            direct = max(0.0, lam[0] - lam[1] - lam[2] - lam[3])
            assert concurrence_general(rho) == pytest.approx(direct, abs=1e-8)

    def test_rejects_nonhermitian_input(self):
        from qubitpair.errors import NumericalFailureError

        rho = np.eye(4, dtype=complex) / 4
        rho[0, 1] = 0.3
        with pytest.raises(NumericalFailureError):
            concurrence_general(rho)


class TestEof:
    def test_endpoints(self):
        assert entanglement_of_formation(0.0) == 0.0
        assert entanglement_of_formation(1.0) == pytest.approx(1.0, rel=1e-12)

    def test_reference_value(self):
        assert entanglement_of_formation(0.5) == pytest.approx(
            0.35457890266526988, rel=1e-12
        )

    def test_monotone_in_concurrence(self):
        grid = np.linspace(0.0, 1.0, 401)
        values = [entanglement_of_formation(c) for c in grid]
        assert (np.diff(values) >= 0).all()

    def test_rejects_out_of_range(self):
        with pytest.raises(ValueError):
            entanglement_of_formation(1.5)


class TestMutualInformation:
    def test_product_state(self):
        rho_a = np.diag([0.7, 0.3]).astype(complex)
        rho_b = np.diag([0.2, 0.8]).astype(complex)
        assert mutual_information(np.kron(rho_a, rho_b)) == pytest.approx(0.0, abs=1e-12)

    def test_singlet(self):
        assert mutual_information(SINGLET.to_matrix()) == pytest.approx(2.0, abs=1e-12)

    def test_against_dense_entropy_oracle(self):
        x = thermal_state(1.0, ModelParams(coupling_k=1.0))
        rho = x.to_matrix()

        def entropy(m):
            lam = np.clip(np.linalg.eigvalsh(m), 0.0, None)
            lam = lam[lam > 0]
            return float(-(lam * np.log2(lam)).sum())

        expected = entropy(reduced_state(rho, "A")) + entropy(reduced_state(rho, "B")) - entropy(rho)
        assert mutual_information(rho) == pytest.approx(expected, abs=1e-10)
        assert xstate_total_correlation(x) == pytest.approx(expected, abs=1e-10)

    def test_bounded_by_marginal_entropies(self, rng):
        for _ in range(25):
            rho = random_density_matrix(rng)
            s_a = von_neumann_entropy(reduced_state(rho, "A"))
            s_b = von_neumann_entropy(reduced_state(rho, "B"))
            mi = mutual_information(rho)
            assert -1e-9 <= mi <= 2 * min(s_a, s_b) + 1e-9


class TestConditionalEntropy:
    def test_classical_diagonal_state_z_measurement(self):
        # nondisturbing measurement: classical conditional entropy comes out
        p = np.array([0.4, 0.3, 0.2, 0.1])
        x = XState(p00=p[0], p10=p[1], p01=p[2], p11=p[3], coh=0j)
        rho = x.to_matrix()
        got = conditional_entropy_measured(rho, [0.0, 0.0, 1.0])
        # outcome b=0 keeps {|00>, |01>}: A-distribution (p00, p01)/pb0
        pb0, pb1 = p[0] + p[2], p[1] + p[3]
        expected = pb0 * binary_entropy(p[0] / pb0) + pb1 * binary_entropy(p[1] / pb1)
        assert got == pytest.approx(expected, abs=1e-12)

    def test_singlet_any_direction(self, rng):
        for _ in range(10):
            v = rng.normal(size=3)
            v /= np.linalg.norm(v)
            assert conditional_entropy_measured(SINGLET.to_matrix(), v) == pytest.approx(
                0.0, abs=1e-10
            )

    def test_rotation_equivalence_oracle(self, rng):
        # rotate B by the matching unitary, then measure along z
        theta = math.pi / 3
        mp_ = MeasurementParams.from_bloch_angles(theta, 0.0)
        x = random_xstate(rng)
        rho = x.to_matrix()
        direct = conditional_entropy_measured(rho, mp_.bloch_direction)
        v = mp_.unitary()
        rotated = np.kron(np.eye(2), v.conj().T) @ rho @ np.kron(np.eye(2), v)
        via_rotation = conditional_entropy_measured(rotated, [0.0, 0.0, 1.0])
        assert direct == pytest.approx(via_rotation, abs=1e-12)

    def test_rejects_unnormalised_direction(self, rng):
        with pytest.raises(ValueError):
            conditional_entropy_measured(random_density_matrix(rng), [0.0, 0.0, 0.9])


class TestMeasurementParams:
    def test_normalisation_enforced(self):
        with pytest.raises(ValueError):
            MeasurementParams(w=1.0, y1=0.5, y2=0.0, y3=0.0)

    def test_z_measurement(self):
        mp_ = MeasurementParams.from_bloch_angles(0.0, 0.0)
        assert (mp_.k, mp_.l, mp_.m) == (1.0, 0.0, 0.0)
        assert np.allclose(mp_.bloch_direction, [0, 0, 1])

    def test_x_measurement(self):
        mp_ = MeasurementParams.from_bloch_angles(math.pi / 2, 0.0)
        assert mp_.k == pytest.approx(0.5, rel=1e-15)
        assert mp_.l == pytest.approx(0.5, rel=1e-15)
        assert np.allclose(mp_.bloch_direction, [1, 0, 0], atol=1e-15)

    def test_k_plus_l_is_one_and_m_bounded(self):
        for theta, phi in [(0.3, 1.0), (1.2, 4.0), (math.pi / 2, 2.2)]:
            mp_ = MeasurementParams.from_bloch_angles(theta, phi)
            assert mp_.k + mp_.l == pytest.approx(1.0, abs=1e-12)
            assert 0.0 <= mp_.m <= mp_.k * mp_.l + 1e-12

    def test_direction_round_trip(self):
        for theta, phi in [(0.4, 0.7), (1.0, 3.0), (1.5, 5.5)]:
            mp_ = MeasurementParams.from_bloch_angles(theta, phi)
            back = MeasurementParams.from_direction(mp_.bloch_direction)
            assert np.allclose(back.bloch_direction, mp_.bloch_direction, atol=1e-12)


class TestXstateFastPath:
    def test_z_measurement_on_diagonal_state(self):
        p = np.array([0.4, 0.3, 0.2, 0.1])
        x = XState(p00=p[0], p10=p[1], p01=p[2], p11=p[3], coh=0j)
        mp_ = MeasurementParams.from_bloch_angles(0.0, 0.0)
        got = xstate_conditional_entropy(x, mp_)
        expected = conditional_entropy_measured(x.to_matrix(), [0, 0, 1.0])
        assert got == pytest.approx(expected, abs=1e-12)

    def test_x_measurement_on_singlet(self):
        mp_ = MeasurementParams.from_bloch_angles(math.pi / 2, 0.0)
        assert xstate_conditional_entropy(SINGLET, mp_) == pytest.approx(0.0, abs=1e-10)

    def test_matches_brute_force_on_thermal_state(self):
        x = thermal_state(0.1, ModelParams(coupling_k=50.0))
        mp_ = MeasurementParams.from_bloch_angles(math.pi / 2, 0.0)
        ref = conditional_entropy_measured(x.to_matrix(), mp_.bloch_direction)
        assert xstate_conditional_entropy(x, mp_) == pytest.approx(ref, abs=1e-12)

    def test_linear_term_variant_deviates_and_flags(self):
        x = thermal_state(0.1, ModelParams(coupling_k=50.0))
        mp_ = MeasurementParams.from_bloch_angles(math.pi / 4, math.pi / 2)  # m > 0
        ref = conditional_entropy_measured(x.to_matrix(), mp_.bloch_direction)
        try:
            alt = xstate_conditional_entropy(x, mp_, include_linear_term=True)
            assert abs(alt - ref) > 1e-6
        except FormulaInconsistencyError:
            pass  # spread left [0, 1]: also an acceptable documented outcome

    def test_linear_term_variant_requires_real_coherence(self):
        x = XState(p00=0.25, p10=0.25, p01=0.25, p11=0.25, coh=0.1j)
        with pytest.raises(ValueError):
            xstate_conditional_entropy(
                x, MeasurementParams.from_bloch_angles(0.5, 0.5), include_linear_term=True
            )


class TestClassicalCorrelation:
    def test_product_state_zero(self):
        rho = np.kron(np.diag([0.6, 0.4]), np.diag([0.3, 0.7])).astype(complex)
        cc, _ = classical_correlation(rho)
        assert cc == pytest.approx(0.0, abs=1e-9)

    def test_singlet_one_bit(self):
        cc, _ = classical_correlation(SINGLET.to_matrix())
        assert cc == pytest.approx(1.0, abs=1e-9)

    def test_xstate_optimizer_matches_dense_grid_oracle(self, rng):
        # 10x the production grid resolution, no refinement
        x = random_xstate(rng)
        rho = x.to_matrix()
        s_a = von_neumann_entropy(reduced_state(rho, "A"))
        best = -math.inf
        for theta in np.linspace(0, math.pi / 2, 650):
            for phi in np.linspace(0, 2 * math.pi, 48, endpoint=False):
                n = [math.sin(theta) * math.cos(phi), math.sin(theta) * math.sin(phi), math.cos(theta)]
                best = max(best, s_a - conditional_entropy_measured(rho, n))
        cc, _ = classical_correlation(rho)
        assert cc >= best - 1e-9
        assert cc == pytest.approx(best, abs=1e-6)

    def test_fast_path_matches_brute_force(self, rng):
        for _ in range(10):
            x = random_xstate(rng)
            cc_fast, _ = classical_correlation_xstate(x)
            cc_brute, _ = classical_correlation(x.to_matrix())
            assert cc_fast == pytest.approx(cc_brute, abs=1e-9)


class TestDiscord:
    def test_diagonal_states_have_zero_discord(self, rng):
        for _ in range(5):
            p = rng.dirichlet(np.ones(4))
            x = XState(p00=p[0], p10=p[1], p01=p[2], p11=p[3], coh=0j)
            assert abs(discord_xstate(x).discord) <= 1e-9
            assert abs(quantum_discord(x.to_matrix()).discord) <= 1e-9

    def test_singlet_discord_one(self):
        assert discord_xstate(SINGLET).discord == pytest.approx(1.0, abs=1e-9)
        assert quantum_discord(SINGLET.to_matrix()).discord == pytest.approx(1.0, abs=1e-9)

    @pytest.mark.parametrize("alpha", [math.pi / 8, math.pi / 6, math.pi / 4])
    def test_pure_state_discord_is_marginal_entropy(self, alpha):
        c, s = math.cos(alpha), math.sin(alpha)
        psi = np.array([c, 0, 0, s], dtype=complex)
        rho = np.outer(psi, psi.conj())
        expected = binary_entropy(c * c)
        assert quantum_discord(rho).discord == pytest.approx(expected, abs=1e-8)

    def test_werner_independent_pipeline(self):
        # from-scratch route: dense measurement grid + raw eigenvalue sums
        rho = werner(0.5)

        def entropy(m):
            lam = np.clip(np.linalg.eigvalsh(m), 0.0, None)
            lam = lam[lam > 1e-15]
            return float(-(lam * np.log2(lam)).sum())

        s_a = entropy(reduced_state(rho, "A"))
        tc = s_a + entropy(reduced_state(rho, "B")) - entropy(rho)
        best = -math.inf
        for theta in np.linspace(0, math.pi / 2, 181):
            for phi in np.linspace(0, 2 * math.pi, 90, endpoint=False):
                n = [math.sin(theta) * math.cos(phi), math.sin(theta) * math.sin(phi), math.cos(theta)]
                best = max(best, s_a - conditional_entropy_measured(rho, n))
        expected = tc - best
        got = quantum_discord(rho)
        assert got.discord == pytest.approx(expected, abs=1e-6)

    def test_breakdown_identity_and_bounds(self):
        x = evolve_closed_form(0.1, 0.7, ModelParams(coupling_k=30.0))
        got = discord_xstate(x)
        assert got.discord == got.total_correlation - got.classical_correlation
        assert 0.0 <= got.classical_correlation <= got.total_correlation + 1e-9
        assert got.discord >= -1e-9

    def test_fast_vs_brute_on_model_states(self):
        worst = 0.0
        for beta in (0.05, 0.5):
            for k in (5.0, 40.0):
                params = ModelParams(coupling_k=k)
                for t in (0.0, 1.0):
                    x = evolve_closed_form(beta, t, params)
                    worst = max(
                        worst,
                        abs(discord_xstate(x).discord - quantum_discord(x.to_matrix()).discord),
                    )
        assert worst <= 1e-9

    def test_contrast_on_one_grid(self):
        # at beta=0.01, K=100 the entanglement dies at finite time while the
        # discord stays strictly positive on the same trajectory
        params = ModelParams(coupling_k=100.0)
        ts = np.linspace(0.0, 3.0, 61)
        eofs, qds = [], []
        for t in ts:
            x = evolve_closed_form(0.01, float(t), params)
            eofs.append(entanglement_of_formation(concurrence_xstate(x)))
            qds.append(discord_xstate(x).discord)
        assert min(qds) > 0.0
        assert 0.0 in eofs
        died = next(t for t, e in zip(ts, eofs) if e == 0.0)
        assert 1.0 < died < 2.0  # death time ~1.37 for these parameters


@settings(max_examples=30, deadline=None)
@given(x=xstates(), n=bloch_directions())
def test_conditional_entropy_antipodal_invariance(x, n):
    rho = x.to_matrix()
    a = conditional_entropy_measured(rho, n)
    b = conditional_entropy_measured(rho, -n)
    assert a == pytest.approx(b, abs=1e-12)


@settings(max_examples=30, deadline=None)
@given(x=xstates(), theta=st.floats(0.0, math.pi / 2), phi=st.floats(0.0, 2 * math.pi))
def test_fast_path_equals_brute_force_everywhere(x, theta, phi):
    mp_ = MeasurementParams.from_bloch_angles(theta, phi)
    fast = xstate_conditional_entropy(x, mp_)
    brute = conditional_entropy_measured(x.to_matrix(), mp_.bloch_direction)
    assert fast == pytest.approx(brute, abs=1e-11)


@settings(max_examples=20, deadline=None)
@given(x=xstates())
def test_concurrence_equivalence_property(x):
    # the singular-value route keeps absolute precision even on the PSD
    # boundary |coh|^2 = p10*p01, so no boundary allowance is needed
    assert concurrence_xstate(x) == pytest.approx(
        concurrence_general(x.to_matrix()), abs=1e-12
    )
