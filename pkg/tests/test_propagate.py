import math

import numpy as np
import pytest

from covlind import (
    Channel,
    DensityMatrix,
    DissipatorSpec,
    JCParams,
    Superoperator,
    TimeGrid,
    build_dissipator,
    commutator_super,
    detailed_balance_rates,
    evolve_static,
    evolve_timedep,
    expectation_series,
    fidelity_series,
    fixed_point,
    instantaneous_attractor,
    jc_eigenoperators,
    jc_semiclassical_hamiltonian,
    jc_semiclassical_propagator,
    liouvillian,
    qubit_ops,
    static_eigenoperators,
    uhlmann_fidelity,
)
from covlind.bath import BathSpec, jc_kinetic_coefficients
from covlind.errors import ContractError, DimensionError

Q = qubit_ops()
EXCITED = DensityMatrix.from_ket([0, 1])
GROUND = DensityMatrix.from_ket([1, 0])


def damping_liouvillian(gamma=1.0, omega=0.0):
    spec = DissipatorSpec(channels=[Channel(Q["sm"], gamma)])
    return liouvillian(0.5 * omega * Q["sz"], build_dissipator(spec))


class TestTimeGrid:
    def test_validation(self):
        with pytest.raises(ContractError):
            TimeGrid(1.0, 0.5, 10)
        with pytest.raises(ContractError):
            TimeGrid(0.0, 1.0, 0)

    def test_times(self):
        g = TimeGrid(0.0, 1.0, 4)
        assert np.allclose(g.times(), [0, 0.25, 0.5, 0.75, 1.0])
        assert g.dt == 0.25


class TestEvolveStatic:
    def test_zero_generator_constant(self):
        traj = evolve_static(Superoperator.zero(2), EXCITED, TimeGrid(0, 1, 10))
        for st in traj.states:
            assert np.max(np.abs(st.data - EXCITED.data)) < 1e-14

    def test_amplitude_damping_decay(self):
        traj = evolve_static(damping_liouvillian(1.0), EXCITED, TimeGrid(0, 5, 200))
        pops = np.array([st.data[1, 1].real for st in traj.states])
        assert np.max(np.abs(pops - np.exp(-traj.times))) < 1e-8

    def test_converges_to_detailed_balance_fixed_point(self):
        beta, omega, gamma = 1.0, 1.0, 1.0
        eset = static_eigenoperators(0.5 * omega * Q["sz"])
        down = [(op, f) for op, f, inv in zip(eset.ops, eset.freqs,
                                              eset.invariant_flags) if not inv and f > 0][0]
        (gd, gu), = detailed_balance_rates([down[1]], beta, [gamma])
        spec = DissipatorSpec(channels=[Channel(down[0], gd, gu)])
        l_super = liouvillian(0.5 * omega * Q["sz"], build_dissipator(spec))
        traj = evolve_static(l_super, EXCITED, TimeGrid(0, 20 / gamma, 400))
        target = fixed_point(spec, eset).state
        dist = np.max(np.abs(traj.states[-1].data - target.data))
        assert dist < 1e-6

    def test_trace_and_hermiticity_preserved(self):
        traj = evolve_static(damping_liouvillian(0.7, omega=1.3), EXCITED,
                             TimeGrid(0, 4, 100))
        for st in traj.states:
            assert abs(np.trace(st.data) - 1) < 1e-8
            assert np.max(np.abs(st.data - st.data.conj().T)) < 1e-9

    def test_semigroup_composition(self):
        l_super = damping_liouvillian(0.5, omega=0.8)
        full = evolve_static(l_super, EXCITED, TimeGrid(0, 2.0, 8)).states[-1]
        half = evolve_static(l_super, EXCITED, TimeGrid(0, 1.2, 6)).states[-1]
        rest = evolve_static(l_super, half, TimeGrid(1.2, 2.0, 2)).states[-1]
        assert np.max(np.abs(full.data - rest.data)) < 1e-10


class TestEvolveTimedep:
    def test_static_consistency(self):
        l_super = damping_liouvillian(0.8, omega=1.1)
        grid = TimeGrid(0, 3, 600)
        a = evolve_static(l_super, EXCITED, grid)
        b = evolve_timedep(lambda t: l_super, EXCITED, grid)
        assert np.max(np.abs(a.states[-1].data - b.states[-1].data)) < 1e-8

    def test_rabi_matches_closed_form(self):
        p = JCParams(1.0, 1.2, 0.2, 1.5 * np.exp(0.4j))
        zero = Superoperator.zero(2)

        def l_of_t(t):
            return liouvillian(jc_semiclassical_hamiltonian(t, p), zero)

        grid = TimeGrid(0.0, 6.0, 3000)
        traj = evolve_timedep(l_of_t, GROUND, grid)
        u = jc_semiclassical_propagator(6.0, p)
        expected = u @ GROUND.data @ u.conj().T
        assert np.max(np.abs(traj.states[-1].data - expected)) < 1e-7

    def test_attractor_distance_decreases_in_rotating_frame(self):
        p = JCParams.with_rabi(1.0, 0.1, 0.6, 2.0)
        bath = BathSpec(temperature=0.6, model="ohmic", eta=0.35, omega_cut=15.0)
        g0, gm, gp = jc_kinetic_coefficients(p, bath)
        f_plus, f_minus, w = jc_eigenoperators(p)
        target = instantaneous_attractor([(f_minus(0.0), gm, gp)]).state

        def l_of_t(t):
            spec = DissipatorSpec(
                channels=[Channel(f_minus(t), gm, gp)],
                dephasing_invariant=([w(t)], [[g0]]))
            return liouvillian(jc_semiclassical_hamiltonian(t, p),
                               build_dissipator(spec))

        grid = TimeGrid(0.0, 30.0, 6000)
        traj = evolve_timedep(l_of_t, GROUND, grid)
        dists = []
        for t, st in zip(traj.times[::1000], traj.states[::1000]):
            u = jc_semiclassical_propagator(t, p)
            rot = u.conj().T @ st.data @ u
            dists.append(np.max(np.abs(rot - target.data)))
        assert all(b < a + 1e-12 for a, b in zip(dists, dists[1:]))
        assert dists[-1] < 0.05 * dists[0]

    def test_step_halving_order(self):
        l_super = damping_liouvillian(0.9, omega=1.7)
        coarse = evolve_timedep(lambda t: l_super, EXCITED, TimeGrid(0, 2, 40))
        fine = evolve_timedep(lambda t: l_super, EXCITED, TimeGrid(0, 2, 160))
        exact = evolve_static(l_super, EXCITED, TimeGrid(0, 2, 1)).states[-1]
        err_c = np.max(np.abs(coarse.states[-1].data - exact.data))
        err_f = np.max(np.abs(fine.states[-1].data - exact.data))
        assert err_c / err_f >= 8.0
        assert coarse.metadata["step_halving_error"] > 0

    def test_expm_mode(self):
        l_super = damping_liouvillian(0.6, omega=0.9)
        grid = TimeGrid(0, 2, 100)
        a = evolve_timedep(lambda t: l_super, EXCITED, grid, mode="expm")
        b = evolve_static(l_super, EXCITED, grid)
        assert np.max(np.abs(a.states[-1].data - b.states[-1].data)) < 1e-12

    def test_rejects_trace_violating_generator(self):
        bad = Superoperator(np.eye(4, dtype=complex), 2)
        with pytest.raises(ContractError):
            evolve_timedep(lambda t: bad, EXCITED, TimeGrid(0, 1, 10))


class TestSeries:
    def test_identity_expectation(self):
        traj = evolve_static(damping_liouvillian(0.5), EXCITED, TimeGrid(0, 2, 20))
        vals = expectation_series(traj, np.eye(2))
        assert np.max(np.abs(vals - 1.0)) < 1e-10

    def test_resonant_rabi_sigma_z(self):
        p = JCParams.with_rabi(1.0, 0.0, 2.0, 4.0)
        zero = Superoperator.zero(2)

        def l_of_t(t):
            return liouvillian(jc_semiclassical_hamiltonian(t, p), zero)

        grid = TimeGrid(0.0, 2 * math.pi, 4000)
        traj = evolve_timedep(l_of_t, GROUND, grid)
        vals = expectation_series(traj, Q["sz"])
        assert np.max(np.abs(vals - (-np.cos(p.rabi * traj.times)))) < 1e-6

    def test_w_constant_on_free_evolution(self):
        p = JCParams(1.0, 1.25, 0.24, 1.7 * np.exp(0.6j))
        _, _, w = jc_eigenoperators(p)
        rho0 = DensityMatrix.from_ket([1, 0.6])
        times = np.linspace(0.0, 9.0, 40)
        vals = []
        for t in times:
            u = jc_semiclassical_propagator(t, p)
            vals.append(np.trace(w(t).data @ (u @ rho0.data @ u.conj().T)).real)
        assert np.max(np.abs(np.array(vals) - vals[0])) < 1e-8

    def test_fidelity_series_identical(self):
        traj = evolve_static(damping_liouvillian(0.5), EXCITED, TimeGrid(0, 1, 10))
        assert np.max(np.abs(fidelity_series(traj, traj) - 1.0)) < 1e-10

    def test_fidelity_series_orthogonal(self):
        grid = TimeGrid(0, 1, 5)
        a = evolve_static(Superoperator.zero(2), EXCITED, grid)
        b = evolve_static(Superoperator.zero(2), GROUND, grid)
        assert np.max(fidelity_series(a, b)) < 1e-10

    def test_fidelity_series_grid_mismatch(self):
        a = evolve_static(Superoperator.zero(2), EXCITED, TimeGrid(0, 1, 5))
        b = evolve_static(Superoperator.zero(2), EXCITED, TimeGrid(0, 1, 6))
        with pytest.raises(DimensionError):
            fidelity_series(a, b)

    def test_hermitian_observable_gives_real(self):
        traj = evolve_static(damping_liouvillian(0.4, omega=0.5), EXCITED,
                             TimeGrid(0, 1, 10))
        vals = expectation_series(traj, Q["sx"])
        assert vals.dtype.kind == "f"


class TestPositivityMonitor:
    def test_invalid_generator_breaches_positivity(self):
        from covlind.gkls import lindblad_term
        # a negative-rate channel is not CPTP; the monitor must flag it
        bad = -1.0 * lindblad_term(Q["sm"], 1.0)
        from covlind.errors import PositivityError
        with pytest.raises(PositivityError):
            evolve_timedep(lambda t: bad, EXCITED, TimeGrid(0, 4.0, 200))
