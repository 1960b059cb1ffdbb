import math
import warnings

import numpy as np
import pytest
from scipy import integrate, optimize

from rydrab import IntegratorConfig, model, propagate_pure, qalg
from rydrab.model import (
    EffectiveModelWarning,
    PulseShape,
    SystemParams,
    mhz,
)

TWO_PI = 2 * math.pi


def test_pulse_amplitude_cosine(broken):
    T = broken.gate_duration
    assert model.pulse_amplitude(0.0, broken) == 0.0
    assert model.pulse_amplitude(T / 2, broken) == pytest.approx(broken.omega0_max)
    assert model.pulse_amplitude(T, broken) == pytest.approx(0.0, abs=1e-12)


def test_pulse_amplitude_constant(rab):
    assert np.all(model.pulse_amplitude(np.linspace(0, rab.gate_duration, 7), rab) == mhz(10))


def test_pulse_amplitude_out_of_range(rab):
    with pytest.raises(ValueError):
        model.pulse_amplitude(rab.gate_duration * 1.01, rab)
    with pytest.raises(ValueError):
        model.pulse_amplitude(-0.1, rab)


def test_vdw_strength():
    p = SystemParams(mhz(10), mhz(35), 1.0, c6=mhz(56.2e6), distance=10.0)
    assert model.vdw_strength(p) == pytest.approx(mhz(56.2))
    assert model.vdw_strength(p.replace(distance=20.0)) == pytest.approx(mhz(56.2) / 64)
    assert model.vdw_strength(p.replace(vdw_override=3.0)) == 3.0


def test_distance_for_broken_target(broken):
    # root-solved with brentq on C6/d^6 = 2 pi x 78 MHz
    assert model.broken_distance(broken) == pytest.approx(9.46833507570952, rel=1e-12)
    assert model.vdw_strength(broken) == pytest.approx(mhz(78.0))


def test_rab_distance(rab):
    assert model.rab_vdw(rab.omega0_max, rab.mod_freq) == pytest.approx(mhz(1460 / 21))
    assert model.rab_distance(rab) == pytest.approx(9.651625431339403, rel=1e-12)
    assert model.rab_vdw(0.0, mhz(35)) == 2 * mhz(35)


def test_unphysical_distance_raises():
    p = SystemParams(mhz(10), mhz(35), 1.0, delta=-mhz(80))
    with pytest.raises(ValueError):
        model.broken_distance(p)


@pytest.mark.parametrize("name", ["omega0_max", "mod_freq", "distance", "tau", "gate_duration"])
def test_params_reject_non_positive(name):
    kw = dict(omega0_max=1.0, mod_freq=1.0, gate_duration=1.0)
    kw[name] = 0.0
    with pytest.raises(ValueError):
        SystemParams(**kw)


def test_full_hamiltonian_elements(rab, rng):
    H = model.full_hamiltonian(rab)
    v = model.vdw_strength(rab)
    i = qalg.index
    for t in rng.uniform(0, rab.gate_duration, 8):
        h = H(t)
        omega_t = model.rabi_frequency(t, rab)
        assert h[i("rr"), i("rr")] == pytest.approx(v)
        assert h[i("11"), i("1r")] == pytest.approx(omega_t / 2)
        for s in ("00", "01", "0r", "10", "r0"):
            row = h[i(s)].copy()
            row[i(s)] = 0
            # a |0> atom is never driven; only the partner atom's flip remains
            undriven = [k for k, lab in enumerate(qalg.BASIS_LABELS)
                        if sum(a != b for a, b in zip(lab, s)) != 1 or "0" not in lab]
            assert np.all(row[undriven] == 0)
        assert h[i("00")].any() == False  # noqa: E712


def test_hamiltonians_hermitian(rab, broken, rng):
    builders = [model.full_hamiltonian, model.pair_hamiltonian, model.sector_hamiltonian,
                model.effective_hamiltonian, model.final_effective_hamiltonian]
    for p in (rab, broken.replace(delta=mhz(8))):
        for build in builders:
            with warnings.catch_warnings():
                warnings.simplefilter("ignore", EffectiveModelWarning)
                H = build(p)
            for t in rng.uniform(0, p.gate_duration, 64):
                assert qalg.is_hermitian(H(t), atol=1e-12)


def test_full_hamiltonian_block_diagonal(broken, rng):
    H = model.full_hamiltonian(broken)
    blocks = [["11", "1r", "r1", "rr"], ["00"], ["01", "0r"], ["10", "r0"]]
    label = {}
    for b, group in enumerate(blocks):
        for s in group:
            label[qalg.index(s)] = b
    for t in rng.uniform(0, broken.gate_duration, 16):
        h = H(t)
        for r, c in zip(*np.nonzero(h)):
            assert label[r] == label[c]


def test_sector_hamiltonian_elements(rab):
    H = model.sector_hamiltonian(rab)
    h0 = H(0.0)
    assert h0[0, 1] == pytest.approx(rab.omega0_max / math.sqrt(2))
    assert h0[2, 2] == pytest.approx(-rab.omega0_max**2 / (6 * rab.mod_freq))


def test_sector_frame_equivalence(rab):
    """Rotating-frame three-state evolution equals the lab pair block."""
    # the rotated frame oscillates at up to 3 omega, so refine the step
    cfg = IntegratorConfig.for_params(rab, steps_per_period=1600, snapshots=101)
    lab = propagate_pure(model.pair_hamiltonian(rab), np.array([1, 0, 0, 0], complex), cfg)
    rot = propagate_pure(model.sector_hamiltonian(rab), np.array([1, 0, 0], complex), cfg)
    sym = np.stack([lab.states[:, 0], (lab.states[:, 1] + lab.states[:, 2]) / math.sqrt(2),
                    lab.states[:, 3]], axis=1)
    antisym = (lab.states[:, 1] - lab.states[:, 2]) / math.sqrt(2)
    corrected = rot.states.copy()
    corrected[:, 2] *= np.exp(-2j * rab.mod_freq * rot.times)
    np.testing.assert_allclose(corrected, sym, atol=1e-8)
    assert np.abs(antisym).max() < 1e-12


def test_effective_constants(rab):
    omega_eff = model.effective_rabi(rab.omega0_max, rab.mod_freq)
    assert omega_eff == pytest.approx(mhz(100 / 140))
    assert rab.gate_duration == pytest.approx(1.4)
    h = model.effective_hamiltonian(rab)(0.3)
    assert h[1, 1] == pytest.approx(0.0, abs=1e-12)
    assert h[0, 1] == pytest.approx(omega_eff / 2)


def test_effective_rabi_formula(rab):
    cfg = IntegratorConfig.for_params(rab)
    traj = propagate_pure(model.effective_hamiltonian(rab), np.array([1, 0], complex), cfg)
    omega_eff = model.effective_rabi(rab.omega0_max, rab.mod_freq)
    np.testing.assert_allclose(traj.population(1), np.sin(omega_eff * traj.times / 2) ** 2, atol=1e-10)


def test_validity_warning():
    p = SystemParams(mhz(20), mhz(35), 1.0, delta=mhz(8))
    with pytest.warns(EffectiveModelWarning):
        H = model.effective_hamiltonian(p)
    assert not H.valid
    q = SystemParams.rab()
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        assert model.effective_hamiltonian(q).valid


def test_final_effective(broken):
    H = model.final_effective_hamiltonian(broken)
    np.testing.assert_array_equal(H(0.0), np.zeros((2, 2)))
    peak = H(broken.gate_duration / 2)[0, 0].real
    assert peak == pytest.approx(-mhz(0.01594387755102041), rel=1e-12)


def test_stark_warning(broken):
    with pytest.warns(EffectiveModelWarning):
        H = model.final_effective_hamiltonian(broken.replace(delta=mhz(1)))
    assert not H.valid


def _numeric_phase(p, T):
    def rate(t):
        env = p.omega0_max * (1 - math.cos(TWO_PI * t / T)) / 2
        return (env**2 / (4 * p.mod_freq)) ** 2 / (4 * p.delta)
    return integrate.quad(rate, 0, T, epsabs=1e-13, epsrel=1e-13, limit=200)[0]


def test_accumulated_phase_matches_quadrature(broken):
    T = broken.gate_duration
    for frac in (0.1, 0.37, 0.5, 0.81, 1.0):
        p = broken.replace(gate_duration=T)
        t = frac * T

        def rate(s):
            return model.effective_rabi(model.pulse_amplitude(s, p), p.mod_freq) ** 2 / (4 * p.delta)

        expected = integrate.quad(rate, 0, t, epsabs=1e-13, epsrel=1e-13, limit=200)[0]
        assert model.accumulated_phase(t, p) == pytest.approx(expected, abs=1e-10)
    full = 35 * broken.omega0_max**4 * T / (8192 * broken.mod_freq**2 * broken.delta)
    assert model.accumulated_phase(T, broken) == pytest.approx(full, rel=1e-12)


def test_gate_duration_for_phase(broken):
    T = model.gate_duration_for_phase(math.pi, broken)
    # bisection on the quadrature phase gives 114.688 us
    assert T == pytest.approx(114.68800000000066, rel=1e-10)
    assert abs(_numeric_phase(broken, T) - math.pi) < 1e-6
    assert model.gate_duration_for_phase(2 * math.pi, broken) == pytest.approx(2 * T, rel=1e-14)


def test_gate_duration_bisection(broken):
    root = optimize.bisect(lambda T: _numeric_phase(broken, T) - math.pi, 50, 200, xtol=1e-10)
    assert model.gate_duration_for_phase(math.pi, broken) == pytest.approx(root, abs=1e-8)


def test_gate_duration_coefficient():
    assert model.COSINE_DURATION_COEFF == pytest.approx(234.057142857, rel=1e-10)
    assert round(model.COSINE_DURATION_COEFF, 0) == 234


def test_gate_duration_needs_cosine(rab):
    with pytest.raises(ValueError):
        model.gate_duration_for_phase(math.pi, rab)
    with pytest.raises(ValueError):
        model.gate_duration_for_phase(-1.0, rab.replace(pulse_shape=PulseShape.COSINE, delta=1.0))
