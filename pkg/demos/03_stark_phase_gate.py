# %% [markdown]
# # Phase gate with the antiblockade broken
#
# Detuning the pair resonance by delta = V_vdw - 2 omega leaves only a Stark
# shift -Omega_eff^2/(4 delta) on |11>. A cosine envelope
# Omega_m (1 - cos(2 pi t / T)) / 2 accumulates phi = 35 Omega_m^4 T / (8192 omega^2 delta),
# so a CZ needs T = (8192/35) pi omega^2 delta / Omega_m^4.

# %%
import math

import numpy as np

from rydrab import GateTarget, IntegratorConfig, SystemParams, average_fidelity, full_hamiltonian
from rydrab import propagate_basis, qalg
from rydrab.metrics import phase_of_11
from rydrab.model import accumulated_phase

p = SystemParams.broken()
print(f"T = {p.gate_duration:.3f} us at d = {p.distance:.4f} um")

# %% One run of the four computational states gives both the phase and the fidelity.
basis = propagate_basis(full_hamiltonian(p), IntegratorConfig.for_params(p))
phase = phase_of_11(basis.overlaps[:, 3, 3])
pred = accumulated_phase(basis.times, p)
print(f"final phase - pi = {phase[-1] - math.pi:+.4f} rad, max deviation from Stark model {np.abs(phase - pred).max():.4f}")

f_avg = average_fidelity(basis.overlaps, GateTarget.cz())
print(f"F_avg(T) = {f_avg[-1]:.7f}")

# %% Arbitrary phases: halve the duration for a controlled-(pi/2) gate.
half = p.replace(gate_duration=p.gate_duration / 2)
m = propagate_basis(full_hamiltonian(half), IntegratorConfig.for_params(half)).overlaps[-1]
print(f"controlled-phase(pi/2) fidelity = {average_fidelity(m, GateTarget.controlled_phase(math.pi / 2)):.6f}")
print(f"|rr> population never exceeds {np.abs(basis.states[:, qalg.index('rr'), 3]).max() ** 2:.2e}")
