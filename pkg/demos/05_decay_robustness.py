# %% [markdown]
# # Rydberg decay
#
# Each |r> decays to |0> and |1> at gamma/2 with gamma = 1/tau. The
# antiblockade gate parks half of |11> in |rr> on average; the Stark gate
# only populates |r> virtually, at the (Omega0/2 omega)^2 level.

# %%
import math

from rydrab import IntegratorConfig, JumpOperators, SystemParams, full_hamiltonian, propagate_lindblad, qalg
from rydrab.metrics import GateTarget, reference_state, state_fidelity_mixed

psi = reference_state()
for tau in (40.0, 100.0):
    for label, p in (("RAB", SystemParams.rab(tau=tau)), ("broken", SystemParams.broken(tau=tau))):
        traj = propagate_lindblad(full_hamiltonian(p), qalg.density(psi), JumpOperators.for_params(p),
                                  IntegratorConfig.for_params(p, snapshots=50))
        f = state_fidelity_mixed(traj.final, psi, GateTarget.cz())
        print(f"tau = {tau:5.0f} us  {label:6s}  F = {f:.5f}")

# %% A rough budget for the antiblockade gate: 0.45 of |Psi'> sits on |11>,
# half a cycle in |rr> on average, and |rr> decays at 2 gamma.
print(f"estimated RAB decay loss at tau = 100 us: {0.45 * 0.5 * 2 * 1.4 / 100:.4f}")
