"""Classical simulation of a qubit channel, noiseless and depolarized.

Simulates a trine measurement on two qubit states with a 2-state classical
mixture, then repeats with depolarization noise and checks that every
component state stays inside the noisy state set. Mutual information of the
components is printed next to the Holevo quantity as a diagnostic.
"""

import numpy as np

from chansim.certify import holevo_chi, mutual_information
from chansim.channels import Delta, mixture_matrix, protocol_matrix
from chansim.linalg import born_matrix
from chansim.simulate import simulate_quantum_noiseless, simulate_quantum_noisy

rng = np.random.default_rng(0)

trine = []
for t in range(3):
    angle = 2 * np.pi * t / 3
    vec = np.array([np.cos(angle / 2), np.sin(angle / 2)])
    trine.append((2.0 / 3.0) * np.outer(vec, vec).astype(complex))

psi = np.array([np.cos(0.3), np.sin(0.3)])
phi = np.array([np.cos(1.2), np.sin(1.2) * 1j])
states = [np.outer(psi, psi.conj()), np.outer(phi, phi.conj())]

a = born_matrix(trine, states)
print("Born matrix of the trine measurement on two qubit states:")
print(np.round(a, 6))

result = simulate_quantum_noiseless(trine, states)
print(f"\nnoiseless simulation: {len(result.mixture.terms)} protocols on 2 states,")
print(f"reconstruction residual {result.residual:.2e}")

q = np.array([0.5, 0.5])
chi = holevo_chi(states, q)
print(f"\ncomponent diagnostics (chi = {chi:.4f} bits):")
for w, prot in result.mixture.terms[:4]:
    info = mutual_information(protocol_matrix(prot), q)
    print(f"  weight {w:.3f}: decoder {prot.decoder.tolist()}, Info = {info:.4f} bits")
print(f"Info of the full mixture: {mutual_information(mixture_matrix(result.mixture), q):.4f}")

delta = 0.5
noisy_states = [(1 - delta) * s + (delta / 2) * np.eye(2) for s in states]
noisy = simulate_quantum_noisy(trine, noisy_states, Delta(delta))
floor = min(float(np.min(prot.states)) for _, prot in noisy.mixture.terms)
print(f"\ndepolarized (delta = {delta}) simulation residual: {noisy.residual:.2e}")
print(f"smallest component state entry {floor:.4f} >= delta/2 = {delta / 2}")
