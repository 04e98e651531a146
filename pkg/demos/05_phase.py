"""
Phase-shift covariant measures on the circle
============================================

E(X) = sum c_mn (1/2pi) int_X e^{i(n-m)t} dt |e_m><e_n| on arcs of the circle.
With c all ones this is the canonical phase measure.  If c is not positive
semidefinite some states get negative "probabilities", though they still sum
to one.
"""

# %%
import numpy as np

from sfmkit import (ArcPartition, c_matrix, coherent_vector, find_negative_probability,
                    phase_sfm, probabilities)

N, M = 8, 16
part = ArcPartition.uniform(M, -np.pi / M)  # arc0 is centred on angle 0
E = phase_sfm(c_matrix("all-ones", N), part)
print("|E(Omega) - I| =", np.abs(E.value() - np.eye(N)).max())

# %% Coherent states with growing |z| concentrate around the angle -arg z
# (forms are antilinear in the first slot, which mirrors the circle).
for z in (0.5, 1.0, 2.0, 2.0j):
    p = probabilities(E, coherent_vector(z, N)).real
    print(f"z = {z!s:>5}: sum {p.sum():.12f}, peak {E.labels[np.argmax(p)]}, max {p.max():.3f}")

# %% c_01 = c_10 = 2 breaks positivity of the leading 2x2 block.
c = np.eye(N, dtype=complex)
c[0, 1] = c[1, 0] = 2
bad = phase_sfm(c, part)
value, j, state = find_negative_probability(bad)
print("most negative value found:", round(value, 4), "on", bad.labels[j])
print("total over all arcs for that state:", probabilities(bad, state).sum().real)
