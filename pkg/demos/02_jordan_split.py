"""
Eigenvalues by deflation and the Jordan split
=============================================

deflate_diagonalize peels off the eigenvalue of largest modulus, subtracts
its rank-one piece and repeats.  The signed frame g_k = sqrt|lambda_k| phi_k
splits a Hermitian matrix into two orthogonal positive parts.
"""

# %%
import numpy as np

from sfmkit import deflate_diagonalize, jordan_split, signed_frame

swap = np.array([[0, 1], [1, 0]], dtype=complex)
eig = deflate_diagonalize(swap)
print("swap eigenvalues:", eig.values)  # the tie goes to +1 first

# %% A random Hermitian matrix.
rng = np.random.default_rng(1)
X = rng.normal(size=(6, 6)) + 1j * rng.normal(size=(6, 6))
A = X + X.conj().T
eig = deflate_diagonalize(A)
print("moduli, largest first:", np.round(np.abs(eig.values), 4))
print("LAPACK:               ", np.round(sorted(np.abs(np.linalg.eigvalsh(A)))[::-1], 4))

# %%
frame = signed_frame(eig)
Tp, Tm = jordan_split(frame)
print("positive / negative frame sizes:", len(frame.positive), len(frame.negative))
print("|A - (T+ - T-)| =", np.abs(A - Tp + Tm).max())
print("|T+ T-|         =", np.abs(Tp @ Tm).max())
print("min eig T+, T-  =", np.linalg.eigvalsh(Tp).min(), np.linalg.eigvalsh(Tm).min())
