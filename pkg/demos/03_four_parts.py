"""
Four positive parts
===================

Any form-valued measure is a combination E = P0 + i P1 - P2 - i P3 of four
positive ones.  The real and imaginary parts are each split with their own
diagonal scaling.
"""

# %%
import numpy as np

from sfmkit import decompose, random_sfm, strictify, verify_decomposition

rng = np.random.default_rng(2)
E = random_sfm(rng, N=4, M=3)
dec = decompose(E)
for line in verify_decomposition(E, dec).lines():
    print(line)

# %% A positive input stays in part 0.
P = random_sfm(rng, N=4, M=3, kind="positive")
parts = decompose(P).parts
print("part sizes for a positive input:", [float(np.abs(p.forms).max()) for p in parts])

# %% strictify adds eps E0 to parts 0 and 2, so nothing changes in the sum
# but sum_k P_k(Omega) is now bounded below by eps.
strict = strictify(E, dec, eps=0.1)
rep = verify_decomposition(E, strict)
print("residual after strictify:", rep.residual)
print("smallest eigenvalue of sum_k P_k(Omega):", np.linalg.eigvalsh(strict.strictness()).min())
