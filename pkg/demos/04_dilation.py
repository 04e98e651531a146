"""
Dilations and their equivalence
===============================

A decomposition into four positive parts gives a dilation: a space K split
into blocks (atom j, power k), a map J from C^N into K, the block projections
F(X), and W acting as i^k on block k.  Then <J phi|F(X) W J psi> = E_X(phi, psi).
"""

# %%
import numpy as np

from sfmkit import (associated_decomposition, build_dilation, decompose, equivalent,
                    random_sfm, strictify, verify_dilation)
from sfmkit.dilation import Dilation

rng = np.random.default_rng(3)
E = random_sfm(rng, N=3, M=2)
d = build_dilation(decompose(E))
print("block dimensions (atoms x k):")
print(d.dims)
for line in verify_dilation(d, E).lines():
    print(line)

# %% Reading the decomposition back out of the dilation.
assoc = associated_decomposition(d)
print("round-trip error:", max(np.abs(p.forms - q.forms).max()
                               for p, q in zip(decompose(E).parts, assoc.parts)))

# %% Rotate every block by a random unitary: still the same dilation up to equivalence.
def haar(n):
    Q, R = np.linalg.qr(rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n)))
    return Q * (np.diag(R) / np.abs(np.diag(R)))

rotated = Dilation(d.dim, d.labels, d.mu,
                   tuple(tuple(haar(b.shape[0]) @ b for b in row) for row in d.blocks))
flag, U = equivalent(d, rotated)
print("rotated copy equivalent:", flag)

# %% The strictified decomposition dilates E too, but not equivalently.
ds = build_dilation(strictify(E, eps=0.1))
print("strictified dilation verifies:", verify_dilation(ds, E).passed)
print("equivalent to the first one:", equivalent(d, ds)[0])
