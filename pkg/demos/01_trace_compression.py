"""
Compressing a form-valued measure into a trace-class measure
============================================================

A measure whose values are sesquilinear forms need not be bounded.  Scaling
by a positive diagonal D turns it into an operator measure F = D E D whose
atoms have finite trace norm, and F factors as mu_j T_j with ||T_j||_1 = 1.
"""

# %%
import numpy as np

from sfmkit import compress, density, evaluate, random_sfm, scaling_weights, trace_norm

rng = np.random.default_rng(0)
E = random_sfm(rng, N=5, M=3, scale=3.0)
print("atoms:", E.labels)

# %% The weights d_m shrink with m and with the size of the entries seen so far.
D, delta = scaling_weights(E)
print("d =", np.round(D.weights, 5))
print("delta =", delta)

# %% Trace norms of the compressed atoms add up to at most delta.
F = compress(E, D)
print("mu =", np.round(F.mu, 5), " sum =", F.mu.sum())
assert F.mu.sum() <= delta + 1e-12

# %% The density T_j has unit trace norm and F(X) = sum over X of mu_j T_j.
T = density(F)
print("||T_j||_1 =", [round(trace_norm(t), 12) for t in T.forms])

X = [E.labels[0], E.labels[2]]
lhs = evaluate(E, X, D.apply(np.eye(5)[1]), D.apply(np.eye(5)[3]))
rhs = F.value(X)[1, 3]
print("E_X(De_1, De_3) =", np.round(lhs, 10), " <e_1|F(X)e_3> =", np.round(rhs, 10))

# %% A different alpha sequence gives a different, equally valid D.
D2, delta2 = scaling_weights(E, alpha=lambda m: 0.1 ** (m + 1))
print("alpha_m = 0.1^(m+1): d =", np.round(D2.weights, 7), "delta =", delta2)
