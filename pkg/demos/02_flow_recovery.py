"""The bracket flow finds the nilsoliton hiding in a skewed basis of l4."""

import numpy as np

from solvsoliton import corpus
from solvsoliton.brackets import act_dense
from solvsoliton.curvature import soliton_test
from solvsoliton.derivations import derivation_algebra
from solvsoliton.flow import compact_stabilizer_dim, flow, numerical_derivation_dim

mu = corpus.L4
rng = np.random.default_rng(3)
g = np.eye(4) + 0.5 * rng.standard_normal((4, 4))
start = act_dense(g, mu.dense_float())

print("start: l4 in a random basis")
print("  soliton?", soliton_test(start).kind)
print("  compact stabilizer dim:", compact_stabilizer_dim(start))

traj = flow(start)
f = traj.F_values()
print(f"\nflow: {traj.steps} steps, converged = {traj.converged}")
for k in np.linspace(0, len(f) - 1, 6).astype(int):
    s = traj.samples[k]
    print(f"  t = {s.t:9.4f}   F = {s.F:.10f}   residual = {s.residual:.2e}")

lim = traj.mu_inf
cert = soliton_test(lim, nilpotent=True)
dim, gap = numerical_derivation_dim(lim)
print("\nlimit:")
print(f"  soliton certificate: {cert.kind}, c = {cert.c:.6f}")
print("  D eigenvalues:", np.round(np.linalg.eigvals(cert.D).real, 6))
print(f"  numerical dim Der = {dim} (gap {gap:.1e}), exact dim Der(l4) = {derivation_algebra(mu).dim}")
print("  compact stabilizer dim:", compact_stabilizer_dim(lim))
