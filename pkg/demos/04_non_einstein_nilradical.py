"""A 7-dimensional nilpotent algebra that is not an Einstein nilradical.

The exact pipeline finds a destabilising direction.  Independently, the
bracket flow degenerates the orbit: the derivation algebra of the limit is
strictly bigger than the one we started with.
"""

import time

from solvsoliton import corpus
from solvsoliton.decide import is_einstein_nilradical
from solvsoliton.io import fraction_str

mu = corpus.N7
print("brackets (1-based):")
for (i, j, k), c in sorted(mu.coeffs.items()):
    print(f"  [e{i + 1}, e{j + 1}] = {fraction_str(c)} e{k + 1}")

t0 = time.perf_counter()
v = is_einstein_nilradical(mu, cross_check=True)
print(f"\nverdict: {v.label} ({v.certification}) in {time.perf_counter() - t0:.1f} s")
print("failed at:", v.failed_step)
print(f"dim i = {v.witnesses['dim_i']}, torus rank = {v.witnesses['torus_rank']}")
print("destabilising direction:")
for row in v.witnesses["destabilizer"]:
    print("   ", " ".join(fraction_str(x).rjust(4) for x in row))
ev = v.numeric_evidence
print(f"\nflow cross-check: dim Der goes {ev['der_dim_start']} -> {ev['der_dim_limit']}")
