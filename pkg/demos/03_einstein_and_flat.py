"""Flat, negative Einstein and solsoliton verdicts for small solvable algebras."""

from solvsoliton import corpus
from solvsoliton.decide import admits_flat, admits_negative_einstein, admits_solsoliton

names = ["hyperbolic", "e2", "sol", "hyperbolic+r", "e2+r", "real-hyperbolic-3", "complex-hyperbolic-2"]
print(f"{'algebra':22} {'flat':14} {'neg. Einstein':14} {'solsoliton':14}")
for name in names:
    mu = corpus.get(name).mu
    row = [admits_flat(mu), admits_negative_einstein(mu), admits_solsoliton(mu)]
    print(f"{name:22} " + " ".join(f"{v.label:14}" for v in row))

print("\nwhy e2 has no negative Einstein metric:")
v = admits_negative_einstein(corpus.E2)
print("  failed at:", v.failed_step)
print("why e2 has no solsoliton:")
print("  failed at:", admits_solsoliton(corpus.E2).failed_step)

print("\nwitnesses for the hyperbolic plane:")
v = admits_negative_einstein(corpus.HYPERBOLIC)
for key in ("n", "phi", "X_phi", "z"):
    print(f"  {key}: {v.witnesses[key]!r}")
