"""Walk through every invariant of the 3-dimensional Heisenberg algebra."""

from solvsoliton import corpus
from solvsoliton.curvature import moment_map, ricci, soliton_test
from solvsoliton.decide import is_einstein_nilradical
from solvsoliton.derivations import derivation_algebra, pre_einstein
from solvsoliton.io import fraction_str

h3 = corpus.H3


def show(label, m):
    print(label)
    for row in m:
        print("   ", " ".join(fraction_str(v).rjust(5) for v in row))


print("h3: [e1, e2] = e3\n")
show("Ricci operator of the orthonormal basis:", ricci(h3))
show("moment map (scale invariant):", moment_map(h3))

der = derivation_algebra(h3)
print(f"\nDer(h3) has dimension {der.dim}")
show("pre-Einstein derivation:", pre_einstein(h3, der).phi)

cert = soliton_test(h3)
print(f"\nsoliton certificate: {cert.kind}, c = {fraction_str(cert.c)}, residual {cert.residual}")
show("D = Ric - c Id:", cert.D)

v = is_einstein_nilradical(h3)
print(f"\nEinstein nilradical? {v.label} ({v.certification})")
for note in v.notes:
    print("  ", note)
