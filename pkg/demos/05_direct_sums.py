"""Deciding a direct sum from its summands, then checking against the whole."""

from solvsoliton import corpus
from solvsoliton.brackets import direct_sum
from solvsoliton.decide import admits_flat, admits_negative_einstein, admits_solsoliton, reduce_direct_sum

direct = {"admits_flat": admits_flat, "admits_negative_einstein": admits_negative_einstein,
          "admits_solsoliton": admits_solsoliton}

cases = [
    ("h3 + R", direct_sum(corpus.H3, corpus.abelian(1)), ([0, 1, 2], [3])),
    ("hyperbolic + R", direct_sum(corpus.HYPERBOLIC, corpus.abelian(1)), ([0, 1], [2])),
    ("hyperbolic + hyperbolic", direct_sum(corpus.HYPERBOLIC, corpus.HYPERBOLIC), ([0, 1], [2, 3])),
    ("e2 + R", direct_sum(corpus.E2, corpus.abelian(1)), ([0, 1, 2], [3])),
]
for name, mu, parts in cases:
    print(name)
    for q, v in reduce_direct_sum(mu, parts).solve().items():
        whole = direct[q](mu).answer
        why = f"  ({v.failed_step})" if v.failed_step else ""
        print(f"  {q:26} combined {v.answer:4} whole {whole:4}{why}")
