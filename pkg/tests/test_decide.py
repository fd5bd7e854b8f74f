import random
from fractions import Fraction as Fr

import numpy as np
import pytest

from oracles import hm_grid_oracle, nice_basis_einstein, random_basis_change
from solvsoliton import corpus, exact
from solvsoliton.brackets import BracketTensor, act, direct_sum
from solvsoliton.corpus import E2, H3, HYPERBOLIC, N7, abelian
from solvsoliton.curvature import orthonormalize, ricci_in_metric, soliton_test
from solvsoliton.decide import (
    WeightSystem,
    admits_flat,
    admits_negative_einstein,
    admits_solsoliton,
    hm_destabilizer,
    is_einstein_nilradical,
    reduce_direct_sum,
    torus_weight_system,
)
from solvsoliton.errors import BadSplitting, NotSolvable
from solvsoliton.exact import Subspace, qarray

QUESTIONS = {
    "einstein_nilradical": is_einstein_nilradical,
    "admits_flat": admits_flat,
    "admits_negative_einstein": admits_negative_einstein,
    "admits_solsoliton": admits_solsoliton,
}
CASES = [(e, q) for e in corpus.ENTRIES for q in e.expected]


class TestDestabilizer:
    def test_positive_orthant(self):
        x = hm_destabilizer(WeightSystem.of([(1, 0), (0, 1)]))
        assert x is not None and all(v >= 0 for v in x) and any(v > 0 for v in x)

    def test_opposite_weights(self):
        assert hm_destabilizer(WeightSystem.of([(1,), (-1,)])) is None

    def test_lp_by_hand(self):
        x = hm_destabilizer(WeightSystem.of([(2, -1), (-1, 2)]))
        assert x is not None
        assert 2 * x[0] - x[1] >= 0 and -x[0] + 2 * x[1] >= 0

    def test_support_restricts_the_constraints(self):
        ws = WeightSystem.of([(1,), (-1,)], support=[0])
        assert hm_destabilizer(ws) == (Fr(1),)

    def test_random_systems_against_grid_search(self):
        rng = random.Random(17)
        for _ in range(50):
            rank = rng.randint(1, 3)
            weights = [tuple(rng.randint(-2, 2) for _ in range(rank)) for _ in range(rng.randint(2, 5))]
            ws = WeightSystem.of(weights)
            x = hm_destabilizer(ws)
            assert (x is not None) == hm_grid_oracle(weights, range(len(weights)), rank, bound=8), weights
            if x is not None:
                vals = [sum(Fr(a) * b for a, b in zip(w, x)) for w in weights]
                assert all(v >= 0 for v in vals) and any(v > 0 for v in vals)

    def test_weight_system_of_h3_diagonal_torus(self):
        ws, g = torus_weight_system(H3, [qarray(np.diag([1, 0, 1])), qarray(np.diag([0, 1, 1]))])
        # the single coordinate (1,2 -> 3) has weight d3 - d1 - d2 = 0 for both generators
        assert [ws.weights[i] for i in ws.support] == [(0, 0)]
        assert hm_destabilizer(ws) is None


@pytest.mark.parametrize("entry,question", CASES, ids=[f"{e.name}-{q}" for e, q in CASES])
def test_corpus_verdicts(entry, question):
    v = QUESTIONS[question](entry.mu)
    assert v.answer == entry.expected[question], (v.failed_step, v.notes)
    if v.no:
        assert v.failed_step
    if v.yes:
        assert v.verified is True


def test_nice_basis_oracle_agrees():
    for e in corpus.ENTRIES:
        if not e.nilpotent or e.mu.is_zero:
            continue
        keys = list(e.mu.coeffs)
        pairs = [(i, j) for i, j, _ in keys]
        if len(set(pairs)) != len(pairs):
            continue  # not a nice basis
        oracle = nice_basis_einstein(keys, e.mu.dim)
        assert oracle == (e.expected["einstein_nilradical"] == "yes"), e.name


def test_h3_end_to_end():
    v = is_einstein_nilradical(H3)
    assert v.yes and v.certification == "exact"
    assert v.witnesses["c"] == Fr(-3, 2)
    assert exact.is_zero(v.witnesses["D"] - qarray(np.diag([1, 1, 2])))
    assert exact.is_zero(v.witnesses["phi"] - qarray(np.diag([Fr(2, 3), Fr(2, 3), Fr(4, 3)])))


def test_abelian_branch():
    v = is_einstein_nilradical(abelian(4))
    assert v.yes and v.witnesses.get("flat")


def test_non_einstein_nilradical_has_exact_destabilizer():
    v = is_einstein_nilradical(N7)
    assert v.no and v.certification == "exact"
    x = v.witnesses["destabilizer"]
    assert not exact.is_zero(x)
    assert exact.is_zero(x - x.T)


@pytest.mark.slow
def test_exact_no_is_not_contradicted_by_the_flow():
    v = is_einstein_nilradical(N7, cross_check=True)
    assert v.no
    assert v.numeric_evidence["der_dim_limit"] > v.numeric_evidence["der_dim_start"]


def test_hyperbolic_negative_einstein_witnesses():
    v = admits_negative_einstein(HYPERBOLIC)
    assert v.yes
    assert exact.is_zero(v.witnesses["phi"] - qarray([[1]]))
    assert list(v.witnesses["X_phi"]) == [1, 0]
    assert v.witnesses["z"] == Subspace.coordinate(2, [0])
    assert v.witnesses["n"] == Subspace.coordinate(2, [1])


def test_e2_verdicts():
    assert admits_flat(E2).yes
    assert admits_negative_einstein(E2).no
    assert admits_solsoliton(E2).no


def test_nilpotent_algebras_have_no_negative_einstein_metric():
    v = admits_negative_einstein(H3)
    assert v.no and v.failed_step.startswith("step 2")


def test_flat_and_negative_einstein_are_exclusive():
    for e in corpus.ENTRIES:
        assert not (admits_flat(e.mu).yes and admits_negative_einstein(e.mu).yes), e.name


def _check_einstein_metric(mu, gram, c):
    ric = ricci_in_metric(mu.dense_float(), np.asarray(gram, dtype=float))
    assert np.allclose(ric, c * np.eye(mu.dim), atol=1e-8)


def test_yes_witnesses_reverify_independently():
    for e in corpus.ENTRIES:
        for q, exp in e.expected.items():
            if exp != "yes" or e.mu.is_zero:
                continue
            v = QUESTIONS[q](e.mu)
            w = v.witnesses["metric"]
            gram = np.asarray(exact.to_float(w) if w.dtype == object else w, dtype=float)
            if q == "admits_flat":
                _check_einstein_metric(e.mu, gram, 0.0)
                continue
            c2, _ = orthonormalize(e.mu.dense_float(), gram)
            cert = soliton_test(c2)
            assert cert.kind != "none" and cert.c < 0, (e.name, q)
            if q == "admits_negative_einstein":
                _check_einstein_metric(e.mu, gram, cert.c)


def test_flat_witness_is_flat():
    v = admits_flat(direct_sum(E2, abelian(1)))
    gram = exact.to_float(v.witnesses["metric"])
    assert np.abs(ricci_in_metric(direct_sum(E2, abelian(1)).dense_float(), gram)).max() < 1e-12


def test_non_solvable_rejected():
    sl2 = BracketTensor(3, {(0, 1, 2): 1, (1, 2, 0): 1, (2, 0, 1): 1}).checked()
    with pytest.raises(NotSolvable):
        admits_flat(sl2)


class TestDirectSums:
    def test_h3_plus_r(self):
        mu = direct_sum(H3, abelian(1))
        red = reduce_direct_sum(mu, ([0, 1, 2], [3]))
        assert red.mu1 == H3 and red.mu2.is_zero
        res = red.solve()
        assert res["admits_solsoliton"].yes
        assert admits_solsoliton(mu).yes

    def test_sign_rule(self):
        mu = direct_sum(HYPERBOLIC, abelian(1))
        res = reduce_direct_sum(mu, ([0, 1], [2])).solve()
        assert res["admits_negative_einstein"].no
        assert res["admits_negative_einstein"].failed_step == "summands are Einstein with different signs"
        assert res["admits_flat"].no
        assert admits_negative_einstein(mu).no and admits_flat(mu).no

    def test_matches_direct_pipeline(self):
        for a, b in [(HYPERBOLIC, HYPERBOLIC), (E2, abelian(1)), (HYPERBOLIC, E2)]:
            mu = direct_sum(a, b)
            res = reduce_direct_sum(mu, (range(a.dim), range(a.dim, mu.dim))).solve()
            for q, v in res.items():
                assert v.answer == QUESTIONS[q](mu).answer, (a.name, b.name, q)

    def test_zero_dimensional_summand(self):
        red = reduce_direct_sum(HYPERBOLIC, ([0, 1], []))
        res = red.solve()
        assert res["admits_negative_einstein"].yes

    def test_bad_splitting(self):
        with pytest.raises(BadSplitting):
            reduce_direct_sum(H3, ([0], [1, 2]))


@pytest.mark.parametrize("name", ["h3", "l4", "hyperbolic", "e2", "sol", "n7-nice"])
def test_verdicts_are_conjugation_invariant(name):
    e = corpus.get(name)
    rng = random.Random(name)
    for _ in range(2):
        nu = act(random_basis_change(e.mu.dim, rng), e.mu)
        for q, exp in e.expected.items():
            assert QUESTIONS[q](nu).answer == exp, (name, q)


def test_destabilizer_found_off_the_symmetric_torus():
    # a shear destroys the symmetric torus of i; diagonalisable elements remain
    g = exact.qeye(7)
    g[0, 3] = Fr(1, 2)
    g[5, 2] = Fr(-1)
    nu = act(g, N7)
    v = is_einstein_nilradical(nu)
    assert v.no and v.failed_step.startswith("step 3")
    assert exact.is_semisimple(v.witnesses["destabilizer"]).eigenvalues_rational is not None
