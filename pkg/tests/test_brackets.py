import random
from fractions import Fraction as Fr

import pytest

from oracles import random_rational_matrix, random_two_step
from solvsoliton import exact
from solvsoliton.brackets import (
    BracketTensor,
    act,
    classify,
    commutator_subalgebra,
    direct_sum,
    infinitesimal_act,
    is_ideal,
    lower_central_series,
    nilradical,
    restrict,
    split,
    validate_jacobi,
    verify_splitting,
)
from solvsoliton.corpus import E2, H3, HYPERBOLIC, SOL, abelian
from solvsoliton.errors import BadSplitting, DimensionMismatch, JacobiError
from solvsoliton.exact import Subspace, qarray


def test_coefficients_normalised_to_i_less_than_j():
    mu = BracketTensor(3, {(1, 0, 2): 1})
    assert mu.coeffs == {(0, 1, 2): Fr(-1)}


def test_jacobi_violation_reported():
    bad = BracketTensor(3, {(0, 1, 2): 1, (0, 2, 0): 1})
    assert (0, 1, 2) in validate_jacobi(bad)
    with pytest.raises(JacobiError) as exc:
        bad.checked()
    assert "(1, 2, 3)" in str(exc.value)


def test_corpus_satisfies_jacobi():
    for mu in (H3, E2, HYPERBOLIC, SOL):
        assert validate_jacobi(mu) == []


def test_classification_flags():
    e2 = classify(E2)
    assert e2.solvable and not e2.completely_solvable and e2.unimodular and not e2.nilpotent
    hyp = classify(HYPERBOLIC)
    assert hyp.completely_solvable and not hyp.unimodular
    h3 = classify(H3)
    assert h3.nilpotent and h3.nilpotency_step == 2


def test_classification_chain_on_random_brackets():
    rng = random.Random(2)
    seeds = [H3, E2, HYPERBOLIC, SOL, direct_sum(H3, HYPERBOLIC)]
    for mu in seeds:
        for _ in range(3):
            g = random_rational_matrix(mu.dim, rng)
            c = classify(act(g, mu))
            assert not c.nilpotent or c.completely_solvable
            assert not c.completely_solvable or c.solvable
            assert c == classify(mu)


def test_commutator_examples():
    assert commutator_subalgebra(H3) == Subspace.coordinate(3, [2])
    assert commutator_subalgebra(abelian(3)).dim == 0
    assert commutator_subalgebra(HYPERBOLIC) == Subspace.coordinate(2, [1])


def test_lower_central_series_of_h3():
    series = lower_central_series(H3)
    assert [s.dim for s in series] == [3, 1, 0]


def test_nilradicals():
    assert nilradical(E2) == Subspace.coordinate(3, [1, 2])
    assert nilradical(HYPERBOLIC) == Subspace.coordinate(2, [1])
    assert nilradical(H3).dim == 3


def test_nilradical_beyond_killing_kernel():
    # ad e1 = diag(1, 1) + rotation on R^4: the Killing form is blind to it
    mu = BracketTensor(5, {(0, 1, 1): 1, (0, 2, 2): 1, (0, 3, 4): 1, (0, 4, 3): -1}).checked()
    nil = nilradical(mu)
    assert nil == Subspace.coordinate(5, [1, 2, 3, 4])
    assert is_ideal(mu, nil)


def test_action_examples():
    assert act(exact.qeye(3), H3) == H3
    scaled = act(qarray([[1, 0, 0], [0, 1, 0], [0, 0, 2]]), H3)
    assert scaled.coeffs == {(0, 1, 2): Fr(2)}
    swap = act(qarray([[0, 1, 0], [1, 0, 0], [0, 0, 1]]), H3)
    assert swap.coeffs == {(0, 1, 2): Fr(-1)}


def test_infinitesimal_action_examples():
    assert infinitesimal_act(exact.qeye(3), H3) == H3.scaled(-1)
    assert infinitesimal_act(qarray([[1, 0, 0], [0, 1, 0], [0, 0, 2]]), H3).is_zero


def test_action_is_a_group_action():
    rng = random.Random(7)
    mu = BracketTensor(4, random_two_step(4, rng)).checked()
    g, h = random_rational_matrix(4, rng), random_rational_matrix(4, rng)
    assert act(g @ h, mu) == act(g, act(h, mu))
    assert validate_jacobi(act(g, mu)) == []


def test_direct_sum_and_split():
    mu = direct_sum(H3, abelian(1))
    assert mu.coeffs == {(0, 1, 2): Fr(1)}
    parts = (Subspace.coordinate(4, [0, 1, 2]), Subspace.coordinate(4, [3]))
    assert verify_splitting(mu, parts)
    a, b = split(mu, parts)
    assert a == H3 and b.is_zero and b.dim == 1


def test_split_rejects_non_ideal_complement():
    mu = direct_sum(H3, abelian(1))
    # e1 + e4 together with e2, e3 is an ideal complement mismatch for e4
    bad = (Subspace.span([[1, 0, 0, 1], [0, 1, 0, 0]], 4), Subspace.span([[0, 0, 1, 0], [0, 0, 0, 1]], 4))
    assert not verify_splitting(mu, bad)
    with pytest.raises(BadSplitting):
        split(mu, bad)
    with pytest.raises(DimensionMismatch):
        verify_splitting(mu, (Subspace.coordinate(4, [0, 1]), Subspace.coordinate(4, [1, 2])))


def test_restrict_to_ideal():
    nil = nilradical(E2)
    assert restrict(E2, nil).is_zero
