import random
from fractions import Fraction as Fr

import sympy as sp

from oracles import derivation_dim_oracle, random_rational_matrix, random_two_step
from solvsoliton import exact
from solvsoliton.brackets import BracketTensor, act
from solvsoliton.corpus import ENTRIES, H3, HYPERBOLIC, abelian
from solvsoliton.derivations import (
    derivation_algebra,
    g_phi,
    i_subalgebra,
    is_derivation,
    pre_einstein,
    stabilizer_h,
)
from solvsoliton.exact import MatrixAlgebra, qarray, qeye

PHI_H3 = qarray([[Fr(2, 3), 0, 0], [0, Fr(2, 3), 0], [0, 0, Fr(4, 3)]])


def test_derivation_dimensions_match_oracle():
    for e in ENTRIES:
        if e.mu.dim <= 6:
            assert derivation_algebra(e.mu).dim == derivation_dim_oracle(e.mu.coeffs, e.mu.dim), e.name


def test_random_two_step_derivations_match_oracle():
    rng = random.Random(4)
    for n in (4, 5):
        mu = BracketTensor(n, random_two_step(n, rng)).checked()
        assert derivation_algebra(mu).dim == derivation_dim_oracle(mu.coeffs, n)


def test_known_derivation_algebras():
    assert derivation_algebra(abelian(3)).dim == 9
    der = derivation_algebra(H3)
    assert der.dim == 6
    # block form [[a, b, 0], [c, d, 0], [e, f, a + d]]
    for d in der.basis:
        assert d[0, 2] == d[1, 2] == 0 and d[2, 2] == d[0, 0] + d[1, 1]
    assert derivation_algebra(HYPERBOLIC).dim == 2


def test_derivations_satisfy_leibniz():
    for d in derivation_algebra(H3).basis:
        assert is_derivation(H3, d)
    assert not is_derivation(H3, qeye(3))


def test_pre_einstein_h3():
    pe = pre_einstein(H3)
    assert exact.is_zero(pe.phi - PHI_H3)
    assert pe.semisimple and pe.all_positive
    assert pe.eigenvalues == ((Fr(2, 3), 2), (Fr(4, 3), 1))


def test_pre_einstein_defining_identity_on_corpus():
    for e in ENTRIES:
        if not e.nilpotent or e.mu.is_zero:
            continue
        der = derivation_algebra(e.mu)
        pe = pre_einstein(e.mu, der)
        for psi in der.basis:
            assert exact.trace(pe.phi @ psi) == exact.trace(psi), e.name


def test_pre_einstein_abelian_is_identity():
    assert exact.is_zero(pre_einstein(abelian(3)).phi - qeye(3))


def test_pre_einstein_is_conjugation_equivariant():
    rng = random.Random(8)
    g = random_rational_matrix(3, rng)
    phi = pre_einstein(act(g, H3)).phi
    # phi of g.mu is conjugate to phi of mu, so the spectra agree
    assert exact.is_semisimple(phi).eigenvalues_rational == ((Fr(2, 3), 2), (Fr(4, 3), 1))


def _gphi_oracle_dim(phi, n):
    xs = sp.symbols(f"x0:{n * n}")
    x = sp.Matrix(n, n, xs)
    p = sp.Matrix(phi.tolist())
    eqs = list(x * p - p * x) + [x.trace(), (x * p).trace()]
    a, _ = sp.linear_eq_to_matrix([e for e in eqs if e != 0], xs)
    return n * n - a.rank()


def test_g_phi_h_and_i_for_h3():
    gp = g_phi(H3, PHI_H3)
    assert gp.dim == _gphi_oracle_dim(PHI_H3, 3) == 3
    assert gp.is_closed()
    h = stabilizer_h(H3, gp)
    assert h.dim == 3
    assert i_subalgebra(gp, h).dim == 0


def test_g_phi_abelian_is_sl():
    gp = g_phi(abelian(3), qeye(3))
    assert gp.dim == 8
    assert stabilizer_h(abelian(3), gp).dim == 8


def test_i_subalgebra_trivial_cases():
    g = MatrixAlgebra.span([qarray([[1, 0], [0, -1]])], 2)
    assert i_subalgebra(g, MatrixAlgebra.zero(2)).dim == 1
    assert i_subalgebra(g, g).dim == 0
