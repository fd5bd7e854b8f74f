"""Independent brute-force oracles used by the test-suite.

Deliberately written with plain loops and sympy, sharing no code paths
with the package beyond the BracketTensor container.
"""

from __future__ import annotations

import itertools
import random
from fractions import Fraction

import numpy as np
import sympy as sp


def dense(coeffs: dict, n: int):
    """Antisymmetric nested list C[i][j][k] of Fractions."""
    c = [[[Fraction(0)] * n for _ in range(n)] for _ in range(n)]
    for (i, j, k), v in coeffs.items():
        c[i][j][k] += Fraction(v)
        c[j][i][k] -= Fraction(v)
    return c


def ricci_oracle(coeffs: dict, n: int):
    """Ricci operator of the metric making e_1..e_n orthonormal.

    Ric = -1/2 sum_i ad(e_i)^T ad(e_i) + 1/4 sum_i ad(e_i) ad(e_i)^T - 1/2 B - S(ad Z)
    with B the Killing form and Z the mean curvature vector.
    """
    c = dense(coeffs, n)
    ad = [sp.Matrix(n, n, lambda k, j: c[i][j][k]) for i in range(n)]
    term1 = sp.zeros(n, n)
    term2 = sp.zeros(n, n)
    for a in ad:
        term1 += a.T * a
        term2 += a * a.T
    killing = sp.Matrix(n, n, lambda x, y: (ad[x] * ad[y]).trace())
    z = [sum(c[i][k][k] for k in range(n)) for i in range(n)]
    adz = sp.zeros(n, n)
    for i in range(n):
        adz += z[i] * ad[i]
    s = (adz + adz.T) / 2
    return -term1 / 2 + term2 / 4 - killing / 2 - s


def pi_oracle(x, coeffs: dict, n: int):
    """pi(X)mu as a dict over (i<j, k)."""
    c = dense(coeffs, n)
    out = {}
    for i in range(n):
        for j in range(i + 1, n):
            for k in range(n):
                v = sum(x[k][l] * c[i][j][l] for l in range(n))
                v -= sum(c[l][j][k] * x[l][i] for l in range(n))
                v -= sum(c[i][l][k] * x[l][j] for l in range(n))
                out[(i, j, k)] = v
    return out


def moment_map_oracle(coeffs: dict, n: int):
    """m(mu)_{ab} = <pi(E_ab) mu, mu> / |mu|^2 straight from the definition."""
    c = dense(coeffs, n)
    mu = {(i, j, k): c[i][j][k] for i in range(n) for j in range(i + 1, n) for k in range(n)}
    nrm = sum(v * v for v in mu.values())
    m = [[Fraction(0)] * n for _ in range(n)]
    for a in range(n):
        for b in range(n):
            e = [[Fraction(int(r == a and s == b)) for s in range(n)] for r in range(n)]
            p = pi_oracle(e, coeffs, n)
            m[a][b] = sum(p[key] * mu[key] for key in mu) / nrm
    # the moment map is the symmetric part
    return [[(m[a][b] + m[b][a]) / 2 for b in range(n)] for a in range(n)]


def derivation_dim_oracle(coeffs: dict, n: int) -> int:
    """dim Der via a sympy nullspace of the symbolic derivation equations."""
    xs = sp.symbols(f"x0:{n * n}")
    x = [[xs[r * n + s] for s in range(n)] for r in range(n)]
    c = dense(coeffs, n)
    eqs = []
    for i in range(n):
        for j in range(i + 1, n):
            for k in range(n):
                e = sum(x[k][l] * c[i][j][l] for l in range(n))
                e -= sum(c[l][j][k] * x[l][i] for l in range(n))
                e -= sum(c[i][l][k] * x[l][j] for l in range(n))
                eqs.append(sp.expand(e))
    eqs = [e for e in eqs if e != 0]
    if not eqs:
        return n * n
    a, _ = sp.linear_eq_to_matrix(eqs, xs)
    return n * n - a.rank()


def hm_grid_oracle(weights, support, rank: int, bound: int = 3) -> bool:
    """Exhaustive search over integer torus directions in [-bound, bound]^rank."""
    rows = [weights[i] for i in support]
    for x in itertools.product(range(-bound, bound + 1), repeat=rank):
        vals = [sum(Fraction(w) * xi for w, xi in zip(row, x)) for row in rows]
        if all(v >= 0 for v in vals) and any(v > 0 for v in vals):
            return True
    return False


def nice_basis_einstein(triples, n: int) -> bool:
    """Gram-matrix criterion for a nice basis: U v = [1] has a positive solution."""
    from scipy.optimize import linprog

    ys = []
    for i, j, k in triples:
        y = np.zeros(n)
        y[i] += 1
        y[j] += 1
        y[k] -= 1
        ys.append(y)
    ys = np.array(ys)
    u = ys @ ys.T
    m = len(triples)
    cost = np.zeros(m + 1)
    cost[-1] = -1.0
    res = linprog(
        cost,
        A_ub=np.hstack([-np.eye(m), np.ones((m, 1))]),
        b_ub=np.zeros(m),
        A_eq=np.hstack([u, np.zeros((m, 1))]),
        b_eq=np.ones(m),
        bounds=[(None, None)] * m + [(None, 1)],
    )
    return res.status == 0 and res.x[-1] > 1e-9


def random_rational_matrix(n: int, rng: random.Random, lo: int = -3, hi: int = 3):
    """Invertible matrix with small integer entries."""
    while True:
        m = sp.Matrix(n, n, lambda *_: rng.randint(lo, hi))
        if m.det() != 0:
            return np.array([[Fraction(int(v)) for v in row] for row in m.tolist()], dtype=object)


def random_basis_change(n: int, rng: random.Random, shears: int | None = None):
    """Signed permutation, rational diagonal scaling and a few elementary shears.

    Keeps coefficient growth modest so the exact pipeline stays fast, while
    still leaving no orthonormal structure behind.
    """
    perm = list(range(n))
    rng.shuffle(perm)
    g = np.array([[Fraction(0)] * n for _ in range(n)], dtype=object)
    for i, j in enumerate(perm):
        g[i, j] = Fraction(rng.choice([1, 2, 3, Fraction(1, 2)])) * rng.choice([1, -1])
    for _ in range(n if shears is None else shears):
        i, j = rng.sample(range(n), 2)
        e = np.array([[Fraction(int(a == b)) for b in range(n)] for a in range(n)], dtype=object)
        e[i, j] = Fraction(rng.choice([1, -1, 2, -2])) / rng.choice([1, 2])
        g = e @ g
    return g


def random_two_step(n: int, rng: random.Random, center: int | None = None) -> dict:
    """Random 2-step nilpotent bracket: [V, V] lands in the last ``center`` vectors."""
    center = center or max(1, n // 3)
    gens = n - center
    coeffs = {}
    for i in range(gens):
        for j in range(i + 1, gens):
            for k in range(gens, n):
                v = rng.randint(-2, 2)
                if v:
                    coeffs[(i, j, k)] = v
    if not coeffs:
        coeffs[(0, 1, n - 1)] = 1
    return coeffs


def random_unit_brackets(count, seed=0):
    """Unit Jacobi brackets in dims 3-5: conjugated corpus and random 2-step ones."""
    from solvsoliton.brackets import BracketTensor, act_dense
    from solvsoliton.corpus import H3, H5, L4, L5, SOL
    from solvsoliton.flow import normalize

    rng = np.random.default_rng(seed)
    prng = random.Random(seed)
    bases = [H3, L4, L5, H5, SOL]
    out = []
    while len(out) < count:
        if len(out) % 2:
            n = prng.randint(3, 5)
            mu = BracketTensor(n, random_two_step(n, prng)).checked()
        else:
            mu = bases[len(out) // 2 % len(bases)]
        g = np.eye(mu.dim) + 0.4 * rng.standard_normal((mu.dim, mu.dim))
        out.append(normalize(act_dense(g, mu.dense_float())))
    return out
