"""Ricci curvature, the moment map and algebraic soliton tests.

Every function accepts either a :class:`BracketTensor` (exact path, results
are Fraction object arrays) or a dense float array ``C[i, j, k]`` (float
path).  The metric is always the standard inner product of the coordinates.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import exact
from .brackets import BracketTensor, ad_dense, inner_dense, is_nilpotent, pi_dense, restrict
from .derivations import derivation_algebra, derivation_map
from .errors import BadSplitting, NonNegativeC, ZeroBracket
from .exact import Subspace, qarray, qeye, qzeros

#: m(mu) = KAPPA * Ric(mu) on unit-norm nilpotent brackets (norm over i<j).
KAPPA = 2


def _dense(mu):
    if isinstance(mu, BracketTensor):
        return mu.dense, True
    c = np.asarray(mu)
    return c, c.dtype == object


def _eye(n, is_exact):
    return qeye(n) if is_exact else np.eye(n)


def _zeros(shape, is_exact):
    return qzeros(*shape) if is_exact else np.zeros(shape)


def mean_curvature_vector(mu) -> np.ndarray:
    """Z with <Z, X> = tr ad X."""
    c, _ = _dense(mu)
    return np.einsum("ikk->i", c) if c.size else c.reshape(0)


def _ricci_form(c: np.ndarray, z: np.ndarray, xv: np.ndarray):
    """ric(X, X) from the orthonormal-frame quadratic form."""
    a = ad_dense(c, xv)
    t1 = -(a * a).sum() / 2
    t2 = -np.trace(a @ a) / 2
    br = np.einsum("ijk,k->ij", c, xv)
    t3 = (br * br).sum() / 4
    t4 = -xv @ (ad_dense(c, z) @ xv)
    return t1 + t2 + t3 + t4


def ricci(mu) -> np.ndarray:
    """Ricci operator by polarising the quadratic form ric(X, X)."""
    c, is_exact = _dense(mu)
    n = c.shape[0]
    if n == 0:
        return _zeros((0, 0), is_exact)
    z = mean_curvature_vector(c)
    eye = _eye(n, is_exact)
    diag = [_ricci_form(c, z, eye[a]) for a in range(n)]
    out = _zeros((n, n), is_exact)
    for a in range(n):
        out[a, a] = diag[a]
        for b in range(a + 1, n):
            v = (_ricci_form(c, z, eye[a] + eye[b]) - diag[a] - diag[b]) / 2
            out[a, b] = v
            out[b, a] = v
    return out


def scalar_curvature(mu):
    r = ricci(mu)
    return sum((r[i, i] for i in range(r.shape[0])), Fraction(0) if r.dtype == object else 0.0)


def moment_map(mu) -> np.ndarray:
    """Symmetric m with <m, alpha> = <pi(alpha)mu, mu>/|mu|^2 on symmetric alpha."""
    c, is_exact = _dense(mu)
    n = c.shape[0]
    nrm = inner_dense(c, c)
    if nrm == 0:
        raise ZeroBracket("moment map is undefined at the zero bracket")
    out = _zeros((n, n), is_exact)
    for a in range(n):
        for b in range(a, n):
            alpha = _zeros((n, n), is_exact)
            alpha[a, b] += 1
            alpha[b, a] += 1
            val = inner_dense(pi_dense(alpha, c), c) / nrm
            if a == b:
                out[a, a] = val / 2
            else:
                out[a, b] = out[b, a] = val / 2
    return out


def moment_map_fast(c: np.ndarray) -> np.ndarray:
    """Closed form of the moment map for float arrays.

    <pi(E_ab)mu, mu> = 1/2 sum_ij c_ij^a c_ij^b - sum_jk c_aj^k c_bj^k,
    which is already symmetric in (a, b).
    """
    nrm = inner_dense(c, c)
    p = 0.5 * np.einsum("ija,ijb->ab", c, c) - np.einsum("ajk,bjk->ab", c, c)
    return p / nrm


def functional_F(mu):
    m = moment_map(mu)
    return np.sum(m * m)


# ---------------------------------------------------------------------------
# soliton certificates


@dataclass(frozen=True)
class SolitonCertificate:
    kind: str  # einstein | nilsoliton | solsoliton | none
    c: object
    D: np.ndarray | None
    residual: float
    exact: bool

    @property
    def is_soliton(self) -> bool:
        return self.kind != "none"


def float_tolerance(ric: np.ndarray) -> float:
    return 1e-8 * (1.0 + float(np.linalg.norm(ric)))


def numeric_derivations(c: np.ndarray, rel: float = 1e-7) -> np.ndarray:
    """Orthonormal (Frobenius) basis of numerical derivations, shape (d, n, n)."""
    n = c.shape[0]
    lmap = derivation_map(np.asarray(c, dtype=float))
    if lmap.shape[0] == 0:
        return np.eye(n * n).reshape(n * n, n, n)
    _, s, vt = np.linalg.svd(lmap)
    smax = s[0] if s.size else 0.0
    rank = int(np.sum(s > rel * smax)) if smax > 0 else 0
    return vt[rank:].reshape(-1, n, n)


def _numeric_nilpotent(c: np.ndarray) -> bool:
    n = c.shape[0]
    rng = np.random.default_rng(0)
    pts = list(np.eye(n)) + [rng.standard_normal(n) for _ in range(3)]
    scale = max(1.0, float(np.abs(c).max()))
    for p in pts:
        a = ad_dense(c, p) / scale
        if np.linalg.norm(np.linalg.matrix_power(a, n)) > 1e-8:
            return False
    return True


def soliton_test(mu, nilpotent: bool | None = None) -> SolitonCertificate:
    """Solve Ric = c Id + D with D a derivation.

    Exact for BracketTensor input; least squares with the tolerance
    1e-8 (1 + |Ric|) for float input.  D = 0 is tested first.
    """
    c_arr, is_exact = _dense(mu)
    n = c_arr.shape[0]
    ric = ricci(c_arr)
    if is_exact:
        bt = mu if isinstance(mu, BracketTensor) else BracketTensor.from_dense(c_arr)
        if nilpotent is None:
            nilpotent = is_nilpotent(bt)
        scal = exact.trace(ric) / n if n else Fraction(0)
        if exact.is_zero(ric - scal * qeye(n)):
            return SolitonCertificate("einstein", scal, qzeros(n, n), 0.0, True)
        der = derivation_algebra(bt)
        cols = [qeye(n).reshape(n * n)] + [d.reshape(n * n) for d in der.basis]
        a = np.array(cols, dtype=object).T
        try:
            sol = exact.solve(a, ric.reshape(n * n))
        except exact.NoSolution:
            return SolitonCertificate("none", None, None, float("inf"), True)
        d = der.combination(sol[1:])
        kind = "nilsoliton" if nilpotent else "solsoliton"
        return SolitonCertificate(kind, sol[0], d, 0.0, True)

    c_arr = np.asarray(c_arr, dtype=float)
    tol = float_tolerance(ric)
    scal = np.trace(ric) / n
    resid = np.linalg.norm(ric - scal * np.eye(n))
    if resid <= tol:
        return SolitonCertificate("einstein", float(scal), np.zeros((n, n)), float(resid), False)
    ders = numeric_derivations(c_arr)
    cols = np.column_stack([np.eye(n).ravel()] + [d.ravel() for d in ders])
    sol, *_ = np.linalg.lstsq(cols, ric.ravel(), rcond=None)
    d = np.tensordot(sol[1:], ders, axes=1) if len(ders) else np.zeros((n, n))
    resid = float(np.linalg.norm(ric - sol[0] * np.eye(n) - d))
    if resid > tol:
        return SolitonCertificate("none", float(sol[0]), d, resid, False)
    if nilpotent is None:
        nilpotent = _numeric_nilpotent(c_arr)
    return SolitonCertificate("nilsoliton" if nilpotent else "solsoliton", float(sol[0]), d, resid, False)


# ---------------------------------------------------------------------------
# metrics given by a Gram matrix


def orthonormalize(c: np.ndarray, gram: np.ndarray):
    """Bracket in a basis orthonormal for ``gram``; returns (C', T).

    T has the new basis vectors as columns (T^T gram T = Id).
    """
    l = np.linalg.cholesky(gram)
    t = np.linalg.inv(l).T
    from .brackets import act_dense

    return act_dense(np.linalg.inv(t), c, t), t


def ricci_in_metric(c: np.ndarray, gram: np.ndarray) -> np.ndarray:
    """Ricci operator of the left-invariant metric with Gram matrix ``gram``."""
    c2, t = orthonormalize(np.asarray(c, dtype=float), np.asarray(gram, dtype=float))
    return t @ ricci(c2) @ np.linalg.inv(t)


def sym(a):
    return (a + a.T) / 2


def build_solsoliton_metric(ads, c):
    """Gram matrix (-1/c) tr(S(ad A_i) S(ad A_j)) on the complement.

    ``ads`` are the restrictions ad A_i|n in an orthonormal basis of n.
    A zero row/column (skew ad A) marks a degenerate direction.
    """
    if c >= 0:
        raise NonNegativeC("the solsoliton constant must be negative")
    ss = [sym(np.asarray(a)) for a in ads]
    k = len(ss)
    is_exact = bool(ss) and ss[0].dtype == object
    out = _zeros((k, k), is_exact)
    for i in range(k):
        for j in range(i, k):
            v = -np.trace(ss[i] @ ss[j]) / c
            out[i, j] = out[j, i] = v
    return out


@dataclass(frozen=True)
class SolsolitonConditions:
    nilsoliton: bool
    abelian_complement: bool
    normal: bool
    metric: bool
    c: object
    nil_certificate: SolitonCertificate | None

    @property
    def all(self) -> bool:
        return self.nilsoliton and self.abelian_complement and self.normal and self.metric


def _is_orthonormal(sub: Subspace) -> bool:
    m = sub.matrix()
    return exact.is_zero(m @ m.T - qeye(sub.dim))


def solsoliton_conditions(mu: BracketTensor, a: Subspace, n: Subspace) -> SolsolitonConditions:
    """Check the four structural solsoliton conditions separately.

    The subspace bases must be orthonormal (e.g. coordinate subspaces) so
    that everything stays exact; ``a`` must be the orthogonal complement
    of ``n``.
    """
    mu = mu.checked()
    if a.ambient != mu.dim or n.ambient != mu.dim or a.dim + n.dim != mu.dim:
        raise BadSplitting("subspaces are not complementary")
    if not (_is_orthonormal(a) and _is_orthonormal(n)):
        raise BadSplitting("subspace bases must be orthonormal")
    if not exact.is_zero(a.matrix() @ n.matrix().T):
        raise BadSplitting("the complement must be orthogonal to the nilradical")
    nu = restrict(mu, n)
    cmat = mu.dense
    avecs = a.vectors()
    nmat = n.matrix()

    def ad_on_n(v):
        full = ad_dense(cmat, v)
        return nmat @ full @ nmat.T  # ON bases: coordinates are dot products

    ads = [ad_on_n(v) for v in avecs]
    abelian = all(exact.is_zero(mu.bracket(u, v)) for i, u in enumerate(avecs) for v in avecs[i + 1 :])
    probes = ads + [ads[i] + ads[j] for i in range(len(ads)) for j in range(i + 1, len(ads))]
    normal = all(exact.is_zero(exact.comm(p, p.T)) for p in probes)

    gram_a = qarray([[sum(u * v) for v in avecs] for u in avecs])
    cert = None
    if nu.is_zero:
        # abelian nilradical: any c < 0 solves Ric_n = c Id + D_n, so c is
        # whatever negative number makes the Gram proportional
        nil_ok = True
        t = build_solsoliton_metric(ads, -1) if ads else qzeros(0, 0)
        tr_t = exact.trace(t)
        if not ads:
            c_val, metric_ok = Fraction(-1), True
        elif tr_t == 0:
            c_val, metric_ok = None, False
        else:
            ratio = exact.trace(gram_a) / tr_t
            c_val = -1 / ratio
            metric_ok = exact.is_zero(gram_a - ratio * t)
    else:
        cert = soliton_test(nu, nilpotent=True)
        nil_ok = cert.kind in ("einstein", "nilsoliton") and cert.c < 0
        c_val = cert.c if cert.kind != "none" else None
        if not ads:
            metric_ok = True
        elif c_val is None or c_val >= 0:
            metric_ok = False
        else:
            metric_ok = exact.is_zero(gram_a - build_solsoliton_metric(ads, c_val))
    return SolsolitonConditions(nil_ok, abelian, normal, metric_ok, c_val, cert)


__all__ = [
    "KAPPA",
    "SolitonCertificate",
    "SolsolitonConditions",
    "build_solsoliton_metric",
    "functional_F",
    "mean_curvature_vector",
    "moment_map",
    "moment_map_fast",
    "numeric_derivations",
    "orthonormalize",
    "ricci",
    "ricci_in_metric",
    "scalar_curvature",
    "soliton_test",
    "solsoliton_conditions",
]
