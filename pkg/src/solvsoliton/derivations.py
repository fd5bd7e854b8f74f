"""Derivation algebras, pre-Einstein derivations and the auxiliary subalgebras."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import exact
from .brackets import BracketTensor
from .errors import NoSolution, NotSubalgebra
from .exact import MatrixAlgebra, qarray, qeye, trace


def derivation_map(c: np.ndarray) -> np.ndarray:
    """Matrix of X -> pi(X)mu from gl(n) (row-major X) to V (rows i<j, k).

    Works for object and float arrays alike.
    """
    n = c.shape[0]
    eye = np.eye(n, dtype=c.dtype) if c.dtype != object else qeye(n)
    t = (
        np.einsum("ka,ijb->ijkab", eye, c)
        - np.einsum("bi,ajk->ijkab", eye, c)
        - np.einsum("bj,iak->ijkab", eye, c)
    )
    iu, ju = np.triu_indices(n, 1)
    return t[iu, ju].reshape(len(iu) * n, n * n)


def derivation_algebra(mu: BracketTensor) -> MatrixAlgebra:
    """Der(mu) as the kernel of X -> pi(X)mu."""
    mu = mu.checked()
    n = mu.dim
    if mu.is_zero:
        return MatrixAlgebra.gl(n)
    ker = exact.kernel(derivation_map(mu.dense))
    return MatrixAlgebra.from_space(n, ker)


def is_derivation(mu: BracketTensor, d) -> bool:
    from .brackets import pi_dense

    return exact.is_zero(pi_dense(qarray(d), mu.dense))


@dataclass(frozen=True)
class PreEinsteinSolution:
    phi: np.ndarray
    semisimple: bool
    eigenvalues: tuple[tuple[Fraction, int], ...] | None
    all_positive: bool | None
    report: exact.SemisimplicityReport

    @property
    def rational_spectrum(self) -> bool:
        return self.eigenvalues is not None


def _min_norm_solution(cands: list[np.ndarray], tests: list[np.ndarray]):
    """phi in span(cands) with tr(phi psi) = tr psi for psi in tests.

    Among all solutions returns the one of least Frobenius norm; raises
    NoSolution when the system is inconsistent.
    """
    if not cands:
        if all(trace(p) == 0 for p in tests):
            return None
        raise NoSolution("no candidates")
    a = [[trace(c @ p) for c in cands] for p in tests]
    b = [trace(p) for p in tests]
    ker = exact.kernel(np.array(a, dtype=object)) if a else exact.Subspace.full(len(cands))
    # orthogonality to the solution directions pins the minimum-norm point
    for kv in ker.basis:
        k = sum((kc * c for kc, c in zip(kv, cands)), exact.qzeros(*cands[0].shape))
        a.append([np.sum(c * k) for c in cands])
        b.append(exact.ZERO)
    sol = exact.solve(np.array(a, dtype=object), b)
    return sum((s * c for s, c in zip(sol, cands)), exact.qzeros(*cands[0].shape))


def solve_pre_einstein(candidates: MatrixAlgebra, der: MatrixAlgebra) -> np.ndarray:
    """Minimum-norm phi in ``candidates`` with tr(phi psi) = tr(psi) over ``der``.

    Symmetric candidates are tried first so that the answer is symmetric
    whenever a symmetric solution exists.
    """
    sym = candidates.symmetric_part()
    for space in (sym, candidates):
        if not space.dim:
            continue
        try:
            return _min_norm_solution(space.basis, der.basis)
        except NoSolution:
            continue
    raise NoSolution("no pre-Einstein solution in the candidate space")


def pre_einstein(mu: BracketTensor, der: MatrixAlgebra | None = None) -> PreEinsteinSolution:
    mu = mu.checked()
    der = der if der is not None else derivation_algebra(mu)
    phi = solve_pre_einstein(der, der)
    rep = exact.is_semisimple(phi)
    eig = rep.eigenvalues_rational
    pos = None if eig is None else all(v > 0 for v, _ in eig)
    return PreEinsteinSolution(phi, rep.is_semisimple, eig, pos, rep)


def g_phi(mu: BracketTensor, phi) -> MatrixAlgebra:
    """{X in sl(n) : [X, phi] = 0, tr(X phi) = 0}."""
    n = mu.dim
    phi = qarray(phi)
    cen = exact.centralizer(MatrixAlgebra.gl(n), [phi])
    out = exact.trace_form_orthogonal(cen, [qeye(n), phi])
    if not out.is_closed():  # pragma: no cover - algebraically impossible
        raise NotSubalgebra("g_phi is not closed")
    return out


def stabilizer_h(mu: BracketTensor, gphi: MatrixAlgebra, der: MatrixAlgebra | None = None) -> MatrixAlgebra:
    der = der if der is not None else derivation_algebra(mu)
    return gphi.intersect(der)


def i_subalgebra(g: MatrixAlgebra, h: MatrixAlgebra) -> MatrixAlgebra:
    """{X in z_g(h) : tr(XY) = 0 for all Y in z_g(h) ∩ h}."""
    z = exact.centralizer(g, h.basis)
    zh = z.intersect(h)
    out = exact.trace_form_orthogonal(z, zh.basis)
    if not out.is_closed():
        raise NotSubalgebra("the orthogonal part of the centralizer is not a subalgebra")
    return out


__all__ = [
    "PreEinsteinSolution",
    "derivation_algebra",
    "derivation_map",
    "g_phi",
    "i_subalgebra",
    "is_derivation",
    "pre_einstein",
    "solve_pre_einstein",
    "stabilizer_h",
]
