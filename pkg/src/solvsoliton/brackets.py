"""Lie brackets as structure-constant tensors and the GL(n) action on them.

A bracket on R^n is stored through its coefficients c_ij^k (i < j, zero
based) with ``[e_i, e_j] = sum_k c_ij^k e_k``.  The dense form is the full
antisymmetric array ``C[i, j, k]``.  The helpers ``act_dense`` and
``pi_dense`` work on dense arrays of any dtype, so the same code serves the
exact (Fraction) and the floating-point paths.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Mapping

import numpy as np

from . import exact
from .errors import BadSplitting, DimensionMismatch, JacobiError, NotSolvable, NotSubalgebra, SingularMatrix
from .exact import ONE, ZERO, Subspace, q, qarray, qeye, qzeros

# ---------------------------------------------------------------------------
# dense helpers (dtype agnostic)


def bracket_vectors(c: np.ndarray, u, v) -> np.ndarray:
    """mu(u, v) for vectors u, v."""
    return np.einsum("i,j,ijk->k", u, v, c)


def ad_dense(c: np.ndarray, xv) -> np.ndarray:
    """Matrix of Y -> mu(X, Y) (columns are images of basis vectors)."""
    return np.einsum("i,ijk->kj", xv, c)


def act_dense(g: np.ndarray, c: np.ndarray, g_inv: np.ndarray | None = None) -> np.ndarray:
    """(g.mu)(v, w) = g mu(g^-1 v, g^-1 w)."""
    h = g_inv
    if h is None:
        h = exact.inverse(g) if g.dtype == object else np.linalg.inv(g)
    t = np.einsum("abl,kl->abk", c, g)
    t = np.einsum("ai,abk->ibk", h, t)
    return np.einsum("bj,ibk->ijk", h, t)


def pi_dense(xm: np.ndarray, c: np.ndarray) -> np.ndarray:
    """pi(X)mu(v, w) = X mu(v, w) - mu(Xv, w) - mu(v, Xw)."""
    return (
        np.einsum("kl,ijl->ijk", xm, c)
        - np.einsum("li,ljk->ijk", xm, c)
        - np.einsum("lj,ilk->ijk", xm, c)
    )


def inner_dense(a: np.ndarray, b: np.ndarray):
    """<lambda, mu> = sum over i<j of <lambda(e_i,e_j), mu(e_i,e_j)>."""
    return (a * b).sum() / 2


def norm2_dense(c: np.ndarray):
    return inner_dense(c, c)


def jacobi_dense(c: np.ndarray) -> np.ndarray:
    """J[i,j,k] = [e_i,[e_j,e_k]] + [e_j,[e_k,e_i]] + [e_k,[e_i,e_j]] as a vector."""
    t = np.einsum("jkl,ilm->ijkm", c, c)
    return t + t.transpose(1, 2, 0, 3) + t.transpose(2, 0, 1, 3)


# ---------------------------------------------------------------------------
# the tensor type


@dataclass(frozen=True, eq=False)
class BracketTensor:
    """Antisymmetric bilinear map on Q^n given by its structure constants."""

    dim: int
    coeffs: Mapping[tuple[int, int, int], Fraction] = field(default_factory=dict)
    name: str | None = None
    validated: bool = False

    def __post_init__(self):
        if self.dim < 0:
            raise ValueError("dimension must be nonnegative")
        clean: dict[tuple[int, int, int], Fraction] = {}
        for (i, j, k), v in dict(self.coeffs).items():
            i, j, k = int(i), int(j), int(k)
            if not (0 <= i < self.dim and 0 <= j < self.dim and 0 <= k < self.dim):
                raise DimensionMismatch(f"index {(i, j, k)} out of range for dim {self.dim}")
            v = q(v)
            if i == j:
                if v != 0:
                    raise ValueError("[e_i, e_i] must vanish")
                continue
            if i > j:
                i, j, v = j, i, -v
            key = (i, j, k)
            clean[key] = clean.get(key, ZERO) + v
        object.__setattr__(self, "coeffs", {key: v for key, v in sorted(clean.items()) if v != 0})

    # construction -----------------------------------------------------

    @classmethod
    def from_dense(cls, c, name=None, validated=False) -> "BracketTensor":
        c = np.asarray(c, dtype=object)
        n = c.shape[0]
        if c.shape != (n, n, n):
            raise DimensionMismatch("dense bracket must have shape (n, n, n)")
        coeffs = {}
        for i in range(n):
            for j in range(i + 1, n):
                for k in range(n):
                    if c[i, j, k] != 0:
                        coeffs[(i, j, k)] = q(c[i, j, k])
        return cls(n, coeffs, name, validated)

    @classmethod
    def zero(cls, n: int, name=None) -> "BracketTensor":
        return cls(n, {}, name, True)

    # views ------------------------------------------------------------

    @cached_property
    def dense(self) -> np.ndarray:
        c = qzeros(self.dim, self.dim, self.dim)
        for (i, j, k), v in self.coeffs.items():
            c[i, j, k] = v
            c[j, i, k] = -v
        return c

    def dense_float(self) -> np.ndarray:
        return exact.to_float(self.dense)

    def norm2(self) -> Fraction:
        return sum((v * v for v in self.coeffs.values()), ZERO)

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    def bracket(self, u, v) -> np.ndarray:
        return bracket_vectors(self.dense, qarray(u), qarray(v))

    def scaled(self, s) -> "BracketTensor":
        s = q(s)
        return BracketTensor(self.dim, {k: s * v for k, v in self.coeffs.items()}, self.name, self.validated)

    def with_name(self, name) -> "BracketTensor":
        return BracketTensor(self.dim, self.coeffs, name, self.validated)

    def checked(self) -> "BracketTensor":
        """Return a copy marked validated, raising JacobiError otherwise."""
        if self.validated:
            return self
        bad = validate_jacobi(self)
        if bad:
            raise JacobiError(bad)
        return BracketTensor(self.dim, self.coeffs, self.name, True)

    def __eq__(self, other):
        if not isinstance(other, BracketTensor):
            return NotImplemented
        return self.dim == other.dim and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.dim, tuple(self.coeffs.items())))

    def __repr__(self):
        terms = ", ".join(f"[e{i + 1},e{j + 1}]∋{v}·e{k + 1}" for (i, j, k), v in self.coeffs.items())
        label = f" {self.name}" if self.name else ""
        return f"BracketTensor{label}(dim={self.dim}; {terms or 'abelian'})"


# ---------------------------------------------------------------------------
# axioms and structure


def validate_jacobi(mu: BracketTensor) -> list[tuple[int, int, int]]:
    """All triples i<j<k (zero based) on which the Jacobi sum is nonzero."""
    n = mu.dim
    if n < 3 or mu.is_zero:
        return []
    j = jacobi_dense(mu.dense)
    bad = []
    for a in range(n):
        for b in range(a + 1, n):
            for c in range(b + 1, n):
                if any(v != 0 for v in j[a, b, c]):
                    bad.append((a, b, c))
    return bad


def _lie(mu: BracketTensor) -> BracketTensor:
    return mu.checked()


def ad_matrix(mu: BracketTensor, xv) -> np.ndarray:
    mu = _lie(mu)
    return ad_dense(mu.dense, qarray(xv)) if mu.dim else qzeros(0, 0)


def basis_ads(mu: BracketTensor) -> list[np.ndarray]:
    c = mu.dense
    return [c[i].T.copy() for i in range(mu.dim)]


def bracket_subspaces(mu: BracketTensor, a: Subspace, b: Subspace) -> Subspace:
    """Span of mu(u, v) for u in a, v in b."""
    c = mu.dense
    vecs = [bracket_vectors(c, qarray(u), qarray(v)) for u in a.basis for v in b.basis]
    return Subspace.span(vecs, mu.dim)


def commutator_subalgebra(mu: BracketTensor) -> Subspace:
    mu = _lie(mu)
    vecs = [mu.dense[i, j] for i in range(mu.dim) for j in range(i + 1, mu.dim)]
    return Subspace.span(vecs, mu.dim)


def lower_central_series(mu: BracketTensor) -> list[Subspace]:
    full = Subspace.full(mu.dim)
    series = [full]
    while series[-1].dim:
        nxt = bracket_subspaces(mu, full, series[-1])
        if nxt == series[-1]:
            break
        series.append(nxt)
    return series


def derived_series(mu: BracketTensor) -> list[Subspace]:
    series = [Subspace.full(mu.dim)]
    while series[-1].dim:
        nxt = bracket_subspaces(mu, series[-1], series[-1])
        if nxt == series[-1]:
            break
        series.append(nxt)
    return series


def is_ideal(mu: BracketTensor, sub: Subspace) -> bool:
    full = Subspace.full(mu.dim)
    return sub.contains_space(bracket_subspaces(mu, full, sub))


def is_subalgebra(mu: BracketTensor, sub: Subspace) -> bool:
    return sub.contains_space(bracket_subspaces(mu, sub, sub))


def sample_points(n: int) -> list[np.ndarray]:
    """Basis vectors followed by 2n+1 points on the rational moment curve."""
    pts = [qeye(n)[i] for i in range(n)]
    for t in range(1, 2 * n + 2):
        pts.append(qarray([Fraction(t) ** (i + 1) / (i + 1) for i in range(n)]))
    return pts


@dataclass(frozen=True)
class AlgebraClass:
    nilpotent: bool
    completely_solvable: bool
    solvable: bool
    unimodular: bool
    nilpotency_step: int | None
    solvability_step: int | None

    def as_dict(self) -> dict:
        return dict(self.__dict__)


def classify(mu: BracketTensor) -> AlgebraClass:
    """Nilpotent, completely solvable, solvable and unimodular flags.

    Step counts are the number of nonzero terms of the lower central and
    derived series (an abelian algebra has step 1, the zero space step 0).
    """
    mu = _lie(mu)
    lcs = lower_central_series(mu)
    nilpotent = lcs[-1].dim == 0
    ds = derived_series(mu)
    solvable = ds[-1].dim == 0
    ads = basis_ads(mu)
    unimodular = all(exact.trace(a) == 0 for a in ads)
    if nilpotent:
        cs = True
    elif solvable:
        cs = all(exact.has_only_real_eigenvalues(ad_dense(mu.dense, p)) for p in sample_points(mu.dim))
    else:
        cs = False
    return AlgebraClass(
        nilpotent=nilpotent,
        completely_solvable=cs,
        solvable=solvable,
        unimodular=unimodular,
        nilpotency_step=len(lcs) - 1 if nilpotent else None,
        solvability_step=len(ds) - 1 if solvable else None,
    )


def is_nilpotent(mu: BracketTensor) -> bool:
    return lower_central_series(_lie(mu))[-1].dim == 0


def is_solvable(mu: BracketTensor) -> bool:
    return derived_series(_lie(mu))[-1].dim == 0


def restrict(mu: BracketTensor, sub: Subspace | list, name=None) -> BracketTensor:
    """Bracket of a subalgebra written in coordinates of the given basis.

    ``sub`` may be a Subspace (its echelon basis is used) or an explicit
    list of basis vectors.
    """
    vecs = [qarray(v) for v in (sub.basis if isinstance(sub, Subspace) else sub)]
    m = len(vecs)
    if m == 0:
        return BracketTensor.zero(0, name)
    span = Subspace.span(vecs, mu.dim)
    if span.dim != m:
        raise DimensionMismatch("basis vectors are linearly dependent")
    basis_matrix = np.array(vecs, dtype=object).T
    coeffs = {}
    c = mu.dense
    for a in range(m):
        for b in range(a + 1, m):
            w = bracket_vectors(c, vecs[a], vecs[b])
            if exact.is_zero(w):
                continue
            try:
                coords = exact.solve(basis_matrix, w)
            except exact.NoSolution:
                raise NotSubalgebra("subspace is not closed under the bracket") from None
            for k, v in enumerate(coords):
                if v:
                    coeffs[(a, b, k)] = v
    return BracketTensor(m, coeffs, name, mu.validated)


def nilradical(mu: BracketTensor, seed: int = 0) -> Subspace:
    """Maximal nilpotent ideal of a solvable algebra.

    Candidates X satisfy tr(ad X (ad Y)^j) = 0 for j < n, with Y running
    over the basis and a generic combination.  For generic Y these
    equations cut out exactly the common kernel of the weights of ad s,
    which is the nilradical; the result is checked to be a nilpotent ideal
    and more random Y are added if the check ever fails.
    """
    mu = _lie(mu)
    if not is_solvable(mu):
        raise NotSolvable("nilradical requested for a non-solvable algebra")
    n = mu.dim
    if n == 0:
        return Subspace.zero(0)
    if is_nilpotent(mu):
        return Subspace.full(n)
    rng = random.Random(seed)
    ads = basis_ads(mu)
    ys = [qeye(n)[i] for i in range(n)]
    rows: list[list[Fraction]] = []

    def add_rows(y):
        ady = ad_dense(mu.dense, y)
        p = qeye(n)
        for _ in range(n):
            rows.append([exact.trace(a @ p) for a in ads])
            p = p @ ady

    for y in ys:
        add_rows(y)
    for attempt in range(8):
        add_rows(qarray([rng.randint(-7, 7) for _ in range(n)]))
        cand = exact.kernel(np.array(rows, dtype=object))
        if is_ideal(mu, cand) and is_nilpotent(restrict(mu, cand)):
            return cand
    from .errors import RadicalVerificationFailed

    raise RadicalVerificationFailed("nilradical candidate failed verification")  # pragma: no cover


# ---------------------------------------------------------------------------
# group and algebra actions


def act(g, mu: BracketTensor) -> BracketTensor:
    g = qarray(g)
    if g.shape != (mu.dim, mu.dim):
        raise DimensionMismatch("matrix size does not match bracket dimension")
    try:
        h = exact.inverse(g)
    except SingularMatrix:
        raise
    return BracketTensor.from_dense(act_dense(g, mu.dense, h), mu.name, mu.validated)


def infinitesimal_act(xm, mu: BracketTensor) -> BracketTensor:
    xm = qarray(xm)
    if xm.shape != (mu.dim, mu.dim):
        raise DimensionMismatch("matrix size does not match bracket dimension")
    return BracketTensor.from_dense(pi_dense(xm, mu.dense))


def direct_sum(mu1: BracketTensor, mu2: BracketTensor, name=None) -> BracketTensor:
    n1 = mu1.dim
    coeffs = dict(mu1.coeffs)
    for (i, j, k), v in mu2.coeffs.items():
        coeffs[(i + n1, j + n1, k + n1)] = v
    if name is None and mu1.name and mu2.name:
        name = f"{mu1.name}+{mu2.name}"
    return BracketTensor(n1 + mu2.dim, coeffs, name, mu1.validated and mu2.validated)


def verify_splitting(mu: BracketTensor, parts: tuple[Subspace, Subspace]) -> bool:
    """True iff both subspaces are ideals (hence mixed brackets vanish).

    Raises DimensionMismatch when the two subspaces are not complementary.
    """
    a, b = parts
    if a.ambient != mu.dim or b.ambient != mu.dim:
        raise DimensionMismatch("splitting lives in the wrong ambient space")
    if a.dim + b.dim != mu.dim or (a + b).dim != mu.dim:
        raise DimensionMismatch("subspaces are not complementary")
    return is_ideal(mu, a) and is_ideal(mu, b) and bracket_subspaces(mu, a, b).dim == 0


def split(mu: BracketTensor, parts: tuple[Subspace, Subspace]) -> tuple[BracketTensor, BracketTensor]:
    """Restrict mu to both ideals of a verified splitting."""
    try:
        ok = verify_splitting(mu, parts)
    except DimensionMismatch as exc:
        raise BadSplitting(str(exc)) from None
    if not ok:
        raise BadSplitting("the given subspaces are not complementary ideals")
    return restrict(mu, parts[0]), restrict(mu, parts[1])


__all__ = [
    "AlgebraClass",
    "BracketTensor",
    "act",
    "act_dense",
    "ad_dense",
    "ad_matrix",
    "basis_ads",
    "bracket_subspaces",
    "classify",
    "commutator_subalgebra",
    "derived_series",
    "direct_sum",
    "infinitesimal_act",
    "inner_dense",
    "is_ideal",
    "is_nilpotent",
    "is_solvable",
    "jacobi_dense",
    "lower_central_series",
    "nilradical",
    "norm2_dense",
    "pi_dense",
    "restrict",
    "split",
    "validate_jacobi",
    "verify_splitting",
]
