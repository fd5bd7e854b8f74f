"""Exact linear algebra over the rationals.

Matrices are numpy object arrays of :class:`fractions.Fraction`.  Polynomial
work (factorisation, real-root counting) is delegated to sympy over ``QQ``.
No floating point enters any function here.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np
import sympy
from sympy import QQ, Poly

from .errors import (
    NoSolution,
    NotSimultaneouslyDiagonalizable,
    NotSubalgebra,
    RadicalVerificationFailed,
    SingularMatrix,
)

x = sympy.Symbol("x")

ZERO = Fraction(0)
ONE = Fraction(1)


# ---------------------------------------------------------------------------
# scalar and array conversion


def q(value) -> Fraction:
    """Convert ``value`` to an exact :class:`Fraction`.

    Accepts ints, Fractions, strings such as ``"-3/2"`` or ``"0.25"``,
    sympy rationals and gmpy/sympy ``QQ`` elements.  Floats are converted
    exactly (binary expansion), which is only meant for test fixtures.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, (bool, np.bool_)):
        raise TypeError("booleans are not rationals")
    if isinstance(value, (int, np.integer)):
        return Fraction(int(value))
    if isinstance(value, str):
        return Fraction(value.strip().replace("−", "-"))
    if isinstance(value, sympy.Rational):
        return Fraction(int(value.p), int(value.q))
    if hasattr(value, "numerator") and hasattr(value, "denominator"):
        return Fraction(int(value.numerator), int(value.denominator))
    if isinstance(value, (float, np.floating)):
        return Fraction(float(value))
    raise TypeError(f"cannot interpret {value!r} as a rational")


def qarray(a) -> np.ndarray:
    """Object array of Fractions with the shape of ``a``."""
    arr = np.asarray(a, dtype=object)
    out = np.empty(arr.shape, dtype=object)
    for idx, v in np.ndenumerate(arr):
        out[idx] = q(v)
    return out


def qzeros(*shape) -> np.ndarray:
    out = np.empty(shape, dtype=object)
    out.fill(ZERO)
    return out


def qeye(n: int) -> np.ndarray:
    out = qzeros(n, n)
    for i in range(n):
        out[i, i] = ONE
    return out


def is_zero(a) -> bool:
    return all(v == 0 for v in np.asarray(a, dtype=object).flat)


def to_float(a) -> np.ndarray:
    return np.asarray(a, dtype=object).astype(float)


def trace(a) -> Fraction:
    return sum((a[i, i] for i in range(a.shape[0])), ZERO)


def comm(a, b):
    return a @ b - b @ a


# ---------------------------------------------------------------------------
# row reduction


def _rref_rows(rows: list[list[Fraction]], ncols: int):
    """Gauss-Jordan elimination in place; returns (nonzero rows, pivot cols)."""
    rows = [list(r) for r in rows]
    pivots: list[int] = []
    r = 0
    nrows = len(rows)
    for c in range(ncols):
        if r == nrows:
            break
        piv = None
        for i in range(r, nrows):
            if rows[i][c] != 0:
                piv = i
                break
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        p = rows[r][c]
        if p != 1:
            rows[r] = [v / p for v in rows[r]]
        prow = rows[r]
        support = [j for j in range(c, ncols) if prow[j] != 0]
        for i in range(nrows):
            if i != r:
                f = rows[i][c]
                if f != 0:
                    row = rows[i]
                    for j in support:
                        row[j] -= f * prow[j]
        pivots.append(c)
        r += 1
    return rows[:r], pivots


def _as_rows(a) -> tuple[list[list[Fraction]], int]:
    arr = np.asarray(a, dtype=object)
    if arr.ndim != 2:
        raise ValueError("expected a 2-d array")
    return [[q(v) for v in row] for row in arr], arr.shape[1]


def rref(a):
    """Reduced row echelon form: returns (object array, pivot column list)."""
    rows, ncols = _as_rows(a)
    red, piv = _rref_rows(rows, ncols)
    if not red:
        return qzeros(0, ncols), piv
    return qarray(red), piv


def rank(a) -> int:
    rows, ncols = _as_rows(a)
    return len(_rref_rows(rows, ncols)[1])


def kernel(a) -> "Subspace":
    """Right kernel {v : a v = 0} as a canonical Subspace."""
    rows, ncols = _as_rows(a)
    red, piv = _rref_rows(rows, ncols)
    pivset = set(piv)
    vecs = []
    for f in range(ncols):
        if f in pivset:
            continue
        v = [ZERO] * ncols
        v[f] = ONE
        for r, c in enumerate(piv):
            v[c] = -red[r][f]
        vecs.append(v)
    return Subspace.span(vecs, ncols)


def solve(a, b) -> np.ndarray:
    """One exact solution of ``a v = b`` (free variables set to zero)."""
    rows, ncols = _as_rows(a)
    b = [q(v) for v in np.asarray(b, dtype=object).flat]
    if len(b) != len(rows):
        raise ValueError("right-hand side has wrong length")
    aug = [row + [bi] for row, bi in zip(rows, b)]
    red, piv = _rref_rows(aug, ncols + 1)
    if piv and piv[-1] == ncols:
        raise NoSolution("inconsistent linear system")
    v = [ZERO] * ncols
    for r, c in enumerate(piv):
        v[c] = red[r][ncols]
    return qarray(v)


def inverse(a) -> np.ndarray:
    arr = np.asarray(a, dtype=object)
    n = arr.shape[0]
    if arr.shape != (n, n):
        raise SingularMatrix("matrix is not square")
    rows, _ = _as_rows(arr)
    aug = [row + [ONE if i == j else ZERO for j in range(n)] for i, row in enumerate(rows)]
    red, piv = _rref_rows(aug, 2 * n)
    if len(piv) < n or piv[n - 1] != n - 1:
        raise SingularMatrix("matrix is singular")
    return qarray([row[n:] for row in red])


def det(a) -> Fraction:
    arr = qarray(a)
    n = arr.shape[0]
    rows = [list(r) for r in arr]
    d = ONE
    for c in range(n):
        piv = next((i for i in range(c, n) if rows[i][c] != 0), None)
        if piv is None:
            return ZERO
        if piv != c:
            rows[c], rows[piv] = rows[piv], rows[c]
            d = -d
        p = rows[c][c]
        d *= p
        for i in range(c + 1, n):
            f = rows[i][c] / p
            if f:
                rows[i] = [u - f * w for u, w in zip(rows[i], rows[c])]
    return d


def is_positive_definite(g) -> bool:
    """Exact test via symmetric Gaussian elimination (all pivots > 0)."""
    rows = [list(r) for r in qarray(g)]
    n = len(rows)
    for c in range(n):
        p = rows[c][c]
        if p <= 0:
            return False
        for i in range(c + 1, n):
            f = rows[i][c] / p
            if f:
                rows[i] = [u - f * w for u, w in zip(rows[i], rows[c])]
    return True


# ---------------------------------------------------------------------------
# subspaces


@dataclass(frozen=True)
class Subspace:
    """Rational subspace of Q^n, basis kept in reduced row echelon form."""

    ambient: int
    basis: tuple[tuple[Fraction, ...], ...]
    pivots: tuple[int, ...]

    @classmethod
    def span(cls, vectors: Iterable[Sequence], ambient: int) -> "Subspace":
        rows = [[q(v) for v in np.asarray(vec, dtype=object).flat] for vec in vectors]
        for r in rows:
            if len(r) != ambient:
                raise ValueError(f"vector of length {len(r)} in ambient dimension {ambient}")
        red, piv = _rref_rows(rows, ambient)
        return cls(ambient, tuple(tuple(r) for r in red), tuple(piv))

    @classmethod
    def zero(cls, n: int) -> "Subspace":
        return cls(n, (), ())

    @classmethod
    def full(cls, n: int) -> "Subspace":
        return cls.span(qeye(n), n)

    @classmethod
    def coordinate(cls, n: int, indices: Iterable[int]) -> "Subspace":
        vecs = []
        for i in indices:
            v = [ZERO] * n
            v[i] = ONE
            vecs.append(v)
        return cls.span(vecs, n)

    @property
    def dim(self) -> int:
        return len(self.basis)

    def matrix(self) -> np.ndarray:
        """Basis vectors as the rows of a (dim x ambient) object array."""
        if not self.basis:
            return qzeros(0, self.ambient)
        return qarray(self.basis)

    def vectors(self) -> list[np.ndarray]:
        return [qarray(b) for b in self.basis]

    def coordinates(self, v) -> tuple[Fraction, ...]:
        v = [q(a) for a in np.asarray(v, dtype=object).flat]
        coords = tuple(v[p] for p in self.pivots)
        recon = [ZERO] * self.ambient
        for c, b in zip(coords, self.basis):
            if c:
                for j, bj in enumerate(b):
                    if bj:
                        recon[j] += c * bj
        if recon != v:
            raise NoSolution("vector is not in the subspace")
        return coords

    def __contains__(self, v) -> bool:
        try:
            self.coordinates(v)
        except NoSolution:
            return False
        return True

    def contains_space(self, other: "Subspace") -> bool:
        return all(b in self for b in other.basis)

    def orthogonal_complement(self) -> "Subspace":
        """Complement with respect to the standard dot product."""
        if not self.basis:
            return Subspace.full(self.ambient)
        return kernel(self.matrix())

    def __add__(self, other: "Subspace") -> "Subspace":
        self._check(other)
        return Subspace.span(list(self.basis) + list(other.basis), self.ambient)

    def intersect(self, other: "Subspace") -> "Subspace":
        self._check(other)
        if not self.basis or not other.basis:
            return Subspace.zero(self.ambient)
        perp = other.orthogonal_complement()
        if not perp.basis:
            return self
        m = np.array(
            [[sum((a * b for a, b in zip(w, u)), ZERO) for u in self.basis] for w in perp.basis],
            dtype=object,
        )
        ker = kernel(m)
        vecs = []
        for c in ker.basis:
            vecs.append([sum((ci * u[j] for ci, u in zip(c, self.basis)), ZERO) for j in range(self.ambient)])
        return Subspace.span(vecs, self.ambient)

    def _check(self, other):
        if self.ambient != other.ambient:
            from .errors import DimensionMismatch

            raise DimensionMismatch("subspaces live in different ambient spaces")

    def __repr__(self):
        body = ", ".join("(" + ", ".join(str(v) for v in b) + ")" for b in self.basis)
        return f"Subspace(ambient={self.ambient}, basis=[{body}])"


# ---------------------------------------------------------------------------
# matrix algebras


@dataclass(frozen=True)
class MatrixAlgebra:
    """Linear span of n x n rational matrices, stored as a Subspace of Q^(n^2)."""

    n: int
    space: Subspace

    @classmethod
    def span(cls, mats: Iterable, n: int, lie_closed: bool = False) -> "MatrixAlgebra":
        vecs = [np.asarray(m, dtype=object).reshape(n * n) for m in mats]
        alg = cls(n, Subspace.span(vecs, n * n))
        if lie_closed and not alg.is_closed():
            raise NotSubalgebra("span is not closed under the commutator")
        return alg

    @classmethod
    def from_space(cls, n: int, space: Subspace) -> "MatrixAlgebra":
        return cls(n, space)

    @classmethod
    def gl(cls, n: int) -> "MatrixAlgebra":
        return cls(n, Subspace.full(n * n))

    @classmethod
    def zero(cls, n: int) -> "MatrixAlgebra":
        return cls(n, Subspace.zero(n * n))

    @property
    def dim(self) -> int:
        return self.space.dim

    @cached_property
    def basis(self) -> list[np.ndarray]:
        return [qarray(b).reshape(self.n, self.n) for b in self.space.basis]

    def __contains__(self, m) -> bool:
        return np.asarray(m, dtype=object).reshape(self.n * self.n) in self.space

    def coordinates(self, m) -> tuple[Fraction, ...]:
        return self.space.coordinates(np.asarray(m, dtype=object).reshape(self.n * self.n))

    def combination(self, coeffs) -> np.ndarray:
        out = qzeros(self.n, self.n)
        for c, b in zip(coeffs, self.basis):
            if c:
                out = out + q(c) * b
        return out

    def intersect(self, other: "MatrixAlgebra") -> "MatrixAlgebra":
        return MatrixAlgebra(self.n, self.space.intersect(other.space))

    def __add__(self, other: "MatrixAlgebra") -> "MatrixAlgebra":
        return MatrixAlgebra(self.n, self.space + other.space)

    def contains_algebra(self, other: "MatrixAlgebra") -> bool:
        return self.space.contains_space(other.space)

    def is_closed(self) -> bool:
        b = self.basis
        return all(comm(b[i], b[j]) in self for i in range(len(b)) for j in range(i + 1, len(b)))

    def is_abelian(self) -> bool:
        b = self.basis
        return all(is_zero(comm(b[i], b[j])) for i in range(len(b)) for j in range(i + 1, len(b)))

    def symmetric_part(self) -> "MatrixAlgebra":
        """Subspace of symmetric elements."""
        return self.intersect(symmetric_matrices(self.n))

    def __repr__(self):
        return f"MatrixAlgebra(n={self.n}, dim={self.dim})"


def symmetric_matrices(n: int) -> MatrixAlgebra:
    mats = []
    for i in range(n):
        for j in range(i, n):
            m = qzeros(n, n)
            m[i, j] = ONE
            m[j, i] = ONE
            mats.append(m)
    return MatrixAlgebra.span(mats, n)


def skew_matrices(n: int) -> MatrixAlgebra:
    mats = []
    for i in range(n):
        for j in range(i + 1, n):
            m = qzeros(n, n)
            m[i, j] = ONE
            m[j, i] = -ONE
            mats.append(m)
    return MatrixAlgebra.span(mats, n) if mats else MatrixAlgebra.zero(n)


def bracket_span(a: MatrixAlgebra, b: MatrixAlgebra) -> MatrixAlgebra:
    """Linear span of [X, Y] over basis elements X of a, Y of b."""
    return MatrixAlgebra.span([comm(u, v) for u in a.basis for v in b.basis], a.n)


def derived_series(a: MatrixAlgebra, limit: int = 64) -> list[MatrixAlgebra]:
    series = [a]
    while series[-1].dim and len(series) < limit:
        nxt = bracket_span(series[-1], series[-1])
        if nxt.dim == series[-1].dim:
            break
        series.append(nxt)
    return series


def is_solvable_algebra(a: MatrixAlgebra) -> bool:
    return derived_series(a)[-1].dim == 0


def trace_form_orthogonal(a: MatrixAlgebra, against: Sequence[np.ndarray]) -> MatrixAlgebra:
    """{X in a : tr(X Y) = 0 for every Y in ``against``}."""
    if not against or not a.dim:
        return a
    m = np.array([[trace(b @ y) for b in a.basis] for y in against], dtype=object)
    ker = kernel(m)
    return MatrixAlgebra.span([a.combination(c) for c in ker.basis], a.n) if ker.dim else MatrixAlgebra.zero(a.n)


def centralizer(a: MatrixAlgebra, s: Sequence) -> MatrixAlgebra:
    """{X in a : [X, s] = 0 for all s}."""
    s = [qarray(m) for m in s]
    if not s or not a.dim:
        return a
    n = a.n
    rows = []
    for m in s:
        cols = [comm(b, m).reshape(n * n) for b in a.basis]
        for r in range(n * n):
            rows.append([c[r] for c in cols])
    ker = kernel(np.array(rows, dtype=object))
    return MatrixAlgebra.span([a.combination(c) for c in ker.basis], n) if ker.dim else MatrixAlgebra.zero(n)


def radical(a: MatrixAlgebra) -> MatrixAlgebra:
    """Maximal solvable ideal of a linear Lie algebra over Q.

    Computed as the trace-form orthogonal of [a, a] and checked to be a
    solvable ideal.  For linear Lie algebras in characteristic zero that
    orthogonal is exactly the radical, so the check only guards bugs.
    """
    if not a.dim:
        return a
    d = bracket_span(a, a)
    r = trace_form_orthogonal(a, d.basis)
    ok = is_solvable_algebra(r) and all(comm(u, v) in r for u in a.basis for v in r.basis)
    if not ok:
        raise RadicalVerificationFailed("trace-form orthogonal of the derived algebra is not a solvable ideal")
    return r


def is_reductive(a: MatrixAlgebra):
    """Return ``(True, None)`` or ``(False, witness)``.

    The witness is a nonzero nilpotent matrix in the radical: either a
    nonzero bracket of radical elements (the radical is then nonabelian and
    its derived algebra consists of nilpotent matrices) or the nilpotent
    Jordan part of a radical basis element.
    """
    r = radical(a)
    for i, u in enumerate(r.basis):
        for v in r.basis[i + 1 :]:
            c = comm(u, v)
            if not is_zero(c):
                return False, c
    for u in r.basis:
        _, nil = jordan_chevalley(u)
        if not is_zero(nil):
            return False, nil
    return True, None


# ---------------------------------------------------------------------------
# polynomials


def _qq(v) -> object:
    v = q(v)
    return QQ(v.numerator, v.denominator)


def poly_from_coeffs(coeffs_high_to_low) -> Poly:
    return Poly([_qq(c) for c in coeffs_high_to_low], x, domain=QQ)


def poly_coeffs(p: Poly) -> list[Fraction]:
    return [q(c) for c in p.all_coeffs()]


def eval_poly_matrix(p: Poly, m) -> np.ndarray:
    """Horner evaluation of p at the square matrix m."""
    n = m.shape[0]
    out = qzeros(n, n)
    eye = qeye(n)
    for c in poly_coeffs(p):
        out = out @ m + c * eye
    return out


def charpoly(m) -> Poly:
    """Characteristic polynomial det(xI - m) via Faddeev-LeVerrier."""
    m = qarray(m)
    n = m.shape[0]
    coeffs = [ONE]
    mk = qzeros(n, n)
    eye = qeye(n)
    c = ONE
    for k in range(1, n + 1):
        mk = m @ mk + c * eye
        c = -trace(m @ mk) / k
        coeffs.append(c)
    return poly_from_coeffs(coeffs)


def minimal_polynomial(m) -> Poly:
    """Monic minimal polynomial via the first linear dependency among powers."""
    m = qarray(m)
    n = m.shape[0]
    if n == 0:
        return Poly(1, x, domain=QQ)
    powers = [qeye(n).reshape(n * n)]
    p = qeye(n)
    for k in range(1, n + 1):
        p = p @ m
        flat = p.reshape(n * n)
        a = np.array(powers, dtype=object).T
        try:
            sol = solve(a, flat)
        except NoSolution:
            powers.append(flat)
            continue
        coeffs = [ONE] + [-sol[i] for i in range(k - 1, -1, -1)]
        return poly_from_coeffs(coeffs)
    raise AssertionError("Cayley-Hamilton violated")  # pragma: no cover


def squarefree_part(p: Poly) -> Poly:
    g = p.gcd(p.diff(x))
    return p.quo(g).monic()


def rational_roots(p: Poly):
    """Roots with multiplicity if p splits over Q, else None."""
    _, factors = p.factor_list()
    roots = []
    for f, mult in factors:
        if f.degree() > 1:
            return None
        a, b = poly_coeffs(f)
        roots.append((-b / a, mult))
    roots.sort()
    return roots


@dataclass(frozen=True)
class SemisimplicityReport:
    is_semisimple: bool
    minimal_polynomial: Poly
    eigenvalues_rational: tuple[tuple[Fraction, int], ...] | None

    @property
    def eigenvalues(self) -> tuple[Fraction, ...] | None:
        if self.eigenvalues_rational is None:
            return None
        return tuple(v for v, _ in self.eigenvalues_rational)


def is_semisimple(m) -> SemisimplicityReport:
    """Semisimplicity over C plus the rational spectrum when it exists.

    Multiplicities in ``eigenvalues_rational`` are algebraic multiplicities
    taken from the characteristic polynomial.
    """
    m = qarray(m)
    mp = minimal_polynomial(m)
    sqf = mp.gcd(mp.diff(x)).degree() == 0
    roots = rational_roots(charpoly(m)) if rational_roots(mp) is not None else None
    return SemisimplicityReport(sqf, mp, tuple(roots) if roots is not None else None)


def jordan_chevalley(m):
    """Exact additive Jordan decomposition m = s + n over Q.

    Newton iteration on the squarefree part p of the characteristic
    polynomial: s <- s - p(s) p'(s)^-1 converges in finitely many steps.
    """
    m = qarray(m)
    n = m.shape[0]
    if n == 0:
        return m, m
    p = squarefree_part(charpoly(m))
    dp = p.diff(x)
    s = m
    for _ in range(2 * n + 8):
        ps = eval_poly_matrix(p, s)
        if is_zero(ps):
            return s, m - s
        s = s - ps @ inverse(eval_poly_matrix(dp, s))
    raise AssertionError("Jordan-Chevalley iteration did not terminate")  # pragma: no cover


def _all_roots_real(f: Poly) -> bool:
    """f irreducible over Q (hence squarefree)."""
    return f.count_roots() == f.degree()


def has_only_real_eigenvalues(m) -> bool:
    _, factors = charpoly(m).factor_list()
    return all(_all_roots_real(f) for f, _ in factors)


def has_only_imaginary_eigenvalues(m) -> bool:
    """True iff every complex eigenvalue of m has zero real part.

    Each irreducible rational factor f is either x itself or an even
    polynomial f(x) = g(x^2) with every root of g real and <= 0; both
    conditions are checked exactly (Sturm counting inside sympy).
    """
    _, factors = charpoly(m).factor_list()
    for f, _ in factors:
        coeffs = poly_coeffs(f)
        deg = f.degree()
        if deg == 1:
            if coeffs[1] != 0:
                return False
            continue
        if deg % 2:
            return False
        # coefficients high to low: odd powers of x sit at odd offsets
        if any(coeffs[i] for i in range(1, deg + 1, 2)):
            return False
        g = poly_from_coeffs(coeffs[0::2])
        if g.count_roots(None, 0) != g.degree():
            return False
    return True


# ---------------------------------------------------------------------------
# simultaneous diagonalisation


def simultaneous_diagonalize(mats: Sequence):
    """Common eigenbasis of commuting semisimple matrices with rational spectra.

    Returns ``(g, weights)`` where the columns of g are eigenvectors, so that
    ``g^-1 s g`` is diagonal for every s, and ``weights[p]`` lists the
    eigenvalue of each s on column p.  Columns are ordered by the position
    of their leading entry, ties broken by decreasing weight.
    """
    mats = [qarray(s) for s in mats]
    if not mats:
        raise NotSimultaneouslyDiagonalizable("empty family")
    n = mats[0].shape[0]
    for i, a in enumerate(mats):
        for b in mats[i + 1 :]:
            if not is_zero(comm(a, b)):
                raise NotSimultaneouslyDiagonalizable("matrices do not commute")
    spaces: list[tuple[Subspace, tuple[Fraction, ...]]] = [(Subspace.full(n), ())]
    eye = qeye(n)
    for s in mats:
        rep = is_semisimple(s)
        if not rep.is_semisimple or rep.eigenvalues_rational is None:
            raise NotSimultaneouslyDiagonalizable("matrix is not semisimple with rational spectrum")
        eig = [kernel(s - lam * eye) for lam in rep.eigenvalues]
        refined = []
        for space, w in spaces:
            for lam, e in zip(rep.eigenvalues, eig):
                part = space.intersect(e)
                if part.dim:
                    refined.append((part, w + (lam,)))
        spaces = refined
    cols = []
    for space, w in spaces:
        for b in space.basis:
            lead = next(i for i, v in enumerate(b) if v != 0)
            cols.append((lead, tuple(-v for v in w), b, w))
    cols.sort(key=lambda t: (t[0], t[1]))
    g = qarray([c[2] for c in cols]).T
    weights = [c[3] for c in cols]
    return g, weights
