"""The bracket flow: negative gradient flow of F = |m|^2 on the unit sphere of V.

Along the flow mu_t = g_t . mu_0 with dg/dt = -4 (m(mu_t) + F Id) g_t, so the
integrator carries g_t alongside the bracket.  That makes the
change of basis relating mu_0 and the limit available to the metric
constructions in :mod:`solvsoliton.decide`.
"""

from __future__ import annotations

import csv
import time
from dataclasses import dataclass, field

import numpy as np

from . import exact
from .brackets import BracketTensor, act_dense, ad_dense, inner_dense, pi_dense
from .curvature import build_solsoliton_metric, moment_map_fast, sym
from .derivations import derivation_algebra, derivation_map
from .errors import NonNegativeC, OutOfRange, ZeroBracket
from .exact import Subspace

RANK_REL = 1e-7
GAP_MIN = 1e2


def as_float(mu) -> np.ndarray:
    if isinstance(mu, BracketTensor):
        return mu.dense_float()
    return np.asarray(mu, dtype=float)


def norm(c: np.ndarray) -> float:
    return float(np.sqrt(inner_dense(c, c)))


def normalize(c: np.ndarray) -> np.ndarray:
    s = norm(c)
    if s == 0:
        raise ZeroBracket("cannot normalise the zero bracket")
    return c / s


def F_value(c: np.ndarray) -> float:
    m = moment_map_fast(c)
    return float(np.sum(m * m))


def grad_F(mu) -> np.ndarray:
    """Gradient of F in V, tangent to the sphere: 4 (pi(m)mu - F mu)/|mu|^2."""
    c = as_float(mu)
    m = moment_map_fast(c)
    f = np.sum(m * m)
    return 4.0 * (pi_dense(m, c) - f * c) / inner_dense(c, c)


@dataclass(frozen=True)
class CriticalReport:
    is_critical: bool
    r: float
    residual: float


def critical_residual(c: np.ndarray) -> tuple[float, float]:
    c = normalize(c)
    m = moment_map_fast(c)
    pm = pi_dense(m, c)
    r = float(inner_dense(pm, c))
    return r, norm(pm - r * c)


def is_critical(mu, tol: float = 1e-9) -> CriticalReport:
    r, res = critical_residual(as_float(mu))
    return CriticalReport(res < tol, r, res)


def numerical_derivation_dim(mu, rel: float = RANK_REL) -> tuple[int, float]:
    """(dim Der, singular-value gap) of the float map X -> pi(X)mu."""
    c = as_float(mu)
    n = c.shape[0]
    lmap = derivation_map(c)
    if lmap.size == 0:
        return n * n, float("inf")
    s = np.linalg.svd(lmap, compute_uv=False)
    smax = s[0]
    if smax == 0:
        return n * n, float("inf")
    r = int(np.sum(s > rel * smax))
    pos = s[r - 1] if r else 0.0
    zero = s[r] if r < len(s) else 0.0
    return n * n - r, float(pos / max(zero, 1e-16 * smax))


def compact_stabilizer_dim(mu, rel: float = RANK_REL) -> int:
    """dim(Der(mu) ∩ so(n)), exact for BracketTensor input."""
    if isinstance(mu, BracketTensor):
        return derivation_algebra(mu).intersect(exact.skew_matrices(mu.dim)).dim
    c = as_float(mu)
    n = c.shape[0]
    skew = [np.asarray(k, dtype=float) for k in exact.skew_matrices(n).basis]
    if not skew:
        return 0
    if not np.any(c):
        return len(skew)
    lmap = derivation_map(c)
    cols = np.column_stack([lmap @ k.ravel() for k in skew])
    s = np.linalg.svd(cols, compute_uv=False)
    full = np.linalg.svd(lmap, compute_uv=False)[0]
    return len(skew) - int(np.sum(s > rel * full))


# ---------------------------------------------------------------------------
# integrator

# Dormand-Prince 5(4) tableau
_A = [
    [],
    [1 / 5],
    [3 / 40, 9 / 40],
    [44 / 45, -56 / 15, 32 / 9],
    [19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729],
    [9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656],
    [35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84],
]
_B5 = np.array([35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84, 0.0])
_B4 = np.array([5179 / 57600, 0.0, 7571 / 16695, 393 / 640, -92097 / 339200, 187 / 2100, 1 / 40])


def _generator(c: np.ndarray) -> np.ndarray:
    """A with dg/dt = A g, where pi(A)c is minus the gradient of F.

    Only pi(A)c matters for the bracket, so A is replaced by the
    least-norm matrix with the same image.  This strips the component
    along Der(c); otherwise g grows like exp(tD) near a soliton.
    """
    n = c.shape[0]
    m = moment_map_fast(c)
    f = np.sum(m * m)
    a = -4.0 * (m + f * np.eye(n)) / inner_dense(c, c)
    lmap = derivation_map(c)
    a_min, *_ = np.linalg.lstsq(lmap, lmap @ a.ravel(), rcond=1e-10)
    return a_min.reshape(n, n)


@dataclass
class FlowSample:
    t: float
    mu: np.ndarray
    F: float
    residual: float


@dataclass
class FlowTrajectory:
    samples: list[FlowSample]
    converged: bool
    mu_inf: np.ndarray
    g: np.ndarray  # mu_inf = g . (mu_0 / |mu_0|)
    steps: int = 0
    rejected: int = 0
    tol: float = 0.0
    extra: dict = field(default_factory=dict)

    @property
    def final(self) -> FlowSample:
        return self.samples[-1]

    def F_values(self) -> np.ndarray:
        return np.array([s.F for s in self.samples])

    def write_csv(self, path, max_rows: int = 2000) -> None:
        idx = _thin(len(self.samples), max_rows)
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["t", "F", "residual", "derdim"])
            for i in idx:
                s = self.samples[i]
                w.writerow([repr(s.t), repr(s.F), repr(s.residual), numerical_derivation_dim(s.mu)[0]])


def _thin(n: int, k: int) -> list[int]:
    if n <= k:
        return list(range(n))
    idx = sorted(set(np.linspace(0, n - 1, k).round().astype(int).tolist()))
    return idx


def flow(
    mu0,
    tol: float = 1e-10,
    max_time: float = 1e4,
    rtol: float = 1e-9,
    h0: float = 1e-3,
    max_steps: int = 200000,
    record_every: int = 1,
    max_seconds: float | None = 120.0,
) -> FlowTrajectory:
    """Integrate the bracket flow from mu0 until the critical residual < tol.

    The state is the group element g with mu_t = g . mu_0, so every
    sample lies on the orbit of mu_0 up to rounding and the flow cannot
    drift off the variety of Lie brackets.  Adaptive Dormand-Prince with
    error control on the bracket, renormalisation to the unit sphere after
    each step, and rejection of any step that would raise F by more than
    1e-12.  Reaching ``max_time``, ``max_steps`` or the wall-clock budget
    ``max_seconds`` returns an unconverged trajectory instead of raising.
    """
    c0 = normalize(as_float(mu0))
    n = c0.shape[0]
    eye = np.eye(n)
    g = eye.copy()
    c = c0
    t = 0.0
    f = F_value(c)
    r, res = critical_residual(c)
    samples = [FlowSample(0.0, c.copy(), f, res)]
    steps = rejected = 0
    h = h0
    deadline = None if max_seconds is None else time.monotonic() + max_seconds

    def orbit_point(gm):
        return act_dense(gm, c0, np.linalg.inv(gm))

    while res >= tol and t < max_time and steps < max_steps:
        if deadline is not None and time.monotonic() > deadline:
            break
        h = min(h, max_time - t)
        kg = []
        for stage in range(7):
            gi = g
            for coef, k in zip(_A[stage], kg):
                if coef:
                    gi = gi + h * coef * k
            ci = c if stage == 0 else orbit_point(gi)
            kg.append(_generator(ci) @ gi)
        g5 = g + h * sum(b * k for b, k in zip(_B5, kg) if b)
        g4 = g + h * sum(b * k for b, k in zip(_B4, kg) if b)
        try:
            c5 = orbit_point(g5)
            c4 = orbit_point(g4)
        except np.linalg.LinAlgError:
            h *= 0.25
            rejected += 1
            continue
        # the local error target follows the residual: near a critical point
        # stiff modes would otherwise park the solution at the tolerance
        err = float(np.max(np.abs(c5 - c4)) / min(rtol, max(1e-3 * res, 1e-15)))
        if not np.isfinite(err):
            h *= 0.25
            rejected += 1
            continue
        if err <= 1.0:
            s = norm(c5)
            c_new = c5 / s
            f_new = F_value(c_new)
            if f_new > f + 1e-12:
                h *= 0.5
                rejected += 1
                continue
            # (s g).mu0 = g.mu0 / s keeps the bracket on the unit sphere
            c, g, f = c_new, g5 * s, f_new
            t += h
            steps += 1
            r, res = critical_residual(c)
            if steps % record_every == 0 or res < tol:
                samples.append(FlowSample(t, c.copy(), f, res))
            fac = 0.9 * err ** (-0.2) if err > 0 else 5.0
            h *= min(5.0, max(0.2, fac))
        else:
            rejected += 1
            h *= max(0.1, 0.9 * err ** (-0.2))
    if samples[-1].t != t:
        samples.append(FlowSample(t, c.copy(), f, res))
    return FlowTrajectory(samples, res < tol, c, g, steps, rejected, tol)


# ---------------------------------------------------------------------------
# verdicts and metric curves


@dataclass(frozen=True)
class DistinguishedVerdict:
    distinguished: bool | None
    mu_inf: np.ndarray | None
    evidence: dict
    trajectory: FlowTrajectory | None = None


def distinguished_verdict(mu0: BracketTensor, tol: float = 1e-10, max_time: float = 1e4, **kw) -> DistinguishedVerdict:
    """Flow from mu0 and compare derivation dimensions at both ends.

    None means inconclusive: no convergence, or a singular-value gap below
    two orders of magnitude at the limit.
    """
    mu0 = mu0.checked()
    if mu0.is_zero:
        return DistinguishedVerdict(None, None, {"reason": "zero bracket: moment map undefined"})
    d0 = derivation_algebra(mu0).dim
    traj = flow(mu0, tol=tol, max_time=max_time, **kw)
    dinf, gap = numerical_derivation_dim(traj.mu_inf)
    ev = {
        "der_dim_start": d0,
        "der_dim_limit": dinf,
        "rank_gap": gap,
        "F": traj.final.F,
        "residual": traj.final.residual,
        "steps": traj.steps,
        "time": traj.final.t,
        "converged": traj.converged,
        "compact_stabilizer_start": compact_stabilizer_dim(mu0),
        "compact_stabilizer_limit": compact_stabilizer_dim(traj.mu_inf),
    }
    if not traj.converged:
        ev["reason"] = "flow did not reach the critical tolerance"
        return DistinguishedVerdict(None, traj.mu_inf, ev, traj)
    if gap < GAP_MIN:
        ev["reason"] = "singular value gap too small"
        return DistinguishedVerdict(None, traj.mu_inf, ev, traj)
    return DistinguishedVerdict(dinf == d0, traj.mu_inf, ev, traj)


def interpolated_gram(ads, c: float, t: float) -> np.ndarray:
    """(-1/c)[(2-t)/2 tr(ad A ad B^T) + (t-1) tr(S(ad A) S(ad B))] on the complement."""
    if not 1.0 <= t <= 2.0:
        raise OutOfRange("t must lie in [1, 2]")
    if c >= 0:
        raise NonNegativeC("c must be negative")
    ads = [np.asarray(a, dtype=float) for a in ads]
    k = len(ads)
    out = np.zeros((k, k))
    for i in range(k):
        for j in range(k):
            out[i, j] = (-1.0 / c) * (
                (2 - t) / 2 * np.trace(ads[i] @ ads[j].T) + (t - 1) * np.trace(sym(ads[i]) @ sym(ads[j]))
            )
    return out


def restricted_ads(mu, a: Subspace | list, n: Subspace | list) -> list[np.ndarray]:
    """ad A|n for A in the given complement basis, in an orthonormal basis of n."""
    c = as_float(mu)
    avecs = [np.asarray(v, dtype=float) for v in (a.basis if isinstance(a, Subspace) else a)]
    nmat = np.array([np.asarray(v, dtype=float) for v in (n.basis if isinstance(n, Subspace) else n)])
    qn, _ = np.linalg.qr(nmat.T)
    return [qn.T @ ad_dense(c, v) @ qn for v in avecs]


def metric_interpolation(mu, a, n, c: float, t: float) -> np.ndarray:
    """The curve of inner products on the complement joining the two metrics."""
    return interpolated_gram(restricted_ads(mu, a, n), c, t)


__all__ = [
    "CriticalReport",
    "DistinguishedVerdict",
    "FlowSample",
    "FlowTrajectory",
    "F_value",
    "build_solsoliton_metric",
    "compact_stabilizer_dim",
    "critical_residual",
    "distinguished_verdict",
    "flow",
    "grad_F",
    "interpolated_gram",
    "is_critical",
    "metric_interpolation",
    "normalize",
    "numerical_derivation_dim",
    "restricted_ads",
]
