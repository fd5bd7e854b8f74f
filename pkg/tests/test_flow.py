import csv

import numpy as np
import pytest

from oracles import random_unit_brackets
from solvsoliton.brackets import act_dense
from solvsoliton.corpus import H3, H5, L4, L5, N7, abelian
from solvsoliton.derivations import derivation_algebra
from solvsoliton.curvature import build_solsoliton_metric
from solvsoliton.errors import NonNegativeC, OutOfRange
from solvsoliton.flow import (
    F_value,
    compact_stabilizer_dim,
    critical_residual,
    distinguished_verdict,
    flow,
    grad_F,
    interpolated_gram,
    is_critical,
    normalize,
    numerical_derivation_dim,
)


def _random_tangent(c, rng):
    v = rng.standard_normal(c.shape)
    v = v - np.transpose(v, (1, 0, 2))
    return v


def test_gradient_matches_central_differences():
    rng = np.random.default_rng(1)
    h = 1e-5
    for c in random_unit_brackets(20):
        g = grad_F(c)
        for _ in range(3):
            v = _random_tangent(c, rng)
            fd = (F_value(c + h * v) - F_value(c - h * v)) / (2 * h)
            an = (g * v).sum() / 2
            assert abs(fd - an) <= 1e-6 * max(1.0, abs(an)), (fd, an)


def test_h3_is_critical_with_r_equal_F():
    rep = is_critical(H3)
    assert rep.is_critical and rep.r == pytest.approx(3.0)
    assert is_critical(H3.dense_float() * 5).is_critical
    assert np.abs(grad_F(normalize(H3.dense_float()))).max() < 1e-12


def test_random_bracket_is_not_critical():
    c = random_unit_brackets(3)[2]  # a perturbed l4
    assert not is_critical(c).is_critical


def test_flow_from_critical_point_stops_immediately():
    traj = flow(H3)
    assert traj.converged and traj.steps == 0


@pytest.mark.parametrize("mu", [L4, L5, H5], ids=["l4", "l5", "h5"])
def test_flow_recovers_the_nilsoliton(mu):
    rng = np.random.default_rng(3)
    g = np.eye(mu.dim) + 0.5 * rng.standard_normal((mu.dim, mu.dim))
    traj = flow(act_dense(g, mu.dense_float()))
    assert traj.converged
    dim, gap = numerical_derivation_dim(traj.mu_inf)
    assert dim == derivation_algebra(mu).dim and gap >= 1e2
    f = traj.F_values()
    assert np.all(np.diff(f) <= 1e-12)
    # F of the limit equals r at the critical point
    r, res = critical_residual(traj.mu_inf)
    assert r == pytest.approx(f[-1], rel=1e-9) and res < 1e-10


def test_limit_is_independent_of_step_tolerance():
    rng = np.random.default_rng(4)
    g = np.eye(4) + 0.5 * rng.standard_normal((4, 4))
    c0 = act_dense(g, L4.dense_float())
    a = flow(c0, rtol=1e-9).mu_inf
    b = flow(c0, rtol=1e-11).mu_inf
    assert np.abs(a - b).max() < 1e-6


def test_compact_stabilizer_dimensions():
    assert compact_stabilizer_dim(H3) == 1
    assert compact_stabilizer_dim(abelian(3)) == 3
    rng = np.random.default_rng(5)
    g = np.eye(4) + 0.5 * rng.standard_normal((4, 4))
    assert compact_stabilizer_dim(act_dense(g, L4.dense_float())) == 0


def test_distinguished_verdicts():
    dv = distinguished_verdict(H3)
    assert dv.distinguished is True
    assert dv.evidence["der_dim_start"] == dv.evidence["der_dim_limit"] == 6
    none = distinguished_verdict(abelian(3))
    assert none.distinguished is None


@pytest.mark.slow
def test_non_einstein_nilradical_orbit_is_not_distinguished():
    dv = distinguished_verdict(N7)
    assert dv.distinguished is False
    assert dv.evidence["der_dim_limit"] > dv.evidence["der_dim_start"]


def test_csv_export(tmp_path):
    g = np.diag([1.0, 1.0, 3.0, 1.0]) + np.triu(np.ones((4, 4)), 1)
    traj = flow(act_dense(g, L4.dense_float()))
    path = tmp_path / "t.csv"
    traj.write_csv(path)
    rows = list(csv.reader(open(path)))
    assert rows[0] == ["t", "F", "residual", "derdim"]
    fs = [float(r[1]) for r in rows[1:]]
    assert all(b <= a + 1e-12 for a, b in zip(fs, fs[1:]))
    assert fs[-1] == pytest.approx(1.5, abs=1e-8)


class TestInterpolatedGram:
    def test_endpoints(self):
        ads = [np.array([[1.0, 2.0], [0.0, 3.0]]), np.diag([1.0, -1.0])]
        start = interpolated_gram(ads, -2.0, 1.0)
        end = interpolated_gram(ads, -2.0, 2.0)
        assert np.allclose(start, [[0.5 * np.trace(a @ b.T) / 2 for b in ads] for a in ads])
        assert np.allclose(end, build_solsoliton_metric(ads, -2.0))

    def test_symmetric_ad_scales_linearly(self):
        # with ad A symmetric both traces agree, so the curve is (t/2) tr(ad A^2) / (-c)
        ads = [np.diag([1.0, 2.0])]
        for t in (1.0, 1.3, 2.0):
            assert interpolated_gram(ads, -1.0, t)[0, 0] == pytest.approx(t / 2 * 5.0)

    def test_skew_ad_degenerates_at_the_end(self):
        ads = [np.array([[0.0, -1.0], [1.0, 0.0]])]
        assert interpolated_gram(ads, -1.0, 2.0)[0, 0] == 0

    def test_errors(self):
        with pytest.raises(OutOfRange):
            interpolated_gram([np.eye(2)], -1.0, 2.5)
        with pytest.raises(NonNegativeC):
            interpolated_gram([np.eye(2)], 0.0, 1.5)
