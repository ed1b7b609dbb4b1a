"""Half-sweep alternating least squares behavior."""

import numpy as np
import pytest

from ttsketch import (
    AlsConfig, RngStream, als_half_sweep, clip_ranks, gaussian_dense,
    random_tt, relative_error, tt_evaluate,
)
from ttsketch.tt import left_unfold


def test_objectives_non_increasing():
    rng = RngStream(81)
    for trial in range(50):
        x = gaussian_dense((3, 3, 3, 3), rng.substream(trial, 0))
        _, obj = als_half_sweep(x, AlsConfig(2), rng.substream(trial, 1))
        assert len(obj) == 4
        for a, b in zip(obj, obj[1:]):
            assert b <= a + 1e-9 * max(1.0, a)


def test_exact_recovery_of_low_rank_target():
    rng = RngStream(82)
    x = tt_evaluate(random_tt((3, 4, 3, 4), 2, rng.substream(0)))
    t, obj = als_half_sweep(x, AlsConfig(clip_ranks(x.shape, 2)), rng.substream(1))
    f2 = float(np.sum(x**2))
    assert obj[-1] <= 1e-20 * f2
    assert relative_error(x, t) <= 1e-10
    assert t.ortho == "left"
    for core in t.cores[:-1]:
        m = left_unfold(core)
        assert np.linalg.norm(m.T @ m - np.eye(m.shape[1])) < 1e-12


def test_matrix_case_matches_sketched_projector():
    # for matrices the half sweep projects onto the column space of
    # f times the random right core
    rng = RngStream(83)
    f = gaussian_dense((8, 6), rng.substream(0))
    seed = rng.substream(1)
    t, _ = als_half_sweep(f, AlsConfig((3,)), seed)
    g = seed.substream(2).normals((3, 6))
    y = f @ g.T
    q, _ = np.linalg.qr(y)
    want = q @ (q.T @ f)
    assert np.linalg.norm(tt_evaluate(t) - want) < 1e-10


def test_objective_tracks_true_error():
    rng = RngStream(84)
    x = gaussian_dense((3, 3, 3), rng.substream(0))
    t, obj = als_half_sweep(x, AlsConfig(2), rng.substream(1))
    err2 = np.linalg.norm((tt_evaluate(t) - x).ravel()) ** 2
    assert abs(obj[-1] - err2) < 1e-9 * max(1.0, err2)


def test_extra_sweeps_do_not_regress():
    rng = RngStream(85)
    x = gaussian_dense((3, 4, 3, 4), rng.substream(0))
    _, obj1 = als_half_sweep(x, AlsConfig(2, sweeps=1), rng.substream(1))
    t2, obj2 = als_half_sweep(x, AlsConfig(2, sweeps=2), rng.substream(1))
    assert obj2[: len(obj1)] == obj1
    for a, b in zip(obj2, obj2[1:]):
        assert b <= a + 1e-9 * max(1.0, a)
    assert t2.shape == x.shape
    assert t2.ortho == "right"
    err2 = np.linalg.norm((tt_evaluate(t2) - x).ravel()) ** 2
    assert abs(obj2[-1] - err2) < 1e-9 * max(1.0, err2)


def test_validation():
    rng = RngStream(86)
    with pytest.raises(ValueError):
        als_half_sweep(np.zeros((2, 2)), AlsConfig(1), rng)
    with pytest.raises(ValueError):
        als_half_sweep(np.ones(3), AlsConfig(1), rng)
    with pytest.raises(ValueError):
        AlsConfig(1, sweeps=0)
