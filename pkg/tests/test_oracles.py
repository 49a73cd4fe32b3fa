import numpy as np
import pytest

from normgeom.matcore import random_cmat
from normgeom.oracles import (GridSpec, ortho_pair_oracle, ortho_subspace_oracle,
                              tuple_oracle)

from helpers import normalized


def test_gridspec_validation():
    with pytest.raises(ValueError):
        GridSpec(points_per_axis=4)
    with pytest.raises(ValueError):
        GridSpec(points_per_axis=1)
    with pytest.raises(ValueError):
        GridSpec(radius=-1.0)
    g = GridSpec(radius=2.0, points_per_axis=5)
    pts = g.polar(2.0)
    assert pts[0] == 0 and np.abs(pts).max() == pytest.approx(2.0)


def test_refined_grid_contains_coarse_grid():
    g = GridSpec(points_per_axis=7)
    coarse, fine = g.polar(3.0), g.refined().polar(3.0)
    d = np.abs(coarse[:, None] - fine[None, :]).min(axis=1)
    assert d.max() <= 1e-12


def test_pair_oracle_examples():
    v, lam, h = ortho_pair_oracle(np.diag([1.0, 0.0]), np.diag([0.0, 1.0]), 0.0)
    assert v is True
    v, lam, h = ortho_pair_oracle(np.eye(2), np.eye(2), 0.0)
    assert v is False
    # h(-1/2) = |1 - 1/2|^2 - 1 = -3/4; the grid minimum is at least that deep
    assert h <= -0.75
    with pytest.raises(ValueError):
        ortho_pair_oracle(np.eye(2), np.eye(2), 1.0)


def test_subspace_oracle_examples(rng):
    v, w, h = ortho_subspace_oracle(np.diag([1.0, 0.0]), [np.diag([0.0, 1.0])], 0.0)
    assert v is True
    for _ in range(5):
        A, B = normalized(rng, 3, 3), normalized(rng, 3, 3)
        for eps in (0.0, 0.5):
            # both oracles search the same complex line through A
            vp, _, hp = ortho_pair_oracle(A, B, eps)
            vs, _, hs = ortho_subspace_oracle(A, [B], eps)
            if min(abs(hp), abs(hs)) > 1e-4:
                assert vp == vs


def test_tuple_oracle_examples():
    mn, lam = tuple_oracle([np.diag([3.0, 1.0])], [np.eye(2)])
    assert mn == pytest.approx(1.0, abs=1e-8) and lam[0] == pytest.approx(-2.0, abs=1e-6)
    mn, lam = tuple_oracle([np.diag([1.0, -1.0])], [np.eye(2)])
    assert mn == pytest.approx(1.0, abs=1e-12) and abs(lam[0]) <= 1e-6
    with pytest.raises(ValueError):
        tuple_oracle([np.eye(2)], [np.eye(3)])


@pytest.mark.parametrize("eps", [0.0, 0.1, 0.5])
def test_pair_oracle_monotone_under_refinement(rng, eps):
    for _ in range(20):
        A, B = normalized(rng, 4, 4), normalized(rng, 4, 4)
        g = GridSpec(points_per_axis=11)
        v1, _, h1 = ortho_pair_oracle(A, B, eps, g)
        v2, _, h2 = ortho_pair_oracle(A, B, eps, g.refined())
        assert h2 <= h1 + 1e-15
        assert not (v1 is False and v2 is True)


def test_subspace_oracle_monotone_under_refinement(rng):
    for _ in range(5):
        A = normalized(rng, 3, 3)
        W = [random_cmat(rng, 3, 3), random_cmat(rng, 3, 3)]
        g = GridSpec(points_per_axis=5, seed=4)
        v1, _, h1 = ortho_subspace_oracle(A, W, 0.25, g, polish=False)
        v2, _, h2 = ortho_subspace_oracle(A, W, 0.25, g.refined(), polish=False)
        assert h2 <= h1 + 1e-15
        assert not (v1 is False and v2 is True)


def test_subspace_oracle_polish_only_lowers_minimum(rng):
    for _ in range(5):
        A = normalized(rng, 3, 3)
        W = [random_cmat(rng, 3, 3), random_cmat(rng, 3, 3)]
        g = GridSpec(points_per_axis=5, seed=4)
        _, _, h0 = ortho_subspace_oracle(A, W, 0.0, g, polish=False)
        _, w, h1 = ortho_subspace_oracle(A, W, 0.0, g)
        assert h1 <= h0
        a = np.linalg.norm(A, 2)
        assert abs(np.linalg.norm(A + w, 2) ** 2 - a * a - h1) <= 1e-12


def test_tuple_oracle_within_box(rng):
    A = [normalized(rng, 3, 3) for _ in range(2)]
    X = [normalized(rng, 3, 3) for _ in range(2)]
    mn, lam = tuple_oracle(A, X)
    a = np.linalg.norm(np.vstack(A), 2)
    assert mn <= a + 1e-15
    R = np.vstack([Aj + l * Xj for Aj, l, Xj in zip(A, lam, X)])
    assert np.linalg.norm(R, 2) == pytest.approx(mn, rel=1e-10)
