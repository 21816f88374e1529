import math

import numpy as np
import pytest

from girg_lab.model.geometry import (
    Geometry,
    TorusPoint,
    distance,
    distances,
    inverse_volume,
    linf_distance,
    mcd_distance,
    torus_abs,
    volume,
    volume_linf,
    volume_min,
    wrap_coordinate,
)


def P(*coords):
    return TorusPoint.of(*coords)


def test_torus_abs_examples():
    assert torus_abs(0.1, 0.9) == pytest.approx(0.2)
    assert torus_abs(0.37, 0.37) == 0.0
    assert torus_abs(0.0, 0.5) == 0.5


def test_torus_abs_rejects_out_of_range():
    with pytest.raises(ValueError):
        torus_abs(1.0, 0.2)
    with pytest.raises(ValueError):
        torus_abs(-0.1, 0.2)


def test_torus_abs_is_a_metric_on_samples():
    rng = np.random.default_rng(0)
    for a, b, c in rng.random((500, 3)):
        assert torus_abs(a, b) == torus_abs(b, a)
        assert torus_abs(a, c) <= torus_abs(a, b) + torus_abs(b, c) + 1e-12
        assert torus_abs(a, b) <= 0.5


def test_mcd_and_linf_examples():
    x, y = P(0.1, 0.9), P(0.2, 0.3)
    assert mcd_distance(x, y) == pytest.approx(0.1)
    assert linf_distance(x, y) == pytest.approx(0.4)
    assert mcd_distance(x, x) == 0.0
    assert linf_distance(x, x) == 0.0
    assert mcd_distance(P(0.0), P(0.6)) == pytest.approx(0.4)
    assert linf_distance(P(0.0), P(0.6)) == pytest.approx(0.4)


def test_dimension_mismatch_rejected():
    with pytest.raises(ValueError):
        mcd_distance(P(0.1, 0.2), P(0.1))
    with pytest.raises(ValueError):
        linf_distance(P(0.1), P(0.1, 0.2))


def test_mcd_never_exceeds_linf():
    rng = np.random.default_rng(1)
    for _ in range(300):
        x, y = P(*rng.random(3)), P(*rng.random(3))
        assert mcd_distance(x, y) <= linf_distance(x, y)


def test_mcd_violates_triangle_inequality():
    x, y, z = P(0.0, 0.0), P(0.0, 0.5), P(0.5, 0.5)
    assert mcd_distance(x, z) > mcd_distance(x, y) + mcd_distance(y, z)


def test_coordinate_one_wraps_to_zero():
    assert wrap_coordinate(1.0) == 0.0
    assert P(1.0, 0.25).coords == (0.0, 0.25)
    with pytest.raises(ValueError):
        wrap_coordinate(1.5)


def test_vectorised_distances_match_scalar():
    rng = np.random.default_rng(2)
    xs, ys = rng.random((50, 2)), rng.random((50, 2))
    for geometry in Geometry:
        vec = distances(xs, ys, geometry)
        scalar = [distance(P(*x), P(*y), geometry) for x, y in zip(xs, ys)]
        assert np.allclose(vec, scalar)


def test_volume_examples():
    assert volume_min(0.0, 3) == 0.0
    assert volume_min(0.5, 4) == 1.0
    assert volume_min(0.25, 2) == pytest.approx(0.75)
    assert volume_linf(0.0, 2) == 0.0
    assert volume_linf(0.25, 2) == pytest.approx(0.25)
    assert volume_linf(0.5, 3) == 1.0
    assert volume(0.9, 2, Geometry.MCD) == 1.0
    with pytest.raises(ValueError):
        volume_min(-0.1, 2)


def test_volume_min_theta_sandwich():
    for d in (1, 2, 3, 5):
        for r in np.linspace(0.0, 0.25, 26):
            v = volume_min(r, d)
            assert r - 1e-15 <= v <= 2 * d * r + 1e-15


def test_volumes_monotone():
    rs = np.linspace(0, 0.6, 61)
    for d in (1, 2, 3):
        assert np.all(np.diff(volume_min(rs, d)) >= 0)
        assert np.all(np.diff(volume_linf(rs, d)) >= 0)


@pytest.mark.parametrize("geometry", list(Geometry))
def test_volume_matches_monte_carlo(geometry):
    rng = np.random.default_rng(3)
    pts = rng.random((200_000, 2))
    comp = np.minimum(pts, 1 - pts)
    dist = comp.min(axis=1) if geometry is Geometry.MCD else comp.max(axis=1)
    for r in (0.05, 0.1, 0.25):
        exact = volume(r, 2, geometry)
        se = math.sqrt(exact * (1 - exact) / pts.shape[0])
        assert abs(np.mean(dist <= r) - exact) <= 4 * se


def test_inverse_volume_round_trip():
    for geometry in Geometry:
        for d in (1, 2, 3):
            for v in (0.0, 0.01, 0.3, 1.0):
                r = inverse_volume(v, d, geometry)
                assert volume(r, d, geometry) == pytest.approx(v, abs=1e-12)
