import math

import numpy as np
import pytest

from girg_lab.errors import ConfigError
from girg_lab.model.geometry import Geometry, TorusPoint
from girg_lab.model.kernel import (
    ModelParams,
    VertexData,
    VertexTable,
    connection_probability,
    critical_gamma,
    expected_weight_tail,
    is_strong_tie,
    sample_weight,
    subgraph_size_scale,
    weight_mean,
)


def test_sample_weight_inverse_cdf():
    assert sample_weight(1 / 8, 2.5) == pytest.approx(4.0)
    assert sample_weight(0.999999, 2.5) >= 1.0
    ws = sample_weight(np.array([0.5, 0.25]), 3.0)
    assert np.allclose(ws, [math.sqrt(2), 2.0])


@pytest.mark.parametrize("u", [0.0, 1.0, -0.2])
def test_sample_weight_rejects_closed_endpoints(u):
    with pytest.raises(ValueError):
        sample_weight(u, 2.5)


def test_sample_weight_rejects_light_tail():
    with pytest.raises(ValueError):
        sample_weight(0.5, 2.0)


def test_weight_tail_and_mean():
    assert expected_weight_tail(4.0, 2.5) == pytest.approx(0.125)
    assert weight_mean(2.5) == pytest.approx(3.0)


def test_critical_gamma():
    assert critical_gamma(2.5) == pytest.approx(2.0)
    with pytest.raises(ValueError):
        critical_gamma(3.0)


def test_subgraph_size_scale():
    n = 10_000
    assert subgraph_size_scale(n, 1.0, 2.5) == pytest.approx(n * math.log(n) ** -1.5)


def test_params_defaults_and_validation():
    p = ModelParams(n=100)
    assert (p.d, p.tau, p.alpha, p.kernel_c, p.geometry, p.seed) == (2, 2.5, 1.5, 1.0, Geometry.MCD, 0)
    assert ModelParams(n=10, geometry="linf").geometry is Geometry.LINF
    for kwargs, field in [
        ({"n": 0}, "model.n"),
        ({"n": 10, "tau": 2.0}, "model.tau"),
        ({"n": 10, "alpha": 1.0}, "model.alpha"),
        ({"n": 10, "d": 0}, "model.d"),
        ({"n": 10, "kernel_c": -1.0}, "model.kernel_c"),
        ({"n": 10, "seed": -1}, "model.seed"),
    ]:
        with pytest.raises(ConfigError) as exc:
            ModelParams(**kwargs)
        assert exc.value.field == field


def test_params_copies():
    p = ModelParams(n=100, seed=3)
    assert p.with_seed(9).seed == 9
    assert p.with_n(50).n == 50
    assert p.with_geometry("linf").geometry is Geometry.LINF
    assert p.as_dict()["geometry"] == "mcd"


def test_connection_probability_example():
    p = ModelParams(n=100)
    assert connection_probability(2, 2, 0.3, p) == pytest.approx(0.010391, rel=1e-4)


def test_connection_probability_saturates():
    p = ModelParams(n=100)
    assert connection_probability(1000, 1000, 0.3, p) == 1.0
    assert connection_probability(1, 1, 0.0, p) == 1.0
    assert connection_probability(1, 1, 0.0, ModelParams(n=100, kernel_c=0.5)) == 0.5


def test_connection_probability_monotone():
    p = ModelParams(n=1000)
    dists = np.linspace(0.001, 0.5, 200)
    probs = connection_probability(np.full(200, 3.0), np.full(200, 5.0), dists, p)
    assert np.all(np.diff(probs) <= 1e-15)
    weights = np.linspace(1, 50, 200)
    probs = connection_probability(weights, np.full(200, 2.0), np.full(200, 0.2), p)
    assert np.all(np.diff(probs) >= -1e-15)
    assert np.all((probs >= 0) & (probs <= 1))


def test_strong_tie():
    p = ModelParams(n=100)
    assert not is_strong_tie(2, 2, 0.3, p)
    assert is_strong_tie(100, 100, 0.3, p)


def test_vertex_table():
    table = VertexTable(np.array([1.0, 2.5]), np.array([[0.1, 0.2], [0.3, 0.4]]))
    assert (table.n, table.d, len(table)) == (2, 2, 2)
    assert table[1] == VertexData(2.5, TorusPoint.of(0.3, 0.4))
    assert [v.weight for v in table] == [1.0, 2.5]
    assert table.subset(np.array([1])).weights.tolist() == [2.5]
    with pytest.raises(ValueError):
        VertexTable(np.array([0.5]), np.array([[0.1]]))
    with pytest.raises(ValueError):
        VertexTable(np.array([1.0]), np.array([[1.0]]))
    with pytest.raises(ValueError):
        VertexData(0.9, TorusPoint.of(0.1))
