import itertools
import math
import time
from fractions import Fraction as F

import numpy as np
import pytest
from scipy import stats

from ggmperfect import (
    SamplerConfig,
    ci_relation,
    cycle_graph,
    empty_graph,
    eps_max,
    is_markovian,
    path_graph,
    proposal_stream,
    random_graph,
    sample_markovian_cov,
    sample_mu_G,
    separation_relation,
)
from ggmperfect.linalg import is_pd_exact
from ggmperfect.parametrization import build_A


def test_config_validation():
    with pytest.raises(ValueError):
        SamplerConfig(backend="gpu")
    with pytest.raises(ValueError):
        SamplerConfig(rational_grid=1)


@pytest.mark.parametrize("backend", ["exact", "float"])
def test_points_are_normalized_and_inside_domain(graphs, backend):
    for G in graphs.values():
        stream = proposal_stream(G, SamplerConfig(seed=3, backend=backend))
        for point, _ in itertools.islice(stream, 20):
            vals = point.delta.sequence()
            assert max(abs(v) for v in vals) == 1
            assert all(v != 0 for v in vals)
            assert 0 < point.eps < eps_max(G, point.delta)
            if backend == "exact":
                assert is_pd_exact(build_A(G, point.delta, point.eps))


def test_determinism_and_stream_head(graphs):
    G = graphs["random6a"]
    cfg = SamplerConfig(seed=11)
    assert sample_mu_G(G, cfg) == sample_mu_G(G, cfg)
    assert next(proposal_stream(G, cfg))[0] == sample_mu_G(G, cfg)
    a = [p for p, _ in itertools.islice(proposal_stream(G, cfg), 15)]
    b = [p for p, _ in itertools.islice(proposal_stream(G, cfg), 15)]
    assert a == b
    assert sample_mu_G(G, SamplerConfig(seed=12)) != sample_mu_G(G, cfg)


def test_raw_marginals_are_uniform():
    G = cycle_graph(4)
    stream = proposal_stream(G, SamplerConfig(seed=2024, backend="float"))
    raw = np.array([p.delta_raw for p, _ in itertools.islice(stream, 10_000)])
    for col in raw.T:
        assert stats.kstest(col, stats.uniform(loc=-1, scale=2).cdf).pvalue > 0.01


def test_eps_bound_on_path_graph_faces():
    G = path_graph(3)
    for point, _ in itertools.islice(proposal_stream(G, SamplerConfig(seed=5)), 300):
        d12, d23 = (float(v) for v in point.delta.sequence())
        free = d12 if abs(d23) == 1 else d23
        assert 0 < float(point.eps) <= 1 / math.sqrt(1 + free**2) + 1e-9
        assert float(point.eps) <= 1


def test_eps_max_supremum_on_sphere(graphs):
    values = []
    for G in graphs.values():
        for point, _ in itertools.islice(proposal_stream(G, SamplerConfig(seed=9, backend="float")), 200):
            values.append(eps_max(G, point.delta))
    assert max(values) <= 1 + 1e-12
    # The single-edge-dominated corner of the sphere pushes eps_max towards 1.
    assert max(values) > 0.9


def test_edgeless_graph_handling(caplog):
    E = empty_graph(3)
    point = sample_mu_G(E)
    assert point.eps == 0 and point.delta.values == {}
    assert "no edges" in caplog.text
    assert (sample_markovian_cov(E).matrix == np.eye(3)).all()
    with pytest.raises(ValueError):
        next(proposal_stream(E))


def test_path_graph_samples_are_markovian():
    G = path_graph(3)
    for seed in range(100):
        cov = sample_markovian_cov(G, SamplerConfig(seed=seed))
        assert cov.exact and is_markovian(cov, G)


def test_cycle4_samples_have_separation_ci_relation():
    G = cycle_graph(4)
    target = separation_relation(G)
    assert target
    for seed in range(100):
        cov = sample_markovian_cov(G, SamplerConfig(seed=seed))
        assert ci_relation(cov.matrix) == target


def test_exact_eps_lies_on_rational_grid():
    point = sample_mu_G(cycle_graph(5), SamplerConfig(seed=1, rational_grid=1000))
    assert isinstance(point.eps, F) and 1000 % point.eps.denominator == 0


def test_throughput_float_d6():
    G = random_graph(6, 0.6, np.random.default_rng(0))
    start = time.perf_counter()
    stream = proposal_stream(G, SamplerConfig(seed=1, backend="float"))
    for _ in itertools.islice(stream, 10_000):
        pass
    assert time.perf_counter() - start < 30
