"""Sampling ``(delta, eps)`` uniformly on the normalized parameter set.

Each edge weight is drawn uniformly from ``[-1, 1]`` minus zero, the vector
is rescaled to unit sup-norm, and ``eps`` is drawn uniformly from
``(0, eps_max(delta))``.  Zero-probability boundary events are redrawn.

In exact mode the draws are snapped to a rational grid so every downstream
zero test is decidable; ``eps`` is then certified by an exact PD check.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator

import numpy as np

from .graph import Graph
from .parametrization import (
    DeltaAssignment,
    MarkovianCovariance,
    ParamPoint,
    build_A,
    eps_max,
    is_markovian,
    zeta,
)
from .linalg import is_pd_exact

log = logging.getLogger(__name__)

__all__ = [
    "SamplerConfig",
    "RNG_NAME",
    "sample_mu_G",
    "sample_markovian_cov",
    "proposal_stream",
]

RNG_NAME = "numpy.random.PCG64"
# Float-mode upper clamp keeps eps strictly below eps_max.
_EPS_CLAMP = 1.0 - 1e-12


@dataclass(frozen=True)
class SamplerConfig:
    seed: int = 0
    backend: str = "exact"
    rational_grid: int = 10**6

    def __post_init__(self):
        if self.backend not in ("exact", "float"):
            raise ValueError(f"backend must be 'exact' or 'float', got {self.backend!r}")
        if self.rational_grid < 2:
            raise ValueError("rational_grid must be at least 2")

    def rng(self) -> np.random.Generator:
        return np.random.Generator(np.random.PCG64(self.seed))


def _snap(x: float, grid: int) -> Fraction:
    return Fraction(round(x * grid), grid)


def _draw(G: Graph, rng: np.random.Generator, config: SamplerConfig) -> ParamPoint:
    edges = G.sorted_edges()
    while True:
        raw = rng.uniform(-1.0, 1.0, size=len(edges))
        if config.backend == "exact":
            snapped = [_snap(v, config.rational_grid) for v in raw]
            if any(v == 0 for v in snapped):
                continue
            m = max(abs(v) for v in snapped)
            delta = DeltaAssignment(G, {e: v / m for e, v in zip(edges, snapped)})
        else:
            if np.any(raw == 0.0):
                continue
            scaled = raw / np.max(np.abs(raw))
            delta = DeltaAssignment(G, {e: float(v) for e, v in zip(edges, scaled)})
        emax = eps_max(G, delta)
        while True:
            u = rng.uniform(0.0, 1.0)
            if u == 0.0:
                continue
            if config.backend == "float":
                eps = min(u * emax, _EPS_CLAMP * emax)
                return ParamPoint(delta, eps, tuple(float(v) for v in raw))
            eps = _snap(u * emax, config.rational_grid)
            if eps == 0 or not is_pd_exact(build_A(G, delta, eps)):
                continue
            return ParamPoint(delta, eps, tuple(float(v) for v in raw))


def proposal_stream(G: Graph, config: SamplerConfig | None = None) -> Iterator[tuple[ParamPoint, MarkovianCovariance]]:
    """Endless reproducible stream of ``(point, covariance)`` pairs.

    Meant as a proposal source; accepting or rejecting draws is up to the
    caller.  The stream owns its generator and is not thread-safe.
    """
    config = config or SamplerConfig()
    if G.g == 0:
        raise ValueError("the graph has no edges; there is nothing to sample")
    rng = config.rng()
    while True:
        point = _draw(G, rng, config)
        yield point, zeta(G, point.delta, point.eps)


def sample_mu_G(G: Graph, config: SamplerConfig | None = None) -> ParamPoint:
    """One draw of ``(delta, eps)``; deterministic given ``config.seed``.

    For an edgeless graph a degenerate point (empty delta, ``eps = 0``) is
    returned with a warning.
    """
    config = config or SamplerConfig()
    if G.g == 0:
        log.warning("graph has no edges; returning the degenerate point (identity matrix)")
        return ParamPoint(DeltaAssignment(G, {}), Fraction(0) if config.backend == "exact" else 0.0, ())
    return _draw(G, config.rng(), config)


def sample_markovian_cov(G: Graph, config: SamplerConfig | None = None) -> MarkovianCovariance:
    """Random Markovian covariance: the inverse of ``I + eps * Delta`` at a sampled point."""
    config = config or SamplerConfig()
    if G.g == 0:
        A = build_A(G, DeltaAssignment(G, {}), Fraction(0) if config.backend == "exact" else 0.0)
        return MarkovianCovariance(A.copy(), G, precision=A)
    point = sample_mu_G(G, config)
    cov = zeta(G, point.delta, point.eps)
    if config.backend == "exact" and not is_markovian(cov, G):
        raise AssertionError("sampled covariance is not Markovian")
    return cov
