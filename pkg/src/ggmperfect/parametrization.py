"""Markovian matrices built from edge weights ``delta`` and a scale ``eps``.

The precision matrix is ``A = I + eps * Delta`` where ``Delta`` carries
``delta_ij`` on the edges of ``G``; its inverse is a covariance whose
precision support is exactly ``G`` plus the diagonal.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Optional

import numpy as np

from .graph import Graph
from .linalg import (
    DEFAULT_TOL,
    as_exact,
    format_fraction,
    invert_exact,
    is_exact,
    is_pd_exact,
    is_pd_float,
    parse_fraction,
)

__all__ = [
    "DomainError",
    "DeltaAssignment",
    "ParamPoint",
    "NormalizedPrecision",
    "MarkovianCovariance",
    "pattern_matrix",
    "build_A",
    "eps_max",
    "normalize_linf",
    "zeta",
    "rescale_xi",
    "support_graph",
    "is_markovian",
]


class DomainError(ValueError):
    """A parameter point lies outside the admissible region."""


def _edge_key(i: int, j: int) -> tuple[int, int]:
    return (i, j) if i < j else (j, i)


@dataclass(frozen=True)
class DeltaAssignment:
    """Nonzero edge weights in ``[-1, 1]``, one per edge of ``graph``.

    Values may be Fractions (exact backend) or floats.  Use ``bounded=False``
    for unnormalized raw draws or rescaled weights outside the unit box.
    """

    graph: Graph
    values: Mapping[tuple[int, int], object]
    bounded: bool = field(default=True, compare=False)

    def __post_init__(self):
        vals = {_edge_key(*e): v for e, v in self.values.items()}
        if set(vals) != set(self.graph.edges):
            raise ValueError("delta must be keyed exactly by the graph's edges")
        for e, v in vals.items():
            if v == 0:
                raise ValueError(f"delta{e} is zero")
            if self.bounded and abs(v) > 1:
                raise ValueError(f"|delta{e}| = {abs(v)} exceeds 1")
        object.__setattr__(self, "values", dict(sorted(vals.items())))

    @classmethod
    def from_sequence(cls, graph: Graph, seq, bounded: bool = True) -> "DeltaAssignment":
        """Weights listed in sorted-edge order."""
        edges = graph.sorted_edges()
        if len(seq) != len(edges):
            raise ValueError(f"expected {len(edges)} weights, got {len(seq)}")
        return cls(graph, dict(zip(edges, seq)), bounded)

    def __getitem__(self, e: tuple[int, int]):
        return self.values[_edge_key(*e)]

    @property
    def exact(self) -> bool:
        return all(isinstance(v, (Fraction, int)) for v in self.values.values())

    def linf(self):
        return max((abs(v) for v in self.values.values()), default=0)

    def scaled(self, c) -> "DeltaAssignment":
        return DeltaAssignment(self.graph, {e: c * v for e, v in self.values.items()}, bounded=False)

    def sequence(self) -> list:
        return list(self.values.values())

    def to_json(self, decimal: bool = False) -> dict:
        out = {}
        for (i, j), v in self.values.items():
            if isinstance(v, (Fraction, int)):
                out[f"{i}-{j}"] = format_fraction(v, decimal)
            else:
                out[f"{i}-{j}"] = float(v)
        return out

    @classmethod
    def from_json(cls, graph: Graph, obj, bounded: bool = True) -> "DeltaAssignment":
        """Parse ``{"i-j": "num/den" | number}``.  Strings are read exactly."""
        if not isinstance(obj, dict):
            raise ValueError("delta JSON must be an object mapping 'i-j' to a value")
        vals = {}
        for key, v in obj.items():
            try:
                a, b = (int(s) for s in key.split("-"))
            except ValueError as exc:
                raise ValueError(f"bad edge key {key!r}") from exc
            e = _edge_key(a, b)
            if e in vals:
                raise ValueError(f"duplicate edge key {key!r}")
            vals[e] = parse_fraction(v) if isinstance(v, str) else v
        return cls(graph, vals, bounded)


@dataclass(frozen=True)
class ParamPoint:
    delta: DeltaAssignment
    eps: object
    # Pre-normalization draw, kept for distributional checks.
    delta_raw: Optional[tuple] = field(default=None, compare=False)

    def to_json(self, decimal: bool = False) -> dict:
        eps = format_fraction(self.eps, decimal) if isinstance(self.eps, Fraction) else float(self.eps)
        return {"delta": self.delta.to_json(decimal), "eps": eps}

    @classmethod
    def from_json(cls, graph: Graph, obj) -> "ParamPoint":
        eps = obj["eps"]
        eps = parse_fraction(eps) if isinstance(eps, str) else eps
        return cls(DeltaAssignment.from_json(graph, obj["delta"]), eps)


@dataclass(frozen=True)
class NormalizedPrecision:
    matrix: np.ndarray
    support: Graph


@dataclass(frozen=True)
class MarkovianCovariance:
    matrix: np.ndarray
    support_graph: Graph
    # The inverse, when known exactly from the construction.
    precision: Optional[np.ndarray] = field(default=None, compare=False, repr=False)

    @property
    def exact(self) -> bool:
        return is_exact(self.matrix)


def pattern_matrix(G: Graph, delta: DeltaAssignment) -> np.ndarray:
    """Off-diagonal weight pattern ``Delta`` (float)."""
    P = np.zeros((G.d, G.d))
    for (i, j), v in delta.values.items():
        P[i - 1, j - 1] = P[j - 1, i - 1] = float(v)
    return P


def build_A(G: Graph, delta: DeltaAssignment, eps) -> np.ndarray:
    """``A = I + eps * Delta``; exact when ``delta`` and ``eps`` are rational.

    ``eps = 0`` is accepted and yields the identity.
    """
    if eps < 0:
        raise ValueError(f"eps must be nonnegative, got {eps}")
    if delta.graph != G:
        raise ValueError("delta belongs to a different graph")
    exact = delta.exact and isinstance(eps, (Fraction, int))
    if exact:
        A = as_exact(np.eye(G.d, dtype=int))
        eps = Fraction(eps)
        for (i, j), v in delta.values.items():
            A[i - 1, j - 1] = A[j - 1, i - 1] = v * eps
        return A
    return np.eye(G.d) + float(eps) * pattern_matrix(G, delta)


def eps_max(G: Graph, delta: DeltaAssignment) -> float:
    """Largest ``eps`` keeping ``I + eps * Delta`` positive definite.

    Equals ``-1 / lambda_min(Delta)``; ``inf`` for an edgeless graph.  The
    single-edge case uses the closed form ``1 / |delta|``.
    """
    if G.g == 0:
        return math.inf
    if G.g == 1:
        return 1.0 / abs(float(next(iter(delta.values.values()))))
    lam = float(np.linalg.eigvalsh(pattern_matrix(G, delta))[0])
    # trace(Delta) = 0 and Delta != 0 force lam < 0.
    return -1.0 / lam


def normalize_linf(delta: DeltaAssignment) -> DeltaAssignment:
    """Rescale so the largest ``|delta_ij|`` is exactly 1."""
    if any(v == 0 for v in delta.values.values()):
        raise ValueError("delta has a zero entry")
    m = delta.linf()
    if m == 0:
        return delta
    return DeltaAssignment(delta.graph, {e: v / m for e, v in delta.values.items()})


def _in_domain(G: Graph, delta: DeltaAssignment, eps, A: np.ndarray) -> bool:
    if eps <= 0:
        return False
    if is_exact(A):
        return is_pd_exact(A)
    return float(eps) < eps_max(G, delta) and is_pd_float(A)


def zeta(G: Graph, delta: DeltaAssignment, eps) -> MarkovianCovariance:
    """Covariance ``Sigma = A^{-1}`` for ``(delta, eps)`` with ``0 < eps < eps_max``."""
    A = build_A(G, delta, eps)
    if not _in_domain(G, delta, eps, A):
        raise DomainError(f"eps={eps} is outside (0, eps_max) for this delta")
    if is_exact(A):
        Sigma = invert_exact(A)
        if support_graph(A) != G:
            raise AssertionError("precision support differs from G")
    else:
        Sigma = np.linalg.inv(A)
        Sigma = (Sigma + Sigma.T) / 2
    return MarkovianCovariance(Sigma, G, precision=A)


def _exact_sqrt(x: Fraction) -> Optional[Fraction]:
    if x < 0:
        return None
    n, d = math.isqrt(x.numerator), math.isqrt(x.denominator)
    if n * n == x.numerator and d * d == x.denominator:
        return Fraction(n, d)
    return None


def support_graph(A, tol: Optional[float] = None) -> Graph:
    """Graph of nonzero off-diagonal entries.

    Exact matrices are compared literally; floating ones against
    ``tol * max|A|`` (default tolerance when ``tol`` is None).
    """
    A = np.asarray(A)
    d = A.shape[0]
    if is_exact(A):
        nz = lambda a, b: A[a, b] != 0 or A[b, a] != 0  # noqa: E731
    else:
        thr = (DEFAULT_TOL if tol is None else tol) * float(np.max(np.abs(A)))
        nz = lambda a, b: abs(A[a, b]) > thr or abs(A[b, a]) > thr  # noqa: E731
    return Graph(d, frozenset((a + 1, b + 1) for a in range(d) for b in range(a + 1, d) if nz(a, b)))


def rescale_xi(A, G: Optional[Graph] = None) -> tuple[NormalizedPrecision, np.ndarray]:
    """Normalize a PD matrix to unit diagonal: ``Gamma = D A D`` with ``D = diag(A)^{-1/2}``.

    The result stays exact when every diagonal entry is a rational square;
    otherwise it is computed in floating point.  Returns ``(Gamma, D)``.
    """
    A = np.asarray(A)
    if G is None:
        G = support_graph(A)
    exact_input = is_exact(A)
    if exact_input:
        if not is_pd_exact(A):
            raise ValueError("matrix is not positive definite")
    elif not is_pd_float(A):
        raise ValueError("matrix is not positive definite")
    if support_graph(A) != G:
        raise ValueError("matrix support differs from the given graph")
    d = A.shape[0]
    roots = [_exact_sqrt(A[k, k]) for k in range(d)] if exact_input else [None]
    if exact_input and all(r is not None for r in roots):
        D = as_exact(np.zeros((d, d), dtype=int))
        for k, r in enumerate(roots):
            D[k, k] = 1 / r
        Gamma = D.dot(A).dot(D)
    else:
        Af = A.astype(float)
        D = np.diag(1.0 / np.sqrt(np.diag(Af)))
        Gamma = D @ Af @ D
        np.fill_diagonal(Gamma, 1.0)
    return NormalizedPrecision(Gamma, G), D


def is_markovian(Sigma, G: Graph, tol: Optional[float] = None) -> bool:
    """True iff ``Sigma`` is PD and the support of its inverse is exactly ``G``."""
    Sigma = Sigma.matrix if isinstance(Sigma, MarkovianCovariance) else np.asarray(Sigma)
    if Sigma.shape != (G.d, G.d):
        raise ValueError("dimension mismatch between Sigma and G")
    if is_exact(Sigma):
        if not is_pd_exact(Sigma):
            raise ValueError("Sigma is not positive definite")
        inv = invert_exact(Sigma)
    else:
        if not is_pd_float(Sigma):
            raise ValueError("Sigma is not positive definite")
        inv = np.linalg.inv(Sigma)
    return support_graph(inv, tol) == G
