"""Vanishing-minor relations, perfectness verdicts, the good set of edge
weights and the exceptional scales for a fixed weight vector.

A supported precision matrix ``A`` on ``G`` is perfect when its vanishing
relation equals the dual of the separation relation of ``G``; the exact
backend decides every minor.
"""

from __future__ import annotations

import logging
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

import numpy as np

from .graph import (
    Couple,
    Graph,
    dual,
    enumerate_couples,
    enumerate_paths,
    separation_relation,
    sorted_relation,
)
from .linalg import (
    DEFAULT_TOL,
    cross_indices,
    det_integer,
    det_zero_float,
    format_fraction,
    integer_scaled,
    is_exact,
    is_pd_exact,
    is_pd_float,
)
from .parametrization import DeltaAssignment, MarkovianCovariance, build_A, eps_max, support_graph
from .poly import Polynomial, count_roots, minor_polynomial, real_roots, sturm_sequence

log = logging.getLogger(__name__)

__all__ = [
    "PerfectnessVerdict",
    "DMembershipReport",
    "BadEpsSet",
    "vanishing_relation",
    "ci_relation",
    "is_perfect",
    "path_weight",
    "d_membership",
    "find_bad_eps",
    "montecarlo_perfectness",
    "MonteCarloReport",
]

CI_WITHOUT_SEPARATION = "CI-without-separation"
SEPARATION_WITHOUT_CI = "separation-without-CI"


@dataclass
class PerfectnessVerdict:
    perfect: bool
    witnesses: list[tuple[Couple, str]]
    backend: str
    d: int = 0

    @property
    def indicative(self) -> bool:
        return self.backend != "exact"

    def to_json(self) -> dict:
        return {
            "perfect": self.perfect,
            "backend": self.backend,
            "status": "indicative" if self.indicative else "exact",
            "witnesses": [_witness_json(c, label, self.d) for c, label in self.witnesses],
        }


@dataclass
class DMembershipReport:
    in_D: bool
    violations: list[tuple[int, int, int, object]]
    restricted: bool = False
    restricted_violations: list[tuple[int, int, int, frozenset]] = field(default_factory=list)

    def to_json(self, decimal: bool = False) -> dict:
        return {
            "in_D": self.in_D,
            "restricted": self.restricted,
            "violations": [
                {"i": i, "j": j, "t": t, "sum": _num(s, decimal)} for i, j, t, s in self.violations
            ],
            "restricted_violations": [
                {"i": i, "j": j, "t": t, "K": sorted(K)} for i, j, t, K in self.restricted_violations
            ],
        }


@dataclass
class BadEpsSet:
    """Exceptional scales in ``(0, eps_max)`` for a fixed ``delta``.

    ``roots`` are isolating intervals, each paired with the couples whose
    minor vanishes there.  ``degenerate`` lists couples whose minor is
    identically wrong (zero without separation, or nonzero despite it);
    those fail at every scale and make the set infinite.
    """

    eps_max: float
    d: int = 0
    roots: list[tuple[tuple[Fraction, Fraction], list[Couple]]] = field(default_factory=list)
    degenerate: list[tuple[Couple, str]] = field(default_factory=list)

    @property
    def finite(self) -> bool:
        return not self.degenerate

    def intervals(self) -> list[tuple[Fraction, Fraction]]:
        return [iv for iv, _ in self.roots]

    def avoids(self, eps) -> bool:
        return all(not (a <= eps <= b) for a, b in self.intervals())

    def to_json(self, decimal: bool = False) -> dict:
        return {
            "eps_max": self.eps_max,
            "finite": self.finite,
            "roots": [
                {
                    "interval": [format_fraction(a, decimal), format_fraction(b, decimal)],
                    "couples": [c.to_json() for c in cs],
                }
                for (a, b), cs in self.roots
            ],
            "degenerate": [_witness_json(c, label, self.d) for c, label in self.degenerate],
        }


def _witness_json(c: Couple, label: str, d: int) -> dict:
    out = dict(c.to_json(), label=label)
    if d:
        out["ci_couple"] = str(c.dual(d))
    return out


def _num(v, decimal: bool):
    if isinstance(v, (Fraction, int)):
        return format_fraction(v, decimal)
    return float(v)


def _minor_vanishes_exact(N: list[list[int]], c: Couple) -> bool:
    rows, cols = cross_indices(c.i, c.j, c.K)
    return det_integer([[N[r - 1][s - 1] for s in cols] for r in rows]) == 0


def vanishing_relation(M, d: Optional[int] = None, tol: float = DEFAULT_TOL) -> frozenset[Couple]:
    """All couples ``(ij|K)`` with ``det M_{iK,jK} == 0``.

    Exact (Fraction) matrices are scaled to integers once and decided by
    integer elimination; float matrices use :func:`det_zero_float`.
    """
    M = np.asarray(M)
    d = M.shape[0] if d is None else d
    if M.shape != (d, d):
        raise ValueError(f"expected a {d}x{d} matrix")
    if is_exact(M):
        N, _ = integer_scaled(M)
        return frozenset(c for c in enumerate_couples(d) if _minor_vanishes_exact(N, c))
    Mf = M.astype(float)
    out = []
    for c in enumerate_couples(d):
        rows, cols = cross_indices(c.i, c.j, c.K)
        if det_zero_float(Mf[np.ix_([r - 1 for r in rows], [s - 1 for s in cols])], tol):
            out.append(c)
    return frozenset(out)


def ci_relation(Sigma, tol: float = DEFAULT_TOL) -> frozenset[Couple]:
    """Pairwise conditional independences ``i _||_ j | K`` of ``N(0, Sigma)``."""
    S = Sigma.matrix if isinstance(Sigma, MarkovianCovariance) else Sigma
    return vanishing_relation(S, tol=tol)


def is_perfect(A, G: Graph, tol: float = DEFAULT_TOL) -> PerfectnessVerdict:
    """Perfectness of ``Sigma = A^{-1}`` with respect to ``G``.

    ``A`` must be symmetric PD with support exactly ``G`` plus the diagonal.
    The verdict is ``vanishing_relation(A) == dual(separation_relation(G))``;
    every disagreeing couple of ``A`` is returned as a labelled witness.  The
    conditional independence it concerns is the dual couple, since
    ``det A_{iK,jK} == 0`` iff ``det Sigma_{iL,jL} == 0`` for ``L = [d] - ijK``.
    """
    A = np.asarray(A)
    if A.shape != (G.d, G.d):
        raise ValueError("dimension mismatch between A and G")
    exact = is_exact(A)
    if not (is_pd_exact(A) if exact else is_pd_float(A)):
        raise ValueError("A is not positive definite")
    if support_graph(A, tol) != G:
        raise ValueError("support of A differs from G")
    required = dual(separation_relation(G), G.d)
    found = vanishing_relation(A, G.d, tol)
    witnesses = [(c, SEPARATION_WITHOUT_CI) for c in required - found]
    witnesses += [(c, CI_WITHOUT_SEPARATION) for c in found - required]
    witnesses.sort(key=lambda w: w[0].sort_key())
    return PerfectnessVerdict(not witnesses, witnesses, "exact" if exact else "float", G.d)


def path_weight(path, delta: DeltaAssignment):
    w = 1
    for a, b in zip(path, path[1:]):
        w = w * delta[(a, b)]
    return w


def d_membership(G: Graph, delta: DeltaAssignment, restricted: bool = False) -> DMembershipReport:
    """Check that no nonempty family of equal-length ``ij``-paths has zero weight sum.

    Every pair ``i < j`` is examined.  With ``restricted=True`` the families
    confined to each interior set ``K`` are checked as well, which is the
    condition the determinant argument actually consumes; such violations
    carry their ``K`` in ``restricted_violations``.
    """
    violations = []
    restricted_violations = []
    for i in range(1, G.d + 1):
        for j in range(i + 1, G.d + 1):
            rest = [k for k in G.nodes if k not in (i, j)]
            for t in range(G.d - 1):
                paths = enumerate_paths(G, i, j, t)
                if not paths:
                    continue
                s = sum(path_weight(p, delta) for p in paths)
                if s == 0:
                    violations.append((i, j, t, s))
                if not restricted:
                    continue
                for m in range(1 << len(rest)):
                    K = frozenset(k for b, k in enumerate(rest) if m >> b & 1)
                    if len(K) < t or K == frozenset(rest):
                        continue
                    sub = [p for p in paths if K.issuperset(p[1:-1])]
                    if sub and sum(path_weight(p, delta) for p in sub) == 0:
                        restricted_violations.append((i, j, t, K))
    in_D = not violations and not restricted_violations
    return DMembershipReport(in_D, violations, restricted, restricted_violations)


def find_bad_eps(G: Graph, delta: DeltaAssignment) -> BadEpsSet:
    """Scales ``eps`` in ``(0, eps_max)`` at which ``I + eps * Delta`` is imperfect.

    For each couple the cross-minor polynomial ``p(x)`` of ``I + x * Delta``
    is formed exactly.  Couples required to vanish (dual separation) must
    give ``p == 0``; all others must give ``p != 0``, and their real roots in
    the interval are the exceptional scales.  Couples breaking the pattern
    identically are reported as degenerate and skipped.
    """
    if not delta.exact:
        raise ValueError("find_bad_eps needs rational delta")
    emax = eps_max(G, delta)
    hi = Fraction(emax) if math.isfinite(emax) else None
    required = dual(separation_relation(G), G.d)
    result = BadEpsSet(emax, G.d)
    by_poly: dict[Polynomial, list[Couple]] = {}
    for c in enumerate_couples(G.d):
        p = minor_polynomial(G, delta, c)
        if c in required:
            if not p.is_zero():
                result.degenerate.append((c, SEPARATION_WITHOUT_CI))
            continue
        if p.is_zero():
            result.degenerate.append((c, CI_WITHOUT_SEPARATION))
            continue
        by_poly.setdefault(p.squarefree(), []).append(c)
    if result.degenerate:
        log.warning("%d couples fail identically; delta is outside the good set", len(result.degenerate))
    if hi is None:
        hi = Fraction(max((_cauchy_bound(p) for p in by_poly), default=1)) + 1
    isolated = []
    for p, couples in by_poly.items():
        isolated += [(iv, p, couples) for iv in real_roots(p, 0, hi)]
    isolated.sort(key=lambda item: item[0])
    # Merge intervals that hold the same root, deciding equality exactly.
    for iv, p, couples in isolated:
        for k, (iv2, p2, cs2) in enumerate(result.roots):
            if iv[0] <= iv2[1] and iv2[0] <= iv[1] and _share_root(p, p2, iv, iv2):
                lo, hi2 = max(iv[0], iv2[0]), min(iv[1], iv2[1])
                result.roots[k] = ((lo, hi2), p2, cs2 + couples)
                break
        else:
            result.roots.append((iv, p, list(couples)))
    result.roots = [(iv, sorted_relation(cs)) for iv, _, cs in result.roots]
    result.roots.sort(key=lambda r: r[0])
    return result


def _cauchy_bound(p: Polynomial) -> Fraction:
    lc = abs(p.lead())
    return 1 + max((abs(c) / lc for c in p.coeffs[:-1]), default=Fraction(0))


def _share_root(p: Polynomial, q: Polynomial, iv, iv2) -> bool:
    g = p.gcd(q)
    if g.degree <= 0:
        return False
    lo, hi = max(iv[0], iv2[0]), min(iv[1], iv2[1])
    if lo == hi:
        return g(lo) == 0
    seq = sturm_sequence(g.squarefree())
    return count_roots(g, lo, hi, seq) > 0 or g(lo) == 0


@dataclass
class MonteCarloReport:
    graph: Graph
    trials: int
    perfect_count: int
    failures: list[dict]
    seeds: list[int]
    backend: str

    @property
    def perfect_fraction(self) -> float:
        return self.perfect_count / self.trials if self.trials else 1.0

    def csv_row(self) -> dict:
        return {
            "graph": ";".join(f"{a}-{b}" for a, b in self.graph.sorted_edges()) or "-",
            "d": self.graph.d,
            "trials": self.trials,
            "perfect_fraction": repr(self.perfect_fraction),
            "failure_seeds": " ".join(str(f["seed"]) for f in self.failures),
        }


def _mc_trial(args):
    from .sampler import SamplerConfig, sample_mu_G

    G, seed, backend, grid = args
    cfg = SamplerConfig(seed=seed, backend=backend, rational_grid=grid)
    if G.g == 0:
        return seed, True, None, []
    point = sample_mu_G(G, cfg)
    A = build_A(G, point.delta, point.eps)
    verdict = is_perfect(A, G)
    return seed, verdict.perfect, point, verdict.witnesses


def montecarlo_perfectness(G: Graph, trials: int, config=None, workers: int = 1) -> MonteCarloReport:
    """Sample ``trials`` points from the uniform measure and check each one.

    Trial ``k`` uses seed ``config.seed + k`` so that every failure can be
    replayed on its own.
    """
    from .sampler import SamplerConfig

    if trials < 1:
        raise ValueError("trials must be at least 1")
    config = config or SamplerConfig()
    seeds = [config.seed + k for k in range(trials)]
    jobs = [(G, s, config.backend, config.rational_grid) for s in seeds]
    if workers > 1:
        with ProcessPoolExecutor(workers) as pool:
            results = list(pool.map(_mc_trial, jobs, chunksize=max(1, trials // (4 * workers))))
    else:
        results = [_mc_trial(j) for j in jobs]
    failures = []
    for seed, perfect, point, witnesses in results:
        if not perfect:
            failures.append({
                "seed": seed,
                "point": point.to_json(),
                "witnesses": [dict(c.to_json(), label=lab) for c, lab in witnesses],
            })
    return MonteCarloReport(G, trials, trials - len(failures), failures, seeds, config.backend)
