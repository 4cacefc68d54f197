"""Univariate polynomials over the rationals, polynomial-matrix determinants,
real-root isolation and the 1-cycle determinant lemma.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .graph import Couple, DiGraph, Graph, enumerate_couples, enumerate_cycles
from .linalg import cross_indices, det_exact, format_fraction, parse_fraction

__all__ = [
    "Polynomial",
    "PolyMatrix",
    "poly_det",
    "build_B_x",
    "CycleLemmaVerdict",
    "cycle_lemma_check",
    "minor_polynomial",
    "symbolic_vanishing_relation",
    "sturm_sequence",
    "count_roots",
    "real_roots",
    "MAX_CYCLE_NODES",
]

MAX_CYCLE_NODES = 8
ROOT_WIDTH = Fraction(1, 10**12)


class Polynomial:
    """Polynomial with exact rational coefficients, ``coeffs[k]`` multiplying ``x**k``."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable = ()):
        c = [Fraction(v) for v in coeffs]
        while c and c[-1] == 0:
            c.pop()
        self.coeffs: tuple[Fraction, ...] = tuple(c)

    @classmethod
    def x(cls) -> "Polynomial":
        return cls([0, 1])

    @classmethod
    def const(cls, c) -> "Polynomial":
        return cls([c])

    @classmethod
    def from_roots(cls, roots) -> "Polynomial":
        p = cls([1])
        for r in roots:
            p = p * cls([-Fraction(r), 1])
        return p

    @property
    def degree(self) -> float:
        """Degree; ``-inf`` for the zero polynomial."""
        return len(self.coeffs) - 1 if self.coeffs else float("-inf")

    def is_zero(self) -> bool:
        return not self.coeffs

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    def lead(self) -> Fraction:
        return self.coeffs[-1] if self.coeffs else Fraction(0)

    def coeff(self, k: int) -> Fraction:
        return self.coeffs[k] if 0 <= k < len(self.coeffs) else Fraction(0)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Polynomial):
            other = Polynomial([other])
        return self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def __repr__(self) -> str:
        return f"Polynomial([{', '.join(str(c) for c in self.coeffs)}])"

    def __str__(self) -> str:
        if not self.coeffs:
            return "0"
        terms = []
        for k in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[k]
            if c == 0:
                continue
            mon = "" if k == 0 else ("x" if k == 1 else f"x^{k}")
            if mon and abs(c) == 1:
                s = mon
            else:
                s = f"{abs(c)}" + (f"*{mon}" if mon else "")
            terms.append(("-" if c < 0 else "+", s))
        head = ("-" if terms[0][0] == "-" else "") + terms[0][1]
        return head + "".join(f" {sg} {s}" for sg, s in terms[1:])

    @staticmethod
    def _coerce(other) -> "Polynomial":
        return other if isinstance(other, Polynomial) else Polynomial([other])

    def __add__(self, other):
        other = self._coerce(other)
        n = max(len(self.coeffs), len(other.coeffs))
        return Polynomial(self.coeff(k) + other.coeff(k) for k in range(n))

    __radd__ = __add__

    def __neg__(self):
        return Polynomial(-c for c in self.coeffs)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        other = self._coerce(other)
        if not self.coeffs or not other.coeffs:
            return Polynomial()
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for a, ca in enumerate(self.coeffs):
            if ca:
                for b, cb in enumerate(other.coeffs):
                    out[a + b] += ca * cb
        return Polynomial(out)

    __rmul__ = __mul__

    def __divmod__(self, other):
        other = self._coerce(other)
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        dq = len(rem) - len(other.coeffs)
        if dq < 0:
            return Polynomial(), Polynomial(rem)
        q = [Fraction(0)] * (dq + 1)
        lc = other.coeffs[-1]
        m = len(other.coeffs)
        for k in range(dq, -1, -1):
            f = rem[k + m - 1] / lc
            q[k] = f
            if f:
                for s in range(m):
                    rem[k + s] -= f * other.coeffs[s]
        return Polynomial(q), Polynomial(rem[: m - 1])

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def exact_div(self, other) -> "Polynomial":
        q, r = divmod(self, other)
        if r:
            raise ArithmeticError("division is not exact")
        return q

    def __call__(self, x):
        acc = Fraction(0) if isinstance(x, (int, Fraction)) else 0.0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def derivative(self) -> "Polynomial":
        return Polynomial(k * c for k, c in enumerate(self.coeffs) if k)

    def monic(self) -> "Polynomial":
        if not self.coeffs:
            return self
        lc = self.coeffs[-1]
        return Polynomial(c / lc for c in self.coeffs)

    def gcd(self, other) -> "Polynomial":
        a, b = self, self._coerce(other)
        while b:
            a, b = b, a % b
        return a.monic()

    def squarefree(self) -> "Polynomial":
        """Product of the distinct irreducible factors (monic)."""
        g = self.gcd(self.derivative())
        return (self // g).monic() if g.degree > 0 else self.monic()

    def to_json(self, decimal: bool = False) -> list[str]:
        return [format_fraction(c, decimal) for c in self.coeffs]

    @classmethod
    def from_json(cls, obj) -> "Polynomial":
        return cls(parse_fraction(v) for v in obj)


class PolyMatrix:
    """Square matrix of Polynomials."""

    def __init__(self, entries: Sequence[Sequence]):
        rows = [[Polynomial._coerce(v) for v in row] for row in entries]
        if any(len(r) != len(rows) for r in rows):
            raise ValueError("PolyMatrix must be square")
        self.entries = rows

    @property
    def r(self) -> int:
        return len(self.entries)

    def __getitem__(self, idx):
        a, b = idx
        return self.entries[a][b]

    def max_degree(self) -> int:
        return max((max(p.degree, 0) for row in self.entries for p in row), default=0)

    def evaluate(self, x) -> list[list[Fraction]]:
        return [[p(x) for p in row] for row in self.entries]


def _det_bareiss(M: PolyMatrix) -> Polynomial:
    a = [list(row) for row in M.entries]
    n = len(a)
    if n == 0:
        return Polynomial([1])
    sign = 1
    prev = Polynomial([1])
    for k in range(n - 1):
        if a[k][k].is_zero():
            for r in range(k + 1, n):
                if not a[r][k].is_zero():
                    a[k], a[r] = a[r], a[k]
                    sign = -sign
                    break
            else:
                return Polynomial()
        pivot = a[k][k]
        for i in range(k + 1, n):
            f = a[i][k]
            for j in range(k + 1, n):
                a[i][j] = (pivot * a[i][j] - f * a[k][j]).exact_div(prev)
            a[i][k] = Polynomial()
        prev = pivot
    return a[n - 1][n - 1] * sign


def _det_interpolate(M: PolyMatrix) -> Polynomial:
    n_pts = M.r * M.max_degree() + 1
    xs = list(range(n_pts))
    ys = [det_exact(M.evaluate(Fraction(x))) if M.r else Fraction(1) for x in xs]
    # Newton divided differences, then expand into the monomial basis.
    coef = list(ys)
    for level in range(1, n_pts):
        for k in range(n_pts - 1, level - 1, -1):
            coef[k] = (coef[k] - coef[k - 1]) / (xs[k] - xs[k - level])
    p = Polynomial([coef[-1]])
    for k in range(n_pts - 2, -1, -1):
        p = p * Polynomial([-xs[k], 1]) + coef[k]
    return p


def poly_det(M: PolyMatrix, method: str = "bareiss") -> Polynomial:
    """Exact determinant of a polynomial matrix.

    ``method="bareiss"`` runs fraction-free elimination over Q[x];
    ``method="interpolate"`` evaluates at ``0, 1, ..., r * maxdeg`` and
    interpolates.
    """
    if method == "bareiss":
        return _det_bareiss(M)
    if method == "interpolate":
        return _det_interpolate(M)
    raise ValueError(f"unknown method {method!r}")


def build_B_x(H: DiGraph, delta: Mapping[tuple[int, int], object]) -> PolyMatrix:
    """``B(x)``: ones on the diagonal except ``(1,1)``, ``delta_ij * x`` on arcs.

    ``delta`` maps arcs to nonzero weights; arcs of ``H`` missing from the
    map are an error, extra keys are ignored.
    """
    x = Polynomial.x()
    rows = []
    for a in H.nodes:
        row = []
        for b in H.nodes:
            if H.has_arc(a, b):
                if (a, b) not in delta:
                    raise ValueError(f"no weight for arc ({a},{b})")
                w = Fraction(delta[(a, b)])
                if w == 0:
                    raise ValueError(f"zero weight on arc ({a},{b})")
                row.append(x * w)
            elif a == b and a != 1:
                row.append(Polynomial([1]))
            else:
                row.append(Polynomial())
        rows.append(row)
    return PolyMatrix(rows)


def cycle_weight(cycle: Sequence[int], delta: Mapping[tuple[int, int], object]) -> Fraction:
    w = Fraction(1)
    for a, b in zip(cycle, cycle[1:]):
        w *= Fraction(delta[(a, b)])
    return w


@dataclass
class CycleLemmaVerdict:
    det: Polynomial
    det_is_zero: bool
    cycle_counts: dict[int, int]
    cycle_sums: dict[int, Fraction]
    sums_nonzero: bool
    violated_t: list[int]
    part_a_ok: bool
    part_b_ok: bool
    leading_order_ok: bool

    @property
    def has_cycles(self) -> bool:
        return any(self.cycle_counts.values())

    @property
    def consistent(self) -> bool:
        return self.part_a_ok and self.part_b_ok and self.leading_order_ok

    def to_json(self, decimal: bool = False) -> dict:
        return {
            "det": self.det.to_json(decimal),
            "det_is_zero": self.det_is_zero,
            "has_cycles": self.has_cycles,
            "cycle_counts": {str(t): n for t, n in self.cycle_counts.items()},
            "cycle_sums": {str(t): format_fraction(s, decimal) for t, s in self.cycle_sums.items()},
            "sums_nonzero": self.sums_nonzero,
            "violated_t": self.violated_t,
            "part_a_ok": self.part_a_ok,
            "part_b_ok": self.part_b_ok,
            "leading_order_ok": self.leading_order_ok,
            "consistent": self.consistent,
        }


def cycle_lemma_check(H: DiGraph, delta: Mapping[tuple[int, int], object]) -> CycleLemmaVerdict:
    """Compare ``det B(x)`` with exhaustive 1-cycle enumeration.

    Checks: no 1-cycles implies ``det == 0`` (always); ``det == 0`` implies
    no 1-cycles whenever no nonempty length class has a vanishing weight sum;
    and at the shortest nonempty length ``t + 1`` the coefficient of
    ``x^(t+1)`` equals ``(-1)^t`` times the 1-cycle weight sum.
    """
    if H.r > MAX_CYCLE_NODES:
        raise ValueError(f"exhaustive cycle checks are limited to r <= {MAX_CYCLE_NODES}")
    det = poly_det(build_B_x(H, delta))
    counts, sums = {}, {}
    for t in range(H.r):
        cyc = enumerate_cycles(H, t)
        counts[t] = len(cyc)
        sums[t] = sum((cycle_weight(c, delta) for c in cyc), Fraction(0))
    violated = [t for t in range(H.r) if counts[t] and sums[t] == 0]
    sums_ok = not violated
    has_cycles = any(counts.values())
    part_a = det.is_zero() if not has_cycles else True
    part_b = (not has_cycles) if (sums_ok and det.is_zero()) else True
    leading_ok = True
    if has_cycles:
        t0 = min(t for t in range(H.r) if counts[t])
        lower_zero = all(det.coeff(k) == 0 for k in range(t0 + 1))
        leading_ok = lower_zero and det.coeff(t0 + 1) == (-1) ** t0 * sums[t0]
    return CycleLemmaVerdict(det, det.is_zero(), counts, sums, sums_ok, violated, part_a, part_b, leading_ok)


def minor_polynomial(G: Graph, delta, c: Couple, method: str = "bareiss") -> Polynomial:
    """``det`` of the cross-submatrix ``A_{iK,jK}`` of ``I + x * Delta``."""
    rows, cols = cross_indices(c.i, c.j, c.K)
    x = Polynomial.x()
    entries = []
    for a in rows:
        row = []
        for b in cols:
            if a == b:
                row.append(Polynomial([1]))
            elif G.has_edge(a, b):
                row.append(x * Fraction(delta[(a, b)]))
            else:
                row.append(Polynomial())
        entries.append(row)
    return poly_det(PolyMatrix(entries), method)


def symbolic_vanishing_relation(G: Graph, delta) -> frozenset[Couple]:
    """Couples whose cross-minor of ``I + x * Delta`` is the zero polynomial."""
    if G.d > MAX_CYCLE_NODES:
        raise ValueError(f"symbolic sweeps are limited to d <= {MAX_CYCLE_NODES}")
    return frozenset(c for c in enumerate_couples(G.d) if minor_polynomial(G, delta, c).is_zero())


def sturm_sequence(p: Polynomial) -> list[Polynomial]:
    seq = [p, p.derivative()]
    while seq[-1]:
        r = seq[-2] % seq[-1]
        if r.is_zero():
            break
        seq.append(-r)
    return [q for q in seq if q]


def _variations(seq: list[Polynomial], x: Fraction) -> int:
    signs = [s for s in ((q(x) > 0) - (q(x) < 0) for q in seq) if s]
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def count_roots(p: Polynomial, lo, hi, seq=None) -> int:
    """Number of distinct real roots in the half-open interval ``(lo, hi]``."""
    if p.is_zero():
        raise ValueError("zero polynomial has infinitely many roots")
    seq = seq if seq is not None else sturm_sequence(p.squarefree())
    return _variations(seq, Fraction(lo)) - _variations(seq, Fraction(hi))


def real_roots(p: Polynomial, lo, hi, width=ROOT_WIDTH) -> list[tuple[Fraction, Fraction]]:
    """Isolating intervals ``[a, b]`` for the distinct real roots in ``(lo, hi)``.

    Each interval holds exactly one root, has width at most ``width`` and is
    degenerate (``a == b``) when the root is found exactly.  Sturm counts
    drive every step, so the number of intervals is exact.
    """
    if p.is_zero():
        raise ValueError("zero polynomial has no isolated roots")
    lo, hi, width = Fraction(lo), Fraction(hi), Fraction(width)
    if lo >= hi or p.degree <= 0:
        return []
    q = p.squarefree()
    seq = sturm_sequence(q)
    out: list[tuple[Fraction, Fraction]] = []

    def refine(a: Fraction, b: Fraction) -> tuple[Fraction, Fraction]:
        # Exactly one root in (a, b].
        while b - a > width:
            if q(b) == 0:
                return (b, b)
            m = (a + b) / 2
            if count_roots(q, a, m, seq):
                b = m
            else:
                a = m
        if q(b) == 0:
            return (b, b)
        return (a, b)

    if q(hi) == 0:
        # Pull hi left until (hi', hi] holds only the excluded endpoint root.
        h = (lo + hi) / 2
        while count_roots(q, h, hi, seq) > 1:
            h = (h + hi) / 2
        hi = h
    stack = [(lo, hi)]
    while stack:
        a, b = stack.pop()
        n = count_roots(q, a, b, seq)
        if n == 0:
            continue
        if n == 1:
            out.append(refine(a, b))
            continue
        m = (a + b) / 2
        stack.append((m, b))
        stack.append((a, m))
    return sorted(out)
