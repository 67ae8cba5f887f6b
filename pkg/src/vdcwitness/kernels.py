"""Fejer kernel, the sparse cosine surrogate, and high-precision evaluation.

Construction is exact: normalizations and weights are accumulated as integer
ratios and rounded once at the end. Evaluation reduces phases in integer
arithmetic before any trig call, because the frequencies (values f(d*j)) can
exceed 2^53 and a naive multiply would lose every bit of phase.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .poly import OddIntPolynomial, eval_poly, monotone_start

TWO_PI = 2.0 * math.pi

GRID_CHUNK = 1 << 20


class EmptySurrogateRange(ValueError):
    """No j >= j0 satisfies a_k (d j)^k <= n: shrink d or grow n."""


@dataclass
class SparseCosinePolynomial:
    """b0 plus a finite map frequency -> coefficient; frequencies >= 1."""

    b0: float
    terms: dict[int, float] = field(default_factory=dict)
    meta: str = "generic"

    @property
    def max_frequency(self) -> int:
        return max(self.terms) if self.terms else 0

    def coefficient_sum(self) -> float:
        return self.b0 + math.fsum(self.terms.values())

    def value_at_rational(self, a: int, q: int) -> float:
        """Exact-phase evaluation at x = a/q."""
        if q < 1:
            raise ValueError(f"denominator {q} must be >= 1")
        total = self.b0
        for freq, coeff in self.terms.items():
            r = (freq % q) * a % q
            total += coeff * math.cos(TWO_PI * r / q)
        return total

    def value_at(self, x: float) -> float:
        """Evaluation at a float x via its exact dyadic representation."""
        num, den = float(x).as_integer_ratio()
        if den == 1:
            return self.b0 + math.fsum(self.terms.values())
        total = self.b0
        for freq, coeff in self.terms.items():
            r = (freq % den) * num % den
            total += coeff * math.cos(TWO_PI * r / den)
        return total

    def grid_values(self, grid_points: int, *, start: int = 0, stop: int | None = None) -> np.ndarray:
        """Values at x = i/grid_points for i in [start, stop), exact phases.

        Phases are (freq mod G) * i mod G in int64; with G below 2^31 the
        products stay exact.
        """
        G = grid_points
        if G < 1:
            raise ValueError("grid_points must be positive")
        if G >= 1 << 31:
            raise ValueError("grid_points too large for exact int64 phase reduction")
        if stop is None:
            stop = G
        idx = np.arange(start, stop, dtype=np.int64)
        total = np.full(idx.shape, self.b0)
        for freq, coeff in self.terms.items():
            r = (freq % G) * idx % G
            total += coeff * np.cos((TWO_PI / G) * r)
        return total

    def to_json_dict(self) -> dict:
        """JSON form; frequencies as decimal strings (they can exceed 2^53)."""
        return {
            "b0": self.b0,
            "terms": [
                {"freq": str(freq), "coeff": coeff}
                for freq, coeff in sorted(self.terms.items())
            ],
            "meta": self.meta,
        }

    @classmethod
    def from_json_dict(cls, data: dict) -> "SparseCosinePolynomial":
        terms = {int(entry["freq"]): float(entry["coeff"]) for entry in data["terms"]}
        return cls(b0=float(data["b0"]), terms=terms, meta=str(data.get("meta", "generic")))


def eval_cosine(poly: SparseCosinePolynomial, x: float) -> float:
    return poly.value_at(x)


def fejer(n: int) -> SparseCosinePolynomial:
    """The normed Fejer kernel: b0 = 1/n, coefficient 2(1/n - j/n^2) at j."""
    if n < 1:
        raise ValueError(f"n={n} must be >= 1")
    terms = {j: 2.0 * (n - j) / (n * n) for j in range(1, n)}
    return SparseCosinePolynomial(b0=1.0 / n, terms=terms, meta="fejer")


def fejer_value(n: int, x: float) -> float:
    """F_n(x) in closed form: (sin(pi n x) / (n sin(pi x)))^2.

    Identical to evaluating fejer(n); usable when n is too large to expand.
    """
    frac = x - math.floor(x)
    if frac == 0.0:
        return 1.0
    s = math.sin(math.pi * frac)
    return (math.sin(math.pi * n * frac) / (n * s)) ** 2


def _surrogate_weights(
    f: OddIntPolynomial, n: int, d: int
) -> tuple[list[tuple[int, int]], int]:
    """Integer weights j^{k-1} (n - a_k (dj)^k) for j0 <= j <= m, plus their sum."""
    if n < 1 or d < 1:
        raise ValueError("need n >= 1 and d >= 1")
    k, lead = f.degree, f.leading
    j0 = monotone_start(f, d)
    weights = []
    j = j0
    while lead * (d * j) ** k <= n:
        weights.append((j, j ** (k - 1) * (n - lead * (d * j) ** k)))
        j += 1
    if not weights:
        raise EmptySurrogateRange(
            f"no surrogate terms: a_k*(d*j)^k <= n has no solution j >= {j0} "
            f"for d={d}, n={n}"
        )
    return weights, sum(w for _, w in weights)


def surrogate_norm_K(f: OddIntPolynomial, n: int, d: int) -> float:
    """The normalization K with G_{n,d}(0) = 1, computed exactly then rounded."""
    weights, total = _surrogate_weights(f, n, d)
    k, lead = f.degree, f.leading
    return float(Fraction(2 * lead * k * d**k * total, n * n))


def build_surrogate(f: OddIntPolynomial, n: int, d: int) -> SparseCosinePolynomial:
    """The Fejer surrogate: weight j^{k-1}-corrected triangle at frequency f(dj).

    The summation condition and weights use a_k (dj)^k while the frequencies
    use the full f(dj); the asymmetry is deliberate and preserved. Exact-zero
    weights (a_k (dj)^k = n) are dropped.
    """
    weights, total = _surrogate_weights(f, n, d)
    terms: dict[int, float] = {}
    prev_freq = 0
    for j, w in weights:
        if w == 0:
            continue
        freq = eval_poly(f, d * j)
        if freq <= prev_freq:
            raise AssertionError(
                f"frequency collision past monotone prefix: f({d}*{j}) = {freq}"
            )
        prev_freq = freq
        terms[freq] = float(Fraction(w, total))
    return SparseCosinePolynomial(b0=0.0, terms=terms, meta="surrogate")


def major_arc_residual(
    f: OddIntPolynomial, n: int, d: int, a: int, q: int, kappa: float
) -> float:
    """G_{n,d}(a/q + kappa) minus the principal term S_d(a f, q) F_n(kappa) / q.

    A measurement of the major-arc approximation quality, never asserted
    pointwise.
    """
    from .expsum import reduced_sum

    if q < 1:
        raise ValueError(f"q={q} must be >= 1")
    if math.gcd(a, q) != 1:
        raise ValueError(f"need gcd(a, q) = 1, got a={a}, q={q}")
    g = build_surrogate(f, n, d)
    if kappa == 0.0:
        left = g.value_at_rational(a, q)
    else:
        left = g.value_at(a / q + kappa)
    principal = reduced_sum(f, d, a, q).value / q * fejer_value(n, kappa)
    return left - principal
