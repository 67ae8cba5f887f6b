"""Complete trigonometric sums of odd polynomials and their reduced variants.

The per-call path pairs s with q-s so the imaginary parts cancel in exact
integer arithmetic before any trig call; sweep helpers batch all multipliers
a at once through an FFT of the phase-count vector (same sum, different
accumulation order).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .poly import OddIntPolynomial, eval_poly_mod

TWO_PI = 2.0 * math.pi

# int64 Horner stays exact while q*q fits; fall back to object dtype above.
_INT64_SAFE_Q = 2**31


@dataclass(frozen=True)
class CompleteSumResult:
    value: float
    q: int
    a: int
    d: int
    residual_imag: float


def _phases_mod(f: OddIntPolynomial, d: int, q: int, count: int) -> np.ndarray:
    """f(d*s) mod q for s = 0..count-1, exact."""
    if q < _INT64_SAFE_Q:
        x = (np.arange(count, dtype=np.int64) * (d % q)) % q
        acc = np.zeros(count, dtype=np.int64)
        for c in reversed(f.coeffs):
            acc = (acc * x + c) % q
        return (acc * x) % q
    return np.array([eval_poly_mod(f, d * s, q) for s in range(count)], dtype=object)


def reduced_sum(f: OddIntPolynomial, d: int, a: int, q: int) -> CompleteSumResult:
    """S_d(a*f, q) = sum over s < q of e(a*f(d*s)/q), exactly real for odd f.

    Accumulates the pair (s, q-s) as 2*cos(2*pi*r/q) with r = a*f(ds) mod q
    reduced in integer arithmetic, so no imaginary part is ever formed.
    """
    if q < 1:
        raise ValueError(f"modulus {q} must be >= 1")
    if d < 1:
        raise ValueError(f"dilation {d} must be >= 1")
    if q == 1:
        return CompleteSumResult(1.0, q, a, d, 0.0)
    half = (q - 1) // 2
    r = (_phases_mod(f, d, q, half + 1) * (a % q)) % q
    total = 1.0 + 2.0 * np.cos((TWO_PI / q) * r[1:].astype(np.float64)).sum()
    if q % 2 == 0:
        r_mid = (a * eval_poly_mod(f, d * (q // 2), q)) % q
        total += math.cos(TWO_PI * r_mid / q)
    return CompleteSumResult(float(total), q, a, d, 0.0)


def complete_sum(f: OddIntPolynomial, a: int, q: int) -> CompleteSumResult:
    """S(a*f, q), the d = 1 case."""
    return reduced_sum(f, 1, a, q)


def reduced_sum_all(f: OddIntPolynomial, d: int, q: int) -> np.ndarray:
    """S_d(a*f, q) for every a = 0..q-1 as one complex array.

    Counts the residues of f(d*s) mod q and takes the conjugate FFT of the
    count vector; column a is the sum for multiplier a. For odd f the exact
    values are real, so the imaginary columns measure FFT roundoff only.
    """
    if q == 1:
        return np.ones(1, dtype=complex)
    vals = _phases_mod(f, d, q, q)
    counts = np.bincount(vals.astype(np.int64), minlength=q)
    return np.conjugate(np.fft.fft(counts.astype(np.float64)))


def chen_nechaev_ratio(f: OddIntPolynomial, q: int) -> float:
    """max over a coprime to q of |S(a*f, q)| / (gcd(c(a*f), q)^(1/k) q^(1-1/k))."""
    if q < 2:
        raise ValueError(f"need q >= 2, got {q}")
    sums = np.abs(reduced_sum_all(f, 1, q))
    a = np.arange(q, dtype=np.int64)
    coprime = np.gcd(a, q) == 1
    k = f.degree
    g = np.gcd(a * f.content, q).astype(np.float64)
    ratios = sums / (g ** (1.0 / k) * float(q) ** (1.0 - 1.0 / k))
    return float(ratios[coprime].max())


def estimate_c0(f: OddIntPolynomial, q_max: int = 5000) -> float:
    """Empirical constant for the complete-sum envelope over 2 <= q <= q_max.

    This is the working value of the implicit constant used by the averaging
    scheme; it is monotone nondecreasing in q_max.
    """
    if q_max < 2:
        raise ValueError(f"q_max {q_max} must be >= 2")
    return max(chen_nechaev_ratio(f, q) for q in range(2, q_max + 1))


def c0_sweep(f: OddIntPolynomial, q_max: int) -> list[tuple[int, float, float]]:
    """Per-q envelope ratios: rows (q, max-over-a ratio, running maximum)."""
    rows = []
    running = 0.0
    for q in range(2, q_max + 1):
        r = chen_nechaev_ratio(f, q)
        running = max(running, r)
        rows.append((q, r, running))
    return rows


def reference_sum(f: OddIntPolynomial, d: int, a: int, q: int) -> complex:
    """Direct unpaired complex accumulation, for cross-checking realness."""
    total = 0.0 + 0.0j
    for s in range(q):
        r = (a * eval_poly_mod(f, d * s, q)) % q
        ang = TWO_PI * r / q
        total += complex(math.cos(ang), math.sin(ang))
    return total
