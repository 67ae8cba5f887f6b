"""Odd integer polynomials: validation, exact evaluation, content, dilation."""

from __future__ import annotations

import math
from dataclasses import dataclass


@dataclass(frozen=True)
class OddIntPolynomial:
    """An integer polynomial with zero even-degree coefficients and positive lead.

    ``coeffs[j-1]`` is the coefficient of x^j (low to high, constant term
    absent). The degree ``k`` is odd and >= 3, ``least_index`` is the smallest
    j with a nonzero coefficient, and ``content`` is the gcd of the nonzero
    coefficients.
    """

    coeffs: tuple[int, ...]
    degree: int
    least_index: int
    content: int

    def coeff(self, j: int) -> int:
        """Coefficient of x^j (0 outside 1..degree)."""
        if 1 <= j <= self.degree:
            return self.coeffs[j - 1]
        return 0

    @property
    def leading(self) -> int:
        return self.coeffs[-1]

    def __str__(self) -> str:
        parts = []
        for j in range(self.degree, 0, -1):
            c = self.coeff(j)
            if c == 0:
                continue
            term = "x" if j == 1 else f"x^{j}"
            if abs(c) != 1:
                term = f"{abs(c)}{term}"
            parts.append(("- " if c < 0 else "+ " if parts else "") + term)
        return " ".join(parts) if parts else "0"


def make_poly(coeffs: list[int] | tuple[int, ...]) -> OddIntPolynomial:
    """Build an OddIntPolynomial from coefficients listed low-to-high.

    Trailing zeros are trimmed before validation. Rejects even-index nonzero
    coefficients, a non-positive leading coefficient, and degree < 3.
    """
    trimmed = list(coeffs)
    while trimmed and trimmed[-1] == 0:
        trimmed.pop()
    if not trimmed:
        raise ValueError("polynomial has no nonzero coefficients")
    k = len(trimmed)
    for j, c in enumerate(trimmed, start=1):
        if j % 2 == 0 and c != 0:
            raise ValueError(f"even-index coefficient a_{j}={c} must be zero")
    if trimmed[-1] <= 0:
        raise ValueError(f"leading coefficient a_{k}={trimmed[-1]} must be positive")
    if k < 3:
        raise ValueError(f"degree {k} < 3")
    nonzero = [c for c in trimmed if c != 0]
    least = next(j for j, c in enumerate(trimmed, start=1) if c != 0)
    return OddIntPolynomial(
        coeffs=tuple(trimmed),
        degree=k,
        least_index=least,
        content=math.gcd(*nonzero),
    )


def parse_poly(text: str) -> OddIntPolynomial:
    """Parse the CLI literal syntax: comma-separated coefficients low-to-high."""
    try:
        coeffs = [int(part.strip()) for part in text.split(",")]
    except ValueError as exc:
        raise ValueError(f"bad polynomial literal {text!r}: {exc}") from None
    return make_poly(coeffs)


def eval_poly(f: OddIntPolynomial, x: int) -> int:
    """Exact f(x) over arbitrary-precision integers (Horner)."""
    acc = 0
    for c in reversed(f.coeffs):
        acc = acc * x + c
    return acc * x


def eval_poly_mod(f: OddIntPolynomial, x: int, q: int) -> int:
    """f(x) mod q with every intermediate reduced, so values stay < q^2."""
    x = x % q
    acc = 0
    for c in reversed(f.coeffs):
        acc = (acc * x + c) % q
    return (acc * x) % q


def dilate(f: OddIntPolynomial, d: int) -> OddIntPolynomial:
    """The polynomial x -> f(d*x), coefficients a_j * d^j."""
    if d < 1:
        raise ValueError(f"dilation factor {d} must be >= 1")
    scaled = [c * d**j for j, c in enumerate(f.coeffs, start=1)]
    return make_poly(scaled)


def monotone_start(f: OddIntPolynomial, d: int = 1) -> int:
    """Smallest j0 >= 1 with f(d*j) >= 1 and strictly increasing for j >= j0.

    Past x > S/a_k with S the sum of the lower coefficients' magnitudes, f is
    strictly increasing with positive values, so a finite scan up to that
    point settles j0.
    """
    lead = f.leading
    s_low = sum(abs(c) for c in f.coeffs[:-1])
    x_safe = s_low // lead + 1
    j_safe = (x_safe + d - 1) // d
    j0 = 1
    prev = eval_poly(f, d)
    for j in range(2, j_safe + 2):
        cur = eval_poly(f, d * j)
        if prev < 1 or cur <= prev:
            j0 = j
        prev = cur
    return j0


def values_up_to(f: OddIntPolynomial, n: int, d: int = 1) -> list[int]:
    """All values f(d*j) <= n for j past the monotone prefix, increasing."""
    if n < 1:
        return []
    out: list[int] = []
    j = monotone_start(f, d)
    while True:
        v = eval_poly(f, d * j)
        if v > n:
            break
        out.append(v)
        j += 1
    return out
