"""Major/minor arc classification by continued-fraction convergents.

A point is major for cutoffs (Q, R) when some reduced a/q with q <= Q has
|x - a/q| <= 1/(qR). If any fraction with denominator <= Q satisfies the
bound then so does the convergent with the largest denominator not above it
(best approximation of the second kind), so scanning convergents is complete
and the first hit has the smallest possible q.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction


@dataclass(frozen=True)
class ArcLocation:
    kind: str  # "major" | "minor"
    a: int
    q: int
    kappa: Fraction
    Q: int
    R: Fraction

    @property
    def is_major(self) -> bool:
        return self.kind == "major"


def _convergents(x: Fraction) -> list[tuple[int, int]]:
    """All continued-fraction convergents (a, q) of x in [0, 1)."""
    num, den = x.numerator, x.denominator
    out = []
    h_prev, h = 1, num // den
    k_prev, k = 0, 1
    num, den = num - (num // den) * den, den
    out.append((h, k))
    while num:
        num, den = den, num
        a_i = num // den
        num -= a_i * den
        h_prev, h = h, a_i * h + h_prev
        k_prev, k = k, a_i * k + k_prev
        out.append((h, k))
    return out


def classify(x: float | Fraction, Q: int, R: float | Fraction) -> ArcLocation:
    """Locate x in [0, 1) relative to the cutoffs 1 <= Q < R.

    Floats are converted to their exact dyadic rational, so the |kappa| test
    is exact. Among qualifying rationals the smallest denominator wins (and
    for it, the convergent minimizes |kappa|).
    """
    xf = Fraction(x)
    Rf = Fraction(R)
    if not 0 <= xf < 1:
        raise ValueError(f"x={x} must lie in [0, 1)")
    if Q < 1 or Rf <= Q:
        raise ValueError(f"need 1 <= Q < R, got Q={Q}, R={R}")
    for a, q in _convergents(xf):
        if q > Q:
            break
        kappa = xf - Fraction(a, q)
        if abs(kappa) * q * Rf <= 1:
            return ArcLocation(kind="major", a=a, q=q, kappa=kappa, Q=Q, R=Rf)
    return ArcLocation(kind="minor", a=0, q=0, kappa=Fraction(0), Q=Q, R=Rf)
