"""The averaging machinery: tau bounds, per-prime exponent ladders, scheme
assembly, and exhaustive verification of the averaged lower bound.

The scheme's moduli are built prime by prime. Small primes get the linear
exponent ladder a*j; for a large prime the ladder is floor(j/w) with w the
number of times the small-prime threshold divides into it. The geometric
weights lambda^j with lambda = 2^(-beta) then keep the weighted tau-average
above -delta for every modulus q simultaneously.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .poly import OddIntPolynomial


def sieve_primes(limit: int) -> list[int]:
    """All primes <= limit."""
    if limit < 2:
        return []
    flags = np.ones(limit + 1, dtype=bool)
    flags[:2] = False
    for p in range(2, int(limit**0.5) + 1):
        if flags[p]:
            flags[p * p :: p] = False
    return [int(p) for p in np.nonzero(flags)[0]]


def smallest_prime_factors(limit: int) -> np.ndarray:
    """spf[n] = smallest prime factor of n, for 0 <= n <= limit."""
    spf = np.arange(limit + 1, dtype=np.int64)
    for p in range(2, int(limit**0.5) + 1):
        if spf[p] == p:
            sl = spf[p * p :: p]
            sl[sl == np.arange(p * p, limit + 1, p)] = p
            spf[p * p :: p] = sl
    return spf


def factorize(q: int, spf: np.ndarray | None = None) -> list[tuple[int, int]]:
    """Prime factorization [(p, e), ...] of q >= 1."""
    out = []
    if spf is not None and q < len(spf):
        while q > 1:
            p = int(spf[q])
            e = 0
            while q % p == 0:
                q //= p
                e += 1
            out.append((p, e))
        return out
    p = 2
    while p * p <= q:
        if q % p == 0:
            e = 0
            while q % p == 0:
                q //= p
                e += 1
            out.append((p, e))
        p += 1 if p == 2 else 2
    if q > 1:
        out.append((q, 1))
    return out


def tau_star(d: int, q: int, alpha: float, beta: float, l: int) -> float:
    """Unclipped principal bound: 1 when q | d^l, else -alpha r^(-beta)."""
    r = q // math.gcd(q, d**l)
    if r == 1:
        return 1.0
    return -alpha * r ** (-beta)

def tau(d: int, q: int, alpha: float, beta: float, l: int) -> float:
    """max(tau_star, -1)."""
    return max(tau_star(d, q, alpha, beta, l), -1.0)


def threshold_pstar(alpha: float, beta: float) -> int:
    """Smallest prime p with 2^(-beta) >= (alpha + 1) / (alpha + p^beta).

    alpha = 0 is allowed as the limiting case (the condition then reads
    p >= 2 with equality at p = 2).
    """
    if alpha < 0 or not 0 < beta < 1:
        raise ValueError("need alpha >= 0 and beta in (0, 1)")
    lam = 2.0**-beta
    p = 2
    while lam < (alpha + 1.0) / (alpha + p**beta):
        p = _next_prime(p)
    return p


def threshold_astar(alpha: float, beta: float, l: int) -> int:
    """Smallest integer a >= 1 making the small-prime ladder condition hold at p=2.

    Condition: 2^(beta a l) >= (alpha 2^(-beta) (1-lam) + 2 lam - 1) / (lam (2 lam - 1))
    with lam = 2^(-beta); it then holds for every prime with the same a.
    """
    if alpha < 0 or not 0 < beta < 1 or l < 1:
        raise ValueError("need alpha >= 0, beta in (0, 1), l >= 1")
    lam = 2.0**-beta
    rhs = (alpha * lam * (1.0 - lam) + 2.0 * lam - 1.0) / (lam * (2.0 * lam - 1.0))
    a = 1
    while 2.0 ** (beta * a * l) < rhs:
        a += 1
    return a


def _next_prime(p: int) -> int:
    cand = p + 1
    while any(cand % r == 0 for r in range(2, int(cand**0.5) + 1)):
        cand += 1
    return cand


def exponents_for_prime(
    p: int, s: int, alpha: float, beta: float, l: int
) -> list[int]:
    """The ladder a_0..a_s for prime p <= 2^s.

    Below the prime threshold the ladder is a* j; at or above it, floor(j/w)
    where p_star^w <= p < p_star^(w+1).
    """
    if p > 2**s:
        raise ValueError(f"prime {p} exceeds 2^s = {2**s}")
    pstar = threshold_pstar(alpha, beta)
    if p < pstar:
        astar = threshold_astar(alpha, beta, l)
        return [astar * j for j in range(s + 1)]
    w = 1
    while pstar ** (w + 1) <= p:
        w += 1
    return [j // w for j in range(s + 1)]


@dataclass
class AveragingScheme:
    delta: float
    alpha: float
    beta: float
    lam: float
    s: int
    Lambda: float
    moduli: list[int]
    prime_exponents: dict[int, list[int]]
    c0: float
    c2: float
    c3: float
    c4: float
    pstar: int
    astar: int
    l: int
    paper_scale: bool = True
    notes: list[str] = field(default_factory=list)

    def ladder(self, p: int) -> list[int]:
        """Exponent ladder for p, identically zero above the prime cutoff."""
        return self.prime_exponents.get(p, [0] * (self.s + 1))

    def weights(self) -> list[float]:
        return [self.lam**j for j in range(self.s + 1)]

    def log_ds(self) -> float:
        """ln d_s, from the exponent tables (d_s itself can be astronomically big)."""
        return sum(
            ladder[self.s] * math.log(p) for p, ladder in self.prime_exponents.items()
        )

    def to_json_dict(self) -> dict:
        return {
            "delta": self.delta,
            "alpha": self.alpha,
            "beta": self.beta,
            "lambda": self.lam,
            "s": self.s,
            "Lambda": self.Lambda,
            "c0": self.c0,
            "c2": self.c2,
            "c3": self.c3,
            "c4": self.c4,
            "p_star": self.pstar,
            "a_star": self.astar,
            "least_index": self.l,
            "prime_exponents": {str(p): a for p, a in self.prime_exponents.items()},
            "log_d_s": self.log_ds(),
            "notes": self.notes,
        }


def build_scheme(
    delta: float,
    f: OddIntPolynomial,
    c0: float,
    *,
    size_cap: int = 1 << 20,
    materialize_moduli: bool = True,
) -> AveragingScheme:
    """Construct the full scheme for a target average -delta.

    s is the smallest integer with lambda^(s+1) <= delta / c3 (the sandwich
    lower half then holds automatically); the prime cutoff is m = 2^s and
    each prime's ladder comes from exponents_for_prime.
    """
    if not 0 < delta < 1:
        raise ValueError(f"delta={delta} must lie in (0, 1)")
    if c0 <= 0:
        raise ValueError(f"c0={c0} must be positive")
    alpha = c0 * abs(f.coeff(f.least_index))
    beta = 1.0 / f.degree
    lam = 2.0**-beta
    c3 = max((1.0 + alpha) / (1.0 - lam), alpha / lam)
    s = 0
    while lam ** (s + 1) > delta / c3:
        s += 1
    m = 2**s
    if m > size_cap:
        raise ValueError(
            f"scheme needs prime cutoff 2^{s} = {m} > cap {size_cap}; "
            "raise size_cap or delta"
        )
    pstar = threshold_pstar(alpha, beta)
    astar = threshold_astar(alpha, beta, f.least_index)
    primes = sieve_primes(m)
    exponents = {
        p: exponents_for_prime(p, s, alpha, beta, f.least_index) for p in primes
    }
    moduli: list[int] = []
    if materialize_moduli:
        for j in range(s + 1):
            d = 1
            for p in primes:
                d *= p ** exponents[p][j]
            moduli.append(d)
    t = len(primes)
    c2 = max(2, astar) * math.log2(pstar)
    c4 = t * math.log(m) / m if m >= 2 else 0.0
    return AveragingScheme(
        delta=delta,
        alpha=alpha,
        beta=beta,
        lam=lam,
        s=s,
        Lambda=sum(lam**j for j in range(s + 1)),
        moduli=moduli,
        prime_exponents=exponents,
        c0=c0,
        c2=c2,
        c3=c3,
        c4=c4,
        pstar=pstar,
        astar=astar,
        l=f.least_index,
        paper_scale=True,
    )


def averaged_tau(scheme: AveragingScheme, q: int, spf: np.ndarray | None = None) -> float:
    """(1/Lambda) sum_j lambda^j tau(d_j, q), via the prime factorization of q.

    r_j = q / gcd(q, d_j^l) is assembled multiplicatively from the exponent
    tables, so the astronomically large d_j never appear.
    """
    factors = factorize(q, spf)
    lam, alpha, beta, l = scheme.lam, scheme.alpha, scheme.beta, scheme.l
    total = 0.0
    weight = 1.0
    for j in range(scheme.s + 1):
        r = 1
        for p, e in factors:
            cap = l * scheme.ladder(p)[j]
            if e > cap:
                r *= p ** (e - cap)
        if r == 1:
            total += weight
        else:
            total += weight * max(-alpha * r ** (-beta), -1.0)
        weight *= lam
    return total / scheme.Lambda


def verify_scheme(
    scheme: AveragingScheme, q_max: int
) -> tuple[int, float]:
    """Exhaustive minimum of the averaged tau over q <= q_max.

    Returns the minimizing (q, value); the scheme promises value >= -delta.
    """
    if q_max < 1:
        raise ValueError("q_max must be >= 1")
    spf = smallest_prime_factors(q_max) if q_max >= 4 else None
    lam, alpha, beta, l, s = (
        scheme.lam, scheme.alpha, scheme.beta, scheme.l, scheme.s,
    )
    weights = [lam**j for j in range(s + 1)]
    Lambda = scheme.Lambda
    ladders = scheme.prime_exponents
    zero_ladder = [0] * (s + 1)
    worst_q, worst_val = 1, 1.0
    pow_cache: dict[int, float] = {}
    for q in range(2, q_max + 1):
        factors = factorize(q, spf)
        caps = [(p, e, ladders.get(p, zero_ladder)) for p, e in factors]
        total = 0.0
        for j in range(s + 1):
            r = 1
            for p, e, ladder in caps:
                excess = e - l * ladder[j]
                if excess > 0:
                    r *= p**excess
            if r == 1:
                total += weights[j]
            else:
                contrib = pow_cache.get(r)
                if contrib is None:
                    contrib = max(-alpha * r ** (-beta), -1.0)
                    pow_cache[r] = contrib
                total += weights[j] * contrib
        value = total / Lambda
        if value < worst_val:
            worst_q, worst_val = q, value
    return worst_q, worst_val
