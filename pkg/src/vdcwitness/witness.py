"""Witness assembly: the delta-plus-averaged-surrogates cosine polynomial,
its negativity scan, and the symbolic paper-scale parameter formulas.
"""

from __future__ import annotations

import math
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .kernels import EmptySurrogateRange, SparseCosinePolynomial, build_surrogate
from .poly import OddIntPolynomial

TWO_PI = 2.0 * math.pi
GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0

SCAN_CHUNK = 1 << 21


@dataclass
class DeskScheme:
    """A desk-scale modulus ladder: geometric weights, user-sized moduli.

    Unlike the paper-scale scheme the moduli need not form a divisor chain,
    so the averaged lower bound carries no guarantee; positivity of the
    assembled witness is established by scanning instead.
    """

    moduli: list[int]
    lam: float
    delta: float

    @property
    def weight_total(self) -> float:
        return sum(self.lam**j for j in range(len(self.moduli)))


@dataclass
class WitnessReport:
    delta: float
    b0: float
    coeff_sum: float
    max_frequency: int
    term_count: int
    moduli: list[int]
    desk_mode: bool
    grid_min: float | None = None
    grid_argmin: float | None = None
    refined_min: float | None = None
    scan_grid: int | None = None
    scheme_verdict: str | None = None
    notes: list[str] = field(default_factory=list)

    def to_json_dict(self) -> dict:
        return {
            "delta": self.delta,
            "b0": self.b0,
            "coeff_sum": self.coeff_sum,
            "max_frequency": str(self.max_frequency),
            "term_count": self.term_count,
            "moduli": [str(d) for d in self.moduli],
            "desk_mode": self.desk_mode,
            "grid_min": self.grid_min,
            "grid_argmin": self.grid_argmin,
            "refined_min": self.refined_min,
            "scan_grid": self.scan_grid,
            "scheme_verdict": self.scheme_verdict,
            "notes": self.notes,
        }


def desk_scheme(
    f: OddIntPolynomial,
    delta: float,
    n: int,
    moduli: list[int] | None = None,
) -> DeskScheme:
    """Desk-mode modulus ladder for a user-chosen n.

    Default recipe: 1 followed by every prime power d with at least two
    surrogate terms in the budget (a_k (2d)^k <= n). Prime-power moduli cover
    the small prime-power denominators where the complete sums run most
    negative, while their number smears the off-arc oscillation; composite
    moduli add no coverage beyond their prime-power parts.
    """
    if not 0 < delta < 1:
        raise ValueError(f"delta={delta} must lie in (0, 1)")
    lam = 2.0 ** (-1.0 / f.degree)
    if moduli is None:
        budget = 1
        while f.leading * (2 * (budget + 1)) ** f.degree <= n:
            budget += 1
        moduli = [1] + [d for d in range(2, budget + 1) if _is_prime_power(d)]
    if moduli[0] != 1 or any(b <= a for a, b in zip(moduli, moduli[1:])):
        raise ValueError("moduli must start at 1 and increase strictly")
    return DeskScheme(moduli=list(moduli), lam=lam, delta=delta)


def _is_prime_power(d: int) -> bool:
    for p in range(2, d + 1):
        if p * p > d:
            return True  # d prime
        if d % p == 0:
            while d % p == 0:
                d //= p
            return d == 1
    return False


def build_witness(
    f: OddIntPolynomial,
    delta: float,
    scheme,
    n: int,
) -> tuple[SparseCosinePolynomial, WitnessReport]:
    """Assemble T = delta + ((1-delta)/Lambda) sum_j lambda^j G_{n,d_j}.

    Coefficients landing on the same frequency from different moduli merge by
    addition. Raises EmptySurrogateRange naming the offending modulus when n
    is too small for some d_j.
    """
    if not 0 < delta < 1:
        raise ValueError(f"delta={delta} must lie in (0, 1)")
    moduli = list(scheme.moduli)
    lam = scheme.lam
    weight_total = sum(lam**j for j in range(len(moduli)))
    terms: dict[int, float] = {}
    for j, d in enumerate(moduli):
        try:
            g = build_surrogate(f, n, d)
        except EmptySurrogateRange as exc:
            raise EmptySurrogateRange(
                f"modulus d_{j} = {d} admits no surrogate term at n = {n}"
            ) from exc
        scale = (1.0 - delta) * lam**j / weight_total
        for freq, coeff in g.terms.items():
            terms[freq] = terms.get(freq, 0.0) + scale * coeff
    poly = SparseCosinePolynomial(b0=delta, terms=terms, meta="witness")
    report = WitnessReport(
        delta=delta,
        b0=poly.b0,
        coeff_sum=poly.coefficient_sum(),
        max_frequency=poly.max_frequency,
        term_count=len(terms),
        moduli=moduli,
        desk_mode=not getattr(scheme, "paper_scale", False),
    )
    if report.desk_mode:
        report.notes.append(
            "desk-mode witness: positivity is evidence from scanning, not the "
            "paper-scale guarantee"
        )
    return poly, report


def _golden_refine(
    poly: SparseCosinePolynomial, lo: float, hi: float, iters: int
) -> tuple[float, float]:
    """Golden-section minimization of the polynomial on [lo, hi]."""
    a, b = lo, hi
    c = b - GOLDEN * (b - a)
    d = a + GOLDEN * (b - a)
    fc, fd = poly.value_at(c), poly.value_at(d)
    for _ in range(iters):
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - GOLDEN * (b - a)
            fc = poly.value_at(c)
        else:
            a, c, fc = c, d, fd
            d = a + GOLDEN * (b - a)
            fd = poly.value_at(d)
    return (fc, c) if fc < fd else (fd, d)


def scan_min(
    poly: SparseCosinePolynomial,
    grid_points: int,
    refine_iters: int = 60,
    *,
    refine_count: int = 32,
    threads: int = 1,
) -> tuple[float, float]:
    """Global minimum estimate: uniform grid, then golden-section refinement
    around the worst grid points.

    Cosine polynomials are even, so only x in [0, 1/2] is evaluated; the
    stated grid_points still refers to the full circle. Returns
    (refined_min, argmin).
    """
    G = grid_points
    nyquist = 4 * poly.max_frequency
    if poly.terms and G < nyquist:
        warnings.warn(
            f"grid_points {G} below 4*max_frequency = {nyquist}; minima may be missed",
            stacklevel=2,
        )
    half = G // 2
    freqs = np.fromiter(poly.terms.keys(), dtype=object if poly.max_frequency >= 1 << 62 else np.int64,
                        count=len(poly.terms))
    coefs = np.fromiter(poly.terms.values(), dtype=np.float64, count=len(poly.terms))
    fmod = np.array([int(fr) % G for fr in freqs], dtype=np.int64)

    def eval_chunk(lo: int) -> tuple[float, int, list[tuple[float, int]]]:
        idx = np.arange(lo, min(lo + SCAN_CHUNK, half + 1), dtype=np.int64)
        total = np.full(idx.shape, poly.b0)
        for fm, c in zip(fmod, coefs):
            total += c * np.cos((TWO_PI / G) * (fm * idx % G))
        order = np.argsort(total)[:refine_count]
        worst = [(float(total[o]), int(idx[o])) for o in order]
        amin = int(np.argmin(total))
        return float(total[amin]), int(idx[amin]), worst

    starts = list(range(0, half + 1, SCAN_CHUNK))
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(eval_chunk, starts))
    else:
        results = [eval_chunk(lo) for lo in starts]

    grid_min, grid_arg = min((v, i) for v, i, _ in results)
    pool_worst = sorted(w for _, _, ws in results for w in ws)[: refine_count]
    best, best_x = grid_min, grid_arg / G
    for _, i in pool_worst:
        v, x = _golden_refine(poly, (i - 1) / G, (i + 1) / G, refine_iters)
        if v < best:
            best, best_x = v, x
    return best, best_x


def rational_probe(
    poly: SparseCosinePolynomial, q_max: int
) -> tuple[float, int, int]:
    """Worst exact value of the polynomial over rationals a/q with q <= q_max.

    Complements the uniform scan: dips centered on small-denominator
    rationals are O(1/max_frequency) wide and exact evaluation there does not
    depend on grid alignment. Returns (value, a, q).
    """
    worst = (poly.value_at_rational(0, 1), 0, 1)
    for q in range(2, q_max + 1):
        for a in range(1, (q + 1) // 2):
            if math.gcd(a, q) == 1:
                v = poly.value_at_rational(a, q)
                if v < worst[0]:
                    worst = (v, a, q)
    return worst


@dataclass(frozen=True)
class PaperParameters:
    """Log-space parameter set of the paper-scale construction.

    The underlying integers overflow any fixed-width type, so everything is
    carried as natural logs plus exact exponent fractions of d_star.
    """

    k: int
    delta: float
    c5: float
    c6: float
    c7: float
    c8: float
    log_dstar: float
    n_exponent: int
    q_exponent: Fraction
    r_exponent: Fraction
    log_n: float
    log_Q: float
    log_R: float
    log_N_predicted: float
    delta_logN_product: float

    @property
    def arcs_partition_ok(self) -> bool:
        """Q < R, compared exactly through the d_star exponents."""
        return self.q_exponent < self.r_exponent


def paper_parameters(
    delta: float,
    f: OddIntPolynomial,
    c5: float = 1.0,
    c6: float = 1.0,
    c7: float = 1.0,
) -> PaperParameters:
    """The paper-scale choices n = d*^{k^8}, Q = a_k d*^{1.5 k^6}, R = d*^{...}.

    c5, c6, c7 are the implicit envelope constants, supplied by the caller.
    """
    if not 0 < delta < 1:
        raise ValueError(f"delta={delta} must lie in (0, 1)")
    if min(c5, c6, c7) <= 0:
        raise ValueError("constants c5, c6, c7 must be positive")
    k = f.degree
    c8 = 2.0 * (f.leading + 1) * max(c5, c6, c7) / c5
    log_dstar = math.log(c8) + c5 * delta**-k
    n_exp = k**8
    q_exp = Fraction(3, 2) * k**6
    r_exp = Fraction(k**8 - k**7 + k**5) - Fraction(5, 2) * k**4
    log_n = n_exp * log_dstar
    log_N = c5 * (k + k**8) * delta**-k
    return PaperParameters(
        k=k,
        delta=delta,
        c5=c5,
        c6=c6,
        c7=c7,
        c8=c8,
        log_dstar=log_dstar,
        n_exponent=n_exp,
        q_exponent=q_exp,
        r_exponent=r_exp,
        log_n=log_n,
        log_Q=math.log(f.leading) + float(q_exp) * log_dstar,
        log_R=float(r_exp) * log_dstar,
        log_N_predicted=log_N,
        delta_logN_product=delta * log_N ** (1.0 / k),
    )
