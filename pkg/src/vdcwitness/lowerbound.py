"""k-th power residue classes mod p, the provably negative class, the
per-prime coefficient inequality, and the aggregated lower bound on the
least free coefficient.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .averaging import sieve_primes
from .kernels import SparseCosinePolynomial
from .poly import OddIntPolynomial

TWO_PI = 2.0 * math.pi


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


@dataclass
class ResidueClassSystem:
    p: int
    k: int
    beta_coeff: int
    s: int
    classes: list[list[int]]
    sums: list[float]
    negative_index: int

    def witness_points(self) -> list[int]:
        """The residues a_1..a_s whose cosine sum is provably <= -sqrt(s/(k-2)).

        For f = beta x^k these are the negative class pulled back by beta:
        evaluating cos(2 pi beta j^k a / p) over them lands on the negative
        class for every j coprime to p.
        """
        beta_inv = pow(self.beta_coeff, -1, self.p)
        target = set(self.classes[self.negative_index])
        return sorted(
            a for a in range(1, self.p) if (a * self.beta_coeff) % self.p in target
        )


def build_classes(p: int, k: int, beta: int = 1) -> ResidueClassSystem:
    """Partition the reduced residues mod p into the k cosets of the k-th powers.

    Requires p prime, p = 1 (mod k), p > beta, k odd >= 3. Each coset is
    closed under negation (k odd), so its cosine sum is real; the minimum sum
    is checked against the -sqrt(s/(k-2)) bound and a violation is a hard
    error.
    """
    if k < 3 or k % 2 == 0:
        raise ValueError(f"k={k} must be odd and >= 3")
    if not _is_prime(p):
        raise ValueError(f"p={p} is not prime")
    if p % k != 1:
        raise ValueError(f"p={p} is not 1 mod k={k}")
    if not 0 < beta < p:
        raise ValueError(f"beta={beta} must lie in (0, p)")
    s = (p - 1) // k
    powers = sorted({pow(j, k, p) for j in range(1, p)})
    assigned: dict[int, int] = {}
    classes: list[list[int]] = []
    for a in range(1, p):
        if a in assigned:
            continue
        coset = sorted(a * h % p for h in powers)
        idx = len(classes)
        classes.append(coset)
        for r in coset:
            assigned[r] = idx
    if len(classes) != k or any(len(c) != s for c in classes):
        raise AssertionError("cosets do not partition into k classes of size s")

    sums = []
    for coset in classes:
        # pair a with p - a: each pair contributes 2 cos(2 pi a / p)
        half = [a for a in coset if a <= (p - 1) // 2]
        if 2 * len(half) != len(coset):
            raise AssertionError(f"class not closed under negation mod {p}")
        sums.append(math.fsum(2.0 * math.cos(TWO_PI * a / p) for a in half))

    negative_index = min(range(k), key=lambda m: sums[m])
    bound = -math.sqrt(s / (k - 2))
    if sums[negative_index] > bound + 1e-9:
        raise AssertionError(
            f"negative-class bound violated at p={p}, k={k}: "
            f"min sum {sums[negative_index]:.12f} > {bound:.12f}"
        )
    return ResidueClassSystem(
        p=p, k=k, beta_coeff=beta, s=s, classes=classes, sums=sums,
        negative_index=negative_index,
    )


@dataclass
class PrimeInequalityResult:
    p: int
    lhs: float
    rhs: float
    passed: bool
    u_chain_bound: float  # 1 / (1 + sqrt(s (k-2)))
    point_sum: float  # sum_i T(a_i / p), nonnegative for feasible T


def prime_inequality_check(
    T: SparseCosinePolynomial,
    f: OddIntPolynomial,
    p: int,
    *,
    tol: float = 1e-9,
) -> PrimeInequalityResult:
    """Check a0 + sum of coefficients at multiples-of-p arguments >= 1/sqrt(p).

    f must be a monomial beta x^k. The free coefficient belongs on the left
    (p divides 0): dropping it falsifies the inequality already for the
    constant polynomial. The proof chain is reproduced numerically: the
    witness-point sum of T is computed exactly and must be nonnegative for
    a feasible T.
    """
    mono = [j for j in range(1, f.degree + 1) if f.coeff(j) != 0]
    if mono != [f.degree]:
        raise ValueError("per-prime inequality applies to monomials beta x^k only")
    k = f.degree
    beta = f.leading
    if p <= beta:
        raise ValueError(f"need p > beta, got p={p}, beta={beta}")
    system = build_classes(p, k, beta)
    s = system.s
    if 1.0 + math.sqrt(s * (k - 2)) > math.sqrt(p) + 1e-12:
        raise ValueError(f"usability condition 1 + sqrt(s(k-2)) <= sqrt(p) fails at p={p}")

    lhs = T.b0
    for freq, coeff in T.terms.items():
        j = _integer_kth_root(freq // beta, k)
        if j is None or beta * j**k != freq:
            raise ValueError(f"frequency {freq} is not a value of {f}")
        if j % p == 0:
            lhs += coeff
    rhs = 1.0 / math.sqrt(p)
    points = system.witness_points()
    point_sum = math.fsum(T.value_at_rational(a, p) for a in points)
    return PrimeInequalityResult(
        p=p,
        lhs=lhs,
        rhs=rhs,
        passed=lhs >= rhs - tol,
        u_chain_bound=1.0 / (1.0 + math.sqrt(s * (k - 2))),
        point_sum=point_sum,
    )


def _integer_kth_root(n: int, k: int) -> int | None:
    if n < 1:
        return None
    r = round(n ** (1.0 / k))
    for cand in (r - 1, r, r + 1):
        if cand >= 1 and cand**k == n:
            return cand
    return None


def admissible_primes(k: int, beta: int, p_max: int) -> list[int]:
    """Primes p = 1 (mod k), p > beta, passing 1 + sqrt(s(k-2)) <= sqrt(p)."""
    out = []
    for p in sieve_primes(p_max):
        if p % k != 1 or p <= beta:
            continue
        s = (p - 1) // k
        if 1.0 + math.sqrt(s * (k - 2)) <= math.sqrt(p) + 1e-12:
            out.append(p)
    return out


def gamma_lower_bound(n: int, k: int, m_cap: int, beta: int = 1) -> float:
    """Aggregated lower bound on the free coefficient of any feasible witness
    with spectrum in {beta j^k} and maximum frequency <= n.

    Finite, epsilon-free form of the theorem: over admissible primes p <= m,
    b0 * theta(m) + log n >= R(m) with theta = sum log p and R = sum
    log(p)/sqrt(p); maximize the implied bound over m <= m_cap, clipped at 0.
    """
    if n < 2 or k < 3 or k % 2 == 0:
        raise ValueError("need n >= 2 and odd k >= 3")
    best = 0.0
    theta = 0.0
    R = 0.0
    log_n = math.log(n)
    for p in admissible_primes(k, beta, m_cap):
        theta += math.log(p)
        R += math.log(p) / math.sqrt(p)
        if theta > 0:
            best = max(best, (R - log_n) / theta)
    return best
