"""Independent ground truth: grid-LP bracket for the minimal free coefficient,
and exact maximum difference-avoiding sets by branch and bound.

The linear-programming subroutine is a dense two-phase simplex with Bland's
rule, kept in-repo: the instances here are tiny (tens of rows) and an
external solver would be a heavier dependency than the algorithm.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .kernels import SparseCosinePolynomial
from .poly import OddIntPolynomial, values_up_to
from .witness import scan_min

TWO_PI = 2.0 * math.pi


class SimplexError(RuntimeError):
    pass


@dataclass
class SimplexResult:
    status: str  # "optimal" | "unbounded"
    x: np.ndarray
    objective: float
    multipliers: np.ndarray  # dual values of the equality rows


def _simplex_core(A: np.ndarray, b: np.ndarray, c: np.ndarray, basis: list[int]) -> str:
    """Revised-style tableau iterations with Bland's rule; mutates A, b, c in place.

    A is m x n with an identity embedded on `basis`; b >= 0 is maintained.
    Returns "optimal" or "unbounded".
    """
    m, n = A.shape
    while True:
        z = c[basis] @ A - c  # fresh reduced costs: cheap at these row counts
        improving = np.nonzero(z > 1e-9)[0]
        if improving.size == 0:
            return "optimal"
        enter = int(improving[0])  # Bland: smallest improving index
        col = A[:, enter]
        leave, best = -1, math.inf
        for i in range(m):
            if col[i] > 1e-11:
                ratio = b[i] / col[i]
                if ratio < best - 1e-12 or (
                    abs(ratio - best) <= 1e-12 and (leave < 0 or basis[i] < basis[leave])
                ):
                    best, leave = ratio, i
        if leave < 0:
            return "unbounded"
        piv = A[leave, enter]
        A[leave] /= piv
        b[leave] /= piv
        for i in range(m):
            if i != leave and A[i, enter] != 0.0:
                b[i] -= A[i, enter] * b[leave]
                A[i] -= A[i, enter] * A[leave]
        basis[leave] = enter


def simplex_solve(A_in, b_in, c_in) -> SimplexResult:
    """min c.x subject to A x = b, x >= 0 (dense two-phase, Bland's rule)."""
    A = np.array(A_in, dtype=float)
    b = np.array(b_in, dtype=float)
    c = np.array(c_in, dtype=float)
    m, n = A.shape
    neg = b < 0
    A[neg] *= -1.0
    b[neg] *= -1.0

    # Phase I: minimize the sum of artificial variables.
    A1 = np.hstack([A, np.eye(m)])
    c1 = np.concatenate([np.zeros(n), np.ones(m)])
    basis = list(range(n, n + m))
    status = _simplex_core(A1, b, c1, basis)
    if status != "optimal" or c1[basis] @ b > 1e-7:
        raise SimplexError("phase I failed: problem infeasible")
    # Drive any artificial still in the basis out (degenerate rows).
    for i, bi in enumerate(basis):
        if bi >= n:
            for j in range(n):
                if abs(A1[i, j]) > 1e-9:
                    piv = A1[i, j]
                    A1[i] /= piv
                    b[i] /= piv
                    for r in range(m):
                        if r != i and A1[r, j] != 0.0:
                            b[r] -= A1[r, j] * b[i]
                            A1[r] -= A1[r, j] * A1[i]
                    basis[i] = j
                    break

    A2 = A1[:, :n]
    status = _simplex_core(A2, b, c, basis)
    if status != "optimal":
        return SimplexResult(status="unbounded", x=np.zeros(n), objective=-math.inf,
                             multipliers=np.zeros(m))
    x = np.zeros(n)
    for i, bi in enumerate(basis):
        if bi < n:
            x[bi] = b[i]
    # Multipliers y solve B^T y = c_B against the original equality rows.
    A_orig = np.array(A_in, dtype=float)
    A_orig[neg] *= -1.0
    cols = [bi for bi in basis if bi < n]
    B = A_orig[:, cols]
    y, *_ = np.linalg.lstsq(B.T, c[cols], rcond=None)
    y[neg] *= -1.0
    return SimplexResult(status="optimal", x=x, objective=float(c @ x), multipliers=y)


@dataclass
class GammaBracket:
    spectrum: list[int]
    lower: float
    upper: float
    grid_points: int
    poly: SparseCosinePolynomial
    rounds: int


def _solve_grid_lp(spectrum: list[int], xs: np.ndarray) -> tuple[float, np.ndarray]:
    """min b0 with b0 + sum b_d = 1, b >= 0, T(x_i) >= 0 on the grid points xs.

    Solved through its dual (rows = spectrum size + 1, columns = grid size);
    the primal coefficients are the equality multipliers of the dual.
    """
    D = len(spectrum)
    G = len(xs)
    cos_mat = np.cos(TWO_PI * np.outer(np.asarray(spectrum, dtype=float), xs))
    # Dual: max y0 s.t. y0 + sum_i u_i <= 1, y0 + sum_i u_i cos(2 pi d x_i) <= 0,
    # u >= 0, y0 free. In min standard form with slacks:
    #   variables [y0+, y0-, u (G), slacks (D+1)]
    rows = D + 1
    n_vars = 2 + G + rows
    A = np.zeros((rows, n_vars))
    b = np.zeros(rows)
    cvec = np.zeros(n_vars)
    cvec[0], cvec[1] = -1.0, 1.0  # minimize -y0
    A[:, 0] = 1.0
    A[:, 1] = -1.0
    A[0, 2 : 2 + G] = 1.0
    b[0] = 1.0
    for r in range(1, rows):
        A[r, 2 : 2 + G] = cos_mat[r - 1]
    A[:, 2 + G :] = np.eye(rows)
    res = simplex_solve(A, b, cvec)
    if res.status != "optimal":
        raise SimplexError("dual grid LP did not reach an optimum")
    # The original coefficient vector is minus the equality multipliers of
    # this min-form dual (max w.b recovers -b0, -b_d).
    coeffs = np.maximum(-res.multipliers, 0.0)
    total = coeffs.sum()
    if total > 0:
        coeffs = coeffs / total  # renormalize away simplex roundoff
    return -res.objective, coeffs


def gamma_plus_bracket(
    spectrum: list[int],
    grid_points: int,
    *,
    max_rounds: int = 8,
    certify_tol: float = 1e-6,
) -> GammaBracket:
    """Bracket the least feasible free coefficient for the given spectrum.

    The grid LP relaxes "T >= 0 everywhere" to the grid, so its optimum is a
    lower bound. The optimizer is then scan-certified; if its true minimum
    dips below -certify_tol the grid is doubled and the LP re-solved. The
    certified polynomial, lifted to exact feasibility, gives the upper bound.
    """
    spectrum = sorted(set(int(d) for d in spectrum))
    if not spectrum or spectrum[0] < 1:
        raise ValueError("spectrum must be distinct positive integers")
    if grid_points < 4 * spectrum[-1]:
        raise ValueError(f"grid_points {grid_points} < 4*max(spectrum); too coarse")
    G = grid_points
    lower = math.nan
    for round_no in range(1, max_rounds + 1):
        xs = np.arange(G) / G
        lower, coeffs = _solve_grid_lp(spectrum, xs)
        poly = SparseCosinePolynomial(
            b0=float(coeffs[0]),
            terms={d: float(c) for d, c in zip(spectrum, coeffs[1:]) if c > 0},
            meta="witness",
        )
        refined_min, _ = scan_min(poly, max(G, 4 * spectrum[-1]), refine_iters=60)
        if refined_min >= -certify_tol:
            shift = max(0.0, -refined_min)
            upper = (poly.b0 + shift) / (1.0 + shift)
            return GammaBracket(
                spectrum=spectrum, lower=float(lower), upper=float(upper),
                grid_points=G, poly=poly, rounds=round_no,
            )
        G *= 2
    raise SimplexError(
        f"grid-tightening did not certify after {max_rounds} rounds (grid {G // 2})"
    )


def forbidden_differences(f: OddIntPolynomial, N: int) -> list[int]:
    """Positive values of f that can occur as differences inside {1..N}."""
    return [v for v in values_up_to(f, N - 1) if v >= 1]


def _verify_diff_avoiding(points: list[int], forbidden: set[int]) -> bool:
    return all(
        abs(a - b) not in forbidden for i, a in enumerate(points) for b in points[:i]
    )


def max_diff_avoiding(
    f: OddIntPolynomial, N: int, *, cap: int = 64
) -> tuple[int, list[int]]:
    """Exact maximum subset of {1..N} whose pairwise differences avoid f's values.

    Branch and bound over a bitmask candidate set: greedy seed, then
    include/exclude on the lowest candidate with a popcount bound.
    """
    if N < 1:
        raise ValueError("N must be >= 1")
    if N > cap:
        raise ValueError(f"N={N} above the branch-and-bound cap {cap}")
    diffs = forbidden_differences(f, N)
    forbidden = set(diffs)
    conflict = [0] * (N + 1)
    for v in range(1, N + 1):
        mask = 0
        for d in diffs:
            if v + d <= N:
                mask |= 1 << (v + d)
            if v - d >= 1:
                mask |= 1 << (v - d)
        conflict[v] = mask

    # Greedy seed: take vertices in order when compatible.
    greedy: list[int] = []
    blocked = 0
    for v in range(1, N + 1):
        if not blocked & (1 << v):
            greedy.append(v)
            blocked |= conflict[v]
    best_size = len(greedy)
    best_set = list(greedy)

    full = ((1 << (N + 1)) - 1) & ~1

    def descend(cand: int, size: int, chosen: int) -> None:
        nonlocal best_size, best_set
        while cand:
            if size + cand.bit_count() <= best_size:
                return
            v = (cand & -cand).bit_length() - 1
            bit = 1 << v
            descend(cand & ~(bit | conflict[v]), size + 1, chosen | bit)
            cand &= ~bit
        if size > best_size:
            best_size = size
            best_set = [i for i in range(1, N + 1) if chosen & (1 << i)]

    descend(full, 0, 0)
    if not _verify_diff_avoiding(best_set, forbidden):
        raise AssertionError("branch-and-bound produced an invalid set")
    return best_size, sorted(best_set)


def max_diff_avoiding_exhaustive(f: OddIntPolynomial, N: int) -> int:
    """Reference oracle: enumerate every difference-avoiding subset (no bound)."""
    diffs = set(forbidden_differences(f, N))

    def count(v: int, chosen: list[int]) -> int:
        if v > N:
            return len(chosen)
        best = count(v + 1, chosen)
        if all(v - c not in diffs for c in chosen):
            chosen.append(v)
            best = max(best, count(v + 1, chosen))
            chosen.pop()
        return best

    return count(1, [])
