"""Choosing the integer order k per variable.

Raising a variable's order from k to k+1 pays log(A_{k+1}/A_k) in multiplier
and buys a smaller rate, so it wins exactly for thresholds above

    t* = Phi * sqrt(2 * (log A_{k+1} - log A_k)).

For a sum the orders couple through the shared exponent t^2 / (2 sum Phi_i^2/k_i),
so the per-variable rule is only a heuristic; the exact optimum comes from
enumerating {1..k_max}^n, and a continuous relaxation provides the cheap
near-optimal profile  k_j  proportional to  Phi_j / sqrt(2 log(1 + r_j)).
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .bounds import BoundedSupport, endpoint_ratio, multiplier_log, phi

# Hard ceiling on the number of assignments any lattice search may visit.
ENUMERATION_GUARD = 10 ** 7


class SizeGuardError(ValueError):
    """Enumeration would exceed the lattice-size guard; use the relaxation."""


class IterationError(RuntimeError):
    """Fixed-point iteration failed to settle; carries the last iterate."""

    def __init__(self, message: str, last_iterate):
        super().__init__(message)
        self.last_iterate = last_iterate


@dataclass(frozen=True)
class CrossoverTable:
    """Per-support thresholds t* above which order k+1 beats order k."""

    support: BoundedSupport
    thresholds: tuple[tuple[int, int, float], ...]  # (k, k+1, t_star)


@dataclass(frozen=True)
class KSelection:
    """An order assignment and the one-sided log bound it achieves at t."""

    ks: tuple[int, ...]
    log_bound: float


@dataclass(frozen=True)
class RelaxedSolution:
    """Fractional stationary profile plus its best integer lattice neighbor."""

    fractional: tuple[float, ...]
    rounded: KSelection


def crossover_threshold(support: BoundedSupport, k: int) -> float:
    """Threshold above which order k+1 gives a strictly tighter tail bound."""
    if k < 1:
        raise ValueError("k must be >= 1")
    gap = multiplier_log(support, k + 1) - multiplier_log(support, k)
    if gap < 0.0:
        # Cannot happen for the plain multiplier ladder; only the k=4 moment
        # refinement can dip below A_3, and then no finite crossover exists.
        raise RuntimeError(
            f"multiplier decreased from k={k} to {k + 1}; order {k + 1} dominates"
        )
    return phi(support) * math.sqrt(2.0 * gap)


def crossover_table(support: BoundedSupport, k_max: int = 8) -> CrossoverTable:
    rows = tuple(
        (k, k + 1, crossover_threshold(support, k)) for k in range(1, k_max + 1)
    )
    return CrossoverTable(support, rows)


def best_k_single(support: BoundedSupport, t: float, k_max: int = 8) -> int:
    """argmin over k of log A_k - t^2 k / (2 Phi^2), ties to the smaller k."""
    if not t > 0.0:
        raise ValueError("threshold t must be positive")
    if k_max < 1:
        raise ValueError("k_max must be >= 1")
    phi2 = phi(support) ** 2
    best_k, best_obj = 1, math.inf
    for k in range(1, k_max + 1):
        obj = multiplier_log(support, k) - t * t * k / (2.0 * phi2)
        if obj < best_obj:
            best_k, best_obj = k, obj
    return best_k


def _log_bound(variables, ks, t: float) -> float:
    """Sum-tail objective log A - t^2/(4R), identical to one_sided_tail's."""
    log_mult = 0.0
    rate = 0.0
    for support, k in zip(variables, ks):
        log_mult += multiplier_log(support, k)
        rate += phi(support) ** 2 / (2.0 * k)
    return log_mult - t * t / (4.0 * rate)


def optimize_exact(variables, t: float, k_max: int = 8) -> KSelection:
    """Exhaustive minimum of the one-sided log bound over {1..k_max}^n.

    The exponent couples the k_i, so this is the ground truth the heuristics
    are judged against.  Ties go to the lexicographically smaller vector.
    """
    if not t > 0.0:
        raise ValueError("threshold t must be positive")
    if k_max < 1:
        raise ValueError("k_max must be >= 1")
    n = len(variables)
    if k_max ** n > ENUMERATION_GUARD:
        raise SizeGuardError(
            f"k_max^n = {k_max}^{n} exceeds {ENUMERATION_GUARD}; "
            "use optimize_relaxed"
        )
    # Per-variable tables indexed by k-1; summation order matches _log_bound.
    mults = [[multiplier_log(v, k) for k in range(1, k_max + 1)] for v in variables]
    rates = [[phi(v) ** 2 / (2.0 * k) for k in range(1, k_max + 1)] for v in variables]
    best_ks: tuple[int, ...] | None = None
    best_obj = math.inf
    tt = t * t
    for ks in itertools.product(range(k_max), repeat=n):
        log_mult = 0.0
        rate = 0.0
        for i, k in enumerate(ks):
            log_mult += mults[i][k]
            rate += rates[i][k]
        obj = log_mult - tt / (4.0 * rate)
        if obj < best_obj:
            best_ks, best_obj = ks, obj
    return KSelection(tuple(k + 1 for k in best_ks), best_obj)


def optimize_relaxed(
    variables, t: float, tol: float = 1e-10, max_iter: int = 10 ** 4
) -> RelaxedSolution:
    """Continuous relaxation of the order assignment, then lattice rounding.

    Iterates the stationarity map k_j <- c_j * t / (sum_i Phi_i^2 / k_i) with
    c_j = Phi_j / sqrt(2 log(1+r_j)) from the all-ones start.  The map is
    1-homogeneous: after one pass every iterate lies on the ray through c and
    later passes rescale all coordinates by one shared factor, so convergence
    is judged on the normalized profile and the returned scale is the common
    factor t / sum Phi_i^2 of the unit start (for n = 1 this reproduces the
    closed-form t / (Phi sqrt(2 log(1+r)))).

    The integer assignment is the best of the 2^n floor/ceil neighbors of the
    fractional profile under the exact objective.
    """
    if not t > 0.0:
        raise ValueError("threshold t must be positive")
    n = len(variables)
    phis2 = np.array([phi(v) ** 2 for v in variables])
    c = np.sqrt(phis2) / np.sqrt(2.0 * np.log1p([endpoint_ratio(v) for v in variables]))

    k = np.ones(n)
    prev_delta = None
    converged = False
    for _ in range(max_iter):
        new = c * (t / float(np.sum(phis2 / k)))
        delta = new - k
        if prev_delta is not None and np.all(delta * prev_delta < 0.0):
            new = 0.5 * (k + new)  # damp a sign-alternating update
            delta = new - k
        scale = float(np.sum(new)) / float(np.sum(k))
        rel = float(np.max(np.abs(new / (k * scale) - 1.0)))
        k, prev_delta = new, delta
        if rel < tol:
            converged = True
            break
    if not converged:
        raise IterationError("relaxation profile did not settle", tuple(k))

    fractional = tuple(float(x) for x in c * (t / float(np.sum(phis2))))

    options = []
    for f in fractional:
        lo = max(1, math.floor(f))
        hi = max(1, math.ceil(f))
        options.append((lo,) if lo == hi else (lo, hi))
    count = 1
    for opt in options:
        count *= len(opt)
    if count > ENUMERATION_GUARD:
        raise SizeGuardError(f"{count} lattice neighbors exceed {ENUMERATION_GUARD}")
    best_ks: tuple[int, ...] | None = None
    best_obj = math.inf
    for ks in itertools.product(*options):
        obj = _log_bound(variables, ks, t)
        if obj < best_obj:
            best_ks, best_obj = ks, obj
    return RelaxedSolution(fractional, KSelection(best_ks, best_obj))


def best_region_partition(
    variables,
    t_min: float,
    t_max: float,
    grid: int,
    k_max: int = 8,
    boundary_tol: float = 1e-4,
) -> list[tuple[float, float, tuple[int, ...]]]:
    """Partition [t_min, t_max] into intervals sharing one optimal k-vector.

    Evaluates the exact optimum on a uniform grid, merges equal neighbors and
    refines each regime boundary by bisection to ``boundary_tol``.  Returns
    (t_start, t_end, ks) triples covering the whole range.
    """
    if not 0.0 < t_min < t_max:
        raise ValueError("need 0 < t_min < t_max")
    if grid < 2:
        raise ValueError("grid must have at least 2 points")
    ts = np.linspace(t_min, t_max, grid)
    assignments = [optimize_exact(variables, float(t), k_max).ks for t in ts]

    regions: list[tuple[float, float, tuple[int, ...]]] = []
    start = t_min
    for i in range(1, grid):
        if assignments[i] == assignments[i - 1]:
            continue
        lo, hi = float(ts[i - 1]), float(ts[i])
        left = assignments[i - 1]
        while hi - lo > boundary_tol:
            mid = 0.5 * (lo + hi)
            if optimize_exact(variables, mid, k_max).ks == left:
                lo = mid
            else:
                hi = mid
        boundary = 0.5 * (lo + hi)
        regions.append((start, boundary, left))
        start = boundary
    regions.append((start, t_max, assignments[-1]))
    return regions
