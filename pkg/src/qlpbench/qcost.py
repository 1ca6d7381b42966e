"""Closed-form lower bounds on expected quantum gate counts.

Every function here is a pure formula evaluation: given the per-iteration
quantities logged by the classical solver, it returns a lower bound on the
number of elementary gates an analogous quantum subroutine would need.
Parenthesized factors that go nonpositive are floored at zero and flagged
rather than raising, so batch runs survive degenerate inputs.
"""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

LAMBDA = 6.0 / 5.0

# flag names shared with the CSV schema
FLAG_CLAMPED = "negative-factor-clamped"
FLAG_ALPHA = "alpha-clamped"
FLAG_EMPTY = "empty-sum"


@dataclass(frozen=True)
class GateCosts:
    """Costs of 1-qubit, 2-qubit, and Toffoli gates (coarse default: all 1)."""

    c1: float = 1.0
    c2: float = 1.0
    ct: float = 1.0


@dataclass(frozen=True)
class QlsParams:
    """Inputs of the linear-solver bound: norms of the (normalized) basis
    matrix, sparsity d, condition-number lower bound, and target precision."""

    norm1: float
    norm_max: float
    d: int
    kappa: float
    eps: float

    def __post_init__(self):
        if self.kappa < 1:
            raise ValueError(f"kappa must be >= 1, got {self.kappa}")
        if not (0 < self.eps < 1):
            raise ValueError(f"eps must be in (0,1), got {self.eps}")
        if self.d < 1:
            raise ValueError(f"d must be >= 1, got {self.d}")
        if self.norm1 <= 0:
            raise ValueError(f"norm1 must be > 0, got {self.norm1}")


class Bound(NamedTuple):
    value: float
    flags: frozenset[str]


_OK = frozenset()


def _qsearch_schedule(x_size: int) -> tuple[int, list[int]]:
    """(k_max, [m_1..m_k_max]) for the bounded-guess search schedule."""
    k_max = math.ceil(math.log(x_size / (2.0 * math.sqrt(x_size - 1)), LAMBDA)) + 4
    k_max = max(k_max, 1)
    root = math.sqrt(x_size)
    return k_max, [int(math.floor(min(LAMBDA ** k, root))) for k in range(1, k_max + 1)]


def n_qsearch(x_size: int, t: int) -> Bound:
    """Expected number of Grover-operator applications to find one of ``t``
    marked items among ``x_size``, for the geometric guess schedule."""
    if x_size < 2:
        return Bound(0.0, frozenset({FLAG_EMPTY}))
    if not (0 <= t <= x_size):
        raise ValueError(f"t={t} outside [0, {x_size}]")
    _, ms = _qsearch_schedule(x_size)
    sin2th = t / x_size
    theta = math.asin(math.sqrt(sin2th))
    total = 0.0
    survive = 1.0  # probability no earlier round succeeded
    for m in ms:
        total += (m / 2.0) * survive
        survive *= 1.0 - _avg_success(m, theta)
    return Bound(total, _OK)


def _avg_success(m: int, theta: float) -> float:
    """Mean success probability of one round with j ~ U{0..m}."""
    s2 = math.sin(2.0 * theta)
    if abs(s2) < 1e-15:
        # exact average of sin^2((2j+1)theta): 0 at theta=0, 1 at theta=pi/2
        return 0.0 if theta < math.pi / 4 else 1.0
    return 0.5 - math.sin(4.0 * (m + 1) * theta) / (4.0 * (m + 1) * s2)


# per-(N, from_zero) cache of sum_t n_Q(N, t)/(t+1); iteration-invariant
_qmin_sum_cache: dict[tuple[int, bool], float] = {}
_cache_lock = threading.Lock()


def qmin_inner_sum(n_items: int, include_zero: bool = False) -> float:
    """sum over thresholds of n_Q(N, s)/(s+1); s from 1 (default) or 0
    (include_zero variant) up to N-1."""
    key = (n_items, include_zero)
    with _cache_lock:
        if key in _qmin_sum_cache:
            return _qmin_sum_cache[key]
    start = 0 if include_zero else 1
    total = sum(n_qsearch(n_items, s).value / (s + 1)
                for s in range(start, n_items))
    with _cache_lock:
        _qmin_sum_cache[key] = total
    return total


def qmin_expected_queries(n_items: int, eps: float,
                          include_zero: bool = False) -> Bound:
    """Expected oracle queries of quantum minimum finding with timeout,
    boosted to failure probability eps."""
    if n_items < 2:
        return Bound(0.0, frozenset({FLAG_EMPTY}))
    reps = math.ceil(math.log(1.0 / eps, 3.0)) if eps < 1 else 0
    if reps <= 0:
        return Bound(0.0, frozenset({FLAG_CLAMPED}))
    return Bound(3.0 * reps * qmin_inner_sum(n_items, include_zero), _OK)


def _clock_bits(eps: float, delta: float) -> int:
    return max(0, math.ceil(math.log2(1.0 / eps) + math.log2(1.0 + 1.0 / (2.0 * delta))))


def qpe_cost_lb(eps: float, delta: float, cost_u: float,
                costs: GateCosts = GateCosts()) -> float:
    """Phase estimation: n_c single-qubit gates plus 2^n_c - 1 uses of U."""
    nc = _clock_bits(eps, delta)
    return nc * costs.c1 + (2.0 ** nc - 1.0) * cost_u


def qae_cost_lb(eps: float, delta: float, cost_a: float,
                costs: GateCosts = GateCosts()) -> float:
    """Amplitude estimation, keeping only the Grover-operator term with
    C[Q] >= 2 C[A]."""
    nc = _clock_bits(eps, delta)
    return (2.0 ** (nc + 1) - 1.0) * cost_a


def ctrl_cost(n_controls: int, cost_u: float,
              costs: GateCosts = GateCosts()) -> float:
    if n_controls < 1:
        raise ValueError("need at least one control")
    return 2.0 * (n_controls - 1) * costs.ct + cost_u


def lcu_cost(delta_terms: int, cost_u: float,
             costs: GateCosts = GateCosts()) -> float:
    """Linear combination of unitaries: state preparation plus the
    multiplexed unitary."""
    if delta_terms < 1:
        raise ValueError("need at least one term")
    return 2.0 * (delta_terms - 1) * costs.c2 + cost_u


def _amplification_rounds(p: float) -> int:
    if not (0 < p <= 1):
        raise ValueError(f"p must be in (0,1], got {p}")
    theta = math.asin(math.sqrt(p))
    # tolerance keeps exact ratios (e.g. p=1/2 -> 1) from flooring down
    return int(math.floor(math.pi / (4.0 * theta) + 1e-9))


def qaa_cost(p: float, n_qubits: int, cost_chi: float, cost_a: float,
             costs: GateCosts = GateCosts()) -> float:
    m = _amplification_rounds(p)
    return (m * cost_chi + (2 * m + 1) * cost_a + 2 * m * costs.c1
            + m * costs.c2 + 2 * m * (n_qubits - 1) * costs.ct)


def oaa_cost(p: float, mu: int, cost_a: float,
             costs: GateCosts = GateCosts()) -> float:
    m = _amplification_rounds(p)
    return (4 * m * costs.c1 + 2 * m * costs.c2
            + (2 * mu - 1) * costs.ct + (2 * m + 1) * cost_a)


_W_SCAN_LIMIT = 10 ** 6


def segment_queries(eps_seg: float) -> int:
    """Smallest integer w with e^w / w^w <= eps_seg^2 / 2.

    log-space scan; the ratio is decreasing for w >= 3, so the first hit is
    the answer.
    """
    target = 2.0 * math.log(eps_seg) - math.log(2.0)
    for w in range(1, _W_SCAN_LIMIT + 1):
        if w * (1.0 - math.log(w)) <= target:
            return w
    raise ArithmeticError(f"no w <= {_W_SCAN_LIMIT} for eps_seg={eps_seg}")


def ham_sim_lb(norm1_h: float, norm_max_h: float, d: int, time_t: float,
               eps: float, costs: GateCosts = GateCosts()) -> Bound:
    """Sparse Hamiltonian simulation cost for e^{-iHt} at error eps."""
    if min(norm1_h, norm_max_h, time_t) <= 0 or not (0 < eps < 1) or d < 1:
        raise ValueError("ham_sim_lb inputs must be positive, eps in (0,1)")
    gamma = eps / (math.sqrt(2.0) * d ** 3 * time_t)
    eps_seg = eps / (90.0 * gamma * time_t * d * d * math.ceil(norm_max_h / gamma))
    w = segment_queries(eps_seg)
    flags = set()
    factor = norm1_h - d * d * gamma
    if factor <= 0:
        return Bound(0.0, frozenset({FLAG_CLAMPED}))
    log_arg = norm1_h / gamma - d * d
    qubit_factor = math.ceil(math.log2(log_arg)) - 1 if log_arg > 0 else 0
    if qubit_factor <= 0:
        return Bound(0.0, frozenset({FLAG_CLAMPED}))
    cost_q = 2.0 * qubit_factor * costs.ct
    return Bound(5.0 * time_t * factor * w * cost_q, frozenset(flags))


def _alpha_sum(kappa: float, dz: float, big_k: int) -> float:
    """2 sqrt(pi) * kappa/(kappa+1) * sum_{k=-K}^{K} |k| dz exp(-(k dz)^2/2).

    Terms vanish once k*dz is large; stop early at 40 standard widths.
    """
    k_hi = int(min(big_k, math.floor(40.0 / dz), 5e8))
    total = 0.0
    chunk = 10 ** 7
    for lo in range(1, k_hi + 1, chunk):
        ks = np.arange(lo, min(lo + chunk, k_hi + 1), dtype=np.float64)
        z = ks * dz
        total += float(np.sum(z * np.exp(-0.5 * z * z)))
    return 2.0 * math.sqrt(math.pi) * (kappa / (kappa + 1.0)) * 2.0 * total


def qls_lb(p: QlsParams, costs: GateCosts = GateCosts()) -> Bound:
    """Gate-count lower bound for the Fourier-series quantum linear solver.

    Natural logs enter the analysis-derived quantities (evolution time,
    grid spacing, truncation index); the qubit-count ceiling uses log base 2.
    See README for the log-base decision.
    """
    flags: set[str] = set()
    kappa, eps, d = p.kappa, p.eps, p.d
    log_term = math.log1p(8.0 * kappa / eps)
    t = 2.0 * math.sqrt(2.0) * kappa * log_term
    dz = (2.0 * math.pi / (kappa + 1.0)) / math.sqrt(log_term)
    big_k = math.floor(((kappa + 1.0) / math.pi) * log_term)
    alpha = _alpha_sum(kappa, dz, big_k) if big_k >= 1 else 0.0
    if alpha <= 1.0:
        alpha = 1.0 + 1e-12
        flags.add(FLAG_ALPHA)
    amp_factor = math.pi / (2.0 * math.asin(1.0 / alpha)) + 1.0

    gamma = eps / (math.sqrt(2.0) * d ** 3 * t)
    eps_seg = eps / (90.0 * gamma * t * d * d * math.ceil(p.norm_max / gamma))
    w = segment_queries(eps_seg)

    norm_factor = p.norm1 - d * d * gamma
    if norm_factor <= 0:
        return Bound(0.0, flags | {FLAG_CLAMPED})
    log_arg = p.norm1 / gamma - d * d
    qubit_factor = math.ceil(math.log2(log_arg)) - 1 if log_arg > 0 else 0
    if qubit_factor <= 0:
        return Bound(0.0, flags | {FLAG_CLAMPED})

    value = 10.0 * t * w * amp_factor * norm_factor * qubit_factor * costs.ct
    return Bound(value, frozenset(flags))


def _qls_with(p: QlsParams, eps: float, costs: GateCosts) -> Bound:
    return qls_lb(QlsParams(p.norm1, p.norm_max, p.d, p.kappa, eps), costs)


# --- core-subroutine bounds (building blocks of the per-iteration parts) ---

def redcost_lb(qls: float) -> float:
    return qls


def interfere_lb(cost_u: float, cost_v: float) -> float:
    return cost_u + cost_v


def signestnfn_lb(eps: float, cost_u: float) -> float:
    return max(0.0, 5.0 * math.sqrt(3.0) * math.pi / eps - 1.0) * cost_u


def signestnfp_lb(eps: float, cost_u: float) -> float:
    return max(0.0, 45.0 * math.sqrt(3.0) * math.pi / eps - 1.0) * cost_u


def canenternfn_lb(eps: float, p: QlsParams,
                   costs: GateCosts = GateCosts()) -> Bound:
    qls = _qls_with(p, 0.1 * eps / math.sqrt(2.0), costs)
    pref = max(0.0, 50.0 * math.sqrt(6.0) * math.pi / (11.0 * eps) - 1.0)
    return Bound(pref * qls.value, qls.flags)


def canenternfp_lb(eps: float, p: QlsParams,
                   costs: GateCosts = GateCosts()) -> Bound:
    qls = _qls_with(p, 0.1 * eps / math.sqrt(2.0), costs)
    pref = max(0.0, 450.0 * math.sqrt(6.0) * math.pi / (11.0 * eps) - 1.0)
    return Bound(pref * qls.value, qls.flags)


# --- per-iteration subroutine bounds ---

PIVOT_DANTZIG = "dantzig"
PIVOT_STEEPEST = "steepest"
PIVOT_RANDOM = "random"


@dataclass(frozen=True)
class IterationBound:
    is_optimal_lb: float
    find_column_lb: float
    is_unbounded_lb: float
    find_row_lb: float
    pivot_rule: str
    flags: frozenset[str] = field(default=frozenset())

    @property
    def total_lb(self) -> float:
        return (self.is_optimal_lb + self.find_column_lb
                + self.is_unbounded_lb + self.find_row_lb)


def is_optimal_lb(n: int, m: int, eps: float, p: QlsParams,
                  costs: GateCosts = GateCosts()) -> Bound:
    """Optimality check: amplitude estimation over all nonbasic columns."""
    if n - m < 1:
        return Bound(0.0, frozenset({FLAG_EMPTY}))
    inner = canenternfp_lb(eps, p, costs)
    pref = max(0.0, 24.0 * math.sqrt(n - m) - 1.0)
    return Bound(pref * inner.value, inner.flags)


def find_column_lb(rule: str, n: int, m: int, eps: float, p: QlsParams,
                   t_enter: int, c_max: float, u_norm2: float,
                   costs: GateCosts = GateCosts()) -> Bound:
    """Entering-column search under the given pivot rule."""
    size = n - m
    if size < 1:
        return Bound(0.0, frozenset({FLAG_EMPTY}))
    if rule == PIVOT_RANDOM:
        nq = n_qsearch(size, min(t_enter, size))
        inner = canenternfn_lb(eps, p, costs)
        return Bound(nq.value * inner.value, nq.flags | inner.flags)
    if rule not in (PIVOT_STEEPEST, PIVOT_DANTZIG):
        raise ValueError(f"unknown pivot rule {rule!r}")
    if c_max <= 0:
        return Bound(0.0, frozenset({FLAG_CLAMPED}))
    include_zero = rule == PIVOT_DANTZIG
    if size < 2 and not include_zero:
        return Bound(0.0, frozenset({FLAG_EMPTY}))
    ssum = qmin_inner_sum(size, include_zero)
    reps = math.ceil(math.log(1.0 / eps, 3.0)) if eps < 1 else 0
    pref = max(0.0, 40.0 * math.sqrt(3.0) * math.pi * c_max / eps - 1.0)
    if rule == PIVOT_STEEPEST:
        qls_eps = eps / (10.0 * c_max * math.sqrt(2.0))
    else:
        if u_norm2 <= 0:
            return Bound(0.0, frozenset({FLAG_CLAMPED}))
        qls_eps = eps / (10.0 * math.sqrt(2.0) * c_max * u_norm2)
    qls_eps = min(qls_eps, 1.0 - 1e-12)
    qls = _qls_with(p, qls_eps, costs)
    return Bound(3.0 * reps * pref * ssum * qls.value, qls.flags)


def is_unbounded_lb(m: int, delta: float, p: QlsParams, t_u: int,
                    costs: GateCosts = GateCosts()) -> Bound:
    """Unboundedness check: search for a positive basis-direction entry."""
    nq = n_qsearch(m, min(t_u, m)) if m >= 2 else Bound(0.0, frozenset({FLAG_EMPTY}))
    if nq.flags and nq.value == 0.0:
        return nq
    inner = _qls_with(p, delta / 10.0, costs)
    pref = max(0.0, 50.0 * math.sqrt(3.0) * math.pi / (18.0 * delta) - 1.0)
    return Bound(nq.value * pref * inner.value, nq.flags | inner.flags)


def find_row_lb(m: int, delta: float, p: QlsParams, u_norm2: float,
                costs: GateCosts = GateCosts()) -> Bound:
    """Ratio-test row selection: binary search over linear-solver oracles."""
    nq = n_qsearch(m, 0) if m >= 2 else Bound(0.0, frozenset({FLAG_EMPTY}))
    if nq.flags and nq.value == 0.0:
        return nq
    flags = set(nq.flags)
    pref = math.sqrt(3.0) * math.pi * u_norm2 / (2.0 * delta) - 1.0
    if pref <= 0:
        return Bound(0.0, frozenset(flags | {FLAG_CLAMPED}))
    inner = _qls_with(p, delta / 2.0, costs)
    return Bound(nq.value * pref * inner.value, frozenset(flags | inner.flags))


def simplex_iter_lb(rule: str, n: int, m: int, eps: float, delta: float,
                    p: QlsParams, t_enter: int, c_max: float, t_u: int,
                    u_norm2: float,
                    costs: GateCosts = GateCosts()) -> IterationBound:
    """Sum of the four per-iteration subroutine bounds."""
    opt = is_optimal_lb(n, m, eps, p, costs)
    col = find_column_lb(rule, n, m, eps, p, t_enter, c_max, u_norm2, costs)
    unb = is_unbounded_lb(m, delta, p, t_u, costs)
    row = find_row_lb(m, delta, p, u_norm2, costs)
    return IterationBound(
        is_optimal_lb=opt.value,
        find_column_lb=col.value,
        is_unbounded_lb=unb.value,
        find_row_lb=row.value,
        pivot_rule=rule,
        flags=opt.flags | col.flags | unb.flags | row.flags,
    )


def required_gate_time(classical_seconds: float, bound: IterationBound) -> float:
    """Gate time at which the quantum iteration breaks even; inf when the
    bound degenerated to zero."""
    if classical_seconds <= 0:
        raise ValueError("classical_seconds must be positive")
    total = bound.total_lb
    return math.inf if total == 0.0 else classical_seconds / total
