"""Convex resource allocation for fixed antenna positions.

Both protocols reduce, after substituting the binding energy constraint
t_wit * (p_k + p_c,k) = t0 * phi_k, to concave problems in the time slots.
TDMA needs an inner KKT system over the per-device slots (solved by a
safeguarded Newton search on the shared multiplier); the outer WPT slot t0
is a 1-D concave maximization handled by golden-section search.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

LN2 = float(np.log(2.0))
_GOLDEN = (np.sqrt(5.0) - 1.0) / 2.0
_EDGE = 1e-9          # open-interval margin for t0
_T0_TOL = 1e-9        # golden-section tolerance on t0
_NU_TOL = 1e-10       # multiplier tolerance in the inner KKT system


class InfeasibleAllocationError(RuntimeError):
    """No allocation satisfies the energy and nonnegativity constraints."""


class BracketingError(RuntimeError):
    """A 1-D root search failed to bracket its target."""


@dataclass(frozen=True)
class TdmaAllocation:
    t0: float
    t: np.ndarray          # (K,) information slots
    p: np.ndarray          # (K,) transmit powers
    value_bits: float


@dataclass(frozen=True)
class NomaAllocation:
    t0: float
    t1: float
    p: np.ndarray          # (K,) transmit powers
    value_bits: float


def golden_section_max(f, lo: float, hi: float, xtol: float):
    """Maximize a unimodal function on [lo, hi]; returns (x, f(x))."""
    a, b = lo, hi
    c = b - _GOLDEN * (b - a)
    d = a + _GOLDEN * (b - a)
    fc, fd = f(c), f(d)
    while b - a > xtol:
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - _GOLDEN * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + _GOLDEN * (b - a)
            fd = f(d)
    return (c, fc) if fc >= fd else (d, fd)


def _psi_root(A: np.ndarray, tau, w_start=None) -> np.ndarray:
    """Solve ln(w) + A/w - 1 = tau elementwise for w > max(A, 0).

    The left side is strictly increasing on the domain; a Newton iteration
    with bracket safeguarding converges from any start.
    """
    A = np.asarray(A, dtype=float)
    tau = np.broadcast_to(np.asarray(tau, dtype=float), A.shape)
    lo = np.maximum(A, 0.0)
    hi = np.full_like(lo, np.inf)
    if w_start is not None and np.shape(w_start) == A.shape:
        w = np.maximum(np.asarray(w_start, dtype=float), lo * (1 + 1e-12) + 1e-300)
    else:
        w = lo + np.exp(np.minimum(1.0 + tau, 700.0))
    ftol = 1e-14 * (1.0 + float(np.max(np.abs(tau))))
    with np.errstate(divide="ignore", invalid="ignore"):
        for _ in range(120):
            f = np.log(w) + A / w - 1.0 - tau
            if float(np.max(np.abs(f))) <= ftol:
                break
            hi = np.where(f > 0, np.minimum(hi, w), hi)
            lo = np.where(f < 0, np.maximum(lo, w), lo)
            fp = (w - A) / (w * w)
            w_new = w - f / fp
            bad = ~np.isfinite(w_new) | (w_new <= lo) | (w_new >= hi)
            if bad.any():
                fallback = np.where(np.isfinite(hi), 0.5 * (lo + hi),
                                    np.maximum(2.0 * w, lo + 1.0))
                w_new = np.where(bad, fallback, w_new)
            w = w_new
        else:
            raise BracketingError("slot stationarity root search did not converge")
    return w


def _tdma_slots(c: np.ndarray, A: np.ndarray, budget: float,
                warm_cache: dict | None = None):
    """Optimal split of ``budget`` across slots maximizing
    sum t_k log2(A_k + c_k / t_k), with c_k > 0 and A_k <= 1.

    Returns (t, value_bits). The KKT multiplier nu of the time budget is
    found by a safeguarded Newton search; per-device stationarity is solved
    by :func:`_psi_root` in the log-argument variable w = A + c/t.
    ``warm_cache`` carries the last root between calls with the same A.
    """
    c = np.asarray(c, dtype=float)
    A = np.asarray(A, dtype=float)
    cache = warm_cache if warm_cache is not None else {}

    def slots(tau, w_start=None):
        w = _psi_root(A, tau, w_start if w_start is not None else cache.get("w"))
        cache["w"] = w
        u = w - A
        return c / u, w, u

    # multiplier-zero case: budget not binding (possible only when all A < 1)
    if np.all(A < 1.0 - 1e-12):
        t, w, _ = slots(0.0)
        if t.sum() <= budget:
            value = float(np.sum(t * np.log2(w)))
            return t, value
    # bracket the multiplier: g(nu) = sum of slots is strictly decreasing
    nu_lo, nu_hi = 0.0, 1.0
    w_warm = None
    for _ in range(200):
        t, w_warm, _ = slots(nu_hi * LN2, w_warm)
        if t.sum() <= budget:
            break
        nu_lo, nu_hi = nu_hi, 2.0 * nu_hi
    else:
        raise BracketingError("failed to bracket the time-budget multiplier")
    nu = 0.5 * (nu_lo + nu_hi)
    for _ in range(200):
        t, w_warm, u = slots(nu * LN2, w_warm)
        g = t.sum()
        if abs(g - budget) <= 1e-13 * budget or nu_hi - nu_lo <= _NU_TOL * max(1.0, nu_hi):
            break
        if g > budget:
            nu_lo = nu
        else:
            nu_hi = nu
        # Newton step on g(nu) - budget, clipped into the bracket
        dg = float(np.sum(-c * LN2 * w_warm ** 2 / u ** 3))
        nu_new = nu - (g - budget) / dg if dg < 0 else np.nan
        if not (nu_lo < nu_new < nu_hi):
            nu_new = 0.5 * (nu_lo + nu_hi)
        nu = nu_new
    t = t * (budget / t.sum())
    value = float(np.sum(t * np.log2(A + c / t)))
    return t, value


def solve_tdma(gains, phi, circuit_power, noise: float,
               tol: float = _T0_TOL) -> TdmaAllocation:
    """Jointly optimal (t0, t_k, p_k) for the TDMA protocol.

    ``gains`` are aggregate channel gains |h_k|^2, ``phi`` the per-device
    harvested powers during the WPT slot, ``circuit_power`` the per-device
    circuit consumption.
    """
    gains = np.asarray(gains, dtype=float)
    phi = np.asarray(phi, dtype=float)
    pc = np.broadcast_to(np.asarray(circuit_power, dtype=float), gains.shape)
    k = gains.size
    if not np.any(phi > 0):
        raise InfeasibleAllocationError("no device can harvest energy")
    served = (phi > 0) & (gains > 0)
    if not served.any():
        return TdmaAllocation(t0=0.5, t=np.zeros(k), p=np.zeros(k), value_bits=0.0)
    base = phi[served] * gains[served] / noise   # c_k / t0
    A = 1.0 - pc[served] * gains[served] / noise
    cache: dict = {}

    def objective(t0: float) -> float:
        return _tdma_slots(t0 * base, A, 1.0 - t0, cache)[1]

    t0, value = golden_section_max(objective, _EDGE, 1.0 - _EDGE, tol)
    t_served, value = _tdma_slots(t0 * base, A, 1.0 - t0, cache)
    t = np.zeros(k)
    p = np.zeros(k)
    t[served] = t_served
    p[served] = np.maximum(t0 * phi[served] / t_served - pc[served], 0.0)
    return TdmaAllocation(t0=float(t0), t=t, p=p, value_bits=float(value))


def solve_noma(gains, phi, circuit_power, noise: float,
               tol: float = _T0_TOL) -> NomaAllocation:
    """Jointly optimal (t0, t1, p_k) for the NOMA protocol.

    Reduces to a 1-D concave maximization over t0 with t1 = 1 - t0 binding.
    """
    gains = np.asarray(gains, dtype=float)
    phi = np.asarray(phi, dtype=float)
    pc = np.broadcast_to(np.asarray(circuit_power, dtype=float), gains.shape)
    k = gains.size
    if not np.any(phi > 0):
        raise InfeasibleAllocationError("no device can harvest energy")
    served = (phi > 0) & (gains > 0)
    if not served.any():
        # flat objective; documented tie-break
        return NomaAllocation(t0=0.5, t1=0.5, p=np.zeros(k), value_bits=0.0)
    c_total = float(np.sum(phi[served] * gains[served])) / noise
    s_const = 1.0 - float(np.sum(pc[served] * gains[served])) / noise

    # lower bound on t0 from p_k >= 0 and from a positive log argument
    lb = 0.0
    with np.errstate(divide="ignore"):
        lb = max(lb, float(np.max(pc[served] / (phi[served] + pc[served]))))
    if s_const < 0.0:
        lb = max(lb, -s_const / (c_total - s_const))
    lb = max(lb, _EDGE)
    if lb >= 1.0 - _EDGE:
        raise InfeasibleAllocationError(
            "circuit power leaves no WIT slot with nonnegative transmit powers")

    def objective(t0: float) -> float:
        t1 = 1.0 - t0
        arg = s_const + t0 * c_total / t1
        return t1 * np.log2(arg) if arg > 0 else -np.inf

    t0, value = golden_section_max(objective, lb, 1.0 - _EDGE, tol)
    if not np.isfinite(value):
        raise InfeasibleAllocationError("no WPT split gives a positive rate argument")
    t1 = 1.0 - t0
    p = np.zeros(k)
    p[served] = np.maximum(t0 * phi[served] / t1 - pc[served], 0.0)
    return NomaAllocation(t0=float(t0), t1=float(t1), p=p, value_bits=float(value))


def tdma_equal_snr_closed_form(gains, phi, noise: float,
                               circuit_power=None,
                               tol: float = _T0_TOL) -> TdmaAllocation:
    """Zero-circuit-power TDMA optimum in closed form.

    With p_c,k = 0 the optimal slots equalize the per-device SNR, so
    t_k is proportional to phi_k * |h_k|^2 and the remaining 1-D problem
    over t0 coincides with the NOMA one.
    """
    if circuit_power is not None and np.any(np.asarray(circuit_power) != 0):
        raise ValueError("closed form is valid only for zero circuit power")
    gains = np.asarray(gains, dtype=float)
    phi = np.asarray(phi, dtype=float)
    k = gains.size
    if not np.any(phi > 0):
        raise InfeasibleAllocationError("no device can harvest energy")
    weights = phi * gains
    total = weights.sum()
    if total <= 0:
        return TdmaAllocation(t0=0.5, t=np.zeros(k), p=np.zeros(k), value_bits=0.0)
    c_total = total / noise

    def objective(t0: float) -> float:
        t1 = 1.0 - t0
        return t1 * np.log2(1.0 + t0 * c_total / t1)

    t0, value = golden_section_max(objective, _EDGE, 1.0 - _EDGE, tol)
    t = (1.0 - t0) * weights / total
    p = np.zeros(k)
    on = t > 0
    p[on] = t0 * phi[on] / t[on]
    return TdmaAllocation(t0=float(t0), t=t, p=p, value_bits=float(value))
