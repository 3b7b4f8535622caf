"""
Forward wave curves of the two genuinely nonlinear families at frozen invariants.

A curve is anchored at the left state for the minus family and at the right
state for the plus family. Both families take the shock branch when the star
depth exceeds the anchor depth and the rarefaction branch when it is smaller.
Rarefaction integrals are evaluated in s = ln h, where the velocity integrand
reduces to the local celerity sqrt(dP/dh).
"""
import logging
import math
from typing import Optional, Tuple

import numpy as np
from scipy.integrate import quad
from scipy.optimize import brentq

from errors import DomainError, NumericalError, VacuumError
import physics
from models import (
    MAX_MAGNITUDE,
    MIN_MAGNITUDE,
    CurveBranch,
    CurvePoint,
    CurveSide,
    Invariants,
    Params,
    PrimitiveState,
    WaveFamily,
)

logger = logging.getLogger(__name__)

VACUUM_FLOOR = 1e-12
ZERO_AMPLITUDE_BAND = 1e-13
QUAD_EPSREL = 1e-10
QUAD_EPSABS = 1e-14
QUAD_LIMIT = 200
ROOT_MAXITER = 200
ROOT_RTOL = 4.0 * np.finfo(float).eps

# batch kernels: composite 8-point Gauss-Legendre panels in ln h, safeguarded Newton
GAUSS_NODES, GAUSS_WEIGHTS = np.polynomial.legendre.leggauss(8)
PANEL_WIDTH = 0.25
NEWTON_MAXITER = 100
NEWTON_RTOL = 1e-14


def make_side(U: PrimitiveState, family: WaveFamily, p: Params) -> CurveSide:
    return CurveSide(ref_state=U, inv=physics.invariants(U, p), family=family)


def p_of_h(h: float, inv: Invariants, p: Params) -> float:
    """Total pressure along the curve of fixed invariants"""
    return p_of_h_array(h, inv.X, inv.Zinv, p)


def pressure_lower_bound(inv: Invariants, p: Params) -> float:
    """Infimum of p_of_h over h > 0"""
    if p.G == 0.0:
        return 0.0
    if p.zeta == 0.5:
        return -p.G * inv.X
    return -math.inf


def h_of_p(P: float, inv: Invariants, p: Params, h_guess: float = 1.0) -> float:
    """Invert p_of_h by geometric bracketing from h_guess and Brent's method"""
    lower = pressure_lower_bound(inv, p)
    if not P > lower:
        raise DomainError(
            f"pressure {P!r} is not above the attainable lower bound {lower!r}",
            {"P": P, "lower_bound": lower, "X": inv.X, "Zinv": inv.Zinv},
        )

    def residual(h: float) -> float:
        return p_of_h(h, inv, p) - P

    lo = hi = h_guess
    f_lo = f_hi = residual(h_guess)
    if f_hi == 0.0:
        return h_guess
    if f_hi < 0.0:
        while f_hi < 0.0:
            lo, f_lo = hi, f_hi
            hi *= 2.0
            if hi > MAX_MAGNITUDE:
                raise NumericalError(f"no depth bracket found for pressure {P!r}", {"P": P})
            f_hi = residual(hi)
    else:
        while f_lo > 0.0:
            hi, f_hi = lo, f_lo
            lo *= 0.5
            if lo < MIN_MAGNITUDE:
                raise VacuumError(
                    f"pressure {P!r} is only reached below the smallest representable depth",
                    {"P": P, "lower_bound": lower},
                )
            f_lo = residual(lo)
    if f_lo == 0.0:
        return lo
    if f_hi == 0.0:
        return hi

    h, result = brentq(
        residual, lo, hi, xtol=MIN_MAGNITUDE, rtol=ROOT_RTOL,
        maxiter=ROOT_MAXITER, full_output=True, disp=False,
    )
    if not result.converged:
        raise NumericalError(
            f"pressure inversion did not converge after {result.iterations} iterations",
            {"P": P, "bracket": [lo, hi], "flag": result.flag},
        )
    return float(h)


def _check_branch(h: float, side: CurveSide, shock: bool) -> None:
    h_ref = side.ref_state.h
    if shock and h < h_ref * (1.0 - ZERO_AMPLITUDE_BAND):
        raise DomainError(
            f"shock branch of the {side.family.value} family needs h >= {h_ref!r}, got {h!r}",
            {"h": h, "h_ref": h_ref},
        )
    if not shock and h > h_ref * (1.0 + ZERO_AMPLITUDE_BAND):
        raise DomainError(
            f"rarefaction branch of the {side.family.value} family needs h <= {h_ref!r}, got {h!r}",
            {"h": h, "h_ref": h_ref},
        )


def _sign(side: CurveSide) -> float:
    return -1.0 if side.family == WaveFamily.MINUS else 1.0


def hugoniot_velocity(h: float, side: CurveSide, p: Params) -> float:
    _check_branch(h, side, shock=True)
    ref = side.ref_state
    jump = (1.0 / ref.h - 1.0 / h) * (p_of_h(h, side.inv, p) - p_of_h(ref.h, side.inv, p))
    return ref.u + _sign(side) * math.sqrt(max(jump, 0.0))


def shock_speed(left: PrimitiveState, right: PrimitiveState, p: Params) -> float:
    """Speed from the mass jump condition"""
    if right.h == left.h:
        raise DomainError(
            "equal depths on both sides do not define a shock",
            {"h_left": left.h, "h_right": right.h},
        )
    return (right.h * right.u - left.h * left.u) / (right.h - left.h)


def _celerity(h: float, inv: Invariants, p: Params) -> float:
    return math.sqrt(physics.dP_dh(h, inv, p))


def _fan_slope_numerator(h: float, inv: Invariants, p: Params) -> float:
    return fan_slope_numerator_array(h, inv.X, inv.Zinv, p)


def _check_floor(h: float, side: CurveSide, floor: float) -> None:
    h_ref = side.ref_state.h
    if h < floor * h_ref:
        raise VacuumError(
            f"depth {h!r} is below the vacuum floor {floor * h_ref!r} of the rarefaction curve",
            {"h": h, "h_ref": h_ref, "floor": floor},
        )


def _integrate_log(func, h_from: float, h_to: float) -> float:
    value, abserr = quad(
        func, math.log(h_from), math.log(h_to),
        epsrel=QUAD_EPSREL, epsabs=QUAD_EPSABS, limit=QUAD_LIMIT,
    )
    if abserr > max(QUAD_EPSABS, 1e-8 * abs(value)):
        logger.warning(f"Rarefaction quadrature error estimate {abserr:.3e} for integral {value:.6e}")
    return value


def rarefaction_velocity(h: float, side: CurveSide, p: Params, floor: float = VACUUM_FLOOR) -> float:
    _check_branch(h, side, shock=False)
    _check_floor(h, side, floor)
    ref = side.ref_state
    if h == ref.h:
        return ref.u
    integral = _integrate_log(lambda s: _celerity(math.exp(s), side.inv, p), ref.h, h)
    return ref.u + _sign(side) * integral


def rarefaction_xi(h: float, side: CurveSide, p: Params, floor: float = VACUUM_FLOOR) -> float:
    """Characteristic speed of the fan at depth h"""
    _check_branch(h, side, shock=False)
    _check_floor(h, side, floor)
    ref = side.ref_state
    head = ref.u + _sign(side) * _celerity(ref.h, side.inv, p)
    if h == ref.h:
        return head

    def integrand(s: float) -> float:
        depth = math.exp(s)
        return _fan_slope_numerator(depth, side.inv, p) / (2.0 * _celerity(depth, side.inv, p))

    return head + _sign(side) * _integrate_log(integrand, ref.h, h)


def rarefaction_h_at_xi(
    xi: float,
    side: CurveSide,
    p: Params,
    h_end: Optional[float] = None,
    floor: float = VACUUM_FLOOR,
) -> float:
    """Depth inside the fan at self-similar coordinate xi.

    h_end is the far depth of the fan (the star depth) when known; without it
    the bracket is searched down to the vacuum floor.
    """
    ref = side.ref_state
    sign = _sign(side)
    xi_ref = rarefaction_xi(ref.h, side, p)
    # distance from the anchor ray, positive inside the fan for both families
    offset = -sign * (xi - xi_ref)
    if abs(offset) <= 1e-14 * (1.0 + abs(xi_ref)):
        return ref.h
    if offset < 0.0:
        raise DomainError(
            f"xi={xi!r} lies outside the {side.family.value} fan anchored at speed {xi_ref!r}",
            {"xi": xi, "anchor_speed": xi_ref},
        )

    def residual(h: float) -> float:
        return -sign * (rarefaction_xi(h, side, p, floor) - xi)

    hi = ref.h
    if h_end is not None:
        lo = h_end
        f_lo = residual(lo)
        if f_lo < 0.0:
            # the tail speed may come from a direct eigenvalue evaluation
            if abs(f_lo) <= 1e-8 * (1.0 + abs(xi)):
                return lo
            raise DomainError(
                f"xi={xi!r} lies beyond the tail of the {side.family.value} fan",
                {"xi": xi, "h_end": h_end},
            )
    else:
        lo = ref.h
        f_lo = residual(lo)
        while f_lo < 0.0:
            lo *= 0.5
            f_lo = residual(lo)
    if f_lo == 0.0:
        return lo

    # residual is negative at the anchor and nonnegative at lo
    h, result = brentq(
        residual, lo, hi, xtol=MIN_MAGNITUDE, rtol=ROOT_RTOL,
        maxiter=ROOT_MAXITER, full_output=True, disp=False,
    )
    if not result.converged:
        raise NumericalError(
            f"fan inversion did not converge at xi={xi!r}",
            {"xi": xi, "bracket": [lo, hi], "flag": result.flag},
        )
    return float(h)


def wave_curve_u(P: float, side: CurveSide, p: Params, floor: float = VACUUM_FLOOR) -> CurvePoint:
    """Velocity and depth reached along the side's curve at total pressure P"""
    ref = side.ref_state
    h = h_of_p(P, side.inv, p, h_guess=ref.h)
    if abs(h - ref.h) <= ZERO_AMPLITUDE_BAND * ref.h:
        return CurvePoint(u=ref.u, h=ref.h, branch=CurveBranch.ZERO_AMPLITUDE)
    if h > ref.h:
        return CurvePoint(u=hugoniot_velocity(h, side, p), h=h, branch=CurveBranch.SHOCK)
    return CurvePoint(u=rarefaction_velocity(h, side, p, floor), h=h, branch=CurveBranch.RAREFACTION)


# Array kernels; X, Zinv and the reference data are per-row numpy arrays
def p_of_h_array(h, X, Zinv, p: Params):
    a = 2.0 * (1.0 - p.zeta)
    return 0.5 * p.g * h * h + p.G * Zinv * h ** (1.0 + a) - p.G * X * h ** (1.0 - a)


def dP_dh_array(h, X, Zinv, p: Params):
    a = 2.0 * (1.0 - p.zeta)
    sxx, szz = X * h ** (-a), Zinv * h**a
    return p.g * h + p.G * (szz - sxx) + p.G * a * (szz + sxx)


def fan_slope_numerator_array(h, X, Zinv, p: Params):
    """(2 dP/dh + h d2P/dh2) at fixed invariants"""
    z = p.zeta
    a = 2.0 * (1.0 - z)
    return (
        3.0 * p.g * h
        + 2.0 * p.G * (3.0 - 2.0 * z) * (2.0 - z) * Zinv * h**a
        + 2.0 * p.G * z * (1.0 - 2.0 * z) * X * h ** (-a)
    )


def h_of_p_array(
    P: np.ndarray, X: np.ndarray, Zinv: np.ndarray, h_guess: np.ndarray, p: Params
) -> np.ndarray:
    """Row-wise h_of_p: geometric bracketing from h_guess, then Newton kept inside the bracket"""
    lo = np.array(h_guess, dtype=float)
    hi = lo.copy()
    f_lo = p_of_h_array(lo, X, Zinv, p) - P
    f_hi = f_lo.copy()
    while np.any(f_hi < 0.0) or np.any(f_lo > 0.0):
        up, down = f_hi < 0.0, f_lo > 0.0
        lo, hi = (
            np.where(up, hi, np.where(down, 0.5 * lo, lo)),
            np.where(up, 2.0 * hi, np.where(down, lo, hi)),
        )
        if np.any(lo < MIN_MAGNITUDE):
            row = int(np.argmax(lo < MIN_MAGNITUDE))
            raise VacuumError(
                f"pressure {P[row]!r} is only reached below the smallest representable depth",
                {"row": row, "P": float(P[row])},
            )
        if np.any(hi > MAX_MAGNITUDE):
            row = int(np.argmax(hi > MAX_MAGNITUDE))
            raise NumericalError(f"no depth bracket found for pressure {P[row]!r}", {"row": row})
        f_lo = p_of_h_array(lo, X, Zinv, p) - P
        f_hi = p_of_h_array(hi, X, Zinv, p) - P

    h = np.where(lo == hi, lo, 0.5 * (lo + hi))
    for _ in range(NEWTON_MAXITER):
        f = p_of_h_array(h, X, Zinv, p) - P
        lo = np.where(f < 0.0, h, lo)
        hi = np.where(f > 0.0, h, hi)
        step = f / dP_dh_array(h, X, Zinv, p)
        small = (np.abs(step) <= NEWTON_RTOL * h) | (hi - lo <= NEWTON_RTOL * h)
        trial = h - step
        h = np.where(small | ((trial > lo) & (trial < hi)), trial, 0.5 * (lo + hi))
        if np.all(small):
            return h
    raise NumericalError(f"batch pressure inversion did not converge after {NEWTON_MAXITER} iterations")


def celerity_integral_array(
    h_from: np.ndarray, h_to: np.ndarray, X: np.ndarray, Zinv: np.ndarray, p: Params
) -> np.ndarray:
    """Integral of sqrt(dP/dh) over ln h from h_from to h_to, row by row"""
    s0 = np.log(h_from)
    width = np.log(h_to) - s0
    out = np.zeros_like(width)
    counts = np.maximum(1, np.ceil(np.abs(width) / PANEL_WIDTH)).astype(int)
    # rows sharing a panel count share one node layout
    for n in np.unique(counts):
        rows = counts == n
        frac = ((np.arange(n)[:, None] + 0.5 * (GAUSS_NODES + 1.0)) / n).ravel()
        weights = np.tile(GAUSS_WEIGHTS, n) / (2.0 * n)
        s = s0[rows, None] + width[rows, None] * frac
        c = np.sqrt(dP_dh_array(np.exp(s), X[rows, None], Zinv[rows, None], p))
        out[rows] = width[rows] * (c @ weights)
    return out


def rarefaction_depth_array(
    xi: np.ndarray,
    h_ref: np.ndarray,
    u_ref: np.ndarray,
    X: np.ndarray,
    Zinv: np.ndarray,
    h_end: np.ndarray,
    family: WaveFamily,
    p: Params,
) -> Tuple[np.ndarray, np.ndarray]:
    """Depth and velocity where a fan from h_ref to h_end reaches characteristic speed xi.

    xi must lie between the speeds at the two ends of the fan; a target within
    rounding of an end returns that end.
    """
    sign = -1.0 if family == WaveFamily.MINUS else 1.0
    s_ref, s_end = np.log(h_ref), np.log(h_end)
    # xi(s) - xi is nonpositive at `below` and positive at `above`
    below, above = (s_ref, s_end) if sign < 0 else (s_end, s_ref)
    s = 0.5 * (below + above)
    for _ in range(NEWTON_MAXITER):
        h = np.exp(s)
        c = np.sqrt(dP_dh_array(h, X, Zinv, p))
        u = u_ref + sign * celerity_integral_array(h_ref, h, X, Zinv, p)
        g = u + sign * c - xi
        below = np.where(g <= 0.0, s, below)
        above = np.where(g > 0.0, s, above)
        step = g / (sign * fan_slope_numerator_array(h, X, Zinv, p) / (2.0 * c))
        scale = NEWTON_RTOL * np.maximum(1.0, np.abs(s))
        small = (np.abs(step) <= scale) | (np.abs(above - below) <= scale)
        trial = s - step
        inside = (trial > np.minimum(below, above)) & (trial < np.maximum(below, above))
        if np.all(small):
            return h, u
        s = np.where(inside, trial, 0.5 * (below + above))
    raise NumericalError(f"batch fan inversion did not converge after {NEWTON_MAXITER} iterations")
