"""
Exact Riemann solver of the elastic-limit system.

The star pressure is the root of u_plus(P) - u_minus(P), a nondecreasing
function of P. The two star states share velocity and total pressure and keep
the invariants of their side's data.
"""
import logging
import math
from typing import List, NamedTuple

import numpy as np
from scipy.optimize import brentq

import physics
import wave_curves
from errors import NumericalError, VacuumError
from models import (
    CharField,
    CurveBranch,
    CurvePoint,
    CurveSide,
    DiscontinuityReport,
    Params,
    PrimitiveState,
    RiemannDiagnostics,
    RiemannSolution,
    Wave,
    WaveFamily,
    WaveKind,
)

logger = logging.getLogger(__name__)

BRACKET_MAX_DOUBLINGS = 200
ROOT_MAXITER = 500
RESIDUAL_TOLERANCE = 1e-11
# depth amplitude below which a shock counts as weak for entropy reporting
WEAK_SHOCK_AMPLITUDE = 0.1


def _vacuum_check(left: PrimitiveState, right: PrimitiveState, p: Params) -> None:
    if p.G != 0.0:
        return
    threshold = 2.0 * math.sqrt(p.g * left.h) + 2.0 * math.sqrt(p.g * right.h)
    if right.u - left.u >= threshold:
        raise VacuumError(
            "vacuum in G=0 limit: the data open a dry region the solver does not construct",
            {"du": right.u - left.u, "threshold": threshold},
        )


def _bracket(mismatch, P_l: float, P_r: float, lower: float, scale: float):
    """Expand [min, max] of the data pressures until mismatch changes sign"""
    lo, hi = min(P_l, P_r), max(P_l, P_r)
    f_lo, f_hi = mismatch(lo), mismatch(hi)

    width = max(hi - lo, 1e-2 * scale)
    steps = 0
    floored = False
    while f_lo > 0.0:
        steps += 1
        if steps > BRACKET_MAX_DOUBLINGS:
            if floored or math.isfinite(lower):
                raise VacuumError(
                    "no admissible star pressure above the attainable lower bound",
                    {"lower_bound": lower, "last_pressure": lo},
                )
            raise NumericalError("star pressure bracket not found", {"lo": lo, "f_lo": f_lo})
        candidate = lo - width
        if candidate <= lower:
            candidate = lower + 0.5 * (lo - lower)
        try:
            f_candidate = mismatch(candidate)
        except VacuumError:
            # depth floor crossed between candidate and lo: shorten the step
            floored = True
            width = 0.5 * (lo - candidate)
            continue
        hi, f_hi = lo, f_lo
        lo, f_lo = candidate, f_candidate
        if not floored:
            width *= 2.0

    width = max(hi - lo, 1e-2 * scale)
    steps = 0
    while f_hi < 0.0:
        steps += 1
        if steps > BRACKET_MAX_DOUBLINGS:
            raise NumericalError("star pressure bracket not found", {"hi": hi, "f_hi": f_hi})
        lo, f_lo = hi, f_hi
        hi = hi + width
        f_hi = mismatch(hi)
        width *= 2.0
    return lo, hi, f_lo, f_hi


def _minus_wave(left: PrimitiveState, star: PrimitiveState, point: CurvePoint, p: Params) -> Wave:
    if point.branch == CurveBranch.RAREFACTION:
        head = physics.eigenvalues(left, p)[0]
        tail = physics.eigenvalues(star, p)[0]
        return Wave(kind=WaveKind.FAN, family=CharField.MINUS, left_state=left, right_state=star,
                    speed_head=head, speed_tail=tail)
    if point.branch == CurveBranch.SHOCK:
        speed = wave_curves.shock_speed(left, star, p)
        return Wave(kind=WaveKind.SHOCK, family=CharField.MINUS, left_state=left, right_state=star,
                    speed_head=speed, speed_tail=speed)
    speed = physics.eigenvalues(left, p)[0]
    return Wave(kind=WaveKind.SHOCK, family=CharField.MINUS, left_state=left, right_state=star,
                speed_head=speed, speed_tail=speed, zero_amplitude=True)


def _plus_wave(star: PrimitiveState, right: PrimitiveState, point: CurvePoint, p: Params) -> Wave:
    if point.branch == CurveBranch.RAREFACTION:
        head = physics.eigenvalues(star, p)[3]
        tail = physics.eigenvalues(right, p)[3]
        return Wave(kind=WaveKind.FAN, family=CharField.PLUS, left_state=star, right_state=right,
                    speed_head=head, speed_tail=tail)
    if point.branch == CurveBranch.SHOCK:
        speed = wave_curves.shock_speed(star, right, p)
        return Wave(kind=WaveKind.SHOCK, family=CharField.PLUS, left_state=star, right_state=right,
                    speed_head=speed, speed_tail=speed)
    speed = physics.eigenvalues(right, p)[3]
    return Wave(kind=WaveKind.SHOCK, family=CharField.PLUS, left_state=star, right_state=right,
                speed_head=speed, speed_tail=speed, zero_amplitude=True)


def _trivial_solution(U: PrimitiveState, p: Params) -> RiemannSolution:
    lam = physics.eigenvalues(U, p)
    waves = (
        Wave(kind=WaveKind.SHOCK, family=CharField.MINUS, left_state=U, right_state=U,
             speed_head=lam[0], speed_tail=lam[0], zero_amplitude=True),
        Wave(kind=WaveKind.CONTACT, family=CharField.ZERO, left_state=U, right_state=U,
             speed_head=U.u, speed_tail=U.u, zero_amplitude=True),
        Wave(kind=WaveKind.SHOCK, family=CharField.PLUS, left_state=U, right_state=U,
             speed_head=lam[3], speed_tail=lam[3], zero_amplitude=True),
    )
    return RiemannSolution(
        params=p, left=U, right=U, star_left=U, star_right=U, waves=waves,
        p_star=physics.total_pressure(U, p), u_star=U.u,
    )


def solve(left: PrimitiveState, right: PrimitiveState, p: Params) -> RiemannSolution:
    if left == right:
        return _trivial_solution(left, p)
    _vacuum_check(left, right, p)

    minus = wave_curves.make_side(left, WaveFamily.MINUS, p)
    plus = wave_curves.make_side(right, WaveFamily.PLUS, p)

    def mismatch(P: float) -> float:
        return wave_curves.wave_curve_u(P, plus, p).u - wave_curves.wave_curve_u(P, minus, p).u

    P_l = wave_curves.p_of_h(left.h, minus.inv, p)
    P_r = wave_curves.p_of_h(right.h, plus.inv, p)
    lower = max(
        wave_curves.pressure_lower_bound(minus.inv, p),
        wave_curves.pressure_lower_bound(plus.inv, p),
    )
    scale = max(abs(P_l), abs(P_r), 0.5 * p.g * max(left.h, right.h) ** 2)
    lo, hi, f_lo, f_hi = _bracket(mismatch, P_l, P_r, lower, scale)

    if f_lo == 0.0:
        p_star = lo
    elif f_hi == 0.0:
        p_star = hi
    else:
        p_star, result = brentq(
            mismatch, lo, hi, xtol=1e-300, rtol=4.0 * np.finfo(float).eps,
            maxiter=ROOT_MAXITER, full_output=True, disp=False,
        )
        if not result.converged:
            raise NumericalError(
                f"star pressure iteration did not converge after {result.iterations} iterations",
                {"bracket": [lo, hi], "left": left.model_dump(), "right": right.model_dump()},
            )

    point_minus = wave_curves.wave_curve_u(p_star, minus, p)
    point_plus = wave_curves.wave_curve_u(p_star, plus, p)
    residual = point_plus.u - point_minus.u
    tolerance = RESIDUAL_TOLERANCE * (1.0 + abs(left.u) + abs(right.u))
    if abs(residual) > tolerance:
        logger.error(
            f"Star velocity mismatch {residual:.3e} exceeds {tolerance:.3e} at P*={p_star:.17g}"
        )
        raise NumericalError(
            "star velocities of the two wave curves do not agree",
            {"residual": residual, "tolerance": tolerance, "p_star": p_star,
             "left": left.model_dump(), "right": right.model_dump()},
        )

    u_star = 0.5 * (point_minus.u + point_plus.u)
    star_left = physics.state_from_invariants(point_minus.h, u_star, minus.inv, p)
    star_right = physics.state_from_invariants(point_plus.h, u_star, plus.inv, p)

    contact = Wave(
        kind=WaveKind.CONTACT, family=CharField.ZERO, left_state=star_left, right_state=star_right,
        speed_head=u_star, speed_tail=u_star, zero_amplitude=star_left == star_right,
    )
    waves = (
        _minus_wave(left, star_left, point_minus, p),
        contact,
        _plus_wave(star_right, right, point_plus, p),
    )
    logger.debug(
        f"Solved Riemann problem: P*={p_star:.6g}, u*={u_star:.6g}, "
        f"waves={[w.kind.value for w in waves]}"
    )
    return RiemannSolution(
        params=p, left=left, right=right, star_left=star_left, star_right=star_right,
        waves=waves, p_star=float(p_star), u_star=u_star,
    )


def _fan_state(xi: float, side: CurveSide, star: PrimitiveState, p: Params) -> PrimitiveState:
    h = wave_curves.rarefaction_h_at_xi(xi, side, p, h_end=star.h)
    u = wave_curves.rarefaction_velocity(h, side, p)
    return physics.state_from_invariants(h, u, side.inv, p)


def sample(sol: RiemannSolution, xi: float) -> PrimitiveState:
    """State on the ray x/t = xi; rays of discontinuities give the right limit"""
    p = sol.params
    minus, _, plus = sol.waves
    if xi < minus.speed_head:
        return sol.left
    if xi < minus.speed_tail:
        side = wave_curves.make_side(sol.left, WaveFamily.MINUS, p)
        return _fan_state(xi, side, sol.star_left, p)
    if xi < sol.u_star:
        return sol.star_left
    if xi < plus.speed_head:
        return sol.star_right
    if xi < plus.speed_tail:
        side = wave_curves.make_side(sol.right, WaveFamily.PLUS, p)
        return _fan_state(xi, side, sol.star_right, p)
    return sol.right


def interface_flux(sol: RiemannSolution) -> np.ndarray:
    """Godunov flux: the conservative flux at xi = 0"""
    return physics.conserved_flux(sample(sol, 0.0), sol.params)


# Batch solver used by the finite-volume scheme
class _Sides(NamedTuple):
    """Column arrays of the left and right data of a batch of interfaces"""

    h_l: np.ndarray
    u_l: np.ndarray
    X_l: np.ndarray
    Z_l: np.ndarray
    P_l: np.ndarray
    h_r: np.ndarray
    u_r: np.ndarray
    X_r: np.ndarray
    Z_r: np.ndarray
    P_r: np.ndarray

    def take(self, rows: np.ndarray) -> "_Sides":
        return _Sides(*(column[rows] for column in self))


def _curve_array(P, h_ref, u_ref, X, Zinv, P_ref, h_guess, family: WaveFamily, p: Params):
    """Velocity, dU/dP and depth along one family's curves at pressures P"""
    sign = -1.0 if family == WaveFamily.MINUS else 1.0
    h = wave_curves.h_of_p_array(P, X, Zinv, h_guess, p)
    c2 = wave_curves.dP_dh_array(h, X, Zinv, p)
    flat = np.abs(h - h_ref) <= wave_curves.ZERO_AMPLITUDE_BAND * h_ref
    shock = (h > h_ref) & ~flat
    fan = (h < h_ref) & ~flat
    with np.errstate(invalid="ignore", divide="ignore"):
        jump = np.maximum((1.0 / h_ref - 1.0 / h) * (P - P_ref), 0.0)
        root = np.sqrt(jump)
        # d(jump)/dP with dh/dP = 1 / c^2
        d_jump = (P - P_ref) / (h * h * c2) + (1.0 / h_ref - 1.0 / h)
        shock_slope = sign * d_jump / (2.0 * root)
    integral = wave_curves.celerity_integral_array(h_ref, np.where(fan, h, h_ref), X, Zinv, p)
    u = np.where(shock, u_ref + sign * root, u_ref + sign * integral)
    slope = np.where(shock & (root > 0.0), shock_slope, sign / (h * np.sqrt(c2)))
    return u, slope, np.where(flat, h_ref, h)


def _mismatch_array(P, sides: _Sides, guess_l, guess_r, p: Params):
    u_m, slope_m, h_m = _curve_array(
        P, sides.h_l, sides.u_l, sides.X_l, sides.Z_l, sides.P_l, guess_l, WaveFamily.MINUS, p
    )
    u_p, slope_p, h_p = _curve_array(
        P, sides.h_r, sides.u_r, sides.X_r, sides.Z_r, sides.P_r, guess_r, WaveFamily.PLUS, p
    )
    return u_p - u_m, slope_p - slope_m, u_m, u_p, h_m, h_p


def _bracket_array(sides: _Sides, lower: np.ndarray, scale: np.ndarray, p: Params):
    """Row-wise _bracket: widen [min, max] of the data pressures until the mismatch changes sign"""
    lo, hi = np.minimum(sides.P_l, sides.P_r), np.maximum(sides.P_l, sides.P_r)
    f_lo = _mismatch_array(lo, sides, sides.h_l, sides.h_r, p)[0]
    f_hi = _mismatch_array(hi, sides, sides.h_l, sides.h_r, p)[0]
    width = np.maximum(hi - lo, 1e-2 * scale)

    rows = np.flatnonzero(f_lo > 0.0)
    for _ in range(BRACKET_MAX_DOUBLINGS):
        if rows.size == 0:
            break
        candidate = lo[rows] - width[rows]
        with np.errstate(invalid="ignore"):
            halfway = lower[rows] + 0.5 * (lo[rows] - lower[rows])
        candidate = np.where(candidate <= lower[rows], halfway, candidate)
        part = sides.take(rows)
        f = _mismatch_array(candidate, part, part.h_l, part.h_r, p)[0]
        hi[rows], f_hi[rows] = lo[rows], f_lo[rows]
        lo[rows], f_lo[rows] = candidate, f
        width[rows] *= 2.0
        rows = rows[f > 0.0]
    if rows.size:
        row = int(rows[0])
        if math.isfinite(lower[row]):
            raise VacuumError(
                "no admissible star pressure above the attainable lower bound",
                {"row": row, "lower_bound": float(lower[row])},
            )
        raise NumericalError("star pressure bracket not found", {"row": row, "lo": float(lo[row])})

    width = np.maximum(hi - lo, 1e-2 * scale)
    rows = np.flatnonzero(f_hi < 0.0)
    for _ in range(BRACKET_MAX_DOUBLINGS):
        if rows.size == 0:
            break
        candidate = hi[rows] + width[rows]
        part = sides.take(rows)
        f = _mismatch_array(candidate, part, part.h_l, part.h_r, p)[0]
        lo[rows], f_lo[rows] = hi[rows], f_hi[rows]
        hi[rows], f_hi[rows] = candidate, f
        width[rows] *= 2.0
        rows = rows[f < 0.0]
    if rows.size:
        row = int(rows[0])
        raise NumericalError("star pressure bracket not found", {"row": row, "hi": float(hi[row])})
    return lo, hi


def _star_array(sides: _Sides, p: Params):
    """Star pressure by Newton iteration kept inside the bracket, with the curve data at it"""
    if p.G == 0.0:
        lower = np.zeros_like(sides.P_l)
    elif p.zeta == 0.5:
        lower = np.maximum(-p.G * sides.X_l, -p.G * sides.X_r)
    else:
        lower = np.full_like(sides.P_l, -math.inf)
    scale = np.maximum(
        np.maximum(np.abs(sides.P_l), np.abs(sides.P_r)),
        0.5 * p.g * np.maximum(sides.h_l, sides.h_r) ** 2,
    )
    lo, hi = _bracket_array(sides, lower, scale, p)

    # acoustic guess from the impedances h c of the data
    z_l = sides.h_l * np.sqrt(wave_curves.dP_dh_array(sides.h_l, sides.X_l, sides.Z_l, p))
    z_r = sides.h_r * np.sqrt(wave_curves.dP_dh_array(sides.h_r, sides.X_r, sides.Z_r, p))
    guess = (sides.u_l - sides.u_r + sides.P_l / z_l + sides.P_r / z_r) / (1.0 / z_l + 1.0 / z_r)
    P = np.where((guess > lo) & (guess < hi), guess, 0.5 * (lo + hi))

    closed = 0.01 * RESIDUAL_TOLERANCE * (1.0 + np.abs(sides.u_l) + np.abs(sides.u_r))
    spacing = 4.0 * np.finfo(float).eps * (np.abs(lo) + np.abs(hi) + scale)
    guess_l, guess_r = sides.h_l, sides.h_r
    for _ in range(ROOT_MAXITER):
        f, slope, u_m, u_p, h_m, h_p = _mismatch_array(P, sides, guess_l, guess_r, p)
        guess_l, guess_r = h_m, h_p
        lo = np.where(f < 0.0, P, lo)
        hi = np.where(f > 0.0, P, hi)
        step = f / slope
        small = (np.abs(f) <= closed) | (np.abs(step) <= spacing) | (hi - lo <= spacing)
        if np.all(small):
            return P, u_m, u_p, h_m, h_p
        trial = P - step
        P = np.where(small | ((trial > lo) & (trial < hi)), trial, 0.5 * (lo + hi))
    raise NumericalError(f"batch star pressure iteration did not converge after {ROOT_MAXITER} iterations")


def interface_flux_array(W_left: np.ndarray, W_right: np.ndarray, p: Params) -> np.ndarray:
    """Godunov fluxes on x/t = 0 for rows of primitive left and right states.

    Row-wise counterpart of interface_flux(solve(left, right, p)), with the same
    sampling rules; rays of discontinuities give the right limit.
    """
    if W_left.shape[0] == 0:
        return np.empty((0, 4))
    a = 2.0 * (1.0 - p.zeta)
    h_l, u_l = W_left[:, 0], W_left[:, 1]
    h_r, u_r = W_right[:, 0], W_right[:, 1]
    X_l, Z_l = W_left[:, 2] * h_l**a, W_left[:, 3] * h_l ** (-a)
    X_r, Z_r = W_right[:, 2] * h_r**a, W_right[:, 3] * h_r ** (-a)
    if p.G == 0.0:
        gap = u_r - u_l - 2.0 * (np.sqrt(p.g * h_l) + np.sqrt(p.g * h_r))
        if np.any(gap >= 0.0):
            row = int(np.argmax(gap >= 0.0))
            raise VacuumError(
                "vacuum in G=0 limit: the data open a dry region the solver does not construct",
                {"row": row, "du": float(u_r[row] - u_l[row])},
            )
    sides = _Sides(
        h_l, u_l, X_l, Z_l, wave_curves.p_of_h_array(h_l, X_l, Z_l, p),
        h_r, u_r, X_r, Z_r, wave_curves.p_of_h_array(h_r, X_r, Z_r, p),
    )
    _, u_m, u_p, h_m, h_p = _star_array(sides, p)
    residual = np.abs(u_p - u_m)
    tolerance = RESIDUAL_TOLERANCE * (1.0 + np.abs(u_l) + np.abs(u_r))
    if np.any(residual > tolerance):
        row = int(np.argmax(residual - tolerance))
        logger.error(f"Star velocity mismatch {residual[row]:.3e} exceeds {tolerance[row]:.3e} in row {row}")
        raise NumericalError(
            "star velocities of the two wave curves do not agree",
            {"row": row, "residual": float(residual[row]), "tolerance": float(tolerance[row])},
        )
    u_star = 0.5 * (u_m + u_p)

    c_l = np.sqrt(wave_curves.dP_dh_array(h_l, X_l, Z_l, p))
    c_r = np.sqrt(wave_curves.dP_dh_array(h_r, X_r, Z_r, p))
    c_m = np.sqrt(wave_curves.dP_dh_array(h_m, X_l, Z_l, p))
    c_p = np.sqrt(wave_curves.dP_dh_array(h_p, X_r, Z_r, p))
    with np.errstate(invalid="ignore", divide="ignore"):
        shock_m = (h_m * u_star - h_l * u_l) / (h_m - h_l)
        shock_p = (h_r * u_r - h_p * u_star) / (h_r - h_p)
    fan_m, fan_p = h_m < h_l, h_p < h_r
    head_m = u_l - c_l
    tail_m = u_star - c_m
    head_p = u_star + c_p
    tail_p = u_r + c_r
    # speed of a discontinuity, or of a zero-amplitude wave on its data eigenvalue
    speed_m = np.where(h_m > h_l, shock_m, head_m)
    speed_p = np.where(h_p > h_r, shock_p, tail_p)

    left_of_contact = u_star > 0.0
    take_left = left_of_contact & (speed_m > 0.0)
    take_right = ~left_of_contact & np.where(fan_p, tail_p <= 0.0, speed_p <= 0.0)
    in_fan_m = left_of_contact & fan_m & (head_m <= 0.0) & (tail_m > 0.0)
    in_fan_p = ~left_of_contact & fan_p & (head_p <= 0.0) & (tail_p > 0.0)

    h = np.where(left_of_contact, h_m, h_p)
    u = u_star.copy()
    X = np.where(left_of_contact, X_l, X_r)
    Z = np.where(left_of_contact, Z_l, Z_r)
    h = np.where(take_left, h_l, np.where(take_right, h_r, h))
    u = np.where(take_left, u_l, np.where(take_right, u_r, u))
    for rows, ref_h, ref_u, X_ref, Z_ref, end_h, family in (
        (np.flatnonzero(in_fan_m), h_l, u_l, X_l, Z_l, h_m, WaveFamily.MINUS),
        (np.flatnonzero(in_fan_p), h_r, u_r, X_r, Z_r, h_p, WaveFamily.PLUS),
    ):
        if rows.size:
            h[rows], u[rows] = wave_curves.rarefaction_depth_array(
                np.zeros(rows.size), ref_h[rows], ref_u[rows], X_ref[rows], Z_ref[rows], end_h[rows], family, p
            )

    hu = h * u
    pressure = wave_curves.p_of_h_array(h, X, Z, p)
    return np.column_stack([hu, hu * u + pressure, hu * X, hu * Z])


def rh_residual(left: PrimitiveState, right: PrimitiveState, speed: float, p: Params) -> np.ndarray:
    """speed (V_r - V_l) - (F_r - F_l), component by component"""
    V_l = physics.to_conserved(left, p).as_array()
    V_r = physics.to_conserved(right, p).as_array()
    F_l = physics.conserved_flux(left, p)
    F_r = physics.conserved_flux(right, p)
    return speed * (V_r - V_l) - (F_r - F_l)


def rh_scale(left: PrimitiveState, right: PrimitiveState, speed: float, p: Params) -> np.ndarray:
    V_l = physics.to_conserved(left, p).as_array()
    V_r = physics.to_conserved(right, p).as_array()
    F_l = physics.conserved_flux(left, p)
    F_r = physics.conserved_flux(right, p)
    return abs(speed) * (np.abs(V_l) + np.abs(V_r)) + np.abs(F_l) + np.abs(F_r)


def entropy_dissipation(left: PrimitiveState, right: PrimitiveState, speed: float, p: Params) -> float:
    """-speed [F] + [u (F + P)] across a discontinuity; admissible when <= 0"""
    jump_f = physics.free_energy(right, p) - physics.free_energy(left, p)
    jump_q = physics.entropy_flux(right, p) - physics.entropy_flux(left, p)
    return -speed * jump_f + jump_q


def entropy_scale(left: PrimitiveState, right: PrimitiveState, speed: float, p: Params) -> float:
    return (
        abs(speed) * (abs(physics.free_energy(left, p)) + abs(physics.free_energy(right, p)))
        + abs(physics.entropy_flux(left, p))
        + abs(physics.entropy_flux(right, p))
    )


def diagnostics(sol: RiemannSolution) -> RiemannDiagnostics:
    p = sol.params
    reports: List[DiscontinuityReport] = []
    for wave in sol.waves:
        if not wave.is_discontinuity:
            continue
        left, right, speed = wave.left_state, wave.right_state, wave.speed
        residual = rh_residual(left, right, speed, p)
        scale = rh_scale(left, right, speed, p)
        with np.errstate(invalid="ignore", divide="ignore"):
            relative = np.where(scale > 0.0, np.abs(residual) / scale, 0.0)
        amplitude = abs(right.h - left.h) / min(left.h, right.h)
        report = DiscontinuityReport(
            family=wave.family,
            kind=wave.kind,
            speed=speed,
            zero_amplitude=wave.zero_amplitude,
            rh_residual=[float(r) for r in residual],
            rh_relative=float(np.max(relative)),
            entropy_dissipation=entropy_dissipation(left, right, speed, p),
            entropy_scale=entropy_scale(left, right, speed, p),
            depth_amplitude=amplitude,
        )
        if wave.kind == WaveKind.SHOCK and amplitude > WEAK_SHOCK_AMPLITUDE:
            sign = "dissipative" if report.entropy_dissipation <= 0.0 else "PRODUCING"
            logger.info(
                f"Strong {wave.family.value} shock (amplitude {amplitude:.3g}): "
                f"entropy dissipation {report.entropy_dissipation:.6e} is {sign}"
            )
        reports.append(report)
    return RiemannDiagnostics(reports=reports)
