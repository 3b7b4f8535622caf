"""
Pointwise algebra of the viscoelastic shallow-water system.

State variables are U = (h, u, sxx, szz). Everything here is a pure function of
immutable inputs; the *_array variants work on (n, 4) numpy arrays of
conserved variables and are what the finite-volume scheme uses.
"""
import logging
import math
from typing import Dict, Tuple

import numpy as np

from errors import InputError, NumericalError
from models import (
    MAX_MAGNITUDE,
    MIN_MAGNITUDE,
    ConservedState,
    Invariants,
    Params,
    PrimitiveState,
)

logger = logging.getLogger(__name__)


def _stress_exponent(p: Params) -> float:
    return 2.0 * (1.0 - p.zeta)


def normal_stress(U: PrimitiveState, p: Params) -> float:
    """N = G (szz - sxx)"""
    return p.G * (U.szz - U.sxx)


def total_pressure(U: PrimitiveState, p: Params) -> float:
    """P = g h^2 / 2 + h N"""
    return 0.5 * p.g * U.h * U.h + U.h * normal_stress(U, p)


def invariants(U: PrimitiveState, p: Params) -> Invariants:
    a = _stress_exponent(p)
    return Invariants(X=U.sxx * U.h**a, Zinv=U.szz * U.h ** (-a))


def stresses_at(h: float, inv: Invariants, p: Params) -> Tuple[float, float]:
    """Stress components carried by the invariants at depth h"""
    a = _stress_exponent(p)
    return inv.X * h ** (-a), inv.Zinv * h**a


def state_from_invariants(h: float, u: float, inv: Invariants, p: Params) -> PrimitiveState:
    if not (h > 0 and math.isfinite(h)):
        raise InputError(f"depth must be positive to rebuild a state, got {h!r}", {"h": h})
    sxx, szz = stresses_at(h, inv, p)
    return PrimitiveState(h=h, u=u, sxx=sxx, szz=szz)


def dP_dh(h: float, inv: Invariants, p: Params) -> float:
    """Derivative of the total pressure along a curve of fixed invariants"""
    sxx, szz = stresses_at(h, inv, p)
    value = p.g * h + p.G * (szz - sxx) + 2.0 * p.G * (1.0 - p.zeta) * (szz + sxx)
    if not value > 0:
        raise NumericalError(
            f"dP/dh = {value!r} is not positive at h={h!r}; parameters outside the hyperbolic regime",
            {"h": h, "X": inv.X, "Zinv": inv.Zinv, "zeta": p.zeta},
        )
    return value


def sound_speed(U: PrimitiveState, p: Params) -> float:
    """Square root of dP/dh at U"""
    return math.sqrt(dP_dh(U.h, invariants(U, p), p))


def eigenvalues(U: PrimitiveState, p: Params) -> Tuple[float, float, float, float]:
    c = sound_speed(U, p)
    return (U.u - c, U.u, U.u, U.u + c)


def char_fields(U: PrimitiveState, p: Params) -> Dict[str, np.ndarray]:
    """Right eigenvectors, unnormalized; keys r0_1, r0_2, r_minus, r_plus"""
    c = sound_speed(U, p)
    n = normal_stress(U, p)
    gh_n = p.g * U.h + n
    elastic = np.array([2.0 * (p.zeta - 1.0) * U.sxx, 2.0 * (1.0 - p.zeta) * U.szz])
    return {
        "r0_1": np.array([p.G * U.h, 0.0, gh_n, 0.0]),
        "r0_2": np.array([p.G * U.h, 0.0, 0.0, -gh_n]),
        "r_minus": np.array([U.h, -c, elastic[0], elastic[1]]),
        "r_plus": np.array([U.h, c, elastic[0], elastic[1]]),
    }


def genuine_nonlinearity(U: PrimitiveState, p: Params) -> Tuple[float, float]:
    """Derivative of lambda-/lambda+ along r-/r+; negative and positive respectively"""
    c = sound_speed(U, p)
    z = p.zeta
    numerator = (
        3.0 * p.g * U.h
        + 2.0 * p.G * (3.0 - 2.0 * z) * (2.0 - z) * U.szz
        + 2.0 * p.G * z * (1.0 - 2.0 * z) * U.sxx
    )
    value = numerator / (2.0 * c)
    return (-value, value)


def free_energy(U: PrimitiveState, p: Params) -> float:
    elastic = U.sxx + U.szz - math.log(U.sxx) - math.log(U.szz) - 2.0
    return 0.5 * U.h * (U.u * U.u + p.g * U.h + p.G * elastic)


def entropy_flux(U: PrimitiveState, p: Params) -> float:
    return U.u * (free_energy(U, p) + total_pressure(U, p))


def entropy_source(U: PrimitiveState, p: Params) -> float:
    """Free-energy production of the relaxation terms; nonpositive, zero in the elastic limit"""
    if not p.relaxing:
        return 0.0
    rate_xx, rate_zz = relaxation_rate(U, p)
    return 0.5 * U.h * p.G * (rate_xx * (1.0 - 1.0 / U.sxx) + rate_zz * (1.0 - 1.0 / U.szz))


def quasilinear_matrix(U: PrimitiveState, p: Params) -> np.ndarray:
    """A with dU/dt + A dU/dx = S for U = (h, u, sxx, szz)"""
    gh_n = p.g * U.h + normal_stress(U, p)
    return np.array(
        [
            [U.u, U.h, 0.0, 0.0],
            [gh_n / U.h, U.u, -p.G, p.G],
            [0.0, 2.0 * (p.zeta - 1.0) * U.sxx, U.u, 0.0],
            [0.0, 2.0 * (1.0 - p.zeta) * U.szz, 0.0, U.u],
        ]
    )


def is_strictly_hyperbolic(U: PrimitiveState, p: Params) -> bool:
    """True when lambda- < u < lambda+ (the zero eigenvalue stays double)"""
    try:
        lam = eigenvalues(U, p)
    except NumericalError:
        return False
    return lam[0] < lam[1] < lam[3]


def relaxation_rate(U: PrimitiveState, p: Params) -> Tuple[float, float]:
    if not p.relaxing:
        raise InputError("relaxation rate is undefined in the elastic limit (lambda = inf)")
    return ((1.0 - U.sxx) / p.lam, (1.0 - U.szz) / p.lam)


# Conservative form
def to_conserved(U: PrimitiveState, p: Params) -> ConservedState:
    inv = invariants(U, p)
    return ConservedState(m0=U.h, m1=U.h * U.u, m2=U.h * inv.X, m3=U.h * inv.Zinv)


def from_conserved(V: ConservedState, p: Params) -> PrimitiveState:
    h = V.m0
    inv = Invariants(X=V.m2 / h, Zinv=V.m3 / h)
    return state_from_invariants(h, V.m1 / h, inv, p)


def conserved_flux(U: PrimitiveState, p: Params) -> np.ndarray:
    inv = invariants(U, p)
    hu = U.h * U.u
    return np.array([hu, hu * U.u + total_pressure(U, p), hu * inv.X, hu * inv.Zinv])


def log_conserved(U: PrimitiveState, p: Params) -> Tuple[np.ndarray, np.ndarray]:
    """Logarithmic conservative variant (h, hu, h ln X, h ln Zinv) with its flux.

    Smooth solutions satisfy it alongside the main conservative form; it is
    kept as a diagnostic identity only.
    """
    inv = invariants(U, p)
    hu = U.h * U.u
    log_x, log_z = math.log(inv.X), math.log(inv.Zinv)
    values = np.array([U.h, hu, U.h * log_x, U.h * log_z])
    flux = np.array([hu, hu * U.u + total_pressure(U, p), hu * log_x, hu * log_z])
    return values, flux


# Array kernels used by the finite-volume scheme
def admissible_rows(V: np.ndarray) -> np.ndarray:
    """Boolean mask of rows of an (n, 4) conserved array lying in the admissible set"""
    with np.errstate(invalid="ignore", divide="ignore"):
        finite = np.all(np.isfinite(V), axis=1)
        positive = (
            (V[:, 0] >= MIN_MAGNITUDE)
            & (V[:, 2] >= MIN_MAGNITUDE)
            & (V[:, 3] >= MIN_MAGNITUDE)
            & (V[:, 0] <= MAX_MAGNITUDE)
        )
    return finite & positive


def primitive_array(V: np.ndarray, p: Params) -> np.ndarray:
    """(n, 4) conserved -> (n, 4) primitive (h, u, sxx, szz)"""
    h = V[:, 0]
    a = _stress_exponent(p)
    out = np.empty_like(V)
    out[:, 0] = h
    out[:, 1] = V[:, 1] / h
    out[:, 2] = (V[:, 2] / h) * h ** (-a)
    out[:, 3] = (V[:, 3] / h) * h**a
    return out


def conserved_array(W: np.ndarray, p: Params) -> np.ndarray:
    """(n, 4) primitive -> (n, 4) conserved"""
    h = W[:, 0]
    a = _stress_exponent(p)
    out = np.empty_like(W)
    out[:, 0] = h
    out[:, 1] = h * W[:, 1]
    out[:, 2] = h * W[:, 2] * h**a
    out[:, 3] = h * W[:, 3] * h ** (-a)
    return out


def flux_array(V: np.ndarray, p: Params) -> np.ndarray:
    W = primitive_array(V, p)
    h, u, sxx, szz = W.T
    hu = V[:, 1]
    pressure = 0.5 * p.g * h * h + h * p.G * (szz - sxx)
    return np.column_stack([hu, hu * u + pressure, u * V[:, 2], u * V[:, 3]])


def max_wave_speed_array(V: np.ndarray, p: Params) -> np.ndarray:
    """|u| + sqrt(dP/dh) per row"""
    W = primitive_array(V, p)
    h, u, sxx, szz = W.T
    dpdh = p.g * h + p.G * (szz - sxx) + 2.0 * p.G * (1.0 - p.zeta) * (szz + sxx)
    if np.any(dpdh <= 0):
        bad = int(np.argmax(dpdh <= 0))
        raise NumericalError(f"dP/dh is not positive in row {bad}", {"row": bad})
    return np.abs(u) + np.sqrt(dpdh)


def free_energy_array(V: np.ndarray, p: Params) -> np.ndarray:
    W = primitive_array(V, p)
    h, u, sxx, szz = W.T
    elastic = sxx + szz - np.log(sxx) - np.log(szz) - 2.0
    return 0.5 * h * (u * u + p.g * h + p.G * elastic)
