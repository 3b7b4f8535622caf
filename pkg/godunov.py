"""
First-order Godunov scheme with exact interface Riemann solutions.

Fields store conserved cell averages V = (h, hu, hX, hZinv) as (n, 4) arrays.
Finite relaxation times are handled by an exactly integrated split step.
"""
import logging
import math
from typing import Callable, List, Optional, Tuple

import numpy as np
from pydantic import ValidationError

import physics
import riemann
from errors import GSVError, InputError, SimulationAborted, StabilityError
from models import Boundary, Field, Grid, Params, PrimitiveState, SimConfig, Splitting

logger = logging.getLogger(__name__)

InitialCondition = Callable[[float], PrimitiveState]
StepCallback = Callable[[int, Field], None]
Snapshot = Tuple[float, Field]


def init(config: SimConfig, ic: InitialCondition) -> Field:
    """Midpoint samples of ic encoded as conserved cell averages"""
    rows = []
    for i, x in enumerate(config.grid.centers()):
        try:
            U = ic(float(x))
        except (ValidationError, GSVError) as e:
            raise InputError(f"initial condition is not admissible at x={x:.17g}: {e}", {"cell": i})
        rows.append(physics.to_conserved(U, config.params).as_array())
    return Field(conserved=np.array(rows), t=0.0)


def riemann_ic(left: PrimitiveState, right: PrimitiveState, x0: float = 0.0) -> InitialCondition:
    def ic(x: float) -> PrimitiveState:
        return left if x < x0 else right

    return ic


def smooth_bump_ic(
    h0: float, amplitude: float, width: float, x0: float = 0.0, sxx: float = 1.0, szz: float = 1.0
) -> InitialCondition:
    """Fluid at rest with a Gaussian hump of the free surface"""

    def ic(x: float) -> PrimitiveState:
        h = h0 + amplitude * math.exp(-(((x - x0) / width) ** 2))
        return PrimitiveState(h=h, u=0.0, sxx=sxx, szz=szz)

    return ic


def stable_dt(field: Field, config: SimConfig) -> float:
    speed = float(np.max(physics.max_wave_speed_array(field.conserved, config.params)))
    if speed == 0.0:
        return math.inf
    return config.cfl * config.grid.dx / speed


def with_ghost_cells(V: np.ndarray, boundary: Boundary) -> np.ndarray:
    """One ghost layer on each side"""
    if boundary == Boundary.PERIODIC:
        return np.vstack([V[-1:], V, V[:1]])
    left, right = V[:1].copy(), V[-1:].copy()
    if boundary == Boundary.REFLECTIVE:
        left[:, 1] *= -1.0
        right[:, 1] *= -1.0
    return np.vstack([left, V, right])


def interface_fluxes(V_ext: np.ndarray, params: Params) -> np.ndarray:
    """Exact Godunov fluxes at the n + 1 interfaces of a ghost-extended array"""
    fluxes = physics.flux_array(V_ext[:-1], params)
    differ = np.any(V_ext[:-1] != V_ext[1:], axis=1)
    if np.any(differ):
        W = physics.primitive_array(V_ext, params)
        fluxes[differ] = riemann.interface_flux_array(W[:-1][differ], W[1:][differ], params)
    return fluxes


def _check_cells(V: np.ndarray, params: Params, t: float) -> None:
    ok = physics.admissible_rows(V)
    if not np.all(ok):
        cell = int(np.argmin(ok))
        raise StabilityError(
            f"cell {cell} left the admissible set at t={t:.17g}",
            cell,
            {"t": t, "values": [float(v) for v in V[cell]]},
        )
    W = physics.primitive_array(V, params)
    bad = (W[:, 2] < 1e-300) | (W[:, 3] < 1e-300) | ~np.isfinite(W).all(axis=1)
    if np.any(bad):
        cell = int(np.argmax(bad))
        raise StabilityError(f"cell {cell} decodes to non-positive stresses at t={t:.17g}", cell)


def step(field: Field, config: SimConfig, dt: float) -> Field:
    """One conservative transport update"""
    V = field.conserved
    fluxes = interface_fluxes(with_ghost_cells(V, config.boundary), config.params)
    updated = V - (dt / config.grid.dx) * (fluxes[1:] - fluxes[:-1])
    t = field.t + dt
    _check_cells(updated, config.params, t)
    return Field(conserved=updated, t=t)


def relax(field: Field, params: Params, dt: float) -> Field:
    """Exact integration of the stress relaxation towards 1 at fixed h, u"""
    if not params.relaxing or dt == 0.0:
        return field
    W = physics.primitive_array(field.conserved, params)
    decay = math.exp(-dt / params.lam)
    W[:, 2] = 1.0 + (W[:, 2] - 1.0) * decay
    W[:, 3] = 1.0 + (W[:, 3] - 1.0) * decay
    return Field(conserved=physics.conserved_array(W, params), t=field.t)


def advance(field: Field, config: SimConfig, dt: float) -> Field:
    """Transport and relaxation over dt with the configured splitting"""
    if config.splitting == Splitting.STRANG:
        half = relax(field, config.params, 0.5 * dt)
        return relax(step(half, config, dt), config.params, 0.5 * dt)
    return relax(step(field, config, dt), config.params, dt)


def totals(field: Field, grid: Grid) -> np.ndarray:
    """Domain integrals of the four conserved components"""
    return field.conserved.sum(axis=0) * grid.dx


def run(config: SimConfig, ic: InitialCondition, on_step: Optional[StepCallback] = None) -> List[Snapshot]:
    field = init(config, ic)
    snapshots: List[Snapshot] = [(0.0, field)]
    if on_step is not None:
        on_step(0, field)

    n_step = 0
    for target in config.output_times():
        while field.t < target:
            try:
                dt = min(stable_dt(field, config), target - field.t)
                field = advance(field, config, dt)
            except GSVError as e:
                logger.error(f"Simulation aborted at t={field.t:.17g} after {n_step} steps: {e}")
                raise SimulationAborted(f"simulation aborted at t={field.t:.17g}: {e}", snapshots, e)
            if target - field.t <= 1e-14 * max(1.0, target):
                field = Field(conserved=field.conserved, t=target)
            n_step += 1
            if on_step is not None:
                on_step(n_step, field)
        snapshots.append((target, field))
        logger.info(f"Snapshot at t={target:.6g} after {n_step} steps")
    return snapshots
