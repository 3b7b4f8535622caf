"""CSV writers: one header line, fixed column order, 17 significant digits."""
import logging
from pathlib import Path
from typing import Dict, List, Sequence

import numpy as np
import pandas as pd

import physics
import riemann
from models import Field, Grid, Params, PrimitiveState, RiemannDiagnostics, RiemannSolution, ValidationResult

logger = logging.getLogger(__name__)

FLOAT_FORMAT = "%.17g"


def write_csv(df: pd.DataFrame, path: Path) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    df.to_csv(path, index=False, float_format=FLOAT_FORMAT, lineterminator="\n", encoding="utf-8")
    logger.info(f"Wrote {len(df)} rows to {path}")
    return path


def eigen_frame(U: PrimitiveState, p: Params) -> pd.DataFrame:
    lam = physics.eigenvalues(U, p)
    fields = physics.char_fields(U, p)
    minus_gn, plus_gn = physics.genuine_nonlinearity(U, p)
    rows = []
    for key, speed, gn in (
        ("r_minus", lam[0], minus_gn),
        ("r0_1", lam[1], 0.0),
        ("r0_2", lam[2], 0.0),
        ("r_plus", lam[3], plus_gn),
    ):
        r = fields[key]
        rows.append({"field": key, "eigenvalue": speed, "r_h": r[0], "r_u": r[1], "r_sxx": r[2],
                     "r_szz": r[3], "genuine_nonlinearity": gn})
    return pd.DataFrame(rows)


def states_frame(sol: RiemannSolution) -> pd.DataFrame:
    p = sol.params
    rows = []
    for name, U in (("left", sol.left), ("star_left", sol.star_left),
                    ("star_right", sol.star_right), ("right", sol.right)):
        inv = physics.invariants(U, p)
        rows.append({"state": name, "h": U.h, "u": U.u, "sxx": U.sxx, "szz": U.szz,
                     "P": physics.total_pressure(U, p), "X": inv.X, "Zinv": inv.Zinv})
    df = pd.DataFrame(rows)
    df["P_star"] = sol.p_star
    df["u_star"] = sol.u_star
    return df


def waves_frame(sol: RiemannSolution, diag: RiemannDiagnostics) -> pd.DataFrame:
    by_family: Dict[str, Dict] = {r.family.value: r.model_dump() for r in diag.reports}
    rows = []
    for wave in sol.waves:
        report = by_family.get(wave.family.value, {})
        residual = report.get("rh_residual", [np.nan] * 4)
        rows.append({
            "family": wave.family.value,
            "kind": wave.kind.value,
            "zero_amplitude": wave.zero_amplitude,
            "speed_head": wave.speed_head,
            "speed_tail": wave.speed_tail,
            "rh_mass": residual[0],
            "rh_momentum": residual[1],
            "rh_m2": residual[2],
            "rh_m3": residual[3],
            "rh_relative": report.get("rh_relative", np.nan),
            "entropy_dissipation": report.get("entropy_dissipation", np.nan),
        })
    return pd.DataFrame(rows)


def profile_frame(sol: RiemannSolution, xi: Sequence[float]) -> pd.DataFrame:
    p = sol.params
    rows = []
    for x in xi:
        U = riemann.sample(sol, float(x))
        rows.append({"xi": float(x), "h": U.h, "u": U.u, "sxx": U.sxx, "szz": U.szz,
                     "P": physics.total_pressure(U, p), "F": physics.free_energy(U, p)})
    return pd.DataFrame(rows, columns=["xi", "h", "u", "sxx", "szz", "P", "F"])


def snapshot_frame(field: Field, grid: Grid, p: Params) -> pd.DataFrame:
    W = physics.primitive_array(field.conserved, p)
    return pd.DataFrame({"x": grid.centers(), "h": W[:, 0], "u": W[:, 1], "sxx": W[:, 2], "szz": W[:, 3]})


def conservation_frame(records: List[Dict[str, float]]) -> pd.DataFrame:
    return pd.DataFrame(records, columns=["step", "t", "mass", "momentum", "m2", "m3"])


def validation_frame(results: List[ValidationResult]) -> pd.DataFrame:
    return pd.DataFrame(
        [{"property": r.name, "passed": r.passed, "observed": r.observed, "threshold": r.threshold,
          "informational": r.informational, "detail": r.detail} for r in results],
        columns=["property", "passed", "observed", "threshold", "informational", "detail"],
    )


def failures_frame(results: List[ValidationResult]) -> pd.DataFrame:
    return pd.DataFrame(
        [{"property": r.name, "observed": r.observed, "case": r.failing_case or ""}
         for r in results if not r.passed],
        columns=["property", "observed", "case"],
    )
