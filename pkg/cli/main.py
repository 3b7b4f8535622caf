import argparse
import logging
import os
import sys
from pathlib import Path
from typing import Dict, List, Optional

# Add parent directory to path for imports
current_dir = os.path.dirname(os.path.abspath(__file__))
parent_dir = os.path.dirname(current_dir)
if parent_dir not in sys.path:
    sys.path.insert(0, parent_dir)

import pandas as pd  # noqa: E402

import godunov  # noqa: E402
import riemann  # noqa: E402
import validation  # noqa: E402
from cli import writers  # noqa: E402
from config import parse_config  # noqa: E402
from errors import GSVError, InputError, SimulationAborted  # noqa: E402
from models import Field, InitialKind, PrimitiveState, RunConfig, RunMode  # noqa: E402

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_VALIDATION_FAILED = 1
EXIT_ERROR = 2


def cmd_eigen(config: RunConfig, out: Path) -> int:
    assert config.left is not None
    writers.write_csv(writers.eigen_frame(config.left, config.params), out / "eigen.csv")
    return EXIT_OK


def cmd_riemann(config: RunConfig, out: Path) -> int:
    assert config.left is not None and config.right is not None
    sol = riemann.solve(config.left, config.right, config.params)
    diag = riemann.diagnostics(sol)
    logger.info(
        f"Riemann solution: P*={sol.p_star:.6g}, u*={sol.u_star:.6g}, "
        f"waves {', '.join(w.kind.value for w in sol.waves)}"
    )
    writers.write_csv(writers.waves_frame(sol, diag), out / "waves.csv")
    writers.write_csv(writers.states_frame(sol), out / "states.csv")
    writers.write_csv(writers.profile_frame(sol, config.sampling.points()), out / "profile.csv")
    return EXIT_OK


def initial_condition(config: RunConfig) -> godunov.InitialCondition:
    ic = config.initial
    if ic.kind == InitialKind.SMOOTH_BUMP:
        return godunov.smooth_bump_ic(ic.h0, ic.amplitude, ic.width, ic.x0)
    assert config.left is not None and config.right is not None
    left, right = config.left, config.right
    if ic.kind == InitialKind.DAM_BREAK:
        left = PrimitiveState(h=left.h, u=0.0, sxx=left.sxx, szz=left.szz)
        right = PrimitiveState(h=right.h, u=0.0, sxx=right.sxx, szz=right.szz)
    return godunov.riemann_ic(left, right, ic.x0)


def _write_snapshots(snapshots: List[godunov.Snapshot], config: RunConfig, out: Path) -> None:
    sim = config.sim_config()
    index = []
    for k, (t, field) in enumerate(snapshots):
        name = f"snapshot_{k:04d}.csv"
        writers.write_csv(writers.snapshot_frame(field, sim.grid, sim.params), out / name)
        index.append({"index": k, "t": t, "file": name})
    writers.write_csv(pd.DataFrame(index, columns=["index", "t", "file"]), out / "snapshots.csv")


def cmd_simulate(config: RunConfig, out: Path) -> int:
    sim = config.sim_config()
    records: List[Dict[str, float]] = []

    def log_totals(n_step: int, field: Field) -> None:
        mass, momentum, m2, m3 = godunov.totals(field, sim.grid)
        records.append({"step": n_step, "t": field.t, "mass": mass, "momentum": momentum, "m2": m2, "m3": m3})

    try:
        snapshots = godunov.run(sim, initial_condition(config), on_step=log_totals)
    except SimulationAborted as e:
        _write_snapshots(e.snapshots, config, out)
        writers.write_csv(writers.conservation_frame(records), out / "conservation.csv")
        raise
    _write_snapshots(snapshots, config, out)
    writers.write_csv(writers.conservation_frame(records), out / "conservation.csv")
    return EXIT_OK


def cmd_validate(config: RunConfig, out: Path) -> int:
    results = validation.run_suite(config.validate_block, config.seed)
    writers.write_csv(writers.validation_frame(results), out / "validation_report.csv")
    writers.write_csv(writers.failures_frame(results), out / "validation_failures.csv")
    failed = [r.name for r in results if not r.passed]
    if failed:
        logger.error(f"Validation failed for {len(failed)} properties: {', '.join(failed)}")
        return EXIT_VALIDATION_FAILED
    logger.info(f"All {len(results)} validation properties passed")
    return EXIT_OK


COMMANDS = {
    RunMode.EIGEN: cmd_eigen,
    RunMode.RIEMANN: cmd_riemann,
    RunMode.SIMULATE: cmd_simulate,
    RunMode.VALIDATE: cmd_validate,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gsv-riemann",
        description="Exact Riemann solver and Godunov simulator for viscoelastic shallow water",
    )
    parser.add_argument("mode", choices=[m.value for m in RunMode])
    parser.add_argument("--config", required=True, type=Path, help="path to the run configuration")
    parser.add_argument("--out", type=Path, default=None, help="output directory (overrides [output] dir)")
    parser.add_argument("--seed", type=int, default=None, help="random seed (overrides [run] seed)")
    parser.add_argument("--verbose", action="store_true", help="log at DEBUG level")
    return parser


def load_config(path: Path, mode: str, seed: Optional[int]) -> RunConfig:
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as e:
        raise InputError(f"cannot read configuration {path}: {e}", {"path": str(path)})
    config = parse_config(text)
    if config.mode.value != mode:
        raise InputError(
            f"configuration is for mode '{config.mode.value}' but '{mode}' was requested",
            {"config_mode": config.mode.value, "requested": mode},
        )
    if seed is not None:
        config = config.model_copy(update={"seed": seed})
    return config


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.INFO)

    try:
        config = load_config(args.config, args.mode, args.seed)
        out = args.out if args.out is not None else Path(config.output_dir)
        out.mkdir(parents=True, exist_ok=True)
        logger.info(f"Running '{args.mode}' with output in {out}")
        return COMMANDS[config.mode](config, out)
    except GSVError as e:
        logger.error(f"{type(e).__name__}: {e}")
        print(e.to_report().model_dump_json(), file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
