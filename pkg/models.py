import math
from enum import Enum
from typing import Any, List, Optional, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field as PydanticField, field_validator, model_validator

# Values outside this window are rejected rather than propagated
MIN_MAGNITUDE = 1e-300
MAX_MAGNITUDE = 1e300


def _check_positive(name: str, value: float) -> float:
    if not math.isfinite(value) or value < MIN_MAGNITUDE or value > MAX_MAGNITUDE:
        raise ValueError(f"{name} must lie in [{MIN_MAGNITUDE:g}, {MAX_MAGNITUDE:g}], got {value!r}")
    return value


# Enums defined separately so models and config share them
class WaveFamily(str, Enum):
    MINUS = "minus"
    PLUS = "plus"


class CharField(str, Enum):
    MINUS = "minus"
    ZERO = "zero"
    PLUS = "plus"


class CurveBranch(str, Enum):
    SHOCK = "shock"
    RAREFACTION = "rarefaction"
    ZERO_AMPLITUDE = "zero-amplitude"


class WaveKind(str, Enum):
    SHOCK = "shock"
    CONTACT = "contact"
    FAN = "fan"


class Boundary(str, Enum):
    TRANSMISSIVE = "transmissive"
    PERIODIC = "periodic"
    REFLECTIVE = "reflective"


class Splitting(str, Enum):
    LIE = "lie"
    STRANG = "strang"


class RunMode(str, Enum):
    EIGEN = "eigen"
    RIEMANN = "riemann"
    SIMULATE = "simulate"
    VALIDATE = "validate"


class InitialKind(str, Enum):
    RIEMANN = "riemann"
    DAM_BREAK = "dam-break"
    SMOOTH_BUMP = "smooth-bump"


# Physical constants and states
class Params(BaseModel):
    """Physical constants of the system; lam = inf is the elastic limit"""
    model_config = ConfigDict(frozen=True, populate_by_name=True)

    g: float = 9.81
    G: float
    zeta: float
    lam: float = PydanticField(default=math.inf, alias="lambda")

    @field_validator("g")
    @classmethod
    def _gravity(cls, v: float) -> float:
        if not (math.isfinite(v) and v > 0):
            raise ValueError(f"gravity g must be positive, got {v!r}")
        return v

    @field_validator("G")
    @classmethod
    def _modulus(cls, v: float) -> float:
        if not (math.isfinite(v) and v >= 0):
            raise ValueError(f"elastic modulus G must be nonnegative, got {v!r}")
        return v

    @field_validator("zeta")
    @classmethod
    def _slip(cls, v: float) -> float:
        if not (0.0 <= v <= 0.5):
            raise ValueError(
                f"slip parameter zeta={v!r} violates the hyperbolicity condition 0 <= zeta <= 1/2"
            )
        return v

    @field_validator("lam")
    @classmethod
    def _relaxation_time(cls, v: float) -> float:
        if math.isnan(v) or v <= 0:
            raise ValueError(f"relaxation time lambda must be positive or inf, got {v!r}")
        return v

    @property
    def relaxing(self) -> bool:
        return math.isfinite(self.lam)

    @classmethod
    def unchecked(cls, g: float, G: float, zeta: float, lam: float = math.inf) -> "Params":
        """Build parameters without validation (diagnostic negative controls only)"""
        return cls.model_construct(g=g, G=G, zeta=zeta, lam=lam)


class PrimitiveState(BaseModel):
    model_config = ConfigDict(frozen=True)

    h: float
    u: float
    sxx: float
    szz: float

    @field_validator("h", "sxx", "szz")
    @classmethod
    def _positive(cls, v: float, info: Any) -> float:
        return _check_positive(info.field_name, v)

    @field_validator("u")
    @classmethod
    def _finite(cls, v: float) -> float:
        if not math.isfinite(v):
            raise ValueError(f"velocity must be finite, got {v!r}")
        return v

    def as_array(self) -> np.ndarray:
        return np.array([self.h, self.u, self.sxx, self.szz])


class ConservedState(BaseModel):
    """(h, hu, hX, hZinv): the conservative variable with identity stress maps"""
    model_config = ConfigDict(frozen=True)

    m0: float
    m1: float
    m2: float
    m3: float

    @field_validator("m0", "m2", "m3")
    @classmethod
    def _positive(cls, v: float, info: Any) -> float:
        return _check_positive(info.field_name, v)

    def as_array(self) -> np.ndarray:
        return np.array([self.m0, self.m1, self.m2, self.m3])


class Invariants(BaseModel):
    """Riemann invariants of the genuinely nonlinear fields"""
    model_config = ConfigDict(frozen=True)

    X: float
    Zinv: float

    @field_validator("X", "Zinv")
    @classmethod
    def _positive(cls, v: float, info: Any) -> float:
        return _check_positive(info.field_name, v)


# Wave curves
class CurveSide(BaseModel):
    model_config = ConfigDict(frozen=True)

    ref_state: PrimitiveState
    inv: Invariants
    family: WaveFamily


class CurvePoint(BaseModel):
    model_config = ConfigDict(frozen=True)

    u: float
    h: float
    branch: CurveBranch


# Riemann solutions
class Wave(BaseModel):
    """One elementary wave; discontinuities have speed_head == speed_tail"""
    model_config = ConfigDict(frozen=True)

    kind: WaveKind
    family: CharField
    left_state: PrimitiveState
    right_state: PrimitiveState
    speed_head: float
    speed_tail: float
    zero_amplitude: bool = False

    @property
    def speed(self) -> float:
        return self.speed_head

    @property
    def is_discontinuity(self) -> bool:
        return self.kind != WaveKind.FAN


class RiemannSolution(BaseModel):
    model_config = ConfigDict(frozen=True)

    params: Params
    left: PrimitiveState
    right: PrimitiveState
    star_left: PrimitiveState
    star_right: PrimitiveState
    waves: Tuple[Wave, Wave, Wave]
    p_star: float
    u_star: float

    def ray_speeds(self) -> List[float]:
        """Distinct rays bounding constant states or fans, left to right"""
        speeds: List[float] = []
        for wave in self.waves:
            for s in (wave.speed_head, wave.speed_tail):
                if not speeds or s != speeds[-1]:
                    speeds.append(s)
        return speeds


class DiscontinuityReport(BaseModel):
    family: CharField
    kind: WaveKind
    speed: float
    zero_amplitude: bool
    rh_residual: List[float]
    rh_relative: float
    entropy_dissipation: float
    entropy_scale: float
    depth_amplitude: float


class RiemannDiagnostics(BaseModel):
    reports: List[DiscontinuityReport]

    @property
    def max_rh_relative(self) -> float:
        return max((r.rh_relative for r in self.reports), default=0.0)


# Finite volumes
class Grid(BaseModel):
    model_config = ConfigDict(frozen=True)

    x_min: float
    x_max: float
    n_cells: int

    @model_validator(mode="after")
    def _extent(self) -> "Grid":
        if self.n_cells < 2:
            raise ValueError(f"grid needs at least 2 cells, got {self.n_cells}")
        if not self.x_max > self.x_min:
            raise ValueError(f"grid needs x_max > x_min, got [{self.x_min}, {self.x_max}]")
        return self

    @property
    def dx(self) -> float:
        return (self.x_max - self.x_min) / self.n_cells

    def centers(self) -> np.ndarray:
        return self.x_min + (np.arange(self.n_cells) + 0.5) * self.dx


class Field(BaseModel):
    """Cell averages of the conserved variable, shape (n_cells, 4), at time t"""
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    conserved: np.ndarray
    t: float = 0.0

    @field_validator("conserved")
    @classmethod
    def _shape(cls, v: np.ndarray) -> np.ndarray:
        if v.ndim != 2 or v.shape[1] != 4:
            raise ValueError(f"conserved array must have shape (n, 4), got {v.shape}")
        v = np.array(v, dtype=float)
        v.setflags(write=False)
        return v

    @property
    def n_cells(self) -> int:
        return self.conserved.shape[0]


class SimConfig(BaseModel):
    model_config = ConfigDict(frozen=True)

    params: Params
    grid: Grid
    cfl: float = 0.9
    t_end: float
    boundary: Boundary = Boundary.TRANSMISSIVE
    snapshot_times: List[float] = []
    splitting: Splitting = Splitting.LIE

    @field_validator("cfl")
    @classmethod
    def _courant(cls, v: float) -> float:
        if not (0.0 < v <= 1.0):
            raise ValueError(f"cfl must lie in (0, 1], got {v!r}")
        return v

    @field_validator("t_end")
    @classmethod
    def _end(cls, v: float) -> float:
        if not (math.isfinite(v) and v >= 0):
            raise ValueError(f"t_end must be nonnegative, got {v!r}")
        return v

    @model_validator(mode="after")
    def _snapshots(self) -> "SimConfig":
        for s in self.snapshot_times:
            if not (0.0 <= s <= self.t_end):
                raise ValueError(f"snapshot time {s} outside [0, t_end={self.t_end}]")
        return self

    def output_times(self) -> List[float]:
        """Sorted positive snapshot times, always ending at t_end"""
        times = sorted({s for s in self.snapshot_times if s > 0.0} | {self.t_end})
        return [s for s in times if s > 0.0]


# Validation
class SVStar(BaseModel):
    """Star state of the classical shallow-water Riemann problem"""
    h_star: float
    u_star: float
    left_wave: CurveBranch
    right_wave: CurveBranch
    vacuum: bool = False


class SpaceTimeBox(BaseModel):
    model_config = ConfigDict(frozen=True)

    t0: float
    t1: float
    x0: float
    x1: float

    @model_validator(mode="after")
    def _inside(self) -> "SpaceTimeBox":
        if not (0.0 < self.t0 < self.t1):
            raise ValueError(f"box must satisfy 0 < t0 < t1, got [{self.t0}, {self.t1}]")
        if not self.x0 < self.x1:
            raise ValueError(f"box must satisfy x0 < x1, got [{self.x0}, {self.x1}]")
        return self


class ConvexityReport(BaseModel):
    zeta: float
    n_samples: int
    min_eigenvalue: float
    worst_h: float
    passed: bool


class VacuumDivergenceReport(BaseModel):
    depths: List[float]
    magnitudes: List[float]
    strictly_increasing: bool
    extrapolated_limit: Optional[float] = None


class RiemannCase(BaseModel):
    """Replayable Riemann problem recorded for a failing validation property"""
    params: Params
    left: PrimitiveState
    right: PrimitiveState


class ValidationResult(BaseModel):
    name: str
    passed: bool
    observed: float
    threshold: float
    detail: str = ""
    informational: bool = False
    failing_case: Optional[str] = None


# Run configuration
class XiGrid(BaseModel):
    xi_min: float = -10.0
    xi_max: float = 10.0
    n_points: int = 1001

    @model_validator(mode="after")
    def _ordered(self) -> "XiGrid":
        if self.n_points < 2 or not self.xi_max > self.xi_min:
            raise ValueError(
                f"xi-grid needs n_points >= 2 and xi_min < xi_max, got "
                f"({self.xi_min}, {self.xi_max}, {self.n_points})"
            )
        return self

    def points(self) -> np.ndarray:
        return np.linspace(self.xi_min, self.xi_max, self.n_points)


class InitialCondition(BaseModel):
    kind: InitialKind = InitialKind.RIEMANN
    x0: float = 0.0
    h0: float = 1.0
    amplitude: float = 0.1
    width: float = 0.1


class TimeBlock(BaseModel):
    t_end: float
    cfl: float = 0.9
    boundary: Boundary = Boundary.TRANSMISSIVE
    snapshot_times: List[float] = []
    splitting: Splitting = Splitting.LIE

    @model_validator(mode="after")
    def _consistent(self) -> "TimeBlock":
        if not (math.isfinite(self.t_end) and self.t_end >= 0):
            raise ValueError(f"t_end must be nonnegative, got {self.t_end!r}")
        if not (0.0 < self.cfl <= 1.0):
            raise ValueError(f"cfl must lie in (0, 1], got {self.cfl!r}")
        outside = [s for s in self.snapshot_times if not (0.0 <= s <= self.t_end)]
        if outside:
            raise ValueError(f"snapshot times {outside} outside [0, t_end={self.t_end}]")
        return self


class ValidateBlock(BaseModel):
    n_states: int = 10000
    n_riemann: int = 1000
    n_weak_form: int = 100
    n_test_functions: int = 10
    n_convexity: int = 100
    convergence_cells: List[int] = [100, 200, 400, 800, 1600]
    diagnostic_zeta: Optional[float] = None


class RunConfig(BaseModel):
    mode: RunMode
    seed: int = 12345
    params: Params
    left: Optional[PrimitiveState] = None
    right: Optional[PrimitiveState] = None
    sampling: XiGrid = XiGrid()
    initial: InitialCondition = InitialCondition()
    grid: Optional[Grid] = None
    time: Optional[TimeBlock] = None
    validate_block: ValidateBlock = PydanticField(default_factory=ValidateBlock, alias="validate")
    output_dir: str = "out"

    model_config = ConfigDict(populate_by_name=True)

    @model_validator(mode="after")
    def _required_blocks(self) -> "RunConfig":
        needs_states = self.mode in (RunMode.EIGEN, RunMode.RIEMANN) or (
            self.mode == RunMode.SIMULATE and self.initial.kind != InitialKind.SMOOTH_BUMP
        )
        if needs_states and self.left is None:
            raise ValueError(f"mode '{self.mode.value}' requires a [left] block")
        if needs_states and self.mode != RunMode.EIGEN and self.right is None:
            raise ValueError(f"mode '{self.mode.value}' requires a [right] block")
        if self.mode == RunMode.SIMULATE and (self.grid is None or self.time is None):
            raise ValueError("mode 'simulate' requires [grid] and [time] blocks")
        return self

    def sim_config(self) -> SimConfig:
        assert self.grid is not None and self.time is not None
        return SimConfig(
            params=self.params,
            grid=self.grid,
            cfl=self.time.cfl,
            t_end=self.time.t_end,
            boundary=self.time.boundary,
            snapshot_times=self.time.snapshot_times,
            splitting=self.time.splitting,
        )
