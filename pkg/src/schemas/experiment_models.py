from typing import Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator


def _split_list(value) -> list:
    if isinstance(value, str):
        return [item.strip() for item in value.split(",") if item.strip()]
    return list(value)


def _parse_c_grid(value) -> list[float]:
    """Accept '0.8,0.9', 'start:stop:step' (inclusive) or a sequence of numbers."""
    if isinstance(value, str) and ":" in value:
        try:
            start, stop, step = (float(part) for part in value.split(":"))
        except ValueError:
            raise ValueError(f"Grid '{value}' must read start:stop:step")
        if step <= 0 or stop < start:
            raise ValueError(f"Grid '{value}' must have step > 0 and stop >= start")
        count = int(round((stop - start) / step)) + 1
        return [round(float(c), 10) for c in np.linspace(start, stop, count)]
    return [float(c) for c in _split_list(value)]


class SweepConfig(BaseModel):
    """One sweep over the (n, c) grid with arc probability c / n."""
    model_config = ConfigDict(frozen=True)

    n_list: tuple[int, ...]
    c_list: tuple[float, ...]
    reps: int = 1
    p_lo: int = 1
    p_hi: int = 1
    th_lo: int = 1
    th_hi: int = 1
    step_cap: int = 10_000_000
    base_seed: int = 0

    @field_validator("n_list", mode="before")
    @classmethod
    def _parse_n_list(cls, value):
        return tuple(int(n) for n in _split_list(value))

    @field_validator("c_list", mode="before")
    @classmethod
    def _parse_c_list(cls, value):
        return tuple(_parse_c_grid(value))

    @model_validator(mode="after")
    def _check_bounds(self) -> "SweepConfig":
        if not self.n_list or not self.c_list:
            raise ValueError("Sweep needs at least one n and one c")
        if min(self.n_list) < 1:
            raise ValueError("Node counts must be >= 1")
        if min(self.c_list) < 0:
            raise ValueError("Mean degree c must be >= 0")
        if max(self.c_list) > min(self.n_list):
            raise ValueError("c / n must stay a probability for every cell")
        if self.reps < 1:
            raise ValueError(f"reps must be >= 1, got {self.reps}")
        if not 1 <= self.p_lo <= self.p_hi:
            raise ValueError(f"Need 1 <= p_lo <= p_hi, got {self.p_lo}, {self.p_hi}")
        if not 1 <= self.th_lo <= self.th_hi:
            raise ValueError(f"Need 1 <= th_lo <= th_hi, got {self.th_lo}, {self.th_hi}")
        if self.step_cap < 1:
            raise ValueError("step_cap must be >= 1")
        if self.base_seed < 0:
            raise ValueError("base_seed must be non-negative")
        return self

    def cells(self) -> list[tuple[int, int, float]]:
        """(n, c_index, c) in output order."""
        return [(n, c_index, c) for n in self.n_list for c_index, c in enumerate(self.c_list)]


class SweepRecord(BaseModel):
    """One measured repetition; alpha is a decimal string to survive any size."""
    model_config = ConfigDict(frozen=True, populate_by_name=True)

    n: int
    c: float
    rep_index: int = Field(alias="rep")
    seed: int
    alpha: Optional[str] = None
    tau: Optional[int] = None
    capped_alpha: bool = False
    capped_tau: bool = False

    @model_validator(mode="after")
    def _check_measurement(self) -> "SweepRecord":
        if not self.capped_alpha and (self.alpha is None or int(self.alpha) < 1):
            raise ValueError("An uncapped record needs alpha >= 1")
        if not self.capped_tau and (self.tau is None or self.tau < 0):
            raise ValueError("An uncapped record needs tau >= 0")
        return self


class CellStats(BaseModel):
    """Order statistics for one (n, c) cell; alpha statistics are decimal strings."""
    model_config = ConfigDict(frozen=True)

    n: int
    c: float
    reps: int
    median_alpha: Optional[str] = None
    p999_alpha: Optional[str] = None
    max_alpha: Optional[str] = None
    median_tau: Optional[int] = None
    p999_tau: Optional[str] = None
    max_tau: Optional[int] = None
    capped_fraction: float = 0.0


class GraphLawsReport(BaseModel):
    """Empirical random-digraph statistics next to their predicted values."""
    n: int
    c: float
    reps: int
    rho: Optional[float] = None
    mean_arcs: float
    se_arcs: float
    mean_gc_fraction: float
    se_gc_fraction: float
    mean_dg_fraction: float
    se_dg_fraction: float
    mean_cycles: dict[int, float]
    se_cycles: dict[int, float]
    expected_cycles: dict[int, float]
    supersimple_upstream_fraction: float
    se_supersimple_upstream_fraction: float


class SuiteReport(BaseModel):
    name: str
    cases: int = 0
    violations: list[str] = []

    @property
    def passed(self) -> bool:
        return not self.violations
