from functools import cached_property
from typing import Literal, Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, field_serializer, model_validator
from scipy import sparse

from src.schemas.graph_models import Digraph

# states are stored as uint16 at most
MAX_REFRACTORY = 2**16 - 1


class Network(BaseModel):
    """A digraph with per-node refractory periods p and firing thresholds th."""
    model_config = ConfigDict(frozen=True)

    graph: Digraph
    p: tuple[int, ...]
    th: tuple[int, ...]

    @model_validator(mode="after")
    def _check_vectors(self) -> "Network":
        if len(self.p) != self.graph.n or len(self.th) != self.graph.n:
            raise ValueError(
                f"p and th need {self.graph.n} entries, got {len(self.p)} and {len(self.th)}"
            )
        if min(self.p) < 1:
            raise ValueError("Refractory periods must be >= 1")
        if max(self.p) > MAX_REFRACTORY:
            raise ValueError(f"Refractory periods must be <= {MAX_REFRACTORY}, got {max(self.p)}")
        if min(self.th) < 1:
            raise ValueError("Firing thresholds must be >= 1")
        return self

    @property
    def n(self) -> int:
        return self.graph.n

    @property
    def p_min(self) -> int:
        return min(self.p)

    @property
    def p_max(self) -> int:
        return max(self.p)

    @property
    def th_min(self) -> int:
        return min(self.th)

    @property
    def th_max(self) -> int:
        return max(self.th)

    @cached_property
    def state_dtype(self) -> np.dtype:
        # canonical encoding: one byte per node while every p_i fits, else two
        return np.dtype(np.uint8) if self.p_max <= 255 else np.dtype(np.uint16)

    @cached_property
    def p_array(self) -> np.ndarray:
        return np.asarray(self.p, dtype=self.state_dtype)

    @cached_property
    def th_array(self) -> np.ndarray:
        return np.asarray(self.th, dtype=np.int64)

    @cached_property
    def in_matrix(self) -> sparse.csr_matrix:
        """Row i - 1 marks the in-neighbors of node i."""
        arcs = self.graph.arcs
        rows = [target - 1 for _, target in arcs]
        cols = [source - 1 for source, _ in arcs]
        data = np.ones(len(arcs), dtype=np.int64)
        return sparse.csr_matrix((data, (rows, cols)), shape=(self.n, self.n))


class DynamicsSummary(BaseModel):
    """Transient and attractor lengths of one trajectory.

    tau and alpha are None when the step cap was hit before they could be measured.
    per_node_period and min_cycling_onset are filled only when the attractor fits the
    trajectory budget of the detector.
    """
    model_config = ConfigDict(frozen=True)

    tau: Optional[int] = None
    alpha: Optional[int] = None
    capped: bool = False
    per_node_period: Optional[list[int]] = None
    min_cycling_onset: Optional[list[Optional[int]]] = None

    @model_validator(mode="after")
    def _check_lengths(self) -> "DynamicsSummary":
        if self.tau is not None and self.tau < 0:
            raise ValueError(f"tau must be >= 0, got {self.tau}")
        if self.alpha is not None and self.alpha < 1:
            raise ValueError(f"alpha must be >= 1, got {self.alpha}")
        if not self.capped and (self.tau is None or self.alpha is None):
            raise ValueError("An uncapped summary must carry both tau and alpha")
        if self.per_node_period is not None and self.alpha is not None:
            for i, period in enumerate(self.per_node_period, start=1):
                if self.alpha % period:
                    raise ValueError(f"Period {period} of node {i} does not divide alpha={self.alpha}")
        return self

    @field_serializer("alpha")
    def _alpha_as_decimal(self, alpha: Optional[int]) -> Optional[str]:
        return None if alpha is None else str(alpha)


WitnessKind = Literal["nsc", "nsc1", "nscp", "landau", "tree"]


class WitnessSpec(BaseModel):
    """Parameters of one of the special cycle/tree configurations."""
    model_config = ConfigDict(frozen=True)

    kind: WitnessKind
    length: Optional[int] = None
    p: int = 1
    ks: tuple[int, ...] = ()
    depth: Optional[int] = None
    branching: Optional[int] = None

    @model_validator(mode="after")
    def _check_parameters(self) -> "WitnessSpec":
        if self.kind in ("nsc", "nsc1", "nscp") and self.length is None:
            raise ValueError(f"Witness kind '{self.kind}' needs a cycle length")
        if self.kind == "landau" and not self.ks:
            raise ValueError("Witness kind 'landau' needs at least one cycle length")
        if self.kind == "tree" and (self.depth is None or self.branching is None):
            raise ValueError("Witness kind 'tree' needs depth and branching")
        return self


class OneCycleVerdict(BaseModel):
    """Which one-cycle bounds were applicable and whether they held.

    A None field means the corresponding bound does not apply (alpha == 1, or the digraph is not
    supersimple).
    """
    cycle_length: int
    gcd_holds: Optional[bool] = None
    supersimple: Optional[bool] = None
    tau_bound: Optional[int] = None
    bound_holds: Optional[bool] = None

    @property
    def holds(self) -> bool:
        return self.gcd_holds is not False and self.bound_holds is not False
