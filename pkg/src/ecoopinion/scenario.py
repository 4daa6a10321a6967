"""A Scenario bundles everything one deterministic run needs: the game pair,
environment rates, trust matrix, initial state, and integrator settings."""

from __future__ import annotations

from dataclasses import dataclass, replace

from .dynamics import EnvParams, GamePair, SystemState, TrustMatrix, PROTOCOL_MODES
from .integrate import IntegratorSettings

AXES = ("x0", "n0", "y0")


@dataclass(frozen=True)
class Scenario:
    pair: GamePair
    env: EnvParams
    trust: TrustMatrix
    initial: SystemState
    settings: IntegratorSettings = IntegratorSettings()
    protocol_matrix_mode: str = "env"
    label: str = "scenario"

    def __post_init__(self):
        if not self.label or "\n" in self.label or "#" in self.label:
            raise ValueError(
                f"label must be a nonempty single line without '#', got {self.label!r}"
            )
        if self.protocol_matrix_mode not in PROTOCOL_MODES:
            raise ValueError(
                f"protocol_matrix_mode must be one of {PROTOCOL_MODES}, "
                f"got {self.protocol_matrix_mode!r}"
            )
        for name, value in (("x0", self.initial.x), ("n0", self.initial.n),
                            ("y0", self.initial.y)):
            if not 0.0 <= value <= 1.0:
                raise ValueError(f"initial {name}={value!r} outside [0, 1]")

    def with_initial(self, axis: str, value: float) -> "Scenario":
        """Copy of this scenario with one initial coordinate replaced."""
        if axis == "x0":
            initial = SystemState(value, self.initial.n, self.initial.y)
        elif axis == "n0":
            initial = SystemState(self.initial.x, value, self.initial.y)
        elif axis == "y0":
            initial = SystemState(self.initial.x, self.initial.n, value)
        else:
            raise ValueError(f"axis must be one of {AXES}, got {axis!r}")
        return replace(self, initial=initial)
