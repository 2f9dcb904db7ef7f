"""Central tolerance and run configuration."""
from __future__ import annotations

import os
from dataclasses import dataclass, field, asdict


@dataclass(frozen=True)
class Tolerances:
    series_rel: float = 1e-16
    series_cap: int = 10_000
    pole_radius: float = 1e-6
    identity: float = 1e-12
    ode: float = 1e-8
    legendre: float = 1e-8
    two_route: float = 1e-9
    rank_rel: float = 1e-8
    quad: float = 1e-10
    period_check: float = 1e-7
    theta_numeric: float = 1e-6
    degenerate_disc: float = 1e-12

    def __post_init__(self):
        for k, v in asdict(self).items():
            if v <= 0:
                raise ValueError(f"tolerance {k} must be positive")


DEFAULT_TOL = Tolerances()


@dataclass(frozen=True)
class RunConfig:
    tol: Tolerances = field(default_factory=Tolerances)
    seed: int = 42
    c_min: float = 3 ** 0.5 / 2
    c_max: float = 8.0
    c_step: float = 0.01
    case2_c_min: float = 1.0
    case2_c_max: float = 4.0
    case2_c_step: float = 0.05
    genera: tuple = (2, 3, 4, 5, 6)

    def echo(self) -> dict:
        d = asdict(self)
        d["genera"] = list(self.genera)
        return d


def thread_cap() -> int:
    try:
        n = int(os.environ.get("WLAB_THREADS", "1"))
    except ValueError:
        n = 1
    return max(1, n)
