"""Run configuration: defaults, TOML files and CLI flags merged in order.

Precedence is CLI > config file > problem defaults > global defaults, and
unknown keys anywhere are hard errors so typos cannot silently change runs.
"""

from __future__ import annotations

import sys
from dataclasses import asdict, dataclass, field

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

from .problems import build_problem, list_problems

_KNOWN_KEYS = {
    "problem", "order", "formulation", "riemann", "cfl", "nx", "ny", "t_end",
    "flattener", "stepper", "threads", "out_dir", "snapshots", "char_interp",
    "char_derivs", "ladder_weights", "constants", "seed", "dt", "weno",
}
_WENO_KEYS = {"gamma_hi", "gamma_lo", "epsilon", "power"}


class ConfigError(ValueError):
    pass


@dataclass
class RunConfig:
    problem: str = "sod"
    order: int = 5
    formulation: str = "eq15"
    riemann: str = "llf"
    cfl: float = 0.8
    nx: int = 200
    ny: int = 0
    t_end: float | None = None      # None: problem default
    flattener: bool = False
    stepper: str = "ssp3"
    threads: int = 1
    out_dir: str | None = None
    snapshots: int = 1              # snapshot count over the run (>=1: final)
    char_interp: bool = True
    char_derivs: bool = False
    ladder_weights: str = "auto"
    constants: dict = field(default_factory=dict)
    seed: int = 0
    dt: float | None = None         # explicit time step override
    weno: dict = field(default_factory=dict)   # WenoParams overrides

    def echo(self) -> dict:
        return asdict(self)


def _check_keys(data: dict, where: str):
    unknown = set(data) - _KNOWN_KEYS
    if unknown:
        raise ConfigError(f"unknown config keys in {where}: {sorted(unknown)}")


def load_config(path: str | None = None, overrides: dict | None = None) -> RunConfig:
    """Build a RunConfig from an optional TOML file plus override flags."""
    merged: dict = {}
    if path is not None:
        with open(path, "rb") as fh:
            data = tomllib.load(fh)
        _check_keys(data, path)
        merged.update(data)
    if overrides:
        overrides = {k: v for k, v in overrides.items() if v is not None}
        _check_keys(overrides, "command line")
        merged.update(overrides)
    problem = merged.get("problem", "sod")
    if problem not in list_problems():
        raise ConfigError(f"unknown problem {problem!r}; "
                          f"choices: {', '.join(list_problems())}")
    # pull the problem's own defaults for anything still unset
    setup = build_problem(problem, constants=merged.get("constants"))
    for key, val in setup.defaults.items():
        merged.setdefault(key, val)
    merged.setdefault("t_end", setup.t_end)
    try:
        cfg = RunConfig(**merged)
    except TypeError as exc:
        raise ConfigError(f"bad config value: {exc}") from exc
    validate(cfg, setup.system)
    return cfg


def validate(cfg: RunConfig, system) -> None:
    from .spatial import FORMULATIONS
    from .riemann import RIEMANN_SOLVERS
    from .stepping import STEPPERS
    if cfg.order not in (3, 5, 7, 9):
        raise ConfigError("order must be 3, 5, 7 or 9")
    if cfg.formulation not in FORMULATIONS:
        raise ConfigError(f"formulation must be one of {FORMULATIONS}")
    if cfg.riemann not in RIEMANN_SOLVERS:
        raise ConfigError(f"riemann must be one of {RIEMANN_SOLVERS}")
    if cfg.stepper not in STEPPERS:
        raise ConfigError(f"stepper must be one of {STEPPERS}")
    if cfg.formulation == "eq2" and system.has_noncons:
        raise ConfigError("formulation eq2 needs a fully conservative system")
    if cfg.stepper == "imex433" and not getattr(system, "has_relaxation", False):
        raise ConfigError("imex433 needs a system with relaxation sources")
    if cfg.ladder_weights not in ("auto", "shared", "component"):
        raise ConfigError("ladder_weights must be 'auto', 'shared' or 'component'")
    if cfg.cfl <= 0.0:
        raise ConfigError("cfl must be positive")
    if cfg.nx < 4:
        raise ConfigError("nx too small")
    unknown = set(cfg.weno) - _WENO_KEYS
    if unknown:
        raise ConfigError(f"unknown weno parameter keys: {sorted(unknown)}")
