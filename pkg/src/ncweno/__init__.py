"""High-order finite-difference WENO solvers for hyperbolic systems with
non-conservative products, in fluctuation form."""

from .config import RunConfig, load_config
from .mesh import BoundaryCondition, FieldSet, UniformMesh, PERIODIC, TRANSMISSIVE
from .problems import build_problem, list_problems
from .run import RunArtifacts, run_benchmark, run_convergence, run_reference, \
    run_simulation
from .spatial import SchemeConfig, compute_rate
from .stepping import advance, compute_dt
from .systems.baer_nunziato import BaerNunziato
from .systems.euler import Euler
from .systems.layered import DebrisFlow, TwoLayerShallowWater

__version__ = "0.1.0"

__all__ = [
    "BaerNunziato", "BoundaryCondition", "DebrisFlow", "Euler", "FieldSet",
    "PERIODIC", "RunArtifacts", "RunConfig", "SchemeConfig", "TRANSMISSIVE",
    "TwoLayerShallowWater", "UniformMesh", "advance", "build_problem",
    "compute_dt", "compute_rate", "list_problems", "load_config",
    "run_benchmark", "run_convergence", "run_reference", "run_simulation",
]
