"""
Entanglement discrimination - how well a set of observables tells a multiqubit
state apart from the whole local-unitary orbit of another state.

Two measures are provided: the fidelity-gap measure F and the relative-entropy
measure D, each minimized over local unitaries (and optionally qubit
permutations) of the orbit state.
"""

__version__ = "0.1.0"
__license__ = "MIT"

from .dense import DenseState, expectation, outcome_distribution
from .errors import DiscriminationError
from .local_unitary import LocalUnitaryParams
from .measures import DiscriminationReport, d_multi, d_single, f_gap, relative_entropy
from .optimizer import OptimizerConfig, max_overlap, minimize_d, minimize_f, subset_search
from .pauli import PauliString

__all__ = [
    "DenseState",
    "DiscriminationError",
    "DiscriminationReport",
    "LocalUnitaryParams",
    "OptimizerConfig",
    "PauliString",
    "d_multi",
    "d_single",
    "expectation",
    "f_gap",
    "max_overlap",
    "minimize_d",
    "minimize_f",
    "outcome_distribution",
    "relative_entropy",
    "subset_search",
]
