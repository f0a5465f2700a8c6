from .solver import Clause, ContractViolation, ExternalPropagator, Solver, Status
from .totalizer import totalizer_at_most_k

__all__ = [
    "Clause",
    "ContractViolation",
    "ExternalPropagator",
    "Solver",
    "Status",
    "totalizer_at_most_k",
]
