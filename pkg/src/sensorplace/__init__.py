"""Sensor placement against multi-target DDoS attacks.

Exact flow and LP engines, cut-based MILP models for quality (PQ) and
cardinality (PC) constrained placement, LP-relaxation heuristics, brute
force oracles and a scenario benchmark harness.
"""
from .errors import (InfeasibleError, InstanceFormatError, InternalError, InvalidArgument,
                     TooLargeError, ValidationError)
from .instance import (Instance, Placement, add_super_source, cmfnip_gadget,
                       make_grid, randomize_capacities, sample_roles,
                       with_uniform_risk)
from .flow import (FlowResult, apply_placement, evaluate_placement,
                   max_attack_flow, maxflow)
from .lp import (Constraint, LinearProgram, LpSolution, Variable, add_fixing,
                 solve_lp)
from .milp import (Formulation, build_pc, build_pq, export_lp, read_lp, relax,
                   solve_exact)

__version__ = "0.1.0"

__all__ = [
    "Constraint", "FlowResult", "Formulation", "Instance", "InstanceFormatError",
    "InternalError", "InvalidArgument", "LinearProgram", "LpSolution",
    "Placement", "TooLargeError", "ValidationError", "Variable", "add_fixing",
    "add_super_source", "apply_placement", "build_pc", "build_pq",
    "cmfnip_gadget", "evaluate_placement", "export_lp", "make_grid",
    "max_attack_flow", "maxflow", "randomize_capacities", "read_lp", "relax",
    "sample_roles", "solve_exact", "solve_lp", "with_uniform_risk",
]
