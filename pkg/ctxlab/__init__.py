"""
ctxlab: exact contextuality analysis of simplicial distributions
"""
from .contextuality import (
    classify,
    is_contextual,
    is_polytope_vertex,
    is_strongly_contextual,
    pr_circle_decider,
    support,
)
from .errors import CtxlabError, DeciderDisagreement, ParseError, PreconditionError, TooLarge
from .scenario import Scenario, collapse_edge, cycle_scenario
from .semiring import Dist, Kind
from .simpdist import SimpDist, deterministic, pr_box, section_T

__version__ = "0.1.0"

__all__ = [
    "CtxlabError",
    "DeciderDisagreement",
    "Dist",
    "Kind",
    "ParseError",
    "PreconditionError",
    "Scenario",
    "SimpDist",
    "TooLarge",
    "classify",
    "collapse_edge",
    "cycle_scenario",
    "deterministic",
    "is_contextual",
    "is_polytope_vertex",
    "is_strongly_contextual",
    "pr_box",
    "pr_circle_decider",
    "section_T",
    "support",
]
