"""Arc-annotated sequence comparison: occurrence, LAPCS solvers and the 3SAT snail reduction."""

from .arcseq import (
    Arc,
    ArcAnnotatedSequence,
    Level,
    ParseError,
    SizeGuardError,
    ValidationError,
    classify_level,
    crossing,
    delete_positions,
    embedded,
    parse_sequence,
    serialize,
)
from .occurrence import brute_force_occurs, occurs, verify_embedding
from .reduction import CnfInstance, ReductionInstance, audit, build_instance, k_prime, parse_cnf
from .solvers import (
    Decision,
    LapcsSolution,
    SearchBudget,
    decide_lapcs,
    enumerate_stem_annotations,
    lapcs_branch_and_bound,
    lapcs_bruteforce,
    lapcs_parameterized,
    lcs_upper_bound,
)
from .witness import (
    Assignment,
    WitnessCertificate,
    build_witness,
    extract_assignment,
    sat_bruteforce,
    verify_witness,
)

__version__ = "0.1.0"

__all__ = [
    "Arc",
    "ArcAnnotatedSequence",
    "Assignment",
    "audit",
    "brute_force_occurs",
    "build_instance",
    "build_witness",
    "classify_level",
    "CnfInstance",
    "crossing",
    "decide_lapcs",
    "Decision",
    "delete_positions",
    "embedded",
    "enumerate_stem_annotations",
    "extract_assignment",
    "k_prime",
    "lapcs_branch_and_bound",
    "lapcs_bruteforce",
    "lapcs_parameterized",
    "LapcsSolution",
    "lcs_upper_bound",
    "Level",
    "occurs",
    "parse_cnf",
    "parse_sequence",
    "ParseError",
    "ReductionInstance",
    "sat_bruteforce",
    "SearchBudget",
    "serialize",
    "SizeGuardError",
    "ValidationError",
    "verify_embedding",
    "verify_witness",
    "WitnessCertificate",
]
