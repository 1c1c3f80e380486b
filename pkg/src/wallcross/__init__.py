"""Exact wall-crossing computations for toric GIT problems.

The package works entirely over the integers and rationals: secondary-fan
chambers and walls, multiplicity maps of derived-category factors across
monotone wall paths, path-independence checks, and discriminant
intersection multiplicities with their factor-count counterparts.
"""

from .discriminant import (
    ConjectureRow,
    UnsupportedRankError,
    conjecture_check,
    horn_eval,
    intersection_multiplicity,
    n_multiplicity,
    rank1_point,
)
from .fan import (
    Chamber,
    Hyperplane,
    NonGenericPointError,
    SecondaryFan,
    Wall,
    build_fan,
    chamber_of,
    fixed_point_count,
    phase_count,
    phase_signature,
    positive_bases,
    walls,
    weight_hyperplanes,
)
from .gitproblem import (
    GitProblem,
    MinimalFace,
    ProblemError,
    RayData,
    SubProblem,
    SubspaceKey,
    coulomb_problem,
    higgs_problem,
    minimal_faces,
    new_problem,
    push_forward_key,
    rays,
    relevant_subspaces,
)
from .sod import (
    BudgetExceeded,
    CrossingPath,
    EmptyChamberError,
    FactorInfo,
    JhReport,
    PathError,
    codim1_multiplicity,
    decompose,
    default_path,
    describe_factor,
    full_key,
    jh_check,
    minimal_nonempty_chamber,
    monotone_moves,
    monotone_paths,
)

__version__ = "0.1.0"

__all__ = [
    "BudgetExceeded",
    "Chamber",
    "ConjectureRow",
    "CrossingPath",
    "EmptyChamberError",
    "FactorInfo",
    "GitProblem",
    "Hyperplane",
    "JhReport",
    "MinimalFace",
    "NonGenericPointError",
    "PathError",
    "ProblemError",
    "RayData",
    "SecondaryFan",
    "SubProblem",
    "SubspaceKey",
    "UnsupportedRankError",
    "Wall",
    "build_fan",
    "chamber_of",
    "codim1_multiplicity",
    "conjecture_check",
    "coulomb_problem",
    "decompose",
    "default_path",
    "describe_factor",
    "fixed_point_count",
    "full_key",
    "higgs_problem",
    "horn_eval",
    "intersection_multiplicity",
    "jh_check",
    "minimal_faces",
    "minimal_nonempty_chamber",
    "monotone_moves",
    "monotone_paths",
    "n_multiplicity",
    "new_problem",
    "phase_count",
    "phase_signature",
    "positive_bases",
    "push_forward_key",
    "rank1_point",
    "rays",
    "relevant_subspaces",
    "walls",
    "weight_hyperplanes",
]
