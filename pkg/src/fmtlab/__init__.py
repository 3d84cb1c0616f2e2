"""fmtlab: a workbench for finite relational structures.

Structures and homomorphisms, first-order formulas with distance
atoms, an exact homomorphism solver with a compiled kernel, generators
for the wheel/bouquet/ring graph families, minor and width checks, and
line-oriented verification suites tying them together.
"""

from .structures import (GRAPH_VOCAB, AmalgamError, FileFormatError,
                         Homomorphism, LoopCreationError, Partition,
                         Structure, StructureError, TreeDecomposition,
                         Vocabulary, VocabularyMismatchError, ball,
                         connected_components, disjoint_union, free_amalgam,
                         free_amalgam_with_maps, gaifman_graph,
                         induced_substructure, is_substructure,
                         iterated_amalgam, parse_structure, quotient,
                         read_structure, serialize_structure,
                         write_structure)
from .formulas import (BUILTIN_FORMULAS, BasicLocalSentence, CaptureError,
                       FormulaError, ParseError, UnboundVariableError,
                       basic_local, canonical_query, evaluate, free_vars,
                       interpret_k, parse, pbar_structure, pbar_vocab,
                       quantifier_rank, relativize, to_pure_fo, to_text)
from .kernel import active_kernel, have_c_kernel, set_kernel
from .solver import (DEFAULT_BUDGET, BudgetExceededError,
                     InconsistentPartialError, SolverError, chromatic_number,
                     classify, count_homs, enumerate_homs, find_hom,
                     isomorphic)
from .families import (FamilyError, biclique, bouquet, bouquet_oracle,
                       clique, cycle, delta_hom, dn, gen, gn, in_class_C,
                       wheel)
from .minors import (BottleneckResult, MinorError, find_bottleneck,
                     has_minor, is_outerplanar, is_planar, is_r_scattered,
                     pattern, validate_tree_decomposition,
                     wheel_decomposition)
from .lab import (DmWitness, LabError, MinimalityReport, PreservationReport,
                  SuiteReport, SUITE_NAMES, check_preservation,
                  dm_preconditions, find_induced_Dm, hom_image_audit,
                  is_minimal_induced_model, run_suite)

__version__ = "0.1.0"

__all__ = [
    "GRAPH_VOCAB", "AmalgamError", "FileFormatError", "Homomorphism",
    "LoopCreationError", "Partition", "Structure", "StructureError",
    "TreeDecomposition", "Vocabulary", "VocabularyMismatchError", "ball",
    "connected_components", "disjoint_union", "free_amalgam",
    "free_amalgam_with_maps", "gaifman_graph", "induced_substructure",
    "is_substructure", "iterated_amalgam", "parse_structure", "quotient",
    "read_structure", "serialize_structure", "write_structure",
    "BUILTIN_FORMULAS", "BasicLocalSentence", "CaptureError", "FormulaError",
    "ParseError", "UnboundVariableError", "basic_local", "canonical_query",
    "evaluate", "free_vars", "interpret_k", "parse", "pbar_structure",
    "pbar_vocab", "quantifier_rank", "relativize", "to_pure_fo", "to_text",
    "active_kernel", "have_c_kernel", "set_kernel",
    "DEFAULT_BUDGET", "BudgetExceededError", "InconsistentPartialError",
    "SolverError", "chromatic_number", "classify", "count_homs",
    "enumerate_homs", "find_hom", "isomorphic",
    "FamilyError", "biclique", "bouquet", "bouquet_oracle", "clique",
    "cycle", "delta_hom", "dn", "gen", "gn", "in_class_C", "wheel",
    "BottleneckResult", "MinorError", "find_bottleneck", "has_minor",
    "is_outerplanar", "is_planar", "is_r_scattered", "pattern",
    "validate_tree_decomposition", "wheel_decomposition",
    "DmWitness", "LabError", "MinimalityReport", "PreservationReport",
    "SuiteReport", "SUITE_NAMES", "check_preservation", "dm_preconditions",
    "find_induced_Dm", "hom_image_audit", "is_minimal_induced_model",
    "run_suite",
    "__version__",
]
