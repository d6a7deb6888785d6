"""Exact linearity analysis of HNN-extensions with finitely generated abelian base."""

__version__ = "0.1.0"

from .finite_order import (
    ExtensionError,
    FiniteOrderExtension,
    ObstructionError,
    OrbitRun,
    RootOvergroup,
    SSystem,
    build_s_system,
    extend_to_finite_order,
    orbit_run,
    root_overgroup,
)
from .hnn import (
    HnnInstance,
    InvalidInstanceError,
    Word,
    britton_reduce,
    d_membership_sample,
    is_identity,
    validate,
    word,
    words_equal,
)
from .invariants import (
    ChainGuardError,
    HReport,
    LinearityVerdict,
    MChainReport,
    Verdict,
    compute_H,
    decide,
    m_chain,
    quotient_by_H,
)
from .lattice import FgAbelianGroup, Lattice, SubgroupHom
from .pipeline import PipelineResult, run_pipeline
from .raag import (
    Presentation,
    RaagCertificate,
    SchreierData,
    build_tilde,
    certify_raag,
    embed_g,
    normal_closure_data,
    schreier_rewrite,
)
from .reps import MatrixRep, induce_and_restrict, raag_to_matrices

__all__ = [
    "ChainGuardError", "ExtensionError", "FgAbelianGroup", "FiniteOrderExtension", "HReport",
    "HnnInstance", "InvalidInstanceError", "Lattice", "LinearityVerdict", "MChainReport",
    "MatrixRep", "ObstructionError", "OrbitRun", "PipelineResult", "Presentation",
    "RaagCertificate", "RootOvergroup", "SSystem", "SchreierData", "SubgroupHom", "Verdict",
    "Word", "britton_reduce", "build_s_system", "build_tilde", "certify_raag", "compute_H",
    "d_membership_sample", "decide", "embed_g", "extend_to_finite_order", "induce_and_restrict",
    "is_identity", "m_chain", "normal_closure_data", "orbit_run", "quotient_by_H",
    "raag_to_matrices", "root_overgroup", "run_pipeline", "schreier_rewrite", "validate",
    "word", "words_equal",
]
