"""Finite lattices with a modal adjunction pair (nabla, arrow).

Public API re-exports; see README for the tour.
"""

from .errors import (
    AdjunctionFailure,
    CrossCheckError,
    FlagMismatch,
    InvalidMorphism,
    NablalgError,
    NoBounds,
    NoJoin,
    NoMeet,
    NotCompatible,
    NotDistributive,
    NotEmbedding,
    NotKripkeMorphism,
    NotNormal,
    NotPartialOrder,
    NotSurjective,
    OutOfRange,
    ShapeError,
    TooLarge,
    Trivial,
)
from .lattice import (
    FiniteLattice,
    UpSetFamily,
    all_lattices,
    all_posets,
    all_upsets,
    build_lattice,
    distributivity_witness,
    heyting_table,
    is_distributive,
    is_prime_filter,
    join_irreducibles,
    lattice_iso,
    prime_filters,
    upset_lattice,
    validate_partial_order,
)
from .algebra import (
    AdjointSearch,
    AlgebraMorphism,
    ImplicationReport,
    LawReport,
    MorphismReport,
    NablaAlgebra,
    PropertyProfile,
    StrongAlgebraCandidate,
    Violation,
    algebra_iso,
    build_algebra,
    check_equational_axioms,
    check_implication_axioms,
    check_morphism,
    classify,
    compose_morphisms,
    derive_arrow,
    identity_morphism,
    nabla_from_strong,
    tables_equal,
)
from .congruence import (
    Congruence,
    ModalFilter,
    Verdict,
    all_congruences_oracle,
    all_modal_filters,
    check_congruence_extension,
    check_internal_cong_inequalities,
    congruence_from_filter,
    filter_from_congruence,
    is_congruence,
    is_modal_filter,
    is_simple,
    is_subdirectly_irreducible,
    modal_filter_closure,
)
from .completion import (
    CompletedAlgebra,
    NormalIdeal,
    dm_complete,
    is_normal_ideal,
    lu_closure,
    normal_ideals,
)
from .kripke import (
    FrameMorphism,
    FrameProfile,
    KripkeFrame,
    amalgamate_algebras,
    amalgamate_frames,
    build_frame,
    canonical_frame_embedding,
    check_frame_morphism,
    compose_frame_morphisms,
    frame_profile,
    frames_equal,
    inverse_image_morphism,
    prime_frame,
    prime_inverse_morphism,
    upset_algebra,
)
from .gallery import (
    enumerate_algebras,
    gen_counterexample_cex3,
    gen_heyting,
    gen_trivial,
    gen_xn,
)

__all__ = [name for name in dir() if not name.startswith("_")]
