"""Python bindings for the krylab Krylov-basis audit laboratory."""

from ._krylab import (
    KrylovForm,
    check_inclusion,
    compression_defect,
    enorm,
    evaluate_candidate,
    fip_audit,
    graph_norm,
    grid_oracle,
    in_A,
    in_B,
    in_F,
    is_positive,
    operator_norm,
    orthonormalize,
    penalty,
    run_audit,
    search,
    spectrum,
    witness,
)

__all__ = [
    "KrylovForm",
    "check_inclusion",
    "compression_defect",
    "enorm",
    "evaluate_candidate",
    "fip_audit",
    "graph_norm",
    "grid_oracle",
    "in_A",
    "in_B",
    "in_F",
    "is_positive",
    "operator_norm",
    "orthonormalize",
    "penalty",
    "run_audit",
    "search",
    "spectrum",
    "witness",
]
