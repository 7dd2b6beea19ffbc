"""Finite-dimensional quantum linear algebra: states, channels, entropies."""

from qsr.qcore.channels import (
    PAULI,
    Channel,
    SubChannel,
    apply_channel,
    average_maps,
    choi_to_kraus,
    coherent_information,
    coherent_information_purified,
    complementary_channel,
    entanglement_fidelity,
    entanglement_fidelity_purified,
    entropy_exchange,
    sum_maps,
)
from qsr.qcore.inequalities import InequalityReport, MalformedInstance, inequality_oracle
from qsr.qcore.linalg import (
    DimensionError,
    Subspace,
    binary_entropy,
    coherent_information_state,
    density_operator,
    fidelity,
    hs_norm,
    ket,
    maximally_entangled,
    maximally_mixed,
    mutual_information,
    operator_norm,
    partial_trace,
    permute_subsystems,
    projector,
    pure_vector,
    purify,
    shannon_entropy,
    tensor,
    tensor_subspaces,
    trace_norm,
    von_neumann_entropy,
)
from qsr.qcore.povm import Povm

__all__ = [
    "PAULI",
    "Channel",
    "DimensionError",
    "InequalityReport",
    "MalformedInstance",
    "Povm",
    "SubChannel",
    "Subspace",
    "apply_channel",
    "average_maps",
    "binary_entropy",
    "choi_to_kraus",
    "coherent_information",
    "coherent_information_purified",
    "coherent_information_state",
    "complementary_channel",
    "density_operator",
    "entanglement_fidelity",
    "entanglement_fidelity_purified",
    "entropy_exchange",
    "fidelity",
    "hs_norm",
    "inequality_oracle",
    "ket",
    "maximally_entangled",
    "maximally_mixed",
    "mutual_information",
    "operator_norm",
    "partial_trace",
    "permute_subsystems",
    "projector",
    "pure_vector",
    "purify",
    "shannon_entropy",
    "sum_maps",
    "tensor",
    "tensor_subspaces",
    "trace_norm",
    "von_neumann_entropy",
]
