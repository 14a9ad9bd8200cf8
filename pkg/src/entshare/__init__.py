"""Simulation and verification of entanglement sharing over noisy channels."""

__version__ = "0.1.0"

from .qcore import (
    DensityMatrix,
    KrausChannel,
    SchmidtDecomposition,
    StateVector,
    apply_channel,
    channel_superoperator,
    entanglement_fidelity,
    fidelity,
    ginibre_density,
    haar_state,
    haar_unitary,
    kron,
    overlap,
    partial_trace,
    partial_transpose,
    permute_subsystems,
    schmidt_decompose,
    trace_distance,
)
from .states import (
    IsotropicParams,
    bell_pair,
    generalized_bell,
    ghz,
    interleave_permutation,
    isotropic,
)
from .twirl import twirl_exact, twirl_sampled
from .teleport import (
    WeylPair,
    bell_basis,
    depolarizing_channel,
    share_sequential,
    teleport_channel,
    teleport_fidelity,
    teleport_subsystems,
    weyl_pair,
)
from .csscode import (
    CssCode,
    LinearCode,
    SyndromeTable,
    decode,
    load_code_pair,
    parse_code_pair,
    steane_css,
    syndrome,
    validate_css,
)
from .purify import (
    PauliChannelSpec,
    PauliErrorPattern,
    ProtocolOutcome,
    PurificationReport,
    apply_hadamard_mask,
    estimate,
    exact_logical_success_rate,
    exact_pass_rate,
    run_protocol,
    sample_pattern,
    wilson_interval,
)
from .bounds import (
    BoundReport,
    entanglement_fidelity_bound,
    ghz_pipeline_fidelity,
    maximally_entangled_bound,
    multipartite_sharing_bound,
    relaxed_entanglement_fidelity_bound,
    shared_pair_fidelity_bound,
    teleport_overlap_bound,
    verify,
)
