"""Spectral certificates for edge-disjoint spanning-tree packings with an
extra constrained forest, cross-checked against exact combinatorial oracles.
"""

from .certify import (
    CertificateReport,
    CertificateRequest,
    CrossCheck,
    THEOREM_IDS,
    certify,
    check_cut_lower_bound,
    check_lemma_small_cut,
)
from .connectivity import (
    GtWitness,
    edge_connectivity,
    gt_membership,
    min_cut_sides,
    validate_gt_witness,
)
from .errors import ParseError, ToolError
from .graphs import (
    Graph,
    build_graph,
    components,
    cut_size,
    is_connected,
    parse_edge_list,
    parse_graph,
    parse_graph6,
    serialize_edge_list,
)
from .harness import (
    ExperimentConfig,
    ExperimentReport,
    FamilySpec,
    Lemma41Fixture,
    default_config,
    generate,
    lemma41_gadget_fixture,
    run_experiment,
)
from .packing import (
    FractionalPackingResult,
    PackingWitness,
    PkdSearchResult,
    lemma41_decompose,
    nu_f_exact,
    pack_spanning_trees,
    search_pkd_witness,
    spanning_forest,
    tau_packing,
    tau_partition_bruteforce,
    verify_pkd_witness,
)
from .quotient import (
    CutProfile,
    QuotientMatrix,
    check_interlacing,
    check_weyl,
    cut_profile,
    quotient_laplacian,
)
from .spectra import (
    SpectralProfile,
    SymmetricMatrix,
    build_matrix,
    spectral_profile,
    sym_eigenvalues,
)

__all__ = [name for name in dir() if not name.startswith("_")]
