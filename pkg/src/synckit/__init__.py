"""Synchrony analysis for weighted coupled cell networks."""

from .errors import SynckitError
from .monoid import IntegerAdd, Monoid, MonoidFamily, TropicalMin, Weight, is_zero, monoid_add, monoid_by_name
from .network import Network, export_dot, load_network, network_to_doc, parse_network, row_color_sum, save_network
from .partition import (
    Partition,
    format_partition,
    join,
    meet,
    parse_partition,
    partition_matrix,
    quotient_partition,
    refines,
)
from .connectivity import (
    Condensation,
    all_in_reachability,
    condensation,
    cumulative_in,
    cumulative_in_k,
    in_neighborhood,
    in_reachability,
    rdc_decomposition,
    scc_decomposition,
)
from .synchrony import (
    BalancedCertificate,
    BalancedLattice,
    cir_balanced,
    enumerate_balanced,
    is_balanced,
    is_exo_balanced,
    lattice_meet,
    lattice_quotient,
    quotient_network,
    type_refining_partitions,
)
from .classification import (
    ColorClass,
    N_IN,
    NeighborhoodKind,
    R_IN,
    V_IN,
    classify_color,
    classify_partition,
    is_invariant,
    is_matched,
    join_table_report,
    quotient_class_report,
    top_nonweak,
    top_strong,
    v_in_k,
)
from .dynamics import (
    AdmissibleFunctionSpec,
    Trajectory,
    check_invariance,
    check_locality,
    check_quotient_consistency,
    check_subsystem,
    evolve,
    probe_non_invariance,
    sample_admissible,
)

__version__ = "0.1.0"
