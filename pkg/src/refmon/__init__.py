"""Finite refinement monoids: deciders, structure triples, building-block
certificates and small-submonoid approximation."""

from .approx import ApproximationCertificate, approximate, naive_restriction, verify_certificate
from .errors import *  # noqa: F401,F403
from .groups import (
    FiniteAbelianGroup,
    Subgroup,
    all_subgroups,
    cyclic_decomposition,
    is_pure,
    pure_complement,
    purity_witness,
    subgroup_generated,
)
from .limits import (
    DirectSystemSeq,
    RetractCertificate,
    blocks_retract,
    cone_factorisations,
    factor_through,
    finite_rep_retract,
    identity_certificate,
    limit_system,
    nz_group_retract,
    order_unit_normalize,
    unit_residues,
    verify_order_restriction,
)
from .monoid import (
    BlockSumDescriptor,
    FiniteCommutativeMonoid,
    MonoidHom,
    block_sum,
    building_block,
    direct_sum,
    element_order,
    find_isomorphism,
    find_refinement,
    has_refinement,
    hom_kernel,
    is_conical,
    make_hom,
    nz_of_group,
    property_report,
    refinement_failure,
    trivial_monoid,
    validate_monoid,
)
from .regular import (
    GeneralizedInteger,
    StructureTriple,
    Verdict,
    characterize_refinement,
    check_emb,
    check_mvp,
    check_pur,
    decompose_regular,
    in_rep,
    realize_from_triple,
    rep_report,
    restrict_orders,
    semilattice_of_subgroups,
    structure_triple,
    triple_family,
)
from .semilattice import (
    FiniteSemilattice,
    boolean_lattice,
    chain,
    diamond,
    ideals,
    is_distributive,
    join_irreducibles,
    pentagon,
    semilattice_from_order,
    sublattice_generated,
)

__version__ = "0.1.0"
