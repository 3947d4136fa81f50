"""Tropical moduli of curves, piecewise polynomials on cone stacks and gluing checks."""
from .cohft import (
    AxiomReport,
    CohFTSpec,
    Envelope,
    check_loop_axiom,
    check_minimality,
    check_separating_gluing,
    check_sn_equivariance,
    check_unit_axioms,
    constant_spec,
    dr_spec,
    table_spec,
)
from .cones import (
    Cone,
    ConeComplex,
    Subdivision,
    common_refinement,
    extend_subdivision,
    preimage_subdivision,
    star_subdivision,
)
from .div import (
    check_div_gluing_square,
    div_cone,
    enumerate_balanced_slopes,
    glue_node_monoid,
    glue_pl_functions,
    restrict_glued,
)
from .fanchow import chow_ring, logch_probe, pp_dimensions
from .graphs import (
    StableGraph,
    canonical_form,
    contract_edges,
    enumerate_stable_graphs,
    forget_leg,
    glue_graphs,
    glue_loop,
    validate_graph,
)
from .moduli import (
    build_moduli,
    forgetful_morphism,
    gluing_morphism,
    loop_gluing_morphism,
    product_stack,
)
from .polynomial import Polynomial
from .pp import (
    PPClass,
    boundary_class,
    dr_polynomial,
    exp_truncated,
    exterior_product,
    length_class,
    pullback,
)

__version__ = "0.1.0"

__all__ = [
    "chow_ring",
    "logch_probe",
    "pp_dimensions",
    "AxiomReport",
    "CohFTSpec",
    "Cone",
    "ConeComplex",
    "Envelope",
    "PPClass",
    "Polynomial",
    "StableGraph",
    "Subdivision",
    "boundary_class",
    "build_moduli",
    "canonical_form",
    "check_div_gluing_square",
    "check_loop_axiom",
    "check_minimality",
    "check_separating_gluing",
    "check_sn_equivariance",
    "check_unit_axioms",
    "common_refinement",
    "constant_spec",
    "contract_edges",
    "div_cone",
    "dr_polynomial",
    "dr_spec",
    "enumerate_balanced_slopes",
    "enumerate_stable_graphs",
    "exp_truncated",
    "extend_subdivision",
    "exterior_product",
    "forget_leg",
    "forgetful_morphism",
    "glue_graphs",
    "glue_loop",
    "glue_node_monoid",
    "glue_pl_functions",
    "gluing_morphism",
    "length_class",
    "loop_gluing_morphism",
    "preimage_subdivision",
    "product_stack",
    "pullback",
    "restrict_glued",
    "star_subdivision",
    "table_spec",
    "validate_graph",
]
