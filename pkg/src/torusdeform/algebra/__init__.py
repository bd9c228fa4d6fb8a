"""Group expressions, wreath-type products, homomorphisms and exactness."""

from .expr import (
    Atom,
    CentralQuotient,
    Cyclic,
    FiniteGroupTable,
    FreeAbelian,
    GroupExpr,
    Product,
    ScaledZ,
    Trivial,
    WrCyc,
    WrCycPair,
    WrZ,
    WrZ2,
    canonical,
    central_quotient,
    check_shape,
    elements_equal,
    enumerate_truncated,
    formal_generator,
    free_rank,
    generators,
    identity,
    in_window,
    invert,
    is_central,
    iter_window,
    multiply,
    power,
    product,
    random_element,
    window_size,
)
from .grammar import (
    format_element,
    format_expr,
    parse_element,
    parse_expr,
)
from .hom import (
    ExactnessReport,
    Homomorphism,
    Include,
    IncludePair,
    LeafMap,
    ModReduce,
    Project,
    Rule,
    ZeroOuterEmbed,
    check_exact,
    hom_apply,
    make_atom_maps,
)
from .smith import (
    as_torus_fraction,
    smith_basis,
    smith_pair,
    snf_diagonal,
    subgroup_elements,
)

__all__ = [
    "Atom", "CentralQuotient", "Cyclic", "FiniteGroupTable", "FreeAbelian",
    "GroupExpr", "Product", "ScaledZ", "Trivial", "WrCyc", "WrCycPair",
    "WrZ", "WrZ2", "canonical", "central_quotient", "check_shape",
    "elements_equal", "enumerate_truncated", "formal_generator", "free_rank",
    "generators", "identity", "in_window", "invert", "is_central",
    "iter_window", "multiply", "power", "product", "random_element",
    "window_size", "format_element", "format_expr", "parse_element",
    "parse_expr", "ExactnessReport", "Homomorphism", "Include",
    "IncludePair", "LeafMap", "ModReduce", "Project", "Rule",
    "ZeroOuterEmbed", "check_exact", "hom_apply", "make_atom_maps",
    "as_torus_fraction", "smith_basis", "smith_pair", "snf_diagonal",
    "subgroup_elements",
]
