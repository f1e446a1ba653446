"""Exact symbolic calculus for finite-order invariants of surface
immersions in 3-space: the decorated CE-symbol alphabet, the universal
coefficient group, torsion power-series structures, the universal series
map with its finite-difference operator, and checkers for the defining
relations and membership restrictions."""

from .symbols import (
    CEType,
    DecoratedSymbol,
    SymbolTuple,
    YMembership,
    format_symbol,
    membership,
    parse_symbol,
    parse_tuple,
    repetition_of_tuple,
)
from .group_l1 import (
    AVariable,
    L1Element,
    YCombination,
    decompose,
    expand_to_y,
    format_l1,
    g_u1,
    l1_add,
    parse_l1,
    parse_ycombination,
)
from .series_kernel import (
    MonomialClass,
    SeriesM,
    ZetaClass,
    class_mul,
    embed_l_to_m,
    format_series,
    k_action,
    l1_to_series,
    mul_l,
    parse_series,
    project_degree,
    repetition,
    series_add,
    series_scale,
    zeta_order,
)
from .universal_series import (
    FPrimeInput,
    check_lowest_term,
    f_on_k1,
    f_on_l1,
    f_on_s,
    f_prime,
    f_un_evaluate,
    g_un,
    l1_product_embedded,
    signed_subset_sum,
)
from .classification import (
    AssignmentTable,
    CoefficientGroup,
    GroupVector,
    check_delta_relations,
    check_en,
    collapse_check,
    default_context_pool,
    extend,
    format_assignment_table,
    parse_assignment_table,
    parse_group_vector,
    series_presentation,
    series_to_vector,
    universal_table,
    y_pool,
)

__version__ = "0.1.0"
