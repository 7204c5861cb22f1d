"""Exact computations on the Takagi function and its level sets."""

from .core_numbers import (
    BalanceSet,
    BinExp,
    DomainError,
    ResourceError,
    Variant,
    balance_set,
    binexp_of_rational,
    deficient_digit,
    digit_profile,
    parse_binexp,
    parse_rat,
    rational_of_binexp,
)
from .local_levels import (
    blocks,
    enumerate_members,
    equivalent,
    flip_block,
    infinite_level_family,
    level_half_family,
    local_level_set,
)
from .omega_structure import (
    Direction,
    cover_measure_bound,
    enumerate_breakpoints,
    enumerate_gap_intervals,
    in_omega_L,
    monotone_approximants,
    project_omega_L,
)
from .singular_bv import (
    TAU_L,
    TAU_S,
    coarea_integral,
    flattened_takagi,
    local_level_count_estimate,
    sample_pl,
    takagi_singular,
    tau_partial,
    total_variation,
    upper_set_perimeter,
)
from .takagi_eval import takagi_exact, takagi_partial, takagi_series
