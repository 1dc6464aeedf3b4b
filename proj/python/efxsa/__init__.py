"""EFX allocations by simulated annealing.

Allocations are lists of 0-based agent indices, one entry per good.
"""

from ._efxsa import (
    Instance,
    ParseError,
    SearchCapExceeded,
    allocation_from_json,
    allocation_to_json,
    anneal_solve,
    bench,
    brute_force_efx,
    count_violations,
    delta_violations,
    descent_solve,
    gen_correlated,
    gen_identical,
    gen_uniform,
    is_efx,
    list_violations,
    n_plus_one_pick,
    round_robin,
    welfare_max_allocation,
)

__all__ = [
    "Instance",
    "ParseError",
    "SearchCapExceeded",
    "allocation_from_json",
    "allocation_to_json",
    "anneal_solve",
    "bench",
    "brute_force_efx",
    "count_violations",
    "delta_violations",
    "descent_solve",
    "gen_correlated",
    "gen_identical",
    "gen_uniform",
    "is_efx",
    "list_violations",
    "n_plus_one_pick",
    "round_robin",
    "welfare_max_allocation",
]
