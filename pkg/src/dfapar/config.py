"""Default resource budgets.

``DFAPAR_MEM_BUDGET_MB`` overrides the memory budget used to derive the
product-exploration cap.
"""

import os

MEM_BUDGET_MB = int(os.environ.get("DFAPAR_MEM_BUDGET_MB", "512"))

# n^2 pair nodes; the reachability matrix then has (n^2)^2 = 2^32 bits (512 MB packed)
MAX_PAIR_NODES = 2**16

# letters * states of the doubled alphabet built for trans_pr
MAX_CLOSURE_TRANSITIONS = 2**31

# bytes per explored product pair: two state ids, parent, letter, hash slot at 50% load
PRODUCT_BYTES_PER_PAIR = 36


def product_state_cap(mem_budget_mb: int | None = None) -> int:
    mb = MEM_BUDGET_MB if mem_budget_mb is None else mem_budget_mb
    return max(1, mb * 2**20 // PRODUCT_BYTES_PER_PAIR)


def pair_node_cap(mem_budget_mb: int | None = None) -> int:
    """Largest pair-node count whose packed reachability matrix fits the budget."""
    if mem_budget_mb is None:
        return MAX_PAIR_NODES
    bits = mem_budget_mb * 2**20 * 8
    return max(1, int(bits**0.5))
